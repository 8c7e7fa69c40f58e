"""Independent brute-force reference implementations used only by the tests."""

from fractions import Fraction
from itertools import combinations


def poch(a, q, n):
    out = Fraction(1)
    for k in range(n):
        out *= 1 - Fraction(a) * Fraction(q) ** k
    return out


def qbinomial_subsets(n, k, q):
    """Gaussian binomial as a sum over k-subsets: q^(sum(S) - k(k-1)/2)."""
    if k < 0 or k > n:
        return Fraction(0)
    q = Fraction(q)
    shift = k * (k - 1) // 2
    return sum((q ** (sum(s) - shift) for s in combinations(range(n), k)), Fraction(0))


def phi_brute(n, alpha, beta, x, y, q):
    return sum((qbinomial_subsets(n, k, q) * poch(alpha, q, k) * poch(beta, q, n - k)
                * Fraction(x) ** k * Fraction(y) ** (n - k) for k in range(n + 1)), Fraction(0))


def dense_mul(a, b, order):
    """Univariate truncated product of coefficient lists."""
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        for j, y in enumerate(b[:order + 1 - i]):
            out[i + j] += x * y
    return out
