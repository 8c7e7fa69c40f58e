"""The registered identities.

Each class builds the two sides of one identity independently: left-hand
sides are summed from their defining series or q-integrals, right-hand sides
come from the closed forms.  Numeric left-hand series carry a-priori tail
bounds where a simple majorant exists; q-integrals and the outer series of
the integral identities use the empirical geometric policy of ``qcore``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Sequence

from ..errors import ConstraintViolated
from ..expand import PdePair, extract_lambdas, reconstruct
from ..fps import (
    TruncatedSeries,
    euler_pochhammer_series,
    series_invert,
    series_qpartial,
    series_qshift,
)
from ..qcore import (
    Certified,
    EvalContext,
    abs_product_lower,
    abs_product_upper,
    binomial_geometric_tail,
    certified_sum,
    empirical_geometric_sum,
    qpoch_finite,
    qpoch_infinite,
    qpoch_recip,
)
from ..qfunc import HyperSpec, PhiSpec, QPow, phi_eval, phi_series, rogers_szego, rphis_eval, \
    rphis_series
from ..qint import (
    CachedIntegrand,
    Moment,
    ProductIntegrand,
    QIntegral,
    jackson_integral,
    phi_qint_representation,
    rhs_alsalam_verma,
    rhs_andrews_askey,
    rhs_liu_qint,
    rhs_wang_moment,
    rs_qint_representation,
)
from .registry import Backend, Constraint, Identity, Param, Setting, modulus_lt, register

F = Fraction
BOTH = (Backend.EXACT_FPS, Backend.NUMERIC)
EXACT = (Backend.EXACT_FPS,)
NUMERIC = (Backend.NUMERIC,)


def _get(name: str) -> Callable[[dict], Fraction]:
    return lambda b: b[name]


def _prod_of(*names: str) -> Callable[[dict], Fraction]:
    def f(b):
        out = F(1)
        for n in names:
            out *= b[n]
        return out
    return f


def _q_lt_1() -> Constraint:
    return modulus_lt("|q| < 1", _get("q"))


def _distinct(a: str, b: str) -> Constraint:
    return Constraint(f"{a} != {b}", lambda bnd: bnd[a] != bnd[b])


def _indexed(prefixes: Sequence[str], k: int, bound, **kw) -> List[Param]:
    return [Param(f"{p}{j}", F(bound), **kw) for j in range(1, k + 1) for p in prefixes]


def _lift(ctx: EvalContext, x) -> Certified:
    return Certified(ctx.num(x), 0)


def _ratio(ctx, numer, denom) -> Certified:
    out = Certified(ctx.mp.mpf(1), 0)
    for c in numer:
        out = out * qpoch_infinite(c, ctx)
    for c in denom:
        out = out / qpoch_infinite(c, ctx)
    return out


def _sup_poch_over_qq(ctx, a):
    """``sup_n |(a;q)_n / (q;q)_n|`` is at most ``(-|a|;|q|)_inf / (|q|;|q|)_inf``."""
    return abs_product_upper(a, ctx) / abs_product_lower(ctx.qn, ctx)


class _Convolution:
    """Coefficients of the product of power series given term by term.

    ``self[N]`` is ``sum_{n_1 + ... + n_r = N} prod_j seq_j(n_j)``; the
    sequences are sampled in increasing index order and never re-evaluated.
    """

    def __init__(self, seqs: Sequence[Callable[[int], object]], zero):
        self.seqs = list(seqs)
        self.vals = [[] for _ in self.seqs]
        self.part = [[] for _ in self.seqs]
        self.zero = zero

    def __getitem__(self, N: int):
        while len(self.part[-1]) <= N:
            n = len(self.part[-1])
            for j, f in enumerate(self.seqs):
                self.vals[j].append(f(n))
            self.part[0].append(self.vals[0][n])
            for j in range(1, len(self.seqs)):
                prev, cur = self.part[j - 1], self.vals[j]
                acc = self.zero
                for m in range(n + 1):
                    acc = acc + prev[m] * cur[n - m]
                self.part[j].append(acc)
        return self.part[-1][N]


def _qq_list(ctx):
    """Lazily extended list of ``(q;q)_n``."""
    q = ctx.qn
    vals = [ctx.mp.mpf(1)]

    def get(n):
        while len(vals) <= n:
            i = len(vals)
            vals.append(vals[-1] * (1 - q ** i))
        return vals[n]
    return get


# ---------------------------------------------------------------------------
# exact polynomial and series identities


@register
class PdePhi(Identity):
    id = "pde-phi"
    description = "Phi_n satisfies d_x(1 - beta eta_y) Phi = d_y(1 - alpha eta_x) Phi"
    anchors = ("q-PDE satisfied by the homogeneous polynomials Phi_n^(alpha,beta)(x,y|q)",)
    backends = EXACT
    settings = {"n": Setting(4, 0, 40)}

    def params(self, case):
        return [Param("q", F(1), nonzero=True), Param("alpha", F(2)), Param("beta", F(2))]

    def constraints(self, case):
        return [_q_lt_1()]

    def exact(self, case):
        b = case.binding
        n = self.setting(case, "n")
        q = b["q"]
        phi = phi_series(PhiSpec(n, b["alpha"], b["beta"]), "x", "y", q, n + 1)
        lhs = series_qpartial(phi - series_qshift(phi, "y", q).scale(b["beta"]), "x", q)
        rhs = series_qpartial(phi - series_qshift(phi, "x", q).scale(b["alpha"]), "y", q)
        return lhs, rhs, {}


def _genfun_factor_series(coeffs_num, coeffs_den, var, q, order, vars):
    """``prod (c t;q)_inf / prod (d t;q)_inf`` as an exact series in ``var``."""
    out = TruncatedSeries.constant(vars, order)
    for c in coeffs_num:
        out = out * euler_pochhammer_series(c, var, q, order, vars)
    for c in coeffs_den:
        out = out * series_invert(euler_pochhammer_series(c, var, q, order, vars))
    return out


@register
class ExpansionRoundtrip(Identity):
    id = "expansion-roundtrip"
    description = ("prod_j (a_j t_j x_j, b_j t_j y_j)_inf/(t_j x_j, t_j y_j)_inf: Phi-coefficients "
                   "extracted and re-expanded exactly; coefficients equal prod t_j^n_j/(q;q)_n_j")
    anchors = ("expansion theorem: solutions of the q-PDE system are Phi-product expansions",
               "coefficient extraction by restricting x_j = 0")
    backends = EXACT
    settings = {"k": Setting(1, 1, 3)}
    default_order = 10

    def params(self, case):
        k = self.setting(case, "k")
        return [Param("q", F(3, 4), nonzero=True)] + \
            [p for j in range(1, k + 1) for p in (
                Param(f"t{j}", F(1), nonzero=True), Param(f"a{j}", F(1)), Param(f"b{j}", F(1)))]

    def constraints(self, case):
        return [_q_lt_1()]

    def build_input(self, case):
        b = case.binding
        k = self.setting(case, "k")
        order = case.order or self.default_order
        q = b["q"]
        vars = tuple(v for j in range(1, k + 1) for v in (f"x{j}", f"y{j}"))
        f = TruncatedSeries.constant(vars, order)
        pairs = []
        for j in range(1, k + 1):
            t, a, bb = b[f"t{j}"], b[f"a{j}"], b[f"b{j}"]
            f = f * _genfun_factor_series([a * t], [t], f"x{j}", q, order, vars)
            f = f * _genfun_factor_series([bb * t], [t], f"y{j}", q, order, vars)
            pairs.append(PdePair(f"x{j}", f"y{j}", a, bb))
        return f, pairs, vars, order

    def exact(self, case):
        b = case.binding
        q = b["q"]
        f, pairs, vars, order = self.build_input(case)
        res = extract_lambdas(f, pairs, q)
        rebuilt = reconstruct(res, pairs, q, order, vars)
        k = len(pairs)
        expected = {}

        def walk(prefix, room):
            if len(prefix) == k:
                val = F(1)
                for j, n in enumerate(prefix, start=1):
                    val *= b[f"t{j}"] ** n * qpoch_recip(q, q, n)
                expected[prefix] = val
                return
            for n in range(room + 1):
                walk(prefix + (n,), room - n)

        walk((), order)
        bad = sorted(i for i in set(expected) | set(res.lambdas)
                     if expected.get(i, 0) != res.lambdas.get(i, 0))
        return f, rebuilt, {
            "lambda_mismatches": len(bad),
            "extra_mismatches": len(bad),
            "lambdas_checked": len(expected),
        }


def _genfun_params(case, extra: Sequence[Param]) -> List[Param]:
    ps = [Param("q", F(3, 4), nonzero=True), Param("a", F(1)), Param("b", F(1)),
          Param("x", F(1)), Param("y", F(1))] + list(extra)
    if case.backend is Backend.NUMERIC:
        ps.append(Param("t", F(1, 2), nonzero=True))
    return ps


def _genfun_constraints(case) -> List[Constraint]:
    out = [_q_lt_1()]
    if case.backend is Backend.NUMERIC:
        out.append(modulus_lt("max{|xt|, |yt|} < 1", _prod_of("x", "t"), _prod_of("y", "t")))
    return out


def _phi_lhs_numeric(ctx, b, coefficient, start_power, bound_const):
    """Sum ``coefficient(n) * Phi_{n+m}(x,y) t^(n+m)`` with a majorant tail.

    ``|Phi_N / (q;q)_N| <= A_a A_b (N+1) X^N`` with ``X = max(|x|, |y|)``;
    ``bound_const`` absorbs every other n-independent factor.
    """
    q = ctx.qn
    x, y, t = (ctx.num(b[v]) for v in ("x", "y", "t"))
    spec = (ctx.num(b["a"]), ctx.num(b["b"]))
    R = max(abs(x), abs(y)) * abs(t)
    K = bound_const * _sup_poch_over_qq(ctx, b["a"]) * _sup_poch_over_qq(ctx, b["b"])
    m = start_power

    def term(n):
        N = n + m
        return coefficient(n) * phi_eval(PhiSpec(N, *spec), x, y, q) * t ** N

    def tail(n):
        bound = binomial_geometric_tail(n + m, 2, R, ctx)
        return None if bound is None else K * bound

    return certified_sum(term, tail, ctx)


@register
class GenfunBasic(Identity):
    id = "genfun-basic"
    description = "sum_n Phi_n(x,y) t^n/(q;q)_n = (axt, byt)_inf/(xt, yt)_inf"
    anchors = ("generating function of Phi_n^(a,b)(x,y|q) from two q-binomial theorems",)
    backends = BOTH

    def params(self, case):
        return _genfun_params(case, [])

    def constraints(self, case):
        return _genfun_constraints(case)

    def exact(self, case):
        b = case.binding
        q, order = b["q"], case.order or self.default_order
        vars = ("t",)
        lhs = TruncatedSeries(vars, order, {
            (n,): phi_eval(PhiSpec(n, b["a"], b["b"]), b["x"], b["y"], q) / qpoch_finite(q, q, n)
            for n in range(order + 1)})
        rhs = _genfun_factor_series([b["a"] * b["x"], b["b"] * b["y"]], [b["x"], b["y"]],
                                    "t", q, order, vars)
        return lhs, rhs, {}

    def numeric(self, case, ctx):
        b = case.binding
        qq = _qq_list(ctx)
        lhs = _phi_lhs_numeric(ctx, b, lambda n: 1 / qq(n), 0, 1)
        x, y, t = (ctx.num(b[v]) for v in ("x", "y", "t"))
        a, bb = ctx.num(b["a"]), ctx.num(b["b"])
        rhs = _ratio(ctx, [a * x * t, bb * y * t], [x * t, y * t])
        return lhs, rhs, {"lhs_terms": lhs.terms}


@register
class GenfunShifted(Identity):
    id = "genfun-shifted"
    description = ("sum_n Phi_{n+m}(x,y) t^(n+m)/(q;q)_n = (axt, byt)_inf/(xt, yt)_inf "
                   "3phi2(q^-m, xt, yt; axt, byt; q, q)")
    anchors = ("shifted generating function of Phi_{n+m} with a terminating 3phi2",)
    backends = BOTH
    settings = {"m": Setting(1, 0, 12)}

    def params(self, case):
        return _genfun_params(case, [])

    def constraints(self, case):
        return _genfun_constraints(case)

    def exact(self, case):
        b = case.binding
        q, order = b["q"], case.order or self.default_order
        m = self.setting(case, "m")
        vars = ("t",)
        # 1/(q;q)_{N-m} vanishes for N < m
        lhs = TruncatedSeries(vars, order, {
            (N,): phi_eval(PhiSpec(N, b["a"], b["b"]), b["x"], b["y"], q) * qpoch_recip(q, q, N - m)
            for N in range(order + 1)})
        t = TruncatedSeries.variable(vars, order, "t")
        pref = _genfun_factor_series([b["a"] * b["x"], b["b"] * b["y"]], [b["x"], b["y"]],
                                     "t", q, order, vars)
        phi32 = rphis_series([QPow(-m), t.scale(b["x"]), t.scale(b["y"])],
                             [t.scale(b["a"] * b["x"]), t.scale(b["b"] * b["y"])],
                             q, q, vars, order)
        return lhs, pref * phi32, {}

    def numeric(self, case, ctx):
        b = case.binding
        m = self.setting(case, "m")
        qq = _qq_list(ctx)
        # |Phi_N/(q;q)_n| = |Phi_N/(q;q)_N| |(q;q)_N/(q;q)_n| and the last factor is <= (1 + |q|)^m
        lhs = _phi_lhs_numeric(ctx, b, lambda n: 1 / qq(n), m, (1 + abs(ctx.qn)) ** m)
        x, y, t = (ctx.num(b[v]) for v in ("x", "y", "t"))
        a, bb = ctx.num(b["a"]), ctx.num(b["b"])
        pref = _ratio(ctx, [a * x * t, bb * y * t], [x * t, y * t])
        phi = rphis_eval(HyperSpec([QPow(-m), x * t, y * t], [a * x * t, bb * y * t], ctx.qn),
                         ctx.qn, ctx)
        return lhs, pref * phi, {"lhs_terms": lhs.terms, "rhs_3phi2_terms": phi.terms}


def _poly_in_Q_falling(x, q, order, vars):
    """``(x t; q)_k`` as a series in (t, Q) with ``Q = q^k`` symbolic.

    ``(x t;q)_k = sum_j [k, j]_q q^(j(j-1)/2) (-x t)^j`` and
    ``[k, j]_q = prod_{i<j} (1 - Q q^-i) / (q;q)_j``.
    """
    one = TruncatedSeries.constant(vars, order)
    Q = TruncatedSeries.variable(vars, order, "Q")
    t = TruncatedSeries.variable(vars, order, "t")
    out = one
    gauss = one
    tj = one
    for j in range(1, order // 2 + 1):
        gauss = (gauss * (one - Q.scale(q ** (1 - j)))).scale(1 / (1 - q ** j))
        tj = tj * t
        out = out + gauss * tj.scale((-x) ** j * q ** (j * (j - 1) // 2))
    return out


def _poly_in_Q_inverse(x, q, order, vars):
    """``1/(x t; q)_k = sum_j (Q;q)_j/(q;q)_j (x t)^j`` with ``Q = q^k``."""
    one = TruncatedSeries.constant(vars, order)
    Q = TruncatedSeries.variable(vars, order, "Q")
    t = TruncatedSeries.variable(vars, order, "t")
    out = one
    w = one
    tj = one
    for j in range(1, order // 2 + 1):
        w = (w * (one - Q.scale(q ** (j - 1)))).scale(1 / (1 - q ** j))
        tj = tj * t
        out = out + w * tj.scale(F(x) ** j)
    return out


@register
class GenfunSaalschutz(Identity):
    id = "genfun-saalschutz"
    description = ("sum_n (c;q)_n Phi_n(x,y) t^n/(q, ab;q)_n = (c, axt, byt)_inf/(ab, xt, yt)_inf "
                   "3phi2(d, xt, yt; axt, byt; q, c) with cd = ab")
    anchors = ("generating function with (c;q)_n/(ab;q)_n weights under cd = ab",)
    backends = BOTH

    def params(self, case):
        return _genfun_params(case, [Param("c", F(1), nonzero=True), Param("d", F(4))])

    def constraints(self, case):
        return _genfun_constraints(case) + [
            modulus_lt("max{|c|, |ab|} < 1", _get("c"), _prod_of("a", "b")),
            Constraint("cd = ab", lambda b: b["c"] * b["d"] == b["a"] * b["b"]),
        ]

    def derive(self, binding, case):
        binding["d"] = binding["a"] * binding["b"] / binding["c"]
        return binding

    def exact(self, case):
        b = case.binding
        q, order = b["q"], case.order or self.default_order
        a, bb, c, x, y = b["a"], b["b"], b["c"], b["x"], b["y"]
        if c * b["d"] != a * bb:
            raise ConstraintViolated("the exact backend needs cd = ab")
        vars = ("t",)
        lhs = TruncatedSeries(vars, order, {
            (n,): qpoch_finite(c, q, n) * phi_eval(PhiSpec(n, a, bb), x, y, q)
            / (qpoch_finite(q, q, n) * qpoch_finite(a * bb, q, n))
            for n in range(order + 1)})
        # The 3phi2 sum over k is carried symbolically through Q = q^k; the
        # q-binomial theorem turns c^k (d;q)_k/(q;q)_k Q^j, summed over k and
        # multiplied by (c;q)_inf/(ab;q)_inf, into (c;q)_j/(ab;q)_j when cd = ab.
        wide = ("t", "Q")
        o2 = 2 * order
        body = (_poly_in_Q_falling(x, q, o2, wide) * _poly_in_Q_falling(y, q, o2, wide)
                * _poly_in_Q_inverse(a * x, q, o2, wide) * _poly_in_Q_inverse(bb * y, q, o2, wide))
        body = body.map_powers("Q", lambda j: qpoch_finite(c, q, j) / qpoch_finite(a * bb, q, j))
        body = TruncatedSeries(vars, order, {(i[0],): v for i, v in body.coeffs.items()})
        pref = _genfun_factor_series([a * x, bb * y], [x, y], "t", q, order, vars)
        return lhs, pref * body, {}

    def numeric(self, case, ctx):
        b = case.binding
        a, bb, c, d, x, y, t = (ctx.num(b[v]) for v in ("a", "b", "c", "d", "x", "y", "t"))
        qq = _qq_list(ctx)
        cn = [ctx.mp.mpf(1)]
        abn = [ctx.mp.mpf(1)]

        def coeff(n):
            while len(cn) <= n:
                i = len(cn) - 1
                cn.append(cn[-1] * (1 - c * ctx.qn ** i))
                abn.append(abn[-1] * (1 - a * bb * ctx.qn ** i))
            return cn[n] / (qq(n) * abn[n])

        K = abs_product_upper(c, ctx) / abs_product_lower(a * bb, ctx)
        lhs = _phi_lhs_numeric(ctx, b, coeff, 0, K)
        pref = _ratio(ctx, [c, a * x * t, bb * y * t], [a * bb, x * t, y * t])
        phi = rphis_eval(HyperSpec([d, x * t, y * t], [a * x * t, bb * y * t], c), ctx.qn, ctx)
        return lhs, pref * phi, {"lhs_terms": lhs.terms, "rhs_3phi2_terms": phi.terms}


# ---------------------------------------------------------------------------
# q-Lauricella transformations


def _lauricella_lhs(ctx, a, c, seqs, d, K, R):
    """``sum_N (a;q)_N/(c;q)_N E_N`` with ``E`` the convolution of ``seqs``.

    ``|E_N| <= K C(N+d-1, d-1) R^N`` and ``|(a;q)_N/(c;q)_N|`` is bounded by
    ``(-|a|;|q|)_inf/(|c|;|q|)_inf``.
    """
    q = ctx.qn
    E = _Convolution(seqs, ctx.mp.mpf(0))
    ratio = [ctx.mp.mpf(1)]
    Kt = K * abs_product_upper(a, ctx) / abs_product_lower(c, ctx)

    def term(N):
        while len(ratio) <= N:
            i = len(ratio) - 1
            ratio.append(ratio[-1] * (1 - a * q ** i) / (1 - c * q ** i))
        return ratio[N] * E[N]

    def tail(N):
        bound = binomial_geometric_tail(N, d, R, ctx)
        return None if bound is None else Kt * bound

    return certified_sum(term, tail, ctx)


def _poch_power_seq(ctx, beta, y):
    """``n -> (beta;q)_n y^n / (q;q)_n`` sampled in increasing n."""
    q = ctx.qn
    vals = [ctx.mp.mpf(1)]

    def get(n):
        while len(vals) <= n:
            i = len(vals) - 1
            vals.append(vals[-1] * (1 - beta * q ** i) * y / (1 - q ** (i + 1)))
        return vals[n]
    return get


@register
class AndrewsLauricella(Identity):
    id = "andrews-lauricella"
    description = ("sum (a)_|n| prod (beta_j)_n_j y_j^n_j / ((c)_|n| prod (q)_n_j) = "
                   "(a, beta_j y_j)_inf/(c, y_j)_inf (k+1)phi(k)(c/a, y_j; beta_j y_j; q, a)")
    anchors = ("Andrews' transformation of the q-Lauricella function",)
    backends = NUMERIC
    settings = {"k": Setting(2, 1, 4)}

    def params(self, case):
        k = self.setting(case, "k")
        r = F(7, 10)
        return [Param("q", r, nonzero=True), Param("a", r, nonzero=True), Param("c", r)] + \
            _indexed(("beta", "y"), k, r)

    def constraints(self, case):
        k = self.setting(case, "k")
        return [_q_lt_1(), modulus_lt(
            "max{|a|, |c|, |y_j|} < 1", _get("a"), _get("c"),
            *[_get(f"y{j}") for j in range(1, k + 1)])]

    def numeric(self, case, ctx):
        b = case.binding
        k = self.setting(case, "k")
        a, c = ctx.num(b["a"]), ctx.num(b["c"])
        betas = [ctx.num(b[f"beta{j}"]) for j in range(1, k + 1)]
        ys = [ctx.num(b[f"y{j}"]) for j in range(1, k + 1)]
        K = ctx.mp.mpf(1)
        for beta in betas:
            K *= _sup_poch_over_qq(ctx, beta)
        R = max(abs(y) for y in ys)
        lhs = _lauricella_lhs(ctx, a, c, [_poch_power_seq(ctx, be, y) for be, y in zip(betas, ys)],
                              k, K, R)
        pref = _ratio(ctx, [a] + [be * y for be, y in zip(betas, ys)], [c] + ys)
        phi = rphis_eval(HyperSpec([c / a] + ys, [be * y for be, y in zip(betas, ys)], a),
                         ctx.qn, ctx)
        return lhs, pref * phi, {"lhs_terms": lhs.terms, "rhs_phi_terms": phi.terms}


def _phi_over_qq_seq(ctx, alpha, beta, x, y):
    """``n -> Phi_n^(alpha,beta)(x, y|q) / (q;q)_n``.

    Since ``[n,k]_q / (q;q)_n = 1 / ((q;q)_k (q;q)_{n-k})`` this is the Cauchy
    product of ``(alpha;q)_k x^k/(q;q)_k`` and ``(beta;q)_j y^j/(q;q)_j``,
    which costs O(n) per index instead of rebuilding each polynomial.
    """
    conv = _Convolution([_poch_power_seq(ctx, alpha, x), _poch_power_seq(ctx, beta, y)],
                        ctx.mp.mpf(0))
    return conv.__getitem__


@register
class LiuLauricella(Identity):
    id = "liu-lauricella"
    description = ("sum (a)_|n| prod Phi_n_j(x_j, y_j) / ((c)_|n| prod (q)_n_j) = "
                   "(a, alpha_j x_j, beta_j y_j)_inf/(c, x_j, y_j)_inf "
                   "(2k+1)phi(2k)(c/a, x_j, y_j; alpha_j x_j, beta_j y_j; q, a)")
    anchors = ("extension of Andrews' q-Lauricella transformation to Phi polynomials",)
    backends = NUMERIC
    settings = {"k": Setting(2, 1, 3)}

    def params(self, case):
        k = self.setting(case, "k")
        r = F(7, 10)
        return [Param("q", r, nonzero=True), Param("a", r, nonzero=True), Param("c", r)] + \
            _indexed(("alpha", "beta", "x", "y"), k, r)

    def constraints(self, case):
        k = self.setting(case, "k")
        return [_q_lt_1(), modulus_lt(
            "max{|a|, |c|, |x_j|, |y_j|} < 1", _get("a"), _get("c"),
            *[_get(f"{p}{j}") for j in range(1, k + 1) for p in ("x", "y")])]

    def numeric(self, case, ctx):
        b = case.binding
        k = self.setting(case, "k")
        a, c = ctx.num(b["a"]), ctx.num(b["c"])
        js = range(1, k + 1)
        al = [ctx.num(b[f"alpha{j}"]) for j in js]
        be = [ctx.num(b[f"beta{j}"]) for j in js]
        xs = [ctx.num(b[f"x{j}"]) for j in js]
        ys = [ctx.num(b[f"y{j}"]) for j in js]
        K = ctx.mp.mpf(1)
        for j in range(k):
            K *= _sup_poch_over_qq(ctx, al[j]) * _sup_poch_over_qq(ctx, be[j])
        R = max(abs(v) for v in xs + ys)
        seqs = [_phi_over_qq_seq(ctx, al[j], be[j], xs[j], ys[j]) for j in range(k)]
        lhs = _lauricella_lhs(ctx, a, c, seqs, 2 * k, K, R)
        lower = [v for j in range(k) for v in (al[j] * xs[j], be[j] * ys[j])]
        upper = [v for j in range(k) for v in (xs[j], ys[j])]
        pref = _ratio(ctx, [a] + lower, [c] + upper)
        phi = rphis_eval(HyperSpec([c / a] + upper, lower, a), ctx.qn, ctx)
        return lhs, pref * phi, {"lhs_terms": lhs.terms, "rhs_phi_terms": phi.terms}


# ---------------------------------------------------------------------------
# q-integral identities


class _QIntIdentity(Identity):
    backends = NUMERIC
    tolerance_offset = 25


@register
class AlSalamVerma(_QIntIdentity):
    id = "alsalam-verma"
    description = ("int_x^y (qz/x, qz/y, abcz)_inf/(az/y, bz/x, cz)_inf d_qz = "
                   "(1-q) y (q, x/y, qy/x, ab, acx, bcy)_inf/(ax/y, by/x, a, b, cx, cy)_inf")
    anchors = ("Al-Salam-Verma q-integral form of Sears' nonterminating q-Saalschutz sum",)

    def params(self, case):
        return [Param("q", F(3, 4), nonzero=True), Param("x", F(1), nonzero=True),
                Param("y", F(1), nonzero=True), Param("a", F(1)), Param("b", F(1)),
                Param("c", F(1))]

    def constraints(self, case):
        return [_q_lt_1(), _distinct("x", "y"), modulus_lt(
            "max{|a|, |b|, |cx|, |cy|, |ax/y|, |by/x|} < 1",
            _get("a"), _get("b"), _prod_of("c", "x"), _prod_of("c", "y"),
            lambda b: b["a"] * b["x"] / b["y"], lambda b: b["b"] * b["y"] / b["x"])]

    def numeric(self, case, ctx):
        x, y, a, b, c = (ctx.num(case.binding[v]) for v in ("x", "y", "a", "b", "c"))
        q = ctx.qn
        f = ProductIntegrand(ctx, numer=[q / x, q / y, a * b * c], denom=[a / y, b / x, c])
        lhs = jackson_integral(QIntegral(f, x, y, ctx))
        rhs = rhs_alsalam_verma(x, y, a, b, c, q, ctx)
        return lhs, rhs, {"lhs_grid_terms": lhs.terms}


@register
class PhiQintRep(_QIntIdentity):
    id = "phi-qint-rep"
    description = "Phi_n^(a,b)(x,y|q) equals its q-integral representation over [x, y]"
    anchors = ("q-integral representation of Phi_k^(a,b)(x,y|q)",)
    settings = {"n": Setting(3, 0, 12)}

    def params(self, case):
        return [Param("q", F(3, 4), nonzero=True), Param("a", F(1)), Param("b", F(1)),
                Param("x", F(1), nonzero=True), Param("y", F(1), nonzero=True)]

    def constraints(self, case):
        return [_q_lt_1(), _distinct("x", "y")]

    def numeric(self, case, ctx):
        b = case.binding
        n = self.setting(case, "n")
        lhs = _lift(ctx, phi_eval(PhiSpec(n, b["a"], b["b"]), b["x"], b["y"], b["q"]))
        rhs = phi_qint_representation(n, b["a"], b["b"], b["x"], b["y"], b["q"], ctx)
        return lhs, rhs, {"rhs_grid_terms": rhs.terms}


@register
class RsQintRep(_QIntIdentity):
    id = "rs-qint-rep"
    description = "h_n(x,y|q) = int_x^y (qz/x, qz/y)_inf z^n d_qz / ((1-q) y (q, x/y, qy/x)_inf)"
    anchors = ("q-integral representation of the homogeneous Rogers-Szego polynomials",)
    settings = {"n": Setting(3, 0, 12)}

    def params(self, case):
        return [Param("q", F(3, 4), nonzero=True), Param("x", F(1), nonzero=True),
                Param("y", F(1), nonzero=True)]

    def constraints(self, case):
        return [_q_lt_1(), _distinct("x", "y")]

    def numeric(self, case, ctx):
        b = case.binding
        n = self.setting(case, "n")
        lhs = _lift(ctx, rogers_szego(n, b["x"], b["y"], b["q"]))
        rhs = rs_qint_representation(n, b["x"], b["y"], b["q"], ctx)
        return lhs, rhs, {"rhs_grid_terms": rhs.terms}


def _multilinear_lhs(ctx, base, x, y, k, b, power_offset=0):
    """``sum_N C_N int_x^y z^(N + offset) base(z) d_qz`` with ``C`` the Phi convolution."""
    js = range(1, k + 1)
    seqs = [_phi_over_qq_seq(ctx, ctx.num(b[f"alpha{j}"]), ctx.num(b[f"beta{j}"]),
                             ctx.num(b[f"u{j}"]), ctx.num(b[f"v{j}"])) for j in js]
    C = _Convolution(seqs, ctx.mp.mpf(0))
    g = CachedIntegrand(base)
    grid = [0]

    def term(N):
        coeff = C[N]
        if coeff == 0:
            return Certified(ctx.mp.mpf(0), 0)
        moment = jackson_integral(QIntegral(Moment(g, N + power_offset), x, y, ctx))
        grid[0] = max(grid[0], moment.terms)
        return moment * coeff

    s = empirical_geometric_sum(term, ctx)
    return s, grid[0]


def _multilinear_params(k, with_ab):
    ps = [Param("q", F(3, 4), nonzero=True), Param("x", F(1), nonzero=True),
          Param("y", F(1), nonzero=True)]
    if with_ab:
        ps += [Param("a", F(1)), Param("b", F(1)), Param("t", F(1)), Param("gamma", F(2))]
    return ps + _indexed(("alpha", "beta"), k, 1) + _indexed(("u", "v"), k, F(2, 5))


def _multilinear_constraints(k, with_t):
    exprs = []
    for j in range(1, k + 1):
        for p in ("x", "y"):
            for s in ("u", "v"):
                exprs.append(_prod_of(p, f"{s}{j}"))
    label = "max_j{|xu_j|, |xv_j|, |yu_j|, |yv_j|} < 1"
    if with_t:
        exprs += [_prod_of("x", "t"), _prod_of("y", "t")]
        label = "max_j{|xt|, |yt|, |xu_j|, |xv_j|, |yu_j|, |yv_j|} < 1"
    return [_q_lt_1(), _distinct("x", "y"), modulus_lt(label, *exprs)]


@register
class MultilinearQint(_QIntIdentity):
    id = "multilinear-qint"
    description = ("sum_n prod Phi_n_j(u_j, v_j)/(q)_n_j int_x^y z^|n| (qz/x, qz/y, gamma z t)_inf/"
                   "(bz/x, az/y, zt)_inf d_qz = int_x^y of the full product integrand")
    anchors = ("multilinear generating function of Phi_n with q-integral coefficients",)
    settings = {"k": Setting(1, 1, 3)}

    def params(self, case):
        return _multilinear_params(self.setting(case, "k"), True)

    def constraints(self, case):
        return _multilinear_constraints(self.setting(case, "k"), True)

    def numeric(self, case, ctx):
        b = case.binding
        k = self.setting(case, "k")
        q = ctx.qn
        x, y, a, bb, t, gamma = (ctx.num(b[v]) for v in ("x", "y", "a", "b", "t", "gamma"))
        numer = [q / x, q / y, gamma * t]
        denom = [bb / x, a / y, t]
        base = ProductIntegrand(ctx, numer=numer, denom=denom)
        lhs, grid = _multilinear_lhs(ctx, base, x, y, k, b)
        for j in range(1, k + 1):
            u, v = ctx.num(b[f"u{j}"]), ctx.num(b[f"v{j}"])
            numer += [ctx.num(b[f"alpha{j}"]) * u, ctx.num(b[f"beta{j}"]) * v]
            denom += [u, v]
        rhs = jackson_integral(QIntegral(ProductIntegrand(ctx, numer, denom), x, y, ctx))
        return lhs, rhs, {"lhs_outer_terms": lhs.terms, "lhs_grid_terms": grid,
                          "rhs_grid_terms": rhs.terms}


@register
class MultilinearQintM(_QIntIdentity):
    id = "multilinear-qint-m"
    description = ("sum_n prod Phi_n_j(u_j, v_j)/(q)_n_j int_x^y z^(m+|n|) (qz/x, qz/y)_inf d_qz = "
                   "int_x^y z^m (qz/x, qz/y, alpha_j u_j z, beta_j v_j z)_inf/(z u_j, z v_j)_inf d_qz")
    anchors = ("t^m coefficient form of the multilinear generating function at a = b = 0",)
    settings = {"k": Setting(1, 1, 3), "m": Setting(2, 0, 12)}

    def params(self, case):
        return _multilinear_params(self.setting(case, "k"), False)

    def constraints(self, case):
        return _multilinear_constraints(self.setting(case, "k"), False)

    def numeric(self, case, ctx):
        b = case.binding
        k = self.setting(case, "k")
        m = self.setting(case, "m")
        q = ctx.qn
        x, y = ctx.num(b["x"]), ctx.num(b["y"])
        base = ProductIntegrand(ctx, numer=[q / x, q / y])
        lhs, grid = _multilinear_lhs(ctx, base, x, y, k, b, power_offset=m)
        numer, denom = [q / x, q / y], []
        for j in range(1, k + 1):
            u, v = ctx.num(b[f"u{j}"]), ctx.num(b[f"v{j}"])
            numer += [ctx.num(b[f"alpha{j}"]) * u, ctx.num(b[f"beta{j}"]) * v]
            denom += [u, v]
        f = ProductIntegrand(ctx, numer, denom, power=m)
        rhs = jackson_integral(QIntegral(f, x, y, ctx))
        return lhs, rhs, {"lhs_outer_terms": lhs.terms, "lhs_grid_terms": grid,
                          "rhs_grid_terms": rhs.terms}


def _askey_params(extra=()):
    return [Param("q", F(3, 4), nonzero=True), Param("u", F(1), nonzero=True),
            Param("v", F(1), nonzero=True), Param("c", F(1)), Param("d", F(1))] + list(extra)


def _askey_constraints():
    return [_q_lt_1(), _distinct("u", "v")]


@register
class AndrewsAskey(_QIntIdentity):
    id = "andrews-askey"
    description = ("int_u^v (qx/u, qx/v)_inf/(cx, dx)_inf d_qx = "
                   "(1-q) v (q, u/v, qv/u, cduv)_inf/(cu, cv, du, dv)_inf")
    anchors = ("Andrews-Askey q-beta integral",)

    def params(self, case):
        return _askey_params()

    def constraints(self, case):
        return _askey_constraints()

    def numeric(self, case, ctx):
        u, v, c, d = (ctx.num(case.binding[s]) for s in ("u", "v", "c", "d"))
        q = ctx.qn
        f = ProductIntegrand(ctx, numer=[q / u, q / v], denom=[c, d])
        lhs = jackson_integral(QIntegral(f, u, v, ctx))
        rhs = rhs_andrews_askey(u, v, c, d, q, ctx)
        return lhs, rhs, {"lhs_grid_terms": lhs.terms}


@register
class WangMoment(_QIntIdentity):
    id = "wang-moment"
    description = ("int_u^v x^n (qx/u, qx/v)_inf/(cx, dx)_inf d_qx = Andrews-Askey product times "
                   "sum_j [n,j] (cv, dv)_j/(cduv)_j u^j v^(n-j)")
    anchors = ("moment formula for the Andrews-Askey integrand (q-Leibniz rule)",)
    settings = {"n": Setting(3, 0, 16)}

    def params(self, case):
        return _askey_params()

    def constraints(self, case):
        return _askey_constraints()

    def numeric(self, case, ctx):
        u, v, c, d = (ctx.num(case.binding[s]) for s in ("u", "v", "c", "d"))
        n = self.setting(case, "n")
        q = ctx.qn
        f = ProductIntegrand(ctx, numer=[q / u, q / v], denom=[c, d], power=n)
        lhs = jackson_integral(QIntegral(f, u, v, ctx))
        rhs = rhs_wang_moment(u, v, c, d, n, q, ctx)
        return lhs, rhs, {"lhs_grid_terms": lhs.terms}


@register
class LiuQint(_QIntIdentity):
    id = "liu-qint"
    description = ("int_u^v (qx/u, qx/v, alpha a x, beta b x)_inf/(ax, bx, cx, dx)_inf d_qx = "
                   "Andrews-Askey product times sum_n Phi_n(a, b)/(q)_n * moment sum")
    anchors = ("q-integral expanded in Phi_n^(alpha,beta)(a,b|q)",)

    def params(self, case):
        return _askey_params([Param("a", F(1, 2)), Param("b", F(1, 2)),
                              Param("alpha", F(1)), Param("beta", F(1))])

    def constraints(self, case):
        return _askey_constraints()

    def numeric(self, case, ctx):
        bd = case.binding
        u, v, a, b, c, d, al, be = (ctx.num(bd[s]) for s in
                                    ("u", "v", "a", "b", "c", "d", "alpha", "beta"))
        q = ctx.qn
        f = ProductIntegrand(ctx, numer=[q / u, q / v, al * a, be * b], denom=[a, b, c, d])
        lhs = jackson_integral(QIntegral(f, u, v, ctx))
        rhs = rhs_liu_qint(u, v, a, b, c, d, al, be, q, ctx)
        return lhs, rhs, {"lhs_grid_terms": lhs.terms, "rhs_outer_terms": rhs.terms}
