"""Identity registry, verification engine and randomized sweeps."""

from .registry import Backend, Identity, Manifest, all_identities, get_identity
from .verify import FAIL, ERROR, PASS, IdentityCase, VerificationReport, verify

__all__ = [
    "Backend", "Identity", "Manifest", "all_identities", "get_identity",
    "IdentityCase", "VerificationReport", "verify", "PASS", "FAIL", "ERROR",
]
