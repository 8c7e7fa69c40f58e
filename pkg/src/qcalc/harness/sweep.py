"""Seeded randomized sweeps over rational parameter domains."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np

from ..errors import QCalcError
from .registry import Backend, get_identity, sample_binding
from .verify import ERROR, IdentityCase, VerificationReport, verify


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per trial, so results do not depend on worker count."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _run_trial(args) -> VerificationReport:
    template, domain, seed, trial = args
    identity = get_identity(template.identity)
    base = IdentityCase(**{**template.__dict__, "seed": seed, "trial": trial})
    try:
        binding = sample_binding(identity, base, trial_rng(seed, trial), domain)
    except QCalcError as exc:
        return VerificationReport(base, ERROR, anchors=identity.anchors,
                                  cause=f"{type(exc).__name__}: {exc}")
    return verify(base.with_binding(binding))


def sweep(identity_id: str, trials: int, seed: int, domain: Optional[dict] = None,
          backend=None, workers: int = 1, **settings) -> List[VerificationReport]:
    """Run ``trials`` verifications on sampled bindings; reports come back in trial order."""
    identity = get_identity(identity_id)
    backend = Backend(backend) if backend is not None else identity.backends[-1]
    template = IdentityCase(identity_id, {}, backend=backend, **settings)
    jobs = [(template, domain, seed, t) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_trial, jobs))
    return [_run_trial(j) for j in jobs]


CSV_FIELDS = ("identity_id", "trial", "seed", "backend", "outcome", "max_rel_error",
              "certified_bound", "mismatches", "binding", "cause")


def reports_to_csv(reports: List[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        d = r.to_dict(volatile=False)
        w.writerow({
            "identity_id": d["identity_id"], "trial": d["trial"], "seed": d["seed"],
            "backend": d["backend"], "outcome": d["outcome"],
            "max_rel_error": d["metric"].get("max_rel_error", ""),
            "certified_bound": d["metric"].get("certified_bound", ""),
            "mismatches": d["metric"].get("mismatches", ""),
            "binding": " ".join(f"{k}={v}" for k, v in d["binding"].items()),
            "cause": d.get("cause", ""),
        })
    return buf.getvalue()
