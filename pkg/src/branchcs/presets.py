"""Built-in solver defaults keyed by (model, N), plus the penalty heuristics."""

from __future__ import annotations

import math

from .admm import AdmmConfig

__all__ = ["admm_lambda", "pgd_lambda", "admm_defaults", "DEFAULT_SPARSITY_K"]

# Fitted so default_m reproduces the published HSC benchmark M column.
DEFAULT_SPARSITY_K = 126

# Per-(model, N) stepsize and stopping parameters used in the benchmark runs.
# d1/d2 are the exponents of the N^d tolerance scale factors.
_TABLE = {
    ("hsc", 64): dict(beta=0.08, d1=2, d2=5, eps_abs=1e-2, eps_rel=1e-3),
    ("hsc", 128): dict(beta=0.005, d1=2, d2=5, eps_abs=1e-2, eps_rel=1e-3),
    ("hsc", 256): dict(beta=0.08, d1=2, d2=5, eps_abs=1e-2, eps_rel=1e-3),
    ("hsc", 512): dict(beta=0.005, d1=2, d2=5, eps_abs=1e-2, eps_rel=1e-3),
    ("hsc", 1024): dict(beta=0.005, d1=2, d2=5, eps_abs=1e-3, eps_rel=1e-3),
    ("bds", 64): dict(beta=0.005, d1=2, d2=2, eps_abs=1e-3, eps_rel=1e-3),
    ("bds", 128): dict(beta=0.005, d1=2, d2=2, eps_abs=1e-3, eps_rel=1e-3),
    ("bds", 256): dict(beta=0.005, d1=2, d2=2, eps_abs=1e-3, eps_rel=1e-3),
    ("bds", 512): dict(beta=0.0005, d1=2, d2=2, eps_abs=1e-3, eps_rel=1e-3),
    ("bds", 1024): dict(beta=0.0005, d1=1, d2=1, eps_abs=1e-3, eps_rel=1e-3),
}

_FALLBACK = dict(beta=0.01, d1=2, d2=2, eps_abs=1e-3, eps_rel=1e-3)


def admm_lambda(m: int) -> float:
    """ADMM l1 penalty heuristic: 0.5 log M."""
    return 0.5 * math.log(m)


def pgd_lambda(kind: str, m: int) -> float:
    """PGD penalty heuristic: sqrt(log M) for HSC, log M for BDS."""
    return math.sqrt(math.log(m)) if kind == "hsc" else math.log(m)


def admm_defaults(kind: str, n: int, m: int, max_iter: int = 500, **overrides) -> AdmmConfig:
    """AdmmConfig from the defaults registry; keyword overrides win."""
    row = _TABLE.get((kind, n), _FALLBACK)
    params = dict(
        beta=row["beta"],
        lam=admm_lambda(m),
        eps_abs=row["eps_abs"],
        eps_rel=row["eps_rel"],
        d1_exp=row["d1"],
        d2_exp=row["d2"],
        max_iter=max_iter,
    )
    params.update({k: v for k, v in overrides.items() if v is not None})
    return AdmmConfig(**params)
