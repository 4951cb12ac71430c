"""Probability generating functions for the two-type HSC and BDS branching models.

The type-2 PGF has a closed form for both models; the type-1 PGF is the
solution of a backward Kolmogorov ODE driven by the type-2 solution.  All
functions accept arbitrary complex arguments with |s| <= 1; the Fourier grid
supplies points on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateRates, IntegrationFailure

__all__ = [
    "RatesHSC",
    "RatesBDS",
    "ModelSpec",
    "OdeConfig",
    "hsc_phi2",
    "hsc_phi1",
    "bds_phi01",
    "bds_phi10",
    "pgf",
    "pgf_many",
    "model_from_config",
]


def _check_rates(**rates):
    for name, value in rates.items():
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"rate {name} must be strictly positive and finite, got {value}")


@dataclass(frozen=True)
class RatesHSC:
    """Hematopoiesis rates: self-renewal, differentiation, progenitor death (per week)."""

    rho: float
    nu: float
    mu: float

    def __post_init__(self):
        _check_rates(rho=self.rho, nu=self.nu, mu=self.mu)


@dataclass(frozen=True)
class RatesBDS:
    """Birth-death-shift transposon rates (per year)."""

    gamma: float
    sigma: float
    delta: float

    def __post_init__(self):
        _check_rates(gamma=self.gamma, sigma=self.sigma, delta=self.delta)


@dataclass(frozen=True)
class ModelSpec:
    """A branching model, its elapsed time, and the initial state (j, k)."""

    kind: str  # "hsc" or "bds"
    rates: RatesHSC | RatesBDS
    t: float
    init: tuple[int, int]

    def __post_init__(self):
        if self.kind not in ("hsc", "bds"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "hsc" and not isinstance(self.rates, RatesHSC):
            raise ValueError("hsc model requires RatesHSC")
        if self.kind == "bds" and not isinstance(self.rates, RatesBDS):
            raise ValueError("bds model requires RatesBDS")
        if not self.t > 0:
            raise ValueError("t must be > 0")
        j, k = self.init
        if j < 0 or k < 0 or j + k < 1:
            raise ValueError("init must be non-negative with j + k >= 1")


@dataclass(frozen=True)
class OdeConfig:
    """Tolerances for the adaptive RK45 integrator."""

    rtol: float = 1e-10
    atol: float = 1e-10
    max_step: float = field(default=np.inf)


DEFAULT_ODE = OdeConfig()


def hsc_phi2(t: float, s2: complex, rates: RatesHSC) -> complex:
    """Type-2 (progenitor) PGF: pure death, closed form 1 + (s2 - 1) e^{-mu t}."""
    return 1.0 + (s2 - 1.0) * math.exp(-rates.mu * t)


def _integrate(rhs, t, y0, cfg: OdeConfig) -> np.ndarray:
    sol = solve_ivp(
        rhs,
        (0.0, t),
        y0,
        method="RK45",
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
    )
    if not sol.success:
        raise IntegrationFailure(sol.message)
    return sol.y[:, -1]


def _hsc_phi1_vec(t, s1, s2, rates: RatesHSC, cfg: OdeConfig) -> np.ndarray:
    s1 = np.atleast_1d(np.asarray(s1, dtype=complex))
    if t == 0:
        return s1.copy()
    rho, nu, mu = rates.rho, rates.nu, rates.mu

    def rhs(tau, phi):
        forcing = nu * (1.0 + (s2 - 1.0) * np.exp(-mu * tau))
        return rho * phi * phi - (rho + nu) * phi + forcing

    return _integrate(rhs, t, s1, cfg)


def hsc_phi1(t: float, s1: complex, s2: complex, rates: RatesHSC,
             ode_cfg: OdeConfig = DEFAULT_ODE) -> complex:
    """Type-1 (stem cell) PGF via the backward equation.

    Integrates dphi/dtau = rho phi^2 - (rho + nu) phi + nu phi2(tau) from
    phi(0) = s1, where phi2 is the closed-form type-2 solution.
    """
    return complex(_hsc_phi1_vec(t, s1, s2, rates, ode_cfg)[0])


def bds_phi01(t: float, s2: complex, rates: RatesBDS) -> complex:
    """PGF starting from one newly occupied location; closed form.

    Undefined at gamma == delta; returns the analytic limit 1 at s2 == 1.
    """
    g, d = rates.gamma, rates.delta
    if abs(g - d) < 1e-12:
        raise DegenerateRates("closed form requires gamma != delta")
    if abs(s2 - 1.0) < 1e-12:
        return 1.0 + 0.0j
    bracket = g / (d - g) + (1.0 / (s2 - 1.0) + g / (g - d)) * np.exp((d - g) * t)
    return 1.0 + 1.0 / bracket


def _bds_phi10_vec(t, s1, s2, rates: RatesBDS, cfg: OdeConfig) -> np.ndarray:
    s1 = np.atleast_1d(np.asarray(s1, dtype=complex))
    if t == 0:
        return s1.copy()
    g, sg, d = rates.gamma, rates.sigma, rates.delta
    total = g + sg + d

    def rhs(tau, phi):
        p01 = bds_phi01(tau, s2, rates)
        return g * phi * p01 + sg * p01 + d - total * phi

    return _integrate(rhs, t, s1, cfg)


def bds_phi10(t: float, s1: complex, s2: complex, rates: RatesBDS,
              ode_cfg: OdeConfig = DEFAULT_ODE) -> complex:
    """PGF starting from one initially occupied location, via the backward equation."""
    return complex(_bds_phi10_vec(t, s1, s2, rates, ode_cfg)[0])


def pgf_many(model: ModelSpec, s1, s2: complex,
             ode_cfg: OdeConfig = DEFAULT_ODE) -> np.ndarray:
    """PGF of the model at many s1 values sharing one s2.

    The type-1 ODEs for a fixed s2 differ only in their initial condition, so a
    whole grid column integrates as one vector-valued system.  Per particle
    independence phi_{jk} = phi1^j phi2^k.
    """
    s1 = np.atleast_1d(np.asarray(s1, dtype=complex))
    j, k = model.init
    t = model.t
    if model.kind == "hsc":
        p2 = hsc_phi2(t, s2, model.rates)
        p1 = _hsc_phi1_vec(t, s1, s2, model.rates, ode_cfg) if j else np.ones_like(s1)
    else:
        p2 = bds_phi01(t, s2, model.rates)
        p1 = _bds_phi10_vec(t, s1, s2, model.rates, ode_cfg) if j else np.ones_like(s1)
    return p1 ** j * p2 ** k


def pgf(model: ModelSpec, s1: complex, s2: complex,
        ode_cfg: OdeConfig = DEFAULT_ODE) -> complex:
    """phi_{jk}(t, s1, s2) for the model's initial state."""
    return complex(pgf_many(model, s1, s2, ode_cfg)[0])


def model_from_config(cfg: dict) -> ModelSpec:
    """Build a ModelSpec from the JSON config schema.

    Expected shape: {"model": "hsc"|"bds", "rates": {...}, "t": float,
    "init": [j, k]}.
    """
    kind = cfg["model"]
    raw = cfg["rates"]
    if kind == "hsc":
        rates = RatesHSC(rho=raw["rho"], nu=raw["nu"], mu=raw["mu"])
    elif kind == "bds":
        rates = RatesBDS(gamma=raw["gamma"], sigma=raw["sigma"], delta=raw["delta"])
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    j, k = cfg["init"]
    return ModelSpec(kind=kind, rates=rates, t=float(cfg["t"]), init=(int(j), int(k)))
