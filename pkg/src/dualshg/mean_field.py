"""Classical steady state of the singly resonant dual-pass SHG cavity.

The intracavity fundamental is found from a scalar fixed point in
s = sqrt(eps1), where eps1 = P21/P_in is the harmonic fraction leaving after
the forward crystal pass.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.integrate import solve_ivp

from .coupling import C, HBAR, CrystalSpec, compute_enl

log = logging.getLogger(__name__)

DAMPING = 0.5
MAX_ITER = 200
STEP_TOL = 1e-14


class ConvergenceError(RuntimeError):
    """Fixed-point solve did not converge."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class UndefinedRatioError(ValueError):
    """Intensity ratio requested with no second harmonic output."""


@dataclass(frozen=True)
class CavitySpec:
    """Mirror transmittances T_ij (frequency i, mirror j), lumped losses L_ij
    (frequency i, loss port j), one-way air path ``la`` and the single-pass
    E_NL of the forward and backward crystal passes.

    ``n1``, ``n2`` and ``lc`` duplicate the crystal values needed for the
    propagation lengths and the free spectral ranges.
    """

    t11: float = 0.01
    t12: float = 0.0
    t21: float = 1.0
    t22: float = 1.0
    l13: float = 0.005
    l14: float = 0.005
    l23: float = 0.0
    l24: float = 0.0
    la: float = 0.04
    enl1: float = 0.015
    enl2: float = 0.015
    n1: float = 2.2
    n2: float = 2.2
    lc: float = 1e-2

    def __post_init__(self):
        for name in ("t11", "t12", "t21", "t22", "l13", "l14", "l23", "l24"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")
        for name in ("la", "enl1", "enl2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0")
        if self.n1 < 1 or self.n2 < 1 or self.lc <= 0:
            raise ValueError("invalid n1, n2 or lc")

    @classmethod
    def from_crystal(cls, crystal: CrystalSpec, **kw) -> "CavitySpec":
        """Cavity whose crystal passes share the E_NL computed for ``crystal``."""
        enl = compute_enl(crystal).enl
        kw.setdefault("enl1", enl)
        kw.setdefault("enl2", enl)
        return cls(n1=crystal.n1, n2=crystal.n2, lc=crystal.lc, **kw)

    @property
    def restricted(self) -> bool:
        """True for the harmonic-transparent, fundamental-only-loss layout
        (T21 = T22 = 1, L23 = L24 = 0, T12 = 0)."""
        return (self.t21 == 1.0 and self.t22 == 1.0 and self.l23 == 0.0
                and self.l24 == 0.0 and self.t12 == 0.0)

    def fsr(self, i: int) -> float:
        """Free spectral range nu_ci (1/s) for frequency index i = 1, 2."""
        n = self.n1 if i == 1 else self.n2
        return C / (2 * n * self.lc + 2 * self.la)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# Parameters of the dual-port example resonator used throughout
REFERENCE_CAVITY = CavitySpec()


@dataclass(frozen=True)
class OperatingPoint:
    p_in: float
    eps1: float
    eps2: float
    zeta1: float
    zeta2: float
    depletion: float


def _eps2(cavity: CavitySpec, eps1: float, p_in: float) -> float:
    if cavity.enl1 == 0:
        return 0.0
    dep = math.sqrt(eps1 * cavity.enl1 * p_in)
    return (cavity.enl2 / cavity.enl1 * (1 - cavity.t12) ** 2 * (1 - cavity.l13) ** 2
            * eps1 * (1 - dep) ** 2)


def conversion_map(cavity: CavitySpec, p_in: float, s: float) -> float:
    """Right-hand side of the sqrt(eps1) self-consistency equation."""
    eps1 = s * s
    eps2 = _eps2(cavity, eps1, p_in)
    r = math.sqrt(1 - cavity.t11) * math.sqrt(1 - cavity.t12)
    inner = (2 - cavity.l13 - cavity.l14 - math.sqrt(eps1 * cavity.enl1 * p_in)
             - math.sqrt(eps2 * cavity.enl2 * p_in))
    return 4 * cavity.t11 * math.sqrt(cavity.enl1 * p_in) / (2 - r * inner) ** 2


def _bisect(fn, lo, hi, tol=STEP_TOL, max_iter=200):
    flo = fn(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def solve_conversion(cavity: CavitySpec, p_in: float) -> OperatingPoint:
    """Steady-state conversion efficiencies and propagation lengths at pump ``p_in`` (W).

    Damped fixed-point iteration on sqrt(eps1), seeded with the undepleted
    value; falls back to bisection if the damped map fails to settle.
    """
    if not (math.isfinite(p_in) and p_in >= 0):
        raise ValueError(f"p_in must be finite and >= 0, got {p_in}")
    if p_in == 0 or cavity.enl1 == 0 or cavity.t11 == 0:
        return OperatingPoint(p_in, 0.0, 0.0, 0.0, 0.0, 0.0)

    F = lambda s: conversion_map(cavity, p_in, s)
    seed = F(0.0)
    s = seed
    converged = False
    for _ in range(MAX_ITER):
        s_new = (1 - DAMPING) * s + DAMPING * F(s)
        step = abs(s_new - s)
        s = s_new
        if step < STEP_TOL:
            converged = True
            break
    if not converged or abs(s - F(s)) > 1e-12:
        log.debug("damped iteration stalled at p_in=%g, bisecting", p_in)
        # s - F(s) is increasing; root lies in [0, F(0)]
        s = _bisect(lambda x: x - F(x), 0.0, seed)
    residual = abs(s - F(s))
    if residual > 1e-12:
        raise ConvergenceError(f"conversion fixed point failed at p_in={p_in}", residual)

    eps1 = s * s
    eps2 = _eps2(cavity, eps1, p_in)
    ratio = cavity.n1 / cavity.n2
    dep1 = math.sqrt(eps1 * cavity.enl1 * p_in)
    dep2 = math.sqrt(eps2 * cavity.enl2 * p_in)
    return OperatingPoint(p_in=p_in, eps1=eps1, eps2=eps2,
                          zeta1=math.sqrt(ratio * dep1), zeta2=math.sqrt(ratio * dep2),
                          depletion=dep1)


def intensity_ratio(op: OperatingPoint) -> float:
    """I1/I2 = eps1/eps2 for the two harmonic outputs."""
    if op.eps2 <= 0:
        raise UndefinedRatioError("eps2 = 0: no harmonic at output 2")
    return op.eps1 / op.eps2


def low_power_intensity_ratio(cavity: CavitySpec) -> float:
    """Limit of eps1/eps2 as the pump power goes to zero."""
    if cavity.enl2 == 0:
        raise UndefinedRatioError("enl2 = 0: no harmonic at output 2")
    return cavity.enl1 / (cavity.enl2 * (1 - cavity.t12) ** 2 * (1 - cavity.l13) ** 2)


@dataclass(frozen=True)
class PassResult:
    depletion: float
    conservation_error: float
    a1: np.ndarray
    a2: np.ndarray


def single_pass_ode(p_c: float, enl: float, n1: float, n2: float, lc: float,
                    lambda1: float, rtol: float = 1e-12) -> PassResult:
    """Integrate the phase-matched mean-field equations through one crystal.

    Fields are in photons/s (|A|^2 = P / hbar omega). Returns the fractional
    fundamental power lost and the worst relative drift of |A1|^2 + 2|A2|^2.
    """
    w1 = 2 * math.pi * C / lambda1
    kappa = math.sqrt(2 * n1 * HBAR * w1 * enl / (n2 * lc**2))
    a0 = math.sqrt(p_c / (HBAR * w1))

    def rhs(z, y):
        a1, a2 = y
        return [-kappa * a1 * a2, 0.5 * kappa * a1 * a1]

    sol = solve_ivp(rhs, (0.0, lc), [a0, 0.0], method="DOP853", rtol=rtol,
                    atol=rtol * a0 * 1e-3, dense_output=False, max_step=lc / 50)
    a1, a2 = sol.y
    flux = a1**2 + 2 * a2**2
    drift = float(np.max(np.abs(flux - a0**2)) / a0**2)
    return PassResult(depletion=float(1 - a1[-1] ** 2 / a0**2), conservation_error=drift,
                      a1=a1, a2=a2)
