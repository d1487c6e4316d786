"""Boyd-Kleinman focusing and the single-pass SHG coupling strength.

All quantities are SI. The fundamental angular frequency is derived from the
vacuum wavelength, never stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants
from scipy.integrate import quad
from scipy.optimize import minimize, minimize_scalar

C = constants.c
EPS0 = constants.epsilon_0
HBAR = constants.hbar

H_RTOL = 1e-10


class FocusingError(RuntimeError):
    """Raised when a focusing optimization fails to converge."""


@dataclass(frozen=True)
class CrystalSpec:
    """Nonlinear crystal and pump geometry.

    d : effective nonlinearity (m/V)
    n1, n2 : refractive indices at the fundamental and harmonic
    lc : crystal length (m)
    lambda1 : fundamental vacuum wavelength (m)
    dk : phase mismatch 2k1 - k2 (1/m)
    w : fundamental waist, 1/e^2 intensity radius (m)
    """

    d: float
    n1: float
    n2: float
    lc: float
    lambda1: float
    dk: float = 0.0
    w: float = 21.1e-6

    def __post_init__(self):
        for name in ("d", "n1", "n2", "lc", "lambda1", "dk", "w"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.d < 0:
            raise ValueError("d must be non-negative")
        if self.lc <= 0 or self.w <= 0 or self.lambda1 <= 0:
            raise ValueError("lc, w and lambda1 must be positive")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("refractive indices must be >= 1")

    @property
    def omega1(self) -> float:
        return 2 * math.pi * C / self.lambda1

    @property
    def rayleigh_length(self) -> float:
        """Rayleigh length of the fundamental, pi n1 w^2 / lambda1."""
        return math.pi * self.n1 * self.w**2 / self.lambda1

    @property
    def focus(self) -> float:
        """Focusing parameter L_c / z_R1."""
        return self.lc / self.rayleigh_length

    def with_waist(self, w: float) -> "CrystalSpec":
        return replace(self, w=w)


# KNbO3 at 860 nm, 1 cm long, focused for maximum E_NL at zero mismatch
KNBO3 = CrystalSpec(d=11e-12, n1=2.2, n2=2.2, lc=1e-2, lambda1=860e-9, dk=0.0, w=21.1e-6)


@dataclass(frozen=True)
class CouplingResult:
    h: complex
    enl: float
    kappa_mag: float
    phi_h: float

    @property
    def kappa(self) -> complex:
        return self.kappa_mag * complex(math.cos(self.phi_h), math.sin(self.phi_h))


def boyd_kleinman_h(dk_lc: float, focus: float, rtol: float = H_RTOL) -> complex:
    """Focusing integral h for a waist centred in the crystal.

    ``dk_lc`` is the dimensionless mismatch and ``focus`` is L_c / z_R1.
    The integrand is folded onto [0, 1/2] so that the odd parts cancel
    exactly rather than to quadrature accuracy.
    """
    if not (math.isfinite(dk_lc) and math.isfinite(focus)):
        raise ValueError("dk_lc and focus must be finite")
    if focus < 0:
        raise ValueError("focus must be >= 0")

    def g(xi):
        return np.exp(1j * dk_lc * xi) / (1 + 1j * focus * xi)

    def re(xi):
        return (g(xi) + g(-xi)).real

    def im(xi):
        return (g(xi) + g(-xi)).imag

    opts = dict(epsabs=1e-15, epsrel=rtol, limit=200)
    h_re, _ = quad(re, 0.0, 0.5, **opts)
    h_im, _ = quad(im, 0.0, 0.5, **opts)
    return complex(h_re, h_im)


def _enl_prefactor(spec: CrystalSpec) -> float:
    w1 = spec.omega1
    return 2 * w1**2 * spec.d**2 / (EPS0 * C**3 * spec.n1**2 * spec.n2)


def compute_enl(spec: CrystalSpec) -> CouplingResult:
    """Single-pass conversion coefficient E_NL (1/W), coupling |kappa| and arg(h)."""
    h = boyd_kleinman_h(spec.dk * spec.lc, spec.focus)
    enl = _enl_prefactor(spec) * spec.lc**2 / (math.pi * spec.w**2) * abs(h) ** 2
    kappa_mag = math.sqrt(2 * spec.n1 * HBAR * spec.omega1 * enl / (spec.n2 * spec.lc**2))
    return CouplingResult(h=h, enl=enl, kappa_mag=kappa_mag, phi_h=math.atan2(h.imag, h.real))


def focusing_efficiency(dk_lc: float, focus: float) -> float:
    """|h|^2 L_c/z_R1, proportional to E_NL at fixed crystal length."""
    return abs(boyd_kleinman_h(dk_lc, focus)) ** 2 * focus


def optimal_waist(spec: CrystalSpec, fix_dk_zero: bool = True,
                  bounds: tuple[float, float] = (1e-6, 1e-3)) -> float:
    """Waist maximizing E_NL, by golden-section search on log(w).

    The waist of ``spec`` is ignored. With ``fix_dk_zero`` the mismatch is
    forced to zero, otherwise the spec's own ``dk`` is used.
    """
    dk = 0.0 if fix_dk_zero else spec.dk
    base = replace(spec, dk=dk)

    def neg_enl(logw):
        return -compute_enl(base.with_waist(math.exp(logw))).enl

    lo, hi = math.log(bounds[0]), math.log(bounds[1])
    # bracket the maximum on a coarse grid, golden-section inside it
    grid = np.linspace(lo, hi, 61)
    vals = [neg_enl(x) for x in grid]
    k = int(np.argmin(vals))
    if k == 0 or k == len(grid) - 1:
        raise FocusingError(f"E_NL maximum not bracketed in waist range {bounds}")
    res = minimize_scalar(neg_enl, bracket=(grid[k - 1], grid[k], grid[k + 1]),
                          method="golden", tol=1e-10)
    if not res.success:
        raise FocusingError(f"golden-section search failed: {res.message}")
    return math.exp(res.x)


def focusing_optimum(fix_dk_zero: bool = False) -> tuple[float, float, float]:
    """Location of the maximum of |h|^2 L_c/z_R1.

    Returns ``(dk_lc, zr_over_lc, efficiency)``. A coarse grid picks the basin
    and Nelder-Mead polishes it.
    """
    if fix_dk_zero:
        res = minimize_scalar(lambda f: -focusing_efficiency(0.0, f), bounds=(0.5, 20.0),
                              method="bounded", options={"xatol": 1e-10})
        if not res.success:
            raise FocusingError(res.message)
        return 0.0, 1.0 / res.x, -res.fun

    dks = np.linspace(0.0, 8.0, 17)
    fs = np.linspace(0.5, 20.0, 40)
    best = max(((focusing_efficiency(a, f), a, f) for a in dks for f in fs))
    res = minimize(lambda p: -focusing_efficiency(p[0], p[1]), x0=[best[1], best[2]],
                   method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 2000})
    if not res.success:
        raise FocusingError(res.message)
    dk_lc, f = res.x
    return float(dk_lc), float(1.0 / f), float(-res.fun)
