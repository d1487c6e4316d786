"""Twin-beam intensity correlations, EPR inference products and the DGCZ
inseparability sum for a pair of harmonic outputs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import NoiseReport


@dataclass(frozen=True)
class TwinBeamResult:
    g_opt_plus: float
    g_opt_minus: float
    var_diff: float
    var_sum: float


@dataclass(frozen=True)
class EntanglementResult:
    g_x: float
    g_y: float
    v_epr: float
    v_dgcz: float


def intensity_variance(report: NoiseReport, ratio: float, g: float) -> float:
    """Normalized variance of I1 - g I2, with ``ratio`` = I1/I2."""
    i1, i2 = ratio, 1.0
    return ((i1 * report.s_x1 + g * g * i2 * report.s_x2 - g * math.sqrt(i1 * i2) * report.c_x)
            / (i1 + g * g * i2))


def twin_beam(report: NoiseReport, ratio: float) -> TwinBeamResult:
    """Optimal-gain intensity difference (g near +1) and sum (g near -1) noise.

    The two stationary gains have product -I1/I2, so one is positive and one
    negative; each branch is labelled by its sign.
    """
    if not (ratio > 0 and math.isfinite(ratio)):
        raise ValueError(f"intensity ratio must be positive and finite, got {ratio}")
    s1, s2, c = report.s_x1, report.s_x2, report.c_x
    scale = math.sqrt(ratio)
    if c == 0:
        g_plus, g_minus = scale, -scale
        return TwinBeamResult(g_plus, g_minus, intensity_variance(report, ratio, g_plus),
                              intensity_variance(report, ratio, g_minus))
    root = math.hypot(s1 - s2, c)
    u_a = (s1 - s2 + root) / c
    u_b = (s1 - s2 - root) / c
    # variance at a stationary point in the reduced gain u = g / sqrt(I1/I2)
    var = lambda u: s1 - 0.5 * c * u
    u_plus, u_minus = (u_a, u_b) if u_a > 0 else (u_b, u_a)
    return TwinBeamResult(g_opt_plus=scale * u_plus, g_opt_minus=scale * u_minus,
                          var_diff=var(u_plus), var_sum=var(u_minus))


def inference_variance(s1: float, s2: float, c: float, g: float) -> float:
    """<|X1 - g X2|^2> for spectra s1, s2 and correlation c."""
    return s1 + g * g * s2 - g * c


def epr_dgcz(report: NoiseReport) -> EntanglementResult:
    s_x1, s_y1, s_x2, s_y2, c_x, c_y = report.spectra()
    if s_x2 <= 0 or s_y2 <= 0:
        raise ValueError("output 2 spectra must be positive")
    g_x = c_x / (2 * s_x2)
    g_y = c_y / (2 * s_y2)
    v_epr = (s_x1 * s_x2 - c_x**2 / 4) * (s_y1 * s_y2 - c_y**2 / 4) / (s_x2 * s_y2)
    v_dgcz = (s_x1 + s_x2 + c_x + s_y1 + s_y2 - c_y) / 4
    return EntanglementResult(g_x=g_x, g_y=g_y, v_epr=v_epr, v_dgcz=v_dgcz)


def dgcz_scan(report: NoiseReport, a_values=None) -> tuple[float, float]:
    """Brute-force minimum over the DGCZ weight ``a``.

    Returns ``(a_best, v_best)`` where v is normalized like ``v_dgcz`` (so that
    a = 1 reproduces it exactly).
    """
    if a_values is None:
        a_values = np.linspace(0.5, 2.0, 1501)
    s_x1, s_y1, s_x2, s_y2, c_x, c_y = report.spectra()
    a = np.asarray(a_values, dtype=float)
    lhs = (a * a * (s_x1 + s_y1) + (s_x2 + s_y2) / (a * a) + c_x - c_y)
    v = lhs / (2 * (a * a + 1 / (a * a)))
    k = int(np.argmin(v))
    return float(a[k]), float(v[k])


@dataclass(frozen=True)
class MixedOutputs:
    """Spectra of the two 50/50 beamsplitter outputs a and b."""

    s_xa: float
    s_ya: float
    s_xb: float
    s_yb: float
    c_xab: float
    c_yab: float

    def as_report(self) -> NoiseReport:
        return NoiseReport(self.s_xa, self.s_ya, self.s_xb, self.s_yb, self.c_xab, self.c_yab)


def mix_on_beamsplitter(s_x1: float, s_y1: float, s_x2: float, s_y2: float) -> MixedOutputs:
    """Outputs of a 50/50 beamsplitter fed with independent beams 1 and 2,
    phased so that X_a = (X1 + Y2)/sqrt(2) and Y_a = (Y1 - X2)/sqrt(2)."""
    return MixedOutputs(
        s_xa=0.5 * (s_x1 + s_y2), s_xb=0.5 * (s_x1 + s_y2),
        s_ya=0.5 * (s_y1 + s_x2), s_yb=0.5 * (s_y1 + s_x2),
        c_xab=s_x1 - s_y2, c_yab=s_y1 - s_x2)


def beamsplitter_mix(source1: tuple[float, float], source2: tuple[float, float]) -> EntanglementResult:
    """EPR and DGCZ figures for two single-port sources mixed on a beamsplitter.

    Each source is given as ``(S_X, S_Y)``.
    """
    (s_x1, s_y1), (s_x2, s_y2) = source1, source2
    if min(s_x1, s_y1, s_x2, s_y2) <= 0:
        raise ValueError("spectra must be positive")
    return epr_dgcz(mix_on_beamsplitter(s_x1, s_y1, s_x2, s_y2).as_report())


def equal_source_vepr(s_x: float, s_y: float) -> float:
    """Closed-form inference product for two identical mixed sources."""
    return 4 * s_x**2 * s_y**2 / (s_x + s_y) ** 2


def equal_source_vepr_from_product(s_x: float, p: float) -> float:
    """Same as ``equal_source_vepr`` with S_Y eliminated via p = S_X S_Y."""
    return 4 * s_x**2 * p**2 / (s_x**2 + p) ** 2
