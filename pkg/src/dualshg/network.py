"""Self-consistent quantum noise of the dual-ported resonator.

Two independent routes to the harmonic output quadratures are kept:

* the general route assembles 4x4 mirror, loss and round-trip phase matrices
  and solves the intracavity resolvent for any transmittances and losses;
* the coefficient route evaluates the closed-form f, g, h, j coefficients
  valid for T21 = T22 = 1, L23 = L24 = 0, T12 = 0.

Vacuum inputs are stacked as 16 columns, four quadratures (u1j, u2j, v1j, v2j)
for each port j = 1..4. Every input has unit spectral density and inputs are
mutually uncorrelated, so a spectrum is the squared norm of a coefficient row.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .mean_field import CavitySpec, OperatingPoint
from .propagation import QuadTransfer, transfer_matrix

log = logging.getLogger(__name__)

COND_LIMIT = 1e12

# column of the stacked input vector holding u_ij / v_ij (frequency i, port j)
def _col(port: int, quad: int) -> int:
    return 4 * (port - 1) + quad


# noise sources in the order 11, 13, 14, 21, 22 (frequency, port)
SOURCES = [(1, 1), (1, 3), (1, 4), (2, 1), (2, 2)]
X_COLS = [_col(j, i - 1) for i, j in SOURCES]
Y_COLS = [_col(j, i + 1) for i, j in SOURCES]

# rows of an output quadrature vector (X1j, X2j, Y1j, Y2j)
HARM_X, HARM_Y = 1, 3


class SingularResolventError(np.linalg.LinAlgError):
    def __init__(self, cond):
        super().__init__(f"cavity resolvent is singular (condition number {cond:.3e})")
        self.cond = cond


class RestrictionError(ValueError):
    pass


def _diag(a: float, b: float) -> np.ndarray:
    return np.diag([a, b, a, b]).astype(complex)


@dataclass(frozen=True)
class NetworkMatrices:
    t1: np.ndarray
    t2: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    tl3: np.ndarray
    tl4: np.ndarray
    rl3: np.ndarray
    rl4: np.ndarray
    d: np.ndarray


def build_network(cavity: CavitySpec, omega: float = 0.0) -> NetworkMatrices:
    """Mirror, loss and round-trip phase matrices at sideband ``omega`` (rad/s)."""
    c = cavity
    s = math.sqrt
    ph1 = np.exp(1j * omega / c.fsr(1))
    ph2 = np.exp(1j * omega / c.fsr(2))
    return NetworkMatrices(
        t1=_diag(s(c.t11), s(c.t21)), r1=_diag(s(1 - c.t11), s(1 - c.t21)),
        t2=_diag(s(c.t12), s(c.t22)), r2=_diag(s(1 - c.t12), s(1 - c.t22)),
        tl3=_diag(s(1 - c.l13), s(1 - c.l23)), rl3=_diag(s(c.l13), s(c.l23)),
        tl4=_diag(s(1 - c.l14), s(1 - c.l24)), rl4=_diag(s(c.l14), s(c.l24)),
        d=np.diag([ph1, ph2, ph1, ph2]),
    )


def solve_intracavity(m: NetworkMatrices, n1: QuadTransfer, n2: QuadTransfer) -> np.ndarray:
    """4x16 map from the stacked vacuum inputs to the intracavity field right of mirror 1."""
    N1, N2 = n1.m, n2.m
    loop = m.r1 @ m.tl4 @ N2
    resolvent = np.eye(4) - m.d @ loop @ m.r2 @ m.tl3 @ N1
    cond = np.linalg.cond(resolvent)
    log.debug("resolvent condition number %.3e", cond)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularResolventError(cond)
    drive = m.d @ np.hstack([m.t1, loop @ m.t2, -loop @ m.r2 @ m.rl3, -m.r1 @ m.rl4])
    return np.linalg.solve(resolvent, drive)


def output_quadratures(x1: np.ndarray, m: NetworkMatrices, n1: QuadTransfer,
                       n2: QuadTransfer) -> tuple[np.ndarray, np.ndarray]:
    """Output quadrature maps (4x16 each) at mirror 2 and mirror 1."""
    N1, N2 = n1.m, n2.m
    zero = np.zeros((4, 4), complex)
    X1 = m.t2 @ m.tl3 @ N1 @ x1 + np.hstack([zero, -m.r2, -m.t2 @ m.rl3, zero])
    back = m.t1 @ m.tl4 @ N2
    X2 = back @ m.r2 @ m.tl3 @ N1 @ x1 + np.hstack(
        [-m.r1, back @ m.t2, -back @ m.r2 @ m.rl3, -m.t1 @ m.rl4])
    return X1, X2


@dataclass(frozen=True)
class OutputCoefficients:
    """Harmonic output coefficients on the sources (11, 13, 14, 21, 22).

    ``f``/``g`` give X21/Y21 at output 1, ``h``/``j`` give X22/Y22 at output 2.
    """

    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    j: np.ndarray
    F: complex
    G: complex


def output_coefficients(zeta1: float, zeta2: float, omega: float,
                        cavity: CavitySpec) -> OutputCoefficients:
    """Closed-form coefficients for the harmonic-transparent layout."""
    if not cavity.restricted:
        raise RestrictionError(
            "closed-form coefficients need T21 = T22 = 1, L23 = L24 = 0, T12 = 0; "
            "use the general network path (general_outputs) instead")
    a, b = transfer_matrix(zeta1), transfer_matrix(zeta2)
    e = np.exp(1j * omega / cavity.fsr(1))
    s = math.sqrt
    t, l3, l4 = cavity.t11, cavity.l13, cavity.l14
    r = s(1 - t) * s(1 - l3) * s(1 - l4)
    F = 1 - e * r * a[1, 1] * b[1, 1]
    G = 1 - e * r * a[3, 3] * b[3, 3]
    det_ax = a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    det_bx = b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1]
    det_ay = a[3, 3] * a[4, 4] - a[3, 4] * a[4, 3]
    det_by = b[3, 3] * b[4, 4] - b[3, 4] * b[4, 3]

    f = np.array([
        e * s(t) * a[2, 1],
        -e * s(1 - t) * s(l3) * s(1 - l4) * a[2, 1] * b[1, 1],
        -e * s(1 - t) * s(l4) * a[2, 1],
        a[2, 2] - e * r * b[1, 1] * det_ax,
        e * s(1 - t) * s(1 - l4) * a[2, 1] * b[1, 2],
    ]) / F
    g = np.array([
        e * s(t) * a[4, 3],
        -e * s(1 - t) * s(l3) * s(1 - l4) * a[4, 3] * b[3, 3],
        -e * s(1 - t) * s(l4) * a[4, 3],
        a[4, 4] - e * r * b[3, 3] * det_ay,
        e * s(1 - t) * s(1 - l4) * a[4, 3] * b[3, 4],
    ]) / G
    h = np.array([
        e * s(t) * s(1 - l3) * a[1, 1] * b[2, 1],
        -s(l3) * b[2, 1],
        -e * s(1 - t) * s(1 - l3) * s(l4) * a[1, 1] * b[2, 1],
        s(1 - l3) * a[1, 2] * b[2, 1],
        b[2, 2] - e * r * a[1, 1] * det_bx,
    ]) / F
    # the loss-port-3 phase coefficient takes sqrt(L13), mirroring h above
    j = np.array([
        e * s(t) * s(1 - l3) * a[3, 3] * b[4, 3],
        -s(l3) * b[4, 3],
        -e * s(1 - t) * s(1 - l3) * s(l4) * a[3, 3] * b[4, 3],
        s(1 - l3) * a[3, 4] * b[4, 3],
        b[4, 4] - e * r * a[3, 3] * det_by,
    ]) / G
    return OutputCoefficients(f=f, g=g, h=h, j=j, F=complex(F), G=complex(G))


def coefficients_from_outputs(X1: np.ndarray, X2: np.ndarray) -> OutputCoefficients:
    """Project general-route output maps onto the five restricted-layout sources."""
    nan = complex("nan")
    return OutputCoefficients(f=X1[HARM_X, X_COLS], g=X1[HARM_Y, Y_COLS],
                              h=X2[HARM_X, X_COLS], j=X2[HARM_Y, Y_COLS], F=nan, G=nan)


@dataclass(frozen=True)
class NoiseReport:
    """Shot-noise normalized harmonic spectra at both outputs and their
    amplitude (``c_x``) and phase (``c_y``) cross-correlations."""

    s_x1: float
    s_y1: float
    s_x2: float
    s_y2: float
    c_x: float
    c_y: float
    omega: float = 0.0
    op: OperatingPoint | None = None

    @classmethod
    def from_outputs(cls, X1, X2, omega=0.0, op=None) -> "NoiseReport":
        x1, y1, x2, y2 = X1[HARM_X], X1[HARM_Y], X2[HARM_X], X2[HARM_Y]
        return cls(
            s_x1=float(np.sum(np.abs(x1) ** 2)), s_y1=float(np.sum(np.abs(y1) ** 2)),
            s_x2=float(np.sum(np.abs(x2) ** 2)), s_y2=float(np.sum(np.abs(y2) ** 2)),
            c_x=float(2 * np.sum(x1 * np.conj(x2)).real),
            c_y=float(2 * np.sum(y1 * np.conj(y2)).real),
            omega=omega, op=op)

    def spectra(self) -> tuple[float, float, float, float, float, float]:
        return self.s_x1, self.s_y1, self.s_x2, self.s_y2, self.c_x, self.c_y


def noise_report(coeffs: OutputCoefficients, omega: float = 0.0,
                 op: OperatingPoint | None = None) -> NoiseReport:
    f, g, h, j = coeffs.f, coeffs.g, coeffs.h, coeffs.j
    return NoiseReport(
        s_x1=float(np.sum(np.abs(f) ** 2)), s_y1=float(np.sum(np.abs(g) ** 2)),
        s_x2=float(np.sum(np.abs(h) ** 2)), s_y2=float(np.sum(np.abs(j) ** 2)),
        c_x=float(2 * np.sum(f * np.conj(h)).real),
        c_y=float(2 * np.sum(g * np.conj(j)).real),
        omega=omega, op=op)


def general_outputs(cavity: CavitySpec, zeta1: float, zeta2: float,
                    omega: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    m = build_network(cavity, omega)
    n1, n2 = transfer_matrix(zeta1), transfer_matrix(zeta2)
    x1 = solve_intracavity(m, n1, n2)
    return output_quadratures(x1, m, n1, n2)


def cavity_noise(cavity: CavitySpec, op: OperatingPoint, omega: float = 0.0,
                 path: str = "general") -> NoiseReport:
    """Noise report at an operating point, by either computation route."""
    if path == "general":
        X1, X2 = general_outputs(cavity, op.zeta1, op.zeta2, omega)
        return NoiseReport.from_outputs(X1, X2, omega=omega, op=op)
    if path == "coefficients":
        return noise_report(output_coefficients(op.zeta1, op.zeta2, omega, cavity),
                            omega=omega, op=op)
    raise ValueError(f"unknown path {path!r}")
