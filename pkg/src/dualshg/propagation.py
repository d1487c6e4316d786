"""Linearized quadrature propagation through one phase-matched crystal pass.

Quadrature vectors are ordered (x1, x2, y1, y2): amplitude and phase
fluctuations of the fundamental and harmonic. The pass is characterised by the
normalized length zeta = |A1(0)| |kappa| L_c / sqrt(2), with no harmonic at the
crystal input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)

# indices of the x<->y coupling entries, which vanish for real coupling
OFF_BLOCK = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)]


class ComplexCouplingError(ValueError):
    """The requested configuration implies a complex coupling constant."""


@dataclass(frozen=True)
class QuadTransfer:
    m: np.ndarray

    @property
    def nx(self) -> np.ndarray:
        return self.m[:2, :2]

    @property
    def ny(self) -> np.ndarray:
        return self.m[2:, 2:]

    def __getitem__(self, ij):
        """1-based element access, ``n[1, 2]`` is N_12."""
        i, j = ij
        return self.m[i - 1, j - 1]

    def __matmul__(self, other):
        return self.m @ other


def transfer_matrix(zeta: float) -> QuadTransfer:
    """Closed-form 4x4 quadrature transfer matrix N(zeta)."""
    if not math.isfinite(zeta) or zeta < 0:
        raise ValueError(f"zeta must be finite and >= 0, got {zeta}")
    t = math.tanh(zeta)
    ch = math.cosh(zeta)
    sech = 1.0 / ch
    m = np.zeros((4, 4))
    m[0, 0] = (1 - zeta * t) / ch
    m[0, 1] = -SQRT2 * t / ch
    m[1, 0] = (t + zeta * sech**2) / SQRT2
    m[1, 1] = sech**2
    m[2, 2] = sech
    m[2, 3] = -(math.sinh(zeta) + zeta * sech) / SQRT2
    m[3, 2] = SQRT2 * t
    m[3, 3] = 1 - zeta * t
    return QuadTransfer(m)


def require_phase_matched(dk: float) -> None:
    """Reject a nonzero mismatch; the hyperbolic solution needs real coupling."""
    if dk != 0:
        raise ComplexCouplingError(
            f"dk={dk} gives a complex coupling; only dk = 0 is supported")


def linearized_rhs(tau: float, x: np.ndarray) -> np.ndarray:
    """d/dtau of (x1, x2, y1, y2) about the undepleted-harmonic mean field.

    tau runs from 0 to zeta; the mean fields are A1 ~ sech(tau) and
    A2 ~ tanh(tau)/sqrt(2) in units of A1(0).
    """
    sech = 1.0 / math.cosh(tau)
    t = math.tanh(tau)
    x1, x2, y1, y2 = x
    return np.array([
        -SQRT2 * sech * x2 - t * x1,
        SQRT2 * sech * x1,
        -SQRT2 * sech * y2 + t * y1,
        SQRT2 * sech * y1,
    ])


def integrate_linearized(zeta: float, steps: int = 200) -> np.ndarray:
    """Transfer matrix from fixed-step RK4 integration of ``linearized_rhs``."""
    h = zeta / steps
    m = np.eye(4)
    tau = 0.0
    for _ in range(steps):
        k1 = np.column_stack([linearized_rhs(tau, c) for c in m.T])
        k2 = np.column_stack([linearized_rhs(tau + h / 2, c) for c in (m + h / 2 * k1).T])
        k3 = np.column_stack([linearized_rhs(tau + h / 2, c) for c in (m + h / 2 * k2).T])
        k4 = np.column_stack([linearized_rhs(tau + h, c) for c in (m + h * k3).T])
        m = m + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        tau += h
    return m
