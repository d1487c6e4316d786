import numpy as np
import pytest

from dualshg.propagation import (OFF_BLOCK, ComplexCouplingError, integrate_linearized,
                                 require_phase_matched, transfer_matrix)

NONZERO = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]


def test_identity_at_zero():
    assert np.array_equal(transfer_matrix(0.0).m, np.eye(4))


@pytest.mark.parametrize("zeta", [0.1, 0.5, 1.0, 2.0])
def test_closed_form_matches_rk4(zeta):
    # step doubling until the RK4 oracle has settled
    steps, prev = 50, integrate_linearized(zeta, 50)
    while True:
        steps *= 2
        cur = integrate_linearized(zeta, steps)
        if np.max(np.abs(cur - prev)) < 1e-10:
            break
        prev = cur
    n = transfer_matrix(zeta).m
    for i, j in NONZERO:
        assert abs(n[i, j] - cur[i, j]) < 1e-8
    for i, j in OFF_BLOCK:
        assert n[i, j] == 0.0


@pytest.mark.parametrize("zeta", np.linspace(0, 2, 41))
def test_symplectic_pairing(zeta):
    n = transfer_matrix(zeta)
    assert np.max(np.abs(n.nx @ n.ny.T - np.eye(2))) < 1e-12
    assert np.linalg.det(n.nx) * np.linalg.det(n.ny) == pytest.approx(1, abs=1e-12)


def test_pairing_at_one():
    n = transfer_matrix(1.0)
    assert np.max(np.abs(n.nx @ n.ny.T - np.eye(2))) < 1e-14


def test_harmonic_amplitude_gain_decreasing():
    n22 = [transfer_matrix(z)[2, 2] for z in np.linspace(0, 5, 501)]
    assert np.all(np.diff(n22) < 0)


def test_element_access_is_one_based():
    n = transfer_matrix(0.3)
    assert n[3, 4] == n.m[2, 3]


@pytest.mark.parametrize("zeta", [-0.1, float("inf")])
def test_rejects_bad_zeta(zeta):
    with pytest.raises(ValueError):
        transfer_matrix(zeta)


def test_rejects_mismatch():
    require_phase_matched(0.0)
    with pytest.raises(ComplexCouplingError):
        require_phase_matched(326.0)
