
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_point
from dualshg.entanglement import (beamsplitter_mix, dgcz_scan, epr_dgcz, equal_source_vepr,
                                  equal_source_vepr_from_product, inference_variance,
                                  intensity_variance, mix_on_beamsplitter, twin_beam)
from dualshg.mean_field import solve_conversion
from dualshg.network import NoiseReport, general_outputs

VACUUM = NoiseReport(1, 1, 1, 1, 0, 0)


def random_report(rng):
    cav, z1, z2, omega = random_point(rng)
    return NoiseReport.from_outputs(*general_outputs(cav, z1, z2, omega))


def test_vacuum_twin_beam():
    tw = twin_beam(VACUUM, 1.0)
    assert tw.var_sum == 1 and tw.var_diff == 1
    assert tw.g_opt_plus == 1 and tw.g_opt_minus == -1


def test_vacuum_entanglement():
    e = epr_dgcz(VACUUM)
    assert e.v_epr == 1 and e.v_dgcz == 1 and e.g_x == 0 and e.g_y == 0


def test_twin_beam_optimality(rng):
    for _ in range(100):
        rep = random_report(rng)
        ratio = rng.uniform(0.5, 2.0)
        tw = twin_beam(rep, ratio)
        for g, v in [(tw.g_opt_minus, tw.var_sum), (tw.g_opt_plus, tw.var_diff)]:
            assert v == pytest.approx(intensity_variance(rep, ratio, g), abs=1e-12)
        # the lower branch is the minimizer (the g < 0 one whenever C_X < 0)
        v_min, g_min = min((tw.var_sum, tw.g_opt_minus), (tw.var_diff, tw.g_opt_plus))
        assert v_min <= intensity_variance(rep, ratio, g_min + 0.01)
        assert v_min <= intensity_variance(rep, ratio, g_min - 0.01)
        gs = np.linspace(-10, 10, 4001)
        assert v_min <= min(intensity_variance(rep, ratio, g) for g in gs) + 1e-12
        if rep.c_x < 0:
            assert v_min == tw.var_sum
        assert tw.g_opt_plus > 0 > tw.g_opt_minus


def test_twin_beam_zero_correlation_fallback():
    tw = twin_beam(NoiseReport(0.8, 2, 0.9, 2, 0.0, 0.0), 4.0)
    assert tw.g_opt_plus == 2.0 and tw.g_opt_minus == -2.0


def test_twin_beam_rejects_bad_ratio():
    with pytest.raises(ValueError):
        twin_beam(VACUUM, 0.0)


def test_inference_gains_stationary(rng):
    for _ in range(50):
        rep = random_report(rng)
        e = epr_dgcz(rep)
        d = 1e-6
        for s1, s2, c, g in [(rep.s_x1, rep.s_x2, rep.c_x, e.g_x), (rep.s_y1, rep.s_y2, rep.c_y, e.g_y)]:
            deriv = (inference_variance(s1, s2, c, g + d) - inference_variance(s1, s2, c, g - d)) / (2 * d)
            assert abs(deriv) < 1e-8
        prod = (inference_variance(rep.s_x1, rep.s_x2, rep.c_x, e.g_x)
                * inference_variance(rep.s_y1, rep.s_y2, rep.c_y, e.g_y))
        assert prod == pytest.approx(e.v_epr, rel=1e-12)
        assert e.v_epr >= 0 and e.v_dgcz >= 0


def test_dgcz_scan_contains_unit_weight():
    from dualshg.mean_field import REFERENCE_CAVITY
    from dualshg.network import cavity_noise
    rep = cavity_noise(REFERENCE_CAVITY, solve_conversion(REFERENCE_CAVITY, 0.5))
    a, v = dgcz_scan(rep, [1.0])
    assert v == pytest.approx(epr_dgcz(rep).v_dgcz, rel=1e-14)
    a_best, v_best = dgcz_scan(rep)
    assert a_best == pytest.approx(1.0, abs=0.05)
    assert v_best <= epr_dgcz(rep).v_dgcz


def test_beamsplitter_vacuum():
    e = beamsplitter_mix((1, 1), (1, 1))
    assert e.v_epr == 1 and e.v_dgcz == 1


def test_beamsplitter_paper_point():
    s = 10 ** (-0.2)
    e = beamsplitter_mix((s, 2.2 / s), (s, 2.2 / s))
    assert e.v_epr == pytest.approx(1.1, abs=0.05)
    assert e.v_dgcz == pytest.approx(s, rel=1e-14)


@pytest.mark.parametrize("s_db", np.linspace(-8, -0.5, 8))
@pytest.mark.parametrize("p", [1.0, 1.5, 2.2, 4.0])
def test_equal_source_closed_form(s_db, p):
    s = 10 ** (s_db / 10)
    e = beamsplitter_mix((s, p / s), (s, p / s))
    assert e.v_epr == pytest.approx(equal_source_vepr(s, p / s), rel=1e-12)
    assert e.v_epr == pytest.approx(equal_source_vepr_from_product(s, p), rel=1e-12)
    # DGCZ of mixed equal sources is S_X, whatever the excess noise p
    assert e.v_dgcz == pytest.approx(s, rel=1e-12)


@settings(max_examples=50)
@given(st.floats(0.05, 5), st.floats(0.05, 5))
def test_equal_source_outputs_symmetric(sx, sy):
    m = mix_on_beamsplitter(sx, sy, sx, sy)
    assert abs(m.s_xa - m.s_xb) <= 1e-14 and abs(m.s_ya - m.s_yb) <= 1e-14


@settings(max_examples=50)
@given(st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.05, 5))
def test_vepr_port_relabel_symmetric_sources(sx, sy, cx, cy):
    # with equal spectra at both ports the product is unchanged by swapping them
    cx = min(cx, 1.9 * sx)
    cy = min(cy, 1.9 * sy)
    rep = NoiseReport(sx, sy, sx, sy, cx, cy)
    swapped = NoiseReport(rep.s_x2, rep.s_y2, rep.s_x1, rep.s_y1, rep.c_x, rep.c_y)
    assert epr_dgcz(rep).v_epr == pytest.approx(epr_dgcz(swapped).v_epr, rel=1e-14)


def test_beamsplitter_rejects_nonpositive():
    with pytest.raises(ValueError):
        beamsplitter_mix((0.0, 1.0), (1.0, 1.0))
