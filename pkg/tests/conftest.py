import math

import numpy as np
import pytest

from dualshg.mean_field import CavitySpec

_criteria = []


def record(label: str, ok: bool, detail: str = "") -> None:
    """Log an acceptance line; printed in the terminal summary."""
    _criteria.append((label, ok, detail))
    assert ok, f"{label}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


def random_cavity(rng: np.random.Generator) -> CavitySpec:
    return CavitySpec(
        t11=rng.uniform(1e-3, 0.3), l13=rng.uniform(0, 0.05), l14=rng.uniform(0, 0.05),
        enl1=rng.uniform(1e-3, 0.05), enl2=rng.uniform(0, 0.05),
        la=rng.uniform(0, 0.2), n1=rng.uniform(1.4, 2.4), n2=rng.uniform(1.4, 2.4))


def random_point(rng: np.random.Generator):
    """Random restricted cavity, propagation lengths and sideband frequency."""
    cav = random_cavity(rng)
    z1 = rng.uniform(0, 1.0)
    z2 = rng.uniform(0, z1)
    omega = rng.uniform(-math.pi, math.pi) * cav.fsr(1)
    return cav, z1, z2, omega


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
