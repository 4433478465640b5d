import math

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.linalg import expm

from lgtsirelson.family import DEGENERACY_GUARD, FamilyParams

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

PHI_09PI = 0.9 * math.pi


def oracle_u(phi, alpha, t):
    """U_p(t) from matrix exponentials of the two generators, normalized by W^dagger W."""
    s_phi = math.cos(phi) * SX + math.sin(phi) * SY
    w = math.cos(alpha) * expm(-1j * t * SX) + math.sin(alpha) * expm(-1j * t * s_phi)
    n2 = (w.conj().T @ w)[0, 0].real
    return w / math.sqrt(n2)


def oracle_correlator(v):
    return 0.5 * np.trace(SZ @ v @ SZ @ v.conj().T).real


def classical_k3(T):
    return 2 * np.cos(2 * T) - np.cos(4 * T)


@st.composite
def family_params(draw, phi_max=0.95 * math.pi):
    phi = draw(st.floats(0.0, phi_max))
    alpha = draw(st.floats(0.0, math.pi / 2))
    if 1 + math.cos(phi) * math.sin(2 * alpha) < DEGENERACY_GUARD:
        alpha = 0.0
    return FamilyParams(phi, alpha)


times = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20251015)


def random_params(rng, n, phi_max=0.9 * math.pi):
    return [FamilyParams(rng.uniform(0, phi_max), rng.uniform(0, math.pi / 2)) for _ in range(n)]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
