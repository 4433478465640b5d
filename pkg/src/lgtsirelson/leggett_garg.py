"""Three-experiment Leggett-Garg protocol with Q = sigma_z on the maximally mixed state.

Each scenario fixes how (V12, V23, V13) are built from U_p at t1 = 0,
t2 = T, t3 = 2T. Only scenarios whose triple obeys V13 = V23 V12 are
legitimate Leggett-Garg protocols; EXP is kept to reproduce the apparent
violation and is flagged by its composition defect.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .family import FamilyParams, u_p, u_tilde
from .qubit import SZ, adjoint, frobenius_distance, is_unitary, mul, trace, NotUnitaryError

TTB = 1.5
ALGEBRAIC_MAX = 3.0
PHYSICAL_T_SCALE = 2.0  # this module's T = pi/2 is t = pi in the original experiment's units


class ScenarioKind(enum.Enum):
    EXP = "exp"
    A = "a"
    B = "b"

    @property
    def legitimate(self) -> bool:
        """Whether the scenario is claimed to satisfy V13 = V23 V12."""
        return self in LEGITIMATE_SCENARIOS

    @classmethod
    def parse(cls, name: str) -> "ScenarioKind":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown scenario {name!r}; expected one of exp, a, b") from None


LEGITIMATE_SCENARIOS = frozenset({ScenarioKind.A, ScenarioKind.B})


@dataclass(frozen=True)
class K3Record:
    scenario: ScenarioKind
    params: FamilyParams
    T: float
    c12: float
    c23: float
    c13: float
    k3: float
    composition_defect: float


@dataclass(frozen=True)
class MaximizerResult:
    k3_max: float
    t_star: float
    scenario: ScenarioKind


def correlator(v: np.ndarray, tol: float = 1e-10):
    """Two-time sigma_z correlator 1/2 tr[sigma_z V sigma_z V^dagger] for the state I/2."""
    if not is_unitary(v, tol):
        raise NotUnitaryError("correlator needs a unitary evolution")
    c = 0.5 * trace(mul(mul(SZ, v), mul(SZ, adjoint(v))))
    if np.any(np.abs(np.imag(c)) > 1e-12):
        raise ArithmeticError("correlator trace has a non-negligible imaginary part")
    c = np.real(c)
    return float(c) if np.ndim(c) == 0 else c


def scenario_unitaries(p: FamilyParams, T, s: ScenarioKind):
    """(V12, V23, V13) for the scenario; T may be an array of intervals."""
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ValueError("time interval T must be non-negative")
    u1 = u_p(p, T)
    if s is ScenarioKind.EXP:
        return u1, u1, u_p(p, 2 * T)
    if s is ScenarioKind.A:
        return u1, u1, mul(u1, u1)
    if s is ScenarioKind.B:
        return u1, u_tilde(p, 2 * T, T), u_p(p, 2 * T)
    raise ValueError(f"unknown scenario {s!r}")


def composition_defect(v12: np.ndarray, v23: np.ndarray, v13: np.ndarray):
    return frobenius_distance(v13, mul(v23, v12))


def k3_curve(p: FamilyParams, T, s: ScenarioKind) -> dict[str, np.ndarray]:
    """Vectorized K3 evaluation over an array of T values."""
    v12, v23, v13 = scenario_unitaries(p, T, s)
    c12, c23, c13 = correlator(v12), correlator(v23), correlator(v13)
    return {
        "T": np.asarray(T, dtype=float),
        "c12": np.asarray(c12),
        "c23": np.asarray(c23),
        "c13": np.asarray(c13),
        "k3": np.asarray(c12 + c23 - c13),
        "defect": np.asarray(composition_defect(v12, v23, v13)),
    }


def k3(p: FamilyParams, T: float, s: ScenarioKind) -> K3Record:
    T = float(T)
    if not 0.0 <= T <= math.pi:
        raise ValueError(f"T={T!r} outside [0, pi]")
    row = k3_curve(p, T, s)
    return K3Record(
        scenario=s,
        params=p,
        T=T,
        c12=float(row["c12"]),
        c23=float(row["c23"]),
        c13=float(row["c13"]),
        k3=float(row["k3"]),
        composition_defect=float(row["defect"]),
    )


_INV_PHI = (math.sqrt(5) - 1) / 2
TIE_TOL = 1e-12


def golden_section_max(f, lo: float, hi: float, tol: float, max_iter: int = 500):
    """Maximize a unimodal f on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def k3_max_over_T(
    p: FamilyParams,
    s: ScenarioKind,
    grid_points: int = 1024,
    refine_tol: float = 1e-10,
) -> MaximizerResult:
    """(K3)_m: maximum of K3 over T in [0, pi], grid scan then golden-section refinement."""
    if grid_points < 64:
        raise ValueError("grid_points must be at least 64")
    if not refine_tol > 0:
        raise ValueError("refine_tol must be positive")
    grid = np.linspace(0.0, math.pi, grid_points)
    values = k3_curve(p, grid, s)["k3"]
    padded = np.concatenate([[-np.inf], values, [-np.inf]])
    peaks = np.flatnonzero((values >= padded[:-2]) & (values >= padded[2:]))

    def f(T):
        return float(k3_curve(p, T, s)["k3"])

    found = []
    for i in peaks:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
        found.append((float(grid[i]), float(values[i])))
        found.append(golden_section_max(f, float(lo), float(hi), refine_tol))
    best = max(v for _, v in found)
    # equal maxima (e.g. the periodic homogeneous case) resolve to the earliest T
    t_star = min(T for T, v in found if v >= best - TIE_TOL)
    return MaximizerResult(k3_max=best, t_star=t_star, scenario=s)
