"""Invariant suites for every layer, plus deliberate faults to prove they bite.

Each invariant returns its worst observed error (or a boolean margin) and is
judged against a tolerance that can be overridden by name.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import dynamics as dyn
from . import leggett_garg as lg
from .family import FamilyParams, homogeneity_defect, norm_sq, sigma_phi, u_p, u_tilde, w_matrix
from .qubit import (
    IDENTITY,
    adjoint,
    commutator,
    evolve,
    exp_traceless_hermitian,
    frobenius_distance,
    mul,
    trace,
    unitarity_defect,
)

# fixed probes: the figure working points plus a negative-denominator gamma case
PROBE_PARAMS = (
    (0.9 * math.pi, math.pi / 4),
    (0.8, math.pi / 8),
    (0.95, math.pi / 4),
    (0.9 * math.pi, math.pi / 3),
    (2.5, 1.2),
)
TTB_GRID_PHI = (0.1, 0.5, 0.9 * math.pi - 0.05, 0.9 * math.pi)
TTB_GRID_ALPHA = (0.0, math.pi / 8, math.pi / 4)


@dataclass(frozen=True)
class Invariant:
    name: str
    module: str
    tol: float
    check: Callable[["Context"], float]
    description: str


@dataclass
class Context:
    rng: np.random.Generator
    samples: int

    def params(self, phi_max: float = 0.95 * math.pi) -> list[FamilyParams]:
        out = [FamilyParams(phi, alpha) for phi, alpha in PROBE_PARAMS]
        for _ in range(self.samples):
            out.append(FamilyParams(self.rng.uniform(0, phi_max), self.rng.uniform(0, math.pi / 2)))
        return out

    def axes(self) -> list[np.ndarray]:
        return [sigma_phi(g) for g in self.rng.uniform(0, 2 * math.pi, self.samples)] + [
            np.array([[1, 0], [0, -1]], dtype=complex)
        ]


@dataclass(frozen=True)
class Outcome:
    name: str
    module: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        # NaN never passes
        return bool(self.value <= self.tol)


def _max(values) -> float:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.nan) if np.any(np.isnan(arr)) else float(np.max(arr))


# qubit algebra


def _exp_unitary(ctx):
    return _max(
        unitarity_defect(exp_traceless_hermitian(h, ctx.rng.uniform(-10, 10, 16))).max()
        for h in ctx.axes()
    )


def _exp_composes(ctx):
    errs = []
    for h in ctx.axes():
        a, b = ctx.rng.uniform(-5, 5, 2)
        lhs = mul(exp_traceless_hermitian(h, a), exp_traceless_hermitian(h, b))
        errs.append(frobenius_distance(lhs, exp_traceless_hermitian(h, a + b)))
    return _max(errs)


def _random_ops(ctx, n):
    return ctx.rng.normal(size=(n, 2, 2)) + 1j * ctx.rng.normal(size=(n, 2, 2))


def _trace_linear(ctx):
    a, b = _random_ops(ctx, ctx.samples), _random_ops(ctx, ctx.samples)
    x = ctx.rng.normal(size=ctx.samples)[:, None, None]
    return _max(np.abs(trace(x * a + b) - (x[:, 0, 0] * trace(a) + trace(b))))


def _triangle(ctx):
    a, b, c = (_random_ops(ctx, ctx.samples) for _ in range(3))
    excess = frobenius_distance(a, c) - frobenius_distance(a, b) - frobenius_distance(b, c)
    return max(0.0, _max(excess))


def _evolve_norm(ctx):
    errs = []
    for h in ctx.axes():
        psi = ctx.rng.normal(size=2) + 1j * ctx.rng.normal(size=2)
        psi /= np.linalg.norm(psi)
        out = evolve(psi, exp_traceless_hermitian(h, ctx.rng.uniform(-5, 5)))
        errs.append(abs(np.linalg.norm(out) - 1))
    return _max(errs)


# unitary family

DENSE_T = np.linspace(-2 * math.pi, 2 * math.pi, 801)


def _family_unitary(ctx):
    return _max(_max(unitarity_defect(u_p(p, DENSE_T))) for p in ctx.params())


def _norm_identity(ctx):
    errs = []
    for p in ctx.params():
        w = w_matrix(p, DENSE_T)
        n2 = np.asarray(norm_sq(p, DENSE_T))[:, None, None]
        errs.append(_max(np.abs(mul(adjoint(w), w) - n2 * IDENTITY)))
    return _max(errs)


def _chain(ctx):
    errs = []
    for p in ctx.params():
        t1, t2, t3 = ctx.rng.uniform(-2 * math.pi, 2 * math.pi, 3)
        lhs = mul(u_tilde(p, t3, t2), u_tilde(p, t2, t1))
        errs.append(frobenius_distance(lhs, u_tilde(p, t3, t1)))
    return _max(errs)


def _non_homogeneity(ctx):
    """Positive when the generic case fails to break homogeneity or a degenerate case breaks it."""
    grid = np.linspace(0, math.pi, 512)
    generic = _max(homogeneity_defect(FamilyParams(0.9 * math.pi, math.pi / 4), grid))
    degenerate = _max(
        _max(homogeneity_defect(FamilyParams(phi, alpha), grid))
        for phi, alpha in ((0.9 * math.pi, 0.0), (0.0, math.pi / 4), (1.3, 0.0), (0.0, 1.1))
    )
    return degenerate if generic > 0.1 else math.inf


def _projective_period(ctx):
    errs = []
    for p in ctx.params():
        t = ctx.rng.uniform(-2 * math.pi, 2 * math.pi, 32)
        overlap = np.abs(trace(mul(adjoint(u_p(p, t + math.pi)), u_p(p, t))))
        errs.append(_max(np.abs(overlap - 2)))
    return _max(errs)


# hamiltonian dynamics


def _projectors(ctx):
    errs = []
    for p in ctx.params():
        plus, minus = dyn.spectral(p).projectors
        errs += [
            frobenius_distance(mul(plus, plus), plus),
            frobenius_distance(mul(minus, minus), minus),
            frobenius_distance(mul(plus, minus), 0 * IDENTITY),
            frobenius_distance(plus + minus, IDENTITY),
        ]
    return _max(errs)


def _eigen_equation(ctx):
    errs = []
    for p in ctx.params():
        plus, minus = dyn.spectral(p).projectors
        t = ctx.rng.uniform(-2 * math.pi, 2 * math.pi)
        h, e = dyn.hamiltonian(p, t), dyn.energy(p, t)
        errs += [frobenius_distance(mul(h, plus), e * plus), frobenius_distance(mul(h, minus), -e * minus)]
    return _max(errs)


def _commuting(ctx):
    errs = []
    for p in ctx.params():
        t1, t2 = ctx.rng.uniform(-2 * math.pi, 2 * math.pi, 2)
        errs.append(frobenius_distance(commutator(dyn.hamiltonian(p, t1), dyn.hamiltonian(p, t2)), 0 * IDENTITY))
    return _max(errs)


TAU_GRID = np.linspace(-2 * math.pi, 2 * math.pi, 100)


def _tau_period(ctx):
    return _max(_max(np.abs(dyn.tau(p, TAU_GRID + math.pi) - dyn.tau(p, TAU_GRID) - math.pi)) for p in ctx.params())


def _tau_monotone(ctx):
    """Largest non-positive increment of tau on an increasing grid (0 when strictly increasing)."""
    grid = np.linspace(-2 * math.pi, 2 * math.pi, 2001)
    worst = 0.0
    for p in ctx.params():
        steps = np.diff(dyn.tau(p, grid))
        if np.any(np.isnan(steps)):
            return float("nan")
        if np.any(steps <= 0):
            worst = max(worst, float(1 - steps.min()))
    return worst


def _tau_derivative(ctx, h: float = 1e-5):
    errs = []
    for p in ctx.params():
        fd = (dyn.tau(p, TAU_GRID + h) - dyn.tau(p, TAU_GRID - h)) / (2 * h)
        errs.append(_max(np.abs(fd - dyn.energy(p, TAU_GRID))))
    return _max(errs)


def _hamiltonian_oracle(ctx):
    errs = []
    for p in ctx.params(phi_max=0.9 * math.pi):
        t, t0 = ctx.rng.uniform(-math.pi, math.pi, 2)
        errs.append(frobenius_distance(dyn.hamiltonian(p, t), dyn.hamiltonian_numeric(p, t, 1e-5, t0)))
    return _max(errs)


def _closed_vs_two_time(ctx):
    errs = []
    for p in ctx.params():
        t1, t2 = ctx.rng.uniform(0, 2 * math.pi, 2)
        errs.append(frobenius_distance(u_tilde(p, t2, t1), dyn.propagator_closed(p, t2, t1)))
    return _max(errs)


def _stepped_agreement(ctx):
    errs = []
    for p in ctx.params(phi_max=0.9 * math.pi)[: len(PROBE_PARAMS) + max(1, ctx.samples // 4)]:
        t1, t2 = ctx.rng.uniform(0, 2 * math.pi, 2)
        stepped = dyn.propagator_stepped(p, t2, t1, 10_000)
        errs += [
            frobenius_distance(stepped, dyn.propagator_closed(p, t2, t1)),
            frobenius_distance(stepped, u_tilde(p, t2, t1)),
        ]
    return _max(errs)


# leggett-garg

T_GRID = np.linspace(0, math.pi, 512)


def _ttb_compliance(ctx):
    """Largest excess of K3 over the bound for scenarios labeled legitimate."""
    worst = -math.inf
    for phi in TTB_GRID_PHI:
        for alpha in TTB_GRID_ALPHA:
            p = FamilyParams(phi, alpha)
            for s in lg.ScenarioKind:
                if s.legitimate:
                    worst = max(worst, _max(lg.k3_curve(p, T_GRID, s)["k3"]) - lg.TTB)
    return worst


def _composition_labels(ctx):
    """Legitimate scenarios must have zero defect; the others must show one."""
    errs = []
    for phi, alpha in PROBE_PARAMS:
        p = FamilyParams(phi, alpha)
        for s in lg.ScenarioKind:
            defect = _max(lg.k3_curve(p, T_GRID, s)["defect"])
            if s.legitimate:
                errs.append(defect)
            elif not p.homogeneous and defect <= 1e-6:
                errs.append(1.0)
    return _max(errs)


def _degenerate_collapse(ctx):
    errs = []
    for phi, alpha in ((0.0, 0.3), (0.0, math.pi / 4), (0.7, 0.0), (0.9 * math.pi, 0.0)):
        p = FamilyParams(phi, alpha)
        curves = [lg.k3_curve(p, T_GRID, s) for s in lg.ScenarioKind]
        for c in curves[1:]:
            for key in ("c12", "c23", "c13", "k3", "defect"):
                errs.append(_max(np.abs(c[key] - curves[0][key])))
    return _max(errs)


def _correlator_closed_form(ctx):
    errs = []
    for p in ctx.params():
        T = ctx.rng.uniform(0, math.pi, 16)
        c = lg.k3_curve(p, T, lg.ScenarioKind.B)
        t1, t2, t3 = dyn.tau(p, 0 * T), dyn.tau(p, T), dyn.tau(p, 2 * T)
        errs += [
            _max(np.abs(c["c12"] - np.cos(2 * (t2 - t1)))),
            _max(np.abs(c["c23"] - np.cos(2 * (t3 - t2)))),
            _max(np.abs(c["c13"] - np.cos(2 * (t3 - t1)))),
        ]
    return _max(errs)


def _algebraic_bound(ctx):
    return _max(
        _max(np.abs(lg.k3_curve(p, T_GRID, s)["k3"])) - lg.ALGEBRAIC_MAX
        for p in ctx.params()
        for s in lg.ScenarioKind
    )


def _exp_defect_at_zero(ctx):
    return _max(lg.k3_curve(p, 0.0, lg.ScenarioKind.EXP)["defect"] for p in ctx.params())


INVARIANTS = (
    Invariant("exp-unitary", "qubit", 1e-12, _exp_unitary, "closed-form exponential is unitary"),
    Invariant("exp-composition", "qubit", 1e-12, _exp_composes, "same-axis exponentials compose"),
    Invariant("trace-linearity", "qubit", 1e-12, _trace_linear, "trace is linear"),
    Invariant("frobenius-triangle", "qubit", 1e-12, _triangle, "Frobenius distance obeys the triangle inequality"),
    Invariant("evolve-norm", "qubit", 1e-10, _evolve_norm, "evolution preserves the state norm"),
    Invariant("family-unitarity", "family", 1e-12, _family_unitary, "U_p(t) is unitary on a dense grid"),
    Invariant("norm-identity", "family", 1e-12, _norm_identity, "W^dagger W = n_p^2 I"),
    Invariant("propagator-chain", "family", 1e-12, _chain, "two-time propagators chain"),
    Invariant("non-homogeneity", "family", 1e-12, _non_homogeneity, "U_p(2T) != U_p(T)^2 generically, = when degenerate"),
    Invariant("projective-periodicity", "family", 1e-10, _projective_period, "U_p(t + pi) equals U_p(t) up to phase"),
    Invariant("spectral-projectors", "hamiltonian", 1e-12, _projectors, "eigenprojectors are orthogonal idempotents"),
    Invariant("eigen-equation", "hamiltonian", 1e-12, _eigen_equation, "H P_pm = pm E P_pm"),
    Invariant("hamiltonian-commutes", "hamiltonian", 1e-12, _commuting, "[H(t1), H(t2)] = 0"),
    Invariant("tau-period", "hamiltonian", 1e-10, _tau_period, "tau(t + pi) - tau(t) = pi"),
    Invariant("tau-monotone", "hamiltonian", 0.0, _tau_monotone, "tau strictly increasing"),
    Invariant("tau-derivative", "hamiltonian", 1e-6, _tau_derivative, "central difference of tau equals E_p"),
    Invariant("hamiltonian-oracle", "hamiltonian", 1e-7, _hamiltonian_oracle, "closed-form H matches finite differences"),
    Invariant("closed-vs-two-time", "hamiltonian", 1e-10, _closed_vs_two_time, "exp(-i dtau P) equals U_p(t2) U_p(t1)^dagger"),
    Invariant("stepped-agreement", "hamiltonian", 1e-6, _stepped_agreement, "midpoint product integrator agrees"),
    Invariant("ttb-compliance", "leggett-garg", 1e-9, _ttb_compliance, "legitimate scenarios respect K3 <= 1.5"),
    Invariant("composition-law", "leggett-garg", 1e-10, _composition_labels, "legitimacy labels match V13 = V23 V12"),
    Invariant("degenerate-collapse", "leggett-garg", 1e-12, _degenerate_collapse, "scenarios coincide for alpha = 0 or phi = 0"),
    Invariant("correlator-closed-form", "leggett-garg", 1e-10, _correlator_closed_form, "scenario B correlators are cos(2 dtau)"),
    Invariant("algebraic-bound", "leggett-garg", 1e-12, _algebraic_bound, "|K3| <= 3"),
    Invariant("exp-defect-at-zero", "leggett-garg", 1e-12, _exp_defect_at_zero, "scenario Exp defect vanishes at T = 0"),
)
INVARIANT_NAMES = tuple(inv.name for inv in INVARIANTS)


# deliberate faults


def _tau_radical_over_tan(k, t_reduced):
    x = np.tan(t_reduced)
    return np.arctan(np.sign(x) * np.sqrt(k**2 * np.abs(x)))


def _gamma_without_quadrant(p):
    num = math.sin(p.phi) * math.sin(p.alpha)
    den = math.cos(p.alpha) + math.cos(p.phi) * math.sin(p.alpha)
    return math.atan(num / den) if den != 0 else math.pi / 2


FAULTS = {
    "tau-radical": (dyn, "_branch_phase", _tau_radical_over_tan),
    "gamma-quadrant": (dyn, "gamma", _gamma_without_quadrant),
    "exp-legitimate": (lg, "LEGITIMATE_SCENARIOS", frozenset(lg.ScenarioKind)),
}


@contextlib.contextmanager
def injected(*faults: str) -> Iterator[None]:
    """Temporarily swap library internals for known-wrong variants."""
    saved = []
    try:
        for name in faults:
            try:
                module, attr, replacement = FAULTS[name]
            except KeyError:
                raise ValueError(f"unknown fault {name!r}; choose from {sorted(FAULTS)}") from None
            saved.append((module, attr, getattr(module, attr)))
            setattr(module, attr, replacement)
        yield
    finally:
        for module, attr, original in reversed(saved):
            setattr(module, attr, original)


def run(
    samples: int = 20,
    seed: int = 0,
    tol_overrides: dict[str, float] | None = None,
    faults: tuple[str, ...] = (),
    only: tuple[str, ...] | None = None,
) -> list[Outcome]:
    if samples < 1:
        raise ValueError("samples must be a positive integer")
    tol_overrides = dict(tol_overrides or {})
    unknown = set(tol_overrides) - set(INVARIANT_NAMES) - {"*"}
    if unknown:
        raise ValueError(f"unknown invariant(s) in tolerance overrides: {sorted(unknown)}")
    outcomes = []
    with injected(*faults), np.errstate(invalid="ignore", divide="ignore"):
        for inv in INVARIANTS:
            if only and inv.name not in only:
                continue
            ctx = Context(rng=np.random.default_rng([seed, INVARIANT_NAMES.index(inv.name)]), samples=samples)
            tol = tol_overrides.get(inv.name, tol_overrides.get("*", inv.tol))
            try:
                value = float(inv.check(ctx))
            except (ArithmeticError, ValueError):
                value = float("nan")
            outcomes.append(Outcome(inv.name, inv.module, value, tol))
    return outcomes


def report(outcomes: list[Outcome]) -> str:
    lines = []
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        lines.append(f"{status}  {o.module:<13} {o.name:<24} value={o.value:.3e}  tol={o.tol:.1e}")
    failed = [o.name for o in outcomes if not o.passed]
    lines.append(f"{len(outcomes) - len(failed)}/{len(outcomes)} invariants passed")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    return "\n".join(lines)
