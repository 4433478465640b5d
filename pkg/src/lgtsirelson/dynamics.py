"""Generating Hamiltonian of the unitary family and its closed-form propagators.

The Hamiltonian is H_p(t) = E_p(t) P with a fixed direction P = sigma_gamma,
so all H_p(t) commute and the propagator between t1 and t2 is
exp(-i (tau(t2) - tau(t1)) P), where tau is an antiderivative of E_p.
Two oracles that never touch tau are provided alongside: a central
finite-difference Hamiltonian and a midpoint product integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .family import FamilyParams, norm_sq, sigma_phi, u_tilde
from .qubit import IDENTITY, adjoint, exp_traceless_hermitian, mul

# |t'| beyond this is treated as sitting on a tan pole
POLE_WINDOW = 1e-8
MAX_FD_STEP = 1e-3


@dataclass(frozen=True)
class SpectralData:
    gamma: float
    direction: np.ndarray
    energy_prefactor: float

    @property
    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenprojectors (I + P)/2 and (I - P)/2 for eigenvalues +E and -E."""
        return (IDENTITY + self.direction) / 2, (IDENTITY - self.direction) / 2


def gamma(p: FamilyParams) -> float:
    """Direction angle of the Hamiltonian, quadrant-correct, in [0, pi]."""
    num = math.sin(p.phi) * math.sin(p.alpha)
    den = math.cos(p.alpha) + math.cos(p.phi) * math.sin(p.alpha)
    return math.atan2(num, den)


def energy_prefactor(p: FamilyParams) -> float:
    return (math.cos(p.alpha) + math.sin(p.alpha)) * math.sqrt(p.min_norm_sq)


def spectral(p: FamilyParams) -> SpectralData:
    g = gamma(p)
    return SpectralData(gamma=g, direction=sigma_phi(g), energy_prefactor=energy_prefactor(p))


def energy(p: FamilyParams, t):
    """Instantaneous eigenvalue E_p(t) > 0; period pi in t."""
    e = energy_prefactor(p) / np.asarray(norm_sq(p, t))
    return float(e) if e.ndim == 0 else e


def hamiltonian(p: FamilyParams, t) -> np.ndarray:
    e = np.asarray(energy(p, t))[..., None, None]
    return e * spectral(p).direction


def hamiltonian_numeric(p: FamilyParams, t, h: float = 1e-5, t0: float = 0.0) -> np.ndarray:
    """i (dU/dt) U^dagger from a central difference of U_p(., t0), Hermitized."""
    if not 0 < h <= MAX_FD_STEP:
        raise ValueError(f"finite-difference step must lie in (0, {MAX_FD_STEP:g}], got {h!r}")
    t = np.asarray(t, dtype=float)
    du = (u_tilde(p, t + h, t0) - u_tilde(p, t - h, t0)) / (2 * h)
    raw = 1j * mul(du, adjoint(u_tilde(p, t, t0)))
    return (raw + adjoint(raw)) / 2


def phase_ratio(p: FamilyParams) -> float:
    """k = sqrt((1 + cos(phi) sin(2 alpha)) / (1 + sin(2 alpha))), in (0, 1]."""
    return math.sqrt(p.min_norm_sq / (1.0 + math.sin(2 * p.alpha)))


def _branch_phase(k: float, t_reduced):
    return np.arctan(k * np.tan(t_reduced))


def tau(p: FamilyParams, t):
    """Phase integral: the antiderivative of E_p with tau(0) = 0.

    Continuous and strictly increasing, tau(t + pi) = tau(t) + pi.
    """
    t = np.asarray(t, dtype=float)
    k = phase_ratio(p)
    n = np.floor(t / math.pi + 0.5)
    tr = t - n * math.pi
    inner = np.abs(tr) <= math.pi / 2 - POLE_WINDOW
    side = np.where(tr > 0, 1.0, -1.0)
    # on the pole the slope is E_p(pi/2) = 1/k; tau'' vanishes there
    near_pole = side * math.pi / 2 + (tr - side * math.pi / 2) / k
    value = np.where(inner, _branch_phase(k, np.where(inner, tr, 0.0)), near_pole)
    out = n * math.pi + value
    return float(out) if out.ndim == 0 else out


def propagator_closed(p: FamilyParams, t2, t1) -> np.ndarray:
    """exp(-i (tau(t2) - tau(t1)) P)."""
    dtau = np.asarray(tau(p, t2)) - np.asarray(tau(p, t1))
    return exp_traceless_hermitian(spectral(p).direction, dtau)


def propagator_stepped(p: FamilyParams, t2: float, t1: float, n_steps: int = 10_000) -> np.ndarray:
    """Time-ordered midpoint product of exp(-i E_p(t_mid) dt P), later steps on the left."""
    if int(n_steps) != n_steps or n_steps < 1:
        raise ValueError(f"n_steps must be a positive integer, got {n_steps!r}")
    n_steps = int(n_steps)
    dt = (t2 - t1) / n_steps
    mids = t1 + (np.arange(n_steps) + 0.5) * dt
    factors = exp_traceless_hermitian(spectral(p).direction, energy(p, mids) * dt)
    factors = factors.reshape(-1, 2, 2)
    # pairwise reduction keeps the chronological order: (F_{2j+1} F_{2j}) ...
    while len(factors) > 1:
        if len(factors) % 2:
            factors = np.concatenate([factors, IDENTITY[None]])
        factors = mul(factors[1::2], factors[0::2])
    return factors[0]
