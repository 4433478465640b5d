"""The normalized two-exponential unitary family U_p(t) and its two-time propagator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubit import SX, SY, adjoint, frobenius_distance, mul

DEGENERACY_GUARD = 1e-9


class InvalidParametersError(ValueError):
    pass


class DegenerateParametersError(InvalidParametersError):
    """Normalization n_p^2 gets too close to zero for a stable U_p."""


@dataclass(frozen=True)
class FamilyParams:
    """Family parameters p = (phi, alpha), in radians.

    Valid for phi in [0, pi) and alpha in [0, pi/2], with
    1 + cos(phi) sin(2 alpha) kept at or above ``DEGENERACY_GUARD``.
    """

    phi: float
    alpha: float

    def __post_init__(self):
        phi, alpha = float(self.phi), float(self.alpha)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "alpha", alpha)
        if not (math.isfinite(phi) and math.isfinite(alpha)):
            raise InvalidParametersError("phi and alpha must be finite")
        if not 0.0 <= phi < math.pi:
            raise InvalidParametersError(f"phi={phi!r} outside [0, pi)")
        if not 0.0 <= alpha <= math.pi / 2:
            raise InvalidParametersError(f"alpha={alpha!r} outside [0, pi/2]")
        if self.min_norm_sq < DEGENERACY_GUARD:
            raise DegenerateParametersError(
                f"1 + cos(phi) sin(2 alpha) = {self.min_norm_sq:.3e} is below "
                f"the degeneracy guard {DEGENERACY_GUARD:g}"
            )

    @property
    def min_norm_sq(self) -> float:
        """Minimum over t of n_p^2(t), attained at t = pi/2 (mod pi)."""
        return 1.0 + math.cos(self.phi) * math.sin(2 * self.alpha)

    @property
    def homogeneous(self) -> bool:
        """True when U_p reduces to exp(-i t sigma_x) (alpha = 0 or phi = 0)."""
        return self.alpha == 0.0 or self.phi == 0.0


def _time(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("time must be finite")
    return t


def sigma_phi(phi) -> np.ndarray:
    """cos(phi) sigma_x + sin(phi) sigma_y."""
    phi = np.asarray(phi, dtype=float)[..., None, None]
    return np.cos(phi) * SX + np.sin(phi) * SY


def w_matrix(p: FamilyParams, t) -> np.ndarray:
    """cos(alpha) exp(-i t sigma_x) + sin(alpha) exp(-i t sigma_phi), from explicit entries."""
    t = _time(t)
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    diag = np.cos(t) * (ca + sa)
    upper = -1j * np.sin(t) * (ca + np.exp(-1j * p.phi) * sa)
    lower = -1j * np.sin(t) * (ca + np.exp(1j * p.phi) * sa)
    w = np.empty(t.shape + (2, 2), dtype=complex)
    w[..., 0, 0] = diag
    w[..., 0, 1] = upper
    w[..., 1, 0] = lower
    w[..., 1, 1] = diag
    return w


def norm_sq(p: FamilyParams, t):
    """n_p^2(t) = 1 + (cos^2 t + cos(phi) sin^2 t) sin(2 alpha)."""
    t = _time(t)
    n2 = 1.0 + (np.cos(t) ** 2 + math.cos(p.phi) * np.sin(t) ** 2) * math.sin(2 * p.alpha)
    if np.any(n2 < DEGENERACY_GUARD):
        raise DegenerateParametersError(f"n_p^2 fell below {DEGENERACY_GUARD:g}")
    return float(n2) if n2.ndim == 0 else n2


def u_p(p: FamilyParams, t) -> np.ndarray:
    """U_p(t) = W_p(t) / n_p(t) with the positive square root."""
    n = np.sqrt(norm_sq(p, t))
    return w_matrix(p, t) / np.asarray(n)[..., None, None]


def u_tilde(p: FamilyParams, t2, t1) -> np.ndarray:
    """Two-time propagator U_p(t2) U_p(t1)^dagger."""
    return mul(u_p(p, t2), adjoint(u_p(p, t1)))


def homogeneity_defect(p: FamilyParams, t):
    """Frobenius distance between U_p(2t) and U_p(t)^2."""
    u = u_p(p, t)
    return frobenius_distance(u_p(p, 2 * np.asarray(t, dtype=float)), mul(u, u))

