"""Dense 2x2 complex linear algebra for a single qubit.

Operators are numpy ``complex128`` arrays whose last two axes have shape
``(2, 2)``; leading axes broadcast, so a stack of operators evaluated on a
time grid goes through the same functions as a single matrix. States are
arrays with trailing shape ``(2,)``.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-12

_PAULI = {
    "identity": np.array([[1, 0], [0, 1]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class NotUnitaryError(ValueError):
    pass


class NotInvolutoryError(ValueError):
    """Raised when an exponent generator is not Hermitian with h @ h == I."""


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol > 0 or not np.isfinite(tol):
        raise ValueError(f"tolerance must be a positive finite number, got {tol!r}")
    return tol


def pauli(axis: str) -> np.ndarray:
    """Return sigma_x, sigma_y, sigma_z or the identity (``axis='identity'``)."""
    key = {"i": "identity", "0": "identity"}.get(axis, axis)
    try:
        return _PAULI[key].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


IDENTITY = pauli("identity")
SX = pauli("x")
SY = pauli("y")
SZ = pauli("z")


def operator(entries) -> np.ndarray:
    """Build an operator from row-major entries ``(a11, a12, a21, a22)`` or a 2x2 nested list."""
    a = np.asarray(entries, dtype=complex)
    if a.shape == (4,):
        a = a.reshape(2, 2)
    if a.shape[-2:] != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("operator entries must be finite")
    return a


def entries(a: np.ndarray) -> tuple[complex, complex, complex, complex]:
    """Row-major entries of a single operator."""
    return tuple(complex(z) for z in np.asarray(a).reshape(4))


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.matmul(a, b)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def trace(a: np.ndarray):
    return np.trace(a, axis1=-2, axis2=-1)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) - mul(b, a)


def frobenius_distance(a: np.ndarray, b: np.ndarray):
    d = np.abs(np.asarray(a) - np.asarray(b)) ** 2
    out = np.sqrt(d.sum(axis=(-2, -1)))
    return float(out) if np.ndim(out) == 0 else out


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(frobenius_distance(a, adjoint(a)) <= tol))


def unitarity_defect(a: np.ndarray):
    """Frobenius distance between a^dagger a and the identity."""
    return frobenius_distance(mul(adjoint(a), a), IDENTITY)


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(unitarity_defect(a) <= check_tol(tol)))


def exp_traceless_hermitian(h: np.ndarray, theta, tol: float = 1e-10) -> np.ndarray:
    """Return exp(-i theta h) for a Hermitian involution h.

    Uses cos(theta) I - i sin(theta) h, exact whenever h @ h == I. ``theta``
    may be an array; the result then carries ``theta``'s shape in front.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise NotInvolutoryError("generator is not Hermitian")
    if not np.all(frobenius_distance(mul(h, h), IDENTITY) <= tol):
        raise NotInvolutoryError("generator does not square to the identity")
    theta = np.asarray(theta, dtype=float)[..., None, None]
    return np.cos(theta) * IDENTITY - 1j * np.sin(theta) * h


def state(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.shape[-1:] != (2,):
        raise ValueError(f"expected a 2-component state, got shape {psi.shape}")
    if not np.all(np.abs(np.linalg.norm(psi, axis=-1) - 1.0) <= DEFAULT_TOL):
        raise ValueError("state must have unit norm")
    return psi


KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def evolve(psi: np.ndarray, u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Apply a unitary to a pure state."""
    if not is_unitary(u, tol):
        raise NotUnitaryError("evolution operator is not unitary")
    return np.matmul(u, np.asarray(psi, dtype=complex)[..., None])[..., 0]
