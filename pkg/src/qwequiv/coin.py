"""SU(2) coin-toss operators: construction, Euler decomposition, canonical basis rotation.

Coins are plain ``(2, 2)`` complex128 numpy arrays.  Two parametrisations are
supported::

    axis-angle:  U = exp(i phi/2 r.sigma) = cos(phi/2) I + i sin(phi/2) r.sigma
    Euler (zyz): U = exp(i eta/2 sz) exp(i theta/2 sy) exp(i xi/2 sz)

so that ``U = [[a, b], [-conj(b), conj(a)]]`` with
``a = exp(i(eta+xi)/2) cos(theta/2)`` and ``b = exp(i(eta-xi)/2) sin(theta/2)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "AxisAngle",
    "EulerAngles",
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "DEFAULT_TOL",
    "from_axis_angle",
    "from_euler",
    "theta_coin",
    "euler_decompose",
    "normalize_u2_to_su2",
    "basis_rotation_for_axis",
    "is_unitary",
    "is_su2",
    "check_su2",
    "parse_coin_spec",
]

DEFAULT_TOL = 1e-12

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

for _m in (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


class AxisAngle(NamedTuple):
    phi: float
    axis: tuple[float, float, float]


class EulerAngles(NamedTuple):
    eta: float
    theta: float
    xi: float


def _wrap_pi(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


def _unit_axis(axis, tol: float) -> np.ndarray:
    r = np.asarray(axis, dtype=float)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise InvalidInputError(f"axis must be a finite real 3-vector, got {axis!r}")
    if abs(np.linalg.norm(r) - 1.0) > tol:
        raise InvalidInputError(f"axis must have unit norm, got |r| = {np.linalg.norm(r)!r}")
    return r


def _pauli_dot(r: np.ndarray) -> np.ndarray:
    return r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    if m.shape != (2, 2):
        return False
    return bool(np.max(np.abs(m.conj().T @ m - IDENTITY)) <= tol)


def is_su2(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return is_unitary(m, tol) and abs(np.linalg.det(m) - 1.0) <= tol


def check_su2(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``m`` as a complex128 array, raising if it is not in SU(2)."""
    u = np.asarray(m, dtype=np.complex128)
    if u.shape != (2, 2):
        raise InvalidInputError(f"coin must be 2x2, got shape {u.shape}")
    if not is_su2(u, tol):
        raise InvalidInputError("coin must be unitary with unit determinant")
    return u


def from_axis_angle(p: AxisAngle, tol: float = DEFAULT_TOL) -> np.ndarray:
    phi, axis = p
    if not math.isfinite(phi):
        raise InvalidInputError("rotation angle must be finite")
    r = _unit_axis(axis, tol)
    return math.cos(phi / 2) * IDENTITY + 1j * math.sin(phi / 2) * _pauli_dot(r)


def from_euler(p: EulerAngles) -> np.ndarray:
    eta, theta, xi = p
    if not all(math.isfinite(v) for v in (eta, theta, xi)):
        raise InvalidInputError("Euler angles must be finite")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    plus = np.exp(0.5j * (eta + xi))
    minus = np.exp(0.5j * (eta - xi))
    return np.array(
        [[plus * c, minus * s], [-np.conj(minus) * s, np.conj(plus) * c]],
        dtype=np.complex128,
    )


def theta_coin(theta: float) -> np.ndarray:
    """The real coin exp(i theta/2 sigma_y)."""
    return from_euler(EulerAngles(0.0, theta, 0.0))


def euler_decompose(u: np.ndarray, tol: float = DEFAULT_TOL) -> EulerAngles:
    """Invert :func:`from_euler`.

    ``theta`` lands in [0, pi] and ``xi`` in (-pi, pi].  ``eta`` is normally in
    (-pi, pi] as well, but only half of SU(2) is reachable with both outer
    angles in that square, so ``eta`` falls back to (-2 pi, 2 pi] when needed.
    At the poles (theta = 0 or pi) ``xi`` is set to 0.
    """
    u = np.asarray(u, dtype=np.complex128)
    a, b = u[0, 0], u[0, 1]
    theta = 2.0 * math.atan2(abs(b), abs(a))
    if abs(b) <= tol:
        return EulerAngles(2.0 * float(np.angle(a)), theta, 0.0)
    if abs(a) <= tol:
        return EulerAngles(2.0 * float(np.angle(b)), theta, 0.0)

    half_sum = float(np.angle(a))
    half_diff = float(np.angle(b))
    eta, xi = half_sum + half_diff, half_sum - half_diff
    # (eta, xi) is fixed modulo the lattice spanned by (2pi, 2pi) and (2pi, -2pi).
    if not -math.pi < xi <= math.pi:
        shift = xi - _wrap_pi(xi)
        eta, xi = eta - shift, xi - shift
    eta = _wrap_pi(eta / 2) * 2
    if not -math.pi < eta <= math.pi:
        for de, dx in ((2, 2), (2, -2), (-2, 2), (-2, -2)):
            e, x = eta + de * math.pi, xi + dx * math.pi
            if -math.pi < e <= math.pi and -math.pi < x <= math.pi:
                eta, xi = e, x
                break
    return EulerAngles(eta, theta, xi)


def normalize_u2_to_su2(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Split a U(2) matrix as ``exp(i * phase) * su2``."""
    m = np.asarray(m, dtype=np.complex128)
    if not is_unitary(m, tol):
        raise InvalidInputError("matrix is not unitary")
    phase = float(np.angle(np.linalg.det(m))) / 2.0
    return m * np.exp(-1j * phase), phase


def basis_rotation_for_axis(axis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unitary X with X (r.sigma) X^dagger = sigma_z.

    The rows of X are the conjugated eigenvectors of r.sigma for eigenvalues +1
    and -1.  Each eigenvector is phased so that its first component is real and
    non-negative, or, when that component vanishes, its second component is real
    and positive.  X is unitary but its determinant may be -1.
    """
    r = _unit_axis(axis, tol)
    _, vecs = np.linalg.eigh(_pauli_dot(r))
    rows = []
    for v in (vecs[:, 1], vecs[:, 0]):
        pivot = v[0] if abs(v[0]) >= tol else v[1]
        v = v * (abs(pivot) / pivot)
        if abs(v[0]) < tol:
            v[0] = 0.0
        rows.append(v.conj())
    return np.array(rows, dtype=np.complex128)


def parse_coin_spec(text: str) -> tuple[np.ndarray, float]:
    """Parse ``euler:eta,theta,xi``, ``axis:phi,rx,ry,rz`` or ``matrix:<8 floats>``.

    Returns the SU(2) coin and the global phase stripped from a ``matrix:`` input
    (0 for the other forms).
    """
    kind, sep, body = text.partition(":")
    if not sep:
        raise InvalidInputError(f"coin spec needs a '<kind>:' prefix: {text!r}")
    try:
        values = [float(v) for v in body.split(",")]
    except ValueError as exc:
        raise InvalidInputError(f"malformed number in coin spec {text!r}") from exc
    expected = {"euler": 3, "axis": 4, "matrix": 8}
    if kind not in expected:
        raise InvalidInputError(f"unknown coin kind {kind!r}")
    if len(values) != expected[kind]:
        raise InvalidInputError(f"{kind} coin needs {expected[kind]} numbers, got {len(values)}")
    if not all(math.isfinite(v) for v in values):
        raise InvalidInputError("coin spec values must be finite")

    if kind == "euler":
        return from_euler(EulerAngles(*values)), 0.0
    if kind == "axis":
        phi, *axis = values
        r = np.asarray(axis)
        norm = np.linalg.norm(r)
        if norm == 0.0:
            raise InvalidInputError("rotation axis must be non-zero")
        # Decimal literals rarely give exact unit vectors.
        return from_axis_angle(AxisAngle(phi, tuple(r / norm))), 0.0
    m = np.array(values[0::2]) + 1j * np.array(values[1::2])
    # Decimal input carries ~1e-8 rounding; project onto the nearest unitary first.
    w, _, vh = np.linalg.svd(m.reshape(2, 2))
    if not is_unitary(m.reshape(2, 2), 1e-6):
        raise InvalidInputError("matrix coin is not unitary")
    return normalize_u2_to_su2(w @ vh)
