"""Small-matrix primitives on the rotation group SO(3).

Everything here operates on plain numpy arrays: 3-vectors and 3x3
matrices. Rotation matrices map body-frame coordinates to inertial
coordinates, i.e. s = R b.
"""
from __future__ import annotations

import numpy as np

# Tolerance for the symmetric part of a matrix passed to vee().
SKEW_TOL = 1e-9
# A matrix R is accepted as a rotation when ||R^T R - I||_F <= ROTATION_TOL
# and det R > 0.
ROTATION_TOL = 1e-9
# Below this angle the Rodrigues coefficients are evaluated by Taylor series.
_SMALL_ANGLE = 1e-6

_EYE3 = np.eye(3)


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cross product of two 3-vectors (faster than numpy.cross, which
    pays heavy per-call overhead for this fixed small size)."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of v, so that hat(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def vee(m: np.ndarray, tol: float | None = SKEW_TOL) -> np.ndarray:
    """Inverse of hat(). The input is antisymmetrized first, so near-skew
    matrices produced by floating-point arithmetic are accepted; a symmetric
    part larger than `tol` raises ValueError."""
    if tol is not None:
        sym = 0.5 * (m + m.T)
        if np.abs(sym).max() > tol:
            raise ValueError(
                f"matrix is not skew-symmetric (symmetric part {np.abs(sym).max():.3e})")
    a = 0.5 * (m - m.T)
    return np.array([a[2, 1], a[0, 2], a[1, 0]])


def exp_so3(v: np.ndarray) -> np.ndarray:
    """Rodrigues exponential map from an axis-angle vector to a rotation.

    For angles below 1e-6 the sin/cos coefficients are replaced by their
    second-order Taylor expansions to avoid 0/0.
    """
    theta2 = float(v @ v)
    theta = np.sqrt(theta2)
    if theta < _SMALL_ANGLE:
        a = 1.0 - theta2 / 6.0
        b = 0.5 - theta2 / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / theta2
    k = hat(v)
    return _EYE3 + a * k + b * (k @ k)


def _det3(m: np.ndarray) -> float:
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def project_so3(m: np.ndarray) -> np.ndarray:
    """Nearest rotation to m in the Frobenius norm (SVD polar projection).

    Raises ValueError for singular or reflection-dominant input (det <= 0).
    """
    if _det3(m) <= 0.0:
        raise ValueError("cannot project matrix with non-positive determinant onto SO(3)")
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    if _det3(r) < 0.0:
        r = (u * np.array([1.0, 1.0, -1.0])) @ vt
    return r


def rotation_defect(r: np.ndarray) -> float:
    """Frobenius norm of R^T R - I."""
    return float(np.linalg.norm(r.T @ r - _EYE3))


def is_rotation(r: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    return rotation_defect(r) <= tol and np.linalg.det(r) > 0.0


def check_rotation(r: np.ndarray, tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate and return r; raises ValueError if r is not a rotation."""
    if not is_rotation(r, tol):
        raise ValueError(
            f"not a rotation matrix (orthogonality defect {rotation_defect(r):.3e}, "
            f"det {np.linalg.det(r):.6f})")
    return r
