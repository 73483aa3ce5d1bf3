"""Small dense matrix helpers (2x2, 3x3, 4x4) on top of numpy.

Matrices are plain ``float64`` ndarrays in row-major (C) order. The helpers
add the dimension checks and closed-form inverses the rest of the package
relies on.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NumericalError, SingularMatrixError

SINGULAR_TOL = 1e-12

_I3 = np.eye(3)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _check_square(m: np.ndarray) -> int:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


def _finite(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise NumericalError("non-finite entries in matrix result")
    return m


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return _finite(a @ b)


def _is_homogeneous(m: np.ndarray) -> bool:
    return m[-1].tolist() == [0.0] * (m.shape[0] - 1) + [1.0]


def mat_inverse(a) -> np.ndarray:
    """Inverse by cofactors (2x2, 3x3) or the rigid-motion block formula (4x4).

    A 4x4 input must be homogeneous with an orthonormal rotation block; other
    square sizes fall back to an LU solve.
    """
    m = as_matrix(a)
    n = _check_square(m)
    if n == 1:
        det = m[0, 0]
        if abs(det) <= SINGULAR_TOL:
            raise SingularMatrixError(det)
        return np.array([[1.0 / det]])
    if n == 2:
        (p, q), (r, s) = m
        det = p * s - q * r
        if abs(det) <= SINGULAR_TOL:
            raise SingularMatrixError(det)
        return _finite(np.array([[s, -q], [-r, p]]) / det)
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = m.tolist()
        c00, c01, c02 = e * i - f * h, f * g - d * i, d * h - e * g
        det = a * c00 + b * c01 + c * c02
        if abs(det) <= SINGULAR_TOL:
            raise SingularMatrixError(det)
        adj = np.array([
            [c00, c * h - b * i, b * f - c * e],
            [c01, a * i - c * g, c * d - a * f],
            [c02, b * g - a * h, a * e - b * d],
        ])
        return _finite(adj / det)
    if n == 4 and _is_homogeneous(m):
        rot = m[:3, :3]
        gram = rot.T @ rot - _I3
        if float(np.sum(gram * gram)) < 1e-16:
            # orthonormal rotation block: |det| = 1, the inverse is the transpose
            out = np.eye(4)
            out[:3, :3] = rot.T
            out[:3, 3] = -rot.T @ m[:3, 3]
            return out
    det = float(np.linalg.det(m))
    if abs(det) <= SINGULAR_TOL:
        raise SingularMatrixError(det)
    return _finite(np.linalg.solve(m, np.eye(n)))


def mat_exp_series(a, terms: int = 30) -> np.ndarray:
    """Truncated power series sum_{k=0}^{terms} a^k / k!.

    No scaling and squaring: this is the reference the closed-form group
    exponentials are checked against, so it stays literal.
    """
    m = as_matrix(a)
    n = _check_square(m)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ m / k
        total = total + term
    return _finite(total)


def frobenius_norm(a) -> float:
    return float(np.sqrt(np.sum(np.square(as_matrix(a)))))
