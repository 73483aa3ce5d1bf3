"""The four matrix groups SE(2), SE(3), SO(3) and SL(2,R).

Coordinate conventions:

* SO(3): ``[wx, wy, wz]``, hat is the usual skew-symmetric map.
* SE(2): ``[vx, vy, w]``.
* SE(3): ``[vx, vy, vz, wx, wy, wz]`` (translation first), 4x4 homogeneous.
* SL(2,R): coefficients on ``E1 = [[1,0],[0,-1]]``, ``E2 = [[0,1],[0,0]]``,
  ``E3 = [[0,0],[1,0]]``.

Exponentials and logarithms are closed form; below an angle of 1e-4 the
trigonometric coefficients switch to their Taylor expansions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlgebraStructureError,
    BranchCutError,
    DimensionError,
    KindMismatchError,
    MembershipError,
)
from .matrix import mat_inverse, mat_mul

STRUCTURE_TOL = 1e-8
MEMBERSHIP_TOL = 1e-8
REGIME_TOL = 1e-9
SMALL_ANGLE = 1e-4
# rotation angles must stay below pi - ROTATION_MARGIN for log to be defined
ROTATION_MARGIN = 1e-6
# SL(2,R) log requires trace > -2 + TRACE_MARGIN
TRACE_MARGIN = 1e-9


class GroupKind(enum.Enum):
    SE2 = ("se2", 3, 3)
    SE3 = ("se3", 4, 6)
    SO3 = ("so3", 3, 3)
    SL2R = ("sl2r", 2, 3)

    def __init__(self, tag: str, ambient_dim: int, algebra_dim: int):
        self.tag = tag
        self.ambient_dim = ambient_dim
        self.algebra_dim = algebra_dim

    def __str__(self) -> str:
        return self.tag

    @classmethod
    def parse(cls, value: "str | GroupKind") -> "GroupKind":
        if isinstance(value, GroupKind):
            return value
        for kind in cls:
            if kind.tag == str(value).lower():
                return kind
        raise ValueError(f"unknown group {value!r}; expected one of se2, se3, so3, sl2r")


class Regime(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Coordinates of a Lie algebra element in the fixed basis of ``kind``."""

    kind: GroupKind
    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.float64).reshape(-1)
        if coords.shape[0] != self.kind.algebra_dim:
            raise DimensionError(
                f"{self.kind} algebra vectors have {self.kind.algebra_dim} coordinates, got {coords.shape[0]}"
            )
        if not np.all(np.isfinite(coords)):
            raise ValueError("algebra coordinates must be finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def __mul__(self, scale: float) -> "AlgebraVector":
        return AlgebraVector(self.kind, self.coords * scale)

    __rmul__ = __mul__

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        _same_kind(self.kind, other.kind)
        return AlgebraVector(self.kind, self.coords + other.coords)

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(self.kind, -self.coords)

    def __repr__(self) -> str:
        return f"AlgebraVector({self.kind.tag}, {self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A matrix checked to lie on the manifold of ``kind``."""

    kind: GroupKind
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        n = self.kind.ambient_dim
        if m.shape != (n, n):
            raise DimensionError(f"{self.kind} elements are {n}x{n}, got shape {m.shape}")
        check_membership(self.kind, m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, kind: GroupKind) -> "GroupElement":
        return cls(kind, np.eye(kind.ambient_dim))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.kind, mat_inverse(self.matrix))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"GroupElement({self.kind.tag}, {self.matrix.tolist()})"


def _same_kind(a: GroupKind, b: GroupKind) -> None:
    if a is not b:
        raise KindMismatchError(f"group kind mismatch: {a} vs {b}")


_EYE = {n: np.eye(n) for n in (2, 3, 4)}


def rotation_drift(r: np.ndarray) -> float:
    """Frobenius norm of R^T R - I."""
    g = r.T @ r - _EYE[r.shape[0]]
    return math.sqrt(float(np.sum(g * g)))


def _det(m: np.ndarray) -> float:
    if m.shape == (2, 2):
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    (a, b, c), (d, e, f), (g, h, i) = m.tolist()
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def check_membership(kind: GroupKind, m: np.ndarray, tol: float = MEMBERSHIP_TOL) -> None:
    if not np.all(np.isfinite(m)):
        raise MembershipError(f"{kind} element has non-finite entries")
    if kind is GroupKind.SL2R:
        det = _det(m)
        if abs(det - 1.0) >= tol:
            raise MembershipError(f"sl2r element has det {det!r}, expected 1")
        return
    if kind is GroupKind.SO3:
        rot = m
    else:
        n = kind.ambient_dim
        if m[n - 1].tolist() != [0.0] * (n - 1) + [1.0]:
            raise MembershipError(f"{kind} element bottom row is not (0, ..., 0, 1)")
        rot = m[: n - 1, : n - 1]
    drift = rotation_drift(rot)
    if drift >= tol:
        raise MembershipError(f"{kind} rotation block is not orthonormal (drift {drift:.3e})")
    det = _det(rot)
    if kind is GroupKind.SO3 and abs(det - 1.0) >= tol:
        raise MembershipError(f"so3 element has det {det!r}, expected 1")
    if det <= 0:
        raise MembershipError(f"{kind} rotation block has non-positive determinant")


# -- hat / vee ---------------------------------------------------------------


def _skew(w) -> np.ndarray:
    wx, wy, wz = w
    return np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])


def hat_coords(kind: GroupKind, c: np.ndarray) -> np.ndarray:
    if len(c) != kind.algebra_dim:
        raise DimensionError(f"{kind} expects {kind.algebra_dim} coordinates, got {len(c)}")
    if kind is GroupKind.SO3:
        return _skew(c)
    if kind is GroupKind.SE2:
        vx, vy, w = c
        return np.array([[0.0, -w, vx], [w, 0.0, vy], [0.0, 0.0, 0.0]])
    if kind is GroupKind.SE3:
        out = np.zeros((4, 4))
        out[:3, :3] = _skew(c[3:])
        out[:3, 3] = c[:3]
        return out
    a, b, cc = c
    return np.array([[a, b], [cc, -a]])


def hat(v: AlgebraVector) -> np.ndarray:
    return hat_coords(v.kind, v.coords)


def _skew_vee(m: np.ndarray, kind: GroupKind) -> np.ndarray:
    asym = np.max(np.abs(m + m.T))
    if asym > STRUCTURE_TOL:
        raise AlgebraStructureError(f"{kind} rotation block is not skew-symmetric (|M + M^T| = {asym:.3e})")
    return np.array([(m[2, 1] - m[1, 2]) / 2, (m[0, 2] - m[2, 0]) / 2, (m[1, 0] - m[0, 1]) / 2])


def vee(m, kind: GroupKind) -> AlgebraVector:
    m = np.asarray(m, dtype=np.float64)
    n = kind.ambient_dim
    if m.shape != (n, n):
        raise DimensionError(f"{kind} algebra matrices are {n}x{n}, got shape {m.shape}")
    if kind is GroupKind.SL2R:
        tr = m[0, 0] + m[1, 1]
        if abs(tr) > STRUCTURE_TOL:
            raise AlgebraStructureError(f"sl2r element has trace {tr!r}, expected 0")
        return AlgebraVector(kind, [(m[0, 0] - m[1, 1]) / 2, m[0, 1], m[1, 0]])
    if kind is GroupKind.SO3:
        return AlgebraVector(kind, _skew_vee(m, kind))
    if np.max(np.abs(m[n - 1])) > STRUCTURE_TOL:
        raise AlgebraStructureError(f"{kind} algebra element must have a zero bottom row")
    if kind is GroupKind.SE2:
        blk = m[:2, :2]
        asym = np.max(np.abs(blk + blk.T))
        if asym > STRUCTURE_TOL:
            raise AlgebraStructureError(f"se2 rotation block is not skew-symmetric (|M + M^T| = {asym:.3e})")
        return AlgebraVector(kind, [m[0, 2], m[1, 2], (m[1, 0] - m[0, 1]) / 2])
    return AlgebraVector(kind, np.concatenate([m[:3, 3], _skew_vee(m[:3, :3], kind)]))


# -- trigonometric coefficients with small-angle series ------------------------


def _sinc(t: float) -> float:
    """sin(t)/t"""
    if abs(t) < SMALL_ANGLE:
        t2 = t * t
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(t) / t


def _cosc(t: float) -> float:
    """(1 - cos t)/t^2"""
    if abs(t) < SMALL_ANGLE:
        t2 = t * t
        return 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    s = math.sin(t / 2)
    return 2.0 * s * s / (t * t)


def _sinc3(t: float) -> float:
    """(t - sin t)/t^3"""
    if abs(t) < SMALL_ANGLE:
        t2 = t * t
        return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0
    return (t - math.sin(t)) / (t * t * t)


def _inv_v_coeff(t: float) -> float:
    """(1 - (t/2) cot(t/2)) / t^2, the K^2 coefficient of the inverse left Jacobian."""
    if abs(t) < SMALL_ANGLE:
        t2 = t * t
        return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    half = t / 2
    return (1.0 - half * math.cos(half) / math.sin(half)) / (t * t)


# -- per-group closed forms on raw arrays ---------------------------------------


def _so3_exp(w: np.ndarray) -> np.ndarray:
    theta = math.sqrt(float(w @ w))
    k = _skew(w)
    return _EYE[3] + _sinc(theta) * k + _cosc(theta) * (k @ k)


def _so3_log(r: np.ndarray) -> np.ndarray:
    cos_t = (np.trace(r) - 1.0) / 2.0
    axis_sin = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]) / 2.0
    sin_t = math.sqrt(float(axis_sin @ axis_sin))
    theta = math.atan2(sin_t, cos_t)
    if theta >= math.pi - ROTATION_MARGIN:
        raise BranchCutError(f"rotation angle {theta:.9f} is at or beyond the pi branch cut")
    if theta < 2.5:
        return axis_sin / _sinc(theta)
    # near pi the antisymmetric part vanishes; recover the axis from the symmetric part
    sym = (r + r.T) / 2.0 - cos_t * _EYE[3]
    i = int(np.argmax(np.diag(sym)))
    axis = sym[:, i] / math.sqrt(sym[i, i])
    axis /= np.linalg.norm(axis)
    if axis @ axis_sin < 0:
        axis = -axis
    return theta * axis


def _se2_exp(c: np.ndarray) -> np.ndarray:
    vx, vy, w = c
    a = _sinc(w)
    b = _cosc(w) * w
    cw, sw = math.cos(w), math.sin(w)
    return np.array([
        [cw, -sw, a * vx - b * vy],
        [sw, cw, b * vx + a * vy],
        [0.0, 0.0, 1.0],
    ])


def _se2_log(m: np.ndarray) -> np.ndarray:
    w = math.atan2(m[1, 0], m[0, 0])
    if abs(w) >= math.pi - ROTATION_MARGIN:
        raise BranchCutError(f"rotation angle {w:.9f} is at or beyond the pi branch cut")
    a = _sinc(w)
    b = _cosc(w) * w
    den = a * a + b * b
    tx, ty = m[0, 2], m[1, 2]
    return np.array([(a * tx + b * ty) / den, (-b * tx + a * ty) / den, w])


def _se3_exp(c: np.ndarray) -> np.ndarray:
    rho, w = c[:3], c[3:]
    theta = math.sqrt(float(w @ w))
    k = _skew(w)
    k2 = k @ k
    out = np.eye(4)
    out[:3, :3] = _EYE[3] + _sinc(theta) * k + _cosc(theta) * k2
    left_jac = _EYE[3] + _cosc(theta) * k + _sinc3(theta) * k2
    out[:3, 3] = left_jac @ rho
    return out


def _se3_log(m: np.ndarray) -> np.ndarray:
    w = _so3_log(m[:3, :3])
    theta = math.sqrt(float(w @ w))
    k = _skew(w)
    inv_jac = _EYE[3] - 0.5 * k + _inv_v_coeff(theta) * (k @ k)
    return np.concatenate([inv_jac @ m[:3, 3], w])


def _sl2_coeffs(det: float) -> tuple[float, float]:
    """(C, S) with exp(A) = C I + S A for traceless A, as functions of det(A).

    A^2 = -det(A) I, so C = sum (-det)^k/(2k)! and S = sum (-det)^k/(2k+1)!.
    """
    if abs(det) < SMALL_ANGLE * SMALL_ANGLE:
        return 1.0 - det / 2.0 + det * det / 24.0, 1.0 - det / 6.0 + det * det / 120.0
    if det > 0:
        t = math.sqrt(det)
        return math.cos(t), math.sin(t) / t
    s = math.sqrt(-det)
    return math.cosh(s), math.sinh(s) / s


def _sl2_exp(c: np.ndarray) -> np.ndarray:
    a = hat_coords(GroupKind.SL2R, c)
    det = -(c[0] * c[0]) - c[1] * c[2]
    cc, ss = _sl2_coeffs(det)
    return cc * _EYE[2] + ss * a


def _sl2_log(m: np.ndarray) -> np.ndarray:
    half_tr = (m[0, 0] + m[1, 1]) / 2.0
    if half_tr <= -1.0 + TRACE_MARGIN / 2:
        raise BranchCutError(
            f"sl2r element has trace {2 * half_tr!r} <= -2; no real logarithm on the principal branch"
        )
    x = half_tr - 1.0
    if abs(x) < 1e-8:
        # theta/sin(theta) expanded around trace 2
        scale = 1.0 - x / 3.0 + 2.0 * x * x / 15.0
    elif x < 0:
        theta = math.acos(half_tr)
        scale = theta / math.sin(theta)
    else:
        s = math.acosh(half_tr)
        scale = s / math.sinh(s)
    a = scale * (m - half_tr * _EYE[2])
    return np.array([(a[0, 0] - a[1, 1]) / 2.0, a[0, 1], a[1, 0]])


_EXP = {
    GroupKind.SO3: _so3_exp,
    GroupKind.SE2: _se2_exp,
    GroupKind.SE3: _se3_exp,
    GroupKind.SL2R: _sl2_exp,
}
_LOG = {
    GroupKind.SO3: _so3_log,
    GroupKind.SE2: _se2_log,
    GroupKind.SE3: _se3_log,
    GroupKind.SL2R: _sl2_log,
}


def exp_coords(kind: GroupKind, c: np.ndarray) -> np.ndarray:
    """Closed-form exponential on raw coordinates; no membership re-check."""
    return _EXP[kind](np.asarray(c, dtype=np.float64))


def log_coords(kind: GroupKind, m: np.ndarray) -> np.ndarray:
    """Closed-form logarithm on a raw matrix; raises BranchCutError off the principal branch."""
    return _LOG[kind](np.asarray(m, dtype=np.float64))


def group_exp(v: AlgebraVector) -> GroupElement:
    return GroupElement(v.kind, exp_coords(v.kind, v.coords))


def group_log(g: GroupElement) -> AlgebraVector:
    return AlgebraVector(g.kind, log_coords(g.kind, g.matrix))


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    _same_kind(a.kind, b.kind)
    return GroupElement(a.kind, mat_mul(a.matrix, b.matrix))


def relative(a: GroupElement, b: GroupElement) -> GroupElement:
    """a^-1 b"""
    _same_kind(a.kind, b.kind)
    return GroupElement(a.kind, mat_mul(mat_inverse(a.matrix), b.matrix))


def check_loggable(v: AlgebraVector) -> None:
    """Raise BranchCutError unless log(exp(v)) recovers v."""
    c = v.coords
    if v.kind is GroupKind.SL2R:
        det = -(c[0] * c[0]) - c[1] * c[2]
        if det > 0 and math.sqrt(det) >= math.pi - ROTATION_MARGIN:
            raise BranchCutError(
                f"elliptic sl2r increment with angle {math.sqrt(det):.6f} is outside the principal branch"
            )
        return
    w = c[2:] if v.kind is GroupKind.SE2 else c[-3:]
    theta = float(np.linalg.norm(w))
    if theta >= math.pi - ROTATION_MARGIN:
        raise BranchCutError(f"{v.kind} increment rotates by {theta:.6f} rad, outside the principal branch")


def classify_regime(v: AlgebraVector) -> Regime:
    if v.kind is not GroupKind.SL2R:
        raise KindMismatchError(f"regimes are defined for sl2r generators only, got {v.kind}")
    a, b, c = v.coords
    det = -a * a - b * c
    if det > REGIME_TOL:
        return Regime.ELLIPTIC
    if det < -REGIME_TOL:
        return Regime.HYPERBOLIC
    return Regime.PARABOLIC
