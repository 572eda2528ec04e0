"""The homogeneous nearly Kahler structure on S3 x S3 in closed form.

Points are pairs of unit quaternions (p, q); tangent vectors are ambient
pairs (U, V) in R^4 x R^4 with U perpendicular to p and V perpendicular
to q.  The module provides the almost complex structure J, the product
metric, the nearly Kahler metric g, the almost product structure P, the
curvature tensor, sectional curvature, and the isometry action
(p, q) -> (a p c^-1, b q c^-1); plus seeded sampling and vectorized
forms of J, P, g for grid pipelines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadInput, BaseMismatch, DegeneratePlane
from .quat import Quaternion, qconj, qmul

SQRT3 = math.sqrt(3.0)

UNIT_TOL = 1e-10
TANGENCY_TOL = 1e-10
BASE_TOL = 1e-9
GRAM_DET_MIN = 1e-12


@dataclass(frozen=True)
class PointNK:
    """A point (p, q) of S3 x S3, both factors unit quaternions."""

    p: Quaternion
    q: Quaternion

    def __post_init__(self):
        for name, val in (("p", self.p), ("q", self.q)):
            if abs(val.norm() - 1.0) > UNIT_TOL:
                raise BadInput(f"{name} is not a unit quaternion: |norm - 1| = "
                               f"{abs(val.norm() - 1.0):.3e}")

    @classmethod
    def normalized(cls, p: Quaternion, q: Quaternion) -> "PointNK":
        return cls(p.normalize(), q.normalize())

    def as_array(self) -> np.ndarray:
        """Ambient coordinates as an 8-vector (p, q)."""
        return np.concatenate([self.p.as_array(), self.q.as_array()])

    @classmethod
    def from_array(cls, arr) -> "PointNK":
        arr = np.asarray(arr, dtype=float)
        return cls(Quaternion.from_array(arr[:4]), Quaternion.from_array(arr[4:8]))


@dataclass(frozen=True)
class TangentNK:
    """A tangent vector (U, V) at base, stored in the ambient embedding."""

    base: PointNK
    U: Quaternion
    V: Quaternion

    def __post_init__(self):
        for name, val, at in (("U", self.U, self.base.p), ("V", self.V, self.base.q)):
            if abs(val.dot(at)) > TANGENCY_TOL * max(1.0, val.norm()):
                raise BadInput(f"{name} is not tangent: |<{name}, base>| = "
                               f"{abs(val.dot(at)):.3e}")

    @classmethod
    def projected(cls, base: PointNK, U: Quaternion, V: Quaternion) -> "TangentNK":
        """Build a tangent vector by removing the radial components."""
        return cls(base, U - U.dot(base.p) * base.p, V - V.dot(base.q) * base.q)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.U.as_array(), self.V.as_array()])

    def __add__(self, other: "TangentNK") -> "TangentNK":
        _require_same_base(self, other)
        return TangentNK(self.base, self.U + other.U, self.V + other.V)

    def __sub__(self, other: "TangentNK") -> "TangentNK":
        _require_same_base(self, other)
        return TangentNK(self.base, self.U - other.U, self.V - other.V)

    def __neg__(self) -> "TangentNK":
        return TangentNK(self.base, -self.U, -self.V)

    def __mul__(self, s: float) -> "TangentNK":
        return TangentNK(self.base, s * self.U, s * self.V)

    __rmul__ = __mul__


def _require_same_base(x: TangentNK, y: TangentNK) -> None:
    d = np.max(np.abs(x.base.as_array() - y.base.as_array()))
    if d > BASE_TOL:
        raise BaseMismatch(f"tangent vectors at different base points (distance {d:.3e})")


@dataclass(frozen=True)
class Plane2:
    """A 2-plane at base spanned by tangent vectors X and Y."""

    base: PointNK
    X: TangentNK
    Y: TangentNK

    def __post_init__(self):
        _require_same_base(self.X, self.Y)
        d = np.max(np.abs(self.base.as_array() - self.X.base.as_array()))
        if d > BASE_TOL:
            raise BaseMismatch(f"plane base differs from span base (distance {d:.3e})")
        if self.gram_det() <= GRAM_DET_MIN:
            raise DegeneratePlane(f"spanning pair nearly dependent: g-Gram det = "
                                  f"{self.gram_det():.3e}")

    def gram_det(self) -> float:
        gxx = g(self.X, self.X)
        gyy = g(self.Y, self.Y)
        gxy = g(self.X, self.Y)
        return gxx * gyy - gxy * gxy


@dataclass(frozen=True)
class IsometryNK:
    """The isometry (p, q) -> (a p c^-1, b q c^-1) of the nearly Kahler S3 x S3."""

    a: Quaternion
    b: Quaternion
    c: Quaternion

    def __post_init__(self):
        for name, val in (("a", self.a), ("b", self.b), ("c", self.c)):
            if abs(val.norm() - 1.0) > UNIT_TOL:
                raise BadInput(f"{name} is not a unit quaternion: |norm - 1| = "
                               f"{abs(val.norm() - 1.0):.3e}")


def J(X: TangentNK) -> TangentNK:
    """Almost complex structure (U,V) -> (2pq^-1 V - U, -2qp^-1 U + V)/sqrt(3)."""
    p, q = X.base.p, X.base.q
    a = p * q.inverse()
    b = q * p.inverse()
    return TangentNK(X.base,
                     (1.0 / SQRT3) * (2.0 * (a * X.V) - X.U),
                     (1.0 / SQRT3) * (-2.0 * (b * X.U) + X.V))


def product_metric(X: TangentNK, Y: TangentNK) -> float:
    """Standard product metric <(U1,V1),(U2,V2)> = Re(U1 conj U2) + Re(V1 conj V2)."""
    _require_same_base(X, Y)
    return X.U.dot(Y.U) + X.V.dot(Y.V)


def g(X: TangentNK, Y: TangentNK) -> float:
    """Nearly Kahler metric g(X,Y) = (1/2)(<X,Y> + <JX,JY>)."""
    _require_same_base(X, Y)
    JX, JY = J(X), J(Y)
    return 0.5 * (X.U.dot(Y.U) + X.V.dot(Y.V) + JX.U.dot(JY.U) + JX.V.dot(JY.V))


def P(X: TangentNK) -> TangentNK:
    """Almost product structure P(U,V) = (p q^-1 V, q p^-1 U)."""
    p, q = X.base.p, X.base.q
    return TangentNK(X.base, (p * q.inverse()) * X.V, (q * p.inverse()) * X.U)


def curvature(U: TangentNK, V: TangentNK, W: TangentNK) -> TangentNK:
    """Curvature tensor of the nearly Kahler metric, R(U,V)W.

    Closed form: 5/12 of the constant-curvature block, 1/12 of the
    Kahler-type block in J, and 1/3 of the block built from P and PJ.
    """
    _require_same_base(U, V)
    _require_same_base(U, W)
    JU, JV, JW = J(U), J(V), J(W)
    PU, PV = P(U), P(V)
    PJU, PJV = P(JU), P(JV)
    out = (5.0 / 12.0) * (g(V, W) * U - g(U, W) * V)
    out = out + (1.0 / 12.0) * (g(JV, W) * JU - g(JU, W) * JV - 2.0 * g(JU, V) * JW)
    out = out + (1.0 / 3.0) * (g(PV, W) * PU - g(PU, W) * PV
                               + g(PJV, W) * PJU - g(PJU, W) * PJV)
    return out


def sectional_curvature(plane: Plane2) -> float:
    """Sectional curvature g(R(X,Y)Y,X) on a g-orthonormalized spanning pair."""
    X, Y = plane.X, plane.Y
    nx = math.sqrt(g(X, X))
    if nx * nx <= GRAM_DET_MIN:
        raise DegeneratePlane("first spanning vector has near-zero length")
    X = (1.0 / nx) * X
    Y = Y - g(Y, X) * X
    ny2 = g(Y, Y)
    if ny2 <= GRAM_DET_MIN:
        raise DegeneratePlane("spanning pair nearly dependent after orthogonalization")
    Y = (1.0 / math.sqrt(ny2)) * Y
    return g(curvature(X, Y, Y), X)


def isometry_apply(F: IsometryNK, x):
    """Apply an isometry to a PointNK or push a TangentNK forward by it."""
    ci = F.c.inverse()
    if isinstance(x, PointNK):
        return PointNK.normalized(F.a * x.p * ci, F.b * x.q * ci)
    if isinstance(x, TangentNK):
        base = PointNK.normalized(F.a * x.base.p * ci, F.b * x.base.q * ci)
        return TangentNK(base, F.a * x.U * ci, F.b * x.V * ci)
    raise BadInput(f"cannot apply isometry to {type(x).__name__}")


def plane_p_perpendicular(base: PointNK) -> Plane2:
    """A J-invariant plane at base with P(plane) g-perpendicular to it.

    Left-translates the pair (i, i/2 + sqrt(3)/2 j) from (1,1); the
    translated span of (X, JX) keeps P-perpendicularity because the
    construction commutes with the isometry a=p, b=q, c=1.
    """
    X = TangentNK(base, base.p * Quaternion(0.0, 1.0, 0.0, 0.0),
                  base.q * Quaternion(0.0, 0.5, SQRT3 / 2.0, 0.0))
    return Plane2(base, X, J(X))


def plane_p_invariant(base: PointNK) -> Plane2:
    """A J-invariant plane at base preserved by P (span of (pi, qi) and its J-image)."""
    i = Quaternion(0.0, 1.0, 0.0, 0.0)
    X = TangentNK(base, base.p * i, base.q * i)
    return Plane2(base, X, J(X))


_MASK64 = (1 << 64) - 1


class Rng:
    """splitmix64 stream with Box-Muller normals.

    The 64-bit mixing constants are fixed so reimplementations in other
    languages reproduce the same draws bit for bit (uniforms are the top
    53 bits scaled by 2^-53).
    """

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64
        self._spare = None

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform draw in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def normal(self) -> float:
        """Standard normal via Box-Muller, one spare cached per pair."""
        if self._spare is not None:
            out, self._spare = self._spare, None
            return out
        u1 = 1.0 - self.uniform()  # (0, 1], keeps the log finite
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def normals(self, shape) -> np.ndarray:
        """Standard normals as an array of the given count or shape."""
        n = int(np.prod(shape))
        return np.array([self.normal() for _ in range(n)]).reshape(shape)


def _as_rng(seed) -> Rng:
    return seed if isinstance(seed, Rng) else Rng(seed)


def random_point(seed) -> PointNK:
    """Uniform point of S3 x S3 from a seed or an Rng stream."""
    rng = _as_rng(seed)
    while True:
        arr = rng.normals(8)
        np1, nq1 = np.linalg.norm(arr[:4]), np.linalg.norm(arr[4:])
        if np1 > 1e-6 and nq1 > 1e-6:
            return PointNK(Quaternion.from_array(arr[:4] / np1),
                           Quaternion.from_array(arr[4:] / nq1))


def random_tangent(base: PointNK, seed) -> TangentNK:
    """Gaussian tangent vector at base from a seed or an Rng stream."""
    rng = _as_rng(seed)
    arr = rng.normals(8)
    return TangentNK.projected(base, Quaternion.from_array(arr[:4]),
                               Quaternion.from_array(arr[4:]))


def j_arrays(p, q, U, V):
    """Vectorized J on (...,4) quaternion arrays; returns (JU, JV)."""
    a = qmul(p, qconj(q))
    b = qmul(q, qconj(p))
    return (2.0 * qmul(a, V) - U) / SQRT3, (-2.0 * qmul(b, U) + V) / SQRT3


def p_arrays(p, q, U, V):
    """Vectorized P on (...,4) quaternion arrays; returns (PU, PV)."""
    return qmul(qmul(p, qconj(q)), V), qmul(qmul(q, qconj(p)), U)


def g_arrays(p, q, U1, V1, U2, V2):
    """Vectorized g on (...,4) quaternion arrays; returns (...) reals."""
    JU1, JV1 = j_arrays(p, q, U1, V1)
    JU2, JV2 = j_arrays(p, q, U2, V2)
    dot = lambda A, B: np.sum(A * B, axis=-1)
    return 0.5 * (dot(U1, U2) + dot(V1, V2) + dot(JU1, JU2) + dot(JV1, JV2))
