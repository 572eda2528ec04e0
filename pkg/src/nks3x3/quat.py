"""Quaternion and imaginary-quaternion algebra.

Scalar types (`Quaternion`, `ImQuat`) back the point/tangent layer.  The
array helpers at the bottom operate on numpy arrays with a trailing axis
of length 4 (layout w, x, y, z) or 3 (x, y, z) and broadcast over leading
axes; the grid pipelines in `surface` and `wente` use those.

All values are immutable and every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroQuaternion

# Norms below this are treated as exactly zero (not invertible).
ZERO_NORM = 1e-300


@dataclass(frozen=True)
class Quaternion:
    """Quaternion w + x*i + y*j + z*k with float64 components."""

    w: float
    x: float
    y: float
    z: float

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def normalize(self) -> "Quaternion":
        n = self.norm()
        if n < ZERO_NORM:
            raise ZeroQuaternion("cannot normalize a zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def inverse(self) -> "Quaternion":
        return inverse(self)

    def dot(self, other: "Quaternion") -> float:
        """Euclidean R^4 inner product, equal to Re(conj(self) * other)."""
        return (self.w * other.w + self.x * other.x
                + self.y * other.y + self.z * other.z)

    def imag(self) -> "ImQuat":
        return ImQuat(self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @staticmethod
    def from_array(a) -> "Quaternion":
        return Quaternion(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


@dataclass(frozen=True)
class ImQuat:
    """Pure-imaginary quaternion x*i + y*j + z*k, identified with R^3."""

    x: float
    y: float
    z: float

    def __add__(self, other):
        return ImQuat(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return ImQuat(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return ImQuat(-self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return ImQuat(self.x * other, self.y * other, self.z * other)
        return NotImplemented

    __rmul__ = __mul__

    def dot(self, other: "ImQuat") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "ImQuat") -> "ImQuat":
        return ImQuat(self.y * other.z - self.z * other.y,
                      self.z * other.x - self.x * other.z,
                      self.x * other.y - self.y * other.x)

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def to_quaternion(self) -> Quaternion:
        # w = 0 exactly; the embedding loses nothing.
        return Quaternion(0.0, self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @staticmethod
    def from_array(a) -> "ImQuat":
        return ImQuat(float(a[0]), float(a[1]), float(a[2]))


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z,
        a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x,
    )


def inverse(q: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(q)/|q|^2; equals the conjugate for unit q."""
    n2 = q.norm2()
    if n2 < ZERO_NORM:
        raise ZeroQuaternion("quaternion norm below invertibility threshold")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


def commutator_cross(a: ImQuat, b: ImQuat) -> tuple[ImQuat, ImQuat]:
    """Both sides of the commutator identity a*b - b*a = 2 a x b.

    Returns (a*b - b*a as an ImQuat, 2*cross(a, b)); the two agree for all
    inputs and are returned separately so the identity can be tested.
    """
    qa, qb = a.to_quaternion(), b.to_quaternion()
    comm = mul(qa, qb) - mul(qb, qa)
    return comm.imag(), 2.0 * a.cross(b)


def exp_im(v: ImQuat) -> Quaternion:
    """Exponential of an imaginary quaternion: cos|v| + (v/|v|) sin|v|.

    Unit norm by construction; exp_im(0) = 1 exactly.
    """
    t = v.norm()
    if t < 1e-8:
        # sin(t)/t to machine precision for tiny t; exact 1 at t = 0.
        s = 1.0 - t * t / 6.0
        return Quaternion(math.cos(t), v.x * s, v.y * s, v.z * s)
    s = math.sin(t) / t
    return Quaternion(math.cos(t), v.x * s, v.y * s, v.z * s)


# ---------------------------------------------------------------------------
# Array forms: trailing axis 4 (w,x,y,z) or 3 (x,y,z), broadcasting leading axes.

def qmul(a, b):
    """Hamilton product on (..., 4) arrays; preserves complex dtypes.

    The structure constants are real, so applying the same arithmetic to
    complex components is exactly the complex-bilinear extension.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    w1, x1, y1, z1 = np.moveaxis(a, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(b, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
        w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
    ], axis=-1)


def qconj(a):
    """Quaternion conjugation on (..., 4) arrays (imaginary slots negated)."""
    out = np.asarray(a).copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm(a):
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def qnormalize(a):
    a = np.asarray(a, dtype=float)
    n = qnorm(a)
    if np.any(n < ZERO_NORM):
        raise ZeroQuaternion("zero quaternion in array normalize")
    return a / n[..., None]


def qexp_im(v):
    """exp_im on (..., 3) arrays, returning (..., 4) unit quaternions."""
    v = np.asarray(v, dtype=float)
    t = np.linalg.norm(v, axis=-1)
    s = np.where(t < 1e-8, 1.0 - t * t / 6.0, np.sin(t) / np.maximum(t, 1e-300))
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = np.cos(t)
    out[..., 1:] = v * s[..., None]
    return out


def vec3(a):
    """Imaginary part of a (..., 4) quaternion array as (..., 3)."""
    return np.asarray(a, dtype=float)[..., 1:]


def embed3(v):
    """(..., 3) vectors into (..., 4) quaternions with zero real part."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (4,))
    out[..., 1:] = v
    return out
