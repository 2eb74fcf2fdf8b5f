"""Poincare-disk geometry and PSU(1,1) Moebius maps.

Points are immutable :class:`DiskPoint` values, maps are :class:`MoebiusMap`
values normalized to ``|u|^2 - |v|^2 = 1`` and canonicalized modulo the sign
ambiguity of PSU(1,1).  Every function here is pure.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Union

__all__ = [
    "DiskPoint",
    "MoebiusMap",
    "GeodesicArc",
    "IDENTITY",
    "as_complex",
    "hyperbolic_distance",
    "distance_from_origin",
    "mobius_apply",
    "mobius_compose",
    "mobius_inverse",
    "half_turn_matrix",
    "translation_matrix",
    "is_hyperbolic",
    "geodesic_point",
]


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite disk point ({self.re}, {self.im})")
        if self.re * self.re + self.im * self.im >= 1.0:
            raise ValueError(f"point ({self.re}, {self.im}) is not inside the unit disk")

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def to_pair(self) -> list[float]:
        return [self.re, self.im]


PointLike = Union[DiskPoint, complex, float]


def as_complex(p: PointLike) -> complex:
    """Return ``p`` as a complex number, validating that it lies in the disk."""
    if isinstance(p, DiskPoint):
        return p.z
    z = complex(p)
    if abs(z) >= 1.0:
        raise ValueError(f"point {z} is not inside the unit disk")
    return z


def _canonical(u: complex, v: complex) -> tuple[complex, complex]:
    det = (u * u.conjugate() - v * v.conjugate()).real
    if not det > 0.0:
        raise ValueError(f"matrix with |u|^2-|v|^2 = {det} is not in SU(1,1)")
    # rescale only when the determinant is off by more than its own rounding error,
    # which grows like |u|^2 for long products
    if abs(det - 1.0) > 64 * sys.float_info.epsilon * abs(u) ** 2:
        s = math.sqrt(det)
        u, v = u / s, v / s
    if u.real < 0.0 or (u.real == 0.0 and u.imag < 0.0):
        u, v = -u, -v
    return u, v


@dataclass(frozen=True)
class MoebiusMap:
    """Element of PSU(1,1), stored as the first row ``(u, v)`` of
    ``[[u, v], [conj(v), conj(u)]]``.

    Construct through :meth:`from_uv` (or the builders below) to get a
    normalized, sign-canonical representative.
    """

    u: complex
    v: complex

    @classmethod
    def from_uv(cls, u: complex, v: complex) -> "MoebiusMap":
        return cls(*_canonical(complex(u), complex(v)))

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        """Build from a 2x2 SU(1,1)-shaped matrix; only the first row is read."""
        return cls.from_uv(complex(m[0][0]), complex(m[0][1]))

    def matrix(self) -> list[list[complex]]:
        return [[self.u, self.v], [self.v.conjugate(), self.u.conjugate()]]

    @property
    def trace(self) -> float:
        return 2.0 * self.u.real

    def __call__(self, z: PointLike) -> DiskPoint:
        return mobius_apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return mobius_compose(self, other)

    def inverse(self) -> "MoebiusMap":
        return mobius_inverse(self)

    def deviation(self, other: "MoebiusMap") -> float:
        """Max-norm distance between canonical representatives."""
        return max(abs(self.u - other.u), abs(self.v - other.v))

    def to_json(self) -> dict:
        return {"u": [self.u.real, self.u.imag], "v": [self.v.real, self.v.imag]}


IDENTITY = MoebiusMap(1 + 0j, 0j)


@dataclass(frozen=True)
class GeodesicArc:
    """Geodesic of the disk: a circle of Euclidean radius ``radius`` whose
    center sits at ``sqrt(1 + radius**2) * exp(1j * angle)``."""

    radius: float
    angle: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"arc radius must be positive, got {self.radius}")
        object.__setattr__(self, "angle", self.angle % (2.0 * math.pi))

    @property
    def center(self) -> complex:
        return math.sqrt(1.0 + self.radius**2) * cmath.exp(1j * self.angle)

    def to_json(self) -> dict:
        return {"radius": self.radius, "angle": self.angle}


def hyperbolic_distance(z: PointLike, w: PointLike) -> float:
    z, w = as_complex(z), as_complex(w)
    # asinh form of acosh(1 + 2|z-w|^2/den); keeps full precision for nearby points
    den = (1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2)
    return 2.0 * math.asinh(abs(z - w) / math.sqrt(den))


def distance_from_origin(z: PointLike) -> float:
    r = abs(as_complex(z))
    return 2.0 * math.atanh(r)


def mobius_apply(m: MoebiusMap, z: PointLike) -> DiskPoint:
    z = as_complex(z)
    w = (m.u * z + m.v) / (m.v.conjugate() * z + m.u.conjugate())
    return DiskPoint.from_complex(w)


def mobius_compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """``m1 @ m2``: apply ``m2`` first, then ``m1``."""
    u = m1.u * m2.u + m1.v * m2.v.conjugate()
    v = m1.u * m2.v + m1.v * m2.u.conjugate()
    return MoebiusMap.from_uv(u, v)


def mobius_inverse(m: MoebiusMap) -> MoebiusMap:
    return MoebiusMap.from_uv(m.u.conjugate(), -m.v)


def half_turn_matrix(p: PointLike) -> MoebiusMap:
    """Generator ``H(p)``: product of half turns about the origin and about ``p``."""
    p = as_complex(p)
    r2 = abs(p) ** 2
    scale = -1.0 / (1.0 - r2)
    return MoebiusMap.from_uv(scale * (1.0 + r2), scale * 2.0 * p)


def translation_matrix(omega: PointLike) -> MoebiusMap:
    """Hyperbolic translation along the diameter through ``omega``, sending 0 to ``omega``."""
    omega = as_complex(omega)
    scale = -1.0 / math.sqrt(1.0 - abs(omega) ** 2)
    return MoebiusMap.from_uv(scale, scale * omega)


def is_hyperbolic(m: MoebiusMap) -> bool:
    return abs(m.u + m.u.conjugate()) > 2.0


def geodesic_point(arc: GeodesicArc, s: float) -> DiskPoint:
    """Point at signed proper length ``s`` along ``arc``; ``s = 0`` is the
    point of the arc nearest the origin."""
    if not math.isfinite(s):
        raise ValueError("arc parameter must be finite")
    R = arc.radius
    c = math.sqrt(1.0 + R * R)
    # exp(s) overflows past ~709; the point is on the boundary to double precision well before that
    s = max(-700.0, min(700.0, s))
    ch, sh = math.cosh(s), math.sinh(s)
    z = cmath.exp(1j * arc.angle) * complex(ch, -R * sh) / (c * ch + R)
    r = abs(z)
    if r >= 1.0:
        z *= math.nextafter(1.0, 0.0) / r
    return DiskPoint.from_complex(z)
