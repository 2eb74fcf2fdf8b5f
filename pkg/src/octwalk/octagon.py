"""Symmetric genus-two fundamental octagon and its Fuchsian group.

The octagon family has a single module ``(a, alpha)``: vertices at
``a * i**k`` and ``b * exp(1j*(alpha + k*pi/2))``.  :func:`build` derives every
other quantity in closed form; :func:`construction_residual` and
:func:`check_group_relation` verify the construction independently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .hyperbolic import (
    IDENTITY,
    DiskPoint,
    GeodesicArc,
    MoebiusMap,
    distance_from_origin,
    mobius_apply,
    translation_matrix,
)

__all__ = [
    "InadmissibleModule",
    "ModuleParams",
    "OctagonGeometry",
    "ADMISSIBILITY_MARGIN",
    "admissibility_bound",
    "admissible",
    "build",
    "construction_residual",
    "check_group_relation",
    "relation_word",
    "neighbor_centers",
    "step_distances",
    "vertex_angle",
    "parse_angle",
]

QUARTER = math.pi / 2
ADMISSIBILITY_MARGIN = 1e-9


class InadmissibleModule(ValueError):
    """Raised when ``(a, alpha)`` lies outside the region where the octagon exists."""


@dataclass(frozen=True)
class ModuleParams:
    a: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < QUARTER:
            raise InadmissibleModule(f"alpha = {self.alpha} must lie in (0, pi/2)")
        if not 0.0 < self.a < 1.0:
            raise InadmissibleModule(f"a = {self.a} must lie in (0, 1)")


def admissibility_bound(alpha: float) -> float:
    """Lower bound on ``a`` for a given vertex angle."""
    return 1.0 / (math.sqrt(2.0) * math.cos(alpha - math.pi / 4))


def admissible(params: ModuleParams) -> bool:
    return params.a - admissibility_bound(params.alpha) > ADMISSIBILITY_MARGIN


@dataclass(frozen=True)
class OctagonGeometry:
    params: ModuleParams
    t_plus: float
    t_minus: float
    r_plus: float
    r_minus: float
    phi_plus: float
    phi_minus: float
    b: float
    beta: float
    gamma_angle: float
    vertices: tuple[DiskPoint, ...]
    sides: tuple[GeodesicArc, ...]
    omega: tuple[DiskPoint, ...]
    midpoints: tuple[DiskPoint, ...]
    generators: tuple[MoebiusMap, ...]

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def alpha(self) -> float:
        return self.params.alpha

    def generator(self, i: int) -> MoebiusMap:
        """Generator by its 1-based walk index (1..4 -> g0..g3, 5..8 -> inverses)."""
        if not 1 <= i <= 8:
            raise IndexError(f"generator index {i} outside 1..8")
        return self.generators[i - 1]

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "alpha": self.alpha,
            "t_plus": self.t_plus,
            "t_minus": self.t_minus,
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "phi_plus": self.phi_plus,
            "phi_minus": self.phi_minus,
            "b": self.b,
            "beta": self.beta,
            "gamma_angle": self.gamma_angle,
            "vertices": [p.to_pair() for p in self.vertices],
            "sides": [s.to_json() for s in self.sides],
            "omega": [p.to_pair() for p in self.omega],
            "midpoints": [p.to_pair() for p in self.midpoints],
            "generators": [g.to_json() for g in self.generators],
        }


def build(params: ModuleParams) -> OctagonGeometry:
    if not admissible(params):
        raise InadmissibleModule(
            f"a = {params.a} does not exceed the bound 1/(sqrt(2) cos(alpha - pi/4)) = "
            f"{admissibility_bound(params.alpha):.12g} for alpha = {params.alpha}"
        )
    a, alpha = params.a, params.alpha
    a2 = a * a
    shift = alpha - math.pi / 4
    t_plus = a2 + math.tan(shift)
    t_minus = a2 - math.tan(shift)
    r_plus = math.sqrt(t_plus**2 + (1 - a2) ** 2) / (2 * a)
    r_minus = math.sqrt(t_minus**2 + (1 - a2) ** 2) / (2 * a)
    phi_plus = math.atan2(t_plus, 1 + a2)
    phi_minus = math.atan2(1 + a2, t_minus)

    c2 = 2 * a2 * math.cos(shift) ** 2
    beta = math.atan2((1 - a2) * c2, c2 - 1)
    gamma_angle = QUARTER - beta
    b = 1.0 / (math.sqrt(2.0) * a * math.cos(shift))

    den = 1 - a2 * b * b
    w_plus = (b * cmath.exp(1j * alpha) * (1 - a2) + a * (1 - b * b)) / den
    w_minus = (b * cmath.exp(1j * alpha) * (1 - a2) + 1j * a * (1 - b * b)) / den
    omegas = (w_plus, w_minus, 1j * w_plus, 1j * w_minus)
    mids = tuple(w / (1 + math.sqrt(1 - abs(w) ** 2)) for w in omegas)

    g = [translation_matrix(w) for w in omegas]
    generators = tuple(g + [m.inverse() for m in g])

    vertices = []
    sides = []
    for k in range(4):
        rot = cmath.exp(1j * k * QUARTER)
        vertices.append(a * rot)
        vertices.append(b * cmath.exp(1j * alpha) * rot)
        sides.append(GeodesicArc(r_plus, phi_plus + k * QUARTER))
        sides.append(GeodesicArc(r_minus, phi_minus + k * QUARTER))

    return OctagonGeometry(
        params=params,
        t_plus=t_plus,
        t_minus=t_minus,
        r_plus=r_plus,
        r_minus=r_minus,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        b=b,
        beta=beta,
        gamma_angle=gamma_angle,
        vertices=tuple(DiskPoint.from_complex(z) for z in vertices),
        sides=tuple(sides),
        omega=tuple(DiskPoint.from_complex(w) for w in omegas),
        midpoints=tuple(DiskPoint.from_complex(p) for p in mids),
        generators=generators,
    )


def construction_residual(geom: OctagonGeometry) -> float:
    """Largest absolute residual of the seven defining equations of the octagon
    (Gauss-Bonnet angle sum plus the arc intersections at ``a`` and ``b e^{i alpha}``)."""
    a, alpha, b = geom.a, geom.alpha, geom.b
    cp = math.sqrt(1 + geom.r_plus**2)
    cm = math.sqrt(1 + geom.r_minus**2)
    pp, pm = geom.phi_plus, geom.phi_minus
    rr = geom.r_plus * geom.r_minus
    residuals = [
        geom.beta + geom.gamma_angle - QUARTER,
        1 + a * a - 2 * a * cp * math.cos(pp),
        1 + a * a - 2 * a * cm * math.sin(pm),
        # at z = a the "+" arc meets the "-" arc rotated by -pi/2
        a * a - a * (cp * math.cos(pp) + cm * math.sin(pm)) + cp * cm * math.sin(pm - pp)
        + rr * math.cos(geom.beta),
        1 + b * b - 2 * b * cp * math.cos(alpha - pp),
        1 + b * b - 2 * b * cm * math.cos(pm - alpha),
        b * b - b * (cp * math.cos(alpha - pp) + cm * math.cos(pm - alpha)) + cp * cm * math.cos(pm - pp)
        + rr * math.cos(geom.gamma_angle),
    ]
    return max(abs(r) for r in residuals)


def relation_word(geom: OctagonGeometry, order: str = "g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3") -> MoebiusMap:
    """Evaluate a word in the generators written as e.g. ``"g0 g1^-1 g2"``."""
    result = IDENTITY
    for token in order.split():
        k = int(token[1])
        index = k + 4 if token.endswith("^-1") else k
        result = result @ geom.generators[index]
    return result


def check_group_relation(geom: OctagonGeometry, order: str | None = None) -> float:
    word = relation_word(geom) if order is None else relation_word(geom, order)
    return word.deviation(IDENTITY)


def neighbor_centers(geom: OctagonGeometry) -> tuple[DiskPoint, ...]:
    """Centers ``gamma_i[0]`` of the eight cells adjacent to the fundamental one."""
    return tuple(mobius_apply(g, 0j) for g in geom.generators)


def step_distances(geom: OctagonGeometry) -> tuple[float, ...]:
    return tuple(distance_from_origin(p) for p in neighbor_centers(geom))


def vertex_angle(geom: OctagonGeometry, k: int = 0) -> float:
    """Interior angle at vertex ``k`` (0-based, counter-clockwise from ``a``),
    measured from the tangent vectors of the two arcs meeting there."""
    z = geom.vertices[k].z
    before, after = geom.sides[k - 1], geom.sides[k]
    t1 = 1j * (z - before.center)
    t2 = 1j * (z - after.center)
    cos_angle = (t1 * t2.conjugate()).real / (abs(t1) * abs(t2))
    # interior angle is the supplement of the angle between tangents of consecutive sides
    return math.pi - math.acos(max(-1.0, min(1.0, cos_angle)))


def parse_angle(text: str | float) -> float:
    """Parse radians given as a number or as ``"pi"``, ``"pi/k"``, ``"m*pi/k"``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = text.strip().lower().replace(" ", "")
    if "pi" not in s:
        return float(s)
    head, _, tail = s.partition("pi")
    head = head.rstrip("*")
    coeff = {"": 1.0, "+": 1.0, "-": -1.0}.get(head)
    if coeff is None:
        coeff = float(head)
    denom = 1.0
    if tail:
        if not tail.startswith("/"):
            raise ValueError(f"cannot parse angle {text!r}")
        denom = float(tail[1:])
    return coeff * math.pi / denom
