"""Radial Liouville potentials and their link to the Poincare metric.

A potential ``U(r) = A^2 / (r^2 sinh^2(A ln r + C))`` solves the radial
Liouville equation ``U'' + U'/r - U'^2/U = 2 U^2``; with ``A = 1, C = 0`` it
is the conformal factor ``4/(1 - r^2)^2`` of the disk metric.  The functions
here check those statements numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .hyperbolic import GeodesicArc

__all__ = [
    "SingularRadius",
    "PotentialParams",
    "potential",
    "conformal_factor",
    "liouville_residual",
    "euclidean_time",
    "euclidean_time_rate",
    "singular_radius",
    "pullback_to_disk",
]

FD_STEP = 1e-5


class SingularRadius(ValueError):
    """``A ln r + C`` vanishes, so the potential is infinite."""


@dataclass(frozen=True)
class PotentialParams:
    amp: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.amp == 0.0:
            raise ValueError("amplitude A must be non-zero")


def singular_radius(params: PotentialParams) -> float:
    return math.exp(-params.offset / params.amp)


def potential(params: PotentialParams, r: float) -> float:
    if not r > 0.0:
        raise ValueError(f"radius must be positive, got {r}")
    arg = params.amp * math.log(r) + params.offset
    sh = math.sinh(arg)
    if sh == 0.0:
        raise SingularRadius(f"potential is singular at r = {r}")
    return params.amp**2 / (r * r * sh * sh)


def conformal_factor(r: float) -> float:
    return 4.0 / (1.0 - r * r) ** 2


def _potential_ext(params: PotentialParams, r):
    # extended precision keeps the h**-2 roundoff of the second difference well below 1e-6
    r = np.longdouble(r)
    amp = np.longdouble(params.amp)
    sh = np.sinh(amp * np.log(r) + np.longdouble(params.offset))
    if sh == 0:
        raise SingularRadius(f"potential is singular at r = {r}")
    return amp * amp / (r * r * sh * sh)


def liouville_residual(params: PotentialParams, r_grid: Iterable[float], h: float = FD_STEP) -> float:
    """Max over the grid of ``|U'' + U'/r - U'^2/U - 2U^2| / U^2``, with
    derivatives by central differences of step ``h``."""
    h = np.longdouble(h)
    worst = 0.0
    for r in r_grid:
        r = np.longdouble(r)
        u0 = _potential_ext(params, r)
        up = _potential_ext(params, r + h)
        um = _potential_ext(params, r - h)
        d1 = (up - um) / (2 * h)
        d2 = (up - 2 * u0 + um) / (h * h)
        res = abs(d2 + d1 / r - d1 * d1 / u0 - 2 * u0 * u0) / (u0 * u0)
        worst = max(worst, float(res))
    return worst


def euclidean_time(arc: GeodesicArc, s: float) -> float:
    """Euclidean-model time elapsed along ``arc`` from ``s = 0`` to proper length ``s``."""
    if not math.isfinite(s):
        raise ValueError("arc parameter must be finite")
    R = arc.radius
    c = math.sqrt(1 + R * R)
    return R * R * c * math.sinh(s) / (c * math.cosh(s) + R) - 2 * R**3 * math.atan((c - R) * math.tanh(s / 2))


def euclidean_time_rate(arc: GeodesicArc, s: float) -> float:
    """Closed-form ``dt/ds = (1 - |z|^2)^2 / 4`` along a unit-speed geodesic."""
    R = arc.radius
    c = math.sqrt(1 + R * R)
    ch = math.cosh(s)
    # |z(s)|^2 for the arc nearest-point parametrization
    r2 = (ch * ch + R * R * math.sinh(s) ** 2) / (c * ch + R) ** 2
    return (1 - r2) ** 2 / 4


def pullback_to_disk(params: PotentialParams, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Metric coefficients ``(g_rr, g_pp / rho^2)`` of ``U (dr^2 + r^2 dphi^2)``
    pulled back by ``r = exp(-C/A) rho^(1/A)``, ``phi = psi / A``.

    Both equal ``4/(1 - rho^2)^2`` when the two metrics are isometric.
    """
    rho = np.asarray(rho, dtype=float)
    a, c = params.amp, params.offset
    r = np.exp(-c / a) * rho ** (1.0 / a)
    dr = r / (a * rho)
    u = np.array([potential(params, float(x)) for x in r])
    radial = u * dr**2
    angular = u * r**2 / a**2 / rho**2
    return radial, angular
