"""Multifractal analysis of a walk-length ensemble.

All quantities derive from ``ln Z_N(q)`` (see :func:`octwalk.walks.partition_function`)
and are evaluated at the enumerated ``N``; no ``N -> infinity`` extrapolation
is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .walks import LengthSpectrum, partition_function

__all__ = [
    "QGrid",
    "TauPoint",
    "TauCurve",
    "moment",
    "tau",
    "spectrum_report",
    "information_entropy",
    "alpha_extremes",
    "unit_slope_entropy",
    "saddle_alpha_limits",
]


@dataclass(frozen=True)
class QGrid:
    q_min: float = -10.0
    q_max: float = 10.0
    dq: float = 0.01

    def __post_init__(self):
        if not self.dq > 0:
            raise ValueError(f"dq must be positive, got {self.dq}")
        if self.q_min > 0.0 or self.q_max < 1.0:
            raise ValueError("grid must contain q = 0 and q = 1")
        for name, x in (("q_min", self.q_min), ("q_max", self.q_max), ("1", 1.0)):
            k = x / self.dq
            if abs(k - round(k)) > 1e-9:
                raise ValueError(f"{name} = {x} is not a multiple of dq = {self.dq}")

    @property
    def values(self) -> np.ndarray:
        ks = np.arange(round(self.q_min / self.dq), round(self.q_max / self.dq) + 1)
        return np.round(ks * self.dq, 12)


@dataclass(frozen=True)
class TauPoint:
    q: float
    tau: float
    alpha: float
    f: float
    d_q: float


@dataclass(frozen=True)
class TauCurve:
    points: tuple[TauPoint, ...]
    generation: int

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    def at(self, q: float) -> TauPoint:
        for p in self.points:
            if abs(p.q - q) < 1e-12:
                return p
        raise KeyError(q)


def moment(spectrum: LengthSpectrum, q: float) -> float:
    """Log of the normalized moment ``Z(q) / Z(1)**q``."""
    return partition_function(spectrum, q) - q * partition_function(spectrum, 1.0)


def tau(spectrum: LengthSpectrum, q: float) -> float:
    return 2.0 / spectrum.log_count * moment(spectrum, q)


def _tau_values(spectrum: LengthSpectrum, qs: np.ndarray) -> np.ndarray:
    lz1 = partition_function(spectrum, 1.0)
    scale = 2.0 / spectrum.log_count
    return np.array([scale * (partition_function(spectrum, float(q)) - q * lz1) for q in qs])


def _alpha_from_tau(taus: np.ndarray, dq: float) -> np.ndarray:
    alpha = np.empty_like(taus)
    alpha[1:-1] = -(taus[2:] - taus[:-2]) / (2.0 * dq)
    alpha[0] = -(taus[1] - taus[0]) / dq
    alpha[-1] = -(taus[-1] - taus[-2]) / dq
    return alpha


def spectrum_report(spectrum: LengthSpectrum, grid: QGrid = QGrid()) -> TauCurve:
    """Mass exponents, Hoelder exponents, singularity spectrum and generalized
    dimensions on every point of ``grid``.

    ``alpha = -dtau/dq`` uses central differences (one-sided at the ends);
    ``D_q`` takes its limiting value ``alpha(1)`` within ``dq/2`` of ``q = 1``.
    """
    qs = grid.values
    taus = _tau_values(spectrum, qs)
    alphas = _alpha_from_tau(taus, grid.dq)
    fs = qs * alphas + taus
    alpha_one = alphas[int(np.argmin(np.abs(qs - 1.0)))]
    points = []
    for q, t, a, f in zip(qs, taus, alphas, fs):
        d = alpha_one if abs(q - 1.0) <= grid.dq / 2 else t / (1.0 - q)
        points.append(TauPoint(float(q), float(t), float(a), float(f), float(d)))
    return TauCurve(tuple(points), spectrum.generation)


def information_entropy(spectrum: LengthSpectrum, h: float = 0.01) -> float:
    """``S = alpha(1) = -tau'(1)``, by a central difference of step ``h``."""
    return -(tau(spectrum, 1.0 + h) - tau(spectrum, 1.0 - h)) / (2.0 * h)


def unit_slope_entropy(curve: TauCurve) -> float:
    """Value of ``f`` where the sampled ``f(alpha)`` curve has slope one.

    Independent of the derivative at ``q = 1``: slopes are taken between
    neighboring ``(alpha, f)`` samples and the crossing is interpolated.
    """
    alpha = curve.column("alpha")[1:-1]
    f = curve.column("f")[1:-1]
    slope = np.diff(f) / np.diff(alpha)
    mid_f = 0.5 * (f[1:] + f[:-1])
    idx = np.nonzero(np.diff(np.sign(slope - 1.0)))[0]
    if idx.size == 0:
        raise ValueError("f(alpha) never reaches unit slope on this grid")
    k = int(idx[0])
    w = (1.0 - slope[k]) / (slope[k + 1] - slope[k])
    return float(mid_f[k] + w * (mid_f[k + 1] - mid_f[k]))


def alpha_extremes(spectrum: LengthSpectrum, grid: QGrid = QGrid()) -> tuple[float, float]:
    """Finite-q proxies ``tau(q)/(1-q)`` at the grid ends for ``alpha_min`` and ``alpha_max``."""
    if grid.q_min > -10.0 or grid.q_max < 10.0:
        raise ValueError("grid must span at least [-10, 10]")
    lo = tau(spectrum, grid.q_max) / (1.0 - grid.q_max)
    hi = tau(spectrum, grid.q_min) / (1.0 - grid.q_min)
    return lo, hi


def saddle_alpha_limits(spectrum: LengthSpectrum) -> tuple[float, float]:
    """``q -> +/-infinity`` limits of ``-tau'(q)``, where a single extreme length dominates."""
    if spectrum.lengths is None:
        lo_len, hi_len = spectrum.min_length, spectrum.max_length
    else:
        lo_len, hi_len = float(spectrum.lengths.min()), float(spectrum.lengths.max())
    scale = 2.0 / spectrum.log_count
    lz1 = partition_function(spectrum, 1.0)
    n = spectrum.generation
    return scale * (lz1 - hi_len / n), scale * (lz1 - lo_len / n)


def finite_n_note(n: int) -> str:
    return f"tau_N evaluated at finite N = {n}; no N -> infinity extrapolation"

