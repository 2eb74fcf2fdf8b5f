"""Random-walk approximation of the length spectrum.

Walk lengths are approximated from the one-step lengths ``l_i`` and the
two-step correction matrix ``xi``; the partition function then becomes an
inhomogeneous multiplicative Markov chain over the eight generator indices,
and a Gaussian model of the length distribution gives a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .hyperbolic import distance_from_origin, mobius_apply
from .octagon import OctagonGeometry

__all__ = [
    "ForbiddenWord",
    "DegenerateVariance",
    "StepLengths",
    "XiMatrix",
    "ChainReport",
    "ALLOWED",
    "PLUS_MASK",
    "MINUS_MASK",
    "step_lengths",
    "xi_matrix",
    "approx_length",
    "theoretical_bounds",
    "chain_partition_function",
    "mean_step_limit",
    "mean_step_ratio",
    "gaussian_parameters",
    "gaussian_closed_form",
    "tau_comparison",
    "VALID_Q",
]

# |q| beyond which the chain and Gaussian forms are reported as out of validity
VALID_Q = 2.0

ALLOWED = np.array([[abs(i - j) != 4 for j in range(8)] for i in range(8)])
# odd 1-based indices (g0, g2 and inverses) carry l_plus
PLUS_MASK = np.array([i % 2 == 0 for i in range(8)])
MINUS_MASK = ~PLUS_MASK


class ForbiddenWord(ValueError):
    """Word contains an immediate backtrack."""


class DegenerateVariance(ValueError):
    """Gaussian model needs a strictly positive step variance."""


@dataclass(frozen=True)
class StepLengths:
    l_plus: float
    l_minus: float

    @property
    def per_index(self) -> np.ndarray:
        return np.where(PLUS_MASK, self.l_plus, self.l_minus)


@dataclass(frozen=True)
class XiMatrix:
    xi: np.ndarray
    mean_xi: float

    @property
    def allowed_values(self) -> np.ndarray:
        return self.xi[ALLOWED]


@dataclass(frozen=True)
class ChainReport:
    """Chain evaluation at one ``(N, q)``.

    ``kernel``, ``k_vector``, ``k_plus`` and ``k_minus`` are scaled by
    ``exp(-log_scale)`` so that large ``N`` does not overflow.
    """

    n: int
    q: float
    kernel: np.ndarray
    k_vector: np.ndarray
    k_plus: float
    k_minus: float
    log_scale: float
    transition_probs: np.ndarray
    log_z_chain: float
    log_z_decomposed: float
    decomposition_residual: float

    @property
    def valid(self) -> bool:
        return abs(self.q) <= VALID_Q

    @property
    def log_k_plus(self) -> float:
        return math.log(self.k_plus) + self.log_scale

    @property
    def log_k_minus(self) -> float:
        return math.log(self.k_minus) + self.log_scale


def step_lengths(geom: OctagonGeometry) -> StepLengths:
    d = [distance_from_origin(mobius_apply(g, 0j)) for g in geom.generators]
    plus = [d[i] for i in range(8) if PLUS_MASK[i]]
    minus = [d[i] for i in range(8) if MINUS_MASK[i]]
    for fam in (plus, minus):
        if max(fam) - min(fam) > 1e-9 * max(fam):
            raise ArithmeticError(f"step lengths within a family disagree: {fam}")
    return StepLengths(plus[0], minus[0])


def xi_matrix(geom: OctagonGeometry) -> XiMatrix:
    ell = [distance_from_origin(mobius_apply(g, 0j)) for g in geom.generators]
    xi = np.empty((8, 8))
    for i, gi in enumerate(geom.generators):
        for j, gj in enumerate(geom.generators):
            xi[i, j] = distance_from_origin(mobius_apply(gi @ gj, 0j)) - 0.5 * (ell[i] + ell[j])
    return XiMatrix(xi, float(xi[ALLOWED].sum() / ALLOWED.sum()))


def _check_word(word: Sequence[int]) -> list[int]:
    idx = [int(i) - 1 for i in word]
    if not idx:
        raise ForbiddenWord("empty word")
    for a, b in zip(idx, idx[1:]):
        if not (0 <= a < 8 and 0 <= b < 8) or not ALLOWED[a, b]:
            raise ForbiddenWord(f"transition {a + 1} -> {b + 1} is not allowed")
    if not 0 <= idx[-1] < 8:
        raise ForbiddenWord(f"index {idx[-1] + 1} outside 1..8")
    return idx


def approx_length(word: Sequence[int], steps: StepLengths, xi: XiMatrix) -> float:
    """Estimated length of a 1-based word from one-step lengths and pair corrections."""
    idx = _check_word(word)
    n = len(idx)
    total = n * steps.per_index[idx[0]]
    for t in range(2, n + 1):
        total += (n + 1 - t) * xi.xi[idx[t - 2], idx[t - 1]]
    return float(total)


def theoretical_bounds(steps: StepLengths, xi: XiMatrix, n: int) -> tuple[float, float, float]:
    """``(L_min, L_mean, L_max)`` predicted for generation ``n``."""
    pairs = n * (n - 1) / 2
    vals = xi.allowed_values
    l_min = n * min(steps.l_plus, steps.l_minus) + pairs * vals.min()
    l_mean = n * (steps.l_plus + steps.l_minus) / 2 + pairs * xi.mean_xi
    l_max = n * (n + 1) / 2 * max(steps.l_plus, steps.l_minus)
    return float(l_min), float(l_mean), float(l_max)


def _transition_weights(xi: XiMatrix, n: int, q: float, t: int) -> np.ndarray:
    return np.where(ALLOWED, np.exp(q * (n + 1 - t) / n * xi.xi), 0.0)


def chain_partition_function(steps: StepLengths, xi: XiMatrix, n: int, q: float) -> ChainReport:
    """Evaluate the multiplicative chain two ways: by propagating the initial
    vector forward, and through the kernel ``K = P^2 P^3 ... P^N`` with its
    ``K_plus``/``K_minus`` reduction."""
    if n < 2:
        raise ValueError(f"chain needs N >= 2, got {n}")
    ell = steps.per_index

    # forward vector propagation, renormalized each step
    vec = np.exp(q * ell - (q * ell).max())
    log_vec = float((q * ell).max())
    for t in range(2, n + 1):
        vec = vec @ _transition_weights(xi, n, q, t)
        s = vec.max()
        vec /= s
        log_vec += math.log(s)
    log_z_chain = log_vec + math.log(vec.sum())

    kernel = np.eye(8)
    log_scale = 0.0
    for t in range(2, n + 1):
        kernel = kernel @ _transition_weights(xi, n, q, t)
        s = kernel.max()
        kernel /= s
        log_scale += math.log(s)
    k_vec = kernel.sum(axis=1)
    k_plus = float(k_vec[PLUS_MASK].mean())
    k_minus = float(k_vec[MINUS_MASK].mean())
    fitted = np.where(PLUS_MASK, k_plus, k_minus)
    residual = float(np.abs(k_vec - fitted).max() / k_vec.max())
    probs = kernel / k_vec[:, None]

    terms = np.array([q * steps.l_plus + math.log(4 * k_plus), q * steps.l_minus + math.log(4 * k_minus)])
    top = terms.max()
    log_z_dec = float(top + math.log(np.exp(terms - top).sum()) + log_scale)

    return ChainReport(
        n=n,
        q=q,
        kernel=kernel,
        k_vector=k_vec,
        k_plus=k_plus,
        k_minus=k_minus,
        log_scale=log_scale,
        transition_probs=probs,
        log_z_chain=log_z_chain,
        log_z_decomposed=log_z_dec,
        decomposition_residual=residual,
    )


def mean_step_limit(xi: XiMatrix) -> float:
    """Asymptotic mean step ``lim L_mean / N**2 = mean_xi / 2``."""
    return 0.5 * xi.mean_xi


def mean_step_ratio(steps: StepLengths, xi: XiMatrix, n: int) -> float:
    return theoretical_bounds(steps, xi, n)[1] / n**2


def gaussian_parameters(steps: StepLengths, xi: XiMatrix, n: int) -> tuple[float, float]:
    """``(l_bar, s2)`` of the Gaussian length model at generation ``n``.

    ``l_bar`` is the predicted mean length over ``n**2``; ``s2`` is one third of
    the variance of ``xi`` over allowed pairs, which is what the pair-correction
    sum contributes when its terms are treated as independent.
    """
    l_bar = theoretical_bounds(steps, xi, n)[1] / n**2
    s2 = float(np.var(xi.allowed_values)) / 3.0
    return l_bar, s2


def _log_erfc(x: float) -> float:
    if x < 25.0:
        return math.log(math.erfc(x))
    # asymptotic series; math.erfc underflows near x = 27
    x2 = x * x
    return -x2 - math.log(x * math.sqrt(math.pi)) + math.log1p(-0.5 / x2 + 0.75 / x2**2 - 1.875 / x2**3)


def _log_erf_sum(a: float, b: float) -> float:
    """``ln(erf(a) + erf(b))`` for ``a + b > 0``, without cancellation when one argument is very negative."""
    if a + b <= 0.0:
        raise ValueError("erf(a) + erf(b) is not positive")
    if a >= 0.0 and b >= 0.0:
        return math.log(math.erf(a) + math.erf(b))
    lo, hi = (a, b) if a < 0.0 else (b, a)
    # erf(hi) + erf(lo) = erfc(-lo) - erfc(hi), with hi > -lo > 0
    big = _log_erfc(-lo)
    return big + math.log1p(-math.exp(_log_erfc(hi) - big))


def gaussian_closed_form(
    steps: StepLengths,
    xi: XiMatrix,
    n: int,
    q: float,
    cutoffs: Optional[tuple[float, float]] = None,
    s2: Optional[float] = None,
) -> tuple[float, float]:
    """``(ln Z, C_N(q))`` of the Gaussian model with tails cut at ``cutoffs``
    (per-step lengths; defaults to the predicted ``L_min/N`` and ``L_max/N``)."""
    l_bar, s2_default = gaussian_parameters(steps, xi, n)
    s2 = s2_default if s2 is None else s2
    if not s2 > 0.0:
        raise DegenerateVariance(f"s^2 = {s2} must be positive")
    if cutoffs is None:
        l_min, _, l_max = theoretical_bounds(steps, xi, n)
        cutoffs = (l_min / n, l_max / n)
    lo, hi = cutoffs
    centre = n * l_bar
    shift = q * n * s2
    width = math.sqrt(2.0 * n * s2)
    log_c = _log_erf_sum((hi - centre - shift) / width, (centre + shift - lo) / width) - _log_erf_sum(
        (hi - centre) / width, (centre - lo) / width
    )
    log_z = math.log(8.0 / 7.0) + log_c + n * (0.5 * q * q * s2 + q * l_bar + math.log(7.0))
    return log_z, math.exp(log_c)


def tau_comparison(
    log_z_exact, steps: StepLengths, xi: XiMatrix, n: int, qs: Sequence[float]
) -> np.ndarray:
    """Rows ``(q, tau_exact, tau_chain, tau_gaussian)``.

    ``log_z_exact`` is a callable ``q -> ln Z_N(q)`` from the enumerated spectrum.
    Each method is normalized by its own ``Z(1)``.
    """
    scale = 2.0 / math.log(8 * 7 ** (n - 1))

    def lz_chain(q):
        return chain_partition_function(steps, xi, n, q).log_z_chain

    def lz_gauss(q):
        return gaussian_closed_form(steps, xi, n, q)[0]

    one = (log_z_exact(1.0), lz_chain(1.0), lz_gauss(1.0))
    rows = []
    for q in qs:
        q = float(q)
        vals = (log_z_exact(q), lz_chain(q), lz_gauss(q))
        rows.append([q] + [scale * (v - q * v1) for v, v1 in zip(vals, one)])
    return np.array(rows)
