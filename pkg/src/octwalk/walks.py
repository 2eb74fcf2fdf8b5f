"""Exact enumeration of directed self-avoiding walks on the 8-branching Cayley tree.

A walk is an index word ``(i_1, ..., i_N)`` with ``1 <= i_t <= 8`` and no
immediate backtrack ``|i_t - i_{t-1}| == 4``.  Its sites are
``z_t = gamma_{i_1} ... gamma_{i_t}[0]`` and its length is
``L = sum_t d(0, z_t)``.

The traversal is a depth-first walk over word prefixes down to a fixed split
depth; each prefix is a task whose remaining generations are expanded
level-by-level with numpy.  The task list depends only on ``N``, so every
statistic is reduced in the same order no matter how many workers run.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .octagon import OctagonGeometry

__all__ = [
    "GenerationBudgetExceeded",
    "WalkPolicy",
    "LengthSpectrum",
    "Histogram",
    "walk_count",
    "transition_allowed",
    "enumerate_spectrum",
    "partition_function",
    "histogram",
    "word_length",
    "BLOCK_LEVELS",
]

# Generations expanded as a single numpy block (7**7 ~ 8e5 leaves per task).
BLOCK_LEVELS = 7


class GenerationBudgetExceeded(ValueError):
    """Requested number of generations exceeds the enumeration guard."""


@dataclass(frozen=True)
class WalkPolicy:
    generations: int
    max_generations_guard: int = 12

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError(f"need at least one generation, got {self.generations}")

    def check(self) -> None:
        if self.generations > self.max_generations_guard:
            raise GenerationBudgetExceeded(
                f"N = {self.generations} exceeds the guard of {self.max_generations_guard} "
                f"generations ({walk_count(self.generations)} walks)"
            )


def walk_count(n: int) -> int:
    return 8 * 7 ** (n - 1)


def transition_allowed(i: int, j: int) -> bool:
    if not (1 <= i <= 8 and 1 <= j <= 8):
        raise ValueError(f"indices ({i}, {j}) outside 1..8")
    return abs(i - j) != 4


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    gaussian_fit: tuple[float, float, float]  # (mean, variance, amplitude)

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    def gaussian(self, x) -> np.ndarray:
        mean, var, amp = self.gaussian_fit
        return amp * np.exp(-((np.asarray(x) - mean) ** 2) / (2.0 * var))


@dataclass(frozen=True)
class LengthSpectrum:
    """Integrated walk lengths of generation ``N`` plus streaming summaries.

    ``lengths`` is ``None`` when enumeration ran in streaming mode; then
    ``log_z`` carries ``ln Z_N(q)`` for the q values requested up front.
    """

    generation: int
    count: int
    mean: float
    variance: float
    min_length: float
    max_length: float
    lengths: Optional[np.ndarray] = field(default=None, repr=False)
    log_z: dict = field(default_factory=dict, repr=False)
    hist: Optional[Histogram] = field(default=None, repr=False)

    @property
    def log_count(self) -> float:
        return math.log(self.count)


def _generator_arrays(geom: OctagonGeometry) -> tuple[np.ndarray, np.ndarray]:
    u = np.array([g.u for g in geom.generators], dtype=np.complex128)
    v = np.array([g.v for g in geom.generators], dtype=np.complex128)
    return u, v


# successor table: _SUCC[i] lists the 7 allowed next indices (0-based)
_SUCC = np.array([[j for j in range(8) if abs(i - j) != 4] for i in range(8)], dtype=np.int64)


def _compose(u, v, gu, gv):
    # no renormalization: |u|^2 - |v|^2 cancels catastrophically once |u| is large,
    # while the product of unit-determinant factors only drifts by rounding
    return u * gu + v * np.conj(gv), u * gv + v * np.conj(gu)


def _origin_distance(u, v):
    # |u| - |v| = 1/(|u| + |v|) on SU(1,1), so d(0, m[0]) = 2 ln(|u| + |v|)
    return 2.0 * np.log(np.abs(u) + np.abs(v))


def _prefixes(depth: int, reverse: bool) -> list[tuple[int, ...]]:
    """All admissible 0-based words of the given depth, depth-first, via an explicit stack."""
    order = list(range(8))
    out = []
    stack: list[tuple[int, ...]] = [()]
    while stack:
        word = stack.pop()
        if len(word) == depth:
            out.append(word)
            continue
        children = order if not word else [j for j in order if abs(j - word[-1]) != 4]
        if reverse:
            children = children[::-1]
        # push in reverse so the first child is processed first
        stack.extend(word + (j,) for j in reversed(children))
    return out


def _expand(gu, gv, prefix, levels, reverse=False):
    """Lengths of all walks extending ``prefix`` by ``levels`` generations, in
    lexicographic order of the extension (reversed child order if ``reverse``)."""
    u = np.array([1.0 + 0j])
    v = np.array([0j])
    acc = np.array([0.0])
    for j in prefix:
        u, v = _compose(u, v, gu[j], gv[j])
        acc = acc + _origin_distance(u, v)
    last = np.array([prefix[-1]]) if prefix else None
    for _ in range(levels):
        if last is None:
            nxt = np.arange(8)[None, :]
        else:
            nxt = _SUCC[last]
        if reverse:
            nxt = nxt[:, ::-1]
        width = nxt.shape[1]
        u, v = _compose(np.repeat(u, width), np.repeat(v, width), gu[nxt.ravel()], gv[nxt.ravel()])
        acc = np.repeat(acc, width) + _origin_distance(u, v)
        last = nxt.ravel()
    return acc


@dataclass
class _Partial:
    count: int
    mean: float
    m2: float
    lo: float
    hi: float
    lse: Optional[np.ndarray]  # (2, n_q): running max and scaled sum
    counts: Optional[np.ndarray]
    lengths: Optional[np.ndarray]


def _task(args) -> _Partial:
    gu, gv, prefix, levels, n, keep, qs, edges, reverse = args
    lengths = _expand(gu, gv, prefix, levels, reverse)
    mean = float(lengths.mean())
    m2 = float(((lengths - mean) ** 2).sum())
    lse = None
    if qs is not None:
        x = np.multiply.outer(qs, lengths / n)
        mx = x.max(axis=1)
        lse = np.stack([mx, np.exp(x - mx[:, None]).sum(axis=1)])
    counts = None
    if edges is not None:
        counts, _ = np.histogram(lengths, bins=edges)
    return _Partial(
        count=lengths.size,
        mean=mean,
        m2=m2,
        lo=float(lengths.min()),
        hi=float(lengths.max()),
        lse=lse,
        counts=counts,
        lengths=lengths if keep else None,
    )


def _merge(a: _Partial, b: _Partial) -> _Partial:
    n = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / n
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / n
    lse = None
    if a.lse is not None:
        mx = np.maximum(a.lse[0], b.lse[0])
        s = a.lse[1] * np.exp(a.lse[0] - mx) + b.lse[1] * np.exp(b.lse[0] - mx)
        lse = np.stack([mx, s])
    counts = None if a.counts is None else a.counts + b.counts
    return _Partial(n, mean, m2, min(a.lo, b.lo), max(a.hi, b.hi), lse, counts, None)


def _split_depth(n: int) -> int:
    return max(1, n - BLOCK_LEVELS)


def _run(geom, n, *, keep, qs, edges, workers, reverse) -> tuple[_Partial, Optional[np.ndarray]]:
    gu, gv = _generator_arrays(geom)
    depth = _split_depth(n)
    tasks = [
        (gu, gv, p, n - depth, n, keep, qs, edges, reverse) for p in _prefixes(depth, reverse)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (4 * workers))
            parts = list(pool.map(_task, tasks, chunksize=chunk))
    else:
        parts = [_task(t) for t in tasks]
    lengths = np.concatenate([p.lengths for p in parts]) if keep else None
    total = parts[0]
    for p in parts[1:]:
        total = _merge(total, p)
    return total, lengths


def enumerate_spectrum(
    geom: OctagonGeometry,
    policy: WalkPolicy,
    *,
    keep_lengths: bool = True,
    q_values: Optional[Sequence[float]] = None,
    bins: Optional[int] = None,
    workers: int = 1,
    reverse: bool = False,
) -> LengthSpectrum:
    """Enumerate every admissible walk of ``policy.generations`` steps.

    Parameters
    ----------
    geom : OctagonGeometry
        Lattice whose generators drive the walk.
    policy : WalkPolicy
        Number of generations and the guard on it.
    keep_lengths : bool
        Retain the raw length array (ordered lexicographically by word).
    q_values : sequence of float, optional
        Accumulate ``ln Z_N(q)`` for these q while streaming.
    bins : int, optional
        Accumulate a histogram with this many bins over ``[min, max]``.  In
        streaming mode this costs a second pass to learn the range first.
    workers : int
        Process count; results are bitwise identical for any value.
    reverse : bool
        Visit children in reversed order (the returned lengths stay in the
        corresponding traversal order).
    """
    policy.check()
    n = policy.generations
    qs = None if q_values is None else np.asarray(q_values, dtype=float)
    edges = None
    if bins is not None and not keep_lengths:
        first, _ = _run(geom, n, keep=False, qs=None, edges=None, workers=workers, reverse=reverse)
        edges = np.linspace(first.lo, first.hi, bins + 1)
    total, lengths = _run(geom, n, keep=keep_lengths, qs=qs, edges=edges, workers=workers, reverse=reverse)

    log_z = {}
    if qs is not None:
        for q, mx, s in zip(qs, total.lse[0], total.lse[1]):
            log_z[float(q)] = float(mx + math.log(s))

    spec = LengthSpectrum(
        generation=n,
        count=total.count,
        mean=total.mean,
        variance=total.m2 / total.count,
        min_length=total.lo,
        max_length=total.hi,
        lengths=lengths,
        log_z=log_z,
    )
    if bins is not None:
        counts = total.counts if edges is not None else None
        spec = _with_histogram(spec, bins, edges, counts)
    return spec


def _with_histogram(spec, bins, edges, counts):
    return replace(spec, hist=_make_histogram(spec, bins, edges, counts))


def _make_histogram(spec: LengthSpectrum, bins, edges=None, counts=None) -> Histogram:
    if edges is None:
        edges = np.linspace(spec.min_length, spec.max_length, bins + 1)
        counts, _ = np.histogram(spec.lengths, bins=edges)
    width = float(edges[1] - edges[0])
    amp = spec.count * width / math.sqrt(2.0 * math.pi * spec.variance)
    return Histogram(edges, np.asarray(counts, dtype=np.int64), (spec.mean, spec.variance, amp))


def histogram(spectrum: LengthSpectrum, bins: int = 60) -> Histogram:
    """Uniform-width histogram over ``[min, max]`` with a moment-matched Gaussian."""
    if bins < 10:
        raise ValueError(f"need at least 10 bins, got {bins}")
    if spectrum.lengths is None:
        if spectrum.hist is not None and spectrum.hist.counts.size == bins:
            return spectrum.hist
        raise ValueError("spectrum was enumerated without lengths; pass bins= to enumerate_spectrum")
    return _make_histogram(spectrum, bins)


def partition_function(spectrum: LengthSpectrum, q: float) -> float:
    """``ln Z_N(q) = ln sum_i exp(q L_i / N)``, max-shifted against overflow."""
    if spectrum.lengths is None:
        try:
            return spectrum.log_z[float(q)]
        except KeyError:
            raise ValueError(f"q = {q} was not accumulated during streaming enumeration") from None
    x = q * spectrum.lengths / spectrum.generation
    mx = x.max()
    return float(mx + math.log(np.exp(x - mx).sum()))


def word_length(geom: OctagonGeometry, word: Sequence[int]) -> float:
    """Exact integrated length of a single 1-based word, one matrix at a time."""
    gu, gv = _generator_arrays(geom)
    u, v = np.array([1.0 + 0j]), np.array([0j])
    total = 0.0
    prev = None
    for i in word:
        if prev is not None and not transition_allowed(prev, i):
            raise ValueError(f"word backtracks at {prev} -> {i}")
        u, v = _compose(u, v, gu[i - 1], gv[i - 1])
        total += float(_origin_distance(u, v)[0])
        prev = i
    return total


def default_guard() -> int:
    """Guard value, overridable through ``OCTWALK_MAX_N``."""
    return int(os.environ.get("OCTWALK_MAX_N", "12"))
