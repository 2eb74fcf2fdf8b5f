"""Slow, independent reference computations used as test oracles.

Nothing here shares code with the package beyond the generator coefficients:
matrices are plain 2x2 numpy arrays, words are enumerated recursively and
sums are taken directly.
"""

import math

import numpy as np


def generator_matrices(geom):
    return [np.array([[g.u, g.v], [np.conj(g.v), np.conj(g.u)]]) for g in geom.generators]


def apply(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def dist0(z):
    r = abs(z)
    return math.log((1 + r) / (1 - r))


def words(n):
    """Non-backtracking 0-based words of length n, lexicographic."""
    if n == 0:
        yield ()
        return
    for w in words(n - 1):
        for j in range(8):
            if not w or abs(j - w[-1]) != 4:
                yield w + (j,)


def word_lengths(geom, n):
    mats = generator_matrices(geom)
    out = []
    for w in words(n):
        m = np.eye(2, dtype=complex)
        total = 0.0
        for j in w:
            m = m @ mats[j]
            total += dist0(apply(m, 0j))
        out.append(total)
    return np.array(out)


def log_z(lengths, n, q):
    return math.log(math.fsum(math.exp(q * x / n) for x in lengths))


def eq38_lengths(geom, n):
    """Approximate lengths from one- and two-step distances, summed word by word."""
    mats = generator_matrices(geom)
    ell = [dist0(apply(m, 0j)) for m in mats]
    xi = [[dist0(apply(mi @ mj, 0j)) - 0.5 * (ell[i] + ell[j]) for j, mj in enumerate(mats)] for i, mi in enumerate(mats)]
    out = []
    for w in words(n):
        total = n * ell[w[0]]
        for t in range(2, n + 1):
            total += (n + 1 - t) * xi[w[t - 2]][w[t - 1]]
        out.append(total)
    return out

