"""Cached constructions and small independent helpers shared by the tests."""
import functools
import itertools
from fractions import Fraction

import numpy as np

from minuscule_maxcut.certificates import lattice_embedding
from minuscule_maxcut.multigraph import Multigraph
from minuscule_maxcut.picard import LatticeModel, params_for_family


@functools.lru_cache(maxsize=None)
def params(name):
    return params_for_family(name)


@functools.lru_cache(maxsize=None)
def model(name):
    return LatticeModel(params(name))


def graph(name):
    return model(name).graph


@functools.lru_cache(maxsize=None)
def embedded(name):
    return lattice_embedding(params(name))


def type_a_range(max_rs):
    """(r, s) pairs admitted as X_{s+1,1,r-1} with r + s <= max_rs."""
    return [(r, s) for r in range(4, max_rs) for s in range(1, r - 1) if r + s <= max_rs]


def small_families():
    return ["typeA:4,1", "typeA:4,2", "typeA:5,1", "typeA:5,2", "typeD:5", "typeD:6", "e6", "e7"]


def naive_cut_weights(g: Multigraph) -> np.ndarray:
    """Scaled weight of every mask 0..2^n-1, straight from the pair sum."""
    n, L = g.n, g.denominator
    A = np.array([[int(w * L) for w in row] for row in g.weights], dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    out = np.zeros(1 << n, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        if A[i, j]:
            out += A[i, j] * (bits[:, i] != bits[:, j])
    return out


def fraction_rank(rows) -> int:
    """Rank by plain Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def fraction_det(rows) -> Fraction:
    m = [[Fraction(x) for x in row] for row in rows]
    n, det = len(m), Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det
