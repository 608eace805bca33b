"""Seeded random-hyperplane rounding of an embedding.

Chunk c of a run draws from an independent Philox stream keyed by (seed, c),
so results depend only on (seed, samples, chunk_size) and chunks can be
evaluated in any order. Normal deviates come from the polar Box-Muller
sampler of numpy's legacy RandomState driven by that Philox stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .certificates import Embedding
from .multigraph import Cut, Multigraph, cut_weight
from .picard import intersect, simple_roots

RESIDUAL_BOUND = 1e-12


class FactorizationError(ArithmeticError):
    pass


class BoundViolation(AssertionError):
    pass


@dataclass(frozen=True)
class EmbeddingFactor:
    vectors: np.ndarray  # n x k, row i is f(i)
    residual: float

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _root_frame(e: Embedding) -> np.ndarray:
    # coordinates of q(V) in the simple-root basis solve G c = b with b_j = -V.alpha_j
    p = e.params
    roots = simple_roots(p)
    G = np.array([[-intersect(x, y, p) for y in roots] for x in roots], dtype=float)
    b = np.array([[-intersect(v, alpha, p) for alpha in roots] for v in e.classes], dtype=float)
    coeffs = np.linalg.solve(G, b.T).T
    L = np.linalg.cholesky(G)
    X = coeffs @ L  # rows have squared length c^T G c = 1 + kappa/delta
    return X / math.sqrt(1 + p.kappa / p.delta)


def _gram_frame(gram: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        w, V = np.linalg.eigh(gram)
        keep = w > 1e-9 * max(1.0, w.max())
        return V[:, keep] * np.sqrt(w[keep])


def factorize_embedding(e: Embedding) -> EmbeddingFactor:
    gram = e.gram_array()
    if e.params is not None and e.classes is not None:
        X = _root_frame(e)
    else:
        X = _gram_frame(gram)
    residual = float(np.abs(X @ X.T - gram).max(initial=0.0))
    if residual > RESIDUAL_BOUND:
        raise FactorizationError(f"factor residual {residual:.3e} exceeds {RESIDUAL_BOUND}")
    return EmbeddingFactor(X, residual)


def cut_from_direction(f: EmbeddingFactor, direction) -> Cut:
    """Vertices with f(i).g >= 0 go to S (ties included)."""
    side = f.vectors @ np.asarray(direction, dtype=float) >= 0
    mask = sum(1 << int(i) for i in np.flatnonzero(side))
    return Cut(mask, f.n)


def sample_cut(f: EmbeddingFactor, stream) -> Cut:
    return cut_from_direction(f, stream.standard_normal(f.dim))


def chunk_generator(seed: int, chunk: int) -> np.random.RandomState:
    return np.random.RandomState(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), chunk])))


@dataclass(frozen=True)
class CutStats:
    samples: int
    mean: float
    max_weight: Fraction
    max_cut_witness: Cut
    coefficient_of_variation: float
    seed: int
    chunk_size: int
    std: float

    @property
    def degenerate(self) -> bool:
        """Every sampled hyperplane produced the same cut weight."""
        return self.coefficient_of_variation == 0.0


def _chunk_weights(A: np.ndarray, total2: int, X: np.ndarray) -> np.ndarray:
    # w = (2T - x^T A x) / 4 for x in {-1, 1}^n, in scaled integer units
    quad = np.einsum("ij,ij->i", X @ A, X)
    return (total2 - quad) // 4


def simulate(g: Multigraph, f: EmbeddingFactor, samples: int, seed: int = 0,
             chunk_size: int = 10_000, upper_bound=None) -> CutStats:
    if samples < 1:
        raise ValueError("need at least one sample")
    if f.n != g.n:
        raise ValueError(f"factor has {f.n} rows, graph has {g.n} vertices")
    A_int = g.int_matrix
    L = g.denominator
    total2 = int(A_int.sum())  # twice the scaled total weight
    if total2 >= 2**52:
        raise OverflowError("graph weight too large for the floating sign-product kernel")
    A = A_int.astype(np.float64)
    vectors = f.vectors
    count = 0
    s1 = 0
    s2 = 0
    best = -1
    best_mask_row = None
    for c, start in enumerate(range(0, samples, chunk_size)):
        m = min(chunk_size, samples - start)
        rng = chunk_generator(seed, c)
        dirs = rng.standard_normal((m, f.dim))
        X = np.where(dirs @ vectors.T >= 0, 1.0, -1.0)
        w = np.rint(_chunk_weights(A, total2, X)).astype(np.int64)
        count += m
        s1 += int(w.sum())
        s2 += int((w * w).sum())
        top = int(np.argmax(w))
        if w[top] > best:
            best = int(w[top])
            best_mask_row = X[top] > 0
    mask = sum(1 << int(i) for i in np.flatnonzero(best_mask_row))
    witness = Cut(mask, g.n)
    max_weight = cut_weight(g, witness)
    if max_weight != Fraction(best, L):
        raise AssertionError(f"witness re-evaluates to {max_weight}, kernel said {Fraction(best, L)}")
    if upper_bound is not None and max_weight > upper_bound:
        raise BoundViolation(f"sampled cut {max_weight} exceeds the upper bound {upper_bound}")
    mean = s1 / count / L
    var = Fraction(count * s2 - s1 * s1, count * (count - 1) * L * L) if count > 1 else Fraction(0)
    std = math.sqrt(var)
    cv = std / mean if mean else 0.0
    return CutStats(count, mean, max_weight, witness, cv, seed, chunk_size, std)
