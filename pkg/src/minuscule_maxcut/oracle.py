"""Exact max cut by Gray-code enumeration, plus a seeded local-search lower bound."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .multigraph import Cut, Multigraph, cut_weight

MAX_BRUTE_FORCE_N = 30
EXHAUSTIVE, LOCAL_SEARCH = "exhaustive", "local_search"


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    witness: Cut
    method: str
    exact: bool

    def as_dict(self, g: Multigraph | None = None) -> dict:
        out = {"value": str(self.value), "witness": self.witness.hex(), "method": self.method,
               "exact": self.exact}
        if g is not None:
            out["S"] = [g.labels[i] for i in self.witness.members()]
        return out


@numba.njit(cache=True, nogil=True)
def _scan_block(A, free, prefix):
    """Best cut over all masks whose low ``free`` bits above bit 0 vary and high bits equal ``prefix``.

    Vertex 0 stays outside S. Returns (best weight, least mask attaining it).
    """
    n = A.shape[0]
    side = np.zeros(n, dtype=np.int64)
    for v in range(n):
        side[v] = (prefix >> v) & 1
    cross = np.zeros(n, dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    w = 0
    for v in range(n):
        for j in range(n):
            deg[v] += A[v, j]
            if side[j] != side[v]:
                cross[v] += A[v, j]
        if side[v] == 1:
            w += cross[v]
    one = np.int64(1)
    mask = np.int64(prefix)
    best = w
    best_mask = mask
    for t in range(1, 1 << free):
        # Gray code: flip the lowest set bit of t
        bit = 0
        tt = t
        while (tt & 1) == 0:
            tt >>= 1
            bit += 1
        v = bit + 1
        w += deg[v] - 2 * cross[v]
        sv = side[v]
        for j in range(n):
            if j != v:
                if side[j] == sv:
                    cross[j] += A[v, j]
                else:
                    cross[j] -= A[v, j]
        cross[v] = deg[v] - cross[v]
        side[v] = 1 - sv
        mask ^= one << v
        if w > best or (w == best and mask < best_mask):
            best = w
            best_mask = mask
    return best, best_mask


def _scan_all(A, free, n_blocks, workers):
    prefixes = [blk << (free + 1) for blk in range(n_blocks)]
    if workers == 1:
        return [_scan_block(A, free, pre) for pre in prefixes]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda pre: _scan_block(A, free, pre), prefixes))


def _check_int64(A: np.ndarray):
    if A.dtype == object or int(np.abs(A).sum()) >= 2**62:
        raise OverflowError("weights too large for the int64 enumeration kernel")


def brute_force_maxcut(g: Multigraph, max_n: int = MAX_BRUTE_FORCE_N, workers: int | None = None) -> OracleResult:
    """Exact maximum over all 2^(n-1) cuts (vertex 0 fixed outside S)."""
    n = g.n
    if n > max_n:
        raise OracleSizeError(f"{n} vertices exceeds the exhaustive limit {max_n}; use local_search_maxcut")
    if n <= 1:
        return OracleResult(Fraction(0), Cut(0, n), EXHAUSTIVE, True)
    A = np.ascontiguousarray(g.int_matrix)
    _check_int64(A)
    # top bits become fixed block prefixes scanned independently
    workers = workers or os.cpu_count() or 1
    fixed = min(math.ceil(math.log2(workers)), n - 1)
    free = n - 1 - fixed
    results = _scan_all(A, free, 1 << fixed, workers)
    best = max(int(b) for b, _ in results)
    mask = min(int(m) for b, m in results if b == best)
    witness = Cut(mask, n)
    value = cut_weight(g, witness)
    if value != Fraction(best, g.denominator):
        raise AssertionError("enumeration kernel and exact re-evaluation disagree")
    return OracleResult(value, witness, EXHAUSTIVE, True)


def _climb(A: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Steepest-ascent single-vertex flips until no flip improves (ties: lowest index)."""
    s = np.where(side, 1, -1).astype(np.int64)
    # gain of flipping v: sum_j A_vj * s_v * s_j  (same-side weight minus crossing weight)
    field = A @ s
    while True:
        gain = s * field
        v = int(np.argmax(gain))
        if gain[v] <= 0:
            return s > 0
        s[v] = -s[v]
        field += 2 * s[v] * A[:, v]


def local_search_maxcut(g: Multigraph, restarts: int = 100, seed: int = 0) -> OracleResult:
    if restarts < 1:
        raise ValueError("need at least one restart")
    n = g.n
    A = np.asarray(g.int_matrix, dtype=np.int64)
    total2 = int(A.sum())
    best_w, best_side = -1, None
    for k in range(restarts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), k])))
        side = _climb(A, rng.integers(0, 2, size=n).astype(bool))
        s = np.where(side, 1, -1)
        w = (total2 - int(s @ A @ s)) // 4
        if w > best_w:
            best_w, best_side = w, side
    if n and best_side[0]:
        best_side = ~best_side  # report with vertex 0 outside S
    mask = sum(1 << int(i) for i in np.flatnonzero(best_side))
    witness = Cut(mask, n)
    return OracleResult(cut_weight(g, witness), witness, LOCAL_SEARCH, False)


def is_locally_optimal(g: Multigraph, cut: Cut) -> bool:
    """No single-vertex flip increases the cut weight (exact)."""
    base = cut_weight(g, cut)
    return all(cut_weight(g, Cut(cut.mask ^ (1 << v), g.n)) <= base for v in range(g.n))
