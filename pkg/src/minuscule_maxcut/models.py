"""Subset models of the type A and type D divisor graphs.

Type A: (r-1)-subsets of {1..r+s}, weight |T^c & S| - 1.
Type D: even subsets of {1..r}, weight |T xor S| / 2 - 1.
Subsets are encoded as bitmasks (bit i-1 for element i).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .multigraph import Multigraph, weight_histogram
from .picard import E6, E7, TYPE_A, TYPE_D, MinusculeParams, lattice_graph

MAX_MODEL_VERTICES = 4096


class ModelSizeError(ValueError):
    pass


class UnsupportedFamilyError(ValueError):
    pass


class ModelDisagreement(AssertionError):
    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


def subset_label(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def type_a_vertices(r: int, s: int) -> list[int]:
    return [sum(1 << (i - 1) for i in combo) for combo in itertools.combinations(range(1, r + s + 1), r - 1)]


def type_d_vertices(r: int) -> list[int]:
    subsets = [combo for k in range(0, r + 1, 2) for combo in itertools.combinations(range(1, r + 1), k)]
    subsets.sort()
    return [sum(1 << (i - 1) for i in combo) for combo in subsets]


def _popcounts(masks: np.ndarray) -> np.ndarray:
    out = np.zeros(masks.shape, dtype=np.int64)
    m = masks.copy()
    while m.any():
        out += m & 1
        m >>= 1
    return out


def _graph_from_int(labels, w: np.ndarray) -> Multigraph:
    fr = [Fraction(k) for k in range(int(w.max(initial=0)) + 1)]
    rows = tuple(tuple(fr[x] for x in row) for row in w.tolist())
    return Multigraph(tuple(labels), rows)


def build_type_a(r: int, s: int, max_vertices: int = MAX_MODEL_VERTICES) -> Multigraph:
    if r < 3 or s < 1:
        raise ValueError(f"type A model needs r >= 3 and s >= 1, got r={r}, s={s}")
    n = comb(r + s, r - 1)
    if n > max_vertices:
        raise ModelSizeError(f"type A ({r},{s}) has {n} vertices > {max_vertices}")
    verts = np.array(type_a_vertices(r, s), dtype=np.int64)
    full = (1 << (r + s)) - 1
    # |T^c & S| - 1 on rows T, columns S
    w = _popcounts((full ^ verts)[:, None] & verts[None, :]) - 1
    np.fill_diagonal(w, 0)
    return _graph_from_int([subset_label(int(v)) for v in verts], w)


def build_type_d(r: int, max_vertices: int = MAX_MODEL_VERTICES) -> Multigraph:
    if r < 5:
        raise ValueError(f"type D model needs r >= 5, got {r}")
    if 2 ** (r - 1) > max_vertices:
        raise ModelSizeError(f"type D r={r} has {2 ** (r - 1)} vertices > {max_vertices}")
    verts = np.array(type_d_vertices(r), dtype=np.int64)
    w = _popcounts(verts[:, None] ^ verts[None, :]) // 2 - 1
    np.fill_diagonal(w, 0)
    return _graph_from_int([subset_label(int(v)) for v in verts], w)


def build_model(p: MinusculeParams, max_vertices: int = MAX_MODEL_VERTICES) -> Multigraph:
    if p.family == TYPE_A:
        return build_type_a(p.r, p.s, max_vertices)
    if p.family == TYPE_D:
        return build_type_d(p.r, max_vertices)
    raise UnsupportedFamilyError(f"no subset model for {p.family}")


def s_k_closed_form(p: MinusculeParams, k: int) -> int:
    """Number of edges of weight k (k >= 1 counts positive edges; k = 0 counts zero-weight pairs)."""
    if k < 0:
        return 0
    if p.family == TYPE_A:
        r, s = p.r, p.s
        twice = comb(r + s, r - 1) * comb(s + 1, k + 1) * comb(r - 1, r - 1 - (k + 1)) if k + 1 <= r - 1 else 0
        return twice // 2
    if p.family == TYPE_D:
        r = p.r
        return 2 ** (r - 1) * comb(r, 2 * (k + 1)) // 2
    table = {E6: {0: 216, 1: 135}, E7: {0: 756, 1: 756, 2: 28}}
    return table[p.family].get(k, 0)


@dataclass(frozen=True)
class WeightVector:
    """Unnormalized rational coordinates together with their exact squared norm."""

    coords: tuple
    norm2: Fraction

    def dot(self, other: "WeightVector") -> Fraction:
        """Normalized inner product (both vectors share one norm)."""
        raw = sum((x * y for x, y in zip(self.coords, other.coords)), Fraction(0))
        return raw / self.norm2


def weight_coordinates(p: MinusculeParams) -> list[WeightVector]:
    if p.family == TYPE_A:
        r, s = p.r, p.s
        norm2 = Fraction((r + s) * (s + 1) * (r - 1))
        return [WeightVector(tuple(Fraction(s + 1) if v >> j & 1 else Fraction(1 - r) for j in range(r + s)), norm2)
                for v in type_a_vertices(r, s)]
    if p.family == TYPE_D:
        r = p.r
        return [WeightVector(tuple(Fraction(1) if v >> j & 1 else Fraction(-1) for j in range(r)), Fraction(r))
                for v in type_d_vertices(r)]
    raise UnsupportedFamilyError(f"{p.family} coordinates come from the lattice embedding")


def model_phi(p: MinusculeParams) -> Fraction:
    if p.family == TYPE_A:
        return Fraction(p.r + p.s, (p.s + 1) * (p.r - 1))
    if p.family == TYPE_D:
        return Fraction(4, p.r)
    raise UnsupportedFamilyError(p.family)


def weight_profiles(g: Multigraph) -> list[tuple]:
    return sorted(tuple(sorted(row)) for row in g.weights)


def find_isomorphism(g: Multigraph, h: Multigraph) -> list[int] | None:
    """Weight-preserving bijection pi with h[pi[i]][pi[j]] == g[i][j], by backtracking."""
    if g.n != h.n:
        return None
    n = g.n
    A = [list(row) for row in g.weights]
    B = [list(row) for row in h.weights]
    prof_g = [tuple(sorted(r)) for r in A]
    prof_h = [tuple(sorted(r)) for r in B]
    if sorted(prof_g) != sorted(prof_h):
        return None

    # visit vertices of g so each one is tied to as many earlier ones as possible
    order = [0] if n else []
    placed = {0} if n else set()
    while len(order) < n:
        nxt = max((v for v in range(n) if v not in placed),
                  key=lambda v: (sum(1 for u in order if A[v][u] > 0), -v))
        order.append(nxt)
        placed.add(nxt)

    image = [-1] * n
    used = [False] * n

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        u = order[depth]
        prev = order[:depth]
        # trying v = u first makes the identity the answer for g against itself
        for v in itertools.chain((u,), range(u), range(u + 1, n)):
            if used[v] or prof_h[v] != prof_g[u]:
                continue
            if all(B[v][image[w]] == A[u][w] for w in prev):
                image[u] = v
                used[v] = True
                if extend(depth + 1):
                    return True
                used[v] = False
                image[u] = -1
        return False

    return list(image) if extend(0) else None


@dataclass
class AgreementReport:
    params: MinusculeParams
    vertex_count: int
    histogram: dict
    spectrum: list
    bijection: list[int] | None

    @property
    def isomorphic(self) -> bool:
        return self.bijection is not None


def check_graph_agreement(g: Multigraph, h: Multigraph, params: MinusculeParams | None = None,
                          explicit_limit: int = 64) -> AgreementReport:
    """Invariant agreement at any size; explicit bijection search when n <= explicit_limit."""
    from .spectral import closed_form_spectrum, verify_spectrum_exact, verify_srmg

    if g.n != h.n:
        raise ModelDisagreement(f"vertex counts differ: {g.n} vs {h.n}")
    hg, hh = weight_histogram(g), weight_histogram(h)
    if hg != hh:
        raise ModelDisagreement(f"weight histograms differ: {hg} vs {hh}")
    pg, ph = weight_profiles(g), weight_profiles(h)
    if pg != ph:
        i = next(k for k in range(len(pg)) if pg[k] != ph[k])
        raise ModelDisagreement("per-vertex weight profiles differ", (pg[i], ph[i]))
    cg, ch = verify_srmg(g), verify_srmg(h)
    if cg != ch:
        raise ModelDisagreement(f"SRMG certificates differ: {cg} vs {ch}")
    spectrum = closed_form_spectrum(params) if params is not None else None
    if spectrum is not None:
        verify_spectrum_exact(g, spectrum)
        verify_spectrum_exact(h, spectrum)
    bijection = None
    if g.n <= explicit_limit:
        bijection = find_isomorphism(g, h)
        if bijection is None:
            raise ModelDisagreement("invariants agree but no weight-preserving bijection exists")
        for i in range(g.n):
            for j in range(g.n):
                if h.weights[bijection[i]][bijection[j]] != g.weights[i][j]:
                    raise ModelDisagreement("bijection check failed", (i, j))
    return AgreementReport(params, g.n, hg.counts, spectrum.as_list() if spectrum else [], bijection)


def check_model_agreement(p: MinusculeParams, explicit_limit: int = 64) -> AgreementReport:
    if p.family not in (TYPE_A, TYPE_D):
        raise UnsupportedFamilyError(f"no subset model for {p.family}")
    return check_graph_agreement(lattice_graph(p), build_model(p), p, explicit_limit)
