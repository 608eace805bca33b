"""Exact weighted multigraphs, cuts and weight statistics."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational weight")


def fraction_str(x: Fraction) -> str:
    """Canonical "p/q" string ("p" when the denominator is one)."""
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Multigraph:
    labels: tuple[str, ...]
    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("vertex labels must be distinct")
        if len(self.weights) != n or any(len(row) != n for row in self.weights):
            raise DimensionError("weight matrix must be n x n")
        for i in range(n):
            if self.weights[i][i] != 0:
                raise ValueError(f"nonzero diagonal weight at vertex {i}")
            for j in range(i + 1, n):
                w = self.weights[i][j]
                if w != self.weights[j][i]:
                    raise ValueError(f"asymmetric weight at ({i}, {j})")
                if w < 0:
                    raise ValueError(f"negative weight at ({i}, {j})")

    @classmethod
    def from_matrix(cls, labels: Sequence, matrix) -> "Multigraph":
        rows = tuple(tuple(as_fraction(x) for x in row) for row in np.asarray(matrix, dtype=object))
        return cls(tuple(str(lab) for lab in labels), rows)

    @classmethod
    def from_edges(cls, labels: Sequence, edges: Iterable) -> "Multigraph":
        n = len(labels)
        m = [[Fraction(0)] * n for _ in range(n)]
        for i, j, w in edges:
            w = as_fraction(w)
            m[i][j] = m[j][i] = w
        return cls(tuple(str(lab) for lab in labels), tuple(tuple(r) for r in m))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def denominator(self) -> int:
        """Least common denominator of all weights."""
        return math.lcm(1, *(w.denominator for row in self.weights for w in row))

    @cached_property
    def int_matrix(self) -> np.ndarray:
        """Weights scaled by ``denominator`` as an int64 array (object dtype if too large)."""
        L = self.denominator
        vals = [[int(w * L) for w in row] for row in self.weights]
        biggest = max((abs(v) for row in vals for v in row), default=0)
        if biggest * max(self.n, 1) < 2**62:
            arr = np.array(vals, dtype=np.int64).reshape(self.n, self.n)
        else:
            arr = np.array(vals, dtype=object).reshape(self.n, self.n)
        arr.setflags(write=False)
        return arr

    def is_integral(self) -> bool:
        return self.denominator == 1

    def edges(self):
        """Positive-weight pairs (i, j, w) with i < j."""
        for i in range(self.n):
            row = self.weights[i]
            for j in range(i + 1, self.n):
                if row[j] > 0:
                    yield i, j, row[j]

    def total_weight(self) -> Fraction:
        return sum((w for _, _, w in self.edges()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "edges": [[i, j, fraction_str(w)] for i, j, w in self.edges()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "Multigraph":
        if len(data["labels"]) != data["n"]:
            raise DimensionError("label count does not match n")
        return cls.from_edges(data["labels"], data["edges"])


@dataclass(frozen=True)
class Cut:
    """Bit i of ``mask`` set means vertex i lies in S."""

    mask: int
    n: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise DimensionError(f"mask {self.mask:#x} does not fit {self.n} vertices")

    @classmethod
    def from_members(cls, members: Iterable[int], n: int) -> "Cut":
        mask = 0
        for i in members:
            if not 0 <= i < n:
                raise DimensionError(f"vertex {i} out of range")
            mask |= 1 << i
        return cls(mask, n)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def members(self) -> list[int]:
        return [i for i in range(self.n) if self.mask >> i & 1]

    def complement(self) -> "Cut":
        return Cut(((1 << self.n) - 1) ^ self.mask, self.n)

    def hex(self) -> str:
        return f"{self.mask:#x}"


@dataclass(frozen=True)
class WeightHistogram:
    counts: dict  # weight value -> number of unordered pairs with that weight
    zero_pairs: int

    def __getitem__(self, k) -> int:
        return self.counts.get(as_fraction(k), 0)

    def total_pairs(self) -> int:
        return sum(self.counts.values()) + self.zero_pairs

    def moment(self, fn) -> Fraction:
        return sum((Fraction(fn(k)) * c for k, c in self.counts.items()), Fraction(0))


def cut_weight(g: Multigraph, cut: Cut) -> Fraction:
    if cut.n != g.n:
        raise DimensionError(f"cut has length {cut.n}, graph has {g.n} vertices")
    inside = cut.members()
    outside = [j for j in range(g.n) if j not in cut]
    total = Fraction(0)
    for i in inside:
        row = g.weights[i]
        total += sum((row[j] for j in outside), Fraction(0))
    return total


def weight_histogram(g: Multigraph) -> WeightHistogram:
    counts: Counter = Counter()
    zero = 0
    for i in range(g.n):
        row = g.weights[i]
        for j in range(i + 1, g.n):
            if row[j] > 0:
                counts[row[j]] += 1
            else:
                zero += 1
    return WeightHistogram(dict(sorted(counts.items())), zero)


def weighted_degree(g: Multigraph, i: int) -> Fraction:
    if not 0 <= i < g.n:
        raise IndexError(f"vertex {i} out of range for {g.n} vertices")
    return sum(g.weights[i], Fraction(0))
