"""The Picard lattice of X_{a,b,c}, its Weyl action and the graph of (-1)-divisors."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .multigraph import Multigraph

TYPE_A, TYPE_D, E6, E7 = "TypeA", "TypeD", "E6", "E7"


class ParamsError(ValueError):
    """Rejected (a, b, c); ``reason`` is one of assumption/not_finite/not_minuscule."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class InvalidRootError(ValueError):
    pass


class OrbitExplosionError(RuntimeError):
    pass


class ModelViolationError(ValueError):
    pass


@dataclass(frozen=True)
class MinusculeParams:
    a: int
    b: int
    c: int
    family: str

    @property
    def r(self) -> int:
        return self.b + self.c

    @property
    def delta(self) -> int:
        a, b, c = self.a, self.b, self.c
        return b * c + a * c + a * b - a * b * c

    @property
    def kappa(self) -> int:
        return self.a * self.c - self.a - self.c

    @property
    def phi(self) -> Fraction:
        """1 - f(U).f(V) = phi * (1 + U.V) for distinct divisors U, V."""
        return Fraction(self.delta, self.delta + self.kappa)

    @property
    def rank(self) -> int:
        return self.a + self.r - 2

    @property
    def s(self) -> int:
        """The s of the subset model (type A: a = s + 1)."""
        return self.a - 1

    def abc(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def describe(self) -> str:
        if self.family == TYPE_A:
            return f"typeA:{self.r},{self.s}"
        if self.family == TYPE_D:
            return f"typeD:{self.r}"
        return self.family.lower()

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def build_params(a: int, b: int, c: int) -> MinusculeParams:
    if min(a, b, c) < 1:
        raise ParamsError("assumption", f"({a},{b},{c}): parameters must be positive integers")
    if a < 2 or c < 2:
        raise ParamsError("assumption", f"({a},{b},{c}): need a, c >= 2")
    if a > c:
        raise ParamsError("assumption", f"({a},{b},{c}): need a <= c")
    if a == 2 and c == 2:
        raise ParamsError("assumption", f"({a},{b},{c}): need c > 2 when a = 2")
    if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) <= 1:
        raise ParamsError("not_finite", f"({a},{b},{c}) is not a finite root system (1/a+1/b+1/c <= 1)")
    if b == 1:
        family = TYPE_A
    elif (a, b) == (2, 2):
        family = TYPE_D
    elif (a, b, c) == (2, 3, 3):
        family = E6
    elif (a, b, c) == (2, 4, 3):
        family = E7
    else:
        raise ParamsError("not_minuscule", f"({a},{b},{c}) is a finite root system but not minuscule")
    p = MinusculeParams(a, b, c, family)
    if p.delta <= 0:
        raise ParamsError("not_finite", f"({a},{b},{c}) has delta = {p.delta} <= 0")
    return p


def params_for_family(spec: str) -> MinusculeParams:
    """Parse "typeA:r,s", "typeD:r", "e6" or "e7"."""
    name, _, rest = spec.strip().partition(":")
    key = name.lower()
    try:
        if key == "typea":
            r, s = (int(x) for x in rest.split(","))
            return build_params(s + 1, 1, r - 1)
        if key == "typed":
            return build_params(2, 2, int(rest) - 2)
        if key == "e6" and not rest:
            return build_params(2, 3, 3)
        if key == "e7" and not rest:
            return build_params(2, 4, 3)
    except ValueError as exc:
        if isinstance(exc, ParamsError):
            raise
        raise ParamsError("assumption", f"cannot parse family {spec!r}") from exc
    raise ParamsError("assumption", f"unknown family {spec!r}")


@dataclass(frozen=True, order=True)
class PicardClass:
    """Coefficients of H_1..H_{a-1} and E_1..E_r."""

    h: tuple
    e: tuple

    def __add__(self, other: "PicardClass") -> "PicardClass":
        return PicardClass(tuple(x + y for x, y in zip(self.h, other.h)),
                           tuple(x + y for x, y in zip(self.e, other.e)))

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + other.scale(-1)

    def scale(self, t) -> "PicardClass":
        return PicardClass(tuple(t * x for x in self.h), tuple(t * x for x in self.e))

    def coords(self) -> tuple:
        return self.h + self.e

    def label(self) -> str:
        return "(" + ",".join(map(str, self.h)) + " ; " + ",".join(map(str, self.e)) + ")"

    @classmethod
    def parse(cls, text: str) -> "PicardClass":
        hs, es = text.strip().strip("()").split(";")
        conv = lambda part: tuple(int(x) for x in part.split(",") if x.strip())
        return cls(conv(hs), conv(es))


def zero_class(p: MinusculeParams) -> PicardClass:
    return PicardClass((0,) * (p.a - 1), (0,) * p.r)


def H(p: MinusculeParams, i: int) -> PicardClass:
    """Hyperplane class H_i, 1-based."""
    h = [0] * (p.a - 1)
    h[i - 1] = 1
    return PicardClass(tuple(h), (0,) * p.r)


def E(p: MinusculeParams, j: int) -> PicardClass:
    """Exceptional class E_j, 1-based."""
    e = [0] * p.r
    e[j - 1] = 1
    return PicardClass((0,) * (p.a - 1), tuple(e))


def canonical_class(p: MinusculeParams) -> PicardClass:
    return PicardClass((-p.c,) * (p.a - 1), (p.kappa,) * p.r)


def _check_dims(u: PicardClass, p: MinusculeParams):
    if len(u.h) != p.a - 1 or len(u.e) != p.r:
        raise ValueError(f"class {u} does not live in Pic of X{p}")


def intersect(u: PicardClass, v: PicardClass, p: MinusculeParams):
    _check_dims(u, p)
    _check_dims(v, p)
    hh = (p.c - 1) * sum(u.h) * sum(v.h) - sum(x * y for x, y in zip(u.h, v.h))
    ee = -sum(x * y for x, y in zip(u.e, v.e))
    return hh + ee


def form_matrix(p: MinusculeParams) -> np.ndarray:
    """Gram matrix of the intersection form in the (H, E) basis."""
    m = p.a - 1
    q = np.zeros((m + p.r, m + p.r), dtype=np.int64)
    q[:m, :m] = p.c - 1
    q[:m, :m] -= np.eye(m, dtype=np.int64)
    q[m:, m:] = -np.eye(p.r, dtype=np.int64)
    return q


def simple_roots(p: MinusculeParams) -> list[PicardClass]:
    roots = [E(p, i) - E(p, i + 1) for i in range(1, p.r)]
    alpha_r = H(p, 1)
    for j in range(1, p.c + 1):
        alpha_r = alpha_r - E(p, j)
    roots.append(alpha_r)
    roots += [H(p, j + 1) - H(p, j) for j in range(1, p.a - 1)]
    return roots


def cartan_gram(p: MinusculeParams) -> list[list[int]]:
    """Positive definite Gram -(alpha_i . alpha_j) of the simple roots."""
    roots = simple_roots(p)
    return [[-intersect(x, y, p) for y in roots] for x in roots]


def reflect(v: PicardClass, alpha: PicardClass, p: MinusculeParams) -> PicardClass:
    if intersect(alpha, alpha, p) != -2:
        raise InvalidRootError(f"{alpha.label()} is not a root (square != -2)")
    return v + alpha.scale(intersect(v, alpha, p))


def minus_one_divisors(p: MinusculeParams, limit: int = 10**6) -> list[PicardClass]:
    """Weyl orbit of E_r, sorted by (h, e) coordinates."""
    roots = simple_roots(p)
    start = E(p, p.r)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for alpha in roots:
            w = reflect(v, alpha, p)
            if w not in seen:
                seen.add(w)
                if len(seen) > limit:
                    raise OrbitExplosionError(f"orbit of E_r for X{p} exceeds {limit} classes")
                queue.append(w)
    return sorted(seen)


def intersection_matrix(divs: list[PicardClass], p: MinusculeParams) -> np.ndarray:
    for d in divs:
        _check_dims(d, p)
    D = np.array([d.coords() for d in divs], dtype=np.int64).reshape(len(divs), p.a - 1 + p.r)
    return D @ form_matrix(p) @ D.T


def graph_from_divisors(divs: list[PicardClass], p: MinusculeParams) -> Multigraph:
    prod = intersection_matrix(divs, p)
    n = len(divs)
    off = prod[~np.eye(n, dtype=bool)]
    if off.size and off.min() < 0:
        i, j = np.argwhere((prod < 0) & ~np.eye(n, dtype=bool))[0]
        raise ModelViolationError(
            f"{divs[i].label()} . {divs[j].label()} = {prod[i, j]} is negative")
    np.fill_diagonal(prod, 0)
    ints = [Fraction(k) for k in range(int(prod.max(initial=0)) + 1)]
    rows = tuple(tuple(ints[x] for x in row) for row in prod.tolist())
    return Multigraph(tuple(d.label() for d in divs), rows)


@dataclass(frozen=True)
class LatticeModel:
    """Orbit and graph of a minuscule X_{a,b,c}, built once."""

    params: MinusculeParams

    @cached_property
    def divisors(self) -> list[PicardClass]:
        return minus_one_divisors(self.params)

    @cached_property
    def graph(self) -> Multigraph:
        return graph_from_divisors(self.divisors, self.params)


def orbit_size(p: MinusculeParams) -> int:
    """Number of (-1)-divisors, known before the orbit is enumerated."""
    if p.family == TYPE_A:
        return math.comb(p.r + p.s, p.r - 1)
    if p.family == TYPE_D:
        return 2 ** (p.r - 1)
    return {E6: 27, E7: 56}[p.family]


def lattice_graph(p: MinusculeParams) -> Multigraph:
    return graph_from_divisors(minus_one_divisors(p), p)
