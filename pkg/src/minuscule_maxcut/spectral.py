"""Strongly regular multigraphs and exact spectrum certificates.

Everything here is exact: matrices are scaled to integers (weights times their
common denominator) and multiplied in int64 when an a-priori entry bound fits,
otherwise in Python integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .multigraph import Multigraph, fraction_str
from .picard import E6, E7, TYPE_A, TYPE_D, MinusculeParams

INT64_SAFE = 2**62


class NotStronglyRegular(ValueError):
    def __init__(self, message: str, entry=None, expected=None, actual=None):
        super().__init__(message)
        self.entry, self.expected, self.actual = entry, expected, actual


class SpectrumInconsistency(ValueError):
    pass


class SpectrumRefuted(AssertionError):
    def __init__(self, message: str, power=None):
        super().__init__(message)
        self.power = power


@dataclass(frozen=True)
class Surd:
    """p + q * sqrt(d) with rational p, q and square-free-ish positive integer d."""

    p: Fraction
    q: Fraction
    d: int

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __str__(self) -> str:
        return f"{fraction_str(self.p)} + ({fraction_str(self.q)})*sqrt({self.d})"


def value_str(v) -> str:
    return str(v) if isinstance(v, Surd) else fraction_str(v)


@dataclass(frozen=True)
class SrmgCertificate:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    n: int

    def as_dict(self) -> dict:
        return {k: fraction_str(getattr(self, k)) for k in "abcd"} | {"n": self.n}


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues (ascending) with positive multiplicities."""

    eigenvalues: tuple  # ((value, multiplicity), ...)

    def __post_init__(self):
        vals = sorted(self.eigenvalues, key=lambda vm: float(vm[0]))
        object.__setattr__(self, "eigenvalues", tuple((v, int(m)) for v, m in vals if m))

    @property
    def values(self) -> list:
        return [v for v, _ in self.eigenvalues]

    @property
    def smallest(self):
        return self.eigenvalues[0][0]

    @property
    def largest(self):
        return self.eigenvalues[-1][0]

    def multiplicity(self, value) -> int:
        return dict(self.eigenvalues).get(value, 0)

    @property
    def n(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def as_list(self) -> list[dict]:
        return [{"value": value_str(v), "multiplicity": m} for v, m in self.eigenvalues]


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product; falls back to Python ints when int64 could overflow."""
    if A.dtype == object or B.dtype == object:
        return np.dot(A.astype(object), B.astype(object))
    bound = int(np.abs(A).sum(axis=1).max(initial=0)) * int(np.abs(B).max(initial=0))
    if bound < INT64_SAFE:
        return A @ B
    return np.dot(A.astype(object), B.astype(object))


def exact_square(g: Multigraph) -> tuple[np.ndarray, int]:
    """(A @ A, L) where M = A / L."""
    A = g.int_matrix
    return _matmul(A, A), g.denominator


def verify_srmg(g: Multigraph) -> SrmgCertificate:
    n = g.n
    if n < 3:
        raise NotStronglyRegular(f"need at least 3 vertices, got {n}")
    A = g.int_matrix
    A2, L = exact_square(g)
    L2 = L * L
    row_sums = A.sum(axis=1)
    if len(set(row_sums.tolist())) != 1:
        i = int(np.argmax(row_sums != row_sums[0]))
        raise NotStronglyRegular("row sums differ", (i, i), Fraction(int(row_sums[0]), L),
                                 Fraction(int(row_sums[i]), L))
    d = Fraction(int(row_sums[0]), L)
    diag = np.diagonal(A2)
    if len(set(diag.tolist())) != 1:
        i = int(np.argmax(diag != diag[0]))
        raise NotStronglyRegular("diagonal of M^2 is not constant", (i, i),
                                 Fraction(int(diag[0]), L2), Fraction(int(diag[i]), L2))
    c = Fraction(int(diag[0]), L2)

    # fit M2 = a*M + b off the diagonal from two distinct weight values
    off = ~np.eye(n, dtype=bool)
    seen: dict = {}
    for i, j in zip(*np.nonzero(off)):
        w = A[i, j]
        if w not in seen:
            seen[w] = (int(i), int(j))
            if len(seen) == 2:
                break
    pts = [(Fraction(int(A[i, j]), L), Fraction(int(A2[i, j]), L2)) for i, j in seen.values()]
    if len(pts) == 1:
        a_fit, b_fit = Fraction(0), pts[0][1]
    else:
        (x0, y0), (x1, y1) = pts
        a_fit = (y1 - y0) / (x1 - x0)
        b_fit = y0 - a_fit * x0

    # entrywise check in scaled integers: L*A2 == a*L2*A + b*L2*L  (times denominators)
    den = math.lcm(a_fit.denominator, b_fit.denominator)
    lhs = A2 * (L * den)
    rhs = A * int(a_fit * den) * L2 + int(b_fit * den) * L2 * L
    bad = (lhs != rhs) & off
    if bad.any():
        i, j = (int(x) for x in np.argwhere(bad)[0])
        expected = a_fit * Fraction(int(A[i, j]), L) + b_fit
        raise NotStronglyRegular(f"(M^2)[{i},{j}] = {Fraction(int(A2[i, j]), L2)}, expected {expected}",
                                 (i, j), expected, Fraction(int(A2[i, j]), L2))
    return SrmgCertificate(a_fit, b_fit, c, d, n)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def discriminant(cert: SrmgCertificate, literal: bool = False) -> Fraction:
    """a^2 + 4(c - b); ``literal`` uses the printed a^2 - 4(c - b) instead."""
    sign = -1 if literal else 1
    return cert.a * cert.a + sign * 4 * (cert.c - cert.b)


def spectrum_from_srmg(cert: SrmgCertificate, literal: bool = False) -> Spectrum:
    """Eigenvalues of an SRMG from its certificate.

    The non-Perron eigenvalues are roots of eta^2 = a*eta + (c - b); with
    ``literal`` the discriminant sign is flipped and the result is whatever
    that formula produces (used only to audit the printed statement).
    """
    a, d, n = cert.a, cert.d, cert.n
    disc = discriminant(cert, literal)
    if disc < 0:
        raise SpectrumInconsistency(f"negative discriminant {disc}: eigenvalues would be complex")
    if disc == 0:
        eta = a / 2
        if (n - 1) * eta + d != 0:
            raise SpectrumInconsistency("double root incompatible with trace zero")
        return Spectrum(((eta, n - 1), (d, 1)))
    root = _rational_sqrt(disc)
    if root is None:
        # irrational pair: multiplicities are rational only if d + (n-1)a/2 = 0
        if d + (n - 1) * a / 2 != 0 or (n - 1) % 2:
            raise SpectrumInconsistency("irrational eigenvalues with non-integral multiplicities")
        num, den = disc.numerator * disc.denominator, disc.denominator
        f = (n - 1) // 2
        lo = Surd(a / 2, Fraction(-1, 2 * den), num)
        hi = Surd(a / 2, Fraction(1, 2 * den), num)
        return Spectrum(((lo, f), (hi, f), (d, 1)))
    eta_minus, eta_plus = (a - root) / 2, (a + root) / 2
    f_minus = (d + (n - 1) * eta_plus) / (eta_plus - eta_minus)
    f_plus = -(d + (n - 1) * eta_minus) / (eta_plus - eta_minus)
    for f in (f_minus, f_plus):
        if f.denominator != 1 or f < 0:
            raise SpectrumInconsistency(f"multiplicity {f} is not a nonnegative integer")
    return Spectrum(((eta_minus, int(f_minus)), (eta_plus, int(f_plus)), (d, 1)))


def perron_degree(p: MinusculeParams) -> int:
    if p.family == TYPE_A:
        r, s = p.r, p.s
        return (s + 1) * comb(r + s - 1, r - 2) - comb(r + s, r - 1) + 1
    if p.family == TYPE_D:
        return 1 + (p.r - 4) * 2 ** (p.r - 3)
    return {E6: 10, E7: 29}[p.family]


def quadratic_coefficients(p: MinusculeParams) -> tuple[int, int]:
    """(lambda, eta) with B^2 = lambda*B + eta*J for B = M - I (types A and D)."""
    if p.family == TYPE_A:
        r, s = p.r, p.s
        lam = -comb(r + s - 2, r - 2)
        eta = s * s * comb(r + s - 2, r - 3) - s * comb(r + s - 2, r - 2) + comb(r + s - 2, r - 1)
        return lam, eta
    if p.family == TYPE_D:
        r = p.r
        q = (r * r - 7 * r + 16) * 2 ** (r - 5)
        return -(2 ** (r - 3)), q - 2 ** (r - 3)
    raise ValueError(f"no quadratic B-equation recorded for {p.family}")


def closed_form_spectrum(p: MinusculeParams) -> Spectrum:
    d = perron_degree(p)
    if p.family == TYPE_A:
        r, s = p.r, p.s
        n = comb(r + s, r - 1)
        low = 1 - comb(r + s - 2, r - 2)
        mults = (r + s - 1, n - (r + s), 1)
    elif p.family == TYPE_D:
        r = p.r
        low = 1 - 2 ** (r - 3)
        mults = (r, 2 ** (r - 1) - (r + 1), 1)
    elif p.family == E6:
        low, mults = -5, (6, 20, 1)
    else:
        low, mults = -11, (7, 48, 1)
    return Spectrum(((Fraction(low), mults[0]), (Fraction(1), mults[1]), (Fraction(d), mults[2])))


def printed_spectrum(p: MinusculeParams) -> Spectrum:
    """The three values 1+lambda < 1 < 1+eta exactly as tabulated, same multiplicities."""
    table = {E6: (-6, 9), E7: (-12, 28)}
    if p.family == TYPE_A:
        lam, eta = quadratic_coefficients(p)
    elif p.family == TYPE_D:
        lam, eta = -(2 ** (p.r - 3)), (p.r - 4) * 2 ** (p.r - 3)
    else:
        lam, eta = table[p.family]
    base = closed_form_spectrum(p)
    mults = [m for _, m in base.eigenvalues]
    return Spectrum(((Fraction(1 + lam), mults[0]), (Fraction(1), mults[1]), (Fraction(1 + eta), mults[2])))


@dataclass(frozen=True)
class SpectrumProof:
    n: int
    values: tuple
    traces: tuple  # trace(M^k) for k = 0..3


def verify_spectrum_exact(g: Multigraph, spectrum: Spectrum) -> SpectrumProof:
    """Prove the spectrum: prod (M - lambda I) = 0 and trace(M^k) = sum f*lambda^k, k <= 3."""
    if not spectrum.is_rational():
        raise ValueError("exact verification needs rational eigenvalues")
    if spectrum.n != g.n:
        raise SpectrumRefuted(f"multiplicities sum to {spectrum.n}, graph has {g.n} vertices", power=0)
    A, L = g.int_matrix, g.denominator
    n = g.n
    eye = np.eye(n, dtype=np.int64)
    prod = None
    for lam, _ in spectrum.eigenvalues:
        factor = A * lam.denominator - eye * (lam.numerator * L)
        prod = factor if prod is None else _matmul(prod, factor)
        if not prod.any():
            break
    if prod is not None and prod.any() and n:
        i, j = (int(x) for x in np.argwhere(prod != 0)[0])
        raise SpectrumRefuted(f"annihilator nonzero at entry ({i},{j})", power="annihilator")

    A2 = _matmul(A, A)
    traces_scaled = [n, int(np.trace(A)), int(np.trace(A2)), int((A2 * A.T).sum())]
    traces = tuple(Fraction(t, L**k) for k, t in enumerate(traces_scaled))
    for k, t in enumerate(traces):
        expect = sum((m * lam**k for lam, m in spectrum.eigenvalues), Fraction(0))
        if t != expect:
            raise SpectrumRefuted(f"trace(M^{k}) = {t} but spectrum gives {expect}", power=k)
    return SpectrumProof(n, tuple(spectrum.values), traces)


def check_quadratic_equation(g: Multigraph, p: MinusculeParams) -> bool:
    """B = M - I satisfies B^2 = lambda*B + eta*J exactly."""
    if not g.is_integral():
        return False
    lam, eta = quadratic_coefficients(p)
    B = g.int_matrix - np.eye(g.n, dtype=np.int64)
    lhs = _matmul(B, B)
    return bool((lhs == lam * B + eta).all())


def numeric_eigenvalues(g: Multigraph) -> np.ndarray:
    """Floating-point cross-check only; never used in a certificate."""
    return np.linalg.eigvalsh(g.int_matrix.astype(float) / g.denominator)
