"""Optimal Goemans-Williamson embedding, exact primal/dual values and max-cut bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from .models import s_k_closed_form
from .multigraph import Multigraph, fraction_str, weight_histogram
from .picard import (LatticeModel, MinusculeParams, PicardClass, canonical_class,
                     form_matrix)
from .spectral import (Spectrum, SpectrumRefuted, closed_form_spectrum, perron_degree,
                       verify_spectrum_exact)


class EmbeddingError(RuntimeError):
    pass


class InconsistencyError(RuntimeError):
    pass


class UnverifiedSpectrumError(ValueError):
    pass


class DualityGapError(AssertionError):
    def __init__(self, primal: Fraction, dual: Fraction):
        super().__init__(f"SD(f) = {primal} != SD*(gamma) = {dual}")
        self.primal, self.dual = primal, dual


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Embedding:
    """Unit vectors given by their exact Gram matrix; ``params``/``classes`` are None for bare Gram input."""

    gram: tuple
    params: MinusculeParams | None = None
    classes: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.gram)

    def gram_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram]).reshape(self.n, self.n)


def build_embedding(p: MinusculeParams, divs: list[PicardClass], g: Multigraph) -> Embedding:
    """Gram of f(V) = (V + K/delta) / sqrt(1 + kappa/delta) under the negated form."""
    if [d.label() for d in divs] != list(g.labels):
        raise EmbeddingError("divisor order does not match graph vertex order")
    delta, kappa = p.delta, p.kappa
    K = np.array(canonical_class(p).coords(), dtype=np.int64)
    D = np.array([d.coords() for d in divs], dtype=np.int64)
    P = delta * D + K  # delta * q(V), integral
    inner = -(P @ form_matrix(p) @ P.T)  # delta^2 * <q(U), q(V)>
    scale = delta * (delta + kappa)  # delta^2 * |q(V)|^2
    gram = tuple(tuple(Fraction(int(x), scale) for x in row) for row in inner.tolist())
    for i in range(len(divs)):
        if gram[i][i] != 1:
            raise EmbeddingError(f"f({divs[i].label()}) has squared norm {gram[i][i]}, not 1")
    return Embedding(gram, p, tuple(divs))


def lattice_embedding(p: MinusculeParams) -> tuple[Multigraph, Embedding]:
    model = LatticeModel(p)
    return model.graph, build_embedding(p, model.divisors, model.graph)


def _sd_direct(e: Embedding, g: Multigraph) -> Fraction:
    total = Fraction(0)
    for i in range(g.n):
        wrow, grow = g.weights[i], e.gram[i]
        for j in range(i + 1, g.n):
            w = wrow[j]
            if w:
                total += w * (1 - grow[j])
    return total / 2


def sd_closed_form(p: MinusculeParams, g: Multigraph) -> Fraction:
    hist = weight_histogram(g)
    return p.phi * hist.moment(lambda k: k * (k + 1) / 2)


def sd_primal(e: Embedding, g: Multigraph) -> Fraction:
    if e.n != g.n:
        raise EmbeddingError(f"embedding has {e.n} vectors, graph has {g.n} vertices")
    direct = _sd_direct(e, g)
    if e.params is not None:
        closed = sd_closed_form(e.params, g)
        if closed != direct:
            raise InconsistencyError(f"direct SD(f) = {direct} but closed form gives {closed}")
    return direct


@dataclass(frozen=True)
class DualCertificate:
    gamma: Fraction
    sd_star: Fraction
    lambda1: Fraction
    spectrum: Spectrum


def dual_certificate(g: Multigraph, spectrum: Spectrum) -> DualCertificate:
    """Constant dual vector gamma = -lambda_1; feasibility follows from the verified spectrum."""
    try:
        verify_spectrum_exact(g, spectrum)
    except (SpectrumRefuted, ValueError) as exc:
        raise UnverifiedSpectrumError(f"spectrum not verified, feasibility unproven: {exc}") from exc
    lam1 = spectrum.smallest
    gamma = -lam1
    sd_star = g.total_weight() / 2 + Fraction(g.n) * gamma / 4
    return DualCertificate(gamma, sd_star, lam1, spectrum)


@dataclass(frozen=True)
class DualityProof:
    params: MinusculeParams
    n: int
    sd_primal: Fraction
    sd_dual: Fraction
    lambda1: Fraction


def verify_strong_duality(p: MinusculeParams) -> DualityProof:
    g, e = lattice_embedding(p)
    primal = sd_primal(e, g)
    cert = dual_certificate(g, closed_form_spectrum(p))
    if primal != cert.sd_star:
        raise DualityGapError(primal, cert.sd_star)
    return DualityProof(p, g.n, primal, cert.sd_star, cert.lambda1)


# cos(q*pi) is rational only for these arguments
_EXACT_ARCCOS_OVER_PI = {
    Fraction(1): Fraction(0),
    Fraction(1, 2): Fraction(1, 3),
    Fraction(0): Fraction(1, 2),
    Fraction(-1, 2): Fraction(2, 3),
    Fraction(-1): Fraction(1),
}


def expectation_terms(p: MinusculeParams) -> list[tuple[int, int, Fraction]]:
    """(k, S_k, cosine) for every positive weight k present."""
    # weights never exceed r in any minuscule family
    return [(k, s_k_closed_form(p, k), 1 - p.phi * (1 + k))
            for k in range(1, p.r + 1) if s_k_closed_form(p, k)]


def expected_cut(terms, prec_bits: int = 128, with_pi: bool = True):
    """Sum of k * S_k * arccos(cos)/pi as (exact rational part, mpf irrational part or None)."""
    exact = Fraction(0)
    rest = []
    for k, count, cos in terms:
        if with_pi and cos in _EXACT_ARCCOS_OVER_PI:
            exact += k * count * _EXACT_ARCCOS_OVER_PI[cos]
        else:
            rest.append((k * count, cos))
    if not rest:
        return exact, None
    with mpmath.workprec(prec_bits):
        tot = mpmath.mpf(0)
        for weight, cos in rest:
            term = weight * mpmath.acos(mpmath.mpf(cos.numerator) / cos.denominator)
            tot += term / mpmath.pi if with_pi else term
        return exact, tot


@dataclass(frozen=True)
class BoundsReport:
    params: MinusculeParams
    lower_raw: float
    upper_raw: Fraction
    lower_int: int
    upper_int: int
    lower_exact: Fraction | None = None  # set when every arccos term is a rational multiple of pi

    def as_dict(self) -> dict:
        return {"ell": self.lower_raw, "u": fraction_str(self.upper_raw),
                "ell_ceil": self.lower_int, "u_floor": self.upper_int}


GUARD = mpmath.mpf(2) ** -30


def certified_ceil(terms, precisions=(128, 256, 1024)) -> tuple[float, int, Fraction | None]:
    exact, rest = expected_cut(terms, precisions[0])
    if rest is None:
        return float(exact), math.ceil(exact), exact
    for prec in precisions:
        exact, rest = expected_cut(terms, prec)
        with mpmath.workprec(prec):
            value = exact.numerator / mpmath.mpf(exact.denominator) + rest
            if abs(value - mpmath.nint(value)) > GUARD:
                return float(value), int(mpmath.ceil(value)), None
    raise PrecisionError(f"expected cut value {value} is within 2^-30 of an integer")


def bounds_closed_form(p: MinusculeParams) -> BoundsReport:
    terms = expectation_terms(p)
    u = p.phi * sum((Fraction(count * k * (k + 1), 2) for k, count, _ in terms), Fraction(0))
    ell, ell_ceil, ell_exact = certified_ceil(terms)
    return BoundsReport(p, ell, u, ell_ceil, math.floor(u), ell_exact)


def gw_objective(theta: float) -> float:
    return 2 / math.pi * theta / (1 - math.cos(theta))


def gw_alpha_constant() -> tuple[float, float]:
    """(minimum, minimizer) of (2/pi) * theta / (1 - cos theta) on (0, pi]."""
    res = minimize_scalar(gw_objective, bounds=(0.5, math.pi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.fun), float(res.x)


class RatioDomainError(ValueError):
    pass


def performance_ratio(lambda1, d) -> float:
    if d <= 0:
        raise RatioDomainError(f"degree must be positive, got {d}")
    t = Fraction(lambda1) / Fraction(d)
    if not -1 <= t < 0:
        raise RatioDomainError(f"lambda1/d = {t} outside [-1, 0)")
    return 2 / math.pi * math.acos(float(t)) / (1 - float(t))


@dataclass
class CertificateReport:
    params: MinusculeParams
    sd_primal: Fraction
    sd_dual: Fraction
    lambda1: Fraction
    bounds: BoundsReport
    alpha_g: float

    def as_dict(self) -> dict:
        return {
            "sd_primal": fraction_str(self.sd_primal),
            "sd_dual": fraction_str(self.sd_dual),
            "lambda1": fraction_str(self.lambda1),
            "ell": self.bounds.lower_raw,
            "u": fraction_str(self.bounds.upper_raw),
            "ell_ceil": self.bounds.lower_int,
            "u_floor": self.bounds.upper_int,
            "alpha_G": self.alpha_g,
        }


def certify(p: MinusculeParams) -> CertificateReport:
    proof = verify_strong_duality(p)
    bounds = bounds_closed_form(p)
    if bounds.upper_raw != proof.sd_primal:
        raise InconsistencyError(f"closed-form u = {bounds.upper_raw} but SD(f) = {proof.sd_primal}")
    return CertificateReport(p, proof.sd_primal, proof.sd_dual, proof.lambda1, bounds,
                             performance_ratio(proof.lambda1, perron_degree(p)))
