import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from minuscule_maxcut import certificates
from minuscule_maxcut.certificates import (DualityGapError, Embedding, EmbeddingError, InconsistencyError,
                                           PrecisionError, RatioDomainError, UnverifiedSpectrumError,
                                           bounds_closed_form, build_embedding, certify, dual_certificate,
                                           gw_alpha_constant, gw_objective, performance_ratio, sd_primal,
                                           verify_strong_duality)
from minuscule_maxcut.picard import intersect
from minuscule_maxcut.spectral import closed_form_spectrum, printed_spectrum, perron_degree
from support import embedded, fraction_rank, graph, model, params, small_families


def _entry_for_product(name, k):
    g, e = embedded(name)
    i, j = next((i, j) for i in range(g.n) for j in range(g.n) if i != j and g.weights[i][j] == k)
    return e.gram[i][j]


def test_embedding_examples():
    assert _entry_for_product("e6", 0) == Fraction(1, 4)
    assert _entry_for_product("typeD:5", 1) == Fraction(-3, 5)


@pytest.mark.parametrize("name", small_families())
def test_gram_entries_follow_intersections(name):
    p = params(name)
    g, e = embedded(name)
    divs = model(name).divisors
    for i in range(g.n):
        assert e.gram[i][i] == 1
        for j in range(i + 1, g.n):
            assert e.gram[i][j] == e.gram[j][i] == 1 - p.phi * (1 + intersect(divs[i], divs[j], p))


@pytest.mark.parametrize("name", ["typeA:4,1", "typeA:4,2", "typeD:5", "e6", "e7"])
def test_gram_rank(name):
    p = params(name)
    _, e = embedded(name)
    assert fraction_rank(e.gram) == p.rank


@pytest.mark.parametrize("name", small_families())
def test_gram_is_psd_numerically(name):
    _, e = embedded(name)
    assert np.linalg.eigvalsh(e.gram_array()).min() > -1e-9


def test_embedding_order_must_match_graph():
    p = params("typeA:4,1")
    divs = list(model("typeA:4,1").divisors)
    with pytest.raises(EmbeddingError):
        build_embedding(p, divs[::-1], graph("typeA:4,1"))


@pytest.mark.parametrize("name,value", [("e6", Fraction(405, 4)), ("e7", 560), ("typeD:5", 32),
                                        ("typeA:4,1", Fraction(25, 2)), ("typeA:5,1", Fraction(135, 4))])
def test_sd_primal_values(name, value):
    g, e = embedded(name)
    assert sd_primal(e, g) == value


def test_sd_primal_detects_inconsistent_gram():
    g, e = embedded("typeA:4,1")
    tampered = [list(row) for row in e.gram]
    i, j, _ = next(g.edges())
    tampered[i][j] = tampered[j][i] = Fraction(0)
    with pytest.raises(InconsistencyError):
        sd_primal(Embedding(tuple(map(tuple, tampered)), e.params, e.classes), g)


def test_sd_primal_size_mismatch():
    g, _ = embedded("typeA:4,1")
    _, e = embedded("typeD:5")
    with pytest.raises(EmbeddingError):
        sd_primal(e, g)


def test_sd_primal_on_bare_gram():
    g = graph("typeA:4,1")
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(10)) for i in range(10))
    # orthogonal unit vectors cut every edge half way
    assert sd_primal(Embedding(ident), g) == Fraction(15, 2)


@pytest.mark.parametrize("name,gamma,sd", [("e6", 5, Fraction(405, 4)), ("typeA:4,1", 2, Fraction(25, 2)),
                                           ("typeD:5", 3, 32)])
def test_dual_certificates(name, gamma, sd):
    cert = dual_certificate(graph(name), closed_form_spectrum(params(name)))
    assert cert.gamma == gamma and cert.sd_star == sd and cert.lambda1 == -gamma


def test_dual_refuses_unverified_spectrum():
    name = "typeA:4,1"
    with pytest.raises(UnverifiedSpectrumError):
        dual_certificate(graph(name), printed_spectrum(params(name)))


def test_dual_feasibility_numerically():
    g = graph("e7")
    cert = dual_certificate(g, closed_form_spectrum(params("e7")))
    M = g.int_matrix.astype(float) + float(cert.gamma) * np.eye(g.n)
    assert np.linalg.eigvalsh(M).min() > -1e-9


@pytest.mark.parametrize("name,value", [("e6", Fraction(405, 4)), ("typeD:5", 32), ("typeA:5,1", Fraction(135, 4))])
def test_strong_duality(name, value):
    proof = verify_strong_duality(params(name))
    assert proof.sd_primal == proof.sd_dual == value


def test_duality_gap_error_message():
    err = DualityGapError(Fraction(1), Fraction(2))
    assert "1" in str(err) and err.dual == 2


def test_bounds_examples():
    b = bounds_closed_form(params("e6"))
    assert (b.lower_exact, b.upper_raw, b.lower_int, b.upper_int) == (90, Fraction(405, 4), 90, 101)
    b = bounds_closed_form(params("typeA:4,1"))
    assert b.lower_raw == pytest.approx(10.986, rel=1e-3)
    assert (b.lower_int, b.upper_raw, b.upper_int) == (11, Fraction(25, 2), 12)
    b = bounds_closed_form(params("typeD:5"))
    assert b.lower_raw == pytest.approx(28.191, rel=1e-3)
    assert (b.lower_int, b.upper_int) == (29, 32)


def test_bounds_e7():
    b = bounds_closed_form(params("e7"))
    assert (b.lower_int, b.upper_raw) == (516, 560)


def test_exact_expectations():
    assert bounds_closed_form(params("typeA:5,1")).lower_exact == 30
    assert bounds_closed_form(params("typeD:8")).lower_exact == Fraction(14464, 3)
    assert bounds_closed_form(params("typeA:5,3")).lower_exact == Fraction(4445, 3)
    assert bounds_closed_form(params("e7")).lower_exact is None


@pytest.mark.parametrize("name", small_families() + ["typeD:8"])
def test_expectation_matches_pairwise_arccos(name):
    # E[W] summed pair by pair from the Gram, in double precision
    g, e = embedded(name)
    G = np.clip(e.gram_array(), -1, 1)
    W = g.int_matrix.astype(float)
    iu = np.triu_indices(g.n, 1)
    direct = float((W[iu] * np.arccos(G[iu])).sum() / math.pi)
    assert bounds_closed_form(params(name)).lower_raw == pytest.approx(direct, rel=1e-9)


@pytest.mark.parametrize("name", small_families() + ["typeA:6,4", "typeD:10"])
def test_bounds_ordering(name):
    b = bounds_closed_form(params(name))
    assert b.lower_raw <= b.upper_raw
    assert b.lower_int <= b.upper_int


def test_precision_guard_escalates_then_fails(monkeypatch):
    monkeypatch.setattr(certificates, "GUARD", mpmath.mpf(1))
    with pytest.raises(PrecisionError):
        bounds_closed_form(params("typeA:4,1"))


def test_alpha_constant():
    alpha, theta = gw_alpha_constant()
    assert 0.878566 <= alpha <= 0.878568
    assert gw_objective(math.pi) == pytest.approx(1.0, abs=1e-15)
    # the minimizer solves 1 - cos t - t sin t = 0; locate it by bisection
    lo, hi = 2.0, 3.0
    f = lambda t: 1 - math.cos(t) - t * math.sin(t)
    for _ in range(100):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(lo) * f(mid) > 0 else (lo, mid)
    assert theta == pytest.approx(lo, abs=1e-6)
    assert alpha == pytest.approx(gw_objective(lo), abs=1e-12)


def test_performance_ratio_examples():
    assert performance_ratio(-5, 10) == pytest.approx(8 / 9, abs=1e-12)
    assert performance_ratio(-1, 1) == pytest.approx(1.0, abs=1e-15)
    assert performance_ratio(-2, 3) == pytest.approx(2 / math.pi * math.acos(-2 / 3) / (5 / 3), abs=1e-15)


@pytest.mark.parametrize("lam,d", [(-1, 0), (1, 3), (0, 3), (-4, 3)])
def test_performance_ratio_domain(lam, d):
    with pytest.raises(RatioDomainError):
        performance_ratio(lam, d)


@pytest.mark.parametrize("name", small_families() + ["typeA:6,1", "typeA:6,4", "typeD:8", "typeD:10"])
def test_ratio_between_alpha_and_one(name):
    alpha, _ = gw_alpha_constant()
    p = params(name)
    r = performance_ratio(closed_form_spectrum(p).smallest, perron_degree(p))
    assert alpha <= r <= 1


def _ratios(names):
    out = []
    for n in names:
        b = bounds_closed_form(params(n))
        out.append(b.lower_raw / float(b.upper_raw))
    return out


def test_ratio_trend_type_d_nondecreasing():
    ratios = _ratios([f"typeD:{r}" for r in range(5, 11)])
    assert all(x <= y for x, y in zip(ratios, ratios[1:])), ratios


def test_ratio_trend_type_a_nondecreasing():
    ratios = _ratios([f"typeA:{r},{r - 2}" for r in range(4, 9)])
    assert all(x <= y for x, y in zip(ratios, ratios[1:])), ratios


def test_ratio_trend_tops_exceed_095():
    assert min(_ratios(["typeD:10", "typeA:8,6"])) > 0.95


def test_certify_report():
    rep = certify(params("e6"))
    d = rep.as_dict()
    assert set(d) == {"sd_primal", "sd_dual", "lambda1", "ell", "u", "ell_ceil", "u_floor", "alpha_G"}
    assert (d["sd_primal"], d["sd_dual"], d["lambda1"], d["u"]) == ("405/4", "405/4", "-5", "405/4")
    assert (d["ell_ceil"], d["u_floor"]) == (90, 101)
    assert d["alpha_G"] == pytest.approx(8 / 9, abs=1e-12)
