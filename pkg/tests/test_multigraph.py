import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minuscule_maxcut.multigraph import (Cut, DimensionError, Multigraph, cut_weight, fraction_str,
                                         weight_histogram, weighted_degree)
from support import graph, naive_cut_weights, small_families


@st.composite
def rational_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    weights = st.fractions(min_value=0, max_value=5, max_denominator=6)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = draw(weights)
    return Multigraph.from_matrix([f"v{i}" for i in range(n)], m)


@st.composite
def graph_and_cut(draw):
    g = draw(rational_graphs())
    return g, Cut(draw(st.integers(0, (1 << g.n) - 1)), g.n)


def test_single_edge_cut():
    g = Multigraph.from_edges(["x", "y"], [(0, 1, 2)])
    assert cut_weight(g, Cut.from_members([1], 2)) == 2


def test_empty_side_cuts_nothing():
    g = graph("typeA:4,1")
    assert cut_weight(g, Cut(0, g.n)) == 0


def test_singleton_cut_is_row_sum():
    g = graph("typeA:4,1")
    assert cut_weight(g, Cut.from_members([0], g.n)) == sum(g.weights[0]) == 3


def test_cut_length_mismatch():
    g = graph("typeA:4,1")
    with pytest.raises(DimensionError):
        cut_weight(g, Cut(0, 3))


def test_histograms_of_exceptional_graphs():
    h6 = weight_histogram(graph("e6"))
    assert h6[1] == 135 and h6[2] == 0
    h7 = weight_histogram(graph("e7"))
    assert (h7[1], h7[2]) == (756, 28)


def test_histogram_type_a_4_1():
    h = weight_histogram(graph("typeA:4,1"))
    assert h.counts == {Fraction(1): 15}
    assert h.zero_pairs == 30


@pytest.mark.parametrize("name,degree", [("e6", 10), ("typeD:5", 5)])
def test_weighted_degree_constant(name, degree):
    g = graph(name)
    assert {weighted_degree(g, i) for i in range(g.n)} == {degree}


def test_isolated_vertex_degree():
    g = Multigraph.from_matrix(["v"], [[0]])
    assert weighted_degree(g, 0) == 0
    with pytest.raises(IndexError):
        weighted_degree(g, 1)


@pytest.mark.parametrize("matrix,msg", [
    ([[0, 1], [2, 0]], "asymmetric"),
    ([[0, -1], [-1, 0]], "negative"),
    ([[1, 0], [0, 0]], "diagonal"),
])
def test_rejects_bad_matrices(matrix, msg):
    with pytest.raises(ValueError, match=msg):
        Multigraph.from_matrix(["a", "b"], matrix)


def test_rejects_duplicate_labels():
    with pytest.raises(ValueError, match="distinct"):
        Multigraph.from_matrix(["a", "a"], [[0, 1], [1, 0]])


def test_cut_mask_must_fit():
    with pytest.raises(DimensionError):
        Cut(0b100, 2)
    with pytest.raises(DimensionError):
        Cut.from_members([5], 3)


def test_cut_helpers():
    c = Cut.from_members([0, 2], 4)
    assert c.members() == [0, 2] and 2 in c and 1 not in c
    assert c.complement().members() == [1, 3]
    assert c.hex() == "0x5"


def test_fraction_strings():
    assert fraction_str(Fraction(405, 4)) == "405/4"
    assert fraction_str(Fraction(12)) == "12"
    assert fraction_str(Fraction(-3, 6)) == "-1/2"


def test_json_format_and_round_trip():
    g = Multigraph.from_edges(["a", "b", "c"], [(0, 1, "1/2"), (1, 2, 3)])
    data = json.loads(g.dumps())
    assert data == {"n": 3, "labels": ["a", "b", "c"], "edges": [[0, 1, "1/2"], [1, 2, "3"]]}
    assert Multigraph.from_json(data) == g


def test_int_matrix_scaling():
    g = Multigraph.from_edges(["a", "b", "c"], [(0, 1, "1/2"), (1, 2, "2/3")])
    assert g.denominator == 6
    assert g.int_matrix.tolist() == [[0, 3, 0], [3, 0, 4], [0, 4, 0]]
    assert not g.is_integral()


@pytest.mark.parametrize("name", small_families())
def test_constructed_graphs_are_regular(name):
    g = graph(name)
    assert len({weighted_degree(g, i) for i in range(g.n)}) == 1


@given(graph_and_cut())
def test_complement_symmetry(gc):
    g, cut = gc
    assert cut_weight(g, cut) == cut_weight(g, cut.complement())


@given(graph_and_cut())
def test_cut_matches_naive_pair_sum(gc):
    g, cut = gc
    assert cut_weight(g, cut) == Fraction(int(naive_cut_weights(g)[cut.mask]), g.denominator)


@given(graph_and_cut())
def test_total_weight_bound(gc):
    g, cut = gc
    w = cut_weight(g, cut)
    assert w <= g.total_weight()
    all_cross = all((i in cut) != (j in cut) for i, j, _ in g.edges())
    assert (w == g.total_weight()) == all_cross


@given(rational_graphs())
def test_histogram_counts_every_pair(g):
    h = weight_histogram(g)
    assert h.total_pairs() == g.n * (g.n - 1) // 2
    assert h.moment(lambda k: k) == g.total_weight()


@given(rational_graphs())
def test_json_round_trip_property(g):
    assert Multigraph.from_json(json.loads(g.dumps())) == g
