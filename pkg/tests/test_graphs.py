import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import clique, cycle, path, random_graph, star
from motifcount.graphs import (
    ColoredGraph,
    Graph,
    GraphFormatError,
    automorphism_count,
    canonical_form,
    color_preserving_isomorphic,
    colored_automorphism_count,
    connected_components,
    encode_graph6,
    format_edge_list,
    parse_edge_list,
    parse_graph6,
    quotient,
    tensor_product,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


class TestGraph6:
    def test_known_decodings(self):
        assert parse_graph6("A_") == Graph(2, [(0, 1)])
        assert canonical_form(parse_graph6("BW")).key == canonical_form(path(2)).key
        assert parse_graph6("Bw") == clique(3)
        assert parse_graph6("CR") == Graph(4, [(0, 2), (1, 3), (2, 3)])

    @settings(max_examples=200, deadline=None)
    @given(graphs())
    def test_round_trip(self, g):
        assert parse_graph6(encode_graph6(g)) == g

    def test_multibyte_round_trip(self):
        g = Graph(70, [(0, 69), (5, 42)])
        text = encode_graph6(g)
        assert text.startswith("~")
        assert parse_graph6(text) == g

    def test_errors_name_byte_offsets(self):
        with pytest.raises(GraphFormatError, match="offset"):
            parse_graph6("B\x20")
        with pytest.raises(GraphFormatError):
            parse_graph6("")
        with pytest.raises(GraphFormatError):
            parse_graph6("C")  # truncated data


class TestCanonicalForm:
    @settings(max_examples=100, deadline=None)
    @given(graphs(max_n=7), st.randoms(use_true_random=False))
    def test_invariant_under_relabeling(self, g, rnd):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        assert canonical_form(g.relabel(perm)).key == canonical_form(g).key

    def test_distinguishes_classes(self):
        assert canonical_form(path(3)).key != canonical_form(star(3)).key


class TestAutomorphisms:
    def test_known_groups(self):
        assert automorphism_count(clique(3)) == 6
        assert automorphism_count(path(4)) == 2
        assert automorphism_count(Graph(1)) == 1
        assert automorphism_count(cycle(4)) == 8
        assert automorphism_count(star(3)) == 6

    def test_matches_brute_force(self):
        rng = random.Random(5)
        for _ in range(30):
            g = random_graph(rng, rng.randint(1, 6))
            brute = sum(
                1
                for perm in itertools.permutations(range(g.n))
                if all(g.has_edge(perm[u], perm[v]) for u, v in g.edges)
            )
            assert automorphism_count(g) == brute


class TestProducts:
    def test_tensor_vertex_count(self):
        p = tensor_product(clique(3), cycle(4))
        assert p.n == 12

    def test_hom_multiplicativity_witness(self):
        # K2 x K2 = two disjoint edges
        p = tensor_product(clique(2), clique(2))
        assert p.n == 4 and len(p.edges) == 2


class TestQuotient:
    def test_path_quotients(self):
        p = path(4)  # vertices 0..4 consecutively
        q = quotient(p, [{0, 4}, {1}, {2}, {3}])
        assert not q.loop_vertices
        assert q.graph.n == 4
        q2 = quotient(p, [{0, 2, 4}, {1, 3}])
        assert not q2.loop_vertices
        assert q2.graph == Graph(2, [(0, 1)])

    def test_loops_reported(self):
        q = quotient(clique(2), [{0, 1}])
        assert q.loop_vertices


class TestColored:
    def test_iso_respects_colors(self):
        a = ColoredGraph(path(1), (0, 1))
        b = ColoredGraph(path(1), (1, 0))
        c = ColoredGraph(path(1), (0, 0))
        assert color_preserving_isomorphic(a, b)
        assert not color_preserving_isomorphic(a, c)

    def test_colored_automorphisms(self):
        mono = ColoredGraph(clique(3), (0, 0, 0))
        colorful = ColoredGraph(clique(3), (0, 1, 2))
        assert colored_automorphism_count(mono) == 6
        assert colored_automorphism_count(colorful) == 1


class TestEdgeList:
    def test_round_trip_plain(self):
        g = path(3)
        assert parse_edge_list(format_edge_list(g)) == g

    def test_round_trip_colored(self):
        g = ColoredGraph(path(2), (2, 0, 1))
        assert parse_edge_list(format_edge_list(g)) == g

    def test_comments_and_errors(self):
        g = parse_edge_list("# a path\nn 3\ne 0 1\ne 1 2\n")
        assert g == path(2)
        with pytest.raises(ValueError):
            parse_edge_list("n 2\ne 0 5\n")


def test_connected_components():
    g = Graph(5, [(0, 1), (2, 3)])
    assert connected_components(g) == [[0, 1], [2, 3], [4]]
