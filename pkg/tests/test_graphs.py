import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from pottspoly.errors import ParameterError, PreconditionError, RegularityError, SizeError
from pottspoly.graphs import (
    Graph,
    MultiGraph,
    boundary_size,
    check_eta,
    check_property_31,
    complete,
    complete_bipartite,
    core_set_certificate,
    count_connected_sets_with_boundary,
    count_cuts_at_most,
    cycle,
    edge_boundary,
    enumerate_connected_sets,
    eta_expansion,
    exhaustive_min_cut,
    generate,
    graph_power,
    hypercube,
    load_graph,
    min_cut,
    parse_edge_list,
    path,
    petersen,
    random_regular,
)
from pottspoly.graphs.core import dump_graph, format_edge_list

from conftest import connected_atlas


class TestGraph:
    def test_from_edges_normalises(self):
        g = Graph.from_edges(3, [(1, 0), (2, 1)])
        assert g.edges == ((0, 1), (1, 2))
        assert g.degrees() == [1, 2, 1]

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)]])
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(ParameterError):
            Graph.from_edges(3, edges)

    def test_generators(self):
        assert (hypercube(3).n, hypercube(3).m) == (8, 12)
        assert hypercube(4).regular_degree() == 4
        assert complete(5).m == 10
        assert complete_bipartite(3, 3).m == 9
        assert petersen().regular_degree() == 3 and petersen().m == 15
        assert cycle(6).regular_degree() == 2
        assert path(4).regular_degree() is None

    def test_random_regular_is_reproducible(self):
        a, b = random_regular(8, 3, seed=4), random_regular(8, 3, seed=4)
        assert a == b and a.regular_degree() == 3

    def test_generate_unknown_kind(self):
        with pytest.raises(ParameterError):
            generate("tree", n=4)
        with pytest.raises(ParameterError):
            generate("cycle")

    def test_edge_list_round_trip(self, tmp_path):
        g = petersen()
        assert parse_edge_list(format_edge_list(g)) == g
        f = tmp_path / "p.json"
        f.write_text(dump_graph(g))
        assert load_graph(f) == g
        assert json.loads(dump_graph(g))["n"] == 10

    def test_edge_list_count_mismatch(self):
        with pytest.raises(ParameterError):
            parse_edge_list("3 2\n0 1\n")

    def test_components_and_connectivity(self):
        g = Graph.from_edges(5, [(0, 1), (2, 3)])
        assert sorted(map(sorted, g.components())) == [[0, 1], [2, 3], [4]]
        assert not g.is_connected()
        assert g.is_connected_set(0b11) and not g.is_connected_set(0b101)

    def test_graph_power(self):
        assert graph_power(cycle(8), 2).regular_degree() == 4
        assert graph_power(cycle(8), 7) == complete(8)


class TestMultiGraph:
    def test_contraction_deletes_loops(self):
        mg = MultiGraph.from_graph(complete(4)).contract(0, 1)
        assert mg.n == 3 and mg.m == 5
        assert mg.mult[(0, 1)] == 2

    def test_contract_non_edge(self):
        with pytest.raises(ParameterError):
            MultiGraph.from_graph(path(3)).contract(0, 2)

    @pytest.mark.parametrize("g", connected_atlas(6)[::7] + [hypercube(3)])
    def test_contraction_never_decreases_min_cut(self, g):
        t = min_cut(g)
        mg = MultiGraph.from_graph(g)
        for a, b in list(mg.mult):
            assert min_cut(mg.contract(a, b)) >= t


class TestCuts:
    def test_boundary(self):
        g = cycle(6)
        assert boundary_size(g, 0b111) == 2
        assert sorted(edge_boundary(g, [0])) == [(0, 1), (0, 5)]

    @pytest.mark.parametrize("g", connected_atlas(6)[1::9])
    def test_min_cut_matches_brute_force(self, g):
        sizes = brute.cut_sizes(g.n, g.edges)
        assert min_cut(g) == exhaustive_min_cut(g) == min(sizes)
        assert count_cuts_at_most(g, 2 * min(sizes)) == sum(s <= 2 * min(sizes) for s in sizes)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_hypercube_min_cut(self, d):
        assert min_cut(hypercube(d)) == d

    def test_expansion_values(self):
        res = eta_expansion(hypercube(3))
        assert res.eta == 1 and len(res.witness) == 4
        assert eta_expansion(complete(4)).eta == 2
        assert eta_expansion(cycle(8)).eta == Fraction(1, 2)
        assert check_eta(hypercube(3), 1) and not check_eta(hypercube(3), Fraction(11, 10))

    def test_property_31(self):
        for g in (hypercube(3), complete(5), complete_bipartite(3, 3)):
            assert check_property_31(g).holds
        with pytest.raises(RegularityError):
            check_property_31(path(4))

    def test_size_guard(self, monkeypatch):
        monkeypatch.setenv("POTTS_MAX_EXHAUSTIVE", "6")
        with pytest.raises(SizeError):
            eta_expansion(hypercube(3))


class TestConnectedSets:
    def test_path_center(self):
        recs = list(enumerate_connected_sets(path(3), 1, 3))
        assert sorted(r.vertices for r in recs) == [(0, 1), (0, 1, 2), (1,), (1, 2)]

    def test_triangle_edge_subsets(self):
        # {0}, {0,1}, {0,2} and the four connected spanning edge sets of the triangle
        recs = list(enumerate_connected_sets(complete(3), 0, 3, mode="with_edge_subsets"))
        assert len(recs) == 7

    @pytest.mark.parametrize("g", [cycle(6), hypercube(3), petersen(), complete_bipartite(2, 3)])
    def test_matches_brute_force(self, g):
        for root in range(g.n):
            got = {r.mask for r in enumerate_connected_sets(g, root, 4)}
            want = set()
            for mask in range(1 << g.n):
                verts = [v for v in range(g.n) if mask >> v & 1]
                if mask >> root & 1 and len(verts) <= 4 and brute.is_connected(verts, g.induced_edges(verts)):
                    want.add(mask)
            assert got == want

    def test_edge_subsets_match_brute_force(self):
        g = complete(4)
        got = {(r.vertices, r.edges) for r in enumerate_connected_sets(g, 0, 4, mode="with_edge_subsets")}
        want = {(tuple(sorted(v)), e) for v, e in brute.high_temp_polymers(g.n, g.edges) if 0 in v}
        want.add(((0,), ()))
        assert got == want

    def test_boundary_counts(self):
        assert count_connected_sets_with_boundary(hypercube(3), 0, 4) == 6
        assert count_connected_sets_with_boundary(hypercube(3), 0, 3) == 1
        assert count_connected_sets_with_boundary(hypercube(3), 0, 1) == 0

    def test_bad_root(self):
        with pytest.raises(ParameterError):
            list(enumerate_connected_sets(cycle(4), 9, 2))


class TestCoreSets:
    def test_q4_sets(self):
        g = hypercube(4)
        for verts in ([0], [0, 1], [0, 1, 3, 2], [0, 1, 3, 7, 15]):
            cert = core_set_certificate(g, verts)
            assert cert.check, cert

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            core_set_certificate(hypercube(3), [0, 7])
        with pytest.raises(RegularityError):
            core_set_certificate(path(4), [0])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.floats(0.2, 0.9), st.integers(0, 10_000))
def test_boundary_is_symmetric(n, p, seed):
    from pottspoly.graphs import random_graph

    g = random_graph(n, p, seed=seed)
    full = (1 << n) - 1
    rng = np.random.default_rng(seed)
    mask = int(rng.integers(0, full + 1))
    assert boundary_size(g, mask) == boundary_size(g, full ^ mask)
