import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from pottspoly.cluster import (
    choose_L,
    connected_signed_sum,
    enumerate_clusters,
    total_vertex_f,
    truncated_log_xi,
    truncation_error_bound,
    ursell,
)
from pottspoly.errors import DegenerateError, PreconditionError, SizeError
from pottspoly.graphs import complete, cycle, hypercube
from pottspoly.polymers import HIGH, LOW, PolymerModel, PolymerSystem, sum_compatible_families, tune_decay

from conftest import connected_atlas


class TestUrsell:
    @pytest.mark.parametrize("g", connected_atlas(5))
    def test_matches_edge_subset_oracle(self, g):
        assert connected_signed_sum(g) == brute.connected_spanning_signed_sum(g.n, g.edges)

    @pytest.mark.parametrize("g", connected_atlas(6))
    def test_sign(self, g):
        val = connected_signed_sum(g)
        assert val != 0 and (val > 0) == (g.n % 2 == 1)

    def test_known_values(self):
        assert ursell(complete(1)) == 1
        assert ursell(complete(2)) == Fraction(-1, 2)
        assert ursell((3, [(0, 1), (1, 2), (0, 2)])) == Fraction(2, 6)
        assert connected_signed_sum(complete(6)) == -120
        # a tree contributes (-1)^(k-1) only
        assert connected_signed_sum((4, [(0, 1), (1, 2), (2, 3)])) == -1

    def test_errors(self):
        with pytest.raises(PreconditionError):
            connected_signed_sum((3, [(0, 1)]))
        with pytest.raises(SizeError):
            connected_signed_sum(cycle(15))


class TestSeries:
    @pytest.mark.parametrize("w", [0.01, 0.1, 0.3])
    def test_single_polymer_log_series(self, w):
        system = PolymerSystem.abstract([w], g=1.0)
        terms = {cl.order: cl.contribution for cl in enumerate_clusters(system, 8.0)}
        for k in range(1, 9):
            assert terms[k] == pytest.approx((-1) ** (k + 1) * w**k / k, abs=1e-12)

    def test_two_incompatible_polymers(self):
        system = PolymerSystem.abstract([0.1, 0.05], g=1.0, incompatible_pairs=[(0, 1)])
        clusters = {cl.indices: cl for cl in enumerate_clusters(system, 2.0)}
        assert clusters[(0, 1)].multiplicity == 2
        assert clusters[(0, 1)].contribution == pytest.approx(-0.1 * 0.05)
        # g = 2.5 per polymer keeps the order at most 12 under L = 30
        deep = PolymerSystem.abstract([0.1, 0.05], g=2.5, incompatible_pairs=[(0, 1)])
        value = truncated_log_xi(deep, 30.0).value
        assert value == pytest.approx(math.log(1.15), abs=1e-10)

    def test_compatible_polymers_do_not_interact(self):
        system = PolymerSystem.abstract([0.1, 0.2], g=1.0)
        assert all(len(set(cl.indices)) == 1 for cl in enumerate_clusters(system, 10.0))

    def test_k2_high(self):
        model = PolymerModel(complete(2), 2, math.log1p(0.2), HIGH)
        assert truncated_log_xi(model, 24.0).value == pytest.approx(math.log(1.1), abs=1e-9)

    @pytest.mark.parametrize(
        "g,q,beta,mode",
        [(cycle(4), 50, 0.3, HIGH), (complete(4), 1000, 1.0, HIGH), (hypercube(3), 1000, 5.9, LOW)],
    )
    def test_truncation_error_within_bound(self, g, q, beta, mode):
        base = PolymerModel(g, q, beta, mode)
        model, report = tune_decay(base, base.max_polymer_size())
        assert report.passed
        exact = math.log(sum_compatible_families(model))
        for L in (1.0, 2.0, 4.0):
            approx = truncated_log_xi(model.system(g_cap=L), L).value
            assert abs(approx - exact) <= truncation_error_bound(model.system(), L) * (1 + 1e-9)

    def test_clusters_unique_and_within_budget(self):
        system = PolymerSystem.abstract([0.1, 0.2, 0.05], g=[0.5, 0.7, 0.9], incompatible_pairs=[(0, 1), (1, 2)])
        seen = [cl.indices for cl in enumerate_clusters(system, 2.2)]
        assert len(seen) == len(set(seen))
        assert all(cl.g_value <= 2.2 + 1e-12 for cl in enumerate_clusters(system, 2.2))

    def test_degenerate_g(self):
        with pytest.raises(DegenerateError):
            list(enumerate_clusters(PolymerSystem.abstract([0.1], g=0.0), 1.0))

    def test_choose_L(self):
        assert choose_L(4.0, 0.1) == pytest.approx(math.log(80))
        assert total_vertex_f(PolymerSystem.abstract([0.1, 0.2], g=1.0, f=0.5)) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.floats(0.2, 1.0), st.integers(0, 10_000))
def test_ursell_matches_oracle_random(n, p, seed):
    h = nx.gnp_random_graph(n, p, seed=seed)
    if not nx.is_connected(h):
        return
    edges = list(h.edges())
    assert connected_signed_sum((n, edges)) == brute.connected_spanning_signed_sum(n, edges)
