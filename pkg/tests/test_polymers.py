import itertools
import math

import numpy as np
import pytest

import brute
from pottspoly.errors import DegenerateError, ParameterError
from pottspoly.exact import potts_log_partition, rc_partition
from pottspoly.graphs import complete, complete_bipartite, cycle, hypercube, path
from pottspoly.polymers import (
    HIGH,
    LOW,
    Polymer,
    PolymerModel,
    PolymerSystem,
    kp_check,
    kp_check_system,
    low_temp_restriction,
    sum_compatible_families,
    tune_decay,
)


def brute_high_xi(g, q, p):
    polys = brute.high_temp_polymers(g.n, g.edges)
    weights = [q ** (1 - len(v)) * p ** len(e) for v, e in polys]
    return brute.xi_families(weights, lambda a, b: not (polys[a][0] & polys[b][0]))


def brute_low_xi_tilde(g, q, beta):
    polys = []
    for r in range(1, (g.n + 1) // 2):
        for verts in itertools.combinations(range(g.n), r):
            inner = g.induced_edges(verts)
            if brute.is_connected(verts, inner):
                boundary = sum((a in verts) != (b in verts) for a, b in g.edges)
                sub = [(verts.index(a), verts.index(b)) for a, b in inner]
                w = math.exp(-beta * (boundary + len(inner))) * brute.potts_z(r, sub, q - 1, beta)
                polys.append((set(verts), w))
    closed = [set(v) | {u for x in v for u in g.adjacency[x]} for v, _ in polys]
    return brute.xi_families(
        [w for _, w in polys],
        lambda a, b: not (closed[a] & polys[b][0]),
        admissible=lambda fam: 2 * sum(len(polys[i][0]) for i in fam) < g.n,
    )


def brute_majority_sum(g, q, beta):
    total = 0.0
    for sigma in itertools.product(range(q), repeat=g.n):
        counts = np.bincount(sigma, minlength=q)
        if 2 * counts.max() > g.n:
            total += math.exp(beta * sum(sigma[a] == sigma[b] for a, b in g.edges))
    return total


class TestEnumeration:
    def test_counts(self):
        assert len(list(PolymerModel(cycle(4), 3, 0.5, HIGH).enumerate_polymers(2))) == 4
        assert len(list(PolymerModel(cycle(5), 3, 0.5, LOW).enumerate_polymers(2))) == 10

    def test_high_matches_brute_force(self):
        g = complete(4)
        got = {(pl.vertices, pl.edges) for pl in PolymerModel(g, 3, 0.5, HIGH).enumerate_polymers()}
        want = {(tuple(sorted(v)), e) for v, e in brute.high_temp_polymers(g.n, g.edges)}
        assert got == want

    def test_low_size_limit(self):
        model = PolymerModel(hypercube(3), 3, 1.0, LOW)
        assert model.max_polymer_size() == 3
        assert max(pl.v for pl in model.enumerate_polymers()) == 3

    def test_weights(self):
        g = hypercube(3)
        low = PolymerModel(g, 4, 1.3, LOW)
        single = Polymer.build(g, [0])
        assert low.weight(single) == pytest.approx(3 * math.exp(-3 * 1.3))
        high = PolymerModel(g, 4, 1.3, HIGH)
        edge = Polymer.build(g, [0, 1], [(0, 1)])
        assert high.weight(edge) == pytest.approx(math.expm1(1.3) / 4)

    def test_compatibility(self):
        g = cycle(8)
        low = PolymerModel(g, 3, 1.0, LOW)
        # adjacent singletons clash, singletons at distance 2 coexist
        a, b, c = Polymer.build(g, [0]), Polymer.build(g, [1]), Polymer.build(g, [2])
        assert not low.compatible(a, b)
        assert low.compatible(a, c)
        high = PolymerModel(g, 3, 1.0, HIGH)
        e1 = Polymer.build(g, [0, 1], [(0, 1)])
        e2 = Polymer.build(g, [1, 2], [(1, 2)])
        e3 = Polymer.build(g, [2, 3], [(2, 3)])
        assert not high.compatible(e1, e2) and high.compatible(e1, e3)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            PolymerModel(cycle(4), 2.5, 1.0, LOW)
        with pytest.raises(ParameterError):
            PolymerModel(cycle(4), 3, 1.0, "medium")


class TestIdentities:
    @pytest.mark.parametrize("g", [path(3), cycle(4), complete(4), complete_bipartite(2, 2)])
    @pytest.mark.parametrize("q,beta", [(2, 0.4), (3.5, 1.2)])
    def test_high_temp_against_brute(self, g, q, beta):
        model = PolymerModel(g, q, beta, HIGH)
        p = math.expm1(beta)
        want = brute_high_xi(g, q, p)
        assert sum_compatible_families(model) == pytest.approx(want, rel=1e-12)
        assert q**g.n * want == pytest.approx(brute.rc_z(g.n, g.edges, q, p), rel=1e-12)

    @pytest.mark.parametrize("g", [cycle(6), complete(4), complete_bipartite(3, 3), cycle(5)])
    @pytest.mark.parametrize("q,beta", [(3, 1.0), (4, 3.0)])
    def test_low_temp_against_brute(self, g, q, beta):
        model = PolymerModel(g, q, beta, LOW)
        xi_t = sum_compatible_families(model, restrict_size=low_temp_restriction(g))
        assert xi_t == pytest.approx(brute_low_xi_tilde(g, q, beta), rel=1e-12)
        assert q * math.exp(beta * g.m) * xi_t == pytest.approx(brute_majority_sum(g, q, beta), rel=1e-12)

    def test_restricted_at_most_full(self):
        model = PolymerModel(complete(4), 3, 1.0, LOW)
        full = sum_compatible_families(model)
        restricted = sum_compatible_families(model, restrict_size=2)
        assert restricted <= full * (1 + 1e-12)

    def test_methods_agree(self):
        model = PolymerModel(cycle(6), 3, 1.0, LOW)
        system = model.system()
        assert sum_compatible_families(system, method="vertex") == pytest.approx(
            sum_compatible_families(system, method="branching"), rel=1e-12
        )

    def test_q3_high_identity(self):
        g = hypercube(3)
        model = PolymerModel(g, 3, 0.4, HIGH)
        want = rc_partition(g, 3, math.expm1(0.4))
        assert 3**8 * sum_compatible_families(model) == pytest.approx(want, rel=1e-9)


class TestAbstract:
    def test_two_polymers(self):
        s = PolymerSystem.abstract([0.2, 0.3], incompatible_pairs=[(0, 1)])
        assert sum_compatible_families(s) == pytest.approx(1.5)
        s2 = PolymerSystem.abstract([0.2, 0.3])
        assert sum_compatible_families(s2) == pytest.approx(1.2 * 1.3)

    def test_subsystem(self):
        s = PolymerSystem.abstract([0.1, 0.2, 0.3], incompatible_pairs=[(0, 2)])
        sub = s.subsystem([0, 2])
        assert len(sub) == 2 and not sub.compatible(0, 1)


class TestKP:
    def test_passes_small_p_large_q(self):
        model = PolymerModel(cycle(8), 100, math.log1p(0.05), HIGH)
        report = kp_check(model, 5)
        assert report.passed and report.worst_ratio < 0.05

    def test_fails_large_p(self):
        report = kp_check(PolymerModel(cycle(8), 2, math.log1p(10.0), HIGH), 5)
        assert not report.passed and report.worst_ratio > 1e6

    def test_tune_improves(self):
        model = PolymerModel(cycle(6), 1000, 1.0, HIGH)
        tuned, report = tune_decay(model, 6)
        assert report.passed and tuned.g_boost >= 1

    def test_degenerate_f(self):
        s = PolymerSystem.abstract([0.1], g=1.0, f=0.0)
        with pytest.raises(DegenerateError):
            kp_check_system(s)

    def test_report_json(self):
        rec = kp_check(PolymerModel(cycle(6), 50, 0.2, HIGH), 3).to_json()
        assert {"worst_ratio", "worst_polymer", "pass", "cutoff"} <= set(rec)
