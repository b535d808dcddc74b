"""Approximate sampling from polymer measures and from the Potts model.

The polymer sampler walks through the polymers in a fixed order and includes
each one with its conditional probability given the decisions so far. That
probability is ``w_i Xi(A \\ N[i]) / Xi(A)`` where ``A`` is the set of polymers
still allowed at step ``i``; both partition functions come from one
precomputed list of clusters, restricted to ``A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cluster import enumerate_clusters, total_vertex_f
from ..errors import ConsistencyError, ParameterError, SamplingError
from ..exact.sampling import PottsTable, edge_components
from ..graphs.core import Graph
from ..polymers import PolymerSystem
from .fptas import DEFAULT_EPS, prepare_model, size_cap_for
from .regime import HIGH, dispatch_regime

CLAMP_TOL = 1e-9
MAX_REJECTIONS = 1000


class SelfReducibleSampler:
    """Sampler for the polymer measure ``nu(Lambda) ∝ prod w`` of a system.

    ``L_universe`` drops polymers with ``g > L_universe`` (their total
    probability is at most ``e^-L_universe sum_v f_v``); ``L_clusters`` is the
    budget of the cluster expansion used for every ratio.
    """

    def __init__(self, system: PolymerSystem, delta: float, L_universe: float | None = None, L_clusters: float | None = None):
        if not 0 < delta < 1:
            raise ParameterError("delta must be in (0, 1)")
        total_f = total_vertex_f(system)
        if L_universe is None:
            L_universe = math.log(4 * total_f / delta) if total_f > 0 else 0.0
        keep = [i for i in range(len(system)) if system.g[i] <= L_universe + 1e-12 and system.weights[i] > 0]
        self.system = system.subsystem(keep)
        k = len(self.system)
        if L_clusters is None:
            # two ratio evaluations per polymer, each off by at most e^-L sum_v f_v
            L_clusters = math.log(8 * max(k, 1) * total_f / delta) if total_f > 0 else 0.0
        self.L_universe = L_universe
        self.L_clusters = L_clusters
        self.clamp_count = 0
        self._memo: dict[int, float] = {}
        self._incompat = [int(x) for x in self.system.incompat]
        clusters = list(enumerate_clusters(self.system, L_clusters)) if k else []
        self.cluster_count = len(clusters)
        member = np.zeros((len(clusters), k), dtype=bool)
        contrib = np.zeros(len(clusters))
        for c, cl in enumerate(clusters):
            member[c, list(set(cl.indices))] = True
            contrib[c] = cl.contribution
        self._member = member
        self._contrib = contrib

    def log_xi(self, allowed: int) -> float:
        """Truncated ``ln Xi`` of the subsystem on the polymers in the bitmask ``allowed``."""
        hit = self._memo.get(allowed)
        if hit is not None:
            return hit
        k = len(self.system)
        if allowed == 0 or not len(self._contrib):
            val = 0.0
        else:
            bits = np.array([(allowed >> i) & 1 for i in range(k)], dtype=bool)
            ok = ~np.any(self._member[:, ~bits], axis=1)
            val = math.fsum(self._contrib[ok])
        self._memo[allowed] = val
        return val

    def inclusion_probability(self, i: int, allowed: int) -> float:
        """P(include polymer ``i`` | allowed set), ``allowed`` holding only indices >= i."""
        w = float(self.system.weights[i])
        if w <= 0:
            return 0.0
        rest = allowed & ~(1 << i)
        log_num = math.log(w) + self.log_xi(rest & ~self._incompat[i])
        prob = math.exp(log_num - self.log_xi(allowed))
        if prob < -CLAMP_TOL or prob > 1 + CLAMP_TOL:
            raise ConsistencyError(f"conditional probability {prob:.6g} for polymer {i} is outside [0, 1]")
        if prob > 1 or prob < 0:
            self.clamp_count += 1
            prob = min(1.0, max(0.0, prob))
        return prob

    def sample_indices(self, rng: np.random.Generator) -> list[int]:
        k = len(self.system)
        allowed = (1 << k) - 1
        chosen = []
        for i in range(k):
            if not allowed >> i & 1:
                continue
            p = self.inclusion_probability(i, allowed)
            if rng.random() < p:
                chosen.append(i)
                allowed &= ~self._incompat[i]
            allowed &= ~(1 << i)
        return chosen

    def sample(self, rng: np.random.Generator) -> list:
        return [self.system.polymers[i] for i in self.sample_indices(rng)]


def self_reducible_sample(system: PolymerSystem, delta: float, rng: np.random.Generator) -> list:
    """One pairwise compatible family drawn approximately from the polymer measure."""
    return SelfReducibleSampler(system, delta).sample(rng)


@dataclass
class SamplerInfo:
    regime: str
    polymer_count: int
    cluster_count: int
    L_universe: float
    L_clusters: float
    decay_scale: float
    g_boost: float


class PottsSampler:
    """Approximate Potts sampler in either supported regime.

    High regime: draw a polymer family, use its edges as a random cluster
    configuration and colour components uniformly (Edwards-Sokal).
    Low regime: pick the ground-state colour uniformly, draw a family from
    the polymer measure (rejecting total size >= n/2) and colour each polymer
    with an exact sample of its Potts measure over the other q-1 colours.
    """

    def __init__(
        self, g: Graph, q: int, beta: float, delta: float, eps: float = DEFAULT_EPS, kp_cutoff: int | None = None,
        d: int | None = None,
    ):
        if int(q) != q or q < 2:
            raise ParameterError("Potts sampling needs integer q >= 2")
        self.g, self.q, self.beta, self.delta = g, int(q), float(beta), delta
        self.rejections = 0
        if beta == 0:
            self.regime, self.model, self.sampler = HIGH, None, None
            return
        degree = d if d is not None else g.max_degree
        self.regime = dispatch_regime(q, degree, beta, eps)
        self.model, self.kp_report = prepare_model(g, q, beta, self.regime, eps, kp_cutoff)
        universe_L = math.log(4 * g.n * self.model.f_vertex() / delta)
        system = self.model.system(size_cap=size_cap_for(self.model, universe_L), g_cap=universe_L)
        self.sampler = SelfReducibleSampler(system, delta / 2, L_universe=universe_L)
        self._tables: dict[Graph, PottsTable] = {}

    @property
    def info(self) -> SamplerInfo:
        s = self.sampler
        if s is None:
            return SamplerInfo(self.regime, 0, 0, 0.0, 0.0, 1.0, 1.0)
        return SamplerInfo(
            self.regime, len(s.system), s.cluster_count, s.L_universe, s.L_clusters,
            self.model.decay_scale, self.model.g_boost,
        )

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.sampler is None:
            return rng.integers(0, self.q, size=self.g.n)
        if self.regime == HIGH:
            edge_ids = self.g.edge_index()
            chosen = set()
            for poly in self.sampler.sample(rng):
                chosen.update(edge_ids[e] for e in poly.edges)
            sigma = np.empty(self.g.n, dtype=np.int64)
            comps = edge_components(self.g, chosen)
            colors = rng.integers(0, self.q, size=len(comps))
            for c, comp in zip(colors, comps):
                sigma[comp] = c
            return sigma
        return self._draw_low(rng)

    def _draw_low(self, rng: np.random.Generator) -> np.ndarray:
        j = int(rng.integers(0, self.q))
        for _ in range(MAX_REJECTIONS):
            family = self.sampler.sample(rng)
            if 2 * sum(pl.v for pl in family) < self.g.n:
                break
            self.rejections += 1
        else:
            raise SamplingError(f"{MAX_REJECTIONS} consecutive families had total size >= n/2")
        sigma = np.full(self.g.n, j, dtype=np.int64)
        for pl in family:
            sub = self.g.induced_subgraph(pl.vertices)
            table = self._tables.get(sub)
            if table is None:
                table = PottsTable(sub, self.q - 1, self.beta)
                self._tables[sub] = table
            colors = table.sample(rng)
            # colours 0..q-2 skip the ground-state colour j
            sigma[list(pl.vertices)] = colors + (colors >= j)
        return sigma

    def draw_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.array([self.draw(rng) for _ in range(size)])


def sample_potts(g: Graph, q: int, beta: float, delta: float, rng: np.random.Generator, eps: float = DEFAULT_EPS) -> np.ndarray:
    """One approximate Potts sample within ``delta`` total variation (see ``PottsSampler``)."""
    return PottsSampler(g, q, beta, delta, eps).draw(rng)
