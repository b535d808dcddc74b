"""Counting alpha-min-cuts by random edge contraction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom

from ..errors import ParameterError, PreconditionError
from ..graphs.core import Graph, mask_vertices
from ..graphs.cuts import boundary_size, count_cuts_at_most, min_cut
from ..limits import get_limits


@dataclass(frozen=True)
class CutRecord:
    """A cut stored by the side that holds vertex 0."""

    side: frozenset
    size: int

    @classmethod
    def from_mask(cls, g: Graph, mask: int) -> "CutRecord":
        full = (1 << g.n) - 1
        if mask == 0 or mask == full:
            raise ParameterError("a cut side must be nonempty and proper")
        if not mask & 1:
            mask = full ^ mask
        return cls(frozenset(mask_vertices(mask)), boundary_size(g, mask))

    def to_json(self) -> dict:
        return {"side": sorted(self.side), "size": self.size}


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        self.count -= 1
        return True

    def groups(self) -> list[int]:
        """Bitmask of each class, ordered by smallest member."""
        out: dict[int, int] = {}
        for v in range(len(self.parent)):
            r = self.find(v)
            out[r] = out.get(r, 0) | (1 << v)
        return sorted(out.values(), key=lambda m: m & -m)


def contract_to(g: Graph, uf: UnionFind, target: int, rng: np.random.Generator) -> None:
    """Contract uniformly random edges until ``target`` super-vertices remain.

    Scanning the edges in a uniformly random order and skipping those already
    inside one super-vertex picks, at every step, a uniform edge of the
    loopless contracted multigraph.
    """
    if uf.count <= target:
        return
    for i in rng.permutation(g.m):
        a, b = g.edges[i]
        if uf.union(a, b) and uf.count <= target:
            return


def karger_bound(n: int, alpha: float) -> int:
    """``C(n, 2 alpha) 2^(2 alpha)``, floored; for ``n < 2 alpha`` the total cut count."""
    if n < 2 * alpha:
        return 2 ** (n - 1) - 1
    return int(math.floor(binom(n, 2 * alpha) * 2 ** (2 * alpha) + 1e-9))


@dataclass
class KargerResult:
    found_cuts: set = field(default_factory=set)
    bound: int = 0
    bound_holds: bool | None = None
    exhaustive_count: int | None = None
    min_cut: int = 0
    alpha: float = 1.0
    trials: int = 0

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "min_cut": self.min_cut,
            "trials": self.trials,
            "found": len(self.found_cuts),
            "exhaustive_count": self.exhaustive_count,
            "bound": self.bound,
            "bound_holds": self.bound_holds,
            "cuts": [c.to_json() for c in sorted(self.found_cuts, key=lambda c: (c.size, sorted(c.side)))],
        }


def karger_count_cuts(g: Graph, alpha: float, trials: int, rng: np.random.Generator) -> KargerResult:
    """Collect the distinct cuts of size ``<= alpha t`` seen in ``trials`` contraction runs.

    Each run contracts to ``ceil(2 alpha)`` super-vertices and then reads off
    every cut of the contracted graph. The exhaustive count is attached when
    the graph is small enough to list all cuts.
    """
    if alpha < 1:
        raise ParameterError("alpha must be at least 1")
    if g.n < 2 or not g.is_connected():
        raise PreconditionError("cut counting needs a connected graph on at least two vertices")
    t = min_cut(g)
    limit = alpha * t + 1e-9
    r = min(g.n, math.ceil(2 * alpha))
    found: set[CutRecord] = set()
    for _ in range(trials):
        uf = UnionFind(g.n)
        contract_to(g, uf, r, rng)
        groups = uf.groups()
        k = len(groups)
        # groups[0] holds vertex 0, so sides containing it enumerate each cut once
        for sel in range(1 << (k - 1)):
            if sel == (1 << (k - 1)) - 1:
                continue
            mask = groups[0]
            for j in range(k - 1):
                if sel >> j & 1:
                    mask |= groups[j + 1]
            size = boundary_size(g, mask)
            if size <= limit:
                found.add(CutRecord(frozenset(mask_vertices(mask)), size))
    bound = karger_bound(g.n, alpha)
    exhaustive = None
    holds = None
    if g.n <= get_limits().cut_vertices:
        exhaustive = count_cuts_at_most(g, alpha * t)
        holds = exhaustive <= bound
    return KargerResult(found, bound, holds, exhaustive, t, alpha, trials)


def all_alpha_min_cuts(g: Graph, alpha: float) -> set[CutRecord]:
    """Every cut of size ``<= alpha * min_cut`` by exhaustive enumeration."""
    from ..graphs.cuts import cut_table

    t = min_cut(g)
    masks, sizes = cut_table(g)
    keep = masks[sizes <= alpha * t + 1e-9]
    return {CutRecord(frozenset(mask_vertices(int(m))), boundary_size(g, int(m))) for m in keep}


def small_graph_catalog(max_n: int = 8, extra_seed: int = 0) -> list[Graph]:
    """Connected graphs for exhaustive sweeps.

    All connected graphs on 2 to 7 vertices from the networkx atlas, plus, for
    ``max_n >= 8``, a fixed set of 8-vertex graphs: cycle, path, cube, complete,
    K_{4,4}, 3-regular samples and connected G(8, p) samples.
    """
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    from ..graphs.core import complete, complete_bipartite, cycle, hypercube, path, random_graph, random_regular

    out = []
    for h in graph_atlas_g():
        n = h.number_of_nodes()
        if 2 <= n <= min(max_n, 7) and nx.is_connected(h):
            out.append(Graph.from_edges(n, h.edges()))
    if max_n >= 8:
        out += [cycle(8), path(8), hypercube(3), complete(8), complete_bipartite(4, 4)]
        rng = np.random.default_rng(extra_seed)
        for _ in range(10):
            out.append(random_regular(8, 3, seed=int(rng.integers(2**31))))
        count = 0
        while count < 40:
            h = random_graph(8, float(rng.uniform(0.25, 0.7)), seed=int(rng.integers(2**31)))
            if h.is_connected():
                out.append(h)
                count += 1
    return out


__all__ = [
    "CutRecord",
    "KargerResult",
    "UnionFind",
    "all_alpha_min_cuts",
    "contract_to",
    "karger_bound",
    "karger_count_cuts",
    "small_graph_catalog",
]
