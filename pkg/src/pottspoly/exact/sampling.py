"""Exact Gibbs samplers, the Edwards-Sokal coupling and colouring statistics.

Colourings are integer arrays with entries in ``0..q-1``; a colouring's table
index is ``sum_v sigma[v] * q**v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from ..errors import ParameterError, SizeError
from ..graphs.core import Graph
from ..graphs.cuts import eta_expansion
from ..limits import get_limits
from .partition import colorings_block, component_counts, monochromatic_counts

MAX_RC_TABLE_EDGES = 20


# -- colouring statistics -----------------------------------------------------


def mono_count(g: Graph, sigma) -> int:
    return int(sum(sigma[u] == sigma[v] for u, v in g.edges))


def nm(g: Graph, sigma) -> int:
    """Number of non-monochromatic edges."""
    return g.m - mono_count(g, sigma)


def classify_majority(sigma, q: int | None = None) -> int | None:
    """The colour held by more than half the vertices, or ``None`` (class S_0)."""
    sigma = np.asarray(sigma)
    if sigma.size == 0:
        return None
    counts = np.bincount(sigma, minlength=q or 0)
    j = int(np.argmax(counts))
    return j if 2 * counts[j] > len(sigma) else None


def majority_label(sigma, q: int | None = None) -> str:
    """``"S_0"`` or ``"S_j"`` with colours numbered from 1."""
    j = classify_majority(sigma, q)
    return "S_0" if j is None else f"S_{j + 1}"


def coloring_index(sigma, q: int) -> int:
    return int(sum(int(c) * q ** v for v, c in enumerate(sigma)))


def coloring_indices(sigmas: np.ndarray, q: int) -> np.ndarray:
    sigmas = np.atleast_2d(sigmas).astype(np.int64)
    return sigmas @ (q ** np.arange(sigmas.shape[1], dtype=np.int64))


# -- exact Potts sampling -----------------------------------------------------


class PottsTable:
    """Exact Gibbs distribution over all ``q^n`` colourings."""

    def __init__(self, g: Graph, q: int, beta: float):
        if q < 1 or int(q) != q:
            raise ParameterError("q must be a positive integer")
        size = q ** g.n
        if size > get_limits().sample_table:
            raise SizeError(f"q^n = {size} exceeds the sampling table cutoff {get_limits().sample_table}")
        self.g, self.q, self.beta = g, int(q), float(beta)
        self.colorings = colorings_block(g.n, self.q, 0, size)
        self.mono = monochromatic_counts(g, self.colorings)
        logw = self.beta * self.mono
        self.log_z = float(logsumexp(logw))
        self.probs = np.exp(logw - self.log_z)
        self.cdf = np.cumsum(self.probs)
        self.cdf[-1] = 1.0

    def sample_indices(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.searchsorted(self.cdf, rng.random(size), side="right")

    def sample(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        idx = self.sample_indices(rng, 1 if size is None else size)
        out = self.colorings[idx].astype(np.int64)
        return out[0] if size is None else out


@lru_cache(maxsize=128)
def potts_table(g: Graph, q: int, beta: float) -> PottsTable:
    return PottsTable(g, q, beta)


def exact_potts_sample(g: Graph, q: int, beta: float, rng: np.random.Generator, size: int | None = None):
    """Colouring(s) drawn exactly from ``mu(sigma) ∝ exp(beta m(G, sigma))`` by inverse CDF."""
    return potts_table(g, int(q), float(beta)).sample(rng, size)


# -- exact random cluster sampling --------------------------------------------


class RCTable:
    """Exact random cluster distribution over all edge subsets (bitmask index)."""

    def __init__(self, g: Graph, q: float, p: float):
        if g.m > MAX_RC_TABLE_EDGES:
            raise SizeError(f"{g.m} edges is too many for a tabulated random cluster sampler")
        subsets = np.arange(1 << g.m, dtype=np.int64)
        comps = component_counts(g.n, g.edges, subsets) if g.m else np.full(1, g.n)
        sizes = np.bitwise_count(subsets).astype(np.int64)
        with np.errstate(divide="ignore"):
            logw = comps * math.log(q) + sizes * (math.log(p) if p > 0 else -np.inf)
        logw[0] = g.n * math.log(q)
        self.g = g
        self.probs = np.exp(logw - logsumexp(logw))
        self.cdf = np.cumsum(self.probs)
        self.cdf[-1] = 1.0

    def sample_mask(self, rng: np.random.Generator) -> int:
        return int(np.searchsorted(self.cdf, rng.random(), side="right"))


@lru_cache(maxsize=64)
def rc_table(g: Graph, q: float, p: float) -> RCTable:
    return RCTable(g, q, p)


def _connected_in(adj: list[int], u: int, v: int) -> bool:
    reached = frontier = 1 << u
    target = 1 << v
    while frontier:
        if reached & target:
            return True
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~reached
        reached |= frontier
    return bool(reached & target)


class _BondState:
    def __init__(self, g: Graph, full: bool):
        self.g = g
        self.open = [full] * g.m
        self.adj = [0] * g.n
        if full:
            self.adj = list(g.nbr_masks)

    def update(self, e: int, u01: float, p_bridge: float, p_cycle: float) -> None:
        a, b = self.g.edges[e]
        if self.open[e]:
            self.adj[a] &= ~(1 << b)
            self.adj[b] &= ~(1 << a)
        keep = u01 < (p_cycle if _connected_in(self.adj, a, b) else p_bridge)
        self.open[e] = keep
        if keep:
            self.adj[a] |= 1 << b
            self.adj[b] |= 1 << a


def cftp_rc_sample(g: Graph, q: float, p: float, rng: np.random.Generator, max_doublings: int = 30) -> frozenset:
    """Exact random cluster sample by monotone coupling from the past (needs q >= 1).

    Heat-bath bond updates are monotone for q >= 1: an edge whose endpoints are
    already joined opens with probability p/(1+p), otherwise with p/(p+q).
    """
    if q < 1:
        raise ParameterError("monotone coupling from the past needs q >= 1")
    if g.m == 0:
        return frozenset()
    p_cycle, p_bridge = p / (1 + p), p / (p + q)
    edges_seq: list[np.ndarray] = []
    unif_seq: list[np.ndarray] = []
    steps = max(16, 2 * g.m)
    for _ in range(max_doublings):
        # prepend fresh randomness for the earlier time window, reuse the rest
        extra = steps - sum(len(x) for x in edges_seq)
        edges_seq.insert(0, rng.integers(0, g.m, size=extra))
        unif_seq.insert(0, rng.random(extra))
        top, bottom = _BondState(g, True), _BondState(g, False)
        for es, us in zip(edges_seq, unif_seq):
            for e, u in zip(es.tolist(), us.tolist()):
                top.update(e, u, p_bridge, p_cycle)
                bottom.update(e, u, p_bridge, p_cycle)
        if top.open == bottom.open:
            return frozenset(i for i, x in enumerate(top.open) if x)
        steps *= 2
    raise SizeError("coupling from the past did not coalesce")


def exact_rc_sample(g: Graph, q: float, p: float, rng: np.random.Generator) -> frozenset:
    """Exact random cluster sample as a set of edge indices."""
    if p < 0 or q <= 0:
        raise ParameterError("random cluster model needs q > 0 and p >= 0")
    if g.m <= MAX_RC_TABLE_EDGES:
        mask = rc_table(g, float(q), float(p)).sample_mask(rng)
        return frozenset(i for i in range(g.m) if mask >> i & 1)
    return cftp_rc_sample(g, q, p, rng)


# -- Edwards-Sokal coupling ---------------------------------------------------


def edge_components(g: Graph, edge_ids) -> list[list[int]]:
    """Components of ``(V, A)`` with ``A`` given by edge indices."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in edge_ids:
        a, b = g.edges[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def rc_to_potts(g: Graph, edge_ids, q: int, rng: np.random.Generator) -> np.ndarray:
    """Colour each component of ``(V, A)`` with an independent uniform colour."""
    sigma = np.empty(g.n, dtype=np.int64)
    comps = edge_components(g, edge_ids)
    colors = rng.integers(0, q, size=len(comps))
    for c, comp in zip(colors, comps):
        sigma[comp] = c
    return sigma


def potts_to_rc(g: Graph, sigma, beta: float, rng: np.random.Generator) -> frozenset:
    """Keep each monochromatic edge independently with probability ``1 - e^-beta``."""
    keep = -math.expm1(-beta)
    draws = rng.random(g.m)
    return frozenset(
        i for i, (u, v) in enumerate(g.edges) if sigma[u] == sigma[v] and draws[i] < keep
    )


# -- nm lower bound -----------------------------------------------------------


@dataclass(frozen=True)
class NMCheck:
    holds: bool
    min_nm: int | None
    required: Fraction
    witness: tuple[int, ...] | None
    eta: Fraction


def nm_lower_bound_check(g: Graph, q: int, eta=None) -> NMCheck:
    """Does every colouring in ``S_0`` have ``nm(sigma) >= eta n / 2``?"""
    size = q ** g.n
    if size > get_limits().colorings:
        raise SizeError(f"q^n = {size} exceeds the colouring cutoff")
    eta = eta_expansion(g).eta if eta is None else Fraction(eta)
    required = eta * g.n / 2
    best, witness = None, None
    for start in range(0, size, 1 << 18):
        block = colorings_block(g.n, q, start, min(size, start + (1 << 18)))
        counts = np.stack([np.count_nonzero(block == c, axis=1) for c in range(q)], axis=1)
        s0 = np.all(2 * counts <= g.n, axis=1)
        if not np.any(s0):
            continue
        nms = g.m - monochromatic_counts(g, block[s0])
        i = int(np.argmin(nms))
        if best is None or nms[i] < best:
            best, witness = int(nms[i]), tuple(int(x) for x in block[s0][i])
    holds = best is None or best >= required
    return NMCheck(holds, best, required, witness, eta)
