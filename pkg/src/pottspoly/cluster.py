"""Cluster expansion: Ursell coefficients, cluster enumeration and truncated ln Xi.

A cluster is stored as its multiset type (sorted tuple of polymer indices).
Its contribution to ln Xi is ``phi(H) * (k!/prod m_i!) * prod w`` where
``phi(H) = (1/k!) sum_F (-1)^|F|`` over connected spanning edge sets ``F`` of
the incompatibility graph ``H`` and ``k!/prod m_i!`` counts the ordered tuples
of that type. For a single self-incompatible polymer this gives the series of
``ln(1 + w)``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DegenerateError, ParameterError, PreconditionError, SizeError
from .graphs.core import mask_vertices
from .limits import get_limits
from .polymers import Polymer, PolymerModel, PolymerSystem


# -- Ursell function ----------------------------------------------------------

_URSELL_CACHE: dict[tuple[int, ...], int] = {}


def _adjacency(h) -> tuple[int, ...]:
    """Accept a ``Graph``, a list of neighbour bitmasks, or ``(k, edge list)``."""
    if hasattr(h, "nbr_masks"):
        return tuple(h.nbr_masks)
    if isinstance(h, tuple) and len(h) == 2 and isinstance(h[1], (list, tuple)):
        k, edges = h
        adj = [0] * k
        for a, b in edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return tuple(adj)
    return tuple(int(x) for x in h)


def _is_connected(adj: Sequence[int], mask: int) -> bool:
    if mask == 0:
        return False
    reached = frontier = mask & -mask
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & mask & ~reached
        reached |= frontier
    return reached == mask


def connected_signed_sum(h) -> int:
    """``sum_{F connected spanning} (-1)^|F|`` over edge subsets of ``H``.

    Recursion on vertex subsets: the signed sum over all edge sets of ``H[U]``
    is 1 if ``U`` is independent and 0 otherwise; splitting off the component
    of the lowest vertex gives
    ``C(U) = [U independent] - sum_{W} C(W) [U \\ W independent]`` with ``W``
    ranging over proper subsets of ``U`` that contain its lowest vertex.
    """
    adj = _adjacency(h)
    k = len(adj)
    if k == 0:
        raise PreconditionError("Ursell function of the empty graph is undefined")
    if not _is_connected(adj, (1 << k) - 1):
        raise PreconditionError("Ursell function needs a connected incompatibility graph")
    if k > get_limits().ursell_nodes:
        raise SizeError(f"Ursell evaluation is capped at {get_limits().ursell_nodes} nodes")
    cached = _URSELL_CACHE.get(adj)
    if cached is not None:
        return cached
    full = (1 << k) - 1
    if all(adj[i] == full & ~(1 << i) for i in range(k)):
        val = (-1) ** (k - 1) * math.factorial(k - 1)
        _URSELL_CACHE[adj] = val
        return val
    indep = [True] * (1 << k)
    for u in range(1, 1 << k):
        low = u & -u
        rest = u ^ low
        indep[u] = indep[rest] and not (adj[low.bit_length() - 1] & rest)
    conn = [0] * (1 << k)
    for u in range(1, 1 << k):
        low = u & -u
        rest = u ^ low
        total = 1 if indep[u] else 0
        sub = rest
        # W = low | s for every proper subset s of rest (s = rest gives W = U)
        while True:
            sub = (sub - 1) & rest
            w = low | sub
            if conn[w] and indep[u ^ w]:
                total -= conn[w]
            if sub == 0:
                break
        conn[u] = total
    val = conn[full]
    _URSELL_CACHE[adj] = val
    return val


def ursell(h) -> Fraction:
    """``phi(H) = (1/k!) sum_{F connected spanning} (-1)^|F|`` as an exact fraction."""
    adj = _adjacency(h)
    return Fraction(connected_signed_sum(adj), math.factorial(len(adj)))


# -- clusters -----------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    indices: tuple[int, ...]
    multiplicity: int
    phi: Fraction
    g_value: float
    log_abs_weight: float
    contribution: float

    @property
    def order(self) -> int:
        return len(self.indices)

    def incompatibility_graph(self, system: PolymerSystem) -> tuple[int, ...]:
        return incompatibility_adjacency(system, self.indices)

    def to_json(self) -> dict:
        return {
            "polymers": list(self.indices),
            "multiplicity": self.multiplicity,
            "phi": f"{self.phi.numerator}/{self.phi.denominator}",
            "g": self.g_value,
            "contribution": self.contribution,
        }


def incompatibility_adjacency(system: PolymerSystem, indices: Sequence[int]) -> tuple[int, ...]:
    k = len(indices)
    adj = [0] * k
    for a in range(k):
        for b in range(a + 1, k):
            if system.incompat[indices[a]] >> indices[b] & 1:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return tuple(adj)


def _make_cluster(system: PolymerSystem, indices: tuple[int, ...]) -> Cluster:
    k = len(indices)
    counts = Counter(indices)
    mult = math.factorial(k)
    for c in counts.values():
        mult //= math.factorial(c)
    phi = ursell(incompatibility_adjacency(system, indices))
    logw = float(sum(system.log_weights[i] for i in indices))
    gval = math.fsum(float(system.g[i]) for i in indices)
    contribution = float(phi * mult) * math.exp(logw) if logw > -math.inf else 0.0
    return Cluster(indices, mult, phi, gval, logw, contribution)


def enumerate_clusters(system: PolymerSystem, L: float, max_order: int | None = None) -> Iterator[Cluster]:
    """Every cluster type with ``g(Gamma) <= L`` (and order ``<= max_order``), once each.

    Clusters of order t+1 are grown from those of order t by adding a polymer
    incompatible with some member; deleting a leaf of a spanning tree of the
    incompatibility graph shows every connected type is reached.
    """
    if L < 0:
        return
    tol = 1e-12
    eligible = [i for i in range(len(system)) if system.g[i] <= L + tol]
    if max_order is None and any(system.g[i] <= 0 for i in eligible):
        raise DegenerateError("a polymer with g <= 0 makes the cluster budget infinite")
    # process candidates in order of increasing g so the budget cuts a prefix
    order = sorted(eligible, key=lambda i: float(system.g[i]))
    gsorted = np.array([system.g[i] for i in order], dtype=float)
    sub = system.incompat_matrix[np.ix_(order, order)] if order else np.zeros((0, 0), dtype=bool)
    incompat_rank = []
    for r in range(len(order)):
        bits = 0
        for j in np.flatnonzero(sub[r]).tolist():
            bits |= 1 << j
        incompat_rank.append(bits)

    level: dict[tuple[int, ...], tuple[float, int]] = {(r,): (float(gsorted[r]), incompat_rank[r]) for r in range(len(order))}
    t = 1
    while level:
        for key in sorted(level):
            yield _make_cluster(system, tuple(sorted(order[r] for r in key)))
        if max_order is not None and t >= max_order:
            return
        nxt: dict[tuple[int, ...], tuple[float, int]] = {}
        for key, (gval, reach) in level.items():
            room = L + tol - gval
            cut = int(np.searchsorted(gsorted, room, side="right"))
            cand = reach & ((1 << cut) - 1)
            while cand:
                low = cand & -cand
                cand ^= low
                r = low.bit_length() - 1
                new = tuple(sorted(key + (r,)))
                if new not in nxt:
                    nxt[new] = (gval + float(gsorted[r]), reach | incompat_rank[r])
        level = nxt
        t += 1


@dataclass(frozen=True)
class TruncatedLogXi:
    value: float
    cluster_count: int
    L: float


def truncated_log_xi(source: PolymerSystem | PolymerModel, L: float, max_order: int | None = None) -> TruncatedLogXi:
    """``sum_{g(Gamma) <= L} phi(Gamma) prod w``, summed with ``math.fsum``."""
    system = source.system(g_cap=L) if isinstance(source, PolymerModel) else source
    terms = []
    for cl in enumerate_clusters(system, L, max_order):
        terms.append(cl.contribution)
    return TruncatedLogXi(math.fsum(terms), len(terms), L)


def kp_tail_bound(model: PolymerModel, poly: Polymer) -> float:
    """Certified bound ``f(gamma)`` on ``sum_{Gamma incompatible with gamma} |phi prod w| e^{g(Gamma)}``."""
    return model.f(poly)


def total_vertex_f(system: PolymerSystem) -> float:
    """``sum_v f_v`` over single-vertex polymers, or ``sum_gamma f(gamma)`` for abstract systems.

    Every cluster is incompatible with the single-vertex polymer at any vertex
    it covers (and with each of its own members), so either sum bounds
    ``sum_Gamma |phi prod w| e^{g(Gamma)}`` once the KP condition holds.
    """
    if system.n_vertices is not None and system.f_vertex:
        return system.n_vertices * system.f_vertex
    return float(system.f.sum())


def truncation_error_bound(system: PolymerSystem, L: float) -> float:
    """Bound on ``|ln Xi - ln Xi(L)|`` from the KP tail: ``e^-L sum_v f_v``."""
    return math.exp(-L) * total_vertex_f(system)


def choose_L(total_f: float, delta: float) -> float:
    """``L = ln(sum_v f_v / (delta/2))``; never negative."""
    if not 0 < delta < 1:
        raise ParameterError("delta must be in (0, 1)")
    if total_f <= 0:
        return 0.0
    return max(0.0, math.log(total_f / (delta / 2)))


def dump_clusters(clusters, system: PolymerSystem | None = None) -> Iterator[str]:
    for cl in clusters:
        yield json.dumps(cl.to_json())
