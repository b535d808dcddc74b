"""Rooted enumeration of connected subgraphs and the core-set certificate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..errors import ParameterError, PreconditionError, RegularityError, SizeError
from .core import Edge, Graph, graph_power, mask_vertices, vertex_mask
from .cuts import boundary_size, eta_expansion

MAX_EDGE_SUBSET_BITS = 22


@dataclass(frozen=True)
class SubgraphRecord:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    mask: int


def connected_vertex_masks(g: Graph, root: int, max_size: int, forbidden: int = 0) -> Iterator[int]:
    """Bitmasks of connected vertex sets containing ``root``, each exactly once.

    Vertices in ``forbidden`` are never used. Each branch either takes the next
    extension vertex or forbids it for the rest of the branch, which is what
    makes every set appear once.
    """
    if max_size < 1 or forbidden >> root & 1:
        return
    nbr = g.nbr_masks

    def grow(current: int, size: int, ext: int, forb: int) -> Iterator[int]:
        yield current
        if size == max_size:
            return
        while ext:
            low = ext & -ext
            ext ^= low
            v = low.bit_length() - 1
            new_ext = ext | (nbr[v] & ~current & ~low & ~forb)
            yield from grow(current | low, size + 1, new_ext, forb)
            forb |= low

    start = 1 << root
    yield from grow(start, 1, nbr[root] & ~forbidden & ~start, forbidden | start)


def spanning_connected_edge_subsets(vertices: list[int], edges: list[Edge]) -> Iterator[tuple[Edge, ...]]:
    """All subsets of ``edges`` whose graph on ``vertices`` is connected."""
    k = len(vertices)
    if k == 1:
        yield ()
        return
    if len(edges) < k - 1:
        return
    if len(edges) > MAX_EDGE_SUBSET_BITS:
        raise SizeError(f"{len(edges)} induced edges is too many for edge-subset enumeration")
    pos = {v: i for i, v in enumerate(vertices)}
    local = [(pos[u], pos[v]) for u, v in edges]
    full = (1 << k) - 1
    for sub in range(1 << len(edges)):
        if sub.bit_count() < k - 1:
            continue
        adj = [0] * k
        s = sub
        while s:
            low = s & -s
            a, b = local[low.bit_length() - 1]
            adj[a] |= 1 << b
            adj[b] |= 1 << a
            s ^= low
        reached = frontier = 1
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~reached
            reached |= frontier
        if reached == full:
            yield tuple(edges[i] for i in range(len(edges)) if sub >> i & 1)


def enumerate_connected_sets(
    g: Graph, root: int, max_size: int, mode: str = "vertex_induced", forbidden: int = 0
) -> Iterator[SubgraphRecord]:
    """Connected subgraphs containing ``root`` with at most ``max_size`` vertices.

    ``vertex_induced`` yields each connected induced subgraph once;
    ``with_edge_subsets`` yields each connected (vertex set, edge subset) pair
    once.
    """
    if not 0 <= root < g.n:
        raise ParameterError(f"root {root} out of range for n={g.n}")
    if mode not in ("vertex_induced", "with_edge_subsets"):
        raise ParameterError(f"unknown enumeration mode {mode!r}")
    for mask in connected_vertex_masks(g, root, max_size, forbidden):
        verts = mask_vertices(mask)
        induced = g.induced_edges(verts)
        if mode == "vertex_induced":
            yield SubgraphRecord(tuple(verts), tuple(induced), mask)
        else:
            for sub in spanning_connected_edge_subsets(verts, induced):
                yield SubgraphRecord(tuple(verts), sub, mask)


def count_connected_sets_with_boundary(g: Graph, u: int, b: int) -> int:
    """Connected ``A`` with ``u in A``, ``|A| <= n/2`` and ``|boundary(A)| == b``, by enumeration."""
    from ..limits import get_limits

    if g.n > get_limits().subset_vertices:
        raise SizeError(f"exhaustive count is capped at {get_limits().subset_vertices} vertices")
    return sum(
        1 for mask in connected_vertex_masks(g, u, g.n // 2) if boundary_size(g, mask) == b
    )


# -- core sets ----------------------------------------------------------------


def j_neighborhoods(g: Graph) -> list[int]:
    """For each vertex ``u``, the bitmask over edge indices of edges touching ``N(u)``."""
    touching = [0] * g.n
    for i, (a, b) in enumerate(g.edges):
        touching[a] |= 1 << i
        touching[b] |= 1 << i
    out = []
    for u in range(g.n):
        m = 0
        for w in g.adjacency[u]:
            m |= touching[w]
        out.append(m)
    return out


@dataclass(frozen=True)
class CoreSetCertificate:
    core: tuple[int, ...]
    check: bool
    connected_in_power: bool
    covers: bool
    size_bound: float
    boundary: int
    eta: Fraction


def core_set_certificate(g: Graph, vertices, x: int | None = None, eta=None) -> CoreSetCertificate:
    """Greedy maximal core of ``vertices`` with pairwise-disjoint J-neighbourhoods.

    The check verifies that the core plus ``x`` is connected in the 7th power
    of ``g``, that every vertex of the set shares a J-neighbour with the core,
    and that the core has at most ``(b/d)(2 + 1/eta)`` vertices.
    """
    d = g.regular_degree()
    if d is None or d == 0:
        raise RegularityError("core-set certificates are defined for d-regular graphs with d >= 1")
    verts = sorted(set(vertices))
    mask = vertex_mask(verts)
    if not verts or not g.is_connected_set(mask):
        raise PreconditionError("the vertex set must induce a connected subgraph")
    if len(verts) > g.n / 2 and len(verts) > 1:
        raise PreconditionError("the vertex set must have at most n/2 vertices")
    if x is None:
        x = verts[0]
    if x not in verts:
        raise PreconditionError(f"anchor {x} is not in the set")
    eta = eta_expansion(g).eta if eta is None else Fraction(eta)

    jn = j_neighborhoods(g)
    core: list[int] = []
    used = 0
    for u in verts:
        if not jn[u] & used:
            core.append(u)
            used |= jn[u]
    covers = all(u in core or any(jn[u] & jn[v] for v in core) for u in verts)

    nodes = sorted(set(core) | {x})
    power = graph_power(g, 7)
    connected = power.is_connected_set(vertex_mask(nodes))

    b = boundary_size(g, mask)
    bound = float("inf") if eta == 0 else (b / d) * (2 + 1 / float(eta))
    size_ok = len(core) <= bound + 1e-12
    return CoreSetCertificate(tuple(core), connected and covers and size_ok, connected, covers, bound, b, eta)
