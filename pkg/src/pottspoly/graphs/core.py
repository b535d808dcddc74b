"""Simple undirected graphs, generators, file formats and graph powers."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import ParameterError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Edges are stored as sorted pairs in lexicographic order, so two graphs
    built from the same edge set compare equal regardless of input order.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    nbr_masks: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ParameterError(f"parallel edge {key}")
            seen.add(key)
        ordered = tuple(sorted(seen))
        adj = [[] for _ in range(n)]
        for u, v in ordered:
            adj[u].append(v)
            adj[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in adj)
        masks = tuple(sum(1 << w for w in a) for a in adjacency)
        return cls(n, ordered, adjacency, masks)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def regular_degree(self) -> int | None:
        """Common degree if the graph is regular, else ``None``."""
        degs = set(self.degrees())
        if len(degs) == 1:
            return degs.pop()
        if not degs:
            return 0
        return None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr_masks[u] >> v & 1)

    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def components(self, within: int | None = None) -> list[list[int]]:
        """Connected components, optionally of the subgraph induced by a vertex bitmask."""
        if within is None:
            within = (1 << self.n) - 1
        seen = 0
        comps = []
        for s in range(self.n):
            if not (within >> s & 1) or seen >> s & 1:
                continue
            comp = [s]
            seen |= 1 << s
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if within >> w & 1 and not seen >> w & 1:
                        seen |= 1 << w
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_connected_set(self, mask: int) -> bool:
        if mask == 0:
            return False
        start = (mask & -mask).bit_length() - 1
        reached = 1 << start
        frontier = reached
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= self.nbr_masks[low.bit_length() - 1]
                f ^= low
            nxt &= mask & ~reached
            reached |= nxt
            frontier = nxt
        return reached == mask

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        vs = set(vertices)
        return [e for e in self.edges if e[0] in vs and e[1] in vs]

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Relabelled induced subgraph; vertex ``vertices[i]`` becomes ``i``."""
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices), [(pos[u], pos[v]) for u, v in self.induced_edges(vertices)]
        )

    def distances_from(self, source: int, limit: int | None = None) -> list[int]:
        """BFS distances (``-1`` for unreachable or beyond ``limit``)."""
        dist = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if limit is not None and dist[u] >= limit:
                continue
            for w in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def has_triangle(self) -> bool:
        return any(self.nbr_masks[u] & self.nbr_masks[v] for u, v in self.edges)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# -- generators ---------------------------------------------------------------


def hypercube(d: int) -> Graph:
    if d < 0:
        raise ParameterError("hypercube dimension must be >= 0")
    n = 1 << d
    return Graph.from_edges(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ParameterError("complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ParameterError("complete bipartite graph needs a, b >= 1")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise ParameterError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_regular(n: int, d: int, seed=None, max_tries: int = 10_000) -> Graph:
    """Uniform pairing model, resampled until the multigraph is simple."""
    if d < 0 or n < 1 or d >= n or (n * d) % 2:
        raise ParameterError(f"no simple {d}-regular graph on {n} vertices (need d < n, nd even)")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(points).reshape(-1, 2)
        u, v = perm[:, 0], perm[:, 1]
        if np.any(u == v):
            continue
        pairs = {(min(a, b), max(a, b)) for a, b in zip(u.tolist(), v.tolist())}
        if len(pairs) == len(perm):
            return Graph.from_edges(n, pairs)
    raise ParameterError(f"pairing model did not produce a simple graph in {max_tries} tries")


def random_graph(n: int, p: float, seed=None) -> Graph:
    """Erdos-Renyi G(n, p); used for property sweeps."""
    rng = np.random.default_rng(seed)
    return Graph.from_edges(
        n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    )


def generate(kind: str, **params) -> Graph:
    """Build a named graph; ``kind`` matches the CLI ``gen --kind`` values."""
    builders = {
        "hypercube": lambda: hypercube(int(params["d"])),
        "complete": lambda: complete(int(params["n"])),
        "complete_bipartite": lambda: complete_bipartite(int(params["a"]), int(params["b"])),
        "cycle": lambda: cycle(int(params["n"])),
        "path": lambda: path(int(params["n"])),
        "petersen": petersen,
        "random_regular": lambda: random_regular(int(params["n"]), int(params["d"]), params.get("seed")),
        "from_edge_list": lambda: Graph.from_edges(int(params["n"]), params["edges"]),
    }
    if kind not in builders:
        raise ParameterError(f"unknown graph kind {kind!r}; choose from {sorted(builders)}")
    try:
        return builders[kind]()
    except KeyError as exc:
        raise ParameterError(f"graph kind {kind!r} needs parameter {exc.args[0]!r}") from None


# -- file formats -------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParameterError("empty edge list")
    header = lines[0].split()
    if len(header) != 2:
        raise ParameterError("edge list header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    edges = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise ParameterError(f"edge list declares {m} edges but has {len(edges)} well-formed lines")
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def graph_from_json(data: dict) -> Graph:
    try:
        return Graph.from_edges(int(data["n"]), data["edges"])
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"graph JSON must look like {{'n': int, 'edges': [[u, v], ...]}}: {exc}") from None


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    return parse_edge_list(text)


def dump_graph(g: Graph, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(g.to_json())
    if fmt in ("edgelist", "txt"):
        return format_edge_list(g)
    raise ParameterError(f"unknown graph format {fmt!r}")


# -- powers -------------------------------------------------------------------


def graph_power(g: Graph, k: int) -> Graph:
    """Graph on the same vertices with ``{u, v}`` an edge iff ``1 <= dist(u, v) <= k``."""
    if k < 1:
        raise ParameterError("graph power needs k >= 1")
    edges = []
    for u in range(g.n):
        dist = g.distances_from(u, limit=k)
        edges.extend((u, v) for v in range(u + 1, g.n) if 1 <= dist[v] <= k)
    return Graph.from_edges(g.n, edges)


# -- multigraphs for contraction ----------------------------------------------


@dataclass(frozen=True)
class MultiGraph:
    """Loopless multigraph over super-vertices, tracking which originals each one holds.

    ``groups[i]`` is the bitmask of original vertices merged into super-vertex
    ``i``; ``mult`` maps sorted super-vertex pairs to edge multiplicities.
    """

    groups: tuple[int, ...]
    mult: dict

    @classmethod
    def from_graph(cls, g: Graph) -> "MultiGraph":
        return cls(tuple(1 << v for v in range(g.n)), {e: 1 for e in g.edges})

    @property
    def n(self) -> int:
        return len(self.groups)

    @property
    def m(self) -> int:
        return sum(self.mult.values())

    def owner(self) -> dict[int, int]:
        out = {}
        for i, grp in enumerate(self.groups):
            for v in mask_vertices(grp):
                out[v] = i
        return out

    def degree(self, i: int) -> int:
        return sum(c for (a, b), c in self.mult.items() if i in (a, b))

    def contract(self, a: int, b: int) -> "MultiGraph":
        """Merge super-vertices ``a`` and ``b`` and drop the resulting self-loops."""
        if a == b or (min(a, b), max(a, b)) not in self.mult:
            raise ParameterError(f"({a}, {b}) is not an edge of the multigraph")
        a, b = min(a, b), max(a, b)
        relabel = {}
        groups = []
        for i, grp in enumerate(self.groups):
            if i == b:
                continue
            relabel[i] = len(groups)
            groups.append(grp | self.groups[b] if i == a else grp)
        relabel[b] = relabel[a]
        mult: dict = {}
        for (x, y), c in self.mult.items():
            x2, y2 = relabel[x], relabel[y]
            if x2 == y2:
                continue
            key = (min(x2, y2), max(x2, y2))
            mult[key] = mult.get(key, 0) + c
        return MultiGraph(tuple(groups), mult)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for (x, y), c in self.mult.items():
            g.add_edge(x, y, weight=c)
        return g
