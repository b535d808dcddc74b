"""Low- and high-temperature polymer models for the ferromagnetic Potts model.

Low temperature: a polymer is a connected induced subgraph on fewer than n/2
vertices, standing for a region that avoids the ground-state colour. Two
polymers are compatible when they are at graph distance at least 2.

High temperature: a polymer is a connected (not necessarily induced) subgraph
with at least two vertices, i.e. a non-trivial component of a random cluster
configuration. Two polymers are compatible when they share no vertex.

Both models are turned into a ``PolymerSystem``: a finite list of polymers
with weights, decay values ``f`` and ``g`` and an incompatibility relation.
The cluster expansion and the samplers only ever see systems, so abstract toy
systems (one polymer, two polymers) go through exactly the same code.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DegenerateError, ParameterError, SizeError
from .exact.partition import potts_log_partition
from .graphs.connected import enumerate_connected_sets
from .graphs.core import Edge, Graph, mask_vertices
from .graphs.cuts import boundary_size

LOW = "low_temp"
HIGH = "high_temp"
DEFAULT_EPSILON = 0.25


@dataclass(frozen=True)
class Polymer:
    """Connected subgraph; identity is the sorted vertex list plus sorted edge list."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    boundary: int
    mask: int = field(compare=False, repr=False)

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def eta(self) -> Fraction:
        return Fraction(self.boundary, self.v)

    @classmethod
    def build(cls, g: Graph, vertices: Iterable[int], edges: Iterable[Sequence[int]] | None = None) -> "Polymer":
        verts = tuple(sorted(set(int(x) for x in vertices)))
        mask = sum(1 << x for x in verts)
        if edges is None:
            es = tuple(g.induced_edges(verts))
        else:
            es = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        return cls(verts, es, boundary_size(g, mask), mask)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def closed_neighborhood(g: Graph, mask: int) -> int:
    out = mask
    for v in mask_vertices(mask):
        out |= g.nbr_masks[v]
    return out


class PolymerModel:
    """One of the two Potts polymer models on a fixed graph.

    ``decay_scale`` multiplies both ``f`` and ``g`` and ``g_boost`` multiplies
    ``g`` alone; 1 and 1 give the standard choices (low:
    ``f = eps v ln q / 4d``, ``g = eps |boundary| ln q / 4d + v/d``; high:
    ``f = g = v``).
    """

    def __init__(
        self,
        g: Graph,
        q: float,
        beta: float,
        mode: str,
        epsilon: float = DEFAULT_EPSILON,
        decay_scale: float = 1.0,
        g_boost: float = 1.0,
    ):
        if mode not in (LOW, HIGH):
            raise ParameterError(f"mode must be {LOW!r} or {HIGH!r}")
        if beta < 0 or q <= 0:
            raise ParameterError("need q > 0 and beta >= 0")
        if mode == LOW and (int(q) != q or q < 2):
            raise ParameterError("the low-temperature model colours polymers and needs integer q >= 2")
        if decay_scale <= 0 or g_boost <= 0:
            raise ParameterError("decay_scale and g_boost must be positive")
        self.graph = g
        self.q = q
        self.beta = float(beta)
        self.p = math.expm1(self.beta)
        self.mode = mode
        self.epsilon = float(epsilon)
        self.decay_scale = float(decay_scale)
        self.g_boost = float(g_boost)
        # irregular graphs use the maximum degree inside f and g
        self.d = max(g.max_degree, 1)
        self._log_weights: dict[Polymer, float] = {}
        self._inner: dict[Graph, float] = {}

    def with_decay(self, scale: float, g_boost: float = 1.0) -> "PolymerModel":
        other = PolymerModel(self.graph, self.q, self.beta, self.mode, self.epsilon, scale, g_boost)
        other._log_weights = self._log_weights
        other._inner = self._inner
        return other

    # -- weights --------------------------------------------------------------

    def log_weight(self, poly: Polymer) -> float:
        cached = self._log_weights.get(poly)
        if cached is not None:
            return cached
        if self.mode == HIGH:
            if poly.v < 2:
                raise ParameterError("high-temperature polymers have at least two vertices")
            if poly.e and self.p == 0:
                val = -math.inf
            else:
                val = (1 - poly.v) * math.log(self.q) + (poly.e * math.log(self.p) if poly.e else 0.0)
        else:
            sub = self.graph.induced_subgraph(poly.vertices)
            inner = self._inner.get(sub)
            if inner is None:
                inner = potts_log_partition(sub, int(self.q) - 1, self.beta)
                self._inner[sub] = inner
            val = -self.beta * (poly.boundary + poly.e) + inner
        self._log_weights[poly] = val
        return val

    def weight(self, poly: Polymer) -> float:
        return math.exp(self.log_weight(poly))

    def tilted_weight(self, poly: Polymer) -> float:
        """``w * exp(v/d)``, the weight used when checking the size-tilted model."""
        if self.mode != LOW:
            raise ParameterError("the tilted weight belongs to the low-temperature model")
        return math.exp(self.log_weight(poly) + poly.v / self.d)

    # -- decay functions ------------------------------------------------------

    def f(self, poly: Polymer) -> float:
        if self.mode == HIGH:
            return self.decay_scale * poly.v
        return self.decay_scale * self.epsilon * poly.v * math.log(self.q) / (4 * self.d)

    def g(self, poly: Polymer) -> float:
        if self.mode == HIGH:
            return self.decay_scale * self.g_boost * poly.v
        return self.decay_scale * self.g_boost * (
            self.epsilon * poly.boundary * math.log(self.q) / (4 * self.d) + poly.v / self.d
        )

    def f_vertex(self) -> float:
        """``f`` of the single-vertex polymer ``({v}, {})`` used in tail bounds."""
        if self.mode == HIGH:
            return self.decay_scale
        return self.decay_scale * self.epsilon * math.log(self.q) / (4 * self.d)

    # -- compatibility --------------------------------------------------------

    def blocked(self, poly: Polymer) -> int:
        """Vertices another polymer must avoid to be compatible with ``poly``."""
        if self.mode == HIGH:
            return poly.mask
        return closed_neighborhood(self.graph, poly.mask)

    def compatible(self, a: Polymer, b: Polymer) -> bool:
        return not (self.blocked(a) & b.mask)

    # -- enumeration ----------------------------------------------------------

    def max_polymer_size(self) -> int:
        n = self.graph.n
        return (n - 1) // 2 if self.mode == LOW else n

    def enumerate_polymers(self, size_cap: int | None = None, boundary_cap: int | None = None) -> Iterator[Polymer]:
        """Every polymer with ``v <= size_cap`` and boundary ``<= boundary_cap``, once each."""
        g = self.graph
        cap = self.max_polymer_size() if size_cap is None else min(size_cap, self.max_polymer_size())
        if cap < 1:
            return
        mode = "vertex_induced" if self.mode == LOW else "with_edge_subsets"
        for root in range(g.n):
            below = (1 << root) - 1
            for rec in enumerate_connected_sets(g, root, cap, mode, forbidden=below):
                if self.mode == HIGH and len(rec.vertices) < 2:
                    continue
                b = boundary_size(g, rec.mask)
                if boundary_cap is not None and b > boundary_cap:
                    continue
                yield Polymer(rec.vertices, rec.edges, b, rec.mask)

    def system(self, size_cap: int | None = None, g_cap: float | None = None) -> "PolymerSystem":
        """Finite polymer system of all polymers within the caps."""
        polys = [
            pl for pl in self.enumerate_polymers(size_cap)
            if g_cap is None or self.g(pl) <= g_cap + 1e-12
        ]
        return PolymerSystem.from_model(self, polys)

    def dump_polymers(self, polys: Iterable[Polymer]) -> Iterator[str]:
        """JSON lines with vertices, edges, weight, f and g."""
        for pl in polys:
            rec = pl.to_json()
            rec.update(weight=self.weight(pl), f=self.f(pl), g=self.g(pl))
            yield json.dumps(rec)


class PolymerSystem:
    """Finite abstract polymer model.

    ``incompat[i]`` is a bitmask over polymer indices (always containing ``i``).
    When built from a graph model, ``masks`` and ``blocks`` hold each polymer's
    vertex set and the vertex set it excludes, which enables the vertex-set
    dynamic programme for the exact partition function.
    """

    def __init__(
        self,
        polymers: list,
        log_weights: Sequence[float],
        f: Sequence[float],
        g: Sequence[float],
        incompat: list[int],
        sizes: Sequence[int] | None = None,
        masks: list[int] | None = None,
        blocks: list[int] | None = None,
        n_vertices: int | None = None,
        f_vertex: float | None = None,
        model: PolymerModel | None = None,
    ):
        self.polymers = polymers
        self.log_weights = np.asarray(log_weights, dtype=float)
        self.weights = np.exp(self.log_weights)
        self.f = np.asarray(f, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.incompat = incompat
        self.sizes = np.ones(len(polymers), dtype=np.int64) if sizes is None else np.asarray(sizes, dtype=np.int64)
        self.masks = masks
        self.blocks = blocks
        self.n_vertices = n_vertices
        self.f_vertex = f_vertex
        self.model = model

    def __len__(self) -> int:
        return len(self.polymers)

    @property
    def incompat_matrix(self) -> np.ndarray:
        """Boolean ``k x k`` incompatibility matrix (cached)."""
        cached = getattr(self, "_matrix", None)
        if cached is not None:
            return cached
        k = len(self.polymers)
        if self.masks is not None and self.n_vertices is not None and self.n_vertices <= 62:
            masks = np.array(self.masks, dtype=np.int64)
            blocks = np.array(self.blocks, dtype=np.int64)
            mat = (blocks[:, None] & masks[None, :]) != 0
            mat |= mat.T
        else:
            mat = np.zeros((k, k), dtype=bool)
            for i, bits in enumerate(self.incompat):
                mat[i, mask_vertices(bits)] = True
        np.fill_diagonal(mat, True)
        self._matrix = mat
        return mat

    @classmethod
    def from_model(cls, model: PolymerModel, polys: list[Polymer]) -> "PolymerSystem":
        masks = [pl.mask for pl in polys]
        blocks = [model.blocked(pl) for pl in polys]
        # index polymers by the vertices they touch to build incompatibility fast
        touching: dict[int, int] = {}
        for i, m in enumerate(masks):
            for v in mask_vertices(m):
                touching[v] = touching.get(v, 0) | (1 << i)
        incompat = []
        for i, blk in enumerate(blocks):
            bits = 0
            for v in mask_vertices(blk):
                bits |= touching.get(v, 0)
            incompat.append(bits | (1 << i))
        return cls(
            polys,
            [model.log_weight(pl) for pl in polys],
            [model.f(pl) for pl in polys],
            [model.g(pl) for pl in polys],
            incompat,
            sizes=[pl.v for pl in polys],
            masks=masks,
            blocks=blocks,
            n_vertices=model.graph.n,
            f_vertex=model.f_vertex(),
            model=model,
        )

    @classmethod
    def abstract(
        cls,
        weights: Sequence[float],
        g: Sequence[float] | float = 1.0,
        f: Sequence[float] | float | None = None,
        incompatible_pairs: Iterable[tuple[int, int]] = (),
        sizes: Sequence[int] | None = None,
        f_vertex: float | None = None,
    ) -> "PolymerSystem":
        """Toy system: polymers ``0..k-1``, each self-incompatible, plus the listed pairs."""
        k = len(weights)
        gs = np.broadcast_to(np.asarray(g, dtype=float), (k,)).copy()
        fs = gs.copy() if f is None else np.broadcast_to(np.asarray(f, dtype=float), (k,)).copy()
        incompat = [1 << i for i in range(k)]
        for a, b in incompatible_pairs:
            incompat[a] |= 1 << b
            incompat[b] |= 1 << a
        with np.errstate(divide="ignore"):
            logw = np.log(np.asarray(weights, dtype=float))
        return cls(list(range(k)), logw, fs, gs, incompat, sizes=sizes, f_vertex=f_vertex)

    def compatible(self, i: int, j: int) -> bool:
        return not (self.incompat[i] >> j & 1)

    def subsystem(self, keep: Sequence[int]) -> "PolymerSystem":
        keep = list(keep)
        pos = {old: new for new, old in enumerate(keep)}
        incompat = []
        for old in keep:
            bits = 0
            for o2 in mask_vertices(self.incompat[old]):
                if o2 in pos:
                    bits |= 1 << pos[o2]
            incompat.append(bits)
        return PolymerSystem(
            [self.polymers[i] for i in keep],
            self.log_weights[keep],
            self.f[keep],
            self.g[keep],
            incompat,
            sizes=self.sizes[keep],
            masks=None if self.masks is None else [self.masks[i] for i in keep],
            blocks=None if self.blocks is None else [self.blocks[i] for i in keep],
            n_vertices=self.n_vertices,
            f_vertex=self.f_vertex,
            model=self.model,
        )


# -- Kotecky-Preiss audit -----------------------------------------------------


@dataclass
class KPReport:
    worst_ratio: float
    worst_polymer: object
    passed: bool
    cutoff: int | None
    polymer_count: int
    vertex_ratio: float | None = None
    decay_scale: float = 1.0
    g_boost: float = 1.0

    @property
    def ok(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        wp = self.worst_polymer
        return {
            "worst_ratio": self.worst_ratio,
            "worst_polymer": wp.to_json() if isinstance(wp, Polymer) else wp,
            "pass": self.passed,
            "cutoff": self.cutoff,
            "polymer_count": self.polymer_count,
            "vertex_ratio": self.vertex_ratio,
            "decay_scale": self.decay_scale,
            "g_boost": self.g_boost,
            "note": "finite audit over polymers up to the cutoff, not a convergence proof",
        }


def kp_check_system(system: PolymerSystem, cutoff: int | None = None, audit_vertices: bool = True) -> KPReport:
    """Worst ``sum_{j incompatible with i} w_j e^{f_j + g_j} / f_i`` over the system.

    With ``audit_vertices`` and a graph-backed system, the virtual single-vertex
    polymers used by the truncation bound are audited as well.
    """
    k = len(system)
    if k == 0:
        return KPReport(0.0, None, True, cutoff, 0)
    if np.any(system.f <= 0):
        i = int(np.argmin(system.f))
        raise DegenerateError(f"f vanishes on polymer {system.polymers[i]!r}")
    contrib = system.weights * np.exp(system.f + system.g)
    ratios = (system.incompat_matrix @ contrib) / system.f
    worst = int(np.argmax(ratios))
    vratio = None
    if audit_vertices and system.masks is not None and system.f_vertex:
        model = system.model
        vratio = 0.0
        masks = np.array(system.masks, dtype=object)
        for u in range(system.n_vertices):
            if model is not None and model.mode == LOW:
                hit = closed_neighborhood(model.graph, 1 << u)
            else:
                hit = 1 << u
            tot = contrib[(masks & hit) != 0].sum()
            vratio = max(vratio, float(tot / system.f_vertex))
    passed = ratios[worst] <= 1.0 and (vratio is None or vratio <= 1.0)
    scale = system.model.decay_scale if system.model is not None else 1.0
    boost = system.model.g_boost if system.model is not None else 1.0
    return KPReport(float(ratios[worst]), system.polymers[worst], bool(passed), cutoff, k, vratio, scale, boost)


def kp_check(model: PolymerModel, cutoff: int, audit_vertices: bool = True) -> KPReport:
    """KP audit over all polymers with at most ``cutoff`` vertices."""
    if cutoff < 1:
        raise ParameterError("cutoff must be >= 1")
    return kp_check_system(model.system(size_cap=cutoff), cutoff, audit_vertices)


def _rescaled(base: PolymerSystem, model: PolymerModel, scale: float, boost: float) -> PolymerSystem:
    scaled = model.with_decay(scale, boost)
    f = base.f * (scale / model.decay_scale)
    g = base.g * (scale * boost / (model.decay_scale * model.g_boost))
    out = PolymerSystem(
        base.polymers, base.log_weights, f, g, base.incompat, base.sizes,
        base.masks, base.blocks, base.n_vertices, scaled.f_vertex(), scaled,
    )
    out._matrix = base.incompat_matrix
    return out


def tune_decay(
    model: PolymerModel, cutoff: int, min_scale: float = 2.0**-8, max_boost: float = 2.0**12
) -> tuple[PolymerModel, KPReport]:
    """Pick ``(f, g)`` that pass the KP audit.

    First halve ``f`` and ``g`` together until the audit passes, then double
    ``g`` alone while it keeps passing. The tail bound only needs some valid
    pair, and a larger ``g`` shrinks the set of clusters under a given budget.
    """
    base = model.system(size_cap=cutoff)
    scale = 1.0
    report = kp_check_system(_rescaled(base, model, scale, 1.0), cutoff)
    best = (report.worst_ratio, scale, report)
    while not report.passed and scale / 2 >= min_scale:
        scale /= 2
        report = kp_check_system(_rescaled(base, model, scale, 1.0), cutoff)
        best = min(best, (report.worst_ratio, scale, report), key=lambda t: t[0])
    if not report.passed:
        # shrinking f also shrinks the right-hand side, so report the least bad scale
        _, scale, report = best
        return model.with_decay(scale), report
    boost = 1.0
    while boost * 2 <= max_boost:
        trial = kp_check_system(_rescaled(base, model, scale, boost * 2), cutoff)
        if not trial.passed:
            break
        boost *= 2
        report = trial
    return model.with_decay(scale, boost), report


# -- exact polymer partition function -----------------------------------------


def _size_poly_add(a: list[float], b: list[float]) -> list[float]:
    return [x + y for x, y in zip(a, b)]


def _shift(poly: list[float], s: int, w: float) -> list[float]:
    out = [0.0] * len(poly)
    for i in range(len(poly) - s):
        out[i + s] = poly[i] * w
    return out


def _xi_vertex_dp(system: PolymerSystem, limit: int, sized: bool) -> list[float]:
    """Families counted by total size ``< limit`` via recursion on the allowed vertex set."""
    by_min: dict[int, list[tuple[int, int, float, int]]] = {}
    for i in range(len(system)):
        m = system.masks[i]
        low = (m & -m).bit_length() - 1
        size = int(system.sizes[i]) if sized else 0
        by_min.setdefault(low, []).append((m, system.blocks[i], float(system.weights[i]), size))
    memo: dict[int, list[float]] = {0: [1.0] + [0.0] * (limit - 1)}

    def solve(allowed: int) -> list[float]:
        hit = memo.get(allowed)
        if hit is not None:
            return hit
        v = (allowed & -allowed).bit_length() - 1
        res = solve(allowed & ~(1 << v))
        for m, blk, w, s in by_min.get(v, ()):
            if m & ~allowed or s >= limit or w == 0:
                continue
            res = _size_poly_add(res, _shift(solve(allowed & ~blk), s, w))
        memo[allowed] = res
        return res

    full = (1 << system.n_vertices) - 1
    return solve(full)


def _xi_branching(system: PolymerSystem, limit: int, sized: bool) -> list[float]:
    """Generic independent-set recursion over the incompatibility relation."""
    memo: dict[int, list[float]] = {0: [1.0] + [0.0] * (limit - 1)}

    def solve(avail: int) -> list[float]:
        hit = memo.get(avail)
        if hit is not None:
            return hit
        i = (avail & -avail).bit_length() - 1
        res = solve(avail & ~(1 << i))
        s = int(system.sizes[i]) if sized else 0
        if s < limit and system.weights[i] > 0:
            res = _size_poly_add(res, _shift(solve(avail & ~system.incompat[i]), s, float(system.weights[i])))
        memo[avail] = res
        return res

    return solve((1 << len(system)) - 1)


MAX_BRANCHING_POLYMERS = 60


def sum_compatible_families(
    source: PolymerModel | PolymerSystem, restrict_size: int | None = None, method: str = "auto"
) -> float:
    """Exact ``Xi`` (sum over pairwise compatible families of weight products).

    With ``restrict_size`` only families with total size strictly below it
    count; the low-temperature ``Xi~`` uses ``restrict_size = n/2``.
    """
    system = source.system() if isinstance(source, PolymerModel) else source
    if len(system) == 0:
        return 1.0
    sized = restrict_size is not None
    # a family of integer total size s counts iff s < restrict_size iff s < ceil(restrict_size)
    limit = max(0, math.ceil(restrict_size)) if sized else 1
    if limit == 0:
        return 0.0
    if method == "auto":
        method = "vertex" if system.masks is not None else "branching"
    if method == "vertex":
        if system.masks is None:
            raise ParameterError("vertex DP needs a graph-backed polymer system")
        return math.fsum(_xi_vertex_dp(system, limit, sized))
    if method == "branching":
        if len(system) > MAX_BRANCHING_POLYMERS:
            raise SizeError(f"{len(system)} polymers is too many for the generic recursion")
        return math.fsum(_xi_branching(system, limit, sized))
    raise ParameterError(f"unknown method {method!r}")


def low_temp_restriction(g: Graph) -> float:
    """``Xi~`` keeps families of total size strictly below ``n/2``."""
    return g.n / 2
