"""Exact Potts and random cluster partition functions.

Three independent routes compute Z: enumerating colourings, summing over edge
subsets (random cluster form), and closed multinomial sums for complete and
complete bipartite graphs. All of them work in log space so large q and beta
do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp

from ..errors import ParameterError, SizeError
from ..graphs.core import Graph
from ..limits import get_limits

CHUNK = 1 << 18


def beta_o(q: float, d: int) -> float:
    """Order-disorder threshold ``ln((q-2) / ((q-1)^(1-2/d) - 1))``."""
    if not q > 2 or d < 3:
        raise ParameterError(f"beta_o needs q > 2 and d >= 3 (got q={q}, d={d})")
    return math.log((q - 2) / math.expm1((1 - 2 / d) * math.log(q - 1)))


@dataclass(frozen=True)
class ModelParams:
    q: float
    beta: float

    def __post_init__(self):
        if self.q <= 0:
            raise ParameterError("q must be positive")
        if self.beta < 0:
            raise ParameterError("beta must be non-negative (ferromagnetic)")

    @property
    def p(self) -> float:
        return math.expm1(self.beta)

    @classmethod
    def from_p(cls, q: float, p: float) -> "ModelParams":
        if p < 0:
            raise ParameterError("p must be non-negative")
        return cls(q, math.log1p(p))

    def require_integer_q(self) -> int:
        if self.q != int(self.q) or self.q < 2:
            raise ParameterError(f"colouring-based operations need integer q >= 2, got {self.q}")
        return int(self.q)


def _check_q_beta(q, beta) -> int:
    if int(q) != q or q < 1:
        raise ParameterError(f"Potts q must be a positive integer, got {q}")
    if beta < 0:
        raise ParameterError("beta must be non-negative")
    return int(q)


# -- colouring enumeration ----------------------------------------------------


def colorings_block(n: int, q: int, start: int, stop: int) -> np.ndarray:
    """Colourings with indices ``start..stop-1`` where index = sum sigma_v q^v."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.int16)
    for v in range(n):
        out[:, v] = idx % q
        idx //= q
    return out


def monochromatic_counts(g: Graph, sigma: np.ndarray) -> np.ndarray:
    """``m(G, sigma)`` for each row of ``sigma``."""
    sigma = np.atleast_2d(sigma)
    total = np.zeros(len(sigma), dtype=np.int64)
    for u, v in g.edges:
        total += sigma[:, u] == sigma[:, v]
    return total


def _mono_histogram(g: Graph, q: int) -> tuple[int, ...]:
    """``N_k`` = number of colourings with exactly ``k`` monochromatic edges."""
    # checked outside the cache so a lowered cutoff applies to cached graphs too
    if q ** g.n > get_limits().colorings:
        raise SizeError(f"q^n = {q}^{g.n} exceeds the colouring cutoff {get_limits().colorings:.0e}")
    return _mono_histogram_cached(g, q)


@lru_cache(maxsize=256)
def _mono_histogram_cached(g: Graph, q: int) -> tuple[int, ...]:
    if g.n == 0:
        return (1,)
    # colour of vertex 0 fixed to 0; every count is then multiplied by q
    total = q ** (g.n - 1)
    hist = np.zeros(g.m + 1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        block = colorings_block(g.n - 1, q, start, min(total, start + CHUNK))
        sigma = np.concatenate([np.zeros((len(block), 1), dtype=np.int16), block], axis=1)
        hist += np.bincount(monochromatic_counts(g, sigma), minlength=g.m + 1)
    return tuple(int(c) * q for c in hist)


# -- edge-subset enumeration --------------------------------------------------


def component_counts(n: int, edges, subsets: np.ndarray) -> np.ndarray:
    """``c(A)`` for each edge subset given as a bitmask over ``edges``."""
    labels = np.tile(np.arange(n, dtype=np.int16), (len(subsets), 1))
    active = [((subsets >> i) & 1).astype(bool) for i in range(len(edges))]
    changed = True
    while changed:
        changed = False
        for i, (u, v) in enumerate(edges):
            a = active[i]
            lu, lv = labels[a, u], labels[a, v]
            low = np.minimum(lu, lv)
            if np.any(low != lu) or np.any(low != lv):
                changed = True
                labels[a, u] = low
                labels[a, v] = low
    # after convergence every vertex carries the least label of its component
    return np.count_nonzero(labels == np.arange(n, dtype=np.int16), axis=1)


@lru_cache(maxsize=256)
def rc_histogram(g: Graph) -> tuple[tuple[int, ...], ...]:
    """``H[c][k]`` = number of edge subsets with ``c`` components and ``k`` edges."""
    if g.m > get_limits().rc_edges:
        raise SizeError(f"{g.m} edges exceeds the edge-subset cutoff {get_limits().rc_edges}")
    hist = np.zeros((g.n + 1, g.m + 1), dtype=np.int64)
    total = 1 << g.m
    for start in range(0, total, CHUNK):
        subsets = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        comps = component_counts(g.n, g.edges, subsets)
        sizes = np.bitwise_count(subsets).astype(np.int64)
        np.add.at(hist, (comps, sizes), 1)
    return tuple(tuple(int(x) for x in row) for row in hist)


def rc_log_partition(g: Graph, q: float, p: float) -> float:
    """``ln sum_A q^c(A) p^|A|`` by edge-subset enumeration."""
    if q <= 0 or p < 0:
        raise ParameterError("random cluster model needs q > 0 and p >= 0")
    if p == 0 or g.m == 0:
        return g.n * math.log(q)
    hist = np.array(rc_histogram(g), dtype=float)
    c, k = np.nonzero(hist)
    return float(logsumexp(np.log(hist[c, k]) + c * math.log(q) + k * math.log(p)))


def rc_partition(g: Graph, q: float, p: float) -> float:
    return _safe_exp(rc_log_partition(g, q, p))


def rc_polynomial(g: Graph) -> dict[tuple[int, int], int]:
    """Coefficients ``{(c, k): count}`` of ``sum_A q^c p^k``."""
    hist = rc_histogram(g)
    return {(c, k): x for c, row in enumerate(hist) for k, x in enumerate(row) if x}


# -- symmetric graphs ---------------------------------------------------------


def integer_partitions(n: int, max_parts: int | None = None, max_part: int | None = None):
    """Partitions of ``n`` as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        rest_parts = None if max_parts is None else max_parts - 1
        for tail in integer_partitions(n - first, rest_parts, first):
            yield (first,) + tail


def _log_partition_count(parts: tuple[int, ...], q: int) -> float:
    """ln of the number of colourings of ``sum(parts)`` labelled vertices whose class sizes are ``parts``."""
    ell = len(parts)
    total = sum(parts)
    mult: dict[int, int] = {}
    for x in parts:
        mult[x] = mult.get(x, 0) + 1
    log_colors = gammaln(q + 1) - gammaln(q - ell + 1) - sum(gammaln(m + 1) for m in mult.values())
    log_multinomial = gammaln(total + 1) - sum(gammaln(x + 1) for x in parts)
    return float(log_colors + log_multinomial)


def log_z_complete(k: int, q: int, beta: float) -> float:
    """``ln Z`` of the complete graph ``K_k`` from its colour-class histogram."""
    q = _check_q_beta(q, beta)
    terms = [
        _log_partition_count(lam, q) + beta * sum(x * (x - 1) // 2 for x in lam)
        for lam in integer_partitions(k, max_parts=q)
    ]
    return float(logsumexp(terms))


def log_z_complete_bipartite(a: int, b: int, q: int, beta: float) -> float:
    """``ln Z`` of ``K_{a,b}``: condition on side ``a``, each side-``b`` vertex then chooses freely."""
    q = _check_q_beta(q, beta)
    terms = []
    for lam in integer_partitions(a, max_parts=q):
        free = [math.log(q - len(lam))] if q > len(lam) else []
        inner = logsumexp(free + [beta * x for x in lam])
        terms.append(_log_partition_count(lam, q) + b * inner)
    return float(logsumexp(terms))


def _bipartition(g: Graph) -> tuple[int, int] | None:
    """Side sizes if ``g`` is a complete bipartite graph, else ``None``."""
    if g.n < 2 or not g.is_connected():
        return None
    side = [-1] * g.n
    side[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if side[w] < 0:
                side[w] = 1 - side[u]
                stack.append(w)
            elif side[w] == side[u]:
                return None
    a = side.count(0)
    b = g.n - a
    return (a, b) if g.m == a * b else None


# -- dispatch -----------------------------------------------------------------

BACKENDS = ("auto", "colorings", "rc", "multinomial")


def _component_log_z(g: Graph, q: int, beta: float, backend: str) -> tuple[float, str]:
    if g.n == 1:
        return math.log(q), "trivial"
    limits = get_limits()
    if backend in ("auto", "multinomial"):
        if g.m == g.n * (g.n - 1) // 2:
            return log_z_complete(g.n, q, beta), "multinomial"
        ab = _bipartition(g)
        if ab is not None:
            return log_z_complete_bipartite(ab[0], ab[1], q, beta), "multinomial"
        if backend == "multinomial":
            raise ParameterError("multinomial backend handles only complete and complete bipartite graphs")
    if backend == "colorings" or (backend == "auto" and q ** g.n <= limits.colorings):
        hist = np.array(_mono_histogram(g, q), dtype=float)
        k = np.nonzero(hist)[0]
        return float(logsumexp(np.log(hist[k]) + beta * k)), "colorings"
    if backend in ("rc", "auto"):
        if g.m > limits.rc_edges:
            raise SizeError(
                f"no exact backend fits: q^n={q}^{g.n} and |E|={g.m} exceed the cutoffs"
            )
        return rc_log_partition(g, q, math.expm1(beta)), "rc"
    raise ParameterError(f"unknown backend {backend!r}; choose from {BACKENDS}")


def potts_log_partition_with_backend(g: Graph, q: int, beta: float, backend: str = "auto") -> tuple[float, str]:
    """``ln Z`` and the name of the backend used (connected components multiply)."""
    q = _check_q_beta(q, beta)
    if g.n == 0:
        return 0.0, "trivial"
    total = 0.0
    used = set()
    for comp in g.components():
        val, name = _component_log_z(g.induced_subgraph(comp), q, beta, backend)
        total += val
        used.add(name)
    used.discard("trivial")
    return total, "+".join(sorted(used)) or "trivial"


def potts_log_partition(g: Graph, q: int, beta: float, backend: str = "auto") -> float:
    return potts_log_partition_with_backend(g, q, beta, backend)[0]


def potts_partition(g: Graph, q: int, beta: float, backend: str = "auto") -> float:
    """``Z_G(q, beta) = sum_sigma exp(beta m(G, sigma))``."""
    return _safe_exp(potts_log_partition(g, q, beta, backend))


def potts_polynomial(g: Graph, q: int, backend: str = "auto") -> list[int]:
    """Integer coefficients ``N_k`` with ``Z = sum_k N_k x^k`` and ``x = e^beta``."""
    q = _check_q_beta(q, 0.0)
    if backend == "colorings" or (backend == "auto" and q ** g.n <= get_limits().colorings):
        return list(_mono_histogram(g, q))
    if backend not in ("auto", "rc"):
        raise ParameterError(f"polynomial mode supports backends colorings and rc, not {backend!r}")
    # p = x - 1, so expand q^c (x - 1)^k with exact integers
    coeffs = [0] * (g.m + 1)
    for (c, k), count in rc_polynomial(g).items():
        scale = count * q ** c
        for j in range(k + 1):
            coeffs[j] += scale * math.comb(k, j) * (-1) ** (k - j)
    return coeffs


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class PartitionResult:
    graph: dict
    q: float
    beta: float
    logZ: float
    backend: str

    def to_json(self) -> dict:
        return {"graph": self.graph, "q": self.q, "beta": self.beta, "logZ": self.logZ, "backend": self.backend}


def exact_result(g: Graph, q: int, beta: float, backend: str = "auto") -> PartitionResult:
    val, used = potts_log_partition_with_backend(g, q, beta, backend)
    return PartitionResult(g.to_json(), q, beta, val, used)
