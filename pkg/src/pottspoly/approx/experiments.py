"""Contraction-colouring recovery experiments and colour-class / component statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import binom

from ..errors import ParameterError, PreconditionError, RegularityError
from ..exact.sampling import edge_components, exact_potts_sample, exact_rc_sample, nm
from ..graphs.connected import count_connected_sets_with_boundary
from ..graphs.core import Graph
from .karger import UnionFind, contract_to

BASIC = "basic"
MIN2 = "min_component_2"


def _stop_count(x: float) -> int:
    """Vertices left by "contract while more than x vertices remain"."""
    return max(1, math.floor(x + 1e-12))


def _check_min_component_2(g: Graph, sigma) -> None:
    mono = [i for i, (u, v) in enumerate(g.edges) if sigma[u] == sigma[v]]
    if any(len(c) < 2 for c in edge_components(g, mono)):
        raise PreconditionError("every monochromatic component must have at least two vertices")


@dataclass(frozen=True)
class RecoveryOutcome:
    recovered: bool
    ell: int
    final_vertices: int


def contraction_color_procedure(
    g: Graph, sigma, variant: str, rng: np.random.Generator, q: int, d: int | None = None
) -> RecoveryOutcome:
    """One run of the contract-then-colour procedure; did it reproduce ``sigma``?

    ``basic``: contract uniform random edges while more than ``2 l / d``
    super-vertices remain, then colour each super-vertex uniformly.
    ``min_component_2``: the same first step; then, while some super-vertex
    is still a single original vertex, contract it along a uniform random
    incident edge; then contract uniform random edges while more than
    ``2 l / (2d - 2)`` super-vertices remain; then colour uniformly.
    ``l`` is the number of non-monochromatic edges of ``sigma``.
    """
    sigma = np.asarray(sigma)
    if len(sigma) != g.n:
        raise ParameterError("sigma must colour every vertex")
    if sigma.min(initial=0) < 0 or sigma.max(initial=0) >= q:
        raise ParameterError(f"colours must lie in 0..{q - 1}")
    d = g.max_degree if d is None else d
    if d < 1:
        raise PreconditionError("the procedure needs at least one edge")
    if variant not in (BASIC, MIN2):
        raise ParameterError(f"unknown variant {variant!r}; use {BASIC!r} or {MIN2!r}")
    if variant == MIN2:
        _check_min_component_2(g, sigma)
        if d < 2:
            raise PreconditionError("min_component_2 needs degree at least 2")
    ell = nm(g, sigma)
    uf = UnionFind(g.n)
    contract_to(g, uf, _stop_count(2 * ell / d), rng)
    if variant == MIN2:
        incident = [[] for _ in range(g.n)]
        for u, v in g.edges:
            incident[u].append(v)
            incident[v].append(u)
        size = [0] * g.n
        for v in range(g.n):
            size[uf.find(v)] += 1
        for v in range(g.n):
            if uf.count > 1 and size[uf.find(v)] == 1:
                w = incident[v][int(rng.integers(len(incident[v])))]
                rw = uf.find(w)
                uf.union(v, w)
                size[uf.find(v)] = size[rw] + 1
        contract_to(g, uf, _stop_count(2 * ell / (2 * d - 2)), rng)
    roots = [uf.find(v) for v in range(g.n)]
    palette = {r: int(rng.integers(q)) for r in sorted(set(roots))}
    recovered = all(palette[roots[v]] == sigma[v] for v in range(g.n))
    return RecoveryOutcome(recovered, ell, uf.count)


def recovery_lower_bound(g: Graph, sigma, variant: str, q: int) -> float:
    """Analytic lower bound on the recovery probability for a regular graph.

    ``basic``: with ``x = 2 l / d`` and ``r`` the final vertex count,
    ``prod_{m=r+1}^{n} (1 - x/m) * q^-r``; for integer ``x >= 1`` this is
    ``C(n, x)^-1 q^-x``.
    ``min_component_2``: ``C(n, x)^-1 q^-r3 (2d)^-x`` with ``r3`` the final
    vertex count after the last contraction step.
    """
    d = g.regular_degree()
    if d is None:
        raise RegularityError("the recovery bounds assume a regular graph")
    sigma = np.asarray(sigma)
    ell = nm(g, sigma)
    x = 2 * ell / d
    if variant == BASIC:
        r = _stop_count(x)
        prob = 1.0
        for m in range(r + 1, g.n + 1):
            prob *= 1 - x / m
        return prob * float(q) ** (-r)
    if variant == MIN2:
        _check_min_component_2(g, sigma)
        r3 = _stop_count(2 * ell / (2 * d - 2))
        return float(1 / binom(g.n, x)) * float(q) ** (-r3) * float(2 * d) ** (-x)
    raise ParameterError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class RecoveryEstimate:
    trials: int
    successes: int
    frequency: float
    bound: float
    standard_error: float
    passed: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def recovery_experiment(
    g: Graph, sigma, variant: str, q: int, trials: int, rng: np.random.Generator, n_se: float = 3.0
) -> RecoveryEstimate:
    """Frequency of recovery against the bound, allowing ``n_se`` standard errors.

    The standard error is taken at the bound itself,
    ``sqrt(b (1 - b) / trials)``, which is the spread under the null that the
    true probability equals the bound.
    """
    bound = recovery_lower_bound(g, sigma, variant, q)
    hits = sum(contraction_color_procedure(g, sigma, variant, rng, q).recovered for _ in range(trials))
    freq = hits / trials
    se = math.sqrt(bound * (1 - bound) / trials)
    return RecoveryEstimate(trials, hits, freq, bound, se, freq >= bound - n_se * se)


# -- colour-class and component statistics ------------------------------------

POTTS_MODE = "potts_color_classes"
RC_MODE = "rc_components"


@dataclass
class StructureStats:
    mode: str
    n: int
    q: int
    parameter: float
    samples: int
    max_fractions: np.ndarray
    size_vectors: list

    @property
    def median_max_fraction(self) -> float:
        return float(np.median(self.max_fractions))

    def frequency_above(self, level: float) -> float:
        return float(np.mean(self.max_fractions > level))

    def hoeffding_radius(self, confidence: float = 0.95) -> float:
        """Half-width ``sqrt(ln(2/(1-c)) / (2N))`` for the mean of a [0, 1] statistic."""
        return math.sqrt(math.log(2 / (1 - confidence)) / (2 * self.samples))

    def summary(self) -> dict:
        fr = self.max_fractions
        return {
            "mode": self.mode,
            "n": self.n,
            "q": self.q,
            "parameter": self.parameter,
            "samples": self.samples,
            "mean_max_fraction": float(fr.mean()),
            "median_max_fraction": self.median_max_fraction,
            "min_max_fraction": float(fr.min()),
            "max_max_fraction": float(fr.max()),
            "frequency_above_half": self.frequency_above(0.5),
            "hoeffding_radius_95": self.hoeffding_radius(),
        }


def structure_experiment(
    g: Graph, q: int, beta_or_p: float, mode: str, samples: int, rng: np.random.Generator
) -> StructureStats:
    """Exact samples summarised by the largest colour class or RC component.

    ``potts_color_classes`` takes ``beta`` and records colour-class sizes;
    ``rc_components`` takes ``p`` and records component sizes.
    """
    if samples < 1:
        raise ParameterError("samples must be positive")
    vectors = []
    if mode == POTTS_MODE:
        draws = exact_potts_sample(g, q, beta_or_p, rng, size=samples)
        for sigma in np.atleast_2d(draws):
            vectors.append(sorted(np.bincount(sigma, minlength=q).tolist(), reverse=True))
    elif mode == RC_MODE:
        for _ in range(samples):
            comps = edge_components(g, exact_rc_sample(g, q, beta_or_p, rng))
            vectors.append(sorted((len(c) for c in comps), reverse=True))
    else:
        raise ParameterError(f"unknown mode {mode!r}; use {POTTS_MODE!r} or {RC_MODE!r}")
    fractions = np.array([v[0] / g.n for v in vectors])
    return StructureStats(mode, g.n, q, float(beta_or_p), samples, fractions, vectors)


__all__ = [
    "BASIC",
    "MIN2",
    "POTTS_MODE",
    "RC_MODE",
    "RecoveryEstimate",
    "RecoveryOutcome",
    "StructureStats",
    "contraction_color_procedure",
    "count_connected_sets_with_boundary",
    "recovery_experiment",
    "recovery_lower_bound",
    "structure_experiment",
]
