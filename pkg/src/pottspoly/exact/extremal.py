"""Numeric checks of the clique and biclique upper bounds on Z."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ParameterError
from ..graphs.core import Graph
from .partition import beta_o, log_z_complete, log_z_complete_bipartite, potts_log_partition


@dataclass(frozen=True)
class ExtremalResult:
    variant: str
    log_lhs: float
    log_rhs: float
    margin: float
    corollary_log_rhs: float
    corollary_margin: float


def extremal_margin(g: Graph, q: int, beta: float, variant: str = "clique") -> ExtremalResult:
    """``ln RHS - ln Z_G`` for the product bound over cliques or bicliques.

    ``clique``: ``Z_G <= prod_v Z_{K_{d_v+1}}^{1/(d_v+1)}``.
    ``biclique`` (triangle-free G): ``Z_G <= q^t prod_{uv} Z_{K_{d_u,d_v}}^{1/(d_u d_v)}``
    with ``t`` isolated vertices.
    The corollary form replaces the degrees by the maximum degree.
    """
    degs = g.degrees()
    lhs = potts_log_partition(g, q, beta)
    big = max(degs, default=0)
    if variant == "clique":
        rhs = sum(log_z_complete(d + 1, q, beta) / (d + 1) for d in degs)
        if big == 0:
            cor = g.n * math.log(q)
        else:
            cor = (g.n - 2 * g.m / big) * math.log(q) + 2 * g.m / (big * (big + 1)) * log_z_complete(big + 1, q, beta)
    elif variant == "biclique":
        if g.has_triangle():
            raise ParameterError("the biclique bound needs a triangle-free graph")
        isolated = degs.count(0)
        rhs = isolated * math.log(q) + sum(
            log_z_complete_bipartite(degs[u], degs[v], q, beta) / (degs[u] * degs[v]) for u, v in g.edges
        )
        if big == 0:
            cor = g.n * math.log(q)
        else:
            cor = (g.n - 2 * g.m / big) * math.log(q) + g.m / big**2 * log_z_complete_bipartite(big, big, q, beta)
    else:
        raise ParameterError(f"unknown variant {variant!r}; use 'clique' or 'biclique'")
    return ExtremalResult(variant, lhs, rhs, rhs - lhs, cor, cor - lhs)


@dataclass(frozen=True)
class CliqueBoundCheck:
    variant: str
    ratio: float
    slack: float
    holds: bool
    beta_threshold: float


def clique_partition_bound_check(
    d: int, q: int, beta: float, eps: float, omega: float = 0.0, variant: str = "clique"
) -> CliqueBoundCheck:
    """Compare ``Z/(q e^{beta m}) - 1`` for ``K_{d+1}`` or ``K_{d,d}`` with ``q^(-omega*eps)``.

    ``omega`` stands in for the unspecified decay constant; the default 0
    gives slack 1.
    """
    if eps <= 0:
        raise ParameterError("eps must be positive")
    threshold = (1 + eps) * beta_o(q, d)
    if beta < threshold:
        raise ParameterError(f"beta={beta} is below (1+eps) beta_o = {threshold}")
    if variant == "clique":
        log_z, m = log_z_complete(d + 1, q, beta), d * (d + 1) // 2
    elif variant == "biclique":
        log_z, m = log_z_complete_bipartite(d, d, q, beta), d * d
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    ratio = math.expm1(log_z - math.log(q) - beta * m)
    slack = q ** (-omega * eps)
    return CliqueBoundCheck(variant, ratio, slack, ratio <= slack, threshold)
