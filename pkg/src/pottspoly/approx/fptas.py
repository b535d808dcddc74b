"""Approximate ln Z through the truncated cluster expansion."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

from ..cluster import choose_L, truncated_log_xi
from ..errors import KPFailure, ParameterError
from ..graphs.core import Graph
from ..polymers import HIGH as HIGH_MODE
from ..polymers import LOW as LOW_MODE
from ..polymers import PolymerModel, tune_decay
from .regime import HIGH, LOW, dispatch_regime

DEFAULT_EPS = 0.25
FULL_AUDIT_VERTICES = 10


@dataclass
class ApproxResult:
    log_value: float
    relative_error_bound: float
    regime: str
    truncation_L: float
    cluster_count: int
    wall_time: float
    truncation_bound: float = 0.0
    assumed_xi_gap: float = 0.0
    assumed_s0: float = 0.0
    polymer_count: int = 0
    kp: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def default_kp_cutoff(model: PolymerModel) -> int:
    """Audit every polymer on small graphs, polymers up to 4 vertices otherwise."""
    size = model.max_polymer_size()
    return size if model.graph.n <= FULL_AUDIT_VERTICES else min(size, 4)


def prepare_model(
    g: Graph, q: float, beta: float, regime: str, eps: float = DEFAULT_EPS, kp_cutoff: int | None = None,
    tune: bool = True,
) -> tuple[PolymerModel, object]:
    """Polymer model for the regime with KP-audited decay functions; raises KPFailure."""
    mode = HIGH_MODE if regime == HIGH else LOW_MODE
    model = PolymerModel(g, q, beta, mode, epsilon=eps)
    cutoff = default_kp_cutoff(model) if kp_cutoff is None else kp_cutoff
    if cutoff < 1:
        raise ParameterError("graph too small for a polymer model")
    if tune:
        model, report = tune_decay(model, cutoff)
    else:
        from ..polymers import kp_check

        report = kp_check(model, cutoff)
    if not report.passed:
        raise KPFailure(
            f"KP audit fails (worst ratio {report.worst_ratio:.4g}, vertex ratio {report.vertex_ratio}) "
            f"at cutoff {cutoff} even after scaling f and g by {model.decay_scale}",
            report,
        )
    return model, report


def fptas_z(
    g: Graph,
    q: float,
    beta: float,
    delta: float,
    eps: float = DEFAULT_EPS,
    L: float | None = None,
    kp_cutoff: int | None = None,
    d: int | None = None,
) -> ApproxResult:
    """Approximate ``ln Z_G(q, beta)`` to relative error ``delta``.

    High regime: ``n ln q + ln Xi(L)``. Low regime: ``ln q + beta |E| + ln Xi(L)``,
    which is ``ln q + beta d n / 2 + ln Xi(L)`` on d-regular graphs. The low
    regime also relies on ``Xi ~ Xi~`` and a negligible no-majority term; each
    is given ``delta/4`` of the budget and reported as an assumption.
    """
    start = time.perf_counter()
    if not 0 < delta < 1:
        raise ParameterError("delta must be in (0, 1)")
    if beta == 0:
        return ApproxResult(g.n * math.log(q), 0.0, HIGH, 0.0, 0, time.perf_counter() - start)
    degree = d if d is not None else g.max_degree
    regime = dispatch_regime(q, degree, beta, eps)
    model, report = prepare_model(g, q, beta, regime, eps, kp_cutoff)

    # choose_L leaves delta/2 for truncation; the low regime's asserted terms take delta/4 each
    total_f = g.n * model.f_vertex()
    L_used = choose_L(total_f, delta) if L is None else float(L)
    system = model.system(size_cap=size_cap_for(model, L_used), g_cap=L_used)
    series = truncated_log_xi(system, L_used)
    tail = math.exp(-L_used) * total_f
    if regime == HIGH:
        log_value = g.n * math.log(q) + series.value
        gap = s0 = 0.0
    else:
        log_value = math.log(q) + beta * g.m + series.value
        gap = s0 = delta / 4
    return ApproxResult(
        log_value=log_value,
        relative_error_bound=math.expm1(tail) + gap + s0,
        regime=regime,
        truncation_L=L_used,
        cluster_count=series.cluster_count,
        wall_time=time.perf_counter() - start,
        truncation_bound=tail,
        assumed_xi_gap=gap,
        assumed_s0=s0,
        polymer_count=len(system),
        kp=report.to_json(),
    )


def size_cap_for(model: PolymerModel, L: float) -> int:
    """Largest polymer size whose ``g`` can fit under ``L``."""
    per_vertex = model.decay_scale * model.g_boost
    if model.mode == HIGH_MODE:
        return max(0, int(L / per_vertex + 1e-9))
    return max(0, int(L * model.d / per_vertex + 1e-9))
