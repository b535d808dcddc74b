"""Which polymer model applies at a given (q, d, beta, eps)."""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import ParameterError, RegimeError
from ..exact.partition import beta_o

HIGH = "high"
LOW = "low"


def regime_threshold(q: float, d: int) -> float:
    """``beta_o(q, d)`` where defined (q > 2, d >= 3), else the asymptotic ``2 ln q / d``."""
    if q > 2 and d >= 3:
        return beta_o(q, d)
    if q <= 1 or d < 1:
        raise ParameterError(f"no regime threshold for q={q}, d={d}")
    return 2 * math.log(q) / d


def dispatch_regime(q: float, d: int, beta: float, eps: float = 0.25) -> str:
    """``high`` if beta <= (1-eps) beta_o, ``low`` if beta >= (1+eps) beta_o, else RegimeError.

    The window edges are compared with exact rational arithmetic on the float
    inputs so a value sitting on an edge always lands on the same side.
    """
    if beta < 0:
        raise ParameterError("beta must be non-negative")
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    if beta == 0:
        return HIGH
    thr = Fraction(regime_threshold(q, d))
    b, e = Fraction(beta), Fraction(eps)
    if b <= (1 - e) * thr:
        return HIGH
    if b >= (1 + e) * thr:
        return LOW
    raise RegimeError(
        f"beta={beta} lies in the unsupported window ({float((1 - e) * thr):.6g}, {float((1 + e) * thr):.6g})"
    )


def regime_label(q: float, d: int, beta: float, eps: float = 0.25) -> str:
    try:
        return dispatch_regime(q, d, beta, eps)
    except RegimeError:
        return "unsupported"
