"""Size guards for the exhaustive routines.

Defaults can be overridden through the ``POTTS_MAX_EXHAUSTIVE`` environment
variable. A bare integer sets the vertex cutoff for subset enumeration; a
comma separated list of ``key=value`` pairs sets individual guards, e.g.
``POTTS_MAX_EXHAUSTIVE="subset_vertices=28,rc_edges=24"``.
"""

from __future__ import annotations

import dataclasses
import os

from .errors import ParameterError

ENV_VAR = "POTTS_MAX_EXHAUSTIVE"


@dataclasses.dataclass(frozen=True)
class Limits:
    subset_vertices: int = 24
    cut_vertices: int = 16
    colorings: float = 1e8
    rc_edges: int = 26
    sample_table: float = 2**22
    ursell_nodes: int = 14


def _parse(raw: str) -> dict:
    raw = raw.strip()
    if not raw:
        return {}
    if "=" not in raw:
        return {"subset_vertices": int(raw)}
    out = {}
    names = {f.name: f.type for f in dataclasses.fields(Limits)}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in names:
            raise ParameterError(f"unknown size guard {key!r} in {ENV_VAR}")
        out[key] = float(value) if key in ("colorings", "sample_table") else int(float(value))
    return out


def get_limits() -> Limits:
    """Current guards, re-read from the environment on every call."""
    return Limits(**_parse(os.environ.get(ENV_VAR, "")))
