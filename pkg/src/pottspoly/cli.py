"""Command-line front end: ``pottspoly <command> [options]``.

Every command prints JSON (default) or CSV to stdout, or writes it atomically
to ``--out``. Exit codes: 0 success, 2 unsupported regime, 3 size guard
refusal, 1 anything else; failures also print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError, PottsError, RegimeError, SizeError
from .graphs.core import Graph, dump_graph, generate, load_graph

EXIT_OK, EXIT_ERROR, EXIT_REGIME, EXIT_SIZE = 0, 1, 2, 3
RANDOMIZED = {"sample", "karger", "experiment", "sweep"}


# -- configuration ------------------------------------------------------------


@dataclass
class RunConfig:
    """Options shared by all commands; a ``--config`` JSON file uses these keys."""

    command: str | None = None
    graph: str | None = None
    q: float | None = None
    beta: float | None = None
    p: float | None = None
    eps: float | None = None
    delta: float | None = None
    seed: int | None = None
    size_cap: int | None = None
    cluster_order: int | None = None
    L: float | None = None
    out: str | None = None
    format: str | None = None

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names - _EXTRA_CONFIG_KEYS
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**{k: v for k, v in data.items() if k in names})
        cfg.extra = {k: v for k, v in data.items() if k in _EXTRA_CONFIG_KEYS}
        return cfg

    def validate(self) -> None:
        if self.delta is not None and not 0 < self.delta < 1:
            raise ParameterError("delta must lie in (0, 1)")
        if self.command in RANDOMIZED and self.seed is None:
            raise ParameterError(f"command {self.command!r} needs a seed")


# command-specific options that a config file may also set
_EXTRA_CONFIG_KEYS = {
    "alpha", "trials", "samples", "variant", "sigma", "mode", "kind", "backend", "cutoff", "root", "max_size",
    "boundary", "method", "threads", "graphs", "qs", "betas", "ps", "beta_factors", "seeds", "task", "manifest",
    "timing", "edges", "d", "n", "a", "b", "gseed", "graph_format",
}


def _num(text: str) -> int | float:
    """Integer when the value is integral, so ``--q 3`` prints as 3."""
    value = float(text)
    return int(value) if value.is_integer() else value


def parse_graph_spec(spec: str) -> Graph:
    """A file path, or ``kind`` / ``kind:key=value,...`` such as ``hypercube:d=3``."""
    if os.path.exists(spec):
        return load_graph(spec)
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ParameterError(f"graph parameter {item!r} must look like key=value")
        params[key.strip()] = int(value)
    return generate(kind.strip(), **params)


def _graph(args) -> Graph:
    if not args.graph:
        raise ParameterError("this command needs --graph (file path or generator spec)")
    return parse_graph_spec(args.graph)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ParameterError(f"missing --{name.replace('_', '-')}")


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(args.seed)


def _beta(args) -> float:
    if args.beta is not None and args.p is not None:
        raise ParameterError("give either --beta or --p, not both")
    if args.p is not None:
        return math.log1p(args.p)
    _require(args, "beta")
    return args.beta


def _p(args) -> float:
    if args.beta is not None and args.p is not None:
        raise ParameterError("give either --beta or --p, not both")
    if args.beta is not None:
        return math.expm1(args.beta)
    _require(args, "p")
    return args.p


# -- output -------------------------------------------------------------------


def atomic_write(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class Table:
    header: list
    rows: list


def _csv_text(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return buf.getvalue()


def _flatten(payload: dict) -> Table:
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
    return Table(list(scalars), [list(scalars.values())])


def render(payload, fmt: str) -> str:
    if isinstance(payload, str):
        return payload
    if fmt == "csv":
        table = payload if isinstance(payload, Table) else _flatten(payload)
        return _csv_text(table)
    if isinstance(payload, Table):
        payload = [dict(zip(payload.header, row)) for row in payload.rows]
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(args, payload) -> None:
    text = render(payload, args.format)
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_gen(args):
    _require(args, "kind")
    params = {k: getattr(args, k) for k in ("n", "d", "a", "b") if getattr(args, k) is not None}
    if args.gseed is not None:
        params["seed"] = args.gseed
    g = generate(args.kind, **params)
    return dump_graph(g, args.graph_format) + ("\n" if args.graph_format == "json" else "")


def cmd_exact(args):
    from .exact.partition import exact_result

    _require(args, "q")
    g = _graph(args)
    return exact_result(g, int(args.q), _beta(args), args.backend).to_json()


def cmd_rc(args):
    from .exact.partition import rc_log_partition

    _require(args, "q")
    g = _graph(args)
    p = _p(args)
    return {"graph": g.to_json(), "q": args.q, "p": p, "logZ": rc_log_partition(g, args.q, p)}


def _fptas_payload(args, res) -> dict:
    out = res.to_json()
    if not args.timing:
        out.pop("wall_time")
    return out


def cmd_fptas(args):
    from .approx.fptas import fptas_z

    _require(args, "q", "delta")
    g = _graph(args)
    res = fptas_z(g, args.q, _beta(args), args.delta, eps=args.eps, L=args.L, kp_cutoff=args.cutoff)
    return _fptas_payload(args, res)


def cmd_verify(args):
    from .approx.fptas import fptas_z
    from .exact.partition import potts_log_partition

    _require(args, "q", "delta")
    g = _graph(args)
    beta = _beta(args)
    res = fptas_z(g, args.q, beta, args.delta, eps=args.eps, L=args.L, kp_cutoff=args.cutoff)
    exact = potts_log_partition(g, int(args.q), beta)
    err = abs(math.expm1(res.log_value - exact))
    args.verify_ok = err <= args.delta
    return {"approx": _fptas_payload(args, res), "exact_logZ": exact, "relative_error": err,
            "delta": args.delta, "ok": args.verify_ok}


def cmd_sample(args):
    from .approx.sampling import PottsSampler
    from .exact.sampling import exact_potts_sample

    _require(args, "q")
    g = _graph(args)
    beta = _beta(args)
    rng = _rng(args)
    info = None
    if args.method == "exact":
        draws = np.atleast_2d(exact_potts_sample(g, int(args.q), beta, rng, size=args.samples))
    else:
        _require(args, "delta")
        sampler = PottsSampler(g, int(args.q), beta, args.delta, eps=args.eps, kp_cutoff=args.cutoff)
        draws = sampler.draw_many(rng, args.samples)
        info = dataclasses.asdict(sampler.info)
        info["clamp_count"] = sampler.sampler.clamp_count if sampler.sampler is not None else 0
        info["rejections"] = sampler.rejections
    if args.format == "csv":
        return Table(["draw"] + [f"v{i}" for i in range(g.n)], [[i] + row.tolist() for i, row in enumerate(draws)])
    return {"method": args.method, "info": info, "samples": draws.tolist()}


def cmd_kp_check(args):
    from .approx.regime import HIGH, dispatch_regime
    from .polymers import HIGH as HIGH_MODE
    from .polymers import LOW as LOW_MODE
    from .polymers import PolymerModel, kp_check, tune_decay

    _require(args, "q")
    g = _graph(args)
    beta = _beta(args)
    mode = args.mode
    if mode == "auto":
        mode = HIGH_MODE if dispatch_regime(args.q, g.max_degree, beta, args.eps) == HIGH else LOW_MODE
    model = PolymerModel(g, args.q, beta, mode, epsilon=args.eps)
    cutoff = args.cutoff if args.cutoff is not None else model.max_polymer_size()
    if args.tune:
        _, report = tune_decay(model, cutoff)
    else:
        report = kp_check(model, cutoff)
    out = report.to_json()
    out["mode"] = mode
    return out


def cmd_ursell(args):
    from .cluster import connected_signed_sum, ursell

    if args.edges is not None:
        edges = [tuple(int(x) for x in item.split("-")) for item in args.edges.split(",") if item]
        k = args.k if args.k is not None else 1 + max((max(e) for e in edges), default=0)
        h = (k, edges)
    else:
        g = _graph(args)
        k, h = g.n, g
    phi = ursell(h)
    return {"k": k, "signed_sum": connected_signed_sum(h), "phi": f"{phi.numerator}/{phi.denominator}",
            "phi_float": float(phi)}


def cmd_karger(args):
    from .approx.karger import karger_count_cuts

    g = _graph(args)
    return karger_count_cuts(g, args.alpha, args.trials, _rng(args)).to_json()


def cmd_enum_sets(args):
    from .graphs.connected import count_connected_sets_with_boundary, enumerate_connected_sets

    g = _graph(args)
    if args.boundary is not None:
        return {"root": args.root, "boundary": args.boundary,
                "count": count_connected_sets_with_boundary(g, args.root, args.boundary)}
    max_size = args.max_size if args.max_size is not None else g.n
    recs = list(enumerate_connected_sets(g, args.root, max_size, args.mode))
    if args.format == "csv":
        return Table(["vertices", "edges"], [[" ".join(map(str, r.vertices)),
                                              " ".join(f"{u}-{v}" for u, v in r.edges)] for r in recs])
    return {"root": args.root, "max_size": max_size, "mode": args.mode, "count": len(recs),
            "sets": [{"vertices": list(r.vertices), "edges": [list(e) for e in r.edges]} for r in recs]}


def _parse_sigma(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if "," in text else [int(c) for c in text]


def cmd_experiment(args):
    from .approx import experiments as ex

    g = _graph(args)
    rng = _rng(args)
    _require(args, "q")
    if args.kind == "recovery":
        _require(args, "sigma")
        sigma = _parse_sigma(args.sigma)
        q = int(args.q)
        if args.format == "csv":
            rows = []
            for t in range(args.trials):
                o = ex.contraction_color_procedure(g, sigma, args.variant, rng, q)
                rows.append([t, int(o.recovered), o.final_vertices])
            return Table(["trial", "recovered", "final_vertices"], rows)
        est = ex.recovery_experiment(g, sigma, args.variant, q, args.trials, rng)
        return {"variant": args.variant, "sigma": sigma, "q": q, **est.to_json()}
    mode = args.mode if args.mode in (ex.POTTS_MODE, ex.RC_MODE) else ex.POTTS_MODE
    param = _beta(args) if mode == ex.POTTS_MODE else _p(args)
    q = int(args.q) if mode == ex.POTTS_MODE else args.q
    stats = ex.structure_experiment(g, q, param, mode, args.samples, rng)
    if args.format == "csv":
        width = max(len(v) for v in stats.size_vectors)
        rows = [[i, stats.max_fractions[i]] + v + [""] * (width - len(v)) for i, v in enumerate(stats.size_vectors)]
        return Table(["sample", "max_fraction"] + [f"size{j}" for j in range(width)], rows)
    return stats.summary()


# -- sweep --------------------------------------------------------------------

SWEEP_HEADER = ["cell", "graph", "q", "param", "value", "seed", "regime", "result", "status", "error"]


def _sweep_cells(args) -> list[dict]:
    from .approx.regime import regime_threshold

    graphs = args.graphs or ([args.graph] if args.graph else [])
    qs = args.qs or ([args.q] if args.q is not None else [])
    cells = []
    for spec in graphs:
        g = parse_graph_spec(spec)
        for q in qs:
            if args.ps:
                params = [("p", float(p)) for p in args.ps]
            elif args.beta_factors:
                thr = regime_threshold(q, max(g.max_degree, 1))
                params = [("beta", float(f) * thr) for f in args.beta_factors]
            else:
                params = [("beta", float(b)) for b in (args.betas or [])]
            for name, value in params:
                for rep in range(args.seeds):
                    cells.append({"graph": spec, "q": q, "param": name, "value": value, "rep": rep})
    for i, cell in enumerate(cells):
        cell["cell"] = i
        ss = np.random.SeedSequence(entropy=args.seed, spawn_key=(i,))
        cell["seed"] = int(ss.generate_state(1)[0])
    return cells


def _run_cell(task: str, cell: dict, opts: dict) -> list:
    from .approx.regime import regime_label

    g = parse_graph_spec(cell["graph"])
    q, value = cell["q"], cell["value"]
    beta = value if cell["param"] == "beta" else math.log1p(value)
    regime = regime_label(q, max(g.max_degree, 1), beta, opts["eps"]) if beta >= 0 else ""
    result, status, error = "", "ok", ""
    try:
        rng = np.random.default_rng(cell["seed"])
        if task == "regime":
            result = regime
        elif task == "exact":
            from .exact.partition import potts_log_partition

            result = repr(potts_log_partition(g, int(q), beta))
        elif task == "fptas":
            from .approx.fptas import fptas_z

            result = repr(fptas_z(g, q, beta, opts["delta"], eps=opts["eps"]).log_value)
        elif task in ("potts-structure", "rc-structure"):
            from .approx.experiments import POTTS_MODE, RC_MODE, structure_experiment

            if task == "potts-structure":
                stats = structure_experiment(g, int(q), beta, POTTS_MODE, opts["samples"], rng)
            else:
                stats = structure_experiment(g, q, math.expm1(beta), RC_MODE, opts["samples"], rng)
            result = repr(stats.median_max_fraction)
        else:
            raise ParameterError(f"unknown sweep task {task!r}")
    except (PottsError, ValueError) as exc:
        status, error = type(exc).__name__, str(exc)
    return [cell["cell"], cell["graph"], q, cell["param"], repr(value), cell["seed"], regime, result, status, error]


def _run_cell_packed(packed):
    return _run_cell(*packed)


def cmd_sweep(args):
    cells = _sweep_cells(args)
    manifest_path = args.manifest or (args.out + ".manifest.jsonl" if args.out else None)
    done: dict[int, list] = {}
    if manifest_path and os.path.exists(manifest_path):
        with open(manifest_path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rec = json.loads(line)
                    done[int(rec["cell"])] = rec["row"]
    opts = {"eps": args.eps, "delta": args.delta if args.delta is not None else 0.1, "samples": args.samples}
    todo = [c for c in cells if c["cell"] not in done or done[c["cell"]][1:6] != _cell_key(c)]
    jobs = [(args.task, c, opts) for c in todo]
    manifest = open(manifest_path, "a") if manifest_path else None
    try:
        if args.threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.threads) as pool:
                results = pool.map(_run_cell_packed, jobs)
                for row in results:
                    _record(done, manifest, row)
        else:
            for job in jobs:
                _record(done, manifest, _run_cell_packed(job))
    finally:
        if manifest:
            manifest.close()
    return Table(SWEEP_HEADER, [done[c["cell"]] for c in cells])


def _cell_key(cell: dict) -> list:
    return [cell["graph"], cell["q"], cell["param"], repr(cell["value"]), cell["seed"]]


def _record(done: dict, manifest, row: list) -> None:
    done[row[0]] = row
    if manifest:
        manifest.write(json.dumps({"cell": row[0], "row": row}) + "\n")
        manifest.flush()


# -- parser -------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="root RNG seed")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes (sweep)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output here atomically")
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with RunConfig keys")
    return common


def _model_args(p: argparse.ArgumentParser, need_delta: bool = False) -> None:
    p.add_argument("--graph", help="graph file, or generator spec like cycle:n=6")
    p.add_argument("--q", type=_num)
    p.add_argument("--beta", type=float)
    p.add_argument("--p", type=float, help="random cluster edge weight e^beta - 1")
    p.add_argument("--eps", type=float, default=0.25)
    if need_delta:
        p.add_argument("--delta", type=float)
        p.add_argument("--L", type=float, help="override the truncation budget")
        p.add_argument("--cutoff", type=int, help="largest polymer size in the KP audit")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pottspoly", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a graph file")
    p.add_argument("--kind")
    for name in ("n", "d", "a", "b", "gseed"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--graph-format", choices=["json", "edgelist"], default="json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact", parents=[common], help="exact ln Z of the Potts model")
    _model_args(p)
    p.add_argument("--backend", default="auto", choices=["auto", "colorings", "rc", "multinomial"])
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("rc", parents=[common], help="exact ln Z of the random cluster model")
    _model_args(p)
    p.set_defaults(func=cmd_rc)

    p = sub.add_parser("fptas", parents=[common], help="cluster-expansion approximation of ln Z")
    _model_args(p, need_delta=True)
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.set_defaults(func=cmd_fptas)

    p = sub.add_parser("verify", parents=[common], help="compare fptas against the exact oracle")
    _model_args(p, need_delta=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="draw Potts configurations")
    _model_args(p, need_delta=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--method", choices=["approx", "exact"], default="approx")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("kp-check", parents=[common], help="Kotecky-Preiss audit of a polymer model")
    _model_args(p)
    p.add_argument("--mode", choices=["auto", "high_temp", "low_temp"], default="auto")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--tune", action="store_true", help="rescale f and g before auditing")
    p.set_defaults(func=cmd_kp_check)

    p = sub.add_parser("ursell", parents=[common], help="Ursell coefficient of a small graph")
    p.add_argument("--graph")
    p.add_argument("--edges", help="edge list like 0-1,1-2")
    p.add_argument("--k", type=int, help="vertex count when --edges leaves isolated labels")
    p.set_defaults(func=cmd_ursell)

    p = sub.add_parser("karger", parents=[common], help="count alpha-min-cuts by contraction")
    p.add_argument("--graph")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_karger)

    p = sub.add_parser("enum-sets", parents=[common], help="enumerate rooted connected sets")
    p.add_argument("--graph")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--max-size", type=int)
    p.add_argument("--mode", choices=["vertex_induced", "with_edge_subsets"], default="vertex_induced")
    p.add_argument("--boundary", type=int, help="count sets of size <= n/2 with this boundary size")
    p.set_defaults(func=cmd_enum_sets)

    p = sub.add_parser("experiment", parents=[common], help="recovery or structure experiments")
    _model_args(p)
    p.add_argument("--kind", choices=["recovery", "structure"], default="structure")
    p.add_argument("--mode", choices=["potts_color_classes", "rc_components"], default="potts_color_classes")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sigma", help="colouring like 000111 or 0,0,1")
    p.add_argument("--variant", choices=["basic", "min_component_2"], default="basic")
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sweep", parents=[common], help="parameter grid to CSV")
    p.add_argument("--task", choices=["regime", "exact", "fptas", "potts-structure", "rc-structure"], default="regime")
    p.add_argument("--graph")
    p.add_argument("--graphs", nargs="*")
    p.add_argument("--q", type=_num)
    p.add_argument("--qs", nargs="*", type=_num)
    p.add_argument("--betas", nargs="*", type=float)
    p.add_argument("--ps", nargs="*", type=float)
    p.add_argument("--beta-factors", nargs="*", type=float, help="multiples of the regime threshold")
    p.add_argument("--seeds", type=int, default=1, help="replicates per grid point")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--delta", type=float)
    p.add_argument("--manifest", help="completed-cell log for resuming (default OUT.manifest.jsonl)")
    p.set_defaults(func=cmd_sweep)
    return parser


_GLOBAL_DEFAULTS = {"seed": 0, "threads": 1, "out": None, "format": None, "config": None}


def _apply_config(args, parser: argparse.ArgumentParser) -> RunConfig:
    """Fill unset options from ``--config``; explicit flags win."""
    config_path = getattr(args, "config", None)
    cfg = RunConfig.load(config_path) if config_path else RunConfig()
    values = {f.name: getattr(cfg, f.name) for f in dataclasses.fields(RunConfig)}
    values.update(getattr(cfg, "extra", {}))
    if values.pop("command", None) not in (None, args.command):
        raise ParameterError("config command does not match the command line")
    explicit = _explicit_dests(parser, sys.argv[1:] if args._argv is None else args._argv)
    for key, value in values.items():
        if value is None or key in explicit:
            continue
        if hasattr(args, key) or key in _GLOBAL_DEFAULTS:
            setattr(args, key, value)
    for key, default in _GLOBAL_DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    if args.format is None:
        args.format = "json"
    run = RunConfig(command=args.command, graph=getattr(args, "graph", None), q=getattr(args, "q", None),
                    beta=getattr(args, "beta", None), p=getattr(args, "p", None), eps=getattr(args, "eps", None),
                    delta=getattr(args, "delta", None), seed=args.seed, out=args.out, format=args.format)
    run.validate()
    return run


def _explicit_dests(parser: argparse.ArgumentParser, argv: list[str]) -> set[str]:
    flags = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    return {f[2:].replace("-", "_") for f in flags}


def _error(exc: BaseException, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    report = getattr(exc, "report", None)
    if report is not None and hasattr(report, "to_json"):
        payload["report"] = report.to_json()
    sys.stderr.write(json.dumps(payload, default=_json_default) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        _apply_config(args, parser)
        payload = args.func(args)
        emit(args, payload)
    except RegimeError as exc:
        return _error(exc, EXIT_REGIME)
    except SizeError as exc:
        return _error(exc, EXIT_SIZE)
    except (PottsError, ValueError, KeyError, OSError) as exc:
        return _error(exc, EXIT_ERROR)
    if args.command == "verify" and not getattr(args, "verify_ok", True):
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
