"""Command-line front end.

Five verbs: channel-inspect, capacity, zero-error, repeater-rate, and
repeater-sim. Results are emitted as CSV (stable column order) or JSON
(sorted keys) to stdout or --out. Exit codes: 0 success, 1 solver
failure, 2 invalid arguments or parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from . import capacity as cap
from . import channels as ch
from . import repeater as rep
from . import zero_error as ze
from .errors import InvalidParameter, SolverError, ValidationError

CHANNEL_KINDS = (
    "identity",
    "bit_flip",
    "phase_flip",
    "bit_phase_flip",
    "dephasing",
    "depolarizing",
    "amplitude_damping",
    "erasure",
    "phase_erasure",
    "mixed_erasure",
    "measure_prepare",
    "pancake",
)

CAPACITY_COLUMNS = ("kind", "param", "chi", "C_hsw", "Q1", "C_E", "P1", "r_star")
RATE_COLUMNS = ("F0", "P0", "n", "Z_n", "R_n", "R_approx")
ZERO_ERROR_COLUMNS = ("graph", "n", "K", "rate", "witness")
SIM_COLUMNS = ("trial", "seed", "outcome", "rounds", "raw_pairs", "final_fidelity")

_SWEEP_PARAM = {"amplitude_damping": "gamma", "phase_erasure": "q"}


def _parse_distance(text: str) -> float:
    """Meters, or kilometers with a km suffix (e.g. '20km')."""
    text = text.strip().lower()
    if text.endswith("km"):
        return float(text[:-2]) * 1000.0
    if text.endswith("m"):
        return float(text[:-1])
    return float(text)


def _parse_sweep(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameter(f"sweep {text!r} must look like start:end:step")
    start, end, step = (float(x) for x in parts)
    if step <= 0.0:
        raise InvalidParameter(f"sweep step {step} must be positive")
    if start > end:
        raise InvalidParameter(f"sweep start {start} exceeds end {end}")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > end + 1e-9 * step:
            break
        values.append(round(v, 12))
        k += 1
    return values


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _channel_params(args) -> dict:
    params = {}
    for name in ("p", "gamma", "q", "d"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    return params


def _build_channel(args) -> ch.QuantumChannel:
    if getattr(args, "channel_file", None):
        with open(args.channel_file, "r", encoding="utf-8") as handle:
            return ch.channel_from_json(json.load(handle))
    if getattr(args, "kind", None):
        return ch.make_channel(args.kind, **_channel_params(args))
    raise InvalidParameter("give --kind or --channel-file")


def _optimizer_config(args) -> cap.OptimizerConfig:
    return cap.OptimizerConfig(seed=args.seed)


def _capacity_report_dict(report: cap.CapacityReport) -> dict:
    data = {
        "channel_label": report.channel_label,
        "notes": list(report.notes),
    }
    for name in ("chi", "C_hsw", "Q1", "Q1_raw", "C_E", "P1", "r_star", "S_min"):
        value = getattr(report, name)
        if value is not None:
            data[name] = float(value)
    if report.optimizer is not None:
        data["optimizer"] = {
            "iterations": report.optimizer.iterations,
            "restarts": report.optimizer.restarts,
            "achieved_tolerance": report.optimizer.achieved_tolerance,
        }
    if report.optimal_ensemble is not None:
        ens = report.optimal_ensemble
        data["optimal_ensemble"] = {
            "weights": [float(w) for w in ens.weights],
            "states": [rho.to_json() for rho in ens.states],
        }
    return data


def _cmd_channel_inspect(args) -> str:
    channel = _build_channel(args)
    info: dict = {
        "label": channel.label,
        "kind": channel.kind,
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "has_kraus": channel.kraus is not None,
    }
    if channel.kraus is not None:
        report = ch.is_cptp(channel)
        info["cptp"] = {
            "trace_preserving": report.trace_preserving,
            "completely_positive": report.completely_positive,
            "completeness_residual": report.completeness_residual,
            "choi_min_eigenvalue": report.choi_min_eigenvalue,
        }
        info["unital"] = ch.is_unital(channel)
        if bool(report):
            deg = ch.is_degradable(channel)
            info["degradable"] = {
                "status": deg.status,
                "condition_number": deg.condition_number,
                "residual": deg.residual,
            }
    if channel.dim_in == 2 and channel.dim_out == 2:
        aff = ch.affine_representation(channel)
        info["affine"] = {
            "A": [[float(x) for x in row] for row in aff.A],
            "b": [float(x) for x in aff.b],
        }
        if channel.kraus is not None and bool(ch.is_cptp(channel)):
            info["entanglement_breaking"] = ch.is_entanglement_breaking(channel)
            info["min_output_entropy"] = float(ch.min_output_entropy(channel))
    else:
        cm = ch.choi(channel)
        info["choi_min_eigenvalue"] = cm.min_eigenvalue
    if args.format == "json":
        return _json_text(info)
    flat = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}.{key}" if prefix else key, value[key])
        else:
            flat.append((prefix, value))

    walk("", info)
    return _csv_text(("field", "value"), flat)


def _capacity_targets(args):
    """Yield (param_value, channel) pairs for a single point or a sweep."""
    if args.channel_file:
        yield None, _build_channel(args)
        return
    if not args.kind:
        raise InvalidParameter("give --kind or --channel-file")
    name = _SWEEP_PARAM.get(args.kind, "p")
    if args.sweep:
        base = {k: v for k, v in _channel_params(args).items() if k == "d"}
        for value in _parse_sweep(args.sweep):
            yield value, ch.make_channel(args.kind, **base, **{name: value})
    else:
        params = _channel_params(args)
        yield params.get(name), ch.make_channel(args.kind, **params)


def _cmd_capacity(args) -> str:
    measures = tuple(args.measure.split(","))
    cfg = _optimizer_config(args)
    rows = []
    reports = []
    for value, channel in _capacity_targets(args):
        report = cap.full_report(channel, cfg, measures)
        data = _capacity_report_dict(report)
        if value is not None:
            data["param"] = value
        reports.append(data)
        rows.append(
            (
                channel.kind,
                value,
                data.get("chi"),
                data.get("C_hsw"),
                data.get("Q1"),
                data.get("C_E"),
                data.get("P1"),
                data.get("r_star"),
            )
        )
    if args.format == "json":
        return _json_text(reports)
    return _csv_text(CAPACITY_COLUMNS, rows)


def _cmd_zero_error(args) -> str:
    channel = None
    if args.graph == "pentagon":
        graph = ze.pentagon_graph()
        label = "pentagon"
    elif args.graph:
        with open(args.graph, "r", encoding="utf-8") as handle:
            graph = ze.graph_from_json(json.load(handle))
        label = args.graph
    elif args.kind or args.channel_file:
        channel = _build_channel(args)
        graph = ze.confusability_graph(channel)
        label = channel.label
    else:
        raise InvalidParameter("give --graph, --kind, or --channel-file")

    hsw_upper = None
    if channel is None and (args.kind or args.channel_file):
        channel = _build_channel(args)
    if channel is not None and channel.kraus is not None:
        hsw_upper = cap.hsw_numeric(channel, _optimizer_config(args)).C_hsw

    report = ze.zero_error_lower_bound(graph, args.uses, hsw_upper=hsw_upper)
    data = {
        "graph": label,
        "vertices": graph.vertex_count,
        "edges": graph.edge_count,
        "n": report.n,
        "K": report.K,
        "rate": report.rate,
        "witness": list(report.witness),
        "notes": list(report.notes),
    }
    if hsw_upper is not None:
        data["hsw_upper"] = float(hsw_upper)
    if args.format == "json":
        return _json_text(data)
    row = (label, report.n, report.K, report.rate, ";".join(report.witness))
    return _csv_text(ZERO_ERROR_COLUMNS, [row])


def _repeater_config(args, p0: float) -> rep.RepeaterConfig:
    l0 = _parse_distance(args.l0)
    return rep.RepeaterConfig(
        L=l0 * args.segments,
        segments=args.segments,
        P0=p0,
        eta=args.eta,
        F0=args.f0,
    )


def _cmd_repeater_rate(args) -> str:
    values = _parse_sweep(args.sweep) if args.sweep else [args.p0]
    rows = []
    dicts = []
    for p0 in values:
        cfg = _repeater_config(args, p0)
        report = rep.generation_rate(cfg)
        rows.append(
            (cfg.F0, cfg.P0, cfg.levels, report.Z_n, report.R_n, report.R_n_approx)
        )
        dicts.append(
            {
                "F0": cfg.F0,
                "P0": cfg.P0,
                "n": cfg.levels,
                "T0": report.T0,
                "Z_n": report.Z_n,
                "R_n": report.R_n,
                "R_approx": report.R_n_approx,
            }
        )
    if args.format == "json":
        return _json_text(dicts)
    return _csv_text(RATE_COLUMNS, rows)


def _cmd_repeater_sim(args) -> str:
    cfg = _repeater_config(args, args.p0)
    traces = []
    for trial in range(args.trials):
        traces.append(
            rep.simulate_schedule(
                args.policy,
                args.target,
                cfg,
                seed=args.seed + trial,
                force_success=args.force_success,
                bands=args.bands,
            )
        )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as handle:
            handle.write(rep.trace_events_jsonl(traces[0]))
    if args.format == "json":
        return _json_text([rep.trace_to_json(t) for t in traces])
    rows = [
        (
            k,
            t.seed,
            t.outcome,
            t.rounds,
            t.raw_pairs_consumed,
            t.final_fidelity,
        )
        for k, t in enumerate(traces)
    ]
    return _csv_text(SIM_COLUMNS, rows)


def _add_channel_options(sub, with_sweep: bool) -> None:
    sub.add_argument("--kind", choices=CHANNEL_KINDS)
    sub.add_argument("--p", type=float)
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--q", type=float)
    sub.add_argument("--d", type=int)
    sub.add_argument("--channel-file", metavar="JSON")
    if with_sweep:
        sub.add_argument("--sweep", metavar="START:END:STEP")


def _add_output_options(sub, default_format: str) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default=default_format)
    sub.add_argument("--out", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchan",
        description="Quantum channel toolbox: inspection, capacities, "
        "zero-error codes, repeater rates.",
    )
    subs = parser.add_subparsers(dest="verb", required=True)

    inspect = subs.add_parser("channel-inspect", help="validate and classify a channel")
    _add_channel_options(inspect, with_sweep=False)
    _add_output_options(inspect, "json")
    inspect.set_defaults(func=_cmd_channel_inspect)

    capacity = subs.add_parser("capacity", help="run capacity solvers, single point or sweep")
    _add_channel_options(capacity, with_sweep=True)
    capacity.add_argument(
        "--measure",
        default="hsw",
        help="comma-separated subset of hsw,hsw-geo,qcap,ea,private,minent or all",
    )
    capacity.add_argument("--seed", type=int, default=0)
    _add_output_options(capacity, "csv")
    capacity.set_defaults(func=_cmd_capacity)

    zero = subs.add_parser("zero-error", help="zero-error rate lower bounds")
    zero.add_argument("--graph", help="'pentagon' or a graph JSON path")
    _add_channel_options(zero, with_sweep=False)
    zero.add_argument("--uses", type=int, default=1)
    zero.add_argument("--seed", type=int, default=0)
    _add_output_options(zero, "csv")
    zero.set_defaults(func=_cmd_zero_error)

    rate = subs.add_parser("repeater-rate", help="expected rounds and pair rates")
    rate.add_argument("--segments", type=int, required=True)
    rate.add_argument("--l0", required=True, help="segment length (meters, or e.g. 20km)")
    rate.add_argument("--p0", type=float, default=0.1)
    rate.add_argument("--eta", type=float, default=0.5)
    rate.add_argument("--f0", type=float, default=0.9)
    rate.add_argument("--sweep", metavar="START:END:STEP", help="sweep P0")
    _add_output_options(rate, "csv")
    rate.set_defaults(func=_cmd_repeater_rate)

    sim = subs.add_parser("repeater-sim", help="simulate a purification schedule")
    sim.add_argument("--policy", choices=rep.POLICIES, required=True)
    sim.add_argument("--target", type=float, required=True)
    sim.add_argument("--segments", type=int, default=1)
    sim.add_argument("--l0", default="20km")
    sim.add_argument("--p0", type=float, default=0.1)
    sim.add_argument("--eta", type=float, default=0.5)
    sim.add_argument("--f0", type=float, default=0.9)
    sim.add_argument("--trials", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--force-success", action="store_true")
    sim.add_argument("--bands", type=int, default=8)
    sim.add_argument("--trace", metavar="PATH", help="write events of trial 0 as JSON lines")
    _add_output_options(sim, "csv")
    sim.set_defaults(func=_cmd_repeater_sim)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _emit(text, args.out)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SolverError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
