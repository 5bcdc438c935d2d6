"""Command-line interface.

Subcommands: link, offload, calibrate, figure, sweep, headline. Output is
stable ``key = value`` lines (or one JSON object with ``--json``); errors
are a single ``error: ...`` line on stderr. Exit codes: 0 success, 1
domain or validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any

from . import __version__
from .core import (calibrate_interference, offload_latency, received_power_direct,
                   received_power_irs, snr, throughput)
from .errors import ConfigError, DomainError, InfeasibleError, IrsMecError
from .experiments import (FIGURE_IDS, headline_csv, headline_report, run_all_figures,
                          run_figure, write_figure_csv, write_headline_csv)
from .fading import FadingSampler, mean_throughput_mc
from .model import ComputeTask
from .scenario import (ANCHOR_BANDWIDTH_HZ, ANCHOR_RATE_BPS, ANCHOR_SEPARATION_M,
                       GAIN_INTERPRETATIONS, IRS_ANCHOR_RATE_BPS, SWEEP_VARIABLES, Scenario,
                       SweepSpec, default_scenario, iter_sweep, load_scenario_file)
from .units import watts_to_dbm

CONFIG_ENV = "IRS_MEC_CONFIG"


# ---------------------------------------------------------------------------
# scenario plumbing

def _parse_set(pair: str) -> tuple[str, Any]:
    if "=" not in pair:
        raise ConfigError(f"--set expects section.key=value, got '{pair}'")
    dotted, raw = pair.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw.strip()
    return dotted.strip(), value


def _load_scenario(args: argparse.Namespace) -> Scenario:
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        sc = load_scenario_file(path, fmt=args.config_format)
    else:
        sc = default_scenario()
    if args.set:
        sc = sc.with_overrides(dict(_parse_set(p) for p in args.set))
    return sc


def _emit(record: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(record))
        return
    for key, value in record.items():
        if isinstance(value, float):
            value = repr(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key} = {value}")


def _link_at(scenario: Scenario, args: argparse.Namespace):
    """Direct and reflected links with any flag overrides applied."""
    overrides: dict[str, Any] = {}
    if args.separation is not None:
        overrides["direct.distance_m"] = args.separation
        overrides["irs.d1_m"] = args.separation / 2.0
        overrides["irs.d2_m"] = args.separation / 2.0
    if args.bandwidth is not None:
        overrides["direct.bandwidth_hz"] = args.bandwidth
        overrides["irs.bandwidth_hz"] = args.bandwidth
    if getattr(args, "tx_power", None) is not None:
        overrides["irs.tx_power_w" if args.irs else "direct.tx_power_w"] = args.tx_power
    if getattr(args, "fading", None) is not None:
        overrides["direct.fading_coeff"] = args.fading
    return scenario.with_overrides(overrides) if overrides else scenario


# ---------------------------------------------------------------------------
# subcommands

def cmd_link(args: argparse.Namespace) -> int:
    sc = _link_at(_load_scenario(args), args)
    env = sc.environment
    if args.irs:
        power = received_power_irs(sc.irs, env)
        bandwidth = sc.irs.bandwidth_hz
    else:
        power = received_power_direct(sc.direct, env)
        bandwidth = sc.direct.bandwidth_hz
    ratio = snr(power, env)
    record: dict[str, Any] = {
        "mode": "irs" if args.irs else "direct",
        "bandwidth_hz": bandwidth,
        "received_power_w": power,
        "snr": ratio,
        "throughput_bps": throughput(bandwidth, ratio),
    }
    if power > 0:
        record["received_power_dbm"] = watts_to_dbm(power)
        record["snr_db"] = 10.0 * math.log10(ratio)
    if args.mc_samples:
        sampler = FadingSampler(seed=args.seed, stream_id=0)
        est = mean_throughput_mc(sc.direct, env, sampler, args.mc_samples)
        record["mc_mean_throughput_bps"] = est.mean_bps
        record["mc_half_width_bps"] = est.half_width_bps
        record["mc_samples"] = est.n_samples
        record["mc_seed"] = args.seed
    _emit(record, args.json)
    return 0


def cmd_offload(args: argparse.Namespace) -> int:
    sc = _link_at(_load_scenario(args), args)
    env = sc.environment
    if args.rate_bps is not None:
        rate = args.rate_bps
    else:
        link_power = (received_power_irs(sc.irs, env) if args.irs
                      else received_power_direct(sc.direct, env))
        bandwidth = sc.irs.bandwidth_hz if args.irs else sc.direct.bandwidth_hz
        rate = throughput(bandwidth, snr(link_power, env))
    task = sc.task(args.data_bytes)
    lat = offload_latency(task, rate, sc.mec)
    _emit({
        "mode": "irs" if args.irs else "direct",
        "data_bytes": task.data_bytes,
        "rate_bps": rate,
        "transmission_s": lat.transmission_s,
        "processing_s": lat.processing_s,
        "total_s": lat.total_s,
        "deadline_s": task.deadline_s,
        "within_deadline": lat.total_s <= task.deadline_s,
    }, args.json)
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    sc = _load_scenario(args)
    anchor = sc.with_overrides({
        "direct.distance_m": args.anchor_separation,
        "direct.bandwidth_hz": args.anchor_bandwidth,
        "irs.bandwidth_hz": args.anchor_bandwidth,
        "irs.d1_m": args.anchor_separation / 2.0,
        "irs.d2_m": args.anchor_separation / 2.0,
    })
    noise = calibrate_interference(anchor.direct, anchor.environment.path_loss_exponent,
                                   args.anchor_rate)

    # Must reproduce the anchor; anything else is an inversion bug.
    check = throughput(anchor.direct.bandwidth_hz,
                       snr(received_power_direct(anchor.direct, anchor.environment),
                           anchor.environment.__class__(
                               interference_power_w=noise,
                               path_loss_exponent=anchor.environment.path_loss_exponent,
                               carrier_frequency_hz=anchor.environment.carrier_frequency_hz)))
    if not math.isclose(check, args.anchor_rate, rel_tol=1e-9):
        raise InfeasibleError(
            f"calibration failed to round-trip: got {check} b/s for anchor {args.anchor_rate}")

    record: dict[str, Any] = {"interference_power_w": noise}
    interpretation = None
    if not args.no_gain_selection:
        errors = {}
        for interp in GAIN_INTERPRETATIONS:
            trial = anchor.with_overrides({
                "environment.interference_power_w": noise,
                "irs.gain_interpretation": interp,
            })
            rate = throughput(trial.irs.bandwidth_hz,
                              snr(received_power_irs(trial.irs, trial.environment),
                                  trial.environment))
            errors[interp] = abs(rate - args.irs_anchor_rate) / args.irs_anchor_rate
        interpretation = min(errors, key=lambda k: errors[k])
        record["gain_interpretation"] = interpretation
        record["gain_fit_error"] = errors[interpretation]

    if args.json:
        _emit(record, True)
        return 0
    print("[environment]")
    print(f"interference_power_w = {noise!r}")
    if interpretation is not None:
        print("")
        print("[irs]")
        print(f'gain_interpretation = "{interpretation}"')
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    sc = _load_scenario(args)
    os.makedirs(args.out, exist_ok=True)
    if args.id == "all":
        written = run_all_figures(sc, args.out)
    else:
        ds = run_figure(int(args.id), sc)
        written = [(ds.figure_id, write_figure_csv(ds, args.out), len(ds.rows))]
    if args.json:
        _emit({"files": [{"figure_id": fid, "path": path, "rows": n}
                         for fid, path, n in written]}, True)
        return 0
    for _, path, n in written:
        print(f"{path} rows={n}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    sc = _load_scenario(args)
    spec = SweepSpec(variable=args.variable, start=args.start, stop=args.stop, step=args.step)
    if args.metric == "local" and args.variable != "data_bytes":
        raise DomainError("metric 'local' only sweeps data_bytes")

    lines = [f"# scenario_fingerprint = {sc.fingerprint}"]
    if args.metric == "throughput":
        lines.append(f"{spec.variable},throughput_noirs_bps,throughput_irs_bps")
        for v, point in iter_sweep(spec, sc):
            env = point.environment
            r_d = throughput(point.direct.bandwidth_hz,
                             snr(received_power_direct(point.direct, env), env))
            r_i = throughput(point.irs.bandwidth_hz,
                             snr(received_power_irs(point.irs, env), env))
            lines.append(f"{v!r},{r_d!r},{r_i!r}")
    elif args.metric == "offload":
        lines.append(f"{spec.variable},latency_noirs_s,latency_irs_s,deadline_s")
        for v, point in iter_sweep(spec, sc):
            env = point.environment
            task = point.task()
            r_d = throughput(point.direct.bandwidth_hz,
                             snr(received_power_direct(point.direct, env), env))
            r_i = throughput(point.irs.bandwidth_hz,
                             snr(received_power_irs(point.irs, env), env))
            t_d = offload_latency(task, r_d, point.mec).total_s
            t_i = offload_latency(task, r_i, point.mec).total_s
            lines.append(f"{v!r},{t_d!r},{t_i!r},{task.deadline_s!r}")
    else:  # local
        lines.append("data_bytes,cpu_hz,latency_s,deadline_s")
        for v, point in iter_sweep(spec, sc):
            task = point.task()
            for cpu in point.ue_cpus:
                bits = task.data_bytes * 8.0
                lat = bits * task.cycles_per_bit / cpu.free_hz
                lines.append(f"{v!r},{cpu.total_hz!r},{lat!r},{task.deadline_s!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"{args.out} rows={len(lines) - 2}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_headline(args: argparse.Namespace) -> int:
    sc = _load_scenario(args)
    report = headline_report(sc)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = write_headline_csv(report, args.out)
        print(f"{path} rows={len(report.rows)}")
        return 0
    if args.json:
        _emit({
            "gain_interpretation": report.gain_interpretation,
            "metrics": [{"metric": m, "model_value": mv, "paper_value": pv}
                        for m, mv, pv in report.rows],
        }, True)
        return 0
    record: dict[str, Any] = {"gain_interpretation": report.gain_interpretation}
    for metric, model, paper in report.rows:
        record[metric] = model
        record[f"{metric}_paper"] = paper
    _emit(record, False)
    return 0


# ---------------------------------------------------------------------------
# parser

def _figure_id(value: str) -> str:
    if value == "all":
        return value
    try:
        fid = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"figure id must be 2..9 or 'all', got '{value}'")
    if fid not in FIGURE_IDS:
        raise argparse.ArgumentTypeError(f"figure id must be 2..9 or 'all', got '{value}'")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help=f"scenario config file (default: ${CONFIG_ENV} or built-in defaults)")
    common.add_argument("--config-format", choices=("toml", "json"), default=None,
                        help="config format (default: by file extension)")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        help="override a scenario key, e.g. --set direct.tx_power_w=3.0")
    common.add_argument("--json", action="store_true", help="emit one JSON object")

    link_geom = argparse.ArgumentParser(add_help=False)
    link_geom.add_argument("--irs", action="store_true",
                           help="use the reflected uplink instead of the direct one")
    link_geom.add_argument("--separation", type=float, metavar="M",
                           help="transmitter-receiver separation in meters "
                                "(reflected path splits it evenly)")
    link_geom.add_argument("--bandwidth", type=float, metavar="HZ", help="uplink bandwidth")

    parser = argparse.ArgumentParser(
        prog="irsmec",
        description="Link-budget and edge-offloading latency simulator for "
                    "IRS-assisted uplinks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", parents=[common, link_geom],
                       help="received power, SNR and throughput for one link")
    p.add_argument("--tx-power", type=float, metavar="W", help="transmit power override")
    p.add_argument("--fading", type=float, metavar="H", help="fading coefficient override")
    p.add_argument("--mc-samples", type=int, default=0, metavar="N",
                   help="also estimate mean throughput over N fading draws")
    p.add_argument("--seed", type=int, default=1, help="fading stream seed")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("offload", parents=[common, link_geom],
                       help="offloading latency breakdown for one task")
    p.add_argument("--data-bytes", type=float, default=None, metavar="B", help="payload size")
    p.add_argument("--rate-bps", type=float, default=None, metavar="R",
                   help="use this uplink rate instead of the link budget")
    p.set_defaults(func=cmd_offload)

    p = sub.add_parser("calibrate", parents=[common],
                       help="interference power (and gain reading) from anchor rates")
    p.add_argument("--anchor-bandwidth", type=float, default=ANCHOR_BANDWIDTH_HZ,
                   metavar="HZ", help="anchor bandwidth (default 1 MHz)")
    p.add_argument("--anchor-separation", type=float, default=ANCHOR_SEPARATION_M,
                   metavar="M", help="anchor separation (default 200 m)")
    p.add_argument("--anchor-rate", type=float, default=ANCHOR_RATE_BPS, metavar="BPS",
                   help="observed direct-link rate at the anchor (default 2.001 Mb/s)")
    p.add_argument("--irs-anchor-rate", type=float, default=IRS_ANCHOR_RATE_BPS,
                   metavar="BPS",
                   help="observed reflected-link rate used to pick the gain reading")
    p.add_argument("--no-gain-selection", action="store_true",
                   help="emit only the interference power")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("figure", parents=[common], help="write figure dataset CSVs")
    p.add_argument("--id", required=True, type=_figure_id, metavar="N|all")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", parents=[common], help="sweep one variable, emit CSV")
    p.add_argument("--variable", required=True, choices=SWEEP_VARIABLES)
    p.add_argument("--start", required=True, type=float)
    p.add_argument("--stop", required=True, type=float)
    p.add_argument("--step", required=True, type=float)
    p.add_argument("--metric", choices=("throughput", "offload", "local"), default="offload")
    p.add_argument("--out", metavar="FILE", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("headline", parents=[common],
                       help="model values next to the quoted claims")
    p.add_argument("--out", metavar="DIR", help="write headline.csv into DIR")
    p.set_defaults(func=cmd_headline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IrsMecError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
