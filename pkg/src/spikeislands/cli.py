"""Command-line entry point tying configs, runs, sweeps and analysis together.

Subcommands: simulate, analyze, sweep, noise-check, validate-config.
Exit codes: 0 ok, 1 runtime failure, 2 usage or config error.

``--config`` accepts either a file path or the name of a shipped experiment
config (see ``spikeislands.configio.builtin_names``).  Relative ``--out``
paths are resolved against the SPIKEISLANDS_OUT environment variable when it
is set, else against the working directory.  Every simulate/sweep run writes
a ``manifest.json`` covering the exact inputs (config text hash, seed, tool
version); re-running an unchanged manifest reproduces the data artifacts
byte for byte (wall-clock timestamps appear only in ``meta.json``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_BIN_S,
    DEFAULT_GAP_FACTOR,
    bin_events,
    block_means,
    histogram,
    isi,
    iti,
    pearson_matrix,
    threshold_sweep,
    trains,
)
from .configio import ConfigSyntaxError, builtin_names, load_builtin, parse_document
from .engine import SimConfig, SimulationError, derive_seed, run
from .io import (
    read_events_csv,
    read_traces_csv,
    write_histogram_csv,
    write_matrix_csv,
    write_psd_csv,
    write_spikes_csv,
    write_traces_csv,
)
from .noise import NoiseSpec, density_for_rms, generate, psd_estimate
from .topology import TopologyError, build_ring

SWEEP_AXES = ("noise-density", "links", "fanout", "multiplicity")


class CliError(Exception):
    """Usage or config error; maps to exit code 2."""


def _out_root() -> Path:
    root = os.environ.get("SPIKEISLANDS_OUT")
    return Path(root) if root else Path.cwd()


def _resolve_out(path_str: str) -> Path:
    p = Path(path_str)
    return p if p.is_absolute() else _out_root() / p


def _load_config(spec_arg: str) -> tuple[str, str]:
    """Return (config_text, source_label) for a path or built-in name."""
    p = Path(spec_arg)
    if p.is_file():
        return p.read_text(encoding="utf-8"), str(p)
    if spec_arg in builtin_names():
        return load_builtin(spec_arg), f"builtin:{spec_arg}"
    raise CliError(
        f"config {spec_arg!r} is neither a file nor a built-in name {builtin_names()}"
    )


def _sim_from_args(args, hints: dict) -> SimConfig:
    duration = args.duration if args.duration is not None else hints.get("duration")
    if duration is None:
        raise CliError("no duration: pass --duration or add a 'sim duration=...' line to the config")
    dt = args.dt if args.dt is not None else hints.get("dt", 1e-8)
    seed = args.seed if args.seed is not None else hints.get("seed", 0)
    traces = "all" if getattr(args, "traces", False) else None
    decim = getattr(args, "trace_decimation", 10)
    return SimConfig(
        duration=duration, dt=dt, master_seed=seed, record_traces=traces, trace_decimation=decim
    )


def _write_manifest(out_dir: Path, config_text: str, source: str, sim: SimConfig, extra: dict | None = None) -> None:
    # the content hash covers everything that determines the data artifacts:
    # config text, seed, run parameters, and the tool version
    stamp = json.dumps(
        {
            "config": config_text,
            "seed": sim.master_seed,
            "duration": sim.duration,
            "dt": sim.dt,
            "version": __version__,
            "extra": extra or {},
        },
        sort_keys=True,
    )
    manifest = {
        "tool": "spikeislands",
        "version": __version__,
        "config_source": source,
        "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        "content_hash": hashlib.sha256(stamp.encode()).hexdigest(),
        "master_seed": sim.master_seed,
        "duration": sim.duration,
        "dt": sim.dt,
        "steps": ["simulate"] + (["analyze"] if extra and extra.get("analyze") else []),
    }
    if extra:
        manifest.update(extra)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _write_run(out_dir: Path, record, write_traces: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_spikes_csv(record, out_dir / "spikes.csv")
    if write_traces and record.traces is not None:
        write_traces_csv(record.traces, out_dir / "traces.csv")
    meta = dict(record.meta)
    meta["created_utc"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    (out_dir / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def cmd_simulate(args) -> int:
    config_text, source = _load_config(args.config)
    network, hints = parse_document(config_text)
    sim = _sim_from_args(args, hints)
    record = run(network, sim)
    out_dir = _resolve_out(args.out)
    _write_run(out_dir, record, write_traces=bool(args.traces))
    _write_manifest(out_dir, config_text, source, sim)
    print(f"wrote {out_dir / 'spikes.csv'} ({record.total_spikes()} spikes)")
    return 0


def cmd_validate_config(args) -> int:
    config_text, source = _load_config(args.config)
    network, hints = parse_document(config_text)
    n_edges = sum(len(isl.crossbar) for isl in network.islands)
    print(
        f"ok: {source}: {len(network.islands)} islands, "
        f"{network.n_neurons_total} neurons, {n_edges} crossbar edges, "
        f"{len(network.links)} inter-island links"
        + (f", sim hints {hints}" if hints else "")
    )
    return 0


def _load_events(path: str):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"spike file not found: {path}")
    return read_events_csv(p)


def cmd_analyze(args) -> int:
    out_path = _resolve_out(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    if args.threshold_sweep is not None:
        if not args.traces:
            raise CliError("--threshold-sweep needs --traces traces.csv")
        thresholds = [float(x) for x in args.threshold_sweep.split(",") if x.strip()]
        if not thresholds:
            raise CliError("--threshold-sweep needs a non-empty threshold list")
        t, by_id = read_traces_csv(args.traces)
        if len(t) < 2:
            print("warning: empty traces file; writing empty output", file=sys.stderr)
            out_path.write_text("threshold_v,count\n")
            return 0
        dt = float(t[1] - t[0])
        totals = np.zeros(len(thresholds), dtype=int)
        for v in by_id.values():
            for i, (_, count) in enumerate(threshold_sweep(v, dt, thresholds)):
                totals[i] += count
        lines = ["threshold_v,count"] + [f"{th:g},{c}" for th, c in zip(thresholds, totals)]
        out_path.write_text("\n".join(lines) + "\n")
        print(f"wrote {out_path}")
        return 0

    events = _load_events(args.spikes)
    if not events or all(len(e) == 0 for e in events):
        print("warning: no events in spike file; writing empty output", file=sys.stderr)
        out_path.write_text("")
        return 0

    if args.isi or args.iti:
        values = []
        for e in events:
            if args.isi:
                values.append(isi(e))
            else:
                values.append(iti(trains(e, gap_factor=args.gap_factor)))
        pooled = np.concatenate([v for v in values if len(v)]) if any(len(v) for v in values) else np.empty(0)
        if pooled.size == 0:
            print("warning: no intervals; writing empty output", file=sys.stderr)
            out_path.write_text("bin_left_seconds,count\n")
            return 0
        edges, counts = histogram(pooled, args.hist_bin)
        write_histogram_csv(edges, counts, out_path)
        print(f"wrote {out_path} ({pooled.size} intervals)")
        return 0

    t_end = max(e.times[-1] for e in events if len(e)) + args.bin
    binned = [bin_events(e, args.bin, t_end) for e in events]
    matrix = pearson_matrix(binned, labels=[e.source_id for e in events], bin_width=args.bin)
    write_matrix_csv(matrix, out_path)
    print(f"wrote {out_path} ({matrix.n}x{matrix.n})")
    return 0


def _sweep_network(config_text: str, axis: str, value: float, args):
    network, hints = parse_document(config_text)
    if axis == "noise-density":
        noises = tuple(replace(ns, density=float(value)) for ns in network.noise)
        network = replace(network, noise=noises)
    else:
        network = replace(network, links=())
        ring = {
            "links": args.ring_links,
            "fanout": args.ring_fanout,
            "multiplicity": args.ring_multiplicity,
        }
        ring[{"links": "links", "fanout": "fanout", "multiplicity": "multiplicity"}[axis]] = int(value)
        if ring["links"] > 0:
            network = build_ring(
                network,
                links_per_pair=ring["links"],
                fanout=ring["fanout"],
                multiplicity=ring["multiplicity"],
                seed=args.ring_seed,
            )
    return network, hints


def _sweep_one(job) -> dict:
    """One sweep run; module-level so it pickles for multiprocessing."""
    config_text, axis, value, run_index, args_ns, out_dir = job
    network, hints = parse_document(config_text)  # for hints only
    network, _ = _sweep_network(config_text, axis, value, args_ns)
    duration = args_ns.duration if args_ns.duration is not None else hints.get("duration")
    dt = args_ns.dt if args_ns.dt is not None else hints.get("dt", 1e-8)
    base_seed = args_ns.seed if args_ns.seed is not None else hints.get("seed", 0)
    sim = SimConfig(duration=duration, dt=dt, master_seed=derive_seed(base_seed, run_index))
    record = run(network, sim)
    _write_run(Path(out_dir), record, write_traces=False)

    isis = np.concatenate([np.diff(t) for t in record.times if len(t) >= 2] or [np.empty(0)])
    binned = [bin_events(_ev(i, t), DEFAULT_BIN_S, record.duration) for i, t in enumerate(record.times)]
    matrix = pearson_matrix(binned)
    _, cross = block_means(matrix, record.island_of)
    return {
        "value": value,
        "total_spikes": record.total_spikes(),
        "mean_isi_seconds": float(np.mean(isis)) if isis.size else float("nan"),
        "mean_cross_island_rho": cross,
    }


def _ev(i, t):
    from .analysis import EventSeries

    return EventSeries(source_id=i, times=t)


def cmd_sweep(args) -> int:
    if args.axis not in SWEEP_AXES:
        raise CliError(f"unknown sweep axis {args.axis!r}; choose from {SWEEP_AXES}")
    values = [float(x) for x in args.values.split(",") if x.strip()]
    if not values:
        raise CliError("empty sweep value list")
    config_text, source = _load_config(args.config)
    parse_document(config_text)  # validate before launching workers

    out_dir = _resolve_out(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (config_text, args.axis, v, i, args, str(out_dir / f"{args.axis}={v:g}"))
        for i, v in enumerate(values)
    ]
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            rows = pool.map(_sweep_one, jobs)
    else:
        rows = [_sweep_one(j) for j in jobs]

    lines = ["value,total_spikes,mean_isi_seconds,mean_cross_island_rho"]
    for r in rows:
        rho = "" if np.isnan(r["mean_cross_island_rho"]) else f"{r['mean_cross_island_rho']:.6g}"
        mi = "" if np.isnan(r["mean_isi_seconds"]) else f"{r['mean_isi_seconds']:.9g}"
        lines.append(f"{r['value']:g},{r['total_spikes']},{mi},{rho}")
    (out_dir / "summary.csv").write_text("\n".join(lines) + "\n")

    base_seed = args.seed if args.seed is not None else 0
    sim_stub = SimConfig(duration=1.0, dt=0.1, master_seed=base_seed)
    _write_manifest(
        out_dir,
        config_text,
        source,
        sim_stub,
        extra={"sweep_axis": args.axis, "sweep_values": values, "analyze": True},
    )
    print(f"wrote {out_dir / 'summary.csv'} ({len(values)} runs)")
    return 0


def cmd_noise_check(args) -> int:
    band = tuple(float(x) for x in args.band.split(":"))
    if len(band) != 2:
        raise CliError("--band must be lo:hi")
    if args.rms is not None:
        density = density_for_rms(args.rms, band)
    elif args.density is not None:
        density = args.density
    else:
        raise CliError("pass --density or --rms")
    acc = None
    freqs = None
    for k in range(args.seeds):
        spec = NoiseSpec(kind=args.kind, density=density, band=band, seed=args.seed or 0, stream_id=k)
        series = generate(spec, args.n, args.dt)
        freqs, psd = psd_estimate(series, args.dt, args.segments)
        acc = psd if acc is None else acc + psd
    acc /= args.seeds
    out_path = _resolve_out(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_psd_csv(freqs, acc, out_path)
    print(f"wrote {out_path} ({args.seeds}-seed averaged periodogram)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikeislands",
        description="Simulate noise-activated spiking-neuron islands and analyze firing correlations.",
    )
    parser.add_argument("--version", action="version", version=f"spikeislands {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a network config, write spikes/meta/manifest")
    p.add_argument("--config", required=True, help="config path or built-in name")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    p.add_argument("--duration", type=float, default=None, help="seconds (overrides config)")
    p.add_argument("--dt", type=float, default=None, help="time step, seconds (overrides config)")
    p.add_argument("--traces", action="store_true", help="record decimated membrane traces")
    p.add_argument("--trace-decimation", type=int, default=10,
                   help="trace sample stride (use 1 for full-rate traces, e.g. for threshold sweeps)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="statistics over a spikes.csv (or traces.csv)")
    p.add_argument("--spikes", help="spike CSV (neuron_id,t_seconds)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--bin", type=float, default=DEFAULT_BIN_S, help="bin width for the correlation matrix, s")
    p.add_argument("--isi", action="store_true", help="emit pooled ISI histogram instead of a matrix")
    p.add_argument("--iti", action="store_true", help="emit pooled ITI histogram instead of a matrix")
    p.add_argument("--gap-factor", type=float, default=DEFAULT_GAP_FACTOR, help="train split factor for --iti")
    p.add_argument("--hist-bin", type=float, default=1e-6, help="histogram bin width, s")
    p.add_argument("--threshold-sweep", default=None,
                   help="comma list of thresholds (V); needs --traces (record them full-rate: "
                        "simulate --traces --trace-decimation 1)")
    p.add_argument("--traces", default=None, help="traces CSV for --threshold-sweep")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="one run per value along an axis, with summary.csv")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", required=True, help="|".join(SWEEP_AXES))
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    p.add_argument("--ring-links", type=int, default=8, help="base ring links when sweeping other axes")
    p.add_argument("--ring-fanout", type=int, default=1)
    p.add_argument("--ring-multiplicity", type=int, default=1)
    p.add_argument("--ring-seed", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("noise-check", help="emit averaged-periodogram PSD CSV for a noise source")
    p.add_argument("--kind", choices=("white", "pink"), default="white")
    p.add_argument("--density", type=float, default=None, help="A/sqrt(Hz)")
    p.add_argument("--rms", type=float, default=None, help="in-band rms, A")
    p.add_argument("--band", default="10:5e6", help="lo:hi in Hz")
    p.add_argument("--dt", type=float, default=1e-6)
    p.add_argument("--n", type=int, default=1 << 16, help="samples per seed")
    p.add_argument("--seeds", type=int, default=20, help="periodograms to average")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--segments", type=int, default=8, help="Welch segments")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_noise_check)

    p = sub.add_parser("validate-config", help="parse and validate a config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigSyntaxError, TopologyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimulationError, ValueError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
