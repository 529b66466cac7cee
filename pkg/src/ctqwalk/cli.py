"""Command-line interface.

Subcommands mirror the experiment harness: seq (sequence generation and
metrics), baseline, sweep, series, histogram, parrondo.  Option precedence
is defaults < --preset < --config file < explicit flags.  The config file
is flat ``key = value`` text whose keys are the ExperimentConfig fields;
lists (protocols, tau_grid) are comma-separated.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields, replace

from . import harness
from .hamiltonian import LatticeModel, build_h, dump_triplets
from .harness import ExperimentConfig, classify_parrondo, preset
from .propagation import run_protocol
from .sequences import (
    SequenceKind,
    autocorrelation,
    binary_persistence,
    generate,
    relative_persistence,
)

_LIST_FIELDS = {"protocols", "tau_grid"}
_INT_FIELDS = {
    "defect_site", "tau_points", "random_ensemble_size", "histogram_ensemble_size",
    "histogram_bins", "base_seed", "random_tau_stride", "n_sites", "periodic_start",
    "threads",
}
_FLOAT_FIELDS = {
    "gamma", "epsilon", "beta1", "beta2", "t_max", "tau", "tau_min", "tau_max",
    "sample_every",
}


def parse_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment; unknown keys rejected."""
    known = {f.name for f in fields(ExperimentConfig)}
    out: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = _convert(key, value)
    return out


def _convert(key: str, value: str):
    if key in _LIST_FIELDS:
        items = [v.strip() for v in value.split(",") if v.strip()]
        return tuple(float(v) for v in items) if key == "tau_grid" else tuple(items)
    if key in _INT_FIELDS:
        return int(value)
    if key in _FLOAT_FIELDS:
        return float(value)
    return value


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = preset(args.preset) if args.preset else ExperimentConfig()
    if args.config:
        config = replace(config, **parse_config_file(args.config))
    overrides = {}
    for name in ("out_dir", "threads", "t_max", "tau"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if overrides:
        config = replace(config, **overrides)
    return config


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--preset", choices=["desk", "paper"], help="parameter profile")
    parser.add_argument("--out", dest="out_dir", help="output directory")
    parser.add_argument("--threads", type=int, help="worker processes for independent runs")
    parser.add_argument("--t-max", dest="t_max", type=float, help="evolution time in 1/gamma")


def _series_to_stdout(vals: dict):
    for key, value in vals.items():
        print(f"{key} = {value}")


def cmd_seq(args) -> int:
    kind = SequenceKind(args.kind)
    seed = args.seed if kind is SequenceKind.RANDOM else None
    if kind is SequenceKind.RANDOM and seed is None:
        print("seq: --seed is required for --kind rd", file=sys.stderr)
        return 2
    seq = generate(kind, args.length, seed=seed, periodic_start=args.periodic_start)
    if not args.metrics:
        print(seq.to_string())
        return 0
    max_lag, max_order = args.metrics
    seed_col = "" if seq.seed is None else str(seq.seed)
    print("kind,seed,k_or_m,metric,value")
    for k in range(1, max_lag + 1):
        print(f"{kind.value},{seed_col},{k},ac,{autocorrelation(seq, k)!r}")
    for m in range(1, max_order + 1):
        print(f"{kind.value},{seed_col},{m},bp,{binary_persistence(seq, m)!r}")
        print(f"{kind.value},{seed_col},{m},rp,{relative_persistence(seq, m)!r}")
    return 0


def cmd_baseline(args) -> int:
    config = build_config(args)
    watch = harness.StopWatch()
    result = harness.run_baselines(config)
    watch.lap("baselines")
    out = harness.ensure_out_dir(config)
    harness.write_series_csv(os.path.join(out, "baselines.csv"), result.tables())
    harness.write_manifest(
        os.path.join(out, "baseline_manifest.json"), config, {"wall_times": watch.laps}
    )
    s0 = result.free.final().sigma
    _series_to_stdout(
        {
            "sigma0": s0,
            "sigma_b1": result.defect1.final().sigma,
            "sigma_b2": result.defect2.final().sigma,
            "ratio_b1": result.defect1.final().sigma / s0,
            "ratio_b2": result.defect2.final().sigma / s0,
        }
    )
    return 0


def cmd_sweep(args) -> int:
    config = build_config(args)
    watch = harness.StopWatch()
    sweep = harness.run_tau_sweep(config)
    watch.lap("sweep")
    out = harness.ensure_out_dir(config)
    harness.write_sweep_csv(os.path.join(out, "sweep.csv"), sweep)
    harness.write_manifest(
        os.path.join(out, "sweep_manifest.json"),
        config,
        {
            "wall_times": watch.laps,
            "sigma0": sweep.sigma0,
            "tau_star": sweep.tau_star,
            "max_ratio": sweep.max_ratio,
            "window": {k: list(w) if w else None for k, w in sweep.window.items()},
        },
    )
    for code in config.protocols:
        window = sweep.window[code]
        desc = f"window [{window[0]:g}, {window[1]:g}]" if window else "no enhancement"
        print(
            f"{code}: max ratio {sweep.max_ratio[code]:.4f} at tau* = "
            f"{sweep.tau_star[code]:g} ({desc})"
        )
    return 0


def _tau_star_for(args, config) -> dict[str, float]:
    if args.from_sweep:
        curves = harness.read_sweep_curves(args.from_sweep)
        stars = harness.tau_star_from_curves(curves)
        missing = [c for c in config.protocols if c not in stars]
        if missing:
            raise ValueError(f"{args.from_sweep} lacks protocols {missing}")
        return stars
    if args.tau is None:
        raise ValueError("need --tau or --from-sweep")
    return {code: args.tau for code in config.protocols}


def cmd_series(args) -> int:
    config = build_config(args)
    tau_star = _tau_star_for(args, config)
    watch = harness.StopWatch()
    bundle = harness.run_time_series(config, tau_star)
    watch.lap("series")
    out = harness.ensure_out_dir(config)
    tables = [bundle.free] + [bundle.tables[c] for c in config.protocols]
    tables += bundle.random_members
    harness.write_series_csv(os.path.join(out, "series.csv"), tables)
    harness.write_manifest(
        os.path.join(out, "series_manifest.json"),
        config,
        {"wall_times": watch.laps, "tau_star": bundle.tau_star},
    )
    for code in config.protocols:
        final = bundle.tables[code].final()
        print(
            f"{code}: tau*={tau_star[code]:g} sigma({config.t_max:g})={final.sigma:.2f} "
            f"S={final.entropy:.4f} IPR={final.ipr:.1f}"
        )
    return 0


def cmd_histogram(args) -> int:
    config = build_config(args)
    if args.from_sweep:
        curves = harness.read_sweep_curves(args.from_sweep)
        stars = harness.tau_star_from_curves(curves)
        tau = args.tau if args.tau is not None else stars.get("rd")
        if tau is None:
            raise ValueError("sweep file has no random curve; pass --tau")
        refs = {c: t for c, t in stars.items() if c != "rd" and c in config.protocols}
    else:
        if args.tau is None:
            raise ValueError("need --tau or --from-sweep")
        tau, refs = args.tau, {}
    watch = harness.StopWatch()
    hist = harness.run_random_histogram(config, tau, refs)
    watch.lap("histogram")
    out = harness.ensure_out_dir(config)
    harness.write_histogram_csv(os.path.join(out, "histogram.csv"), hist)
    harness.write_histogram_refs_csv(os.path.join(out, "histogram_refs.csv"), hist)
    harness.write_manifest(
        os.path.join(out, "histogram_manifest.json"),
        config,
        {
            "wall_times": watch.laps,
            "tau": tau,
            "sigma0": hist.sigma0,
            "mode_center": hist.mode_center,
            "references": hist.references,
        },
    )
    above_one = sum(1 for r in hist.ratios if r > 1.0)
    print(f"rd tau={tau:g}: {above_one}/{len(hist.ratios)} ratios > 1, "
          f"mode at {hist.mode_center:.4f}")
    for code, (t_ref, ratio) in sorted(hist.references.items()):
        print(f"  reference {code}: tau={t_ref:g} ratio={ratio:.4f}")
    return 0


def cmd_parrondo(args) -> int:
    config = build_config(args)
    watch = harness.StopWatch()
    s0 = harness.sigma_free_final(config)
    lattice = config.lattice()
    b1 = run_protocol(lattice, harness.StaticProtocol(config.beta1), config.t_max,
                      config.t_max, label="b1").final().sigma
    b2 = run_protocol(lattice, harness.StaticProtocol(config.beta2), config.t_max,
                      config.t_max, label="b2").final().sigma
    proto = config.protocol_for(
        args.kind, config.tau, config.base_seed if args.kind == "rd" else None
    )
    switch = run_protocol(lattice, proto, config.t_max, config.t_max).final().sigma
    verdict = classify_parrondo(s0, b1, b2, switch)
    watch.lap("parrondo")
    out = harness.ensure_out_dir(config)
    harness.write_manifest(
        os.path.join(out, "parrondo_manifest.json"),
        config,
        {
            "wall_times": watch.laps,
            "kind": args.kind,
            "sigma0": verdict.sigma0,
            "sigma_b1": verdict.sigma_b1,
            "sigma_b2": verdict.sigma_b2,
            "sigma_switch": verdict.sigma_switch,
            "paradox": verdict.paradox,
        },
    )
    _series_to_stdout(
        {
            "sigma0": verdict.sigma0,
            "sigma_b1": verdict.sigma_b1,
            "sigma_b2": verdict.sigma_b2,
            "sigma_switch": verdict.sigma_switch,
            "paradox": verdict.paradox,
        }
    )
    return 0


def cmd_dump_hamiltonian(args) -> int:
    n = args.n_sites if args.n_sites else 21
    model = LatticeModel(n_sites=n, epsilon=args.epsilon, defect_site=args.defect_site)
    beta = args.beta if args.beta is not None else model.beta1
    print("row,col,value")
    for i, j, v in dump_triplets(build_h(model, beta)):
        print(f"{i},{j},{v!r}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ctqwalk",
        description="Continuous-time quantum walk with switched bond defects",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="generate a control sequence / its metrics")
    p.add_argument("--kind", required=True, choices=[k.value for k in SequenceKind])
    p.add_argument("--length", required=True, type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--periodic-start", type=int, default=1, choices=[0, 1])
    p.add_argument("--metrics", nargs=2, type=int, metavar=("MAX_LAG", "MAX_ORDER"))
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("baseline", help="defect-free and static-defect runs")
    _add_common(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("sweep", help="sigma/sigma0 over the tau grid")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("series", help="time series at per-protocol optimal tau")
    _add_common(p)
    p.add_argument("--tau", type=float, help="one tau for all protocols")
    p.add_argument("--from-sweep", help="sweep.csv to take per-protocol tau* from")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("histogram", help="random-ensemble sigma/sigma0 histogram")
    _add_common(p)
    p.add_argument("--tau", type=float, help="switching interval for the ensemble")
    p.add_argument("--from-sweep", help="sweep.csv to take tau* values from")
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("parrondo", help="baselines + one switching run -> verdict")
    _add_common(p)
    p.add_argument("--kind", default="pe", choices=[k.value for k in SequenceKind])
    p.add_argument("--tau", type=float, help="switching interval")
    p.set_defaults(func=cmd_parrondo)

    p = sub.add_parser("dump-hamiltonian", help="(row, col, value) CSV of H for small N")
    p.add_argument("--n-sites", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--defect-site", type=int, default=0)
    p.set_defaults(func=cmd_dump_hamiltonian)

    if argv is None:
        argv = sys.argv[1:]
    # accept the debug spelling `--dump-hamiltonian` as the subcommand
    argv = ["dump-hamiltonian" if a == "--dump-hamiltonian" else a for a in argv]
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"ctqwalk: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
