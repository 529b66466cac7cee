"""Experiment orchestration: baselines, tau sweeps, time series, ensembles.

Every experiment is a pure function of an ExperimentConfig, so rerunning a
config reproduces all numbers.  Sweep points and ensemble members are
independent jobs over immutable inputs; they can run serially or on a
process pool and are reassembled by job key, so the execution order never
affects the output.  The defect-free normalization sigma_0 is always
produced with the same lattice and sampling settings as the runs it
divides.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .hamiltonian import LatticeModel
from .propagation import SeriesTable, StaticProtocol, SwitchingProtocol, run_protocol
from .observables import ObservableRecord
from .sequences import RNG_NAME, SequenceKind, generate

PROTOCOL_CODES = ("pe", "fb", "tm", "rs", "rd")


@dataclass(frozen=True)
class ExperimentConfig:
    """Paper-default physical parameters plus run/aggregation knobs."""

    gamma: float = 1.0
    epsilon: float = 0.0
    beta1: float = -2.5
    beta2: float = -3.0
    defect_site: int = 0
    t_max: float = 2000.0
    tau: float = 1.0
    tau_min: float = 0.5
    tau_max: float = 100.0
    tau_points: int = 60
    tau_grid: tuple[float, ...] | None = None
    protocols: tuple[str, ...] = PROTOCOL_CODES
    random_ensemble_size: int = 50
    histogram_ensemble_size: int = 100
    histogram_bins: int = 20
    base_seed: int = 12345
    random_tau_stride: int = 3
    n_sites: int | None = None
    sample_every: float | None = None
    periodic_start: int = 1
    threads: int = 1
    out_dir: str = "runs"

    def __post_init__(self):
        for code in self.protocols:
            if code not in PROTOCOL_CODES:
                raise ValueError(f"unknown protocol code {code!r}")
        if self.tau_grid is not None:
            grid = tuple(self.tau_grid)
            if any(t <= 0 for t in grid) or any(
                b <= a for a, b in zip(grid, grid[1:])
            ):
                raise ValueError("tau grid must be positive and strictly increasing")

    def lattice(self) -> LatticeModel:
        kwargs = dict(
            epsilon=self.epsilon,
            gamma=self.gamma,
            defect_site=self.defect_site,
            beta1=self.beta1,
            beta2=self.beta2,
        )
        if self.n_sites is not None:
            return LatticeModel(n_sites=self.n_sites, **kwargs)
        return LatticeModel.sized_for(self.t_max, **kwargs)

    def grid(self) -> tuple[float, ...]:
        if self.tau_grid is not None:
            return tuple(float(t) for t in self.tau_grid)
        return tuple(float(t) for t in np.geomspace(self.tau_min, self.tau_max, self.tau_points))

    def random_grid(self) -> tuple[float, ...]:
        """Strided subset for the random protocol (its curve carries fewer
        points because each one costs a whole ensemble); always keeps the
        first and last grid point."""
        grid = self.grid()
        sub = list(grid[:: max(1, self.random_tau_stride)])
        if sub[-1] != grid[-1]:
            sub.append(grid[-1])
        return tuple(sub)

    def protocol_for(self, code: str, tau: float, seed: int | None = None) -> SwitchingProtocol:
        n_needed = int(np.ceil(self.t_max / tau - 1e-9))
        seq = generate(
            SequenceKind(code),
            n_needed,
            seed=seed,
            periodic_start=self.periodic_start,
        )
        return SwitchingProtocol(seq, tau, beta1=self.beta1, beta2=self.beta2)


@dataclass(frozen=True)
class ParrondoVerdict:
    """The three strict inequalities behind slow+slow -> fast."""

    sigma0: float
    sigma_b1: float
    sigma_b2: float
    sigma_switch: float

    @property
    def paradox(self) -> bool:
        return (
            self.sigma_b1 < self.sigma0
            and self.sigma_b2 < self.sigma0
            and self.sigma_switch > self.sigma0
        )


@dataclass
class BaselineResult:
    free: SeriesTable
    defect1: SeriesTable
    defect2: SeriesTable

    def tables(self) -> list[SeriesTable]:
        return [self.free, self.defect1, self.defect2]


@dataclass
class SweepResult:
    """Per-protocol sigma/sigma0 curves over the tau grid at fixed t_max."""

    t_max: float
    sigma0: float
    curves: dict[str, list[tuple[float, float]]]
    random_detail: list[tuple[float, int, float]] = field(default_factory=list)
    tau_star: dict[str, float] = field(default_factory=dict)
    max_ratio: dict[str, float] = field(default_factory=dict)
    window: dict[str, tuple[float, float] | None] = field(default_factory=dict)

    def finalize(self):
        """Argmax (smallest tau on ties) and the maximal contiguous
        ratio > 1 block around it, per protocol."""
        for code, curve in self.curves.items():
            ratios = [r for _, r in curve]
            taus = [t for t, _ in curve]
            best = max(ratios)
            i_best = ratios.index(best)
            self.tau_star[code] = taus[i_best]
            self.max_ratio[code] = best
            if best <= 1.0:
                self.window[code] = None
                continue
            lo = i_best
            while lo > 0 and ratios[lo - 1] > 1.0:
                lo -= 1
            hi = i_best
            while hi < len(ratios) - 1 and ratios[hi + 1] > 1.0:
                hi += 1
            self.window[code] = (taus[lo], taus[hi])


@dataclass
class SeriesBundle:
    """Fig-4-style time series: one mean table per protocol plus the
    defect-free reference and the per-seed random detail."""

    t_max: float
    tau_star: dict[str, float]
    free: SeriesTable
    tables: dict[str, SeriesTable]
    random_members: list[SeriesTable] = field(default_factory=list)


@dataclass
class HistogramResult:
    t_max: float
    tau: float
    sigma0: float
    seeds: list[int]
    ratios: list[float]
    bin_edges: list[float]
    counts: list[int]
    references: dict[str, tuple[float, float]]  # code -> (tau, ratio)

    @property
    def mode_center(self) -> float:
        peak = int(np.argmax(self.counts))
        return 0.5 * (self.bin_edges[peak] + self.bin_edges[peak + 1])


def classify_parrondo(
    sigma0: float, sigma_b1: float, sigma_b2: float, sigma_switch: float
) -> ParrondoVerdict:
    values = (sigma0, sigma_b1, sigma_b2, sigma_switch)
    if any(v <= 0 for v in values):
        raise ValueError(f"sigma values must be positive, got {values}")
    return ParrondoVerdict(*values)


def _static_table(config: ExperimentConfig, beta: float, label: str,
                  sample_every: float | None = None) -> SeriesTable:
    step = sample_every or config.sample_every or config.t_max / 100.0
    return run_protocol(config.lattice(), StaticProtocol(beta), config.t_max, step, label=label)


def run_baselines(config: ExperimentConfig) -> BaselineResult:
    """Defect-free plus the two static-defect runs on a shared lattice."""
    return BaselineResult(
        free=_static_table(config, 0.0, "free"),
        defect1=_static_table(config, config.beta1, "b1"),
        defect2=_static_table(config, config.beta2, "b2"),
    )


def _sigma_final(config: ExperimentConfig, code: str, tau: float, seed: int | None) -> float:
    proto = config.protocol_for(code, tau, seed)
    table = run_protocol(config.lattice(), proto, config.t_max, config.t_max)
    return table.final().sigma


def _sweep_job(args) -> tuple[tuple, float]:
    config, code, tau, seed = args
    return (code, tau, seed), _sigma_final(config, code, tau, seed)


def _run_jobs(config: ExperimentConfig, jobs: list[tuple]) -> dict[tuple, float]:
    """Run (code, tau, seed) jobs serially or on a process pool; the result
    map is keyed, so scheduling cannot change the assembled output."""
    args = [(config, code, tau, seed) for code, tau, seed in jobs]
    if config.threads <= 1:
        pairs = map(_sweep_job, args)
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            pairs = list(pool.map(_sweep_job, args, chunksize=4))
    return dict(pairs)


def sigma_free_final(config: ExperimentConfig) -> float:
    """sigma_0(t_max) on this config's lattice, sampled at t_max only."""
    table = run_protocol(
        config.lattice(), StaticProtocol(0.0), config.t_max, config.t_max, label="free"
    )
    return table.final().sigma


def run_tau_sweep(config: ExperimentConfig) -> SweepResult:
    """sigma(t_max)/sigma0(t_max) per protocol per tau.

    Deterministic protocols cover the full grid; the random protocol covers
    the strided grid with an ensemble mean over random_ensemble_size seeds
    (seeds base_seed + i, shared across tau points).
    """
    sigma0 = sigma_free_final(config)
    jobs: list[tuple] = []
    for code in config.protocols:
        if code == "rd":
            for tau in config.random_grid():
                for i in range(config.random_ensemble_size):
                    jobs.append((code, tau, config.base_seed + i))
        else:
            for tau in config.grid():
                jobs.append((code, tau, None))
    results = _run_jobs(config, jobs)

    result = SweepResult(t_max=config.t_max, sigma0=sigma0, curves={})
    for code in config.protocols:
        if code == "rd":
            curve = []
            for tau in config.random_grid():
                vals = []
                for i in range(config.random_ensemble_size):
                    seed = config.base_seed + i
                    ratio = results[(code, tau, seed)] / sigma0
                    result.random_detail.append((tau, seed, ratio))
                    vals.append(ratio)
                curve.append((tau, float(np.mean(vals))))
            result.curves[code] = curve
        else:
            result.curves[code] = [
                (tau, results[(code, tau, None)] / sigma0) for tau in config.grid()
            ]
    result.finalize()
    return result


def _mean_table(tables: list[SeriesTable], label: str) -> SeriesTable:
    """Pointwise mean of aligned series (same sampling grid)."""
    first = tables[0]
    records = []
    for i, rec in enumerate(first.records):
        rows = [t.records[i] for t in tables]
        records.append(
            ObservableRecord(
                t=rec.t,
                sigma=float(np.mean([r.sigma for r in rows])),
                entropy=float(np.mean([r.entropy for r in rows])),
                ipr=float(np.mean([r.ipr for r in rows])),
                leak=float(np.mean([r.leak for r in rows])),
            )
        )
    return SeriesTable(
        protocol=label,
        tau=first.tau,
        seed=None,
        n_sites=first.n_sites,
        records=records,
        max_norm_drift=max(t.max_norm_drift for t in tables),
    )


def run_time_series(config: ExperimentConfig, tau_star: dict[str, float]) -> SeriesBundle:
    """sigma/S/IPR series up to t_max at each protocol's optimal tau.

    Sampling defaults to the protocol's own tau (every switching instant).
    The random protocol is an ensemble: members are kept and the bundle
    table is their pointwise mean, on a shared grid of the random tau.
    """
    lattice = config.lattice()
    free = _static_table(config, 0.0, "free")
    tables: dict[str, SeriesTable] = {}
    members: list[SeriesTable] = []
    for code in config.protocols:
        tau = tau_star[code]
        step = config.sample_every or tau
        if code == "rd":
            for i in range(config.random_ensemble_size):
                proto = config.protocol_for(code, tau, config.base_seed + i)
                members.append(run_protocol(lattice, proto, config.t_max, step))
            tables[code] = _mean_table(members, "rd")
        else:
            proto = config.protocol_for(code, tau)
            tables[code] = run_protocol(lattice, proto, config.t_max, step)
    return SeriesBundle(
        t_max=config.t_max, tau_star=dict(tau_star), free=free,
        tables=tables, random_members=members,
    )


def run_random_histogram(
    config: ExperimentConfig, tau: float, reference_tau: dict[str, float] | None = None
) -> HistogramResult:
    """Per-seed sigma/sigma0 for the random ensemble at its optimal tau,
    binned, plus the deterministic protocols' ratios at their own tau."""
    sigma0 = sigma_free_final(config)
    seeds = [config.base_seed + i for i in range(config.histogram_ensemble_size)]
    jobs = [("rd", tau, seed) for seed in seeds]
    ref_tau = reference_tau or {}
    for code, t_ref in ref_tau.items():
        if code != "rd":
            jobs.append((code, t_ref, None))
    results = _run_jobs(config, jobs)

    ratios = [results[("rd", tau, seed)] / sigma0 for seed in seeds]
    counts, edges = np.histogram(ratios, bins=config.histogram_bins)
    references = {
        code: (t_ref, results[(code, t_ref, None)] / sigma0)
        for code, t_ref in ref_tau.items()
        if code != "rd"
    }
    return HistogramResult(
        t_max=config.t_max,
        tau=tau,
        sigma0=sigma0,
        seeds=seeds,
        ratios=ratios,
        bin_edges=[float(e) for e in edges],
        counts=[int(c) for c in counts],
        references=references,
    )


# ---------------------------------------------------------------------------
# persistence

SERIES_HEADER = "protocol,tau,seed,t,sigma,entropy,ipr,leak"
SWEEP_HEADER = "protocol,tau,seed_or_mean,sigma_ratio"
HISTOGRAM_HEADER = "seed,sigma_ratio"
HISTOGRAM_REFS_HEADER = "protocol,tau,sigma_ratio"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(float(x))  # plain shortest round-trip even for np.float64
    return str(x)


def write_series_csv(path: str, tables: list[SeriesTable]) -> None:
    with open(path, "w") as fh:
        fh.write(SERIES_HEADER + "\n")
        for table in tables:
            for rec in table.records:
                fh.write(
                    ",".join(
                        [
                            table.protocol,
                            _fmt(table.tau),
                            _fmt(table.seed),
                            _fmt(rec.t),
                            _fmt(rec.sigma),
                            _fmt(rec.entropy),
                            _fmt(rec.ipr),
                            _fmt(rec.leak),
                        ]
                    )
                    + "\n"
                )


def write_sweep_csv(path: str, sweep: SweepResult) -> None:
    """Deterministic rows carry an empty seed column; the random curve
    writes one 'mean' row per tau plus one row per ensemble member."""
    with open(path, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for code, curve in sweep.curves.items():
            for tau, ratio in curve:
                kind = "mean" if code == "rd" else ""
                fh.write(f"{code},{_fmt(tau)},{kind},{_fmt(ratio)}\n")
        for tau, seed, ratio in sweep.random_detail:
            fh.write(f"rd,{_fmt(tau)},{seed},{_fmt(ratio)}\n")


def write_histogram_csv(path: str, hist: HistogramResult) -> None:
    with open(path, "w") as fh:
        fh.write(HISTOGRAM_HEADER + "\n")
        for seed, ratio in zip(hist.seeds, hist.ratios):
            fh.write(f"{seed},{_fmt(ratio)}\n")


def write_histogram_refs_csv(path: str, hist: HistogramResult) -> None:
    with open(path, "w") as fh:
        fh.write(HISTOGRAM_REFS_HEADER + "\n")
        for code in sorted(hist.references):
            tau, ratio = hist.references[code]
            fh.write(f"{code},{_fmt(tau)},{_fmt(ratio)}\n")


def read_sweep_curves(path: str) -> dict[str, list[tuple[float, float]]]:
    """Protocol -> (tau, ratio) curves from a sweep CSV; random ensemble
    detail rows are skipped, only its 'mean' rows form the rd curve."""
    curves: dict[str, list[tuple[float, float]]] = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SWEEP_HEADER:
            raise ValueError(f"{path}: expected header {SWEEP_HEADER!r}, got {header!r}")
        for line in fh:
            code, tau, kind, ratio = line.strip().split(",")
            if kind not in ("", "mean"):
                continue
            curves.setdefault(code, []).append((float(tau), float(ratio)))
    for curve in curves.values():
        curve.sort()
    return curves


def tau_star_from_curves(curves: dict[str, list[tuple[float, float]]]) -> dict[str, float]:
    """Smallest tau attaining each protocol's maximum ratio."""
    out = {}
    for code, curve in curves.items():
        best = max(r for _, r in curve)
        out[code] = min(t for t, r in curve if r == best)
    return out


def write_manifest(path: str, config: ExperimentConfig, extra: dict) -> None:
    """Full reproducibility record: config echo, lattice, RNG, timings."""
    from . import __version__

    payload = {
        "config": asdict(config),
        "lattice_sites": config.lattice().n_sites,
        "rng": RNG_NAME,
        "version": __version__,
        **extra,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


class StopWatch:
    """Wall-time bookkeeping for manifests."""

    def __init__(self):
        self.t0 = time.time()
        self.laps: dict[str, float] = {}

    def lap(self, name: str):
        now = time.time()
        self.laps[name] = round(now - self.t0, 3)
        self.t0 = now


def ensure_out_dir(config: ExperimentConfig) -> str:
    os.makedirs(config.out_dir, exist_ok=True)
    return config.out_dir


def preset(name: str, **overrides) -> ExperimentConfig:
    """Named parameter profiles: 'desk' for quick runs, 'paper' for the
    publication-scale defaults."""
    if name == "paper":
        base = ExperimentConfig()
    elif name == "desk":
        base = ExperimentConfig(
            t_max=500.0,
            tau_max=60.0,
            tau_points=30,
            random_ensemble_size=12,
            histogram_ensemble_size=30,
        )
    else:
        raise ValueError(f"unknown preset {name!r}")
    return replace(base, **overrides) if overrides else base
