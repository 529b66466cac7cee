"""Piecewise-constant unitary evolution of a wavepacket on the chain.

Within each switching interval the Hamiltonian is constant, so the state
advances by exp(-i H dt).  The production path expands the exponential in
Chebyshev polynomials of H rescaled to [-1, 1] by its Gershgorin bound,
with Bessel-function coefficients; cost is O(N) per series term and no
dense matrix is ever formed.  A full eigendecomposition backend is kept
for small lattices as an independent oracle.

A run is driven either by a SwitchingProtocol (binary word + interval
length tau mapping symbols to defect intensities) or by a StaticProtocol
(constant intensity, covering the defect-free and static-defect
baselines).  Consecutive intervals that share an intensity are coalesced
into one exponential between sample times; exp(-iHa)exp(-iHb) =
exp(-iH(a+b)) makes this exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import jv

from .hamiltonian import LatticeModel, TridiagonalOperator, build_h
from .observables import ObservableRecord, ipr, probabilities, shannon, sigma
from .sequences import BinarySequence

_COEFF_TOL = 1e-14   # series truncated below this coefficient magnitude
_LEAK_LIMIT = 1e-8   # max tolerated probability on the outer edge sites
_EDGE_SITES = 10     # sites counted into the leak at each boundary
_TIME_TOL = 1e-9     # two instants closer than this are the same event


class ConvergenceError(RuntimeError):
    """A numerical backend failed to converge."""


class LatticeTooSmallError(RuntimeError):
    """The wavefront reached the lattice edge; rerun with more sites."""

    def __init__(self, t: float, leak: float, n_sites: int, required: int):
        self.required = required
        super().__init__(
            f"boundary leak {leak:.3e} exceeds {_LEAK_LIMIT:.0e} at t={t:g} "
            f"on {n_sites} sites; increase n_sites to >= {required}"
        )


@dataclass(frozen=True)
class WaveState:
    """Complex site amplitudes at one instant."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        norm2 = float(np.vdot(amp, amp).real)
        if abs(norm2 - 1.0) > 1e-6:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n(self) -> int:
        return int(self.amplitudes.size)

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0)


@dataclass(frozen=True)
class StaticProtocol:
    """Constant defect intensity; beta = 0 is the defect-free baseline."""

    beta: float = 0.0

    @property
    def label(self) -> str:
        return f"static({self.beta:g})"


@dataclass(frozen=True)
class SwitchingProtocol:
    """Binary word driving the defect intensity: symbol 1 -> beta1, 0 -> beta2.

    The intensity is constant on [n*tau, (n+1)*tau) and equals
    beta_of(sequence[n]) there.
    """

    sequence: BinarySequence
    tau: float
    beta1: float = -2.5
    beta2: float = -3.0

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("switching interval tau must be positive")

    @property
    def label(self) -> str:
        return self.sequence.kind.value

    @property
    def seed(self) -> int | None:
        return self.sequence.seed

    def beta_of(self, symbol: int) -> float:
        return self.beta1 if symbol == 1 else self.beta2

    def intervals_needed(self, t_max: float) -> int:
        return int(np.ceil(t_max / self.tau - _TIME_TOL))


@dataclass
class SeriesTable:
    """Sampled observables of one run plus its provenance."""

    protocol: str
    tau: float | None
    seed: int | None
    n_sites: int
    records: list[ObservableRecord] = field(default_factory=list)
    max_norm_drift: float = 0.0

    def final(self) -> ObservableRecord:
        return self.records[-1]

    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def initial_state(model: LatticeModel, site: int | None = None) -> WaveState:
    """Wavepacket fully localized on one site (default: the defect site)."""
    if site is None:
        site = model.defect_site
    amp = np.zeros(model.n_sites, dtype=np.complex128)
    amp[model.index_of(site)] = 1.0
    return WaveState(amp, 0.0)


@numba.njit(cache=True)
def _cheb_kernel(dn, on, psi, coeffs):  # pragma: no cover - exercised via wrapper
    n = psi.shape[0]
    k_max = coeffs.shape[0] - 1
    acc = coeffs[0] * psi
    phi_prev = psi.copy()
    phi = np.empty_like(psi)
    for j in range(n):
        v = dn[j] * psi[j]
        if j > 0:
            v += on[j - 1] * psi[j - 1]
        if j < n - 1:
            v += on[j] * psi[j + 1]
        phi[j] = v
    if k_max >= 1:
        c1 = coeffs[1]
        for j in range(n):
            acc[j] += c1 * phi[j]
    phi_next = np.empty_like(psi)
    for k in range(2, k_max + 1):
        c = coeffs[k]
        for j in range(n):
            v = dn[j] * phi[j]
            if j > 0:
                v += on[j - 1] * phi[j - 1]
            if j < n - 1:
                v += on[j] * phi[j + 1]
            v = 2.0 * v - phi_prev[j]
            phi_next[j] = v
            acc[j] += c * v
        swap = phi_prev
        phi_prev = phi
        phi = phi_next
        phi_next = swap
    return acc


def _chebyshev_coefficients(x: float) -> np.ndarray:
    """Coefficients (2 - delta_k0) (-i)^k J_k(x) of exp(-i x z), truncated
    where the Bessel tail falls below the series tolerance."""
    cap = int(4.0 * x + 200)
    ks = np.arange(cap + 1)
    bess = jv(ks, x)
    above = np.nonzero(np.abs(bess) >= _COEFF_TOL)[0]
    k_last = int(above[-1]) if above.size else 0
    if k_last >= cap:
        raise ConvergenceError(
            f"Chebyshev series did not converge within {cap} terms (x = {x:g})"
        )
    phases = np.array([1.0, -1.0j, -1.0, 1.0j])[ks[: k_last + 1] % 4]
    coeffs = 2.0 * bess[: k_last + 1] * phases
    coeffs[0] *= 0.5
    return coeffs


def evolve_interval(state: WaveState, h: TridiagonalOperator, dt: float) -> WaveState:
    """exp(-i H dt) applied through the Chebyshev series."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if h.n != state.n:
        raise ValueError("operator and state sizes differ")
    x = h.norm_bound * dt
    if x == 0.0:
        return WaveState(state.amplitudes.copy(), state.time + dt)
    coeffs = _chebyshev_coefficients(x)
    dn = h.diagonal / h.norm_bound
    on = h.off_diagonal / h.norm_bound
    amp = _cheb_kernel(dn, on, state.amplitudes, coeffs)
    return WaveState(amp, state.time + dt)


def eigen_oracle(h: TridiagonalOperator, dt: float, state: WaveState) -> WaveState:
    """exp(-i H dt) through a full symmetric-tridiagonal eigendecomposition.

    Test backend only; refuses lattices beyond 512 sites.
    """
    if h.n > 512:
        raise ValueError("eigen oracle is restricted to N <= 512")
    if h.n != state.n:
        raise ValueError("operator and state sizes differ")
    if h.n == 1:
        amp = state.amplitudes * np.exp(-1j * h.diagonal[0] * dt)
        return WaveState(amp, state.time + dt)
    try:
        w, v = eigh_tridiagonal(h.diagonal, h.off_diagonal)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise ConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc
    amp = v @ (np.exp(-1j * w * dt) * (v.T @ state.amplitudes))
    return WaveState(amp, state.time + dt)


def _segments(protocol, t_max: float) -> list[tuple[float, float, float]]:
    """(t_start, t_end, beta) pieces covering [0, t_max], with consecutive
    equal-intensity intervals merged."""
    if isinstance(protocol, StaticProtocol):
        return [(0.0, t_max, protocol.beta)]
    n_int = protocol.intervals_needed(t_max)
    if len(protocol.sequence) < n_int:
        raise ValueError(
            f"sequence of length {len(protocol.sequence)} too short for "
            f"{n_int} intervals (t_max={t_max:g}, tau={protocol.tau:g})"
        )
    segs: list[tuple[float, float, float]] = []
    start = 0.0
    beta = protocol.beta_of(protocol.sequence[0])
    for n in range(1, n_int):
        b = protocol.beta_of(protocol.sequence[n])
        if b != beta:
            edge = n * protocol.tau
            segs.append((start, edge, beta))
            start, beta = edge, b
    segs.append((start, t_max, beta))
    return segs


def _sample_times(t_max: float, sample_every: float) -> np.ndarray:
    """Multiples of sample_every in (0, t_max], with t_max always included."""
    if sample_every <= 0:
        raise ValueError("sample_every must be positive")
    n = int(np.floor(t_max / sample_every + _TIME_TOL))
    times = sample_every * np.arange(1, n + 1)
    if times.size == 0 or t_max - times[-1] > _TIME_TOL:
        times = np.append(times, t_max)
    else:
        times[-1] = t_max
    return times


def run_protocol(
    model: LatticeModel,
    protocol: SwitchingProtocol | StaticProtocol,
    t_max: float,
    sample_every: float,
    start_site: int | None = None,
    label: str | None = None,
) -> SeriesTable:
    """Evolve from a site-localized state, sampling observables on a grid.

    Observables (sigma over signed labels, base-10 Shannon entropy, IPR,
    edge leak) are recorded at t = 0, every multiple of sample_every, and
    t_max itself.  Distinct defect intensities reuse a single Hamiltonian
    each.  Raises LatticeTooSmallError as soon as the probability on the
    outer 10 sites of either edge exceeds the leak guard.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    labels = model.labels()
    h_cache: dict[float, TridiagonalOperator] = {}

    def h_of(beta: float) -> TridiagonalOperator:
        if beta not in h_cache:
            h_cache[beta] = build_h(model, beta)
        return h_cache[beta]

    state = initial_state(model, start_site)
    table = SeriesTable(
        protocol=label if label is not None else protocol.label,
        tau=protocol.tau if isinstance(protocol, SwitchingProtocol) else None,
        seed=protocol.seed if isinstance(protocol, SwitchingProtocol) else None,
        n_sites=model.n_sites,
    )

    edge = min(_EDGE_SITES, max(1, (model.n_sites - 1) // 4))

    def record(t: float):
        p = probabilities(state.amplitudes)
        leak = float(np.sum(p[:edge]) + np.sum(p[-edge:]))
        rec = ObservableRecord(
            t=t, sigma=sigma(p, labels), entropy=shannon(p), ipr=ipr(p), leak=leak
        )
        table.records.append(rec)
        table.max_norm_drift = max(table.max_norm_drift, state.norm_error())
        if leak > _LEAK_LIMIT:
            suggested = LatticeModel.sized_for(t_max, gamma=model.gamma).n_sites
            if suggested <= model.n_sites:
                suggested = 2 * int(0.75 * model.n_sites) + 1
            raise LatticeTooSmallError(t, leak, model.n_sites, suggested)

    record(0.0)
    samples = _sample_times(t_max, sample_every)
    si = 0
    for t_start, t_end, beta in _segments(protocol, t_max):
        h = h_of(beta)
        t = t_start
        while si < samples.size and samples[si] <= t_end + _TIME_TOL:
            s = min(float(samples[si]), t_end)
            if s - t > _TIME_TOL:
                state = evolve_interval(state, h, s - t)
            t = s
            record(s)
            si += 1
        if t_end - t > _TIME_TOL:
            state = evolve_interval(state, h, t_end - t)
    return table
