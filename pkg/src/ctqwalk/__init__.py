"""Continuous-time quantum walks with temporally switched bond defects."""

from .hamiltonian import LatticeModel, TridiagonalOperator, build_h, build_h0
from .harness import (
    BaselineResult,
    ExperimentConfig,
    HistogramResult,
    ParrondoVerdict,
    SeriesBundle,
    SweepResult,
    classify_parrondo,
    run_baselines,
    run_random_histogram,
    run_tau_sweep,
    run_time_series,
)
from .observables import (
    NumericalInconsistencyError,
    ObservableRecord,
    ipr,
    probabilities,
    shannon,
    sigma,
)
from .propagation import (
    ConvergenceError,
    LatticeTooSmallError,
    SeriesTable,
    StaticProtocol,
    SwitchingProtocol,
    WaveState,
    eigen_oracle,
    evolve_interval,
    initial_state,
    run_protocol,
)
from .sequences import (
    BinarySequence,
    DegenerateSequenceError,
    SequenceKind,
    SequenceMetrics,
    autocorrelation,
    binary_persistence,
    characterize,
    generate,
    generate_random,
    generate_substitution,
    random_ensemble_mean,
    relative_persistence,
)

__version__ = "0.1.0"
