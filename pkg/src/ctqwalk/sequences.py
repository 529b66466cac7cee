"""Binary control sequences and their statistical characterization.

The defect switching is driven by finite words over {0, 1}.  Deterministic
words come from substitution rules iterated to a fixed point (Fibonacci,
Thue-Morse, Rudin-Shapiro) or from the alternating periodic word; random
words are fair-coin i.i.d. draws from numpy's seeded PCG64 generator.

Characterization metrics: Pearson autocorrelation at a given lag, binary
persistence BP(m) (fraction of length-m sliding blocks that are constant),
and relative persistence RP(m) = BP(m) - 2**(1-m), the excess over the
fair-coin expectation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

RNG_NAME = "numpy-PCG64"  # generator recorded in run manifests


class SequenceKind(enum.Enum):
    PERIODIC = "pe"
    FIBONACCI = "fb"
    THUE_MORSE = "tm"
    RUDIN_SHAPIRO = "rs"
    RANDOM = "rd"


DETERMINISTIC_KINDS = (
    SequenceKind.PERIODIC,
    SequenceKind.FIBONACCI,
    SequenceKind.THUE_MORSE,
    SequenceKind.RUDIN_SHAPIRO,
)

# Whole-word rewriting tables.  Rudin-Shapiro runs on a 4-letter alphabet
# and is projected to binary afterwards (A, B -> 0; C, D -> 1).
_FIB_RULE = str.maketrans({"0": "01", "1": "0"})
_TM_RULE = str.maketrans({"0": "01", "1": "10"})
_RS_RULE = str.maketrans({"A": "AB", "B": "AC", "C": "DB", "D": "DC"})
_RS_TO_BINARY = str.maketrans({"A": "0", "B": "0", "C": "1", "D": "1"})


class DegenerateSequenceError(ValueError):
    """A metric window is constant, so a correlation is undefined."""


@dataclass(frozen=True, eq=False)
class BinarySequence:
    """Immutable 0/1 word with provenance (rule kind, or RNG seed)."""

    symbols: np.ndarray
    kind: SequenceKind
    seed: int | None = None

    def __post_init__(self):
        arr = np.ascontiguousarray(self.symbols, dtype=np.int8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("sequence must be a non-empty 1-d symbol array")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("symbols must all be 0 or 1")
        if self.kind is SequenceKind.RANDOM:
            if self.seed is None:
                raise ValueError("random sequences carry a seed")
        elif self.seed is not None:
            raise ValueError(f"{self.kind.value} sequences carry no seed")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __getitem__(self, i: int) -> int:
        return int(self.symbols[i])

    def to_string(self) -> str:
        return "".join("01"[s] for s in self.symbols)


@dataclass(frozen=True)
class SequenceMetrics:
    """AC/BP/RP values per lag or block order, as computed for one word."""

    ac: dict[int, float] = field(default_factory=dict)
    bp: dict[int, float] = field(default_factory=dict)
    rp: dict[int, float] = field(default_factory=dict)


def _substitution_word(rule, axiom: str, min_length: int) -> str:
    word = axiom
    while len(word) < min_length:
        word = word.translate(rule)
    return word[:min_length]


def generate_substitution(
    kind: SequenceKind, min_length: int, periodic_start: int = 1
) -> BinarySequence:
    """Prefix of the fixed-point word of a deterministic rule.

    The periodic word has no substitution rule in the literature sense; it
    is the alternating word starting with ``periodic_start`` (default 1, so
    the first switching interval applies beta1).
    """
    if min_length < 1:
        raise ValueError("min_length must be >= 1")
    if kind is SequenceKind.FIBONACCI:
        word = _substitution_word(_FIB_RULE, "0", min_length)
    elif kind is SequenceKind.THUE_MORSE:
        word = _substitution_word(_TM_RULE, "0", min_length)
    elif kind is SequenceKind.RUDIN_SHAPIRO:
        word = _substitution_word(_RS_RULE, "A", min_length)
        word = word.translate(_RS_TO_BINARY)
    elif kind is SequenceKind.PERIODIC:
        if periodic_start not in (0, 1):
            raise ValueError("periodic start symbol must be 0 or 1")
        pair = f"{periodic_start}{1 - periodic_start}"
        word = (pair * (min_length // 2 + 1))[:min_length]
    else:
        raise ValueError(f"{kind} is not a deterministic kind")
    arr = np.frombuffer(word.encode("ascii"), dtype=np.uint8) - ord("0")
    return BinarySequence(arr.astype(np.int8), kind)


def generate_random(seed: int, length: int) -> BinarySequence:
    """I.i.d. fair-coin word from PCG64; same seed reproduces the word."""
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, 2, size=length, dtype=np.int8)
    return BinarySequence(arr, SequenceKind.RANDOM, seed=int(seed))


def generate(
    kind: SequenceKind, length: int, seed: int | None = None, periodic_start: int = 1
) -> BinarySequence:
    """Dispatch on kind; seed is required for (and only for) random words."""
    if kind is SequenceKind.RANDOM:
        if seed is None:
            raise ValueError("random sequences require a seed")
        return generate_random(seed, length)
    return generate_substitution(kind, length, periodic_start=periodic_start)


def autocorrelation(seq: BinarySequence, k: int) -> float:
    """Pearson correlation between the word and its lag-k shift.

    Correlates x[0:L-k] with x[k:L].  Both windows must be non-constant;
    a constant window has zero variance and the coefficient is undefined.
    """
    L = len(seq)
    if not 1 <= k <= L - 2:
        raise ValueError(f"lag must be in [1, {L - 2}], got {k}")
    x = seq.symbols.astype(np.float64)
    a = x[: L - k]
    b = x[k:]
    a = a - a.mean()
    b = b - b.mean()
    va = float(a @ a)
    vb = float(b @ b)
    if va == 0.0 or vb == 0.0:
        raise DegenerateSequenceError("constant window: autocorrelation undefined")
    return float((a @ b) / np.sqrt(va * vb))


def binary_persistence(seq: BinarySequence, m: int) -> float:
    """BP(m): fraction of the L-m+1 sliding length-m blocks that are constant."""
    L = len(seq)
    if not 1 <= m <= L:
        raise ValueError(f"block order must be in [1, {L}], got {m}")
    if m == 1:
        return 1.0
    same = seq.symbols[1:] == seq.symbols[:-1]
    if m == 2:
        n_id = int(np.count_nonzero(same))
    else:
        # block [i, i+m) is constant iff same[i : i+m-1] is all True
        csum = np.concatenate(([0], np.cumsum(same)))
        window = csum[m - 1 :] - csum[: L - m + 1]
        n_id = int(np.count_nonzero(window == m - 1))
    return n_id / (L - m + 1)


def relative_persistence(seq: BinarySequence, m: int) -> float:
    """RP(m) = BP(m) - 2**(1-m): persistence excess over a fair coin."""
    return binary_persistence(seq, m) - 2.0 ** (1 - m)


def characterize(seq: BinarySequence, max_lag: int, max_order: int) -> SequenceMetrics:
    """AC for k = 1..max_lag and BP/RP for m = 1..max_order."""
    ac = {k: autocorrelation(seq, k) for k in range(1, max_lag + 1)}
    bp = {m: binary_persistence(seq, m) for m in range(1, max_order + 1)}
    rp = {m: bp[m] - 2.0 ** (1 - m) for m in bp}
    return SequenceMetrics(ac=ac, bp=bp, rp=rp)


def random_ensemble_mean(metric_fn, arg: int, length: int, n_seeds: int, base_seed: int) -> float:
    """Mean of metric_fn(word, arg) over random words seeded base..base+n-1.

    The random protocol is characterized by ensemble averages.  Size the
    ensemble to the effect under test: the per-seed spread of BP/RP at
    length L is about 0.33/sqrt(L), so resolving a mean below a signal of
    size eps needs n_seeds well above 0.1/(L*eps^2).
    """
    vals = [metric_fn(generate_random(base_seed + i, length), arg) for i in range(n_seeds)]
    return float(np.mean(vals))
