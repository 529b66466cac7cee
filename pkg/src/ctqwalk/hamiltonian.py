"""Tight-binding Hamiltonians for the defected 1D chain.

The defect-free chain has on-site energy epsilon and uniform hopping -gamma
between nearest neighbours.  A bond defect of intensity beta modifies the
two bonds touching the defect site d, turning their coupling into
-gamma - beta.  Note the double negative: with the default beta < 0 the
defect bonds become *positive* couplings (+1.5 gamma, +2 gamma), which is
easy to get wrong by one sign.

Operators are stored as (diagonal, off-diagonal) vectors of a real
symmetric tridiagonal matrix together with a Gershgorin bound on the
spectral radius, which the propagator uses to rescale the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LatticeModel:
    """Finite odd-sized chain with signed site labels and one bond defect.

    Site labels run j = -(N-1)/2 .. +(N-1)/2; array index = j + (N-1)/2.
    beta1/beta2 are the two switchable defect intensities, in units of gamma.
    """

    n_sites: int
    epsilon: float = 0.0
    gamma: float = 1.0
    defect_site: int = 0
    beta1: float = -2.5
    beta2: float = -3.0

    def __post_init__(self):
        if self.n_sites < 3 or self.n_sites % 2 == 0:
            raise ValueError("n_sites must be odd and >= 3")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if abs(self.defect_site) > self.half_width - 1:
            raise ValueError(
                f"defect site {self.defect_site} leaves no room for its bonds "
                f"on a lattice of half-width {self.half_width}"
            )

    @property
    def half_width(self) -> int:
        return (self.n_sites - 1) // 2

    def labels(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def index_of(self, label: int) -> int:
        if abs(label) > self.half_width:
            raise ValueError(f"site label {label} outside lattice")
        return label + self.half_width

    @classmethod
    def sized_for(cls, t_max: float, buffer_sites: int = 200, **kwargs) -> "LatticeModel":
        """Lattice large enough that the ballistic front (speed 2*gamma)
        plus dispersive tails never reach the edges by t_max."""
        gamma = kwargs.get("gamma", 1.0)
        half = int(np.ceil(2.0 * gamma * t_max)) + buffer_sites
        return cls(n_sites=2 * half + 1, **kwargs)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Real symmetric tridiagonal matrix: diagonal + one off-diagonal."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    norm_bound: float

    def __post_init__(self):
        d = np.ascontiguousarray(self.diagonal, dtype=np.float64)
        e = np.ascontiguousarray(self.off_diagonal, dtype=np.float64)
        if e.shape != (d.size - 1,):
            raise ValueError("off-diagonal must have length N - 1")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def n(self) -> int:
        return int(self.diagonal.size)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector product (reference implementation for tests)."""
        out = self.diagonal * x
        if self.n > 1:
            out[:-1] += self.off_diagonal * x[1:]
            out[1:] += self.off_diagonal * x[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diagonal)
        if self.n > 1:
            h += np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)
        return h


def _gershgorin_bound(diag: np.ndarray, off: np.ndarray) -> float:
    radius = 2.0 * np.max(np.abs(off)) if off.size else 0.0
    return float(np.max(np.abs(diag)) + radius)


def build_h0(model: LatticeModel) -> TridiagonalOperator:
    """Defect-free chain: epsilon on the diagonal, -gamma on every bond."""
    diag = np.full(model.n_sites, model.epsilon)
    off = np.full(model.n_sites - 1, -model.gamma)
    return TridiagonalOperator(diag, off, _gershgorin_bound(diag, off))


def build_h(model: LatticeModel, beta: float) -> TridiagonalOperator:
    """Chain with a bond defect of intensity beta at the defect site.

    The two bonds (d-1, d) and (d, d+1) get coupling -gamma - beta; all
    other entries match the defect-free operator.
    """
    diag = np.full(model.n_sites, model.epsilon)
    off = np.full(model.n_sites - 1, -model.gamma)
    d = model.index_of(model.defect_site)
    off[d - 1] = -model.gamma - beta
    off[d] = -model.gamma - beta
    return TridiagonalOperator(diag, off, _gershgorin_bound(diag, off))


def dump_triplets(op: TridiagonalOperator) -> list[tuple[int, int, float]]:
    """(row, col, value) triplets of all nonzero entries, for debug output."""
    if op.n > 64:
        raise ValueError("triplet dump is limited to N <= 64")
    out = []
    for i in range(op.n):
        if op.diagonal[i] != 0.0:
            out.append((i, i, float(op.diagonal[i])))
        if i < op.n - 1 and op.off_diagonal[i] != 0.0:
            out.append((i, i + 1, float(op.off_diagonal[i])))
            out.append((i + 1, i, float(op.off_diagonal[i])))
    return out
