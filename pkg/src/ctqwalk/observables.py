"""Wavepacket diagnostics over the site-probability distribution.

sigma is the position standard deviation over *signed* site labels (center
0), entropy is Shannon entropy in base 10, and IPR the inverse
participation ratio.  All three interpolate between the fully localized
limits (0, 0, 1) and the uniform limits (half-width scale, log10 N, N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# probabilities below this contribute exactly zero entropy (log underflow guard)
_ENTROPY_FLOOR = 1e-300


class NumericalInconsistencyError(ArithmeticError):
    """A computed quantity violates a mathematical bound beyond roundoff."""


@dataclass(frozen=True)
class ObservableRecord:
    """One sampled row of a run: time plus the spreading diagnostics."""

    t: float
    sigma: float
    entropy: float
    ipr: float
    leak: float


def probabilities(amplitudes: np.ndarray) -> np.ndarray:
    """Site distribution P_j = |psi_j|^2."""
    return np.abs(amplitudes) ** 2


def sigma(p: np.ndarray, labels: np.ndarray) -> float:
    """Standard deviation of the signed site label under p.

    A radicand within -1e-12 of zero is clamped to 0 (roundoff); anything
    more negative indicates a broken distribution and raises.
    """
    m1 = float(labels @ p)
    m2 = float((labels * labels) @ p)
    var = m2 - m1 * m1
    if var < 0.0:
        if var < -1e-12:
            raise NumericalInconsistencyError(f"negative position variance {var}")
        var = 0.0
    return float(np.sqrt(var))


def shannon(p: np.ndarray) -> float:
    """S = -sum P_j log10 P_j, with 0 log 0 = 0."""
    q = p[p > _ENTROPY_FLOOR]
    return float(-(q @ np.log10(q)))


def ipr(p: np.ndarray) -> float:
    """Inverse participation ratio 1 / sum P_j^2."""
    return float(1.0 / (p @ p))
