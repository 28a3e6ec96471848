"""Balanced beam splitter acting on a coherent mixture and a vacuum ancilla."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .states import WEIGHT_TOLERANCE, CoherentMixture, as_amplitude

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TwoModeMixture:
    """Separable state ``sum_j p_j |a_j><a_j| (x) |b_j><b_j|``."""

    weights: tuple[float, ...]
    mode_a: tuple[complex, ...]
    mode_b: tuple[complex, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        a = tuple(as_amplitude(z) for z in self.mode_a)
        b = tuple(as_amplitude(z) for z in self.mode_b)
        if not (len(weights) == len(a) == len(b)) or not weights:
            raise ValueError("weights and mode amplitudes must be non-empty and of equal length")
        if any(not math.isfinite(w) or w <= 0 for w in weights):
            raise ValueError(f"weights must be positive, got {weights}")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"weights must sum to 1, got {math.fsum(weights)!r}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "mode_a", a)
        object.__setattr__(self, "mode_b", b)

    def __len__(self) -> int:
        return len(self.weights)

    def swapped(self) -> "TwoModeMixture":
        """Same state with the roles of the two modes exchanged."""
        return TwoModeMixture(self.weights, self.mode_b, self.mode_a)

    def mean_photon_number(self) -> float:
        return math.fsum(p * (abs(x) ** 2 + abs(y) ** 2)
                         for p, x, y in zip(self.weights, self.mode_a, self.mode_b))


def split(mixture: CoherentMixture) -> TwoModeMixture:
    """Send ``mixture`` and vacuum through a 50:50 beam splitter.

    Each component ``|alpha>|0>`` leaves as ``|alpha/sqrt2>|i alpha/sqrt2>``.
    """
    a = tuple(z / _SQRT2 for z in mixture.amplitudes)
    b = tuple(1j * z / _SQRT2 for z in mixture.amplitudes)
    return TwoModeMixture(mixture.weights, a, b)


def reduce(state: TwoModeMixture, mode: str = "A") -> CoherentMixture:
    """Reduced single-mode state of mode ``"A"`` or ``"B"``."""
    mode = mode.upper()
    if mode == "A":
        amps = state.mode_a
    elif mode == "B":
        amps = state.mode_b
    else:
        raise ValueError(f"mode must be 'A' or 'B', got {mode!r}")
    return CoherentMixture(state.weights, amps)
