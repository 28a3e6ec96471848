"""Coherent-state amplitudes and proper mixtures of coherent states.

Amplitudes are plain Python ``complex`` numbers (hbar = 1, dimensionless).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Amplitudes closer than this are treated as the same coherent state.
MERGE_TOLERANCE = 1e-14
WEIGHT_TOLERANCE = 1e-12


def as_amplitude(value) -> complex:
    """Coerce ``value`` to a finite complex amplitude."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"amplitude must be finite, got {value!r}")
    return z


def overlap(a: complex, b: complex) -> complex:
    """Inner product <a|b> of two coherent states."""
    a = as_amplitude(a)
    b = as_amplitude(b)
    # real part rewritten as -|a-b|^2/2: exact for a == b and never positive
    return cmath.exp(complex(-0.5 * abs(a - b) ** 2, (a.conjugate() * b).imag))


def separation(a: complex, b: complex) -> float:
    """Distance |a - b| between two amplitudes."""
    return abs(as_amplitude(a) - as_amplitude(b))


def gram_matrix(amplitudes: Sequence[complex]) -> np.ndarray:
    """Matrix of pairwise overlaps, ``G[i, j] = <a_i|a_j>``."""
    z = np.asarray([as_amplitude(x) for x in amplitudes], dtype=complex)
    diff = z[None, :] - z[:, None]
    cross = np.conj(z)[:, None] * z[None, :]
    return np.exp(-0.5 * np.abs(diff) ** 2 + 1j * cross.imag)


def merge_duplicates(weights: Iterable[float], amplitudes: Iterable[complex],
                     tol: float = MERGE_TOLERANCE):
    """Sum the weights of amplitudes lying within ``tol`` of an earlier one.

    Order of first appearance is preserved.
    """
    out_w: list[float] = []
    out_a: list[complex] = []
    for w, z in zip(weights, amplitudes):
        for i, y in enumerate(out_a):
            if abs(z - y) <= tol:
                out_w[i] += w
                break
        else:
            out_w.append(float(w))
            out_a.append(z)
    return tuple(out_w), tuple(out_a)


@dataclass(frozen=True)
class CoherentMixture:
    """A proper mixture ``sum_j p_j |alpha_j><alpha_j|``.

    Weights must be positive and sum to one; coinciding amplitudes are merged.
    """

    weights: tuple[float, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        amps = tuple(as_amplitude(z) for z in self.amplitudes)
        if len(weights) != len(amps):
            raise ValueError("weights and amplitudes differ in length")
        if not weights:
            raise ValueError("a mixture needs at least one element")
        if any(not math.isfinite(w) or w <= 0 for w in weights):
            raise ValueError(f"weights must be positive, got {weights}")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"weights must sum to 1, got {math.fsum(weights)!r}")
        weights, amps = merge_duplicates(weights, amps)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, complex]]) -> "CoherentMixture":
        pairs = list(pairs)
        return cls(tuple(p for p, _ in pairs), tuple(z for _, z in pairs))

    @classmethod
    def pure(cls, alpha: complex) -> "CoherentMixture":
        return cls((1.0,), (alpha,))

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(zip(self.weights, self.amplitudes))

    @property
    def is_pure(self) -> bool:
        return len(self.weights) == 1

    def mean_photon_number(self) -> float:
        return math.fsum(p * abs(z) ** 2 for p, z in self)

    def transformed(self, phase: float = 0.0, displacement: complex = 0.0) -> "CoherentMixture":
        """Apply ``alpha -> exp(i phase) * alpha + displacement`` to every element."""
        rot = cmath.exp(1j * phase)
        return CoherentMixture(self.weights, tuple(rot * z + displacement for z in self.amplitudes))


def make_binary_mixture(a: float, alpha0: complex, beta0: complex) -> CoherentMixture:
    """The two-element mixture ``a|alpha0><alpha0| + (1-a)|beta0><beta0|``."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"mixing probability must lie in (0, 1), got {a!r}")
    alpha0 = as_amplitude(alpha0)
    beta0 = as_amplitude(beta0)
    if abs(alpha0 - beta0) <= MERGE_TOLERANCE:
        raise ValueError("alpha0 and beta0 coincide; the state is not a mixture")
    return CoherentMixture((a, 1.0 - a), (alpha0, beta0))


def symmetric_pair(a: float, d0: float, center: complex = 0.0, phase: float = 0.0) -> CoherentMixture:
    """Binary mixture with separation ``d0``, placed symmetrically around ``center``."""
    if d0 <= 0:
        raise ValueError(f"separation must be positive, got {d0!r}")
    half = 0.5 * d0 * cmath.exp(1j * phase)
    return make_binary_mixture(a, center + half, center - half)
