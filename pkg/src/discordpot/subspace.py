"""Finite orthonormal bases for spans of coherent states.

Every inner product between span elements is evaluated from the closed-form
coherent-state overlap; nothing here touches a Fock expansion.  The
orthogonalisation itself runs in extended precision (mpmath) so that nearly
parallel coherent states, whose residual norms fall far below the double
precision cancellation floor, are still resolved or dropped correctly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from .states import CoherentMixture, as_amplitude, overlap

#: Residual norm below which a vector is considered linearly dependent.
GS_TOLERANCE = 1e-10
STATE_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12

_mp = mpmath.MPContext()
_mp.dps = 40


def _mp_overlap(a: complex, b: complex):
    a = _mp.mpc(a.real, a.imag)
    b = _mp.mpc(b.real, b.imag)
    return _mp.exp(-abs(a - b) ** 2 / 2 + 1j * _mp.im(_mp.conj(a) * b))


def _mp_gram(left: Sequence[complex], right: Sequence[complex]):
    return [[_mp_overlap(x, y) for y in right] for x in left]


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    """Orthonormal basis ``|u_j> = sum_i coeffs[j, i] |a_i>`` of a coherent span.

    ``coeffs`` has one row per retained vector and one column per source
    amplitude; it is lower triangular up to the columns of dropped sources.
    """

    source_amplitudes: tuple[complex, ...]
    coeffs: np.ndarray
    kept: tuple[int, ...]
    _mp_coeffs: list = field(repr=False, default_factory=list)

    @property
    def effective_dim(self) -> int:
        return len(self.kept)

    def coordinates(self, amplitudes: Sequence[complex]) -> np.ndarray:
        """Components ``<u_j|b_m>`` of coherent states ``|b_m>`` in this basis.

        Returns an array of shape ``(effective_dim, len(amplitudes))``.
        """
        amps = [as_amplitude(b) for b in amplitudes]
        g = _mp_gram(self.source_amplitudes, amps)
        out = np.empty((self.effective_dim, len(amps)), dtype=complex)
        for j, row in enumerate(self._mp_coeffs):
            for m in range(len(amps)):
                s = _mp.fsum(_mp.conj(row[i]) * g[i][m] for i in range(len(row)))
                out[j, m] = complex(s)
        return out

    def gram(self) -> np.ndarray:
        """``<u_i|u_j>`` evaluated in double precision through ``overlap``."""
        g = np.array([[overlap(x, y) for y in self.source_amplitudes]
                      for x in self.source_amplitudes])
        return self.coeffs.conj() @ g @ self.coeffs.T

    def contains(self, amplitude: complex, tol: float = STATE_TOLERANCE) -> bool:
        """True when ``|amplitude>`` lies in the span (within ``tol`` in norm squared)."""
        c = self.coordinates([amplitude])[:, 0]
        return abs(float(np.vdot(c, c).real) - 1.0) <= tol


def gram_schmidt(amplitudes: Sequence[complex], tol: float = GS_TOLERANCE) -> OrthoBasis:
    """Orthonormalise the coherent states ``|a_1>, ..., |a_N>`` in order.

    Modified Gram-Schmidt with a second re-orthogonalisation pass.  Vectors
    whose residual norm falls below ``tol`` are dropped.
    """
    amps = tuple(as_amplitude(z) for z in amplitudes)
    if not amps:
        raise ValueError("gram_schmidt needs at least one amplitude")
    n = len(amps)
    g = _mp_gram(amps, amps)

    def apply_gram(v):
        return [_mp.fsum(g[i][k] * v[k] for k in range(n)) for i in range(n)]

    basis: list[list] = []
    gbasis: list[list] = []  # G @ u_k, so that <u_k|v> = (G u_k)^H v
    kept: list[int] = []
    for j in range(n):
        v = [_mp.mpc(0)] * n
        v[j] = _mp.mpc(1)
        for _ in range(2):
            for u, gu in zip(basis, gbasis):
                c = _mp.fsum(_mp.conj(gu[i]) * v[i] for i in range(n))
                v = [v[i] - c * u[i] for i in range(n)]
        gv = apply_gram(v)
        norm2 = _mp.re(_mp.fsum(_mp.conj(v[i]) * gv[i] for i in range(n)))
        norm = _mp.sqrt(norm2) if norm2 > 0 else _mp.mpf(0)
        if norm < tol:
            continue
        basis.append([x / norm for x in v])
        gbasis.append([x / norm for x in gv])
        kept.append(j)

    coeffs = np.array([[complex(x) for x in u] for u in basis], dtype=complex)
    return OrthoBasis(amps, coeffs, tuple(kept), basis)


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A Hermitian matrix together with the basis its entries refer to.

    ``basis`` is an :class:`OrthoBasis`, a tuple of two of them for a two-mode
    operator, or ``None`` when the basis is irrelevant.
    """

    entries: np.ndarray
    basis: object = None

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOLERANCE * scale:
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "entries", 0.5 * (m + m.conj().T))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return eigenvalues(self)


def project_mixture(mixture: CoherentMixture, basis: OrthoBasis) -> HermitianMatrix:
    """Matrix ``<u_j|rho|u_k>`` of a coherent mixture in a coherent-span basis."""
    x = basis.coordinates(mixture.amplitudes)
    norms = np.sum(np.abs(x) ** 2, axis=0)
    if np.any(np.abs(norms - 1.0) > STATE_TOLERANCE):
        raise ValueError("mixture amplitudes are not contained in the basis span")
    p = np.asarray(mixture.weights)
    return HermitianMatrix((x * p) @ x.conj().T, basis)


def basis_for(mixture: CoherentMixture) -> OrthoBasis:
    return gram_schmidt(mixture.amplitudes)


def eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or a stack of them."""
    a = m.entries if isinstance(m, HermitianMatrix) else np.asarray(m)
    return np.linalg.eigvalsh(a)


def entropy_from_eigenvalues(ev: np.ndarray, tol: float = STATE_TOLERANCE) -> np.ndarray:
    """``-sum lambda ln lambda`` along the last axis, with ``0 ln 0 = 0``.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    is rejected.
    """
    ev = np.asarray(ev, dtype=float)
    if np.any(ev < -tol):
        raise ValueError(f"not positive semidefinite: min eigenvalue {ev.min():.3e}")
    ev = np.clip(ev, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(ev > 0, -ev * np.log(np.where(ev > 0, ev, 1.0)), 0.0)
    return np.clip(terms.sum(axis=-1), 0.0, None)


def entropy(m, tol: float = STATE_TOLERANCE) -> float:
    """Von Neumann entropy (nats) of a density matrix."""
    a = m.entries if isinstance(m, HermitianMatrix) else np.asarray(m, dtype=complex)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"not a state: trace {tr!r}")
    s = float(entropy_from_eigenvalues(eigenvalues(a), tol))
    return min(s, math.log(a.shape[0])) if a.shape[0] > 1 else 0.0


def mixture_entropy(mixture: CoherentMixture) -> float:
    """Entropy of a coherent mixture through its own Gram-Schmidt basis."""
    if mixture.is_pure:
        return 0.0
    return entropy(project_mixture(mixture, basis_for(mixture)))
