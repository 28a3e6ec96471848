"""Truncated Fock-basis representation of coherent mixtures.

This module is the brute-force counterpart of :mod:`discordpot.subspace`:
it expands every coherent state in photon-number states, builds the full
(truncated) density matrices and diagonalises them directly.  It shares no
code with the coherent-span route beyond the state containers, so agreement
between the two is a meaningful check.

It also hosts the Fock-basis coherence monotones (l1 norm and relative
entropy of coherence) and the series whose large-amplitude behaviour fixes
their asymptotes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln, pdtrc

from .discord import DiscordReport, MeasurementAngles
from .splitter import TwoModeMixture, reduce
from .states import CoherentMixture, symmetric_pair

TRUNCATION_FLOOR = 16
DEFAULT_TAIL = 1e-12
MAX_TWO_MODE_DIM = 2048
MONOTONE_MARGIN = 1.25


@dataclass(frozen=True, eq=False)
class FockMatrix:
    entries: np.ndarray
    n_max: int
    truncation_error: float

    @property
    def dim(self) -> int:
        return self.n_max + 1


def auto_truncation(mixture: CoherentMixture, tail_bound: float = DEFAULT_TAIL,
                    floor: int = TRUNCATION_FLOOR) -> int:
    """Smallest cutoff leaving less than ``tail_bound`` photon-number probability above it.

    Applies to every component of the mixture; never below ``floor``.
    """
    if not 0.0 < tail_bound < 1.0:
        raise ValueError(f"tail_bound must lie in (0, 1), got {tail_bound!r}")
    n = floor
    for z in mixture.amplitudes:
        lam = abs(z) ** 2
        if lam == 0:
            continue
        # start near the bulk to avoid scanning from zero for bright states
        n = max(n, int(lam))
        while pdtrc(n, lam) >= tail_bound:
            n += 1
    return n


def coherent_vector(alpha: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n = 0..n_max``."""
    k = np.arange(n_max + 1)
    r = abs(alpha)
    if r == 0:
        v = np.zeros(n_max + 1, dtype=complex)
        v[0] = 1.0
        return v
    log_mag = -0.5 * r * r + k * math.log(r) - 0.5 * gammaln(k + 1)
    return np.exp(log_mag) * np.exp(1j * k * np.angle(alpha))


def to_fock(mixture: CoherentMixture, n_max: int) -> FockMatrix:
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    rho = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for p, z in mixture:
        v = coherent_vector(z, n_max)
        rho += p * np.outer(v, v.conj())
    return FockMatrix(rho, n_max, float(1.0 - np.trace(rho).real))


def _entropy(rho: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(rho)
    ev = ev[ev > 0]
    return max(0.0, float(-np.sum(ev * np.log(ev))))


def entropy_oracle(mixture: CoherentMixture, tail_bound: float = DEFAULT_TAIL) -> float:
    """Von Neumann entropy from the truncated Fock density matrix."""
    n = auto_truncation(mixture, tail_bound)
    return _entropy(to_fock(mixture, n).entries)


# -- two modes -----------------------------------------------------------------

def two_mode_fock(state: TwoModeMixture, tail_bound: float = DEFAULT_TAIL):
    """Truncated two-mode density matrix, index ``n_A * (n_B_max + 1) + n_B``.

    Returns ``(rho, (dim_A, dim_B))``.
    """
    na = auto_truncation(reduce(state, "A"), tail_bound)
    nb = auto_truncation(reduce(state, "B"), tail_bound)
    dim = (na + 1) * (nb + 1)
    if dim > MAX_TWO_MODE_DIM:
        raise ValueError(f"two-mode Fock dimension {dim} exceeds {MAX_TWO_MODE_DIM}")
    psi = np.array([np.kron(coherent_vector(x, na), coherent_vector(y, nb))
                    for x, y in zip(state.mode_a, state.mode_b)])
    p = np.asarray(state.weights)
    rho = (psi.T * p) @ psi.conj()
    return rho, (na + 1, nb + 1)


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    t = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    if keep.upper() == "A":
        return np.einsum("ibjb->ij", t)
    if keep.upper() == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def entropy_oracle_two_mode(state: TwoModeMixture, tail_bound: float = DEFAULT_TAIL,
                            keep: str | None = None) -> float:
    """Entropy of the truncated two-mode state, or of one of its marginals."""
    rho, dims = two_mode_fock(state, tail_bound)
    if keep is not None:
        rho = partial_trace(rho, dims, keep)
    return _entropy(rho)


def _span_basis(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the given Fock vectors (rank-revealing QR)."""
    q, r = np.linalg.qr(vectors)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-10))
    return q[:, :rank]


def _conditional(tensor: np.ndarray, w: np.ndarray) -> float:
    """Conditional entropy of B for measurement vectors ``w`` (outcomes x components)."""
    total = 0.0
    for v in w:
        sigma = np.einsum("i,ibjc,j->bc", v.conj(), tensor, v)
        p = float(np.trace(sigma).real)
        if p > 1e-14:
            total += p * _entropy(sigma / p)
    return total


def _measured_tensor(rho, dims, measured_vectors):
    q = _span_basis(measured_vectors.T)
    t = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    return np.einsum("ai,abcd,cj->ibjd", q.conj(), t, q), q


def fock_discord(state: TwoModeMixture, tail_bound: float = DEFAULT_TAIL,
                 measured: str = "A") -> DiscordReport:
    """Discord recomputed end to end in the truncated two-mode Fock space.

    The measured mode is restricted to the span of its coherent components,
    built here by QR of their Fock vectors; the unmeasured mode stays in
    full Fock space.
    """
    measured = measured.upper()
    work = state if measured == "A" else state.swapped()
    rho, dims = two_mode_fock(work, tail_bound)
    s_ab = _entropy(rho)
    s_m = _entropy(partial_trace(rho, dims, "A"))
    s_o = _entropy(partial_trace(rho, dims, "B"))
    amps = reduce(work, "A").amplitudes
    vecs = np.array([coherent_vector(z, dims[0] - 1) for z in amps])
    tensor, q = _measured_tensor(rho, dims, vecs)

    if q.shape[1] == 1:
        best_x, best = np.zeros(2), _entropy(tensor[0, :, 0, :])
    elif q.shape[1] == 2:
        def f(x):
            c, s, e = math.cos(x[0]), math.sin(x[0]), complex(math.cos(x[1]), math.sin(x[1]))
            return _conditional(tensor, np.array([[c, e * s], [s, -e * c]]))

        grid = [(f((t, ph)), t, ph) for t in np.linspace(0, math.pi / 2, 16)
                for ph in np.linspace(0, 2 * math.pi, 32, endpoint=False)]
        g, t0, p0 = min(grid)
        res = minimize(f, [t0, p0], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-16, "maxiter": 20000})
        best_x, best = (res.x, res.fun) if res.fun <= g else (np.array([t0, p0]), g)
    else:
        raise ValueError("measured mode must span at most two dimensions")

    s_a, s_b = (s_m, s_o) if measured == "A" else (s_o, s_m)
    d = max(0.0, s_m - s_ab + best)
    mi = s_a + s_b - s_ab
    return DiscordReport(s_ab, s_a, s_b, mi, float(best),
                         MeasurementAngles.normalized(*best_x), d, mi - d, measured)


def probe_out_of_span(state: TwoModeMixture, samples: int = 500, extra_dims: int = 1,
                      seed: int = 0, tail_bound: float = DEFAULT_TAIL) -> dict:
    """Compare in-span measurements with random ones leaving the coherent span.

    Random orthonormal bases of the coherent span plus ``extra_dims`` random
    Fock directions are tried on mode A.  The result is a report; nothing is
    asserted about which side wins.
    """
    rng = np.random.default_rng(seed)
    rho, dims = two_mode_fock(state, tail_bound)
    amps = reduce(state, "A").amplitudes
    vecs = np.array([coherent_vector(z, dims[0] - 1) for z in amps])
    q = _span_basis(vecs.T)
    extra = rng.normal(size=(dims[0], extra_dims)) + 1j * rng.normal(size=(dims[0], extra_dims))
    extra -= q @ (q.conj().T @ extra)
    big = np.linalg.qr(np.hstack([q, extra]))[0]
    t = rho.reshape(dims[0], dims[1], dims[0], dims[1])
    tensor = np.einsum("ai,abcd,cj->ibjd", big.conj(), t, big)
    k = big.shape[1]

    outside = math.inf
    for _ in range(samples):
        z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        u = np.linalg.qr(z)[0]
        outside = min(outside, _conditional(tensor, u.T))
    inside = fock_discord(state, tail_bound).min_conditional_entropy
    return {"in_span_min": inside, "out_of_span_min": outside,
            "difference": outside - inside, "samples": samples, "extra_dims": extra_dims}


# -- coherence monotones ---------------------------------------------------------

def monotone_truncation(mixture: CoherentMixture, tail_bound: float = DEFAULT_TAIL) -> int:
    """Cutoff for the monotones.

    The l1 sum is controlled by amplitudes rather than probabilities, and an
    amplitude tail behaves like the square root of the photon-number tail, so
    the cutoff is taken at the squared bound (times 1e-2) plus a 25% margin.
    """
    return math.ceil(MONOTONE_MARGIN * auto_truncation(mixture, tail_bound ** 2 * 1e-2))


def c_l1_matrix(rho) -> float:
    """Sum of absolute off-diagonal entries."""
    a = np.abs(np.asarray(rho.entries if isinstance(rho, FockMatrix) else rho))
    off = ~np.eye(a.shape[0], dtype=bool)
    return float(np.sum(a[off]))


def c_l1(mixture: CoherentMixture, n_max: int | None = None) -> float:
    """l1 norm of coherence in the Fock basis."""
    if n_max is None:
        n_max = monotone_truncation(mixture)
    if mixture.is_pure:
        # (sum_k |c_k|)^2 - sum_k |c_k|^2
        s = np.abs(coherent_vector(mixture.amplitudes[0], n_max))
        return max(0.0, math.fsum(s) ** 2 - math.fsum(s * s))
    return c_l1_matrix(to_fock(mixture, n_max).entries)


def _shannon(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def c_re_matrix(rho) -> float:
    """Entropy of the dephased state minus entropy of the state."""
    a = np.asarray(rho.entries if isinstance(rho, FockMatrix) else rho)
    return max(0.0, _shannon(np.diag(a).real) - _entropy(a))


def c_re(mixture: CoherentMixture, n_max: int | None = None) -> float:
    """Relative entropy of coherence in the Fock basis."""
    if n_max is None:
        n_max = monotone_truncation(mixture)
    rho = to_fock(mixture, n_max).entries
    if mixture.is_pure:
        return _shannon(np.diag(rho).real)
    return c_re_matrix(rho)


def truncation_convergence(measure: Callable, mixture: CoherentMixture, n_max: int) -> float:
    """Change of ``measure(mixture, n)`` when the cutoff is doubled."""
    return abs(measure(mixture, 2 * n_max) - measure(mixture, n_max))


def _poisson_weights(A: float, n_max: int | None) -> tuple[np.ndarray, np.ndarray]:
    lam = A * A
    if n_max is None:
        n_max = auto_truncation(CoherentMixture.pure(A), 1e-15)
    k = np.arange(n_max + 1)
    return k, np.exp(-lam + 2 * k * math.log(A) - gammaln(k + 1))


def h0(A: float, n_max: int | None = None) -> float:
    """``exp(-A^2) sum_{k>=1} A^(2k)/k! ln k``."""
    if A <= 0:
        raise ValueError("A must be positive")
    k, w = _poisson_weights(A, n_max)
    return math.fsum(w[1:] * np.log(k[1:]))


def h1(A: float, n_max: int | None = None) -> float:
    """``exp(-A^2) sum_{k>=0} A^(2k)/k! ln(k+1)``."""
    if A <= 0:
        raise ValueError("A must be positive")
    k, w = _poisson_weights(A, n_max)
    return math.fsum(w * np.log1p(k))


def c_re_asymptote(A):
    """Large-amplitude relative entropy of coherence of a coherent state."""
    return np.log(A) + 0.5 + 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    relative_residual: float


def balanced_pair(A: float) -> CoherentMixture:
    """The equal-weight mixture of ``|A>`` and ``|-A>``."""
    return symmetric_pair(0.5, 2.0 * A)


def l1_slope_fit(amplitudes: Sequence[float] | None = None, mixture: bool = False) -> SlopeFit:
    """Least-squares line through the l1 coherence over a range of ``|alpha|``.

    ``mixture=True`` uses the balanced ``|A>, |-A>`` mixture instead of ``|A>``.
    """
    if amplitudes is None:
        amplitudes = np.linspace(6.0, 12.0, 13)
    A = np.asarray(amplitudes, dtype=float)
    make = balanced_pair if mixture else CoherentMixture.pure
    y = np.array([c_l1(make(a)) for a in A])
    design = np.column_stack([A, np.ones_like(A)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ np.array([slope, intercept])
    return SlopeFit(float(slope), float(intercept), float(np.linalg.norm(resid) / np.linalg.norm(y)))


def estimate_c() -> float:
    """Slope of the l1 coherence of ``|alpha>`` against ``|alpha|`` for ``|alpha|`` in [6, 12]."""
    return l1_slope_fit().slope
