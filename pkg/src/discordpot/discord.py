"""Quantum discord of beam-splitter outputs and the discord potential.

Measurements on the measured mode are rank-one projectors onto

    |w1> = cos(theta) |u1> + exp(i phi) sin(theta) |u2>
    |w2> = sin(theta) |u1> - exp(i phi) cos(theta) |u2>

where ``|u1>, |u2>`` is the Gram-Schmidt basis of that mode's coherent span.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .splitter import TwoModeMixture, reduce, split
from .states import CoherentMixture
from .subspace import (HermitianMatrix, entropy, entropy_from_eigenvalues,
                       gram_schmidt, mixture_entropy)

MAX_ELEMENTS = 30
GRID_SIZE = 64
SIMPLEX_TOLERANCE = 1e-10
MAX_ITERATIONS = 20000
OUTCOME_FLOOR = 1e-14
CLAMP_TOLERANCE = 1e-10


class ConvergenceError(ArithmeticError):
    """The measurement optimisation did not converge."""


@dataclass(frozen=True)
class MeasurementAngles:
    theta: float
    phi: float

    @classmethod
    def normalized(cls, theta: float, phi: float) -> "MeasurementAngles":
        """Fold arbitrary angles onto theta in [0, pi/2], phi in [0, 2 pi).

        The folded pair describes the same projective measurement (up to
        relabelling of outcomes and global phases of the basis vectors).
        """
        # w(theta + pi) = -w(theta); w(-theta, phi) = +-w(theta, phi + pi)
        theta = math.remainder(theta, math.pi)
        if theta < 0:
            theta, phi = -theta, phi + math.pi
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(theta, phi)

    def vectors(self) -> np.ndarray:
        return measurement_vectors(self.theta, self.phi)


def measurement_vectors(theta, phi) -> np.ndarray:
    """Measurement basis vectors, shape ``(..., 2 outcomes, 2 components)``."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    phase = np.exp(1j * phi)
    c, s = np.cos(theta), np.sin(theta)
    w1 = np.stack([c + 0j, phase * s], axis=-1)
    w2 = np.stack([s + 0j, -phase * c], axis=-1)
    return np.stack([w1, w2], axis=-2)


@dataclass(frozen=True)
class DiscordReport:
    total_entropy: float
    entropy_A: float
    entropy_B: float
    mutual_information: float
    min_conditional_entropy: float
    optimal_angles: MeasurementAngles
    discord: float
    classical_information: float
    measured_mode: str = "A"
    clamped: bool = False

    def as_dict(self) -> dict:
        return {
            "total_entropy": self.total_entropy,
            "entropy_A": self.entropy_A,
            "entropy_B": self.entropy_B,
            "mutual_information": self.mutual_information,
            "min_conditional_entropy": self.min_conditional_entropy,
            "theta": self.optimal_angles.theta,
            "phi": self.optimal_angles.phi,
            "discord": self.discord,
            "classical_information": self.classical_information,
            "measured_mode": self.measured_mode,
            "clamped": self.clamped,
        }


def _mode_bases(state: TwoModeMixture):
    if len(state) > MAX_ELEMENTS:
        raise ValueError(f"at most {MAX_ELEMENTS} elements supported, got {len(state)}")
    basis_a = gram_schmidt(reduce(state, "A").amplitudes)
    basis_b = gram_schmidt(reduce(state, "B").amplitudes)
    return basis_a, basis_b


def two_mode_density(state: TwoModeMixture) -> HermitianMatrix:
    """Density matrix in the product of the two modes' Gram-Schmidt bases.

    Row/column index is ``i_A * dim_B + i_B``.
    """
    basis_a, basis_b = _mode_bases(state)
    xa = basis_a.coordinates(state.mode_a)
    xb = basis_b.coordinates(state.mode_b)
    psi = np.einsum("in,jn->nij", xa, xb).reshape(len(state), -1)
    p = np.asarray(state.weights)
    rho = (psi.T * p) @ psi.conj()
    return HermitianMatrix(rho, (basis_a, basis_b))


class _Landscape:
    """Conditional entropy of mode B as a function of the measurement angles on A."""

    def __init__(self, state: TwoModeMixture):
        rho = two_mode_density(state)
        basis_a, basis_b = rho.basis
        self.dim_a, self.dim_b = basis_a.effective_dim, basis_b.effective_dim
        if self.dim_a > 2:
            raise ValueError(f"measured mode spans {self.dim_a} dimensions; only 2 supported")
        self.tensor = rho.entries.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)
        # rows indexed by (i, j) of |w_i><w_j| coefficients, columns by (b, c)
        self._flat = self.tensor.transpose(0, 2, 1, 3).reshape(self.dim_a ** 2, self.dim_b ** 2)

    def marginal_b(self) -> np.ndarray:
        return np.einsum("ibic->bc", self.tensor)

    def __call__(self, theta, phi) -> np.ndarray:
        if self.dim_a == 1:
            # product state: every outcome leaves B in its marginal
            shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
            s = entropy_from_eigenvalues(np.linalg.eigvalsh(self.marginal_b()))
            return np.full(shape, float(s))
        w = measurement_vectors(theta, phi)
        coef = (w.conj()[..., :, None] * w[..., None, :]).reshape(w.shape[:-1] + (-1,))
        sigma = (coef @ self._flat).reshape(w.shape[:-1] + (self.dim_b, self.dim_b))
        sigma = 0.5 * (sigma + np.conj(np.swapaxes(sigma, -1, -2)))
        p = np.trace(sigma, axis1=-2, axis2=-1).real
        ok = p > OUTCOME_FLOOR
        safe_p = np.where(ok, p, 1.0)
        ev = np.linalg.eigvalsh(sigma / safe_p[..., None, None])
        s = entropy_from_eigenvalues(np.where(ok[..., None], ev, 0.0))
        return np.sum(np.where(ok, p * s, 0.0), axis=-1)


def conditional_entropy(state: TwoModeMixture, angles: MeasurementAngles) -> float:
    """Average entropy of mode B after the projective measurement ``angles`` on A."""
    return float(_Landscape(state)(angles.theta, angles.phi))


def minimize_conditional_entropy(state: TwoModeMixture, grid: int = GRID_SIZE):
    """Minimise the conditional entropy of B over measurements on A.

    A ``grid x grid`` scan over (theta, phi) seeds a Nelder-Mead refinement
    that stops once the simplex has shrunk below ``SIMPLEX_TOLERANCE``.

    Returns
    -------
    (MeasurementAngles, float)
    """
    f = _Landscape(state)
    if f.dim_a == 1:
        return MeasurementAngles(0.0, 0.0), float(f(0.0, 0.0))

    thetas = np.linspace(0.0, 0.5 * math.pi, grid)
    phis = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    values = f(thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmin(values), values.shape)
    x0 = np.array([thetas[i], phis[j]])
    step = np.array([thetas[1] - thetas[0], phis[1] - phis[0]])
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])

    res = minimize(lambda x: float(f(x[0], x[1])), x0, method="Nelder-Mead",
                   options={"xatol": SIMPLEX_TOLERANCE, "fatol": np.inf,
                            "maxiter": MAX_ITERATIONS, "maxfev": 2 * MAX_ITERATIONS,
                            "initial_simplex": simplex})
    if not res.success:
        raise ConvergenceError(f"Nelder-Mead failed: {res.message}")
    grid_best = float(values[i, j])
    if res.fun <= grid_best:
        return MeasurementAngles.normalized(*res.x), float(res.fun)
    return MeasurementAngles.normalized(*x0), grid_best


def discord(state: TwoModeMixture, measured: str = "A") -> DiscordReport:
    """Discord of ``state`` with the von Neumann measurement on mode ``measured``."""
    measured = measured.upper()
    if measured not in ("A", "B"):
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    work = state if measured == "A" else state.swapped()

    s_ab = entropy(two_mode_density(work))
    s_a = mixture_entropy(reduce(state, "A"))
    s_b = mixture_entropy(reduce(state, "B"))
    s_measured = s_a if measured == "A" else s_b
    angles, s_cond = minimize_conditional_entropy(work)

    d = s_measured - s_ab + s_cond
    clamped = False
    if d < 0:
        if d < -CLAMP_TOLERANCE:
            raise ConvergenceError(f"negative discord {d:.3e} beyond rounding")
        d, clamped = 0.0, True
    mi = s_a + s_b - s_ab
    return DiscordReport(
        total_entropy=s_ab,
        entropy_A=s_a,
        entropy_B=s_b,
        mutual_information=mi,
        min_conditional_entropy=s_cond,
        optimal_angles=angles,
        discord=d,
        classical_information=mi - d,
        measured_mode=measured,
        clamped=clamped,
    )


def discord_potential(mixture: CoherentMixture) -> float:
    """Discord of the beam-splitter output of a two-element coherent mixture."""
    if len(mixture) != 2:
        raise ValueError(f"discord potential needs a two-element mixture, got {len(mixture)}")
    return discord(split(mixture)).discord


# -- curves along the separation axis -------------------------------------------------

def symmetric_output(a: float, d: float) -> TwoModeMixture:
    """Beam-splitter output whose mode-A components are separated by ``d``."""
    from .states import symmetric_pair

    return split(symmetric_pair(a, math.sqrt(2.0) * d))


def locate_discord_maximum(a: float = 0.5, lo: float = 0.05, hi: float = 2.0,
                           step: float = 1e-3, xtol: float = 1e-6):
    """Output separation ``d`` maximising the discord at fixed ``a``.

    Scans ``[lo, hi]`` with spacing ``step`` and refines the best bracket
    with a bounded Brent (golden-section plus parabolic) search.

    Returns ``(d_max, discord_max)``.
    """
    from scipy.optimize import minimize_scalar

    grid = np.arange(lo, hi + 0.5 * step, step)
    values = np.array([discord(symmetric_output(a, d)).discord for d in grid])
    i = int(np.argmax(values))
    left, right = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda d: -discord(symmetric_output(a, d)).discord,
                          bounds=(left, right), method="bounded", options={"xatol": xtol})
    if -res.fun >= values[i]:
        return float(res.x), float(-res.fun)
    return float(grid[i]), float(values[i])


def quantum_minus_classical(a: float, d: float) -> float:
    """Discord minus the classical part of the mutual information."""
    r = discord(symmetric_output(a, d))
    return r.discord - r.classical_information


def locate_crossovers(a: float = 0.5, lo: float = 0.05, hi: float = 0.7,
                      step: float = 1e-3, xtol: float = 1e-9) -> list[float]:
    """Separations where discord and classical information are equal.

    Every sign change of ``D - I_cl`` on the scan grid is refined by Brent's
    method.
    """
    from scipy.optimize import brentq

    grid = np.arange(lo, hi + 0.5 * step, step)
    values = np.array([quantum_minus_classical(a, d) for d in grid])
    roots = []
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        roots.append(float(brentq(lambda d: quantum_minus_classical(a, d),
                                  grid[i], grid[i + 1], xtol=xtol)))
    return roots
