"""Error probabilities for telling two coherent states apart."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erfc


def _check_probability(a: float) -> None:
    if not 0.0 < a < 1.0:
        raise ValueError(f"prior probability must lie in (0, 1), got {a!r}")


def _check_separation(d0) -> None:
    if np.any(np.asarray(d0) < 0) or not np.all(np.isfinite(d0)):
        raise ValueError(f"separation must be finite and non-negative, got {d0!r}")


def helstrom_error(a: float, d0):
    """Minimum error probability over all measurements (Helstrom bound).

    ``0.5 * (1 - sqrt(1 - 4 a (1 - a) exp(-d0**2)))``, the general-prior
    form.  Unequal priors are an extension; only ``a = 1/2`` is covered by
    the acceptance checks.
    Evaluated as ``0.5 x / (1 + sqrt(1 - x))`` to avoid cancellation.
    """
    _check_probability(a)
    _check_separation(d0)
    x = 4.0 * a * (1.0 - a) * np.exp(-np.square(d0))
    out = 0.5 * x / (1.0 + np.sqrt(1.0 - x))
    return float(out) if np.ndim(out) == 0 else out


def homodyne_error(a: float, d0):
    """Error probability of the homodyne discriminator, ``0.5 erfc(d0 / sqrt 2)``.

    Only equal priors are supported.
    """
    if a != 0.5:
        raise ValueError(f"homodyne error is only defined here for a = 1/2, got {a!r}")
    _check_separation(d0)
    out = 0.5 * erfc(np.asarray(d0, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def advantage(d0):
    """Homodyne error minus Helstrom error at equal priors."""
    return homodyne_error(0.5, d0) - helstrom_error(0.5, d0)


@dataclass(frozen=True)
class DiscriminationPoint:
    a: float
    d0: float
    p_helstrom: float
    p_homodyne: float
    advantage: float


def discrimination_point(d0: float) -> DiscriminationPoint:
    hel = helstrom_error(0.5, d0)
    hom = homodyne_error(0.5, d0)
    return DiscriminationPoint(0.5, float(d0), hel, hom, hom - hel)


def max_advantage(lo: float = 0.0, hi: float = 6.0, grid: int = 6001, xtol: float = 1e-10):
    """Location and value of the largest quantum advantage on ``[lo, hi]``.

    Dense grid for bracketing, then a bounded scalar refinement.
    """
    d = np.linspace(lo, hi, grid)
    i = int(np.argmax(advantage(d)))
    left, right = d[max(i - 1, 0)], d[min(i + 1, grid - 1)]
    res = minimize_scalar(lambda x: -advantage(x), bounds=(left, right),
                          method="bounded", options={"xatol": xtol})
    return float(res.x), float(-res.fun)
