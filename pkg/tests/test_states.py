import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discordpot.states import (CoherentMixture, gram_matrix, make_binary_mixture,
                               overlap, separation)

finite = st.floats(min_value=-6, max_value=6, allow_nan=False)
amplitudes = st.builds(complex, finite, finite)


def test_overlap_examples():
    assert overlap(0, 0) == 1 + 0j
    assert abs(overlap(0.5, -0.5)) ** 2 == pytest.approx(math.exp(-1), abs=1e-15)
    z = overlap(1, 1j)
    assert abs(z) == pytest.approx(math.exp(-1), abs=1e-15)
    assert cmath.phase(z) == pytest.approx(1.0, abs=1e-15)


def test_separation_examples():
    assert separation(0, 0) == 0
    assert separation(0.5, -0.5) == 1
    assert separation(1 + 1j, 1 - 1j) == 2


@given(amplitudes, amplitudes)
def test_overlap_matches_separation(a, b):
    assert abs(overlap(a, b)) ** 2 == pytest.approx(math.exp(-separation(a, b) ** 2), abs=1e-12)
    assert abs(overlap(a, b)) <= 1 + 1e-15


@given(amplitudes, amplitudes)
def test_overlap_conjugate_symmetric(a, b):
    assert overlap(a, b) == pytest.approx(overlap(b, a).conjugate(), abs=1e-14)


@given(amplitudes, amplitudes, amplitudes)
def test_separation_is_metric(a, b, c):
    assert separation(a, b) == separation(b, a)
    assert separation(a, c) <= separation(a, b) + separation(b, c) + 1e-12
    assert (separation(a, b) == 0) == (a == b)


def test_gram_matrix_agrees_with_overlap():
    amps = [0.3 - 1j, 2j, -1.5, 0.0]
    g = gram_matrix(amps)
    for i, x in enumerate(amps):
        for j, y in enumerate(amps):
            assert g[i, j] == pytest.approx(overlap(x, y), abs=1e-15)


def test_binary_mixture():
    m = make_binary_mixture(0.5, 0.5, -0.5)
    assert m.weights == (0.5, 0.5)
    assert m.amplitudes == (0.5, -0.5)
    m = make_binary_mixture(0.3, 1, 2j)
    assert m.weights == pytest.approx((0.3, 0.7))
    assert m.amplitudes == (1, 2j)


@pytest.mark.parametrize("args", [(0.5, 1, 1), (0.0, 1, 2), (1.0, 1, 2), (-0.1, 0, 1)])
def test_binary_mixture_rejects(args):
    with pytest.raises(ValueError):
        make_binary_mixture(*args)


def test_mixture_validation():
    with pytest.raises(ValueError):
        CoherentMixture((0.5, 0.4), (0, 1))
    with pytest.raises(ValueError):
        CoherentMixture((1.2, -0.2), (0, 1))
    with pytest.raises(ValueError):
        CoherentMixture((), ())
    with pytest.raises(ValueError):
        CoherentMixture((1.0,), (complex(float("nan"), 0),))
    with pytest.raises(ValueError):
        CoherentMixture((1.0,), (float("inf"),))


def test_mixture_merges_duplicates():
    m = CoherentMixture((0.25, 0.5, 0.25), (1j, 2.0, 1j + 1e-15))
    assert m.weights == (0.5, 0.5)
    assert m.amplitudes == (1j, 2.0)
    # well above the merge threshold: kept apart
    assert len(CoherentMixture((0.5, 0.5), (0.0, 1e-13))) == 2


def test_transformed_preserves_separation():
    m = make_binary_mixture(0.3, 1 + 0.5j, -0.2j)
    t = m.transformed(phase=0.7, displacement=2 - 1j)
    assert separation(*t.amplitudes) == pytest.approx(separation(*m.amplitudes), abs=1e-14)
    assert t.weights == m.weights
