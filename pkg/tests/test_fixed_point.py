import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpboost.fixed_point import FRAC_BITS, dequantize, logistic_grad_hess, quantize, sigmoid
from reference import mp_grad_hess

SCALE = 1 << FRAC_BITS


def test_quantize_known_values():
    assert quantize(0.0) == 0
    assert quantize(1.0) == SCALE
    assert quantize(-0.5) == -8388608
    assert quantize(0.25) == SCALE // 4


def test_quantize_ties_to_even():
    # at 2 fractional bits the grid step is 0.25; halfway points pick even raws
    assert quantize(0.125, 2) == 0
    assert quantize(0.375, 2) == 2
    assert quantize(-0.125, 2) == 0
    assert quantize(-0.375, 2) == -2


def test_quantize_array_matches_scalar(rng):
    xs = rng.normal(scale=3.0, size=1000)
    vec = quantize(xs)
    for x, r in zip(xs, vec):
        assert quantize(float(x)) == r


@given(st.floats(min_value=-100.0, max_value=100.0))
def test_quantize_halfstep_bound(x):
    assert abs(dequantize(quantize(x)) - x) <= 0.5 / SCALE


def test_sigmoid_basics():
    assert sigmoid(0.0) == 0.5
    assert sigmoid(1000.0) == 1.0
    assert sigmoid(-1000.0) == 0.0
    arr = sigmoid(np.array([-2.0, 0.0, 2.0]))
    assert arr[0] == pytest.approx(1.0 - arr[2], abs=1e-15)
    assert np.all(np.diff(arr) > 0)


def test_grad_hess_at_zero_margin():
    scores = np.zeros(4, dtype=np.int64)
    labels = np.array([0, 1, 0, 1])
    grads, hess = logistic_grad_hess(scores, labels)
    assert list(grads) == [SCALE // 2, -(SCALE // 2), SCALE // 2, -(SCALE // 2)]
    assert list(hess) == [SCALE // 4] * 4


def test_hessian_floor_at_saturation():
    scores = np.array([50 * SCALE, -50 * SCALE], dtype=np.int64)
    grads, hess = logistic_grad_hess(scores, np.array([1, 0]))
    assert list(grads) == [0, 0]
    assert list(hess) == [1, 1]


def test_grad_hess_against_arbitrary_precision(rng):
    raws = rng.integers(-12 * SCALE, 12 * SCALE, size=500, dtype=np.int64)
    labels = rng.integers(0, 2, size=500)
    grads, hess = logistic_grad_hess(raws, labels)
    for raw, y, g, h in zip(raws, labels, grads, hess):
        eg, eh = mp_grad_hess(int(raw), int(y), FRAC_BITS)
        assert g == eg
        assert h == eh


@settings(max_examples=200)
@given(st.integers(min_value=-(1 << 40), max_value=1 << 40), st.integers(0, 1))
def test_grad_bounds(raw, label):
    g, h = logistic_grad_hess(np.array([raw], dtype=np.int64), np.array([label]))
    assert abs(int(g[0])) <= SCALE
    assert 1 <= int(h[0]) <= SCALE // 4
