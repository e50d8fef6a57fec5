import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from immse.gaussian import (binary_entropy, bits_to_nats, db_to_linear, gaussian_capacity,
                            gaussian_mmse, linear_to_db, nats_to_bits, q_function)
from immse.oracle import scalar_mmse_quadrature

variances = st.floats(min_value=1e-6, max_value=1.0)
snrs = st.floats(min_value=0.0, max_value=1e3)
probs = st.floats(min_value=0.0, max_value=1.0)


def test_mmse_examples():
    assert gaussian_mmse(1.0, 0.0) == 1.0
    assert gaussian_mmse(0.4, 2.0) == pytest.approx(2.0 / 9.0, rel=1e-15)
    assert gaussian_mmse(0.0, 5.0) == 0.0


def test_mmse_vectorizes():
    out = gaussian_mmse(0.5, np.array([0.0, 1.0, 2.0]))
    np.testing.assert_allclose(out, [0.5, 1 / 3, 0.25])


@pytest.mark.parametrize("variance, gamma", [(-0.1, 1.0), (1.5, 1.0), (0.5, -1.0),
                                             (0.5, float("nan")), (0.5, float("inf"))])
def test_mmse_rejects_bad_inputs(variance, gamma):
    with pytest.raises(ValueError):
        gaussian_mmse(variance, gamma)


def test_capacity_examples():
    assert gaussian_capacity(0.0) == 0.0
    assert gaussian_capacity(1.0) == pytest.approx(0.5 * math.log(2.0), rel=1e-15)
    # 0.5 ln 3.5179, computed at 30 digits
    assert gaussian_capacity(2.5179) == pytest.approx(0.62893211033487352, rel=1e-14)


def test_capacity_matches_integrated_mmse():
    # capacity is half the integral of the unit-variance Gaussian MMSE
    for s in (1.0, 2.5179):
        val, _ = quad(lambda g: gaussian_mmse(1.0, g), 0.0, s, epsabs=1e-14)
        assert 0.5 * val == pytest.approx(gaussian_capacity(s), rel=1e-12)


def test_q_function_examples():
    assert q_function(gaussian_mmse(0.3, 1.7), 0.3, 1.7) == 0.0
    const = [(1.0, 0.5), (-1.0, 0.5)]
    assert q_function(scalar_mmse_quadrature(const, 0.0), 1.0, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert q_function(scalar_mmse_quadrature(const, 1.0), 1.0, 1.0) > 0.0


def test_binary_entropy_examples():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    # mpmath at 40 digits gives 1.8052328301826526e-4
    assert binary_entropy(1e-5) == pytest.approx(1.8052328301826526e-4, rel=1e-11)


@pytest.mark.parametrize("p", [-1e-9, 1.0 + 1e-9, float("nan")])
def test_binary_entropy_rejects(p):
    with pytest.raises(ValueError):
        binary_entropy(p)


def test_unit_conversions():
    assert nats_to_bits(math.log(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert bits_to_nats(1.0) == pytest.approx(math.log(2.0), rel=1e-15)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(100.0) == pytest.approx(20.0)


@given(variances, snrs, st.floats(min_value=1e-3, max_value=10.0))
def test_mmse_bounded_and_decreasing(v, g, dg):
    m = gaussian_mmse(v, g)
    assert 0.0 < m <= v
    assert gaussian_mmse(v, g + dg) < m


@given(variances, st.floats(min_value=1e-3, max_value=50.0))
def test_immse_self_consistency(v, s):
    val, _ = quad(lambda g: gaussian_mmse(v, g), 0.0, s, epsabs=1e-13, epsrel=1e-12)
    assert 0.5 * val == pytest.approx(0.5 * math.log1p(v * s), rel=1e-9, abs=1e-13)


@given(probs)
def test_binary_entropy_symmetric_exactly(p):
    assert binary_entropy(p) == binary_entropy(1.0 - p)


@given(probs)
def test_binary_entropy_range(p):
    assert 0.0 <= binary_entropy(p) <= 1.0


@given(snrs, snrs)
def test_capacity_concave(a, b):
    mid = gaussian_capacity(0.5 * (a + b))
    assert mid >= 0.5 * (gaussian_capacity(a) + gaussian_capacity(b)) - 1e-15
