import logging
import math

from hypothesis import given, settings, strategies as st
import mpmath
import pytest
from pytest import approx

from gibbs_mixing.errors import ParameterError
from gibbs_mixing.theta_engine import (
    DEFAULT_TOL,
    classical_z1,
    quantum_z1,
    tail_bound,
    theta3,
    weighted_series,
    z1,
)

DUALITY_NOMES = [0.05, 0.2, 0.5, 0.9, 0.99]


def jtheta3(q):
    with mpmath.workdps(60):
        return float(mpmath.jtheta(3, 0, mpmath.mpf(q)))


def test_theta3_small_nome_by_hand():
    assert theta3(0.1).value == approx(1.0 + 2.0 * (0.1 + 1e-4 + 1e-9 + 1e-16), abs=1e-15)


def test_theta3_at_zero_nome():
    assert theta3(0.0).value == 1.0
    assert z1(0.0).value == 0.0
    assert weighted_series(0.0).value == 0.0


@pytest.mark.parametrize("q", [1.0, 1.5, -0.1, math.nan])
def test_nome_outside_unit_interval(q):
    with pytest.raises(ParameterError):
        theta3(q)


def test_invalid_tolerance():
    with pytest.raises(ParameterError):
        theta3(0.5, tol=0.0)


@pytest.mark.parametrize("q", DUALITY_NOMES)
def test_duality_identity(q):
    log_q = math.log(q)
    lhs = math.sqrt(-log_q / math.pi) * theta3(q).value
    rhs = theta3(math.exp(math.pi ** 2 / log_q)).value
    assert abs(lhs - rhs) <= 1e-12


def test_theta3_strictly_increasing():
    values = [theta3(i / 2001).value for i in range(1, 2001)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))


@pytest.mark.parametrize("k", range(2, 7))
def test_theta3_approaches_gaussian_integral(k):
    q = 1.0 - 10.0 ** -k
    assert theta3(q).value * math.sqrt(-math.log(q) / math.pi) == approx(1.0, abs=1e-12)


def test_near_one_matches_long_direct_sum():
    q = 0.99
    with mpmath.workdps(40):
        reference = 1 + 2 * mpmath.fsum(mpmath.mpf(q) ** (n * n) for n in range(1, 1000))
    assert theta3(q).value == approx(float(reference), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.995))
def test_theta3_against_mpmath(q):
    result = theta3(q)
    assert result.value == approx(jtheta3(q), rel=1e-12)
    assert result.error_bound <= DEFAULT_TOL * result.value


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99))
def test_z1_is_half_theta_minus_one(tau):
    assert z1(tau).value == approx((jtheta3(tau) - 1.0) / 2.0, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("tau", [0.1, 0.3, 0.5, 0.9, 0.999])
def test_weighted_series_against_mpmath(tau):
    with mpmath.workdps(40):
        reference = mpmath.fsum(n * n * mpmath.mpf(tau) ** (n * n) for n in range(1, 400))
    assert weighted_series(tau).value == approx(float(reference), rel=1e-12)


def test_weighted_series_is_the_tau_derivative():
    tau, h = 0.3, 1e-6
    central = (z1(tau + h).value - z1(tau - h).value) / (2.0 * h)
    assert central == approx(weighted_series(tau).value / tau, abs=1e-5)


def test_weighted_series_power_guard():
    with pytest.raises(ParameterError):
        weighted_series(0.5, power=2)


def test_tiny_tau_keeps_relative_precision():
    tau = 1e-80
    assert z1(tau).value == approx(1e-80, rel=1e-12)
    assert weighted_series(tau).value == approx(1e-80, rel=1e-12)


@given(
    st.floats(min_value=-5.0, max_value=-0.05),
    st.integers(min_value=1, max_value=30),
    st.sampled_from([0, 1]),
)
def test_tail_bound_majorizes_tail(log_tau, n, power):
    tail = math.fsum(
        m ** (2 * power) * math.exp(m * m * log_tau) for m in range(n + 1, n + 400)
    )
    assert tail <= tail_bound(log_tau, n, power) * (1.0 + 1e-12)


def test_asymptotic_forms():
    assert classical_z1(0.9999) == approx(z1(0.9999).value, rel=1e-12)
    assert quantum_z1(1e-3) == approx(z1(1e-3).value, rel=1e-8)


def test_duality_branch_is_logged(caplog):
    with caplog.at_level(logging.DEBUG, logger="gibbs_mixing.theta_engine"):
        theta3(0.1)
        assert not [r for r in caplog.records if "对偶" in r.getMessage()]
        theta3(0.9)
        weighted_series(0.9)
    messages = [r.getMessage() for r in caplog.records if "对偶" in r.getMessage()]
    assert len(messages) == 2
