import math

from hypothesis import given, settings, strategies as st
import mpmath
import pytest
from pytest import approx

from gibbs_mixing.core_model import InternalLabels, PhysicalConfig, ScenarioSpec, Stage, Statistics, Well
from gibbs_mixing.ensembles import (
    MAX_PARTICLES,
    exchange_sign,
    scenario_partition,
    table_polynomial,
    theta_closed_form,
    zn_ideal,
)
from gibbs_mixing.errors import NumericRangeError, ParameterError
from gibbs_mixing.oracle import TruncatedSpectrum, enumerate_group, oracle_partition
from gibbs_mixing.theta_engine import z1
from gibbs_mixing.verification import mp_z1


def mp_table(n, statistics, q):
    with mpmath.workdps(80):
        singles = [None] + [mp_z1(mpmath.mpf(q) ** k) for k in range(1, n + 1)]
        return float(table_polynomial(n, statistics, singles))


def test_exchange_sign():
    assert exchange_sign(Statistics.BOSE) == 1
    assert exchange_sign(Statistics.FERMI) == -1
    assert exchange_sign(Statistics.DISTINGUISHABLE) is None


def test_two_bosons_by_hand():
    q = 0.5
    expected = (z1(q).value ** 2 + z1(q ** 2).value) / 2.0
    assert zn_ideal(2, Statistics.BOSE, Well.FULL, q).value == approx(expected, rel=1e-14)


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("statistics", [Statistics.BOSE, Statistics.FERMI])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_recursion_matches_table_polynomials(n, statistics, q):
    value = zn_ideal(n, statistics, Well.FULL, q).value
    assert value == approx(mp_table(n, statistics, q), rel=1e-12)


def test_three_bosons_against_enumeration():
    states = enumerate_group(TruncatedSpectrum.build(Well.FULL, 40), 3, Statistics.BOSE)
    assert zn_ideal(3, Statistics.BOSE, Well.FULL, 0.5).value == approx(oracle_partition(states, 0.5), rel=1e-12)


def test_fermi_low_temperature_keeps_relative_precision():
    # Ground state {1, 2, 3, 4}; the next state {1, 2, 3, 5} is 9 powers of q higher.
    q = 0.01
    assert zn_ideal(4, Statistics.FERMI, Well.FULL, q).value == approx(q ** 30, rel=1e-12)
    assert zn_ideal(4, Statistics.FERMI, Well.HALF, q).value == approx(q ** 120, rel=1e-12)


def test_distinguishable_is_power_of_z1():
    single = z1(0.7).value
    assert zn_ideal(4, Statistics.DISTINGUISHABLE, Well.FULL, 0.7).value == approx(single ** 4, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95), st.integers(min_value=2, max_value=6))
def test_bose_dominates_fermi(q, n):
    bose = zn_ideal(n, Statistics.BOSE, Well.FULL, q).value
    fermi = zn_ideal(n, Statistics.FERMI, Well.FULL, q).value
    assert bose >= fermi > 0.0


def test_particle_cap_and_nome_guards():
    with pytest.raises(ParameterError):
        zn_ideal(MAX_PARTICLES + 1, Statistics.BOSE, Well.FULL, 0.5)
    with pytest.raises(ParameterError):
        zn_ideal(2, Statistics.BOSE, Well.FULL, 0.0)
    with pytest.raises(ParameterError):
        table_polynomial(5, Statistics.BOSE, [None] + [0.1] * 5)


def test_colored_unmixed_pair_is_half_well_square(half_config):
    spec = ScenarioSpec(2, InternalLabels.WITH_COLORS, Stage.UNMIXED, Statistics.BOSE)
    result = scenario_partition(spec, half_config)
    assert result.z.value == approx(z1(0.5 ** 4).value ** 2, rel=1e-13)
    assert result.z.value == approx(0.06251526 ** 2, rel=1e-6)
    assert result.log_z == approx(math.log(result.z.value))


def test_without_colors_fermi_mixed_is_ideal_gas(half_config):
    spec = ScenarioSpec(4, InternalLabels.WITHOUT_COLORS, Stage.MIXED, Statistics.FERMI)
    assert scenario_partition(spec, half_config).z.value == approx(
        zn_ideal(4, Statistics.FERMI, Well.FULL, 0.5).value, rel=1e-14
    )


@pytest.mark.parametrize("beta, length", [(1.0, 3.0), (0.5, 10.0), (0.1, 50.0)])
@pytest.mark.parametrize("labels", list(InternalLabels))
@pytest.mark.parametrize("statistics", [Statistics.BOSE, Statistics.FERMI])
@pytest.mark.parametrize("stage", list(Stage))
def test_theta_closed_forms(beta, length, labels, statistics, stage):
    spec = ScenarioSpec(2, labels, stage, statistics)
    config = PhysicalConfig(beta, length)
    assert scenario_partition(spec, config).z.value == approx(theta_closed_form(spec, config), rel=1e-11)


@pytest.mark.parametrize("labels, statistics", [
    (InternalLabels.WITH_COLORS, Statistics.DISTINGUISHABLE),
    (InternalLabels.WITH_COLORS, Statistics.FERMI),
    (InternalLabels.WITHOUT_COLORS, Statistics.BOSE),
    (InternalLabels.WITHOUT_COLORS, Statistics.FERMI),
])
def test_beta_derivative_against_finite_difference(labels, statistics):
    spec = ScenarioSpec(4, labels, Stage.UNMIXED, statistics)
    beta, length, h = 0.8, 3.0, 1e-5
    analytic = scenario_partition(spec, PhysicalConfig(beta, length)).beta_dlog_z.value
    upper = scenario_partition(spec, PhysicalConfig(beta + h, length)).log_z
    lower = scenario_partition(spec, PhysicalConfig(beta - h, length)).log_z
    assert analytic == approx(beta * (upper - lower) / (2.0 * h), rel=1e-6)


def test_underflowing_partition_function_is_a_range_error():
    spec = ScenarioSpec(4, InternalLabels.WITH_COLORS, Stage.UNMIXED, Statistics.FERMI)
    with pytest.raises(NumericRangeError):
        scenario_partition(spec, PhysicalConfig(beta=20.0, length=1.0))


def test_scenario_partition_type_guard(half_config):
    with pytest.raises(ParameterError):
        scenario_partition("N=2", half_config)


def test_tiny_partition_function_keeps_finite_derivative_error():
    # Z ~ q**8 ~ 1e-172: its square underflows, Z itself does not.
    config = PhysicalConfig(beta=40.0, length=2.0)
    spec = ScenarioSpec(2, InternalLabels.WITH_COLORS, Stage.UNMIXED, Statistics.BOSE)
    result = scenario_partition(spec, config)
    assert result.log_z == approx(8.0 * config.log_q, rel=1e-12)
    assert result.beta_dlog_z.value == approx(8.0 * config.log_q, rel=1e-12)
    assert math.isfinite(result.beta_dlog_z.error_bound)


def test_nome_rounding_to_one_still_evaluates():
    config = PhysicalConfig(beta=1.0, length=1e9)
    spec = ScenarioSpec(2, InternalLabels.WITH_COLORS, Stage.MIXED, Statistics.FERMI)
    result = scenario_partition(spec, config)
    assert result.q == 1.0
    assert math.isfinite(result.log_z) and result.log_z > 0.0
    with pytest.raises(ParameterError):
        config.q
