import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from pytest import approx

from gibbs_mixing.core_model import InternalLabels, PhysicalConfig, ScenarioPair, ScenarioSpec, Stage, Statistics
from gibbs_mixing.ensembles import scenario_partition
from gibbs_mixing.errors import ConfigMismatchError, FitError, ParameterError
from gibbs_mixing.thermo import (
    asymptotic_work_exponent,
    delta_entropy,
    entropy,
    evaluate_pair,
    fit_power_law,
    free_energy,
    mean_energy,
    mixing_entropy_closed_form,
    work,
)
from gibbs_mixing.verification import all_scenarios

LN2 = math.log(2.0)


def test_single_particle_entropy_from_probabilities(half_config):
    # Two colored distinguishable particles in the full well: S = 2 * S_1.
    spec = ScenarioSpec(2, InternalLabels.WITH_COLORS, Stage.MIXED, Statistics.DISTINGUISHABLE)
    weights = [0.5 ** (n * n) for n in range(1, 30)]
    z = math.fsum(weights)
    single = -math.fsum((w / z) * math.log(w / z) for w in weights)
    assert entropy(scenario_partition(spec, half_config), half_config) == approx(2.0 * single, rel=1e-12)


@pytest.mark.parametrize("n, labels, statistics, beta, length", [
    (4, InternalLabels.WITH_COLORS, Statistics.FERMI, 8.0, 2.0),
    (4, InternalLabels.WITHOUT_COLORS, Statistics.FERMI, 8.0, 2.0),
    (2, InternalLabels.WITH_COLORS, Statistics.BOSE, 40.0, 2.0),
    (6, InternalLabels.WITH_COLORS, Statistics.FERMI, 3.0, 2.0),
])
def test_deep_low_temperature_points_evaluate(n, labels, statistics, beta, length):
    report = evaluate_pair(ScenarioPair.of(n, labels, statistics), PhysicalConfig(beta, length))
    assert report.log_z_unmixed < -300.0
    for value in (report.delta_s, report.delta_s_error, report.work, report.work_error):
        assert math.isfinite(value)
    assert report.s_unmixed >= 0.0 and report.s_mixed >= 0.0


def test_classical_value_when_nome_rounds_to_one():
    report = evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.BOSE), PhysicalConfig(1.0, 1e9))
    assert report.q == 1.0
    assert report.delta_s == approx(2 * LN2, abs=1e-6)


@pytest.mark.parametrize("beta, length", [(1.0, 10.0), (0.3, 2.0), (2.5, 40.0)])
def test_closed_form_mixing_entropy(beta, length):
    config = PhysicalConfig(beta, length)
    report = evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.BOSE), config)
    assert report.delta_s == approx(mixing_entropy_closed_form(config), rel=1e-10, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=1.0, max_value=50.0))
def test_colored_pair_entropy_change_is_species_independent(beta, length):
    config = PhysicalConfig(beta, length)
    values = [
        evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, statistics), config).delta_s
        for statistics in Statistics
    ]
    assert max(values) - min(values) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=5.0),
    st.floats(min_value=1.5, max_value=30.0),
    st.sampled_from(all_scenarios((2, 4))),
)
def test_entropy_is_non_negative(beta, length, spec):
    config = PhysicalConfig(beta, length)
    assert entropy(scenario_partition(spec, config), config) >= 0.0


def test_classical_limits():
    config = PhysicalConfig(1.0, 1e4)
    two = evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.FERMI), config)
    assert two.delta_s == approx(2 * LN2, abs=1e-3)
    four = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITH_COLORS, Statistics.BOSE), config)
    assert four.delta_s == approx(4 * LN2, abs=1e-3)
    for statistics in (Statistics.BOSE, Statistics.FERMI):
        plain = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITHOUT_COLORS, statistics), config)
        assert plain.delta_s == approx(0.0, abs=1e-3)


def test_classical_deviation_shrinks_with_width():
    pair = ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.BOSE)
    deviations = [abs(evaluate_pair(pair, PhysicalConfig(1.0, length)).delta_s - 2 * LN2) for length in (1e2, 1e3, 1e4)]
    assert deviations[0] > deviations[1] > deviations[2]


def test_low_temperature_bose_fermi_split():
    config = PhysicalConfig(3.0, 2.0)
    bose = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITH_COLORS, Statistics.BOSE), config)
    fermi = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITH_COLORS, Statistics.FERMI), config)
    assert abs(bose.delta_s - fermi.delta_s) > 1e-6


@pytest.mark.parametrize("spec", [s for s in all_scenarios((2, 4)) if s.stage is Stage.UNMIXED], ids=lambda s: s.label())
def test_work_is_free_energy_difference(spec):
    config = PhysicalConfig(0.7, 4.0)
    pair = ScenarioPair(spec, spec.with_stage(Stage.MIXED))
    report = evaluate_pair(pair, config)
    via_energy = (report.mean_energy_mixed - report.mean_energy_unmixed) - config.temperature * (
        report.s_mixed - report.s_unmixed
    )
    assert report.work == approx(via_energy, abs=1e-9)
    assert report.work == approx(report.free_energy_mixed - report.free_energy_unmixed, abs=1e-12)


def test_pair_functions_agree_with_report():
    config = PhysicalConfig(0.5, 10.0)
    pair = ScenarioPair.of(2, InternalLabels.WITHOUT_COLORS, Statistics.BOSE)
    unmixed = scenario_partition(pair.unmixed, config)
    mixed = scenario_partition(pair.mixed, config)
    report = evaluate_pair(pair, config)
    assert delta_entropy(unmixed, mixed, config) == approx(report.delta_s)
    assert work(unmixed, mixed, config) == approx(report.work)
    assert mean_energy(mixed, config) == approx(report.mean_energy_mixed)
    assert free_energy(unmixed, config) == approx(-unmixed.log_z / config.beta)
    assert report.delta_s_error < 1e-9
    assert report.work_error < 1e-9


def test_config_mismatch_is_rejected():
    spec = ScenarioSpec(2, InternalLabels.WITH_COLORS, Stage.MIXED, Statistics.BOSE)
    partition = scenario_partition(spec, PhysicalConfig(1.0, 10.0))
    with pytest.raises(ConfigMismatchError):
        entropy(partition, PhysicalConfig(1.0, 11.0))


def test_power_law_fit_exact():
    temperatures = np.geomspace(1e2, 1e5, 12)
    fit = fit_power_law(temperatures, -3.0 * temperatures ** 0.5)
    assert fit.slope == approx(0.5, abs=1e-6)
    assert fit.r_squared == approx(1.0, abs=1e-12)
    assert fit.points == 12
    tail = fit_power_law(temperatures, temperatures ** 2, tail=4)
    assert tail.points == 4
    assert tail.slope == approx(2.0, abs=1e-6)


def test_power_law_fit_rejects_sign_change():
    with pytest.raises(FitError):
        fit_power_law([1.0, 2.0, 3.0], [1.0, -1.0, 2.0])
    with pytest.raises(FitError):
        fit_power_law([1.0], [1.0])


def test_work_exponent_needs_decreasing_betas():
    pair = ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.BOSE)
    with pytest.raises(ParameterError):
        asymptotic_work_exponent(pair, [1e-3, 1e-2], 10.0)


@pytest.mark.parametrize("labels, low, high", [
    (InternalLabels.WITHOUT_COLORS, 0.45, 0.55),
    (InternalLabels.WITH_COLORS, 0.95, 1.01),
])
def test_high_temperature_work_exponent(labels, low, high):
    betas = 1.0 / np.geomspace(1e2, 1e5, 12)
    fit = asymptotic_work_exponent(ScenarioPair.of(2, labels, Statistics.BOSE), betas, 10.0)
    assert low < fit.slope < high
    assert fit.r_squared > 0.999
