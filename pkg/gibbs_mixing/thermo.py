"""Entropy, mean energy, mixing-entropy change and isothermal work."""

from dataclasses import dataclass
import logging
import math
from typing import Optional, Sequence

import numpy as np

from .core_model import PhysicalConfig, ScenarioPair
from .ensembles import PartitionResult, scenario_partition
from .errors import ConfigMismatchError, FitError, NumericRangeError, ParameterError
from .theta_engine import DEFAULT_TOL, theta3_from_log, weighted_series_from_log

_EPS = 2.0 ** -52
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThermoReport:
    pair: ScenarioPair
    beta: float
    length: float
    q: float
    log_z_unmixed: float
    log_z_mixed: float
    s_unmixed: float
    s_mixed: float
    delta_s: float
    work: float
    mean_energy_unmixed: float
    mean_energy_mixed: float
    free_energy_unmixed: float
    free_energy_mixed: float
    delta_s_error: float
    work_error: float

    def as_items(self):
        return [
            ("scenario", self.pair.label()),
            ("beta", self.beta),
            ("length", self.length),
            ("q", self.q),
            ("log_z_unmixed", self.log_z_unmixed),
            ("log_z_mixed", self.log_z_mixed),
            ("s_unmixed", self.s_unmixed),
            ("s_mixed", self.s_mixed),
            ("delta_s", self.delta_s),
            ("delta_s_error", self.delta_s_error),
            ("work", self.work),
            ("work_error", self.work_error),
            ("mean_energy_unmixed", self.mean_energy_unmixed),
            ("mean_energy_mixed", self.mean_energy_mixed),
            ("free_energy_unmixed", self.free_energy_unmixed),
            ("free_energy_mixed", self.free_energy_mixed),
        ]


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    r_squared: float
    points: int


def _check_config(partition: PartitionResult, config: PhysicalConfig) -> None:
    if partition.config != config:
        raise ConfigMismatchError(
            f"{partition.scenario.label()} was evaluated at {partition.config}, not {config}"
        )


def _entropy_with_error(partition: PartitionResult):
    if not partition.z.value > 0.0:
        raise NumericRangeError(f"partition function of {partition.scenario.label()} is not positive")
    s = partition.log_z - partition.beta_dlog_z.value
    error = (
        partition.z.error_bound / partition.z.value
        + partition.beta_dlog_z.error_bound
        + 64 * _EPS * (abs(partition.log_z) + abs(partition.beta_dlog_z.value))
    )
    if s < -error:
        raise NumericRangeError(
            f"negative entropy {s!r} for {partition.scenario.label()} beyond its error {error!r}"
        )
    return max(s, 0.0), error


def entropy(partition: PartitionResult, config: PhysicalConfig) -> float:
    """Gibbs entropy S = (1 - beta d/dbeta) ln Z."""
    _check_config(partition, config)
    return _entropy_with_error(partition)[0]


def mean_energy(partition: PartitionResult, config: PhysicalConfig) -> float:
    _check_config(partition, config)
    return -partition.beta_dlog_z.value / config.beta


def free_energy(partition: PartitionResult, config: PhysicalConfig) -> float:
    _check_config(partition, config)
    return -partition.log_z / config.beta


def _check_pair(unmixed: PartitionResult, mixed: PartitionResult, config: PhysicalConfig) -> None:
    _check_config(unmixed, config)
    _check_config(mixed, config)


def delta_entropy(unmixed: PartitionResult, mixed: PartitionResult, config: PhysicalConfig) -> float:
    _check_pair(unmixed, mixed, config)
    return entropy(mixed, config) - entropy(unmixed, config)


def work(unmixed: PartitionResult, mixed: PartitionResult, config: PhysicalConfig) -> float:
    """Isothermal work k_B T (ln Z_U - ln Z_M)."""
    _check_pair(unmixed, mixed, config)
    return (unmixed.log_z - mixed.log_z) / config.beta


def evaluate_pair(pair: ScenarioPair, config: PhysicalConfig, tol: float = DEFAULT_TOL) -> ThermoReport:
    unmixed = scenario_partition(pair.unmixed, config, tol)
    mixed = scenario_partition(pair.mixed, config, tol)
    s_unmixed, s_unmixed_error = _entropy_with_error(unmixed)
    s_mixed, s_mixed_error = _entropy_with_error(mixed)
    log_z_error = unmixed.z.error_bound / unmixed.z.value + mixed.z.error_bound / mixed.z.value
    return ThermoReport(
        pair=pair,
        beta=config.beta,
        length=config.length,
        q=unmixed.q,
        log_z_unmixed=unmixed.log_z,
        log_z_mixed=mixed.log_z,
        s_unmixed=s_unmixed,
        s_mixed=s_mixed,
        delta_s=s_mixed - s_unmixed,
        work=work(unmixed, mixed, config),
        mean_energy_unmixed=mean_energy(unmixed, config),
        mean_energy_mixed=mean_energy(mixed, config),
        free_energy_unmixed=free_energy(unmixed, config),
        free_energy_mixed=free_energy(mixed, config),
        delta_s_error=s_unmixed_error + s_mixed_error,
        work_error=log_z_error / config.beta,
    )


def mixing_entropy_closed_form(config: PhysicalConfig, tol: float = DEFAULT_TOL) -> float:
    """Two colored particles: 2 (beta d/dbeta - 1) ln[(theta3(Q) - 1) / (theta3(Q^(1/4)) - 1)].

    Q = q**4 is the half-well base; beta d/dbeta of
    theta3(tau) - 1 equals 2 ln(tau) S1(tau).
    """

    def log_and_derivative(log_tau: float):
        theta_minus_one = theta3_from_log(log_tau, tol).value - 1.0
        derivative = 2.0 * log_tau * weighted_series_from_log(log_tau, 1, tol).value
        return math.log(theta_minus_one), derivative / theta_minus_one

    log_big_q = 4.0 * config.log_q
    ln_top, d_top = log_and_derivative(log_big_q)
    ln_bottom, d_bottom = log_and_derivative(log_big_q / 4.0)
    return 2.0 * ((d_top - d_bottom) - (ln_top - ln_bottom))


def fit_power_law(temperatures: Sequence[float], works: Sequence[float], tail: Optional[int] = None) -> PowerLawFit:
    """Least-squares slope of ln|W| against ln T over the last `tail` points."""
    temperatures = np.asarray(temperatures, dtype=float)
    works = np.asarray(works, dtype=float)
    if temperatures.shape != works.shape or temperatures.ndim != 1:
        raise FitError("temperatures and works must be 1-d arrays of equal length")
    if tail is not None:
        if tail < 2:
            raise FitError(f"tail must keep at least two points, got {tail}")
        order = np.argsort(temperatures)
        temperatures = temperatures[order][-tail:]
        works = works[order][-tail:]
    if temperatures.size < 2:
        raise FitError("at least two points are needed for a power-law fit")
    if np.any(temperatures <= 0.0):
        raise FitError("temperatures must be positive")
    if np.any(works == 0.0) or not (np.all(works > 0.0) or np.all(works < 0.0)):
        raise FitError("work changes sign or vanishes on the fitted tail")

    x = np.log(temperatures)
    y = np.log(np.abs(works))
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2)) / float(total) if total > 0.0 else 1.0
    return PowerLawFit(float(slope), float(intercept), r_squared, int(temperatures.size))


def asymptotic_work_exponent(
    pair: ScenarioPair,
    betas: Sequence[float],
    length: float,
    tail: Optional[int] = None,
    tol: float = DEFAULT_TOL,
) -> PowerLawFit:
    """Fit W ~ T^slope over the high-temperature end of a beta grid."""
    betas = [float(beta) for beta in betas]
    if len(betas) < 2:
        raise ParameterError("beta grid needs at least two points")
    if any(later >= earlier for earlier, later in zip(betas, betas[1:])):
        raise ParameterError("beta grid must be strictly decreasing")

    temperatures = []
    works = []
    for beta in betas:
        config = PhysicalConfig(beta=beta, length=length)
        unmixed = scenario_partition(pair.unmixed, config, tol)
        mixed = scenario_partition(pair.mixed, config, tol)
        temperatures.append(config.temperature)
        works.append(work(unmixed, mixed, config))
    fit = fit_power_law(temperatures, works, tail)
    logger.info(
        "功的高温指数拟合: scenario=%s, length=%s, slope=%.6f, r2=%.6f, points=%s",
        pair.label(),
        length,
        fit.slope,
        fit.r_squared,
        fit.points,
    )
    return fit
