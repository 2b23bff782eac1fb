"""Canonical partition functions for every mixing scenario.

Values travel as BetaJet: the quantity, its beta*d/dbeta derivative and
truncation bounds for both, so entropies and energies come out of the same
pass without numerical differentiation.
"""

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Sequence

from .core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioSpec,
    Stage,
    Statistics,
    Well,
)
from .errors import NumericRangeError, ParameterError, SeriesConvergenceError
from .theta_engine import (
    DEFAULT_TOL,
    RELATIVE_FLOOR,
    SeriesValue,
    nome_to_log,
    tail_bound,
    theta3_from_log,
    weighted_series_from_log,
    z1_from_log,
)

MAX_PARTICLES = 64
RECURSION_REL_LIMIT = 1e-13
OCCUPATION_LEVEL_CAP = 200_000

_EPS = 2.0 ** -52
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BetaJet:
    value: float
    derivative: float
    error: float = 0.0
    derivative_error: float = 0.0
    terms: int = 1

    @classmethod
    def constant(cls, value: float) -> "BetaJet":
        return cls(float(value), 0.0)

    def __add__(self, other: "BetaJet") -> "BetaJet":
        return BetaJet(
            self.value + other.value,
            self.derivative + other.derivative,
            self.error + other.error,
            self.derivative_error + other.derivative_error,
            max(self.terms, other.terms),
        )

    def __sub__(self, other: "BetaJet") -> "BetaJet":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "BetaJet":
        factor = float(factor)
        return BetaJet(
            factor * self.value,
            factor * self.derivative,
            abs(factor) * self.error,
            abs(factor) * self.derivative_error,
            self.terms,
        )

    def __mul__(self, other):
        if not isinstance(other, BetaJet):
            return self.scale(other)
        a, b = self, other
        return BetaJet(
            a.value * b.value,
            a.derivative * b.value + a.value * b.derivative,
            abs(a.value) * b.error + abs(b.value) * a.error + a.error * b.error,
            (
                abs(a.derivative) * b.error
                + abs(b.value) * a.derivative_error
                + abs(a.value) * b.derivative_error
                + abs(b.derivative) * a.error
                + a.derivative_error * b.error
                + a.error * b.derivative_error
            ),
            max(a.terms, b.terms),
        )

    __rmul__ = __mul__

    def as_series(self) -> SeriesValue:
        return SeriesValue(self.value, self.error, self.terms)


@dataclass(frozen=True)
class PartitionResult:
    scenario: ScenarioSpec
    config: PhysicalConfig
    q: float
    log_z: float
    z: SeriesValue
    beta_dlog_z: SeriesValue


def exchange_sign(statistics: Statistics) -> Optional[int]:
    statistics = Statistics(statistics)
    if statistics is Statistics.BOSE:
        return 1
    if statistics is Statistics.FERMI:
        return -1
    return None


def single_particle_jet(log_q: float, well: Well, k: int, tol: float) -> BetaJet:
    """Z1 at the k-th power of the well's single-particle nome."""
    log_tau = k * Well(well).exponent_scale * log_q
    z = z1_from_log(log_tau, tol)
    s = weighted_series_from_log(log_tau, 1, tol)
    return BetaJet(
        z.value,
        log_tau * s.value,
        z.error_bound,
        abs(log_tau) * s.error_bound,
        max(z.terms_used, s.terms_used),
    )


def _check_particle_count(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParameterError(f"particle number must be a non-negative integer, got {n!r}")
    if n > MAX_PARTICLES:
        raise ParameterError(f"particle number {n} exceeds the cap of {MAX_PARTICLES}")
    return n


def _recursion_jets(n_max: int, sign: int, well: Well, log_q: float, tol: float):
    """Z_0..Z_n_max from Z_N = (1/N) sum_k sign^(k-1) Z1(tau^k) Z_(N-k).

    Also returns the worst condition estimate sum|terms| / |Z_N| over value and
    derivative; it is 1 when no cancellation happens.
    """
    singles = [None] + [single_particle_jet(log_q, well, k, tol) for k in range(1, n_max + 1)]
    jets: List[BetaJet] = [BetaJet.constant(1.0)]
    magnitudes = [1.0]
    derivative_magnitudes = [0.0]
    condition = 1.0
    for n in range(1, n_max + 1):
        total = BetaJet.constant(0.0)
        magnitude = 0.0
        derivative_magnitude = 0.0
        for k in range(1, n + 1):
            single = singles[k]
            term = single * jets[n - k]
            total = total + (term if sign ** (k - 1) > 0 else term.scale(-1.0))
            magnitude += abs(single.value) * magnitudes[n - k]
            derivative_magnitude += (
                abs(single.derivative) * magnitudes[n - k]
                + abs(single.value) * derivative_magnitudes[n - k]
            )
        jet = total.scale(1.0 / n)
        magnitudes.append(magnitude / n)
        derivative_magnitudes.append(derivative_magnitude / n)
        jets.append(jet)
        if jet.value <= 0.0 or jet.derivative >= 0.0:
            condition = math.inf
        else:
            condition = max(
                condition,
                magnitudes[n] / jet.value,
                derivative_magnitudes[n] / abs(jet.derivative),
            )
    return jets, condition


def _occupation_jets(n_max: int, well: Well, log_q: float, tol: float) -> List[BetaJet]:
    """Fermi Z_0..Z_n_max as elementary symmetric sums over single levels.

    Every contribution is positive, so no digits are lost to cancellation.
    Levels are added until the omitted states are below the rounding floor.
    """
    scale = Well(well).exponent_scale
    log_tau = scale * log_q
    p1 = single_particle_jet(log_q, well, 1, tol)
    e = [BetaJet.constant(1.0)] + [BetaJet.constant(0.0) for _ in range(n_max)]
    level = 0
    while True:
        level += 1
        if level > OCCUPATION_LEVEL_CAP:
            raise SeriesConvergenceError(
                f"occupation sum did not converge within {OCCUPATION_LEVEL_CAP} levels"
            )
        log_weight = level * level * log_tau
        weight = math.exp(log_weight)
        level_jet = BetaJet(weight, log_weight * weight)
        for k in range(n_max, 0, -1):
            e[k] = e[k] + level_jet * e[k - 1]
        if level < n_max:
            continue

        weight_tail = tail_bound(log_tau, level, 0)
        energy_tail = abs(log_tau) * tail_bound(log_tau, level, 1)
        converged = True
        omitted = []
        for k in range(1, n_max + 1):
            # States with a particle above `level`: bounded through p1^(k-1)/(k-1)!
            rest = p1.value ** (k - 1) / math.factorial(k - 1)
            rest_derivative = (
                (k - 1) * p1.value ** (k - 2) * abs(p1.derivative) / math.factorial(k - 1)
                if k > 1
                else 0.0
            )
            value_tail = weight_tail * rest
            derivative_tail = energy_tail * rest + weight_tail * rest_derivative
            omitted.append((value_tail, derivative_tail))
            if value_tail > RELATIVE_FLOOR * e[k].value or value_tail >= tol:
                converged = False
            elif derivative_tail > RELATIVE_FLOOR * abs(e[k].derivative):
                converged = False
        if converged:
            break

    result = [e[0]]
    for k in range(1, n_max + 1):
        value_tail, derivative_tail = omitted[k - 1]
        result.append(
            BetaJet(
                e[k].value + value_tail / 2.0,
                e[k].derivative - derivative_tail / 2.0,
                value_tail / 2.0 + level * k * _EPS * e[k].value,
                derivative_tail / 2.0 + level * k * _EPS * abs(e[k].derivative),
                level,
            )
        )
    return result


def zn_jets(
    n_max: int,
    statistics: Statistics,
    well: Well,
    log_q: float,
    tol: float = DEFAULT_TOL,
) -> List[BetaJet]:
    """Z_0..Z_n_max for one species in one well."""
    n_max = _check_particle_count(n_max)
    statistics = Statistics(statistics)
    well = Well(well)
    sign = exchange_sign(statistics)
    if sign is None:
        single = single_particle_jet(log_q, well, 1, tol)
        jets = [BetaJet.constant(1.0)]
        for _ in range(n_max):
            jets.append(jets[-1] * single)
        return jets

    jets, condition = _recursion_jets(n_max, sign, well, log_q, tol)
    if statistics is Statistics.FERMI and condition * _EPS > RECURSION_REL_LIMIT:
        logger.debug(
            "Fermi 递推条件数过大，改用占据数求和: n=%s, well=%s, log_q=%r, condition=%.3e",
            n_max,
            well.value,
            log_q,
            condition,
        )
        return _occupation_jets(n_max, well, log_q, tol)
    return jets


def zn_ideal(
    n: int,
    stat: Statistics,
    well: Well,
    q: float,
    tol: float = DEFAULT_TOL,
) -> SeriesValue:
    n = _check_particle_count(n)
    log_q = nome_to_log(q)
    if log_q == -math.inf:
        raise ParameterError("q must lie in (0, 1) for an N-particle partition function")
    return zn_jets(n, stat, well, log_q, tol)[n].as_series()


def table_polynomial(n: int, statistics: Statistics, z1_values: Sequence):
    """Explicit cycle-index polynomials for n = 2, 3, 4.

    `z1_values[k]` must hold Z1(tau^k) for k = 1..n; works for floats and
    mpmath numbers alike.
    """
    statistics = Statistics(statistics)
    if statistics is Statistics.DISTINGUISHABLE:
        raise ParameterError("table polynomials exist for Bose and Fermi only")
    s = 1 if statistics is Statistics.BOSE else -1
    z = z1_values
    if n == 2:
        return (z[1] ** 2 + s * z[2]) / 2
    if n == 3:
        return (z[1] ** 3 + s * 3 * z[2] * z[1] + 2 * z[3]) / 6
    if n == 4:
        return (
            z[1] ** 4
            + 3 * z[2] ** 2
            + s * 6 * z[4]
            + s * 6 * z[2] * z[1] ** 2
            + 8 * z[3] * z[1]
        ) / 24
    raise ParameterError(f"no explicit table polynomial for n={n}")


def _scenario_jet(scenario: ScenarioSpec, log_q: float, tol: float) -> BetaJet:
    n = scenario.n_particles
    statistics = scenario.statistics
    if scenario.internal_labels is InternalLabels.WITH_COLORS:
        well = Well.HALF if scenario.stage is Stage.UNMIXED else Well.FULL
        group = zn_jets(scenario.group_size, statistics, well, log_q, tol)[scenario.group_size]
        return group * group

    if scenario.stage is Stage.MIXED:
        return zn_jets(n, statistics, Well.FULL, log_q, tol)[n]

    # Every left/right split of the N particles, each side an ideal gas.
    sides = zn_jets(n, statistics, Well.HALF, log_q, tol)
    total = BetaJet.constant(0.0)
    for left in range(n + 1):
        total = total + sides[left] * sides[n - left]
    return total


def scenario_partition(
    scenario: ScenarioSpec,
    config: PhysicalConfig,
    tol: float = DEFAULT_TOL,
) -> PartitionResult:
    if not isinstance(scenario, ScenarioSpec):
        raise ParameterError(f"expected ScenarioSpec, got {type(scenario).__name__}")
    if scenario.n_particles > MAX_PARTICLES:
        raise ParameterError(
            f"particle number {scenario.n_particles} exceeds the cap of {MAX_PARTICLES}"
        )
    # Only log_q enters the sums; q may round to 1.0 for very wide or hot traps.
    q = math.exp(config.log_q)
    if q == 0.0:
        raise ParameterError(
            f"beta={config.beta}, length={config.length} give q=0.0 outside (0, 1)"
        )
    jet = _scenario_jet(scenario, config.log_q, tol)
    if not jet.value > 0.0 or not math.isfinite(jet.value):
        logger.warning("配分函数非正或下溢: scenario=%s, config=%s", scenario.label(), config)
        raise NumericRangeError(
            f"partition function of {scenario.label()} at beta={config.beta}, "
            f"length={config.length} is {jet.value!r}"
        )
    beta_dlog_z = jet.derivative / jet.value
    beta_dlog_error = (jet.derivative_error + abs(beta_dlog_z) * jet.error) / jet.value
    if not (math.isfinite(beta_dlog_z) and math.isfinite(beta_dlog_error)):
        raise NumericRangeError(
            f"beta d ln Z of {scenario.label()} at beta={config.beta}, "
            f"length={config.length} is not finite"
        )
    return PartitionResult(
        scenario=scenario,
        config=config,
        q=q,
        log_z=math.log(jet.value),
        z=jet.as_series(),
        beta_dlog_z=SeriesValue(beta_dlog_z, beta_dlog_error, jet.terms),
    )


def theta_closed_form(scenario: ScenarioSpec, config: PhysicalConfig, tol: float = DEFAULT_TOL) -> float:
    """Two-particle partition functions written directly in theta_3."""
    if scenario.n_particles != 2:
        raise ParameterError("theta closed forms are defined for two particles only")
    log_q = config.log_q

    def theta_minus_one(power: int) -> float:
        return theta3_from_log(power * log_q, tol).value - 1.0

    if scenario.internal_labels is InternalLabels.WITH_COLORS:
        power = 4 if scenario.stage is Stage.UNMIXED else 1
        return (theta_minus_one(power) / 2.0) ** 2

    s = exchange_sign(scenario.statistics)
    if scenario.stage is Stage.UNMIXED:
        return 0.5 * theta_minus_one(4) ** 2 + s * 0.5 * theta_minus_one(8)
    return theta_minus_one(1) ** 2 / 8.0 + s * theta_minus_one(2) / 4.0
