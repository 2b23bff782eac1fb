"""
Self-check suite behind the `verify` command.

Each check returns a CheckResult; a failing check never stops the suite.
Reference values come from mpmath at high precision and from the oracle
module, never from the code path under test.
"""

from dataclasses import dataclass, field
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from log import logging_context
from .core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioPair,
    ScenarioSpec,
    Stage,
    Statistics,
    Well,
)
from .ensembles import scenario_partition, table_polynomial, zn_ideal
from .errors import GibbsMixingError, ParameterError
from .formatting import format_number
from .oracle import LEVEL_CAP, ORACLE_TOLERANCE, OracleReport, oracle_report
from .theta_engine import DEFAULT_TOL, theta3, weighted_series, z1
from .thermo import asymptotic_work_exponent, entropy, evaluate_pair, mean_energy

LN2 = math.log(2.0)
REFERENCE_DPS = 80
RELATIVE_FLOOR = 1e-3

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifyProfile:
    name: str
    duality_nomes: Tuple[float, ...] = (0.05, 0.2, 0.5, 0.9, 0.99)
    duality_tol: float = 1e-12
    table_nomes: Tuple[float, ...] = (0.1, 0.5, 0.9)
    table_tol: float = 1e-12
    oracle_nome: float = 0.5
    oracle_particles: Tuple[int, ...] = (2, 4)
    oracle_tol: float = 1e-9
    species_grid: int = 20
    species_tol: float = 1e-12
    classical_lengths: Tuple[float, ...] = (1e2, 1e3, 1e4)
    classical_tol: float = 1e-3
    gap_beta: float = 0.5
    gap_lengths: Tuple[float, float] = (1.0, 100.0)
    gap_min: float = 0.5
    split_point: Tuple[float, float] = (3.0, 2.0)
    split_min: float = 1e-6
    work_points: Tuple[Tuple[float, float], ...] = ((0.5, 10.0), (1.0, 3.0), (3.0, 2.0))
    work_tol: float = 1e-9
    fd_tau: float = 0.3
    fd_step: float = 1e-6
    fd_tol: float = 1e-5
    fit_length: float = 10.0
    fit_temperatures: Tuple[float, float] = (1e2, 1e5)
    fit_points: int = 16
    fit_r_squared: float = 0.999


PROFILES: Dict[str, VerifyProfile] = {
    "default": VerifyProfile(name="default"),
    "quick": VerifyProfile(
        name="quick",
        oracle_particles=(2,),
        species_grid=5,
        fit_points=8,
    ),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: Optional[float]
    detail: str
    seconds: float = 0.0


@dataclass
class VerificationSummary:
    profile: str
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def result(self, name: str) -> CheckResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)


def get_profile(name: str) -> VerifyProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ParameterError(
            f"unknown verify profile {name!r}; expected one of {', '.join(sorted(PROFILES))}"
        ) from None


def relative_error(value: float, reference: float, floor: float = 0.0) -> float:
    scale = max(abs(reference), floor)
    if scale == 0.0:
        return abs(value)
    return abs(value - reference) / scale


def mp_z1(tau) -> "mpmath.mpf":
    """Z1(tau) = (theta3(0, tau) - 1) / 2 at the current mpmath precision."""
    return (mpmath.jtheta(3, 0, tau) - 1) / 2


def all_scenarios(particle_counts: Sequence[int]) -> List[ScenarioSpec]:
    scenarios = []
    for n in particle_counts:
        for labels in InternalLabels:
            for statistics in Statistics:
                if labels is InternalLabels.WITHOUT_COLORS and statistics is Statistics.DISTINGUISHABLE:
                    continue
                for stage in Stage:
                    scenarios.append(ScenarioSpec(n, labels, stage, statistics))
    return scenarios


class _Checks:
    """Check bodies; each returns (passed, measured, detail)."""

    def __init__(
        self,
        profile: VerifyProfile,
        tol: float,
        oracle_n_max: Optional[int],
        oracle_tolerance: float = ORACLE_TOLERANCE,
        level_cap: int = LEVEL_CAP,
    ):
        self.profile = profile
        self.tol = tol
        self.oracle_n_max = oracle_n_max
        self.oracle_tolerance = oracle_tolerance
        self.level_cap = level_cap
        self._oracle_cache: Optional[List[Tuple[ScenarioSpec, OracleReport]]] = None

    def duality(self):
        worst = 0.0
        for q in self.profile.duality_nomes:
            log_q = math.log(q)
            lhs = math.sqrt(-log_q / math.pi) * theta3(q, self.tol).value
            rhs = theta3(math.exp(math.pi ** 2 / log_q), self.tol).value
            worst = max(worst, abs(lhs - rhs))
        passed = worst <= self.profile.duality_tol
        return passed, worst, f"max |sqrt(-ln q/pi) theta3(q) - theta3(q')| over q={list(self.profile.duality_nomes)}"

    def theta_reference(self):
        worst = 0.0
        with mpmath.workdps(REFERENCE_DPS):
            for q in self.profile.duality_nomes:
                reference = float(mpmath.jtheta(3, 0, mpmath.mpf(q)))
                worst = max(worst, relative_error(theta3(q, self.tol).value, reference))
        return worst <= self.profile.duality_tol, worst, "max relative error against mpmath jtheta"

    def table_regression(self):
        worst = 0.0
        where = "-"
        with mpmath.workdps(REFERENCE_DPS):
            for q in self.profile.table_nomes:
                q_mp = mpmath.mpf(q)
                singles = [None] + [mp_z1(q_mp ** k) for k in range(1, 5)]
                for statistics in (Statistics.BOSE, Statistics.FERMI):
                    for n in (2, 3, 4):
                        reference = float(table_polynomial(n, statistics, singles))
                        value = zn_ideal(n, statistics, Well.FULL, q, self.tol).value
                        error = relative_error(value, reference)
                        if error > worst:
                            worst = error
                            where = f"q={q} n={n} stat={statistics.value}"
        passed = worst <= self.profile.table_tol
        return passed, worst, f"worst case {where}"

    def _oracle_reports(self):
        if self._oracle_cache is None:
            config = PhysicalConfig.from_q(self.profile.oracle_nome)
            self._oracle_cache = [
                (scenario, oracle_report(scenario, config, self.oracle_n_max, self.oracle_tolerance, self.level_cap))
                for scenario in all_scenarios(self.profile.oracle_particles)
            ]
        return self._oracle_cache

    def oracle_equivalence(self):
        config = PhysicalConfig.from_q(self.profile.oracle_nome)
        worst = 0.0
        where = "-"
        for scenario, report in self._oracle_reports():
            partition = scenario_partition(scenario, config, self.tol)
            errors = {
                "Z": relative_error(partition.z.value, report.partition),
                "E": relative_error(mean_energy(partition, config), report.mean_energy, RELATIVE_FLOOR),
            }
            for quantity, error in errors.items():
                if error > worst:
                    worst = error
                    where = f"{quantity} of {scenario.label()}"
        passed = worst <= self.profile.oracle_tol
        return passed, worst, f"{len(self._oracle_reports())} scenarios at q={self.profile.oracle_nome}, worst {where}"

    def entropy_identity(self):
        config = PhysicalConfig.from_q(self.profile.oracle_nome)
        worst = 0.0
        where = "-"
        for scenario, report in self._oracle_reports():
            value = entropy(scenario_partition(scenario, config, self.tol), config)
            error = relative_error(value, report.entropy, RELATIVE_FLOOR)
            if error > worst:
                worst = error
                where = scenario.label()
        passed = worst <= self.profile.oracle_tol
        return passed, worst, f"(1 - beta d/dbeta) ln Z against -sum p ln p, worst {where}"

    def finite_difference(self):
        tau = self.profile.fd_tau
        h = self.profile.fd_step
        central = (z1(tau + h, self.tol).value - z1(tau - h, self.tol).value) / (2.0 * h)
        analytic = weighted_series(tau, 1, self.tol).value / tau
        error = abs(central - analytic)
        return error <= self.profile.fd_tol, error, f"dZ1/dtau at tau={tau}, h={h}"

    def species_equality(self):
        size = self.profile.species_grid
        betas = np.linspace(0.1, 5.0, size)
        lengths = np.geomspace(1.0, 50.0, size)
        worst = 0.0
        for beta in betas:
            for length in lengths:
                config = PhysicalConfig(float(beta), float(length))
                values = [
                    evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, statistics), config, self.tol).delta_s
                    for statistics in Statistics
                ]
                worst = max(worst, max(values) - min(values))
        passed = worst <= self.profile.species_tol
        return passed, worst, f"max spread of delta_s over {size}x{size} grid, N=2 with colors"

    def classical_limit(self):
        deviations = []
        for length in self.profile.classical_lengths:
            config = PhysicalConfig(1.0, length)
            report = evaluate_pair(ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.BOSE), config, self.tol)
            deviations.append(abs(report.delta_s - 2.0 * LN2))
        monotone = all(later < earlier for earlier, later in zip(deviations, deviations[1:]))
        passed = deviations[-1] <= self.profile.classical_tol and monotone
        detail = "deviations from 2 ln 2: " + ", ".join(format_number(value) for value in deviations)
        if not monotone:
            detail += " (not decreasing)"
        return passed, deviations[-1], detail

    def n4_limits(self):
        length = self.profile.classical_lengths[-1]
        config = PhysicalConfig(1.0, length)
        worst = 0.0
        parts = []
        for labels, target in ((InternalLabels.WITH_COLORS, 4.0 * LN2), (InternalLabels.WITHOUT_COLORS, 0.0)):
            for statistics in Statistics:
                if labels is InternalLabels.WITHOUT_COLORS and statistics is Statistics.DISTINGUISHABLE:
                    continue
                report = evaluate_pair(ScenarioPair.of(4, labels, statistics), config, self.tol)
                deviation = abs(report.delta_s - target)
                worst = max(worst, deviation)
                parts.append(f"{labels.value}/{statistics.value}={format_number(report.delta_s)}")
        passed = worst <= self.profile.classical_tol
        return passed, worst, f"l={format_number(length)}: " + " ".join(parts)

    def without_colors_gap(self):
        beta = self.profile.gap_beta
        small, large = self.profile.gap_lengths
        reference = evaluate_pair(
            ScenarioPair.of(2, InternalLabels.WITH_COLORS, Statistics.DISTINGUISHABLE),
            PhysicalConfig(beta, large),
            self.tol,
        ).delta_s
        gaps = []
        parts = [f"dist(l={format_number(large)})={format_number(reference)}"]
        for statistics in (Statistics.BOSE, Statistics.FERMI):
            pair = ScenarioPair.of(2, InternalLabels.WITHOUT_COLORS, statistics)
            at_small = evaluate_pair(pair, PhysicalConfig(beta, small), self.tol).delta_s
            at_large = evaluate_pair(pair, PhysicalConfig(beta, large), self.tol).delta_s
            gaps.append(reference - at_large)
            parts.append(
                f"{statistics.value}(l={format_number(small)})={format_number(at_small)}"
                f" {statistics.value}(l={format_number(large)})={format_number(at_large)}"
            )
        gap = min(gaps)
        return gap > self.profile.gap_min, gap, " ".join(parts)

    def low_temperature_split(self):
        beta, length = self.profile.split_point
        config = PhysicalConfig(beta, length)
        bose = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITH_COLORS, Statistics.BOSE), config, self.tol)
        fermi = evaluate_pair(ScenarioPair.of(4, InternalLabels.WITH_COLORS, Statistics.FERMI), config, self.tol)
        difference = bose.delta_s - fermi.delta_s
        passed = abs(difference) > self.profile.split_min
        return passed, difference, f"delta_s bose - fermi at beta={beta}, l={length}"

    def work_identity(self):
        worst = 0.0
        for beta, length in self.profile.work_points:
            config = PhysicalConfig(beta, length)
            for scenario in all_scenarios((2, 4)):
                if scenario.stage is not Stage.UNMIXED:
                    continue
                pair = ScenarioPair.of(scenario.n_particles, scenario.internal_labels, scenario.statistics)
                report = evaluate_pair(pair, config, self.tol)
                via_energy = (report.mean_energy_mixed - report.mean_energy_unmixed) - config.temperature * (
                    report.s_mixed - report.s_unmixed
                )
                worst = max(worst, relative_error(report.work, via_energy, 1.0))
        passed = worst <= self.profile.work_tol
        return passed, worst, "W against F_M - F_U = (E_M - E_U) - T (S_M - S_U)"

    def work_exponent(self):
        low, high = self.profile.fit_temperatures
        betas = [1.0 / temperature for temperature in np.geomspace(low, high, self.profile.fit_points)]
        slopes = []
        worst_r_squared = 1.0
        for labels in (InternalLabels.WITHOUT_COLORS, InternalLabels.WITH_COLORS):
            pair = ScenarioPair.of(2, labels, Statistics.BOSE)
            fit = asymptotic_work_exponent(pair, betas, self.profile.fit_length, tol=self.tol)
            slopes.append(f"{labels.value}: slope={fit.slope:.6f} r2={fit.r_squared:.8f}")
            worst_r_squared = min(worst_r_squared, fit.r_squared)
        passed = worst_r_squared > self.profile.fit_r_squared
        return passed, worst_r_squared, f"T in [{format_number(low)}, {format_number(high)}], l={self.profile.fit_length}; " + "; ".join(slopes)


CHECK_ORDER: Tuple[str, ...] = (
    "duality",
    "theta_reference",
    "table_regression",
    "oracle_equivalence",
    "entropy_identity",
    "finite_difference",
    "species_equality",
    "classical_limit",
    "n4_limits",
    "without_colors_gap",
    "low_temperature_split",
    "work_identity",
    "work_exponent",
)


def _run_check(name: str, body: Callable) -> CheckResult:
    started = time.perf_counter()
    with logging_context(scenario=name):
        try:
            passed, measured, detail = body()
        except GibbsMixingError as exc:
            logger.warning("校验项异常: check=%s, error=%s", name, exc)
            passed, measured, detail = False, None, f"{exc.error_code}: {exc.message}"
    elapsed = time.perf_counter() - started
    logger.info("校验项完成: check=%s, passed=%s, measured=%s, seconds=%.3f", name, passed, measured, elapsed)
    return CheckResult(name, bool(passed), None if measured is None else float(measured), detail, elapsed)


def run_verify(
    profile: str = "default",
    oracle_n_max: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    only: Optional[Sequence[str]] = None,
    oracle_tolerance: float = ORACLE_TOLERANCE,
    level_cap: int = LEVEL_CAP,
) -> VerificationSummary:
    settings = get_profile(profile)
    if oracle_n_max is not None and oracle_n_max < 1:
        raise ParameterError(f"oracle n_max must be positive, got {oracle_n_max}")
    names = CHECK_ORDER if only is None else tuple(only)
    unknown = [name for name in names if name not in CHECK_ORDER]
    if unknown:
        raise ParameterError(f"unknown checks: {unknown}")

    checks = _Checks(settings, tol, oracle_n_max, oracle_tolerance, level_cap)
    summary = VerificationSummary(profile=settings.name)
    for name in names:
        summary.results.append(_run_check(name, getattr(checks, name)))
    logger.info(
        "校验完成: profile=%s, passed=%s, failed=%s",
        settings.name,
        len(summary.results) - len(summary.failed),
        len(summary.failed),
    )
    return summary


def format_table(summary: VerificationSummary) -> str:
    rows = [("check", "status", "measured", "detail")]
    for result in summary.results:
        measured = "-" if result.measured is None else format_number(result.measured)
        rows.append((result.name, "PASS" if result.passed else "FAIL", measured, result.detail))
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = [
        " | ".join([row[0].ljust(widths[0]), row[1].ljust(widths[1]), row[2].ljust(widths[2]), row[3]])
        for row in rows
    ]
    failed = len(summary.failed)
    lines.append(
        f"summary: profile={summary.profile} checks={len(summary.results)} "
        f"passed={len(summary.results) - failed} failed={failed}"
    )
    return "\n".join(lines)
