"""
Brute-force validator: explicit state counting over truncated spectra.

Nothing here touches the theta machinery. States are aggregated by their
integer total exponent, so each distinct weight q**e is computed once.
"""

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Tuple

from .core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioSpec,
    Stage,
    Statistics,
    Well,
    level_weight_exponent,
)
from .errors import CutoffTooSmallError, ParameterError
from .theta_engine import tail_bound

ORACLE_TOLERANCE = 1e-12
LEVEL_CAP = 10_000
logger = logging.getLogger(__name__)


class OracleState(NamedTuple):
    total_exponent: int
    multiplicity: int


@dataclass(frozen=True)
class TruncatedSpectrum:
    exponents: Tuple[int, ...]
    n_max: int
    well: Well

    def __post_init__(self):
        if self.n_max < 1:
            raise ParameterError(f"n_max must be positive, got {self.n_max}")
        if len(self.exponents) != self.n_max or list(self.exponents) != sorted(self.exponents):
            raise ParameterError("spectrum exponents must be sorted with one entry per level")

    @classmethod
    def build(cls, well: Well, n_max: int) -> "TruncatedSpectrum":
        well = Well(well)
        exponents = tuple(level_weight_exponent(well, n) for n in range(1, n_max + 1))
        return cls(exponents=exponents, n_max=n_max, well=well)


def _group_counter(spectrum: TruncatedSpectrum, count: int, statistics: Statistics) -> Counter:
    """Total exponents of `count` same-label particles in one well."""
    statistics = Statistics(statistics)
    if count == 0:
        return Counter({0: 1})
    if statistics is Statistics.BOSE:
        tuples = combinations_with_replacement(spectrum.exponents, count)
    elif statistics is Statistics.FERMI:
        tuples = combinations(spectrum.exponents, count)
    else:
        tuples = product(spectrum.exponents, repeat=count)
    return Counter(sum(levels) for levels in tuples)


def _convolve(left: Counter, right: Counter) -> Counter:
    combined = Counter()
    for left_exponent, left_count in left.items():
        for right_exponent, right_count in right.items():
            combined[left_exponent + right_exponent] += left_count * right_count
    return combined


def _as_states(counter: Counter) -> List[OracleState]:
    return [OracleState(exponent, counter[exponent]) for exponent in sorted(counter) if counter[exponent]]


def enumerate_states(
    scenario: ScenarioSpec,
    full: TruncatedSpectrum,
    half: TruncatedSpectrum,
) -> List[OracleState]:
    """All many-body states of the scenario as (total exponent, multiplicity)."""
    if full.well is not Well.FULL or half.well is not Well.HALF:
        raise ParameterError("enumerate_states expects a full-well and a half-well spectrum")
    n = scenario.n_particles
    statistics = scenario.statistics

    if scenario.internal_labels is InternalLabels.WITH_COLORS:
        spectrum = half if scenario.stage is Stage.UNMIXED else full
        group = _group_counter(spectrum, scenario.group_size, statistics)
        return _as_states(_convolve(group, group))

    if scenario.stage is Stage.MIXED:
        return _as_states(_group_counter(full, n, statistics))

    # LL, RR and every mixed occupation class of the two sub-cells.
    total = Counter()
    for left in range(n + 1):
        total.update(
            _convolve(
                _group_counter(half, left, statistics),
                _group_counter(half, n - left, statistics),
            )
        )
    return _as_states(total)


def enumerate_group(spectrum: TruncatedSpectrum, count: int, statistics: Statistics) -> List[OracleState]:
    return _as_states(_group_counter(spectrum, count, statistics))


def _single_tail(spectrum: TruncatedSpectrum, log_q: float) -> float:
    return tail_bound(spectrum.well.exponent_scale * log_q, spectrum.n_max, 0)


def _single_sum(spectrum: TruncatedSpectrum, log_q: float) -> float:
    return math.fsum(math.exp(e * log_q) for e in spectrum.exponents)


def truncation_estimate(
    scenario: ScenarioSpec,
    full: TruncatedSpectrum,
    half: TruncatedSpectrum,
    q: float,
) -> float:
    """Relative weight of states with some particle above the cutoff.

    Every omitted state has at least one particle above n_max, so the omitted
    weight is below N * tail * Z1^(N-1) of distinguishable particles.
    """
    log_q = math.log(q)
    spectrum = full
    if scenario.stage is Stage.UNMIXED:
        spectrum = half
    n = scenario.n_particles
    single = _single_sum(spectrum, log_q)
    tail = _single_tail(spectrum, log_q)
    states = enumerate_states(scenario, full, half)
    z = oracle_partition(states, q)
    omitted = n * tail * (single + tail) ** (n - 1)
    if scenario.internal_labels is InternalLabels.WITHOUT_COLORS and scenario.stage is Stage.UNMIXED:
        omitted *= n + 1
    return omitted / z


def validate_cutoff(
    scenario: ScenarioSpec,
    full: TruncatedSpectrum,
    half: TruncatedSpectrum,
    q: float,
    tolerance: float = ORACLE_TOLERANCE,
) -> float:
    estimate = truncation_estimate(scenario, full, half, q)
    if estimate > tolerance:
        raise CutoffTooSmallError(
            f"cutoff n_max={full.n_max} leaves a relative tail of {estimate:.3e} "
            f"(> {tolerance:.1e}) for {scenario.label()} at q={q}"
        )
    return estimate


def choose_cutoff(
    scenario: ScenarioSpec,
    q: float,
    tolerance: float = ORACLE_TOLERANCE,
    cap: int = LEVEL_CAP,
) -> int:
    """Smallest cutoff whose truncation estimate is below `tolerance`."""
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must lie in (0, 1), got {q!r}")
    log_q = math.log(q)
    n_max = max(2, scenario.n_particles)
    while n_max <= cap:
        full = TruncatedSpectrum.build(Well.FULL, n_max)
        # Cheap pre-check on the single-particle tail before enumerating.
        if _single_tail(full, log_q) <= tolerance * 1e-3:
            half = TruncatedSpectrum.build(Well.HALF, n_max)
            if truncation_estimate(scenario, full, half, q) <= tolerance:
                logger.debug("oracle cutoff: scenario=%s, q=%r, n_max=%s", scenario.label(), q, n_max)
                return n_max
        n_max += 1
    raise CutoffTooSmallError(f"no cutoff up to {cap} levels reaches tolerance {tolerance} at q={q}")


def _check_states(states: Iterable[OracleState]) -> List[OracleState]:
    states = list(states)
    if not states:
        raise ParameterError("oracle needs at least one state")
    return states


def _weights(states: List[OracleState], log_q: float) -> List[float]:
    return [state.multiplicity * math.exp(state.total_exponent * log_q) for state in states]


def oracle_partition(states: Iterable[OracleState], q: float) -> float:
    states = _check_states(states)
    return math.fsum(_weights(states, math.log(q)))


def oracle_entropy(states: Iterable[OracleState], q: float) -> float:
    """-sum p ln p with p_i = q^e_i / Z per individual state."""
    states = _check_states(states)
    log_q = math.log(q)
    z = math.fsum(_weights(states, log_q))
    log_z = math.log(z)
    terms = []
    for state, weight in zip(states, _weights(states, log_q)):
        terms.append(-(weight / z) * (state.total_exponent * log_q - log_z))
    return math.fsum(terms)


def oracle_energy(states: Iterable[OracleState], q: float, beta: float) -> float:
    """Mean energy sum p E; a level of exponent e has energy -e ln(q) / beta."""
    states = _check_states(states)
    log_q = math.log(q)
    weights = _weights(states, log_q)
    z = math.fsum(weights)
    mean_exponent = math.fsum(w * s.total_exponent for w, s in zip(weights, states)) / z
    return -mean_exponent * log_q / beta


@dataclass(frozen=True)
class OracleReport:
    scenario: ScenarioSpec
    n_max: int
    partition: float
    mean_energy: float
    entropy: float
    states: int


def oracle_report(
    scenario: ScenarioSpec,
    config: PhysicalConfig,
    n_max: Optional[int] = None,
    tolerance: float = ORACLE_TOLERANCE,
    cap: int = LEVEL_CAP,
) -> OracleReport:
    q = config.q
    if n_max is None:
        n_max = choose_cutoff(scenario, q, tolerance, cap)
    full = TruncatedSpectrum.build(Well.FULL, n_max)
    half = TruncatedSpectrum.build(Well.HALF, n_max)
    validate_cutoff(scenario, full, half, q, tolerance)
    states = enumerate_states(scenario, full, half)
    return OracleReport(
        scenario=scenario,
        n_max=n_max,
        partition=oracle_partition(states, q),
        mean_energy=oracle_energy(states, q, config.beta),
        entropy=oracle_entropy(states, q),
        states=len(states),
    )
