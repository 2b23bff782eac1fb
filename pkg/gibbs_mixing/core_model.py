"""Reduced units, well geometries and the scenario vocabulary.

Units are k_B = hbar = M = 1. Every single-particle level is described by an
integer exponent e of the Boltzmann base q = exp(-beta*pi^2 / (2*l^2)), so
its weight is q**e and its energy e*pi^2 / (2*l^2).
"""

from dataclasses import dataclass, replace
from enum import Enum
import math
from typing import Optional

from .errors import ParameterError


class Well(Enum):
    FULL = "full"
    HALF = "half"

    @property
    def exponent_scale(self) -> int:
        """Factor between this well's level exponents and n**2."""
        return 1 if self is Well.FULL else 4


class Statistics(Enum):
    BOSE = "bose"
    FERMI = "fermi"
    DISTINGUISHABLE = "dist"

    @classmethod
    def from_flag(cls, flag: str) -> "Statistics":
        try:
            return cls(str(flag).strip().lower())
        except ValueError:
            raise ParameterError(f"unknown statistics flag: {flag!r}") from None


class InternalLabels(Enum):
    WITH_COLORS = "with"
    WITHOUT_COLORS = "without"

    @classmethod
    def from_flag(cls, flag: str) -> "InternalLabels":
        try:
            return cls(str(flag).strip().lower())
        except ValueError:
            raise ParameterError(f"unknown colors flag: {flag!r}") from None


class Stage(Enum):
    UNMIXED = "unmixed"
    MIXED = "mixed"


def _check_positive(value, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{field_name} must be a real number, got {value!r}") from None
    if not math.isfinite(number) or number <= 0.0:
        raise ParameterError(f"{field_name} must be positive and finite, got {value!r}")
    return number


@dataclass(frozen=True)
class PhysicalConfig:
    beta: float
    length: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _check_positive(self.beta, "beta"))
        object.__setattr__(self, "length", _check_positive(self.length, "length"))

    @property
    def log_q(self) -> float:
        return -self.beta * math.pi ** 2 / (2.0 * self.length ** 2)

    @property
    def q(self) -> float:
        return boltzmann_base(self)

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta

    @classmethod
    def from_q(cls, q: float, length: float = 1.0) -> "PhysicalConfig":
        """Inverse of boltzmann_base at a fixed trap width."""
        if not 0.0 < q < 1.0:
            raise ParameterError(f"q must lie in (0, 1), got {q!r}")
        length = _check_positive(length, "length")
        return cls(beta=-2.0 * length ** 2 * math.log(q) / math.pi ** 2, length=length)


def boltzmann_base(config: PhysicalConfig) -> float:
    if not isinstance(config, PhysicalConfig):
        raise ParameterError(f"expected PhysicalConfig, got {type(config).__name__}")
    q = math.exp(config.log_q)
    if not 0.0 < q < 1.0:
        raise ParameterError(
            f"beta={config.beta}, length={config.length} give q={q!r} outside (0, 1)"
        )
    return q


def level_weight_exponent(well: Well, n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParameterError(f"level index must be a positive integer, got {n!r}")
    return Well(well).exponent_scale * n * n


def level_energy(well: Well, n: int, config: PhysicalConfig) -> float:
    return level_weight_exponent(well, n) * math.pi ** 2 / (2.0 * config.length ** 2)


@dataclass(frozen=True)
class ScenarioSpec:
    n_particles: int
    internal_labels: InternalLabels
    stage: Stage
    statistics: Statistics

    def __post_init__(self):
        n = self.n_particles
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParameterError(f"n_particles must be a positive integer, got {n!r}")
        if n % 2:
            raise ParameterError(f"n_particles must be even, got {n}")
        object.__setattr__(self, "internal_labels", InternalLabels(self.internal_labels))
        object.__setattr__(self, "stage", Stage(self.stage))
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        if (
            self.internal_labels is InternalLabels.WITHOUT_COLORS
            and self.statistics is Statistics.DISTINGUISHABLE
        ):
            raise ParameterError(
                "distinguishable particles are only defined with internal colors"
            )

    @property
    def group_size(self) -> int:
        """Particles per color group (WithColors) or per side at an even split."""
        return self.n_particles // 2

    def with_stage(self, stage: Stage) -> "ScenarioSpec":
        return replace(self, stage=Stage(stage))

    def label(self) -> str:
        return (
            f"N={self.n_particles}/{self.internal_labels.value}/"
            f"{self.statistics.value}/{self.stage.value}"
        )


@dataclass(frozen=True)
class ScenarioPair:
    unmixed: ScenarioSpec
    mixed: ScenarioSpec

    def __post_init__(self):
        if self.unmixed.stage is not Stage.UNMIXED or self.mixed.stage is not Stage.MIXED:
            raise ParameterError("scenario pair must be (unmixed, mixed)")
        if self.unmixed.with_stage(Stage.MIXED) != self.mixed:
            raise ParameterError("scenario pair members differ beyond their stage")

    @classmethod
    def of(
        cls,
        n_particles: int,
        internal_labels: InternalLabels,
        statistics: Statistics,
    ) -> "ScenarioPair":
        unmixed = ScenarioSpec(n_particles, internal_labels, Stage.UNMIXED, statistics)
        return cls(unmixed=unmixed, mixed=unmixed.with_stage(Stage.MIXED))

    @property
    def n_particles(self) -> int:
        return self.unmixed.n_particles

    @property
    def internal_labels(self) -> InternalLabels:
        return self.unmixed.internal_labels

    @property
    def statistics(self) -> Statistics:
        return self.unmixed.statistics

    def label(self) -> str:
        return f"N={self.n_particles}/{self.internal_labels.value}/{self.statistics.value}"


def classical_mixing_entropy(n_particles: int, internal_labels: InternalLabels) -> float:
    """Textbook high-temperature mixing entropy used as the reference line."""
    internal_labels = InternalLabels(internal_labels)
    if n_particles == 2 or internal_labels is InternalLabels.WITH_COLORS:
        return n_particles * math.log(2.0)
    return 0.0


def optional_statistics(flag: Optional[str]):
    """Expand a CLI statistics flag; "all" yields every statistics."""
    if flag is None or str(flag).strip().lower() == "all":
        return list(Statistics)
    return [Statistics.from_flag(flag)]
