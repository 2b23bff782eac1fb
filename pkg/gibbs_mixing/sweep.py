"""Parameter sweeps over beta or trap width, written as CSV."""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from log import logging_context
from .core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioPair,
    Statistics,
    classical_mixing_entropy,
)
from .errors import GibbsMixingError, ParameterError, UsageError
from .formatting import format_number
from .theta_engine import DEFAULT_TOL
from .thermo import ThermoReport, evaluate_pair

SWEEP_PARAMETERS = ("beta", "length")
SPACINGS = ("linear", "geometric")
OUTPUTS = ("delta_s", "work", "s_unmixed", "s_mixed", "mean_energy")
FIXED_HEADER = (
    "param",
    "delta_s_bose",
    "delta_s_fermi",
    "delta_s_dist",
    "work_bose",
    "work_fermi",
    "work_dist",
    "classical_ref",
)
STAT_ORDER = (Statistics.BOSE, Statistics.FERMI, Statistics.DISTINGUISHABLE)
SPECIES_EQUALITY_TOL = 1e-12

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRequest:
    n_particles: int
    internal_labels: InternalLabels
    swept: str
    fixed_value: float
    start: float
    stop: float
    count: int
    spacing: str = "geometric"
    statistics: Tuple[Statistics, ...] = STAT_ORDER
    outputs: Tuple[str, ...] = ("delta_s", "work")

    def __post_init__(self):
        object.__setattr__(self, "internal_labels", InternalLabels(self.internal_labels))
        object.__setattr__(self, "statistics", tuple(Statistics(s) for s in self.statistics))
        if self.swept not in SWEEP_PARAMETERS:
            raise ParameterError(f"swept parameter must be one of {SWEEP_PARAMETERS}, got {self.swept!r}")
        if self.spacing not in SPACINGS:
            raise ParameterError(f"spacing must be one of {SPACINGS}, got {self.spacing!r}")
        if not self.start < self.stop:
            raise ParameterError(f"grid start {self.start} must be below stop {self.stop}")
        if self.start <= 0.0:
            raise ParameterError(f"grid start must be positive, got {self.start}")
        if self.fixed_value <= 0.0:
            raise ParameterError(f"fixed parameter must be positive, got {self.fixed_value}")
        if int(self.count) != self.count or self.count < 2:
            raise ParameterError(f"grid count must be an integer >= 2, got {self.count}")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise ParameterError(f"unknown outputs: {sorted(unknown)}")
        if not self.statistics:
            raise ParameterError("at least one statistics must be selected")
        # Validate the pair layout once, before any grid point runs.
        for statistics in self.statistics:
            self.pair_for(statistics)

    @property
    def fixed_parameter(self) -> str:
        return "length" if self.swept == "beta" else "beta"

    def grid(self) -> List[float]:
        return build_grid(self.start, self.stop, int(self.count), self.spacing)

    def config_at(self, value: float) -> PhysicalConfig:
        if self.swept == "beta":
            return PhysicalConfig(beta=value, length=self.fixed_value)
        return PhysicalConfig(beta=self.fixed_value, length=value)

    def pair_for(self, statistics: Statistics) -> ScenarioPair:
        """Distinguishable particles always use the colored setup."""
        labels = self.internal_labels
        if statistics is Statistics.DISTINGUISHABLE:
            labels = InternalLabels.WITH_COLORS
        return ScenarioPair.of(self.n_particles, labels, statistics)

    def header(self) -> List[str]:
        columns = list(FIXED_HEADER)
        for output in self.outputs:
            if output in ("delta_s", "work"):
                continue
            suffixes = ("unmixed", "mixed") if output == "mean_energy" else (None,)
            for statistics in STAT_ORDER:
                for suffix in suffixes:
                    name = output if suffix is None else f"{output}_{suffix}"
                    columns.append(f"{name}_{statistics.value}")
        return columns


def build_grid(start: float, stop: float, count: int, spacing: str) -> List[float]:
    if spacing == "geometric":
        values = np.geomspace(start, stop, count)
    elif spacing == "linear":
        values = np.linspace(start, stop, count)
    else:
        raise ParameterError(f"unknown spacing {spacing!r}")
    return [float(value) for value in values]


@dataclass
class SweepRow:
    param: float
    reports: Dict[Statistics, ThermoReport] = field(default_factory=dict)


def evaluate_row(request: SweepRequest, value: float, tol: float = DEFAULT_TOL) -> SweepRow:
    row = SweepRow(param=value)
    with logging_context(point=f"{request.swept}={value:.6g}"):
        config = request.config_at(value)
        for statistics in request.statistics:
            try:
                row.reports[statistics] = evaluate_pair(request.pair_for(statistics), config, tol)
            except GibbsMixingError as exc:
                logger.error("扫描点计算失败: %s=%r, stat=%s, error=%s", request.swept, value, statistics.value, exc)
                raise type(exc)(f"{request.swept}={value!r}: {exc.message}") from exc
        _check_species_equality(request, row)
    return row


def _check_species_equality(request: SweepRequest, row: SweepRow) -> None:
    if request.n_particles != 2 or request.internal_labels is not InternalLabels.WITH_COLORS:
        return
    values = [report.delta_s for report in row.reports.values()]
    if len(values) > 1 and max(values) - min(values) > SPECIES_EQUALITY_TOL:
        logger.warning(
            "两粒子带内态场景的熵变随统计类型不同: %s=%r, spread=%.3e",
            request.swept,
            row.param,
            max(values) - min(values),
        )


def _cell(report: ThermoReport, attribute: str) -> str:
    if report is None:
        return ""
    return format_number(getattr(report, attribute))


def format_row(request: SweepRequest, row: SweepRow) -> List[str]:
    reports = [row.reports.get(statistics) for statistics in STAT_ORDER]
    cells = [format_number(row.param)]
    cells += [_cell(report, "delta_s") for report in reports]
    cells += [_cell(report, "work") for report in reports]
    cells.append(format_number(classical_mixing_entropy(request.n_particles, request.internal_labels)))
    for output in request.outputs:
        if output in ("delta_s", "work"):
            continue
        attributes = (
            ("mean_energy_unmixed", "mean_energy_mixed") if output == "mean_energy" else (output,)
        )
        for report in reports:
            for attribute in attributes:
                cells.append(_cell(report, attribute))
    return cells


def compute_rows(request: SweepRequest, workers: int = 1, tol: float = DEFAULT_TOL) -> List[SweepRow]:
    """Evaluate every grid point; rows come back in grid order."""
    grid = request.grid()
    if workers <= 1:
        return [evaluate_row(request, value, tol) for value in grid]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sweep") as pool:
        return list(pool.map(lambda value: evaluate_row(request, value, tol), grid))


def write_csv(path: Optional[str], header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    """Write to `path`, or to stdout when path is None."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    try:
        with open(path, "w", newline="", encoding="utf-8") as file_obj:
            writer = csv.writer(file_obj, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def run_sweep(request: SweepRequest, out_path: Optional[str], workers: int = 1, tol: float = DEFAULT_TOL) -> List[SweepRow]:
    logger.info(
        "开始参数扫描: N=%s, colors=%s, sweep=%s in [%s, %s] x %s (%s), fixed %s=%s, out=%s",
        request.n_particles,
        request.internal_labels.value,
        request.swept,
        request.start,
        request.stop,
        request.count,
        request.spacing,
        request.fixed_parameter,
        request.fixed_value,
        out_path,
    )
    rows = compute_rows(request, workers, tol)
    write_csv(out_path, request.header(), [format_row(request, row) for row in rows])
    logger.info("参数扫描完成: rows=%s, out=%s", len(rows), out_path)
    return rows
