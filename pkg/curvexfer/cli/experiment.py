import csv
import logging
import math
import os
import time
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from ..errors import GeometryError
from ..mesh.curved_mesh import refine
from ..mesh.discrete_field import DiscreteField, l2_norm, nodal_interpolant
from ..mesh.generators import gen_disc_mesh, gen_square_mesh
from ..rendering import DrawEngine, SvgCanvas
from ..transfer.pairing import expanding_front
from ..transfer.projection import conservation_report, transfer_field

logger = logging.getLogger(__name__)

FIELDS: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "zeta1": lambda x, y: 5.0 * y ** 3 + x ** 2 + 2.0 * y + 3.0,
    "zeta2": lambda x, y: np.exp(x ** 2) + 2.0 * y,
    "zeta3": lambda x, y: np.sin(x) + np.cos(y),
}

EXPERIMENT_DEGREES = (1, 2, 3)

# errors below this are roundoff and carry no convergence information
ERROR_FLOOR = 1e-13
CSV_COLUMNS = ("level", "h", "error", "slope", "conservation_mismatch")


class ExperimentConfig(NamedTuple):
    """ convergence run: square donor and disc target of one degree, refined levels - 1 times """
    degree: int
    levels: int = 4
    field: str = "zeta1"
    out_dir: str = "."
    jitter_seed: Optional[int] = None
    base_subdivisions: int = 2

    def validate(self) -> "ExperimentConfig":
        if self.degree not in EXPERIMENT_DEGREES:
            raise ValueError(f"degree must be one of {EXPERIMENT_DEGREES}, got {self.degree}")
        if self.levels < 1:
            raise ValueError(f"at least one level is required, got {self.levels}")
        if self.field not in FIELDS:
            raise ValueError(f"unknown field '{self.field}', choose one of {', '.join(FIELDS)}")
        if self.base_subdivisions < 1:
            raise ValueError(f"base subdivisions must be positive, got {self.base_subdivisions}")
        return self

    @property
    def name(self) -> str:
        return f"convergence_p{self.degree}_{self.field}"


class LevelResult(NamedTuple):
    level: int
    h: float
    error: float
    conservation_mismatch: float
    seconds: float


class ConvergenceResult(NamedTuple):
    config: ExperimentConfig
    levels: List[LevelResult]

    @property
    def slope(self) -> float:
        return fitted_slope([level.h for level in self.levels], [level.error for level in self.levels])


def fitted_slope(h: Sequence[float], errors: Sequence[float], last: int = 3) -> float:
    """ least-squares slope of log E against log h over the last levels above the roundoff floor, nan if undefined """
    pairs = [(size, error) for size, error in zip(h, errors) if error >= ERROR_FLOOR][-last:]
    if len(pairs) < 2:
        return math.nan
    log_h, log_e = np.log(np.array(pairs)).T
    if np.ptp(log_h) == 0.0:
        return math.nan
    return float(np.polyfit(log_h, log_e, 1)[0])


def run_convergence(config: ExperimentConfig, workers: Optional[int] = None) -> ConvergenceResult:
    config.validate()
    zeta = FIELDS[config.field]
    donor = gen_square_mesh(config.degree, config.base_subdivisions, jitter_seed=config.jitter_seed)
    target = gen_disc_mesh(config.degree, config.base_subdivisions, jitter_seed=config.jitter_seed)

    results = []
    for level in range(config.levels):
        if level > 0:
            donor, target = refine(donor), refine(target)
        start = time.perf_counter()
        try:
            donor_field = nodal_interpolant(donor, zeta)
            pairing = expanding_front(target, donor)
            target_field = transfer_field(donor, donor_field, target, pairing, workers)
            error = l2_norm(target, target_field, zeta) / l2_norm(target, DiscreteField.zeros(target), zeta)
            report = conservation_report(donor, donor_field, target, target_field, pairing)
        except GeometryError:
            logger.error(f"convergence run {config.name} failed at level {level}")
            raise
        seconds = time.perf_counter() - start
        results.append(LevelResult(level, target.mesh_size(), float(error), report.relative_mismatch, seconds))
        logger.info(f"level {level}: {len(target)} target elements, error {error:.3e}, "
                    f"conservation mismatch {report.relative_mismatch:.1e}")
        logger.debug(f"level {level} took {seconds:.2f} s with {pairing.probe_count} pair probes")
    return ConvergenceResult(config, results)


def write_csv(result: ConvergenceResult, path):
    """ one row per level, the slope column fitted over the levels up to that row """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for index, level in enumerate(result.levels):
            slope = fitted_slope([r.h for r in result.levels[:index + 1]], [r.error for r in result.levels[:index + 1]])
            writer.writerow([level.level, "%.17g" % level.h, "%.17g" % level.error,
                             "" if math.isnan(slope) else "%.6f" % slope, "%.3e" % level.conservation_mismatch])


def write_plot(result: ConvergenceResult, path):
    canvas = SvgCanvas(width=560, height=420, margin=36)
    DrawEngine(canvas).draw_convergence_plot([level.h for level in result.levels],
                                             [level.error for level in result.levels],
                                             title=f"p = {result.config.degree}, {result.config.field}",
                                             slope=None if math.isnan(result.slope) else result.slope)
    canvas.save(path)


def write_outputs(result: ConvergenceResult):
    """ CSV table and log-log plot in the configured output directory, returns both paths """
    os.makedirs(result.config.out_dir, exist_ok=True)
    csv_path = os.path.join(result.config.out_dir, result.config.name + ".csv")
    svg_path = os.path.join(result.config.out_dir, result.config.name + ".svg")
    write_csv(result, csv_path)
    if any(level.error > 0.0 for level in result.levels):
        write_plot(result, svg_path)
    else:
        logger.warning(f"all errors of {result.config.name} are zero, no plot written")
        svg_path = None
    return csv_path, svg_path
