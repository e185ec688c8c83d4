from .main import main, build_parser, parse_triangle, cmd_transfer, cmd_intersect, cmd_convergence
from .experiment import ExperimentConfig, ConvergenceResult, LevelResult, FIELDS, fitted_slope, run_convergence
