import argparse
import logging
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .. import __version__
from ..errors import GeometryError, InvalidElementError, MeshFileError
from ..geometry.bezier_triangle import BezierTriangle
from ..geometry.triangle_intersection import intersect_triangles
from ..mesh.mesh_io import load_field, load_mesh, save_field
from ..rendering import DrawEngine, SvgCanvas
from ..settings import SettingsManager
from ..transfer.pairing import expanding_front
from ..transfer.projection import conservation_report, transfer_field
from .experiment import FIELDS, ExperimentConfig, run_convergence, write_outputs

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_GEOMETRY = 2


class _ArgumentParser(argparse.ArgumentParser):
    """ usage errors exit with 1, 2 is reserved for geometric failures """

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Formatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return f"{record.name} {record.levelname.lower()}: {record.getMessage()}"


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_Formatter())
    package_logger = logging.getLogger("curvexfer")
    package_logger.handlers = [h for h in package_logger.handlers if isinstance(h, logging.NullHandler)]
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


def parse_triangle(text: str) -> BezierTriangle:
    """
    Triangle from an inline list of control points ("x0,y0 x1,y1 ...", any
    mix of commas and whitespace) or from a file holding such a list. A
    leading "nodes:" reads the values as standard nodes instead.
    """
    from_nodes = text.startswith("nodes:")
    if from_nodes:
        text = text[len("nodes:"):]
    if os.path.isfile(text):
        with open(text, "r") as f:
            text = f.read()
    values = np.array([float(token) for token in text.replace(",", " ").split()])
    if values.size == 0 or values.size % 2 != 0:
        raise ValueError(f"a triangle needs an even, non-zero number of coordinates, got {values.size}")
    points = values.reshape(-1, 2)
    return BezierTriangle.from_nodes(points) if from_nodes else BezierTriangle(points)


def edge_label(owner: int, edge_index: int) -> str:
    """ edges of the first triangle are E0 to E2, those of the second E3 to E5 """
    return f"E{3 * owner + edge_index}"


def cmd_transfer(args) -> int:
    try:
        donor = load_mesh(args.donor_mesh)
        donor_field = load_field(args.donor_field, donor)
        target = load_mesh(args.target_mesh)
    except InvalidElementError as err:
        # an inverted element is a defect of the input file, not of the transfer
        print(f"curvexfer: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    pairing = expanding_front(target, donor)
    target_field = transfer_field(donor, donor_field, target, pairing, workers=args.threads)
    save_field(target_field, args.out_field)
    report = conservation_report(donor, donor_field, target, target_field, pairing)
    logger.info(f"wrote {args.out_field}, {pairing.pair_count} element pairs, {pairing.probe_count} probes")
    print(report.csv_line())
    return EXIT_SUCCESS


def cmd_intersect(args) -> int:
    try:
        first, second = parse_triangle(args.t0), parse_triangle(args.t1)
    except ValueError as err:
        print(f"curvexfer: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    polygons = intersect_triangles(first, second)
    if not polygons:
        print("empty")
    for index, polygon in enumerate(polygons):
        pieces = [f"{edge_label(source.owner, source.edge_index)}[{source.start:.12g}, {source.end:.12g}]"
                  for source in polygon.sources]
        print(f"polygon {index}: " + " -> ".join(pieces))
    print(f"area {sum(polygon.area for polygon in polygons):.12g}")

    if args.svg is not None:
        canvas = SvgCanvas()
        engine = DrawEngine(canvas)
        for index, polygon in enumerate(polygons):
            engine.draw_polygon(polygon, f"polygon_{index}")
        engine.draw_triangle(first, "triangle_0", color=SettingsManager.get("svg", "donor_color"))
        engine.draw_triangle(second, "triangle_1", color=SettingsManager.get("svg", "target_color"))
        if polygons:
            engine.draw_points(np.vstack([polygon.vertices for polygon in polygons]), "vertices")
        canvas.save(args.svg)
    return EXIT_SUCCESS


def cmd_convergence(args) -> int:
    try:
        config = ExperimentConfig(args.degree, args.levels, args.field, args.out, args.jitter_seed,
                                  args.base_subdivisions).validate()
    except ValueError as err:
        print(f"curvexfer: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    result = run_convergence(config, workers=args.threads)
    csv_path, svg_path = write_outputs(result)
    logger.info(f"wrote {csv_path}" + (f" and {svg_path}" if svg_path else ""))
    slope = result.slope
    print("slope " + ("undefined" if math.isnan(slope) else f"{slope:.4f}"))
    return EXIT_SUCCESS


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="curvexfer", description="Conservative solution transfer between curved meshes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")
    parser.add_argument("--settings", help="built-in settings name (default, strict) or path to a settings file")
    subparsers = parser.add_subparsers(dest="command", required=True)

    transfer = subparsers.add_parser("transfer", help="transfer a field from a donor mesh onto a target mesh")
    transfer.add_argument("donor_mesh")
    transfer.add_argument("donor_field")
    transfer.add_argument("target_mesh")
    transfer.add_argument("out_field")
    transfer.add_argument("--threads", type=int, help="worker threads, overrides CURVEXFER_THREADS")
    transfer.set_defaults(handler=cmd_transfer)

    intersect = subparsers.add_parser("intersect", help="intersect two Bezier triangles")
    intersect.add_argument("--t0", required=True, help="control points 'x,y x,y ...', a file, or 'nodes:' + either")
    intersect.add_argument("--t1", required=True, help="second triangle, same format as --t0")
    intersect.add_argument("--svg", help="write an SVG overlay of both triangles and the intersection")
    intersect.set_defaults(handler=cmd_intersect)

    convergence = subparsers.add_parser("convergence", help="convergence study on the square/disc mesh pair")
    convergence.add_argument("--degree", type=int, required=True)
    convergence.add_argument("--levels", type=int, default=4)
    convergence.add_argument("--field", choices=sorted(FIELDS), default="zeta1")
    convergence.add_argument("--out", default=".", help="output directory for the CSV table and the plot")
    convergence.add_argument("--jitter-seed", type=int, help="seed for jittering interior mesh vertices")
    convergence.add_argument("--base-subdivisions", type=int, default=2, help="subdivisions of the coarsest meshes")
    convergence.add_argument("--threads", type=int, help="worker threads, overrides CURVEXFER_THREADS")
    convergence.set_defaults(handler=cmd_convergence)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.settings:
        try:
            SettingsManager.load_settings(args.settings)
        except (OSError, ValueError) as err:
            print(f"curvexfer: error: cannot load settings '{args.settings}': {err}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.handler(args)
    except (MeshFileError, OSError) as err:
        print(f"curvexfer: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, ArithmeticError, ValueError, np.linalg.LinAlgError) as err:
        print(f"curvexfer: error: {err}", file=sys.stderr)
        return EXIT_GEOMETRY
