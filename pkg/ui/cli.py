#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Command Line Interface

Subcommands: simulate, attractors, basins, certify, itineraries, singular
and transversality (bounds, check). Structured results go to stdout as JSON
or CSV and optionally to files; logs go to stderr.

Exit codes: 0 success, 1 domain or usage error, 2 inconclusive certificate
with --strict, 3 IO error, 4 measured sublevel set above the bound.
"""

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import yaml

from config.logging_config import setup_logging
from config.settings import SimulationSettings, initialize_settings
from core.basins.basin_renderer import default_palette, load_palette, render_basins, write_ppm
from core.certification.certifier import (
    CertificationStatus, attractors_from_cells, certify,
)
from core.dynamics.billiard_map import MapParams, OrbitStatus, orbit, trap_radii
from core.errors import BilliardError, ParameterOutOfRange
from core.export.export_system import (
    DataType, ExportFormat, ExportResult, export_to_file, initialize_export_system, table, to_json_text,
)
from core.geometry.polygon import distances_to_singular_set, general_position_check, load_polygon
from core.symbolic.subdivision import (
    detect_singular_connections, itinerary_counts, singular_set_order_n, subdivide, three_symbol_depth,
)
from core.transversality.lojasiewicz import lojasiewicz_bound, sublevel_measure, theorem_bound
from core.transversality.polynomials import (
    check_delta_k_grid, load_polynomial, r_alpha_bounds,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_IO = 3
EXIT_BOUND_VIOLATED = 4

HYPOTHESIS_GRID = 10_000


@dataclass
class RunConfig:
    """Validated parameters of one subcommand run."""
    subcommand: str
    polygon_path: Optional[Path] = None
    lam: Optional[float] = None
    depth: Optional[int] = None
    steps: Optional[int] = None
    resolution: Optional[Tuple[int, int]] = None
    inputs: List[Path] = field(default_factory=list)
    outputs: List[Path] = field(default_factory=list)
    seed: int = 0
    threads: int = 1
    overrides: Dict[str, Any] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        """Check parameters and paths before any computation starts.

        Raises:
            ParameterOutOfRange: lambda, depth, steps or resolution out of range
            FileNotFoundError: an input file is missing
            NotADirectoryError: an output parent is not a directory
        """
        if self.lam is not None and not 0.0 < self.lam < 1.0:
            raise ParameterOutOfRange(f"lambda must lie in (0, 1), got {self.lam}")
        if self.depth is not None and self.depth < 1:
            raise ParameterOutOfRange(f"depth must be >= 1, got {self.depth}")
        if self.steps is not None and self.steps < 0:
            raise ParameterOutOfRange(f"steps must be >= 0, got {self.steps}")
        if self.resolution is not None and min(self.resolution) < 1:
            raise ParameterOutOfRange(f"resolution must be positive, got {self.resolution}")
        for path in ([self.polygon_path] if self.polygon_path else []) + self.inputs:
            if not path.is_file():
                raise FileNotFoundError(f"Input file not found: {path}")
        for path in self.outputs:
            parent = path.parent
            if parent.exists() and not parent.is_dir():
                raise NotADirectoryError(f"Output parent is not a directory: {parent}")
        return self


@dataclass
class CliContext:
    settings: SimulationSettings
    progress: bool = False
    overrides: Dict[str, Any] = field(default_factory=dict)

    @property
    def threads(self) -> int:
        return self.settings.threads

    @property
    def seed(self) -> int:
        return int(self.settings.get_nested("run.seed", 0))

    def subdivision_options(self) -> Dict[str, Any]:
        section = self.settings.get("subdivision", {})
        return {
            "disc_sides": int(section["disc_sides"]),
            "max_cells": int(section["max_cells"]),
            "sliver_factor": float(section["sliver_factor"]),
            "workers": self.threads,
        }

    def map_params(self, polygon: str, lam: float) -> MapParams:
        return MapParams(load_polygon(polygon), lam, float(self.settings.get_nested("geometry.singular_tol")))

    def run_config(self, subcommand: str, **kwargs) -> RunConfig:
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        kwargs["outputs"] = [Path(p) for p in kwargs.get("outputs", []) if p]
        kwargs["inputs"] = [Path(p) for p in kwargs.get("inputs", []) if p]
        if "polygon_path" in kwargs:
            kwargs["polygon_path"] = Path(kwargs["polygon_path"])
        return RunConfig(subcommand, seed=self.seed, threads=self.threads, overrides=dict(self.overrides),
                         **kwargs).validate()


def _parse_pair(value: str, name: str, kind=float) -> Tuple:
    try:
        parts = [kind(v) for v in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected two comma-separated numbers, got {value!r}", param_hint=name)
    if len(parts) != 2:
        raise click.BadParameter(f"expected two comma-separated numbers, got {value!r}", param_hint=name)
    return tuple(parts)


def _parse_override(item: str) -> Tuple[str, Any]:
    if "=" not in item:
        raise click.BadParameter(f"expected KEY=VALUE, got {item!r}", param_hint="--set")
    key, raw = item.split("=", 1)
    return key.strip(), yaml.safe_load(raw)


def _log_written(event: str, result: ExportResult):
    logger.info(f"Wrote {result.output_path} ({result.file_size} bytes)")


def _emit(content: Any, json_out: Optional[str] = None):
    """Print a JSON result and optionally write it to a file."""
    if json_out:
        export_to_file(content, Path(json_out), format=ExportFormat.JSON, data_type=DataType.MAPPING)
    click.echo(to_json_text(content), nl=False)


polygon_option = click.option("--polygon", "polygon", required=True, type=click.Path(dir_okay=False),
                              help="Polygon file: one 'x y' pair per line")
lambda_option = click.option("--lambda", "lam", required=True, type=float, help="Contraction factor in (0, 1)")
json_option = click.option("--json", "json_out", type=click.Path(dir_okay=False), default=None,
                           help="Also write the JSON result to this file")


@click.group()
@click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None,
              help="YAML configuration file")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.option("--threads", type=int, envvar="OBC_THREADS", default=None, help="Worker threads")
@click.option("--seed", type=int, default=None, help="Seed for randomized steps")
@click.option("--set", "overrides", multiple=True, help="Override a setting, e.g. --set basins.tol=1e-10")
@click.option("--progress/--no-progress", default=False, help="Progress bars on stderr")
@click.pass_context
def cli(ctx, config_file, log_level, threads, seed, overrides, progress):
    """Outer billiards with contraction about convex polygons."""
    if config_file and not Path(config_file).is_file():
        raise FileNotFoundError(f"Configuration file not found: {config_file}")
    settings = initialize_settings(config_file)
    applied = dict(_parse_override(item) for item in overrides)
    for key, value in applied.items():
        settings.set_nested(key, value)
    if threads is not None:
        if threads < 1:
            raise ParameterOutOfRange(f"--threads must be >= 1, got {threads}")
        settings.set_nested("performance.threads", threads)
    if seed is not None:
        settings.set_nested("run.seed", seed)
    setup_logging(log_level or settings.get_nested("app.log_level", "INFO"),
                  settings.get_nested("app.log_file"))
    initialize_export_system().add_event_handler("export_completed", _log_written)
    ctx.obj = CliContext(settings, progress, applied)


@cli.command()
@polygon_option
@lambda_option
@click.option("--point", required=True, help="Start point X,Y")
@click.option("--steps", type=int, required=True)
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def simulate(obj: CliContext, polygon, lam, point, steps, csv_out):
    """Iterate the map from one point and list the orbit."""
    obj.run_config("simulate", polygon_path=polygon, lam=lam, steps=steps, outputs=[csv_out])
    params = obj.map_params(polygon, lam)
    x, y = _parse_pair(point, "--point")
    result = orbit(params, complex(x, y), steps)
    if result.status is not OrbitStatus.COMPLETED:
        logger.warning(f"Orbit stopped at step {result.singular_step}: {result.status.value}")

    content = table(["step", "x", "y", "cone_index"], result.rows())
    if csv_out:
        export_to_file(content, Path(csv_out), ExportFormat.CSV, DataType.TABLE)
    _emit({
        "status": result.status.value,
        "steps": len(result.itinerary),
        "singular_step": result.singular_step,
        "itinerary": list(result.itinerary),
        "final_point": [result.final_point.real, result.final_point.imag],
    })
    return EXIT_OK


@cli.command("certify")
@polygon_option
@lambda_option
@click.option("--max-depth", type=int, default=None)
@click.option("--safety", type=float, default=None)
@click.option("--strict", is_flag=True, help="Exit 2 when the result is inconclusive")
@json_option
@click.pass_obj
def certify_command(obj: CliContext, polygon, lam, max_depth, safety, strict, json_out):
    """Certify asymptotic periodicity and list the attractors."""
    settings = obj.settings
    if max_depth is None:
        max_depth = int(settings.get_nested("certification.max_depth"))
    if safety is None:
        safety = float(settings.get_nested("certification.safety"))
    obj.run_config("certify", polygon_path=polygon, lam=lam, depth=max_depth, outputs=[json_out])
    params = obj.map_params(polygon, lam)
    result = certify(params, max_depth, safety, float(settings.get_nested("certification.inclusion_tol")),
                     **obj.subdivision_options())
    _emit(result.to_dict(), json_out)
    if strict and result.status is CertificationStatus.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


@cli.command()
@polygon_option
@lambda_option
@click.option("--depth", type=int, required=True)
@json_option
@click.pass_obj
def attractors(obj: CliContext, polygon, lam, depth, json_out):
    """Periodic attractors from the depth-n cell graph."""
    obj.run_config("attractors", polygon_path=polygon, lam=lam, depth=depth, outputs=[json_out])
    params = obj.map_params(polygon, lam)
    radii = trap_radii(params)
    level = subdivide(params, depth, radii, **obj.subdivision_options())
    hs = level.h_points
    if len(hs):
        margin = float(distances_to_singular_set(params.polygon, hs).min()) - 2 * radii.r * lam ** depth
    else:
        logger.warning(f"No cells left at depth {depth}; lower subdivision.sliver_factor")
        margin = None
    found = attractors_from_cells(params, level.cells,
                                  float(obj.settings.get_nested("certification.inclusion_tol")))
    _emit({
        "depth": depth,
        "cells": level.count,
        "margin": margin,
        "attractors": [a.to_dict() for a in found],
    }, json_out)
    return EXIT_OK


@cli.command()
@polygon_option
@lambda_option
@click.option("--res", "res", default=None, help="Resolution WxH")
@click.option("--bbox", default=None, help="x0,y0,x1,y1 (default: square around the trapping disc)")
@click.option("--out", "out", required=True, type=click.Path(dir_okay=False), help=".ppm or .png")
@click.option("--palette", "palette_file", type=click.Path(dir_okay=False), default=None)
@click.option("--max-depth", type=int, default=None)
@click.pass_obj
def basins(obj: CliContext, polygon, lam, res, bbox, out, palette_file, max_depth):
    """Render basins of attraction."""
    settings = obj.settings
    if res:
        try:
            width, height = (int(v) for v in res.lower().split("x"))
        except ValueError:
            raise click.BadParameter(f"expected WxH, got {res!r}", param_hint="--res")
    else:
        width, height = settings.get_nested("basins.resolution")
    box = None
    if bbox:
        parts = [float(v) for v in bbox.split(",")]
        if len(parts) != 4 or parts[0] >= parts[2] or parts[1] >= parts[3]:
            raise click.BadParameter(f"expected x0,y0,x1,y1 with x0<x1, y0<y1, got {bbox!r}", param_hint="--bbox")
        box = tuple(parts)
    if max_depth is None:
        max_depth = int(settings.get_nested("certification.max_depth"))
    obj.run_config("basins", polygon_path=polygon, lam=lam, depth=max_depth, resolution=(width, height),
                   inputs=[palette_file], outputs=[out])

    params = obj.map_params(polygon, lam)
    result = certify(params, max_depth, float(settings.get_nested("certification.safety")),
                     float(settings.get_nested("certification.inclusion_tol")), **obj.subdivision_options())
    raster = render_basins(
        params, result.attractors, box, width, height,
        int(settings.get_nested("basins.max_iter")), float(settings.get_nested("basins.tol")),
        workers=obj.threads, progress=obj.progress,
    )
    palette = load_palette(palette_file) if palette_file else default_palette(len(result.attractors))
    write_ppm(raster, palette, out)
    _emit({
        "status": result.status.value,
        "attractors": len(result.attractors),
        "labels_present": raster.attractor_labels,
        "width": width,
        "height": height,
        "bbox": list(raster.bbox),
        "output": str(out),
    })
    return EXIT_OK


@cli.command()
@polygon_option
@lambda_option
@click.option("--depth", type=int, required=True)
@click.option("--three-symbol-cap", type=int, default=None,
              help="Also search the smallest depth where every itinerary has three symbols")
@json_option
@click.pass_obj
def itineraries(obj: CliContext, polygon, lam, depth, three_symbol_cap, json_out):
    """Itinerary counts and growth diagnostics."""
    obj.run_config("itineraries", polygon_path=polygon, lam=lam, depth=depth, outputs=[json_out])
    params = obj.map_params(polygon, lam)
    counts = itinerary_counts(params, depth, **obj.subdivision_options())
    content = counts.to_dict()
    if three_symbol_cap:
        content["three_symbol_depth"] = three_symbol_depth(params, three_symbol_cap, **obj.subdivision_options())
    _emit(content, json_out)
    return EXIT_OK


@cli.command()
@polygon_option
@lambda_option
@click.option("--order", type=int, required=True)
@click.option("--svg", "svg_out", required=True, type=click.Path(dir_okay=False))
@click.option("--connections", type=int, default=None, help="Also scan for singular connections up to this length")
@click.pass_obj
def singular(obj: CliContext, polygon, lam, order, svg_out, connections):
    """Draw the singular set of order n."""
    obj.run_config("singular", polygon_path=polygon, lam=lam, depth=order, outputs=[svg_out])
    params = obj.map_params(polygon, lam)
    radii = trap_radii(params)
    segments = singular_set_order_n(params, order, radii, **obj.subdivision_options())
    export_to_file({
        "polygon": list(params.polygon.vertices),
        "segments": segments,
        "bbox": (-radii.r, -radii.r, radii.r, radii.r),
    }, Path(svg_out), ExportFormat.SVG, DataType.SEGMENTS, title=f"singular set of order {order}")
    position = general_position_check(params.polygon, float(obj.settings.get_nested("geometry.angle_tol")))
    if not position.in_general_position:
        logger.warning(f"Polygon not in general position: {len(position.offending_pairs)} parallel line pairs")
    content = {
        "order": order,
        "segments": len(segments),
        "output": str(svg_out),
        "general_position": position.in_general_position,
        "parallel_pairs": [[list(a), list(b)] for a, b in position.offending_pairs],
    }
    if connections:
        reports = detect_singular_connections(params, connections, trap=radii)
        content["connections"] = [
            {"itinerary": list(r.itinerary), "side": r.side, "residual": r.residual} for r in reports
        ]
    _emit(content)
    return EXIT_OK


@cli.group()
def transversality():
    """Bounded-coefficient polynomial bounds."""


@transversality.command()
@click.option("--alpha", type=float, required=True)
@click.option("--kmax", type=int, required=True)
@json_option
def bounds(alpha, kmax, json_out):
    """Table of lower and upper bounds for r_alpha(k)."""
    if kmax < 0:
        raise ParameterOutOfRange(f"kmax must be >= 0, got {kmax}")
    rows = []
    for k in range(kmax + 1):
        b = r_alpha_bounds(alpha, k)
        rows.append({"k": k, "lower": b.lower, "upper": b.upper})
    _emit({"alpha": alpha, "bounds": rows}, json_out)
    return EXIT_OK


@transversality.command()
@click.option("--poly", "poly_file", required=True, type=click.Path(dir_okay=False),
              help="One coefficient per line, constant term first")
@click.option("--delta", type=float, required=True)
@click.option("--eps", "epsilon", type=float, required=True)
@click.option("--interval", default="-1,1", help="a,b")
@click.option("--d", "d", type=int, default=1, help="Derivative order in the hypothesis")
@click.option("--alpha", type=float, default=None, help="Coefficient bound (default: largest |a_i|)")
@click.option("--mode", type=click.Choice(["grid", "roots"]), default="grid")
@json_option
@click.pass_obj
def check(obj: CliContext, poly_file, delta, epsilon, interval, d, alpha, mode, json_out):
    """Compare the measured sublevel set with its bound."""
    obj.run_config("transversality check", inputs=[poly_file], outputs=[json_out])
    p = load_polynomial(poly_file, alpha)
    a, b = _parse_pair(interval, "--interval")
    settings = obj.settings
    measure = sublevel_measure(p, epsilon, (a, b), mode,
                               int(settings.get_nested("transversality.grid_samples")),
                               int(settings.get_nested("transversality.root_grid")))
    bound = lojasiewicz_bound(p, d, delta, epsilon, (a, b))
    grid = np.linspace(a, b, HYPOTHESIS_GRID)
    content = {
        "measure": measure,
        "bound": bound.to_dict(),
        "hypothesis_holds_on_grid": check_delta_k_grid(p, grid, delta, d),
        "violated": measure > bound.bound,
    }
    if 0 <= a < b < 1 and p.in_family:
        family = theorem_bound(p, p.alpha, (a, b), delta, epsilon)
        content["theorem_bound"] = family.to_dict()
        content["violated"] = content["violated"] or measure > family.bound
    _emit(content, json_out)
    return EXIT_BOUND_VIOLATED if content["violated"] else EXIT_OK


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command line and map the outcome to an exit code."""
    try:
        code = cli.main(args=list(argv) if argv is not None else None,
                        prog_name="outer-billiards", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted", err=True)
        return EXIT_ERROR
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except BilliardError as e:
        click.echo(f"{type(e).__name__}: {e}", err=True)
        return EXIT_ERROR
    except OSError as e:
        click.echo(f"{type(e).__name__}: {e}", err=True)
        return EXIT_IO
    return code if isinstance(code, int) else EXIT_OK


def main():
    sys.exit(parse_and_dispatch())
