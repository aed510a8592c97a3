"""
Command line front end.

    shockcap run          --problem sod --scheme godunov --cells 400
    shockcap convergence  --problem entropy_wave --scheme muscl --resolutions 50,100,200,400
    shockcap compare      --problem sod --schemes godunov,muscl,weno5
    shockcap list

A run configuration comes from an optional YAML file of flat keys
(`--config`) overridden by the command line flags.

Exit status: 0 on success, 1 on a configuration error, 2 when the
solver aborts.

Configuration parameters:

    csv.digits
    run.output
"""

import argparse
import csv
import logging
import os
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from config import CONFIG
from driver import (
    RunResult,
    compare_schemes,
    convergence_study,
    density_error,
    entropy_production_total,
    reference_shock_positions,
    run_problem,
)
from gas_thermo import entropy_array, primitive_arrays
from globals import ConfigError, InsufficientData, SolverError, UnknownProblem
from grid import BoundaryCondition, Grid2D
from problems import ProblemSpec, get_problem_registry
from riemann import FluxKind
from schemes import Limiter, SchemeConfig, SplitMode, all_schemes

DEFAULT_RESOLUTIONS = [50, 100, 200, 400]


class RunConfig(BaseModel):
    """
    One batch job; `problem` names a catalog entry, `problem_spec`
    describes a problem inline
    """

    model_config = ConfigDict(extra="forbid")

    problem: Optional[str] = None
    problem_spec: Optional[dict] = None
    scheme: str = "godunov"
    schemes: List[str] = []
    cells: Optional[int] = None
    resolutions: List[int] = []
    cfl: Optional[float] = None
    tmax: Optional[float] = None
    out: str = CONFIG["run.output"]
    limiter: Optional[Limiter] = None
    qvisc: Optional[float] = None
    pswitch: Optional[float] = None
    bc: Optional[BoundaryCondition] = None
    flux: Optional[FluxKind] = None
    snapshots: List[float] = []
    dt_power: float = 1.0
    split: SplitMode = SplitMode.ALTERNATE
    workers: Optional[int] = None

    @field_validator("cells")
    @classmethod
    def _positive_cells(cls, value):
        if value is not None and value < 4:
            raise ValueError("cells must be at least 4")
        return value

    @field_validator("resolutions")
    @classmethod
    def _positive_resolutions(cls, value):
        if any(n < 4 for n in value):
            raise ValueError("resolutions must be at least 4 cells")
        return value

    @field_validator("tmax")
    @classmethod
    def _positive_tmax(cls, value):
        if value is not None and not value > 0.0:
            raise ValueError("tmax must be positive")
        return value

    @model_validator(mode="after")
    def _problem_given(self):
        if (self.problem is None) == (self.problem_spec is None):
            raise ValueError("give exactly one of problem and problem_spec")
        return self

    def resolve_problem(self) -> ProblemSpec:
        registry = get_problem_registry()
        if self.problem_spec is not None:
            spec = registry.validate_entry(self.problem_spec)
        else:
            try:
                spec = registry.get(self.problem)
            except UnknownProblem as exc:
                raise ConfigError(exc.message)
        update = {}
        if self.tmax is not None:
            update["t_final"] = self.tmax
        if self.bc is not None:
            update["bc"] = [self.bc] * spec.dimension
        if update:
            spec = spec.model_copy(update=update)
        for t in self.snapshots:
            if not 0.0 <= t <= spec.t_final:
                raise ConfigError(
                    "snapshot time %g outside [0, %g]" % (t, spec.t_final), problem=spec.name
                )
        return spec

    def scheme_config(self, name: Optional[str] = None) -> SchemeConfig:
        options = {
            "scheme": name or self.scheme,
            "cfl": self.cfl,
            "limiter": self.limiter,
            "q_visc_coeff": self.qvisc,
            "switch_coeff": self.pswitch,
            "flux": self.flux,
            "split": self.split,
            "dt_power": self.dt_power,
        }
        try:
            return SchemeConfig(**{k: v for k, v in options.items() if v is not None})
        except ValidationError as exc:
            raise ConfigError(_validation_message(exc))

    def scheme_configs(self) -> List[SchemeConfig]:
        return [self.scheme_config(name) for name in (self.schemes or [self.scheme])]


def _validation_message(exc: ValidationError) -> str:
    return "; ".join(
        "%s: %s" % (".".join(str(p) for p in err["loc"]) or "config", err["msg"])
        for err in exc.errors()
    )


def load_run_config(path: Optional[str], overrides: dict) -> RunConfig:
    data = {}
    if path:
        try:
            with open(path) as stream:
                data = yaml.safe_load(stream) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError("cannot read run configuration: %s" % exc, path=path)
        if not isinstance(data, dict):
            raise ConfigError("run configuration must be a mapping", path=path)
    data.update({key: val for key, val in overrides.items() if val is not None})
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        raise ConfigError(_validation_message(exc))


#
# output files
#


def _fmt(value) -> str:
    return "%%.%dg" % CONFIG["csv.digits"] % value


def snapshot_name(t: float) -> str:
    return "snap_%s.csv" % ("%.6g" % t)


def write_snapshot(spec: ProblemSpec, grid, path: Path):
    """
    Columns x[,y],rho,u[,v],p[,S]; S only for the full Euler system
    """
    g = spec.gas
    rho, vel, p = primitive_arrays(g, grid.u)
    two_d = isinstance(grid, Grid2D)
    header = ["x", "y"] if two_d else ["x"]
    header += ["rho", "u", "v"][: vel.shape[0] + 1] + ["p"]
    columns = []
    if two_d:
        xs, ys = grid.x_centers[None, :], grid.y_centers[:, None]
        columns += [xs + 0.0 * ys, ys + 0.0 * xs]
    else:
        columns.append(grid.x_centers)
    columns += [rho] + list(vel) + [p]
    if not g.isentropic:
        header.append("S")
        columns.append(entropy_array(g, rho, p))

    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(header)
        for row in zip(*(c.ravel() for c in columns)):
            writer.writerow([_fmt(v) for v in row])


def write_summary(spec: ProblemSpec, result: RunResult, path: Path):
    lines = [
        "problem: %s" % spec.name,
        "scheme: %s" % result.scheme,
        "cells: %s" % " x ".join(str(n) for n in result.cells),
        "time: %s" % _fmt(result.time),
        "steps: %d" % result.steps,
    ]
    names = result.report.variables
    if result.errors is not None:
        for norm, values in (("L1", result.errors.l1), ("Linf", result.errors.linf)):
            lines.append(
                "%s error: %s" % (norm, ", ".join("%s=%s" % (n, _fmt(v)) for n, v in zip(names, values)))
            )
    else:
        lines.append("error norms: no exact reference")
    if spec.dimension == 1:
        lines.append("shock positions: %s" % ", ".join(_fmt(x) for x in result.report.shock_positions))
        exact = reference_shock_positions(spec, result.time)
        if exact:
            lines.append("exact shock positions: %s" % ", ".join(_fmt(x) for x in exact))
    production = entropy_production_total(result)
    lines.append(
        "entropy production: %s" % ("not evaluated" if production is None else _fmt(production))
    )
    path.write_text("\n".join(lines) + "\n")


def _output_dir(cfg: RunConfig, *parts) -> Path:
    out = Path(cfg.out, *parts)
    os.makedirs(out, exist_ok=True)
    return out


#
# verbs
#


def cmd_run(cfg: RunConfig, console: Console) -> int:
    spec = cfg.resolve_problem()
    scheme_cfg = cfg.scheme_config()
    snapshots = sorted(set(cfg.snapshots) | {spec.t_final})
    result = run_problem(spec, scheme_cfg, cfg.cells, snapshots=snapshots)

    out = _output_dir(cfg)
    for t, grid in sorted(result.snapshots.items()):
        write_snapshot(spec, grid, out / snapshot_name(t))
    result.report.to_csv(out / "report.csv")
    write_summary(spec, result, out / "summary.txt")
    console.print("%s/%s: %d steps, output in %s" % (spec.name, scheme_cfg.scheme, result.steps, out))
    return 0


def cmd_convergence(cfg: RunConfig, console: Console) -> int:
    spec = cfg.resolve_problem()
    resolutions = cfg.resolutions or DEFAULT_RESOLUTIONS
    if len(resolutions) < 3:
        raise ConfigError("a convergence study needs at least 3 resolutions")
    studies = [
        convergence_study(spec, scheme_cfg, resolutions, cfg.workers)
        for scheme_cfg in cfg.scheme_configs()
    ]

    out = _output_dir(cfg)
    with open(out / "orders.csv", "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(["scheme", "cells", "l1_error", "order"])
        for study in studies:
            for cells, error in study.rows():
                writer.writerow([study.scheme, cells, _fmt(error), _fmt(study.order.order)])

    table = Table(title="convergence on %s" % spec.name)
    table.add_column("scheme", style="cyan")
    for n in resolutions:
        table.add_column("L1(rho) N=%d" % n, justify="right")
    table.add_column("order", justify="right", style="bold")
    for study in studies:
        order = "%.3f" % study.order.order
        if not study.order.monotone:
            order += " (non-monotone)"
        table.add_row(study.scheme, *["%.3e" % e for e in study.errors], order)
    console.print(table)
    return 0


def cmd_compare(cfg: RunConfig, console: Console) -> int:
    spec = cfg.resolve_problem()
    results = compare_schemes(spec, cfg.scheme_configs(), cfg.cells, cfg.workers)

    out = _output_dir(cfg)
    header = ["scheme", "cells", "steps", "l1_rho", "entropy_production", "shock_positions"]
    table = Table(title="%s at t=%g" % (spec.name, spec.t_final))
    for name in header:
        table.add_column(name, justify="left" if name == "scheme" else "right")
    with open(out / "compare.csv", "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(header)
        for result in results:
            error = density_error(result)
            production = entropy_production_total(result)
            row = [
                result.scheme,
                "x".join(str(n) for n in result.cells),
                str(result.steps),
                "n/a" if error is None else _fmt(error),
                "not evaluated" if production is None else _fmt(production),
                " ".join(_fmt(x) for x in result.report.shock_positions),
            ]
            writer.writerow(row)
            table.add_row(*row)
    console.print(table)
    return 0


def cmd_list(console: Console) -> int:
    table = Table(title="schemes")
    table.add_column("name", style="cyan")
    table.add_column("order", justify="right")
    table.add_column("stencil", justify="right")
    table.add_column("default cfl", justify="right")
    for scheme in all_schemes():
        table.add_row(scheme.name(), str(scheme.order()), str(scheme.stencil()), "%g" % scheme.default_cfl())
    console.print(table)

    registry = get_problem_registry()
    table = Table(title="problems")
    table.add_column("name", style="cyan")
    table.add_column("dim", justify="right")
    table.add_column("t_final", justify="right")
    table.add_column("reference")
    table.add_column("description", style="dim")
    for name in registry.names():
        spec = registry.get(name)
        table.add_row(name, str(spec.dimension), "%g" % spec.t_final, spec.reference.value, spec.description)
    console.print(table)
    return 0


#
# argument parsing
#


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _names(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--problem", help="catalog problem name")
    common.add_argument("--scheme", help="scheme name (see `list`)")
    common.add_argument("--schemes", type=_names, help="comma separated scheme names")
    common.add_argument("--cells", type=int, help="cells per axis")
    common.add_argument("--resolutions", type=_ints, help="comma separated cell counts")
    common.add_argument("--cfl", type=float, help="CFL number")
    common.add_argument("--tmax", type=float, help="final time")
    common.add_argument("--out", help="output directory")
    common.add_argument("--limiter", help="MUSCL limiter: minmod or van_leer")
    common.add_argument("--qvisc", type=float, help="artificial viscosity coefficient")
    common.add_argument("--pswitch", type=float, help="pressure-switch dissipation of maccormack and lax_wendroff")
    common.add_argument("--bc", help="boundary condition on every axis")
    common.add_argument("--flux", help="interface flux of the high-order schemes")
    common.add_argument("--snapshots", type=_floats, help="comma separated output times")
    common.add_argument("--dt-power", dest="dt_power", type=float, help="dt proportional to dx^p")
    common.add_argument("--split", help="2D splitting: alternate or symmetric")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = _Parser(prog="shockcap", description="Finite-volume solvers for the Euler equations")
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.add_parser("run", parents=[common], help="solve one problem")
    sub.add_parser("convergence", parents=[common], help="convergence orders over resolutions")
    sub.add_parser("compare", parents=[common], help="several schemes on one problem")
    sub.add_parser("list", help="list schemes and problems")
    return parser


_RUN_KEYS = (
    "problem", "scheme", "schemes", "cells", "resolutions", "cfl", "tmax", "out",
    "limiter", "qvisc", "pswitch", "bc", "flux", "snapshots", "dt_power", "split", "workers",
)


def main(argv=None, console: Optional[Console] = None) -> int:
    console = console or Console()
    try:
        args = build_parser().parse_args(argv)
        if args.cmd is None:
            raise ConfigError("a command is needed: run, convergence, compare or list")
        if getattr(args, "verbose", False):
            logging.getLogger().setLevel(logging.DEBUG)
        if args.cmd == "list":
            return cmd_list(console)

        cfg = load_run_config(args.config, {key: getattr(args, key) for key in _RUN_KEYS})
        if args.cmd == "run":
            return cmd_run(cfg, console)
        if args.cmd == "convergence":
            return cmd_convergence(cfg, console)
        return cmd_compare(cfg, console)
    except (ConfigError, InsufficientData) as exc:
        logging.error("configuration error: %s", exc)
        console.print("[red]configuration error:[/red] %s" % escape(str(exc)), highlight=False)
        return 1
    except SolverError as exc:
        logging.error("solver aborted: %s", exc)
        console.print("[red]solver aborted:[/red] %s" % escape(str(exc)), highlight=False)
        return 2
