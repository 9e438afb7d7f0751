"""Command-line front end.

Exit codes: 0 all checks pass, 1 configuration error, 2 I/O error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import suites
from .io import atomic_write, read_obj, write_mesh, write_table
from .report import Check, VerificationReport

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_FAIL = 0, 1, 2, 3
OUTPUT_DIR_ENV = "FBMINIMAL_OUTPUT_DIR"

COMMANDS = ("critical-catenoid", "one-phase", "herisson", "spectral", "verify-all", "export")
FORMATS = ("obj", "csv", "json")
DEFAULT_FORMAT = {"one-phase": "csv", "export": "obj"}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    grid_n: int = 64
    tol: dict[str, float] = field(default_factory=dict)
    output_path: str | None = None
    format: str | None = None
    kind: str = "double_cone"
    alpha_bc: float = 0.5
    surface: str = "critical-catenoid"
    kappa: float | None = None
    theta0: float | None = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.grid_n < 8:
            raise ConfigError("grid_n must be at least 8")
        fmt = self.format or DEFAULT_FORMAT.get(self.command, "json")
        allowed = {"export": ("obj", "csv")}.get(self.command, ("csv", "json"))
        if fmt not in allowed:
            raise ConfigError(f"format {fmt!r} not available for {self.command}")
        for name, value in self.tol.items():
            if name not in suites.DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {name!r}")
            if not (value > 0 or (value == 0 and name == "hopf_plane")):
                raise ConfigError(f"tolerance {name} must be positive")
        if self.kind not in ("halfspace", "double_cone", "cap"):
            raise ConfigError(f"unknown one-phase kind {self.kind!r}")
        if not -1 < self.alpha_bc < 1:
            raise ConfigError("alpha_bc must lie in (-1, 1)")
        if self.surface not in suites.SURFACES:
            raise ConfigError(f"unknown surface {self.surface!r}")
        if (self.kappa is None) != (self.theta0 is None):
            raise ConfigError("kappa and theta0 must be given together")
        if self.kappa is not None and not (self.kappa > 0 and 0 < self.theta0 < math.pi):
            raise ConfigError("need kappa > 0 and 0 < theta0 < pi")
        return replace(self, format=fmt)

    def resolved_output(self) -> Path:
        if self.output_path:
            return Path(self.output_path)
        base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
        return base / f"{self.command}.{self.format}"


def run(config: RunConfig) -> tuple[VerificationReport, Path]:
    """Execute one command and write its output file."""
    cfg = config.validate()
    out = cfg.resolved_output()
    if cfg.command == "critical-catenoid":
        report = suites.critical_catenoid(cfg.grid_n, cfg.tol)
    elif cfg.command == "one-phase":
        report = suites.one_phase(cfg.kind, cfg.alpha_bc, cfg.grid_n, cfg.tol)
    elif cfg.command == "herisson":
        report = suites.herisson(cfg.grid_n, cfg.tol)
    elif cfg.command == "spectral":
        cases = None if cfg.kappa is None else [(cfg.kappa, cfg.theta0)]
        report = suites.spectral(cases, cfg.tol)
    elif cfg.command == "verify-all":
        report = suites.verify_all(cfg.grid_n, cfg.tol)
    else:
        return _export(cfg, out), out

    if cfg.command == "one-phase" and cfg.format == "csv":
        from . import cone
        sol = cone.solve_pr2_cap(cfg.alpha_bc) if cfg.kind == "cap" else cone.solve_one_phase(cfg.kind)
        write_table(["theta", "g", "g_prime", "|grad v|"], sol.table(cfg.grid_n), out)
    elif cfg.format == "csv":
        atomic_write(out, report.to_csv())
    else:
        atomic_write(out, report.to_json())
    return report, out


def _export(cfg: RunConfig, out: Path) -> VerificationReport:
    report = VerificationReport("export")
    grid, periodic = suites.surface_grid(cfg.surface, cfg.grid_n)
    write_mesh(grid, cfg.format, out, periodic=periodic)
    if cfg.format == "obj":
        verts, _ = read_obj(out)
    else:
        verts = np.loadtxt(out, delimiter=",", skiprows=1, ndmin=2)
    ref = suites.surface_reference(cfg.surface, cfg.grid_n).reshape(-1, 3)
    err = float(np.max(np.abs(verts - ref)))
    tol = {**suites.DEFAULT_TOLERANCES, **cfg.tol}["obj_roundtrip"]
    report.records.append(Check("obj_roundtrip", err, tol, "exported vertices match the surface"))
    return report


def _parse_tol(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance override {item!r} is not NAME=VALUE")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {item!r}") from exc
    return out


_CONFIG_KEYS = {"grid_n": int, "format": str, "output": str, "kind": str, "alpha_bc": float,
                "surface": str, "kappa": float, "theta0": float}


def read_config_file(path) -> dict:
    """``key=value`` lines; ``#`` starts a comment; ``tol.NAME=value`` sets a tolerance."""
    values: dict = {"tol": {}}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            try:
                if key.startswith("tol."):
                    values["tol"][key[4:]] = float(value)
                elif key in _CONFIG_KEYS:
                    values[key] = _CONFIG_KEYS[key](value)
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}") from exc
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-n", type=int, default=64, help="grid size per direction (>= 8)")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")
    common.add_argument("--output", "-o", help="output file (default: $%s or cwd)" % OUTPUT_DIR_ENV)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config", help="key=value file; its values override flags")

    parser = _Parser(prog="fbminimal", description="Free boundary minimal surfaces and one-phase cones.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("critical-catenoid", parents=[common], help="critical catenoid constants and free boundary suite")
    p = sub.add_parser("one-phase", parents=[common], help="explicit one-phase cone solutions")
    p.add_argument("--kind", choices=("halfspace", "double_cone", "cap"), default="double_cone")
    p.add_argument("--alpha-bc", type=float, default=0.5, help="boundary ratio for --kind cap")
    sub.add_parser("herisson", parents=[common], help="gradient-image (herisson) suites")
    p = sub.add_parser("spectral", parents=[common], help="geodesic disk spectral checks")
    p.add_argument("--kappa", type=float)
    p.add_argument("--theta0", type=float)
    sub.add_parser("verify-all", parents=[common], help="every suite")
    p = sub.add_parser("export", parents=[common], help="write a sampled surface")
    p.add_argument("--surface", choices=suites.SURFACES, default="critical-catenoid")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        grid_n=args.grid_n,
        tol=_parse_tol(args.tol),
        output_path=args.output,
        format=args.format,
        kind=getattr(args, "kind", "double_cone"),
        alpha_bc=getattr(args, "alpha_bc", 0.5),
        surface=getattr(args, "surface", "critical-catenoid"),
        kappa=getattr(args, "kappa", None),
        theta0=getattr(args, "theta0", None),
    )
    if args.config:
        values = read_config_file(args.config)
        cfg.tol.update(values.pop("tol"))
        if "output" in values:
            values["output_path"] = values.pop("output")
        cfg = replace(cfg, **values)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report, out = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for line in report.summary_lines():
        print(line)
    for name, value in report.constants.items():
        print(f"  {name} = {value:.12g}")
    print(f"wrote {out}")
    if not report.passed:
        print(f"{len(report.failures())} check(s) failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
