"""Batch front end: read a JSON configuration, solve, write CSV/JSON outputs.

Exit codes: 0 solved; 2 Newton did not converge (outputs still written);
3 invalid configuration or sector violation; 4 I/O failure; 5 singular
Jacobian (suspected pole on the line).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bvp_solver import SolveReport, SolverConfig, evaluate_solution, newton_solve
from .chebyshev import decay_diagnostic
from .complex_line import DomainLayout, LineSpec, validate_line
from .errors import SectorViolation, SingularJacobian
from .painleve_model import end_domain_operator

EXIT_OK = 0
EXIT_NO_CONVERGENCE = 2
EXIT_BAD_CONFIG = 3
EXIT_IO = 4
EXIT_SINGULAR = 5

SCHEMA_VERSION = 1
ENV_OUT_DIR = "TRITRONQUEE_OUT"
SWEEP_PARAMS = ("n_middle", "x_l", "x_r", "tolerance")
_END_SAMPLES = 201


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class OutputConfig:
    samples: int = 601
    x_min: float = -15.0
    x_max: float = 15.0
    directory: str | None = None
    formats: tuple[str, ...] = ("csv", "json")

    def __post_init__(self):
        if self.samples < 2:
            raise ConfigError("output.samples must be >= 2")
        if not self.x_min < self.x_max:
            raise ConfigError("output.x_min must be smaller than output.x_max")
        bad = set(self.formats) - {"csv", "json"}
        if bad:
            raise ConfigError(f"unknown output formats: {sorted(bad)}")


@dataclass(frozen=True)
class RunConfig:
    line: LineSpec
    layout: DomainLayout
    solver: SolverConfig = field(default_factory=SolverConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict:
        return {
            "line": {
                "a_re": self.line.a.real, "a_im": self.line.a.imag,
                "b_re": self.line.b.real, "b_im": self.line.b.imag,
                "sigma": self.line.sigma,
                "allow_outside_sector": self.line.allow_outside_sector,
            },
            "layout": {
                "x_l": self.layout.x_l, "x_r": self.layout.x_r,
                "n_end_left": self.layout.n_end_left,
                "n_middle": list(self.layout.n_middle),
                "n_end_right": self.layout.n_end_right,
                "middle_splits": list(self.layout.middle_splits),
            },
            "solver": asdict(self.solver),
            "output": {**asdict(self.output), "formats": list(self.output.formats)},
        }


def _take(section: dict, key, default, kind, where: str):
    value = section.pop(key, default)
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise TypeError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key} must be a {kind.__name__}, got {value!r}") from None


def parse_config(doc: dict) -> RunConfig:
    """Build a RunConfig from a JSON document; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    doc = dict(doc)
    line_doc = dict(doc.pop("line", {}))
    layout_doc = dict(doc.pop("layout", {}))
    solver_doc = dict(doc.pop("solver", {}))
    output_doc = dict(doc.pop("output", {}))
    if doc:
        raise ConfigError(f"unknown top-level keys: {sorted(doc)}")

    try:
        line = LineSpec(
            a=complex(_take(line_doc, "a_re", 0.0, float, "line"),
                      _take(line_doc, "a_im", 1.0, float, "line")),
            b=complex(_take(line_doc, "b_re", 0.0, float, "line"),
                      _take(line_doc, "b_im", 0.0, float, "line")),
            sigma=_take(line_doc, "sigma", -1, int, "line"),
            allow_outside_sector=_take(line_doc, "allow_outside_sector", False, bool, "line"),
        )
        if line_doc:
            raise ConfigError(f"unknown line keys: {sorted(line_doc)}")

        n_middle = layout_doc.pop("n_middle", [256])
        if not isinstance(n_middle, (list, tuple)):
            raise ConfigError("layout.n_middle must be a list of integers")
        splits = layout_doc.pop("middle_splits", [])
        if not isinstance(splits, (list, tuple)):
            raise ConfigError("layout.middle_splits must be a list of reals")
        layout = DomainLayout(
            x_l=_take(layout_doc, "x_l", -10.0, float, "layout"),
            x_r=_take(layout_doc, "x_r", 10.0, float, "layout"),
            n_end_left=_take(layout_doc, "n_end_left", 20, int, "layout"),
            n_middle=tuple(int(n) for n in n_middle),
            n_end_right=_take(layout_doc, "n_end_right", 20, int, "layout"),
            middle_splits=tuple(float(s) for s in splits),
        )
        if layout_doc:
            raise ConfigError(f"unknown layout keys: {sorted(layout_doc)}")

        solver = SolverConfig(
            tolerance=_take(solver_doc, "tolerance", 1e-10, float, "solver"),
            max_iterations=_take(solver_doc, "max_iterations", 25, int, "solver"),
            damping=_take(solver_doc, "damping", True, bool, "solver"),
            series_terms=_take(solver_doc, "series_terms", 6, int, "solver"),
        )
        if solver_doc:
            raise ConfigError(f"unknown solver keys: {sorted(solver_doc)}")

        formats = output_doc.pop("formats", ["csv", "json"])
        if not isinstance(formats, (list, tuple)):
            raise ConfigError("output.formats must be a list")
        output = OutputConfig(
            samples=_take(output_doc, "samples", 601, int, "output"),
            x_min=_take(output_doc, "x_min", -15.0, float, "output"),
            x_max=_take(output_doc, "x_max", 15.0, float, "output"),
            directory=output_doc.pop("directory", None),
            formats=tuple(formats),
        )
        if output_doc:
            raise ConfigError(f"unknown output keys: {sorted(output_doc)}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    return RunConfig(line=line, layout=layout, solver=solver, output=output)


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(doc)


def _fmt(x: float) -> str:
    """17 significant digits: lossless round trip for binary doubles."""
    return format(float(x), ".17g")


def _write_solution_csv(path: Path, config: RunConfig, state) -> None:
    xs = np.linspace(config.output.x_min, config.output.x_max, config.output.samples)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "re_omega", "im_omega", "re_domega_dx", "im_domega_dx"])
        for x in xs:
            om, dom = evaluate_solution(state, config.line, config.layout, float(x))
            writer.writerow([_fmt(x), _fmt(om.real), _fmt(om.imag),
                             _fmt(dom.real), _fmt(dom.imag)])


def _write_coeff_csvs(out_dir: Path, report: SolveReport) -> None:
    for label, spectrum in report.coeff_spectra.items():
        with open(out_dir / f"coeffs_domain_{label}.csv", "w", newline="",
                  encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "abs_c"])
            for n, mag in enumerate(spectrum.abs):
                writer.writerow([n, _fmt(mag)])


def _write_end_domain_csvs(out_dir: Path, config: RunConfig, state) -> None:
    """Dense samples of the remainder v on both end domains (for plotting)."""
    from .chebyshev import _interpolate

    for side, label in (("left", "I"), ("right", "III")):
        op = end_domain_operator(config.line, config.layout, side)
        v = state.block(label).astype(complex)
        with open(out_dir / f"end_domain_{label}.csv", "w", newline="",
                  encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["l", "re_s", "im_s", "re_v", "im_v"])
            for l in np.linspace(-1.0, 1.0, _END_SAMPLES):
                s = op.s_edge * (1.0 + l) / 2.0
                val = _interpolate(v, float(l))
                writer.writerow([_fmt(l), _fmt(s.real), _fmt(s.imag),
                                 _fmt(val.real), _fmt(val.imag)])


def _report_dict(config: RunConfig, report: SolveReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict(),
        "converged": report.converged,
        "iterations": report.iterations,
        "residual_history": [float(r) for r in report.residual_history],
        "final_residual": float(report.final_residual),
        "junction_value_mismatch": report.junction_value_mismatch,
        "junction_deriv_mismatch": report.junction_deriv_mismatch,
        "coeff_spectra": {
            label: {"re": [float(c.real) for c in spec.coeffs],
                    "im": [float(c.imag) for c in spec.coeffs]}
            for label, spec in report.coeff_spectra.items()
        },
        "jacobian_condition": float(report.jacobian_condition),
        "damping_halvings": report.damping_halvings,
        "ode_residual_refined": float(report.ode_residual_refined),
    }


def _coeff_floors(report: SolveReport) -> dict[str, float]:
    """Decay floors per outer domain; middle subdomain floors are maxed."""
    floors = {"I": math.nan, "II": math.nan, "III": math.nan}
    mid = [decay_diagnostic(spec).floor
           for label, spec in report.coeff_spectra.items()
           if label == "II" or label.startswith("II_")]
    if mid:
        floors["II"] = max(mid)
    for label in ("I", "III"):
        if label in report.coeff_spectra:
            floors[label] = decay_diagnostic(report.coeff_spectra[label]).floor
    return floors


def _resolve_out_dir(flag_value: str | None, config: RunConfig) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(ENV_OUT_DIR)
    if env:
        return Path(env)
    if config.output.directory:
        return Path(config.output.directory)
    return Path(".")


def _execute(config: RunConfig, out_dir: Path, quiet: bool) -> tuple[int, SolveReport | None]:
    """Solve one configuration and write its outputs; shared by run and sweep."""
    check = validate_line(config.line)
    if not check.ok and not config.line.allow_outside_sector:
        print("sector violation: " + "; ".join(check.violations), file=sys.stderr)
        return EXIT_BAD_CONFIG, None
    try:
        state, report = newton_solve(config.line, config.layout, config.solver)
    except SingularJacobian as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR, None

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if "csv" in config.output.formats:
            _write_solution_csv(out_dir / "solution.csv", config, state)
            _write_coeff_csvs(out_dir, report)
            _write_end_domain_csvs(out_dir, config, state)
        if "json" in config.output.formats:
            with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
                json.dump(_report_dict(config, report), fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO, report

    if not quiet:
        status = "converged" if report.converged else "NOT converged"
        print(f"{status} in {report.iterations} iterations, "
              f"residual {report.final_residual:.3e}, outputs in {out_dir}")
    return (EXIT_OK if report.converged else EXIT_NO_CONVERGENCE), report


def run(config_path: str | Path, out_dir: str | None = None, quiet: bool = False) -> int:
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    code, _ = _execute(config, _resolve_out_dir(out_dir, config), quiet)
    return code


def _apply_sweep_value(config: RunConfig, param: str, value: float) -> RunConfig:
    if param == "n_middle":
        layout = replace(config.layout, n_middle=(int(value),), middle_splits=())
        return replace(config, layout=layout)
    if param in ("x_l", "x_r"):
        layout = replace(config.layout, **{param: float(value)})
        return replace(config, layout=layout)
    if param == "tolerance":
        return replace(config, solver=replace(config.solver, tolerance=float(value)))
    raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMS}, got {param!r}")


def sweep(config_path: str | Path, param: str, values: list[float],
          out_dir: str | None = None, quiet: bool = False) -> int:
    try:
        base = load_config(config_path)
        if param not in SWEEP_PARAMS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMS}, got {param!r}")
        if not values:
            raise ConfigError("sweep needs at least one value")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    root = _resolve_out_dir(out_dir, base)
    worst = EXIT_OK
    rows = []
    for value in values:
        try:
            config = _apply_sweep_value(base, param, value)
        except (ConfigError, ValueError) as exc:
            print(f"configuration error for {param}={value}: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_BAD_CONFIG)
            rows.append((value, None))
            continue
        sub = root / f"{param}_{value:g}"
        code, report = _execute(config, sub, quiet)
        worst = max(worst, code)
        rows.append((value, report))

    try:
        root.mkdir(parents=True, exist_ok=True)
        with open(root / "sweep_summary.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["value", "converged", "final_residual", "iterations",
                             "coeff_floor_I", "coeff_floor_II", "coeff_floor_III"])
            for value, report in rows:
                if report is None:
                    writer.writerow([f"{value:g}", "false", "nan", 0, "nan", "nan", "nan"])
                    continue
                floors = _coeff_floors(report)
                writer.writerow([
                    f"{value:g}",
                    "true" if report.converged else "false",
                    _fmt(report.final_residual),
                    report.iterations,
                    _fmt(floors["I"]), _fmt(floors["II"]), _fmt(floors["III"]),
                ])
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        worst = max(worst, EXIT_IO)
    return worst


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tritronquee",
        description="Solve the Painleve-I tritronquee boundary value problem on a line "
                    "in the complex plane and write solution samples, Chebyshev spectra "
                    "and a JSON report.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one configuration")
    p_solve.add_argument("config", help="path to a JSON configuration file")
    p_solve.add_argument("--out", help=f"output directory (default: ${ENV_OUT_DIR} or config)")
    p_solve.add_argument("--quiet", action="store_true", help="suppress the summary line")

    p_sweep = sub.add_parser("sweep", help="run one solve per parameter value")
    p_sweep.add_argument("config", help="path to a JSON configuration file")
    p_sweep.add_argument("--param", required=True,
                         help=f"one of {', '.join(SWEEP_PARAMS)}")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list, e.g. 128,256")
    p_sweep.add_argument("--out", help="root output directory")
    p_sweep.add_argument("--quiet", action="store_true")

    args = parser.parse_args(argv)
    if args.command == "solve":
        return run(args.config, out_dir=args.out, quiet=args.quiet)
    values = [v for v in args.values.split(",") if v.strip()]
    try:
        parsed = [float(v) for v in values]
    except ValueError:
        print(f"configuration error: cannot parse values {args.values!r}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    return sweep(args.config, args.param, parsed, out_dir=args.out, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
