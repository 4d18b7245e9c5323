"""Command-line front end.

    darkfloquet sweep  --config fig3.cfg [--override KEY=VALUE ...] [--out PATH] [--plot] [--xlim A B]
    darkfloquet point  --config fig3.cfg --delta-p 0.2
    darkfloquet oracle --config fig3.cfg --delta-p 0.2
    darkfloquet plot   fig3.csv [more.csv ...] --out fig3.svg [--xlim A B] [--parts chi_im chi_re]

Configurations are flat JSON objects. Bundled figure configurations can be
named directly (``--config fig2.cfg``). One physics key may hold a list, in
which case ``sweep`` writes one CSV per value.

Exit status: 0 success, 1 usage or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .floquet import SolverConfig
from .model import ParameterError, SystemParams, validate
from .oracle import IntegrationConfig, IntegrationError, oracle_susceptibility
from .output import PLOT_PARTS, plot_svg, read_csv, write_csv
from .spectra import PROBE_REFERENCE, SweepSpec, find_features, group_index, susceptibility, sweep

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
MAX_INVALID_FRACTION = 0.10

_SWEEP_KEYS = {f.name for f in fields(SweepSpec)}
_SOLVER_KEYS = {f.name for f in fields(SolverConfig)}
_ORACLE_KEYS = {f.name for f in fields(IntegrationConfig)}
_PARAM_KEYS = set(SystemParams.field_names())
_RUN_KEYS = {
    "output_path": str,
    "emit_plot": bool,
    "prefactor": float,
    "probe_reference": float,
    "reverse_beat": bool,
    "oracle_tolerance": float,
    "plot_parts": list,
    "title": str,
    "workers": int,
}
_INT_KEYS = {"num_points", "max_order", "extraction_periods", "workers"}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    sweep: SweepSpec = SweepSpec()
    solver: SolverConfig = SolverConfig()
    oracle: IntegrationConfig = IntegrationConfig()
    output_path: Path | None = None
    emit_plot: bool = False
    prefactor: float = 1.0
    probe_reference: float = PROBE_REFERENCE
    reverse_beat: bool = False
    oracle_tolerance: float = 5e-4
    plot_parts: tuple[str, ...] = ("chi_im", "chi_re")
    title: str | None = None
    workers: int | None = None
    series_key: str | None = None
    series_values: tuple[float, ...] = field(default_factory=tuple)

    @property
    def chi_options(self) -> dict:
        return {
            "prefactor": self.prefactor,
            "probe_reference": self.probe_reference,
            "reverse_beat": self.reverse_beat,
        }

    def expand(self) -> list[tuple[str | None, SystemParams]]:
        """``(label, params)`` per series value, or a single unlabelled entry."""
        if self.series_key is None:
            return [(None, self.params)]
        return [
            (f"{self.series_key}={v:g}", self.params.replace(**{self.series_key: v}))
            for v in self.series_values
        ]


def bundled_configs() -> list[str]:
    return sorted(p.name for p in resources.files("darkfloquet.configs").iterdir() if p.name.endswith(".cfg"))


def _read_config_text(path: str) -> tuple[str, str]:
    if not path:
        raise ConfigError("empty configuration path")
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8"), p.stem
    if p.name == path and path in bundled_configs():
        return resources.files("darkfloquet.configs").joinpath(path).read_text(encoding="utf-8"), p.stem
    raise ConfigError(f"configuration file not found: {path}")


def _coerce(key: str, value):
    if key in _RUN_KEYS:
        kind = _RUN_KEYS[key]
        if kind is bool:
            if isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0"):
                    raise ConfigError(f"{key}: expected a boolean, got {value!r}")
                return value.lower() in ("true", "1")
            return bool(value)
        if kind is list:
            if isinstance(value, str):
                value = [v for v in value.split(",") if v]
            return tuple(value)
        return kind(value)
    if key in _INT_KEYS:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return int(value)
    if key == "transient_time" and value is None:
        return None
    if isinstance(value, list):
        return [float(v) for v in value]
    return float(value)


def parse_overrides(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must look like KEY=VALUE, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out[key.strip()] = value
    return out


def build_run_config(raw: dict, stem: str | None = None) -> RunConfig:
    """Validate a flat configuration mapping; unknown keys are errors."""
    known = _PARAM_KEYS | _SWEEP_KEYS | _SOLVER_KEYS | _ORACLE_KEYS | set(_RUN_KEYS)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
    try:
        values = {k: _coerce(k, v) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    series = [k for k in _PARAM_KEYS if isinstance(values.get(k), list)]
    if len(series) > 1:
        raise ConfigError(f"only one parameter may be a list, got {', '.join(sorted(series))}")
    series_key = series[0] if series else None
    series_values: tuple[float, ...] = ()
    if series_key:
        series_values = tuple(values[series_key])
        if not series_values:
            raise ConfigError(f"{series_key}: empty list")
        values[series_key] = series_values[0]

    for k in _SWEEP_KEYS | _SOLVER_KEYS | _ORACLE_KEYS | set(_RUN_KEYS):
        if isinstance(values.get(k), list):
            raise ConfigError(f"{k}: lists are only allowed for physics parameters")

    try:
        params = validate(SystemParams(**{k: values[k] for k in _PARAM_KEYS if k in values}))
        for v in series_values:
            validate(params.replace(**{series_key: v}))
        spec = SweepSpec(**{k: values[k] for k in _SWEEP_KEYS if k in values})
        solver = SolverConfig(**{k: values[k] for k in _SOLVER_KEYS if k in values})
        oracle = IntegrationConfig(**{k: values[k] for k in _ORACLE_KEYS if k in values})
    except (ParameterError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc

    parts = values.get("plot_parts", ("chi_im", "chi_re"))
    for part in parts:
        if part not in PLOT_PARTS:
            raise ConfigError(f"plot_parts: unknown part {part!r}")
    out = values.get("output_path")
    if out is None and stem:
        out = f"{stem}.csv"
    return RunConfig(
        params=params, sweep=spec, solver=solver, oracle=oracle,
        output_path=Path(out) if out else None,
        emit_plot=values.get("emit_plot", False),
        prefactor=values.get("prefactor", 1.0),
        probe_reference=values.get("probe_reference", PROBE_REFERENCE),
        reverse_beat=values.get("reverse_beat", False),
        oracle_tolerance=values.get("oracle_tolerance", 5e-4),
        plot_parts=tuple(parts),
        title=values.get("title"),
        workers=values.get("workers"),
        series_key=series_key,
        series_values=series_values,
    )


def load_config(path: str, overrides: list[str] | None = None) -> RunConfig:
    text, stem = _read_config_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    raw.update(parse_overrides(overrides or []))
    return build_run_config(raw, stem)


def _series_path(base: Path, label: str | None) -> Path:
    if label is None:
        return base
    key, _, value = label.partition("=")
    return base.with_name(f"{base.stem}_{key}{value}{base.suffix}")


def _writable(path: Path) -> None:
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise ConfigError(f"output directory does not exist: {parent}")


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, args.override)
    out = Path(args.out) if args.out else cfg.output_path
    if out is None:
        raise ConfigError("no output path (set output_path or pass --out)")
    _writable(out)
    plot_series = []
    status = EXIT_OK
    for label, params in cfg.expand():
        result = sweep(params, cfg.sweep, cfg.solver, workers=cfg.workers, **cfg.chi_options)
        path = _series_path(out, label)
        write_csv(result, path)
        report = find_features(result)
        prefix = f"[{label}] " if label else ""
        print(f"{prefix}{path}: {len(result.samples)} points; {report.summary()}")
        if result.invalid_fraction > MAX_INVALID_FRACTION:
            print(
                f"error: {result.invalid_fraction:.1%} of sweep points failed "
                f"(first: {next(s.error for s in result.samples if not s.valid)})",
                file=sys.stderr,
            )
            status = EXIT_NUMERIC
        plot_series.append((label or "", read_csv(path)))
    if cfg.emit_plot or args.plot:
        svg = out.with_suffix(".svg")
        plot_svg(plot_series, svg, cfg.plot_parts, tuple(args.xlim) if args.xlim else None, cfg.title)
        print(f"plot: {svg}")
    return status


def _point_values(cfg: RunConfig, params: SystemParams, delta_p: float):
    """chi at ``delta_p`` and n_g from a 3-point stencil with the sweep grid step.

    A detuning that coincides with a sweep grid point is snapped to it, so
    the result reproduces that CSV row exactly.
    """
    grid = cfg.sweep.grid()
    h = cfg.sweep.step
    k = int(np.argmin(np.abs(grid - delta_p)))
    if abs(grid[k] - delta_p) <= 1e-9 * h:
        xs = grid[k - 1:k + 2] if 0 < k < grid.size - 1 else np.array([grid[k] - h, grid[k], grid[k] + h])
    else:
        xs = np.array([delta_p - h, delta_p, delta_p + h])
    chis = [susceptibility(params.replace(delta_p=float(x)), cfg.solver, **cfg.chi_options) for x in xs]
    n_g = group_index(xs, np.array([c.real for c in chis]), cfg.sweep.omega_p_carrier)[1]
    return float(xs[1]), chis[1], float(n_g)


def cmd_point(args) -> int:
    cfg = load_config(args.config, args.override)
    for label, params in cfg.expand():
        x, chi, n_g = _point_values(cfg, params, args.delta_p)
        prefix = f"[{label}] " if label else ""
        print(f"{prefix}delta_p={x:.16e} chi_re={chi.real:.16e} chi_im={chi.imag:.16e} n_g={n_g:.16e}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args.config, args.override)
    if args.reverse_beat:
        cfg = replace(cfg, reverse_beat=True)
    tol = args.tolerance if args.tolerance is not None else cfg.oracle_tolerance
    status = EXIT_OK
    for label, params in cfg.expand():
        params = params.replace(delta_p=args.delta_p)
        chi_f = susceptibility(params, cfg.solver, **cfg.chi_options)
        chi_o = oracle_susceptibility(params, cfg.oracle, prefactor=cfg.prefactor, probe_reference=cfg.probe_reference)
        diff = abs(chi_f - chi_o)
        verdict = "PASS" if diff <= tol else "FAIL"
        prefix = f"[{label}] " if label else ""
        print(f"{prefix}delta_p={args.delta_p:g}")
        print(f"  chi_floquet = {chi_f.real:+.12e} {chi_f.imag:+.12e}i")
        print(f"  chi_oracle  = {chi_o.real:+.12e} {chi_o.imag:+.12e}i")
        print(f"  |difference| = {diff:.3e} (tolerance {tol:.1e}) {verdict}")
        if verdict == "FAIL":
            status = EXIT_NUMERIC
    return status


def cmd_plot(args) -> int:
    out = Path(args.out)
    _writable(out)
    try:
        series = [(Path(p).stem if len(args.csv) > 1 else "", read_csv(p)) for p in args.csv]
    except FileNotFoundError as exc:
        raise ConfigError(f"CSV not found: {exc.filename}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    parts = tuple(args.parts) if args.parts else ("chi_im", "chi_re")
    plot_svg(series, out, parts, tuple(args.xlim) if args.xlim else None, args.title)
    print(f"plot: {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darkfloquet",
        description="Probe susceptibility and group index of a four-level scheme with interacting dark resonances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_delta: bool):
        p.add_argument("--config", required=True, help="JSON config file or bundled name (fig2.cfg ... fig6.cfg)")
        p.add_argument("--override", action="append", metavar="KEY=VALUE", default=[], help="override a config key (repeatable)")
        if need_delta:
            p.add_argument("--delta-p", type=float, required=True, help="probe detuning")

    p = sub.add_parser("sweep", help="susceptibility over the probe-detuning grid, written as CSV")
    common(p, False)
    p.add_argument("--out", help="CSV path (default: output_path from config)")
    p.add_argument("--plot", action="store_true", help="also write an SVG next to the CSV")
    p.add_argument("--xlim", type=float, nargs=2, metavar=("A", "B"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("point", help="chi and n_g at one detuning")
    common(p, True)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("oracle", help="compare the Floquet result against direct time integration")
    common(p, True)
    p.add_argument("--reverse-beat", action="store_true", help="use the opposite beat-frequency sign in the Floquet solve")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("plot", help="SVG line chart from sweep CSV files")
    p.add_argument("csv", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--xlim", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--parts", nargs="+", choices=PLOT_PARTS)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (np.linalg.LinAlgError, IntegrationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
