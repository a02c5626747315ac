"""Command-line driver.

Scenarios live in INI files with the sections ``[equation]``, ``[grid]``,
``[time]``, ``[initial]`` and ``[output]``::

    actiflux run configs/riemann.ini
    actiflux convergence configs/advection_lin.ini --grids 50,100,200,400
    actiflux wellbalance configs/parabola.ini
    actiflux riemann configs/riemann.ini

Output goes to ``--out``, else ``$ACTIFLUX_OUT_DIR``, else ``[output] dir``.
"""
from __future__ import annotations

import argparse
import configparser
import math
import os
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import harness
from .harness import INITIAL_DATA, RunError, Scenario, ScenarioError

SECTIONS = ("equation", "grid", "time", "initial", "output")

# key -> (Scenario field or None for driver-only settings, parser)
_FLOAT, _INT, _STR, _BOOL, _PAIR, _LIST, _INTS = (
    "float", "int", "str", "bool", "pair", "floats", "ints")
KEYS = {
    "equation": {"type": ("equation", _STR), "u": ("u", _FLOAT), "u_y": ("u_y", _FLOAT),
                 "source": ("source", _STR), "kappa": ("kappa", _FLOAT),
                 "power": ("power", _FLOAT), "c": ("c", _FLOAT), "g": ("g", _FLOAT)},
    "grid": {"x_min": ("x_min", _FLOAT), "x_max": ("x_max", _FLOAT),
             "y_min": ("y_min", _FLOAT), "y_max": ("y_max", _FLOAT),
             "n_cells": ("n_cells", _INT), "n_y": ("n_y", _INT),
             "boundary": ("boundary", _STR), "window": ("window", _PAIR),
             "window_y": ("window_y", _PAIR)},
    "time": {"t_end": ("t_end", _FLOAT), "n_steps": ("n_steps", _INT),
             "cfl": ("cfl", _FLOAT), "evolution": ("evolution", _STR),
             "alpha": ("alpha", _FLOAT), "well_balanced": ("well_balanced", _BOOL)},
    "output": {"name": ("name", _STR), "dir": (None, _STR),
               "snapshot_times": ("snapshot_times", _LIST), "drift": ("drift", _BOOL),
               "drift_norm": ("drift_norm", _STR), "grids": (None, _INTS),
               "reference": (None, _INT), "eoc_norm": (None, _STR)},
}
DRIVER_DEFAULTS = {"dir": "output", "grids": None, "reference": None, "eoc_norm": "l1_avg"}


class ConfigError(ValueError):
    """Malformed or invalid configuration file."""


def _line_numbers(text: str) -> dict:
    """``(section, key) -> line`` for every assignment in an INI text."""
    where, section = {}, None
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            where[(section, None)] = no
        elif s and s[0] not in "#;" and ("=" in s or ":" in s):
            key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
            where[(section, key)] = no
    return where


def _convert(raw: str, kind: str):
    raw = raw.strip()
    if kind == _FLOAT:
        return float(raw)
    if kind == _INT:
        return int(raw)
    if kind == _BOOL:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind == _PAIR:
        vals = [float(v) for v in raw.split(",")]
        if len(vals) != 2:
            raise ValueError("expected two comma-separated numbers")
        return tuple(vals)
    if kind == _LIST:
        return tuple(float(v) for v in raw.split(",") if v.strip())
    if kind == _INTS:
        return [int(v) for v in raw.split(",") if v.strip()]
    return raw


def parse_config(path: str | Path) -> tuple[Scenario, dict]:
    """Read an INI scenario; returns the Scenario and driver settings.

    Raises :class:`ConfigError` with the file name and line number for syntax
    errors, unknown sections or keys, and values that fail validation.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read: {exc}") from exc
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: key outside of any section") from exc
    except configparser.ParsingError as exc:
        lines = ", ".join(str(no) for no, _ in exc.errors)
        raise ConfigError(f"{path}: line {lines}: syntax error") from exc
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", "?")
        raise ConfigError(f"{path}:{lineno}: {exc.message}") from exc
    where = _line_numbers(text)

    def fail(section, key, msg):
        no = where.get((section, key), where.get((section, None), "?"))
        raise ConfigError(f"{path}:{no}: [{section}] {key}: {msg}")

    for section in parser.sections():
        if section.lower() not in SECTIONS:
            fail(section.lower(), None, f"unknown section (expected one of {SECTIONS})")

    kwargs, driver, init_params = {}, dict(DRIVER_DEFAULTS), {}
    for section in parser.sections():
        sec = section.lower()
        for key, raw in parser.items(section):
            if sec == "initial":
                if key == "type":
                    kwargs["initial"] = raw.strip()
                    continue
                try:
                    init_params[key] = float(raw)
                except ValueError:
                    fail(sec, key, f"not a number: {raw!r}")
                continue
            if key not in KEYS[sec]:
                fail(sec, key, f"unknown key (allowed: {', '.join(KEYS[sec])})")
            target, kind = KEYS[sec][key]
            try:
                value = _convert(raw, kind)
            except ValueError as exc:
                fail(sec, key, str(exc))
            if target is None:
                driver[key] = value
            else:
                kwargs[target] = value

    family = kwargs.get("initial", "gaussian")
    if family in INITIAL_DATA:
        for key in init_params:
            if key not in INITIAL_DATA[family]:
                fail("initial", key,
                     f"unknown key for {family!r} (allowed: {', '.join(INITIAL_DATA[family])})")
    kwargs.setdefault("name", path.stem)
    kwargs["init_params"] = init_params
    try:
        scenario = Scenario(**kwargs)
    except ScenarioError as exc:
        field_name = str(exc).split(":", 1)[0]
        for sec, keys in KEYS.items():
            for key, (target, _) in keys.items():
                if target == field_name:
                    fail(sec, key, str(exc).split(": ", 1)[1])
        section = "initial" if field_name == "initial" else "equation"
        fail(section, "type", str(exc))
    if driver["eoc_norm"] not in harness.ERROR_NORMS:
        fail("output", "eoc_norm", f"must be one of {harness.ERROR_NORMS}")
    return scenario, driver


def _out_dir(args, driver) -> Path:
    out = args.out or os.environ.get("ACTIFLUX_OUT_DIR") or driver["dir"]
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _print_norms(label: str, norms, names) -> None:
    for k, name in enumerate(names):
        print(f"{label} {name}: L1_avg={norms.l1_avg[k]:.6e} "
              f"L1_point={norms.l1_point[k]:.6e} Linf_point={norms.linf_point[k]:.6e}")


def cmd_run(args, sc: Scenario, driver) -> int:
    out = _out_dir(args, driver)
    rec = harness.run_scenario(sc, out)
    harness.write_plot_template(out)
    print(f"{sc.name}: {rec.steps} steps to t={rec.t:.6g} in {rec.seconds:.2f} s")
    if rec.errors is not None:
        _print_norms(sc.name, rec.errors, sc.names)
        report = harness.ErrorReport([(sc.n_cells, rec.grid.dx, rec.errors)], sc.names)
        harness.write_report(out, report)
    return 0


def cmd_convergence(args, sc: Scenario, driver) -> int:
    grids = _convert(args.grids, _INTS) if args.grids else driver["grids"]
    if not grids:
        raise ConfigError("convergence needs --grids or [output] grids")
    reference = args.reference if args.reference is not None else driver["reference"]
    out = _out_dir(args, driver)
    report = harness.convergence(sc, grids, reference, driver["eoc_norm"])
    harness.write_report(out, report)
    harness.write_plot_template(out)
    orders = [math.nan] + report.eoc()
    for (n, dx, norms), order in zip(report.rows, orders):
        l1a, l1p, linf = norms.total()
        print(f"N={n:6d} dx={dx:.4e} L1_avg={l1a:.4e} L1_point={l1p:.4e} "
              f"Linf_point={linf:.4e} EOC({report.eoc_norm})={order:.3f}")
    return 0


def cmd_wellbalance(args, sc: Scenario, driver) -> int:
    if sc.equation != "acoustics":
        raise ConfigError("wellbalance needs [equation] type = acoustics")
    out = _out_dir(args, driver)
    for flag, label in ((True, "fixed"), (False, "unfixed")):
        rec = harness.run_scenario(replace(sc, well_balanced=flag, drift=True,
                                           name=f"{sc.name}_{label}"))
        harness.write_drift(out / f"drift_{label}.csv", rec.drift, sc.names)
        peak = rec.drift[:, 1:].max(axis=0)
        print(f"{label}: max drift " + " ".join(
            f"{n}={v:.3e}" for n, v in zip(sc.names, peak)))
    harness.write_plot_template(out)
    return 0


def cmd_riemann(args, sc: Scenario, driver) -> int:
    if sc.initial != "riemann":
        raise ConfigError("riemann needs [initial] type = riemann")
    out = _out_dir(args, driver)
    rec = harness.run_scenario(sc)
    grid = rec.grid
    harness.write_snapshot(out, "scheme", grid, rec.final, sc.names)
    exact = harness.exact_solution(sc)(rec.t)
    avg = harness.exact_cell_averages(grid, exact, harness.exact_breakpoints(sc, rec.t))
    harness.write_rows(out / "oracle_avg.csv", ("x", *[f"{n}_avg" for n in sc.names]),
                        zip(grid.centers, *avg))
    xs = np.linspace(grid.x_min, grid.x_max, 4 * grid.n_cells + 1)
    harness.write_rows(out / "oracle_points.csv", ("x", *[f"{n}_point" for n in sc.names]),
                        zip(xs, *exact(xs)))
    harness.write_report(out, harness.ErrorReport([(sc.n_cells, grid.dx, rec.errors)],
                                                  sc.names))
    harness.write_plot_template(out)
    _print_norms("riemann", rec.errors, sc.names)
    return 0


COMMANDS = {"run": cmd_run, "convergence": cmd_convergence,
            "wellbalance": cmd_wellbalance, "riemann": cmd_riemann}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="actiflux",
                                     description="Active Flux experiments for balance laws")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run one scenario"),
                            ("convergence", "grid sweep with EOC table"),
                            ("wellbalance", "hydrostatic run with and without the fix"),
                            ("riemann", "scheme against the exact Riemann solution")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="scenario INI file")
        p.add_argument("--out", help="output directory")
        if name == "convergence":
            p.add_argument("--grids", help="comma-separated cell counts")
            p.add_argument("--reference", type=int, help="reference resolution")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc, driver = parse_config(args.config)
        return COMMANDS[args.command](args, sc, driver)
    except (ConfigError, ScenarioError, RunError, OSError, ValueError,
            ArithmeticError) as exc:
        print(f"actiflux {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
