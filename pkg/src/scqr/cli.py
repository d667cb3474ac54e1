"""Command-line front end.

    scqr steady    --config cfg.json
    scqr sweep     --config cfg.json --label FFF --tc 1 -o curve.csv
    scqr tables    --which 3 -o table3.csv
    scqr rates     --config cfg.json
    scqr threshold --label BBB --low 0.3 --high 0.7
    scqr analytic  --e1 1 --e3 4 --tc 2 --th 10

Data goes to stdout or ``--output``; warnings and error records go to
stderr. Exit status: 0 ok, 1 configuration error, 2 numerical failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import sys
import warnings
from pathlib import Path
from typing import Any

import numpy as np

from scqr import experiments as ex
from scqr.dynamics import SystemConfig, solve
from scqr.errors import (
    BadKind,
    ConfigError,
    DomainError,
    InvertedPopulation,
    MissingField,
    NonPositiveValue,
    SolverError,
)
from scqr.reservoir import ReservoirKind
from scqr.thermometry import analytic_isolated_t1, effective_temperature

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("steady", "sweep", "tables", "rates", "threshold", "analytic")
SWEEP_HEADER = ("label", "t_c", "t_h", "t1", "delta")


class ConfigWarning(UserWarning):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def default_document() -> dict[str, Any]:
    g = ex.DEFAULT_COUPLING
    return {
        "energies": list(ex.DEFAULT_ENERGIES),
        "gammas": [g, g, g],
        "coupling": g,
        "reservoirs": [
            {"kind": "F", "temperature": 1.0},
            {"kind": "F", "temperature": ex.DEFAULT_ROOM_TEMPERATURE},
            {"kind": "F", "temperature": 10.0},
        ],
    }


def _require(doc: dict, key: str, path: str | None = None):
    if not isinstance(doc, dict) or key not in doc:
        raise MissingField(f"missing field {path or key!r}", key=path or key)
    return doc[key]


def _number(value, key: str, *, allow_zero: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}", key=key)
    if value < 0 or (value == 0 and not allow_zero):
        bound = "nonnegative" if allow_zero else "positive"
        raise NonPositiveValue(f"{key} must be {bound}, got {value!r}", key=key)
    return float(value)


def _triple(doc: dict, key: str) -> list:
    value = _require(doc, key)
    if not isinstance(value, list) or len(value) != 3:
        raise ConfigError(f"{key} must be a list of three entries", key=key)
    return value


def parse_document(doc: dict) -> SystemConfig:
    """Validate an already-decoded configuration document.

    List entries are named with 1-based qubit indices, e.g. ``reservoirs.2.kind``.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    energies = [_number(v, f"energies.{i}") for i, v in enumerate(_triple(doc, "energies"), 1)]
    gammas = [
        _number(v, f"gammas.{i}", allow_zero=True) for i, v in enumerate(_triple(doc, "gammas"), 1)
    ]
    coupling = _number(_require(doc, "coupling"), "coupling")
    kinds, temps = [], []
    for i, res in enumerate(_triple(doc, "reservoirs"), 1):
        kind = _require(res, "kind", f"reservoirs.{i}.kind")
        try:
            kinds.append(ReservoirKind(kind) if isinstance(kind, str) else ReservoirKind(None))
        except ValueError:
            raise BadKind(
                f"reservoirs.{i}.kind must be 'B' or 'F', got {kind!r}", key=f"reservoirs.{i}.kind"
            ) from None
        key = f"reservoirs.{i}.temperature"
        temps.append(_number(_require(res, "temperature", key), key))
    config = SystemConfig.build(energies, gammas, coupling, kinds, temps)

    if config.resonance_mismatch() > 1e-12:
        e1, e2, e3 = energies
        warnings.warn(
            f"energies off resonance: E3={e3:g} but E2-E1={e2 - e1:g}", ConfigWarning, stacklevel=2
        )
    if not config.temperatures_ordered():
        warnings.warn(
            "reservoir temperatures are not ordered T_c <= T_r <= T_h", ConfigWarning, stacklevel=2
        )
    return config


def parse_config(text: str) -> SystemConfig:
    """Parse a JSON configuration document into a :class:`SystemConfig`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from None
    return parse_document(doc)


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.key=value`` overrides; list indices are 1-based."""
    doc = copy.deepcopy(doc)
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must look like key=value, got {item!r}", key=item)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        parts = key.split(".")
        node = doc
        for depth, part in enumerate(parts):
            last = depth == len(parts) - 1
            if isinstance(node, list):
                try:
                    idx = int(part) - 1
                except ValueError:
                    raise ConfigError(f"expected a list index in {key!r}", key=key) from None
                if not 0 <= idx < len(node):
                    raise ConfigError(f"index out of range in {key!r}", key=key)
                if last:
                    node[idx] = value
                else:
                    node = node[idx]
            elif isinstance(node, dict):
                if last:
                    node[part] = value
                else:
                    node = node.setdefault(part, {})
            else:
                raise ConfigError(f"cannot descend into {key!r}", key=key)
    return doc


def load_document(path: str | None) -> dict:
    if path is None:
        return default_document()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None


def grid_from(doc: dict, args) -> np.ndarray:
    grid = doc.get("grid", {}) if isinstance(doc, dict) else {}
    if not isinstance(grid, dict):
        raise ConfigError("grid must be an object", key="grid")

    def pick(flag, key, default):
        value = getattr(args, flag, None)
        return grid.get(key, default) if value is None else value

    points = pick("points", "points", ex.DEFAULT_GRID_POINTS)
    lo = pick("th_min", "t_h_min", ex.TH_RANGE[0])
    hi = pick("th_max", "t_h_max", ex.TH_RANGE[1])
    if isinstance(points, bool) or not isinstance(points, int) or points < 1:
        raise ConfigError(f"grid.points must be a positive integer, got {points!r}", key="grid.points")
    lo = _number(lo, "grid.t_h_min")
    hi = _number(hi, "grid.t_h_max")
    if points > 1 and hi <= lo:
        raise ConfigError("grid.t_h_max must exceed grid.t_h_min", key="grid.t_h_max")
    return ex.default_grid(points, lo, hi)


# ----------------------------------------------------------------------------- output


def sweep_rows(curve: ex.SweepCurve):
    yield SWEEP_HEADER
    for p in curve.points:
        yield (str(curve.label), fmt(curve.t_c), fmt(p.t_h), fmt(p.t1), fmt(p.delta))


def write_rows(rows, destination: str | Path | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    write_text(buf.getvalue(), destination)


def write_text(text: str, destination: str | Path | None) -> None:
    if destination is None:
        sys.stdout.write(text)
        return
    try:
        Path(destination).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {destination}: {exc.strerror or exc}") from exc


def emit_sweep_csv(curve: ex.SweepCurve, destination: str | Path) -> None:
    """Write ``label,t_c,t_h,t1,delta`` rows, 12 significant digits, T_h ascending."""
    write_rows(sweep_rows(curve), destination)


def read_sweep_csv(path: str | Path) -> ex.SweepCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path} holds no sweep points")
    label = ex.ConfigLabel.parse(rows[0]["label"])
    t_c = float(rows[0]["t_c"])
    points = tuple(ex.SweepPoint(float(r["t_h"]), float(r["t1"]), float(r["delta"])) for r in rows)
    return ex.SweepCurve(label, t_c, points)


def cooling_table_rows(reports: list[ex.ExperimentReport]):
    labels = list(dict.fromkeys(str(r.label) for r in reports))
    t_cs = list(dict.fromkeys(r.t_c for r in reports))
    cells = {(str(r.label), r.t_c): r for r in reports}
    yield ("t_c", *labels)
    for t_c in t_cs:
        yield (fmt(t_c), *(fmt(cells[(lab, t_c)].cooling_pct) for lab in labels))


def rate_table_rows(reports: list[ex.ExperimentReport]):
    yield ("rate", *(str(r.label) for r in reports))
    for k in range(3):
        yield (f"gamma_down_{k + 1}", *(fmt(r.rates[k].gamma_down) for r in reports))
        yield (f"gamma_up_{k + 1}", *(fmt(r.rates[k].gamma_up) for r in reports))


# ----------------------------------------------------------------------------- commands


def cmd_steady(args, doc):
    config = parse_document(doc)
    state = solve(config)
    qubits = []
    for k in (1, 2, 3):
        reduced = state.reduced(k)
        entry = {
            "qubit": k,
            "p_ground": float(reduced[1, 1].real),
            "p_excited": float(reduced[0, 0].real),
            "coherence_magnitude": float(abs(reduced[0, 1])),
        }
        try:
            entry["effective_temperature"] = effective_temperature(
                reduced, config.energies[k - 1]
            ).effective_temperature
        except InvertedPopulation:
            entry["effective_temperature"] = None
        qubits.append(entry)
    record = {
        "label": config.label,
        "temperatures": list(config.temperatures),
        "qubits": qubits,
        "diagnostics": {
            "residual": state.residual,
            "kernel_gap": state.kernel_gap if np.isfinite(state.kernel_gap) else None,
            "trace_error": state.trace_error,
            "min_eigenvalue": state.min_eigenvalue,
            "hermiticity_error": state.hermiticity_error,
        },
        "rho_real": state.rho.real.tolist(),
        "rho_imag": state.rho.imag.tolist(),
    }
    write_text(json.dumps(record, indent=2) + "\n", args.output)


def cmd_sweep(args, doc):
    config = parse_document(doc)
    grid = grid_from(doc, args)
    label = args.label or config.label
    t_c = args.tc if args.tc is not None else config.temperatures[0]
    try:
        ex.ConfigLabel.parse(label)
    except ValueError as exc:
        raise BadKind(str(exc), key="label") from None
    curve = ex.sweep_th(config, label, t_c, grid)
    write_rows(sweep_rows(curve), args.output)


def cmd_tables(args, doc):
    config = parse_document(doc)
    grid = grid_from(doc, args)
    reports = ex.reference_table(args.which, config, grid, workers=args.workers)
    rows = rate_table_rows(reports) if args.which == 4 else cooling_table_rows(reports)
    write_rows(rows, args.output)
    if args.details:
        payload = json.dumps([r.as_dict() for r in reports], indent=2) + "\n"
        write_text(payload, args.details)


def cmd_rates(args, doc):
    config = parse_document(doc)
    rows = [("qubit", "kind", "temperature", "gamma_down", "gamma_up")]
    for k, (res, r) in enumerate(zip(config.reservoirs, ex.rate_report(config)), 1):
        rows.append((k, res.kind.value, fmt(res.temperature), fmt(r.gamma_down), fmt(r.gamma_up)))
    write_rows(rows, args.output)


def cmd_threshold(args, doc):
    config = parse_document(doc)
    grid = grid_from(doc, args)
    label = args.label or config.label
    t_star = ex.refrigeration_threshold(
        config, label, (args.low, args.high), grid=grid, t_h=args.th, tol=args.tol
    )
    write_rows([("label", "t_c_threshold"), (str(ex.ConfigLabel.parse(label)), fmt(t_star))],
               args.output)


def cmd_analytic(args, doc):
    try:
        t1 = analytic_isolated_t1(args.e1, args.e3, args.tc, args.th)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    write_rows(
        [("e1", "e3", "tc", "th", "t1"), (fmt(args.e1), fmt(args.e3), fmt(args.tc), fmt(args.th), fmt(t1))],
        args.output,
    )


HANDLERS = {
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "tables": cmd_tables,
    "rates": cmd_rates,
    "threshold": cmd_threshold,
    "analytic": cmd_analytic,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scqr", description="Three-qubit refrigerator with bosonic/fermionic reservoirs"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="JSON configuration (default: E=(1,5,4), gamma=g=0.01, FFF at T=(1,2,10))")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config entry, e.g. reservoirs.1.temperature=1.5")
    gridopts = argparse.ArgumentParser(add_help=False)
    gridopts.add_argument("--points", type=int, help="number of log-spaced T_h points")
    gridopts.add_argument("--th-min", type=float)
    gridopts.add_argument("--th-max", type=float)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady", parents=[common], help="steady state and qubit temperatures (JSON)")

    p = sub.add_parser("sweep", parents=[common, gridopts], help="T1 versus T_h (CSV)")
    p.add_argument("--label", help="reservoir kinds, e.g. FBF (default: from config)")
    p.add_argument("--tc", type=float, help="cold-bath temperature (default: from config)")

    p = sub.add_parser("tables", parents=[common, gridopts], help="reproduce a results table (CSV)")
    p.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--details", help="also write per-cell records (rule, argmin T_h, rates) as JSON")
    p.add_argument("--workers", type=int, default=1)

    sub.add_parser("rates", parents=[common], help="exchange rates of each qubit (CSV)")

    p = sub.add_parser("threshold", parents=[common, gridopts], help="lowest T_c that still cools")
    p.add_argument("--label")
    p.add_argument("--low", type=float, default=0.3)
    p.add_argument("--high", type=float, default=0.7)
    p.add_argument("--th", type=float, help="fix T_h instead of minimizing over the grid")
    p.add_argument("--tol", type=float, default=1e-3)

    p = sub.add_parser("analytic", parents=[common], help="isolated-qubit closed form for T1")
    p.add_argument("--e1", type=float, required=True)
    p.add_argument("--e3", type=float, required=True)
    p.add_argument("--tc", type=float, required=True)
    p.add_argument("--th", type=float, required=True)
    return parser


def _error_record(exc: BaseException, code: int) -> str:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    key = getattr(exc, "key", None)
    if key is not None:
        record["key"] = key
    t_h = getattr(exc, "t_h", None)
    if t_h is not None:
        record["t_h"] = t_h
    return json.dumps(record)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            doc = apply_overrides(load_document(args.config), args.overrides)
            HANDLERS[args.command](args, doc)
    except (SolverError, InvertedPopulation) as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except (ConfigError, ValueError) as exc:
        return _fail(exc, EXIT_CONFIG)
    except OSError as exc:
        return _fail(exc, EXIT_IO)
    return EXIT_OK


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def _fail(exc: BaseException, code: int) -> int:
    print(_error_record(exc, code), file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
