"""Command-line front end: JSON config in, JSON or CSV documents out.

Subcommands:
    check   one precession scenario -> full condition report
    sweep   the same scenario re-run over a parameter grid -> columnar table
    eprb    singlet bench -> correlators, CHSH slacks, no-signaling deviations
    fine    three-time moments -> D interval, explicit joint, exact-LP cross-check
    oracle  general marginal problem -> exact rational feasibility + witness

Exit status: 0 on success (macrorealism verdicts are data, not errors);
1 on usage, config, or I/O failure; 2 only for `fine --strict` when the
moment set admits no joint distribution. Output is byte-deterministic for
a fixed config: no timestamps, fixed key order, fixed column order, CSV
floats printed with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .marginals import (
    MarginalProblem,
    joint3_construct,
    lp_feasible,
    lp_feasible_moments,
    three_time_slacks,
)
from .measure import MomentSet, OutcomeTable
from .qops import State, density_from_bloch, sample_state
from .scenarios import EPRBModel, PrecessionModel, run_eprb, run_precession, sweep

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main"]

SCENARIO_KINDS = ("precession", "sweep", "eprb", "fine", "oracle")
NSIT_GROUPS = (
    "nsit_sum1_keep2",
    "nsit_sum1_keep3",
    "nsit_sum2_keep3",
    "nsit_sum1_keep23",
    "nsit_sum2_keep13",
)
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_DENOMINATOR = 10**9


class ConfigError(ValueError):
    """Configuration or usage problem; messages carry the offending field path."""


@dataclass(frozen=True, eq=False)
class RunConfig:
    """One fully validated invocation: scenario kind, parsed payload, options."""

    kind: str
    payload: dict
    tolerance: float
    fmt: str
    out: str


# ---------------------------------------------------------------- validation


def _object(obj, path: str, required, optional=()) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{path}: missing required keys {missing}")
    return obj


def _real(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(obj).__name__}")
    x = float(obj)
    if not np.isfinite(x):
        raise ConfigError(f"{path}: must be finite, got {obj!r}")
    return x


def _int(obj, path: str, minimum: int = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(f"{path}: expected an integer, got {type(obj).__name__}")
    if minimum is not None and obj < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {obj}")
    return int(obj)


def _real_list(obj, path: str, length: int = None) -> list:
    if not isinstance(obj, list):
        raise ConfigError(f"{path}: expected a list, got {type(obj).__name__}")
    if length is not None and len(obj) != length:
        raise ConfigError(f"{path}: expected {length} entries, got {len(obj)}")
    return [_real(v, f"{path}[{i}]") for i, v in enumerate(obj)]


def _unit3(obj, path: str) -> list:
    v = _real_list(obj, path, length=3)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-12:
        raise ConfigError(f"{path}: must be a unit 3-vector, norm {norm!r}")
    return v


def _parse_state(obj, path: str) -> State:
    _object(obj, path, required=(), optional=("bloch", "matrix", "sample"))
    keys = [k for k in ("bloch", "matrix", "sample") if k in obj]
    if len(keys) != 1:
        raise ConfigError(f"{path}: exactly one of 'bloch', 'matrix', 'sample' required")
    key = keys[0]
    if key == "bloch":
        r = _real_list(obj["bloch"], f"{path}.bloch", length=3)
        try:
            return density_from_bloch(r)
        except ValueError as exc:
            raise ConfigError(f"{path}.bloch: {exc}") from None
    if key == "sample":
        spec = _object(obj["sample"], f"{path}.sample", required=("seed",), optional=("kind", "dim"))
        seed = _int(spec["seed"], f"{path}.sample.seed", minimum=0)
        kind = spec.get("kind", "pure-haar")
        if not isinstance(kind, str):
            raise ConfigError(f"{path}.sample.kind: expected a string")
        dim = _int(spec.get("dim", 2), f"{path}.sample.dim", minimum=2)
        try:
            return sample_state(seed, kind=kind, dim=dim)
        except ValueError as exc:
            raise ConfigError(f"{path}.sample: {exc}") from None
    rows = obj["matrix"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{path}.matrix: expected a list of rows")
    parsed = []
    for i, row in enumerate(rows):
        out_row = []
        for j, cell in enumerate(row):
            where = f"{path}.matrix[{i}][{j}]"
            if isinstance(cell, list):
                re_im = _real_list(cell, where, length=2)
                out_row.append(complex(re_im[0], re_im[1]))
            else:
                out_row.append(complex(_real(cell, where)))
        parsed.append(out_row)
    try:
        return State(np.array(parsed, dtype=complex))
    except ValueError as exc:
        raise ConfigError(f"{path}.matrix: {exc}") from None


def _parse_precession(obj, path: str) -> PrecessionModel:
    _object(obj, path, required=("omega", "axis", "q_axis", "state", "times"))
    omega = _real(obj["omega"], f"{path}.omega")
    axis = _unit3(obj["axis"], f"{path}.axis")
    q_axis = _unit3(obj["q_axis"], f"{path}.q_axis")
    state = _parse_state(obj["state"], f"{path}.state")
    times = _real_list(obj["times"], f"{path}.times")
    try:
        return PrecessionModel(omega=omega, axis=axis, q_axis=q_axis, initial=state, times=times)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_grid(obj, path: str) -> list:
    if isinstance(obj, list):
        grid = _real_list(obj, path)
        if not grid:
            raise ConfigError(f"{path}: must be non-empty")
        return grid
    spec = _object(obj, path, required=("start", "stop", "count"))
    start = _real(spec["start"], f"{path}.start")
    stop = _real(spec["stop"], f"{path}.stop")
    count = _int(spec["count"], f"{path}.count", minimum=1)
    return [float(v) for v in np.linspace(start, stop, count)]


def _parse_sweep(obj, path: str) -> dict:
    _object(obj, path, required=("parameter", "grid", "precession"))
    parameter = obj["parameter"]
    if parameter not in ("omega", "omega_tau"):
        raise ConfigError(f"{path}.parameter: expected 'omega' or 'omega_tau', got {parameter!r}")
    grid = _parse_grid(obj["grid"], f"{path}.grid")
    model = _parse_precession(obj["precession"], f"{path}.precession")
    if parameter == "omega_tau":
        gaps = np.diff(model.times)
        if float(np.max(np.abs(gaps - gaps[0]))) > 1e-12:
            raise ConfigError(f"{path}.precession.times: omega_tau sweeps need equal spacing")
    return {"model": model, "parameter": parameter, "grid": grid}


def _parse_eprb(obj, path: str) -> EPRBModel:
    _object(obj, path, required=("a", "a_prime", "b", "b_prime"))
    return EPRBModel(
        a=_unit3(obj["a"], f"{path}.a"),
        a_prime=_unit3(obj["a_prime"], f"{path}.a_prime"),
        b=_unit3(obj["b"], f"{path}.b"),
        b_prime=_unit3(obj["b_prime"], f"{path}.b_prime"),
    )


def _parse_fine(obj, path: str) -> MomentSet:
    _object(obj, path, required=("singles", "pairs"))
    singles = _real_list(obj["singles"], f"{path}.singles", length=3)
    pairs_obj = _object(obj["pairs"], f"{path}.pairs", required=("12", "13", "23"))
    pairs = {}
    for key, idx in (("12", (0, 1)), ("13", (0, 2)), ("23", (1, 2))):
        pairs[idx] = _real(pairs_obj[key], f"{path}.pairs.{key}")
    try:
        return MomentSet(singles=tuple(singles), pairs=pairs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_oracle(obj, path: str) -> dict:
    _object(obj, path, required=("alphabet", "marginals"), optional=("max_denominator",))
    alphabet = obj["alphabet"]
    if not isinstance(alphabet, list) or not alphabet:
        raise ConfigError(f"{path}.alphabet: expected a non-empty list")
    alphabet = tuple(_int(n, f"{path}.alphabet[{i}]", minimum=2) for i, n in enumerate(alphabet))
    marginals = obj["marginals"]
    if not isinstance(marginals, list) or not marginals:
        raise ConfigError(f"{path}.marginals: expected a non-empty list")
    constraints = []
    for k, item in enumerate(marginals):
        where = f"{path}.marginals[{k}]"
        _object(item, where, required=("indices", "table"))
        indices = item["indices"]
        if not isinstance(indices, list) or not indices:
            raise ConfigError(f"{where}.indices: expected a non-empty list")
        indices = tuple(_int(i, f"{where}.indices[{j}]", minimum=0) for j, i in enumerate(indices))
        try:
            values = np.array(item["table"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}.table: {exc}") from None
        try:
            table = OutcomeTable(values, kind="quasi")
        except ValueError as exc:
            raise ConfigError(f"{where}.table: {exc}") from None
        constraints.append((indices, table))
    max_den = obj.get("max_denominator", DEFAULT_MAX_DENOMINATOR)
    if max_den is not None:
        max_den = _int(max_den, f"{path}.max_denominator", minimum=1)
    try:
        problem = MarginalProblem(alphabet=alphabet, constraints=tuple(constraints))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return {"problem": problem, "max_denominator": max_den}


def _parse_doc(doc) -> RunConfig:
    _object(doc, "config", required=(), optional=SCENARIO_KINDS + ("tolerance", "format", "out"))
    present = [k for k in SCENARIO_KINDS if k in doc]
    if len(present) != 1:
        raise ConfigError(
            f"config: exactly one scenario block required, found {present or 'none'}"
        )
    kind = present[0]
    tolerance = _real(doc.get("tolerance", DEFAULT_TOLERANCE), "config.tolerance")
    if tolerance < 0:
        raise ConfigError(f"config.tolerance: must be >= 0, got {tolerance}")
    fmt = doc.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"config.format: expected 'json' or 'csv', got {fmt!r}")
    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("config.out: expected a string path")

    block = doc[kind]
    if kind == "precession":
        payload = {"model": _parse_precession(block, "scenario")}
    elif kind == "sweep":
        payload = _parse_sweep(block, "scenario")
    elif kind == "eprb":
        payload = {"model": _parse_eprb(block, "scenario")}
    elif kind == "fine":
        payload = {"moments": _parse_fine(block, "scenario")}
    else:
        payload = _parse_oracle(block, "scenario")
    return RunConfig(kind=kind, payload=payload, tolerance=tolerance, fmt=fmt, out=out)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate one JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON: {exc}") from None
    return _parse_doc(doc)


# -------------------------------------------------------------- serialization


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _moments_json(m: MomentSet) -> dict:
    doc = {
        "singles": [float(x) for x in m.singles],
        "pairs": {f"{i + 1}{j + 1}": float(v) for (i, j), v in m.pairs.items()},
    }
    if m.triple is not None:
        doc["triple"] = float(m.triple)
    return doc


def _model_json(model: PrecessionModel) -> dict:
    return {
        "kind": "precession",
        "omega": model.omega,
        "axis": list(model.axis),
        "q_axis": list(model.q_axis),
        "state": _matrix_json(model.initial.matrix),
        "times": list(model.times),
    }


def _sign_name(idx) -> str:
    return "".join("p" if i == 0 else "m" for i in idx)


def _nsit_max(report, condition: str) -> float:
    vals = [s.value for s in report.slacks if s.name.startswith(condition + "_")]
    if not vals:
        raise KeyError(condition)
    return max(vals)


def _check_doc(cfg: RunConfig) -> dict:
    model = cfg.payload["model"]
    res = run_precession(model, eps=cfg.tolerance)
    three_time = len(model.times) == 3
    doc = {
        "schema": "mrbench.report.v1",
        "command": "check",
        "scenario": _model_json(model),
        "tolerance": cfg.tolerance,
        "moments": _moments_json(res.moments),
        "slacks": {s.name: s.value for s in res.report.slacks},
    }
    if three_time:
        doc["nsit_max"] = {g: _nsit_max(res.report, g) for g in NSIT_GROUPS}
    doc["witness"] = res.witness
    doc["interference"] = res.interference
    doc["verdicts"] = res.report.verdicts
    return doc


def _sweep_columns_and_rows(points) -> tuple:
    first = points[0].result.report
    lg_names = [s.name for s in first.slacks if s.name.startswith(("lg2_", "lg3_", "lg4_"))]
    has_nsit = any(s.name.startswith("nsit_") for s in first.slacks)
    verdict_names = [k for k, v in first.verdicts.items() if v is not None]
    columns = [points[0].parameter] + lg_names
    if has_nsit:
        columns += list(NSIT_GROUPS)
    columns += ["witness", "interference"] + verdict_names
    rows = []
    for pt in points:
        rep = pt.result.report
        row = [pt.value] + [rep.slack(n) for n in lg_names]
        if has_nsit:
            row += [_nsit_max(rep, g) for g in NSIT_GROUPS]
        row += [pt.result.witness, pt.result.interference]
        row += [int(rep.verdicts[n]) for n in verdict_names]
        rows.append(row)
    return columns, rows


def _sweep_doc(cfg: RunConfig) -> dict:
    points = sweep(
        cfg.payload["model"], cfg.payload["parameter"], cfg.payload["grid"], eps=cfg.tolerance
    )
    columns, rows = _sweep_columns_and_rows(points)
    return {
        "schema": "mrbench.sweep.v1",
        "command": "sweep",
        "parameter": cfg.payload["parameter"],
        "scenario": _model_json(cfg.payload["model"]),
        "tolerance": cfg.tolerance,
        "columns": columns,
        "rows": rows,
    }


def _eprb_doc(cfg: RunConfig) -> dict:
    model = cfg.payload["model"]
    res = run_eprb(model)
    tables = {name: res.tables[name].values.tolist() for name in sorted(res.tables)}
    return {
        "schema": "mrbench.eprb.v1",
        "command": "eprb",
        "scenario": {
            "kind": "eprb",
            "a": list(model.a),
            "a_prime": list(model.a_prime),
            "b": list(model.b),
            "b_prime": list(model.b_prime),
        },
        "correlators": dict(sorted(res.correlators.items())),
        "chsh": {s.name: s.value for s in res.chsh},
        "chsh_min": min(s.value for s in res.chsh),
        "nosignal": {s.name: s.value for s in res.nosignal},
        "nosignal_max": max(s.value for s in res.nosignal),
        "seqsum_late": {s.name: s.value for s in res.seqsum_late},
        "seqsum_late_max": max(s.value for s in res.seqsum_late),
        "seqsum_early": {s.name: s.value for s in res.seqsum_early},
        "seqsum_early_max": max(s.value for s in res.seqsum_early),
        "tables": tables,
    }


def _fine_doc(cfg: RunConfig) -> tuple:
    m = cfg.payload["moments"]
    result = joint3_construct(m)
    lp = lp_feasible_moments(m)
    empty = result.interval.empty
    doc = {
        "schema": "mrbench.fine.v1",
        "command": "fine",
        "moments": _moments_json(m),
        "tolerance": cfg.tolerance,
        "interval": {
            "lower": result.interval.lower,
            "upper": result.interval.upper,
            "empty": empty,
        },
        "triple": None if empty else 0.5 * (result.interval.lower + result.interval.upper),
        "slacks": {s.name: s.value for s in three_time_slacks(m)},
        "violated": list(result.violated),
        "table": None if result.table is None else result.table.values.tolist(),
        "oracle_feasible": lp.feasible,
        "rationalization_error": lp.rationalization_error,
        "agree": (not empty) == lp.feasible,
    }
    return doc, empty


def _oracle_doc(cfg: RunConfig) -> dict:
    problem = cfg.payload["problem"]
    lp = lp_feasible(problem, max_denominator=cfg.payload["max_denominator"])
    doc = {
        "schema": "mrbench.oracle.v1",
        "command": "oracle",
        "alphabet": list(problem.alphabet),
        "n_constraints": len(problem.constraints),
        "feasible": lp.feasible,
        "rationalization_error": lp.rationalization_error,
        "witness": None if lp.witness is None else lp.witness.values.tolist(),
        "witness_exact": None
        if lp.witness_exact is None
        else {",".join(map(str, k)): str(v) for k, v in lp.witness_exact.items()},
    }
    return doc


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _name_value_rows(doc: dict) -> list:
    """Flatten a report document into plot-ready (name, value) rows."""
    rows = [["name", "value"]]

    def emit(name, value):
        rows.append([name, value])

    command = doc["command"]
    if command == "check":
        for name, value in doc["slacks"].items():
            emit(name, value)
        for name, value in doc.get("nsit_max", {}).items():
            emit(name, value)
        emit("witness", doc["witness"])
        emit("interference", doc["interference"])
        for name, value in doc["verdicts"].items():
            if value is not None:
                emit(name, bool(value))
    elif command == "eprb":
        for key, value in doc["correlators"].items():
            emit(f"correlator_{key}", value)
        for section in ("chsh", "nosignal", "seqsum_late", "seqsum_early"):
            for name, value in doc[section].items():
                emit(name, value)
        emit("chsh_min", doc["chsh_min"])
        emit("nosignal_max", doc["nosignal_max"])
        emit("seqsum_late_max", doc["seqsum_late_max"])
        emit("seqsum_early_max", doc["seqsum_early_max"])
    elif command == "fine":
        emit("lower", doc["interval"]["lower"])
        emit("upper", doc["interval"]["upper"])
        emit("empty", doc["interval"]["empty"])
        if doc["triple"] is not None:
            emit("triple", doc["triple"])
        for name, value in doc["slacks"].items():
            emit(name, value)
        if doc["table"] is not None:
            values = np.array(doc["table"])
            for idx in np.ndindex(*values.shape):
                emit(f"p_{_sign_name(idx)}", float(values[idx]))
        emit("oracle_feasible", doc["oracle_feasible"])
        emit("rationalization_error", doc["rationalization_error"])
        emit("agree", doc["agree"])
    elif command == "oracle":
        emit("feasible", doc["feasible"])
        emit("rationalization_error", doc["rationalization_error"])
        if doc["witness"] is not None:
            values = np.array(doc["witness"])
            for idx in np.ndindex(*values.shape):
                emit("w_" + "_".join(map(str, idx)), float(values[idx]))
    else:
        raise ValueError(f"no key-value CSV for command {command!r}")
    return rows


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if doc["command"] == "sweep":
        return _csv_text([doc["columns"]] + doc["rows"])
    return _csv_text(_name_value_rows(doc))


def run(cfg: RunConfig, strict: bool = False) -> tuple:
    """Execute one validated configuration; returns (exit_status, document)."""
    status = 0
    if cfg.kind == "precession":
        doc = _check_doc(cfg)
    elif cfg.kind == "sweep":
        doc = _sweep_doc(cfg)
    elif cfg.kind == "eprb":
        doc = _eprb_doc(cfg)
    elif cfg.kind == "fine":
        doc, infeasible = _fine_doc(cfg)
        if strict and infeasible:
            status = 2
    elif cfg.kind == "oracle":
        doc = _oracle_doc(cfg)
    else:
        raise ValueError(f"unknown scenario kind {cfg.kind!r}")
    return status, _render(doc, cfg.fmt)


# ------------------------------------------------------------------- driver


class _ArgumentParser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2 (reserved for
    # strict-mode infeasibility)
    def error(self, message):
        raise ConfigError(f"usage: {message}")


_COMMAND_KIND = {
    "check": "precession",
    "sweep": "sweep",
    "eprb": "eprb",
    "fine": "fine",
    "oracle": "oracle",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="mrbench",
        description="Macrorealism test bench: LG inequalities, NSIT, joint-distribution checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "evaluate all conditions for one precession scenario",
        "sweep": "re-run a scenario over a parameter grid",
        "eprb": "evaluate the singlet bench",
        "fine": "construct a three-time joint distribution and cross-check the LP oracle",
        "oracle": "run the exact rational feasibility oracle on a marginal problem",
    }
    for name in ("check", "sweep", "eprb", "fine", "oracle"):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="path to the JSON configuration")
        p.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
        p.add_argument("--out", default=None, help="output path (default: standard output)")
        p.add_argument("--tolerance", type=float, default=None, help="override config tolerance")
        p.add_argument("--seed", type=int, default=None, help="override the sampled-state seed")
        if name == "fine":
            p.add_argument(
                "--strict", action="store_true", help="exit 2 when no joint distribution exists"
            )
    return parser


def _apply_seed(doc, seed: int) -> None:
    block = None
    if isinstance(doc, dict):
        if isinstance(doc.get("precession"), dict):
            block = doc["precession"]
        elif isinstance(doc.get("sweep"), dict) and isinstance(doc["sweep"].get("precession"), dict):
            block = doc["sweep"]["precession"]
    state = block.get("state") if isinstance(block, dict) else None
    if not (isinstance(state, dict) and isinstance(state.get("sample"), dict)):
        raise ConfigError(
            "config: --seed needs a sampled initial state ('state': {'sample': {...}})"
        )
    state["sample"]["seed"] = seed


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON: {exc}") from None
        if isinstance(doc, dict):
            if args.tolerance is not None:
                doc["tolerance"] = args.tolerance
            if args.format is not None:
                doc["format"] = args.format
            if args.out is not None:
                doc["out"] = args.out
        if args.seed is not None:
            _apply_seed(doc, args.seed)
        cfg = _parse_doc(doc)
        expected = _COMMAND_KIND[args.command]
        if cfg.kind != expected:
            raise ConfigError(
                f"config: subcommand {args.command!r} needs a {expected!r} block, found {cfg.kind!r}"
            )
        status, text_out = run(cfg, strict=getattr(args, "strict", False))
    except ConfigError as exc:
        print(f"mrbench: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mrbench: {exc}", file=sys.stderr)
        return 1

    try:
        if cfg.out is None:
            sys.stdout.write(text_out)
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text_out)
    except OSError as exc:
        print(f"mrbench: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
