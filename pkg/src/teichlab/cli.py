"""Command-line entry point.

Exit status is 0 on success, 1 when the input or configuration is invalid and
2 when a numerical routine fails.  Result files go to ``--output-dir``, or to
``$TEICHLAB_OUTPUT_DIR``, or to the current directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema

from .disk_geometry import GeodesicBox, liouville_box, liouville_integral
from .errors import ConfigError, InvalidBoxError, TeichLabError
from .experiments import (ApproachPath, records_csv, run_liouville_asymptotics,
                          run_theorem_main)
from .lamination import lamination_mass
from .modulus import Quadrilateral, disk_quadrilateral, quad_modulus, rectangle
from .quad_diff import QuadraticDifferential, trace_trajectory
from .validation import run_validation

OUTPUT_ENV = "TEICHLAB_OUTPUT_DIR"

_NUMBER = {"type": "number"}
_PAIR = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}
DIFFERENTIAL_SCHEMA = {
    "oneOf": [
        {"type": "object", "additionalProperties": False, "required": ["kind", "c"],
         "properties": {"kind": {"const": "constant"}, "c": {"type": "number", "exclusiveMinimum": 0},
                        "phase": _NUMBER}},
        {"type": "object", "additionalProperties": False, "required": ["kind", "coeffs"],
         "properties": {"kind": {"const": "psi_squared"},
                        "coeffs": {"type": "array", "items": _PAIR, "minItems": 1},
                        "phase": _NUMBER}},
    ]
}
BOX_SCHEMA = {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4}
PATH_SCHEMA = {
    "type": "object", "additionalProperties": False, "required": ["kind", "schedule"],
    "properties": {"kind": {"enum": ["radial", "ray", "horocyclic", "tangential"]},
                   "schedule": {"type": "array", "items": _NUMBER, "minItems": 1},
                   "s0": {"type": "number", "exclusiveMinimum": 0}, "kappa": _NUMBER},
}
EXPERIMENT_SCHEMA = {
    "type": "object", "additionalProperties": False,
    "required": ["differential", "theta", "box", "path"],
    "properties": {
        "differential": DIFFERENTIAL_SCHEMA, "theta": _NUMBER, "box": BOX_SCHEMA,
        "path": PATH_SCHEMA, "grid": {"type": "integer", "minimum": 33},
        "n_boundary": {"type": "integer", "minimum": 256},
        "n_samples": {"type": "integer", "minimum": 16},
        "workers": {"type": "integer", "minimum": 1},
        "output": {"type": "string"},
    },
}
LAMINATION_SCHEMA = {
    "type": "object", "additionalProperties": False, "required": ["differential", "theta", "box"],
    "properties": {"differential": DIFFERENTIAL_SCHEMA, "theta": _NUMBER, "box": BOX_SCHEMA,
                   "n_samples": {"type": "integer", "minimum": 16}},
}
TRACE_SCHEMA = {
    "type": "object", "additionalProperties": False, "required": ["differential", "theta", "seed"],
    "properties": {"differential": DIFFERENTIAL_SCHEMA, "theta": _NUMBER, "seed": _PAIR,
                   "step": {"type": "number", "exclusiveMinimum": 0},
                   "shell": {"type": "number", "exclusiveMinimum": 0},
                   "output": {"type": "string"}},
}
QUAD_SCHEMA = {
    "type": "object", "additionalProperties": False, "required": ["boundary", "marks"],
    "properties": {"boundary": {"type": "array", "items": _PAIR, "minItems": 4},
                   "marks": {"type": "array", "items": {"type": "integer"},
                             "minItems": 4, "maxItems": 4}},
}


def _json_path(error: jsonschema.ValidationError) -> str:
    # oneOf failures point at the container; use the deepest sub-error instead
    best = jsonschema.exceptions.best_match([error]) if error.context else error
    path = "$"
    for part in best.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def load_config(source, schema: dict) -> dict:
    """Parse a JSON file (or a dict) and validate it against ``schema``."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise ConfigError(best.message, _json_path(best))
    return data


def _floats(text: str, n: int, what: str) -> list:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"{what} must be {n} comma-separated numbers", f"--{what}") from exc
    if len(vals) != n:
        raise ConfigError(f"{what} must be {n} comma-separated numbers", f"--{what}")
    return vals


def _output_dir(args) -> Path:
    out = Path(args.output_dir or os.environ.get(OUTPUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def cmd_liouville(args) -> int:
    box = GeodesicBox(*_floats(args.box, 4, "box"))
    value = liouville_integral(box, args.tol) if args.integral else liouville_box(box)
    print(f"{value:.6f}")
    return 0


def cmd_trace(args) -> int:
    cfg = load_config(args.config, TRACE_SCHEMA)
    phi = QuadraticDifferential.from_dict(cfg["differential"], "$.differential")
    seed = complex(*cfg["seed"])
    tr = trace_trajectory(phi, cfg["theta"], seed, cfg.get("step", 1e-3), cfg.get("shell", 1e-4))
    path = _output_dir(args) / cfg.get("output", "trajectory.csv")
    tr.to_csv(path)
    e0, e1 = (e.angle for e in tr.endpoints)
    print(f"phi_length={_fmt(tr.phi_length)} endpoints={_fmt(e0)},{_fmt(e1)} "
          f"samples={len(tr.points)} -> {path}")
    return 0


def cmd_lamination(args) -> int:
    cfg = load_config(args.config, LAMINATION_SCHEMA)
    phi = QuadraticDifferential.from_dict(cfg["differential"], "$.differential")
    res = lamination_mass(phi, cfg["theta"], GeodesicBox.from_json(cfg["box"]),
                          cfg.get("n_samples", 4096))
    (_output_dir(args) / "lamination.json").write_text(res.to_json() + "\n")
    flag = " (no leaves captured)" if res.coverage_warning else ""
    print(f"mass={_fmt(res.value)} error={res.error_estimate:.3g}{flag}")
    return 0


def cmd_modulus(args) -> int:
    if sum(x is not None for x in (args.rect, args.config, args.box)) != 1:
        raise ConfigError("give exactly one of --rect, --box, --config", "argv")
    if args.rect:
        q = rectangle(*_floats(args.rect, 2, "rect"))
    elif args.box:
        q = disk_quadrilateral(GeodesicBox(*_floats(args.box, 4, "box")))
    else:
        q = Quadrilateral.from_json(load_config(args.config, QUAD_SCHEMA))
    res = quad_modulus(q, args.grid)
    (_output_dir(args) / "modulus.json").write_text(res.to_json() + "\n")
    print(f"{res.value:.6f} +- {res.error_estimate:.2g}")
    return 0


def _run_experiment(args, runner, extra: bool, default_name: str) -> int:
    cfg = load_config(args.config, EXPERIMENT_SCHEMA)
    phi = QuadraticDifferential.from_dict(cfg["differential"], "$.differential")
    box = GeodesicBox.from_json(cfg["box"])
    path = ApproachPath.from_json(cfg["path"], "$.path")
    records = runner(phi, cfg["theta"], box, path, grid=cfg.get("grid", 513),
                     n_boundary=cfg.get("n_boundary", 4096), n_samples=cfg.get("n_samples", 4096),
                     workers=cfg.get("workers", 1))
    out = _output_dir(args) / cfg.get("output", default_name)
    out.write_text(records_csv(records, extra=extra))
    failed = False
    for r in records:
        if r.error:
            failed = True
            print(f"s={_fmt(r.parameter.s)} t={_fmt(r.parameter.t)} FAILED {r.error}")
            continue
        shown = r.liouville_scaled if extra else r.normalized
        print(f"s={_fmt(r.parameter.s)} t={_fmt(r.parameter.t)} K={r.dilatation:.4g} "
              f"value={_fmt(shown)} target={_fmt(r.target)}")
    print(f"wrote {out}")
    return 2 if failed else 0


def cmd_converge(args) -> int:
    return _run_experiment(args, run_theorem_main, False, "converge.csv")


def cmd_asymptotics(args) -> int:
    return _run_experiment(args, run_liouville_asymptotics, True, "asymptotics.csv")


def cmd_validate(args) -> int:
    checks = run_validation(args.seed)
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teichlab", description=__doc__.splitlines()[0])
    parser.add_argument("--output-dir", help=f"result directory (default ${OUTPUT_ENV} or .)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("liouville", help="Liouville measure of a box")
    p.add_argument("--box", required=True, help="four angles in radians: a,b,c,d")
    p.add_argument("--integral", action="store_true", help="use the double integral")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_liouville)

    p = sub.add_parser("trace", help="trace one vertical trajectory to CSV")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("lamination", help="lamination mass of a box")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_lamination)

    p = sub.add_parser("modulus", help="modulus of a quadrilateral")
    p.add_argument("--rect", help="rectangle a,b (family joining the vertical sides)")
    p.add_argument("--box", help="disk box a,b,c,d")
    p.add_argument("--config", help="quadrilateral JSON {boundary, marks}")
    p.add_argument("--grid", type=int, default=257)
    p.set_defaults(func=cmd_modulus)

    for name, func, text in (("converge", cmd_converge, "normalized moduli along a path"),
                             ("asymptotics", cmd_asymptotics, "scaled Liouville masses along a path")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("validate", help="run the quick invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (ConfigError, InvalidBoxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TeichLabError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
