"""Command-line front end.

Subcommands
-----------
models
    List the model catalog: ids, parameters, scan variables, admissibility
    constraints.
roots
    Full pipeline for one model instance: baseline, coefficient chain,
    canonical recurrence, real roots; emits a spectrum result.
constraint
    Tabulate the constraint polynomial over a scan-variable range, for
    external plotting.
wavefunction
    Emit one root's normalized wavefunction on a sampling grid.
verify
    Run the finite-difference check for each root (or one root) and attach
    the reports to the spectrum result; exits 4 when any report misses the
    verification thresholds.

Output is JSON (default for models/roots/verify) or CSV (default for
constraint/wavefunction); numbers carry 17 significant digits so emitted
files round-trip bit-exactly through a parse/re-emit cycle.

Exit codes: 0 success; 2 invalid request (unknown model, bad parameters,
inadmissible baseline); 3 numerical failure inside the pipeline; 4
verification shortfall.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import models, oracle, polynomials, recurrence, wavefunctions
from .errors import (
    BaselineUnsolvable,
    DomainError,
    InvalidParams,
    QesError,
    WrongModel,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

_USAGE_ERRORS = (InvalidParams, WrongModel, DomainError, BaselineUnsolvable)

# verify: a root fails its check when the action residual exceeds this or
# the gap does not shrink under grid refinement.
VERIFY_RESIDUAL_MAX = 1e-4

_CONSTRAINT_NOTES = {
    "xie-even": "V1 > 0; normalizable needs V2 < -(4n+3)*sqrt(V1) - V1",
    "xie-odd": "V1 > 0; normalizable needs V2 < -(4n+5)*sqrt(V1) - V1",
    "chen-even": "g > 0; 4*V1 <= 1; V3 >= -(1+g)",
    "chen-odd": "g > 0; 4*V1 <= 1; V3 >= -(1+g)",
    "coulomb": "omega > 0; lambda > -1/2",
    "razavy": "xi > 0; alpha and beta each 0 or 1",
    "razavy-sinh2": "xi > 0; alpha and beta each 0 or 1",
    "dshg": "xi > 0; M = n + 1",
    "perturbed-dshg": (
        "xi > 0; beta in [0, 1] excluding 1/2; the four (alpha, beta) "
        "parity choices form the quadruplet that covers one level family"
    ),
    "perturbed-dshg-sinh2": (
        "xi > 0; beta in [0, 1] excluding 1/2; the four (alpha, beta) "
        "parity choices form the quadruplet that covers one level family"
    ),
}


# ---------------------------------------------------------------------------
# number parsing / emission
# ---------------------------------------------------------------------------

def _parse_value(text):
    """Parse a CLI parameter value, keeping it exact whenever possible.

    Integers stay ``int``; finite decimals and ratios become ``Fraction``
    (``0.09`` parses to 9/100, ``1/4`` to 1/4), so model coefficient tables
    built from CLI input stay exact rationals end to end.  Anything else
    falls back to float.
    """
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        value = float(text)
    except ValueError:
        raise InvalidParams(f"cannot parse parameter value {text!r} as a number")
    if not math.isfinite(value):
        raise InvalidParams(f"parameter value {text!r} is not finite")
    return value


def _parse_params(pairs):
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise InvalidParams(f"--param expects key=value, got {item!r}")
        out[key] = _parse_value(value)
    return out


def _parse_range(text):
    parts = (text or "").split(":")
    if len(parts) != 3:
        raise InvalidParams(f"--range expects min:max:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidParams(f"--range expects numeric min:max:steps, got {text!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise InvalidParams("--range needs finite min < max")
    if steps < 2:
        raise InvalidParams("--range needs at least 2 steps")
    return np.linspace(lo, hi, steps)


def _fmt(x):
    """17-significant-digit text for a finite float (round-trip exact)."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # avoid "-0": it reparses as int 0 and would emit differently
    return format(x, ".17g")


def _json_scalar(x):
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return _fmt(x)


def emit_json(obj, indent=0):
    """Deterministic JSON text: insertion-ordered keys, '.17g' floats.

    Parsing the output with ``json.loads`` and re-emitting through this
    function reproduces the bytes exactly (floats carry every bit; a float
    that prints as an integer literal reparses as int and prints the same).
    """
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(key))}: {emit_json(value, indent + 1)}"
            for key, value in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        inner = ",\n".join(f"{pad}  {emit_json(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _json_scalar(obj)


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return _fmt(value)
    return str(value)


def emit_csv(header, rows):
    """CSV text: comma delimiter, '.' decimal separator, header row."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _write(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# shared pipeline pieces
# ---------------------------------------------------------------------------

def _build_model(args):
    model = models.make(args.model, n=args.n, params=_parse_params(args.param))
    scan_var = getattr(args, "scan_var", None)
    if scan_var is not None and scan_var != model.scan_name:
        raise InvalidParams(
            f"model {args.model!r} scans {model.scan_name!r}, not {scan_var!r}"
        )
    return model


def _spectrum(model):
    system = recurrence.build_baseline(model)
    chain = recurrence.run_ttrr(system)
    ttrr = polynomials.to_canonical_ttrr(system)
    roots = polynomials.real_roots(ttrr)
    return system, chain, ttrr, roots


def _pick_indices(roots, root_index):
    count = len(roots.roots)
    if root_index is None:
        return list(range(count))
    if not -count <= root_index < count:
        raise InvalidParams(
            f"--root-index {root_index} out of range for {count} roots"
        )
    return [root_index % count]


def _p_nn_zero_flag(system):
    """True when the last regular member shares a zero with the constraint.

    The z^0 coefficient of the assembled solution is that member's value at
    the root, so a shared zero means the solution loses its constant term
    there — worth surfacing as a diagnostic.  Deep chains make any float
    test hopeless: the member's value at the largest roots sits legitimately
    tens of orders below its Horner term scale without vanishing, so no
    magnitude threshold separates "tiny" from "zero".  Both polynomials
    have exact rational coefficients, though, so the question is decidable:
    they share a zero iff their polynomial GCD is non-constant.
    """
    exact = recurrence.exact_chain(system)
    gcd = polynomials.exact_gcd(exact.constraint, exact.members[exact.n])
    return len(gcd) != 1


def _scalar_param(value):
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        return float(value)
    if isinstance(value, Fraction) and value.denominator != 1:
        return float(value)
    return int(value)


def _root_row(model, root):
    row = {
        "scan_value": float(root),
        "energy": float(model.energy(root)),
        "normalizable": bool(model.normalizable(root)),
    }
    try:
        row["double_well"] = bool(model.double_well(root))
    except WrongModel:
        pass
    return row


def _spectrum_result(model_id, model, system, chain, ttrr, roots, rows):
    name, value = model.baseline()
    lam_tail = ttrr.lam[1:]
    return {
        "model": model_id,
        "params": {k: _scalar_param(v) for k, v in model.params().items()},
        "n": int(model.n),
        "baseline": {"name": name, "value": float(value)},
        "roots": rows,
        "chain": {
            "p_nn_zero_flag": _p_nn_zero_flag(system),
            "min_lambda": float(min(lam_tail)) if lam_tail else 1.0,
        },
    }


def _rows_to_csv(rows):
    header = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    flat = []
    for row in rows:
        cells = []
        for key in header:
            value = row.get(key)
            if isinstance(value, dict):
                value = None
            cells.append(value)
        flat.append(cells)
    return emit_csv(header, flat)


def _result_csv(result):
    rows = []
    for row in result["roots"]:
        flat = dict(row)
        verification = flat.pop("verification", None)
        if verification:
            flat.update(verification)
        rows.append(flat)
    return _rows_to_csv(rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_models(args):
    listing = []
    for entry in models.catalog():
        entry = dict(entry)
        entry["constraints"] = _CONSTRAINT_NOTES.get(entry["model"], "")
        listing.append(entry)
    if args.format == "csv":
        header = ["model", "scan_variable", "parameters", "constraints", "summary"]
        rows = [
            [
                e["model"],
                e["scan_variable"],
                ";".join(e["parameters"]),
                e["constraints"],
                e["summary"],
            ]
            for e in listing
        ]
        # free-text cells may contain commas; quote them the simple way
        text = "\n".join(
            ",".join('"' + c.replace('"', '""') + '"' for c in row)
            for row in [header] + rows
        ) + "\n"
    else:
        text = emit_json(listing) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_roots(args):
    model = _build_model(args)
    system, chain, ttrr, roots = _spectrum(model)
    rows = [_root_row(model, r) for r in roots.roots]
    result = _spectrum_result(args.model, model, system, chain, ttrr, roots, rows)
    if args.format == "csv":
        text = _result_csv(result)
    else:
        text = emit_json(result) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_constraint(args):
    model = _build_model(args)
    system = recurrence.build_baseline(model)
    chain = recurrence.run_ttrr(system)
    values = _parse_range(args.range)
    coeffs = [float(c) for c in chain.constraint]
    rows = []
    for x in values:
        value = polynomials.poly_eval(coeffs, float(x))
        try:
            value = math.ldexp(value, chain.constraint_exp2)
        except OverflowError:
            value = math.copysign(math.inf, value)
        rows.append((float(x), value))
    if args.format == "json":
        payload = {
            "model": args.model,
            "scan_variable": model.scan_name,
            "n": int(model.n),
            "rows": [[x, (v if math.isfinite(v) else None)] for x, v in rows],
        }
        text = emit_json(payload) + "\n"
    else:
        text = emit_csv(["scan_value", "constraint"], rows)
    _write(text, args.out)
    return EXIT_OK


def cmd_wavefunction(args):
    model = _build_model(args)
    system, chain, ttrr, roots = _spectrum(model)
    index = _pick_indices(roots, args.root_index)[0]
    root = roots.roots[index]
    grid = wavefunctions.sample(
        model,
        root,
        points=args.grid_points,
        halfwidth=args.grid_l,
        chain=chain,
    )
    if args.format == "json":
        payload = {
            "model": args.model,
            "scan_value": float(root),
            "energy": float(model.energy(root)),
            "node_count": int(grid.node_count),
            "parity": grid.parity,
            "rows": [[float(x), float(p)] for x, p in zip(grid.xs, grid.psi)],
        }
        text = emit_json(payload) + "\n"
    else:
        text = emit_csv(["x", "psi"], list(zip(grid.xs, grid.psi)))
    _write(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    model = _build_model(args)
    system, chain, ttrr, roots = _spectrum(model)
    indices = _pick_indices(roots, args.root_index)
    overrides = (args.xmin, args.xmax, args.points)
    rows = []
    all_ok = True
    for index in indices:
        root = roots.roots[index]
        cfg = None
        if any(v is not None for v in overrides):
            base = oracle.default_verify_config(model, root)
            cfg = oracle.FdConfig(
                xmin=base.xmin if args.xmin is None else args.xmin,
                xmax=base.xmax if args.xmax is None else args.xmax,
                points=base.points if args.points is None else args.points,
            )
        report = oracle.verify_root(model, root, cfg=cfg, chain=chain)
        sampled = wavefunctions.sample(model, root, chain=chain)
        row = _root_row(model, root)
        row["node_count"] = int(sampled.node_count)
        row["verification"] = {
            "algebraic_energy": report.algebraic_energy,
            "nearest_fd_energy": report.nearest_fd_energy,
            "abs_gap": report.abs_gap,
            "residual": report.residual,
            "converged": report.converged,
            "ambiguous": report.ambiguous,
        }
        if report.residual > VERIFY_RESIDUAL_MAX or not report.converged:
            all_ok = False
        rows.append(row)
    result = _spectrum_result(args.model, model, system, chain, ttrr, roots, rows)
    if args.format == "csv":
        text = _result_csv(result)
    else:
        text = emit_json(result) + "\n"
    _write(text, args.out)
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_model_options(sub):
    sub.add_argument("--model", required=True, help="model id (see `models`)")
    sub.add_argument("--n", type=int, default=None,
                     help="polynomial slice count (or give --param M=...)")
    sub.add_argument("--param", action="append", default=[], metavar="K=V",
                     help="model parameter binding; repeatable")
    sub.add_argument("--scan-var", default=None,
                     help="optional scan-variable name; checked against the model")


def _add_output_options(sub, default_format):
    sub.add_argument("--format", choices=("json", "csv"), default=default_format,
                     help=f"output format (default {default_format})")
    sub.add_argument("--out", default=None, metavar="PATH",
                     help="write to PATH instead of standard output")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qespectra",
        description="Algebraic spectra of quasi-solvable potentials via "
                    "terminating recurrence chains, with a finite-difference "
                    "cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("models", help="list the model catalog")
    _add_output_options(p, "json")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("roots", help="compute the algebraic root spectrum")
    _add_model_options(p)
    _add_output_options(p, "json")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("constraint",
                       help="tabulate the constraint polynomial over a range")
    _add_model_options(p)
    p.add_argument("--range", required=True, metavar="MIN:MAX:STEPS",
                   help="inclusive scan-variable range to tabulate "
                        "(write --range=MIN:MAX:STEPS when MIN is negative)")
    _add_output_options(p, "csv")
    p.set_defaults(func=cmd_constraint)

    p = sub.add_parser("wavefunction",
                       help="emit one root's normalized wavefunction")
    _add_model_options(p)
    p.add_argument("--root-index", type=int, required=True,
                   help="index into the ascending root list (negatives allowed)")
    p.add_argument("--grid-l", type=float, default=None,
                   help="half-width of the sampling box (default: auto decay width)")
    p.add_argument("--grid-points", type=int, default=2001,
                   help="number of sampling points (default 2001)")
    _add_output_options(p, "csv")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify",
                       help="finite-difference check of each algebraic root")
    _add_model_options(p)
    p.add_argument("--root-index", type=int, default=None,
                   help="verify only this root (default: all)")
    p.add_argument("--xmin", type=float, default=None,
                   help="override the verifier box lower edge")
    p.add_argument("--xmax", type=float, default=None,
                   help="override the verifier box upper edge")
    p.add_argument("--points", type=int, default=None,
                   help="override the verifier grid point count")
    _add_output_options(p, "json")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QesError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
