"""Command-line front end with machine-readable output.

Every subcommand emits one OutputRecord: {schema_version, command, params,
rows, warnings}.  JSON (default) serializes floats with Python's shortest
round-trip representation (up to 17 significant digits) and is byte-identical
across runs for identical argv; CSV emits the rows as a plain table with a
header line, '.' decimal separator, booleans as true/false, and warnings on
standard error.  Non-finite floats appear as the strings "inf", "-inf",
"nan".

Exit status: 0 success, 1 computation error (error name on standard error),
2 argument error (usage on standard error), 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import bounds, core, counting, enumeration, harness
from .errors import HypercrossError

SCHEMA_VERSION = 1

_TABLE_BY_FLAG = {
    "cd": "CD_TABLE",
    "delta-d": "DELTA_D_TABLE",
    "beta-kappa": "BETA_KAPPA_TABLE",
}
_MODE_BY_FLAG = {"printed": bounds.AS_PRINTED, "safe": bounds.DERIVATION_SAFE}

# Named sequence rules for `verify tensor` (CLI cannot take callables).
_A_RULES = {
    "inv": lambda j: 1.0 / j,  # ~ 1/j          (alpha=0, beta=1, lam=1)
    "invsq": lambda j: j**-2.0,  # ~ 1/j^2      (alpha=0, beta=2, lam=1)
}
_B_RULES = {
    "geo2": lambda k: 2.0**-k,
    "quartic": lambda k: k**-4.0,
    "single": lambda k: 1.0 if k == 1 else 0.0,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _add_output_flags(sp) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", help="write the serialized record to this path")


def _add_spec_flags(sp, with_target: bool) -> None:
    sp.add_argument("--d", type=_positive_int, required=True)
    sp.add_argument("--s", required=True, metavar="S1,...,SD",
                    help="smoothness values; a single value broadcasts")
    sp.add_argument("--q", metavar="Q1,...,QD",
                    help="fine indices ('inf' allowed); a single value "
                         "broadcasts; default 1 (l2) or 2 (h1)")
    if with_target:
        sp.add_argument("--target", choices=(core.TARGET_L2, core.TARGET_H1),
                        default=core.TARGET_L2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercross",
        description="Exact singular values of tensor-weight embeddings and "
                    "the closed-form estimates around them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("an", help="exact singular value a_n")
    _add_spec_flags(p, with_target=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--all", action="store_true",
                   help="emit a_1..a_n instead of a_n alone")
    _add_output_flags(p)

    p = sub.add_parser("count", help="lattice points with weight <= r")
    _add_spec_flags(p, with_target=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--upper", action="store_true",
                   help="add the zeta-product upper bound column")
    p.add_argument("--alpha", type=float, help="exponent for --upper")
    _add_output_flags(p)

    p = sub.add_parser("bound", help="one closed-form estimate for a_n")
    p.add_argument("--theorem", required=True,
                   help=f"one of {', '.join(bounds.THEOREM_IDS)}, or LOWER")
    _add_spec_flags(p, with_target=False)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--mode", choices=tuple(_MODE_BY_FLAG), default="safe")
    p.add_argument("--beta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--variant", choices=("i", "ii"))
    _add_output_flags(p)

    p = sub.add_parser("asymptotic", help="exact asymptotic constant")
    _add_spec_flags(p, with_target=False)
    p.add_argument("--sobolev-integer", action="store_true",
                   help="use the polynomial-weight norm family "
                        "(integer smoothness)")
    _add_output_flags(p)

    p = sub.add_parser("table", help="recompute a quoted reference table")
    p.add_argument("--id", choices=tuple(_TABLE_BY_FLAG), required=True)
    _add_output_flags(p)

    verify = sub.add_parser("verify", help="harness cross-checks")
    vsub = verify.add_subparsers(dest="verify_command", required=True)

    p = vsub.add_parser("sandwich", help="lower <= exact <= uppers on a grid")
    _add_spec_flags(p, with_target=True)
    p.add_argument("--theorems", required=True, metavar="ID1,ID2,...")
    p.add_argument("--n-min", type=_positive_int, default=2)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--mode", choices=tuple(_MODE_BY_FLAG), default="safe")
    p.add_argument("--beta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--variant", choices=("i", "ii"))
    _add_output_flags(p)

    p = vsub.add_parser("oracle", help="frontier engine vs brute-force box")
    _add_spec_flags(p, with_target=True)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--radius", type=_positive_int,
                   help="fixed box radius (default: auto-certified)")
    _add_output_flags(p)

    p = vsub.add_parser("ratio", help="asymptotic-ratio trace")
    _add_spec_flags(p, with_target=False)
    p.add_argument("--checkpoints", required=True, metavar="N1,N2,...")
    p.add_argument("--counting", action="store_true",
                   help="trace the counting form C(r)/(r (ln C)^(d-1)) "
                        "instead of n^s a_n/(ln n)^((nu-1)s)")
    _add_output_flags(p)

    p = vsub.add_parser("tensor", help="two-factor tensor merge probe")
    p.add_argument("--a-rule", choices=tuple(_A_RULES), required=True)
    p.add_argument("--b-rule", choices=tuple(_B_RULES), required=True)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    _add_output_flags(p)

    p = sub.add_parser("tract", help="strong-tractability verdict")
    p.add_argument("--s1", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--dmax", type=_positive_int, required=True)
    _add_output_flags(p)

    return parser


def _parse_vector(parser, text: str, d: int, flag: str) -> list:
    values = []
    for token in text.split(","):
        token = token.strip()
        if token.lower() == "inf":
            values.append(math.inf)
            continue
        try:
            values.append(float(token))
        except ValueError:
            parser.error(f"{flag} expects comma-separated numbers, got {text!r}")
    if len(values) == 1 and d > 1:
        values = values * d
    if len(values) != d:
        parser.error(f"{flag} needs 1 or {d} comma-separated values, got {text!r}")
    return values


def _parse_int_list(parser, text: str, flag: str) -> list:
    try:
        return [int(token) for token in text.split(",")]
    except ValueError:
        parser.error(f"{flag} expects comma-separated integers, got {text!r}")


def _make_spec(parser, args, target: str) -> core.ProblemSpec:
    s = _parse_vector(parser, args.s, args.d, "--s")
    default_q = "2" if target == core.TARGET_H1 else "1"
    q = _parse_vector(parser, args.q or default_q, args.d, "--q")
    return core.make_problem(args.d, s, q, target=target)


def _spec_params(spec: core.ProblemSpec) -> dict:
    user_s = list(spec.to_user_order(spec.s))
    user_q = list(spec.to_user_order(spec.q))
    return {
        "d": spec.d,
        "s": user_s,
        "q": user_q,
        "target": spec.target,
    }


# ---------------------------------------------------------------------------
# subcommands: each returns (record, verification_failed)
# ---------------------------------------------------------------------------


def _record(command: str, params: dict, rows: list, warnings: list) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "rows": rows,
        "warnings": warnings,
    }


def _cmd_an(parser, args):
    spec = _make_spec(parser, args, args.target)
    seq = enumeration.singular_values(core.weight_for(spec), args.n)
    if args.all:
        rows = [{"n": i, "a_n": v} for i, v in enumerate(seq.values, start=1)]
    else:
        rows = [{"n": args.n, "a_n": seq.values[-1]}]
    warnings = []
    if seq.tie_sensitive:
        warnings.append(
            "plateau grouping is tie-sensitive; values near equal weights "
            "may group differently under tiny perturbations"
        )
    params = _spec_params(spec) | {"n": args.n, "all": args.all}
    return _record("an", params, rows, warnings), False


def _cmd_count(parser, args):
    spec = _make_spec(parser, args, core.TARGET_L2)
    result = counting.count_exact(spec, args.r)
    row = {"r": result.r, "count": result.value}
    params = _spec_params(spec) | {"r": args.r, "upper": args.upper}
    if args.upper:
        if args.alpha is None:
            parser.error("--upper requires --alpha")
        s1 = spec.s[0]
        normalized = [x / s1 for x in spec.s]
        row["upper"] = counting.count_upper_clever(
            normalized, args.r ** (1.0 / s1), args.alpha
        )
        params["alpha"] = args.alpha
    warnings = []
    if result.tie_sensitive:
        warnings.append(
            "count is tie-sensitive: lattice points sit within float "
            "tolerance of the threshold"
        )
    return _record("count", params, [row], warnings), False


def _bound_row(result) -> dict:
    return {
        "theorem_id": result.theorem_id,
        "value": result.value,
        "applicable": result.applicable,
        "constant_mode": result.constant_mode,
        "validity_note": result.validity_note,
    }


def _cmd_bound(parser, args):
    mode = _MODE_BY_FLAG[args.mode]
    if args.theorem == bounds.LOWER_BOUND_ID:
        s = _parse_vector(parser, args.s, args.d, "--s")
        q = _parse_vector(parser, args.q or "1", args.d, "--q")
        if len(set(s)) > 1 or len(set(q)) > 1:
            parser.error("--theorem LOWER requires constant --s and --q")
        result = bounds.lower_bound(args.d, s[0], q[0], args.n)
        params = {"theorem": args.theorem, "d": args.d, "s": s, "q": q,
                  "n": args.n}
    else:
        target = (
            core.TARGET_H1 if args.theorem.startswith("ENERGY_") else core.TARGET_L2
        )
        spec = _make_spec(parser, args, target)
        kwargs = {
            name: value
            for name, value in (
                ("beta", args.beta), ("alpha", args.alpha), ("variant", args.variant)
            )
            if value is not None
        }
        result = bounds.upper_bound(spec, args.n, args.theorem, mode, **kwargs)
        params = {"theorem": args.theorem} | _spec_params(spec) | {
            "n": args.n, "mode": mode,
        } | kwargs
    row = {"n": args.n} | _bound_row(result)
    warnings = []
    if not result.applicable:
        warnings.append(
            f"{result.theorem_id} not applicable at n={args.n}: "
            f"{result.validity_note}"
        )
    return _record("bound", params, [row], warnings), False


def _cmd_asymptotic(parser, args):
    spec = _make_spec(parser, args, core.TARGET_L2)
    value = bounds.asymptotic_constant(spec, sobolev_integer=args.sobolev_integer)
    params = _spec_params(spec) | {"sobolev_integer": args.sobolev_integer}
    return _record("asymptotic", params, [{"constant": value}], []), False


def _cmd_table(parser, args):
    table = harness.reproduce_table(_TABLE_BY_FLAG[args.id])
    rows = [
        {
            "argument": row.argument,
            "computed": row.computed,
            "reference": row.reference,
            "abs_error": row.abs_error,
        }
        for row in table.rows
    ]
    return _record("table", {"id": args.id, "table_id": table.table_id}, rows, []), False


def _cmd_verify_sandwich(parser, args):
    spec = _make_spec(parser, args, args.target)
    theorems = [t.strip() for t in args.theorems.split(",") if t.strip()]
    if not theorems:
        parser.error("--theorems needs at least one theorem id")
    if args.n_min > args.n_max:
        parser.error("--n-min must not exceed --n-max")
    mode = _MODE_BY_FLAG[args.mode]
    given = {
        name: value
        for name, value in (
            ("beta", args.beta), ("alpha", args.alpha), ("variant", args.variant)
        )
        if value is not None
    }
    params_map = {}
    for tid in theorems:
        accepted = bounds.PARAMETRIC_THEOREMS.get(tid, frozenset())
        chosen = {k: v for k, v in given.items() if k in accepted}
        if chosen:
            params_map[tid] = chosen
    report = harness.verify_sandwich(
        spec, range(args.n_min, args.n_max + 1), theorems, mode,
        params=params_map or None,
    )
    rows = [
        {
            "n": v.n,
            "kind": v.kind,
            "theorem_id": v.theorem_id,
            "exact": v.exact,
            "bound": v.bound,
        }
        for v in report.violations
    ]
    warnings = []
    for i, tid in enumerate(theorems):
        if not any(row.uppers[i].applicable for row in report.rows):
            warnings.append(f"{tid} was not applicable anywhere on the grid")
    params = _spec_params(spec) | {
        "theorems": theorems, "n_min": args.n_min, "n_max": args.n_max,
        "mode": mode,
    } | given
    record = _record("verify sandwich", params, rows, warnings)
    return record, bool(report.violations)


def _cmd_verify_oracle(parser, args):
    spec = _make_spec(parser, args, args.target)
    report = harness.verify_oracle(spec, args.n_max, args.radius)
    rows = [
        {"n": n, "engine": engine, "oracle": oracle}
        for n, engine, oracle in report.mismatches
    ]
    warnings = [
        "comparison mode: "
        + ("exact-integer (must match exactly)" if report.exact_mode
           else "float (1e-12 relative)"),
        f"max relative error: {report.max_rel_error!r}",
    ]
    params = _spec_params(spec) | {"n_max": args.n_max, "radius": args.radius}
    record = _record("verify oracle", params, rows, warnings)
    return record, not report.passed


def _cmd_verify_ratio(parser, args):
    spec = _make_spec(parser, args, core.TARGET_L2)
    checkpoints = _parse_int_list(parser, args.checkpoints, "--checkpoints")
    if args.counting:
        trace = harness.counting_ratio_trace(spec, checkpoints)
        rows = [{"r": r, "ratio": value} for r, value in trace]
    else:
        trace = harness.asymptotic_ratio_trace(spec, checkpoints)
        rows = [{"n": n, "ratio": value} for n, value in trace]
    params = _spec_params(spec) | {
        "checkpoints": checkpoints, "counting": args.counting,
    }
    return _record("verify ratio", params, rows, []), False


def _cmd_verify_tensor(parser, args):
    report = harness.tensor_merge_check(
        _A_RULES[args.a_rule],
        _B_RULES[args.b_rule],
        args.n_max,
        alpha=args.alpha,
        beta=args.beta,
        lam=args.lam,
    )
    rows = [
        {"n": n, "scaled": value, "target": report.target}
        for n, value in report.rows
    ]
    params = {
        "a_rule": args.a_rule, "b_rule": args.b_rule, "n_max": args.n_max,
        "alpha": args.alpha, "beta": args.beta, "lam": args.lam,
    }
    return _record("verify tensor", params, rows, []), False


def _cmd_tract(parser, args):
    report = bounds.tractability_verdict(args.s1, args.beta, args.tau, args.dmax)
    row = {
        "partial_product": report.partial_product,
        "partial_sum": report.partial_sum,
        "meaningful": report.meaningful,
        "tail_converges": report.tail_converges,
        "strongly_tractable": report.strongly_tractable,
    }
    params = {"s1": args.s1, "beta": args.beta, "tau": args.tau,
              "dmax": args.dmax}
    return _record("tract", params, [row], []), False


def _dispatch(parser, args):
    if args.command == "an":
        return _cmd_an(parser, args)
    if args.command == "count":
        return _cmd_count(parser, args)
    if args.command == "bound":
        return _cmd_bound(parser, args)
    if args.command == "asymptotic":
        return _cmd_asymptotic(parser, args)
    if args.command == "table":
        return _cmd_table(parser, args)
    if args.command == "tract":
        return _cmd_tract(parser, args)
    # verify subcommands
    if args.verify_command == "sandwich":
        return _cmd_verify_sandwich(parser, args)
    if args.verify_command == "oracle":
        return _cmd_verify_oracle(parser, args)
    if args.verify_command == "ratio":
        return _cmd_verify_ratio(parser, args)
    return _cmd_verify_tensor(parser, args)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _sanitize(obj):
    """Replace non-finite floats by strings so the output stays parseable."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {key: _sanitize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(value) for value in obj]
    return obj


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _serialize(record: dict, fmt: str) -> tuple:
    """Returns (payload_text, warnings_for_stderr)."""
    record = _sanitize(record)
    if fmt == "json":
        return json.dumps(record) + "\n", []
    buffer = io.StringIO()
    rows = record["rows"]
    if rows:
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([_csv_cell(value) for value in row.values()])
    return buffer.getvalue(), list(record["warnings"])


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def run(argv=None) -> int:
    """Execute one subcommand; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        record, failed = _dispatch(parser, args)
    except SystemExit as exc:  # argparse errors and --help
        return exc.code if isinstance(exc.code, int) else 2
    except (HypercrossError, ValueError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    payload, stderr_warnings = _serialize(record, args.format)
    for warning in stderr_warnings:
        print(warning, file=sys.stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return 3 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
