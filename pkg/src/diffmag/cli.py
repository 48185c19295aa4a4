"""Command-line interface.

Subcommands compute precision bounds, the reference QFI table, the
gradient-QFI polytope, the optimal commutant measurement, the moment-scheme
sweep, Monte-Carlo estimation runs, and the brute-force verification suite.

JSON is the canonical interchange format (floats at 17 significant digits,
fully deterministic); CSV is available for the table-like outputs.  Exit
codes: 0 success, 1 usage error, 2 internal consistency failure.
"""

from __future__ import annotations

import argparse
import codecs
import csv
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .estimator_sim import run_estimation
from .moment_measurement import moment_sweep
from .optimal_measurement import optimal_precision, solution_figure_data
from .oracle import brute_qfi_suite, suite_max_discrepancy
from .polytope import classify_saturation
from .qfi import (
    precision_bounds,
    qfi_matrix,
    reference_qfi_blocks,
    reference_qfi_table,
)
from .spin_core import AXES, TwoWellSpace, collective_operator
from .states import NAMED_STATES, flipped_dicke_state
from .qfi import qfi_pure

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2

_AGREEMENT_TOL = 1e-9
_ORACLE_TOL = 1e-9


class CliError(Exception):
    """Usage-level problem detected after argument parsing."""


class ConsistencyError(Exception):
    """Numeric result disagrees with its closed form."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def to_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{to_json(str(k))}: {to_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{inner}{to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return '"' + codecs.encode(obj, "unicode_escape").decode().replace('"', '\\"') + '"'
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return format_float(float(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("DIFFMAG_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def _emit(text: str, out: str | None) -> None:
    path = _resolve_out(out)
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")


def _csv_text(header, rows) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(x) if isinstance(x, (float, Fraction, np.floating)) else x for x in row]
        )
    return buf.getvalue()


def _space(args) -> TwoWellSpace:
    return TwoWellSpace(args.na, args.nb)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(args) -> int:
    space = _space(args)
    state = NAMED_STATES[args.state](space)
    matrix = qfi_matrix(state, args.axis)
    bounds = precision_bounds(matrix)
    payload = {
        "na": space.na,
        "nb": space.nb,
        "state": args.state,
        "axis": args.axis,
        "f00": matrix.f00,
        "f01": matrix.f01,
        "f11": matrix.f11,
        "bound_b0": bounds.bound_b0,
        "bound_b1": bounds.bound_b1,
        "qfi_sum": bounds.qfi_sum,
    }
    blocks = reference_qfi_blocks(args.state, space.na, space.nb, args.axis)
    if blocks is not None:
        fa, fb, fab = blocks
        closed = {
            "f00": float(fa + 2 * fab + fb),
            "f01": float(fa - fb),
            "f11": float(fa - 2 * fab + fb),
        }
        payload["closed_form"] = closed
        worst = max(
            abs(closed["f00"] - matrix.f00),
            abs(closed["f01"] - matrix.f01),
            abs(closed["f11"] - matrix.f11),
        )
        payload["closed_form_discrepancy"] = worst
        if worst > _AGREEMENT_TOL:
            raise ConsistencyError(
                f"numeric QFI matrix deviates from the closed form by {worst:.3e}"
            )
    if args.format == "csv":
        keys = [k for k in payload if k not in ("closed_form",)]
        text = _csv_text(keys, [[payload[k] for k in keys]])
    else:
        text = to_json(payload)
    _emit(text, args.out)
    return EXIT_OK


def cmd_table1(args) -> int:
    space = _space(args)
    table = reference_qfi_table(space.na, space.nb)
    rows = []
    worst = 0.0
    for state_name in ("ghz", "flipped-ghz", "dicke", "flipped-dicke"):
        state = NAMED_STATES[state_name](space)
        for gen_key, axis, comb in (
            ("z+", "z", "plus"),
            ("x+", "x", "plus"),
            ("z-", "z", "minus"),
            ("x-", "x", "minus"),
        ):
            op = collective_operator(space, axis, comb).matrix
            numeric = qfi_pure(state, op, check=False)
            closed = table[(state_name, gen_key)]
            diff = abs(numeric - float(closed))
            worst = max(worst, diff)
            rows.append(
                {
                    "state": state_name,
                    "generator": gen_key,
                    "numeric": numeric,
                    "closed_form": float(closed),
                    "abs_diff": diff,
                }
            )
    if worst > _AGREEMENT_TOL:
        raise ConsistencyError(f"reference table deviates from closed forms by {worst:.3e}")
    if args.format == "csv":
        header = ["state", "generator", "numeric", "closed_form", "abs_diff"]
        text = _csv_text(header, [[r[k] for k in header] for r in rows])
    else:
        text = to_json({"na": space.na, "nb": space.nb, "rows": rows, "max_abs_diff": worst})
    _emit(text, args.out)
    return EXIT_OK


def _polytope_payload(space: TwoWellSpace, state_name: str) -> dict:
    state = NAMED_STATES[state_name](space)
    report = classify_saturation(state)
    return {
        "na": space.na,
        "nb": space.nb,
        "state": state_name,
        "f_plus": list(report.six.f_plus),
        "halfspaces": [
            {"normal": list(h.normal), "offset": h.offset, "id": h.id}
            for h in report.polytope.halfspaces
        ],
        "vertices": [list(v) for v in report.polytope.vertices],
        "state_point": list(report.six.f_minus),
        "saturated": list(report.saturated),
    }


def cmd_polytope(args) -> int:
    space = _space(args)
    payload = _polytope_payload(space, args.state)
    if args.format == "csv":
        text = _csv_text(["x", "y", "z"], payload["vertices"])
    else:
        text = to_json(payload)
    _emit(text, args.out)
    return EXIT_OK


def cmd_optmeas(args) -> int:
    space = _space(args)
    state = flipped_dicke_state(space)
    solution = optimal_precision(state, reduced=args.reduced)
    if solution.block_diagonal:
        payload = solution_figure_data(solution)
    else:
        payload = {
            "na": space.na,
            "nb": space.nb,
            "blocks": [],
            "precision": solution.precision,
            "block_diagonal": False,
        }
    if args.format == "csv":
        rows = [
            [b["m_y"], b["size"], max(abs(x) for row in b["re"] for x in row),
             max(abs(x) for row in b["im"] for x in row)]
            for b in payload["blocks"]
        ]
        text = _csv_text(["m_y", "size", "max_abs_re", "max_abs_im"], rows)
    else:
        text = to_json(payload)
    _emit(text, args.out)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    space = _space(args)
    run = run_estimation(space, b0=args.b0, b1=args.b1, nu=args.nu, seed=args.seed)
    payload = run.to_json_dict()
    if args.format == "csv":
        keys = list(payload)
        text = _csv_text(keys, [[payload[k] for k in keys]])
    else:
        text = to_json(payload)
    _emit(text, args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    rows = moment_sweep(args.max_n)
    table = [
        {
            "na": r["na"],
            "nb": r["nb"],
            "precision": float(r["precision"]),
            "bound": float(r["bound"]),
            "ratio": float(r["ratio"]),
        }
        for r in rows
    ]
    if args.format == "csv":
        header = ["na", "nb", "precision", "bound", "ratio"]
        text = _csv_text(header, [[r[k] for k in header] for r in table])
    else:
        text = to_json({"rows": table})
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    pairs = []
    for na in range(2, args.max_n + 1):
        for nb in range(na, args.max_n + 1):
            if na + nb <= args.max_n and (na + nb) % 2 == 0 and na + nb >= 4:
                pairs.append((na, nb))
    results = []
    worst = 0.0
    for na, nb in pairs:
        checks = brute_qfi_suite(na, nb)
        pair_max = suite_max_discrepancy(checks)
        worst = max(worst, pair_max)
        results.append({"na": na, "nb": nb, "checks": len(checks), "max_discrepancy": pair_max})
        print(f"({na},{nb}): {len(checks)} checks, max discrepancy {pair_max:.3e}", file=sys.stderr)
    payload = {
        "pairs": results,
        "max_discrepancy": worst,
        "tolerance": _ORACLE_TOL,
        "pass": worst <= _ORACLE_TOL,
    }
    text = to_json(payload)
    _emit(text, args.out)
    if worst > _ORACLE_TOL:
        raise ConsistencyError(f"brute-force suite max discrepancy {worst:.3e}")
    return EXIT_OK


_FIGURE_STATES = (("a", "dicke"), ("b", "ghz"), ("c", "flipped-dicke"), ("d", "flipped-ghz"))


def cmd_figures(args) -> int:
    """Emit the plotting payloads: four polytopes and two operator heatmaps."""
    out_dir = _resolve_out(args.out_dir) or args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    space = TwoWellSpace(args.na, args.nb)
    for letter, state_name in _FIGURE_STATES:
        payload = _polytope_payload(space, state_name)
        with open(os.path.join(out_dir, f"fig1{letter}.json"), "w") as handle:
            handle.write(to_json(payload) + "\n")
    for letter, (na, nb) in (("a", (2, 2)), ("b", (args.na, args.nb))):
        solution = optimal_precision(flipped_dicke_state(TwoWellSpace(na, nb)))
        with open(os.path.join(out_dir, f"fig3{letter}.json"), "w") as handle:
            handle.write(to_json(solution_figure_data(solution)) + "\n")
    print(f"wrote fig1a-d.json and fig3a-b.json to {out_dir}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_space_args(p) -> None:
    p.add_argument("--na", type=int, required=True, help="particles in well a")
    p.add_argument("--nb", type=int, required=True, help="particles in well b")


def _add_io_args(p, formats=("json", "csv")) -> None:
    p.add_argument("--format", choices=formats, default="json", help="output format")
    p.add_argument(
        "--out",
        help="output file (relative paths resolve against $DIFFMAG_OUTPUT_DIR; default stdout)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="diffmag", description=__doc__.splitlines()[0] if __doc__ else "")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="QFI matrix and gradient precision bounds for a probe state")
    _add_space_args(p)
    p.add_argument("--state", choices=sorted(NAMED_STATES), required=True)
    p.add_argument("--axis", choices=AXES, default="y", help="field direction")
    _add_io_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table1", help="closed-form vs numeric QFI for the four reference states")
    _add_space_args(p)
    _add_io_args(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("polytope", help="admissible gradient-QFI region and saturation pattern")
    _add_space_args(p)
    p.add_argument("--state", choices=sorted(set(NAMED_STATES) - {"product-dicke"}), required=True)
    _add_io_args(p)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("optmeas", help="optimal offset-immune measurement of the gradient")
    _add_space_args(p)
    p.add_argument("--reduced", action="store_true", help="restrict to the alternating blocks")
    _add_io_args(p)
    p.set_defaults(func=cmd_optmeas)

    p = sub.add_parser("montecarlo", help="simulated estimation runs with the moment observable")
    _add_space_args(p)
    p.add_argument("--b0", type=float, default=0.0, help="homogeneous offset field")
    p.add_argument("--b1", type=float, required=True, help="true gradient value")
    p.add_argument("--nu", type=int, required=True, help="number of measurements")
    p.add_argument("--seed", type=int, required=True, help="RNG seed")
    _add_io_args(p)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("moments", help="moment-scheme precision sweep over even splits")
    p.add_argument("--max-n", type=int, default=20, help="largest total particle number")
    _add_io_args(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", help="brute-force cross-validation of every closed form")
    p.add_argument("--max-n", type=int, default=8, help="largest total particle number (<= 12)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify, format="json")

    p = sub.add_parser("figures", help="emit the JSON payloads consumed by the plotting frontend")
    p.add_argument("--na", type=int, default=4)
    p.add_argument("--nb", type=int, default=4)
    p.add_argument("--out-dir", required=True, help="directory for fig1*.json / fig3*.json")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"diffmag: consistency failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, CliError) as exc:
        print(f"diffmag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
