"""Command-line front end: bound tables, verification runs, extremal data, q -> 1 limits.

Exit codes: 0 success, 2 usage error, 3 bound violated, 4 no known witness.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import CLASSICAL_LIMITS, TheoremId, bound, proof_bound_t23
from .caratheodory import mix_coefficients
from .errors import InvalidArgument, NoKnownWitness
from .qcore import QParam
from .rqclass import from_p_coefficients
from .search import VIOLATED, SearchConfig, maximize, sharpness_witness

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATED = 3
EXIT_NO_WITNESS = 4

BOUND_COLUMNS = ["q", "T22", "T23_stated", "T23_proof", "T32", "T31", "AuxA", "AuxB"]
THEOREM_CHOICES = ["t22", "t23", "t32", "t31", "auxa", "auxb"]


class UsageError(Exception):
    pass


def bounds_row(q: float) -> dict:
    qp = QParam(q)
    return {
        "q": q,
        "T22": bound(TheoremId.T22, qp),
        "T23_stated": bound(TheoremId.T23, qp),
        "T23_proof": proof_bound_t23(qp),
        "T32": bound(TheoremId.T32, qp),
        "T31": bound(TheoremId.T31, qp),
        "AuxA": bound(TheoremId.AuxA, qp),
        "AuxB": bound(TheoremId.AuxB, qp),
    }


def render_bounds_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BOUND_COLUMNS)
    for row in rows:
        writer.writerow([f"{row[c]:.7f}" for c in BOUND_COLUMNS])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_bounds(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if not 0.0 < args.q_min <= args.q_max < 1.0:
        raise UsageError("need 0 < q-min <= q-max < 1")
    qs = np.linspace(args.q_min, args.q_max, args.steps)
    rows = [bounds_row(float(q)) for q in qs]
    if args.format == "csv":
        _emit(render_bounds_csv(rows), args.out)
    else:
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    return EXIT_OK


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        mode=args.mode,
        grid=args.grid,
        refine_iters=args.refine,
        seed=args.seed,
        restrict_p_real=args.restrict_p_real,
        workers=args.workers,
    )


def cmd_verify(args) -> int:
    try:
        cfg = _search_config(args)
        qp = QParam(args.q)
    except InvalidArgument as exc:
        raise UsageError(str(exc)) from None
    report = maximize(args.theorem, qp, cfg)
    _emit(report.to_json() + "\n", args.out)
    return EXIT_VIOLATED if report.verdict == VIOLATED else EXIT_OK


def cmd_extremal(args) -> int:
    try:
        qp = QParam(args.q)
    except InvalidArgument as exc:
        raise UsageError(str(exc)) from None
    try:
        mix, value = sharpness_witness(args.theorem, qp)
    except NoKnownWitness as exc:
        print(f"no-known-witness: {exc}", file=sys.stderr)
        return EXIT_NO_WITNESS
    f = from_p_coefficients(mix_coefficients(mix, 7), qp, order=8)
    payload = {
        "theorem": TheoremId.parse(args.theorem).value,
        "q": qp.q,
        "mix": mix.to_dict(),
        "a": [[f.a(n).real, f.a(n).imag] for n in (2, 3, 4)],
        "value": value,
        "bound": bound(args.theorem, qp),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def qlimit_rows(theorem: str, eps: float) -> list[dict]:
    tid = TheoremId.parse(theorem)
    limit = CLASSICAL_LIMITS[tid]
    rows = []
    for k in range(5):
        q = 1.0 - eps * 10.0**-k
        row = {"k": k, "q": q, "bound": bound(tid, q), "limit": limit}
        row["deviation"] = abs(row["bound"] - limit)
        if tid is TheoremId.T23:
            row["proof_bound"] = proof_bound_t23(q)
            row["proof_deviation"] = abs(row["proof_bound"] - limit)
        rows.append(row)
    return rows


def cmd_qlimit(args) -> int:
    if not 0.0 < args.eps < 0.1:
        raise UsageError("--eps must lie in (0, 0.1)")
    rows = qlimit_rows(args.theorem, args.eps)
    cols = list(rows[0])
    lines = ["\t".join(cols)]
    for row in rows:
        lines.append("\t".join(str(row[c]) if c == "k" else f"{row[c]:.10g}" for c in cols))
    print("\n".join(lines))
    return EXIT_OK


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtoeplitz",
        description="Toeplitz-determinant bounds for the q-derivative class R(q).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="tabulate closed-form bounds over a q grid")
    b.add_argument("--q-min", type=float, required=True)
    b.add_argument("--q-max", type=float, required=True)
    b.add_argument("--steps", type=int, default=1)
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="maximize a functional and compare with its bound")
    v.add_argument("--theorem", choices=THEOREM_CHOICES, type=str.lower, required=True)
    v.add_argument("--q", type=float, required=True)
    v.add_argument("--grid", type=int, default=48)
    v.add_argument("--refine", type=int, default=400)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=["lemma2", "mix"], default="lemma2")
    v.add_argument("--restrict-p-real", type=_bool, default=True, metavar="{true|false}")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extremal", help="write the closed-form extremal candidate")
    e.add_argument("--theorem", choices=THEOREM_CHOICES, type=str.lower, required=True)
    e.add_argument("--q", type=float, required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_extremal)

    lim = sub.add_parser("qlimit", help="print bounds as q -> 1")
    lim.add_argument("--theorem", choices=THEOREM_CHOICES, type=str.lower, required=True)
    lim.add_argument("--eps", type=float, default=1e-2)
    lim.set_defaults(func=cmd_qlimit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
