"""Command-line entry point: ``kmlab <subcommand> [flags]``.

Exit codes: 0 success, 1 precondition error, 2 a mathematical self-check
failed, 64 malformed command line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import MODULE_VERSIONS, __version__
from .dynamics import (
    DEFAULT_HEIGHT,
    DEFAULT_LMAX,
    check_monotone,
    contraction_schedule,
    detect_period,
    height_schedule,
    partition_psi,
    sign_orbit,
)
from .errors import InvariantViolation, KmlabError, PreconditionError
from .gcm import parse_gcm, report as gcm_report
from .weyl import WeylElement, coxeter_element, coxeter_report, parse_word

EXIT_OK, EXIT_PRECONDITION, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer vector: {text!r}")


def _vectors(text: str) -> list[tuple[int, ...]]:
    return [_vector(t) for t in text.split(";") if t.strip()]


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("-A", "--gcm", help='matrix such as "2,-3;-3,2"')
    common.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    common.add_argument("--lmax", type=int, default=DEFAULT_LMAX)
    common.add_argument("--q", type=int, default=3)
    common.add_argument("--word", default=None, help="comma-separated reflection indices")
    common.add_argument("--alpha", default=None, help="root vector, or several separated by ';'")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = _Parser(prog="kmlab", description="Exact Kac-Moody root, Weyl and group computations.")
    p.add_argument("--version", action="version", version=f"kmlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("classify", parents=[common], help="validate and classify a GCM")
    sub.add_parser("roots", parents=[common], help="positive roots up to --height")
    sub.add_parser("coxeter", parents=[common], help="closed-form and composed Coxeter matrices")
    sub.add_parser("dynamics", parents=[common], help="sign trace, period and heights of --alpha")
    sub.add_parser("partition", parents=[common], help="split the positive roots into psi and complement")
    s = sub.add_parser("schedule", parents=[common], help="contraction schedule n_l of a root set")
    s.add_argument("--direction", type=int, choices=(1, -1), default=1)
    s = sub.add_parser("algebra", parents=[common], help="dump root-space dimensions and brackets")
    s.add_argument("--coeff", default="QQ", help="ZZ, QQ or a prime p")
    s = sub.add_parser("lemma54", parents=[common], help="non-normality witness for [[2,-m],[-n,2]]")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-p", type=int, required=True)
    s = sub.add_parser("group", parents=[common], help="truncated group: basis, order, normal forms")
    s.add_argument("--exp", action="append", default=[], metavar="ROOT:LAMBDA",
                   help="factor [exp] lambda x_root (basis index 0); repeat to multiply in order")
    s = sub.add_parser("contract", parents=[common], help="filtration levels of a^l g a^-l")
    s.add_argument("--inverse", action="store_true", help="conjugate by a^-1 instead")
    s.add_argument("--lambda", dest="lam", default="1")
    s = sub.add_parser("torus-check", parents=[common], help="compare torus actions of two rank-2 GCMs")
    s.add_argument("-B", "--gcm2", required=True)
    sub.add_parser("verify-all", parents=[common], help="run the full acceptance suite")
    return p


def _header(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    return {"command": args.command, "config": cfg, "versions": dict(MODULE_VERSIONS)}


def _need_gcm(args):
    if not args.gcm:
        raise UsageError(f"{args.command}: -A/--gcm is required")
    return parse_gcm(args.gcm)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(header: dict, body) -> str:
    return json.dumps({"header": header, "result": body}, sort_keys=True, indent=2, default=str, ensure_ascii=False) + "\n"


# --- subcommands --------------------------------------------------------------


def cmd_classify(args):
    a = _need_gcm(args)
    return gcm_report(a), None


def cmd_roots(args):
    from .rootsys import positive_roots_up_to_height, roots_to_records

    a = _need_gcm(args)
    recs = roots_to_records(a, positive_roots_up_to_height(a, args.height))
    rows = [[" ".join(map(str, r["coords"])), r["height"], r["class"], r["mult"]] for r in recs]
    return recs, (rows, ["coords", "height", "class", "mult"])


def cmd_coxeter(args):
    a = _need_gcm(args)
    return coxeter_report(a), None


def _omega(args, a) -> WeylElement:
    return WeylElement.from_word(a, parse_word(args.word)) if args.word else coxeter_element(a)


def cmd_dynamics(args):
    a = _need_gcm(args)
    if not args.alpha:
        raise UsageError("dynamics: --alpha is required")
    alpha = _vector(args.alpha)
    w = _omega(args, a)
    L = min(args.lmax, 20)
    trace = sign_orbit(a, w, alpha, L)
    mono = check_monotone(trace)
    fwd = height_schedule(a, w, alpha, args.lmax, 1)
    bwd = height_schedule(a, w, alpha, args.lmax, -1)
    body = {
        "alpha": list(alpha),
        "word": list(w.word),
        "signs": {str(l): s for l, s in sorted(trace.values.items())},
        "monotone": mono.monotone,
        "witness": mono.witness,
        "period": detect_period(a, w, alpha, args.lmax),
        "heights_forward": list(fwd.heights),
        "heights_backward": list(bwd.heights),
    }
    rows = [[l, fwd.heights[l], bwd.heights[l]] for l in range(len(fwd))]
    return body, (rows, ["l", "height_forward", "height_backward"])


def cmd_partition(args):
    a = _need_gcm(args)
    part = partition_psi(a, args.height, args.lmax, chains=False)
    body = part.to_json()
    rows = [[" ".join(map(str, r)), "psi"] for r in part.psi]
    rows += [[" ".join(map(str, r)), "complement"] for r in part.complement]
    rows += [[" ".join(map(str, r)), "undecided"] for r in part.undecided]
    return body, (rows, ["coords", "part"])


def cmd_schedule(args):
    a = _need_gcm(args)
    gens = _vectors(args.alpha) if args.alpha else [tuple(int(i == 0) for i in range(a.rank))]
    sched = contraction_schedule(a, gens, args.direction, args.lmax, _omega(args, a))
    rows = [[l, n, " ".join(map(str, r))] for l, n, r in sched.rows()]
    body = {
        "generators": [list(g) for g in sched.generator_set],
        "direction": args.direction,
        "n": list(sched.n),
        "argmin": [list(r) for r in sched.argmin],
        "first_exceeding_height": sched.first_exceeding(args.height),
    }
    return body, (rows, ["l", "n_l", "argmin"])


def cmd_algebra(args):
    from .liealg import build_positive_algebra

    a = _need_gcm(args)
    coeff = args.coeff if not args.coeff.isdigit() else int(args.coeff)
    L = build_positive_algebra(a, args.height, coeff)
    body = L.to_json()
    rows = [[" ".join(map(str, d["weight"])), d["dim"]] for d in body["dimensions"]]
    return body, (rows, ["weight", "dim"])


def cmd_lemma54(args):
    from .liealg import lemma54_witness

    rep = lemma54_witness(args.m, args.n, args.p)
    if not rep["ok"]:
        raise InvariantViolation(f"witness checks failed: {rep['checks']}")
    return rep, None


def _parse_factor(E, text: str):
    root, _, lam = text.partition(":")
    w = _vector(root)
    if (w, 0) not in E.id_of:
        raise PreconditionError(f"{w} is not a positive root of height <= {E.h}")
    return E.id_of[(w, 0)], E.field.parse(lam or "1")


def cmd_group(args):
    from .prounip import build_truncated_envelope, product, single_factor

    a = _need_gcm(args)
    E = build_truncated_envelope(a, args.height, args.q)
    basis = [{"id": b.id, "root": list(b.weight), "basisIndex": b.index} for b in E.basis]
    body = {
        "envelope": E.describe(),
        "basis": basis,
        "group_order": f"{args.q}^{len(E.basis)}",
    }
    if args.exp:
        factors = [single_factor(E, *_parse_factor(E, t)) for t in args.exp]
        body["product"] = product(E, factors).to_json()
    rows = [[b["id"], " ".join(map(str, b["root"])), b["basisIndex"]] for b in basis]
    return body, (rows, ["id", "root", "basisIndex"])


def cmd_contract(args):
    from .prounip import build_truncated_envelope, contract_experiment, single_factor

    a = _need_gcm(args)
    E = build_truncated_envelope(a, args.height, args.q)
    alpha = _vector(args.alpha) if args.alpha else tuple(int(i == 0) for i in range(a.rank))
    word = parse_word(args.word) if args.word else tuple(range(1, a.rank + 1))
    if (alpha, 0) not in E.id_of:
        raise PreconditionError(f"{alpha} is not a positive root of height <= {E.h}")
    g = single_factor(E, E.id_of[(alpha, 0)], E.field.parse(args.lam))
    rec = contract_experiment(E, word, g, args.lmax, inverse=args.inverse)
    body = {
        "alpha": list(alpha),
        "word": list(word),
        "inverse": args.inverse,
        "levels": list(rec.levels),
        "escaped": list(rec.escaped),
        "first_flag": rec.first_flag,
        "predicted_heights": [str(n) for n in rec.predicted],
        "predicted_first": rec.predicted_first,
        "consistent": rec.consistent(),
    }
    if not rec.consistent():
        raise InvariantViolation(f"levels {rec.levels} do not dominate the height schedule")
    rows = [[l, lv, str(e).lower()] for l, lv, e in rec.rows()]
    return body, (rows, ["l", "level", "escaped"])


def cmd_torus_check(args):
    from .prounip import torus_relation_check

    a = _need_gcm(args)
    b = parse_gcm(args.gcm2)
    return torus_relation_check(a, b, args.q), None


def cmd_verify_all(args):
    from .verify import run_all

    results = run_all(args.seed, lambda r: print(r.line(), file=sys.stderr, flush=True))
    body = [
        {"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
        for r in results
    ]
    rows = [[r.number, r.name, r.passed, r.detail] for r in results]
    failed = [r.number for r in results if not r.passed]
    return body, (rows, ["criterion", "name", "passed", "detail"]), failed


COMMANDS = {
    "classify": cmd_classify,
    "roots": cmd_roots,
    "coxeter": cmd_coxeter,
    "dynamics": cmd_dynamics,
    "partition": cmd_partition,
    "schedule": cmd_schedule,
    "algebra": cmd_algebra,
    "lemma54": cmd_lemma54,
    "group": cmd_group,
    "contract": cmd_contract,
    "torus-check": cmd_torus_check,
    "verify-all": cmd_verify_all,
}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except KmlabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    failed = out[2] if len(out) == 3 else []
    body, table = out[0], out[1]
    if args.format == "csv" and table is not None:
        text = _csv(table[0], table[1])
    else:
        text = _json(_header(args), body)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_INVARIANT if failed else EXIT_OK


def main() -> int:
    return run(sys.argv[1:])
