"""``hermrank`` command line.

Exit codes: 0 success, 2 unsolvable input or violated premise (a report
is still written), 3 input error, 4 verification found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    BackendMismatch,
    DimensionMismatch,
    HermrankError,
    InputError,
    NotHermitian,
    PremiseViolated,
    Unsolvable,
)
from .extremal import PairInstance, analyze, lsq_common_condition, triple_common_solvable
from .io import (
    load_instance,
    matrix_to_json,
    report_from_json,
    report_to_json,
    save_instance,
    instance_to_json,
    summary_text,
)
from .numeric import EXACT, FLOAT, DEFAULT_POLICY, Matrix, TolerancePolicy
from .oracle import KINDS, SearchBudget, gen_instance, sample_solutions, verify_instance
from .oracle import objective_families
from .solvers import (
    HERMITIAN_SANDWICH,
    AffineSolutionSet,
    CorrectionTerm,
    linear_hermitian_solve,
    linear_psd_solve,
    pair_congruence_common,
)

EXIT_OK = 0
EXIT_UNSOLVABLE = 2
EXIT_INPUT = 3
EXIT_VIOLATED = 4

_INPUT_ERRORS = (InputError, DimensionMismatch, NotHermitian, BackendMismatch, OSError)


def _global_flags(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--backend", choices=(EXACT, FLOAT), default=d(None),
                   help="arithmetic backend (default: the file's own)")
    p.add_argument("--tol", type=float, default=d(None),
                   help="zero tolerance for the float backend")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     default=d("text"))
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     default=d("text"))


def build_parser():
    parser = argparse.ArgumentParser(prog="hermrank",
                                     description="Extremal ranks and inertias of "
                                                 "Hermitian matrix expressions.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="summary and decisions")
    p.add_argument("file")
    p = sub.add_parser("solve", parents=[common], help="general solution and one sample")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("check-triple", parents=[common],
                       help="common (least-squares) solution of three equations")
    p.add_argument("file")
    p = sub.add_parser("verify", parents=[common], help="compare formulas with search")
    p.add_argument("file")
    p.add_argument("--report", help="check this report instead of fresh formulas")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--grid", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("gen", parents=[common], help="random consistent instance")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def _policy(args):
    if args.tol is None:
        return DEFAULT_POLICY
    if args.tol < 0:
        raise InputError("--tol must be nonnegative")
    return TolerancePolicy(args.tol, args.tol)


def _emit(out, args, doc, text_lines):
    if args.fmt == "json":
        json.dump(doc, out, indent=1)
        out.write("\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _report_lines(doc):
    lines = [f"kind: {doc['kind']}", f"backend: {doc['backend']}"]
    for p in doc["premises"]:
        lines.append(f"premise: {p['premise']}: {'holds' if p['holds'] else 'fails'}"
                     + (f" ({p['detail']})" if p.get("detail") else ""))
    for o in doc["objectives"]:
        lines.append(f"objective: {o['name']}")
        lines.append("  " + " ".join(f"{k}={v}" for k, v in o["summary"].items()))
        for d in o["decisions"]:
            lines.append(f"  {d['id']}: {str(d['verdict']).lower()} [{d['condition']}]")
    return lines


def _premise_error(kind, exc, backend, pol):
    doc = report_to_json(kind, [], [{"premise": "constraints consistent", "holds": False,
                                     "detail": str(exc)}], backend, pol)
    return doc


def _cmd_analyze(args, out):
    pol = _policy(args)
    inst = load_instance(args.file, args.backend)
    try:
        objectives = analyze(inst, pol)
    except (PremiseViolated, Unsolvable) as exc:
        doc = _premise_error(inst.kind, exc, inst.backend, pol)
        _emit(out, args, doc, _report_lines(doc))
        return EXIT_UNSOLVABLE
    doc = report_to_json(inst.kind, objectives,
                         [{"premise": "constraints consistent", "holds": True}],
                         inst.backend, pol)
    _emit(out, args, doc, _report_lines(doc))
    return EXIT_OK


def _solution_set(inst, pol):
    if inst.kind == "pair":
        return pair_congruence_common(inst.B2, inst.A2, inst.B3, inst.A3, pol)
    if inst.kind == "linear":
        return linear_hermitian_solve(inst.B4, inst.A4, pol)
    if inst.kind == "linear_psd":
        return linear_psd_solve(inst.B4, inst.A4, pol)
    if inst.kind == "partitioned":
        return linear_hermitian_solve(inst.A, inst.B, pol)
    n = inst.B.cols
    return AffineSolutionSet(Matrix.zeros(n, n, inst.backend),
                             (CorrectionTerm(HERMITIAN_SANDWICH,
                                             Matrix.identity(n, inst.backend)),),
                             (), hermitian=True)


def _term_json(t):
    doc = {"kind": t.kind, "sign": t.sign, "left": matrix_to_json(t.left)}
    if t.right is not None:
        doc["right"] = matrix_to_json(t.right)
    if t.proj is not None:
        doc["proj"] = matrix_to_json(t.proj)
    return doc


def _cmd_solve(args, out):
    pol = _policy(args)
    inst = load_instance(args.file, args.backend)
    try:
        S = _solution_set(inst, pol)
    except (PremiseViolated, Unsolvable) as exc:
        doc = {"kind": inst.kind, "solvable": False, "condition": str(exc)}
        _emit(out, args, doc, [f"kind: {inst.kind}", f"unsolvable: {exc}"])
        return EXIT_UNSOLVABLE
    sample = sample_solutions(S, 1, args.seed)[0] if S.backend == EXACT else S.x0
    doc = {"kind": inst.kind, "solvable": True, "x0": matrix_to_json(S.x0),
           "terms": [_term_json(t) for t in S.terms], "sample": matrix_to_json(sample),
           "sample_satisfies": S.satisfies(sample, pol)}
    lines = [f"kind: {inst.kind}", f"x0: {S.x0!r}"]
    lines += [f"term: {t.kind} sign={t.sign} left={t.left!r}" for t in S.terms]
    lines += [f"sample: {sample!r}", f"sample satisfies constraints: {doc['sample_satisfies']}"]
    _emit(out, args, doc, lines)
    return EXIT_OK


def _cmd_check_triple(args, out):
    pol = _policy(args)
    inst = load_instance(args.file, args.backend)
    if not isinstance(inst, PairInstance):
        raise InputError("check-triple needs a file of kind 'pair'")
    doc, lines, code = {"kind": "pair"}, ["kind: pair"], EXIT_OK
    try:
        rep = triple_common_solvable(inst, pol)
        d = rep["triple-common-solution"]
        doc["common_solution"] = {"verdict": d.verdict, "condition": d.condition}
        if rep.witness is not None:
            doc["common_solution"]["witness"] = matrix_to_json(rep.witness)
        lines.append(f"common solution: {str(d.verdict).lower()} [{d.condition}]")
    except (PremiseViolated, Unsolvable) as exc:
        doc["common_solution"] = {"premise": False, "detail": str(exc)}
        lines.append(f"common solution: premise fails ({exc})")
        code = EXIT_UNSOLVABLE
    rep = lsq_common_condition(inst, pol)
    doc["least_squares"] = [{"id": k, "verdict": d.verdict, "condition": d.condition}
                            for k, d in rep.items()]
    lines += [f"least squares {k}: {str(d.verdict).lower()} [{d.condition}]"
              for k, d in rep.items()]
    _emit(out, args, doc, lines)
    return code


def _cmd_verify(args, out):
    pol = _policy(args)
    inst = load_instance(args.file, args.backend)
    if inst.backend != EXACT:
        raise InputError("verify needs the exact backend")
    budget = SearchBudget(random_trials=args.trials, grid_radius=args.grid, seed=args.seed)
    predicted = None
    if args.report:
        with open(args.report, encoding="utf-8") as fh:
            try:
                rdoc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{args.report}: line {exc.lineno}, column {exc.colno}: "
                                 f"{exc.msg}") from exc
        predicted = [s for _, s, _ in report_from_json(rdoc)]
        if len(predicted) != len(objective_families(inst, pol)):
            raise InputError("report has the wrong number of objectives for this instance")
    try:
        outcomes = verify_instance(inst, budget, predicted, pol)
    except (PremiseViolated, Unsolvable) as exc:
        doc = {"kind": inst.kind, "premise": False, "detail": str(exc)}
        _emit(out, args, doc, [f"kind: {inst.kind}", f"premise fails: {exc}"])
        return EXIT_UNSOLVABLE
    doc = {"kind": inst.kind, "outcomes": [
        {"objective": o.objective, "predicted": o.predicted.as_dict(),
         "observed": o.observed.as_dict(), "status": o.status,
         "counterexamples": {f: matrix_to_json(M) for f, M in o.counterexamples.items()},
         "trials": o.trials, "grid_points": o.grid_points} for o in outcomes]}
    doc["violated"] = any(o.violated for o in outcomes)
    lines = [f"kind: {inst.kind}"]
    for o in outcomes:
        lines += [f"objective: {o.objective}", f"  predicted {summary_text(o.predicted)}",
                  f"  observed  {summary_text(o.observed)}"]
        lines += [f"  {f}: {st}" for f, st in o.status.items()]
        lines += [f"  counterexample {f}: {M!r}" for f, M in o.counterexamples.items()]
    lines.append(f"violated: {str(doc['violated']).lower()}")
    _emit(out, args, doc, lines)
    return EXIT_VIOLATED if doc["violated"] else EXIT_OK


def _cmd_gen(args, out):
    if args.n < 1:
        raise InputError("--n must be at least 1")
    inst, X = gen_instance(args.kind, args.n, seed=args.seed)
    if args.backend == FLOAT:
        raise InputError("gen writes exact instances; convert with --backend on load")
    if args.out:
        save_instance(args.out, inst, X)
    else:
        json.dump(instance_to_json(inst, X), out, indent=1)
        out.write("\n")
    return EXIT_OK


_COMMANDS = {"analyze": _cmd_analyze, "solve": _cmd_solve, "check-triple": _cmd_check_triple,
             "verify": _cmd_verify, "gen": _cmd_gen}


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.tol is not None and args.backend != FLOAT:
        err.write("hermrank: --tol applies to the float backend only\n")
        return EXIT_INPUT
    try:
        return _COMMANDS[args.command](args, out)
    except _INPUT_ERRORS as exc:
        err.write(f"hermrank: {exc}\n")
        return EXIT_INPUT
    except HermrankError as exc:
        err.write(f"hermrank: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())
