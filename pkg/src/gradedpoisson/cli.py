"""Command line front end.

Exit status: 0 all hypotheses hold (routes agree), 1 some check fails,
2 some check is undecided at the degree bound, 3 input error,
4 internal inconsistency between two independent computations.
"""
from __future__ import annotations

import argparse
import json
import sys

from .brackets import DERIVED_SIGN, fn_bracket, jacobi_witness, poisson_bracket
from .dsl import InputError, parse, parse_expr
from .geometry import is_presymplectic
from .reduction import check_coisotropic_reduction, check_halfcond, check_stages, check_thm_a2, reduce
from .report import Check, HypothesisReport, InternalInconsistency, Verdict
from .schouten import schouten_direct

SCHEMA = "v1"
EXIT = {Verdict.HOLDS: 0, Verdict.FAILS: 1, Verdict.UNDECIDED: 2}
INPUT_ERROR = 3
INTERNAL_ERROR = 4


def _check_poisson(pf, args):
    pi = pf.require_pi()
    ss = poisson_bracket(pi, pi)
    oracle = schouten_direct(pi, pi)
    if ss != oracle:
        raise InternalInconsistency(f"[pi, pi] = {ss} but the recursive Schouten bracket gives {oracle}")
    report = HypothesisReport("Poisson condition")
    witness = jacobi_witness(pi)
    if ss.is_zero() != (witness is None):
        raise InternalInconsistency("[pi, pi] and the coordinate Jacobi sums disagree")
    evidence = {"[pi, pi]": str(ss)}
    if witness is not None:
        (i, j, k), total = witness
        evidence["witness"] = [f"{{{{x{i}, x{j}}}, x{k}}} + cyclic = {total}"]
    report.add(Check("[pi, pi] = 0", Verdict.HOLDS if ss.is_zero() else Verdict.FAILS, evidence))
    return report


def _bracket(pf, args):
    f = parse_expr(args.f, pf.chart, pf.aliases)
    g = parse_expr(args.g, pf.chart, pf.aliases)
    report = HypothesisReport("bracket")
    evidence = {"f": str(f), "g": str(g), "{f, g}": str(poisson_bracket(f, g))}
    if pf.pi is not None and f.is_homogeneous(0) and g.is_homogeneous(0):
        evidence["pi(df, dg)"] = str(fn_bracket(pf.pi, f, g))
        evidence["sigma {{S, f}, g}"] = str(poisson_bracket(poisson_bracket(pf.pi, f), g).scale(DERIVED_SIGN))
    report.add(Check("bracket computed", Verdict.HOLDS, evidence))
    return report


def _check_coisotropic(pf, args):
    problem = pf.to_problem(args.bound)
    return check_coisotropic_reduction(problem.pi, problem.C, problem.E)


def _check_presymplectic(pf, args):
    problem = pf.to_problem(args.bound)
    result = is_presymplectic(problem.ideal_C, problem.bound)
    report = HypothesisReport(f"presymplectic test for {problem.ideal_C.describe()}")
    report.extend(result.checks())
    report.add(check_halfcond(problem.pi, problem.ideal_C))
    return report


def _check_stages(pf, args):
    problem = pf.to_problem(args.bound)
    return check_stages(problem.pi, problem.ideal_C, problem.ideal_A, problem.bound)


def _check_thm_a2(pf, args):
    return check_thm_a2(pf.to_problem(args.bound))


def _reduce(pf, args):
    seed = args.seed if args.seed is not None else pf.options.get("seed", 0)
    trials = pf.options.get("trials", 10)
    return reduce(pf.to_problem(args.bound), seed=seed, trials=trials)


COMMANDS = {
    "check-poisson": _check_poisson,
    "bracket": _bracket,
    "check-coisotropic": _check_coisotropic,
    "check-presymplectic": _check_presymplectic,
    "check-stages": _check_stages,
    "check-thm-a2": _check_thm_a2,
    "reduce": _reduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedpoisson", description="Graded Poisson reduction checker.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file")
        if name == "bracket":
            p.add_argument("f")
            p.add_argument("g")
        p.add_argument("--bound", type=int, default=None, help="degree bound for bounded searches")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized lift perturbations")
    return parser


def run(argv, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        pf = parse(text)
        result = COMMANDS[args.command](pf, args)
    except InputError as exc:
        print(f"{args.file}:{exc}", file=stderr)
        return INPUT_ERROR
    except (OSError, ValueError) as exc:
        print(f"{args.file}: {exc}", file=stderr)
        return INPUT_ERROR
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=stderr)
        return INTERNAL_ERROR
    status = EXIT[result.verdict]
    if args.format == "structured":
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "problem": pf.echo(),
            "report": result.to_dict(),
            "verdict": result.verdict.value,
            "exit status": status,
        }
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False), file=stdout)
    else:
        print("== input ==", file=stdout)
        for line in pf.echo():
            print(line, file=stdout)
        print(result.render(), file=stdout)
        print(f"exit status: {status}", file=stdout)
    return status


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
