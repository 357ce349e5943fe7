"""Command-line entry point: ``arthur-branching <command> ...``.

Exit status reports I/O problems only: 2 for unparseable input or invalid
arguments, 3 for dimension mismatches, 1 for internal failures, 0 otherwise
(whatever the mathematical answer).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

from .branching import (
    candidate_derivative_indices,
    decide_recursive,
    ext_index_formula_check,
    generic_ext_index,
    relevant,
)
from .core_symbols import Multisegment, shift_segment, zelevinsky_dual
from .dsl import parse_multisegment, parse_rep, parse_speh, to_text
from .errors import DimensionError, InconsistentWitness, ModelError, ParseError
from .models import BranchingProblem, ModelSpec, model_answer, reduce_to_basic, validate
from .serialize import multisegment_json, rep_json, speh_json, symbol_json, trace_json, witness_json
from .speh import SpehRep, left_derivative_at_order, right_derivative_at_order, zelevinsky_data
from .verification import ALL_CHECKS, EnumerationConfig, default_jobs, run_equivalence_suite

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DIMENSION = 0, 1, 2, 3
HALF = Fraction(1, 2)


def load_schema() -> dict:
    text = resources.files("arthur_branching").joinpath("schema/cli_output.schema.json").read_text()
    return json.loads(text)


class CommandFailed(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _problem_json(p: BranchingProblem) -> dict:
    return {"model": str(p.model), "big": rep_json(p.big), "small": rep_json(p.small)}


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> dict:
    M, N = parse_rep(args.pm), parse_rep(args.pn)
    model = ModelSpec.parse(args.model) if args.model else None
    witness = relevant(M, N)
    trace = None
    if model is not None:
        problem = BranchingProblem(M, N, model)
        validate(problem)
        answer = model_answer(problem, cross_check=args.method != "matching")
        basic = reduce_to_basic(problem)
    else:
        answer = witness is not None
        basic = BranchingProblem(M, N)
    if args.method in ("recursive", "both"):
        trace = []
        rec = decide_recursive(basic.big, basic.small, trace)
        if args.method == "recursive":
            answer = rec
        elif rec != answer:
            raise CommandFailed("deciders disagree: matching=%s recursive=%s" % (_bool(answer), _bool(rec)),
                                EXIT_INTERNAL)
    lines = ["relevant: %s" % _bool(answer)]
    if args.witness:
        lines.append("witness: %s" % json.dumps(witness_json(witness)))
    payload = {
        "command": "check",
        "relevant": answer,
        "method": args.method,
        "model": str(model or ModelSpec.basic()),
        "M": rep_json(M),
        "N": rep_json(N),
        "witness": witness_json(witness) if args.witness else None,
        "trace": trace_json(trace) if trace is not None else None,
    }
    return payload, lines


def cmd_dual(args):
    m = parse_multisegment(args.ms)
    d = zelevinsky_dual(m)
    payload = {"command": "dual", "input": multisegment_json(m), "dual": multisegment_json(d)}
    return payload, [to_text(d, declare=False)]


def recognize_speh(ms: Multisegment) -> SpehRep | None:
    """The twisted Speh representation whose Zelevinsky data is ``ms``, if any."""
    segs = sorted(ms, key=lambda s: s.a)
    if not segs or len({(s.base, s.length) for s in segs}) != 1:
        return None
    twist = (segs[0].a + segs[-1].b) / 2
    u = SpehRep(segs[0].base, len(segs), segs[0].length, 0, twist)
    return u if zelevinsky_data(u) == ms else None


def cmd_derive(args):
    u = parse_speh(args.rep)
    if args.order < 0:
        raise CommandFailed("order must be non-negative", EXIT_INPUT)
    if args.side == "right":
        ms, shift = right_derivative_at_order(u, args.order), HALF
    else:
        ms, shift = left_derivative_at_order(u, args.order), -HALF
    shifted = Multisegment(shift_segment(s, shift) for s in ms) if ms is not None else None
    recognized = recognize_speh(ms) if ms else None
    if ms is None:
        lines = ["derivative: 0"]
    else:
        lines = ["derivative: %s" % to_text(ms, declare=False),
                 "shifted (nu^%s): %s" % (shift, to_text(shifted, declare=False))]
        if recognized is not None:
            lines.append("speh: %s" % to_text(recognized, declare=False))
    payload = {
        "command": "derive",
        "rep": speh_json(u),
        "side": args.side,
        "order": args.order,
        "vanishes": ms is None,
        "multisegment": multisegment_json(ms) if ms is not None else None,
        "shifted": multisegment_json(shifted) if shifted is not None else None,
        "shift": str(shift),
        "speh": speh_json(recognized) if recognized is not None else None,
    }
    return payload, lines


def cmd_ext_indices(args):
    M, N = parse_rep(args.pm), parse_rep(args.pn)
    cands = candidate_derivative_indices(M, N)
    applicable = M.is_generic or N.is_generic
    j = generic_ext_index(M, N) if applicable else None
    witness = relevant(M, N)
    formula = ext_index_formula_check(witness) + 1 if witness is not None else None
    lines = ["candidates: %s" % (" ".join(str(k) for k in sorted(cands)) or "none")]
    if applicable:
        lines.append("generic j*: %s" % (j if j is not None else "none"))
    if formula is not None:
        lines.append("hom index: %d" % formula)
    payload = {
        "command": "ext-indices",
        "candidates": sorted(cands),
        "generic_applicable": applicable,
        "generic_ext_index": j,
        "formula_index": formula,
    }
    return payload, lines


def cmd_generic_ext_index(args):
    M, N = parse_rep(args.pm), parse_rep(args.pn)
    try:
        j = generic_ext_index(M, N)
    except DimensionError:
        raise
    except ValueError as exc:
        raise CommandFailed(str(exc), EXIT_INPUT) from None
    payload = {"command": "generic-ext-index", "j_star": j, "M_generic": M.is_generic, "N_generic": N.is_generic}
    return payload, ["j*: %s" % (j if j is not None else "none")]


def cmd_reduce(args):
    M, N = parse_rep(args.pm), parse_rep(args.pn)
    problem = BranchingProblem(M, N, ModelSpec.parse(args.model))
    trace = []
    basic = reduce_to_basic(problem, trace)
    answer = decide_recursive(basic.big, basic.small)
    lines = ["model: %s" % problem.model]
    for i, step in enumerate(trace, 1):
        lines.append("step %d: %s" % (i, step.name))
        lines.append("  -> %s: big %s | small %s" % (step.after.model, to_text(step.after.big) or "1",
                                                    to_text(step.after.small) or "1"))
    lines.append("basic: big %s | small %s" % (to_text(basic.big) or "1", to_text(basic.small) or "1"))
    lines.append("relevant: %s" % _bool(answer))
    payload = {
        "command": "reduce",
        "input": _problem_json(problem),
        "basic": _problem_json(basic),
        "answer": answer,
        "trace": [{"step": st.name, "result": _problem_json(st.after), "minted": [symbol_json(s) for s in st.minted]}
                  for st in trace],
    }
    return payload, lines


def cmd_enumerate(args):
    window = None if args.no_window else (args.window[0], args.window[1])
    checks = frozenset(args.checks.split(",")) if args.checks else ALL_CHECKS
    try:
        cfg = EnumerationConfig(max_big_dim=args.max_dim, num_lines=len(args.ranks), line_ranks=tuple(args.ranks),
                                exponent_window=window, checks=checks, jobs=args.jobs)
    except ValueError as exc:
        raise CommandFailed(str(exc), EXIT_INPUT) from None
    report = run_equivalence_suite(cfg, report_path=args.out)
    s = report.summary
    lines = ["instances: %d" % s["instances"], "relevant: %d" % s["relevant"], "agree: %d" % s["agree"],
             "failures: %d" % s["failures"], "errors: %d" % s["errors"]]
    for name, n in sorted(s["violations"].items()):
        lines.append("violations[%s]: %d" % (name, n))
    lines.append("elapsed: %.1fs" % s["elapsed_seconds"])
    payload = {"command": "enumerate", "out": args.out}
    payload.update({k: s[k] for k in ("instances", "relevant", "agree", "failures", "errors", "violations",
                                      "elapsed_seconds", "counterexamples", "checks", "config")})
    return payload, lines


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arthur-branching",
                                     description="Branching laws for Arthur-type representations of GL_n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "decide whether a pair is relevant")
    p.add_argument("--pm", required=True, help="representation of the bigger group")
    p.add_argument("--pn", required=True, help="representation of the smaller group")
    p.add_argument("--model", help="basic, bessel:m1,m2,r, fj:m1,m2,r, rs:m,r or eqfj")
    p.add_argument("--method", choices=["matching", "recursive", "both"], default="matching")
    p.add_argument("--witness", action="store_true")

    p = add("dual", cmd_dual, "Zelevinsky involution of a multisegment")
    p.add_argument("--ms", required=True)

    p = add("derive", cmd_derive, "derivative of a Speh representation")
    p.add_argument("--rep", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--side", choices=["left", "right"], default="right")

    for name, func, text in (("ext-indices", cmd_ext_indices, "candidate derivative indices"),
                             ("generic-ext-index", cmd_generic_ext_index, "the unique index when one side is generic")):
        p = add(name, func, text)
        p.add_argument("--pm", required=True)
        p.add_argument("--pn", required=True)

    p = add("reduce", cmd_reduce, "reduce a model problem to the basic case")
    p.add_argument("--model", required=True)
    p.add_argument("--pm", required=True)
    p.add_argument("--pn", required=True)

    p = add("enumerate", cmd_enumerate, "run the exhaustive cross-validation suite")
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--out", help="JSONL report path")
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--ranks", type=int, nargs="+", default=[1, 1], help="rank of each cuspidal line")
    p.add_argument("--window", type=int, nargs=2, default=[-1, 1], metavar=("LO", "HI"))
    p.add_argument("--no-window", action="store_true")
    p.add_argument("--checks", help="comma-separated subset of: %s" % ",".join(sorted(ALL_CHECKS)))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, lines = args.func(args)
    except (ParseError, ModelError) as exc:
        return _fail(args, str(exc), EXIT_INPUT)
    except DimensionError as exc:
        return _fail(args, str(exc), EXIT_DIMENSION)
    except CommandFailed as exc:
        return _fail(args, str(exc), exc.code)
    except (InconsistentWitness, AssertionError) as exc:
        return _fail(args, str(exc), EXIT_INTERNAL)
    _emit(args, payload, lines)
    return EXIT_OK


def _fail(args, message: str, code: int) -> int:
    print("error: %s" % message, file=sys.stderr)
    if args.json:
        print(json.dumps({"command": args.command, "error": message, "exit_code": code}))
    return code


if __name__ == "__main__":
    sys.exit(main())
