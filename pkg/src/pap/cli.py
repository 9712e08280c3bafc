"""Command-line front end.

    pap solve [--trace] [--all] [--limit N] FILES...
    pap consistency FILES...
    pap admissible --set CANDIDATE FILES...
    pap optimal --set CANDIDATE FILES...
    pap relevant --atom ATOM FILES...
    pap necessary --atom ATOM FILES...
    pap translate FILES...

FILES are classified by extension: ``.hyp`` hypotheses, ``.obs``
observations, anything else is program text (several program files are
concatenated).  Exit status: 0 answered, 10 no admissible solution exists
(solve and the optimality-based queries), 2 invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import TextIO

from .abduction import Abducer, PAP, Solution, translate_pap, validate_pap
from .errors import InconsistentError, PapError
from .parser import parse_atom, parse_atom_set, parse_hypotheses, parse_observations, parse_program

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 10

_HELP = """\
solve        minimum-penalty explanations (like -FDmincost; --trace is like -wctrace)
consistency  does any admissible solution exist?
admissible   is the hypothesis set in --set admissible?
optimal      is the hypothesis set in --set optimal?
relevant     is --atom in some optimal solution?
necessary    is --atom in every optimal solution?
translate    print the weak-constraint program the solver runs on
"""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pap",
        description="Abduction with penalization over normal logic programs.",
        epilog=_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument(
        "task",
        choices=["solve", "consistency", "admissible", "optimal", "relevant", "necessary", "translate"],
    )
    p.add_argument("files", nargs="+", help=".dl program files, one .hyp and one .obs file")
    p.add_argument("--trace", action="store_true", help="report each improved solution")
    p.add_argument("--all", action="store_true", help="report every optimal solution")
    p.add_argument("--limit", type=int, help="at most this many solutions with --all")
    p.add_argument("--int-bound", type=int, help="largest integer produced by arithmetic")
    p.add_argument("--set", dest="candidate", help="file listing a candidate hypothesis set")
    p.add_argument("--atom", help="hypothesis queried by relevant/necessary")
    return p


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_pap(files: list[str], int_bound: int | None = None) -> PAP:
    programs, hyps, obs = [], [], []
    for f in files:
        ext = Path(f).suffix
        (hyps if ext == ".hyp" else obs if ext == ".obs" else programs).append(f)
    if len(hyps) > 1 or len(obs) > 1:
        raise PapError("USAGE", "at most one .hyp and one .obs file")
    program = parse_program("\n".join(_read(f) for f in programs))
    h = parse_hypotheses(_read(hyps[0])) if hyps else []
    o = parse_observations(_read(obs[0])) if obs else []
    return validate_pap(h, program, o, integer_bound=int_bound)


def _solution_line(prefix: str, s: Solution) -> str:
    return " ".join([prefix] + s.sorted_atoms())


def _answer(out: TextIO, yes: bool) -> int:
    print(f"ANSWER {'yes' if yes else 'no'}", file=out)
    return EXIT_OK


def run(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    int_bound = args.int_bound
    if int_bound is None and os.environ.get("PAP_INT_BOUND"):
        int_bound = int(os.environ["PAP_INT_BOUND"])
    pap = load_pap(args.files, int_bound)

    if args.task == "translate":
        out.write(str(translate_pap(pap).program))
        return EXIT_OK

    ab = Abducer(pap)
    try:
        if args.task == "solve":

            def trace(s: Solution) -> None:
                print(_solution_line(f"IMPROVED {s.cost}", s), file=out)

            sols = ab.solve_optimal(all=args.all, trace=trace if args.trace else None)
            if args.limit is not None:
                sols = sols[: args.limit]
            print(f"COST {sols[0].cost}", file=out)
            for s in sols:
                print(_solution_line("SOLUTION", s), file=out)
            return EXIT_OK
        if args.task == "consistency":
            return _answer(out, ab.is_consistent())
        if args.task in ("admissible", "optimal"):
            if not args.candidate:
                raise PapError("USAGE", f"{args.task} needs --set FILE")
            s = parse_atom_set(_read(args.candidate))
            if args.task == "admissible":
                return _answer(out, ab.is_admissible(s) is not None)
            return _answer(out, ab.is_optimal(s))
        if not args.atom:
            raise PapError("USAGE", f"{args.task} needs --atom ATOM")
        h = parse_atom(args.atom)
        if args.task == "relevant":
            return _answer(out, ab.is_relevant(h))
        return _answer(out, ab.is_necessary(h))
    except InconsistentError:
        print("INCONSISTENT", file=out)
        return EXIT_INCONSISTENT


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return run(args, out, err)
    except PapError as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    except (OSError, UnicodeDecodeError, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    except RecursionError:
        print("error: input nested too deeply", file=err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
