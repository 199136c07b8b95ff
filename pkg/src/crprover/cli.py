"""``prove``: run the CR prover on a TPTP CNF file and report an SZS status."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .proof import ProofError, check_refutation, export_proof
from .search import SearchConfig, Unsatisfiable, Variant, solve
from .tptp import TPTPParseError, parse_problem

EXIT_DEFINITE, EXIT_UNKNOWN, EXIT_INPUT, EXIT_CHECK = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prove", description=__doc__)
    ap.add_argument("problem", help="TPTP CNF problem file")
    ap.add_argument("--variant", default="ep", type=str.lower, choices=["ep", "pd", "td"])
    ap.add_argument("--include", "-I", action="append", default=[], metavar="DIR",
                    help="directory searched for include() targets (repeatable)")
    ap.add_argument("--proof", metavar="PATH", help="write the refutation to PATH ('-' for stdout)")
    ap.add_argument("--seed", type=int, default=0, help="seed for the TD coin")
    ap.add_argument("--timeout", type=float, default=60.0, metavar="SECONDS")
    ap.add_argument("--max-conflicts", type=int, default=None)
    ap.add_argument("--threshold", type=int, default=0, help="initial PD/TD threshold")
    ap.add_argument("--stats", action="store_true", help="print search statistics")
    ap.add_argument("--check", action="store_true", help="check the refutation before reporting")
    ap.add_argument("--debug", action="store_true", help="dump the trail to stderr after each step")
    return ap


def _status(status: str, name: str) -> None:
    print("%% SZS status %s for %s" % (status, name))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    path = Path(args.problem)
    name = path.stem
    try:
        problem = parse_problem(path, args.include)
    except TPTPParseError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        _status("InputError", name)
        return EXIT_INPUT
    except OSError as exc:
        print("%s: %s" % (path, exc.strerror or exc), file=sys.stderr)
        _status("InputError", name)
        return EXIT_INPUT
    for d in problem.warnings:
        print(d, file=sys.stderr)

    config = SearchConfig(
        variant=Variant.parse(args.variant),
        initial_threshold=args.threshold,
        rng_seed=args.seed,
        max_conflicts=args.max_conflicts,
        time_budget=args.timeout,
        debug=args.debug,
    )
    result = solve(problem, config)

    if isinstance(result, Unsatisfiable) and args.check:
        try:
            check_refutation(result.refutation, problem)
        except ProofError as exc:
            print("proof check failed: %s" % exc, file=sys.stderr)
            _status("Error", name)
            return EXIT_CHECK

    _status(result.status, name)
    if isinstance(result, Unsatisfiable) and args.proof:
        text = export_proof(result.refutation)
        if args.proof == "-":
            print("%% SZS output start CRefutation for %s" % name)
            sys.stdout.write(text)
            print("%% SZS output end CRefutation for %s" % name)
        else:
            Path(args.proof).write_text(text)
    if args.stats:
        for line in result.stats.lines():
            print("%% %s" % line)
        # timing varies run to run; keep it off stdout so output stays reproducible
        print("%% elapsed: %.3fs" % result.stats.elapsed, file=sys.stderr)
    return EXIT_UNKNOWN if result.status in ("Timeout", "GaveUp") else EXIT_DEFINITE


if __name__ == "__main__":
    sys.exit(main())
