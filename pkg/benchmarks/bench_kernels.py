"""Compare the compiled and pure-Python term kernels.

Micro benchmarks time the kernel primitives on the same random terms; the
end-to-end benchmark runs the solver in a subprocess per backend, since the
backend is fixed at import time.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import importlib
import os
import random
import subprocess
import sys
import timeit
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"


def random_term(rng, k, depth, vars_):
    if depth == 0 or rng.random() < 0.2:
        return k.Var(rng.choice(vars_)) if rng.random() < 0.5 else k.Fn(rng.choice("abc"))
    f, n = rng.choice([("f", 1), ("g", 2), ("h", 3)])
    return k.Fn(f, tuple(random_term(rng, k, depth - 1, vars_) for _ in range(n)))


def pairs(k, n=300, seed=1):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        a = random_term(rng, k, 5, ["X", "Y", "Z"])
        b = random_term(rng, k, 5, ["U", "V", "W"])
        out.append((a, b))
    return out


def micro(name, repeat):
    try:
        k = importlib.import_module("crprover." + name)
    except ImportError:
        return None
    ps = pairs(k)
    subs = [k.unify(a, b) or {} for a, b in ps]
    ops = {
        "unify": lambda: [k.unify(a, b) for a, b in ps],
        "match": lambda: [k.match(a, b) for a, b in ps],
        "variant": lambda: [k.variant(a, a) for a, _ in ps],
        "apply": lambda: [k.apply(a, s) for (a, _), s in zip(ps, subs)],
        "term_depth": lambda: [k.term_depth(a) for a, _ in ps],
    }
    return {op: min(timeit.repeat(fn, number=20, repeat=repeat)) for op, fn in ops.items()}


SOLVE_SNIPPET = """
import time
from crprover.terms import BACKEND
from crprover.tptp import parse_problem
from crprover.search import SearchConfig, solve
cases = [("challenge1.p", "pd", 30), ("depth6.p", "ep", 30), ("challenge1.p", "ep", 1.0)]
cases += [("epr/" + n, "ep", 30) for n in ("epr05_k4_colouring.p", "epr06_pigeons.p", "epr04_triangle_colouring.p")]
t = time.perf_counter()
props = 0
for name, v, budget in cases:
    res = solve(parse_problem({data!r} + "/" + name), SearchConfig(variant=v, time_budget=budget))
    props += res.stats.propagations
print(BACKEND, time.perf_counter() - t, props)
"""


def end_to_end(pure):
    env = dict(os.environ, CRPROVER_PURE="1" if pure else "0")
    code = SOLVE_SNIPPET.format(data=str(DATA))
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, secs, props = out.stdout.split()
    return backend, float(secs), int(props)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py = micro("_pykernel", args.repeat)
    cy = micro("_ckernel", args.repeat)
    print("%-12s %12s %12s %8s" % ("op (x6000)", "python s", "cython s", "speedup"))
    for op in py:
        c = cy[op] if cy else float("nan")
        print("%-12s %12.4f %12.4f %7.1fx" % (op, py[op], c, py[op] / c if cy else float("nan")))
    if cy is None:
        print("compiled kernel not built; only the pure-Python numbers are meaningful")
    print()
    print("end to end (fixed problem set; the EP run has a 1 s budget, so compare propagations)")
    for pure in (True, False):
        backend, secs, props = end_to_end(pure)
        print("  %-8s %7.2fs  %6d propagations" % (backend, secs, props))


if __name__ == "__main__":
    main()
