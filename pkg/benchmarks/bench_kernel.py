"""Time the proof search with the compiled and the pure-Python term kernel.

Each run happens in a fresh interpreter so that backend selection at import
is exercised exactly as in normal use (``HOLOPOS_KERNEL=python`` forces the
fallback).

    python benchmarks/bench_kernel.py                 # grz4, a105641, franel
    python benchmarks/bench_kernel.py grz4 --repeat 5
"""
import argparse
import json
import os
import statistics
import subprocess
import sys

WITNESSES = {
    "franel": ("30", "33"),
    "grz4": ("64", "226"),
    "a105641": ("3", "7/2"),
    "fibonacci": ("3/2", "7/4"),
    "doubling": ("1", "3"),
}

WORKER = """
import json, sys, time
from holopos import kernel
from holopos.cli import resolve_spec_path
from holopos.prover import prove
from holopos.recurrence import load_spec, normalize
from holopos.witness import build_witness

name, p, q = sys.argv[1:4]
nr = normalize(load_spec(resolve_spec_path(name)))
w = build_witness(nr, p, q)
t0 = time.perf_counter()
pr = prove(nr, w)
elapsed = time.perf_counter() - t0
last = pr.window_terms[-1]
print(json.dumps({
    "backend": kernel.BACKEND, "seconds": elapsed, "u": pr.u,
    "verdict": str(pr.verdict), "digits": len(str(abs(last.numerator))),
}))
"""


def run_once(name, backend):
    env = dict(os.environ)
    if backend == "python":
        env["HOLOPOS_KERNEL"] = "python"
    else:
        env.pop("HOLOPOS_KERNEL", None)
    p, q = WITNESSES[name]
    out = subprocess.run(
        [sys.executable, "-c", WORKER, name, p, q], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fixtures", nargs="*", default=["grz4", "a105641", "franel"], help=", ".join(WITNESSES))
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    unknown = set(args.fixtures) - set(WITNESSES)
    if unknown:
        ap.error(f"unknown fixture(s): {', '.join(sorted(unknown))}")

    print(f"{'fixture':<10} {'u':>6} {'digits':>7} {'compiled s':>11} {'python s':>9} {'speedup':>8}")
    for name in args.fixtures:
        times = {}
        info = None
        for backend in ("compiled", "python"):
            runs = [run_once(name, backend) for _ in range(args.repeat)]
            if runs[0]["backend"] != backend:
                print(f"{name}: compiled kernel unavailable (run `python setup.py build_ext --inplace`)")
                return 1
            if info is not None and (runs[0]["u"], runs[0]["verdict"]) != (info["u"], info["verdict"]):
                print(f"{name}: backends disagree: {info} vs {runs[0]}")
                return 1
            info = runs[0]
            times[backend] = statistics.median(r["seconds"] for r in runs)
        speedup = times["python"] / times["compiled"] if times["compiled"] else float("inf")
        print(
            f"{name:<10} {info['u']:>6} {info['digits']:>7} {times['compiled']:>11.3f} "
            f"{times['python']:>9.3f} {speedup:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
