"""Time the exact workloads under the gmpy2 and pure-Python rational backends.

    python benchmarks/bench_backends.py [--repeat 3]

Each backend runs in its own interpreter because the choice is made at import.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from fractions import Fraction
from formqm import BACKEND
from formqm import monopole as MP, verify as V

def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

repeat = int(__import__("sys").argv[1])
out = {
    "backend": BACKEND,
    "wigner_j=5/2": best(lambda: MP.wigner_basis(Fraction(5, 2)), repeat),
    "clifford_suite": best(V.clifford_suite, repeat),
    "hodge_suite": best(V.hodge_suite, repeat),
}
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["FORMQM_PURE"] = "1"
    else:
        env.pop("FORMQM_PURE", None)
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [run(False, args.repeat), run(True, args.repeat)]
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'workload':<20}" + "".join(f"{r['backend']:>12}" for r in rows))
    for k in keys:
        print(f"{k:<20}" + "".join(f"{r[k]:>11.3f}s" for r in rows))


if __name__ == "__main__":
    main()
