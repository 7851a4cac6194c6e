"""Compare the compiled kernels with the pure-Python fallback.

Each workload runs in a fresh interpreter per backend so the memo caches
start cold and the backend is fixed at import.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json] [--quick]
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKLOADS = {
    "concat_product": """
        import random
        from fractions import Fraction
        from liemean import kernels
        rng = random.Random(0)
        def rand_map(k):
            out = {}
            for _ in range(k):
                w = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
                out[w] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 12))
            return out
        p, q = rand_map(300), rand_map(300)
        t0 = time.perf_counter()
        for _ in range(5):
            kernels.concat_product(p, q, 8)
        elapsed = time.perf_counter() - t0
    """,
    "bch_universal_9": """
        from liemean.bch import bch_universal
        t0 = time.perf_counter()
        bch_universal(9)
        elapsed = time.perf_counter() - t0
    """,
    "det_mod_p_400": """
        import random
        from liemean import kernels
        rng = random.Random(1)
        m = [[rng.randint(-1000, 1000) for _ in range(400)] for _ in range(400)]
        t0 = time.perf_counter()
        kernels.det_mod_p(m, 2147483629)
        elapsed = time.perf_counter() - t0
    """,
    "mu_5_degree_5": """
        from liemean.mean import solve_mu_n, mu_universal
        mu_universal(4, 5)
        t0 = time.perf_counter()
        solve_mu_n(5, 5)
        elapsed = time.perf_counter() - t0
    """,
    "mu_6_degree_5": """
        from liemean.mean import solve_mu_n, mu_universal
        mu_universal(5, 5)
        t0 = time.perf_counter()
        solve_mu_n(6, 5)
        elapsed = time.perf_counter() - t0
    """,
}

QUICK = ("concat_product", "bch_universal_9", "det_mod_p_400")


def run_once(body: str, pure: bool) -> tuple[float, str]:
    code = "import time\n" + textwrap.dedent(body) + "\nfrom liemean import kernels\nprint(elapsed, kernels.BACKEND)\n"
    env = dict(os.environ, LIEMEAN_PURE_PYTHON="1" if pure else "0")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    elapsed, backend = proc.stdout.split()
    return float(elapsed), backend


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", dest="json_path")
    ap.add_argument("--quick", action="store_true", help="skip the mean solves")
    args = ap.parse_args(argv)

    names = QUICK if args.quick else tuple(WORKLOADS)
    rows = []
    print(f"{'workload':<18} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for name in names:
        best = {}
        backends = {}
        for pure in (False, True):
            times = []
            for _ in range(args.repeat):
                t, backends[pure] = run_once(WORKLOADS[name], pure)
                times.append(t)
            best[pure] = min(times)
        if backends[False] != "cython":
            print("compiled extension not importable; both columns use the Python fallback", file=sys.stderr)
        speedup = best[True] / best[False] if best[False] else float("nan")
        rows.append({"workload": name, "compiled_s": best[False], "python_s": best[True], "speedup": speedup,
                     "compiled_backend": backends[False]})
        print(f"{name:<18} {best[False]:>10.3f} {best[True]:>10.3f} {speedup:>7.2f}x")
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
