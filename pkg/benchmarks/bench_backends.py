"""Compare the compiled extension against the NumPy fallback on the hot sums.

Each backend runs in its own subprocess because the choice is made at import
time (``LOGCAP_PURE_PYTHON=1`` forces the fallback).  The parent checks that
both backends produce the same numbers before it prints the timing table.

Usage: python3 benchmarks/bench_backends.py [--repeat N] [--scale X]
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time

import numpy as np

CHILD_FLAG = "BENCH_BACKENDS_CHILD"


def _disjoint_batch(rng, n):
    """Sorted centers with half-lengths below 45% of the closest neighbor gap."""
    centers = np.sort(rng.uniform(0.0, 1.0, size=n))
    gaps = np.diff(np.concatenate([[0.0], centers, [1.0]]))
    room = np.minimum(gaps[:-1], gaps[1:])
    half = 0.45 * room * rng.uniform(0.2, 1.0, size=n)
    ll = np.log(2.0 * half)
    w = rng.uniform(0.5, 1.5, size=n)
    w /= w.sum()
    return centers, ll, w


def _workloads(scale):
    rng = np.random.default_rng(20240815)
    fast_n = max(1000, int(300_000 * scale))
    pairs_n = max(100, int(1500 * math.sqrt(scale)))
    mutual_n = max(100, int(1000 * math.sqrt(scale)))

    c1, ll1, w1 = _disjoint_batch(rng, pairs_n)
    cm, llm, wm = _disjoint_batch(rng, mutual_n)
    shift = 2.0 + rng.uniform(0.0, 0.5)  # far-separated second cloud
    jobs = {}

    def add(name, fn):
        jobs[name] = fn

    from logcap.sums import cross_pairs_sum, mutual_sum, uniform_cross_fast

    add("uniform_cross_fast(n=%d)" % fast_n,
        lambda: uniform_cross_fast(fast_n, -40.0)[0])
    add("cross_pairs_sum(n=%d)" % pairs_n,
        lambda: cross_pairs_sum(c1, ll1, w1)[0])
    add("mutual_sum(%dx%d)" % (mutual_n, mutual_n),
        lambda: mutual_sum(cm, llm, wm, cm + shift, llm, wm)[0])
    return jobs


def _child(repeat, scale):
    from logcap.sums import backend_name

    results = {}
    for name, fn in _workloads(scale).items():
        best = math.inf
        value = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
        results[name] = {"seconds": best, "value": value}
    print(json.dumps({"backend": backend_name(), "results": results}))


def _run_child(pure_python, repeat, scale):
    env = dict(os.environ)
    env[CHILD_FLAG] = "1"
    if pure_python:
        env["LOGCAP_PURE_PYTHON"] = "1"
    else:
        env.pop("LOGCAP_PURE_PYTHON", None)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__),
         "--repeat", str(repeat), "--scale", str(scale)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timing repeats, best-of")
    ap.add_argument("--scale", type=float, default=1.0, help="workload size factor")
    args = ap.parse_args(argv)

    if os.environ.get(CHILD_FLAG) == "1":
        _child(args.repeat, args.scale)
        return 0

    fast = _run_child(False, args.repeat, args.scale)
    slow = _run_child(True, args.repeat, args.scale)
    if fast["backend"] == slow["backend"]:
        print(f"note: compiled extension unavailable; both runs used "
              f"{fast['backend']!r}", file=sys.stderr)

    width = max(len(n) for n in fast["results"])
    print(f"{'workload':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}"
          f"  {'speedup':>8}  agree")
    worst_rel = 0.0
    for name, f in fast["results"].items():
        s = slow["results"][name]
        rel = abs(f["value"] - s["value"]) / max(1.0, abs(s["value"]))
        worst_rel = max(worst_rel, rel)
        ratio = s["seconds"] / f["seconds"] if f["seconds"] > 0 else math.inf
        print(f"{name:<{width}}  {f['seconds']:>9.4f}s  {s['seconds']:>9.4f}s"
              f"  {ratio:>7.1f}x  rel={rel:.1e}")
    if worst_rel > 1e-11:
        print(f"error: backends disagree (worst rel {worst_rel:.2e})", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
