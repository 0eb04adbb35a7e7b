"""Compiled core vs pure-Python fallback.

    python benchmarks/bench_core.py [--steps 2000] [--points 101 401]

Times the tridiagonal solve and closed-loop steps per second on each
available backend and checks that both end in the same state.
"""

import argparse
import time

import numpy as np

from kvseek import _backend
from kvseek.sim.loop import make_loop
from kvseek.sim.scenario import scenario
from kvseek.wave_solver import KvParams, Grid, step_matrix


def best_of(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_solve(points, reps=2000):
    sub, diag, sup = step_matrix(Grid(1.0, points), KvParams(0.1), 1e-3)
    rhs = np.random.default_rng(0).standard_normal(len(diag))
    out = {}
    for name in _backend.available_backends():
        solver = _backend.tridiagonal(sub, diag, sup, backend=name)
        secs = best_of(lambda: [solver.solve(rhs) for _ in range(reps)])
        out[name] = secs / reps
    return out


def bench_loop(points, steps):
    sc = scenario(plant={"points": points}, controller={"washout_cutoff": 1.0})
    out, finals = {}, {}
    for name in _backend.available_backends():
        def go():
            loop = make_loop(sc, name)
            for _ in range(steps):
                loop.sense()
                loop.actuate()
            finals[name] = np.array(loop.alpha)
        out[name] = steps / best_of(go, repeat=3)
    if len(finals) == 2:
        out["max_state_diff"] = float(np.max(np.abs(finals["compiled"] - finals["python"])))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--points", type=int, nargs="+", default=[101, 401])
    args = ap.parse_args(argv)
    print(f"backends: {', '.join(_backend.available_backends())}")
    for n in args.points:
        s = bench_solve(n)
        line = ", ".join(f"{k} {v * 1e6:.2f} us" for k, v in s.items())
        if len(s) == 2:
            line += f" (x{s['python'] / s['compiled']:.1f})"
        print(f"N={n:5d} tridiagonal solve: {line}")
        r = bench_loop(n, args.steps)
        line = ", ".join(f"{k} {r[k]:.0f} steps/s" for k in _backend.available_backends())
        if len(_backend.available_backends()) == 2:
            line += f" (x{r['compiled'] / r['python']:.1f}, final state diff {r['max_state_diff']:.1e})"
        print(f"N={n:5d} closed loop:       {line}")


if __name__ == "__main__":
    main()
