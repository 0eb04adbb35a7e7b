"""Command-line entry point (``kvseek``).

Exit codes: 0 success, 1 invalid config, 2 numerical failure.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import contextlib
import math
import sys

from kvseek import _backend
from kvseek.errors import ConfigError, NumericalFailure
from kvseek.kernel import KernelParams
from kvseek.probe import ProbeParams
from kvseek.sim.loop import run
from kvseek.sim.scenario import Scenario, load_config, load_config_list
from kvseek.sim.studies import convergence_study, kernel_check, probe_check
from kvseek.spectrum import spectrum_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

SWEEP_COLUMNS = ("name", "K", "c", "c_bar", "washout", "a", "omega", "d", "theta_star", "y_star",
                 "H", "mode", "limsup_Theta", "limsup_theta", "limsup_y", "status")


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, int)):
        return str(int(v))
    return f"{v:.12g}"


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_table(path, header, rows):
    with _sink(path) as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _log(msg):
    print(msg, file=sys.stderr)


def cmd_simulate(args):
    sc = load_config(args.config)
    if args.t_end is not None:
        sc = Scenario.from_dict({**sc.to_dict(), "t_end": args.t_end})
    csv_path = args.out or sc.output.csv or "-"
    res = run(sc, backend=args.backend, csv_path=None, snapshots_path=args.snapshots)
    with _sink(csv_path) as fh:
        res.write_csv(fh)
    _log(f"{sc.name}: limsup|Theta-Theta*|={res.limsup_Theta:.6g} "
         f"limsup|theta-Theta*|={res.limsup_theta:.6g} limsup|y-y*|={res.limsup_y:.6g}")
    return EXIT_OK


def cmd_spectrum(args):
    rows = spectrum_table(args.c, args.d, args.n_max)
    write_table(args.out, ("n", "mu", "re_plus", "im_plus", "re_minus", "im_minus", "is_complex",
                           "circle_residual"), rows)
    return EXIT_OK


def cmd_kernel_check(args):
    rows = kernel_check(KernelParams(args.c, args.domain_length), args.points, args.h)
    write_table(args.out, ("x", "sigma", "k", "residual"), rows)
    return EXIT_OK


def cmd_probe_check(args):
    p = ProbeParams(args.amplitude, args.frequency, args.damping, args.domain_length)
    write_table(args.out, ("t", "x", "beta_r", "residual"), probe_check(p, args.points, args.times,
                                                                        args.h))
    return EXIT_OK


def _sweep_one(cfg):
    sc = Scenario.from_dict(cfg)
    ctl, p, m = sc.controller, sc.probe, sc.map
    params = [sc.name, ctl.gain, ctl.c, ctl.filter_cutoff, ctl.washout_cutoff, p.amplitude,
              p.frequency, sc.kv.damping, m.theta_star, m.y_star, m.hessian, sc.mode]
    try:
        res = run(sc, diagnostics=sc.output.csv is not None)
    except NumericalFailure as exc:
        return params + [math.nan, math.nan, math.nan, f"failed: {exc}"]
    return params + [res.limsup_Theta, res.limsup_theta, res.limsup_y, "ok"]


def cmd_sweep(args):
    scenarios = load_config_list(args.config_list)
    cfgs = [sc.to_dict() for sc in scenarios]
    if args.workers == 1 or len(cfgs) == 1:
        rows = [_sweep_one(c) for c in cfgs]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_one, cfgs))
    write_table(args.out, SWEEP_COLUMNS, rows)
    failed = [r[0] for r in rows if r[-1] != "ok"]
    if failed:
        _log(f"numerical failure in: {', '.join(failed)}")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_convergence(args):
    sc = load_config(args.config)
    levels = convergence_study(sc.probe, sc.kv, args.points, args.dt, args.t_end, args.levels,
                               backend=args.backend)
    rows = [(i, lv.points, lv.dx, lv.dt, lv.max_error, lv.ratio, lv.neumann_slope)
            for i, lv in enumerate(levels)]
    write_table(args.out, ("level", "points", "dx", "dt", "max_error", "ratio", "neumann_slope"),
                rows)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="kvseek", description=__doc__.splitlines()[0])
    ap.add_argument("--backend", choices=_backend.available_backends(), default=None,
                    help=f"stepping core (default: {_backend.BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario, write the time series CSV")
    p.add_argument("config")
    p.add_argument("-o", "--out", help="CSV path ('-' for stdout)")
    p.add_argument("--snapshots", help="full-field snapshot CSV path")
    p.add_argument("--t-end", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="target-system eigenvalues per mode")
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.1)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("kernel-check", help="gain kernel and its PDE residual on the triangle")
    p.add_argument("--c", type=float, default=0.01)
    p.add_argument("--domain-length", type=float, default=1.0)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_kernel_check)

    p = sub.add_parser("probe-check", help="probe trajectory and its PDE residual")
    p.add_argument("--amplitude", type=float, default=0.2)
    p.add_argument("--frequency", type=float, default=8.0)
    p.add_argument("--damping", type=float, default=0.1)
    p.add_argument("--domain-length", type=float, default=1.0)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--times", type=int, default=9)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_probe_check)

    p = sub.add_parser("sweep", help="run several scenarios concurrently, one summary row each")
    p.add_argument("config_list")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("convergence", help="grid/step refinement study on the probe trajectory")
    p.add_argument("config")
    p.add_argument("--points", type=int, default=26)
    p.add_argument("--dt", type=float, default=4e-3)
    p.add_argument("--t-end", type=float, default=2.0)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_convergence)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"invalid config: {exc}")
        return EXIT_CONFIG
    except NumericalFailure as exc:
        _log(f"numerical failure: {exc}")
        return EXIT_NUMERICAL
    except ValueError as exc:
        # parameter errors from the non-config subcommands
        _log(f"invalid parameters: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
