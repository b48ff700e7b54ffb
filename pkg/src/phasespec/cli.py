"""Command line entry point.

::

    phasespec simulate --config run.json [--out DIR]
    phasespec figure fig3 --out data/
    phasespec selftest

The worker count for frequency-parallel spectrum grids is read from
``PHASESPEC_WORKERS`` (default 1).  Exit codes: 0 success, 1 configuration
error, 2 convergence or self-test failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .correlation import correlation
from .dynamics import SingularSystem, population_trajectory
from .figures import FIGURES, UnknownFigure
from .io import ConfigError, reproduce_figure, run_scan
from .liouville import build_liouvillian, correlation_oracle, evolve_oracle
from .params import CollectiveState, bell_collective_state, bell_initial_state
from .spectrum import QuadratureNotConverged

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 1, 2

SELFTEST_TOL = 1e-8


def selftest(out=sys.stdout) -> bool:
    """Compare the reduced equations against the full Liouvillian for every figure set."""
    ok = True
    seen = set()
    times = np.linspace(0.0, 10.0, 41)
    grid = np.linspace(0.0, 3.0, 4)
    for spec in FIGURES.values():
        for run in spec.runs:
            p = run.params
            if p in seen:
                continue
            seen.add(p)
            L = build_liouvillian(p)
            rho0 = bell_initial_state(p.phi_b)
            fast = population_trajectory(p, bell_collective_state(p), times)
            slow = evolve_oracle(L, rho0, times)
            pop_err = max(
                np.abs(CollectiveState.from_density_matrix(r, p.phi_s).as_array() - x).max()
                for r, x in zip(slow, fast)
            )
            corr_err = max(
                abs(correlation(p, rho0, t1, t2) - correlation_oracle(L, rho0, t1, t2))
                for t1 in grid
                for t2 in grid
            )
            passed = pop_err < SELFTEST_TOL and corr_err < SELFTEST_TOL
            ok &= passed
            print(
                f"{'PASS' if passed else 'FAIL'} {run.label:<20s} "
                f"populations {pop_err:.1e}  correlation {corr_err:.1e}",
                file=out,
            )
    return ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasespec", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a JSON configuration")
    sim.add_argument("--config", required=True, help="configuration or metadata sidecar file")
    sim.add_argument("--out", default=None, help="output directory (default: next to the config)")

    fig = sub.add_parser("figure", help="write the datasets behind one figure")
    fig.add_argument("id", help=f"one of {', '.join(FIGURES)}")
    fig.add_argument("--out", required=True, help="output directory")

    sub.add_parser("selftest", help="check reduced equations against the full master equation")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            written = run_scan(args.config, args.out)
        elif args.command == "figure":
            written = reproduce_figure(args.id, args.out)
        else:
            return EXIT_OK if selftest() else EXIT_CONVERGENCE
    except (ConfigError, UnknownFigure) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureNotConverged, SingularSystem) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
