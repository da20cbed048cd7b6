"""Command-line front end: one subcommand per check, JSON-lines or text reports.

Exit codes: 0 when every report passes, 1 when any fails, 2 on an error or a usage error.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import partial

from . import checks
from .hecke import ZetaParams

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _n(value):
    n = int(value)
    if n < 3:
        raise argparse.ArgumentTypeError("N must be at least 3")
    return n


def _nonneg(value):
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _positive(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _zeta(value):
    try:
        return ZetaParams.parse(value)
    except (ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(f"bad zeta specification {value!r}: {exc}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="JSON lines (default) or one text line per report")
    common.add_argument("--cache", metavar="DIR", default=None,
                        help=f"cache directory for gamma tables (default: ${checks.CACHE_ENV})")
    common.add_argument("--jobs", type=_positive, default=1, help="run independent checks in parallel")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock timings (output is then no longer byte-stable)")

    parser = argparse.ArgumentParser(prog="hecke-so", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", parents=[common], help="emit the gamma table")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--jmax", type=_nonneg, default=2)
    p.add_argument("--form", choices=("orthonormal", "antidiagonal"), default="orthonormal")

    p = sub.add_parser("jacobi", parents=[common], help="PBW criterion for a pairing")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--kappa", choices=("series", "pfaffian"), default="series")
    p.add_argument("--jmax", type=_nonneg, default=2)

    p = sub.add_parser("pfaffian", parents=[common],
                       help="the ten-minor -4 Pf identity and the Pfaffian pairing on V_6")
    p.add_argument("--samples", type=_nonneg, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("h-lemma", parents=[common], help="h(x,y,z;g) for rank(1-g) <= 2 and rank 4")
    p.add_argument("--n", type=_n, nargs="+", default=[4, 5])
    p.add_argument("--count", type=_positive, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("poisson-center", parents=[common], help="deformed Poisson center and c_1")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--zeta", type=_zeta, default=None, help="e.g. z0,z1 (default) or 1/2,z1")

    p = sub.add_parser("casimir", parents=[common], help="quantum Casimir t_1 + C")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--zeta", type=_zeta, default=None, help="m + 1 entries, default z0,..,z{m-1},1")

    p = sub.add_parser("slice", parents=[common], help="nilpotent e_m, centralizer and slice invariants")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--oracle-points", type=_nonneg, default=20)

    p = sub.add_parser("all", parents=[common], help="the acceptance suite")
    p.add_argument("--quick", action="store_true", help="acceptance criteria only, no extended sweeps")
    return parser


def _tasks(args):
    """[(criterion or None, partial)] for the chosen subcommand."""
    cmd = args.command
    if cmd == "gamma":
        return [(None, partial(checks.check_gamma, args.n, args.jmax, args.form, args.cache))]
    if cmd == "jacobi":
        return [(None, partial(checks.check_jacobi, args.n, args.jmax, args.kappa, args.cache))]
    if cmd == "pfaffian":
        return [(None, partial(checks.check_pfaffian_identity, args.samples, args.seed)),
                (None, partial(checks.check_pfaffian_pairing))]
    if cmd == "h-lemma":
        return [(None, partial(checks.check_h_lemma, tuple(args.n), args.count, args.seed))]
    if cmd == "poisson-center":
        zeta = args.zeta or ZetaParams.parse("z0,z1")
        return [(None, partial(checks.check_poisson_center, args.n, zeta)),
                (None, partial(checks.check_poisson_c1, args.n, zeta))]
    if cmd == "casimir":
        zeta = args.zeta or ZetaParams.hm(args.m)
        if len(zeta) != args.m + 1:
            raise argparse.ArgumentTypeError(f"--zeta needs m + 1 = {args.m + 1} entries")
        return [(None, partial(checks.check_casimir, args.n, args.m, zeta))]
    if cmd == "slice":
        return [(None, partial(checks.check_slice, args.n, args.m, args.oracle_points))]
    if cmd == "all":
        suites = checks.acceptance_suite() + ([] if args.quick else checks.extended_suite())
        return [(num, task) for num, _, tasks in suites for task in tasks]
    raise AssertionError(cmd)


def _run_one(task, cache):
    if cache:
        os.environ[checks.CACHE_ENV] = cache
    start = time.perf_counter()
    try:
        report = task()
    except Exception as exc:  # reported as a structured error, never swallowed silently
        name = getattr(task.func, "__name__", "check")
        report = checks.VerificationReport(
            f"{name}-error", name.replace("check_", ""), {"args": [str(a) for a in task.args]},
            "error", {"error": f"{type(exc).__name__}: {exc}"})
    report.timing = time.perf_counter() - start
    return report


def _emit(report, criterion, args, out):
    if args.format == "json":
        obj = report.to_json(args.timing)
        if criterion is not None:
            obj["criterion"] = criterion
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        prefix = f"criterion {criterion} " if criterion is not None else ""
        out.write(prefix + report.to_text(args.timing) + "\n")
    out.flush()


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tasks = _tasks(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    verdicts = []
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = {pool.submit(_run_one, task, args.cache): num for num, task in tasks}
            for fut in as_completed(futures):
                report = fut.result()
                _emit(report, futures[fut], args, out)
                verdicts.append(report.verdict)
    else:
        for num, task in tasks:
            report = _run_one(task, args.cache)
            _emit(report, num, args, out)
            verdicts.append(report.verdict)
    if "error" in verdicts:
        return EXIT_ERROR
    if "fail" in verdicts:
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
