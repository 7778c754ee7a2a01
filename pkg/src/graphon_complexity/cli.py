"""Command-line interface: ``graphon <subcommand> ...``.

Exit codes: 0 success or test acceptance, 1 usage/input errors,
2 no oracle available, 3 test rejection.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .complexity import (covering_estimate, estimate_dimension, default_grid, parse_grid,
                         sweep_dimension_curve)
from .distance import estimate_distances, t_n
from .errors import GraphonError, UnsupportedOracle
from .experiments import load_plan, run_plan
from .fixtures import FIXTURES, get_fixture
from .ground_truth import QuadratureConfig, true_distance_matrix
from .io import load_spec, read_graph, write_graph
from .model import sample_graph, sample_latents, sparsify
from .packing_test import TestConfig, run_packing_test

EXIT_OK, EXIT_USAGE, EXIT_ORACLE, EXIT_REJECT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("must be a 64-bit unsigned integer")
    return v


def set_threads(k: Optional[int]):
    """Cap numba and BLAS worker counts; returns the threadpool limiter."""
    import numba
    from threadpoolctl import threadpool_limits
    if k is None:
        k = os.cpu_count() or 1
    numba.set_num_threads(max(1, min(k, numba.config.NUMBA_NUM_THREADS)))
    return threadpool_limits(limits=k)


def _spec(args):
    return get_fixture(args.fixture) if args.fixture else load_spec(args.spec)


def cmd_sample(args) -> int:
    spec = _spec(args)
    lat = sample_latents(spec, args.n, args.seed)
    A = sample_graph(spec, lat, args.seed)
    if args.rho is not None and args.rho != 1.0:
        A = sparsify(A, args.rho, args.seed)
    write_graph(A, args.out)
    print(f"wrote {args.out} n={A.n} edges={int(A.bits.sum()) // 2} rho={A.rho!r}")
    return EXIT_OK


def cmd_truth(args) -> int:
    spec = _spec(args)
    lat = sample_latents(spec, args.n, args.seed)
    cfg = QuadratureConfig(mc_samples=args.mc_samples, grid_points=args.grid_points, seed=args.seed)
    oracle = true_distance_matrix(spec, lat, cfg, method=args.method)
    oracle.to_csv(args.out)
    print(f"wrote {args.out} method={oracle.method} integration_error={oracle.integration_error!r}")
    return EXIT_OK


def cmd_distances(args) -> int:
    A = read_graph(args.graph)
    est = estimate_distances(A)
    est.to_csv(args.out, conservative=args.conservative)
    flag = " below_theory_scale" if est.below_theory_scale else ""
    print(f"wrote {args.out} n={A.n} rho={A.rho!r} t_n={t_n(A.n)!r}{flag}")
    return EXIT_OK


def cmd_covering(args) -> int:
    est = estimate_distances(read_graph(args.graph))
    cov = covering_estimate(est, args.eps, args.mode)
    print(f"covering eps={cov.radius!r} size={cov.size} method={cov.method}")
    print("centers " + " ".join(map(str, cov.centers)))
    return EXIT_OK


def cmd_dimension(args) -> int:
    est = estimate_distances(read_graph(args.graph))
    d = estimate_dimension(est, args.dcap, args.c, args.mode)
    print(f"dim_hat={d.value!r} eps_D={d.radius_used!r} cov_estimate={d.cov_estimate} "
          f"method={d.method} n={d.n}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    est = estimate_distances(read_graph(args.graph))
    grid = parse_grid(args.grid) if args.grid else default_grid()
    sw = sweep_dimension_curve(est, grid)
    sw.to_csv(args.out)
    p = sw.plateau
    if p is None:
        print(f"wrote {args.out} rows={len(grid)} plateau=none")
    else:
        print(f"wrote {args.out} rows={len(grid)} plateau={p.start_eps!r}..{p.end_eps!r} "
              f"mean={p.mean!r}")
    return EXIT_OK


def cmd_test(args) -> int:
    cfg = TestConfig(args.k, args.eps)
    A = read_graph(args.graph)
    est = estimate_distances(A)
    res = run_packing_test(A, cfg, est)
    note = " below_theory_scale" if res.below_theory_scale else ""
    print(f"{res.decision} statistic={res.statistic} K={res.K} eps={res.eps!r} "
          f"eps_hat={res.eps_hat!r} t_n={res.t_n!r} method={res.method}{note}")
    if res.rejected:
        path = args.certificate or f"{args.graph}.certificate.csv"
        res.certificate_to_csv(path, est)
        print(f"certificate {path}")
        return EXIT_REJECT
    return EXIT_OK


def cmd_experiment(args) -> int:
    paths = run_plan(load_plan(args.plan), args.out_dir)
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphon", description="Complexity estimation for graphon models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="cap on worker threads (default: hardware parallelism)")
    p.add_argument("-v", "--verbose", action="count", default=0,
                   help="print tracebacks on errors")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def spec_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--spec", help="graphon spec config file")
        g.add_argument("--fixture", choices=sorted(FIXTURES), help="named built-in spec")
        sp.add_argument("--n", type=_positive_int, required=True, help="number of nodes")
        sp.add_argument("--seed", type=_seed, required=True, help="random seed (required)")

    sp = sub.add_parser("sample", help="sample an adjacency matrix")
    spec_args(sp)
    sp.add_argument("--out", required=True,
                    help="output path; .txt/.edges/.edgelist/.el writes an edge list, else GADJ binary")
    sp.add_argument("--rho", type=float, default=None, help="sparse thinning level in (0,1]")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("truth", help="oracle neighborhood distances of a latent sample")
    spec_args(sp)
    sp.add_argument("--out", required=True, help="CSV of (i, j, r)")
    sp.add_argument("--method", default="auto",
                    choices=["auto", "closed_form", "quadrature", "monte_carlo"])
    sp.add_argument("--mc-samples", type=_positive_int, default=100_000)
    sp.add_argument("--grid-points", type=_positive_int, default=128)
    sp.set_defaults(func=cmd_truth)

    sp = sub.add_parser("distances", help="estimate squared neighborhood distances")
    sp.add_argument("--graph", required=True, help="edge list or GADJ file")
    sp.add_argument("--out", required=True, help="CSV of (i, j, sq_standard[, sq_conservative])")
    sp.add_argument("--conservative", action="store_true",
                    help="also write the conservative estimate column")
    sp.set_defaults(func=cmd_distances)

    sp = sub.add_parser("covering", help="plug-in covering number at one radius")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--mode", choices=["auto", "exact", "greedy"], default="auto")
    sp.set_defaults(func=cmd_covering)

    sp = sub.add_parser("dimension", help="Minkowski dimension estimate")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--dcap", type=float, required=True, help="upper bound D on the dimension")
    sp.add_argument("--c", type=float, default=1.0, help="radius constant (default 1)")
    sp.add_argument("--mode", choices=["auto", "exact", "greedy"], default="auto")
    sp.set_defaults(func=cmd_dimension)

    sp = sub.add_parser("sweep", help="covering/dimension curve over a radius grid")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--grid", default=None,
                    help="start:step:count (default 0.005:0.005:101)")
    sp.add_argument("--out", required=True, help="CSV of (eps, cov_size, dim_value)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("test", help="test packing number <= K at radius eps")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, required=True, help="null bound K >= 1")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--certificate", default=None,
                    help="certificate CSV written on rejection (default <graph>.certificate.csv)")
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("experiment", help="run an experiment plan")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("graphon: error: a subcommand is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        with set_threads(args.threads):
            return args.func(args)
    except UnsupportedOracle as exc:
        print(f"graphon: unsupported oracle: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (GraphonError, OSError, ValueError) as exc:
        if args.verbose:
            raise
        print(f"graphon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
