"""Monte-Carlo harness writing CSV evidence for the estimators.

Plan files are INI-style::

    [experiment]
    kind = distance_error
    fixture = sbm3
    n_list = 200, 400, 800
    trials = 100
    seed = 0

An optional ``[graphon]`` section replaces the named fixture. Trial ``t``
uses seed ``seed + t`` for latents, edges and thinning, and every output row
carries ``(fixture, n, seed)`` so a single trial can be replayed alone.
"""
from __future__ import annotations

import configparser
import math
import platform
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .complexity import estimate_dimension, default_grid, parse_grid, sweep_distances
from .distance import estimate_distances, sparse_rho_check
from .errors import InvalidArgument, UnsupportedOracle
from .fixtures import get_fixture
from .ground_truth import (community_distance_matrix, exact_packing_number,
                           reference_dimension, true_distance_matrix)
from .io import dump_spec, spec_from_section, write_csv
from .model import GraphonSpec, sample_graph, sample_latents, sparsify
from .packing_test import TestConfig, check_w_eta_beta, run_packing_test, type_ii_ceiling

KINDS = ("distance_error", "dimension_error", "test_errors", "figure1")


@dataclass(frozen=True)
class ExperimentPlan:
    kind: str
    fixture: str
    spec: GraphonSpec
    n_list: Tuple[int, ...]
    trials: int
    seed: int = 0
    rho: float = 1.0
    D_cap: float = 2.0
    c: float = 1.0
    eps: float = 0.1
    K: int = 1
    mode: str = "auto"
    eps_grid: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise InvalidArgument("trials must be at least 1")
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise InvalidArgument("n_list must be nonempty and strictly increasing")
        if not 0.0 < self.rho <= 1.0:
            raise InvalidArgument("rho must lie in (0,1]")
        if self.K < 1:
            raise InvalidArgument("K must be at least 1")

    def seeds(self) -> List[int]:
        return [self.seed + t for t in range(self.trials)]

    def grid(self) -> np.ndarray:
        return default_grid() if self.eps_grid is None else np.array(self.eps_grid)


def make_plan(kind: str, fixture: str, n_list, trials: int, spec: Optional[GraphonSpec] = None,
              **knobs) -> ExperimentPlan:
    spec = spec if spec is not None else get_fixture(fixture)
    return ExperimentPlan(kind=kind, fixture=fixture, spec=spec,
                          n_list=tuple(int(n) for n in n_list), trials=int(trials), **knobs)


def parse_plan(text: str) -> ExperimentPlan:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if "experiment" not in cp:
        raise InvalidArgument("plan needs an [experiment] section")
    sec = cp["experiment"]
    try:
        kind = sec["kind"].strip()
        fixture = sec.get("fixture", "custom").strip()
        spec = spec_from_section(cp["graphon"]) if "graphon" in cp else get_fixture(fixture)
        n_list = [int(t) for t in sec["n_list"].replace(",", " ").split()]
        knobs = {}
        for key, conv in (("seed", int), ("rho", float), ("D_cap", float), ("c", float),
                          ("eps", float), ("K", int)):
            if key.lower() in sec:
                knobs[key] = conv(sec[key.lower()])
        if "mode" in sec:
            knobs["mode"] = sec["mode"].strip()
        if "eps_grid" in sec:
            knobs["eps_grid"] = tuple(parse_grid(sec["eps_grid"].strip()).tolist())
        return make_plan(kind, fixture, n_list, int(sec.get("trials", "1")), spec=spec, **knobs)
    except KeyError as exc:
        raise InvalidArgument(f"plan is missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"malformed plan value: {exc}") from None


def load_plan(path) -> ExperimentPlan:
    return parse_plan(Path(path).read_text())


def sample_trial(plan: ExperimentPlan, n: int, seed: int):
    """Latents and (possibly thinned) adjacency matrix of one trial."""
    lat = sample_latents(plan.spec, n, seed)
    A = sample_graph(plan.spec, lat, seed)
    if plan.rho < 1.0:
        A = sparsify(A, plan.rho, seed)
    return lat, A


# ------------------------------------------------------------ distance

def distance_error_trial(plan: ExperimentPlan, n: int, seed: int) -> dict:
    lat, A = sample_trial(plan, n, seed)
    est = estimate_distances(A)
    oracle = true_distance_matrix(plan.spec, lat)
    bias = oracle.nearest_neighbor_bias()
    root = math.sqrt(math.log(n) / n)
    rho = plan.rho
    if rho == 1.0:
        target = oracle.values ** 2
        band = 36.0 * root
        env = 3.0 * bias[:, None] + 3.0 * bias[None, :] + band
    else:
        target = rho * rho * oracle.values ** 2
        band = 60.0 * rho * root
        env = 3.0 * rho * (rho * bias[:, None] + rho * bias[None, :] + 20.0 * root)
    err = np.abs(target - est.sq_standard)
    slack = env - err
    return {"max_error": float(err.max()), "max_bias": float(bias.max()), "band": band,
            "min_slack": float(slack.min()), "satisfied": bool(np.all(slack >= 0)),
            "rho_admissible": est.rho_admissible}


def run_distance_error(plan: ExperimentPlan, out_dir) -> List[Path]:
    cols = ["fixture", "n", "seed", "rho", "max_error", "max_bias", "band", "min_slack",
            "satisfied", "rho_admissible"]
    rows, summary = [], []
    for n in plan.n_list:
        errs, sats = [], []
        for s in plan.seeds():
            r = distance_error_trial(plan, n, s)
            rows.append([plan.fixture, n, s, plan.rho] + [r[c] for c in cols[4:]])
            errs.append(r["max_error"])
            sats.append(r["satisfied"])
        freq = float(np.mean(sats))
        target = 1.0 - 2.0 / n
        sigma = math.sqrt(target * (1 - target) / plan.trials)
        summary.append([plan.fixture, n, plan.trials, float(np.median(errs)), freq, target,
                        target - 3 * sigma, freq >= target - 3 * sigma])
    return _write(plan, out_dir, cols, rows,
                  ["fixture", "n", "trials", "median_max_error", "satisfaction_rate",
                   "target_rate", "target_minus_3sigma", "ok"], summary)


# ----------------------------------------------------------- dimension

def run_dimension_error(plan: ExperimentPlan, out_dir) -> List[Path]:
    ref = reference_dimension(plan.spec)
    if ref is None:
        raise UnsupportedOracle("fixture has no reference dimension")
    cols = ["fixture", "n", "seed", "rho", "dim_hat", "reference", "abs_error", "radius",
            "cov_estimate", "method"]
    rows, summary = [], []
    prev = None
    for n in plan.n_list:
        errs = []
        for s in plan.seeds():
            _, A = sample_trial(plan, n, s)
            d = estimate_dimension(estimate_distances(A), plan.D_cap, plan.c, plan.mode)
            e = abs(d.value - ref)
            errs.append(e)
            rows.append([plan.fixture, n, s, plan.rho, d.value, ref, e, d.radius_used,
                         d.cov_estimate, d.method])
        med = float(np.median(errs))
        summary.append([plan.fixture, n, plan.trials, med, prev is None or med <= prev])
        prev = med
    return _write(plan, out_dir, cols, rows,
                  ["fixture", "n", "trials", "median_abs_error", "nonincreasing"], summary)


# ---------------------------------------------------------------- test

def null_holds(spec: GraphonSpec, K: int, eps: float) -> bool:
    """Whether the oracle packing number at ``eps`` is at most ``K``."""
    if not spec.finite:
        raise UnsupportedOracle("test error rates need a finite latent space")
    live = np.flatnonzero(spec.weights > 0)
    R = community_distance_matrix(spec)[np.ix_(live, live)]
    return exact_packing_number(R, eps, exact_threshold=max(16, len(live))).size <= K


def run_test_errors(plan: ExperimentPlan, out_dir) -> List[Path]:
    cfg = TestConfig(plan.K, plan.eps)
    null = null_holds(plan.spec, plan.K, plan.eps)
    cols = ["fixture", "n", "seed", "rho", "K", "eps", "eps_hat", "statistic", "decision"]
    rows, summary = [], []
    for n in plan.n_list:
        wrong = 0
        for s in plan.seeds():
            _, A = sample_trial(plan, n, s)
            res = run_packing_test(A, cfg)
            wrong += res.rejected if null else not res.rejected
            rows.append([plan.fixture, n, s, plan.rho, plan.K, plan.eps, res.eps_hat,
                         res.statistic, res.decision])
        rate = wrong / plan.trials
        if null:
            eta, beta, member = 0.0, 0.0, False
            ceiling = 2.0 / n
        else:
            eta, beta, member = check_w_eta_beta(plan.spec, plan.K, plan.eps, n)
            ceiling = type_ii_ceiling(n, plan.K, beta) if member else float("nan")
        sigma = math.sqrt(ceiling * (1 - ceiling) / plan.trials) if ceiling == ceiling else float("nan")
        summary.append([plan.fixture, n, plan.trials, "null" if null else "alternative",
                        "type_I" if null else "type_II", rate, ceiling, ceiling + 3 * sigma,
                        member, beta, bool(rate <= ceiling + 3 * sigma)])
    return _write(plan, out_dir, cols, rows,
                  ["fixture", "n", "trials", "hypothesis", "error_kind", "error_rate",
                   "ceiling", "ceiling_plus_3sigma", "class_member", "beta", "ok"], summary)


# ------------------------------------------------------------- figure

def run_figure1(plan: ExperimentPlan, out_dir) -> List[Path]:
    grid = plan.grid()
    cols = ["fixture", "n", "seed", "curve", "eps", "cov_size", "dim_value"]
    rows, summary = [], []
    for n in plan.n_list:
        for s in plan.seeds():
            lat, A = sample_trial(plan, n, s)
            est = estimate_distances(A)
            curves = (("estimated", est.distances()),
                      ("oracle", true_distance_matrix(plan.spec, lat).values))
            for name, dist in curves:
                sw = sweep_distances(dist, grid, "greedy")
                rows.extend([plan.fixture, n, s, name, e, k, v] for e, k, v in sw.rows())
                p = sw.plateau
                summary.append([plan.fixture, n, s, name] + (
                    [p.start_eps, p.end_eps, p.mean] if p else ["", "", ""]))
    return _write(plan, out_dir, cols, rows,
                  ["fixture", "n", "seed", "curve", "plateau_start_eps", "plateau_end_eps",
                   "plateau_mean"], summary)


# --------------------------------------------------------------- output

def _write(plan, out_dir, cols, rows, summary_cols, summary) -> List[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    main = out / f"{plan.kind}.csv"
    summ = out / f"{plan.kind}_summary.csv"
    write_csv(main, cols, rows)
    write_csv(summ, summary_cols, summary)
    return [main, summ]


RUNNERS = {"distance_error": run_distance_error, "dimension_error": run_dimension_error,
           "test_errors": run_test_errors, "figure1": run_figure1}


def run_plan(plan: ExperimentPlan, out_dir) -> List[Path]:
    """Run a plan and write its CSVs plus ``manifest.txt``."""
    import numba
    import scipy
    start = time.perf_counter()
    paths = RUNNERS[plan.kind](plan, out_dir)
    wall = time.perf_counter() - start
    manifest = Path(out_dir) / "manifest.txt"
    lines = [
        f"kind = {plan.kind}",
        f"fixture = {plan.fixture}",
        f"n_list = {', '.join(map(str, plan.n_list))}",
        f"trials = {plan.trials}",
        f"seeds = {plan.seed}..{plan.seed + plan.trials - 1}",
        f"rho = {plan.rho!r}", f"D_cap = {plan.D_cap!r}", f"c = {plan.c!r}",
        f"eps = {plan.eps!r}", f"K = {plan.K}", f"mode = {plan.mode}",
        f"outputs = {', '.join(p.name for p in paths)}",
        f"graphon_complexity = {__version__}", f"python = {platform.python_version()}",
        f"numpy = {np.__version__}", f"scipy = {scipy.__version__}",
        f"numba = {numba.__version__}",
        "spec:",
        *("    " + l for l in dump_spec(plan.spec).splitlines()),
        f"wall_time_seconds = {wall:.3f}",
    ]
    manifest.write_text("\n".join(lines) + "\n")
    return paths + [manifest]
