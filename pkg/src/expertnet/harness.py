"""Monte Carlo sweep machinery: query generation, trials, aggregation.

A sweep point fixes a model configuration, an error scaling c, and the
trial counts; `run_sweep` crosses it with grids of r and k, building
fresh long-range realizations per network and routing fresh random
queries on each.  Results are deterministic functions of the master seed
regardless of execution order (realization streams are keyed by grid and
realization indices).

Bulk trials use the per-area successor tables from `routing` instead of
re-running the contact scan at every hop; the two are equivalent because
the greedy choice does not depend on the perceived difficulty (see
`routing.area_successors`).  For the same reason, reports for c > 0
coincide with exact-mode reports on the same seeds.
"""

from __future__ import annotations

import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bounds import path_cap
from .core import DIVERSIFIED, ExpertNetwork, ModelConfig, Query, l1_norm
from .models import InversePowerSampler, attach_long_range, build_substrate
from .routing import ErrorModel, RouteResult, route

DEFAULT_BIN_WIDTH = 0.1
THREADS_ENV = "EXPERTNET_THREADS"


class CapViolationError(RuntimeError):
    """A routing path exceeded the structural hard cap (n/h or m-th root of n)."""


@dataclass(frozen=True)
class SweepPoint:
    config: ModelConfig
    c: float = 0.0
    realizations: int = 100
    trials: int = 500

    def __post_init__(self) -> None:
        if self.realizations < 1 or self.trials < 1:
            raise ValueError("realizations and trials must be >= 1")
        if self.c < 0:
            raise ValueError("c must be >= 0")


@dataclass(frozen=True)
class SweepReport:
    """Aggregate over all realizations and trials of one (r, k) grid cell."""

    kind: str
    n: int
    h_or_m: int
    k: int
    r: float
    c: float
    mean_hops: float
    stderr_hops: float
    max_hops: int
    trials: int
    seed: int
    failures: int = 0
    # right-open bins (lo, hi, probability); probabilities sum to 1
    histogram: tuple[tuple[float, float, float], ...] = ()


def gen_query(config: ModelConfig, rng: np.random.Generator) -> Query:
    """Uniform random query: area over 1..m, difficulty over 1..max skill."""
    area = int(rng.integers(1, config.m + 1))
    tau = int(rng.integers(1, config.max_skill + 1))
    return Query(area=area, tau=tau)


def _local_best(net: ExpertNetwork, n_areas: int) -> list[np.ndarray]:
    """Per area: id of each expert's best local contact (max skill, min id)."""
    best = [np.empty(net.n, dtype=np.int64) for _ in range(n_areas)]
    for a in range(n_areas):
        for u in range(net.n):
            bs, bi = -1, -1
            for w in net.local_contacts[u]:
                s = net.experts[w][a]
                if s > bs or (s == bs and w < bi):
                    bs, bi = s, w
            best[a][u] = bi
    return best


def _histogram_from_counts(
    bin_counts: list[int], bin_width: float
) -> tuple[tuple[float, float, float], ...]:
    total = sum(bin_counts)
    if total == 0:
        return ()
    return tuple(
        (i * bin_width, (i + 1) * bin_width, c / total) for i, c in enumerate(bin_counts)
    )


def run_point(
    point: SweepPoint,
    r: float,
    k: int,
    r_idx: int = 0,
    k_idx: int = 0,
    bin_width: float = DEFAULT_BIN_WIDTH,
) -> SweepReport:
    """All realizations and trials of a single (r, k) cell."""
    cfg = replace(point.config, r=r, k=k)
    substrate = build_substrate(cfg)
    skills = substrate.skill_matrix()
    n, m = skills.shape
    cap = path_cap(cfg)
    tau_max = cfg.max_skill
    master = cfg.seed

    sampler = None if cfg.no_long_range else InversePowerSampler(skills, r)
    lb_ids = _local_best(substrate, m)
    # target ordering key: higher skill first, then smaller id
    keys = [skills[:, a] * (n + 1) + (n - 1 - np.arange(n)) for a in range(m)]
    sk_lists = [skills[:, a].tolist() for a in range(m)]
    l1_all = skills.sum(axis=1).astype(np.float64)

    hops_all = np.empty(point.realizations * point.trials, dtype=np.int64)
    filled = 0
    failures = 0
    bin_counts: list[int] = []

    for real_idx in range(point.realizations):
        ss = np.random.SeedSequence([master, r_idx, k_idx, real_idx])
        rng = np.random.default_rng(ss)
        try:
            if sampler is None:
                lr = np.empty((n, 0), dtype=np.int64)
            else:
                draws = sampler.draw_all(k, rng)
                lr = np.full((n, k), -1, dtype=np.int64)
                for u, ws in enumerate(draws):
                    lr[u, : len(ws)] = ws
        except Exception:
            failures += point.trials
            continue

        succ_lists, bins_lists = [], []
        max_bin = -1
        for a in range(m):
            targets = np.column_stack([lb_ids[a], lr])
            tkeys = np.where(targets >= 0, keys[a][np.maximum(targets, 0)], -1)
            succ = targets[np.arange(n), tkeys.argmax(axis=1)]
            rel = np.abs(skills[succ] - skills).sum(axis=1) / l1_all
            bins = np.floor_divide(rel, bin_width).astype(np.int64)
            max_bin = max(max_bin, int(bins.max()))
            succ_lists.append(succ.tolist())
            bins_lists.append(bins.tolist())
        if max_bin >= len(bin_counts):
            bin_counts.extend([0] * (max_bin + 1 - len(bin_counts)))

        areas = rng.integers(0, m, point.trials).tolist()
        taus = rng.integers(1, tau_max + 1, point.trials).tolist()
        starts = rng.integers(0, n, point.trials).tolist()
        # c > 0 changes nothing here: the forwarding choice is independent of
        # the perceived difficulty, so paths match exact mode hop for hop.
        for a, tau, u in zip(areas, taus, starts):
            sk = sk_lists[a]
            su = succ_lists[a]
            bn = bins_lists[a]
            hops = 0
            while sk[u] < tau:
                bin_counts[bn[u]] += 1
                u = su[u]
                hops += 1
                if hops > cap:
                    raise CapViolationError(
                        f"path exceeded cap {cap} (model={cfg.kind}, r={r}, k={k})"
                    )
            hops_all[filled] = hops
            filled += 1

    hops_all = hops_all[:filled]
    if filled == 0:
        raise RuntimeError("all trials failed")
    mean = float(hops_all.mean())
    sd = float(hops_all.std(ddof=1)) if filled > 1 else 0.0
    return SweepReport(
        kind=cfg.kind,
        n=cfg.n,
        h_or_m=cfg.h if cfg.kind != DIVERSIFIED else cfg.m,  # type: ignore[arg-type]
        k=k,
        r=r,
        c=point.c,
        mean_hops=mean,
        stderr_hops=sd / np.sqrt(filled),
        max_hops=int(hops_all.max()),
        trials=filled,
        seed=master,
        failures=failures,
        histogram=_histogram_from_counts(bin_counts, bin_width),
    )


def _run_point_args(args) -> SweepReport:
    return run_point(*args)


def run_sweep(
    point: SweepPoint,
    r_grid: list[float],
    k_grid: list[int],
    threads: int | None = None,
    bin_width: float = DEFAULT_BIN_WIDTH,
) -> list[SweepReport]:
    """One SweepReport per (r, k) cell, in grid order."""
    if not r_grid or not k_grid:
        raise ValueError("r_grid and k_grid must be non-empty")
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    jobs = [
        (point, r, k, ri, ki, bin_width)
        for ri, r in enumerate(r_grid)
        for ki, k in enumerate(k_grid)
    ]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_point_args, jobs))
    return [_run_point_args(j) for j in jobs]


def collect_routes(
    point: SweepPoint, seed_offset: int = 0
) -> tuple[list[RouteResult], ExpertNetwork]:
    """Full route objects (paths included) for one sweep point's config.

    Slower than run_point since it keeps every path; meant for forwarding
    histograms and route-level inspection.  Returns the last realization's
    network alongside the routes.
    """
    cfg = point.config
    substrate = build_substrate(cfg)
    sampler = None if cfg.no_long_range else InversePowerSampler(substrate.skill_matrix(), cfg.r)
    error = ErrorModel(point.c) if point.c > 0 else None
    routes: list[RouteResult] = []
    net = substrate
    for real_idx in range(point.realizations):
        ss = np.random.SeedSequence([cfg.seed, seed_offset, real_idx])
        rng = np.random.default_rng(ss)
        lr_seed = int(rng.integers(0, 2**63 - 1))
        if sampler is not None:
            net = attach_long_range(substrate, lr_seed, sampler)
        for _ in range(point.trials):
            query = gen_query(cfg, rng)
            start = int(rng.integers(0, cfg.n))
            routes.append(route(query, start, net, error, rng))
    return routes, net


def forwarding_histogram(
    routes: list[RouteResult],
    net: ExpertNetwork,
    bin_width: float = DEFAULT_BIN_WIDTH,
) -> tuple[tuple[float, float, float], ...]:
    """Empirical distribution of relative expertise difference per forward.

    For every step u -> w across all routes, bins
    ||e(w) - e(u)||_1 / ||e(u)||_1 into right-open bins of the given width
    and normalizes by the total number of forwards.
    """
    counts: list[int] = []
    for res in routes:
        for u, w in zip(res.path, res.path[1:]):
            eu, ew = net.experts[u], net.experts[w]
            rel = sum(abs(a - b) for a, b in zip(eu, ew)) / l1_norm(eu)
            b = int(rel // bin_width)
            if b >= len(counts):
                counts.extend([0] * (b + 1 - len(counts)))
            counts[b] += 1
    return _histogram_from_counts(counts, bin_width)


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("model", "n", "h_or_m", "k", "r", "c", "mean_L", "stderr_L", "max_L", "trials")


def reports_to_csv(reports: list[SweepReport]) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for rep in reports:
        row = (
            rep.kind, rep.n, rep.h_or_m, rep.k, repr(float(rep.r)), repr(float(rep.c)),
            repr(float(rep.mean_hops)), repr(float(rep.stderr_hops)),
            rep.max_hops, rep.trials,
        )
        out.write(",".join(str(x) for x in row) + "\n")
    return out.getvalue()


def reports_to_json(reports: list[SweepReport]) -> str:
    payload = [
        {
            "model": rep.kind,
            "n": rep.n,
            "h_or_m": rep.h_or_m,
            "k": rep.k,
            "r": rep.r,
            "c": rep.c,
            "mean_L": rep.mean_hops,
            "stderr_L": float(rep.stderr_hops),
            "max_L": rep.max_hops,
            "trials": rep.trials,
            "seed": rep.seed,
            "failures": rep.failures,
            "histogram": [list(b) for b in rep.histogram],
        }
        for rep in reports
    ]
    return json.dumps(payload, indent=2) + "\n"


def histogram_to_csv(histogram: tuple[tuple[float, float, float], ...]) -> str:
    lines = ["bin_lo,bin_hi,probability"]
    for lo, hi, p in histogram:
        lines.append(f"{lo!r},{hi!r},{p!r}")
    return "\n".join(lines) + "\n"
