"""Command-line front end.

Subcommands: generate (build + serialize a network), sweep (Monte Carlo
routing experiments to CSV/JSON, optionally with figures), bounds
(closed-form bound values), predict (mean-path ratio between two
exponents), ingest (fit the power-law exponent to external edge data),
distribution (total-ability histogram of the diversified lattice).

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from . import bounds as bnd
from . import harness, models
from .core import DIVERSIFIED, UNIFIED, ModelConfig

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=[UNIFIED, DIVERSIFIED], required=True)
    p.add_argument("--n", type=int, help="expert count (unified)")
    p.add_argument("--h", type=int, help="row count (unified)")
    p.add_argument("--m", type=int, help="number of areas (diversified)")
    p.add_argument("--lambda", dest="lam", type=int, help="max per-area level (diversified)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-long-range", action="store_true",
                   help="build the substrate only (the r -> infinity limit)")


def _config_from_args(args, k: int = 1, r: float = 0.0) -> ModelConfig:
    if args.model == UNIFIED:
        if args.n is None or args.h is None:
            raise ValueError("unified model requires --n and --h")
        return ModelConfig.unified(args.n, args.h, k=k, r=r, seed=args.seed,
                                   no_long_range=args.no_long_range)
    if args.m is None or args.lam is None:
        raise ValueError("diversified model requires --m and --lambda")
    return ModelConfig.diversified(args.m, args.lam, k=k, r=r, seed=args.seed,
                                   no_long_range=args.no_long_range)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    config = _config_from_args(args, k=args.k, r=args.r)
    net = models.build_network(config)
    models.save_network(net, args.output)
    if args.csv_dir is not None:
        csv_dir = Path(args.csv_dir)
        csv_dir.mkdir(parents=True, exist_ok=True)
        _export_network_csv(net, csv_dir)
    n_local = sum(len(c) for c in net.local_contacts)
    n_long = sum(len(c) for c in net.long_range)
    print(f"n={net.n} local_contacts={n_local} long_range_contacts={n_long}")
    print(f"wrote {args.output}")
    return EXIT_OK


def _export_network_csv(net, csv_dir: Path) -> None:
    m = net.config.m
    header = "id," + ",".join(f"e_{i}" for i in range(1, m + 1))
    lines = [header]
    for u, vec in enumerate(net.experts):
        lines.append(",".join(str(x) for x in (u, *vec)))
    (csv_dir / "experts.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    lines = ["src_id,dst_id"]
    for u, ws in enumerate(net.long_range):
        for w in ws:
            lines.append(f"{u},{w}")
    (csv_dir / "edges.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_sweep(args) -> int:
    base = _config_from_args(args)
    reports = []
    for c in args.c:
        point = harness.SweepPoint(
            config=base, c=c, realizations=args.realizations, trials=args.trials
        )
        reports.extend(
            harness.run_sweep(point, args.r, args.k, threads=args.threads,
                              bin_width=args.bin_width)
        )
    out = Path(args.output)
    if args.format == "json":
        out.write_text(harness.reports_to_json(reports), encoding="utf-8")
    else:
        out.write_text(harness.reports_to_csv(reports), encoding="utf-8")
    for rep in reports:
        print(f"r={rep.r} k={rep.k} c={rep.c} mean_L={rep.mean_hops:.3f} "
              f"stderr={rep.stderr_hops:.3f} max_L={rep.max_hops}")
    print(f"wrote {out}")
    if args.histogram is not None:
        merged = _merge_histograms(reports, args.bin_width)
        Path(args.histogram).write_text(harness.histogram_to_csv(merged), encoding="utf-8")
        print(f"wrote {args.histogram}")
    if args.plot is not None:
        from . import plotting

        plotting.plot_sweep(reports, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


def _merge_histograms(reports, bin_width):
    counts: list[float] = []
    for rep in reports:
        weight = rep.trials  # proportional merge; forwards per trial vary little
        for i, (_, _, p) in enumerate(rep.histogram):
            if i >= len(counts):
                counts.extend([0.0] * (i + 1 - len(counts)))
            counts[i] += p * weight
    total = sum(counts)
    if total == 0:
        return ()
    return tuple(
        (i * bin_width, (i + 1) * bin_width, c / total) for i, c in enumerate(counts)
    )


def cmd_bounds(args) -> int:
    lines = ["model,n,h_or_m,k,r,bound,value"]
    for r in args.r:
        rows = []
        if args.model == UNIFIED:
            config = ModelConfig.unified(args.n, args.h, k=args.k, r=max(r, 0.0))
            hm = args.h
            if 0 <= r <= 1:
                rows.append(("upper", bnd.upper_unified(args.n, args.h, r, args.explicit_constants)))
            if r > 1:
                rows.append(("lower", bnd.lower_unified(args.n, args.h, args.k, r,
                                                        args.explicit_constants)))
        else:
            config = ModelConfig.diversified(args.m, args.lam, k=args.k, r=max(r, 0.0))
            hm = args.m
            if 0 <= r <= 1:
                rows.append(("upper", bnd.upper_diversified(config.n, args.m, r,
                                                            args.explicit_constants)))
            if r > 1:
                rows.append(("lower", bnd.lower_diversified(config.n, args.m, args.k, r,
                                                            args.explicit_constants)))
        rows.append(("cap", float(bnd.path_cap(config))))
        for name, value in rows:
            lines.append(f"{args.model},{config.n},{hm},{args.k},{r!r},{name},{value!r}")
    text = "\n".join(lines) + "\n"
    if args.output is not None:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_predict(args) -> int:
    ratio = bnd.predict_ratio(args.n, args.m, args.k, args.r1, args.r2)
    # truncate, matching how such ratios are conventionally tabulated
    print(f"{math.floor(ratio * 100) / 100:.2f}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    experts, errors = _read_experts_csv(args.experts)
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return EXIT_USAGE
    edges, errors = _read_edges_csv(args.edges, experts)
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return EXIT_USAGE
    if not edges:
        print(f"{args.edges}: no edges", file=sys.stderr)
        return EXIT_USAGE
    fitted = bnd.fit_r(edges, experts)
    print(f"n={len(experts)} m={len(experts[0])} edges={len(edges)} fitted_r={fitted:.3f}")
    return EXIT_OK


def _read_experts_csv(path):
    experts, errors = [], []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or header[0].strip() != "id":
            errors.append(f"{path}:1: expected header 'id,e_1,...,e_m'")
            return [], errors
        m = len(header) - 1
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                ident = int(row[0])
                vec = tuple(int(x) for x in row[1:])
            except ValueError:
                errors.append(f"{path}:{lineno}: malformed row")
                continue
            if ident != len(experts):
                errors.append(f"{path}:{lineno}: ids must be dense and in order")
                continue
            if len(vec) != m or any(x < 0 for x in vec):
                errors.append(f"{path}:{lineno}: expected {m} non-negative entries")
                continue
            experts.append(vec)
    if not experts and not errors:
        errors.append(f"{path}: no experts")
    return experts, errors


def _read_edges_csv(path, experts):
    edges, errors = [], []
    n = len(experts)
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            errors.append(f"{path}:1: empty file")
            return [], errors
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                src, dst = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                errors.append(f"{path}:{lineno}: malformed row")
                continue
            if not (0 <= src < n and 0 <= dst < n):
                errors.append(f"{path}:{lineno}: dangling expert id")
                continue
            if all(b <= a for a, b in zip(experts[src], experts[dst])):
                errors.append(f"{path}:{lineno}: edge {src}->{dst} violates candidate set")
                continue
            edges.append((src, dst))
    return edges, errors


def cmd_distribution(args) -> int:
    hist = models.ability_histogram(args.m, args.lam)
    lines = ["phi,count"]
    for phi in sorted(hist.counts):
        lines.append(f"{phi},{hist.counts[phi]}")
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    mean = models.expected_ability(args.m, args.lam**args.m)
    print(f"n={args.lam ** args.m} expected_ability={mean:.3f}")
    print(f"wrote {args.output}")
    if args.plot is not None:
        from . import plotting

        plotting.plot_distribution(hist, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expertnet",
        description="Decentralized query routing in expert networks: "
                    "models, simulation, and performance bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a network and write it as JSON")
    _add_model_args(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv-dir", help="also export experts.csv and edges.csv here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="Monte Carlo routing sweep over r and k grids")
    _add_model_args(p)
    p.add_argument("--k", type=_int_list, default=[1], help="comma-separated k values")
    p.add_argument("--r", type=_float_list, default=[0.0], help="comma-separated r values")
    p.add_argument("--c", type=_float_list, default=[0.0],
                   help="comma-separated error scaling factors")
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default ${harness.THREADS_ENV} or 1)")
    p.add_argument("--bin-width", type=float, default=harness.DEFAULT_BIN_WIDTH)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--histogram", help="also write the forwarding histogram CSV here")
    p.add_argument("--plot", help="also render the mean path length figure here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="closed-form bound values for a parameter grid")
    p.add_argument("--model", choices=[UNIFIED, DIVERSIFIED], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=_float_list, required=True)
    p.add_argument("--explicit-constants", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("predict", help="predicted mean-path ratio between two exponents")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ingest", help="fit the power-law exponent to external edges")
    p.add_argument("--experts", required=True, help="CSV: id,e_1,...,e_m")
    p.add_argument("--edges", required=True, help="CSV: src_id,dst_id")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("distribution", help="total-ability histogram of a diversified lattice")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--plot", help="also render the distribution figure here")
    p.set_defaults(func=cmd_distribution)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
