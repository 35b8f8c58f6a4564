"""Command-line pipeline: ingest -> fit -> score -> evaluate -> recommend -> export.

Exit codes: 0 ok, 2 input error, 3 numerical abort, 4 insufficient overlap
for a metric. All randomness flows from the --seed flag; repeated runs with
identical inputs write byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, baselines, fileio, pipeline
from .datamodel import (MODE_FOLLOW, MODE_RAW, MODE_RETWEET, build_engagement_matrix,
                        build_interaction_matrix)
from .errors import (DegenerateSeriesError, IdeofactorError, InputError,
                     InsufficientOverlapError, NumericalAbort, UnplaceableError)
from .server import make_server
from .solver import SolverConfig, fit

DEFAULT_GRID = (0.0, 0.01, 0.1, 1.0, 10.0, 100.0)
_EDGE_MODES = {"retweet": MODE_RETWEET, "follow": MODE_FOLLOW, "raw": MODE_RAW}

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_OVERLAP = 4


def _read_edges(path: str, edge_mode: str):
    if edge_mode == "follow":
        return fileio.read_follow_file(path)
    return fileio.read_edge_file(path)


def _load_matrices(args, need_edges: bool, need_engagement: bool):
    """Build A and C over one shared, deterministic user universe."""
    records = fileio.read_engagement_file(args.engagement) if args.engagement else []
    edges = _read_edges(args.edges, args.edge_mode) if args.edges else []
    if need_edges and not args.edges:
        raise InputError(f"--edges is required for method {args.method!r}")
    if need_engagement and not args.engagement:
        raise InputError(f"--engagement is required for method {args.method!r}")

    order: dict[str, int] = {}
    for user, _, _ in records:
        order.setdefault(user, len(order))
    for src, dst, _ in edges:
        order.setdefault(src, len(order))
        if args.edge_mode != "follow":
            order.setdefault(dst, len(order))
    users = tuple(order)
    if not users:
        raise InputError("no users found in the input files")

    A = build_interaction_matrix(edges, _EDGE_MODES[args.edge_mode], users=users) \
        if args.edges else None
    C = build_engagement_matrix(records, users=users) if args.engagement else None
    return A, C


def _config_from(args) -> SolverConfig:
    return SolverConfig(k=args.k, alpha=args.alpha, beta=args.beta,
                        max_iters=args.max_iters, rel_tol=args.rel_tol,
                        seed=args.seed, eps=args.eps)


def _fit_bundle(args) -> fileio.FactorBundle:
    method = args.method
    config = _config_from(args)
    if method in ("ifd", "ifd-ngr"):
        A, C = _load_matrices(args, need_edges=True, need_engagement=True)
        if method == "ifd":
            factors, report = fit(A, C, config)
            trace = report.objective_trace
        else:
            result = baselines.fit_ifd_ngr(A, C, config.k, config)
            factors, trace = result.factor_set, result.objective_trace
        return fileio.bundle_from_fit(method, factors, config, trace,
                                      A.user_ids, C.source_ids)

    if method == "nmf-symm":
        if args.symm_side == "users":
            A, _ = _load_matrices(args, need_edges=True, need_engagement=False)
            result = baselines.fit_nmf_symm(A, config.k, config)
            return fileio.FactorBundle(
                method=method, k=config.k, U=result.row_factors, V=None,
                Hu=result.mid_factor, Hs=None, user_ids=A.user_ids, source_ids=None,
                config=config.to_dict(), objective_trace=result.objective_trace)
        _, C = _load_matrices(args, need_edges=False, need_engagement=True)
        gram = C.entries.T @ C.entries  # source-source relationship matrix
        result = baselines.fit_nmf_symm(gram, config.k, config)
        return fileio.FactorBundle(
            method=method, k=config.k, U=None, V=result.row_factors,
            Hu=None, Hs=result.mid_factor, user_ids=None, source_ids=C.source_ids,
            config=config.to_dict(), objective_trace=result.objective_trace)

    if method in ("onmtf", "dmcc"):
        _, C = _load_matrices(args, need_edges=False, need_engagement=True)
        if method == "onmtf":
            result = baselines.fit_onmtf(C, config.k, config)
        else:
            result = baselines.fit_dmcc(C, config.k, config.alpha, config.beta, config)
        return fileio.FactorBundle(
            method=method, k=config.k, U=result.row_factors, V=result.col_factors,
            Hu=None, Hs=result.mid_factor, user_ids=C.user_ids, source_ids=C.source_ids,
            config=config.to_dict(), objective_trace=result.objective_trace)

    raise InputError(f"unknown method {method!r}")


def _write_manifest(outdir: Path, args, inputs: list[str], outputs: list[str],
                    config: dict, started: float) -> None:
    fileio.dump_json({
        "tool_version": __version__,
        "command": list(sys.argv[1:]) if sys.argv else [],
        "inputs": {p: fileio.sha256_file(p) for p in inputs if p},
        "method": getattr(args, "method", None),
        "config": config,
        "outputs": sorted(outputs),
        "wall_clock_s": time.time() - started,
    }, outdir / "manifest.json")


def cmd_fit(args) -> int:
    started = time.time()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    bundle = _fit_bundle(args)
    factors_path = outdir / "factors.json"
    ids_path = outdir / "ids.json"
    fileio.save_factors(factors_path, bundle)
    fileio.write_id_manifest(ids_path, bundle.user_ids, bundle.source_ids)
    _write_manifest(outdir, args, [args.edges, args.engagement],
                    [str(factors_path), str(ids_path)], bundle.config, started)
    print(f"wrote {factors_path}")
    return EXIT_OK


def cmd_score(args) -> int:
    bundle = fileio.load_factors(args.factors)
    anchors = fileio.read_score_csv(args.truth) if args.truth else None
    users, sources, report = pipeline.score_bundle(bundle, anchors, normalize=args.normalize)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    scores_path = outdir / "scores.csv"
    fileio.write_scores_table(scores_path, list(users) + list(sources))
    fileio.dump_json({
        "flipped": report.flipped,
        "anchor_count": report.anchor_count,
        "anchor_correlation": report.anchor_correlation,
        "axis_orientation": "anchored" if report.anchor_correlation is not None else "arbitrary",
    }, outdir / "orientation.json")
    print(f"wrote {scores_path}")
    return EXIT_OK


def cmd_eval(args) -> int:
    bundle = fileio.load_factors(args.factors)
    truth = fileio.read_score_csv(args.truth)
    pop_truth = fileio.read_score_csv(args.popularity_truth) if args.popularity_truth else None
    report = pipeline.evaluation_report(bundle, args.target, truth, pop_truth)
    if args.out:
        fileio.dump_json(report, args.out)
        print(f"wrote {args.out}")
    else:
        fileio.dump_json_stdout(report)
    return EXIT_OK


def cmd_recommend(args) -> int:
    bundle = fileio.load_factors(args.factors)
    anchors = fileio.read_score_csv(args.truth) if args.truth else None
    records = fileio.read_engagement_file(args.engagement)
    ctx = pipeline.build_space_context(bundle, records, anchors)
    doc = pipeline.recommendation_document(
        ctx, args.user, theta=args.theta, delta=args.delta, count=args.count,
        seed=args.seed, exclude_consumed=args.exclude_consumed)
    if args.out:
        fileio.dump_json(doc, args.out)
        print(f"wrote {args.out}")
    else:
        fileio.dump_json_stdout(doc)
    return EXIT_OK


def cmd_export_space(args) -> int:
    bundle = fileio.load_factors(args.factors)
    anchors = fileio.read_score_csv(args.truth) if args.truth else None
    records = fileio.read_engagement_file(args.engagement)
    ctx = pipeline.build_space_context(bundle, records, anchors)
    doc = pipeline.space_document(ctx)
    if args.out:
        fileio.dump_json(doc, args.out)
        print(f"wrote {args.out}")
    if args.serve is not None:
        server = make_server(ctx, port=args.serve)
        host, port = server.server_address[:2]
        print(f"serving read-only space on http://{host}:{port} (Ctrl-C to stop)")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            server.server_close()
    elif not args.out:
        fileio.dump_json_stdout(doc)
    return EXIT_OK


def _thread_cap(n_cells: int) -> int:
    cap = os.environ.get("IDEOFACTOR_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n_cells, limit))


def cmd_gridsearch(args) -> int:
    started = time.time()
    if not args.truth:
        raise InputError("grid search needs --truth: objective-based selection is "
                         "degenerate (alpha = beta = 0 trivially minimizes it)")
    truth = fileio.read_score_csv(args.truth)
    A, C = _load_matrices(args, need_edges=True, need_engagement=True)
    alphas = _parse_grid(args.alpha_grid)
    betas = _parse_grid(args.beta_grid)
    cells = [(a, b) for a in alphas for b in betas]

    def run_cell(cell):
        a, b = cell
        config = SolverConfig(k=args.k, alpha=a, beta=b, max_iters=args.max_iters,
                              rel_tol=args.rel_tol, seed=args.seed, eps=args.eps)
        factors, report = fit(A, C, config)
        bundle = fileio.bundle_from_fit("ifd", factors, config, report.objective_trace,
                                        A.user_ids, C.source_ids)
        evaluation = pipeline.evaluation_report(bundle, "users", truth, strict_corr=False)
        return {
            "alpha": a, "beta": b,
            "purity": evaluation["purity"], "ari": evaluation["ari"],
            "ami": evaluation["ami"], "nmi": evaluation["nmi"],
            "corr_i": evaluation["corr_i"],
            "objective": float(report.final_objective),
            "iterations": report.iterations_run,
        }

    with ThreadPoolExecutor(max_workers=_thread_cap(len(cells))) as pool:
        rows = list(pool.map(run_cell, cells))
    rows.sort(key=lambda r: (r["alpha"], r["beta"]))

    def selection_key(r):
        corr = r["corr_i"] if r["corr_i"] is not None else -np.inf
        return (-r["purity"], -corr, r["alpha"] + r["beta"], r["alpha"], r["beta"])

    best = min(rows, key=selection_key)
    report = {
        "grid": rows,
        "best": {"alpha": best["alpha"], "beta": best["beta"]},
        "selection": "max purity, then max corr_i, then min alpha+beta",
    }
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    report_path = outdir / "gridsearch.json"
    fileio.dump_json(report, report_path)
    _write_manifest(outdir, args, [args.edges, args.engagement, args.truth],
                    [str(report_path)],
                    {"k": args.k, "seed": args.seed, "alphas": list(alphas),
                     "betas": list(betas)}, started)
    print(f"wrote {report_path}; best alpha={best['alpha']} beta={best['beta']}")
    return EXIT_OK


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise InputError(f"unparseable grid list {text!r}")
    if not values:
        raise InputError("grid must contain at least one value")
    return values


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-12)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", help="edge-list (or follow-list) file")
    p.add_argument("--edge-mode", choices=sorted(_EDGE_MODES), default="retweet")
    p.add_argument("--engagement", help="user/source/count file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ideofactor")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="factorize the input matrices")
    p.add_argument("--method", choices=["ifd", "ifd-ngr", "nmf-symm", "onmtf", "dmcc"],
                   default="ifd")
    p.add_argument("--symm-side", choices=["users", "sources"], default="users",
                   help="which side nmf-symm clusters (sources uses the C^T C gram)")
    _add_input_flags(p)
    _add_solver_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gridsearch", help="pick alpha/beta against validation labels")
    _add_input_flags(p)
    _add_solver_flags(p)
    p.add_argument("--truth", help="validation id,score file (required)")
    p.add_argument("--alpha-grid", default=",".join(str(v) for v in DEFAULT_GRID))
    p.add_argument("--beta-grid", default=",".join(str(v) for v in DEFAULT_GRID))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gridsearch)

    p = sub.add_parser("score", help="turn factors into score tables")
    p.add_argument("--factors", required=True)
    p.add_argument("--truth", help="anchor scores used to orient the axes")
    p.add_argument("--normalize", action="store_true",
                   help="unit-normalize latent columns before scoring")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="compare factors against ground truth")
    p.add_argument("--factors", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--target", choices=["users", "sources"], default="users")
    p.add_argument("--popularity-truth")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("recommend", help="sample tolerance-box recommendations")
    p.add_argument("--factors", required=True)
    p.add_argument("--engagement", required=True)
    p.add_argument("--truth", help="anchor scores used to orient the axes")
    p.add_argument("--user", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exclude-consumed", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("export-space", help="write (and optionally serve) the space JSON")
    p.add_argument("--factors", required=True)
    p.add_argument("--engagement", required=True)
    p.add_argument("--truth", help="anchor scores used to orient the axes")
    p.add_argument("--out")
    p.add_argument("--serve", type=int, metavar="PORT",
                   help="serve GET /space and GET /recommend on this port")
    p.set_defaults(func=cmd_export_space)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InsufficientOverlapError, DegenerateSeriesError, UnplaceableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERLAP
    except NumericalAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IdeofactorError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
