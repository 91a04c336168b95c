"""Command-line entry point: ``cdeval {detect,evaluate,diagnose,filter,generate,report}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bias import DELTA, FILTER_NOTE, THETA_F, FilterConfig, recurrence_filter
from .consensus import TAU_0, THETA_C
from .detection import ALGORITHMS, DetectionConfig
from .graph import load_temporal, save_edge_list, save_partition, save_temporal
from .metrics.functional import SIMILARITY_METRICS
from .pipeline import PipelineConfig, PipelineError, Thresholds, bundle_files, run_pipeline, write_error, write_outputs
from .report import parse, serialize, side_tables
from .synth import PlantedConfig, inject_sporadic_noise, planted_partition

log = logging.getLogger("cdeval")


def _csv_list(text: str) -> tuple[str, ...]:
    items = tuple(x.strip() for x in text.split(",") if x.strip())
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in _csv_list(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _existing(text: str) -> str:
    if not Path(text).is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return text


def _add_input(p: argparse.ArgumentParser, required: bool = True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--graph", type=_existing, metavar="PATH", help="weighted edge list")
    src.add_argument("--temporal", type=_existing, metavar="PATH", help="interaction stream 'u v t'")


def _add_analysis(p: argparse.ArgumentParser):
    _add_input(p)
    p.add_argument("--ground-truth", type=_existing, metavar="PATH", help="partition file 'node label'")
    p.add_argument("--algorithms", type=_csv_list, default=ALGORITHMS, metavar="LIST",
                   help=f"comma-separated subset of {','.join(ALGORITHMS)} (default: all)")
    p.add_argument("--replications", type=int, default=30, metavar="N",
                   help="seeds per non-deterministic algorithm (default: 30)")
    p.add_argument("--seed", type=int, default=0, metavar="S", help="base seed (default: 0)")
    p.add_argument("--min-recurrence", type=int, default=None, metavar="K",
                   help="recurrence filter threshold for --temporal input (diagnose defaults to 2)")
    p.add_argument("--metrics", type=_csv_list, default=SIMILARITY_METRICS, metavar="LIST",
                   help=f"similarity metrics (default: {','.join(SIMILARITY_METRICS)})")
    p.add_argument("--walktrap-steps", type=int, default=4, metavar="T", help="Walktrap walk length (default: 4)")
    p.add_argument("--unweighted", action="store_true", help="ignore edge weights")
    p.add_argument("--theta-c", type=float, default=THETA_C, help=f"consensus NMI threshold (default: {THETA_C})")
    p.add_argument("--theta-f", type=float, default=THETA_F, help=f"ground-truth NMI threshold (default: {THETA_F})")
    p.add_argument("--delta", type=float, default=DELTA, help=f"required NMI gain from filtering (default: {DELTA})")
    p.add_argument("--tau0", type=float, default=TAU_0, help=f"rank-correlation flag threshold (default: {TAU_0})")
    _add_output(p)


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json: report only; csv: report plus CSV side tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdeval", description="Evaluate community detection by crossing structural and functional evidence.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("detect", "run the detection suite"),
        ("evaluate", "detection plus consensus report"),
        ("diagnose", "evaluation plus bias diagnosis (raw vs filtered with --temporal)"),
    ):
        _add_analysis(sub.add_parser(name, help=text, description=text))

    f = sub.add_parser("filter", help="recurrence-filter an interaction stream")
    f.add_argument("--temporal", type=_existing, required=True, metavar="PATH")
    f.add_argument("--min-recurrence", type=int, default=2, metavar="K")
    f.add_argument("--keep-isolated", action="store_true", help="keep nodes left without edges")
    _add_output(f)

    gen = sub.add_parser("generate", help="planted-partition graph, optionally with sporadic noise")
    gen.add_argument("--sizes", type=_sizes, default=(32, 32, 32, 32), metavar="LIST")
    gen.add_argument("--p-in", type=float, default=0.3)
    gen.add_argument("--p-out", type=float, default=0.01)
    gen.add_argument("--w-in", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0, metavar="S")
    gen.add_argument("--noise-rate", type=float, default=0.0, help="noise edges per genuine edge")
    _add_output(gen)

    rep = sub.add_parser("report", help="re-emit tables from an existing report.json")
    rep.add_argument("--report", type=_existing, required=True, metavar="PATH")
    _add_output(rep)
    return parser


def _pipeline_config(args) -> PipelineConfig:
    filt = None
    if args.min_recurrence is not None:
        if args.temporal is None:
            raise ValueError("--min-recurrence needs --temporal input")
        filt = FilterConfig(args.min_recurrence)
    return PipelineConfig(
        graph_path=args.graph,
        temporal_path=args.temporal,
        ground_truth_path=args.ground_truth,
        detection=DetectionConfig(tuple(args.algorithms), args.replications, args.seed, args.walktrap_steps),
        metrics=tuple(args.metrics),
        filter=filt,
        thresholds=Thresholds(args.theta_c, args.theta_f, args.delta, args.tau0),
        out_dir=args.out,
        format=args.format,
        unweighted=args.unweighted,
        command=args.command,
    )


def _analysis(args) -> dict[str, str]:
    try:
        cfg = _pipeline_config(args)
    except ValueError as exc:
        raise PipelineError("config", str(exc)) from exc
    result = run_pipeline(cfg)
    b = result.bundle
    print(f"{b.network.node_count} nodes, {b.network.edge_count} edges, {len(b.runs)} runs")
    if b.consensus is not None:
        print(f"verdict: {b.consensus.verdict} (mean pairwise NMI {b.consensus.mean_pairwise_nmi:.3f})")
        for line in b.consensus.contradictions:
            print(f"  - {line}")
    if b.bias is not None:
        print(f"data bias: {b.bias.data_bias.status}; ground-truth bias: {b.bias.ground_truth_bias.status}; "
              f"method bias: {b.bias.method_bias.status}")
    return bundle_files(b, cfg.format), result.timings


def _filter(args):
    try:
        stream = load_temporal(Path(args.temporal))
        cfg = FilterConfig(args.min_recurrence, not args.keep_isolated)
        g = recurrence_filter(stream, cfg)
    except ValueError as exc:
        raise PipelineError("filter", str(exc)) from exc
    nodes, pairs = stream.pair_counts()
    summary = {
        "events": len(stream),
        "pairs": len(pairs),
        "nodes_before": len(nodes),
        "nodes_after": g.n,
        "edges_after": g.edge_count,
        "min_recurrence": cfg.min_recurrence,
        "drop_isolated": cfg.drop_isolated,
        "note": FILTER_NOTE,
    }
    print(f"kept {g.edge_count} of {len(pairs)} pairs, {g.n} of {len(nodes)} nodes")
    return {"filtered.edges": save_edge_list(g), "filter.json": json.dumps(summary, sort_keys=True, indent=2) + "\n"}, None


def _generate(args):
    try:
        cfg = PlantedConfig(args.sizes, args.p_in, args.p_out, args.w_in, args.seed)
        g, gt = planted_partition(cfg)
        files = {"graph.edges": save_edge_list(g), "ground_truth.txt": save_partition(gt)}
        manifest = {"sizes": list(cfg.sizes), "p_in": cfg.p_in, "p_out": cfg.p_out, "w_in": cfg.w_in,
                    "seed": cfg.seed, "edges": g.edge_count, "noise_rate": args.noise_rate}
        if args.noise_rate > 0:
            noisy, stream = inject_sporadic_noise(g, gt, args.noise_rate, args.seed)
            files["noisy.edges"] = save_edge_list(noisy)
            files["stream.temporal"] = save_temporal(stream)
            manifest["noisy_edges"] = noisy.edge_count
    except ValueError as exc:
        raise PipelineError("generate", str(exc)) from exc
    files["manifest.json"] = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    print(f"{g.n} nodes, {g.edge_count} edges" + (f", {manifest['noisy_edges']} with noise" if args.noise_rate > 0 else ""))
    return files, None


def _report(args):
    try:
        bundle = parse(Path(args.report).read_text(encoding="utf-8"))
    except (ValueError, KeyError, TypeError) as exc:
        raise PipelineError("report", f"unreadable report: {exc}") from exc
    files = side_tables(bundle) if args.format == "csv" else {}
    files["report.json"] = serialize(bundle)
    return files, None


HANDLERS = {"detect": _analysis, "evaluate": _analysis, "diagnose": _analysis,
            "filter": _filter, "generate": _generate, "report": _report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        files, timings = HANDLERS[args.command](args)
        write_outputs(args.out, files, timings)
    except PipelineError as exc:
        write_error(args.out, exc.stage, exc.message)
        print(f"error in {exc.stage}: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        write_error(args.out, "output", str(exc))
        print(f"error writing output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
