"""Load, filter, detect, score, compare, diagnose and write a report bundle."""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__, kernels
from .bias import DELTA, FILTER_NOTE, THETA_F, BiasReport, ControlRecord, FilterConfig, compare_suites, diagnose, recurrence_filter
from .consensus import TAU_0, THETA_C, VERDICT_RULE, ConsensusReport, consensus_verdict, run_id
from .detection import DetectionConfig, DetectionResult, run_suite
from .graph import Graph, Partition, aggregate_temporal, load_edge_list, load_partition, load_temporal, network_stats
from .metrics.functional import LOG_BASE, NMI_NORMALIZATION, SIMILARITY_METRICS
from .metrics.structural import modularity
from .report import QUANTILE_METHOD, SCHEMA_VERSION, ReportBundle, plot_data, run_records, serialize, side_tables

COMMANDS = ("detect", "evaluate", "diagnose")


class PipelineError(RuntimeError):
    """A failure in one pipeline stage; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message


@dataclass(frozen=True)
class Thresholds:
    theta_c: float = THETA_C
    theta_f: float = THETA_F
    delta: float = DELTA
    tau_0: float = TAU_0


@dataclass(frozen=True)
class PipelineConfig:
    graph_path: str | None = None
    temporal_path: str | None = None
    ground_truth_path: str | None = None
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    metrics: tuple[str, ...] = SIMILARITY_METRICS
    filter: FilterConfig | None = None
    thresholds: Thresholds = field(default_factory=Thresholds)
    out_dir: str = "out"
    format: str = "json"
    unweighted: bool = False
    command: str = "evaluate"

    def __post_init__(self):
        if (self.graph_path is None) == (self.temporal_path is None):
            raise ValueError("give exactly one of a graph or a temporal stream")
        if not self.metrics:
            raise ValueError("select at least one metric")
        bad = set(self.metrics) - set(SIMILARITY_METRICS)
        if bad:
            raise ValueError(f"unknown metrics {sorted(bad)}")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.command not in COMMANDS:
            raise ValueError(f"command must be one of {COMMANDS}")

    def describe(self) -> dict:
        """Body-safe summary: no output directory, inputs by name and digest."""
        def source(path):
            if path is None:
                return None
            return {"name": Path(path).name, "sha256": hashlib.sha256(Path(path).read_bytes()).hexdigest()}

        return {
            "graph": source(self.graph_path),
            "temporal": source(self.temporal_path),
            "ground_truth": source(self.ground_truth_path),
            "algorithms": list(self.detection.algorithms),
            "replications": self.detection.replications,
            "seed": self.detection.base_seed,
            "walktrap_steps": self.detection.walktrap_steps,
            "metrics": list(self.metrics),
            "min_recurrence": None if self.filter is None else self.filter.min_recurrence,
            "drop_isolated": None if self.filter is None else self.filter.drop_isolated,
            "thresholds": {
                "theta_c": self.thresholds.theta_c,
                "theta_f": self.thresholds.theta_f,
                "delta": self.thresholds.delta,
                "tau_0": self.thresholds.tau_0,
            },
            "unweighted": self.unweighted,
            "format": self.format,
        }


@dataclass
class PipelineOutput:
    bundle: ReportBundle
    results: list[DetectionResult]
    timings: dict


class _Stage:
    def __init__(self, name: str, timings: dict):
        self.name, self.timings = name, timings

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self.name] = time.perf_counter() - self.start
        if exc is not None and not isinstance(exc, PipelineError):
            raise PipelineError(self.name, f"{type(exc).__name__}: {exc}") from exc
        return False


def _prepare(g: Graph, unweighted: bool) -> Graph:
    return g.binarized() if unweighted else g


def _ground_truth(gt: Partition, g: Graph) -> Partition:
    missing = set(g.nodes) - set(gt.nodes)
    if missing:
        raise ValueError(f"ground truth misses {len(missing)} graph nodes, e.g. {sorted(missing)[:5]}")
    return gt.restrict(g.nodes).aligned(g.nodes)


def run_pipeline(cfg: PipelineConfig, workers: int | None = None) -> PipelineOutput:
    """Run every stage the command needs and return the assembled bundle.

    ``detect`` stops after detection, ``evaluate`` adds the consensus report,
    ``diagnose`` adds the bias report. With a temporal input, ``diagnose``
    runs the raw-vs-filtered control experiment; other commands analyse the
    filtered graph when a filter is configured and the raw aggregate otherwise.

    Raises:
        PipelineError: wrapping any failure with the stage it occurred in.
    """
    timings: dict = {}
    stream = None
    with _Stage("load", timings):
        if cfg.graph_path is not None:
            raw = _prepare(load_edge_list(Path(cfg.graph_path)), cfg.unweighted)
        else:
            stream = load_temporal(Path(cfg.temporal_path))
            raw = _prepare(aggregate_temporal(stream), cfg.unweighted)
        gt_all = None if cfg.ground_truth_path is None else load_partition(Path(cfg.ground_truth_path))

    filtered = None
    with _Stage("filter", timings):
        if stream is not None and (cfg.filter is not None or cfg.command == "diagnose"):
            filtered = _prepare(recurrence_filter(stream, cfg.filter or FilterConfig()), cfg.unweighted)
            if filtered.edge_count == 0:
                raise ValueError("recurrence filter removed every edge")

    control_run = cfg.command == "diagnose" and filtered is not None
    g = raw if control_run or filtered is None else filtered

    with _Stage("ground_truth", timings):
        gt = None if gt_all is None else _ground_truth(gt_all, g)

    with _Stage("detect", timings):
        results = run_suite(g, cfg.detection, workers)
        stats = network_stats(g)

    consensus: ConsensusReport | None = None
    bias: BiasReport | None = None
    control: ControlRecord | None = None
    if cfg.command in ("evaluate", "diagnose"):
        with _Stage("consensus", timings):
            consensus = consensus_verdict(g, results, gt, cfg.metrics, cfg.thresholds.theta_c, cfg.thresholds.tau_0)
    if cfg.command == "diagnose":
        with _Stage("control", timings):
            if control_run:
                if gt is None:
                    raise ValueError("the bias-control experiment needs a ground truth")
                filtered_results = run_suite(filtered, cfg.detection, workers)
                control = compare_suites(raw, filtered, gt_all.restrict(raw.nodes), results, filtered_results,
                                         cfg.thresholds.delta, cfg.metrics)
        with _Stage("diagnose", timings):
            bias = diagnose(consensus, control, cfg.thresholds.theta_c, cfg.thresholds.theta_f)

    with _Stage("report", timings):
        runs = run_records(g, results)
        gt_q = gt_c = None
        if gt is not None:
            gt_q, gt_c = modularity(g, gt), gt.community_count
        metadata = {
            "package_version": __version__,
            "quantile_method": f"{QUANTILE_METHOD} (type 7)",
            "nmi_normalization": NMI_NORMALIZATION,
            "log_base": LOG_BASE,
            "verdict_rule": VERDICT_RULE,
            "verdict_rule_note": "operational rule; the combination of evidence has no canonical formula",
            "filter_note": FILTER_NOTE if filtered is not None else None,
            "analysed_graph": "raw" if g is raw else "filtered",
        }
        bundle = ReportBundle(SCHEMA_VERSION, cfg.command, cfg.describe(), stats, runs,
                              plot_data(runs, gt_q, gt_c), consensus, bias, control, metadata)
        timings["runs"] = {run_id(r): r.wall_time for r in results}
        timings["backend"] = kernels.BACKEND
    return PipelineOutput(bundle, results, timings)


def bundle_files(bundle: ReportBundle, fmt: str) -> dict[str, str]:
    """Every file of the bundle body keyed by relative name; ``report.json`` last."""
    files = side_tables(bundle) if fmt == "csv" else {}
    names = tuple(sorted(files)) + ("timings.json",)
    files["report.json"] = serialize(replace(bundle, files=names))
    return files


def write_outputs(out_dir: str | os.PathLike, files: dict[str, str], timings: dict | None = None) -> list[Path]:
    """Write into a staging directory, then move into place.

    A failure while writing leaves ``out_dir`` without partial outputs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        for name, text in files.items():
            (stage / name).write_text(text, encoding="utf-8")
        if timings is not None:
            (stage / "timings.json").write_text(json.dumps(timings, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        written = []
        for p in sorted(stage.iterdir()):
            target = out / p.name
            os.replace(p, target)
            written.append(target)
        stale = out / "error.json"
        if stale.exists():
            stale.unlink()
        return written
    finally:
        shutil.rmtree(stage, ignore_errors=True)


def write_error(out_dir: str | os.PathLike, stage: str, message: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "error.json"
    path.write_text(json.dumps({"error": {"stage": stage, "message": message}}, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")
    return path
