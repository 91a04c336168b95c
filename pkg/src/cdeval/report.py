"""Report bundle: JSON schema, typed round-trip and plot-data tables.

The JSON body is written with sorted keys and holds no timestamps or wall
times, so two runs with the same inputs give byte-identical files. Timings
go to a separate ``timings.json``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import types
import typing
from dataclasses import dataclass, field
from typing import Any, Sequence, Union

import numpy as np

from .bias import BiasReport, ControlRecord
from .consensus import ConsensusReport, EvidenceMatrix, run_id
from .detection import DetectionResult
from .graph import Graph, NetworkStats, Partition
from .metrics.structural import modularity

SCHEMA_VERSION = "1.0"
QUANTILE_METHOD = "linear"  # numpy's default, Hyndman-Fan type 7


@dataclass(frozen=True)
class FiveNumber:
    min: float
    q1: float
    median: float
    q3: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "FiveNumber":
        q = np.quantile(np.asarray(values, dtype=float), [0.0, 0.25, 0.5, 0.75, 1.0], method=QUANTILE_METHOD)
        return cls(*(float(x) for x in q))


@dataclass(frozen=True)
class PlotRow:
    algorithm: str
    quantity: str
    runs: int
    summary: FiveNumber
    variance: float
    ground_truth: float | None


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    seed: int | None
    objective_name: str | None
    objective: float | None
    modularity: float
    community_count: int
    nodes: tuple[str, ...]
    labels: tuple[int, ...]

    def partition(self) -> Partition:
        return Partition(self.nodes, self.labels)


@dataclass(frozen=True)
class ReportBundle:
    schema_version: str
    command: str
    config: dict[str, Any]
    network: NetworkStats
    runs: tuple[RunRecord, ...]
    plot_data: tuple[PlotRow, ...]
    consensus: ConsensusReport | None = None
    bias: BiasReport | None = None
    control: ControlRecord | None = None
    metadata: dict[str, Any] = field(default_factory=dict)
    files: tuple[str, ...] = ()


def run_records(g: Graph, results: Sequence[DetectionResult]) -> tuple[RunRecord, ...]:
    out = []
    for r in results:
        p = r.partition.aligned(g.nodes)
        q = r.objective if r.objective_name == "modularity" else modularity(g, p)
        obj = None if r.objective is None else float(r.objective)
        out.append(
            RunRecord(r.algorithm, r.seed, r.objective_name, obj, float(q),
                      p.community_count, p.nodes, tuple(p.labels.tolist()))
        )
    return tuple(out)


def plot_data(runs: Sequence[RunRecord], gt_modularity: float | None = None,
              gt_communities: int | None = None) -> tuple[PlotRow, ...]:
    """Per-algorithm five-number summaries of modularity and community count."""
    by_alg: dict[str, list[RunRecord]] = {}
    for r in runs:
        by_alg.setdefault(r.algorithm, []).append(r)
    rows = []
    for alg in sorted(by_alg):
        q = [r.modularity for r in by_alg[alg]]
        c = [float(r.community_count) for r in by_alg[alg]]
        rows.append(PlotRow(alg, "modularity", len(q), FiveNumber.of(q), float(np.var(q)), gt_modularity))
        gtc = None if gt_communities is None else float(gt_communities)
        rows.append(PlotRow(alg, "community_count", len(c), FiveNumber.of(c), float(np.var(c)), gtc))
    return tuple(rows)


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_jsonable(tp, data):
    """Rebuild a typed value (dataclasses, tuples, dicts, optionals) from JSON data."""
    if tp is Any:
        return data
    origin = typing.get_origin(tp)
    if origin in (Union, types.UnionType):
        args = typing.get_args(tp)
        if data is None and type(None) in args:
            return None
        for arg in args:
            if arg is type(None):
                continue
            try:
                return from_jsonable(arg, data)
            except (TypeError, ValueError, KeyError):
                continue
        raise ValueError(f"value {data!r} matches no member of {tp}")
    if origin is tuple:
        args = typing.get_args(tp)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(from_jsonable(args[0], v) for v in data)
        return tuple(from_jsonable(a, v) for a, v in zip(args, data))
    if origin is dict:
        _, vt = typing.get_args(tp)
        return {k: from_jsonable(vt, v) for k, v in data.items()}
    if origin is list:
        (vt,) = typing.get_args(tp)
        return [from_jsonable(vt, v) for v in data]
    if dataclasses.is_dataclass(tp):
        if not isinstance(data, dict):
            raise TypeError(f"expected an object for {tp.__name__}")
        hints = typing.get_type_hints(tp)
        names = {f.name for f in dataclasses.fields(tp)}
        unknown = set(data) - names
        if unknown:
            raise KeyError(f"unexpected keys for {tp.__name__}: {sorted(unknown)}")
        return tp(**{k: from_jsonable(hints[k], v) for k, v in data.items()})
    if tp is float:
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            raise TypeError(f"expected a number, got {data!r}")
        return float(data)
    if tp is int:
        if isinstance(data, bool) or not isinstance(data, int):
            raise TypeError(f"expected an integer, got {data!r}")
        return data
    if tp is bool:
        if not isinstance(data, bool):
            raise TypeError(f"expected a boolean, got {data!r}")
        return data
    if tp is str:
        if not isinstance(data, str):
            raise TypeError(f"expected a string, got {data!r}")
        return data
    raise TypeError(f"unsupported type {tp}")


def serialize(bundle: ReportBundle) -> str:
    return json.dumps(to_jsonable(bundle), sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse(text: str) -> ReportBundle:
    data = json.loads(text)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {version!r}; expected {SCHEMA_VERSION}")
    return from_jsonable(ReportBundle, data)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x):
    return "" if x is None else repr(float(x)) if isinstance(x, float) else x


def safe_name(metric: str) -> str:
    return metric.replace("*", "_star")


def matrix_csv(mat: EvidenceMatrix) -> str:
    return _csv([""] + list(mat.runs), ([r] + [repr(v) for v in row] for r, row in zip(mat.runs, mat.values)))


def side_tables(bundle: ReportBundle) -> dict[str, str]:
    """CSV side tables keyed by file name."""
    out = {
        "plot_data.csv": _csv(
            ["algorithm", "quantity", "runs", "min", "q1", "median", "q3", "max", "variance", "ground_truth"],
            (
                [r.algorithm, r.quantity, r.runs, *(_num(getattr(r.summary, k)) for k in ("min", "q1", "median", "q3", "max")),
                 _num(r.variance), _num(r.ground_truth)]
                for r in bundle.plot_data
            ),
        ),
        "runs.csv": _csv(
            ["run", "algorithm", "seed", "objective_name", "objective", "modularity", "community_count"],
            (
                [run_id(r), r.algorithm, "" if r.seed is None else r.seed, r.objective_name or "", _num(r.objective),
                 _num(r.modularity), r.community_count]
                for r in bundle.runs
            ),
        ),
    }
    c = bundle.consensus
    if c is None:
        return out
    for mat in c.matrices:
        out[f"matrix_{safe_name(mat.metric)}.csv"] = matrix_csv(mat)
    rank_rows = []
    for metric, rk in c.rankings.items():
        tied = {a for group in rk.ties for a in group}
        for pos, alg in enumerate(rk.order, 1):
            rank_rows.append([metric, pos, alg, _num(rk.scores[alg]), int(alg in tied)])
    out["rankings.csv"] = _csv(["metric", "rank", "algorithm", "mean_score", "tied"], rank_rows)
    out["winners.csv"] = _csv(
        ["metric", "winners"], ([m, ";".join(top)] for m, top in c.winners.items())
    )
    if c.ground_truth_table is not None:
        metrics = [m.metric for m in c.matrices]
        out["ground_truth_similarity.csv"] = _csv(
            ["run"] + metrics, ([run] + [_num(row[m]) for m in metrics] for run, row in c.ground_truth_table.items())
        )
    return out
