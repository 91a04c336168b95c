"""Cross-checking structural and functional evidence across detection runs.

Pairwise similarity matrices, ground-truth similarity, per-metric algorithm
rankings, rank-correlation divergence flags and a consensus verdict.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .detection import DETERMINISTIC, DetectionResult
from .graph import Graph, Partition
from .metrics.functional import SIMILARITY_METRICS, similarity_scores
from .metrics.structural import StructuralEvidence, structural_evidence

THETA_C = 0.7
TAU_0 = 0.0
TIE_ATOL = 1e-12

# structural metrics entering rankings, with orientation
STRUCTURAL_RANKED = {"Q": True, "conductance": False, "density": True}

VERDICT_RULE = (
    "CONSENSUS iff no structural-vs-functional divergence flag (Kendall tau-b < tau_0) "
    "and mean pairwise inter-algorithm NMI >= theta_c; otherwise DIVERGENT"
)


def run_id(r: DetectionResult) -> str:
    return r.algorithm if r.seed is None else f"{r.algorithm}#{r.seed}"


class MetricValue(NamedTuple):
    metric: str
    value: float


@dataclass(frozen=True)
class EvidenceRecord:
    algorithm: str
    seed: int | None
    structural: StructuralEvidence
    functional: dict[str, float] | None = None

    def score(self, metric: str) -> float:
        if metric == "Q":
            return self.structural.modularity
        if metric == "conductance":
            return self.structural.conductance_mean
        if metric == "density":
            return self.structural.density_mean
        if self.functional is None or metric not in self.functional:
            raise KeyError(metric)
        return self.functional[metric]


@dataclass(frozen=True)
class EvidenceMatrix:
    metric: str
    runs: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


@dataclass(frozen=True)
class Ranking:
    metric: str
    order: tuple[str, ...]
    scores: dict[str, float]
    higher_is_better: bool = True
    ties: tuple[tuple[str, ...], ...] = ()

    @property
    def winner(self) -> str:
        return self.order[0]

    def top(self) -> tuple[str, ...]:
        """Every algorithm tied with the winner."""
        for group in self.ties:
            if self.order[0] in group:
                return group
        return (self.order[0],)


@dataclass(frozen=True)
class Divergence:
    metric: str
    tau: float | None
    flag: bool
    winner_mismatch: bool


@dataclass(frozen=True)
class ReplicationSummary:
    algorithm: str
    runs: int
    deterministic: bool
    modularity_mean: float
    modularity_variance: float
    modularity_min: float
    modularity_max: float
    community_count_mean: float
    community_count_variance: float


@dataclass(frozen=True)
class GroundTruthGap:
    algorithm: str
    modularity_distance: float
    modularity_agreement: float
    community_count_distance: float


@dataclass(frozen=True)
class ConsensusReport:
    matrices: tuple[EvidenceMatrix, ...]
    ground_truth_table: dict[str, dict[str, float]] | None
    rankings: dict[str, Ranking]
    winners: dict[str, tuple[str, ...]]
    wins_by_algorithm: dict[str, tuple[str, ...]]
    overall_winner: str
    divergences: tuple[Divergence, ...]
    replication: dict[str, ReplicationSummary]
    ground_truth_gap: dict[str, GroundTruthGap] | None
    ground_truth_structure: StructuralEvidence | None
    mean_pairwise_nmi: float
    pairwise_nmi_dispersion: float
    mean_ground_truth_nmi: float | None
    verdict: str
    contradictions: tuple[str, ...]
    thresholds: dict[str, float] = field(default_factory=dict)
    verdict_rule: str = VERDICT_RULE


def metric_agreement(x, y) -> tuple[float, float]:
    """One-dimensional Euclidean distance and ``1 - distance`` agreement.

    Tagged values (``MetricValue``) must carry the same metric id.
    """
    if isinstance(x, MetricValue) or isinstance(y, MetricValue):
        if not (isinstance(x, MetricValue) and isinstance(y, MetricValue)):
            raise ValueError("cannot compare a tagged metric value with an untagged one")
        if x.metric != y.metric:
            raise ValueError(f"scale mismatch: {x.metric} vs {y.metric}")
        x, y = x.value, y.value
    dist = abs(float(x) - float(y))
    return dist, 1.0 - dist


def evidence_records(g: Graph, results: Sequence[DetectionResult], gt: Partition | None = None,
                     metrics=SIMILARITY_METRICS) -> list[EvidenceRecord]:
    out = []
    for r in results:
        functional = None
        if gt is not None:
            functional = similarity_scores(r.partition, gt.aligned(r.partition.nodes), metrics)
        out.append(EvidenceRecord(r.algorithm, r.seed, structural_evidence(g, r.partition), functional))
    return out


def pairwise_similarity_matrices(results: Sequence[DetectionResult], metrics=SIMILARITY_METRICS) -> list[EvidenceMatrix]:
    """One symmetric run-by-run matrix per similarity metric, unit diagonal."""
    if len(results) < 2:
        raise ValueError("need at least 2 runs to compare")
    nodes = set(results[0].partition.nodes)
    for r in results[1:]:
        if set(r.partition.nodes) != nodes:
            raise ValueError(f"run {run_id(r)} covers a different node set")
    k = len(results)
    vals = {m: np.eye(k) for m in metrics}
    for i in range(k):
        for j in range(i + 1, k):
            s = similarity_scores(results[i].partition, results[j].partition, metrics)
            for m in metrics:
                vals[m][i, j] = vals[m][j, i] = s[m]
    ids = tuple(run_id(r) for r in results)
    return [EvidenceMatrix(m, ids, tuple(tuple(row) for row in vals[m].tolist())) for m in metrics]


def ground_truth_similarity(results: Sequence[DetectionResult], gt: Partition,
                            metrics=SIMILARITY_METRICS) -> dict[str, dict[str, float]]:
    return {run_id(r): similarity_scores(r.partition, gt, metrics) for r in results}


def rank_algorithms(records: Sequence[EvidenceRecord], metrics: Sequence[str] | None = None) -> dict[str, Ranking]:
    """Rank algorithms per metric by their mean score over replications.

    Equal means (within ``TIE_ATOL``) are ordered alphabetically and listed
    in ``Ranking.ties``. Conductance ranks ascending, everything else
    descending.
    """
    by_alg: dict[str, list[EvidenceRecord]] = defaultdict(list)
    for rec in records:
        by_alg[rec.algorithm].append(rec)
    if len(by_alg) < 2:
        raise ValueError("ranking needs at least 2 algorithms")
    if metrics is None:
        metrics = list(STRUCTURAL_RANKED)
        if all(r.functional is not None for r in records):
            metrics += list(records[0].functional)
    out = {}
    for metric in metrics:
        higher = STRUCTURAL_RANKED.get(metric, True)
        means = {a: float(np.mean([r.score(metric) for r in recs])) for a, recs in sorted(by_alg.items())}
        sign = -1.0 if higher else 1.0
        order = sorted(means, key=lambda a: (sign * means[a], a))
        ties, group = [], [order[0]]
        for a in order[1:]:
            if abs(means[a] - means[group[-1]]) <= TIE_ATOL:
                group.append(a)
            else:
                if len(group) > 1:
                    ties.append(tuple(group))
                group = [a]
        if len(group) > 1:
            ties.append(tuple(group))
        out[metric] = Ranking(metric, tuple(order), means, higher, tuple(ties))
    return out


def _ordinal(r) -> dict[str, float]:
    """Rank key per algorithm; tied algorithms share a key."""
    if isinstance(r, Ranking):
        sign = -1.0 if r.higher_is_better else 1.0
        key = {}
        for a in r.order:
            tied = next((g for g in r.ties if a in g), None)
            key[a] = sign * r.scores[tied[0] if tied else a]
        return key
    return {a: float(i) for i, a in enumerate(r)}


def kendall_tau_b(rank_a, rank_b) -> float | None:
    """Kendall tau-b between two rankings over the same algorithms; None if undefined."""
    ka, kb = _ordinal(rank_a), _ordinal(rank_b)
    if set(ka) != set(kb):
        raise ValueError("rankings cover different algorithm sets")
    algs = sorted(ka)
    if len(algs) < 2:
        raise ValueError("Kendall tau needs at least 2 algorithms")
    conc = disc = ties_a = ties_b = 0
    for i in range(len(algs)):
        for j in range(i + 1, len(algs)):
            da = ka[algs[i]] - ka[algs[j]]
            db = kb[algs[i]] - kb[algs[j]]
            if da == 0 and db == 0:
                ties_a += 1
                ties_b += 1
            elif da == 0:
                ties_a += 1
            elif db == 0:
                ties_b += 1
            elif (da > 0) == (db > 0):
                conc += 1
            else:
                disc += 1
    total = len(algs) * (len(algs) - 1) // 2
    denom = math.sqrt((total - ties_a) * (total - ties_b))
    if denom == 0:
        return None
    return (conc - disc) / denom


def divergence_score(ranking_structural, ranking_functional, tau0: float = TAU_0) -> tuple[float | None, bool]:
    """Kendall tau-b and the divergence flag ``tau < tau0``.

    When either ranking is a complete tie the correlation is undefined: the
    result is ``(None, False)``.
    """
    tau = kendall_tau_b(ranking_structural, ranking_functional)
    return tau, (tau is not None and tau < tau0)


def _variance(values) -> float:
    # exact arithmetic, so repeated identical values give exactly 0
    return float(statistics.pvariance(values)) if len(values) > 1 else 0.0


def replication_summary(results: Sequence[DetectionResult], records: Sequence[EvidenceRecord]) -> dict[str, ReplicationSummary]:
    grouped: dict[str, list[EvidenceRecord]] = defaultdict(list)
    for rec in records:
        grouped[rec.algorithm].append(rec)
    out = {}
    for alg in sorted(grouped):
        q = [r.structural.modularity for r in grouped[alg]]
        c = [r.structural.community_count for r in grouped[alg]]
        out[alg] = ReplicationSummary(
            algorithm=alg,
            runs=len(q),
            deterministic=alg in DETERMINISTIC,
            modularity_mean=float(statistics.fmean(q)),
            modularity_variance=_variance(q),
            modularity_min=min(q),
            modularity_max=max(q),
            community_count_mean=float(statistics.fmean(c)),
            community_count_variance=_variance(c),
        )
    return out


def inter_algorithm_nmi(results: Sequence[DetectionResult], nmi_matrix: EvidenceMatrix) -> tuple[float, float]:
    """Mean and spread of NMI between runs of different algorithms.

    Runs are first averaged within each algorithm pair, so heavily replicated
    algorithms do not dominate.
    """
    mat = nmi_matrix.array()
    algs = [r.algorithm for r in results]
    names = sorted(set(algs))
    if len(names) < 2:
        raise ValueError("inter-algorithm agreement needs at least 2 algorithms")
    idx = {a: [i for i, x in enumerate(algs) if x == a] for a in names}
    pair_means = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            pair_means.append(float(mat[np.ix_(idx[a], idx[b])].mean()))
    return float(np.mean(pair_means)), float(np.std(pair_means))


def consensus_verdict(
    g: Graph,
    results: Sequence[DetectionResult],
    gt: Partition | None = None,
    metrics: Sequence[str] = SIMILARITY_METRICS,
    theta_c: float = THETA_C,
    tau0: float = TAU_0,
) -> ConsensusReport:
    """Assemble every piece of evidence and decide CONSENSUS or DIVERGENT."""
    metrics = tuple(metrics)
    calc = metrics if "NMI" in metrics else metrics + ("NMI",)
    records = evidence_records(g, results, gt, metrics)
    all_mats = pairwise_similarity_matrices(results, calc)
    nmi_mat = next(m for m in all_mats if m.metric == "NMI")
    matrices = tuple(m for m in all_mats if m.metric in metrics)
    mean_nmi, spread = inter_algorithm_nmi(results, nmi_mat)

    rankings = rank_algorithms(records, list(STRUCTURAL_RANKED) + (list(metrics) if gt is not None else []))
    winners = {m: r.top() for m, r in rankings.items()}
    wins: dict[str, list[str]] = defaultdict(list)
    for m, top in winners.items():
        for a in top:
            wins[a].append(m)
    tally = Counter({a: len(v) for a, v in wins.items()})
    overall = sorted(tally, key=lambda a: (-tally[a], a))[0]

    divergences = []
    contradictions = []
    gt_table = gt_gap = gt_struct = None
    mean_gt_nmi = None
    if gt is not None:
        gt_table = ground_truth_similarity(results, gt, calc)
        per_alg = defaultdict(list)
        for r in results:
            per_alg[r.algorithm].append(gt_table[run_id(r)]["NMI"])
        mean_gt_nmi = float(np.mean([np.mean(v) for v in per_alg.values()]))
        gt_table = {k: {m: v[m] for m in metrics} for k, v in gt_table.items()}
        q_rank = rankings["Q"]
        for m in metrics:
            tau, flag = divergence_score(q_rank, rankings[m], tau0)
            mismatch = not set(q_rank.top()) & set(rankings[m].top())
            divergences.append(Divergence(m, tau, flag, mismatch))
            if flag:
                contradictions.append(
                    f"modularity ranking contradicts {m}-to-ground-truth ranking (tau={tau:.3f} < {tau0})"
                )
        gt_struct = structural_evidence(g, gt.aligned(g.nodes))
        replication = replication_summary(results, records)
        gt_gap = {}
        for alg, rep in replication.items():
            dist, agree = metric_agreement(MetricValue("Q", rep.modularity_mean), MetricValue("Q", gt_struct.modularity))
            gt_gap[alg] = GroundTruthGap(alg, dist, agree, abs(rep.community_count_mean - gt_struct.community_count))
    else:
        replication = replication_summary(results, records)

    if mean_nmi < theta_c:
        contradictions.append(f"low inter-algorithm agreement (mean pairwise NMI {mean_nmi:.3f} < {theta_c})")
    verdict = "CONSENSUS" if not contradictions else "DIVERGENT"
    return ConsensusReport(
        matrices=matrices,
        ground_truth_table=gt_table,
        rankings=rankings,
        winners=winners,
        wins_by_algorithm={a: tuple(v) for a, v in sorted(wins.items())},
        overall_winner=overall,
        divergences=tuple(divergences),
        replication=replication,
        ground_truth_gap=gt_gap,
        ground_truth_structure=gt_struct,
        mean_pairwise_nmi=mean_nmi,
        pairwise_nmi_dispersion=spread,
        mean_ground_truth_nmi=mean_gt_nmi,
        verdict=verdict,
        contradictions=tuple(contradictions),
        thresholds={"theta_c": theta_c, "tau_0": tau0},
    )
