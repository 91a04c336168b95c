from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..graph import Graph
from ._base import ALGORITHMS, DETERMINISTIC, DetectionError, DetectionResult
from .eigenvector import leading_eigenvector
from .girvan_newman import girvan_newman
from .greedy import greedy_modularity
from .infomap import infomap
from .labelprop import label_propagation
from .louvain import louvain
from .walktrap import DEFAULT_STEPS, walktrap

THREADS_ENV = "CONSENSUS_COMM_THREADS"


@dataclass(frozen=True)
class DetectionConfig:
    algorithms: tuple[str, ...] = ALGORITHMS
    replications: int = 30
    base_seed: int = 0
    walktrap_steps: int = DEFAULT_STEPS

    def __post_init__(self):
        algs = tuple(self.algorithms)
        unknown = [a for a in algs if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; choose from {','.join(ALGORITHMS)}")
        if not algs:
            raise ValueError("select at least one algorithm")
        if len(set(algs)) != len(algs):
            raise ValueError("duplicate algorithm ids")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.walktrap_steps < 1:
            raise ValueError("walktrap_steps must be >= 1")
        object.__setattr__(self, "algorithms", algs)

    def jobs(self) -> list[tuple[str, int]]:
        """``(algorithm, seed)`` pairs in result order."""
        out = []
        for alg in sorted(self.algorithms):
            if alg in DETERMINISTIC:
                out.append((alg, self.base_seed))
            else:
                out.extend((alg, self.base_seed + r) for r in range(self.replications))
        return out


def run_algorithm(g: Graph, algorithm: str, seed: int, walktrap_steps: int = DEFAULT_STEPS) -> DetectionResult:
    try:
        if algorithm == "LM":
            return louvain(g, seed)
        if algorithm == "GM":
            return greedy_modularity(g)
        if algorithm == "LE":
            return leading_eigenvector(g)
        if algorithm == "GN":
            return girvan_newman(g)
        if algorithm == "LP":
            return label_propagation(g, seed)
        if algorithm == "WT":
            return walktrap(g, walktrap_steps, seed)
        if algorithm == "IM":
            return infomap(g, seed)
    except DetectionError as exc:
        if exc.algorithm is None:
            raise DetectionError(str(exc), algorithm) from exc
        raise
    except (ValueError, ArithmeticError, MemoryError) as exc:
        raise DetectionError(str(exc), algorithm) from exc
    raise ValueError(f"unknown algorithm {algorithm!r}")


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1").strip() or "1"
    n = int(raw)
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def run_suite(g: Graph, cfg: DetectionConfig, workers: int | None = None) -> list[DetectionResult]:
    """Run every configured algorithm; seeded algorithms once per replication.

    Deterministic algorithms (LM, GM, LE, GN) run once; LM is seeded with
    ``base_seed``. LP, WT and IM run with seeds ``base_seed .. base_seed+R-1``.
    Results come back ordered by ``(algorithm, seed)`` whatever the worker count.
    """
    jobs = cfg.jobs()
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        return [run_algorithm(g, a, s, cfg.walktrap_steps) for a, s in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: run_algorithm(g, job[0], job[1], cfg.walktrap_steps), jobs))
