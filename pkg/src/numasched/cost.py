"""Cycle-cost accounting for one scheduling quantum.

The model is purely additive: every observed cache-to-cache transfer and DRAM
access is charged its local or remote latency depending on placement, and each
migrated thread pays a fixed cache-affinity penalty.  No queueing, bandwidth,
or overlap effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet

import numpy as np

from .core import C2CMatrix, DramMatrix, LatencyConfig, Schedule


@dataclass(frozen=True)
class CostBreakdown:
    """Per-quantum cycle totals; ``total`` is always the sum of the five parts."""

    c2c_local: int
    c2c_remote: int
    dram_local: int
    dram_remote: int
    migration: int
    total: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ("c2c_local", "c2c_remote", "dram_local", "dram_remote", "migration"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        object.__setattr__(
            self,
            "total",
            self.c2c_local + self.c2c_remote + self.dram_local + self.dram_remote + self.migration,
        )


def quantum_cost(
    schedule: Schedule,
    c2c: C2CMatrix,
    dram: DramMatrix,
    lat: LatencyConfig,
    migrated: AbstractSet[int] = frozenset(),
) -> CostBreakdown:
    """Cycle cost of running one quantum's observed counts under a schedule.

    Each unordered thread pair is charged once: its transfer count times the
    within-node or cross-node cache-to-cache latency.  Each (thread, node)
    DRAM count is charged the local or remote DRAM latency.  Each migrated
    thread pays the affinity penalty once.
    """
    nodes = np.asarray(schedule.thread_nodes())
    n = c2c.n_threads
    if nodes.shape[0] != n or dram.n_threads != n:
        raise ValueError("schedule and matrices disagree on thread count")
    if dram.n_nodes != schedule.assignment.n_groups:
        raise ValueError("schedule and DRAM matrix disagree on node count")

    iu = np.triu_indices(n, k=1)
    pair_counts = c2c.counts[iu]
    pair_local = nodes[iu[0]] == nodes[iu[1]]
    c2c_local = int(pair_counts[pair_local].sum()) * lat.c2c_local
    c2c_remote = int(pair_counts[~pair_local].sum()) * lat.c2c_remote

    home = nodes[:, None] == np.arange(dram.n_nodes)[None, :]
    dram_local = int(dram.counts[home].sum()) * lat.dram_local
    dram_remote = int(dram.counts[~home].sum()) * lat.dram_remote

    migration = len(migrated) * lat.migration_penalty
    return CostBreakdown(c2c_local, c2c_remote, dram_local, dram_remote, migration)


def improvement_pct(baseline_total: int, optimized_total: int) -> float:
    """Percentage latency saved relative to the baseline, to two decimal places.

    Negative values mean the optimized run was slower than the baseline.
    """
    if baseline_total <= 0:
        raise ValueError("improvement is undefined for a zero or negative baseline")
    return round(100.0 * (baseline_total - optimized_total) / baseline_total, 2)
