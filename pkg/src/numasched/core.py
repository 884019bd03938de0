"""Shared system model: machine dimensions, schedules, and per-quantum count matrices.

A schedule places N threads on an L-node machine with K cores per node by
partitioning the threads into L groups of K and mapping groups to nodes
one-to-one.  All types are immutable values; nothing here mutates after
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class SystemConfig:
    """Machine dimensions: N threads on L nodes of K cores, run for Q quanta."""

    n_threads: int = 16
    n_nodes: int = 4
    cores_per_node: int = 4
    n_quanta: int = 16

    def __post_init__(self) -> None:
        if self.n_threads < 2:
            raise ValueError("n_threads must be at least 2")
        if self.n_nodes < 1 or self.cores_per_node < 1 or self.n_quanta < 1:
            raise ValueError("n_nodes, cores_per_node and n_quanta must be positive")
        if self.n_threads != self.n_nodes * self.cores_per_node:
            # One thread per core; the machine is always fully loaded.
            raise ValueError(
                f"n_threads ({self.n_threads}) must equal n_nodes * cores_per_node "
                f"({self.n_nodes} * {self.cores_per_node})"
            )


@dataclass(frozen=True)
class LatencyConfig:
    """Cycle costs of the four access classes plus the migration penalty knobs.

    The penalty for moving one thread to another node is
    ``affinity_lines * affinity_line_latency`` cycles: the warmed-up cache
    content the thread abandons, expressed as whole cache lines refetched at a
    per-line transfer cost.  The per-line cost is deliberately a separate knob
    from ``c2c_remote``.
    """

    c2c_local: int = 50
    c2c_remote: int = 100
    dram_local: int = 125
    dram_remote: int = 250
    affinity_lines: int = 1024
    affinity_line_latency: int = 250

    def __post_init__(self) -> None:
        for name in (
            "c2c_local",
            "c2c_remote",
            "dram_local",
            "dram_remote",
            "affinity_lines",
            "affinity_line_latency",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.c2c_remote < self.c2c_local:
            raise ValueError("c2c_remote must be >= c2c_local")
        if self.dram_remote < self.dram_local:
            raise ValueError("dram_remote must be >= dram_local")

    @property
    def migration_penalty(self) -> int:
        """Cycles charged per migrated thread."""
        return self.affinity_lines * self.affinity_line_latency


@dataclass(frozen=True)
class Grouping:
    """An ordered list of thread groups; threads within a group are kept sorted.

    Group order is meaningful (group g is mapped to a node by a
    NodeAssignment); the ids inside a group are not, so they are normalized to
    ascending order at construction.  Structural validity (disjoint groups of
    equal size covering 0..N-1) is checked by :func:`validate_schedule`, not
    here, so that invalid inputs can still be constructed and diagnosed.
    """

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        normalized = tuple(tuple(sorted(int(t) for t in g)) for g in self.groups)
        object.__setattr__(self, "groups", normalized)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def n_threads(self) -> int:
        return sum(len(g) for g in self.groups)

    def partition(self) -> frozenset[frozenset[int]]:
        """The grouping as an unordered partition, for relabeling-insensitive comparison."""
        return frozenset(frozenset(g) for g in self.groups)


@dataclass(frozen=True)
class NodeAssignment:
    """node_of_group[g] is the node that group g runs on; must be a bijection."""

    node_of_group: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_of_group", tuple(int(n) for n in self.node_of_group))

    @property
    def n_groups(self) -> int:
        return len(self.node_of_group)


@dataclass(frozen=True)
class Schedule:
    """A grouping plus the group-to-node mapping; together they place every thread."""

    grouping: Grouping
    assignment: NodeAssignment

    def thread_nodes(self) -> tuple[int, ...]:
        """Node of each thread, indexed by thread id.

        Assumes the schedule is structurally valid (see validate_schedule).
        """
        nodes = [0] * self.grouping.n_threads
        for g, members in enumerate(self.grouping.groups):
            node = self.assignment.node_of_group[g]
            for t in members:
                nodes[t] = node
        return tuple(nodes)

    def node_of(self, thread: int) -> int:
        return self.thread_nodes()[thread]


def identity_schedule(config: SystemConfig) -> Schedule:
    """The unoptimized placement: K consecutive thread ids per group, group g on node g."""
    k = config.cores_per_node
    groups = tuple(
        tuple(range(g * k, (g + 1) * k)) for g in range(config.n_nodes)
    )
    return Schedule(Grouping(groups), NodeAssignment(tuple(range(config.n_nodes))))


def validate_schedule(schedule: Schedule, config: SystemConfig) -> list[str]:
    """Check a schedule against a config; returns a list of violations (empty = ok)."""
    violations: list[str] = []
    groups = schedule.grouping.groups
    if len(groups) != config.n_nodes:
        violations.append(
            f"expected {config.n_nodes} groups, found {len(groups)}"
        )
    for g, members in enumerate(groups):
        if len(members) != config.cores_per_node:
            violations.append(
                f"group {g} has {len(members)} threads, expected {config.cores_per_node}"
            )
    seen: dict[int, int] = {}
    for g, members in enumerate(groups):
        for t in members:
            if t in seen:
                violations.append(f"duplicate thread {t} in groups {seen[t]} and {g}")
            else:
                seen[t] = g
    out_of_range = sorted(t for t in seen if t < 0 or t >= config.n_threads)
    for t in out_of_range:
        violations.append(f"thread id {t} out of range 0..{config.n_threads - 1}")
    missing = sorted(set(range(config.n_threads)) - set(seen))
    if missing:
        violations.append(f"threads not covered by any group: {missing}")

    nodes = schedule.assignment.node_of_group
    if len(nodes) != config.n_nodes:
        violations.append(
            f"assignment lists {len(nodes)} groups, expected {config.n_nodes}"
        )
    if sorted(nodes) != list(range(config.n_nodes)):
        violations.append(f"assignment not bijective: {list(nodes)}")
    return violations


def migrated_threads(prev: Schedule, new: Schedule) -> frozenset[int]:
    """Threads whose node differs between two schedules of the same machine.

    Node-granular on purpose: relabeling groups without moving any thread to a
    different node migrates nothing.
    """
    if prev.grouping.n_threads != new.grouping.n_threads or (
        prev.assignment.n_groups != new.assignment.n_groups
    ):
        raise ValueError("schedules describe different machine dimensions")
    before = prev.thread_nodes()
    after = new.thread_nodes()
    return frozenset(t for t in range(len(before)) if before[t] != after[t])


def _as_count_matrix(counts, shape_desc: str) -> np.ndarray:
    arr = np.asarray(counts, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError(f"{shape_desc} matrix must be 2-dimensional")
    if (arr < 0).any():
        raise ValueError(f"{shape_desc} counts must be non-negative")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class C2CMatrix:
    """Symmetric N x N pairwise cache-to-cache transfer counts with zero diagonal."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_count_matrix(self.counts, "cache-to-cache")
        if arr.shape[0] != arr.shape[1]:
            raise ValueError("cache-to-cache matrix must be square")
        if (np.diagonal(arr) != 0).any():
            raise ValueError("cache-to-cache matrix must have a zero diagonal")
        if not np.array_equal(arr, arr.T):
            raise ValueError("cache-to-cache matrix must be symmetric")
        object.__setattr__(self, "counts", arr)

    @property
    def n_threads(self) -> int:
        return self.counts.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, C2CMatrix):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)


@dataclass(frozen=True, eq=False)
class DramMatrix:
    """N x L per-thread DRAM access counts; column n counts accesses to node n's memory."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_count_matrix(self.counts, "DRAM")
        object.__setattr__(self, "counts", arr)

    @property
    def n_threads(self) -> int:
        return self.counts.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.counts.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DramMatrix):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)


@dataclass(frozen=True, eq=False)
class Trace:
    """Q quanta of observed (cache-to-cache, DRAM) count matrices for one machine."""

    config: SystemConfig
    quanta: tuple[tuple[C2CMatrix, DramMatrix], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "quanta", tuple(tuple(q) for q in self.quanta))
        if len(self.quanta) != self.config.n_quanta:
            raise ValueError(
                f"trace has {len(self.quanta)} quanta, config says {self.config.n_quanta}"
            )
        n, l = self.config.n_threads, self.config.n_nodes
        for i, (c2c, dram) in enumerate(self.quanta, start=1):
            if c2c.n_threads != n:
                raise ValueError(f"quantum {i}: cache-to-cache matrix is not {n}x{n}")
            if dram.counts.shape != (n, l):
                raise ValueError(f"quantum {i}: DRAM matrix is not {n}x{l}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.config == other.config and self.quanta == other.quanta
