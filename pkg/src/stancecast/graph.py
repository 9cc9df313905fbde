"""Immutable directed social graph with per-node topic/stance profiles.

Nodes and topics are dense integer ids. Stances are float codes drawn from
the four-valued domain: -1 unknown, 0 oppose, 0.5 neutral, 1 support.
Adjacency is stored CSR-style (``indptr``/``indices``) with each
out-neighbor row sorted ascending so iteration order never depends on input
file ordering. All arrays are frozen after construction; mutable per-run
state lives in :class:`stancecast.dynamics.SimState`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadStanceValueError,
    DuplicateEdgeError,
    IdOutOfRangeError,
    ProfileLengthMismatchError,
    SelfLoopError,
)

#: The four-valued stance domain.
STANCE_UNKNOWN = -1.0
STANCE_OPPOSE = 0.0
STANCE_NEUTRAL = 0.5
STANCE_SUPPORT = 1.0

STANCE_VALUES = (STANCE_UNKNOWN, STANCE_OPPOSE, STANCE_NEUTRAL, STANCE_SUPPORT)
KNOWN_STANCES = (STANCE_OPPOSE, STANCE_NEUTRAL, STANCE_SUPPORT)


def is_stance(value) -> bool:
    """True iff ``value`` is one of the four stance codes."""
    return value in (-1.0, 0.0, 0.5, 1.0)


class StanceIndex:
    """Per-topic partition of nodes by current known stance.

    For every topic ``j`` keeps the three disjoint sets of nodes holding
    stance 0, 0.5 and 1. A node appears in no set iff its stance is -1
    (unknown). ``known(j)`` is the union of the three sets.
    """

    def __init__(self, topic_count: int):
        self._sets: list[dict[float, set[int]]] = [
            {STANCE_OPPOSE: set(), STANCE_NEUTRAL: set(), STANCE_SUPPORT: set()}
            for _ in range(topic_count)
        ]

    @classmethod
    def from_profiles(cls, profiles: np.ndarray) -> "StanceIndex":
        """Build the partition by scanning a (n, z) profile array."""
        n, z = profiles.shape
        index = cls(z)
        for j in range(z):
            column = profiles[:, j]
            for value in KNOWN_STANCES:
                index._sets[j][value].update(np.flatnonzero(column == value).tolist())
        return index

    @property
    def topic_count(self) -> int:
        return len(self._sets)

    def stance_class(self, j: int, stance: float) -> set[int]:
        """Nodes currently holding ``stance`` on topic ``j`` (a live set)."""
        return self._sets[j][stance]

    def known(self, j: int) -> set[int]:
        sets = self._sets[j]
        return sets[STANCE_OPPOSE] | sets[STANCE_NEUTRAL] | sets[STANCE_SUPPORT]

    def move(self, j: int, node: int, old: float, new: float) -> None:
        """Re-file ``node`` after a stance change from ``old`` to ``new``."""
        if old == new:
            return
        if old != STANCE_UNKNOWN:
            self._sets[j][old].discard(node)
        if new != STANCE_UNKNOWN:
            self._sets[j][new].add(node)

    def refresh_topic(self, j: int, column: np.ndarray) -> None:
        """Rebuild topic ``j`` from a stance column (bulk engine updates)."""
        for value in KNOWN_STANCES:
            self._sets[j][value] = set(np.flatnonzero(column == value).tolist())

    def __eq__(self, other) -> bool:
        return isinstance(other, StanceIndex) and self._sets == other._sets

    def __repr__(self) -> str:
        sizes = [
            tuple(len(self._sets[j][v]) for v in KNOWN_STANCES)
            for j in range(len(self._sets))
        ]
        return f"StanceIndex(sizes={sizes})"


@dataclass(frozen=True)
class SocialGraph:
    """Directed graph G = (V, E, T) with a stance profile per node.

    ``indptr``/``indices`` hold the out-adjacency in CSR form; edge (u, v)
    means information flows u -> v. ``profiles`` is a (n, z) float array of
    stance codes. All arrays are read-only.
    """

    n: int
    m: int
    z: int
    indptr: np.ndarray
    indices: np.ndarray
    profiles: np.ndarray

    def check_node(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IdOutOfRangeError(f"node id {v} outside [0, {self.n})")

    def check_topic(self, j: int) -> None:
        if not 0 <= j < self.z:
            raise IdOutOfRangeError(f"topic id {j} outside [0, {self.z})")

    def out_neighbors(self, v: int) -> np.ndarray:
        """Out-neighbors of ``v`` in ascending id order (read-only view)."""
        self.check_node(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def out_degree(self, v: int) -> int:
        self.check_node(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        """True iff the directed edge (u, v) exists."""
        self.check_node(u)
        self.check_node(v)
        row = self.indices[self.indptr[u] : self.indptr[u + 1]]
        i = int(np.searchsorted(row, v))
        return i < len(row) and int(row[i]) == v

    def stance_index(self) -> StanceIndex:
        """Stance partition of the graph's initial profiles."""
        return StanceIndex.from_profiles(self.profiles)


def build_graph(node_count, topic_count, edge_list, profiles) -> SocialGraph:
    """Validate and assemble an immutable :class:`SocialGraph`.

    ``edge_list`` is any iterable of (source, target) pairs; ``profiles``
    one stance sequence of length ``topic_count`` per node. Rejects
    self-loops, duplicate edges, out-of-range ids, wrong profile lengths
    and stance codes outside the domain.
    """
    n = int(node_count)
    z = int(topic_count)
    if n < 0 or z < 0:
        raise IdOutOfRangeError("node and topic counts must be non-negative")

    pairs = [(int(u), int(v)) for u, v in edge_list]
    seen = set()
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise IdOutOfRangeError(f"edge ({u}, {v}) references id outside [0, {n})")
        if u == v:
            raise SelfLoopError(f"self-loop at node {u}")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
    pairs.sort()

    profile_rows = list(profiles)
    if len(profile_rows) != n:
        raise ProfileLengthMismatchError(
            f"got {len(profile_rows)} profiles for {n} nodes"
        )
    prof = np.full((n, z), STANCE_UNKNOWN, dtype=np.float64)
    for node, row in enumerate(profile_rows):
        values = list(row)
        if len(values) != z:
            raise ProfileLengthMismatchError(
                f"profile of node {node} has length {len(values)}, expected {z}"
            )
        for j, value in enumerate(values):
            value = float(value)
            if not is_stance(value):
                raise BadStanceValueError(
                    f"stance {value!r} of node {node}, topic {j} not in {{-1, 0, 0.5, 1}}"
                )
            prof[node, j] = value

    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(len(pairs), dtype=np.int64)
    for k, (u, v) in enumerate(pairs):
        indptr[u + 1] += 1
        indices[k] = v
    np.cumsum(indptr, out=indptr)

    for arr in (indptr, indices, prof):
        arr.flags.writeable = False
    return SocialGraph(
        n=n, m=len(pairs), z=z, indptr=indptr, indices=indices, profiles=prof
    )
