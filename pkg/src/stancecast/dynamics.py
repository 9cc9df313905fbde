"""Per-message stance dynamics: persistence update, transition, delivery.

``apply_att`` is the single-message procedure used by both propagation
channels: compute the influence probability, update the receiver's stance
persistence, then its stance, keeping the stance-class index in sync.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    BadStanceValueError,
    InvalidSeedStanceError,
    ProbabilityOutOfRangeError,
    SameNodeError,
    UnknownSenderError,
)
from .graph import (
    KNOWN_STANCES,
    STANCE_UNKNOWN,
    SocialGraph,
    StanceIndex,
    is_stance,
)
from .params import SimParams

ADJACENT = "adjacent"
NONADJACENT = "nonadjacent"


@dataclass(frozen=True)
class PersistenceEntry:
    """Stance persistence of one (node, topic) pair.

    ``a_value`` is the current persistence in [0, 1]; ``msg_count`` the
    number of messages received so far for this pair.
    """

    a_value: float
    msg_count: int


@dataclass(frozen=True)
class StanceChange:
    """One influence attempt: receiver, topic, stances, sender, p, channel."""

    node: int
    topic: int
    old_stance: float
    new_stance: float
    source_node: int
    probability: float
    channel: str
    round: int

    @property
    def activated(self) -> bool:
        return self.old_stance == STANCE_UNKNOWN and self.new_stance != STANCE_UNKNOWN

    @property
    def changed(self) -> bool:
        return self.old_stance != self.new_stance


class SimState:
    """Mutable per-run state: live profiles, persistence, index, memories.

    ``profiles`` / ``avals`` / ``counts`` are (n, z) arrays; ``v_adj`` and
    ``v_new`` are (z, n) boolean masks holding, per topic, the nodes already
    reached through the adjacent channel and the spreader set.
    """

    def __init__(self, g: SocialGraph, params: SimParams, seeds=None):
        self.params = params
        self.n = g.n
        self.z = g.z
        self.profiles = g.profiles.copy()
        if seeds:
            for j, stances in seeds.items():
                g.check_topic(int(j))
                for node, stance in stances.items():
                    g.check_node(int(node))
                    stance = float(stance)
                    if stance not in KNOWN_STANCES:
                        raise InvalidSeedStanceError(
                            f"seed stance {stance!r} for node {node}, topic {j} "
                            "must be 0, 0.5 or 1"
                        )
                    self.profiles[int(node), int(j)] = stance
        self.avals = np.full((g.n, g.z), params.initial_persistence_A0)
        self.counts = np.zeros((g.n, g.z), dtype=np.int64)
        self.index = StanceIndex.from_profiles(self.profiles)
        self.v_adj = np.zeros((g.z, g.n), dtype=np.bool_)
        self.v_new = (self.profiles != STANCE_UNKNOWN).T.copy()
        # per-topic spreader snapshot of the round in progress
        self.round_spreaders: dict[int, np.ndarray] = {}

    def stance(self, v: int, j: int) -> float:
        return float(self.profiles[v, j])

    def persistence(self, v: int, j: int) -> PersistenceEntry:
        return PersistenceEntry(float(self.avals[v, j]), int(self.counts[v, j]))

    def active(self, j: int) -> set[int]:
        """Current spreader set V_new for topic j."""
        return set(np.flatnonzero(self.v_new[j]).tolist())

    def adjacency_memory(self, j: int) -> set[int]:
        """Nodes already reached through an edge for topic j."""
        return set(np.flatnonzero(self.v_adj[j]).tolist())

    def known_count(self, j: int) -> int:
        return int(np.count_nonzero(self.profiles[:, j] != STANCE_UNKNOWN))


def update_persistence(state: SimState, v: int, j: int, t_u, p: float) -> float:
    """Apply one message's persistence update to receiver v on topic j.

    Increments the message counter to k and moves persistence by
    (same - |t_u - t_v|) * p / k, clamped to [0, 1]; agreeing messages
    raise it, disagreeing ones lower it. Returns the new value.
    """
    if not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRangeError(f"p = {p!r} outside [0, 1]")
    t_u = float(t_u)
    if t_u not in KNOWN_STANCES:
        raise UnknownSenderError(f"sender stance {t_u!r} must be known")
    k = int(state.counts[v, j]) + 1
    state.counts[v, j] = k
    a = kernels.persistence_update(
        float(state.avals[v, j]), k, float(state.profiles[v, j]), t_u, p
    )
    state.avals[v, j] = a
    return float(a)


def transition(t_v, t_u, p: float, a: float, epsilon_tie: str = "zero") -> float:
    """Next stance of a receiver at t_v after a message from t_u.

    Unknown or neutral receivers adopt t_u when p >= a, else turn neutral.
    Committed receivers keep their stance against agreement, and move half
    a step toward neutral when p > a; at p == a the ``epsilon_tie`` policy
    decides (default: no change).
    """
    t_v, t_u = float(t_v), float(t_u)
    for value in (t_v, t_u):
        if not is_stance(value):
            raise BadStanceValueError(f"stance {value!r} not in {{-1, 0, 0.5, 1}}")
    if t_u == STANCE_UNKNOWN:
        raise UnknownSenderError("sender stance is unknown (-1)")
    tie_eps = 1.0 if epsilon_tie == "one" else 0.0
    return float(kernels.transition(t_v, t_u, p, a, tie_eps))


def apply_att(g: SocialGraph, state: SimState, q: int, v: int, j: int,
              round_no: int, channel: str) -> StanceChange:
    """Deliver one message from sender v to receiver q on topic j.

    Computes the influence probability from the live profiles (delta picked
    by actual adjacency), updates persistence, applies the transition and
    re-files q in the stance index if its stance changed.
    """
    g.check_node(q)
    g.check_node(v)
    g.check_topic(j)
    if q == v:
        raise SameNodeError(f"node {q} cannot influence itself")
    if state.profiles[v, j] == STANCE_UNKNOWN:
        raise UnknownSenderError(f"sender {v} has no known stance on topic {j}")
    delta = (state.params.delta_adjacent if g.has_edge(v, q)
             else state.params.delta_nonadjacent)
    old, new, p = kernels.deliver(
        state.profiles, state.avals, state.counts, q, v, j,
        delta, state.params.lambda_, state.params.mu, state.params.tie_epsilon,
    )
    if old != new:
        state.index.move(j, int(q), float(old), float(new))
        if old == STANCE_UNKNOWN:
            state.v_new[j, q] = True
    return StanceChange(
        node=int(q), topic=int(j), old_stance=float(old), new_stance=float(new),
        source_node=int(v), probability=float(p), channel=channel, round=round_no,
    )
