"""The round-based propagation loop over both influence channels.

Protocol (identical, by construction, to the naive reference used in the
acceptance suite):

* Profiles start from the graph and are overlaid with the seed stances;
  every node with a known stance is a spreader from round one.
* Each round processes topics in ascending order. Per topic, the spreader
  set is snapshotted first (nodes activated mid-round spread next round),
  the adjacency memory is cleared when ``adjacency_memory == "per_round"``,
  then the adjacent sweep runs, then the non-adjacent sweep.
* Adjacent sweep: spreaders in ascending order message their out-neighbors
  (ascending) that are not yet in the adjacency memory; each delivered
  receiver enters the memory.
* Non-adjacent sweep: the receiver pool is everything outside the adjacency
  memory. Senders are sampled from the snapshot (floor(r1 * size)); the
  receiver sample of size floor(r2 * pool) splits into floor(mix_r * s)
  topic-aware nodes and the rest topic-unaware, backfilling from the other
  pool on shortfall (aware overflow resolved first). Draws happen in the
  order senders, aware, unaware; zero-count draws consume no rng state.
  Every sampled receiver hears every sampled sender (ascending, self-pairs
  skipped), with the edge-dependent delta.

Randomness enters only through the sampling; message delivery itself is
deterministic. A run is fully determined by (graph, params, seeds,
run_index).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import ADJACENT, NONADJACENT, SimState, StanceChange
from .errors import EmptySeedsWarning
from .graph import STANCE_UNKNOWN, SocialGraph
from .params import SimParams
from .rng import Rng

_EVENT_COLUMNS = ("round", "topic", "node", "old", "new", "source", "p", "channel")
_CHANNEL_NAMES = (ADJACENT, NONADJACENT)


@dataclass(frozen=True)
class RoundSummary:
    """Stance-class tallies for one topic at the end of one round."""

    round: int
    topic: int
    unknown: int
    oppose: int
    neutral: int
    support: int
    newly_activated: int


class _EventsView:
    """Sequence adapter turning the columnar event store into records."""

    def __init__(self, trace: "SimTrace"):
        self._t = trace

    def __len__(self) -> int:
        return self._t.ev_node.shape[0]

    def __getitem__(self, i: int) -> StanceChange:
        t = self._t
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return StanceChange(
            node=int(t.ev_node[i]), topic=int(t.ev_topic[i]),
            old_stance=float(t.ev_old[i]), new_stance=float(t.ev_new[i]),
            source_node=int(t.ev_source[i]), probability=float(t.ev_p[i]),
            channel=_CHANNEL_NAMES[t.ev_channel[i]], round=int(t.ev_round[i]),
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


class SimTrace:
    """Ordered event log of a run plus per-round, per-topic summaries.

    Events are stored columnar (one numpy array per field) so large runs
    stay cheap; ``events`` exposes them as :class:`StanceChange` records.
    """

    def __init__(self, n: int, z: int, params: SimParams, columns: dict,
                 round_summaries: list[RoundSummary]):
        self.n = n
        self.z = z
        self.params = params
        self.ev_round = columns["round"]
        self.ev_topic = columns["topic"]
        self.ev_node = columns["node"]
        self.ev_old = columns["old"]
        self.ev_new = columns["new"]
        self.ev_source = columns["source"]
        self.ev_p = columns["p"]
        self.ev_channel = columns["channel"]
        self.round_summaries = list(round_summaries)

    @property
    def events(self) -> _EventsView:
        return _EventsView(self)

    def summary_grid(self) -> dict[tuple[int, int], RoundSummary]:
        return {(s.round, s.topic): s for s in self.round_summaries}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimTrace):
            return NotImplemented
        return (
            self.n == other.n
            and self.z == other.z
            and self.params == other.params
            and self.round_summaries == other.round_summaries
            and all(
                np.array_equal(getattr(self, f"ev_{c}"), getattr(other, f"ev_{c}"))
                for c in _EVENT_COLUMNS
            )
        )

    def __repr__(self) -> str:
        return (f"SimTrace(n={self.n}, z={self.z}, events={len(self.events)}, "
                f"rounds={self.params.rounds_K})")


class _EventAccumulator:
    """Collects per-step columnar chunks and assembles the final columns."""

    def __init__(self):
        self.chunks = []

    def add(self, rnd, j, channel, node, src, old, new, p):
        count = node.shape[0]
        if count == 0:
            return
        self.chunks.append({
            "round": np.full(count, rnd, dtype=np.int32),
            "topic": np.full(count, j, dtype=np.int32),
            "node": node, "source": src, "old": old, "new": new, "p": p,
            "channel": np.full(count, channel, dtype=np.int8),
        })

    def columns(self) -> dict:
        out = {}
        dtypes = {"round": np.int32, "topic": np.int32, "node": np.int64,
                  "old": np.float64, "new": np.float64, "source": np.int64,
                  "p": np.float64, "channel": np.int8}
        for name in _EVENT_COLUMNS:
            if self.chunks:
                out[name] = np.concatenate([c[name] for c in self.chunks])
            else:
                out[name] = np.empty(0, dtype=dtypes[name])
        return out


def _floor_count(fraction: float, size: int) -> int:
    return int(math.floor(fraction * size))


def _adjacent_chunk(g: SocialGraph, state: SimState, j: int, spreaders):
    """Run the adjacent sweep kernel; returns event column arrays."""
    p = state.params
    cap = int((g.indptr[spreaders + 1] - g.indptr[spreaders]).sum())
    node = np.empty(cap, dtype=np.int64)
    src = np.empty(cap, dtype=np.int64)
    old = np.empty(cap, dtype=np.float64)
    new = np.empty(cap, dtype=np.float64)
    prob = np.empty(cap, dtype=np.float64)
    n_ev = kernels.adjacent_pass(
        g.indptr, g.indices, state.profiles, state.avals, state.counts,
        state.v_adj[j], spreaders, j,
        p.delta_adjacent, p.lambda_, p.mu, p.tie_epsilon,
        node, src, old, new, prob,
    )
    return (node[:n_ev].copy(), src[:n_ev].copy(), old[:n_ev].copy(),
            new[:n_ev].copy(), prob[:n_ev].copy())


def _nadj_receivers(state: SimState, j: int, rng: Rng):
    """Sample the non-adjacent receiver set per the documented quotas."""
    p = state.params
    non_adj = np.flatnonzero(~state.v_adj[j]).astype(np.int64)
    s = _floor_count(p.r2, non_adj.shape[0])
    column = state.profiles[non_adj, j]
    aware = non_adj[column != STANCE_UNKNOWN]
    unaware = non_adj[column == STANCE_UNKNOWN]
    quota_aware = _floor_count(p.mix_r, s)
    quota_unaware = s - quota_aware
    if quota_aware > aware.shape[0]:
        quota_unaware += quota_aware - aware.shape[0]
        quota_aware = aware.shape[0]
    if quota_unaware > unaware.shape[0]:
        quota_aware += quota_unaware - unaware.shape[0]
        quota_unaware = unaware.shape[0]
    picked = np.concatenate([
        rng.sample(aware, quota_aware), rng.sample(unaware, quota_unaware)
    ])
    picked.sort()
    return picked


def _nadj_chunk(g: SocialGraph, state: SimState, j: int, receivers, senders):
    """Run the non-adjacent sweep kernel; returns event column arrays."""
    p = state.params
    cap = receivers.shape[0] * senders.shape[0]
    node = np.empty(cap, dtype=np.int64)
    src = np.empty(cap, dtype=np.int64)
    old = np.empty(cap, dtype=np.float64)
    new = np.empty(cap, dtype=np.float64)
    prob = np.empty(cap, dtype=np.float64)
    n_ev = kernels.nadj_pass(
        g.indptr, g.indices, state.profiles, state.avals, state.counts,
        receivers, senders, j,
        p.delta_adjacent, p.delta_nonadjacent, p.lambda_, p.mu, p.tie_epsilon,
        node, src, old, new, prob,
    )
    return (node[:n_ev].copy(), src[:n_ev].copy(), old[:n_ev].copy(),
            new[:n_ev].copy(), prob[:n_ev].copy())


def _absorb(state: SimState, j: int, chunk) -> int:
    """Fold a chunk's activations into v_new and the index; count them."""
    node, _src, old, new, _p = chunk
    activated = node[(old == STANCE_UNKNOWN) & (new != STANCE_UNKNOWN)]
    if activated.shape[0]:
        state.v_new[j, activated] = True
    state.index.refresh_topic(j, state.profiles[:, j])
    return int(activated.shape[0])


def _spreader_snapshot(state: SimState, j: int):
    if j in state.round_spreaders:
        return state.round_spreaders[j]
    return np.flatnonzero(state.v_new[j]).astype(np.int64)


def adjacent_step(g: SocialGraph, state: SimState, j: int,
                  round_no: int) -> list[StanceChange]:
    """One adjacent sweep for topic ``j``; returns the delivered events.

    Snapshots the spreader set at entry and leaves the snapshot on the
    state for the paired :func:`nadj_step` of the same round.
    """
    g.check_topic(j)
    spreaders = np.flatnonzero(state.v_new[j]).astype(np.int64)
    state.round_spreaders[j] = spreaders
    if state.params.adjacency_memory == "per_round":
        state.v_adj[j, :] = False
    chunk = _adjacent_chunk(g, state, j, spreaders)
    _absorb(state, j, chunk)
    return _chunk_to_changes(chunk, j, round_no, ADJACENT)


def nadj_step(g: SocialGraph, state: SimState, j: int, round_no: int,
              rng: Rng) -> list[StanceChange]:
    """One non-adjacent sweep for topic ``j``; returns the delivered events.

    Senders are sampled from the spreader snapshot taken by the adjacent
    step of the same round (or the live spreader set when called alone).
    """
    g.check_topic(j)
    spreaders = _spreader_snapshot(state, j)
    senders = rng.sample(spreaders, _floor_count(state.params.r1,
                                                 spreaders.shape[0]))
    receivers = _nadj_receivers(state, j, rng)
    chunk = _nadj_chunk(g, state, j, receivers, senders)
    _absorb(state, j, chunk)
    return _chunk_to_changes(chunk, j, round_no, NONADJACENT)


def _chunk_to_changes(chunk, j, round_no, channel) -> list[StanceChange]:
    node, src, old, new, p = chunk
    return [
        StanceChange(node=int(node[i]), topic=j, old_stance=float(old[i]),
                     new_stance=float(new[i]), source_node=int(src[i]),
                     probability=float(p[i]), channel=channel, round=round_no)
        for i in range(node.shape[0])
    ]


def _summarize(state: SimState, rnd: int, j: int, activated: int) -> RoundSummary:
    column = state.profiles[:, j]
    return RoundSummary(
        round=rnd, topic=j,
        unknown=int(np.count_nonzero(column == -1.0)),
        oppose=int(np.count_nonzero(column == 0.0)),
        neutral=int(np.count_nonzero(column == 0.5)),
        support=int(np.count_nonzero(column == 1.0)),
        newly_activated=activated,
    )


def run_simulation(g: SocialGraph, params: SimParams, seeds=None,
                   run_index: int = 0) -> tuple[SimTrace, SimState]:
    """Run the full cascade; returns the trace and the final state."""
    state = SimState(g, params, seeds)
    rng = Rng(params.normalized_seed(), run_index)
    acc = _EventAccumulator()
    summaries = [_summarize(state, 0, j, 0) for j in range(g.z)]
    if g.z and not state.v_new.any():
        warnings.warn("no seed stances: the run will produce no events",
                      EmptySeedsWarning, stacklevel=2)
    for rnd in range(1, params.rounds_K + 1):
        for j in range(g.z):
            spreaders = np.flatnonzero(state.v_new[j]).astype(np.int64)
            if params.adjacency_memory == "per_round":
                state.v_adj[j, :] = False
            chunk = _adjacent_chunk(g, state, j, spreaders)
            activated = _absorb(state, j, chunk)
            acc.add(rnd, j, 0, *chunk)

            senders = rng.sample(spreaders,
                                 _floor_count(params.r1, spreaders.shape[0]))
            receivers = _nadj_receivers(state, j, rng)
            chunk = _nadj_chunk(g, state, j, receivers, senders)
            activated += _absorb(state, j, chunk)
            acc.add(rnd, j, 1, *chunk)

            summaries.append(_summarize(state, rnd, j, activated))
    trace = SimTrace(g.n, g.z, params, acc.columns(), summaries)
    return trace, state


def run_tsa(g: SocialGraph, params: SimParams, seeds=None,
            run_index: int = 0) -> SimTrace:
    """Run the cascade and return its trace."""
    trace, _state = run_simulation(g, params, seeds, run_index)
    return trace
