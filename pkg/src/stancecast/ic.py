"""Vanilla independent-cascade baseline.

Each newly active node gets exactly one Bernoulli attempt per inactive
out-neighbor, in the round after it activates; the process stops when a
round activates nobody. Frontier nodes and their neighbors are visited in
ascending id order, so a run is fully determined by (graph, params, seeds,
run_index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IdOutOfRangeError, RangeViolationError
from .graph import SocialGraph
from .rng import Rng


@dataclass(frozen=True)
class IcParams:
    """Uniform edge probability, or a per-edge override map (u, v) -> p."""

    edge_probability: float = 0.1
    edge_probabilities: dict | None = None
    rng_seed: int = 0
    max_rounds: int | None = None

    def validate(self) -> "IcParams":
        if not 0.0 <= self.edge_probability <= 1.0:
            raise RangeViolationError("edge_probability", self.edge_probability,
                                      "[0, 1]")
        for edge, p in (self.edge_probabilities or {}).items():
            if not 0.0 <= p <= 1.0:
                raise RangeViolationError(f"edge_probabilities[{edge}]", p, "[0, 1]")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise RangeViolationError("max_rounds", self.max_rounds,
                                      "positive integer or null")
        return self

    def probability(self, u: int, v: int) -> float:
        if self.edge_probabilities is not None:
            return self.edge_probabilities.get((u, v), self.edge_probability)
        return self.edge_probability


@dataclass
class IcTrace:
    """Per-round newly activated node sets, seeds included as round 0."""

    rounds: list[list[int]] = field(default_factory=list)

    @property
    def active(self) -> set[int]:
        return {v for batch in self.rounds for v in batch}

    @property
    def final_count(self) -> int:
        return sum(len(batch) for batch in self.rounds)


def run_ic(g: SocialGraph, params: IcParams, seeds, run_index: int = 0) -> IcTrace:
    """One cascade from the seed set; deterministic given the seed stream."""
    seed_list = sorted({int(v) for v in seeds})
    for v in seed_list:
        if not 0 <= v < g.n:
            raise IdOutOfRangeError(f"seed node {v} outside [0, {g.n})")
    rng = Rng(params.rng_seed, run_index)
    active = set(seed_list)
    trace = IcTrace(rounds=[list(seed_list)])
    frontier = seed_list
    rounds_left = params.max_rounds
    while frontier and (rounds_left is None or rounds_left > 0):
        batch = []
        for v in frontier:
            for q in g.out_neighbors(v):
                q = int(q)
                if q in active:
                    continue
                if rng.random() < params.probability(v, q):
                    active.add(q)
                    batch.append(q)
        batch.sort()
        if not batch:
            break
        trace.rounds.append(batch)
        frontier = batch
        if rounds_left is not None:
            rounds_left -= 1
    return trace


def mean_final_active(g: SocialGraph, params: IcParams, seeds,
                      runs: int) -> tuple[float, list[int]]:
    """Monte Carlo mean of the final active count over ``runs`` cascades."""
    counts = [run_ic(g, params, seeds, run_index=i).final_count
              for i in range(runs)]
    return float(np.mean(counts)), counts
