"""Topic similarity and pairwise influence probability.

All three operations are pure. ``influence_probability`` covers the four
notational cases (adjacent/non-adjacent sender x known/unknown receiver
topic) through the edge-dependent delta and the stance-factor case for an
unknown receiver stance.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import (
    BadStanceValueError,
    EmptyProfileError,
    LengthMismatchError,
    SameNodeError,
)
from .graph import SocialGraph, is_stance
from .params import SimParams


def topic_similarity(p_u, p_v) -> float:
    """Similarity sqrt(z) / (sqrt(z) + ||p_u - p_v||_2) of two profiles.

    1 for identical profiles; bounded below by 1/3 over the stance domain
    (worst case: every entry differs by |1 - (-1)| = 2).
    """
    a = np.asarray(p_u, dtype=np.float64)
    b = np.asarray(p_v, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise LengthMismatchError(f"profile lengths {a.shape} vs {b.shape}")
    if a.size == 0:
        raise EmptyProfileError("similarity undefined for zero topics")
    return float(kernels.similarity(np.stack([a, b]), 0, 1))


def stance_factor(t_v, t_u, lam: float, mu: float) -> float:
    """Stance weight f(t_v, t_u) of receiver stance t_v under sender t_u.

    1 when the receiver is unknown/neutral or agrees; ``lam`` when the
    stances are within 0.5; ``mu`` otherwise. Cases are checked in that
    order and the first match wins.
    """
    for value in (t_v, t_u):
        if not is_stance(value):
            raise BadStanceValueError(f"stance {value!r} not in {{-1, 0, 0.5, 1}}")
    return float(kernels.stance_factor(float(t_v), float(t_u), lam, mu))


def influence_probability(g: SocialGraph, u: int, v: int, j: int,
                          params: SimParams, *, profiles=None) -> float:
    """Influence P_j(u, v) of sender u on receiver v for topic j.

    delta is ``delta_adjacent`` when the edge (u, v) exists and
    ``delta_nonadjacent`` otherwise, multiplied by the profile similarity
    and the stance factor. Stances default to the graph's initial
    profiles; pass the live profile array during a simulation.
    """
    g.check_node(u)
    g.check_node(v)
    g.check_topic(j)
    if u == v:
        raise SameNodeError(f"node {u} cannot influence itself")
    prof = g.profiles if profiles is None else profiles
    delta = params.delta_adjacent if g.has_edge(u, v) else params.delta_nonadjacent
    sim = kernels.similarity(prof, u, v)
    f = kernels.stance_factor(prof[v, j], prof[u, j], params.lambda_, params.mu)
    return float(delta * sim * f)
