"""Hot inner-loop kernels over numpy arrays.

Every function here is written as plain numpy-indexing Python and compiled
with numba ``@njit`` when available. Set ``STANCECAST_BACKEND=python`` to
skip compilation and run the same code uncompiled (the pure-numpy fallback),
or ``STANCECAST_BACKEND=numba`` to require numba. The default (``auto``)
uses numba when importable. Both paths execute identical floating-point
operations in identical order, so results are bit-for-bit equal.

These kernels are the arithmetic ground truth for the whole package: the
public scalar operations in :mod:`stancecast.influence` and
:mod:`stancecast.dynamics` delegate to them after validating inputs.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_FLAG = "STANCECAST_BACKEND"
_choice = os.environ.get(_ENV_FLAG, "auto").lower()
if _choice not in ("auto", "numba", "python"):
    raise ValueError(f"{_ENV_FLAG} must be auto, numba or python, got {_choice!r}")

if _choice == "python":
    USE_NUMBA = False
else:
    try:
        from numba import njit
        USE_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "python"


def _jit(fn):
    return njit(cache=True)(fn) if USE_NUMBA else fn


@_jit
def similarity(profiles, u, v):
    """Topic similarity sqrt(z) / (sqrt(z) + ||p_u - p_v||) of two nodes."""
    z = profiles.shape[1]
    acc = 0.0
    for i in range(z):
        d = profiles[u, i] - profiles[v, i]
        acc += d * d
    sq = math.sqrt(z)
    return sq / (sq + math.sqrt(acc))


@_jit
def stance_factor(t_v, t_u, lam, mu):
    """Stance weight f(t_v, t_u): 1, lam or mu, first matching case wins."""
    if t_v == -1.0 or t_v == 0.5 or t_v == t_u:
        return 1.0
    if abs(t_v - t_u) <= 0.5:
        return lam
    return mu


@_jit
def persistence_update(a, k, t_v, t_u, p):
    """One incremental persistence step: new a after the k-th message."""
    diff = abs(t_u - t_v)
    same = 1.0 if t_u == t_v else 0.0
    a = a - (diff * p - same * p) / k
    if a < 0.0:
        return 0.0
    if a > 1.0:
        return 1.0
    return a


@_jit
def transition(t_v, t_u, p, a, tie_eps):
    """Next stance of a receiver at t_v hit by a sender at t_u."""
    if t_v == -1.0 or t_v == 0.5:
        if p >= a:
            return t_u
        return 0.5
    if t_u == t_v:
        return t_v
    if p > a:
        eps = 1.0
    elif p < a:
        eps = 0.0
    else:
        eps = tie_eps
    if t_v == 0.0:
        return t_v + eps * 0.5
    return t_v - eps * 0.5


@_jit
def edge_exists(indptr, indices, u, v):
    """Binary search for v in the sorted out-neighbor row of u."""
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if indices[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < indptr[u + 1] and indices[lo] == v


@_jit
def deliver(profiles, avals, counts, q, v, j, delta, lam, mu, tie_eps):
    """Deliver one message from sender v to receiver q on topic j.

    Computes the influence probability, applies the persistence update,
    then the stance transition, mutating profiles/avals/counts in place.
    Returns (old_stance, new_stance, probability).
    """
    t_u = profiles[v, j]
    old = profiles[q, j]
    p = delta * similarity(profiles, v, q) * stance_factor(old, t_u, lam, mu)
    k = counts[q, j] + 1
    counts[q, j] = k
    a = persistence_update(avals[q, j], k, old, t_u, p)
    avals[q, j] = a
    new = transition(old, t_u, p, a, tie_eps)
    profiles[q, j] = new
    return old, new, p


@_jit
def adjacent_pass(indptr, indices, profiles, avals, counts, vadj_row, spreaders,
                  j, delta_adj, lam, mu, tie_eps,
                  ev_node, ev_src, ev_old, ev_new, ev_p):
    """Adjacent-channel sweep of one round for one topic.

    Each spreader messages its out-neighbors not yet in the adjacency
    memory; delivered receivers enter the memory. Event fields are written
    into the preallocated buffers; returns the event count.
    """
    n_ev = 0
    for si in range(spreaders.shape[0]):
        v = spreaders[si]
        for e in range(indptr[v], indptr[v + 1]):
            q = indices[e]
            if vadj_row[q]:
                continue
            old, new, p = deliver(profiles, avals, counts, q, v, j,
                                  delta_adj, lam, mu, tie_eps)
            vadj_row[q] = True
            ev_node[n_ev] = q
            ev_src[n_ev] = v
            ev_old[n_ev] = old
            ev_new[n_ev] = new
            ev_p[n_ev] = p
            n_ev += 1
    return n_ev


@_jit
def nadj_pass(indptr, indices, profiles, avals, counts, receivers, senders,
              j, delta_adj, delta_nonadj, lam, mu, tie_eps,
              ev_node, ev_src, ev_old, ev_new, ev_p):
    """Non-adjacent sweep: every sampled receiver hears every sampled sender.

    The edge-dependent delta still applies (a sampled pair may happen to be
    connected). Self-pairs are skipped. Returns the event count.
    """
    n_ev = 0
    for qi in range(receivers.shape[0]):
        q = receivers[qi]
        for vi in range(senders.shape[0]):
            v = senders[vi]
            if v == q:
                continue
            if edge_exists(indptr, indices, v, q):
                delta = delta_adj
            else:
                delta = delta_nonadj
            old, new, p = deliver(profiles, avals, counts, q, v, j,
                                  delta, lam, mu, tie_eps)
            ev_node[n_ev] = q
            ev_src[n_ev] = v
            ev_old[n_ev] = old
            ev_new[n_ev] = new
            ev_p[n_ev] = p
            n_ev += 1
    return n_ev


def warmup():
    """Trigger JIT compilation of all kernels on a two-node toy problem."""
    indptr = np.array([0, 1, 1], dtype=np.int64)
    indices = np.array([1], dtype=np.int64)
    profiles = np.array([[1.0], [-1.0]])
    avals = np.full((2, 1), 0.5)
    counts = np.zeros((2, 1), dtype=np.int64)
    vadj = np.zeros(2, dtype=np.bool_)
    buf_i = np.zeros(4, dtype=np.int64)
    buf_f = np.zeros(4, dtype=np.float64)
    spread = np.array([0], dtype=np.int64)
    adjacent_pass(indptr, indices, profiles, avals, counts, vadj, spread,
                  0, 0.8, 0.7, 0.2, 0.0,
                  buf_i, buf_i.copy(), buf_f, buf_f.copy(), buf_f.copy())
    nadj_pass(indptr, indices, profiles, avals, counts, spread,
              np.array([1], dtype=np.int64),
              0, 0.8, 0.2, 0.7, 0.2, 0.0,
              buf_i, buf_i.copy(), buf_f, buf_f.copy(), buf_f.copy())
