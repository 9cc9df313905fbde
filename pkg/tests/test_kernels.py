"""Kernel-level checks: scalar ops agree with the public API, and the
compiled and uncompiled paths of every kernel produce identical results."""

import numpy as np
import pytest

import stancecast as sc
from stancecast import kernels
from conftest import make_random_case, trace_event_tuples


def test_backend_reports_itself():
    assert kernels.BACKEND in ("numba", "python")


def test_scalar_kernels_match_public_ops():
    rng = np.random.default_rng(17)
    codes = np.array([-1.0, 0.0, 0.5, 1.0])
    for _ in range(500):
        z = int(rng.integers(1, 5))
        a = rng.choice(codes, size=z)
        b = rng.choice(codes, size=z)
        assert kernels.similarity(np.stack([a, b]), 0, 1) == \
            sc.topic_similarity(a, b)
        t_v, t_u = rng.choice(codes), rng.choice(codes[1:])
        lam, mu = rng.uniform(0.5, 1.0), rng.uniform(0.0, 0.5)
        assert kernels.stance_factor(t_v, t_u, lam, mu) == \
            sc.stance_factor(t_v, t_u, lam, mu)
        p, av = rng.uniform(0, 1), rng.uniform(0, 1)
        assert kernels.transition(t_v, t_u, p, av, 0.0) == \
            sc.transition(t_v, t_u, p, av, "zero")
        assert kernels.transition(t_v, t_u, p, av, 1.0) == \
            sc.transition(t_v, t_u, p, av, "one")


def test_deliver_matches_apply_att():
    rng = np.random.default_rng(23)
    for _ in range(200):
        case = make_random_case(rng, max_n=8, max_z=2)
        g = sc.build_graph(case["n"], case["z"], case["edges"],
                           case["profiles"])
        state_a = sc.SimState(g, case["params"], case["seeds"])
        state_b = sc.SimState(g, case["params"], case["seeds"])
        senders = np.flatnonzero(state_a.profiles[:, 0] != -1.0)
        if senders.size == 0:
            continue
        v = int(rng.choice(senders))
        candidates = [q for q in range(case["n"]) if q != v]
        q = int(rng.choice(candidates))
        change = sc.apply_att(g, state_a, q, v, 0, round_no=1,
                              channel="adjacent")
        delta = (case["params"].delta_adjacent if g.has_edge(v, q)
                 else case["params"].delta_nonadjacent)
        old, new, p = kernels.deliver(
            state_b.profiles, state_b.avals, state_b.counts, q, v, 0,
            delta, case["params"].lambda_, case["params"].mu,
            case["params"].tie_epsilon,
        )
        assert (change.old_stance, change.new_stance, change.probability) == \
            (old, new, p)
        assert np.array_equal(state_a.profiles, state_b.profiles)
        assert np.array_equal(state_a.avals, state_b.avals)
        assert np.array_equal(state_a.counts, state_b.counts)


def test_edge_exists_matches_graph():
    rng = np.random.default_rng(29)
    case = make_random_case(rng, max_n=10)
    g = sc.build_graph(case["n"], case["z"], case["edges"], case["profiles"])
    for u in range(g.n):
        for v in range(g.n):
            if u != v:
                assert bool(kernels.edge_exists(g.indptr, g.indices, u, v)) \
                    == g.has_edge(u, v)


@pytest.mark.skipif(not kernels.USE_NUMBA,
                    reason="compiled path unavailable in this process")
def test_compiled_and_python_paths_identical():
    # each jitted kernel carries its original python function; a full
    # simulation through both paths must give bit-identical traces
    rng = np.random.default_rng(37)
    names = ("similarity", "stance_factor", "persistence_update",
             "transition", "edge_exists", "deliver", "adjacent_pass",
             "nadj_pass")
    cases = []
    for _ in range(10):
        case = make_random_case(rng)
        g = sc.build_graph(case["n"], case["z"], case["edges"],
                           case["profiles"])
        trace, _ = sc.run_simulation(g, case["params"], case["seeds"])
        cases.append((g, case, trace))

    originals = {name: getattr(kernels, name) for name in names}
    try:
        for name in names:
            setattr(kernels, name, originals[name].py_func)
        for case_no, (g, case, compiled_trace) in enumerate(cases):
            plain_trace, _ = sc.run_simulation(g, case["params"],
                                               case["seeds"])
            assert plain_trace == compiled_trace, f"case {case_no} diverged"
            assert trace_event_tuples(plain_trace) == \
                trace_event_tuples(compiled_trace)
    finally:
        for name, fn in originals.items():
            setattr(kernels, name, fn)
