import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpppart.errors import ConfigError
from fpppart.finite_field import prime_power
from fpppart.graph_io import gen_complete
from fpppart.matching import perfect_matching
from fpppart.partitioners import (
    MASK64,
    Method,
    Partitioner,
    PartitionerConfig,
    SurplusPolicy,
    assign_chunks,
    edge2d_assign,
    fpp_assign,
    mix64,
    mix64_array,
    pair_hash,
    pair_hash_array,
    partition_stream,
    plane_size_for,
    psi,
    torus_assign,
    torus_intersection,
    torus_subset,
)
from fpppart.projective_plane import build_plane

ids = st.integers(0, MASK64)


def brute_plane_size(n):
    best = None
    for q in range(2, n):
        if q * q + q + 1 > n:
            break
        if prime_power(q):
            best = (q, q * q + q + 1)
    return best


def test_plane_size_examples():
    assert plane_size_for(651) == (25, 651)
    assert plane_size_for(381) == (19, 381)
    assert plane_size_for(400) == (19, 381)
    assert plane_size_for(7) == (2, 7)


def test_plane_size_against_scan():
    for n in range(7, 3000):
        assert plane_size_for(n) == brute_plane_size(n)


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_plane_size_too_small(n):
    with pytest.raises(ConfigError):
        plane_size_for(n)


def test_psi():
    assert psi(7, 7) == 0
    assert psi(13, 7) == 6
    assert psi(0, 91) == 0


def test_fpp_assign_examples():
    plane = build_plane(2)
    assert fpp_assign(plane, None, 0, 0, 1) == 4
    assert plane.points[4].tolist() == [0, 1, 0]
    assert fpp_assign(plane, None, 0, 6, 4) == 0
    phi = perfect_matching(plane)
    pid = fpp_assign(plane, phi, 0, 0, 7)
    assert pid == phi[0] and pid in {4, 5, 6}


def test_fpp_same_line_is_seeded_and_order_free():
    plane = build_plane(3)
    for u, v in [(0, 13), (5, 5), (1, 14), (26, 39)]:
        picks = {fpp_assign(plane, None, seed, u, v) for seed in range(50)}
        assert picks <= plane.line_set(psi(u, 13))
        assert len(picks) > 1  # seed actually matters
        for seed in range(5):
            assert fpp_assign(plane, None, seed, u, v) == fpp_assign(plane, None, seed, v, u)


def test_edge2d_examples():
    assert edge2d_assign(4, 0, 1) == 1
    assert edge2d_assign(4, 2, 2) == 0
    assert edge2d_assign(9, 4, 5) == 5


def test_edge2d_folds_excess_blocks():
    # n = 7 -> 3x3 grid, blocks 7 and 8 merge into 0 and 1
    assert edge2d_assign(7, 2, 1) == 0
    assert edge2d_assign(7, 2, 2) == 1
    assert {edge2d_assign(7, u, v) for u in range(3) for v in range(3)} == set(range(7))


def test_torus_subset_shape():
    for s in range(2, 9):
        for b in range(s * s):
            assert len(torus_subset(s, b)) == s + s // 2


def test_torus_example_pair():
    s = 4
    a, b = 0 * s + 0, 1 * s + 2
    sa, sb = torus_subset(s, a), torus_subset(s, b)
    assert sb == {2, 6, 10, 14, 1 * s + 3, 1 * s + 0}
    assert (1 * s + 0) in sa & sb
    assert set(torus_intersection(s, a, b)) == sa & sb


def test_torus_all_pairs_intersect_n16():
    subsets = [torus_subset(4, b) for b in range(16)]
    assert all(x & y for x in subsets for y in subsets)


def test_torus_same_column_keeps_column():
    n, s = 16, 4
    for u, v in [(1, 5), (2, 14), (3, 7)]:
        assert u % s == v % s
        for seed in range(10):
            assert torus_assign(n, seed, u, v) % s == u % s


def test_hash_scalar_and_vector_agree():
    rng = np.random.default_rng(7)
    xs = rng.integers(0, 2**63, 1000, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    assert mix64_array(xs).tolist() == [mix64(int(x)) for x in xs]
    ys = rng.integers(0, 2**63, 1000, dtype=np.uint64)
    got = pair_hash_array(12345, xs, ys).tolist()
    assert got == [pair_hash(12345, int(a), int(b)) for a, b in zip(xs, ys)]
    assert pair_hash(1, 3, 9) == pair_hash(1, 9, 3)


CONFIGS = [
    PartitionerConfig(Method.FPP, 7, 3),
    PartitionerConfig(Method.FPP, 13, 11),
    PartitionerConfig(Method.FPP, 40, 2, SurplusPolicy.FOLD),
    PartitionerConfig(Method.FPP, 40, 2, SurplusPolicy.LEAVE_EMPTY),
    PartitionerConfig(Method.DFPP, 21),
    PartitionerConfig(Method.DFPP, 60, surplus=SurplusPolicy.FOLD),
    PartitionerConfig(Method.EDGE2D, 4),
    PartitionerConfig(Method.EDGE2D, 10),
    PartitionerConfig(Method.TORUS, 16, 4),
    PartitionerConfig(Method.TORUS, 23, 9),
    PartitionerConfig(Method.FPP, 31, 5, hash_ids=True),
    PartitionerConfig(Method.TORUS, 9, 5, hash_ids=True),
]


@pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: f"{c.method.value}-{c.parts}-{c.surplus.value}-{c.hash_ids}")
def test_vector_path_matches_scalar(cfg):
    part = Partitioner(cfg)
    rng = np.random.default_rng(cfg.parts)
    us = np.concatenate([rng.integers(0, 200, 400), rng.integers(0, 2**63, 100)]).astype(np.uint64)
    vs = np.concatenate([rng.integers(0, 200, 400), rng.integers(0, 2**63, 100)]).astype(np.uint64)
    vs[:50] = us[:50]  # self-loops
    vs[50:100] = us[50:100] + np.uint64(part.n_used)  # same-line for FPP
    got = part.assign_arrays(us, vs)
    assert got.tolist() == [part.assign(int(u), int(v)) for u, v in zip(us, vs)]
    assert ((got >= 0) & (got < cfg.parts)).all()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CONFIGS), ids, ids)
def test_assignment_within_both_subsets(cfg, u, v):
    part = Partitioner(cfg)
    pid = part.assign(u, v)
    assert 0 <= pid < cfg.parts
    assert pid in part.vertex_subset(u)
    assert pid in part.vertex_subset(v)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([c for c in CONFIGS if c.method is not Method.EDGE2D]), ids, ids)
def test_symmetric(cfg, u, v):
    part = Partitioner(cfg)
    assert part.assign(u, v) == part.assign(v, u)


def test_dfpp_same_line_uses_phi():
    part = Partitioner(PartitionerConfig(Method.DFPP, 13))
    phi = part.matching
    for i in range(13):
        for k in range(1, 4):
            assert part.assign(i, i + 13 * k) == phi[i]
            assert part.assign(i + 13 * k, i + 13 * (k + 1)) == phi[i]


def test_surplus_leave_empty_and_fold():
    edges = [(u, v) for u, v in gen_complete(60)]
    empty = Partitioner(PartitionerConfig(Method.FPP, 10))  # plane n' = 7
    pids = set(empty.assign(u, v) for u, v in edges)
    assert pids <= set(range(7))
    fold = Partitioner(PartitionerConfig(Method.FPP, 10, surplus=SurplusPolicy.FOLD))
    pids = [fold.assign(u, v) for u, v in edges]
    surplus_used = {p for p in pids if p >= 7}
    assert surplus_used == {7, 8, 9}
    for (u, v), p in zip(edges, pids):
        assert (p >= 7) == (u % 7 == v % 7)


def test_replica_bounds_on_k4_edge2d():
    part = Partitioner(PartitionerConfig(Method.EDGE2D, 4))
    hosts = {}
    for u, v in gen_complete(4):
        p = part.assign(u, v)
        hosts.setdefault(u, set()).add(p)
        hosts.setdefault(v, set()).add(p)
    assert max(len(h) for h in hosts.values()) <= 3


def test_partition_stream_example():
    edges = [(0, 1), (0, 3), (1, 5), (1, 4), (2, 0), (2, 3), (3, 4), (6, 4)]
    out = list(partition_stream(PartitionerConfig(Method.DFPP, 7), edges))
    assert len(out) == 8
    assert [(a.u, a.v) for a in out] == edges
    assert list(partition_stream(PartitionerConfig(Method.DFPP, 7), [])) == []


@pytest.mark.parametrize("method", list(Method))
def test_stream_independent_of_order_chunks_and_workers(method):
    cfg = PartitionerConfig(method, 13 if method in (Method.FPP, Method.DFPP) else 10, seed=99)
    edges = [(u, v) for u, v in gen_complete(80)]
    base = {(a.u, a.v): a.pid for a in partition_stream(cfg, edges)}
    rev = {(a.u, a.v): a.pid for a in partition_stream(cfg, edges[::-1], workers=3, chunk_size=17)}
    assert base == rev


def test_config_validation():
    with pytest.raises(ConfigError, match="minimum plane size 7"):
        PartitionerConfig(Method.FPP, 5)
    with pytest.raises(ConfigError):
        PartitionerConfig(Method.TORUS, 3)
    with pytest.raises(ConfigError):
        PartitionerConfig(Method.EDGE2D, 0)
    with pytest.raises(ConfigError):
        PartitionerConfig(Method.EDGE2D, 4, seed=-1)
    with pytest.raises(ValueError):
        PartitionerConfig("metis", 4)
    assert PartitionerConfig("edge2d", 1).method is Method.EDGE2D


def test_sqrt_sandwich_all_orders():
    for q in range(2, (1 << 16) + 1):
        if prime_power(q):
            n = q * q + q + 1
            assert math.sqrt(n) <= q + 1 <= math.sqrt(n) + 1


def test_bound_property_per_vertex():
    for q in (2, 3, 4, 5):
        n = q * q + q + 1
        part = Partitioner(PartitionerConfig(Method.FPP, n, seed=q))
        hosts = {}
        for u, v in itertools.combinations(range(3 * n), 2):
            hosts.setdefault(u, set()).add(part.assign(u, v))
            hosts.setdefault(v, set()).add(part.assign(u, v))
        for w, h in hosts.items():
            assert h <= part.plane.line_set(w % n)
            assert len(h) <= q + 1
