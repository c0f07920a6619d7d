import itertools

import numpy as np
import pytest

from fpppart.errors import ConfigError, DomainError
from fpppart.finite_field import FieldSpec, encode, ff_add, ff_mul
from fpppart.projective_plane import (
    ProjPlane,
    build_plane,
    check_plane_axioms,
    line_intersection,
    normalize,
    plane_to_dict,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9]


def brute_dot(spec, a, b):
    acc = spec.zero()
    for x, y in zip(a, b):
        acc = ff_add(spec, acc, ff_mul(spec, spec.element(int(x)), spec.element(int(y))))
    return acc


def test_normalize_examples():
    gf5 = FieldSpec(5)
    assert normalize(gf5, (0, 2, 4)).values == (0, 1, 2)
    # oracle: scan the 4 scalar multiples for the one whose leading entry is 1
    multiples = [tuple(c * s % 5 for c in (0, 2, 4)) for s in range(1, 5)]
    assert [m for m in multiples if m[1] == 1] == [(0, 1, 2)]
    assert normalize(gf5, (0, 0, 3)).values == (0, 0, 1)
    for a, b in itertools.product(range(5), repeat=2):
        assert normalize(gf5, (1, a, b)).values == (1, a, b)


def test_normalize_accepts_field_elements_and_is_idempotent():
    spec = FieldSpec(3, 2)
    for raw in itertools.product(range(9), repeat=3):
        if raw == (0, 0, 0):
            continue
        pt = normalize(spec, raw)
        assert normalize(spec, pt.coords) == pt
        lead = next(v for v in pt.values if v)
        assert lead == 1


def test_normalize_zero_vector():
    with pytest.raises(DomainError):
        normalize(FieldSpec(5), (0, 0, 0))


@pytest.mark.parametrize("q,points,per_line", [(2, 7, 3), (3, 13, 4), (4, 21, 5)])
def test_build_plane_sizes(q, points, per_line):
    plane = build_plane(q)
    assert plane.n == points
    assert plane.points.shape == (points, 3)
    assert plane.lines.shape == (points, per_line)


def test_q2_canonical_order_and_lines():
    plane = build_plane(2)
    assert plane.points.tolist() == [[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1], [0, 1, 0], [0, 1, 1], [0, 0, 1]]
    # the seven lines of the Z_2 example, by normal
    want = {
        (1, 0, 0): {(0, 1, 0), (0, 1, 1), (0, 0, 1)},
        (1, 0, 1): {(1, 0, 1), (1, 1, 1), (0, 1, 0)},
        (1, 1, 0): {(1, 1, 0), (1, 1, 1), (0, 0, 1)},
        (1, 1, 1): {(1, 0, 1), (1, 1, 0), (0, 1, 1)},
        (0, 1, 0): {(1, 0, 0), (1, 0, 1), (0, 0, 1)},
        (0, 1, 1): {(1, 0, 0), (1, 1, 1), (0, 1, 1)},
        (0, 0, 1): {(1, 0, 0), (1, 1, 0), (0, 1, 0)},
    }
    for i in range(7):
        normal = tuple(plane.points[i].tolist())
        got = {tuple(plane.points[j].tolist()) for j in plane.lines[i]}
        assert got == want[normal]


def test_line_intersection_examples():
    plane = build_plane(2)
    p = plane.index_of
    assert plane.points[line_intersection(plane, p((1, 0, 0)), p((1, 0, 1)))].tolist() == [0, 1, 0]
    assert plane.points[line_intersection(plane, p((0, 1, 0)), p((0, 0, 1)))].tolist() == [1, 0, 0]
    assert line_intersection(plane, 0, 1) == 4


def test_line_intersection_same_line():
    with pytest.raises(DomainError):
        build_plane(3).intersection(2, 2)


@pytest.mark.parametrize("q", ORDERS)
def test_lines_match_bruteforce_dot_products(q):
    plane = build_plane(q)
    spec = plane.spec
    zero = spec.zero()
    for i in range(plane.n):
        brute = {j for j in range(plane.n) if brute_dot(spec, plane.points[i], plane.points[j]) == zero}
        assert brute == plane.line_set(i)


@pytest.mark.parametrize("q", ORDERS)
def test_intersection_table_matches_set_intersection(q):
    plane = build_plane(q)
    for i, j in itertools.combinations(range(plane.n), 2):
        common = plane.line_set(i) & plane.line_set(j)
        assert common == {plane.intersection(i, j)} == {plane.intersection(j, i)}


@pytest.mark.parametrize("q", ORDERS)
def test_axioms(q):
    res = check_plane_axioms(build_plane(q))
    assert all(res.values()), res


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_points_join_on_exactly_one_line_bruteforce(q):
    plane = build_plane(q)
    lines = [plane.line_set(i) for i in range(plane.n)]
    for a, b in itertools.combinations(range(plane.n), 2):
        assert sum(1 for L in lines if a in L and b in L) == 1


def test_duality_and_incidence_counts():
    for q in ORDERS:
        plane = build_plane(q)
        inc = plane.incidence()
        assert np.array_equal(inc, inc.T)
        assert (inc.sum(axis=0) == q + 1).all() and (inc.sum(axis=1) == q + 1).all()


def test_deterministic_construction():
    a, b = ProjPlane(9), ProjPlane(9)
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(a.lines, b.lines)
    assert np.array_equal(a._table, b._table)


def test_on_demand_intersection_matches_table():
    plane = ProjPlane(7)
    rng = np.random.default_rng(1)
    i = rng.integers(0, plane.n, 500)
    j = rng.integers(0, plane.n, 500)
    tabled = plane.intersect_many(i, j)
    table, plane._table = plane._table, None
    try:
        assert np.array_equal(plane.intersect_many(i, j), tabled)
    finally:
        plane._table = table


def test_large_plane_without_table():
    plane = build_plane(53)  # n = 2863 exceeds the dense-table limit
    assert plane._table is None
    a, b = 10, 2000
    assert plane.line_set(a) & plane.line_set(b) == {plane.intersection(a, b)}


@pytest.mark.parametrize("q", [1, 6, 10, 12])
def test_rejects_non_prime_powers(q):
    with pytest.raises(ConfigError):
        build_plane(q)


def test_point_round_trip():
    plane = build_plane(8)
    for i in range(plane.n):
        assert plane.index_of(plane.point(i)) == i
        assert tuple(encode(c) for c in plane.point(i).coords) == tuple(plane.points[i].tolist())


def test_plane_to_dict():
    d = plane_to_dict(build_plane(2))
    assert d["n"] == 7 and len(d["points"]) == 7 and len(d["lines"]) == 7
    assert d["lines"][0] == [4, 5, 6]
