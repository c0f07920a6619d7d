"""The projective plane PG(2, q) with a fixed, reproducible enumeration.

Points are normalized homogeneous triples over GF(q) (first nonzero coordinate
equal to 1), stored as integer-encoded field elements and ordered as

    (1, a, b)  for a, b ascending        -> indices 0 .. q^2 - 1
    (0, 1, a)  for a ascending           -> indices q^2 .. q^2 + q - 1
    (0, 0, 1)                            -> index q^2 + q

Line ``i`` is the set of points orthogonal to point ``i`` (self-dual indexing),
so the subset family used by the partitioner is simply ``plane.lines``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .finite_field import FieldElement, FieldSpec, FieldTables, decode, encode, field_tables

MAX_PLANE_ORDER = 256
# the dense n x n intersection table is kept only up to this many points
MAX_TABLE_POINTS = 2048


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[FieldElement, FieldElement, FieldElement]

    @property
    def values(self) -> tuple[int, int, int]:
        return tuple(encode(c) for c in self.coords)

    def __repr__(self):
        return "({}:{}:{})".format(*self.values)


def _raw_values(spec: FieldSpec, raw) -> tuple[int, int, int]:
    if len(raw) != 3:
        raise DomainError("homogeneous coordinates need exactly 3 entries")
    vals = []
    for c in raw:
        if isinstance(c, FieldElement):
            if c.spec != spec:
                raise DomainError(f"element of GF({c.spec.q}) used with GF({spec.q})")
            vals.append(encode(c))
        else:
            vals.append(decode(spec, int(c)).value)
    return tuple(vals)


def normalize(spec: FieldSpec, raw: Sequence) -> ProjPoint:
    """Scale ``raw`` so that its first nonzero coordinate is 1.

    ``raw`` may hold :class:`FieldElement` objects or their integer encodings.
    """
    vals = _raw_values(spec, raw)
    lead = next((v for v in vals if v), None)
    if lead is None:
        raise DomainError("(0, 0, 0) is not a projective point")
    t = field_tables(spec)
    s = int(t.inv[lead])
    return ProjPoint(tuple(decode(spec, int(t.mul[s, v])) for v in vals))


def point_index(q: int, point) -> int:
    """Canonical index of a normalized point given as an integer triple."""
    u0, u1, u2 = (int(v) for v in point)
    if u0 == 1:
        return u1 * q + u2
    if u0 == 0 and u1 == 1:
        return q * q + u2
    if (u0, u1, u2) == (0, 0, 1):
        return q * q + q
    raise DomainError(f"{(u0, u1, u2)} is not a normalized point")


def canonical_points(q: int) -> np.ndarray:
    a = np.arange(q, dtype=np.int64)
    block1 = np.stack([np.ones(q * q, dtype=np.int64), np.repeat(a, q), np.tile(a, q)], axis=1)
    block2 = np.stack([np.zeros(q, dtype=np.int64), np.ones(q, dtype=np.int64), a], axis=1)
    return np.concatenate([block1, block2, np.array([[0, 0, 1]], dtype=np.int64)])


def _dot(t: FieldTables, x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    s = t.add[t.mul[x[0], ys[:, 0]], t.mul[x[1], ys[:, 1]]]
    return t.add[s, t.mul[x[2], ys[:, 2]]]


def _normalized_index(t: FieldTables, q: int, c: np.ndarray) -> np.ndarray:
    """Vectorized normalize + canonical index for rows of nonzero triples."""
    lead = np.where(c[:, 0] != 0, c[:, 0], np.where(c[:, 1] != 0, c[:, 1], c[:, 2]))
    if np.any(lead == 0):
        raise DomainError("zero vector has no projective index")
    s = t.inv[lead]
    u1 = t.mul[s, c[:, 1]]
    u2 = t.mul[s, c[:, 2]]
    return np.where(
        c[:, 0] != 0,
        u1 * q + u2,
        np.where(c[:, 1] != 0, q * q + u2, q * q + q),
    )


def _cross(t: FieldTables, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    def sub(x, y):
        return t.add[x, t.neg[y]]

    m = t.mul
    return np.stack(
        [
            sub(m[a[:, 1], b[:, 2]], m[a[:, 2], b[:, 1]]),
            sub(m[a[:, 2], b[:, 0]], m[a[:, 0], b[:, 2]]),
            sub(m[a[:, 0], b[:, 1]], m[a[:, 1], b[:, 0]]),
        ],
        axis=1,
    )


class ProjPlane:
    """PG(2, q): points, lines and pairwise line intersections.

    ``lines`` is an ``(n, q+1)`` array; row i lists, ascending, the indices of
    the points lying on line i.  Instances are read-only once built.
    """

    def __init__(self, q: int):
        self.spec = FieldSpec.of_order(q)
        if q > MAX_PLANE_ORDER:
            raise ConfigError(f"plane order {q} exceeds supported maximum {MAX_PLANE_ORDER}")
        self.q = q
        self.n = q * q + q + 1
        self._t = field_tables(self.spec)
        self.points = canonical_points(q)
        self.points.setflags(write=False)
        self.lines = self._build_lines()
        self.lines.setflags(write=False)
        self._table = self._build_table() if self.n <= MAX_TABLE_POINTS else None

    def _build_lines(self) -> np.ndarray:
        rows = [np.flatnonzero(_dot(self._t, self.points[i], self.points) == 0) for i in range(self.n)]
        lines = np.array(rows, dtype=np.int64)
        if lines.shape != (self.n, self.q + 1):
            raise AssertionError(f"malformed plane: line array shape {lines.shape}")  # pragma: no cover
        return lines

    def _build_table(self) -> np.ndarray:
        n = self.n
        table = np.full((n, n), -1, dtype=np.int32)
        idx = np.arange(n)
        for i in range(n):
            others = idx[idx != i]
            a = np.broadcast_to(self.points[i], (others.size, 3))
            table[i, others] = _normalized_index(self._t, self.q, _cross(self._t, a, self.points[others]))
        table.setflags(write=False)
        return table

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(tuple(decode(self.spec, int(v)) for v in self.points[i]))

    def index_of(self, point) -> int:
        if isinstance(point, ProjPoint):
            point = point.values
        return point_index(self.q, point)

    def line_set(self, i: int) -> frozenset[int]:
        return frozenset(int(j) for j in self.lines[i])

    def intersection(self, i: int, j: int) -> int:
        if i == j:
            raise DomainError(f"line {i} meets itself in a whole line, not a point")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise DomainError(f"line index out of range [0, {self.n})")
        if self._table is not None:
            return int(self._table[i, j])
        return int(self.intersect_many(np.array([i]), np.array([j]))[0])

    def intersect_many(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`intersection`; entries with ``i == j`` come back as -1."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if self._table is not None:
            return self._table[i, j].astype(np.int64)
        out = np.full(i.shape, -1, dtype=np.int64)
        diff = i != j
        if np.any(diff):
            c = _cross(self._t, self.points[i[diff]], self.points[j[diff]])
            out[diff] = _normalized_index(self._t, self.q, c)
        return out

    def incidence(self) -> np.ndarray:
        """Boolean ``(n, n)`` matrix, ``M[i, j]`` true iff point j lies on line i."""
        m = np.zeros((self.n, self.n), dtype=bool)
        m[np.repeat(np.arange(self.n), self.q + 1), self.lines.ravel()] = True
        return m


@functools.lru_cache(maxsize=16)
def build_plane(q: int) -> ProjPlane:
    """Build (and cache) the plane of order q."""
    return ProjPlane(q)


def line_intersection(plane: ProjPlane, i: int, j: int) -> int:
    return plane.intersection(i, j)


def _collinear(inc: np.ndarray, pts) -> bool:
    return bool(np.any(inc[:, list(pts)].all(axis=1)))


def check_plane_axioms(plane: ProjPlane) -> dict[str, bool]:
    """Exhaustively verify the incidence axioms; returns check name -> passed."""
    q, n = plane.q, plane.n
    inc = plane.incidence().astype(np.int64)
    off = ~np.eye(n, dtype=bool)
    line_meets = inc @ inc.T  # |line_i ∩ line_j|
    point_joins = inc.T @ inc  # number of lines through both points
    results = {
        "point_count": plane.points.shape[0] == n and len(np.unique(plane.points, axis=0)) == n,
        "line_count": plane.lines.shape[0] == n,
        "points_per_line": bool(np.all(inc.sum(axis=1) == q + 1)),
        "lines_per_point": bool(np.all(inc.sum(axis=0) == q + 1)),
        "duality": bool(np.array_equal(inc, inc.T)),
        "lines_meet_once": bool(np.all(line_meets[off] == 1)),
        "points_join_once": bool(np.all(point_joins[off] == 1)),
    }
    frame = [plane.index_of(p) for p in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]]
    triples = [(a, b, c) for a in frame for b in frame for c in frame if a < b < c]
    results["quadrangle"] = not any(_collinear(inc.astype(bool), t) for t in triples)
    ii, jj = np.nonzero(off)
    got = plane.intersect_many(ii, jj)
    results["intersection_table"] = bool(np.all(inc[ii, got] & inc[jj, got]))
    return results


def plane_to_dict(plane: ProjPlane) -> dict:
    return {
        "q": plane.q,
        "n": plane.n,
        "field": {"p": plane.spec.p, "k": plane.spec.k, "modulus": list(plane.spec.modulus)},
        "points": plane.points.tolist(),
        "lines": plane.lines.tolist(),
    }
