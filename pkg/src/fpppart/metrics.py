"""Partition quality metrics and checks of the replication bounds.

Balance ``B = max_i |E_i| / (|E| / n)``, load balance
``alpha = min_i |E_i| * n / |E|`` and replication factor
``RF = sum_i |V(E_i)| / |V|``.  ``V`` is the set of vertices incident to at
least one edge of the stream.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, DomainError
from .partitioners import Method, grid_side, mix64_array, plane_size_for


def _unique_pairs(vs: np.ndarray, ps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if vs.size == 0:
        return vs, ps
    order = np.lexsort((ps, vs))
    vs, ps = vs[order], ps[order]
    keep = np.ones(vs.size, dtype=bool)
    keep[1:] = (vs[1:] != vs[:-1]) | (ps[1:] != ps[:-1])
    return vs[keep], ps[keep]


class HyperLogLog:
    """Bank of HyperLogLog sketches, one per partition plus one for the union."""

    def __init__(self, rows: int, precision: int = 12):
        self.precision = precision
        self.regs = np.zeros((rows, 1 << precision), dtype=np.uint8)

    def add(self, row: np.ndarray, items: np.ndarray):
        h = mix64_array(items)
        b = self.precision
        idx = (h >> np.uint64(64 - b)).astype(np.int64)
        rest = (h << np.uint64(b)) | np.uint64(1 << (b - 1))
        # rank = leading zeros of the remaining bits + 1
        rank = 64 - np.floor(np.log2(rest.astype(np.float64))).astype(np.int64)
        rank = np.clip(rank, 1, 64 - b + 1).astype(np.uint8)
        np.maximum.at(self.regs, (row, idx), rank)

    def merge(self, other: HyperLogLog):
        np.maximum(self.regs, other.regs, out=self.regs)

    def estimate(self) -> np.ndarray:
        m = self.regs.shape[1]
        alpha = 0.7213 / (1 + 1.079 / m)
        raw = alpha * m * m / np.sum(2.0 ** -self.regs.astype(np.float64), axis=1)
        zeros = np.count_nonzero(self.regs == 0, axis=1)
        small = (raw <= 2.5 * m) & (zeros > 0)
        lin = m * np.log(m / np.maximum(zeros, 1))
        return np.where(small, lin, raw)


@dataclass
class MetricsReport:
    parts: int
    edges: int
    vertices: int
    balance: float
    rf: float
    alpha: float
    max_replicas: int | None
    empty_parts: int
    edge_counts: list[int]
    replica_sets: list[int]
    approximate: bool = False
    witness: int | None = None  # a vertex attaining max_replicas

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("edge_counts", "replica_sets")}
        d["per_part"] = [
            {"pid": i, "edges": e, "vertices": r} for i, (e, r) in enumerate(zip(self.edge_counts, self.replica_sets))
        ]
        return d

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["pid", "edges", "vertices"])
        for i, (e, r) in enumerate(zip(self.edge_counts, self.replica_sets)):
            w.writerow([i, e, r])
        return out.getvalue()


class MetricsAccumulator:
    """Mergeable per-partition edge counts and (vertex, partition) incidence.

    Workers each fill a private accumulator; ``merge`` combines them in any
    order with identical results.  With ``approximate=True`` vertex sets are
    replaced by HyperLogLog sketches and per-vertex replica counts are not
    available.
    """

    def __init__(self, parts: int, approximate: bool = False):
        if parts < 1:
            raise DomainError(f"parts must be >= 1, got {parts}")
        self.parts = parts
        self.approximate = approximate
        self.edge_counts = np.zeros(parts, dtype=np.int64)
        self._v: list[np.ndarray] = []
        self._p: list[np.ndarray] = []
        self._pending = 0
        self._compacted = 0
        self._hll = HyperLogLog(parts + 1) if approximate else None

    def add_arrays(self, us, vs, pids):
        us = np.asarray(us, dtype=np.uint64)
        vs = np.asarray(vs, dtype=np.uint64)
        pids = np.asarray(pids, dtype=np.int64)
        if pids.size == 0:
            return
        if pids.min() < 0 or pids.max() >= self.parts:
            bad = int(pids[(pids < 0) | (pids >= self.parts)][0])
            raise DataError(f"partition id {bad} outside [0, {self.parts})")
        self.edge_counts += np.bincount(pids, minlength=self.parts)
        vv = np.concatenate([us, vs])
        pp = np.concatenate([pids, pids])
        if self._hll is not None:
            self._hll.add(pp, vv)
            self._hll.add(np.full(vv.size, self.parts), vv)
            return
        vv, pp = _unique_pairs(vv, pp)
        self._v.append(vv)
        self._p.append(pp)
        self._pending += vv.size
        if self._pending > 2 * max(self._compacted, 1 << 16):
            self._compact()

    def add(self, u: int, v: int, pid: int):
        self.add_arrays([u], [v], [pid])

    def _compact(self):
        if len(self._v) > 1:
            v, p = _unique_pairs(np.concatenate(self._v), np.concatenate(self._p))
            self._v, self._p = [v], [p]
        self._compacted = self._pending = sum(a.size for a in self._v)

    def merge(self, other: MetricsAccumulator) -> MetricsAccumulator:
        if other.parts != self.parts or other.approximate != self.approximate:
            raise DataError("cannot merge accumulators with different shapes")
        self.edge_counts += other.edge_counts
        if self._hll is not None:
            self._hll.merge(other._hll)
        else:
            self._v.extend(other._v)
            self._p.extend(other._p)
            self._pending += sum(a.size for a in other._v)
        return self

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct (vertex, partition) incidences, sorted by vertex then pid."""
        if self.approximate:
            raise DataError("per-vertex incidences are not kept in approximate mode")
        self._compact()
        if not self._v:
            return np.zeros(0, dtype=np.uint64), np.zeros(0, dtype=np.int64)
        return self._v[0], self._p[0]

    def vertex_replicas(self) -> dict[int, int]:
        v, _ = self.pairs()
        verts, counts = np.unique(v, return_counts=True)
        return dict(zip(verts.tolist(), counts.tolist()))

    def report(self) -> MetricsReport:
        n = self.parts
        total = int(self.edge_counts.sum())
        counts = self.edge_counts.tolist()
        empty = int(np.count_nonzero(self.edge_counts == 0))
        if self.approximate:
            est = self._hll.estimate()
            replica_sets = [int(round(x)) if c else 0 for x, c in zip(est[:n], counts)]
            n_vertices = int(round(est[n])) if total else 0
            max_rep = witness = None
        else:
            v, p = self.pairs()
            replica_sets = np.bincount(p, minlength=n).tolist()
            verts, per_vertex = np.unique(v, return_counts=True)
            n_vertices = int(verts.size)
            if verts.size:
                k = int(np.argmax(per_vertex))
                max_rep, witness = int(per_vertex[k]), int(verts[k])
            else:
                max_rep, witness = 0, None
        if total == 0:
            balance = rf = alpha = 0.0
        else:
            mean = total / n
            balance = max(counts) / mean
            alpha = min(counts) / mean
            rf = sum(replica_sets) / n_vertices if n_vertices else 0.0
        return MetricsReport(
            parts=n,
            edges=total,
            vertices=n_vertices,
            balance=balance,
            rf=rf,
            alpha=alpha,
            max_replicas=max_rep,
            empty_parts=empty,
            edge_counts=counts,
            replica_sets=replica_sets,
            approximate=self.approximate,
            witness=witness,
        )


def compute_metrics(assignments: Iterable, n: int, approximate: bool = False) -> MetricsReport:
    """Metrics for an iterable of ``(u, v, pid)`` records."""
    acc = MetricsAccumulator(n, approximate=approximate)
    batch: list = []
    for rec in assignments:
        batch.append(rec)
        if len(batch) >= 1 << 16:
            acc.add_arrays(*_columns(batch))
            batch = []
    if batch:
        acc.add_arrays(*_columns(batch))
    return acc.report()


def _columns(batch):
    u, v, p = zip(*batch)
    return np.array(u, dtype=np.uint64), np.array(v, dtype=np.uint64), np.array(p, dtype=np.int64)


# -- bound checks ------------------------------------------------------------------

@dataclass
class BoundCheck:
    method: str
    parts: int
    bound: int
    max_replicas: int
    passed: bool
    witness: int | None = None  # offending vertex when the check fails

    def to_dict(self) -> dict:
        return asdict(self)


def replica_bound(method, n: int, folded_surplus: bool = False) -> int:
    """Per-vertex replica cap for ``method`` with ``n`` requested partitions."""
    method = Method(method)
    if method in (Method.FPP, Method.DFPP):
        q, _ = plane_size_for(n)
        return q + 1 + (1 if folded_surplus else 0)
    s = grid_side(n)
    if method is Method.EDGE2D:
        return 2 * s - 1
    return s + s // 2


def check_constrained_bound(method, n: int, replicas: Mapping[int, int], folded_surplus: bool = False) -> BoundCheck:
    """Check that no vertex is replicated more often than the method allows."""
    bound = replica_bound(method, n, folded_surplus)
    worst, witness = 0, None
    for w, r in replicas.items():
        if r > worst:
            worst, witness = r, w
    passed = worst <= bound
    return BoundCheck(Method(method).value, n, bound, worst, passed, None if passed else witness)


def family_multiplicity_check(family: Sequence[Iterable[int]], ground_size: int | None = None) -> tuple[int, bool]:
    """Maximum membership count r of a pairwise-intersecting family, and r >= sqrt(n).

    ``n`` is the number of subsets.  Raises :class:`DataError` naming the first
    disjoint pair if the family is not pairwise intersecting.
    """
    sets = [frozenset(s) for s in family]
    n = len(sets)
    if n == 0:
        raise DomainError("empty family")
    for i, j in itertools.combinations(range(n), 2):
        if sets[i].isdisjoint(sets[j]):
            raise DataError(f"subsets {i} and {j} are disjoint")
    ground = set().union(*sets)
    if ground_size is not None and any(not 0 <= s < ground_size for s in ground):
        raise DataError(f"family uses elements outside [0, {ground_size})")
    membership: dict[int, int] = {}
    for s in sets:
        for x in s:
            membership[x] = membership.get(x, 0) + 1
    r = max(membership.values())
    return r, r * r >= n


def fpp_family(plane) -> list[frozenset[int]]:
    return [plane.line_set(i) for i in range(plane.n)]


def edge2d_family(s: int) -> list[frozenset[int]]:
    """Row-plus-column subsets of an s x s grid, one per cell."""
    fam = []
    for r in range(s):
        for c in range(s):
            fam.append(frozenset({r * s + x for x in range(s)} | {x * s + c for x in range(s)}))
    return fam


def torus_family(s: int) -> list[frozenset[int]]:
    from .partitioners import torus_subset

    return [torus_subset(s, b) for b in range(s * s)]


def complete_graph_lower_bound(m: int, n: int, alpha: float) -> float:
    """Smallest replication factor any n-way edge partition of K_m with load balance alpha can have."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    return math.sqrt(alpha) * math.sqrt(n) * math.sqrt((m - 1) / m)
