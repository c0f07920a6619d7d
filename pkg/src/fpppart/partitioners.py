"""Constrained vertex-cut partitioners: FPP, determined FPP, EdgePartition2D, Torus.

Every method maps a vertex to a subset of partition ids such that any two
subsets intersect, and sends edge (u, v) to an element of the intersection of
the subsets of u and v.  A vertex therefore never lands in more partitions
than its subset has elements.

Randomized choices (FPP same-line edges, Torus intersections) are a pure
function of ``(seed, min(u, v), max(u, v))``, so results do not depend on
stream order, chunking, or the number of workers.
"""
from __future__ import annotations

import enum
import functools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import ConfigError
from .finite_field import MAX_ORDER, prime_power
from .matching import LinePointMatching, perfect_matching
from .projective_plane import ProjPlane, build_plane

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
MIN_FPP_PARTS = 7
MIN_TORUS_PARTS = 4
DEFAULT_CHUNK = 1 << 16


class Method(str, enum.Enum):
    FPP = "fpp"
    DFPP = "dfpp"
    EDGE2D = "edge2d"
    TORUS = "torus"


class SurplusPolicy(str, enum.Enum):
    LEAVE_EMPTY = "empty"
    FOLD = "fold"


class EdgeAssignment(NamedTuple):
    u: int
    v: int
    pid: int


# -- hashing -----------------------------------------------------------------

def mix64(x: int) -> int:
    """splitmix64 finalizer."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def pair_hash(seed: int, u: int, v: int) -> int:
    lo, hi = min(u, v), max(u, v)
    h = mix64((seed + GOLDEN) & MASK64)
    h = mix64(h ^ lo)
    return mix64(((h + GOLDEN) & MASK64) ^ hi)


def mix64_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def pair_hash_array(seed: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    h0 = np.uint64(mix64((seed + GOLDEN) & MASK64))
    h = mix64_array(h0 ^ lo)
    return mix64_array((h + np.uint64(GOLDEN)) ^ hi)


# -- plane sizing and vertex mapping -------------------------------------------

def plane_size_for(n: int) -> tuple[int, int]:
    """Largest plane ``n' = q^2 + q + 1 <= n`` with q a prime power; returns (q, n')."""
    if n < MIN_FPP_PARTS:
        raise ConfigError(f"{n} partitions is below the minimum plane size {MIN_FPP_PARTS}")
    q = min(math.isqrt(n), MAX_ORDER)
    while q >= 2:
        if prime_power(q) is not None and q * q + q + 1 <= n:
            return q, q * q + q + 1
        q -= 1
    raise AssertionError("unreachable: q = 2 always fits n >= 7")  # pragma: no cover


def psi(v: int, n_prime: int) -> int:
    return v % n_prime


def grid_side(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 1 else 1


def fold_pid(raw: int, n: int) -> int:
    return raw if raw < n else raw % n


# -- scalar reference assignment functions -------------------------------------

def fpp_assign(plane: ProjPlane, matching: LinePointMatching | None, seed: int, u: int, v: int) -> int:
    """Partition for edge (u, v) under FPP (matching None) or determined FPP."""
    i, j = psi(u, plane.n), psi(v, plane.n)
    if i != j:
        return plane.intersection(i, j)
    if matching is not None:
        return matching[i]
    line = plane.lines[i]
    return int(line[pair_hash(seed, u, v) % len(line)])


def edge2d_assign(n: int, u: int, v: int) -> int:
    s = grid_side(n)
    return fold_pid((u % s) * s + (v % s), n)


def torus_subset(s: int, block: int) -> frozenset[int]:
    """Cells of the subset anchored at ``block``: its full column plus floor(s/2)
    cells to the right along its row, wrapping around."""
    r, c = divmod(block, s)
    column = {x * s + c for x in range(s)}
    half_row = {r * s + (c + j) % s for j in range(1, s // 2 + 1)}
    return frozenset(column | half_row)


@functools.lru_cache(maxsize=1 << 16)
def torus_intersection(s: int, a: int, b: int) -> tuple[int, ...]:
    return tuple(sorted(torus_subset(s, a) & torus_subset(s, b)))


def torus_block(w: int, s: int) -> int:
    return w % (s * s)


def torus_assign(n: int, seed: int, u: int, v: int) -> int:
    s = grid_side(n)
    a, b = sorted((torus_block(u, s), torus_block(v, s)))
    cells = torus_intersection(s, a, b)
    return fold_pid(cells[pair_hash(seed, u, v) % len(cells)], n)


# -- configured partitioner ------------------------------------------------------

@dataclass(frozen=True)
class PartitionerConfig:
    method: Method
    parts: int
    seed: int = 0
    surplus: SurplusPolicy = SurplusPolicy.LEAVE_EMPTY
    hash_ids: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "surplus", SurplusPolicy(self.surplus))
        if self.parts < 1:
            raise ConfigError(f"parts must be >= 1, got {self.parts}")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.method in (Method.FPP, Method.DFPP) and self.parts < MIN_FPP_PARTS:
            raise ConfigError(
                f"{self.method.value} needs at least {MIN_FPP_PARTS} partitions (below minimum plane size 7), "
                f"got {self.parts}"
            )
        if self.method is Method.TORUS and self.parts < MIN_TORUS_PARTS:
            raise ConfigError(f"torus needs at least {MIN_TORUS_PARTS} partitions, got {self.parts}")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "parts": self.parts,
            "seed": self.seed,
            "surplus": self.surplus.value,
            "hash_ids": self.hash_ids,
        }


class Partitioner:
    """Holds the precomputed tables for one configuration.

    ``assign`` is the per-edge scalar path; ``assign_arrays`` the vectorized
    one used for streams.  Both give identical results.
    """

    def __init__(self, config: PartitionerConfig):
        self.config = config
        self.n = config.parts
        self.plane = None
        self.matching = None
        self.q = None
        self.n_used = config.parts
        if config.method in (Method.FPP, Method.DFPP):
            self.q, self.n_used = plane_size_for(config.parts)
            self.plane = build_plane(self.q)
            if config.method is Method.DFPP:
                self.matching = perfect_matching(self.plane)
                self._phi = self.matching.as_array()
        self.side = grid_side(self.n)

    @property
    def surplus(self) -> int:
        return self.n - self.n_used

    @property
    def folding(self) -> bool:
        return self.config.surplus is SurplusPolicy.FOLD and self.surplus > 0

    def replica_bound(self) -> int:
        """Maximum number of partitions any single vertex can appear in."""
        m = self.config.method
        if m in (Method.FPP, Method.DFPP):
            # folded same-line edges add one surplus partition per vertex
            return self.q + 1 + (1 if self.folding else 0)
        if m is Method.EDGE2D:
            return min(2 * self.side - 1, self.n)
        return min(self.side + self.side // 2, self.n)

    def _key(self, w: int) -> int:
        return mix64(w) if self.config.hash_ids else w

    def assign(self, u: int, v: int) -> int:
        cfg = self.config
        hu, hv = self._key(u), self._key(v)
        if self.plane is not None:
            i, j = psi(hu, self.n_used), psi(hv, self.n_used)
            if i == j and self.folding:
                return self.n_used + i % self.surplus
            return fpp_assign(self.plane, self.matching, cfg.seed, hu, hv)
        if cfg.method is Method.EDGE2D:
            return edge2d_assign(self.n, hu, hv)
        return torus_assign(self.n, cfg.seed, hu, hv)

    def assign_arrays(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.uint64)
        vs = np.asarray(vs, dtype=np.uint64)
        if self.config.hash_ids:
            us, vs = mix64_array(us), mix64_array(vs)
        if self.plane is not None:
            return self._fpp_arrays(us, vs)
        if self.config.method is Method.EDGE2D:
            s = np.uint64(self.side)
            raw = ((us % s) * s + (vs % s)).astype(np.int64)
            return np.where(raw < self.n, raw, raw % self.n)
        return self._torus_arrays(us, vs)

    def _fpp_arrays(self, us, vs):
        nu = np.uint64(self.n_used)
        i = (us % nu).astype(np.int64)
        j = (vs % nu).astype(np.int64)
        pid = self.plane.intersect_many(i, j)
        same = i == j
        if np.any(same):
            lines = i[same]
            if self.folding:
                pid[same] = self.n_used + lines % self.surplus
            elif self.matching is not None:
                pid[same] = self._phi[lines]
            else:
                h = pair_hash_array(self.config.seed, us[same], vs[same])
                pos = (h % np.uint64(self.q + 1)).astype(np.int64)
                pid[same] = self.plane.lines[lines, pos]
        return pid

    def _torus_arrays(self, us, vs):
        s = self.side
        ss = np.uint64(s * s)
        a = (us % ss).astype(np.int64)
        b = (vs % ss).astype(np.int64)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        keys, inv = np.unique(lo * (s * s) + hi, return_inverse=True)
        width = s + s // 2
        cells = np.full((keys.size, width), -1, dtype=np.int64)
        counts = np.empty(keys.size, dtype=np.int64)
        for k, key in enumerate(keys.tolist()):
            got = torus_intersection(s, *divmod(key, s * s))
            cells[k, : len(got)] = got
            counts[k] = len(got)
        inv = inv.reshape(-1)
        h = pair_hash_array(self.config.seed, us, vs)
        pos = (h % counts[inv].astype(np.uint64)).astype(np.int64)
        raw = cells[inv, pos]
        return np.where(raw < self.n, raw, raw % self.n)

    def vertex_subset(self, w: int) -> frozenset[int]:
        """Partitions vertex w may be replicated to (its constraint subset)."""
        hw = self._key(w)
        m = self.config.method
        if self.plane is not None:
            i = psi(hw, self.n_used)
            extra = {self.n_used + i % self.surplus} if self.folding else set()
            return self.plane.line_set(i) | extra
        s = self.side
        if m is Method.EDGE2D:
            r, c = hw % s, hw % s
            cells = {r * s + x for x in range(s)} | {x * s + c for x in range(s)}
        else:
            cells = torus_subset(s, torus_block(hw, s))
        return frozenset(fold_pid(c, self.n) for c in cells)


# -- streaming -------------------------------------------------------------------

def iter_chunks(edges, chunk_size: int = DEFAULT_CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Group an iterable of (u, v) pairs into uint64 array chunks.

    Pairs of arrays pass straight through, so pre-chunked input is accepted too.
    """
    buf_u: list[int] = []
    buf_v: list[int] = []
    for item in edges:
        if isinstance(item[0], np.ndarray):
            if buf_u:
                yield np.array(buf_u, dtype=np.uint64), np.array(buf_v, dtype=np.uint64)
                buf_u, buf_v = [], []
            yield np.asarray(item[0], dtype=np.uint64), np.asarray(item[1], dtype=np.uint64)
            continue
        buf_u.append(item[0])
        buf_v.append(item[1])
        if len(buf_u) >= chunk_size:
            yield np.array(buf_u, dtype=np.uint64), np.array(buf_v, dtype=np.uint64)
            buf_u, buf_v = [], []
    if buf_u:
        yield np.array(buf_u, dtype=np.uint64), np.array(buf_v, dtype=np.uint64)


def assign_chunks(
    partitioner: Partitioner, chunks: Iterable[tuple[np.ndarray, np.ndarray]], workers: int = 1
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(us, vs, pids)`` per chunk, in input order, using up to ``workers`` threads."""
    if workers <= 1:
        for us, vs in chunks:
            yield us, vs, partitioner.assign_arrays(us, vs)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        window: deque = deque()
        for us, vs in chunks:
            window.append((us, vs, pool.submit(partitioner.assign_arrays, us, vs)))
            if len(window) >= 2 * workers:
                us0, vs0, fut = window.popleft()
                yield us0, vs0, fut.result()
        while window:
            us0, vs0, fut = window.popleft()
            yield us0, vs0, fut.result()


def partition_stream(
    config: PartitionerConfig, edges: Iterable, workers: int = 1, chunk_size: int = DEFAULT_CHUNK
) -> Iterator[EdgeAssignment]:
    part = Partitioner(config)
    for us, vs, pids in assign_chunks(part, iter_chunks(edges, chunk_size), workers):
        for u, v, p in zip(us.tolist(), vs.tolist(), pids.tolist()):
            yield EdgeAssignment(u, v, p)
