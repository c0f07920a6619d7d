"""Edge-list input/output and synthetic graph generators.

The interchange format is the SNAP-style text edge list: one ``u v`` pair of
non-negative integers per line, whitespace separated, ``#`` comments.
"""
from __future__ import annotations

import logging
import math
import random
import struct
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .errors import DataError, DomainError

log = logging.getLogger(__name__)

MAX_ID = (1 << 64) - 1
_REC = struct.Struct("<QQQ")


class EdgeRecord(NamedTuple):
    u: int
    v: int


class EdgeReader:
    """Streaming reader over a text edge list.

    Iterating yields :class:`EdgeRecord` values; ``skipped`` counts malformed
    lines after iteration (strict mode raises on the first one instead).
    """

    def __init__(self, path, comment_char: str = "#", dedup: bool = False,
                 drop_self_loops: bool = False, strict: bool = False):
        self.path = Path(path)
        self.comment_char = comment_char
        self.dedup = dedup
        self.drop_self_loops = drop_self_loops
        self.strict = strict
        self.skipped = 0
        self.read = 0

    def _parse(self, line: str, lineno: int) -> EdgeRecord | None:
        fields = line.split()
        try:
            if len(fields) < 2:
                raise ValueError("expected two vertex ids")
            u, v = int(fields[0]), int(fields[1])
            if not (0 <= u <= MAX_ID and 0 <= v <= MAX_ID):
                raise ValueError("vertex id outside the 64-bit unsigned range")
        except ValueError as exc:
            if self.strict:
                raise DataError(f"{self.path}:{lineno}: {exc}: {line.strip()!r}") from None
            self.skipped += 1
            log.debug("skipping %s:%d: %s", self.path, lineno, exc)
            return None
        return EdgeRecord(u, v)

    def __iter__(self) -> Iterator[EdgeRecord]:
        self.skipped = self.read = 0
        seen: set[tuple[int, int]] = set()
        try:
            fh = open(self.path, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read {self.path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, 1):
                s = line.strip()
                if not s or (self.comment_char and s.startswith(self.comment_char)):
                    continue
                rec = self._parse(s, lineno)
                if rec is None:
                    continue
                if self.drop_self_loops and rec.u == rec.v:
                    continue
                if self.dedup:
                    key = (rec.u, rec.v) if rec.u <= rec.v else (rec.v, rec.u)
                    if key in seen:
                        continue
                    seen.add(key)
                self.read += 1
                yield rec
        if self.skipped:
            log.warning("%s: skipped %d malformed line(s)", self.path, self.skipped)


def read_edge_list(path, comment_char: str = "#", dedup: bool = False,
                   drop_self_loops: bool = False, strict: bool = False) -> EdgeReader:
    return EdgeReader(path, comment_char, dedup, drop_self_loops, strict)


def write_edge_list(edges: Iterable, path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in edges:
            fh.write(f"{u} {v}\n")
            count += 1
    return count


# -- assignment files ------------------------------------------------------------

def write_assignments(records: Iterable, path, fmt: str = "tsv") -> int:
    """Write ``(u, v, pid)`` records as TSV lines or 3 x uint64 little-endian."""
    count = 0
    if fmt == "tsv":
        with open(path, "w", encoding="utf-8") as fh:
            for u, v, p in records:
                fh.write(f"{u}\t{v}\t{p}\n")
                count += 1
    elif fmt == "bin":
        with open(path, "wb") as fh:
            for rec in records:
                fh.write(_REC.pack(*rec))
                count += 1
    else:
        raise DomainError(f"unknown assignment format {fmt!r}")
    return count


def read_assignments(path, fmt: str = "tsv") -> Iterator[tuple[int, int, int]]:
    if fmt == "tsv":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    u, v, p = (int(x) for x in line.split())
                except ValueError:
                    raise DataError(f"{path}:{lineno}: expected 'u<TAB>v<TAB>pid'") from None
                yield u, v, p
    elif fmt == "bin":
        data = Path(path).read_bytes()
        if len(data) % _REC.size:
            raise DataError(f"{path}: size {len(data)} is not a multiple of {_REC.size}")
        yield from _REC.iter_unpack(data)
    else:
        raise DomainError(f"unknown assignment format {fmt!r}")


# -- generators ------------------------------------------------------------------

def gen_complete(m: int) -> Iterator[EdgeRecord]:
    if m < 2:
        raise DomainError(f"complete graph needs m >= 2, got {m}")
    for i in range(m):
        for j in range(i + 1, m):
            yield EdgeRecord(i, j)


def _pair_from_index(k: int, m: int) -> tuple[int, int]:
    # inverse of the row-major index over pairs i < j
    i = m - 2 - int(math.isqrt(4 * m * (m - 1) - 8 * k - 7) - 1) // 2
    start = i * (2 * m - i - 1) // 2
    return i, k - start + i + 1


def gen_random(m: int, e: int, seed: int = 0) -> Iterator[EdgeRecord]:
    """e distinct unordered pairs drawn uniformly from K_m, ascending."""
    total = m * (m - 1) // 2
    if m < 0 or e < 0 or e > total:
        raise DomainError(f"cannot draw {e} distinct edges from {m} vertices")
    rng = random.Random(seed)
    for k in sorted(rng.sample(range(total), e)):
        yield EdgeRecord(*_pair_from_index(k, m))


def gen_preferential(m: int, d: int, seed: int = 0) -> Iterator[EdgeRecord]:
    """Preferential attachment: start from K_{d+1}, then each new vertex links
    to d distinct existing vertices chosen with probability proportional to degree.

    Produces ``d(d+1)/2 + d(m-d-1)`` edges.
    """
    if d < 1 or m <= d:
        raise DomainError(f"need m > d >= 1, got m={m}, d={d}")
    rng = random.Random(seed)
    # each vertex appears once per incident edge endpoint
    targets: list[int] = []
    for e in gen_complete(d + 1):
        targets.extend(e)
        yield e
    for w in range(d + 1, m):
        chosen: set[int] = set()
        while len(chosen) < d:
            chosen.add(targets[rng.randrange(len(targets))])
        for t in sorted(chosen):
            yield EdgeRecord(t, w)
            targets.extend((t, w))
