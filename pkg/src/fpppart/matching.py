"""Line -> point perfect matching for the determined FPP variant."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .projective_plane import ProjPlane


def kuhn_matching(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching by Kuhn's augmenting paths.

    Left vertices are tried in ascending order and each one's neighbours in
    the order given by ``adj``, so the result is fully deterministic.  Returns
    ``match[left] = right`` with -1 for unmatched left vertices.

    The depth-first search is iterative; augmenting paths in large planes can
    be longer than Python's recursion limit.
    """
    match_right = [-1] * n_right
    match_left = [-1] * len(adj)
    for root in range(len(adj)):
        seen = [False] * n_right
        # stack frames: (left vertex, next neighbour position)
        stack = [[root, 0]]
        path: list[tuple[int, int]] = []  # (left, right) tentatively paired
        found = False
        while stack:
            frame = stack[-1]
            u, pos = frame
            nbrs = adj[u]
            if pos == len(nbrs):
                stack.pop()
                if path:
                    path.pop()
                continue
            frame[1] = pos + 1
            v = nbrs[pos]
            if seen[v]:
                continue
            seen[v] = True
            path.append((u, v))
            if match_right[v] == -1:
                found = True
                break
            stack.append([match_right[v], 0])
        if found:
            for u, v in path:
                match_right[v] = u
                match_left[u] = v
    return match_left


@dataclass(frozen=True)
class LinePointMatching:
    """``phi[i]`` is the point chosen for line i; a bijection with phi[i] on line i."""

    phi: tuple[int, ...]

    def __getitem__(self, i):
        return self.phi[i]

    def __len__(self):
        return len(self.phi)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.phi, dtype=np.int64)


def perfect_matching(plane: ProjPlane) -> LinePointMatching:
    adj = [list(map(int, row)) for row in plane.lines]
    phi = kuhn_matching(adj, plane.n)
    if -1 in phi or len(set(phi)) != plane.n:
        # cannot happen for a (q+1)-regular bipartite graph
        raise AssertionError("incidence graph has no perfect matching")  # pragma: no cover
    return LinePointMatching(tuple(phi))
