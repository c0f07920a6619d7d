"""Batch verification suite: plane axioms, replication bounds, lower bounds.

Each check yields a :class:`CaseResult`; ``run_suite`` collects them.  The
grids are fixed so a suite run is reproducible.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .graph_io import gen_complete, gen_preferential, gen_random
from .metrics import (
    MetricsAccumulator,
    check_constrained_bound,
    complete_graph_lower_bound,
    edge2d_family,
    family_multiplicity_check,
    fpp_family,
    torus_family,
)
from .partitioners import Method, Partitioner, PartitionerConfig, SurplusPolicy, assign_chunks
from .projective_plane import build_plane, check_plane_axioms, point_index

PLANE_ORDERS = (2, 3, 4, 5, 7, 8, 9)
FPP_ORDERS = (2, 3, 4, 5, 7)
GRID_PARTS = (4, 9, 16, 25)
SEEDS = tuple(range(10))

EXAMPLE_EDGES = [(0, 1), (0, 3), (1, 5), (1, 4), (2, 0), (2, 3), (3, 4), (6, 4)]
# (line a, line b) -> intersection point listed for the Z_2 example
EXAMPLE_INTERSECTIONS = {
    (0, 1): (0, 1, 0),
    (0, 3): (0, 1, 1),
    (1, 5): (1, 1, 1),
    (1, 4): (1, 0, 1),
    (0, 2): (0, 0, 1),
    (2, 3): (1, 1, 0),
    (3, 4): (1, 0, 1),
    (4, 6): (1, 0, 0),
}


@dataclass
class CaseResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}/{self.name} {self.detail}".rstrip()


def _edges_array(edges) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(list(edges), dtype=np.uint64).reshape(-1, 2)
    return arr[:, 0].copy(), arr[:, 1].copy()


@functools.lru_cache(maxsize=64)
def fuzz_graph(kind: str, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """The fixed fuzz graphs, as (us, vs) arrays."""
    if kind == "complete100":
        return _edges_array(gen_complete(100))
    if kind == "random":
        return _edges_array(gen_random(1000, 20000, seed))
    if kind == "preferential":
        return _edges_array(gen_preferential(1000, 5, seed))
    raise ValueError(kind)


FUZZ_GRAPHS = ("complete100", "random", "preferential")


def run_partition(config: PartitionerConfig, us, vs, workers: int = 1) -> tuple[Partitioner, MetricsAccumulator]:
    part = Partitioner(config)
    acc = MetricsAccumulator(config.parts)
    for cu, cv, pids in assign_chunks(part, [(us, vs)], workers):
        acc.add_arrays(cu, cv, pids)
    return part, acc


def example_case() -> Iterator[CaseResult]:
    plane = build_plane(2)
    for (a, b), coords in EXAMPLE_INTERSECTIONS.items():
        got = plane.intersection(a, b)
        want = point_index(2, coords)
        yield CaseResult("example", f"S{a}^S{b}", got == want,
                         f"point {tuple(plane.points[got].tolist())} expected {coords}")
    us, vs = _edges_array(EXAMPLE_EDGES)
    _, acc = run_partition(PartitionerConfig(Method.DFPP, 7), us, vs)
    rep = acc.report()
    rf = Fraction(sum(rep.replica_sets), rep.vertices)
    yield CaseResult("example", "rf", rf == Fraction(15, 7) and rep.rf < math.sqrt(7),
                     f"RF={rep.rf:.4f} ({rf}) sqrt(7)={math.sqrt(7):.4f}")


def plane_cases() -> Iterator[CaseResult]:
    for q in PLANE_ORDERS:
        res = check_plane_axioms(build_plane(q))
        bad = [k for k, ok in res.items() if not ok]
        yield CaseResult("plane", f"q={q}", not bad, "failed: " + ",".join(bad) if bad else f"n={q*q+q+1}")


def sqrt_sandwich_case(limit: int = 1 << 16) -> CaseResult:
    # sqrt(n) <= q+1 <= sqrt(n)+1  <=>  n <= (q+1)^2  and  q^2 <= n   (integers)
    from .finite_field import prime_power

    bad = [q for q in range(2, limit + 1) if prime_power(q)
           and not (q * q <= q * q + q + 1 <= (q + 1) ** 2)]
    return CaseResult("fpp", "sqrt-sandwich", not bad, f"q<= {limit}" if not bad else f"violations {bad[:5]}")


def _bound_case(suite, config, graph, seed) -> CaseResult:
    us, vs = fuzz_graph(graph, seed)
    part, acc = run_partition(config, us, vs)
    chk = check_constrained_bound(config.method, config.parts, acc.vertex_replicas(), part.folding)
    name = f"{config.method.value}/n={config.parts}/{graph}/seed={config.seed}"
    return CaseResult(suite, name, chk.passed, f"max={chk.max_replicas} bound={chk.bound}")


def fpp_bound_cases() -> Iterator[CaseResult]:
    for q in FPP_ORDERS:
        n = q * q + q + 1
        for graph in FUZZ_GRAPHS:
            for seed in SEEDS:
                yield _bound_case("fpp", PartitionerConfig(Method.FPP, n, seed), graph, seed)
            yield _bound_case("fpp", PartitionerConfig(Method.DFPP, n), graph, 0)
    # non-plane part counts under both surplus policies
    for n, policy in [(10, SurplusPolicy.LEAVE_EMPTY), (10, SurplusPolicy.FOLD), (40, SurplusPolicy.FOLD)]:
        yield _bound_case("fpp", PartitionerConfig(Method.FPP, n, 3, policy), "random", 3)
    yield sqrt_sandwich_case()


def baseline_cases() -> Iterator[CaseResult]:
    for method in (Method.EDGE2D, Method.TORUS):
        for n in GRID_PARTS:
            for graph in FUZZ_GRAPHS:
                for seed in SEEDS:
                    yield _bound_case("baselines", PartitionerConfig(method, n, seed), graph, seed)
    for s in range(2, 9):
        fam = torus_family(s)
        ok = all(not a.isdisjoint(b) for a in fam for b in fam)
        yield CaseResult("baselines", f"torus-intersect/s={s}", ok, f"{len(fam)}^2 pairs")


def theorem2_cases() -> Iterator[CaseResult]:
    for q in PLANE_ORDERS:
        r, ok = family_multiplicity_check(fpp_family(build_plane(q)))
        n = q * q + q + 1
        yield CaseResult("theorem2", f"fpp/q={q}", ok and r == q + 1, f"r={r} sqrt(n)={math.sqrt(n):.3f}")
    for s in range(2, 9):
        r, ok = family_multiplicity_check(edge2d_family(s))
        yield CaseResult("theorem2", f"edge2d/s={s}", ok and r == 2 * s - 1, f"r={r} sqrt(n)={s}")


def lower_bound_cases(m: int = 50, parts=(7, 13, 21)) -> Iterator[CaseResult]:
    us, vs = _edges_array(gen_complete(m))
    for method in Method:
        for n in parts:
            _, acc = run_partition(PartitionerConfig(method, n), us, vs)
            rep = acc.report()
            if rep.alpha <= 0:
                yield CaseResult("lower-bound", f"{method.value}/n={n}", True, "empty partition: bound is 0")
                continue
            bound = complete_graph_lower_bound(m, n, rep.alpha)
            yield CaseResult("lower-bound", f"{method.value}/n={n}", rep.rf >= bound,
                             f"RF={rep.rf:.4f} bound={bound:.4f} alpha={rep.alpha:.4f}")


def determinism_cases() -> Iterator[CaseResult]:
    us, vs = fuzz_graph("random", 0)
    perm = np.random.default_rng(0).permutation(us.size)
    for method in Method:
        cfg = PartitionerConfig(method, 21 if method in (Method.FPP, Method.DFPP) else 16, seed=5)
        part = Partitioner(cfg)
        base = part.assign_arrays(us, vs)
        shuffled = np.empty_like(base)
        shuffled[perm] = part.assign_arrays(us[perm], vs[perm])
        chunks = [(us[i:i + 777], vs[i:i + 777]) for i in range(0, us.size, 777)]
        threaded = np.concatenate([p for _, _, p in assign_chunks(part, chunks, workers=4)])
        ok = np.array_equal(base, shuffled) and np.array_equal(base, threaded)
        yield CaseResult("determinism", method.value, ok, "order/chunking/workers")


SUITES: dict[str, Callable[[], Iterator[CaseResult]]] = {
    "example": example_case,
    "plane": plane_cases,
    "fpp": fpp_bound_cases,
    "baselines": baseline_cases,
    "theorem2": theorem2_cases,
    "lower-bound": lower_bound_cases,
    "determinism": determinism_cases,
}


def run_suite(name: str = "default") -> list[CaseResult]:
    if name == "default":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from default, {', '.join(SUITES)}")
    return list(SUITES[name]())
