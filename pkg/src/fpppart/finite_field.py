"""Arithmetic in GF(p^k).

Elements are coefficient vectors ``(c_0, ..., c_{k-1})`` over Z_p, standing for
the polynomial ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` reduced modulo a fixed
monic irreducible polynomial of degree k.  Each element has a canonical
integer encoding ``sum(c_i * p**i)`` in ``[0, q)``; the projective plane code
works on those integers through precomputed tables (see :func:`field_tables`).
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError

MAX_ORDER = 1 << 16
# add/mul tables are q*q entries; beyond this only scalar arithmetic is offered
MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    if q < 2:
        return None
    p = next((d for d in itertools.chain([2], range(3, math.isqrt(q) + 1, 2)) if q % d == 0), q)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


# -- polynomials over Z_p, coefficient lists lowest degree first ----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _monic_polys(p: int, d: int):
    # lexicographic in (c_{d-1}, ..., c_0)
    for digits in itertools.product(range(p), repeat=d):
        yield list(reversed(digits)) + [1]


def is_irreducible(modulus: tuple[int, ...] | list[int], p: int) -> bool:
    """Exhaustive factor search; fine for the desk-scale degrees used here."""
    m = list(modulus)
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        return False
    if k == 1:
        return True
    # linear factors are roots
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(m)) % p == 0:
            return False
    for d in range(2, k // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(m, f, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree k over Z_p.

    Candidates are ordered lexicographically by ``(c_{k-1}, ..., c_0)``.  The
    result is returned lowest degree first, so ``x^2 + x + 1`` is ``(1, 1, 1)``.
    For k = 1 the sentinel ``x`` (``(0, 1)``) is returned; prime fields never
    reduce by it.
    """
    if not is_prime(p):
        raise ConfigError(f"{p} is not prime")
    if k < 1:
        raise ConfigError(f"degree must be >= 1, got {k}")
    if k == 1:
        return (0, 1)
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {k} over Z_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of GF(p^k).  ``modulus`` is lowest degree first, monic."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ConfigError(f"{self.p} is not prime")
        if self.k < 1:
            raise ConfigError(f"degree must be >= 1, got {self.k}")
        if self.p ** self.k > MAX_ORDER:
            raise ConfigError(f"field order {self.p}**{self.k} exceeds {MAX_ORDER}")
        if not self.modulus:
            object.__setattr__(self, "modulus", find_irreducible(self.p, self.k))
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.k + 1 or mod[-1] != 1 or any(not 0 <= c < self.p for c in mod):
            raise ConfigError(f"modulus {mod} is not a monic degree-{self.k} polynomial over Z_{self.p}")
        if self.k > 1 and not is_irreducible(mod, self.p):
            raise ConfigError(f"modulus {mod} is reducible over Z_{self.p}")

    @property
    def q(self) -> int:
        return self.p ** self.k

    @classmethod
    def of_order(cls, q: int) -> FieldSpec:
        pk = prime_power(q)
        if pk is None:
            raise ConfigError(f"{q} is not a prime power")
        return cls(*pk)

    def element(self, value: int) -> FieldElement:
        return decode(self, value)

    def zero(self) -> FieldElement:
        return decode(self, 0)

    def one(self) -> FieldElement:
        return decode(self, 1)

    def elements(self):
        return [decode(self, v) for v in range(self.q)]


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.k:
            raise DomainError(f"expected {self.spec.k} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise DomainError(f"coefficients {self.coeffs} not reduced mod {self.spec.p}")

    @property
    def value(self) -> int:
        return encode(self)

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        return ff_add(self.spec, self, other)

    def __sub__(self, other):
        return ff_add(self.spec, self, ff_neg(self.spec, other))

    def __neg__(self):
        return ff_neg(self.spec, self)

    def __mul__(self, other):
        return ff_mul(self.spec, self, other)

    def __repr__(self):
        return f"GF({self.spec.q})<{self.value}>"


def encode(a: FieldElement) -> int:
    p = a.spec.p
    return sum(c * p ** i for i, c in enumerate(a.coeffs))


def decode(spec: FieldSpec, value: int) -> FieldElement:
    if not 0 <= value < spec.q:
        raise DomainError(f"{value} out of range for GF({spec.q})")
    coeffs = []
    for _ in range(spec.k):
        value, c = divmod(value, spec.p)
        coeffs.append(c)
    return FieldElement(spec, tuple(coeffs))


def _check(spec: FieldSpec, *xs: FieldElement):
    for x in xs:
        if x.spec != spec:
            raise DomainError(f"element of GF({x.spec.q}) used with GF({spec.q})")


def ff_add(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(spec, a, b)
    p = spec.p
    return FieldElement(spec, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def ff_neg(spec: FieldSpec, a: FieldElement) -> FieldElement:
    _check(spec, a)
    return FieldElement(spec, tuple(-c % spec.p for c in a.coeffs))


def ff_mul(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(spec, a, b)
    p, k = spec.p, spec.k
    if k == 1:
        return FieldElement(spec, (a.coeffs[0] * b.coeffs[0] % p,))
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] = (prod[i + j] + x * y) % p
    rem = _poly_mod(prod, list(spec.modulus), p)
    return FieldElement(spec, tuple(rem + [0] * (k - len(rem))))


def ff_pow(spec: FieldSpec, a: FieldElement, e: int) -> FieldElement:
    result, base = spec.one(), a
    while e:
        if e & 1:
            result = ff_mul(spec, result, base)
        base = ff_mul(spec, base, base)
        e >>= 1
    return result


def ff_inv(spec: FieldSpec, a: FieldElement) -> FieldElement:
    """Multiplicative inverse via a^(q-2)."""
    _check(spec, a)
    if not a:
        raise DomainError("zero has no multiplicative inverse")
    return ff_pow(spec, a, spec.q - 2)


class FieldTables(NamedTuple):
    """Integer-encoded operation tables: ``mul[a, b]`` is the encoding of a*b."""

    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is 0 and meaningless


@functools.lru_cache(maxsize=32)
def field_tables(spec: FieldSpec) -> FieldTables:
    q = spec.q
    if q > MAX_TABLE_ORDER:
        raise ConfigError(f"operation tables limited to q <= {MAX_TABLE_ORDER}, got {q}")
    if spec.k == 1:
        r = np.arange(q, dtype=np.int64)
        add = (r[:, None] + r[None, :]) % q
        mul = (r[:, None] * r[None, :]) % q
    else:
        # coefficient-wise addition on base-p digits
        digits = np.array([[(v // spec.p ** i) % spec.p for i in range(spec.k)] for v in range(q)])
        weights = spec.p ** np.arange(spec.k)
        add = ((digits[:, None, :] + digits[None, :, :]) % spec.p) @ weights
        els = spec.elements()
        mul = np.array([[encode(ff_mul(spec, a, b)) for b in els] for a in els], dtype=np.int64)
    add = add.astype(np.int64)
    neg = np.argmin(add, axis=1).astype(np.int64)  # the unique b with a + b == 0
    inv = np.zeros(q, dtype=np.int64)
    nz, partner = np.nonzero(mul[1:, 1:] == 1)
    inv[nz + 1] = partner + 1
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return FieldTables(add, mul, neg, inv)
