"""SL(2, Z): trace classes, spectral radii and positive-word conjugacy normal forms.

Notation: U = [[1, 1], [0, 1]] and L = [[1, 0], [1, 1]]. A block
``L^m U^n = [[1, n], [m, 1 + m n]]``. A hyperbolic matrix with positive trace is
conjugate to a product of such blocks with all exponents positive; the
exponents are read off the periodic continued fraction of its attracting
fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from .errors import PreconditionError
from .exact_linalg import IntMatrix


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise PreconditionError(f"determinant {self.a * self.d - self.b * self.c} != 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> SL2Matrix:
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> SL2Matrix:
        return cls(1, 0, 0, 1)

    def __matmul__(self, o: SL2Matrix) -> SL2Matrix:
        return SL2Matrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> SL2Matrix:
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> SL2Matrix:
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> SL2Matrix:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = SL2Matrix.identity()
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def to_int_matrix(self) -> IntMatrix:
        return IntMatrix(self.rows())

    def is_identity(self) -> bool:
        return self == SL2Matrix.identity()


U = SL2Matrix(1, 1, 0, 1)
L = SL2Matrix(1, 0, 1, 1)


def upper(n: int) -> SL2Matrix:
    return SL2Matrix(1, n, 0, 1)


def lower(n: int) -> SL2Matrix:
    return SL2Matrix(1, 0, n, 1)


def classify(m: SL2Matrix) -> str:
    t = abs(m.trace)
    if t < 2:
        return "elliptic"
    if t == 2:
        return "parabolic"
    return "hyperbolic"


@dataclass(frozen=True)
class Radius:
    """rho = (|tr| + sqrt(disc)) / 2 when disc > 0, else 1."""

    value: float
    trace: int
    discriminant: int

    def closed_form(self) -> str:
        if self.discriminant <= 0:
            return "1"
        return f"({abs(self.trace)}+sqrt({self.discriminant}))/2"


def radius(m: SL2Matrix) -> Radius:
    t = m.trace
    disc = t * t - 4
    if abs(t) <= 2:
        return Radius(1.0, t, disc)
    try:
        value = (abs(t) + math.sqrt(disc)) / 2
    except OverflowError:
        value = math.inf
    return Radius(value, t, disc)


def conjugate(m: SL2Matrix, p: SL2Matrix) -> SL2Matrix:
    """p m p^{-1}"""
    return p @ m @ p.inverse()


# ---------------------------------------------------------------------------


def block(m_lower: int, m_upper: int) -> SL2Matrix:
    """L^m_lower U^m_upper = [[1, m_upper], [m_lower, 1 + m_lower m_upper]]."""
    return SL2Matrix(1, m_upper, m_lower, 1 + m_lower * m_upper)


def word_product(m: Sequence[int]) -> SL2Matrix:
    """Product B_n ... B_1 with B_k = [[1, m_{2k-1}], [m_{2k}, 1 + m_{2k-1} m_{2k}]].

    ``m`` is listed as (m_1, m_2, ..., m_{2n}).
    """
    if len(m) % 2 or not m:
        raise ValueError("need an even, nonempty exponent sequence")
    out = SL2Matrix.identity()
    for k in range(0, len(m), 2):
        out = block(m[k + 1], m[k]) @ out
    return out


@dataclass(frozen=True)
class PositiveWord:
    """``conjugator @ (sign * M) @ conjugator^{-1} == word_product(m)``."""

    m: tuple[int, ...]
    conjugator: SL2Matrix
    sign: int = 1

    def product(self) -> SL2Matrix:
        return word_product(self.m)

    def verify(self, target: SL2Matrix) -> bool:
        base = target if self.sign == 1 else -target
        return all(x >= 1 for x in self.m) and conjugate(base, self.conjugator) == self.product()


def _floor_quadratic(p: int, q: int, disc: int) -> int:
    """floor((p + sqrt(disc)) / q) for non-square disc."""
    s = isqrt(disc)
    if q > 0:
        return (p + s) // q
    return -((p + s) // (-q)) - 1


def positive_factorize(m: SL2Matrix) -> PositiveWord:
    """Conjugate a hyperbolic matrix into a positive word in L and U.

    Negative trace is handled by factoring -m and recording ``sign = -1``.
    Among the cyclic rotations (by whole blocks) the lexicographically least
    exponent sequence is returned.
    """
    sign = 1
    if m.trace < 0:
        m, sign = -m, -1
    t = m.trace
    if t <= 2:
        raise PreconditionError(f"trace {t * sign} is not hyperbolic")
    disc = t * t - 4
    # attracting fixed point alpha = (a - d + sqrt(disc)) / (2c), as (P + sqrt(D)) / Q
    P, Q = m.a - m.d, 2 * m.c
    conj = SL2Matrix.identity()

    def shift(k):
        nonlocal P, conj
        P -= k * Q
        conj = upper(-k) @ conj

    def flip_shift(k):
        # alpha -> 1 / (1/alpha - k), i.e. apply L^{-k}
        nonlocal P, Q, conj
        P, Q = -P, (disc - P * P) // Q
        P -= k * Q
        P, Q = -P, (disc - P * P) // Q
        conj = lower(-k) @ conj

    def recip_floor():
        p2, q2 = -P, (disc - P * P) // Q
        return _floor_quadratic(p2, q2, disc)

    shift(_floor_quadratic(P, Q, disc))
    seen: dict[tuple[int, int], int] = {}
    conjs: list[SL2Matrix] = []
    pairs: list[tuple[int, int]] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(pairs)
        conjs.append(conj)
        k_low = recip_floor()
        flip_shift(k_low)
        k_up = _floor_quadratic(P, Q, disc)
        shift(k_up)
        pairs.append((k_low, k_up))
    start = seen[(P, Q)]
    cycle = pairs[start:]
    conj = conjs[start]
    target = conjugate(m, conj)
    prim = SL2Matrix.identity()
    for lo, up in cycle:
        prim = prim @ block(lo, up)
    power, reps = prim, 1
    while power != target:
        if power.trace > target.trace:
            raise ArithmeticError("conjugate is not a power of the periodic word")
        power, reps = power @ prim, reps + 1
    blocks = cycle * reps

    def m_seq(bl):
        out = []
        for lo, up in reversed(bl):
            out += [up, lo]
        return tuple(out)

    best = None
    prefix = SL2Matrix.identity()
    for s in range(len(cycle)):
        rotated = blocks[s:] + blocks[:s]
        cand = (m_seq(rotated), prefix.inverse() @ conj)
        if best is None or cand[0] < best[0]:
            best = cand
        prefix = prefix @ block(*blocks[s])
    return PositiveWord(best[0], best[1], sign)
