"""Exact integer matrices, characteristic polynomials and certified spectral radii.

Nothing on the trusted path uses floating point. Floats appear only as a
guess for where to look; every enclosure returned by :func:`spectral_radius`
is established by an exact root count on a circle of rational radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotUnimodularError, ParameterError

DEFAULT_TOL = Fraction(1, 10**9)


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # 1e-9 should mean 1/10**9, not the nearest double
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(int(v) for v in row) for row in rows)
        if data and any(len(row) != len(data[0]) for row in data):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "entries", data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> IntMatrix:
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> IntMatrix:
        if not cols:
            return cls([])
        return cls([[col[i] for col in cols] for i in range(len(cols[0]))])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self.entries)) if self.entries else self

    def trace(self) -> int:
        self._require_square()
        return sum(self.entries[i][i] for i in range(self.rows))

    def _require_square(self):
        if not self.is_square():
            raise DimensionError(f"expected a square matrix, got {self.rows}x{self.cols}")

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([-a for a in r] for r in self.entries)

    def __mul__(self, k: int) -> IntMatrix:
        return IntMatrix([k * a for a in r] for r in self.entries)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.entries))
            return IntMatrix(
                [sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def __pow__(self, k: int) -> IntMatrix:
        self._require_square()
        if k < 0:
            return unimodular_inverse(self) ** (-k)
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> int:
        self._require_square()
        return bareiss_det(self.tolist())

    def is_identity(self) -> bool:
        return self.is_square() and self == IntMatrix.identity(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant. ``a`` is consumed."""
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# polynomials: internal helpers work on ascending coefficient lists


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p: Sequence) -> int:
    return len(p) - 1


def _monic(p: list[Fraction]) -> list[Fraction]:
    lead = p[-1]
    return [c / lead for c in p]


def _divmod(num: Sequence[Fraction], den: Sequence[Fraction]):
    num = [Fraction(c) for c in num]
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    dd = _deg(den)
    lead = Fraction(den[-1])
    if _deg(num) < dd:
        return [], _trim(num)
    q = [Fraction(0)] * (_deg(num) - dd + 1)
    for k in range(_deg(num) - dd, -1, -1):
        c = num[k + dd] / lead
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return _trim(q), _trim(num[:dd])


def _gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(list(map(Fraction, a))), _trim(list(map(Fraction, b)))
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a) if a else a


def _derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return [k * c for k, c in enumerate(p)][1:]


def _eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_changes(values: Iterable) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sturm_count(p: list[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of ``p`` in (lo, hi]; ``p`` must not vanish at lo."""
    seq = [p, _derivative(p)]
    while seq[-1] and _deg(seq[-1]) > 0:
        r = _divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return _sign_changes(_eval(q, lo) for q in seq) - _sign_changes(_eval(q, hi) for q in seq)


@dataclass(frozen=True)
class MonicIntPoly:
    """Monic integer polynomial; ``coeffs`` run from the leading 1 down to the constant."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ParameterError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def ascending(self) -> list[int]:
        return list(reversed(self.coeffs))

    def __call__(self, x):
        return _eval(self.ascending(), x)

    def __str__(self) -> str:
        terms = []
        n = self.degree
        for k, c in enumerate(self.coeffs):
            e = n - k
            if c == 0:
                continue
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            terms.append(("- " if c < 0 else "+ ") + body)
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _hessenberg_charpoly(a: list[list[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial (ascending) via reduction to upper Hessenberg form."""
    n = len(a)
    h = [row[:] for row in a]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for row in h:
                row[piv], row[m] = row[m], row[piv]
        for i in range(m + 1, n):
            u = h[i][m - 1] / h[m][m - 1]
            if u:
                hi, hm = h[i], h[m]
                for j in range(n):
                    hi[j] -= u * hm[j]
                for row in h:
                    row[m] += u * row[i]
    # p_k(x) = (x - h_kk) p_{k-1} - sum_i h_ik (prod_{j=i+1..k} h_j,j-1) p_{i-1}
    polys = [[Fraction(1)]]
    for k in range(n):
        prev = polys[k]
        cur = [Fraction(0)] + prev
        for i, c in enumerate(prev):
            cur[i] -= h[k][k] * c
        t = Fraction(1)
        for i in range(k - 1, -1, -1):
            t *= h[i + 1][i]
            if t == 0:
                break
            coef = h[i][k] * t
            if coef:
                for j, c in enumerate(polys[i]):
                    cur[j] -= coef * c
        polys.append(cur)
    return polys[n]


def char_poly(m: IntMatrix) -> MonicIntPoly:
    """det(xI - m) with exact integer coefficients."""
    if not m.is_square():
        raise DimensionError(f"char_poly needs a square matrix, got {m.rows}x{m.cols}")
    asc = _hessenberg_charpoly([[Fraction(v) for v in row] for row in m.entries])
    if any(c.denominator != 1 for c in asc):
        raise ArithmeticError("non-integral characteristic polynomial")
    return MonicIntPoly(tuple(int(c) for c in reversed(asc)))


def rational_char_poly(a: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Ascending characteristic polynomial of a rational square matrix."""
    return _hessenberg_charpoly([[Fraction(v) for v in row] for row in a])


# ---------------------------------------------------------------------------
# root census on circles |z| = r


@dataclass(frozen=True)
class Census:
    inside: int
    on: int
    outside: int


def _schur_cohn_inertia(h: list[Fraction]) -> tuple[int, int]:
    """(inside, outside) root counts of a real polynomial coprime to its reversal."""
    n = _deg(h)
    if n <= 0:
        return 0, 0
    a1 = [[h[i - j] if j <= i else Fraction(0) for j in range(n)] for i in range(n)]
    a2 = [[h[n - (i - j)] if j <= i else Fraction(0) for j in range(n)] for i in range(n)]
    sc = [
        [
            sum(a1[k][i] * a1[k][j] - a2[k][i] * a2[k][j] for k in range(max(i, j), n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    cp = rational_char_poly(sc)
    if cp[0] == 0:
        raise ArithmeticError("singular Schur-Cohn form for a coprime pair")
    positive = _sign_changes(reversed(cp))
    negative = _sign_changes(c if k % 2 == 0 else -c for k, c in enumerate(cp))
    if positive + negative != n:
        raise ArithmeticError("inertia does not add up")
    return negative, positive


def _unit_circle_count(c: list[Fraction]) -> int:
    """Distinct roots on |z| = 1 of a squarefree self-reciprocal real polynomial."""
    c = list(c)
    on = 0
    for root in (Fraction(1), Fraction(-1)):
        if _deg(c) > 0 and _eval(c, root) == 0:
            c = _divmod(c, [-root, Fraction(1)])[0]
            on += 1
    m = _deg(c)
    if m <= 0:
        return on
    if m % 2 or any(c[k] != c[m - k] for k in range(m + 1)):
        raise ArithmeticError("expected a palindromic polynomial of even degree")
    half = m // 2
    # z^{-half} c(z) = T(z + 1/z); Dickson recursion for z^k + z^-k
    d_prev, d_cur = [Fraction(2)], [Fraction(0), Fraction(1)]
    t = [c[half]]
    for k in range(1, half + 1):
        if k > 1:
            nxt = [Fraction(0)] + d_cur
            for i, v in enumerate(d_prev):
                nxt[i] -= v
            d_prev, d_cur = d_cur, nxt
        coef = c[half + k]
        t += [Fraction(0)] * (len(d_cur) - len(t))
        for i, v in enumerate(d_cur):
            t[i] += coef * v
    t = _trim(t)
    return on + 2 * _sturm_count(t, Fraction(-2), Fraction(2))


def modulus_census(poly_asc: Sequence, r: Fraction) -> Census:
    """Count distinct roots of a squarefree real polynomial with |z| <, =, > r.

    The polynomial must not vanish at 0 and ``r`` must be a positive rational.
    """
    f = [Fraction(c) for c in poly_asc]
    r = Fraction(r)
    if r <= 0:
        raise ParameterError("radius must be positive")
    g = [c * r**k for k, c in enumerate(f)]
    g = _monic(g)
    rev = list(reversed(g))
    common = _gcd(g, rev)
    h = _divmod(g, common)[0] if _deg(common) > 0 else g
    inside, outside = _schur_cohn_inertia(h)
    if _deg(common) > 0:
        on = _unit_circle_count(common)
        paired = (_deg(common) - on) // 2
    else:
        on = paired = 0
    return Census(inside + paired, on, outside + paired)


def squarefree_nonzero_part(p: MonicIntPoly) -> list[Fraction]:
    """Squarefree part of ``p`` with the root 0 removed (ascending, monic)."""
    asc = [Fraction(c) for c in p.ascending()]
    while len(asc) > 1 and asc[0] == 0:
        asc.pop(0)
    if _deg(asc) <= 0:
        return [Fraction(1)]
    g = _gcd(asc, _derivative(asc))
    return _monic(_divmod(asc, g)[0]) if _deg(g) > 0 else _monic(asc)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedRadius:
    """Rational enclosure [lower, upper] of a spectral radius."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper:
            raise ValueError(f"bad enclosure [{self.lower}, {self.upper}]")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __float__(self) -> float:
        return float(self.midpoint)

    def contains(self, x, slack=0) -> bool:
        """True if x lies in the enclosure widened by ``slack`` on both sides."""
        slack = _as_fraction(slack)
        if isinstance(x, float):
            return float(self.lower - slack) <= x <= float(self.upper + slack)
        x = Fraction(x)
        return self.lower - slack <= x <= self.upper + slack


def _cauchy_bound(f: list[Fraction]) -> Fraction:
    lead = abs(f[-1])
    return 1 + max(abs(c) for c in f[:-1]) / lead if len(f) > 1 else Fraction(1)


def _snap(x: Fraction, step: Fraction, up: bool) -> Fraction:
    q = x / step
    k = -((-q.numerator) // q.denominator) if up else q.numerator // q.denominator
    return k * step


def poly_radius(p: MonicIntPoly, tol=DEFAULT_TOL) -> CertifiedRadius:
    """Certified enclosure of max |root| of ``p``."""
    tol = _as_fraction(tol)
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    f = squarefree_nonzero_part(p)
    if _deg(f) == 0:
        return CertifiedRadius(Fraction(0), Fraction(0))

    def settles_at(r):
        c = modulus_census(f, r)
        return c.outside == 0 and c.on > 0

    one = Fraction(1)
    c1 = modulus_census(f, one)
    if c1.outside == 0 and c1.on > 0:
        return CertifiedRadius(one, one)

    guess = None
    try:
        roots = np.roots([float(c) for c in reversed(f)])
        if roots.size and np.all(np.isfinite(roots)):
            guess = float(np.max(np.abs(roots)))
    except (OverflowError, np.linalg.LinAlgError):
        guess = None

    step = tol / 8
    if guess is not None:
        g = Fraction(guess)
        lo = max(Fraction(0), _snap(g - tol / 4, step, up=False))
        hi = _snap(g + tol / 4, step, up=True)
        if hi - lo <= tol:
            c_hi = modulus_census(f, hi)
            if c_hi.outside == 0:
                if c_hi.on > 0:
                    return CertifiedRadius(hi, hi)
                if lo == 0:
                    return CertifiedRadius(lo, hi)
                c_lo = modulus_census(f, lo)
                if c_lo.outside + c_lo.on > 0:
                    return CertifiedRadius(lo, hi)

    # invariant: some root has modulus >= lo, none has modulus > hi
    lo, hi = Fraction(0), _cauchy_bound(f)
    if c1.outside > 0:
        lo = one
    else:
        hi = one
    while hi - lo > tol:
        mid = _snap((lo + hi) / 2, step, up=False) if hi - lo > 2 * step else (lo + hi) / 2
        if mid <= lo or mid >= hi:
            mid = (lo + hi) / 2
        c = modulus_census(f, mid)
        if c.outside == 0:
            if c.on > 0:
                return CertifiedRadius(mid, mid)
            hi = mid
        else:
            lo = mid
    return CertifiedRadius(lo, hi)


def spectral_radius(m: IntMatrix, tol=DEFAULT_TOL) -> CertifiedRadius:
    """Rational enclosure of max |eigenvalue| of ``m`` with width <= tol."""
    tol = _as_fraction(tol)
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    if not m.is_square():
        raise DimensionError(f"spectral_radius needs a square matrix, got {m.rows}x{m.cols}")
    return poly_radius(char_poly(m), tol)


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +1 or -1."""
    if not m.is_square():
        raise DimensionError(f"expected a square matrix, got {m.rows}x{m.cols}")
    d = m.det()
    if d not in (1, -1):
        raise NotUnimodularError(d)
    n = m.rows
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m.entries)]
    for k in range(n):
        piv = next(i for i in range(k, n) if aug[i][k] != 0)
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        aug[k] = [v / pk for v in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
    return IntMatrix([int(v) for v in row[n:]] for row in aug)


def kernel_basis(m: IntMatrix) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Integral kernel of ``m`` by unimodular column reduction.

    Returns ``(kernel, complement)``: together they are the columns of a
    unimodular matrix, and ``kernel`` spans the (saturated) integer kernel.
    """
    a = m.tolist()
    n = m.cols
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, k):
        # column dst -= k * column src
        for row in a:
            row[dst] -= k * row[src]
        for row in u:
            row[dst] -= k * row[src]

    def swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    piv = 0
    for r in range(m.rows):
        if piv >= n:
            break
        row = a[r]
        while True:
            nz = [j for j in range(piv, n) if row[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != piv:
                swap(j0, piv)
            done = True
            for j in range(piv + 1, n):
                if row[j]:
                    colop(j, piv, row[j] // row[piv])
                    if row[j]:
                        done = False
            if done:
                break
        if row[piv] != 0:
            piv += 1
    cols = [tuple(u[i][j] for i in range(n)) for j in range(n)]
    return cols[piv:], cols[:piv]
