"""K-theory of orbifold projective lines P^1(A, Lambda).

Classes live in the basis

    [O]; [S_{1,1}], ..., [S_{1,a_1-1}]; ...; [S_{r,1}], ..., [S_{r,a_r-1}]; [S]

where S is the torsion sheaf at a generic point and S_{i,j} the simple
torsion sheaves at the weighted point lambda_i. [S_{i,0}] is not a basis
vector; it expands as [S] - sum_{j>=1} [S_{i,j}].

Branch indices i are 0-based in code and 1-based in labels. Words of
generators act right to left: the rightmost generator is applied first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import (
    AdmissibilityError,
    InputError,
    NotGeometricError,
    NotIsometryError,
    OrientationError,
    PreconditionError,
)
from .euler_lattice import EulerLattice, LatticeEndo, is_isometry, pairing
from .exact_linalg import IntMatrix, unimodular_inverse
from .sl2z import SL2Matrix


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Point = Union[Fraction, _Infinity]


def parse_point(s) -> Point:
    if s is INF or (isinstance(s, str) and s.strip().lower() in ("inf", "infinity", "oo")):
        return INF
    try:
        return Fraction(s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read {s!r} as a point of the rational projective line") from exc


def format_point(p: Point) -> str:
    return "inf" if p is INF else str(p)


@dataclass(frozen=True)
class WeightData:
    weights: tuple[int, ...]
    points: tuple[Point, ...]

    def __init__(self, weights: Sequence[int], points: Sequence | None = None):
        weights = tuple(int(a) for a in weights)
        if len(weights) < 3:
            raise InputError(f"need at least three weighted points, got {len(weights)}")
        if any(a < 1 for a in weights):
            raise InputError(f"weights must be positive, got {weights}")
        if points is None:
            points = [INF, 0, 1] + list(range(2, len(weights) - 1))
        pts = tuple(parse_point(p) for p in points)
        if len(pts) != len(weights):
            raise InputError("one point per weight required")
        if pts[:3] != (INF, Fraction(0), Fraction(1)):
            raise InputError("points must be normalized to (inf, 0, 1, ...)")
        if len(set(pts)) != len(pts):
            raise InputError("points must be pairwise distinct")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "points", pts)

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def a(self) -> int:
        return math.lcm(*self.weights)

    @property
    def mu(self) -> int:
        return 2 + sum(a - 1 for a in self.weights)

    @property
    def chi(self) -> Fraction:
        return 2 + sum(Fraction(1, a) - 1 for a in self.weights)

    def offset(self, i: int) -> int:
        """Basis index of [S_{i,1}]."""
        return 1 + sum(a - 1 for a in self.weights[:i])

    def index_S(self) -> int:
        return self.mu - 1

    def index_Sij(self, i: int, j: int) -> int:
        if not 1 <= j < self.weights[i]:
            raise IndexError(f"S_{{{i + 1},{j}}} is not a basis class")
        return self.offset(i) + j - 1

    def labels(self) -> tuple[str, ...]:
        out = ["O"]
        for i, a in enumerate(self.weights):
            out += [f"S_{i + 1},{j}" for j in range(1, a)]
        return tuple(out + ["S"])


def invariants(w: WeightData) -> tuple[int, int, Fraction]:
    return w.a, w.mu, w.chi


# ---------------------------------------------------------------------------
# the grading group L_A


@dataclass(frozen=True)
class LElement:
    """l c + sum p_i x_i with 0 <= p_i < a_i (normal form)."""

    l: int
    p: tuple[int, ...]


def element(w: WeightData, l: int = 0, p: Sequence[int] | None = None) -> LElement:
    """Normal form of l c + sum p_i x_i for arbitrary integers p_i."""
    p = [0] * w.r if p is None else list(p)
    if len(p) != w.r:
        raise InputError(f"expected {w.r} coefficients, got {len(p)}")
    for i, a in enumerate(w.weights):
        q, p[i] = divmod(p[i], a)
        l += q
    return LElement(l, tuple(p))


def c_vec(w: WeightData) -> LElement:
    return LElement(1, (0,) * w.r)


def x_vec(w: WeightData, i: int) -> LElement:
    return element(w, 0, [int(k == i) for k in range(w.r)])


def l_add(w: WeightData, x: LElement, y: LElement) -> LElement:
    return element(w, x.l + y.l, [a + b for a, b in zip(x.p, y.p)])


def l_neg(w: WeightData, x: LElement) -> LElement:
    return element(w, -x.l, [-a for a in x.p])


def l_sub(w: WeightData, x: LElement, y: LElement) -> LElement:
    return l_add(w, x, l_neg(w, y))


def l_scale(w: WeightData, k: int, x: LElement) -> LElement:
    return element(w, k * x.l, [k * a for a in x.p])


def is_positive(w: WeightData, x: LElement) -> bool:
    return x.l >= 0 and (x.l != 0 or any(x.p))


def omega(w: WeightData) -> LElement:
    """Dualizing element (r - 2) c - sum x_i."""
    return element(w, w.r - 2, [-1] * w.r)


def degree(w: WeightData, x: LElement) -> int:
    return x.l * w.a + sum(p * (w.a // a) for p, a in zip(x.p, w.weights))


def graded_dim(w: WeightData, x: LElement) -> int:
    """Dimension of the degree-x piece of the coordinate ring."""
    return x.l + 1 if x.l >= 0 else 0


# ---------------------------------------------------------------------------
# Grothendieck lattice


def _unit(w: WeightData, k: int) -> list[int]:
    v = [0] * w.mu
    v[k] = 1
    return v


def class_of_Sij(w: WeightData, i: int, j: int) -> tuple[int, ...]:
    a = w.weights[i]
    j %= a
    if j:
        return tuple(_unit(w, w.index_Sij(i, j)))
    v = _unit(w, w.index_S())
    for k in range(1, a):
        v[w.index_Sij(i, k)] -= 1
    return tuple(v)


def class_of_line_bundle(w: WeightData, x: LElement) -> tuple[int, ...]:
    """[O(x)] = [O] + l [S] + sum_i sum_{q < p_i} [S_{i,q}]."""
    v = _unit(w, 0)
    v[w.index_S()] += x.l
    for i, p in enumerate(x.p):
        for q in range(p):
            for k, c in enumerate(class_of_Sij(w, i, q)):
                v[k] += c
    return tuple(v)


def _exceptional_degrees(w: WeightData) -> list[LElement]:
    out = [element(w)]
    for i, a in enumerate(w.weights):
        out += [l_scale(w, j, x_vec(w, i)) for j in range(1, a)]
    return out + [c_vec(w)]


@lru_cache(maxsize=None)
def euler_gram(w: WeightData) -> EulerLattice:
    """Euler form in the {[O], [S_ij], [S]} basis.

    Built on the exceptional collection of line bundles O(x), where
    chi(O(x), O(y)) = dim R_{y-x} - dim R_{x-y+omega}, then transported
    through the unimodular change of basis.
    """
    degs = _exceptional_degrees(w)
    om = omega(w)
    ge = IntMatrix(
        [
            graded_dim(w, l_sub(w, y, x)) - graded_dim(w, l_add(w, l_sub(w, x, y), om))
            for y in degs
        ]
        for x in degs
    )
    t = IntMatrix.from_columns([class_of_line_bundle(w, x) for x in degs])
    t_inv = unimodular_inverse(t)
    return EulerLattice(t_inv.T @ ge @ t_inv, w.labels())


def lattice(w: WeightData) -> EulerLattice:
    return euler_gram(w)


def _endo(w: WeightData, columns: Sequence[Sequence[int]]) -> LatticeEndo:
    return LatticeEndo(euler_gram(w), IntMatrix.from_columns(columns))


def twist_matrix(w: WeightData, x: LElement) -> LatticeEndo:
    """Action of - (x) O(x)."""
    cols = [class_of_line_bundle(w, x)]
    for i, a in enumerate(w.weights):
        cols += [class_of_Sij(w, i, j + x.p[i]) for j in range(1, a)]
    cols.append(tuple(_unit(w, w.index_S())))
    return _endo(w, cols)


def serre_matrix(w: WeightData) -> LatticeEndo:
    """Serre functor = (- (x) O(omega)) [1]."""
    return -twist_matrix(w, omega(w))


def shift_matrix(w: WeightData, k: int = 1) -> LatticeEndo:
    return LatticeEndo(euler_gram(w), IntMatrix.identity(w.mu) * (-1) ** (k % 2))


# ---------------------------------------------------------------------------
# automorphisms of the weighted line


@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b) / (c z + d) over Q, acting on Q u {inf}."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise InputError("degenerate Mobius transformation")

    @classmethod
    def identity(cls) -> Mobius:
        return cls(1, 0, 0, 1)

    def __call__(self, z: Point) -> Point:
        num, den = (self.a, self.c) if z is INF else (self.a * z + self.b, self.c * z + self.d)
        return INF if den == 0 else num / den

    def __matmul__(self, o: Mobius) -> Mobius:
        return Mobius(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> Mobius:
        return Mobius(self.d, -self.b, -self.c, self.a)


def _homog(z: Point) -> tuple[Fraction, Fraction]:
    return (Fraction(1), Fraction(0)) if z is INF else (Fraction(z), Fraction(1))


def _standard_frame(z1: Point, z2: Point, z3: Point) -> Mobius:
    """The transformation sending inf, 0, 1 to z1, z2, z3."""
    (p1, q1), (p2, q2), (p3, q3) = _homog(z1), _homog(z2), _homog(z3)
    det = p1 * q2 - p2 * q1
    if det == 0:
        raise InputError("frame points must be distinct")
    s1 = (p3 * q2 - p2 * q3) / det
    s2 = (p1 * q3 - p3 * q1) / det
    return Mobius(s1 * p1, s2 * p2, s1 * q1, s2 * q2)


def mobius_through(src: Sequence[Point], dst: Sequence[Point]) -> Mobius:
    """The unique Mobius map sending three distinct points to three distinct points."""
    return _standard_frame(*dst) @ _standard_frame(*src).inverse()


def check_automorphism(w: WeightData, sigma: Sequence[int], g: Mobius) -> None:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(w.r)):
        raise AdmissibilityError(f"{sigma} is not a permutation of the {w.r} points")
    for i, s in enumerate(sigma):
        if w.weights[s] != w.weights[i]:
            raise AdmissibilityError(
                f"point {i + 1} of weight {w.weights[i]} sent to point {s + 1} of weight {w.weights[s]}"
            )
        image = g(w.points[i])
        if image != w.points[s]:
            raise AdmissibilityError(
                f"g(lambda_{i + 1}) = {format_point(image)} but lambda_{s + 1} = {format_point(w.points[s])}"
            )


def automorphisms(w: WeightData) -> list[tuple[tuple[int, ...], Mobius]]:
    """All admissible (sigma, g): g(lambda_i) = lambda_sigma(i), weights preserved."""
    out = []
    for sigma in itertools.permutations(range(w.r)):
        if any(w.weights[s] != w.weights[i] for i, s in enumerate(sigma)):
            continue
        g = mobius_through(w.points[:3], [w.points[s] for s in sigma[:3]])
        try:
            check_automorphism(w, sigma, g)
        except AdmissibilityError:
            continue
        out.append((sigma, g))
    return out


def auto_matrix(w: WeightData, sigma: Sequence[int], g: Mobius) -> LatticeEndo:
    """Permutes [S_{i,j}] -> [S_{sigma(i),j}], fixes [O] and [S]."""
    check_automorphism(w, sigma, g)
    cols = [tuple(_unit(w, 0))]
    for i, a in enumerate(w.weights):
        cols += [tuple(_unit(w, w.index_Sij(sigma[i], j))) for j in range(1, a)]
    cols.append(tuple(_unit(w, w.index_S())))
    return _endo(w, cols)


# ---------------------------------------------------------------------------
# rank, degree and the SL(2, Z) representation


def nu_matrix(w: WeightData) -> IntMatrix:
    """Rows: rank and degree of each basis class."""
    rk = [1] + [0] * (w.mu - 1)
    deg = [0]
    for a in w.weights:
        deg += [w.a // a] * (a - 1)
    deg.append(w.a)
    return IntMatrix([rk, deg])


def rank_degree(w: WeightData, v: Sequence[int]) -> tuple[int, int]:
    if len(v) != w.mu:
        raise InputError(f"class of length {len(v)} on a rank {w.mu} lattice")
    rk, deg = nu_matrix(w) @ v
    return rk, deg


def chi_prime(u: Sequence[int], v: Sequence[int]) -> int:
    (r1, d1), (r2, d2) = u, v
    return r1 * d2 - r2 * d1


def phi_map(w: WeightData, endo: LatticeEndo) -> SL2Matrix:
    """The 2x2 matrix phi with phi . nu = nu . N(F)."""
    nu = nu_matrix(w)
    img = nu @ endo.matrix
    # nu([O]) = (1, 0), nu([S]) = (0, a)
    col0 = img.column(0)
    col1 = [Fraction(x, w.a) for x in img.column(w.index_S())]
    if any(x.denominator != 1 for x in col1):
        raise NotGeometricError("induced map on (rank, degree) is not integral")
    phi = IntMatrix([[col0[0], int(col1[0])], [col0[1], int(col1[1])]])
    if phi @ nu != img:
        raise NotGeometricError("endomorphism does not preserve the kernel of (rank, degree)")
    det = phi.det()
    if det != 1:
        raise OrientationError(f"induced map on (rank, degree) has determinant {det}")
    return SL2Matrix.from_rows(phi.entries)


def riemann_roch_check(w: WeightData, u: Sequence[int], v: Sequence[int]) -> bool:
    """sum_{j=1}^{a} chi(u(j omega), v) == chi'(nu u, nu v); tubular weights only."""
    if w.chi != 0:
        raise PreconditionError(f"needs chi_A = 0, got {w.chi}")
    lat = euler_gram(w)
    om = omega(w)
    lhs = sum(
        pairing(lat, twist_matrix(w, l_scale(w, j, om))(u), v) for j in range(1, w.a + 1)
    )
    return lhs == chi_prime(rank_degree(w, u), rank_degree(w, v))


def orbit_twist_matrix(w: WeightData, x: LElement | None = None) -> LatticeEndo:
    """v -> v - sum_{j<a} chi(E_j, v) [E_j] over the omega-orbit E_j = O(x + j omega).

    For tubular weights the orbit is orthogonal and omega has order a, and
    the resulting lattice isometry acts on (rank, degree) with phi = U^{-1}
    when x has degree 0 (U = [[1, 1], [0, 1]]).
    """
    if w.chi != 0:
        raise PreconditionError(f"orbit twists are defined here for chi_A = 0, got {w.chi}")
    x = element(w) if x is None else x
    lat = euler_gram(w)
    om = omega(w)
    orbit = [class_of_line_bundle(w, l_add(w, x, l_scale(w, j, om))) for j in range(w.a)]
    cols = []
    for k in range(w.mu):
        e = _unit(w, k)
        v = list(e)
        for cls in orbit:
            coeff = pairing(lat, cls, e)
            for idx, c in enumerate(cls):
                v[idx] -= coeff * c
        cols.append(v)
    return _endo(w, cols)


def sl2_lifts(w: WeightData) -> tuple[LatticeEndo, LatticeEndo]:
    """Lattice isometries whose phi are L = [[1,0],[1,1]] and U = [[1,1],[0,1]]."""
    if w.chi != 0:
        raise PreconditionError(f"needs chi_A = 0, got {w.chi}")
    i = w.weights.index(w.a)
    lift_l = twist_matrix(w, x_vec(w, i))
    lift_u = LatticeEndo(lift_l.lattice, unimodular_inverse(orbit_twist_matrix(w).matrix))
    return lift_l, lift_u


# ---------------------------------------------------------------------------
# generators of auto-equivalences


@dataclass(frozen=True)
class Shift:
    k: int = 1


@dataclass(frozen=True)
class Twist:
    x: LElement


@dataclass(frozen=True)
class Auto:
    sigma: tuple[int, ...]
    g: Mobius


@dataclass(frozen=True)
class Serre:
    pass


@dataclass(frozen=True)
class Generic:
    matrix: IntMatrix


Generator = Union[Shift, Twist, Auto, Serre, Generic]


def generator_matrix(w: WeightData, gen: Generator) -> LatticeEndo:
    if isinstance(gen, Shift):
        return shift_matrix(w, gen.k)
    if isinstance(gen, Twist):
        if len(gen.x.p) != w.r:
            raise InputError("twist element has the wrong number of coefficients")
        return twist_matrix(w, element(w, gen.x.l, gen.x.p))
    if isinstance(gen, Auto):
        return auto_matrix(w, gen.sigma, gen.g)
    if isinstance(gen, Serre):
        return serre_matrix(w)
    if isinstance(gen, Generic):
        if gen.matrix.shape != (w.mu, w.mu):
            raise NotIsometryError(f"generic matrix must be {w.mu}x{w.mu}, got {gen.matrix.shape}")
        endo = LatticeEndo(euler_gram(w), gen.matrix)
        if not is_isometry(endo):
            raise NotIsometryError("generic matrix does not preserve the Euler form")
        return endo
    raise InputError(f"unknown generator {gen!r}")
