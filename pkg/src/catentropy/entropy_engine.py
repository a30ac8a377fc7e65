"""Entropy of auto-equivalence words.

Two independent routes are available:

* :func:`entropy` reads h(F) off the spectral radius of the induced lattice
  map (through phi in the tubular case);
* :func:`estimate_entropy` follows the orbit of the generator sum of
  projectives under the word on a Dynkin path algebra and measures shift
  growth of Hom dimensions directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError, NotIsometryError, TheoremViolation
from .euler_lattice import EulerLattice, GrowthCurve, LatticeEndo, gy_growth_curve, is_isometry
from .exact_linalg import (
    DEFAULT_TOL,
    CertifiedRadius,
    IntMatrix,
    MonicIntPoly,
    _as_fraction,
    char_poly,
    spectral_radius,
)
from .orbifold_line import (
    Auto,
    Generic,
    Generator,
    Serre,
    Shift,
    Twist,
    WeightData,
    generator_matrix,
    phi_map,
)
from .quiver import (
    DynkinType,
    Root,
    ar_translate,
    diagram_automorphism_matrix,
    euler_matrix,
    positive_roots,
    projective_dims,
)
from .quiver import serre_matrix as quiver_serre_matrix
from .sl2z import SL2Matrix, radius


@dataclass(frozen=True)
class DiagramAuto:
    """Automorphism of a Dynkin quiver, vertex i -> perm[i]."""

    perm: tuple[int, ...]


Context = Union[WeightData, DynkinType]


@dataclass(frozen=True)
class AuteqWord:
    context: Context
    gens: tuple = ()

    def __init__(self, context: Context, gens: Iterable = ()):
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "gens", tuple(gens))

    def __add__(self, other: AuteqWord) -> AuteqWord:
        if other.context != self.context:
            raise InputError("cannot concatenate words over different contexts")
        return AuteqWord(self.context, self.gens + other.gens)

    def power(self, k: int) -> AuteqWord:
        return AuteqWord(self.context, self.gens * k)


def dynkin_lattice(d: DynkinType) -> EulerLattice:
    return EulerLattice(euler_matrix(d.quiver), tuple(f"e{i + 1}" for i in range(d.rank)))


def _dynkin_generator(d: DynkinType, gen) -> LatticeEndo:
    lat = dynkin_lattice(d)
    if isinstance(gen, Serre):
        return LatticeEndo(lat, quiver_serre_matrix(d.quiver))
    if isinstance(gen, Shift):
        return LatticeEndo(lat, IntMatrix.identity(d.rank) * (-1) ** (gen.k % 2))
    if isinstance(gen, DiagramAuto):
        return LatticeEndo(lat, diagram_automorphism_matrix(d.quiver, gen.perm))
    if isinstance(gen, Generic):
        endo = LatticeEndo(lat, gen.matrix)
        if gen.matrix.shape != (d.rank, d.rank) or not is_isometry(endo):
            raise NotIsometryError("generic matrix does not preserve the Euler form")
        return endo
    raise InputError(f"generator {gen!r} is not available on a Dynkin quiver")


def generator_endo(context: Context, gen) -> LatticeEndo:
    if isinstance(context, WeightData):
        return generator_matrix(context, gen)
    return _dynkin_generator(context, gen)


def context_lattice(context: Context) -> EulerLattice:
    if isinstance(context, WeightData):
        from .orbifold_line import euler_gram

        return euler_gram(context)
    return dynkin_lattice(context)


def word_to_endo(word: AuteqWord) -> LatticeEndo:
    """Matrix of the composite, rightmost generator applied first."""
    lat = context_lattice(word.context)
    m = IntMatrix.identity(lat.rank)
    for gen in word.gens:
        m = m @ generator_endo(word.context, gen).matrix
    return LatticeEndo(lat, m)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EntropyReport:
    h: float
    rho: CertifiedRadius
    char_poly: MonicIntPoly
    method: str
    matrix: IntMatrix
    phi: SL2Matrix | None = None
    quadratic: tuple[int, int] | None = None

    @property
    def certificate(self):
        """(trace, discriminant) in the tubular case, else the characteristic polynomial."""
        return self.quadratic if self.quadratic is not None else self.char_poly

    def closed_form(self) -> str:
        if self.h == 0:
            return "0"
        if self.quadratic is not None:
            t, disc = self.quadratic
            return f"log(({abs(t)}+sqrt({disc}))/2)"
        return f"log(rho), rho in [{self.rho.lower}, {self.rho.upper}]"


def _log_rho(rho: CertifiedRadius) -> float:
    if rho.lower == rho.upper == 1:
        return 0.0
    return max(0.0, math.log(float(rho.midpoint)))


def quadratic_in_enclosure(rho: CertifiedRadius, trace: int, disc: int) -> bool:
    """Exactly decide (|trace| + sqrt(disc)) / 2 in [lower, upper]."""
    t = abs(trace)
    if disc <= 0:
        return rho.contains(1)

    def ge(bound: Fraction) -> bool:
        # (t + sqrt(disc)) / 2 >= bound
        lhs = 2 * bound - t
        return lhs <= 0 or lhs * lhs <= disc

    def le(bound: Fraction) -> bool:
        lhs = 2 * bound - t
        return lhs >= 0 and lhs * lhs >= disc

    return ge(rho.lower) and le(rho.upper)


def entropy(word: AuteqWord, tol=DEFAULT_TOL) -> EntropyReport:
    tol = _as_fraction(tol)
    endo = word_to_endo(word)
    m = endo.matrix
    poly = char_poly(m)
    rho = spectral_radius(m, tol)
    ctx = word.context
    has_generic = any(isinstance(g, Generic) for g in word.gens)

    if isinstance(ctx, DynkinType):
        return EntropyReport(_log_rho(rho), rho, poly, "hereditary-spectral", m)

    if ctx.chi != 0:
        if has_generic:
            return EntropyReport(_log_rho(rho), rho, poly, "hereditary-spectral", m)
        if not rho.contains(1):
            raise TheoremViolation(
                f"chi_A = {ctx.chi} but rho(N(F)) in [{rho.lower}, {rho.upper}] excludes 1"
            )
        if ctx.chi < 0:
            core = word_to_endo(AuteqWord(ctx, [g for g in word.gens if not isinstance(g, Shift)]))
            if not spectral_radius(core.matrix, tol).contains(1):
                raise TheoremViolation("shift-free part of a chi_A < 0 word has rho != 1")
        method = "chi-positive" if ctx.chi > 0 else "chi-negative"
        return EntropyReport(0.0, rho, poly, method, m)

    phi = phi_map(ctx, endo)
    r = radius(phi)
    if not quadratic_in_enclosure(rho, r.trace, r.discriminant):
        raise TheoremViolation(
            f"rho(N(F)) in [{rho.lower}, {rho.upper}] but rho(phi(F)) = {r.closed_form()}"
        )
    h = 0.0 if r.discriminant <= 0 else math.log(r.value)
    return EntropyReport(h, rho, poly, "tubular-phi", m, phi, (r.trace, r.discriminant))


# ---------------------------------------------------------------------------
# growth of Hom dimensions on Dynkin path algebras


@dataclass(frozen=True)
class DerivedObject:
    """Direct sum of shifted indecomposables M[s], recorded as (root, s)."""

    summands: tuple[tuple[Root, int], ...]

    def __init__(self, summands: Iterable[tuple[Root, int]]):
        object.__setattr__(self, "summands", tuple((r, int(s)) for r, s in summands))

    def validate(self, d: DynkinType) -> None:
        roots = set(positive_roots(d))
        for root, _ in self.summands:
            if root not in roots:
                raise InputError(f"{root.dim_vector} is not a positive root of {d.name}")


def free_module(d: DynkinType) -> DerivedObject:
    """The path algebra as the sum of its indecomposable projectives."""
    return DerivedObject((Root(p), 0) for p in projective_dims(d.quiver))


def delta_prime(d: DynkinType, obj: DerivedObject, t: float) -> float:
    """sum_m dim Hom(A, obj[m]) e^{-mt}; a module M[s] contributes dim M * e^{st}."""
    return sum(root.dimension * math.exp(s * t) for root, s in obj.summands)


def apply_word(d: DynkinType, gens: Sequence, summand: tuple[Root, int]) -> tuple[Root, int]:
    root, s = summand
    for gen in reversed(gens):
        if isinstance(gen, Serre):
            root, s = ar_translate(d, (root, s))
        elif isinstance(gen, Shift):
            s += gen.k
        elif isinstance(gen, DiagramAuto):
            perm = gen.perm
            vec = [0] * d.rank
            for i, x in enumerate(root.dim_vector):
                vec[perm[i]] = x
            root = Root(tuple(vec))
        else:
            raise InputError(f"{gen!r} cannot act on indecomposables here")
    return root, s


@dataclass
class EntropyEstimate:
    n_max: int
    estimates: dict[float, float]
    slope: Fraction
    period: int
    shift_gain: int
    curves: dict[float, list[float]] = field(default_factory=dict)

    def h_t(self, t) -> Fraction | float:
        """Exact entropy h_t = slope * t."""
        if isinstance(t, float):
            return float(self.slope) * t
        return self.slope * Fraction(t)

    @property
    def h0(self) -> Fraction:
        return self.slope * 0


def estimate_entropy(
    d: DynkinType,
    gens: Sequence,
    t_values: Sequence[float] = (0.0,),
    n_max: int = 60,
) -> EntropyEstimate:
    """(1/n) log delta'_t(A, F^n A) at n = n_max, plus the exact asymptotic slope.

    The orbit of the summands is eventually periodic up to a global shift,
    detected through the signature (roots, shifts relative to the first
    summand); h_t is then (shift gained per period / period length) * t.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for gen in gens:
        if isinstance(gen, DiagramAuto):
            diagram_automorphism_matrix(d.quiver, gen.perm)
    state = list(free_module(d).summands)
    curves: dict[float, list[float]] = {t: [] for t in t_values}
    seen: dict[tuple, tuple[int, int]] = {}
    slope = period = gain = None
    cap = max(n_max, 4 * len(positive_roots(d)) * d.rank + 8)
    n = 0
    while n < n_max or slope is None:
        sig = (tuple(r for r, _ in state), tuple(s - state[0][1] for _, s in state))
        if slope is None:
            if sig in seen:
                n0, s0 = seen[sig]
                period, gain = n - n0, state[0][1] - s0
                slope = Fraction(gain, period)
            else:
                seen[sig] = (n, state[0][1])
        if n >= n_max and slope is not None:
            break
        if n >= cap and slope is None:
            raise ArithmeticError("orbit did not become periodic up to shift")
        state = [apply_word(d, gens, x) for x in state]
        n += 1
        if n <= n_max:
            obj = DerivedObject(state)
            for t in t_values:
                curves[t].append(math.log(delta_prime(d, obj, t)) / n)
    estimates = {t: curves[t][n_max - 1] for t in t_values}
    return EntropyEstimate(n_max, estimates, slope, period, gain, curves)


# ---------------------------------------------------------------------------


@dataclass
class GYReport:
    log_rho: float
    rho: CertifiedRadius
    curve: GrowthCurve
    tail_deviation: float
    final_value: float | None

    @property
    def degenerate(self) -> bool:
        return self.curve.degenerate


def gy_consistency(word: AuteqWord, n_max: int = 200, tol=DEFAULT_TOL) -> GYReport:
    """Compare the norm-growth curve of N(F) with log rho(N(F)) over the last quartile."""
    endo = word_to_endo(word)
    rho = spectral_radius(endo.matrix, tol)
    log_rho = _log_rho(rho)
    curve = gy_growth_curve(endo, n_max)
    if curve.degenerate:
        return GYReport(log_rho, rho, curve, math.inf, None)
    start = max(1, (3 * len(curve)) // 4)
    tail = curve.values[start - 1:]
    dev = max(abs(s - log_rho) for s in tail)
    return GYReport(log_rho, rho, curve, dev, curve.values[-1])
