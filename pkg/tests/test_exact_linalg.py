from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catentropy.errors import DimensionError, NotUnimodularError, ParameterError
from catentropy.exact_linalg import (
    DEFAULT_TOL,
    IntMatrix,
    MonicIntPoly,
    bareiss_det,
    char_poly,
    kernel_basis,
    modulus_census,
    poly_radius,
    spectral_radius,
    squarefree_nonzero_part,
    unimodular_inverse,
)

from oracles import faddeev_leverrier


def square(n_min=1, n_max=5, lo=-4, hi=4):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_matrix_basics():
    m = IntMatrix([[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m.T == IntMatrix([[1, 3], [2, 4]])
    assert m @ (1, 1) == (3, 7)
    assert (m @ IntMatrix.identity(2)) == m
    assert m.det() == -2
    assert m.trace() == 5
    with pytest.raises(DimensionError):
        IntMatrix([[1, 2], [3]])


def test_char_poly_examples():
    assert char_poly(IntMatrix([[1, 1], [1, 2]])).coeffs == (1, -3, 1)
    assert char_poly(IntMatrix.identity(3)).coeffs == (1, -3, 3, -1)
    assert str(char_poly(IntMatrix([[1, 1], [1, 2]]))) == "x^2 - 3*x + 1"


@settings(max_examples=80, deadline=None)
@given(square())
def test_char_poly_matches_faddeev_leverrier(rows):
    assert list(char_poly(IntMatrix(rows)).coeffs) == faddeev_leverrier(rows)


@settings(max_examples=60, deadline=None)
@given(square())
def test_det_is_constant_term(rows):
    m = IntMatrix(rows)
    n = m.rows
    assert char_poly(m).coeffs[-1] == (-1) ** n * bareiss_det([list(r) for r in rows])


def test_spectral_radius_examples():
    rho = spectral_radius(IntMatrix([[1, 1], [1, 2]]))
    golden_sq = (3 + 5**0.5) / 2
    assert rho.width <= DEFAULT_TOL
    assert rho.contains(golden_sq)
    assert spectral_radius(IntMatrix.identity(4)).exact
    assert spectral_radius(IntMatrix([[0, 1], [0, 0]])).upper == 0
    with pytest.raises(ParameterError):
        spectral_radius(IntMatrix.identity(2), 0)


@settings(max_examples=60, deadline=None)
@given(square(1, 5, -3, 3))
def test_spectral_radius_against_numpy(rows):
    rho = spectral_radius(IntMatrix(rows), Fraction(1, 10**6))
    ref = max(abs(np.linalg.eigvals(np.array(rows, dtype=float))))
    assert rho.width <= Fraction(1, 10**6)
    # numpy only serves as a loose sanity reference here
    assert float(rho.lower) - 1e-5 <= ref <= float(rho.upper) + 1e-5


def test_roots_on_the_circle_are_exact():
    # cyclotomic times a Salem-free factor: x^4 + 1 has all roots on |z| = 1
    assert poly_radius(MonicIntPoly((1, 0, 0, 0, 1))).exact
    c = modulus_census([Fraction(1), 0, 0, 0, 1], Fraction(1))
    assert (c.inside, c.on, c.outside) == (0, 4, 0)


def test_census_splits_reciprocal_pairs():
    # (x - 2)(x - 1/2) = x^2 - 5/2 x + 1
    c = modulus_census([Fraction(1), Fraction(-5, 2), Fraction(1)], Fraction(1))
    assert (c.inside, c.on, c.outside) == (1, 0, 1)


def test_squarefree_part():
    p = MonicIntPoly((1, -2, 1, 0))  # x (x - 1)^2
    assert squarefree_nonzero_part(p) == [Fraction(-1), Fraction(1)]


def test_unimodular_inverse():
    m = IntMatrix([[1, 1], [-1, 0]])
    assert unimodular_inverse(m) == IntMatrix([[0, -1], [1, 1]])
    with pytest.raises(NotUnimodularError) as info:
        unimodular_inverse(IntMatrix([[2, 0], [0, 1]]))
    assert info.value.det == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["u", "l", "s", "n"]), max_size=12), st.integers(2, 4))
def test_unimodular_inverse_roundtrip(ops, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for k, op in enumerate(ops):
        i, j = k % n, (k + 1) % n
        if op == "u":
            m[i] = [a + b for a, b in zip(m[i], m[j])]
        elif op == "l":
            m[j] = [a - 2 * b for a, b in zip(m[j], m[i])]
        elif op == "s":
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    a = IntMatrix(m)
    assert (a @ unimodular_inverse(a)).is_identity()


def test_kernel_basis():
    kernel, comp = kernel_basis(IntMatrix([[2, -2], [-2, 2]]))
    assert [tuple(abs(x) for x in v) for v in kernel] == [(1, 1)]
    assert len(comp) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_kernel_basis_is_unimodular_and_annihilated(rows):
    m = IntMatrix(rows)
    kernel, comp = kernel_basis(m)
    assert len(kernel) + len(comp) == m.cols
    for v in kernel:
        assert all(x == 0 for x in m @ v)
    assert abs(IntMatrix.from_columns(kernel + comp).det()) == 1
    rank = np.linalg.matrix_rank(np.array(rows, dtype=float))
    assert len(kernel) == m.cols - rank
