import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catentropy.errors import DimensionError
from catentropy.euler_lattice import (
    EulerLattice,
    LatticeEndo,
    gy_growth_curve,
    is_isometry,
    numerical_quotient,
    pairing,
    radical,
)
from catentropy.exact_linalg import IntMatrix


def test_default_labels_and_pairing():
    lat = EulerLattice(IntMatrix([[1, 1], [-1, 0]]))
    assert lat.labels == ("v0", "v1")
    assert pairing(lat, (1, 0), (0, 1)) == 1
    assert pairing(lat, (0, 1), (1, 0)) == -1
    with pytest.raises(DimensionError):
        pairing(lat, (1,), (1, 0))


def test_radical_and_quotient():
    lat = EulerLattice(IntMatrix([[2, -2], [-2, 2]]))
    rad = radical(lat)
    assert len(rad) == 1 and abs(rad[0][0]) == abs(rad[0][1]) == 1
    q = numerical_quotient(lat)
    assert q.rank == 1 and q.gram == IntMatrix([[2]])


def test_nondegenerate_quotient_is_identity():
    lat = EulerLattice(IntMatrix([[1, 1], [-1, 0]]))
    assert radical(lat) == []
    assert numerical_quotient(lat) is lat


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_quotient_pairing_is_nondegenerate(vals):
    # gram = B + B^T-like block with a forced radical vector e_2
    a, b, c, d = vals
    g = IntMatrix([[a, b, 0], [c, d, 0], [0, 0, 0]])
    q = numerical_quotient(EulerLattice(g))
    assert radical(q) == []


def test_isometry():
    lat = EulerLattice(IntMatrix([[1, 1], [-1, 0]]))
    serre = LatticeEndo(lat, IntMatrix([[-1, 0], [2, -1]]))
    assert lat.gram @ serre.matrix == lat.gram.T
    assert is_isometry(serre)
    assert not is_isometry(LatticeEndo(lat, IntMatrix([[2, 1], [1, 1]])))


def test_endo_shape_checked():
    lat = EulerLattice(IntMatrix.identity(2))
    with pytest.raises(DimensionError):
        LatticeEndo(lat, IntMatrix.identity(3))


def test_growth_curve():
    lat = EulerLattice(IntMatrix([[1, 1], [-1, 0]]))
    endo = LatticeEndo(lat, IntMatrix([[2, 1], [1, 1]]))
    curve = gy_growth_curve(endo, 200)
    log_rho = math.log((3 + 5**0.5) / 2)
    # converges from above at rate O(1/n): n (s_n - log rho) settles to a constant
    assert curve[200] > log_rho
    assert abs(200 * (curve[200] - log_rho) - 100 * (curve[100] - log_rho)) < 1e-6
    assert all(b <= a for a, b in zip(curve.values[150:], curve.values[151:]))


def test_growth_curve_identity_and_degenerate():
    lat = EulerLattice(IntMatrix.identity(2))
    assert gy_growth_curve(LatticeEndo(lat, IntMatrix.identity(2)), 5).values == [math.log(2) / n for n in range(1, 6)]
    nil = gy_growth_curve(LatticeEndo(lat, IntMatrix([[0, 1], [0, 0]])), 5)
    assert nil.degenerate and len(nil) == 1
    with pytest.raises(ValueError):
        gy_growth_curve(LatticeEndo(lat, IntMatrix.identity(2)), 0)
