import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catentropy.errors import PreconditionError
from catentropy.sl2z import (
    L,
    U,
    SL2Matrix,
    block,
    classify,
    conjugate,
    positive_factorize,
    radius,
    word_product,
)

GENERATORS = [U, L, U.inverse(), L.inverse(), SL2Matrix(0, -1, 1, 0)]


def test_det_checked():
    with pytest.raises(PreconditionError):
        SL2Matrix(1, 1, 1, 1)


def test_classify_and_radius():
    assert classify(SL2Matrix(0, -1, 1, 0)) == "elliptic"
    assert classify(U) == "parabolic"
    assert classify(-U) == "parabolic"
    m = SL2Matrix(1, 1, 1, 2)
    assert classify(m) == "hyperbolic"
    r = radius(m)
    assert r.closed_form() == "(3+sqrt(5))/2"
    assert r.value == pytest.approx((3 + 5**0.5) / 2, abs=1e-15)
    assert radius(U).value == 1.0


def test_radius_of_huge_trace():
    m = SL2Matrix(10**400, 10**400 - 1, 1, 1)
    assert radius(m).value == math.inf


def test_block_and_word_product():
    assert block(2, 3) == SL2Matrix(1, 3, 2, 7) == L**2 @ U**3
    assert word_product([3, 2]) == SL2Matrix(1, 3, 2, 7)
    assert word_product([1, 1, 2, 3]) == block(3, 2) @ block(1, 1)


def test_factorize_examples():
    pw = positive_factorize(SL2Matrix(1, 1, 1, 2))
    assert pw.m == (1, 1) and pw.conjugator.is_identity() and pw.verify(SL2Matrix(1, 1, 1, 2))
    pw = positive_factorize(SL2Matrix(1, 3, 2, 7))
    assert pw.m == (3, 2)
    ul = U @ L
    pw = positive_factorize(ul)
    assert pw.m == (1, 1) and pw.verify(ul)
    neg = positive_factorize(-ul)
    assert neg.sign == -1 and neg.verify(-ul)


@pytest.mark.parametrize("m", [U, L, SL2Matrix(0, -1, 1, 0), -SL2Matrix.identity(), SL2Matrix(1, -1, 1, 0)])
def test_factorize_rejects_non_hyperbolic(m):
    with pytest.raises(PreconditionError):
        positive_factorize(m)


def test_factorize_powers():
    m = SL2Matrix(2, 1, 1, 1) ** 3
    pw = positive_factorize(m)
    assert pw.verify(m) and len(pw.m) == 6


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(1, 9), min_size=2, max_size=8).filter(lambda s: len(s) % 2 == 0),
    st.lists(st.sampled_from(range(len(GENERATORS))), max_size=10),
    st.booleans(),
)
def test_factorize_roundtrip(seq, conj_word, negate):
    p = SL2Matrix.identity()
    for k in conj_word:
        p = p @ GENERATORS[k]
    m = conjugate(word_product(seq), p)
    if negate:
        m = -m
    pw = positive_factorize(m)
    assert pw.verify(m)
    assert all(x >= 1 for x in pw.m)
    # canonical form is a conjugacy invariant
    assert positive_factorize(conjugate(m, U @ L.inverse())).m == pw.m
    # and it is a block rotation of the input sequence
    pairs = [tuple(seq[k:k + 2]) for k in range(0, len(seq), 2)]
    got = [tuple(pw.m[k:k + 2]) for k in range(0, len(pw.m), 2)]
    assert any(got == pairs[s:] + pairs[:s] for s in range(len(pairs)))
