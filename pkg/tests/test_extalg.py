import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brnr.errors import ParseError
from brnr.extalg import (
    MultiVector,
    complementary_factor,
    format_multivector,
    gram_matrix,
    index_tuples,
    pairing,
    parse_multivector,
    partial_decomposability_witness,
    sort_sign,
    tuple_rank,
    tuple_unrank,
    wedge,
    wedge_vector_map,
)
from brnr.fflin import kernel, span


def u(i, p=7, n=6):
    return MultiVector.basis(p, n, (i - 1,))


def pv(text, p=7, n=6):
    return parse_multivector(text, p, n)


def test_golden_expansion():
    p = 7
    got = wedge(u(1) + u(4), u(2) + u(3))
    assert got == pv("(1,2)-(3,4)+(1,3)-(2,4)")
    assert format_multivector(got) == "(1,2)+(1,3)-(2,4)-(3,4)"
    assert (u(1) ^ u(1)).is_zero()
    assert wedge(u(2) ^ u(1), u(3)) == -1 * pv("(1,2,3)", p)


def test_rank_unrank_bijection():
    for n in range(1, 8):
        for d in range(0, n + 1):
            tuples = index_tuples(n, d)
            assert len(tuples) == comb(n, d)
            assert list(tuples) == sorted(tuples)
            for r, t in enumerate(tuples):
                assert tuple_rank(t, n) == r
                assert tuple_unrank(r, n, d) == t


def test_sort_sign():
    assert sort_sign((2, 1, 3)) == (-1, (1, 2, 3))
    assert sort_sign((3, 1, 2)) == (1, (1, 2, 3))
    assert sort_sign((1, 1))[0] == 0


def test_gram_is_identity():
    for n in range(1, 8):
        for d in range(0, n + 1):
            assert np.array_equal(gram_matrix(n, d, 5), np.eye(comb(n, d), dtype=np.int64))


def test_pairing_examples():
    p = 7
    assert pairing(pv("(1,2)"), parse_multivector("[1,2]", p, 6)) == 1
    assert pairing(pv("(1,2)"), parse_multivector("[1,3]", p, 6)) == 0
    assert pairing(pv("(2,1)"), parse_multivector("[1,2]", p, 6)) == p - 1


def test_side_mixing_rejected():
    a = pv("(1,2)")
    b = parse_multivector("[1,2]", 7, 6)
    with pytest.raises(TypeError):
        a + b
    with pytest.raises(TypeError):
        wedge(a, b)


def test_degree_overflow_is_zero():
    a = pv("(1,2,3,4)")
    assert wedge(a, pv("(1,5,6)")).is_zero()
    assert wedge(a, pv("(5,6)")).d == 6


def test_wedge_vector_map_examples():
    p = 5
    w = parse_multivector("(1,2)", p, 3)
    assert kernel(wedge_vector_map(w), p, cols=3) == span([[1, 0, 0], [0, 1, 0]], 3, p)
    w2 = parse_multivector("(1,3,5)-(1,4,6)+(2,5,6)", p, 6)
    assert kernel(wedge_vector_map(w2), p, cols=6).dim == 0
    assert not wedge_vector_map(MultiVector.zero(p, 6, 3)).any()


def test_witness_examples():
    p = 7
    wit = partial_decomposability_witness(pv("(1,5,6)"))
    assert wit is not None and (pv("(1,5,6)") ^ wit).is_zero()
    assert partial_decomposability_witness(pv("(1,2,3)+(3,4,5)+(5,6,1)")) is None
    assert partial_decomposability_witness(pv("(1,3,5)-(1,4,6)+(2,5,6)")) is None
    with pytest.raises(ValueError):
        partial_decomposability_witness(MultiVector.zero(p, 6, 3))


def test_complementary_factor():
    p = 5
    w = pv("(1,2,3)+(1,2,4)", p)
    u0 = partial_decomposability_witness(w)
    rest = complementary_factor(w, u0)
    assert rest is not None and wedge(rest, u0) == w
    assert complementary_factor(w, u(5, p)) is None


def _all(p, n, d):
    for coords in itertools.product(range(p), repeat=comb(n, d)):
        yield MultiVector(p, n, d, coords)


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (4, 2), (3, 3), (4, 3)])
def test_witness_matches_brute_force_products(n, d):
    p = 3
    products = set()
    for left in _all(p, n, d - 1):
        for right in _all(p, n, 1):
            w = wedge(left, right)
            if not w.is_zero():
                products.add(w.coords)
    with_witness = {w.coords for w in _all(p, n, d) if not w.is_zero() and partial_decomposability_witness(w)}
    assert with_witness == products


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bivector_witness_iff_square_zero(n):
    p = 3
    for w in _all(p, n, 2):
        if w.is_zero():
            continue
        assert (partial_decomposability_witness(w) is not None) == (w ^ w).is_zero()


@st.composite
def multivectors(draw, p=None, n=None, d=None, dual=False):
    p = draw(st.sampled_from([3, 5])) if p is None else p
    n = draw(st.integers(1, 7)) if n is None else n
    d = draw(st.integers(0, n)) if d is None else d
    coords = draw(st.lists(st.integers(0, p - 1), min_size=comb(n, d), max_size=comb(n, d)))
    return MultiVector(p, n, d, tuple(coords), dual)


@given(st.data())
def test_graded_anticommutative(data):
    p = data.draw(st.sampled_from([3, 5]))
    n = data.draw(st.integers(1, 7))
    d1 = data.draw(st.integers(0, n))
    d2 = data.draw(st.integers(0, n - d1))
    a = data.draw(multivectors(p, n, d1))
    b = data.draw(multivectors(p, n, d2))
    assert wedge(a, b) == ((-1) ** (d1 * d2)) * wedge(b, a)


@given(st.data())
def test_associative(data):
    p = data.draw(st.sampled_from([3, 5]))
    n = data.draw(st.integers(1, 7))
    d1 = data.draw(st.integers(0, n))
    d2 = data.draw(st.integers(0, n - d1))
    d3 = data.draw(st.integers(0, n - d1 - d2))
    a, b, c = (data.draw(multivectors(p, n, d)) for d in (d1, d2, d3))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.data())
def test_odd_degree_square_vanishes(data):
    n = data.draw(st.integers(1, 7))
    d = data.draw(st.sampled_from([k for k in (1, 3, 5, 7) if k <= n]))
    w = data.draw(multivectors(None, n, d))
    assert wedge(w, w).is_zero()


@given(st.data())
def test_text_round_trip(data):
    dual = data.draw(st.booleans())
    w = data.draw(multivectors(n=data.draw(st.integers(1, 7)), d=None, dual=dual))
    if w.is_zero() or w.d == 0:
        return
    assert parse_multivector(format_multivector(w), w.p, w.n) == w


def test_parse_forms():
    p = 7
    assert pv("(2,1)") == -1 * pv("(1,2)")
    assert pv("2(1,3)") == pv("3*(1,3)-(1,3)")
    assert parse_multivector("[1,2]-[4,5]", p, 6).dual
    for bad in ("0", "(1,2)+[3,4]", "(1,2)+(1,2,3)", "(1,7)", "(1,2", "", "(1,2)(3,4)"):
        with pytest.raises(ParseError):
            pv(bad)
