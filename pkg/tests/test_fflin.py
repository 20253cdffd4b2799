import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brnr import fflin
from brnr.errors import ValidationError
from brnr.fflin import PrimeField, Subspace, annihilator, intersection, kernel, rank, rref, span

PRIMES = st.sampled_from([3, 5, 7, 11, 2**31 - 1])


@st.composite
def matrices(draw, p=None, max_rows=6, max_cols=6):
    p = draw(PRIMES) if p is None else p
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def test_prime_checks():
    assert fflin.check_prime(7) == 7
    for bad in (2, 9, 1, 0, -3, 2**31 + 11):
        with pytest.raises(ValidationError):
            fflin.check_prime(bad)
    assert fflin.is_prime(2**31 - 1)


def test_field_ops():
    F = PrimeField(7)
    assert F.inv(3) == 5
    assert F.mul(F.inv(6), 6) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert [a for a in range(1, 7) if F.is_square(a)] == [1, 2, 4]
    assert F.symmetric(6) == -1


def test_rref_known():
    m = [[2, 4, 1], [1, 2, 0], [0, 0, 1]]
    r, k, piv = rref(m, 5)
    assert k == 2 and piv == (0, 2)
    assert r[:2].tolist() == [[1, 2, 0], [0, 0, 1]]
    assert not r[2].any()


def test_kernel_and_span():
    ker = kernel([[1, 1, 1]], 3)
    assert ker.dim == 2
    assert ker.basis.tolist() == [[1, 0, 2], [0, 1, 2]]
    assert span([[1, 2, 0], [2, 4, 0]], 3, 5).dim == 1
    with pytest.raises(ValueError):
        span([[1, 2], [1]], 2, 5)


def test_annihilator_gram():
    s = span([[1, 0, 0]], 3, 5)
    assert annihilator(s) == span([[0, 1, 0], [0, 0, 1]], 3, 5)
    with pytest.raises(ValidationError):
        annihilator(s, gram=np.zeros((3, 3), dtype=np.int64))


def test_large_prime_no_overflow():
    p = 2**31 - 1
    a = np.full((40, 40), p - 1, dtype=np.int64)
    out = fflin.matmul_mod(a, a, p)
    assert int(out[0, 0]) == (40 * (p - 1) ** 2) % p


def test_subspace_ops():
    p = 5
    a = span([[1, 0, 0, 0], [0, 1, 0, 0]], 4, p)
    b = span([[0, 1, 0, 0], [0, 0, 1, 0]], 4, p)
    assert intersection(a, b) == span([[0, 1, 0, 0]], 4, p)
    assert (a + b).dim == 3
    assert a.contains([3, 4, 0, 0]) and not a.contains([0, 0, 1, 0])
    assert span([[0, 1, 0, 0]], 4, p) <= a
    assert list(a.coordinates([3, 4, 0, 0])) == [3, 4]
    assert Subspace.zero(p, 0).dim == 0
    assert fflin.complement_in(span([[1, 0, 0, 0]], 4, p), a).tolist() == [[0, 1, 0, 0]]


def test_solve():
    x = fflin.solve([[1, 1], [0, 1]], [3, 1], 7)
    assert x.tolist() == [2, 1]
    assert fflin.solve([[1, 1], [1, 1]], [0, 1], 7) is None


@given(matrices())
def test_rref_idempotent(pm):
    p, m = pm
    r, k, _ = rref(m, p)
    r2, k2, _ = rref(r, p)
    assert k == k2 and np.array_equal(r, r2)


@given(matrices())
def test_rank_nullity(pm):
    p, m = pm
    assert rank(m, p) + kernel(m, p, cols=m.shape[1]).dim == m.shape[1]


@given(matrices())
def test_kernel_is_killed(pm):
    p, m = pm
    ker = kernel(m, p, cols=m.shape[1])
    if ker.dim and m.shape[0]:
        assert not fflin.matmul_mod(m, ker.basis.T, p).any()


@given(matrices())
def test_double_annihilator(pm):
    p, m = pm
    s = span(m, m.shape[1], p)
    assert annihilator(annihilator(s)) == s
    assert annihilator(s).dim == s.ambient_dim - s.dim


@given(matrices(), st.integers(0, 2**32))
def test_canonical_form_ignores_basis_choice(pm, seed):
    p, m = pm
    s = span(m, m.shape[1], p)
    if s.dim == 0:
        return
    g = fflin.random_invertible(s.dim, p, np.random.default_rng(seed))
    t = span(fflin.matmul_mod(g, s.basis, p), m.shape[1], p)
    assert s == t and hash(s) == hash(t)


@given(matrices(max_rows=4), matrices(max_rows=4))
def test_intersection_dimension(pa, pb):
    p, a = pa
    _, b = pb
    if a.shape[1] != b.shape[1]:
        return
    b = b % p
    sa, sb = span(a, a.shape[1], p), span(b, b.shape[1], p)
    assert intersection(sa, sb).dim == sa.dim + sb.dim - (sa + sb).dim
