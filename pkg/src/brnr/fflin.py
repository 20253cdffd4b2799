"""Exact dense linear algebra over a prime field F_p.

Vectors and matrices are int64 numpy arrays with entries in ``[0, p)``.
Subspaces are stored by their reduced row echelon basis, so two
:class:`Subspace` values are equal exactly when they span the same space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import ValidationError

MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    """Validate ``p`` as a working modulus and return it as an int."""
    p = int(p)
    if not is_prime(p):
        raise ValidationError(f"p = {p} is not prime")
    if p == 2:
        raise ValidationError("p = 2 is not supported; p must be an odd prime")
    if p >= MAX_PRIME:
        raise ValidationError(f"p = {p} does not fit the 31-bit limit")
    return p


@dataclass(frozen=True)
class PrimeField:
    """Arithmetic context for F_p; scalars are plain ints in ``[0, p)``."""

    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", check_prime(self.p))

    def __call__(self, x: int) -> int:
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return int(_kernels._inv_mod_loop(a, self.p))

    def is_square(self, a: int) -> bool:
        """Quadratic residue test by Euler's criterion (0 counts as a square)."""
        a %= self.p
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def symmetric(self, a: int) -> int:
        """Representative of ``a`` in ``(-p/2, p/2]``, used for printing."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def as_matrix(m, p: int) -> np.ndarray:
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return a % p


def _chunk(p: int) -> int:
    # number of products (p-1)^2 that can be summed without int64 overflow
    return max(1, (2**63 - 1) // max(1, (p - 1) ** 2) - 1)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = a.shape[-1]
    step = _chunk(p)
    if k <= step:
        return (a @ b) % p
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for s in range(0, k, step):
        out = (out + (a[..., s : s + step] @ b[s : s + step]) % p) % p
    return out


def rref(m, p: int) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form of ``m`` over F_p.

    Returns the full-height reduced matrix (zero rows last), the rank and the
    pivot columns.
    """
    a = as_matrix(m, p).copy()
    if a.size == 0:
        return a, 0, ()
    rank, piv = _kernels.rref_inplace(a, p)
    return a, int(rank), tuple(int(c) for c in piv)


def rank(m, p: int) -> int:
    return rref(m, p)[1]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^N held by its canonical (RREF) basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64)
        b = b.reshape(-1, self.ambient_dim) if self.ambient_dim else b.reshape(0, 0)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def _from_rows(cls, rows: np.ndarray, p: int, ambient_dim: int) -> "Subspace":
        if ambient_dim == 0:
            return cls.zero(p, 0)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient_dim) % p
        if rows.shape[0] == 0:
            return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))
        r, k, _ = rref(rows, p)
        return cls(p, ambient_dim, r[:k].copy())

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(row)[0]) for row in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, ambient_dim={self.ambient_dim}, dim={self.dim})"

    def reduce(self, v) -> np.ndarray:
        """Residual of ``v`` after elimination against the basis pivots."""
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.ambient_dim:
            raise ValueError(f"vector of length {v.shape[0]} in ambient dimension {self.ambient_dim}")
        v = v.copy()
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def issubspace(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(other.contains(row) for row in self.basis)

    __le__ = issubspace

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the canonical basis (``v`` must lie in the space)."""
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return v[list(self.pivots)].copy()


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"ambient mismatch: F_{a.p}^{a.ambient_dim} vs F_{b.p}^{b.ambient_dim}"
        )


def span(vectors: Iterable[Sequence[int]], ambient_dim: int, p: int) -> Subspace:
    rows = [np.asarray(v, dtype=np.int64).reshape(-1) for v in vectors]
    for v in rows:
        if v.shape[0] != ambient_dim:
            raise ValueError(f"vector of length {v.shape[0]} in ambient dimension {ambient_dim}")
    if not rows:
        return Subspace.zero(p, ambient_dim)
    return Subspace._from_rows(np.vstack(rows), p, ambient_dim)


def row_space(m: np.ndarray, p: int) -> Subspace:
    m = np.asarray(m, dtype=np.int64)
    return Subspace._from_rows(m, p, m.shape[1])


def kernel(m, p: int, cols: int | None = None) -> Subspace:
    """Right null space ``{x : m x = 0}``."""
    a = np.asarray(m, dtype=np.int64)
    if a.ndim != 2:
        if cols is None:
            raise ValueError("kernel of a non-2-d array needs cols")
        a = a.reshape(-1, cols)
    n = a.shape[1]
    r, k, piv = rref(a, p)
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, c in enumerate(piv):
            basis[t, c] = (-r[i, f]) % p
    return Subspace._from_rows(basis, p, n)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace._from_rows(np.vstack([a.basis, b.basis]), a.p, a.ambient_dim)


def subspace_contains(a: Subspace, v) -> bool:
    return a.contains(v)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    # x = sum c_i a_i lies in b  <=>  c . (a_i residuals mod b) = 0
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.p, a.ambient_dim)
    ann_b = annihilator(b)
    coeff = kernel(matmul_mod(ann_b.basis, a.basis.T, a.p), a.p, cols=a.dim)
    return Subspace._from_rows(matmul_mod(coeff.basis, a.basis, a.p), a.p, a.ambient_dim)


def annihilator(s: Subspace, gram=None) -> Subspace:
    """``{w : w^T G f = 0 for every f in s}`` for a nondegenerate Gram matrix G.

    ``gram=None`` means the identity (coordinate dot product).
    """
    p, n = s.p, s.ambient_dim
    if gram is None:
        rows = s.basis
    else:
        g = as_matrix(gram, p)
        if g.shape != (n, n):
            raise ValueError(f"gram matrix must be {n}x{n}")
        if rank(g, p) != n:
            raise ValidationError("gram matrix is singular; the pairing must be nondegenerate")
        rows = matmul_mod(s.basis, g.T, p)
    if s.dim == 0:
        return Subspace.full(p, n)
    return kernel(rows, p, cols=n)


def solve(m, b, p: int) -> np.ndarray | None:
    """One solution of ``m x = b`` (free variables zero), or None."""
    a = as_matrix(m, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    n = a.shape[1]
    r, k, piv = rref(np.hstack([a, b]), p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n]
    return x


def complement_in(sub: Subspace, whole: Subspace) -> np.ndarray:
    """Canonical rows of ``whole`` spanning it modulo ``sub`` (``sub`` inside ``whole``)."""
    _check_same(sub, whole)
    if whole.dim == sub.dim:
        return np.zeros((0, whole.ambient_dim), dtype=np.int64)
    residuals = np.vstack([sub.reduce(row) for row in whole.basis])
    r, k, _ = rref(residuals, whole.p)
    return r[:k].copy()


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank(g, p) == n:
            return g
