"""Exterior powers of an n-dimensional F_p-space and of its dual.

Coordinates of a degree-d element are indexed by strictly increasing index
tuples in lexicographic order.  Internally indices are 0-based; the textual
form uses 1-based indices the way the multivectors are usually written by
hand: ``(1,2)-(3,4)`` for a primal bivector, ``[1,3,5]+2[2,4,6]`` for a dual
trivector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import fflin
from .errors import ParseError


@lru_cache(maxsize=None)
def index_tuples(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    if d < 0 or d > n:
        return ()
    return tuple(combinations(range(n), d))


@lru_cache(maxsize=None)
def _index_map(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {t: i for i, t in enumerate(index_tuples(n, d))}


def tuple_rank(t: tuple[int, ...], n: int) -> int:
    """Lexicographic rank of a strictly increasing 0-based tuple."""
    try:
        return _index_map(n, len(t))[tuple(t)]
    except KeyError:
        raise ValueError(f"{t} is not a strictly increasing tuple in range({n})") from None


def tuple_unrank(r: int, n: int, d: int) -> tuple[int, ...]:
    tuples = index_tuples(n, d)
    if not 0 <= r < len(tuples):
        raise ValueError(f"rank {r} out of range for C({n},{d})")
    return tuples[r]


def sort_sign(idx) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on a repeat."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1) ** inv, tuple(sorted(idx))


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    # inversions between two sorted, disjoint tuples
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return -1 if inv & 1 else 1


@lru_cache(maxsize=None)
def wedge_table(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Target index and sign of ``e_I ^ e_k`` for every degree-d tuple I and k.

    Returns arrays ``(target, sign)`` of shape ``(C(n,d), n)``; target is -1 and
    sign 0 when k is already in I.
    """
    tuples = index_tuples(n, d)
    up = _index_map(n, d + 1)
    target = np.full((len(tuples), n), -1, dtype=np.int64)
    sign = np.zeros((len(tuples), n), dtype=np.int64)
    for i, t in enumerate(tuples):
        for k in range(n):
            if k in t:
                continue
            after = sum(1 for x in t if x > k)
            target[i, k] = up[tuple(sorted(t + (k,)))]
            sign[i, k] = -1 if after & 1 else 1
    for arr in (target, sign):
        arr.setflags(write=False)
    return target, sign


@dataclass(frozen=True)
class MultiVector:
    """A degree-d element of the exterior algebra of U (primal) or U* (dual)."""

    p: int
    n: int
    d: int
    coords: tuple[int, ...]
    dual: bool = False

    def __post_init__(self):
        size = comb(self.n, self.d) if 0 <= self.d <= self.n else 0
        c = tuple(int(x) % self.p for x in self.coords)
        if len(c) != size:
            raise ValueError(f"expected {size} coordinates for degree {self.d} in dimension {self.n}")
        object.__setattr__(self, "coords", c)

    @classmethod
    def zero(cls, p: int, n: int, d: int, dual: bool = False) -> "MultiVector":
        size = comb(n, d) if 0 <= d <= n else 0
        return cls(p, n, d, (0,) * size, dual)

    @classmethod
    def from_vector(cls, v, p: int, n: int, d: int, dual: bool = False) -> "MultiVector":
        return cls(p, n, d, tuple(int(x) for x in np.asarray(v).reshape(-1)), dual)

    @classmethod
    def basis(cls, p: int, n: int, idx, dual: bool = False) -> "MultiVector":
        """``e_{i1} ^ ... ^ e_{id}`` from 0-based indices in any order."""
        s, t = sort_sign(idx)
        mv = cls.zero(p, n, len(t), dual)
        if s == 0:
            return mv
        c = list(mv.coords)
        c[tuple_rank(t, n)] = s % p
        return cls(p, n, len(t), tuple(c), dual)

    @classmethod
    def vector(cls, values, p: int, dual: bool = False) -> "MultiVector":
        values = tuple(int(x) for x in values)
        return cls(p, len(values), 1, values, dual)

    @property
    def side(self) -> str:
        return "dual" if self.dual else "primal"

    def to_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def terms(self):
        """Yield ``(tuple, coefficient)`` for the nonzero coordinates."""
        for t, c in zip(index_tuples(self.n, self.d), self.coords):
            if c:
                yield t, c

    def _check(self, other: "MultiVector") -> None:
        if not isinstance(other, MultiVector):
            raise TypeError(f"cannot combine MultiVector with {type(other).__name__}")
        if self.dual != other.dual:
            raise TypeError("primal and dual multivectors only meet through pairing()")
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("multivectors over different spaces")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        if self.d != other.d:
            raise ValueError("cannot add multivectors of different degree")
        return MultiVector(self.p, self.n, self.d, tuple(a + b for a, b in zip(self.coords, other.coords)), self.dual)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.p, self.n, self.d, tuple(-a for a in self.coords), self.dual)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def __rmul__(self, k: int) -> "MultiVector":
        return MultiVector(self.p, self.n, self.d, tuple(k * a for a in self.coords), self.dual)

    def __xor__(self, other: "MultiVector") -> "MultiVector":
        return wedge(self, other)

    def __str__(self) -> str:
        return format_multivector(self)


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    a._check(b)
    d = a.d + b.d
    out = MultiVector.zero(a.p, a.n, d, a.dual)
    if d > a.n:
        return out
    c = [0] * len(out.coords)
    index = _index_map(a.n, d)
    bterms = list(b.terms())
    for ta, ca in a.terms():
        for tb, cb in bterms:
            if set(ta) & set(tb):
                continue
            c[index[tuple(sorted(ta + tb))]] += _merge_sign(ta, tb) * ca * cb
    return MultiVector(a.p, a.n, d, tuple(c), a.dual)


def pairing(s: MultiVector, f: MultiVector) -> int:
    """The determinant pairing of a primal and a dual element of equal degree.

    On basis tuples it is 1 for equal tuples and 0 otherwise, so it reduces to
    the coordinate dot product.
    """
    if s.dual or not f.dual:
        raise TypeError("pairing() takes a primal element then a dual element")
    if (s.p, s.n, s.d) != (f.p, f.n, f.d):
        raise ValueError("pairing needs the same field, dimension and degree")
    return sum(x * y for x, y in zip(s.coords, f.coords)) % s.p


def pairing_determinant(s_factors, f_factors, p: int) -> int:
    """Evaluate the pairing of ``u_1^...^u_d`` with ``f_1^...^f_d`` from factors.

    This is the signed sum over permutations ``sum eps(tau) prod f_i(u_tau(i))``,
    i.e. ``det[f_i(u_j)]``.  Used to cross-check the coordinate form.
    """
    u = np.asarray(s_factors, dtype=np.int64).reshape(len(s_factors), -1)
    f = np.asarray(f_factors, dtype=np.int64).reshape(len(f_factors), -1)
    m = (f @ u.T) % p
    return _det_mod(m, p)


def _det_mod(m: np.ndarray, p: int) -> int:
    a = m.copy() % p
    k = a.shape[0]
    det = 1
    for c in range(k):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        r = c + int(nz[0])
        if r != c:
            a[[c, r]] = a[[r, c]]
            det = -det
        det = det * int(a[c, c]) % p
        inv = pow(int(a[c, c]), -1, p)
        for i in range(c + 1, k):
            if a[i, c]:
                a[i] = (a[i] - a[i, c] * inv * a[c]) % p
    return det % p


def gram_matrix(n: int, d: int, p: int) -> np.ndarray:
    """Matrix of the pairing on standard basis tuples (computed from determinants)."""
    tuples = index_tuples(n, d)
    eye = np.eye(n, dtype=np.int64)
    g = np.zeros((len(tuples), len(tuples)), dtype=np.int64)
    for i, s in enumerate(tuples):
        for j, t in enumerate(tuples):
            g[i, j] = pairing_determinant(eye[list(s)], eye[list(t)], p) if d else 1
    return g


def wedge_vector_map(w: MultiVector) -> np.ndarray:
    """Matrix (C(n,d+1) x n) of ``u -> w ^ u``."""
    n, d = w.n, w.d
    rows = comb(n, d + 1) if d + 1 <= n else 0
    m = np.zeros((rows, n), dtype=np.int64)
    if rows == 0:
        return m
    target, sign = wedge_table(n, d)
    for i, c in enumerate(w.coords):
        if not c:
            continue
        for k in range(n):
            if sign[i, k]:
                m[target[i, k], k] += sign[i, k] * c
    return m % w.p


def wedge_with_basis(rows: np.ndarray, n: int, d: int, p: int) -> np.ndarray:
    """``out[k, i] = rows[i] ^ e_k`` for a stack of degree-d coordinate rows.

    Shape of the result is ``(n, len(rows), C(n,d+1))``.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, comb(n, d) if d <= n else 0)
    up = comb(n, d + 1) if d + 1 <= n else 0
    out = np.zeros((n, rows.shape[0], up), dtype=np.int64)
    if up == 0 or rows.shape[0] == 0:
        return out
    target, sign = wedge_table(n, d)
    for k in range(n):
        ok = sign[:, k] != 0
        out[k][:, target[ok, k]] = rows[:, ok] * sign[ok, k]
    return out % p


def partial_decomposability_witness(w: MultiVector) -> MultiVector | None:
    """A nonzero u0 with ``w ^ u0 = 0``, or None if there is none.

    Such a u0 exists exactly when ``w = u' ^ u`` for some u' of degree d-1 and
    some vector u.  The first canonical kernel basis vector is returned.
    """
    if w.dual:
        raise TypeError("witness search is defined on primal multivectors")
    if w.is_zero():
        raise ValueError("w must be nonzero")
    if not 1 <= w.d <= w.n:
        raise ValueError("degree must satisfy 1 <= d <= n")
    ker = fflin.kernel(wedge_vector_map(w), w.p, cols=w.n)
    if ker.dim == 0:
        return None
    return MultiVector.vector(ker.basis[0], w.p)


def complementary_factor(w: MultiVector, u0: MultiVector) -> MultiVector | None:
    """Some u' with ``u' ^ u0 = w``, or None if u0 is not a factor of w."""
    if w.d == 0:
        return None
    n, d, p = w.n, w.d, w.p
    cols = comb(n, d - 1)
    # column j of the matrix is e_J ^ u0
    m = np.zeros((comb(n, d), cols), dtype=np.int64)
    for j, t in enumerate(index_tuples(n, d - 1)):
        m[:, j] = wedge(MultiVector.basis(p, n, t), u0).coords
    x = fflin.solve(m, w.to_array(), p)
    if x is None:
        return None
    return MultiVector.from_vector(x, p, n, d - 1)


# ---------------------------------------------------------------- text form

_TERM = re.compile(
    r"\s*([+-])?\s*(\d+)?\s*\*?\s*([(\[])\s*(\d+(?:\s*,\s*\d+)*)?\s*([)\]])\s*"
)


def format_multivector(w: MultiVector) -> str:
    """Render with symmetric integer coefficients, e.g. ``(1,2)-(3,4)``."""
    if w.is_zero():
        return "0"
    open_, close = ("[", "]") if w.dual else ("(", ")")
    half = w.p // 2
    parts = []
    for t, c in w.terms():
        c = c - w.p if c > half else c
        body = open_ + ",".join(str(i + 1) for i in t) + close
        mag = abs(c)
        s = body if mag == 1 else f"{mag}{body}"
        if not parts:
            parts.append(s if c > 0 else "-" + s)
        else:
            parts.append(("+" if c > 0 else "-") + s)
    return "".join(parts)


def parse_multivector(text: str, p: int, n: int, dual: bool | None = None) -> MultiVector:
    """Parse the textual form; tuples may be unsorted (sign adjusted).

    ``dual=None`` infers the side from the bracket style.
    """
    s = text.strip()
    if s == "0":
        raise ParseError("'0' is ambiguous without a degree; write a term")
    pos = 0
    terms = []
    brackets = set()
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse multivector near {s[pos:]!r}")
        sign_s, coef_s, open_, idx_s, close = m.groups()
        if (open_, close) not in (("(", ")"), ("[", "]")):
            raise ParseError(f"mismatched brackets in {m.group(0).strip()!r}")
        if terms and sign_s is None:
            raise ParseError(f"missing + or - before {m.group(0).strip()!r}")
        brackets.add(open_)
        idx = [int(x) for x in idx_s.split(",")] if idx_s else []
        if any(i < 1 or i > n for i in idx):
            raise ParseError(f"index out of range 1..{n} in {m.group(0).strip()!r}")
        coef = int(coef_s) if coef_s else 1
        if sign_s == "-":
            coef = -coef
        terms.append((coef, [i - 1 for i in idx]))
        pos = m.end()
    if not terms:
        raise ParseError("empty multivector expression")
    if len(brackets) > 1:
        raise ParseError("cannot mix primal (..) and dual [..] terms")
    side = "[" in brackets
    if dual is not None and dual != side:
        raise ParseError(f"expected a {'dual [..]' if dual else 'primal (..)'} expression")
    degrees = {len(idx) for _, idx in terms}
    if len(degrees) != 1:
        raise ParseError("all terms must have the same degree")
    d = degrees.pop()
    out = MultiVector.zero(p, n, d, side)
    for coef, idx in terms:
        out = out + coef * MultiVector.basis(p, n, idx, side)
    return out
