"""Brute-force cross-checks for S_dec that never use the divisibility criterion.

Both oracles enumerate exhaustively and refuse (:class:`BudgetExceeded`)
rather than sample when the work would exceed the budget.
"""

from __future__ import annotations

from math import comb

import numpy as np

from . import fflin
from .errors import BudgetExceeded
from .extalg import MultiVector, index_tuples, wedge
from .obstr import infer_n

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 15


def _all_vectors(dim: int, p: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    out = np.empty((codes.size, dim), dtype=np.int64)
    for j in range(dim - 1, -1, -1):
        out[:, j] = codes % p
        codes //= p
    return out


def _product_tensor(n: int, d1: int, d2: int, p: int) -> np.ndarray:
    """T[t, i, j] = coefficient of e_t in e_i ^ e_j (degrees d1, d2)."""
    left = index_tuples(n, d1)
    right = index_tuples(n, d2)
    t = np.zeros((comb(n, d1 + d2), len(left), len(right)), dtype=np.int64)
    for i, a in enumerate(left):
        ea = MultiVector.basis(p, n, a)
        for j, b in enumerate(right):
            t[:, i, j] = wedge(ea, MultiVector.basis(p, n, b)).coords
    return t


class _SpanAccumulator:
    def __init__(self, p: int, dim: int):
        self.p = p
        self.space = fflin.Subspace.zero(p, dim)

    def add(self, rows: np.ndarray) -> None:
        if rows.shape[0] == 0 or self.space.dim == self.space.ambient_dim:
            return
        rows = np.unique(rows % self.p, axis=0)
        if self.space.dim:
            # keep only rows outside the current span
            ann = fflin.annihilator(self.space)
            rows = rows[(fflin.matmul_mod(rows, ann.basis.T, self.p) != 0).any(axis=1)]
        if rows.shape[0]:
            self.space = fflin.Subspace._from_rows(np.vstack([self.space.basis, rows]), self.p, self.space.ambient_dim)


def sdec_oracle(s: fflin.Subspace, d: int, n: int | None = None, budget: int = DEFAULT_BUDGET) -> fflin.Subspace:
    """Span of every nonzero ``u' ^ u`` in s, over all pairs (u', u)."""
    n = infer_n(s.ambient_dim, d) if n is None else n
    p = s.p
    left_dim = comb(n, d - 1)
    cost = p ** (left_dim + n)
    if cost > budget:
        raise BudgetExceeded(f"sdec oracle needs {cost} factor pairs, budget is {budget}", cost, budget)
    if s.ambient_dim == 0:
        return s
    tensor = _product_tensor(n, d - 1, 1, p)
    ann = fflin.annihilator(s).basis  # w in s  <=>  ann . w = 0
    us = _all_vectors(n, p, 0, p**n)
    acc = _SpanAccumulator(p, s.ambient_dim)
    total_left = p**left_dim
    step = max(1, _CHUNK // max(1, us.shape[0]) * 8)
    for start in range(0, total_left, step):
        left = _all_vectors(left_dim, p, start, min(total_left, start + step))
        partial = np.einsum("ai,tik->atk", left, tensor) % p
        prods = np.einsum("atk,bk->abt", partial, us).reshape(-1, s.ambient_dim) % p
        prods = prods[prods.any(axis=1)]
        if ann.shape[0]:
            prods = prods[~(fflin.matmul_mod(prods, ann.T, p)).any(axis=1)]
        acc.add(prods)
        if acc.space.dim == s.dim:
            break  # exact: the answer lies inside s
    return acc.space


def plucker_oracle_s2(s: fflin.Subspace, n: int | None = None, budget: int = DEFAULT_BUDGET) -> fflin.Subspace:
    """Span of every ``w`` in s with ``w ^ w = 0``, enumerating all of s."""
    n = infer_n(s.ambient_dim, 2) if n is None else n
    p = s.p
    cost = p**s.dim
    if cost > budget:
        raise BudgetExceeded(f"Plucker oracle needs {cost} elements, budget is {budget}", cost, budget)
    acc = _SpanAccumulator(p, s.ambient_dim)
    if s.dim == 0:
        return acc.space
    # nonzero entries of the quadratic map w -> w ^ w
    tensor = _product_tensor(n, 2, 2, p)
    terms = [(t, i, j, int(tensor[t, i, j])) for t, i, j in zip(*np.nonzero(tensor))]
    for start in range(0, cost, _CHUNK):
        coeff = _all_vectors(s.dim, p, start, min(cost, start + _CHUNK))
        ws = fflin.matmul_mod(coeff, s.basis, p)
        sq = np.zeros((ws.shape[0], tensor.shape[0]), dtype=np.int64)
        for t, i, j, c in terms:
            sq[:, t] = (sq[:, t] + c * ws[:, i] * ws[:, j]) % p
        keep = ws[~sq.any(axis=1) & ws.any(axis=1)]
        acc.add(keep)
        if acc.space.dim == s.dim:
            break
    return acc.space
