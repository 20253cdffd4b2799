"""Search for new groups by choosing K2 inside X_w for a target trivector w.

``X_w`` is the space of dual bivectors x with ``<<w, x ^ y>> = 0`` for every
dual vector y.  Any K2 inside X_w puts w into S3 of the resulting group; when
w is not of the form ``u' ^ u`` it has a chance to survive outside S3_dec.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import fflin
from .errors import BudgetExceeded, PipelineInvariantError, ValidationError
from .extalg import MultiVector, format_multivector, parse_multivector, wedge_table
from .groupspec import CentralExtensionSpec, build_gamma, check_center_minimal, check_commutator_full, spec_from_gamma
from .obstr import ObstructionReport, report

DEFAULT_CEILING = 10**6


def xw_matrix(w: MultiVector) -> np.ndarray:
    """Matrix (n x C(n,2)) of ``x -> (k -> <<w, x ^ e*_k>>)``."""
    if w.dual or w.d != 3:
        raise ValueError("X_w needs a primal trivector")
    n, p = w.n, w.p
    target, sign = wedge_table(n, 2)
    coords = np.asarray(w.coords, dtype=np.int64)
    m = np.zeros((n, comb(n, 2)), dtype=np.int64)
    ok = sign != 0
    ii, kk = np.nonzero(ok)
    m[kk, ii] = sign[ii, kk] * coords[target[ii, kk]]
    return m % p


def compute_xw(w: MultiVector) -> fflin.Subspace:
    if w.is_zero():
        raise ValidationError("w must be nonzero")
    return fflin.kernel(xw_matrix(w), w.p, cols=comb(w.n, 2))


@dataclass(frozen=True, eq=False)
class CandidateK2:
    p: int
    n: int
    span: fflin.Subspace
    spec: CentralExtensionSpec
    commutator_full: bool
    center_minimal: bool

    @property
    def generators(self) -> list[MultiVector]:
        return [MultiVector.from_vector(r, self.p, self.n, 2, dual=True) for r in self.span.basis]

    def label(self) -> str:
        return "; ".join(format_multivector(g) for g in self.generators)


def derive_candidate(p: int, generators: Iterable, n: int | None = None, name: str = "") -> CandidateK2:
    """Presentation whose K2 is the span of the given dual bivectors.

    v_k is sent to the k-th canonical basis vector of the span, so the exponent
    of v_k in [u_i, u_j] is the [i,j] coordinate of that vector.
    """
    rows = []
    for g in generators:
        if isinstance(g, MultiVector):
            if not g.dual or g.d != 2:
                raise ValueError("generators must be dual bivectors")
            n = g.n if n is None else n
            rows.append(g.to_array())
        else:
            rows.append(np.asarray(g, dtype=np.int64))
    if n is None:
        raise ValueError("n is required when generators are plain vectors")
    k = fflin.span(rows, comb(n, 2), p)
    if k.dim == 0:
        raise ValidationError("K2 must be a nonzero subspace")
    spec = spec_from_gamma(k.basis, p, n, name)
    g = build_gamma(spec)
    return CandidateK2(p, n, k, spec, check_commutator_full(g), check_center_minimal(g))


@dataclass(frozen=True, eq=False)
class SearchOutcome:
    candidate: CandidateK2
    report: ObstructionReport
    w_in_s3: bool

    @property
    def classification(self) -> str:
        return self.report.classification()

    def to_dict(self) -> dict:
        out = {
            "generators": [format_multivector(g) for g in self.candidate.generators],
            "classification": self.classification,
            "w_in_s3": self.w_in_s3,
        }
        out.update(self.report.to_dict())
        return out


def evaluate_candidate(c: CandidateK2, w: MultiVector | None = None) -> SearchOutcome:
    rep = report(c.spec)
    w_in = False
    if w is not None:
        w_in = rep.s3.contains(w.to_array())
        if not w_in and c.span <= compute_xw(w):
            raise PipelineInvariantError("K2 lies in X_w but w is missing from S3")
    return SearchOutcome(c, rep, w_in)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_profiles(N: int, k: int, p: int) -> Iterator[np.ndarray]:
    """Every k x N reduced row echelon matrix of rank k, pivot sets in lex order."""
    for piv in itertools.combinations(range(N), k):
        pivset = set(piv)
        free = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, N) if c not in pivset]
        base = np.zeros((k, N), dtype=np.int64)
        for r, c in enumerate(piv):
            base[r, c] = 1
        for values in itertools.product(range(p), repeat=len(free)):
            m = base.copy()
            for (r, c), x in zip(free, values):
                m[r, c] = x
            yield m


def _explicit(p, n, generator_sets):
    for gens in generator_sets:
        yield derive_candidate(p, gens, n)


def _random(p, n, xw: fflin.Subspace, k: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        while True:
            coeff = rng.integers(0, p, size=(k, xw.dim), dtype=np.int64)
            if fflin.rank(coeff, p) == k:
                break
        yield derive_candidate(p, fflin.matmul_mod(coeff, xw.basis, p), n)


def _exhaustive(p, n, xw: fflin.Subspace, k: int, ceiling: int):
    total = gaussian_binomial(xw.dim, k, p)
    if total > ceiling:
        raise BudgetExceeded(
            f"{total} subspaces of dimension {k} in X_w exceed the ceiling {ceiling}", total, ceiling
        )
    for coeff in rref_profiles(xw.dim, k, p):
        yield derive_candidate(p, fflin.matmul_mod(coeff, xw.basis, p), n)


def search(p: int, w: MultiVector, strategy: str, *, generator_sets: Sequence | None = None,
           k: int | None = None, count: int = 10, seed: int = 0,
           ceiling: int = DEFAULT_CEILING) -> Iterator[SearchOutcome]:
    """Evaluate candidate K2 spaces in enumeration order.

    strategy ``"explicit"`` replays ``generator_sets``; ``"random"`` draws
    ``count`` k-dimensional subspaces of X_w from a seeded PCG64 stream;
    ``"exhaustive"`` walks every k-dimensional subspace of X_w and refuses up
    front when the Gaussian binomial count exceeds ``ceiling``.
    """
    if w.p != p:
        raise ValueError("w lives over a different field")
    n = w.n
    if strategy == "explicit":
        cands = _explicit(p, n, generator_sets or [])
    else:
        xw = compute_xw(w)
        if k is None or not 1 <= k <= xw.dim:
            raise ValidationError(f"subspace dimension must be in 1..{xw.dim}")
        if strategy == "random":
            cands = _random(p, n, xw, k, count, seed)
        elif strategy == "exhaustive":
            cands = _exhaustive(p, n, xw, k, ceiling)
        else:
            raise ValidationError(f"unknown strategy {strategy!r}")
    for c in cands:
        yield evaluate_candidate(c, w)


# the three target trivectors and the worked choices of K2
CASE1_W = "(1,2,3)+(3,4,5)+(5,6,1)"
CASE2_W = "(1,2,3)+(4,5,6)"
CASE1_XW = ("[1,2]-[4,5]", "[2,3]-[5,6]", "[1,4]", "[2,5]", "[3,6]", "[4,6]", "[3,4]+[1,6]", "[2,4]", "[2,6]")
CASE1_CHOICES = {
    "peyre-p12": CASE1_XW[:6],
    "thm2.7": ("[1,2]-[4,5]", "[2,3]-[5,6]+[1,4]", "[3,6]-[2,4]"),
    "thm3.4": CASE1_XW,
}


def case3_w(p: int, t: int) -> MultiVector:
    t %= p
    return parse_multivector(f"(1,2,3)+(3,4,5)+(5,6,1)-{t}(2,4,6)", p, 6)


def parse_generators(texts: Iterable[str], p: int, n: int) -> list[MultiVector]:
    return [parse_multivector(s, p, n, dual=True) for s in texts]
