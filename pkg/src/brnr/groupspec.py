"""Central extensions 0 -> V -> G -> U -> 0 given by their commutator table.

A presentation lists ``[u_i, u_j] = v_1^{e_1} ... v_m^{e_m}`` for i < j.  Only
the induced alternating map ``gamma: /\\^2 U -> V`` is ever used; group
elements are never built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb

import numpy as np

from . import fflin
from .errors import ParseError, ValidationError
from .extalg import MultiVector, index_tuples, tuple_rank

Relation = tuple[int, int, tuple[int, ...]]


@dataclass(frozen=True)
class CentralExtensionSpec:
    """Commutator data of an exponent-p class-2 group.

    ``relations`` holds ``(i, j, exponents)`` with 1-based ``i < j`` and
    exponent vectors of length ``dim_v`` reduced mod p.  Repeated pairs are
    merged by adding exponents; pairs with a zero vector are dropped.
    """

    p: int
    dim_v: int
    dim_u: int
    relations: tuple[Relation, ...] = ()
    name: str = ""

    def __post_init__(self):
        p = fflin.check_prime(self.p)
        object.__setattr__(self, "p", p)
        if self.dim_v < 0 or self.dim_u < 0:
            raise ValidationError("dimensions must be nonnegative")
        merged: dict[tuple[int, int], np.ndarray] = {}
        for rel in self.relations:
            i, j, e = rel
            if not (1 <= i < j <= self.dim_u):
                raise ValidationError(f"relation [u{i}, u{j}] needs 1 <= i < j <= {self.dim_u}")
            e = np.asarray(e, dtype=np.int64).reshape(-1)
            if e.shape[0] != self.dim_v:
                raise ValidationError(f"exponent vector of [u{i}, u{j}] must have length {self.dim_v}")
            merged[(i, j)] = (merged.get((i, j), 0) + e) % p
        rels = tuple(
            (i, j, tuple(int(x) for x in e)) for (i, j), e in sorted(merged.items()) if e.any()
        )
        object.__setattr__(self, "relations", rels)

    @property
    def order_exponent(self) -> int:
        return self.dim_v + self.dim_u

    def exponents(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {(i, j): e for i, j, e in self.relations}


@dataclass(frozen=True, eq=False)
class GammaMap:
    """Matrix of gamma (dim_v x C(n,2)); the dual map is its transpose."""

    p: int
    dim_v: int
    dim_u: int
    matrix: np.ndarray

    @property
    def dual(self) -> np.ndarray:
        return self.matrix.T

    def dual_image(self, k: int) -> MultiVector:
        """gamma*(v_k*) as a dual bivector (0-based k)."""
        return MultiVector.from_vector(self.matrix[k], self.p, self.dim_u, 2, dual=True)

    def rank(self) -> int:
        return fflin.rank(self.matrix, self.p) if self.matrix.size else 0


def build_gamma(spec: CentralExtensionSpec) -> GammaMap:
    n = spec.dim_u
    g = np.zeros((spec.dim_v, comb(n, 2)), dtype=np.int64)
    for i, j, e in spec.relations:
        g[:, tuple_rank((i - 1, j - 1), n)] = e
    g.setflags(write=False)
    return GammaMap(spec.p, spec.dim_v, n, g)


def relations_from_gamma(g: GammaMap) -> tuple[Relation, ...]:
    rels = []
    for col, (i, j) in enumerate(index_tuples(g.dim_u, 2)):
        e = g.matrix[:, col]
        if e.any():
            rels.append((i + 1, j + 1, tuple(int(x) for x in e)))
    return tuple(rels)


def spec_from_gamma(matrix, p: int, dim_u: int, name: str = "") -> CentralExtensionSpec:
    m = np.asarray(matrix, dtype=np.int64) % p
    g = GammaMap(p, m.shape[0], dim_u, m)
    return CentralExtensionSpec(p, m.shape[0], dim_u, relations_from_gamma(g), name)


def check_commutator_full(g: GammaMap) -> bool:
    """gamma is onto V, i.e. the declared V is the whole commutator subgroup."""
    return g.rank() == g.dim_v


def check_dual_injective(g: GammaMap) -> bool:
    return fflin.rank(g.dual, g.p) == g.dim_v if g.dim_v else True


def form_matrices(g: GammaMap) -> np.ndarray:
    """The alternating n x n matrices A_k with ``A_k[i,j] = <v_k*, gamma(u_i^u_j)>``."""
    n = g.dim_u
    a = np.zeros((g.dim_v, n, n), dtype=np.int64)
    for col, (i, j) in enumerate(index_tuples(n, 2)):
        a[:, i, j] = g.matrix[:, col]
        a[:, j, i] = -g.matrix[:, col]
    return a % g.p


def radical(g: GammaMap) -> fflin.Subspace:
    """``{u : gamma(u ^ u') = 0 for all u'}``."""
    n = g.dim_u
    if g.dim_v == 0:
        return fflin.Subspace.full(g.p, n)
    return fflin.kernel(form_matrices(g).reshape(-1, n), g.p, cols=n)


def check_center_minimal(g: GammaMap) -> bool:
    """Z(G) = V: no nonzero element of U commutes with everything."""
    return radical(g).dim == 0


def transform_basis(spec: CentralExtensionSpec, change) -> CentralExtensionSpec:
    """Rewrite the table in a new basis ``u'_j = sum_i change[i, j] u_i`` of U."""
    p, n = spec.p, spec.dim_u
    c = np.asarray(change, dtype=np.int64) % p
    if c.shape != (n, n) or fflin.rank(c, p) != n:
        raise ValidationError("basis change must be an invertible n x n matrix")
    a = form_matrices(build_gamma(spec))
    new = np.einsum("ij,kil,lm->kjm", c, a, c) % p
    pairs = index_tuples(n, 2)
    matrix = np.array([[new[k, i, j] for i, j in pairs] for k in range(spec.dim_v)], dtype=np.int64)
    return spec_from_gamma(matrix.reshape(spec.dim_v, len(pairs)), p, n, spec.name)


def transform_center(spec: CentralExtensionSpec, change) -> CentralExtensionSpec:
    """Compose gamma with an invertible map of V (a relabelling of v_1..v_m)."""
    p = spec.p
    h = np.asarray(change, dtype=np.int64) % p
    if h.shape != (spec.dim_v, spec.dim_v) or fflin.rank(h, p) != spec.dim_v:
        raise ValidationError("center change must be an invertible m x m matrix")
    g = build_gamma(spec)
    return spec_from_gamma(fflin.matmul_mod(h, g.matrix, p), p, spec.dim_u, spec.name)


# ---------------------------------------------------------------- catalog


def _spec(p, m, n, entries, name):
    rels = []
    for i, j, powers in entries:
        e = [0] * m
        for k, x in powers:
            e[k - 1] += x
        rels.append((i, j, tuple(e)))
    return CentralExtensionSpec(p, m, n, tuple(rels), name)


def extraspecial(p: int, n: int) -> CentralExtensionSpec:
    """Exponent-p extraspecial group of order p^(2n+1): [u_{2i-1}, u_{2i}] = v."""
    if n < 1:
        raise ValidationError("extraspecial needs n >= 1")
    return _spec(p, 1, 2 * n, [(2 * i - 1, 2 * i, [(1, 1)]) for i in range(1, n + 1)], f"extraspecial(n={n})")


def thm24(p: int) -> CentralExtensionSpec:
    return _spec(p, 3, 6, [
        (1, 2, [(1, 1)]), (3, 4, [(1, 1)]),
        (1, 4, [(2, 1)]), (2, 5, [(2, 1)]), (3, 6, [(2, 1)]),
        (3, 5, [(3, 1)]), (4, 6, [(3, 1)]),
    ], "thm2.4")


def thm26(p: int, t: int, variant: str = "proof") -> CentralExtensionSpec:
    """The t-family of order p^9.

    ``variant="proof"`` uses [u1,u5] = v3^(-t), which is the table whose dual
    image is [3,6] - t[1,5] - [2,4]; ``variant="printed"`` uses v3^t.
    """
    t %= p
    if t == 0:
        raise ValidationError("t must be nonzero in F_p")
    if variant not in ("proof", "printed"):
        raise ValidationError(f"unknown thm2.6 variant {variant!r}")
    s = -t if variant == "proof" else t
    return _spec(p, 3, 6, [
        (1, 2, [(1, 1)]), (4, 5, [(1, -1)]),
        (2, 3, [(2, 1)]), (5, 6, [(2, -1)]), (1, 4, [(2, 1)]),
        (3, 6, [(3, 1)]), (2, 4, [(3, -1)]), (1, 5, [(3, s)]),
    ], f"thm2.6(t={t})" + ("" if variant == "proof" else ",printed"))


def thm27(p: int) -> CentralExtensionSpec:
    return _spec(p, 3, 6, [
        (1, 2, [(1, 1)]), (4, 5, [(1, -1)]),
        (2, 3, [(2, 1)]), (5, 6, [(2, -1)]), (1, 4, [(2, 1)]),
        (3, 6, [(3, 1)]), (2, 4, [(3, -1)]),
    ], "thm2.7")


def prop32(p: int) -> CentralExtensionSpec:
    return _spec(p, 3, 4, [
        (1, 2, [(1, 1)]), (1, 3, [(2, 1)]), (2, 4, [(2, 1)]), (1, 4, [(3, 1)]),
    ], "prop3.2")


def is_irreducible_quadratic(a: int, b: int, p: int) -> bool:
    return all((x * x + a * x + b) % p for x in range(p))


def prop33(p: int, a: int, b: int) -> CentralExtensionSpec:
    a %= p
    b %= p
    if not is_irreducible_quadratic(a, b, p):
        raise ValidationError(f"X^2+{a}X+{b} must be irreducible over F_{p}")
    # (u2,u4) is listed twice; the two assignments multiply
    return _spec(p, 3, 4, [
        (1, 2, [(1, 1)]), (1, 3, [(2, 1)]), (2, 4, [(2, 1)]),
        (2, 3, [(3, 1)]), (1, 4, [(3, -b)]), (2, 4, [(3, -a)]),
    ], f"prop3.3(a={a},b={b})")


def peyre_p12(p: int) -> CentralExtensionSpec:
    return _spec(p, 6, 6, [
        (1, 2, [(1, 1)]), (4, 5, [(1, -1)]),
        (2, 3, [(2, 1)]), (5, 6, [(2, -1)]),
        (1, 4, [(3, 1)]), (2, 5, [(4, 1)]), (3, 6, [(5, 1)]), (4, 6, [(6, 1)]),
    ], "peyre-p12")


def thm34(p: int, variant: str = "sec3") -> CentralExtensionSpec:
    """Order p^15 group.  ``variant="printed"`` takes [u1,u6]^-1 = v7 literally."""
    if variant not in ("sec3", "printed"):
        raise ValidationError(f"unknown thm3.4 variant {variant!r}")
    e16 = 1 if variant == "sec3" else -1
    return _spec(p, 9, 6, [
        (1, 2, [(1, 1)]), (4, 5, [(1, -1)]),
        (2, 3, [(2, 1)]), (5, 6, [(2, -1)]),
        (1, 4, [(3, 1)]), (2, 5, [(4, 1)]), (3, 6, [(5, 1)]), (4, 6, [(6, 1)]),
        (3, 4, [(7, 1)]), (1, 6, [(7, e16)]),
        (2, 4, [(8, 1)]), (2, 6, [(9, 1)]),
    ], "thm3.4" + ("" if variant == "sec3" else ",printed"))


BUILTIN_NAMES = ("thm2.4", "thm2.6", "thm2.7", "prop3.2", "prop3.3", "thm3.4", "peyre-p12", "extraspecial")


def builtin(name: str, p: int, *, t: int | None = None, a: int | None = None, b: int | None = None,
            n: int | None = None, variant: str | None = None) -> CentralExtensionSpec:
    """Look up a catalog group by name; parameters are taken mod p."""
    p = fflin.check_prime(p)
    if name == "thm2.4":
        return thm24(p)
    if name == "thm2.6":
        if t is None:
            raise ValidationError("thm2.6 needs t")
        return thm26(p, t, variant or "proof")
    if name == "thm2.7":
        return thm27(p)
    if name == "prop3.2":
        return prop32(p)
    if name == "prop3.3":
        if a is None or b is None:
            raise ValidationError("prop3.3 needs a and b")
        return prop33(p, a, b)
    if name == "thm3.4":
        return thm34(p, variant or "sec3")
    if name == "peyre-p12":
        return peyre_p12(p)
    if name == "extraspecial":
        if n is None:
            raise ValidationError("extraspecial needs n")
        return extraspecial(p, n)
    raise ValidationError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def default_catalog(p: int, max_extraspecial: int = 3) -> list[CentralExtensionSpec]:
    """Every catalog group at p, sweeping the parameterised families."""
    out = [thm24(p)]
    out += [thm26(p, t) for t in range(1, p)]
    out += [thm27(p), prop32(p)]
    out += [prop33(p, a, b) for a in range(p) for b in range(p) if is_irreducible_quadratic(a, b, p)][:1]
    out += [thm34(p), thm34(p, "printed"), peyre_p12(p)]
    out += [extraspecial(p, k) for k in range(1, max_extraspecial + 1)]
    return out


# ---------------------------------------------------------------- file format

_HEADER = re.compile(r"^(p|center|generators)\s*=\s*(-?\d+)$")
_REL = re.compile(r"^rel\s*\[\s*u(\d+)\s*,\s*u(\d+)\s*\]\s*=\s*(.*)$")
_POWER = re.compile(r"^v(\d+)(?:\^\(?(-?\d+)\)?)?$")


def parse_presentation(text: str) -> CentralExtensionSpec:
    """Parse the line-oriented presentation format.

    Grammar errors raise :class:`ParseError` with a 1-based line number; a
    well-formed file with an invalid prime raises :class:`ValidationError`.
    """
    header: dict[str, int] = {}
    order = ("p", "center", "generators")
    rels: list[tuple[int, int, dict[int, int], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if len(header) < 3:
            m = _HEADER.match(line)
            want = order[len(header)]
            if not m or m.group(1) != want:
                raise ParseError(f"expected '{want} = <int>'", lineno)
            header[want] = int(m.group(2))
            continue
        m = _REL.match(line)
        if not m:
            raise ParseError(f"unknown directive {line!r}", lineno)
        i, j = int(m.group(1)), int(m.group(2))
        if not i < j:
            raise ParseError(f"relation [u{i}, u{j}] needs i < j", lineno)
        if i < 1 or j > header["generators"]:
            raise ParseError(f"generator index out of range 1..{header['generators']}", lineno)
        powers: dict[int, int] = {}
        rhs = m.group(3).strip()
        if rhs not in ("1", ""):
            for tok in rhs.replace("*", " ").split():
                pm = _POWER.match(tok)
                if not pm:
                    raise ParseError(f"bad central factor {tok!r}", lineno)
                k = int(pm.group(1))
                if not 1 <= k <= header["center"]:
                    raise ParseError(f"v{k} out of range 1..{header['center']}", lineno)
                powers[k] = powers.get(k, 0) + (int(pm.group(2)) if pm.group(2) else 1)
        elif rhs == "":
            raise ParseError("missing right-hand side", lineno)
        rels.append((i, j, powers, lineno))
    if len(header) < 3:
        raise ParseError(f"missing '{order[len(header)]} = <int>' header", None)
    p, m_, n = header["p"], header["center"], header["generators"]
    if m_ < 0 or n < 0:
        raise ParseError("dimensions must be nonnegative", None)
    return _spec(p, m_, n, [(i, j, list(pw.items())) for i, j, pw, _ in rels], "")


def format_presentation(spec: CentralExtensionSpec) -> str:
    f = fflin.PrimeField(spec.p)
    lines = [f"p = {spec.p}", f"center = {spec.dim_v}", f"generators = {spec.dim_u}"]
    if spec.name:
        lines.insert(0, f"# {spec.name}")
    for i, j, e in spec.relations:
        factors = []
        for k, x in enumerate(e, start=1):
            x = f.symmetric(x)
            if x == 1:
                factors.append(f"v{k}")
            elif x:
                factors.append(f"v{k}^{x}")
        lines.append(f"rel [u{i}, u{j}] = {' '.join(factors)}")
    return "\n".join(lines) + "\n"
