"""The K / S pipeline for degrees 2 and 3 and the obstruction report.

For a commutator map gamma the pipeline computes

* ``K2 = image of gamma*`` and ``K3 = K2 ^ U*`` (dual side),
* ``S = annihilator of K`` (primal side),
* ``S_dec``: the span of the elements of S of the form ``u' ^ u``,
* ``Kmax = annihilator of S_dec``.

``dim Kmax2 - dim K2`` is the F_p-dimension of the unramified Brauer group of
C(G); ``dim Kmax3 - dim K3`` is the dimension of a subgroup of H^3_nr, hence
only a lower bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _kernels, fflin
from .errors import PipelineInvariantError, ValidationError
from .extalg import MultiVector, format_multivector, wedge_with_basis
from .groupspec import CentralExtensionSpec, GammaMap, build_gamma, check_center_minimal, check_commutator_full


def infer_n(ambient_dim: int, d: int) -> int:
    n = d
    while comb(n, d) < ambient_dim:
        n += 1
    if comb(n, d) != ambient_dim:
        raise ValueError(f"{ambient_dim} is not a binomial C(n,{d})")
    return n


def compute_k2(g: GammaMap) -> fflin.Subspace:
    return fflin.row_space(g.matrix, g.p) if g.dim_v else fflin.Subspace.zero(g.p, comb(g.dim_u, 2))


def compute_k3(k2: fflin.Subspace, n: int | None = None) -> fflin.Subspace:
    n = infer_n(k2.ambient_dim, 2) if n is None else n
    if n < 3:
        return fflin.Subspace.zero(k2.p, 0)
    prods = wedge_with_basis(k2.basis, n, 2, k2.p)
    return fflin.Subspace._from_rows(prods.reshape(-1, comb(n, 3)), k2.p, comb(n, 3))


def compute_s(k: fflin.Subspace, d: int | None = None) -> fflin.Subspace:
    """Annihilator of a dual-side subspace under the (identity) pairing."""
    return fflin.annihilator(k)


def compute_s_dec(s: fflin.Subspace, d: int, n: int | None = None) -> fflin.Subspace:
    """Span of the elements ``u' ^ u`` lying in s, by a sweep over projective points.

    For each line [u] in U the elements of s killed by ``- ^ u`` are exactly the
    elements of s divisible by u; summing these over all lines gives S_dec.
    The sweep stops as soon as the accumulated span is all of s.
    """
    n = infer_n(s.ambient_dim, d) if n is None else n
    p = s.p
    if s.dim == 0:
        return s
    # P[k] maps coefficients c (w = c . basis) to w ^ e_k
    P = np.ascontiguousarray(np.transpose(wedge_with_basis(s.basis, n, d, p), (0, 2, 1)))
    coeff = _kernels.sweep(P, p)
    if coeff.shape[0] == s.dim:
        return s
    return fflin.Subspace._from_rows(fflin.matmul_mod(coeff, s.basis, p), p, s.ambient_dim)


def compute_kmax(s_dec: fflin.Subspace, d: int | None = None) -> fflin.Subspace:
    return fflin.annihilator(s_dec)


def _rows_text(rows: np.ndarray, p: int, n: int, d: int, dual: bool) -> list[str]:
    return [format_multivector(MultiVector.from_vector(r, p, n, d, dual)) for r in rows]


@dataclass(frozen=True, eq=False)
class ObstructionReport:
    p: int
    m: int
    n: int
    k2: fflin.Subspace
    s2: fflin.Subspace
    s2dec: fflin.Subspace
    k2max: fflin.Subspace
    k3: fflin.Subspace
    s3: fflin.Subspace
    s3dec: fflin.Subspace
    k3max: fflin.Subspace
    center_minimal: bool = True
    name: str = ""
    witnesses2: np.ndarray = field(default=None, repr=False)
    witnesses3: np.ndarray = field(default=None, repr=False)

    @property
    def order_exponent(self) -> int:
        return self.m + self.n

    @property
    def brnr_dim(self) -> int:
        return self.k2max.dim - self.k2.dim

    @property
    def h3_lower_dim(self) -> int:
        return self.k3max.dim - self.k3.dim

    def dims(self) -> dict[str, int]:
        return {
            "dim_k2": self.k2.dim, "dim_s2": self.s2.dim, "dim_s2dec": self.s2dec.dim,
            "dim_k2max": self.k2max.dim, "brnr_dim": self.brnr_dim,
            "dim_k3": self.k3.dim, "dim_s3": self.s3.dim, "dim_s3dec": self.s3dec.dim,
            "dim_k3max": self.k3max.dim, "h3_lower_dim": self.h3_lower_dim,
        }

    def classification(self) -> str:
        if self.brnr_dim > 0:
            return "brauer-obstructed"
        if self.h3_lower_dim > 0:
            return "harmful"
        return "clean"

    def _basis_entry(self, sub: fflin.Subspace | np.ndarray, d: int, dual: bool = False) -> dict:
        rows = sub.basis if isinstance(sub, fflin.Subspace) else sub
        return {
            "vectors": [[int(x) for x in r] for r in rows],
            "text": _rows_text(rows, self.p, self.n, d, dual),
        }

    def to_dict(self) -> dict:
        out = {"p": self.p, "m": self.m, "n": self.n, "order_exponent": self.order_exponent}
        out.update(self.dims())
        out["center_minimal"] = self.center_minimal
        out["bases"] = {
            "k2": self._basis_entry(self.k2, 2, True),
            "s2": self._basis_entry(self.s2, 2),
            "s2dec": self._basis_entry(self.s2dec, 2),
            "s3": self._basis_entry(self.s3, 3),
            "s3dec": self._basis_entry(self.s3dec, 3),
            "s2_witnesses": self._basis_entry(self.witnesses2, 2),
            "s3_witnesses": self._basis_entry(self.witnesses3, 3),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def to_text(self) -> str:
        lines = []
        head = self.name or "group"
        lines.append(f"{head}: p = {self.p}, dim V = {self.m}, dim U = {self.n}, |G| = p^{self.order_exponent}")
        if not self.center_minimal:
            lines.append("warning: U has a nonzero radical, so Z(G) is larger than [G,G]")
        d = self.dims()
        lines.append(
            f"degree 2: dim K2 = {d['dim_k2']}, dim S2 = {d['dim_s2']}, "
            f"dim S2_dec = {d['dim_s2dec']}, dim K2_max = {d['dim_k2max']}"
        )
        lines.append(
            f"degree 3: dim K3 = {d['dim_k3']}, dim S3 = {d['dim_s3']}, "
            f"dim S3_dec = {d['dim_s3dec']}, dim K3_max = {d['dim_k3max']}"
        )
        for label, sub, deg in (("S2", self.s2, 2), ("S2_dec", self.s2dec, 2),
                                ("S3", self.s3, 3), ("S3_dec", self.s3dec, 3)):
            if sub.dim <= 24:
                lines.append(f"  {label} = <{', '.join(_rows_text(sub.basis, self.p, self.n, deg, False))}>")
            else:
                lines.append(f"  {label}: {sub.dim} basis vectors (use --machine for the full list)")
        if self.witnesses3.shape[0]:
            lines.append(
                "  S3 mod S3_dec spanned by: "
                + ", ".join(_rows_text(self.witnesses3, self.p, self.n, 3, False))
            )
        lines.append(f"Br_nr dimension (K2_max/K2): {self.brnr_dim}")
        lines.append(f"H3_nr lower-bound dimension (K3_max/K3, a subgroup of H3_nr): {self.h3_lower_dim}")
        return "\n".join(lines)


def report(spec: CentralExtensionSpec) -> ObstructionReport:
    """Run the whole pipeline on a presentation and check its bookkeeping."""
    g = build_gamma(spec)
    if not check_commutator_full(g):
        raise ValidationError(
            f"gamma has rank {g.rank()} < dim V = {g.dim_v}: V is not the commutator subgroup"
        )
    p, n = spec.p, spec.dim_u
    k2 = compute_k2(g)
    k3 = compute_k3(k2, n)
    s2 = compute_s(k2, 2)
    s3 = compute_s(k3, 3)
    s2dec = compute_s_dec(s2, 2, n)
    s3dec = compute_s_dec(s3, 3, n)
    k2max = compute_kmax(s2dec, 2)
    k3max = compute_kmax(s3dec, 3)
    rep = ObstructionReport(
        p, spec.dim_v, n, k2, s2, s2dec, k2max, k3, s3, s3dec, k3max,
        center_minimal=check_center_minimal(g), name=spec.name,
        witnesses2=fflin.complement_in(s2dec, s2), witnesses3=fflin.complement_in(s3dec, s3),
    )
    _check_report(rep)
    return rep


def _check_report(r: ObstructionReport) -> None:
    problems = []
    if r.k2.dim != r.m:
        problems.append(f"dim K2 = {r.k2.dim} but dim V = {r.m}")
    if not r.k2 <= r.k2max:
        problems.append("K2 is not inside K2_max")
    if not r.k3 <= r.k3max:
        problems.append("K3 is not inside K3_max")
    if not r.s2dec <= r.s2 or not r.s3dec <= r.s3:
        problems.append("S_dec is not inside S")
    if r.brnr_dim != r.s2.dim - r.s2dec.dim:
        problems.append("degree-2 duality count fails")
    if r.h3_lower_dim != r.s3.dim - r.s3dec.dim:
        problems.append("degree-3 duality count fails")
    if problems:
        raise PipelineInvariantError("; ".join(problems))
