import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brnr import fflin
from brnr.errors import BudgetExceeded, ValidationError
from brnr.extalg import parse_multivector, partial_decomposability_witness
from brnr.groupspec import CentralExtensionSpec, build_gamma, builtin, extraspecial, thm26
from brnr.obstr import compute_k2, compute_k3, compute_kmax, compute_s, compute_s_dec, report
from brnr.oracles import plucker_oracle_s2, sdec_oracle
from brnr.selftest import random_spec


def prim(texts, p, n=6):
    vs = [parse_multivector(t, p, n) for t in texts]
    return fflin.span([v.to_array() for v in vs], comb(n, vs[0].d), p)


THM24_S2 = ("(1,2)-(3,4)", "(1,3)", "(1,4)-(2,5)", "(1,5)", "(1,6)", "(2,3)", "(2,4)",
            "(2,5)-(3,6)", "(2,6)", "(3,5)-(4,6)", "(4,5)", "(5,6)")


def test_thm24_steps():
    p = 5
    g = build_gamma(builtin("thm2.4", p))
    k2 = compute_k2(g)
    assert k2.dim == 3
    assert fflin.kernel(g.matrix, p, cols=15).dim == 12
    k3 = compute_k3(k2)
    assert k3.dim == 18
    s2 = compute_s(k2, 2)
    assert s2 == prim(THM24_S2, p)
    s3 = compute_s(k3, 3)
    assert s3.dim == 2
    w1 = parse_multivector("(1,5,6)", p, 6).to_array()
    w2 = parse_multivector("(1,3,5)-(1,4,6)+(2,5,6)", p, 6).to_array()
    assert s3.contains(w1) and s3.contains(w2)
    assert compute_s_dec(s3, 3) == fflin.span([w1], 20, p)
    assert compute_kmax(compute_s_dec(s2, 2)) == k2


def test_prop32_k3_is_everything():
    k3 = compute_k3(compute_k2(build_gamma(builtin("prop3.2", 5))))
    assert k3.dim == 4


def test_zero_and_full_edges():
    p = 3
    full = fflin.Subspace.full(p, 15)
    assert compute_s_dec(full, 2) == full
    assert compute_kmax(full).dim == 0
    assert compute_s(fflin.Subspace.zero(p, 20), 3) == fflin.Subspace.full(p, 20)
    z = fflin.Subspace.zero(p, 15)
    assert compute_s_dec(z, 2) == z


@pytest.mark.parametrize("p", [3, 5, 7])
def test_thm26_sdec(p):
    F = fflin.PrimeField(p)
    for t in range(1, p):
        r = report(thm26(p, t))
        if F.is_square(t):
            assert r.s3dec == r.s3
        else:
            assert r.s3dec.dim == 0 and r.h3_lower_dim == 2


def test_thm27_s3():
    p = 7
    r = report(builtin("thm2.7", p))
    assert r.s3.contains(parse_multivector("(1,3,5)", p, 6).to_array())
    assert r.h3_lower_dim == 1


def test_report_rejects_non_surjective():
    with pytest.raises(ValidationError):
        report(CentralExtensionSpec(5, 1, 4))


def test_report_flags_large_center():
    r = report(CentralExtensionSpec(5, 1, 3, ((1, 2, (1,)),)))
    assert not r.center_minimal
    assert "radical" in r.to_text()


def test_report_serialisation_stable():
    r = report(builtin("thm2.4", 5))
    d = r.to_dict()
    assert list(d)[:4] == ["p", "m", "n", "order_exponent"]
    assert r.to_json() == report(builtin("thm2.4", 5)).to_json()
    assert json.loads(r.to_json())["bases"]["s3dec"]["text"] == ["(1,5,6)"]
    text = r.to_text()
    assert "Br_nr dimension (K2_max/K2): 0" in text
    assert "H3_nr lower-bound dimension" in text


def test_classification():
    assert report(builtin("thm2.4", 3)).classification() == "harmful"
    assert report(builtin("prop3.2", 3)).classification() == "brauer-obstructed"
    assert report(extraspecial(3, 2)).classification() == "clean"


@pytest.mark.parametrize("name,kw", [("thm2.4", {}), ("prop3.2", {}), ("thm2.7", {}), ("thm2.6", {"t": 2})])
def test_oracles_agree(name, kw):
    r = report(builtin(name, 3, **kw))
    assert plucker_oracle_s2(r.s2) == r.s2dec
    assert sdec_oracle(r.s2, 2) == r.s2dec


def test_prop32_plucker_value():
    r = report(builtin("prop3.2", 3))
    assert plucker_oracle_s2(r.s2) == prim(("(2,3)", "(3,4)"), 3, 4)


def test_oracle_edges():
    p = 3
    full = fflin.Subspace.full(p, 6)
    assert sdec_oracle(full, 2, 4) == full
    z = fflin.Subspace.zero(p, 6)
    assert plucker_oracle_s2(z, 4) == z
    # (1,2)+(3,4) has no vector factor, so its line holds no u' ^ u
    w = parse_multivector("(1,2)+(3,4)", p, 4)
    assert partial_decomposability_witness(w) is None
    assert sdec_oracle(fflin.span([w.to_array()], 6, p), 2, 4).dim == 0


def test_oracle_budget_refusal():
    r = report(builtin("thm2.4", 13))
    with pytest.raises(BudgetExceeded) as exc:
        plucker_oracle_s2(r.s2, budget=1000)
    assert exc.value.needed == 13**12
    with pytest.raises(BudgetExceeded):
        sdec_oracle(r.s3, 3, budget=1000)


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.sampled_from([3, 5]), st.integers(3, 5))
def test_duality_and_containment(seed, p, n):
    r = report(random_spec(p, n, np.random.default_rng(seed)))
    assert r.k2max.dim - r.k2.dim == r.s2.dim - r.s2dec.dim
    assert r.k3max.dim - r.k3.dim == r.s3.dim - r.s3dec.dim
    assert r.k2 <= r.k2max and r.k3 <= r.k3max
    assert fflin.annihilator(r.k2max) == r.s2dec


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_sdec_matches_oracle_random(seed):
    rng = np.random.default_rng(seed)
    r = report(random_spec(3, 4, rng))
    assert sdec_oracle(r.s2, 2, 4) == r.s2dec
    assert sdec_oracle(r.s3, 3, 4) == r.s3dec
    assert plucker_oracle_s2(r.s2, 4) == r.s2dec
