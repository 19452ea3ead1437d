import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moufang.errors import BetaDoesNotFixIdentity, CertificationFailed
from moufang.loopcore import SubloopHandle, automorphisms, dihedral, normal_subloops, nuclei, quotient
from moufang.mltgrp import build_mlt, coset_kernel, mlt_rel
from moufang.permgrp import Perm, is_normal
from moufang.psa import (
    Autotopism,
    PsaPair,
    atp_to_psa,
    autotopism_triple_violation,
    c0_subgroup,
    companions,
    conj_psa,
    is_autotopism,
    is_semiautomorphism,
    prop_d2_hom,
    psa_identity_violation,
    psa_inv,
    psa_mul,
    psa_to_atp,
    series_chain,
    verify_series,
)
from tests.conftest import chein


def t_pair(ctx, x):
    Q = ctx.loop
    return PsaPair(Q, Q.power(x, -3), ctx.T(x))


def test_automorphism_has_companion_one(ms3):
    for a in automorphisms(ms3)[:10]:
        assert 0 in companions(ms3, Perm(a))


@pytest.mark.parametrize("fixture", ["ms3", "md4", "md5"])
def test_t_x_companion(request, fixture):
    Q = request.getfixturevalue(fixture)
    ctx = build_mlt(Q)
    for x in Q.elements:
        assert Q.power(x, -3) in companions(Q, ctx.T(x))


def test_companions_form_nucleus_coset(md4):
    ctx = build_mlt(md4)
    nuc = nuclei(md4).left_nucleus
    for phi in ctx.inn.elements[:40]:
        cs = companions(md4, phi)
        c = min(cs)
        assert cs == {md4.m(a, c) for a in nuc}


def test_random_bijection_has_no_companion(ms3):
    rng = random.Random(7)
    found = 0
    for _ in range(20):
        img = list(range(1, 12))
        rng.shuffle(img)
        if not companions(ms3, Perm([0] + img)):
            found += 1
    assert found > 0


def test_uncertified_pair_rejected(ms3):
    with pytest.raises(CertificationFailed):
        PsaPair(ms3, 0, Perm([0] + list(range(11, 0, -1))))


def test_identity_and_inverse(ms3):
    ctx = build_mlt(ms3)
    one = PsaPair.identity(ms3)
    for x in ms3.elements:
        a = t_pair(ctx, x)
        assert psa_mul(one, a) == a
        assert psa_mul(a, psa_inv(a)) == one
        assert psa_mul(psa_inv(a), a) == one


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), min_size=3, max_size=3))
def test_psa_associative(picks):
    Q = chein("symmetric", 6)
    ctx = build_mlt(Q)

    def pick(x, k):
        if k % 2:
            return t_pair(ctx, x)
        phi = ctx.standard[("L", x, k)]
        return PsaPair(Q, min(companions(Q, phi)), phi)

    a, b, c = (pick(x, k) for x, k in picks)
    assert psa_mul(psa_mul(a, b), c) == psa_mul(a, psa_mul(b, c))


def test_atp_round_trip(ms3):
    ctx = build_mlt(ms3)
    for x in ms3.elements:
        a = t_pair(ctx, x)
        assert atp_to_psa(psa_to_atp(a)) == a


def test_identity_pair_to_identity_triple(ms3):
    t = psa_to_atp(PsaPair.identity(ms3))
    e = Perm.identity(12)
    assert (t.alpha, t.beta, t.gamma) == (e, e, e)


def test_beta_must_fix_identity(ms3):
    ctx = build_mlt(ms3)
    L, R, M = ctx.L[3], ctx.R[3], ctx.M(3)
    with pytest.raises(BetaDoesNotFixIdentity):
        atp_to_psa(Autotopism(ms3, L, R, M))


@pytest.mark.parametrize("fixture", ["ms3", "md4", "mq8", "md5"])
def test_autotopism_triples(request, fixture):
    ctx = build_mlt(request.getfixturevalue(fixture))
    assert autotopism_triple_violation(ctx) is None


def test_autotopism_triples_fail_off_moufang(order5):
    ctx = build_mlt(order5)
    assert not all(is_autotopism(order5, ctx.L[x], ctx.R[x], ctx.M(x)) for x in order5.elements)


def test_conj_identity_cases(ms3):
    ctx = build_mlt(ms3)
    one = PsaPair.identity(ms3)
    a = t_pair(ctx, 4)
    assert conj_psa(ms3, 0, a) == a
    for x in ms3.elements:
        assert conj_psa(ms3, x, one) == one


def test_conj_certifies_on_generators(ms3):
    ctx = build_mlt(ms3)
    for x in ms3.elements:
        for u in ms3.elements:
            conj_psa(ms3, x, t_pair(ctx, u))


def test_semiautomorphisms(ms3, md4):
    for Q in (ms3, md4):
        ctx = build_mlt(Q)
        for a in automorphisms(Q)[:5]:
            assert is_semiautomorphism(Q, Perm(a))
        assert all(is_semiautomorphism(Q, phi) for phi in ctx.inn.elements)
        assert not is_semiautomorphism(Q, ctx.L[1])


@pytest.mark.parametrize("fixture", ["ms3", "md4", "mq8", "md5"])
def test_psa_identities(request, fixture):
    assert psa_identity_violation(build_mlt(request.getfixturevalue(fixture))) is None


def test_c0_whole_loop(ms3):
    ctx = build_mlt(ms3)
    assert c0_subgroup(ctx, SubloopHandle(tuple(ms3.elements))) == ctx.mlt


def test_c0_in_group_is_c():
    G = dihedral(8)
    ctx = build_mlt(G)
    for S in normal_subloops(G):
        assert c0_subgroup(ctx, S) == coset_kernel(ctx, S)


def test_c0_forms_agree_and_normal(md4):
    ctx = build_mlt(md4)
    for S in normal_subloops(md4):
        C0, C = c0_subgroup(ctx, S), coset_kernel(ctx, S)
        assert c0_subgroup(ctx, S, form="R") == C0
        assert is_normal(C0, C)


def test_hom_translation_maps_to_identity(md4):
    ctx = build_mlt(md4)
    S = normal_subloops(md4)[2]
    f = prop_d2_hom(ctx, S)
    for s in S:
        assert f(ctx.L[s]) == 0


def test_hom_constant_on_groups():
    G = dihedral(8)
    ctx = build_mlt(G)
    for S in normal_subloops(G):
        f = prop_d2_hom(ctx, S)
        assert set(f.values) == {0}


@pytest.mark.parametrize("fixture", ["md4", "md5"])
def test_hom_kernel_is_c0(request, fixture):
    Q = request.getfixturevalue(fixture)
    ctx = build_mlt(Q)
    for S in normal_subloops(Q):
        if coset_kernel(ctx, S).order > 6000:
            continue
        f = prop_d2_hom(ctx, S)
        assert f.kernel == c0_subgroup(ctx, S)
        nuc_s = SubloopHandle.of(Q.m(a, s) for a in nuclei(Q).nucleus for s in S)
        assert f.target.n == quotient(Q, nuc_s)[0].n


def test_series_trivial(md4):
    ctx = build_mlt(md4)
    rep = verify_series(ctx, SubloopHandle((0,)))
    assert rep.ok and rep.orders == (1, 1, 1, 1024)


def test_series_md4(md4):
    ctx = build_mlt(md4)
    found = {}
    for S in normal_subloops(md4)[1:-1]:
        rep = verify_series(ctx, S)
        assert rep.ok
        found.setdefault(len(S), rep.orders)
    assert found[2] == (2, 16, 128, 1024)
    assert found[8] == (64, 256, 512, 1024)


def test_series_groups():
    G = dihedral(16)
    ctx = build_mlt(G)
    for S in normal_subloops(G):
        assert verify_series(ctx, S).ok


def test_series_chain_members(md5):
    ctx = build_mlt(md5)
    S = next(S for S in normal_subloops(md5) if len(S) == 5)
    chain = series_chain(ctx, S)
    assert [G.order for G in chain] == [20000, 5000, 1250, 25]
    assert chain[-1] == mlt_rel(ctx, S)
