import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moufang.errors import CapExceeded
from moufang.loopcore import (
    cyclic,
    dihedral,
    is_abelian_group,
    is_normal_subloop,
    normal_subloops,
    subloop_table,
    symmetric,
)
from moufang.mltgrp import build_mlt, translations
from moufang.permgrp import (
    Perm,
    center,
    close,
    elementary_abelian_socle,
    intersection,
    is_normal,
    is_p_group,
    is_subgroup,
    is_subnormal,
    normal_closure,
    p_component,
    p_core,
    subnormal_chain,
    trivial_group,
)


def s_n(n):
    gens = [Perm((1, 0) + tuple(range(2, n))), Perm(tuple(range(1, n)) + (0,))]
    return close(gens)


def test_transposition():
    assert close([Perm((1, 0, 2))]).order == 2


def test_composition_right_to_left():
    a, b = Perm((1, 0, 2)), Perm((0, 2, 1))
    assert (a * b)(1) == a(b(1))


def test_regular_cyclic():
    for n in (4, 6, 7):
        Ls, Rs = translations(cyclic(n))
        assert Ls == Rs
        assert close(Ls).order == n


def test_symmetric_orders():
    assert s_n(3).order == 6
    assert s_n(4).order == 24


def test_mlt_order_stable_under_reordering(ms3):
    Ls, Rs = translations(ms3)
    gens = list(Ls) + list(Rs)
    a = close(gens)
    b = close(gens[::-1])
    assert a.order == b.order == 2592
    assert a.element_set == b.element_set


def test_words_reproduce_elements():
    G = s_n(4)
    for i in range(G.order):
        g = Perm.identity(4)
        for k in G.word(G.element(i)):
            g = g * G.gens[k]
        assert g == G.element(i)


def test_cap():
    with pytest.raises(CapExceeded) as exc:
        close(s_n(5).gens, cap=50)
    assert exc.value.cap == 50


def test_center_is_normal():
    for G in (s_n(4), close(translations(dihedral(8))[0] + translations(dihedral(8))[1])):
        assert is_normal(center(G), G)


def test_transposition_not_normal_nor_subnormal():
    G = s_n(3)
    H = close([Perm((1, 0, 2))])
    assert not is_normal(H, G)
    assert not is_subnormal(H, G)
    assert subnormal_chain(H, G) is None


def test_p_core_s3():
    G = s_n(3)
    assert p_core(G, 3).order == 3
    assert p_core(G, 2).is_trivial()


def test_p_core_s4():
    G = s_n(4)
    assert p_core(G, 2).order == 4
    assert p_core(G, 3).is_trivial()


def _all_subgroups(G):
    """Every subgroup: cyclic subgroups closed under pairwise joins."""
    out = {}
    for g in G.elements:
        H = close([g], degree=G.degree)
        out.setdefault(H.element_set, H)
    pending = list(out.values())
    while pending:
        A = pending.pop()
        for B in list(out.values()):
            J = close(A.gens + B.gens, degree=G.degree)
            if J.element_set not in out:
                out[J.element_set] = J
                pending.append(J)
    return list(out.values())


def _brute_p_core(G, p):
    good = []
    for g in G.elements:
        N = normal_closure([g], G)
        if is_p_group(N, p):
            good.append(g)
    return close(good, degree=G.degree) if good else trivial_group(G.degree)


def _brute_subnormal(H, G, subgroups):
    reach = {G.element_set}
    changed = True
    while changed:
        changed = False
        for K in subgroups:
            if K.element_set in reach:
                continue
            if any(is_normal(K, J) for J in subgroups if J.element_set in reach and is_subgroup(K, J)):
                reach.add(K.element_set)
                changed = True
    return H.element_set in reach


def _small_groups():
    D4 = dihedral(8)
    yield s_n(4)
    yield close(list(translations(D4)[0]) + list(translations(D4)[1]))
    yield close(list(translations(symmetric(6))[0]) + list(translations(symmetric(6))[1]))


@pytest.mark.parametrize("index", range(3))
def test_p_core_matches_brute_force(index):
    G = list(_small_groups())[index]
    for p in (2, 3):
        assert p_core(G, p).element_set == _brute_p_core(G, p).element_set


@pytest.mark.parametrize("index", range(3))
def test_is_subnormal_matches_brute_force(index):
    G = list(_small_groups())[index]
    assert G.order <= 200
    subs = _all_subgroups(G)
    for H in subs:
        chain = subnormal_chain(H, G)
        assert (chain is not None) == _brute_subnormal(H, G, subs)
        if chain is not None:
            assert all(is_normal(b, a) for a, b in zip(chain, chain[1:]))


def test_intersection_and_closure():
    G = s_n(4)
    A4 = normal_closure([Perm((1, 2, 0, 3))], G)
    assert A4.order == 12
    assert intersection(A4, close([Perm((1, 0, 2, 3))])).is_trivial()


def test_socle_of_cyclic8():
    A = close([Perm(tuple(range(1, 8)) + (0,))])
    assert elementary_abelian_socle(A, 2).order == 2


def test_p_component_groups():
    Z6 = close([Perm((1, 2, 3, 4, 5, 0))])
    assert p_component(Z6, 2).order == 2
    Z2xZ4 = close([Perm((1, 0, 2, 3, 4, 5)), Perm((0, 1, 3, 4, 5, 2))])
    assert Z2xZ4.order == 8
    assert p_component(Z2xZ4, 2).order == 8


def test_p_component_of_subloop(md4):
    for A in normal_subloops(md4):
        if len(A) > 1 and is_abelian_group(subloop_table(md4, A)):
            part = p_component(A, 2, loop=md4)
            assert is_normal_subloop(md4, part)


def test_inner_mapping_group_is_subgroup(ms3):
    ctx = build_mlt(ms3)
    assert is_subgroup(ctx.inn, ctx.mlt)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(6)), min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_closure_independent_of_generator_order(gens, rnd):
    perms = [Perm(g) for g in gens]
    shuffled = perms[:]
    rnd.shuffle(shuffled)
    a, b = close(perms, degree=6), close(shuffled, degree=6)
    assert a.element_set == b.element_set
    assert a.order in {d for d in range(1, 721) if 720 % d == 0}
    for x, y in itertools.islice(itertools.product(a.elements, repeat=2), 200):
        assert x * y in a
