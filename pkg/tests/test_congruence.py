import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moufang.congruence import (
    abelian_3div,
    abelian_moufang,
    abelian_oracle,
    derived_subloop,
    extension_pairing,
    extract_extension,
    find_triality_seed,
    is_classically_solvable,
    is_congruence_solvable,
)
from moufang.errors import NotAbelianCongruence, NotThreeDivisible
from moufang.loopcore import (
    SubloopHandle,
    build_abelian_extension,
    cyclic,
    dihedral,
    direct_product,
    is_abelian_group,
    is_normal_subloop,
    normal_subloops,
    nuclei,
    quaternion,
    random_extension_data,
    subloop_table,
    symmetric,
)


def whole(Q):
    return SubloopHandle(tuple(Q.elements))


def round_trips(Q, X):
    data = extract_extension(Q, X)
    E = build_abelian_extension(data)
    pair = extension_pairing(data, Q, X)
    return sorted(pair) == list(Q.elements) and all(
        pair[E.m(a, b)] == Q.m(pair[a], pair[b]) for a in E.elements for b in E.elements
    )


def test_oracle_trivial_and_whole():
    G = cyclic(6)
    assert abelian_oracle(G, SubloopHandle((0,)))
    assert abelian_oracle(G, whole(G))


@pytest.mark.parametrize("make", [lambda: symmetric(6), lambda: dihedral(8), lambda: quaternion(8), lambda: dihedral(12)])
def test_oracle_in_groups_is_commutativity(make):
    # group congruences are abelian exactly when the normal subgroup is commutative
    G = make()
    for X in normal_subloops(G):
        assert bool(abelian_oracle(G, X)) == is_abelian_group(subloop_table(G, X))


def test_oracle_witness(md4):
    X = next(X for X in normal_subloops(md4) if not abelian_oracle(md4, X))
    v = abelian_oracle(md4, X)
    assert v.clause and v.witness is not None


def test_oracle_vs_moufang_criterion(ms3):
    for X in normal_subloops(ms3):
        assert bool(abelian_oracle(ms3, X)) == bool(abelian_moufang(ms3, X))


def test_central_subgroup_is_abelian():
    for G in (dihedral(8), quaternion(8), dihedral(12)):
        Z = nuclei(G).center
        assert abelian_moufang(G, Z)
        assert abelian_oracle(G, Z)


def test_nuclear_commutative_subloops(md4, mq8):
    for Q in (md4, mq8):
        nuc = nuclei(Q).nucleus
        for X in normal_subloops(Q):
            if X.as_set <= nuc.as_set and is_abelian_group(subloop_table(Q, X)):
                assert abelian_moufang(Q, X)


def test_three_divisible_criterion(md4):
    assert abelian_3div(md4, SubloopHandle((0,)))
    for X in normal_subloops(md4):
        assert bool(abelian_3div(md4, X)) == bool(abelian_oracle(md4, X))


def test_three_divisible_criterion_refuses(ms3):
    with pytest.raises(NotThreeDivisible):
        abelian_3div(ms3, SubloopHandle((0,)))


def test_negative_control_exists(md4):
    hits = [
        X for X in normal_subloops(md4)
        if is_abelian_group(subloop_table(md4, X)) and not abelian_oracle(md4, X)
    ]
    assert len(hits) == 4
    assert all(len(X) == 8 for X in hits)


def test_extract_direct_product(klein):
    X, F = cyclic(3), klein
    Q = direct_product(F, X)
    data = extract_extension(Q, SubloopHandle((0, 1, 2)))
    ident = (0, 1, 2)
    assert data.transversal == (0, 3, 6, 9)
    assert all(f == ident for row in data.phi for f in row)
    assert all(f == ident for row in data.psi for f in row)
    assert all(t == 0 for row in data.theta for t in row)


def test_extract_round_trip_chein(md4):
    for X in normal_subloops(md4):
        if abelian_oracle(md4, X):
            data = extract_extension(md4, X)
            ident = tuple(range(len(X)))
            assert all(data.psi[0][s] == ident for s in range(data.factor.n))
            assert round_trips(md4, X)


def test_extract_refuses_non_abelian(md4):
    X = next(X for X in normal_subloops(md4) if not abelian_oracle(md4, X))
    with pytest.raises(NotAbelianCongruence):
        extract_extension(md4, X)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([(4, 4), (3, 4), (2, 4), (5, 2), (4, 2)]))
def test_random_extension_round_trip(seed, sizes):
    X = dihedral(4) if sizes[0] == 4 and seed % 2 else cyclic(sizes[0])
    F = dihedral(4) if sizes[1] == 4 else cyclic(sizes[1])
    Q = build_abelian_extension(random_extension_data(X, F, random.Random(seed)))
    base = SubloopHandle(tuple(range(X.n)))
    assert is_normal_subloop(Q, base)
    assert abelian_oracle(Q, base)
    assert round_trips(Q, base)


def test_classical_abelian():
    r = is_classically_solvable(cyclic(8))
    assert r and r.sizes == (8, 1)


def test_classical_s3():
    r = is_classically_solvable(symmetric(6))
    assert r and r.sizes == (6, 3, 1)


def test_classical_chein(ms3, md4):
    assert is_classically_solvable(ms3)
    assert is_classically_solvable(md4).sizes == (16, 2, 1)


def test_derived_subloop_of_group():
    G = dihedral(8)
    assert len(derived_subloop(G)) == 2


@pytest.mark.parametrize("make", [lambda: cyclic(6), lambda: symmetric(6), lambda: dihedral(8), lambda: quaternion(8)])
def test_congruence_solvable_groups(make):
    G = make()
    assert is_congruence_solvable(G)


def test_congruence_series(md4):
    r = is_congruence_solvable(md4)
    assert r and r.sizes == (16, 8, 4, 2, 1)
    for big, small in zip(r.series, r.series[1:]):
        assert small.as_set < big.as_set


@pytest.mark.parametrize("fixture", ["md4", "mq8", "md5"])
def test_solvability_agrees_three_divisible(request, fixture):
    Q = request.getfixturevalue(fixture)
    assert bool(is_classically_solvable(Q)) == bool(is_congruence_solvable(Q))


def test_seed_with_order4_commutative_normal(md4):
    p, S, A = find_triality_seed(md4, require_trivial_nucleus=False)
    assert p == 2 and len(S) in (2, 4)
    assert any(len(X) == 4 and is_abelian_group(subloop_table(md4, X)) for X in normal_subloops(md4))


def test_seed_abelian_p_group():
    G = cyclic(8)
    p, S, _ = find_triality_seed(G, require_trivial_nucleus=False)
    assert p == 2 and S == whole(G)


def test_seed_order6_part():
    G = cyclic(6)
    p, S, A = find_triality_seed(G, require_trivial_nucleus=False)
    assert len(A) == 6 and p == 2 and len(S) == 2
    assert is_normal_subloop(G, S)
