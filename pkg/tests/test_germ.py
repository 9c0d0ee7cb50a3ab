import random
from collections import Counter

import pytest

import oracles
from germoid.algebra import enumerate_homomorphisms, idempotent_semilattice
from germoid.germ import (
    canonical_embedding,
    g_action_to_s_action,
    germ_equivalent,
    germ_groupoid,
    s_action_to_g_action,
    universal_groupoid,
)
from germoid.groupoid import groupoid_isomorphic, is_equivariant_map, left_translation, object_action
from germoid.instances import (
    e3,
    i2_with_maps,
    natural_action,
    pair_groupoid,
    point_groupoid,
    random_action,
    random_inverse_semigroup,
    sierpinski_groupoid,
    symmetric_inverse_monoid,
    trivial_semilattice,
)
from germoid.isaction import canonical_action, terminal_map, validate_action
from germoid.topspace import FiniteSpace


def label_pairs(label, k=2):
    if label == "0":
        return frozenset()
    if label == "1":
        return frozenset((i, i) for i in range(k))
    return frozenset((int(a) - 1, int(b) - 1) for a, b in (p.split(">") for p in label.split(",")))


def test_e3_germs_collapse_to_sierpinski():
    U = universal_groupoid(e3())
    G = U.groupoid
    assert G.is_space() and G.n_arrows == 2
    assert groupoid_isomorphic(G, sierpinski_groupoid()) is not None
    phi_e = U.action.charspace.special(1)
    assert U.germ(1, phi_e) == U.germ(2, phi_e)
    assert germ_equivalent(U.action, 1, 2, phi_e)


def test_i2_universal_groupoid_matches_brute_force():
    S = symmetric_inverse_monoid(2)
    U = universal_groupoid(S)
    G = U.groupoid
    ref = oracles.germ_groupoid_of_partial_bijections(oracles.all_partial_bijections(2))
    E, emb = idempotent_semilattice(S)
    CS = U.action.charspace

    def as_filter(point):
        return frozenset(label_pairs(S.labels[emb[e]]) for e in CS.characters[point].filter)

    assert {as_filter(p) for p in range(G.n_objects)} == set(ref["characters"])
    assert G.n_objects == 3
    assert G.n_arrows == len(ref["classes"]) == 6
    for cls in ref["classes"]:
        arrows = {U.germ(S.index(next(l for l in S.labels if label_pairs(l) == g)),
                         next(p for p in range(G.n_objects) if as_filter(p) == phi))
                  for g, phi in cls}
        assert len(arrows) == 1
    got = Counter((as_filter(G.src[a]), as_filter(G.rng[a])) for a in range(G.n_arrows))
    assert got == Counter(ref["arrows"])
    inf = CS.special(E.unit)
    iso = G.isotropy(inf)
    assert len(iso) == 2
    g = next(a for a in iso if a != G.unit[inf])
    assert G.compose(g, g) == G.unit[inf]


def test_natural_i2_action_gives_pair2():
    S, maps = i2_with_maps()
    H = germ_groupoid(natural_action(S, maps)).groupoid
    assert groupoid_isomorphic(H, pair_groupoid(2)) is not None


def test_canonical_embedding_examples():
    E = e3()
    U = universal_groupoid(E)
    h = canonical_embedding(E, U)
    assert U.basis[1] == 1 << U.germ(1, U.action.charspace.special(1))
    assert h.is_injective()
    S = symmetric_inverse_monoid(2)
    U = universal_groupoid(S)
    assert len(set(U.basis)) == 7
    assert canonical_embedding(S, U).is_injective()
    T = trivial_semilattice()
    h = canonical_embedding(T)
    P = point_groupoid()
    assert len(enumerate_homomorphisms(T, P.bisections.semigroup)) == 1
    assert h.table == (0, 1)


def test_theta_basis_and_intersections():
    rng = random.Random(11)
    for S in [symmetric_inverse_monoid(2), e3()] + [random_inverse_semigroup(rng) for _ in range(10)]:
        U = universal_groupoid(S)
        X = U.groupoid.arrow_space
        # every minimal neighbourhood is some Θ(s, N(x))
        for a in range(U.groupoid.n_arrows):
            s, x = U.representative(a)
            assert X.nbhd[a] == U.theta(s, U.action.space.nbhd[x])
        for s in S:
            for t in S:
                meet = U.basis[s] & U.basis[t]
                for a in range(U.groupoid.n_arrows):
                    if meet >> a & 1:
                        assert any(U.basis[u] >> a & 1 and U.basis[u] & ~meet == 0 for u in S)


def test_action_transfer_examples():
    S = symmetric_inverse_monoid(2)
    U = universal_groupoid(S)
    C = U.action
    B = s_action_to_g_action(C, U)
    assert B.anchor == tuple(range(C.space.n))
    assert B == object_action(U.groupoid)
    assert g_action_to_s_action(object_action(U.groupoid), U) == canonical_action(S)
    S2, maps = i2_with_maps()
    A = natural_action(S2, maps)
    B = s_action_to_g_action(A, U)
    assert g_action_to_s_action(B, U) == A
    X = FiniteSpace.sierpinski()
    A = validate_action(e3(), X, [(None, None), (None, 1), (0, 1)])
    UE = universal_groupoid(e3())
    B = s_action_to_g_action(A, UE)
    assert B.anchor == terminal_map(A, UE.action).table
    assert g_action_to_s_action(B, UE) == A


def test_trivial_semigroup_acts_trivially():
    T = trivial_semilattice()
    U = universal_groupoid(T)
    X = FiniteSpace.sierpinski()
    A = validate_action(T, X, [(None, None), (0, 1)])
    B = s_action_to_g_action(A, U)
    assert g_action_to_s_action(B, U) == A


def test_round_trip_and_equivariance_on_random_actions():
    rng = random.Random(12)
    for _ in range(25):
        A = random_action(rng, 6, 4)
        U = universal_groupoid(A.semigroup)
        B = s_action_to_g_action(A, U)
        assert g_action_to_s_action(B, U) == A
        assert s_action_to_g_action(g_action_to_s_action(B, U), U) == B
        f = terminal_map(A, U.action)
        assert is_equivariant_map(B, object_action(U.groupoid), f.table)


def test_left_translation_sends_units_to_germs():
    S = symmetric_inverse_monoid(2)
    U = universal_groupoid(S)
    G = U.groupoid
    A = g_action_to_s_action(left_translation(G), U)
    for s in S:
        for x in range(G.n_objects):
            expected = None if U.action.theta[s][x] is None else U.germ(s, x)
            assert A.theta[s][G.unit[x]] == expected


@pytest.mark.parametrize("k", [1, 2])
def test_embedding_for_symmetric_inverse_monoids(k):
    S = symmetric_inverse_monoid(k)
    assert canonical_embedding(S).is_injective()
