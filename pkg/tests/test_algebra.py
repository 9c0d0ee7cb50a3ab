import pytest

import oracles
from germoid.algebra import (
    Semilattice,
    compose_homs,
    enumerate_homomorphisms,
    idempotent_semilattice,
    identity_hom,
    is_homomorphism,
    natural_order,
    semilattice_from_sets,
    validate_inverse_semigroup,
)
from germoid.errors import (
    BadUnit,
    BadZero,
    IdempotentsDontCommute,
    MalformedTable,
    NotAssociative,
    NotInverse,
    NotMultiplicative,
    UnitNotPreserved,
    ZeroNotPreserved,
)
from germoid.instances import (
    chain,
    cyclic_table,
    e3,
    group_with_zero,
    orth,
    symmetric_inverse_monoid,
)


def test_e3_is_a_semilattice():
    E = e3()
    assert isinstance(E, Semilattice)
    assert E.zero == 0 and E.unit == 2 and not E.adjoined


def test_i2_matches_direct_composition():
    S = symmetric_inverse_monoid(2)
    maps = oracles.all_partial_bijections(2)
    assert len(S) == len(maps) == 7

    def as_pairs(label):
        if label == "0":
            return frozenset()
        if label == "1":
            return frozenset({(0, 0), (1, 1)})
        return frozenset((int(p[0]) - 1, int(p[2]) - 1) for p in label.split(","))

    pairs = [as_pairs(l) for l in S.labels]
    assert set(pairs) == set(maps)
    for a in S:
        assert pairs[S.star[a]] == oracles.pinverse(pairs[a])
        for b in S:
            # table product ab means "first b, then a"
            assert pairs[S.mul[a][b]] == oracles.pcompose(pairs[a], pairs[b])


def test_non_associative_table():
    # a·a = b, b·a = a, everything else b
    with pytest.raises(NotAssociative):
        validate_inverse_semigroup([[1, 1], [0, 1]])


@pytest.mark.parametrize(
    "mul, exc",
    [
        ([[0, 1]], MalformedTable),
        ([[0, 5], [1, 1]], MalformedTable),
        # left-zero band: associative, idempotents don't commute
        ([[0, 0], [1, 1]], IdempotentsDontCommute),
    ],
)
def test_malformed_tables(mul, exc):
    with pytest.raises(exc):
        validate_inverse_semigroup(mul)


def test_wrong_star_rejected():
    S = symmetric_inverse_monoid(2)
    star = list(S.star)
    star[3], star[4] = 3, 4
    with pytest.raises(NotInverse):
        validate_inverse_semigroup(S.mul, star, S.zero, S.unit)


def test_wrong_zero_and_unit_rejected():
    E = e3()
    with pytest.raises(BadZero):
        validate_inverse_semigroup(E.mul, zero=1)
    with pytest.raises(BadUnit):
        validate_inverse_semigroup(E.mul, unit=1)


def test_zero_and_unit_adjoined_when_missing():
    # a bare group Z/2 has a unit but no zero
    S = validate_inverse_semigroup(cyclic_table(2), labels=["1", "g"])
    assert S.adjoined == frozenset({"zero"})
    assert len(S) == 3 and S.labels[S.zero] == "0"


def test_idempotent_semilattices():
    E, emb = idempotent_semilattice(e3())
    assert len(E) == 3 and emb == (0, 1, 2)
    S = symmetric_inverse_monoid(2)
    E, emb = idempotent_semilattice(S)
    assert sorted(S.labels[i] for i in emb) == ["0", "1", "1>1", "2>2"]
    e1, e2 = (emb.index(S.index(l)) for l in ("1>1", "2>2"))
    assert E.mul[e1][e2] == E.zero
    G0 = group_with_zero(cyclic_table(3))
    E, _ = idempotent_semilattice(G0)
    assert len(E) == 2


def test_natural_order_examples():
    C, O = chain(2), orth(2)
    assert natural_order(C, 1, 2)
    assert not natural_order(O, 1, 2)
    for E in (C, O, e3()):
        assert all(natural_order(E, E.zero, f) for f in E)


@pytest.mark.parametrize("S", [e3(), chain(3), orth(3), symmetric_inverse_monoid(2), group_with_zero(cyclic_table(3))],
                         ids=["e3", "chain3", "orth3", "i2", "z3+0"])
def test_algebraic_laws(S):
    idem = set(S.idempotents)
    assert all(S.mul[e][f] in idem for e in idem for f in idem)
    E, emb = idempotent_semilattice(S)
    assert set(emb) == idem
    for s in S:
        for t in S:
            assert S.star[S.mul[s][t]] == S.mul[S.star[t]][S.star[s]]
    es = sorted(idem)
    for a in es:
        assert S.leq(a, a)
        for b in es:
            if S.leq(a, b) and S.leq(b, a):
                assert a == b
            for c in es:
                if S.leq(a, b) and S.leq(b, c):
                    assert S.leq(a, c)


def test_homomorphism_examples():
    E = e3()
    assert is_homomorphism((0, 2, 2), E, E).table == (0, 2, 2)
    assert is_homomorphism((0, 0, 2), E, E).table == (0, 0, 2)
    S = symmetric_inverse_monoid(2)
    assert identity_hom(S).table == tuple(range(7))
    with pytest.raises(ZeroNotPreserved):
        is_homomorphism((2, 2, 2), E, E)
    with pytest.raises(UnitNotPreserved):
        is_homomorphism((0, 1, 1), E, E)
    # chain2 -> chain2 swapping e1 and e2 breaks multiplicativity
    C = chain(2)
    with pytest.raises(NotMultiplicative):
        is_homomorphism((0, 2, 1, 3), C, C)


@pytest.mark.parametrize("S, T", [(e3(), e3()), (chain(2), orth(2)), (orth(2), symmetric_inverse_monoid(2)),
                                  (symmetric_inverse_monoid(2), symmetric_inverse_monoid(2))])
def test_enumerate_homomorphisms_matches_brute_force(S, T):
    got = sorted(h.table for h in enumerate_homomorphisms(S, T))
    assert got == sorted(oracles.semigroup_homs(S, T))


def test_composition_of_homs_validates():
    S = symmetric_inverse_monoid(2)
    homs = enumerate_homomorphisms(S, S)
    for f in homs:
        for g in homs:
            h = compose_homs(f, g)
            assert is_homomorphism(h.table, S, S).table == tuple(g.table[f.table[s]] for s in S)


def test_semilattice_from_sets():
    E = semilattice_from_sets([0, 1, 2, 3])
    assert len(E) == 4 and E.zero == 0 and E.unit == 3
    assert E.mul[1][2] == 0
