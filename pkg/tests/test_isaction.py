import random

import pytest

from germoid.errors import DomainNotOpen, NotHomomorphic, UnitNotIdentity, ZeroNotEmpty
from germoid.instances import e3, i2_with_maps, natural_action, random_action, symmetric_inverse_monoid
from germoid.isaction import (
    canonical_action,
    enumerate_equivariant_maps,
    is_equivariant,
    restrict_to_idempotents,
    terminal_map,
    validate_action,
)
from germoid.topspace import FiniteSpace, map_to_hom, open_semilattice

SIERP = FiniteSpace.sierpinski()  # 0 = bot, 1 = top


def e3_on_sierpinski(e_domain):
    theta = [(None, None), tuple(x if e_domain >> x & 1 else None for x in range(2)), (0, 1)]
    return validate_action(e3(), SIERP, theta)


def test_natural_i2_action_valid():
    S, maps = i2_with_maps()
    A = natural_action(S, maps)
    assert A.space.n == 2 and A.theta == maps


def test_e3_on_sierpinski():
    A = e3_on_sierpinski(0b10)
    assert A.domain(1) == 0b10
    with pytest.raises(DomainNotOpen):
        e3_on_sierpinski(0b01)


def test_action_errors():
    E = e3()
    with pytest.raises(UnitNotIdentity):
        validate_action(E, SIERP, [(None, None), (None, 1), (None, 1)])
    with pytest.raises(ZeroNotEmpty):
        validate_action(E, SIERP, [(None, 1), (None, 1), (0, 1)])
    S, maps = i2_with_maps()
    bad = list(maps)
    bad[S.index("1>2,2>1")] = (0, 1)
    with pytest.raises(NotHomomorphic):
        validate_action(S, FiniteSpace.discrete("ab"), bad)


def test_canonical_action_of_i2():
    S = symmetric_inverse_monoid(2)
    C = canonical_action(S)
    phi = {lab: i for i, lab in enumerate(C.space.labels)}
    p1, p2, pinf = phi["phi[1>1]"], phi["phi[2>2]"], phi["phi[1]"]
    s = S.index("1>2")
    assert C.theta[s][p1] == p2
    assert C.domain(s) == 1 << p1
    t = S.index("1>2,2>1")
    assert C.theta[t][p1] == p2 and C.theta[t][p2] == p1 and C.theta[t][pinf] == pinf
    assert C.theta[S.unit] == (0, 1, 2)


def test_terminal_map_examples():
    A = e3_on_sierpinski(0b10)
    f = terminal_map(A)
    labels = f.target.space.labels
    assert [labels[v] for v in f.table] == ["phi[1]", "phi[e]"]
    S, maps = i2_with_maps()
    f = terminal_map(natural_action(S, maps))
    assert [f.target.space.labels[v] for v in f.table] == ["phi[1>1]", "phi[2>2]"]
    C = canonical_action(S)
    assert terminal_map(C, C).table == tuple(range(C.space.n))


def test_equivariant_maps_examples():
    S, maps = i2_with_maps()
    C = canonical_action(S)
    only = enumerate_equivariant_maps(C, C)
    assert [m.table for m in only] == [tuple(range(C.space.n))]
    A = natural_action(S, maps)
    got = enumerate_equivariant_maps(A, A)
    assert [m.table for m in got] == [(0, 1)]
    # constant maps fail "defined iff" at e1
    e1 = S.index("1>1")
    assert not is_equivariant(A, A, (0, 0))
    assert A.theta[e1][1] is None and A.theta[e1][0] == 0


def test_terminal_map_is_unique_on_random_actions():
    rng = random.Random(5)
    for _ in range(30):
        A = random_action(rng, 7, 5)
        C = canonical_action(A.semigroup)
        maps = enumerate_equivariant_maps(A, C)
        assert len(maps) == 1 and maps[0].table == terminal_map(A, C).table


def test_restriction_to_idempotents_matches_transpose():
    rng = random.Random(6)
    for _ in range(20):
        A = random_action(rng, 6, 4)
        f = terminal_map(A)
        doms = restrict_to_idempotents(A)
        OX = open_semilattice(A.space)
        g = map_to_hom(f.map, f.target.charspace, OX)
        assert tuple(A.space.opens[i] for i in g.table) == doms
