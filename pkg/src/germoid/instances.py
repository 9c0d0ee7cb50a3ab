"""Named example structures and seeded random generators for property tests."""

from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Sequence

from .algebra import InverseSemigroup, Semilattice, semilattice_from_sets, validate_inverse_semigroup
from .bitset import bits, full, to_mask
from .groupoid import (
    EtaleGroupoid,
    disjoint_union,
    make_groupoid,
    transformation_groupoid,
    validate_groupoid_action,
)
from .isaction import SemigroupAction, canonical_action, validate_action
from .topspace import FiniteSpace, PartialMap, pm_domain

# semilattices


def chain(n: int) -> Semilattice:
    """``0 < e1 < ... < en < 1``."""
    labels = ["0"] + [f"e{i}" for i in range(1, n + 1)] + ["1"]
    # index order is the total order, so the meet is the minimum
    mul = [[min(a, b) for b in range(n + 2)] for a in range(n + 2)]
    return validate_inverse_semigroup(mul, labels=labels)


def orth(n: int) -> Semilattice:
    """``0``, pairwise orthogonal ``e1..en``, and ``1``."""
    labels = ["0"] + [f"e{i}" for i in range(1, n + 1)] + ["1"]
    top = n + 1

    def meet(a: int, b: int) -> int:
        if a == top:
            return b
        if b == top:
            return a
        return a if a == b else 0

    mul = [[meet(a, b) for b in range(n + 2)] for a in range(n + 2)]
    return validate_inverse_semigroup(mul, labels=labels)


def e3() -> Semilattice:
    return validate_inverse_semigroup([[0, 0, 0], [0, 1, 1], [0, 1, 2]], labels=["0", "e", "1"])


def trivial_semilattice() -> Semilattice:
    """``{0, 1}``."""
    return validate_inverse_semigroup([[0, 0], [0, 1]], labels=["0", "1"])


# partial injections


def _pi_compose(f: PartialMap, g: PartialMap) -> PartialMap:
    # f∘g
    return tuple(None if v is None else f[v] for v in g)


def _pi_inverse(f: PartialMap) -> PartialMap:
    out: list[int | None] = [None] * len(f)
    for x, y in enumerate(f):
        if y is not None:
            out[y] = x
    return tuple(out)


def _pi_label(f: PartialMap) -> str:
    if all(v is None for v in f):
        return "0"
    if all(v == x for x, v in enumerate(f)):
        return "1"
    return ",".join(f"{x + 1}>{v + 1}" for x, v in enumerate(f) if v is not None)


def _pi_key(f: PartialMap) -> tuple:
    dom = tuple(x for x, v in enumerate(f) if v is not None)
    idem = all(f[x] == x for x in dom)
    return (len(dom), not idem, dom, tuple(f[x] for x in dom))


def partial_injection_semigroup(maps: Sequence[PartialMap], k: int | None = None) -> InverseSemigroup:
    """The inverse semigroup of partial injections of ``k`` points generated by ``maps``, 0 and 1."""
    if k is None:
        k = len(maps[0])
    elems = {tuple([None] * k), tuple(range(k))}
    for f in maps:
        elems.add(tuple(f))
        elems.add(_pi_inverse(tuple(f)))
    frontier = list(elems)
    while frontier:
        new = []
        cur = list(elems)
        for f in frontier:
            for g in cur:
                for h in (_pi_compose(f, g), _pi_compose(g, f)):
                    if h not in elems:
                        elems.add(h)
                        new.append(h)
        frontier = new
    order = sorted(elems, key=_pi_key)
    pos = {f: i for i, f in enumerate(order)}
    mul = [[pos[_pi_compose(f, g)] for g in order] for f in order]
    star = [pos[_pi_inverse(f)] for f in order]
    return validate_inverse_semigroup(mul, star, labels=[_pi_label(f) for f in order])


def symmetric_inverse_monoid(k: int) -> InverseSemigroup:
    """All partial bijections of ``{1..k}``."""
    maps = []
    for r in range(k + 1):
        for dom in combinations(range(k), r):
            for img in permutations(range(k), r):
                f: list[int | None] = [None] * k
                for x, y in zip(dom, img):
                    f[x] = y
                maps.append(tuple(f))
    return partial_injection_semigroup(maps, k)


def natural_action(S: InverseSemigroup, maps: Sequence[PartialMap], X: FiniteSpace | None = None) -> SemigroupAction:
    """Action of a partial-injection semigroup on its underlying points.

    ``maps[s]`` is the partial injection of element ``s``.
    """
    k = len(maps[0])
    if X is None:
        X = FiniteSpace.discrete([str(i + 1) for i in range(k)])
    return validate_action(S, X, maps)


def i2_with_maps() -> tuple[InverseSemigroup, tuple[PartialMap, ...]]:
    S = symmetric_inverse_monoid(2)
    return S, _maps_of(S, 2)


def _maps_of(S: InverseSemigroup, k: int) -> tuple[PartialMap, ...]:
    # recover partial maps from labels produced by _pi_label
    out = []
    for lab in S.labels:
        f: list[int | None] = [None] * k
        if lab == "1":
            f = list(range(k))
        elif lab != "0":
            for part in lab.split(","):
                a, b = part.split(">")
                f[int(a) - 1] = int(b) - 1
        out.append(tuple(f))
    return tuple(out)


def group_with_zero(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> InverseSemigroup:
    """A finite group with a zero adjoined."""
    return validate_inverse_semigroup(table, labels=labels)


# groups


def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def klein_table() -> list[list[int]]:
    return [[a ^ b for b in range(4)] for a in range(4)]


# groupoids


def point_groupoid() -> EtaleGroupoid:
    return make_groupoid(["*"], [("1*", 0, 0)], {(0, 0): 0})


def pair_groupoid(n: int = 2) -> EtaleGroupoid:
    """All pairs ``(y, x)`` viewed as arrows ``x -> y``; discrete topology by default."""
    arrows = []
    pos = {}
    # units first, then the rest in (src, rng) order
    pairs = [(x, x) for x in range(n)] + [(x, y) for x in range(n) for y in range(n) if x != y]
    for x, y in pairs:
        pos[(x, y)] = len(arrows)
        arrows.append((f"{y + 1}<{x + 1}" if x != y else f"1_{x + 1}", x, y))
    comp = {}
    for (x, y), g in pos.items():
        for (w, z), h in pos.items():
            if z == x:
                comp[(g, h)] = pos[(w, y)]
    return make_groupoid([str(i + 1) for i in range(n)], arrows, comp)


def group_groupoid(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> EtaleGroupoid:
    """A discrete group as a one-object groupoid; element 0 must be the identity."""
    n = len(table)
    names = list(labels) if labels is not None else [str(i) for i in range(n)]
    arrows = [(names[g], 0, 0) for g in range(n)]
    comp = {(g, h): table[g][h] for g in range(n) for h in range(n)}
    return make_groupoid(["*"], arrows, comp)


def cyclic_groupoid(n: int) -> EtaleGroupoid:
    return group_groupoid(cyclic_table(n), ["1"] + [f"g{i}" if n > 2 else "g" for i in range(1, n)])


def klein_groupoid() -> EtaleGroupoid:
    return group_groupoid(klein_table(), ["1", "a", "b", "c"])


def space_groupoid(X: FiniteSpace) -> EtaleGroupoid:
    """A space as a groupoid with only identity arrows."""
    arrows = [(f"1_{lab}", x, x) for x, lab in enumerate(X.labels)]
    comp = {(x, x): x for x in range(X.n)}
    return make_groupoid(X.labels, arrows, comp, FiniteSpace(tuple(a[0] for a in arrows), X.nbhd))


def sierpinski_groupoid() -> EtaleGroupoid:
    return space_groupoid(FiniteSpace.sierpinski())


def group_action_groupoid(
    table: Sequence[Sequence[int]], X: FiniteSpace, perms: Sequence[Sequence[int]]
) -> EtaleGroupoid:
    """Transformation groupoid of a discrete group acting by the homeomorphisms ``perms``."""
    G = group_groupoid(table)
    anchor = tuple(0 for _ in range(X.n))
    mu = tuple(tuple(perms[g][x] for x in range(X.n)) for g in range(len(table)))
    return transformation_groupoid(validate_groupoid_action(G, X, anchor, mu))


# random generators


def random_space(rng: random.Random, n: int, t0: bool = False) -> FiniteSpace:
    """A random topology on ``n`` points; a random poset (hence T0) when ``t0``."""
    labels = [f"x{i}" for i in range(n)]
    if t0:
        order = list(range(n))
        rng.shuffle(order)
        rank = {x: i for i, x in enumerate(order)}
        # minimal nbhd of x = x plus some points above it in a random linear extension
        nb = [1 << x for x in range(n)]
        for x in range(n):
            for y in range(n):
                if rank[y] > rank[x] and rng.random() < 0.35:
                    nb[x] |= 1 << y
        # transitive closure
        changed = True
        while changed:
            changed = False
            for x in range(n):
                m = nb[x]
                for y in bits(m):
                    m |= nb[y]
                if m != nb[x]:
                    nb[x] = m
                    changed = True
        return FiniteSpace(tuple(labels), tuple(nb))
    family = [rng.randrange(1 << n) for _ in range(rng.randint(0, n + 1))]
    return FiniteSpace.generated(labels, family)


def random_semilattice(rng: random.Random, max_size: int = 6) -> Semilattice:
    """Intersection-closed family of subsets of a small set, with top and bottom."""
    while True:
        k = rng.randint(1, 4)
        fam = {0, full(k)}
        for _ in range(rng.randint(0, 4)):
            fam.add(rng.randrange(1 << k))
        changed = True
        while changed:
            changed = False
            for a in list(fam):
                for b in list(fam):
                    if a & b not in fam:
                        fam.add(a & b)
                        changed = True
        if len(fam) <= max_size:
            sets = sorted(fam, key=lambda m: (m.bit_count(), m))
            return semilattice_from_sets(sets, [f"s{m:b}" for m in sets])


def random_partial_injection(rng: random.Random, k: int) -> PartialMap:
    dom = [x for x in range(k) if rng.random() < 0.7]
    img = rng.sample(range(k), len(dom))
    f: list[int | None] = [None] * k
    for x, y in zip(dom, img):
        f[x] = y
    return tuple(f)


def random_inverse_semigroup_with_maps(
    rng: random.Random, max_size: int = 6, k: int = 3
) -> tuple[InverseSemigroup, tuple[PartialMap, ...]]:
    """A random sub-inverse-semigroup of ``I_k`` (with 0 and 1) and its partial maps."""
    while True:
        gens = [random_partial_injection(rng, k) for _ in range(rng.randint(0, 2))]
        S = partial_injection_semigroup(gens, k)
        if len(S) <= max_size:
            return S, _maps_of(S, k)


def random_inverse_semigroup(rng: random.Random, max_size: int = 6) -> InverseSemigroup:
    if rng.random() < 0.3:
        return random_semilattice(rng, max_size)
    return random_inverse_semigroup_with_maps(rng, max_size)[0]


def saturated_topology(S: InverseSemigroup, n: int, theta: Sequence[PartialMap], seeds: Sequence[int],
                       labels: Sequence[str]) -> FiniteSpace:
    """Coarsest topology containing ``seeds`` and every domain in which all ``theta[s]`` are partial homeomorphisms."""
    fam = {pm_domain(theta[e]) for e in S.idempotents} | set(seeds)
    frontier = list(fam)
    while frontier:
        new = []
        for A in frontier:
            for s in S:
                B = to_mask(theta[s][x] for x in bits(A) if theta[s][x] is not None)
                if B not in fam:
                    fam.add(B)
                    new.append(B)
        frontier = new
    return FiniteSpace.generated(labels, fam)


def orbit_union(A: SemigroupAction, start: int) -> int:
    """Smallest invariant point set containing ``start``."""
    seen = 1 << start
    todo = [start]
    while todo:
        x = todo.pop()
        for s in A.semigroup:
            y = A.theta[s][x]
            if y is not None and not seen >> y & 1:
                seen |= 1 << y
                todo.append(y)
    return seen


def restrict_action(A: SemigroupAction, Y: int, topology: FiniteSpace | None = None) -> SemigroupAction:
    """Restriction to an invariant subset with the subspace (or a given) topology."""
    sub, pts = A.space.subspace(Y)
    pos = {x: i for i, x in enumerate(pts)}
    theta = [tuple(None if A.theta[s][x] is None else pos[A.theta[s][x]] for x in pts)
             for s in A.semigroup]
    return validate_action(A.semigroup, topology or sub, theta)


def random_action(
    rng: random.Random,
    max_size: int = 6,
    max_points: int = 4,
    semigroup: tuple[InverseSemigroup, Sequence[PartialMap]] | None = None,
) -> SemigroupAction:
    """A random action with ``|S| <= max_size`` and at most ``max_points`` points.

    Points come from the natural action on ``{1,2,3}`` and from invariant
    pieces of the canonical action; the topology is a random refinement of
    the coarsest admissible one.  Pass ``semigroup`` (a partial-injection
    semigroup with its maps) to fix ``S``.
    """
    while True:
        S, maps = semigroup or random_inverse_semigroup_with_maps(rng, max_size)
        pieces: list[tuple[PartialMap, ...]] = []
        # natural points, restricted to a random invariant subset
        nat = natural_action(S, maps)
        Y = 0
        for x in range(3):
            if rng.random() < 0.6:
                Y |= orbit_union(nat, x)
        if Y:
            pieces.append(restrict_action(nat, Y).theta)
        C = canonical_action(S)
        Z = 0
        for x in range(C.space.n):
            if rng.random() < 0.4:
                Z |= orbit_union(C, x)
        if Z:
            pieces.append(restrict_action(C, Z).theta)
        if not pieces:
            continue
        theta = _disjoint_theta(S, pieces)
        n = len(theta[0])
        if n == 0 or n > max_points:
            continue
        seeds = [rng.randrange(1 << n) for _ in range(rng.randint(0, 2))]
        labels = [f"p{i}" for i in range(n)]
        X = saturated_topology(S, n, theta, seeds, labels)
        return validate_action(S, X, theta)


def _disjoint_theta(S: InverseSemigroup, pieces: Sequence[Sequence[PartialMap]]) -> list[PartialMap]:
    theta: list[list[int | None]] = [[] for _ in S]
    offset = 0
    for piece in pieces:
        size = len(piece[0])
        for s in S:
            theta[s].extend(None if v is None else v + offset for v in piece[s])
        offset += size
    return [tuple(t) for t in theta]


def random_sober_groupoid(rng: random.Random, max_arrows: int = 6) -> EtaleGroupoid:
    """A random étale groupoid with finite T0 (hence sober) object space."""
    while True:
        kind = rng.randrange(5)
        if kind == 0:
            G = space_groupoid(random_space(rng, rng.randint(1, 4), t0=True))
        elif kind == 1:
            G = cyclic_groupoid(rng.randint(1, 3)) if rng.random() < 0.8 else klein_groupoid()
        elif kind == 2:
            G = pair_groupoid(rng.randint(1, 2))
        elif kind == 3:
            # Z/2 swapping two copies of a T0 space, plus fixed points
            Y = random_space(rng, rng.randint(1, 2), t0=True)
            fixed = rng.randint(0, 1)
            n = 2 * Y.n + fixed
            nb = list(Y.nbhd) + [m << Y.n for m in Y.nbhd] + [1 << (2 * Y.n + i) for i in range(fixed)]
            X = FiniteSpace(tuple(f"x{i}" for i in range(n)), tuple(nb))
            swap = [(x + Y.n) % (2 * Y.n) if x < 2 * Y.n else x for x in range(n)]
            G = group_action_groupoid(cyclic_table(2), X, [list(range(n)), swap])
        else:
            parts = [rng.choice([point_groupoid, sierpinski_groupoid, lambda: cyclic_groupoid(2)])()
                     for _ in range(2)]
            G = disjoint_union(parts[0], parts[1])
        if G.n_arrows <= max_arrows:
            return G
