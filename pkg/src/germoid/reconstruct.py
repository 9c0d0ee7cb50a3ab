"""Recovering an étale groupoid from inverse semigroups of its bisections."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import InverseSemigroup, Semilattice, idempotent_semilattice, is_homomorphism, validate_inverse_semigroup
from .bitset import bits, to_mask
from .errors import (
    GermoidError,
    HypothesisFailed,
    NotACharacter,
    NotBasis,
    NotInvariant,
    NotSober,
    NotSubsemigroup,
    NotT0,
)
from .germ import GermGroupoid, germ_groupoid, universal_groupoid
from .groupoid import (
    EtaleGroupoid,
    GroupoidIsomorphism,
    bisection_inverse,
    bisection_product,
    check_isomorphism,
    groupoid_isomorphic,
    is_bisection,
    restrict_with_inclusion,
)
from .isaction import SemigroupAction, is_equivariant, validate_action
from .topspace import Character, ContinuousMap, FiniteSpace, is_filter, is_sober


@dataclass(frozen=True)
class BisectionFamily:
    """An inverse subsemigroup of ``Bisec(G)``; element ``i`` is ``masks[i]``."""

    groupoid: EtaleGroupoid
    masks: tuple[int, ...]
    semigroup: InverseSemigroup

    def arrow_with_source(self, s: int, x: int) -> int | None:
        G = self.groupoid
        return next((g for g in bits(self.masks[s]) if G.src[g] == x), None)


def bisection_family(G: EtaleGroupoid, masks: Iterable[int]) -> BisectionFamily:
    """Validate ``masks`` as an inverse subsemigroup of ``Bisec(G)`` containing ∅ and the units."""
    ms = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    for m in ms:
        if not is_bisection(G, m):
            raise NotSubsemigroup(m, message="not a bisection")
    pos = {m: i for i, m in enumerate(ms)}
    try:
        mul = [[pos[bisection_product(G, a, b)] for b in ms] for a in ms]
        star = [pos[bisection_inverse(G, a)] for a in ms]
    except KeyError as exc:
        raise NotSubsemigroup(exc.args[0], message="not closed under product or inverse") from None
    if 0 not in pos or G.units_mask not in pos:
        raise NotSubsemigroup(message="must contain the empty bisection and the units")
    labels = [G.arrow_space.label_set(m) for m in ms]
    S = validate_inverse_semigroup(mul, star, pos[0], pos[G.units_mask], labels)
    B = G.bisections
    try:
        is_homomorphism(tuple(B.index(m) for m in ms), S, B.semigroup)
    except GermoidError as exc:
        raise NotSubsemigroup(message=f"inclusion is not a homomorphism: {exc}") from None
    return BisectionFamily(G, tuple(ms), S)


def bisection_closure(G: EtaleGroupoid, gens: Iterable[int]) -> BisectionFamily:
    """Smallest inverse subsemigroup containing ``gens``, ∅ and the units."""
    elems = {0, G.units_mask}
    for g in gens:
        elems.add(g)
        elems.add(bisection_inverse(G, g))
    frontier = list(elems)
    while frontier:
        new = []
        cur = list(elems)
        for a in frontier:
            for b in cur:
                for c in (bisection_product(G, a, b), bisection_product(G, b, a)):
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
        frontier = new
    return bisection_family(G, elems)


def _is_basis(X: FiniteSpace, family: Iterable[int]) -> bool:
    fam = set(family)
    return all(X.is_open(m) for m in fam) and all(X.nbhd[x] in fam for x in range(X.n))


@dataclass(frozen=True)
class CoveringReport:
    cover: bool
    basis_condition: bool
    units_basis: bool
    arrows_basis: bool
    uncovered: int  # arrow mask
    violation: tuple[int, int, int] | None  # (s, t, arrow) breaking the basis condition

    @property
    def ok(self) -> bool:
        return self.cover and self.basis_condition


def check_covering_basis(G: EtaleGroupoid, S: BisectionFamily | Iterable[int]) -> CoveringReport:
    if not isinstance(S, BisectionFamily):
        S = bisection_family(G, S)
    union = 0
    for m in S.masks:
        union |= m
    uncovered = ((1 << G.n_arrows) - 1) & ~union
    violation = None
    n = len(S.masks)
    for i in range(n):
        for j in range(i, n):
            meet = S.masks[i] & S.masks[j]
            for g in bits(meet):
                if not any(r >> g & 1 and r & ~meet == 0 for r in S.masks):
                    violation = (i, j, g)
                    break
            if violation:
                break
        if violation:
            break
    idem = [S.masks[e] for e in S.semigroup.idempotents]
    units_basis = _is_basis(G.object_space, [G.src_image(m) for m in idem])
    arrows_basis = _is_basis(G.arrow_space, S.masks)
    return CoveringReport(uncovered == 0, violation is None, units_basis, arrows_basis, uncovered, violation)


def object_action(S: BisectionFamily) -> SemigroupAction:
    """``S`` acting on ``G⁰``: ``s·x = r(g)`` for the arrow ``g ∈ s`` with source ``x``."""
    G = S.groupoid
    theta = []
    for s in S.semigroup:
        row = []
        for x in range(G.n_objects):
            g = S.arrow_with_source(s, x)
            row.append(None if g is None else G.rng[g])
        theta.append(tuple(row))
    return validate_action(S.semigroup, G.object_space, theta)


@dataclass(frozen=True)
class GermReconstruction:
    germs: GermGroupoid
    isomorphism: GroupoidIsomorphism  # germ groupoid -> G


def germ_reconstruction(G: EtaleGroupoid, S: BisectionFamily | Iterable[int]) -> GermReconstruction:
    """Germ groupoid of the ``S``-action on ``G⁰``, with an isomorphism onto ``G``."""
    if not isinstance(S, BisectionFamily):
        S = bisection_family(G, S)
    report = check_covering_basis(G, S)
    if not report.cover:
        raise HypothesisFailed("cover", report.uncovered)
    if not report.basis_condition:
        raise HypothesisFailed("basis_condition", *report.violation)
    germs = germ_groupoid(object_action(S))
    H = germs.groupoid
    arr = tuple(S.arrow_with_source(*germs.representative(a)) for a in range(H.n_arrows))
    obj = tuple(range(G.n_objects))
    if not check_isomorphism(H, G, obj, arr):
        raise HypothesisFailed("isomorphism", message="germ map is not an isomorphism")
    return GermReconstruction(germs, GroupoidIsomorphism(H, G, obj, arr))


@dataclass(frozen=True)
class UnitEmbedding:
    delta: ContinuousMap  # G⁰ -> characters of E(S)
    universal: GermGroupoid
    restriction: EtaleGroupoid
    image: int  # object mask in G(S)
    isomorphism: GroupoidIsomorphism  # restriction -> G


def _delta(S: BisectionFamily, U: GermGroupoid) -> tuple[int, ...]:
    G = S.groupoid
    CS = U.action.charspace
    idem = S.semigroup.idempotents
    return tuple(
        CS.index(i for i, e in enumerate(idem) if G.src_image(S.masks[e]) >> x & 1)
        for x in range(G.n_objects)
    )


def _restriction_iso(S: BisectionFamily, U: GermGroupoid, delta: Sequence[int]):
    G = S.groupoid
    image = to_mask(delta)
    R, objs, arrows = restrict_with_inclusion(U.groupoid, image)
    back = {p: x for x, p in enumerate(delta)}
    obj = tuple(back[p] for p in objs)
    arr = []
    for a in arrows:
        s, phi = U.representative(a)
        arr.append(S.arrow_with_source(s, back[phi]))
    arr = tuple(arr)
    if not check_isomorphism(R, G, obj, arr):
        raise HypothesisFailed("isomorphism", message="restriction is not isomorphic via δ")
    return R, image, GroupoidIsomorphism(R, G, obj, arr)


def embed_units(G: EtaleGroupoid, S: BisectionFamily | Iterable[int]) -> UnitEmbedding:
    """``δ(x)(e) = [x ∈ e]`` into the characters of ``E(S)``, and the restriction of ``G(S)`` to its image."""
    if not isinstance(S, BisectionFamily):
        S = bisection_family(G, S)
    w = G.object_space.t0_witness()
    if w is not None:
        raise NotT0(*w)
    report = check_covering_basis(G, S)
    if not report.arrows_basis:
        raise NotBasis(message="S is not a basis of the arrow space")
    U = universal_groupoid(S.semigroup)
    delta = _delta(S, U)
    dmap = ContinuousMap(G.object_space, U.action.space, delta)
    if not dmap.is_embedding():
        raise NotBasis(message="δ is not an embedding")
    if not is_equivariant(object_action(S), U.action, delta):
        raise NotInvariant(message="δ is not equivariant")
    R, image, iso = _restriction_iso(S, U, delta)
    return UnitEmbedding(dmap, U, R, image, iso)


@dataclass(frozen=True)
class IrreducibleCharacters:
    semilattice: Semilattice
    elements: tuple[int, ...]  # irreducible idempotents, as indices of the semilattice
    characters: tuple[Character, ...]


def irreducible_idempotents(S: InverseSemigroup) -> IrreducibleCharacters:
    """Irreducible ``e`` (``e ≠ 1``, ``e = ab`` forces ``a = e`` or ``b = e``) and ``φ_e(f) = [f ≰ e]``."""
    E, _ = idempotent_semilattice(S)
    elems = []
    chars = []
    for e in E:
        if e == E.unit:
            continue
        if any(E.mul[a][b] == e and a != e and b != e for a in E for b in E):
            continue
        members = frozenset(f for f in E if E.mul[f][e] != f)
        if not is_filter(E, members):
            raise NotACharacter(e)
        elems.append(e)
        chars.append(Character(members, E))
    return IrreducibleCharacters(E, tuple(elems), tuple(chars))


@dataclass(frozen=True)
class Reconstruction:
    universal: GermGroupoid
    points: int  # irreducible characters, as a mask of G(Bisec G)'s objects
    groupoid: EtaleGroupoid  # restriction to those points
    isomorphism: GroupoidIsomorphism  # from brute-force search
    natural: GroupoidIsomorphism  # the one induced by δ
    delta: tuple[int, ...]


def reconstruct_from_bisections(G: EtaleGroupoid) -> Reconstruction:
    ok, bad = is_sober(G.object_space)
    if not ok:
        raise NotSober(bad)
    B = G.bisections
    S = BisectionFamily(G, B.masks, B.semigroup)
    U = universal_groupoid(B.semigroup)
    CS = U.action.charspace
    irr = irreducible_idempotents(B.semigroup)
    points = to_mask(CS.index(c.filter) for c in irr.characters)
    A = U.action
    for x in bits(points):
        for s in A.semigroup:
            y = A.theta[s][x]
            if y is not None and not points >> y & 1:
                raise NotInvariant(s, x, message="irreducible characters are not invariant")
    delta = _delta(S, U)
    if to_mask(delta) != points:
        raise HypothesisFailed("delta_range", message="irreducible characters differ from the range of δ")
    R, _, natural = _restriction_iso(S, U, delta)
    iso = groupoid_isomorphic(R, G)
    if iso is None:
        raise HypothesisFailed("isomorphism")
    return Reconstruction(U, points, R, iso, natural, delta)

