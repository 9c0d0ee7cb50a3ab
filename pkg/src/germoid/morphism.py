"""Algebraic morphisms of étale groupoids: actions of ``G`` on ``H¹`` commuting
with right translation.

Covers decomposition into an object action plus a functor, composition
through balanced products, the induced map on bisections, and the
adjunction between inverse semigroups and étale groupoids.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from scipy.cluster.hierarchy import DisjointSet

from .algebra import InverseSemigroup, SemigroupHom, is_homomorphism
from .bitset import bits, to_mask
from .errors import (
    DoesNotCommute,
    NotContinuous,
    NotFunctor,
    NotPartialHomeomorphism,
    NotT0,
    SearchSpaceTooLarge,
    WellDefinednessViolation,
)
from .germ import GermGroupoid, canonical_embedding, s_action_to_g_action, universal_groupoid
from .groupoid import (
    EtaleGroupoid,
    GroupoidAction,
    GroupoidIsomorphism,
    RightAction,
    _transformation,
    check_isomorphism,
    left_translation,
    right_translation,
    validate_groupoid_action,
)
from .isaction import SemigroupAction, validate_action
from .topspace import (
    ContinuousMap,
    FiniteSpace,
    PartialMap,
    enumerate_continuous_maps,
    pm_domain,
    validate_partial_homeomorphism,
)

MAX_SEARCH = 10**6


@dataclass(frozen=True)
class AlgebraicMorphism:
    source: EtaleGroupoid
    target: EtaleGroupoid
    action: GroupoidAction  # source acting on target.arrow_space

    @property
    def anchor(self) -> tuple[int, ...]:
        return self.action.anchor

    def act(self, g: int, h: int) -> int:
        return self.action.act(g, h)


def validate_morphism(
    G: EtaleGroupoid, H: EtaleGroupoid, anchor: Sequence[int], mu
) -> AlgebraicMorphism:
    """Validate an action of ``G`` on ``H¹`` and its commutation with right translations."""
    A = validate_groupoid_action(G, H.arrow_space, anchor, mu)
    _check_commutes(G, H, A)
    return AlgebraicMorphism(G, H, A)


def _check_commutes(G: EtaleGroupoid, H: EtaleGroupoid, A: GroupoidAction) -> None:
    for h in range(H.n_arrows):
        for k in range(H.n_arrows):
            hk = H.comp[h][k]
            if hk < 0:
                continue
            if A.anchor[hk] != A.anchor[h]:
                raise DoesNotCommute(-1, h, k, message="anchor not invariant under right translation")
            for g in range(G.n_arrows):
                gh = A.mu[g][h]
                if gh < 0:
                    continue
                if H.src[gh] != H.src[h] or A.mu[g][hk] != H.comp[gh][k]:
                    raise DoesNotCommute(g, h, k)


def identity_morphism(G: EtaleGroupoid) -> AlgebraicMorphism:
    return AlgebraicMorphism(G, G, left_translation(G))


def morphism_from_group_hom(G: EtaleGroupoid, H: EtaleGroupoid, f: Sequence[int]) -> AlgebraicMorphism:
    """``g·h = f(g)h`` for one-object groupoids."""
    if G.n_objects != 1 or H.n_objects != 1:
        raise NotFunctor(message="group homomorphisms need one-object groupoids")
    if any(f[G.comp[a][b]] != H.comp[f[a]][f[b]] for a in range(G.n_arrows) for b in range(G.n_arrows)):
        raise NotFunctor(message="not a group homomorphism")
    mu = [[H.comp[f[g]][h] for h in range(H.n_arrows)] for g in range(G.n_arrows)]
    return validate_morphism(G, H, [0] * H.n_arrows, mu)


def morphism_from_continuous_map(G: EtaleGroupoid, H: EtaleGroupoid, f: Sequence[int]) -> AlgebraicMorphism:
    """For spaces: ``f: H⁰ -> G⁰`` becomes ``1_{f(y)}·1_y = 1_y``."""
    if not (G.is_space() and H.is_space()):
        raise NotFunctor(message="continuous-map morphisms need groupoids that are spaces")
    obj = {u: y for y, u in enumerate(H.unit)}
    anchor = [f[obj[h]] for h in range(H.n_arrows)]
    mu = [[h if G.src[g] == anchor[h] else -1 for h in range(H.n_arrows)] for g in range(G.n_arrows)]
    return validate_morphism(G, H, anchor, mu)


# decomposition


@dataclass(frozen=True)
class MorphismDecomposition:
    """Object action ``ρ`` of ``G`` on ``H⁰`` and the functor ``μ: G⋉H⁰ -> H``."""

    source: EtaleGroupoid
    target: EtaleGroupoid
    rho: GroupoidAction
    # functor[g][y] = μ(g, y) ∈ H¹, or -1 where (g, y) is not composable
    functor: tuple[tuple[int, ...], ...]


def decompose(m: AlgebraicMorphism) -> MorphismDecomposition:
    G, H, A = m.source, m.target, m.action
    obj_anchor = tuple(A.anchor[H.unit[y]] for y in range(H.n_objects))
    functor = tuple(
        tuple(A.mu[g][H.unit[y]] for y in range(H.n_objects)) for g in range(G.n_arrows)
    )
    rho_mu = tuple(tuple(-1 if k < 0 else H.rng[k] for k in row) for row in functor)
    rho = validate_groupoid_action(G, H.object_space, obj_anchor, rho_mu)
    d = MorphismDecomposition(G, H, rho, functor)
    _check_functor(d)
    return d


def _check_functor(d: MorphismDecomposition) -> None:
    G, H, rho, F = d.source, d.target, d.rho, d.functor
    for g in range(G.n_arrows):
        for y in range(H.n_objects):
            k = F[g][y]
            if (k < 0) != (rho.mu[g][y] < 0):
                raise NotFunctor(g, y, message="functor domain differs from the action domain")
            if k < 0:
                continue
            if H.src[k] != y or H.rng[k] != rho.mu[g][y]:
                raise NotFunctor(g, y, message="functor does not respect objects")
    for y in range(H.n_objects):
        if F[G.unit[rho.anchor[y]]][y] != H.unit[y]:
            raise NotFunctor(y, message="functor does not preserve units")
    for g1 in range(G.n_arrows):
        for g2 in range(G.n_arrows):
            g12 = G.comp[g1][g2]
            if g12 < 0:
                continue
            for y in range(H.n_objects):
                k2 = F[g2][y]
                if k2 < 0:
                    continue
                k1 = F[g1][H.rng[k2]]
                if F[g12][y] != H.comp[k1][k2]:
                    raise NotFunctor(g1, g2, y, message="functor does not preserve composition")


def recompose(d: MorphismDecomposition) -> AlgebraicMorphism:
    """``g·h = μ(g, r(h))·h`` with anchor ``h ↦ ρ(r(h))``."""
    G, H, rho, F = d.source, d.target, d.rho, d.functor
    anchor = [rho.anchor[H.rng[h]] for h in range(H.n_arrows)]
    mu = []
    for g in range(G.n_arrows):
        row = []
        for h in range(H.n_arrows):
            k = F[g][H.rng[h]]
            row.append(-1 if k < 0 else H.comp[k][h])
        mu.append(row)
    return validate_morphism(G, H, anchor, mu)


def enumerate_morphisms(G: EtaleGroupoid, H: EtaleGroupoid, max_search: int = MAX_SEARCH) -> list[AlgebraicMorphism]:
    """Every algebraic morphism ``G ⋌ H``.

    Searches over continuous object anchors ``H⁰ -> G⁰`` and functors
    ``G⋉H⁰ -> H`` compatible with them; continuity is checked on the result.
    """
    out = []
    for rho0 in enumerate_continuous_maps(H.object_space, G.object_space):
        out.extend(_morphisms_over(G, H, rho0.table, max_search))
    return out


def _morphisms_over(G: EtaleGroupoid, H: EtaleGroupoid, rho0: Sequence[int], max_search: int):
    pairs = [(g, y) for g in range(G.n_arrows) for y in range(H.n_objects) if G.src[g] == rho0[y]]
    cands = {}
    size = 1
    for g, y in pairs:
        if g == G.unit[G.src[g]]:
            cands[(g, y)] = [H.unit[y]]
        else:
            cands[(g, y)] = [k for k in range(H.n_arrows) if H.src[k] == y and rho0[H.rng[k]] == G.rng[g]]
        size *= max(1, len(cands[(g, y)]))
    if size > max_search:
        raise SearchSpaceTooLarge(size)
    found = []

    def ok(F: dict) -> bool:
        for (g2, y), k2 in F.items():
            y2 = H.rng[k2]
            for g1 in range(G.n_arrows):
                g12 = G.comp[g1][g2]
                if g12 < 0:
                    continue
                k1 = F.get((g1, y2))
                k12 = F.get((g12, y))
                if k1 is not None and k12 is not None and k12 != H.comp[k1][k2]:
                    return False
        return True

    def search(i: int, F: dict) -> None:
        if i == len(pairs):
            found.append(dict(F))
            return
        key = pairs[i]
        for k in cands[key]:
            F[key] = k
            if ok(F):
                search(i + 1, F)
            del F[key]

    search(0, {})
    out = []
    rho_anchor = tuple(rho0)
    for F in found:
        table = tuple(tuple(F.get((g, y), -1) for y in range(H.n_objects)) for g in range(G.n_arrows))
        rho_mu = tuple(tuple(-1 if k < 0 else H.rng[k] for k in row) for row in table)
        try:
            rho = validate_groupoid_action(G, H.object_space, rho_anchor, rho_mu)
            out.append(recompose(MorphismDecomposition(G, H, rho, table)))
        except NotContinuous:
            continue
    return out


def is_morita_morphism(m: AlgebraicMorphism) -> bool:
    """Whether the induced object map ``H⁰ -> G⁰`` is a homeomorphism."""
    d = decompose(m)
    return ContinuousMap(m.target.object_space, m.source.object_space, d.rho.anchor).is_homeomorphism()


# balanced products


@dataclass(frozen=True)
class BalancedProduct:
    """``Y ×_G X``: pairs with matching anchors modulo ``(y·g, x) ~ (y, g·x)``."""

    right: RightAction
    left: GroupoidAction
    pairs: tuple[tuple[int, int], ...]
    classes: tuple[tuple[int, ...], ...]  # indices into pairs
    class_of: tuple[int, ...]
    space: FiniteSpace

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], int]:
        return {p: i for i, p in enumerate(self.pairs)}

    def cls(self, y: int, x: int) -> int:
        return self.class_of[self._pair_index[(y, x)]]


def balanced_product(Y: RightAction, X: GroupoidAction) -> BalancedProduct:
    G = X.groupoid
    pairs = tuple((y, x) for y in range(Y.space.n) for x in range(X.space.n) if Y.anchor[y] == X.anchor[x])
    pos = {p: i for i, p in enumerate(pairs)}
    ds = DisjointSet(range(len(pairs)))
    for y in range(Y.space.n):
        for g in range(G.n_arrows):
            yg = Y.mu[y][g]
            if yg < 0:
                continue
            # (y·g, x') ~ (y, g·x') for x' with anchor(x') = src g
            for x2 in range(X.space.n):
                gx2 = X.mu[g][x2]
                if gx2 >= 0:
                    ds.merge(pos[(yg, x2)], pos[(y, gx2)])
    classes = tuple(sorted(tuple(sorted(c)) for c in ds.subsets()))
    owner = {i: c for c, cl in enumerate(classes) for i in cl}
    class_of = tuple(owner[i] for i in range(len(pairs)))

    # fibred product nbhds, then the finest quotient topology
    fib = []
    for y, x in pairs:
        m = 0
        for y2 in bits(Y.space.nbhd[y]):
            for x2 in bits(X.space.nbhd[x]):
                j = pos.get((y2, x2))
                if j is not None:
                    m |= 1 << j
        fib.append(m)
    members = [to_mask(c) for c in classes]
    nb = []
    for c in range(len(classes)):
        up = members[c]
        done = 0
        while up & ~done:
            new = up & ~done
            done |= new
            for i in bits(new):
                up |= fib[i]
                up |= members[class_of[i]]
        nb.append(to_mask({class_of[i] for i in bits(up)}))
    labels = tuple(
        "[" + ",".join(f"({Y.space.labels[pairs[i][0]]},{X.space.labels[pairs[i][1]]})" for i in cl[:1]) + "]"
        for cl in classes
    )
    space = FiniteSpace(labels, tuple(nb))
    return BalancedProduct(Y, X, pairs, classes, class_of, space)


def unit_law_map(BP: BalancedProduct) -> ContinuousMap:
    """``[h, x] ↦ h·x`` from ``G¹ ×_G X`` to ``X``; a homeomorphism."""
    X = BP.left
    table = []
    for cl in BP.classes:
        vals = {X.mu[BP.pairs[i][0]][BP.pairs[i][1]] for i in cl}
        if len(vals) != 1:
            raise WellDefinednessViolation(*BP.pairs[cl[0]], message="unit law map not well defined")
        table.append(vals.pop())
    return ContinuousMap(BP.space, X.space, tuple(table))


def induced_action_functor(m: AlgebraicMorphism, B: GroupoidAction) -> GroupoidAction:
    """Pull an ``H``-action back to a ``G``-action on the same space.

    ``G`` acts on the first factor of ``H¹ ×_H X``, which is identified with
    ``X`` by ``[h, x] ↦ h·x``.
    """
    G, H = m.source, m.target
    BP = balanced_product(right_translation(H), B)
    psi = unit_law_map(BP)
    if not psi.is_homeomorphism():
        raise WellDefinednessViolation(message="unit law map is not a homeomorphism")
    back = {v: c for c, v in enumerate(psi.table)}
    X = B.space
    anchor = []
    mu = [[-1] * X.n for _ in range(G.n_arrows)]
    for x in range(X.n):
        cl = BP.classes[back[x]]
        anchors = {m.anchor[BP.pairs[i][0]] for i in cl}
        if len(anchors) != 1:
            raise WellDefinednessViolation(x, message="anchor not constant on a class")
        anchor.append(anchors.pop())
        for g in range(G.n_arrows):
            if G.src[g] != anchor[x]:
                continue
            results = {BP.cls(m.act(g, BP.pairs[i][0]), BP.pairs[i][1]) for i in cl}
            if len(results) != 1:
                raise WellDefinednessViolation(g, x, message="action not constant on a class")
            mu[g][x] = psi.table[results.pop()]
    return validate_groupoid_action(G, X, anchor, mu)


def compose_morphisms(m1: AlgebraicMorphism, m2: AlgebraicMorphism) -> AlgebraicMorphism:
    """``G1 ⋌ G2`` then ``G2 ⋌ G3``: pull the ``G2``-action on ``G3¹`` back along ``m1``."""
    if m1.target != m2.source:
        raise NotFunctor(message="morphisms are not composable")
    A = induced_action_functor(m1, m2.action)
    return validate_morphism(m1.source, m2.target, A.anchor, A.mu)


# bisections


def bisec_pushforward(m: AlgebraicMorphism) -> SemigroupHom:
    """``f_*(t) = {g·1_x : g ∈ t, anchor(1_x) = s(g)}``."""
    G, H = m.source, m.target
    BG, BH = G.bisections, H.bisections
    table = []
    for t in BG.masks:
        img = 0
        for g in bits(t):
            for x in range(H.n_objects):
                k = m.action.mu[g][H.unit[x]]
                if k >= 0:
                    img |= 1 << k
        table.append(BH.index(img))
    return is_homomorphism(tuple(table), BG.semigroup, BH.semigroup)


@dataclass(frozen=True)
class EquivariantPartialHomeo:
    """A partial homeomorphism of ``G¹`` commuting with right translation."""

    groupoid: EtaleGroupoid
    table: PartialMap

    @property
    def domain(self) -> int:
        return pm_domain(self.table)


def validate_equivariant_homeo(G: EtaleGroupoid, table: Sequence[int | None]) -> EquivariantPartialHomeo:
    t = tuple(table)
    validate_partial_homeomorphism(G.arrow_space, t)
    for h in range(G.n_arrows):
        for k in range(G.n_arrows):
            hk = G.comp[h][k]
            if hk < 0:
                continue
            th, thk = t[h], t[hk]
            if (th is None) != (thk is None):
                raise NotPartialHomeomorphism(h, k, message="domain not invariant")
            if th is not None and (G.comp[th][k] if G.src[th] == G.rng[k] else -1) != thk:
                raise NotPartialHomeomorphism(h, k, message="not equivariant")
    return EquivariantPartialHomeo(G, t)


def bisection_to_equiv_homeo(G: EtaleGroupoid, T: int) -> EquivariantPartialHomeo:
    """``t(h) = g·h`` for the unique ``g ∈ T`` with ``s(g) = r(h)``."""
    by_src = {G.src[g]: g for g in bits(T)}
    table = []
    for h in range(G.n_arrows):
        g = by_src.get(G.rng[h])
        table.append(None if g is None else G.comp[g][h])
    return validate_equivariant_homeo(G, table)


def equiv_homeo_to_bisection(t: EquivariantPartialHomeo) -> int:
    """``T = {t(1_x) : 1_x ∈ dom t}``."""
    G = t.groupoid
    return to_mask(t.table[u] for u in G.unit if t.table[u] is not None)


# adjunction


def _semigroup_on_arrows(h: SemigroupHom, G: EtaleGroupoid) -> SemigroupAction:
    # S acts on G¹ through the equivariant partial homeomorphisms of h(s)
    B = G.bisections
    theta = [bisection_to_equiv_homeo(G, B.masks[h.table[s]]).table for s in h.source]
    return validate_action(h.source, G.arrow_space, theta)


def adjunction_backward(h: SemigroupHom, G: EtaleGroupoid, U: GermGroupoid | None = None) -> AlgebraicMorphism:
    """A homomorphism ``S -> Bisec(G)`` as a morphism ``G(S) ⋌ G``."""
    if U is None:
        U = universal_groupoid(h.source)
    A = s_action_to_g_action(_semigroup_on_arrows(h, G), U)
    return validate_morphism(U.groupoid, G, A.anchor, A.mu)


def adjunction_forward(m: AlgebraicMorphism, U: GermGroupoid) -> SemigroupHom:
    """A morphism ``G(S) ⋌ G`` as a homomorphism ``S -> Bisec(G)``."""
    S, GS, G = U.action.semigroup, U.groupoid, m.target
    B = G.bisections
    table = []
    for s in S:
        by_src = {GS.src[g]: g for g in bits(U.basis[s])}
        t = []
        for k in range(G.n_arrows):
            g = by_src.get(m.anchor[k])
            t.append(None if g is None else m.act(g, k))
        T = equiv_homeo_to_bisection(validate_equivariant_homeo(G, t))
        table.append(B.index(T))
    return is_homomorphism(tuple(table), S, B.semigroup)


def unit_of_adjunction(S: InverseSemigroup, U: GermGroupoid | None = None) -> SemigroupHom:
    """``S -> Bisec(G(S))``, ``s ↦ Θ_s``."""
    return canonical_embedding(S, U)


@dataclass(frozen=True)
class Counit:
    morphism: AlgebraicMorphism
    universal: GermGroupoid
    delta: tuple[int, ...]  # G⁰ -> characters of E(Bisec G)
    isomorphism: GroupoidIsomorphism  # G(Bisec G) ⋉ G⁰ -> G


def counit_of_adjunction(G: EtaleGroupoid) -> AlgebraicMorphism:
    return counit_data(G).morphism


def counit_data(G: EtaleGroupoid) -> Counit:
    """The counit ``G(Bisec G) ⋌ G``, built from ``δ`` and the functor
    ``([s, δx], x) ↦`` the arrow of ``s`` with source ``x``."""
    w = G.object_space.t0_witness()
    if w is not None:
        raise NotT0(*w)
    B = G.bisections
    U = universal_groupoid(B.semigroup)
    GB = U.groupoid
    CS = U.action.charspace
    E_embed = B.semigroup.idempotents
    delta = tuple(
        CS.index(i for i, e in enumerate(E_embed) if G.src_image(B.masks[e]) >> x & 1)
        for x in range(G.n_objects)
    )
    functor = []
    for gamma in range(GB.n_arrows):
        row = []
        for x in range(G.n_objects):
            if GB.src[gamma] != delta[x]:
                row.append(-1)
                continue
            vals = {B.arrow_with_source(s, x) for s, _ in U.members[gamma]}
            if len(vals) != 1 or None in vals:
                raise WellDefinednessViolation(gamma, x, message="counit functor not well defined")
            row.append(vals.pop())
        functor.append(tuple(row))
    functor = tuple(functor)
    rho_mu = tuple(tuple(-1 if k < 0 else G.rng[k] for k in row) for row in functor)
    rho = validate_groupoid_action(GB, G.object_space, delta, rho_mu)
    d = MorphismDecomposition(GB, G, rho, functor)
    _check_functor(d)
    m = recompose(d)
    TG, pairs = _transformation(rho)
    arr = tuple(functor[g][x] for g, x in pairs)
    if not check_isomorphism(TG, G, tuple(range(G.n_objects)), arr):
        raise WellDefinednessViolation(message="transformation groupoid is not isomorphic to G")
    return Counit(m, U, delta, GroupoidIsomorphism(TG, G, tuple(range(G.n_objects)), arr))


def induced_morphism(f: SemigroupHom, US: GermGroupoid | None = None, UT: GermGroupoid | None = None) -> AlgebraicMorphism:
    """``G(S) ⋌ G(T)`` from ``f: S -> T``: ``[s, ρ(t·φ)]·[t, φ] = [f(s)t, φ]``."""
    S, T = f.source, f.target
    US = US or universal_groupoid(S)
    UT = UT or universal_groupoid(T)
    GS, GT = US.groupoid, UT.groupoid
    CSS, CST = US.action.charspace, UT.action.charspace
    ES, ET = S.idempotents, T.idempotents
    posT = {e: i for i, e in enumerate(ET)}
    # ρ(φ) = φ ∘ f on idempotents
    rho = tuple(
        CSS.index(i for i, e in enumerate(ES) if posT[f.table[e]] in CST.characters[p].filter)
        for p in range(len(CST))
    )
    anchor = [rho[GT.rng[k]] for k in range(GT.n_arrows)]
    mu = [[-1] * GT.n_arrows for _ in range(GS.n_arrows)]
    for gamma in range(GS.n_arrows):
        for k in range(GT.n_arrows):
            if GS.src[gamma] != anchor[k]:
                continue
            vals = set()
            for s, _ in US.members[gamma]:
                for t, phi in UT.members[k]:
                    vals.add(UT.germ(T.mul[f.table[s]][t], phi))
            if len(vals) != 1:
                raise WellDefinednessViolation(gamma, k, message="induced action not well defined")
            mu[gamma][k] = vals.pop()
    return validate_morphism(GS, GT, anchor, mu)

