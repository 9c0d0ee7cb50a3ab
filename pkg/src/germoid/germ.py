"""Groupoids of germs of inverse semigroup actions, and the passage between
actions of ``S`` and actions of its universal groupoid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from scipy.cluster.hierarchy import DisjointSet

from .algebra import InverseSemigroup, SemigroupHom, is_homomorphism
from .bitset import bits, to_mask
from .errors import NotInjective, WellDefinednessViolation
from .groupoid import EtaleGroupoid, GroupoidAction, make_groupoid, validate_groupoid_action
from .isaction import SemigroupAction, canonical_action, terminal_map, validate_action
from .topspace import FiniteSpace, pm_domain

Pair = tuple[int, int]


@dataclass(frozen=True)
class GermGroupoid:
    action: SemigroupAction
    groupoid: EtaleGroupoid
    # (s, x) -> arrow index, for every x in the domain of s
    germ_of: dict[Pair, int]
    # arrow -> all representative pairs, sorted; members[a][0] is canonical
    members: tuple[tuple[Pair, ...], ...]
    # s -> Θ_s as an arrow mask
    basis: tuple[int, ...]

    def germ(self, s: int, x: int) -> int:
        return self.germ_of[(s, x)]

    def representative(self, a: int) -> Pair:
        return self.members[a][0]

    def theta(self, s: int, U: int | None = None) -> int:
        """``Θ(s, U)``: germs of ``s`` at points of ``U`` (default: its whole domain)."""
        dom = self.action.domain(s)
        if U is not None:
            dom &= U
        return to_mask(self.germ_of[(s, x)] for x in bits(dom))

    def provenance(self) -> list[dict]:
        S, X = self.action.semigroup, self.action.space
        return [
            {"arrow": self.groupoid.arrow_labels[a],
             "pairs": [[S.labels[s], X.labels[x]] for s, x in ms]}
            for a, ms in enumerate(self.members)
        ]


def germ_equivalent(A: SemigroupAction, s: int, t: int, x: int) -> bool:
    """``(s,x) ~ (t,x)``: some idempotent ``e`` with ``x ∈ X_e`` has ``se = te``."""
    S = A.semigroup
    return any(S.mul[s][e] == S.mul[t][e] and A.theta[e][x] is not None for e in S.idempotents)


def germ_groupoid(A: SemigroupAction) -> GermGroupoid:
    S, X = A.semigroup, A.space
    pairs = [(s, x) for s in S for x in range(X.n) if A.theta[s][x] is not None]
    ds = DisjointSet(pairs)
    by_point: dict[int, list[int]] = {}
    for s, x in pairs:
        by_point.setdefault(x, []).append(s)
    for x, elems in by_point.items():
        for i, s in enumerate(elems):
            for t in elems[i + 1:]:
                if not ds.connected((s, x), (t, x)) and germ_equivalent(A, s, t, x):
                    ds.merge((s, x), (t, x))
    classes = sorted(tuple(sorted(c)) for c in ds.subsets())
    germ_of = {p: a for a, c in enumerate(classes) for p in c}

    arrows = []
    for c in classes:
        s, x = c[0]
        arrows.append((f"[{S.labels[s]},{X.labels[x]}]", x, A.theta[s][x]))
    n1 = len(classes)

    comp: dict[Pair, int] = {}
    for a, ca in enumerate(classes):
        for b, cb in enumerate(classes):
            if arrows[a][1] != arrows[b][2]:
                continue
            results = {germ_of[(S.mul[s][t], y)] for s, _ in ca for t, y in cb}
            if len(results) != 1:
                (s, phi), (t, psi) = ca[0], cb[0]
                raise WellDefinednessViolation(s, t, phi, psi, message="germ product not well defined")
            comp[(a, b)] = results.pop()
    inv = []
    for c in classes:
        results = {germ_of[(S.star[s], A.theta[s][x])] for s, x in c}
        if len(results) != 1:
            raise WellDefinednessViolation(*c[0], message="germ inverse not well defined")
        inv.append(results.pop())

    def theta_mask(s: int, U: int) -> int:
        return to_mask(germ_of[(s, x)] for x in bits(U & pm_domain(A.theta[s])))

    basis = tuple(theta_mask(s, X.full) for s in S)
    family = set(basis)
    for s in S:
        for x in bits(pm_domain(A.theta[s])):
            family.add(theta_mask(s, X.nbhd[x]))
    labels = tuple(a[0] for a in arrows)
    space = FiniteSpace.generated(labels, family)
    G = make_groupoid(X.labels, arrows, comp, space, inv)
    assert G.n_arrows == n1
    return GermGroupoid(A, G, germ_of, tuple(classes), basis)


def universal_groupoid(S: InverseSemigroup) -> GermGroupoid:
    """``G(S)``: germs of the canonical action on the character space."""
    return germ_groupoid(canonical_action(S))


def canonical_embedding(S: InverseSemigroup, U: GermGroupoid | None = None) -> SemigroupHom:
    """``s ↦ Θ_s`` into ``Bisec(G(S))``; validated as an injective homomorphism."""
    if U is None:
        U = universal_groupoid(S)
    B = U.groupoid.bisections
    h = is_homomorphism(tuple(B.index(m) for m in U.basis), S, B.semigroup)
    if not h.is_injective():
        raise NotInjective(*_collision(h.table))
    return h


def _collision(table: Sequence[int]) -> tuple[int, int]:
    seen: dict[int, int] = {}
    for s, v in enumerate(table):
        if v in seen:
            return seen[v], s
        seen[v] = s
    return (-1, -1)


def s_action_to_g_action(A: SemigroupAction, U: GermGroupoid | None = None) -> GroupoidAction:
    """``[s,φ]·x = s·x`` on the same space, anchored by the terminal map."""
    if U is None:
        U = universal_groupoid(A.semigroup)
    G = U.groupoid
    anchor = terminal_map(A, U.action).table
    X = A.space
    mu = [[-1] * X.n for _ in range(G.n_arrows)]
    for a, ms in enumerate(U.members):
        phi = G.src[a]
        for x in range(X.n):
            if anchor[x] != phi:
                continue
            vals = {A.theta[s][x] for s, _ in ms}
            if len(vals) != 1 or None in vals:
                s, t = ms[0][0], ms[-1][0]
                raise WellDefinednessViolation(s, t, phi, x)
            mu[a][x] = vals.pop()
    return validate_groupoid_action(G, X, anchor, mu)


def g_action_to_s_action(B: GroupoidAction, U: GermGroupoid) -> SemigroupAction:
    """``θ_s(x) = g·x`` for the unique ``g ∈ Θ_s`` with source ``anchor(x)``."""
    S, G = U.action.semigroup, U.groupoid
    theta = []
    for s in S:
        by_src = {G.src[g]: g for g in bits(U.basis[s])}
        row = []
        for x in range(B.space.n):
            g = by_src.get(B.anchor[x])
            row.append(None if g is None else B.mu[g][x])
        theta.append(tuple(row))
    return validate_action(S, B.space, theta)

