"""Inverse semigroup actions by partial homeomorphisms and the terminal action."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import InverseSemigroup, idempotent_semilattice
from .bitset import bits
from .errors import (
    DomainNotOpen,
    NotHomomorphic,
    NotPartialHomeomorphism,
    SearchSpaceTooLarge,
    UnitNotIdentity,
    ZeroNotEmpty,
)
from .topspace import (
    CharacterSpace,
    ContinuousMap,
    FiniteSpace,
    PartialHomeomorphism,
    PartialMap,
    enumerate_characters,
    pm_compose,
    pm_domain,
    pm_identity,
    validate_map,
    validate_partial_homeomorphism,
)

MAX_SEARCH = 10**7


@dataclass(frozen=True)
class SemigroupAction:
    semigroup: InverseSemigroup
    space: FiniteSpace
    theta: tuple[PartialMap, ...]
    # set for the canonical action on Ê
    charspace: CharacterSpace | None = field(default=None, compare=False, repr=False)

    def act(self, s: int, x: int) -> int | None:
        return self.theta[s][x]

    def domain(self, s: int) -> int:
        return pm_domain(self.theta[s])

    def partial_homeomorphism(self, s: int) -> PartialHomeomorphism:
        return PartialHomeomorphism(self.space, self.theta[s])


def validate_action(S: InverseSemigroup, X: FiniteSpace, theta: Sequence[Sequence[int | None]]) -> SemigroupAction:
    theta = tuple(tuple(t) for t in theta)
    if len(theta) != len(S):
        raise NotHomomorphic(message="one partial map per semigroup element required")
    for s, t in enumerate(theta):
        if len(t) != X.n:
            raise NotPartialHomeomorphism(s, message="partial map has wrong length")
        if not X.is_open(pm_domain(t)):
            raise DomainNotOpen(s)
        validate_partial_homeomorphism(X, t)
    if theta[S.unit] != pm_identity(X.n):
        raise UnitNotIdentity(S.unit)
    if any(v is not None for v in theta[S.zero]):
        raise ZeroNotEmpty(S.zero)
    for s in S:
        for t in S:
            if pm_compose(theta[s], theta[t]) != theta[S.mul[s][t]]:
                raise NotHomomorphic(s, t)
    return SemigroupAction(S, X, theta)


def canonical_action(S: InverseSemigroup) -> SemigroupAction:
    """``c_g: U_{g*g} -> U_{gg*}``, ``c_g(φ)(e) = φ(g* e g)``, on Ê for ``E = E(S)``."""
    E, embed = idempotent_semilattice(S)
    CS = enumerate_characters(E)
    pos = {s: i for i, s in enumerate(embed)}
    # conj[g][e] = g* e g as an index of E
    conj = [[pos[S.prod(S.star[g], embed[e], g)] for e in E] for g in S]
    theta = []
    for g in S:
        dom = CS.basic[pos[S.source_idempotent(g)]]
        row: list[int | None] = []
        for i, ch in enumerate(CS.characters):
            if not dom >> i & 1:
                row.append(None)
                continue
            row.append(CS.index(e for e in E if conj[g][e] in ch.filter))
        theta.append(tuple(row))
    theta = tuple(theta)
    for g in S:
        back = pm_compose(theta[g], theta[S.star[g]])
        if back != pm_identity(CS.space.n, CS.basic[pos[S.range_idempotent(g)]]):
            raise NotHomomorphic(g, S.star[g])
    A = validate_action(S, CS.space, theta)
    return SemigroupAction(S, CS.space, A.theta, CS)


@dataclass(frozen=True)
class EquivariantMap:
    source: SemigroupAction
    target: SemigroupAction
    map: ContinuousMap

    @property
    def table(self) -> tuple[int, ...]:
        return self.map.table


def is_equivariant(A: SemigroupAction, B: SemigroupAction, table: Sequence[int]) -> bool:
    """``s·x`` defined iff ``s·f(x)`` defined, and then ``f(s·x) = s·f(x)``."""
    for s in A.semigroup:
        ta, tb = A.theta[s], B.theta[s]
        for x, y in enumerate(ta):
            fy = tb[table[x]]
            if (y is None) != (fy is None):
                return False
            if y is not None and table[y] != fy:
                return False
    return True


def _idempotent_domains(A: SemigroupAction) -> tuple[InverseSemigroup, tuple[int, ...]]:
    E, embed = idempotent_semilattice(A.semigroup)
    return E, tuple(A.domain(e) for e in embed)


def terminal_map(A: SemigroupAction, target: SemigroupAction | None = None) -> EquivariantMap:
    """The map ``x ↦ (e ↦ [x ∈ X_e])`` into the canonical action."""
    if target is None:
        target = canonical_action(A.semigroup)
    CS = target.charspace
    _, doms = _idempotent_domains(A)
    table = tuple(CS.index(e for e, D in enumerate(doms) if D >> x & 1) for x in range(A.space.n))
    f = validate_map(A.space, target.space, table)
    if not is_equivariant(A, target, table):
        raise NotHomomorphic(message="terminal map failed equivariance")
    return EquivariantMap(A, target, f)


def enumerate_equivariant_maps(
    A: SemigroupAction, B: SemigroupAction, max_search: int = MAX_SEARCH
) -> list[EquivariantMap]:
    """Every continuous equivariant map ``A -> B``, by exhaustive search."""
    nA, nB = A.space.n, B.space.n
    if nB ** nA > max_search:
        raise SearchSpaceTooLarge(nB, nA)
    S = A.semigroup
    X, Y = A.space, B.space
    out: list[EquivariantMap] = []

    def assign(f: list[int], x: int, v: int) -> bool:
        # set f(x)=v and push the consequences of equivariance
        work = [(x, v)]
        while work:
            p, w = work.pop()
            if f[p] >= 0:
                if f[p] != w:
                    return False
                continue
            f[p] = w
            for s in S:
                sp = A.theta[s][p]
                sw = B.theta[s][w]
                if (sp is None) != (sw is None):
                    return False
                if sp is not None:
                    work.append((sp, sw))
        return True

    def consistent(f: list[int]) -> bool:
        for x in range(nA):
            if f[x] < 0:
                continue
            for y in bits(X.nbhd[x]):
                if f[y] >= 0 and not Y.nbhd[f[x]] >> f[y] & 1:
                    return False
        return True

    def search(f: list[int]) -> None:
        free = next((i for i in range(nA) if f[i] < 0), None)
        if free is None:
            out.append(EquivariantMap(A, B, ContinuousMap(X, Y, tuple(f))))
            return
        for v in range(nB):
            trial = list(f)
            if assign(trial, free, v) and consistent(trial):
                search(trial)

    search([-1] * nA)
    return out


def restrict_to_idempotents(A: SemigroupAction) -> tuple[int, ...]:
    """The semilattice map ``e ↦ X_e`` as open masks indexed by ``E(S)``."""
    return _idempotent_domains(A)[1]

