"""Finite topological spaces, characters of semilattices and the space Ê.

A finite topology is determined by the minimal open neighbourhood of each
point, so that is the stored representation; the full lattice of opens is
derived on demand.  Point sets are bitmasks throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import (
    InverseSemigroup,
    Semilattice,
    SemigroupHom,
    is_homomorphism,
    semilattice_from_sets,
)
from .bitset import bits, canonical_key, full, to_mask
from .errors import (
    MissingEmptyOrFull,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    NotContinuous,
    NotIdeal,
    NotOpen,
    NotPartialHomeomorphism,
    SearchSpaceTooLarge,
    ZeroHasNoCharacter,
)

# brute-force filter enumeration below this size; principal filters above
BRUTE_FORCE_FILTERS = 12


@dataclass(frozen=True)
class FiniteSpace:
    labels: tuple[str, ...]
    nbhd: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return full(len(self.labels))

    @cached_property
    def opens(self) -> tuple[int, ...]:
        found = {0}
        for m in self.nbhd:
            found |= {o | m for o in found}
        return tuple(sorted(found, key=canonical_key))

    def is_open(self, mask: int) -> bool:
        return all(self.nbhd[x] & ~mask == 0 for x in bits(mask))

    def interior(self, mask: int) -> int:
        return to_mask(x for x in bits(mask) if self.nbhd[x] & ~mask == 0)

    def closure(self, mask: int) -> int:
        return self.full & ~self.interior(self.full & ~mask)

    def point_closure(self, x: int) -> int:
        return to_mask(y for y in range(self.n) if self.nbhd[y] >> x & 1)

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        return tuple(sorted((self.full & ~o for o in self.opens), key=canonical_key))

    def is_t0(self) -> bool:
        return len(set(self.nbhd)) == self.n

    def t0_witness(self) -> tuple[int, int] | None:
        seen: dict[int, int] = {}
        for x, m in enumerate(self.nbhd):
            if m in seen:
                return seen[m], x
            seen[m] = x
        return None

    def subspace(self, mask: int) -> tuple["FiniteSpace", tuple[int, ...]]:
        """Subspace topology on ``mask``; returns it and the inclusion table."""
        pts = tuple(bits(mask))
        pos = {p: i for i, p in enumerate(pts)}
        nb = tuple(to_mask(pos[y] for y in bits(self.nbhd[p] & mask)) for p in pts)
        return FiniteSpace(tuple(self.labels[p] for p in pts), nb), pts

    def label_set(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"

    # constructors

    @classmethod
    def generated(cls, labels: Sequence[str], family: Iterable[int]) -> "FiniteSpace":
        """Coarsest topology in which every member of ``family`` is open."""
        n = len(labels)
        nb = [full(n)] * n
        for m in family:
            for x in bits(m):
                nb[x] &= m
        return cls(tuple(labels), tuple(nb))

    @classmethod
    def discrete(cls, labels: Sequence[str]) -> "FiniteSpace":
        return cls(tuple(labels), tuple(1 << i for i in range(len(labels))))

    @classmethod
    def indiscrete(cls, labels: Sequence[str]) -> "FiniteSpace":
        return cls(tuple(labels), (full(len(labels)),) * len(labels))

    @classmethod
    def sierpinski(cls) -> "FiniteSpace":
        # points (bottom, top); {top} open
        return cls(("bot", "top"), (0b11, 0b10))


def validate_space(labels: Sequence[str], opens: Iterable[int], complete: bool = False) -> FiniteSpace:
    """Check that ``opens`` is a topology on ``labels``.

    With ``complete`` the family is first closed under pairwise unions and
    intersections; the empty and full sets are never added silently.
    """
    n = len(labels)
    fam = set(opens)
    for m in fam:
        if m < 0 or m >> n:
            raise NotOpen(m, message=f"set {m:b} is not a subset of the points")
    if complete:
        changed = True
        while changed:
            changed = False
            for a, b in combinations(list(fam), 2):
                for c in (a | b, a & b):
                    if c not in fam:
                        fam.add(c)
                        changed = True
    else:
        for a, b in combinations(sorted(fam), 2):
            if a | b not in fam:
                raise NotClosedUnderUnion(a, b)
            if a & b not in fam:
                raise NotClosedUnderIntersection(a, b)
    if 0 not in fam or full(n) not in fam:
        raise MissingEmptyOrFull()
    return FiniteSpace.generated(labels, fam)


@dataclass(frozen=True)
class ContinuousMap:
    source: FiniteSpace
    target: FiniteSpace
    table: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image(self, mask: int | None = None) -> int:
        if mask is None:
            mask = self.source.full
        return to_mask(self.table[x] for x in bits(mask))

    def preimage(self, mask: int) -> int:
        return to_mask(x for x, y in enumerate(self.table) if mask >> y & 1)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_embedding(self) -> bool:
        """Injective and a homeomorphism onto its image."""
        if not self.is_injective():
            return False
        img = self.image()
        return all(self.image(self.source.nbhd[x]) == self.target.nbhd[self.table[x]] & img
                   for x in range(self.source.n))

    def is_homeomorphism(self) -> bool:
        return self.is_embedding() and self.image() == self.target.full


def is_continuous(X: FiniteSpace, Y: FiniteSpace, table: Sequence[int]) -> bool:
    # finite spaces: f continuous iff f(N(x)) ⊆ N(f(x)) for every x
    return all(to_mask(table[y] for y in bits(X.nbhd[x])) & ~Y.nbhd[table[x]] == 0
               for x in range(X.n))


def validate_map(X: FiniteSpace, Y: FiniteSpace, table: Sequence[int]) -> ContinuousMap:
    if len(table) != X.n or any(not (0 <= v < Y.n) for v in table):
        raise NotContinuous(message="map table has wrong shape")
    for x in range(X.n):
        img = to_mask(table[y] for y in bits(X.nbhd[x]))
        if img & ~Y.nbhd[table[x]]:
            raise NotContinuous(x)
    return ContinuousMap(X, Y, tuple(table))


def enumerate_continuous_maps(X: FiniteSpace, Y: FiniteSpace) -> list[ContinuousMap]:
    out = []

    def extend(prefix: list[int]) -> None:
        i = len(prefix)
        if i == X.n:
            out.append(ContinuousMap(X, Y, tuple(prefix)))
            return
        for v in range(Y.n):
            prefix.append(v)
            ok = True
            # check the pairs among assigned points only
            for x in range(i + 1):
                for y in bits(X.nbhd[x]):
                    if y <= i and not (Y.nbhd[prefix[x]] >> prefix[y] & 1):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                extend(prefix)
            prefix.pop()

    extend([])
    return out


def find_homeomorphism(X: FiniteSpace, Y: FiniteSpace, limit: int = 9) -> ContinuousMap | None:
    if X.n != Y.n:
        return None
    if X.n > limit:
        raise SearchSpaceTooLarge(X.n)
    if sorted(m.bit_count() for m in X.nbhd) != sorted(m.bit_count() for m in Y.nbhd):
        return None
    for f in enumerate_continuous_maps(X, Y):
        if f.is_homeomorphism():
            return f
    return None


# partial maps: tuples with None where undefined

PartialMap = tuple


def pm_domain(f: PartialMap) -> int:
    return to_mask(i for i, v in enumerate(f) if v is not None)


def pm_image(f: PartialMap) -> int:
    return to_mask(v for v in f if v is not None)


def pm_compose(f: PartialMap, g: PartialMap) -> PartialMap:
    """``f ∘ g`` on the pullback of domains."""
    return tuple(None if v is None else f[v] for v in g)


def pm_inverse(f: PartialMap) -> PartialMap:
    out: list[int | None] = [None] * len(f)
    for x, y in enumerate(f):
        if y is not None:
            out[y] = x
    return tuple(out)


def pm_identity(n: int, domain: int | None = None) -> PartialMap:
    if domain is None:
        domain = full(n)
    return tuple(i if domain >> i & 1 else None for i in range(n))


@dataclass(frozen=True)
class PartialHomeomorphism:
    space: FiniteSpace
    table: PartialMap

    @property
    def domain(self) -> int:
        return pm_domain(self.table)

    @property
    def codomain(self) -> int:
        return pm_image(self.table)


def is_partial_homeomorphism(X: FiniteSpace, f: PartialMap) -> bool:
    try:
        validate_partial_homeomorphism(X, f)
    except NotPartialHomeomorphism:
        return False
    return True


def validate_partial_homeomorphism(X: FiniteSpace, f: Sequence[int | None]) -> PartialHomeomorphism:
    f = tuple(f)
    if len(f) != X.n:
        raise NotPartialHomeomorphism(message="partial map has wrong length")
    dom, img = pm_domain(f), pm_image(f)
    if not X.is_open(dom):
        raise NotPartialHomeomorphism(dom, message="domain not open")
    if not X.is_open(img):
        raise NotPartialHomeomorphism(img, message="codomain not open")
    if sum(v is not None for v in f) != img.bit_count():
        raise NotPartialHomeomorphism(message="partial map not injective")
    g = pm_inverse(f)
    # domains are open, so neighbourhoods of their points stay inside them
    for h in (f, g):
        for x, y in enumerate(h):
            if y is None:
                continue
            if to_mask(h[z] for z in bits(X.nbhd[x])) & ~X.nbhd[y]:
                raise NotPartialHomeomorphism(x, message="not continuous")
    return PartialHomeomorphism(X, f)


# characters of semilattices


@dataclass(frozen=True)
class Character:
    filter: frozenset[int]
    semilattice: InverseSemigroup = field(compare=False, repr=False, default=None)

    def __call__(self, e: int) -> int:
        return int(e in self.filter)


def is_filter(E: InverseSemigroup, members: frozenset[int] | set[int]) -> bool:
    if E.zero in members or E.unit not in members:
        return False
    for e in members:
        for f in members:
            if E.mul[e][f] not in members:
                return False
        for f in E:
            if E.mul[e][f] == e and f not in members:
                return False
    return True


def _filters_brute_force(E: InverseSemigroup) -> list[frozenset[int]]:
    n = len(E)
    others = [i for i in range(n) if i not in (E.zero, E.unit)]
    out = []
    for r in range(len(others) + 1):
        for combo in combinations(others, r):
            cand = frozenset(combo) | {E.unit}
            if is_filter(E, cand):
                out.append(cand)
    return out


def _filters_principal(E: InverseSemigroup) -> list[frozenset[int]]:
    # a filter of a finite semilattice contains the product of its members,
    # hence is the up-set of that element
    out = []
    for e in E:
        if e == E.zero:
            continue
        out.append(frozenset(f for f in E if E.mul[e][f] == e))
    return out


def _generator(E: InverseSemigroup, members: frozenset[int]) -> int:
    acc = E.unit
    for e in members:
        acc = E.mul[acc][e]
    return acc


@dataclass(frozen=True)
class CharacterSpace:
    semilattice: InverseSemigroup
    characters: tuple[Character, ...]
    space: FiniteSpace
    basic: tuple[int, ...]  # e -> U_e

    def __len__(self) -> int:
        return len(self.characters)

    @cached_property
    def _index(self) -> dict[frozenset[int], int]:
        return {c.filter: i for i, c in enumerate(self.characters)}

    def index(self, members: Iterable[int]) -> int:
        return self._index[frozenset(members)]

    def special(self, e: int) -> int:
        """Index of the character ``φ_e``."""
        return self.index(special_character(self.semilattice, e).filter)

    def value(self, point: int, e: int) -> int:
        return int(e in self.characters[point].filter)


def enumerate_characters(E: InverseSemigroup) -> CharacterSpace:
    """All characters of ``E`` with the topology generated by the sets ``U_e``."""
    if len(E) <= BRUTE_FORCE_FILTERS:
        filters = _filters_brute_force(E)
    else:
        filters = _filters_principal(E)
    filters.sort(key=lambda F: (_generator(E, F), sorted(F)))
    chars = tuple(Character(F, E) for F in filters)
    basic = tuple(to_mask(i for i, c in enumerate(chars) if e in c.filter) for e in E)
    labels = tuple(f"phi[{E.labels[_generator(E, c.filter)]}]" for c in chars)
    space = FiniteSpace.generated(labels, basic)
    return CharacterSpace(E, chars, space, basic)


def special_character(E: InverseSemigroup, e: int) -> Character:
    if e == E.zero:
        raise ZeroHasNoCharacter(e)
    return Character(frozenset(f for f in E if E.mul[e][f] == e), E)


def minimal_neighbourhood(CS: CharacterSpace, point: int) -> int:
    return CS.space.nbhd[point]


@dataclass(frozen=True)
class Ideal:
    semilattice: InverseSemigroup = field(repr=False)
    members: frozenset[int]


def is_ideal(E: InverseSemigroup, members: Iterable[int]) -> bool:
    m = frozenset(members)
    if E.zero not in m:
        return False
    return all(E.mul[e][f] in m for f in m for e in E)


def validate_ideal(E: InverseSemigroup, members: Iterable[int]) -> Ideal:
    m = frozenset(members)
    if not is_ideal(E, m):
        raise NotIdeal(tuple(sorted(m)))
    return Ideal(E, m)


def enumerate_ideals(E: InverseSemigroup) -> list[Ideal]:
    others = [e for e in E if e != E.zero]
    out = []
    for r in range(len(others) + 1):
        for combo in combinations(others, r):
            m = frozenset(combo) | {E.zero}
            if is_ideal(E, m):
                out.append(Ideal(E, m))
    return out


def open_to_ideal(CS: CharacterSpace, A: int) -> Ideal:
    if not CS.space.is_open(A):
        raise NotOpen(A)
    return Ideal(CS.semilattice, frozenset(e for e, U in enumerate(CS.basic) if U & ~A == 0))


def ideal_to_open(CS: CharacterSpace, I: Ideal | Iterable[int]) -> int:
    """The open set ``⋃_{e∈I} U_e`` attached to an ideal.

    This is the complement of the closed set of characters vanishing on
    ``I``; see :func:`ideal_vanishing_set`.
    """
    members = I.members if isinstance(I, Ideal) else frozenset(I)
    if not is_ideal(CS.semilattice, members):
        raise NotIdeal(tuple(sorted(members)))
    A = 0
    for e in members:
        A |= CS.basic[e]
    return A


def ideal_vanishing_set(CS: CharacterSpace, I: Ideal) -> int:
    """Characters vanishing on every member of ``I`` (a closed set)."""
    return to_mask(i for i, c in enumerate(CS.characters) if not (c.filter & I.members))


def is_sober(X: FiniteSpace) -> tuple[bool, int | None]:
    """Sobriety check; on failure returns an offending irreducible closed set."""
    closed = X.closed_sets
    for A in closed:
        if A == 0:
            continue
        # A is irreducible iff the union of its proper closed subsets misses part of A
        cover = 0
        for B in closed:
            if B != A and B & ~A == 0:
                cover |= B
        if cover == A:
            continue
        generic = [x for x in bits(A) if X.point_closure(x) == A]
        if len(generic) != 1:
            return False, A
    return True, None


def open_semilattice(X: FiniteSpace) -> Semilattice:
    """``O(X)`` under intersection; element ``i`` is the open ``X.opens[i]``."""
    return semilattice_from_sets(X.opens, [X.label_set(o) for o in X.opens])


@dataclass(frozen=True)
class DeltaMap:
    map: ContinuousMap
    opens: Semilattice
    charspace: CharacterSpace

    @property
    def injective(self) -> bool:
        return self.map.is_injective()

    @property
    def embedding(self) -> bool:
        return self.map.is_embedding()


def delta_map(X: FiniteSpace) -> DeltaMap:
    """``x ↦ (U ↦ [x ∈ U])`` from ``X`` into the characters of ``O(X)``."""
    OX = open_semilattice(X)
    CS = enumerate_characters(OX)
    table = tuple(CS.index(i for i, o in enumerate(X.opens) if o >> x & 1) for x in range(X.n))
    return DeltaMap(validate_map(X, CS.space, table), OX, CS)


def hom_to_map(g: SemigroupHom, X: FiniteSpace, CS: CharacterSpace | None = None) -> ContinuousMap:
    """``ĝ(x)(e) = [x ∈ g(e)]`` for ``g: E -> O(X)``."""
    if CS is None:
        CS = enumerate_characters(g.source)
    OX = X.opens
    table = tuple(CS.index(e for e in g.source if OX[g.table[e]] >> x & 1) for x in range(X.n))
    return validate_map(X, CS.space, table)


def map_to_hom(f: ContinuousMap, CS: CharacterSpace, OX: Semilattice | None = None) -> SemigroupHom:
    """``f̌(e) = f⁻¹(U_e)`` as a homomorphism ``E -> O(X)``."""
    X = f.source
    if OX is None:
        OX = open_semilattice(X)
    pos = {o: i for i, o in enumerate(X.opens)}
    return is_homomorphism(tuple(pos[f.preimage(U)] for U in CS.basic), CS.semilattice, OX)


@dataclass(frozen=True)
class IndependenceCheck:
    hypothesis: bool
    conclusion: bool


def check_independence(CS: CharacterSpace, e: int, fs: Sequence[int]) -> IndependenceCheck:
    """If ``U_e ⊆ ⋃ U_f`` then ``e ≤ f`` for one of the ``f``."""
    union = 0
    for f in fs:
        union |= CS.basic[f]
    hyp = CS.basic[e] & ~union == 0
    E = CS.semilattice
    concl = any(E.mul[e][f] == e for f in fs)
    return IndependenceCheck(hyp, concl if hyp else True)
