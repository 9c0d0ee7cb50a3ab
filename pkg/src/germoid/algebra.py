"""Finite inverse semigroups with zero and unit.

Elements are dense indices ``0..n-1``; ``labels`` is carried for reporting
only.  All structures are immutable once validated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .errors import (
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

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class InverseSemigroup:
    labels: tuple[str, ...]
    mul: Table
    star: tuple[int, ...]
    zero: int
    unit: int
    # which of "zero"/"unit" were added formally during validation
    adjoined: frozenset[str] = field(default=frozenset(), compare=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.labels)))

    def prod(self, *elems: int) -> int:
        acc = self.unit
        for e in elems:
            acc = self.mul[acc][e]
        return acc

    def is_idempotent(self, s: int) -> bool:
        return self.mul[s][s] == s

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        return tuple(s for s in self if self.mul[s][s] == s)

    def source_idempotent(self, s: int) -> int:
        """``s*s``, the idempotent whose domain ``s`` acts on."""
        return self.mul[self.star[s]][s]

    def range_idempotent(self, s: int) -> int:
        return self.mul[s][self.star[s]]

    def leq(self, s: int, t: int) -> bool:
        """Natural partial order: ``s <= t`` iff ``s = t s*s``."""
        return self.mul[t][self.source_idempotent(s)] == s

    def index(self, label: str) -> int:
        return self.labels.index(label)


class Semilattice(InverseSemigroup):
    """An inverse semigroup in which every element is idempotent."""


def _check_shape(mul: Sequence[Sequence[int]]) -> Table:
    n = len(mul)
    if n == 0:
        raise MalformedTable(message="empty multiplication table")
    rows = []
    for i, row in enumerate(mul):
        if len(row) != n:
            raise MalformedTable(i, message=f"row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not (isinstance(v, int) and 0 <= v < n):
                raise MalformedTable(i, v, message=f"entry {v!r} in row {i} out of range")
        rows.append(tuple(row))
    return tuple(rows)


def _find_zero(mul: Table) -> int | None:
    n = len(mul)
    for z in range(n):
        if all(mul[z][s] == z and mul[s][z] == z for s in range(n)):
            return z
    return None


def _find_unit(mul: Table) -> int | None:
    n = len(mul)
    for u in range(n):
        if all(mul[u][s] == s and mul[s][u] == s for s in range(n)):
            return u
    return None


def _fresh_label(labels: list[str], wanted: str) -> str:
    name = wanted
    while name in labels:
        name += "'"
    return name


def _adjoin(mul: Table, labels: list[str], kind: str) -> tuple[Table, list[str], int]:
    n = len(mul)
    rows = [list(r) for r in mul]
    for i in range(n):
        rows[i].append(n if kind == "zero" else i)
    rows.append([n] * (n + 1) if kind == "zero" else list(range(n + 1)))
    labels = labels + [_fresh_label(labels, "0" if kind == "zero" else "1")]
    return tuple(tuple(r) for r in rows), labels, n


def validate_inverse_semigroup(
    mul: Sequence[Sequence[int]],
    star: Sequence[int] | None = None,
    zero: int | None = None,
    unit: int | None = None,
    labels: Sequence[str] | None = None,
) -> InverseSemigroup:
    """Validate a multiplication table as an inverse semigroup with 0 and 1.

    ``star`` may be omitted, in which case each element's unique inverse is
    found by search.  Missing ``zero``/``unit`` are looked up in the table and
    adjoined formally when absent; ``adjoined`` records which.  Returns a
    :class:`Semilattice` when every element is idempotent.
    """
    table = _check_shape(mul)
    n = len(table)
    names = list(labels) if labels is not None else [str(i) for i in range(n)]
    if len(names) != n or len(set(names)) != n:
        raise MalformedTable(message="labels must be distinct and match the table size")

    for s, t, u in product(range(n), repeat=3):
        if table[table[s][t]][u] != table[s][table[t][u]]:
            raise NotAssociative(s, t, u)

    idem = [s for s in range(n) if table[s][s] == s]
    for e in idem:
        for f in idem:
            if table[e][f] != table[f][e]:
                raise IdempotentsDontCommute(e, f)

    if star is None:
        inv = []
        for s in range(n):
            cands = [t for t in range(n)
                     if table[table[s][t]][s] == s and table[table[t][s]][t] == t]
            if len(cands) != 1:
                raise NotInverse(s)
            inv.append(cands[0])
        star_t = tuple(inv)
    else:
        if len(star) != n or any(not (0 <= v < n) for v in star):
            raise MalformedTable(message="star table has wrong shape")
        star_t = tuple(star)
        for s in range(n):
            t = star_t[s]
            if star_t[t] != s:
                raise NotInverse(s)
            if table[table[s][t]][s] != s or table[table[t][s]][t] != t:
                raise NotInverse(s)

    adjoined = set()
    if zero is None:
        zero = _find_zero(table)
    else:
        if not (0 <= zero < n) or any(table[zero][s] != zero or table[s][zero] != zero
                                      for s in range(n)):
            raise BadZero(zero)
    if unit is None:
        unit = _find_unit(table)
    else:
        if not (0 <= unit < n) or any(table[unit][s] != s or table[s][unit] != s
                                      for s in range(n)):
            raise BadUnit(unit)

    # adjoining a new element keeps associativity, idempotent commutation and inverses
    if unit is None:
        table, names, unit = _adjoin(table, names, "unit")
        star_t = star_t + (unit,)
        adjoined.add("unit")
    if zero is None:
        table, names, zero = _adjoin(table, names, "zero")
        star_t = star_t + (zero,)
        adjoined.add("zero")

    size = len(table)
    cls = Semilattice if all(table[s][s] == s for s in range(size)) else InverseSemigroup
    if cls is Semilattice:
        for s in range(size):
            for t in range(size):
                if table[s][t] != table[t][s]:
                    raise IdempotentsDontCommute(s, t)
    return cls(tuple(names), table, star_t, zero, unit, frozenset(adjoined))


def idempotent_semilattice(S: InverseSemigroup) -> tuple[Semilattice, tuple[int, ...]]:
    """Return ``E(S)`` and the embedding of its indices into ``S``."""
    embed = S.idempotents
    pos = {s: i for i, s in enumerate(embed)}
    mul = tuple(tuple(pos[S.mul[e][f]] for f in embed) for e in embed)
    E = Semilattice(
        tuple(S.labels[e] for e in embed),
        mul,
        tuple(range(len(embed))),
        pos[S.zero],
        pos[S.unit],
    )
    return E, embed


def natural_order(E: InverseSemigroup, e: int, f: int) -> bool:
    return E.mul[e][f] == e


def semilattice_from_sets(sets: Sequence[int], labels: Sequence[str] | None = None) -> Semilattice:
    """Semilattice of bitmask sets under intersection.

    The family must be closed under ``&`` and contain a least and a greatest
    member, which become zero and unit.
    """
    sets = list(sets)
    pos = {m: i for i, m in enumerate(sets)}
    if len(pos) != len(sets):
        raise MalformedTable(message="duplicate sets")
    try:
        mul = tuple(tuple(pos[a & b] for b in sets) for a in sets)
    except KeyError as exc:
        raise MalformedTable(message=f"family not closed under intersection: {exc}") from None
    union = 0
    inter = -1
    for m in sets:
        union |= m
        inter &= m
    if union not in pos or inter not in pos:
        raise MalformedTable(message="family has no top or bottom member")
    names = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(sets)))
    return Semilattice(names, mul, tuple(range(len(sets))), pos[inter], pos[union])


@dataclass(frozen=True)
class SemigroupHom:
    source: InverseSemigroup
    target: InverseSemigroup
    table: tuple[int, ...]

    def __call__(self, s: int) -> int:
        return self.table[s]

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def then(self, other: "SemigroupHom") -> "SemigroupHom":
        """``other ∘ self``."""
        return SemigroupHom(self.source, other.target, tuple(other.table[v] for v in self.table))


def is_homomorphism(table: Sequence[int], S: InverseSemigroup, T: InverseSemigroup) -> SemigroupHom:
    """Validate ``table`` as a zero- and unit-preserving homomorphism ``S -> T``."""
    if len(table) != len(S) or any(not (0 <= v < len(T)) for v in table):
        raise MalformedTable(message="hom table has wrong shape")
    f = tuple(table)
    if f[S.zero] != T.zero:
        raise ZeroNotPreserved(S.zero)
    if f[S.unit] != T.unit:
        raise UnitNotPreserved(S.unit)
    for s in S:
        for t in S:
            if f[S.mul[s][t]] != T.mul[f[s]][f[t]]:
                raise NotMultiplicative(s, t)
    for s in S:
        # implied by multiplicativity in inverse semigroups; asserted anyway
        if f[S.star[s]] != T.star[f[s]]:
            raise NotMultiplicative(s, S.star[s])
    return SemigroupHom(S, T, f)


def identity_hom(S: InverseSemigroup) -> SemigroupHom:
    return SemigroupHom(S, S, tuple(S))


def compose_homs(f: SemigroupHom, g: SemigroupHom) -> SemigroupHom:
    """``g ∘ f``, validated."""
    if f.target != g.source:
        raise MalformedTable(message="homomorphisms are not composable")
    return is_homomorphism(tuple(g.table[v] for v in f.table), f.source, g.target)


def enumerate_homomorphisms(S: InverseSemigroup, T: InverseSemigroup) -> list[SemigroupHom]:
    """All zero- and unit-preserving homomorphisms ``S -> T``.

    Backtracking over element images; every product of two assigned elements
    is propagated immediately, so forced values never branch.
    """
    n = len(S)
    out: list[SemigroupHom] = []

    def propagate(assign: list[int], start: list[int]) -> list[int] | None:
        work = list(start)
        touched = list(start)
        while work:
            a = work.pop()
            fa = assign[a]
            for b in range(n):
                fb = assign[b]
                if fb < 0:
                    continue
                for x, y, fx, fy in ((a, b, fa, fb), (b, a, fb, fa)):
                    p = S.mul[x][y]
                    val = T.mul[fx][fy]
                    if assign[p] < 0:
                        assign[p] = val
                        touched.append(p)
                        work.append(p)
                    elif assign[p] != val:
                        return None
            sa = S.star[a]
            val = T.star[fa]
            if assign[sa] < 0:
                assign[sa] = val
                touched.append(sa)
                work.append(sa)
            elif assign[sa] != val:
                return None
        return touched

    def search(assign: list[int]) -> None:
        free = next((i for i in range(n) if assign[i] < 0), None)
        if free is None:
            out.append(SemigroupHom(S, T, tuple(assign)))
            return
        for v in range(len(T)):
            trial = list(assign)
            trial[free] = v
            if propagate(trial, [free]) is not None:
                search(trial)

    start = [-1] * n
    start[S.zero] = T.zero
    start[S.unit] = T.unit
    if S.zero == S.unit:
        if T.zero != T.unit:
            return []
    if propagate(start, [S.zero, S.unit]) is None:
        return []
    search(start)
    return out

