"""Finite étale groupoids, bisections, groupoid actions and isomorphism search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .algebra import InverseSemigroup, validate_inverse_semigroup
from .bitset import bits, to_mask
from .errors import (
    BadAction,
    BadInverse,
    BadUnits,
    MalformedTable,
    NotAssociative,
    NotComposable,
    NotContinuous,
    NotEtale,
    NotInvariant,
    SearchSpaceTooLarge,
    TooLarge,
    UnitsNotOpen,
)
from .topspace import FiniteSpace, is_continuous

MAX_BISECTION_ARROWS = 20
MAX_ISO_OBJECTS = 8


@dataclass(frozen=True)
class EtaleGroupoid:
    object_labels: tuple[str, ...]
    arrow_labels: tuple[str, ...]
    src: tuple[int, ...]
    rng: tuple[int, ...]
    unit: tuple[int, ...]
    inv: tuple[int, ...]
    # comp[g][h] = g∘h when src(g) == rng(h), else -1
    comp: tuple[tuple[int, ...], ...]
    arrow_space: FiniteSpace

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_arrows(self) -> int:
        return len(self.arrow_labels)

    def composable(self, g: int, h: int) -> bool:
        return self.src[g] == self.rng[h]

    def compose(self, g: int, h: int) -> int:
        gh = self.comp[g][h]
        if gh < 0:
            raise NotComposable(g, h)
        return gh

    @cached_property
    def units_mask(self) -> int:
        return to_mask(self.unit)

    @cached_property
    def object_space(self) -> FiniteSpace:
        # objects carry the subspace topology of the (open) unit arrows
        pos = {u: x for x, u in enumerate(self.unit)}
        nb = tuple(to_mask(pos[v] for v in bits(self.arrow_space.nbhd[u] & self.units_mask))
                   for u in self.unit)
        return FiniteSpace(self.object_labels, nb)

    @cached_property
    def bisections(self) -> "BisectionSemigroup":
        return enumerate_bisections(self)

    def src_image(self, mask: int) -> int:
        return to_mask(self.src[g] for g in bits(mask))

    def rng_image(self, mask: int) -> int:
        return to_mask(self.rng[g] for g in bits(mask))

    def isotropy(self, x: int) -> list[int]:
        return [g for g in range(self.n_arrows) if self.src[g] == x and self.rng[g] == x]

    def arrows_between(self, x: int, y: int) -> list[int]:
        return [g for g in range(self.n_arrows) if self.src[g] == x and self.rng[g] == y]

    def is_space(self) -> bool:
        return self.n_arrows == self.n_objects


def make_groupoid(
    object_labels: Sequence[str],
    arrows: Sequence[tuple[str, int, int]],
    comp: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]],
    arrow_space: FiniteSpace | Iterable[int] | None = None,
    inv: Sequence[int] | None = None,
) -> EtaleGroupoid:
    """Build and validate a groupoid from arrow triples ``(label, src, rng)``.

    ``comp`` maps composable pairs ``(g, h)`` to ``g∘h``.  ``arrow_space`` is
    either a space or a generating family of open arrow sets (default:
    discrete).  Units and inverses are derived when not given.
    """
    labels = tuple(a[0] for a in arrows)
    src = tuple(a[1] for a in arrows)
    rng = tuple(a[2] for a in arrows)
    n = len(arrows)
    table = [[-1] * n for _ in range(n)]
    items = comp.items() if isinstance(comp, Mapping) else (((g, h), k) for g, h, k in comp)
    for (g, h), k in items:
        table[g][h] = k
    if arrow_space is None:
        space = FiniteSpace.discrete(labels)
    elif isinstance(arrow_space, FiniteSpace):
        space = arrow_space
    else:
        space = FiniteSpace.generated(labels, arrow_space)
    return validate_groupoid(object_labels, labels, src, rng, table, space, inv)


def validate_groupoid(
    object_labels: Sequence[str],
    arrow_labels: Sequence[str],
    src: Sequence[int],
    rng: Sequence[int],
    comp: Sequence[Sequence[int]],
    arrow_space: FiniteSpace,
    inv: Sequence[int] | None = None,
) -> EtaleGroupoid:
    n0, n1 = len(object_labels), len(arrow_labels)
    if len(src) != n1 or len(rng) != n1 or len(comp) != n1 or arrow_space.n != n1:
        raise MalformedTable(message="groupoid tables have inconsistent sizes")
    if any(not (0 <= x < n0) for x in (*src, *rng)):
        raise MalformedTable(message="source/range out of range")
    table = tuple(tuple(row) for row in comp)
    for g in range(n1):
        for h in range(n1):
            k = table[g][h]
            if src[g] == rng[h]:
                if not 0 <= k < n1:
                    raise NotComposable(g, h, message=f"composable pair ({g},{h}) has no product")
                if src[k] != src[h] or rng[k] != rng[g]:
                    raise MalformedTable(g, h, message="product has wrong source or range")
            elif k != -1:
                raise MalformedTable(g, h, message="product given for a non-composable pair")
    for g in range(n1):
        for h in range(n1):
            if src[g] != rng[h]:
                continue
            gh = table[g][h]
            for k in range(n1):
                if src[h] == rng[k] and table[gh][k] != table[g][table[h][k]]:
                    raise NotAssociative(g, h, k)

    units = []
    for x in range(n0):
        cands = [u for u in range(n1) if src[u] == x and rng[u] == x and table[u][u] == u]
        if len(cands) != 1:
            raise BadUnits(x)
        units.append(cands[0])
    for g in range(n1):
        if table[units[rng[g]]][g] != g or table[g][units[src[g]]] != g:
            raise BadUnits(g)
    if inv is None:
        inverses = []
        for g in range(n1):
            cands = [h for h in range(n1) if src[h] == rng[g] and rng[h] == src[g]
                     and table[h][g] == units[src[g]] and table[g][h] == units[rng[g]]]
            if len(cands) != 1:
                raise BadInverse(g)
            inverses.append(cands[0])
        inv = inverses
    inv = tuple(inv)
    for g in range(n1):
        h = inv[g]
        if not (0 <= h < n1) or src[h] != rng[g] or table[h][g] != units[src[g]] \
                or table[g][h] != units[rng[g]]:
            raise BadInverse(g)

    G = EtaleGroupoid(tuple(object_labels), tuple(arrow_labels), tuple(src), tuple(rng),
                      tuple(units), inv, table, arrow_space)
    _check_topology(G)
    return G


def _check_topology(G: EtaleGroupoid) -> None:
    X = G.arrow_space
    if not X.is_open(G.units_mask):
        raise UnitsNotOpen(G.units_mask)
    Y = G.object_space
    if not is_continuous(X, Y, G.src):
        raise NotContinuous(message="source map not continuous")
    if not is_continuous(X, Y, G.rng):
        raise NotContinuous(message="range map not continuous")
    if not is_continuous(X, X, G.inv):
        raise NotContinuous(message="inversion not continuous")
    # composition on the fibred product with the product topology
    for g in range(G.n_arrows):
        for h in range(G.n_arrows):
            gh = G.comp[g][h]
            if gh < 0:
                continue
            allowed = X.nbhd[gh]
            for g2 in bits(X.nbhd[g]):
                row = G.comp[g2]
                for h2 in bits(X.nbhd[h]):
                    k = row[h2]
                    if k >= 0 and not allowed >> k & 1:
                        raise NotContinuous(g, h, message="composition not continuous")
    for g in range(G.n_arrows):
        # g lies in some bisection iff its minimal neighbourhood is one
        if not is_bisection(G, X.nbhd[g]):
            raise NotEtale(g)


def _open_on(G: EtaleGroupoid, mask: int, f: Sequence[int]) -> bool:
    # f restricted to the open set `mask` is an open map iff N(f(g)) ⊆ f(N(g)) for g in mask
    X, Y = G.arrow_space, G.object_space
    for g in bits(mask):
        img = to_mask(f[h] for h in bits(X.nbhd[g]))
        if Y.nbhd[f[g]] & ~img:
            return False
    return True


def is_bisection(G: EtaleGroupoid, mask: int) -> bool:
    """Open, with source and range injective and open on it."""
    if not G.arrow_space.is_open(mask):
        return False
    k = mask.bit_count()
    if G.src_image(mask).bit_count() != k or G.rng_image(mask).bit_count() != k:
        return False
    return _open_on(G, mask, G.src) and _open_on(G, mask, G.rng)


def bisection_product(G: EtaleGroupoid, s: int, t: int) -> int:
    out = 0
    for g in bits(s):
        row = G.comp[g]
        for h in bits(t):
            k = row[h]
            if k >= 0:
                out |= 1 << k
    return out


def bisection_inverse(G: EtaleGroupoid, s: int) -> int:
    return to_mask(G.inv[g] for g in bits(s))


@dataclass(frozen=True)
class BisectionSemigroup:
    groupoid: EtaleGroupoid
    masks: tuple[int, ...]
    semigroup: InverseSemigroup

    @cached_property
    def _index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    def index(self, mask: int) -> int:
        return self._index[mask]

    def __contains__(self, mask: int) -> bool:
        return mask in self._index

    def __len__(self) -> int:
        return len(self.masks)

    def arrow_with_source(self, b: int, x: int) -> int | None:
        """The unique arrow of bisection ``b`` starting at object ``x``."""
        G = self.groupoid
        for g in bits(self.masks[b]):
            if G.src[g] == x:
                return g
        return None

    def arrow_with_range(self, b: int, x: int) -> int | None:
        G = self.groupoid
        for g in bits(self.masks[b]):
            if G.rng[g] == x:
                return g
        return None

    @cached_property
    def idempotent_masks(self) -> tuple[int, ...]:
        return tuple(self.masks[e] for e in self.semigroup.idempotents)


def enumerate_bisections(G: EtaleGroupoid, max_arrows: int = MAX_BISECTION_ARROWS) -> BisectionSemigroup:
    """All bisections of ``G`` and their inverse semigroup ``Bisec(G)``."""
    if G.n_arrows > max_arrows:
        raise SearchSpaceTooLarge(G.n_arrows, message=f"{G.n_arrows} arrows exceeds guard {max_arrows}")
    masks = tuple(m for m in G.arrow_space.opens if is_bisection(G, m))
    pos = {m: i for i, m in enumerate(masks)}
    mul = [[pos[bisection_product(G, s, t)] for t in masks] for s in masks]
    star = [pos[bisection_inverse(G, s)] for s in masks]
    labels = [G.arrow_space.label_set(m) for m in masks]
    S = validate_inverse_semigroup(mul, star, pos[0], pos[G.units_mask], labels)
    return BisectionSemigroup(G, masks, S)


# groupoid actions


@dataclass(frozen=True)
class GroupoidAction:
    groupoid: EtaleGroupoid
    space: FiniteSpace
    anchor: tuple[int, ...]
    # mu[g][x] = g·x when src(g) == anchor(x), else -1
    mu: tuple[tuple[int, ...], ...]

    def defined(self, g: int, x: int) -> bool:
        return self.groupoid.src[g] == self.anchor[x]

    def act(self, g: int, x: int) -> int:
        y = self.mu[g][x]
        if y < 0:
            raise NotComposable(g, x)
        return y


def validate_groupoid_action(
    G: EtaleGroupoid,
    X: FiniteSpace,
    anchor: Sequence[int],
    mu: Sequence[Sequence[int]] | Mapping[tuple[int, int], int],
) -> GroupoidAction:
    anchor = tuple(anchor)
    if len(anchor) != X.n:
        raise BadAction(message="anchor has wrong length")
    if isinstance(mu, Mapping):
        tbl = [[-1] * X.n for _ in range(G.n_arrows)]
        for (g, x), y in mu.items():
            tbl[g][x] = y
    else:
        tbl = [list(r) for r in mu]
    table = tuple(tuple(r) for r in tbl)
    if not is_continuous(X, G.object_space, anchor):
        raise NotContinuous(message="anchor map not continuous")
    for g in range(G.n_arrows):
        for x in range(X.n):
            y = table[g][x]
            if G.src[g] == anchor[x]:
                if not 0 <= y < X.n:
                    raise BadAction(g, x, message="action undefined on a composable pair")
                if anchor[y] != G.rng[g]:
                    raise BadAction(g, x, message="anchor(g·x) != rng(g)")
            elif y != -1:
                raise BadAction(g, x, message="action defined on a non-composable pair")
    for x in range(X.n):
        if table[G.unit[anchor[x]]][x] != x:
            raise BadAction(x, message="unit does not act trivially")
    for g in range(G.n_arrows):
        for h in range(G.n_arrows):
            gh = G.comp[g][h]
            if gh < 0:
                continue
            for x in range(X.n):
                hx = table[h][x]
                if hx >= 0 and table[g][hx] != table[gh][x]:
                    raise BadAction(g, h, x, message="action not associative")
    for g in range(G.n_arrows):
        for x in range(X.n):
            y = table[g][x]
            if y < 0:
                continue
            allowed = X.nbhd[y]
            for g2 in bits(G.arrow_space.nbhd[g]):
                for x2 in bits(X.nbhd[x]):
                    z = table[g2][x2]
                    if z >= 0 and not allowed >> z & 1:
                        raise NotContinuous(g, x, message="action map not continuous")
    return GroupoidAction(G, X, anchor, table)


def left_translation(G: EtaleGroupoid) -> GroupoidAction:
    """``G`` acting on its arrows by ``g·h = gh``; anchor is the range map."""
    return GroupoidAction(G, G.arrow_space, G.rng, G.comp)


def object_action(G: EtaleGroupoid) -> GroupoidAction:
    """The canonical action on ``G⁰``: anchor identity, ``g·s(g) = r(g)``."""
    mu = tuple(tuple(G.rng[g] if x == G.src[g] else -1 for x in range(G.n_objects))
               for g in range(G.n_arrows))
    return GroupoidAction(G, G.object_space, tuple(range(G.n_objects)), mu)


@dataclass(frozen=True)
class RightAction:
    """A right action: ``y·g`` defined iff ``anchor(y) == rng(g)``."""

    groupoid: EtaleGroupoid
    space: FiniteSpace
    anchor: tuple[int, ...]
    # mu[y][g] = y·g, or -1
    mu: tuple[tuple[int, ...], ...]

    def act(self, y: int, g: int) -> int:
        z = self.mu[y][g]
        if z < 0:
            raise NotComposable(y, g)
        return z


def right_translation(G: EtaleGroupoid) -> RightAction:
    return RightAction(G, G.arrow_space, G.src, G.comp)


def is_equivariant_map(A: GroupoidAction, B: GroupoidAction, table: Sequence[int]) -> bool:
    if any(B.anchor[table[x]] != A.anchor[x] for x in range(A.space.n)):
        return False
    for g in range(A.groupoid.n_arrows):
        for x in range(A.space.n):
            y = A.mu[g][x]
            if y >= 0 and table[y] != B.mu[g][table[x]]:
                return False
    return True


def transformation_groupoid(A) -> EtaleGroupoid:
    """``G ⋉ X``: arrows ``(g, x)`` with ``s(g) = anchor(x)``.

    Accepts a :class:`GroupoidAction`, or an inverse semigroup action which is
    first turned into an action of its universal groupoid.
    """
    if not isinstance(A, GroupoidAction):
        from .germ import s_action_to_g_action

        A = s_action_to_g_action(A)
    return _transformation(A)[0]


def _transformation(A: GroupoidAction) -> tuple[EtaleGroupoid, tuple[tuple[int, int], ...]]:
    G, X = A.groupoid, A.space
    pairs = tuple((g, x) for g in range(G.n_arrows) for x in range(X.n) if A.mu[g][x] >= 0)
    pos = {p: i for i, p in enumerate(pairs)}
    arrows = [(f"({G.arrow_labels[g]},{X.labels[x]})", x, A.mu[g][x]) for g, x in pairs]
    comp = {}
    for i, (g, y) in enumerate(pairs):
        for j, (h, x) in enumerate(pairs):
            if A.mu[h][x] == y:
                comp[(i, j)] = pos[(G.comp[g][h], x)]
    nb = []
    for g, x in pairs:
        m = 0
        for g2 in bits(G.arrow_space.nbhd[g]):
            for x2 in bits(X.nbhd[x]):
                k = pos.get((g2, x2))
                if k is not None:
                    m |= 1 << k
        nb.append(m)
    space = FiniteSpace(tuple(a[0] for a in arrows), tuple(nb))
    return make_groupoid(X.labels, arrows, comp, space), pairs


def restrict_groupoid(G: EtaleGroupoid, Y: int) -> EtaleGroupoid:
    return restrict_with_inclusion(G, Y)[0]


def restrict_with_inclusion(G: EtaleGroupoid, Y: int) -> tuple[EtaleGroupoid, tuple[int, ...], tuple[int, ...]]:
    """Full subgroupoid on an invariant object set ``Y`` (bitmask).

    Returns the restriction with its object and arrow inclusion tables.
    """
    for g in range(G.n_arrows):
        if (Y >> G.src[g] & 1) != (Y >> G.rng[g] & 1):
            raise NotInvariant(g)
    objs = tuple(bits(Y))
    arrows = tuple(g for g in range(G.n_arrows) if Y >> G.src[g] & 1)
    opos = {x: i for i, x in enumerate(objs)}
    apos = {g: i for i, g in enumerate(arrows)}
    comp = {}
    for g in arrows:
        for h in arrows:
            k = G.comp[g][h]
            if k >= 0:
                comp[(apos[g], apos[h])] = apos[k]
    space, _ = G.arrow_space.subspace(to_mask(arrows))
    H = make_groupoid(
        [G.object_labels[x] for x in objs],
        [(G.arrow_labels[g], opos[G.src[g]], opos[G.rng[g]]) for g in arrows],
        comp,
        space,
    )
    return H, objs, arrows


def disjoint_union(G: EtaleGroupoid, H: EtaleGroupoid) -> EtaleGroupoid:
    n0, n1 = G.n_objects, G.n_arrows
    arrows = [(G.arrow_labels[g], G.src[g], G.rng[g]) for g in range(n1)]
    arrows += [(H.arrow_labels[h] + "'", H.src[h] + n0, H.rng[h] + n0) for h in range(H.n_arrows)]
    comp = {}
    for g in range(n1):
        for h in range(n1):
            if G.comp[g][h] >= 0:
                comp[(g, h)] = G.comp[g][h]
    for g in range(H.n_arrows):
        for h in range(H.n_arrows):
            if H.comp[g][h] >= 0:
                comp[(g + n1, h + n1)] = H.comp[g][h] + n1
    nb = G.arrow_space.nbhd + tuple(m << n1 for m in H.arrow_space.nbhd)
    objs = list(G.object_labels) + [x + "'" for x in H.object_labels]
    return make_groupoid(objs, arrows, comp, FiniteSpace(tuple(a[0] for a in arrows), nb))


# isomorphism


@dataclass(frozen=True)
class GroupoidIsomorphism:
    source: EtaleGroupoid
    target: EtaleGroupoid
    object_map: tuple[int, ...]
    arrow_map: tuple[int, ...]


def check_isomorphism(G: EtaleGroupoid, H: EtaleGroupoid, obj: Sequence[int], arr: Sequence[int]) -> bool:
    """Whether the given tables form an isomorphism of topological groupoids."""
    if len(obj) != G.n_objects or len(arr) != G.n_arrows:
        return False
    if sorted(obj) != list(range(H.n_objects)) or sorted(arr) != list(range(H.n_arrows)):
        return False
    for g in range(G.n_arrows):
        if H.src[arr[g]] != obj[G.src[g]] or H.rng[arr[g]] != obj[G.rng[g]]:
            return False
        if arr[G.inv[g]] != H.inv[arr[g]]:
            return False
        for h in range(G.n_arrows):
            k = G.comp[g][h]
            if k >= 0 and arr[k] != H.comp[arr[g]][arr[h]]:
                return False
    for x in range(G.n_objects):
        if arr[G.unit[x]] != H.unit[obj[x]]:
            return False
    XG, XH = G.arrow_space, H.arrow_space
    return all(to_mask(arr[h] for h in bits(XG.nbhd[g])) == XH.nbhd[arr[g]]
               for g in range(G.n_arrows))


def _object_signature(G: EtaleGroupoid, x: int) -> tuple:
    return (
        len(G.isotropy(x)),
        sum(1 for g in range(G.n_arrows) if G.src[g] == x),
        G.object_space.nbhd[x].bit_count(),
        G.arrow_space.nbhd[G.unit[x]].bit_count(),
    )


def groupoid_isomorphic(
    G: EtaleGroupoid, H: EtaleGroupoid, max_objects: int = MAX_ISO_OBJECTS
) -> GroupoidIsomorphism | None:
    """Brute-force search for an isomorphism of topological groupoids."""
    if G.n_objects != H.n_objects or G.n_arrows != H.n_arrows:
        return None
    if G.n_objects > max_objects:
        raise TooLarge(G.n_objects)
    n0, n1 = G.n_objects, G.n_arrows
    sigG = [_object_signature(G, x) for x in range(n0)]
    sigH = [_object_signature(H, y) for y in range(n0)]
    if sorted(sigG) != sorted(sigH):
        return None
    nbG = [G.arrow_space.nbhd[g].bit_count() for g in range(n1)]
    nbH = [H.arrow_space.nbhd[h].bit_count() for h in range(n1)]

    for perm in permutations(range(n0)):
        if any(sigG[x] != sigH[perm[x]] for x in range(n0)):
            continue
        arr = _extend_arrows(G, H, perm, nbG, nbH)
        if arr is not None:
            return GroupoidIsomorphism(G, H, tuple(perm), arr)
    return None


def _extend_arrows(G, H, perm, nbG, nbH) -> tuple[int, ...] | None:
    n1 = G.n_arrows
    candidates = []
    for g in range(n1):
        cands = [h for h in range(n1)
                 if H.src[h] == perm[G.src[g]] and H.rng[h] == perm[G.rng[g]] and nbH[h] == nbG[g]]
        if not cands:
            return None
        candidates.append(cands)

    def assign(f: list[int], used: list[bool], g: int, h: int) -> bool:
        work = [(g, h)]
        while work:
            a, b = work.pop()
            if f[a] >= 0:
                if f[a] != b:
                    return False
                continue
            if used[b] or b not in candidates[a]:
                return False
            f[a] = b
            used[b] = True
            work.append((G.inv[a], H.inv[b]))
            for c in range(n1):
                fc = f[c]
                if fc < 0:
                    continue
                k = G.comp[a][c]
                if k >= 0:
                    work.append((k, H.comp[b][fc]))
                k = G.comp[c][a]
                if k >= 0:
                    work.append((k, H.comp[fc][b]))
        return True

    def search(f: list[int], used: list[bool]) -> tuple[int, ...] | None:
        free = next((g for g in range(n1) if f[g] < 0), None)
        if free is None:
            return tuple(f) if check_isomorphism(G, H, perm, f) else None
        for h in candidates[free]:
            if used[h]:
                continue
            f2, u2 = list(f), list(used)
            if assign(f2, u2, free, h):
                found = search(f2, u2)
                if found is not None:
                    return found
        return None

    f = [-1] * n1
    used = [False] * n1
    for x in range(G.n_objects):
        if not assign(f, used, G.unit[x], H.unit[perm[x]]):
            return None
    return search(f, used)


__all__ = [
    "EtaleGroupoid",
    "BisectionSemigroup",
    "GroupoidAction",
    "RightAction",
    "GroupoidIsomorphism",
    "make_groupoid",
    "validate_groupoid",
    "validate_groupoid_action",
    "is_bisection",
    "enumerate_bisections",
    "bisection_product",
    "bisection_inverse",
    "left_translation",
    "right_translation",
    "object_action",
    "is_equivariant_map",
    "transformation_groupoid",
    "restrict_groupoid",
    "restrict_with_inclusion",
    "disjoint_union",
    "check_isomorphism",
    "groupoid_isomorphic",
]
