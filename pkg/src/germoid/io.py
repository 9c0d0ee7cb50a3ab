"""JSON (de)serialization of every structure, plus Graphviz DOT export.

Documents carry a ``"kind"`` field.  Table entries may be given as labels or
as indices.  Wherever a structure is expected, a string is resolved as the
name of a bundled fixture.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path
from typing import Any

from .algebra import InverseSemigroup, SemigroupHom, is_homomorphism, validate_inverse_semigroup
from .bitset import bits, to_mask
from .errors import GermoidError, ParseError, SchemaError
from .groupoid import EtaleGroupoid, make_groupoid
from .isaction import SemigroupAction, validate_action
from .morphism import AlgebraicMorphism, validate_morphism
from .topspace import FiniteSpace, validate_space

FIXTURE_ENV = "GERMOID_FIXTURES"


def fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("germoid") / "fixtures"))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json"))


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(str(p), message=f"cannot read {p}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(p), (exc.lineno, exc.colno), message=f"{p}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def resolve(ref: Any) -> dict:
    """A document given inline, by fixture name, or by path."""
    if isinstance(ref, dict):
        return ref
    if isinstance(ref, str):
        p = Path(ref)
        if p.suffix == ".json" and p.exists():
            return _expect_dict(read_json(p), ref)
        q = fixture_dir() / f"{ref}.json"
        if q.exists():
            return _expect_dict(read_json(q), ref)
        raise SchemaError(ref, message=f"unknown fixture or file {ref!r}")
    raise SchemaError(message=f"expected an object or a fixture name, got {type(ref).__name__}")


def _expect_dict(doc: Any, where: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(where, message=f"{where}: top level must be an object")
    return doc


def _field(doc: dict, key: str, kind: type | tuple = object) -> Any:
    if key not in doc:
        raise SchemaError(key, message=f"missing field {key!r}")
    v = doc[key]
    if not isinstance(v, kind):
        raise SchemaError(key, message=f"field {key!r} has the wrong type")
    return v


def _indexer(labels: list[str], what: str):
    pos = {lab: i for i, lab in enumerate(labels)}

    def idx(v: Any) -> int:
        if isinstance(v, bool):
            raise SchemaError(v, message=f"bad {what} reference {v!r}")
        if isinstance(v, int):
            if 0 <= v < len(labels):
                return v
        elif isinstance(v, str) and v in pos:
            return pos[v]
        raise SchemaError(v, message=f"unknown {what} {v!r}")

    return idx


# semigroups


def semigroup_from_json(doc: Any) -> InverseSemigroup:
    doc = resolve(doc)
    mul = _field(doc, "mul", list)
    labels = doc.get("labels") or [str(i) for i in range(len(mul))]
    idx = _indexer(list(labels), "element")
    table = [[idx(v) for v in _as_list(row)] for row in mul]
    star = [idx(v) for v in doc["star"]] if doc.get("star") is not None else None
    zero = idx(doc["zero"]) if doc.get("zero") is not None else None
    unit = idx(doc["unit"]) if doc.get("unit") is not None else None
    return validate_inverse_semigroup(table, star, zero, unit, labels)


def _as_list(v: Any) -> list:
    if not isinstance(v, list):
        raise SchemaError(message="table rows must be lists")
    return v


def semigroup_to_json(S: InverseSemigroup) -> dict:
    L = S.labels
    return {
        "kind": "semigroup",
        "labels": list(L),
        "mul": [[L[v] for v in row] for row in S.mul],
        "star": [L[v] for v in S.star],
        "zero": L[S.zero],
        "unit": L[S.unit],
    }


# spaces


def space_from_json(doc: Any) -> FiniteSpace:
    doc = resolve(doc)
    labels = list(_field(doc, "points", list))
    idx = _indexer(labels, "point")
    if "opens" in doc:
        opens = [to_mask(idx(p) for p in o) for o in doc["opens"]]
        return validate_space(labels, opens, complete=bool(doc.get("complete", False)))
    if "subbasis" in doc:
        return FiniteSpace.generated(labels, [to_mask(idx(p) for p in o) for o in doc["subbasis"]])
    return FiniteSpace.discrete(labels)


def space_to_json(X: FiniteSpace) -> dict:
    return {
        "kind": "space",
        "points": list(X.labels),
        "opens": [[X.labels[i] for i in bits(o)] for o in X.opens],
    }


# actions


def action_from_json(doc: Any) -> SemigroupAction:
    doc = resolve(doc)
    S = semigroup_from_json(_field(doc, "semigroup"))
    X = space_from_json(_field(doc, "space"))
    th = _field(doc, "theta", dict)
    sidx = _indexer(list(S.labels), "element")
    xidx = _indexer(list(X.labels), "point")
    theta: list[list[int | None]] = [[None] * X.n for _ in S]
    theta[S.unit] = list(range(X.n))
    for s_lab, mapping in th.items():
        s = sidx(s_lab)
        row: list[int | None] = [None] * X.n
        for x_lab, y_lab in mapping.items():
            row[xidx(x_lab)] = xidx(y_lab)
        theta[s] = row
    return validate_action(S, X, theta)


def action_to_json(A: SemigroupAction) -> dict:
    S, X = A.semigroup, A.space
    return {
        "kind": "action",
        "semigroup": semigroup_to_json(S),
        "space": space_to_json(X),
        "theta": {
            S.labels[s]: {X.labels[x]: X.labels[y] for x, y in enumerate(A.theta[s]) if y is not None}
            for s in S
        },
    }


# groupoids


def groupoid_from_json(doc: Any) -> EtaleGroupoid:
    doc = resolve(doc)
    objects = list(_field(doc, "objects", list))
    oidx = _indexer(objects, "object")
    raw_arrows = _field(doc, "arrows", list)
    arrows = []
    for a in raw_arrows:
        if not isinstance(a, dict):
            raise SchemaError(message="arrows must be objects with name, src, rng")
        arrows.append((str(_field(a, "name")), oidx(_field(a, "src")), oidx(_field(a, "rng"))))
    names = [a[0] for a in arrows]
    aidx = _indexer(names, "arrow")
    comp = {}
    for triple in _field(doc, "comp", list):
        if not isinstance(triple, list) or len(triple) != 3:
            raise SchemaError(message="comp entries must be [g, h, gh]")
        g, h, k = (aidx(v) for v in triple)
        comp[(g, h)] = k
    inv = None
    if doc.get("inv"):
        imap = doc["inv"]
        inv = [aidx(imap[n]) if n in imap else -1 for n in names]
    family = None
    if "opens" in doc:
        family = [to_mask(aidx(v) for v in o) for o in doc["opens"]]
    return make_groupoid(objects, arrows, comp, family, inv)


def groupoid_to_json(G: EtaleGroupoid) -> dict:
    A = G.arrow_labels
    return {
        "kind": "groupoid",
        "objects": list(G.object_labels),
        "arrows": [{"name": A[g], "src": G.object_labels[G.src[g]], "rng": G.object_labels[G.rng[g]]}
                   for g in range(G.n_arrows)],
        "inv": {A[g]: A[G.inv[g]] for g in range(G.n_arrows)},
        "comp": [[A[g], A[h], A[G.comp[g][h]]]
                 for g in range(G.n_arrows) for h in range(G.n_arrows) if G.comp[g][h] >= 0],
        "opens": [[A[g] for g in bits(G.arrow_space.nbhd[a])] for a in range(G.n_arrows)],
    }


# morphisms and homomorphisms


def morphism_from_json(doc: Any) -> AlgebraicMorphism:
    doc = resolve(doc)
    G = groupoid_from_json(_field(doc, "source"))
    H = groupoid_from_json(_field(doc, "target"))
    act = _field(doc, "action", dict)
    gidx = _indexer(list(G.arrow_labels), "source arrow")
    hidx = _indexer(list(H.arrow_labels), "target arrow")
    oidx = _indexer(list(G.object_labels), "source object")
    amap = _field(act, "anchor", dict)
    anchor = [0] * H.n_arrows
    for h in range(H.n_arrows):
        lab = H.arrow_labels[h]
        if lab not in amap:
            raise SchemaError(lab, message=f"anchor missing for arrow {lab!r}")
        anchor[h] = oidx(amap[lab])
    mu = {}
    for triple in _field(act, "mu", list):
        if not isinstance(triple, list) or len(triple) != 3:
            raise SchemaError(message="mu entries must be [g, h, g·h]")
        mu[(gidx(triple[0]), hidx(triple[1]))] = hidx(triple[2])
    return validate_morphism(G, H, anchor, mu)


def morphism_to_json(m: AlgebraicMorphism) -> dict:
    G, H = m.source, m.target
    return {
        "kind": "morphism",
        "source": groupoid_to_json(G),
        "target": groupoid_to_json(H),
        "action": {
            "anchor": {H.arrow_labels[h]: G.object_labels[m.anchor[h]] for h in range(H.n_arrows)},
            "mu": [[G.arrow_labels[g], H.arrow_labels[h], H.arrow_labels[m.action.mu[g][h]]]
                   for g in range(G.n_arrows) for h in range(H.n_arrows) if m.action.mu[g][h] >= 0],
        },
    }


def hom_to_json(f: SemigroupHom) -> dict:
    return {f.source.labels[s]: f.target.labels[v] for s, v in enumerate(f.table)}


def hom_from_json(doc: dict, S: InverseSemigroup, T: InverseSemigroup) -> SemigroupHom:
    sidx = _indexer(list(S.labels), "element")
    tidx = _indexer(list(T.labels), "element")
    table = [0] * len(S)
    for k, v in doc.items():
        table[sidx(k)] = tidx(v)
    return is_homomorphism(table, S, T)


def load(doc: Any):
    """Parse any document according to its ``kind``."""
    doc = resolve(doc)
    kind = doc.get("kind")
    loaders = {
        "semigroup": semigroup_from_json,
        "space": space_from_json,
        "action": action_from_json,
        "groupoid": groupoid_from_json,
        "morphism": morphism_from_json,
    }
    if kind not in loaders:
        raise SchemaError(kind, message=f"unknown or missing kind {kind!r}")
    return loaders[kind](doc)


def error_to_json(exc: GermoidError) -> dict:
    return {"error": type(exc).__name__, "message": str(exc), "witness": [_plain(w) for w in exc.witness]}


def _plain(v: Any) -> Any:
    if isinstance(v, (int, str, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return repr(v)


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=True, ensure_ascii=False)


# DOT


_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan", "gold", "gray"]


def groupoid_to_dot(G: EtaleGroupoid, bisections: bool = False) -> str:
    """Objects as nodes, non-unit arrows as labelled edges.

    With ``bisections``, each arrow is coloured by the first non-idempotent
    bisection containing it.
    """
    colour: dict[int, str] = {}
    if bisections:
        units = G.units_mask
        c = 0
        for m in G.bisections.masks:
            if m & ~units == 0:
                continue
            fresh = [g for g in bits(m) if g not in colour and not units >> g & 1]
            if fresh:
                for g in fresh:
                    colour[g] = _PALETTE[c % len(_PALETTE)]
                c += 1
    lines = ["digraph G {"]
    for x, lab in enumerate(G.object_labels):
        lines.append(f'  o{x} [label="{_esc(lab)}"];')
    for g in range(G.n_arrows):
        if g in G.unit:
            continue
        attrs = f'label="{_esc(G.arrow_labels[g])}"'
        if g in colour:
            attrs += f", color={colour[g]}"
        lines.append(f"  o{G.src[g]} -> o{G.rng[g]} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
