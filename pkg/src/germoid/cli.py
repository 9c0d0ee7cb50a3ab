"""Command-line entry point: ``germoid <command> [files] [flags]``.

Reports are JSON on stdout.  The exit status is 0 on success, 1 when a
validation or property check fails, and 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Any, Callable

from . import io
from .algebra import enumerate_homomorphisms, identity_hom, idempotent_semilattice
from .errors import GermoidError, ParseError, SchemaError
from .germ import canonical_embedding, g_action_to_s_action, s_action_to_g_action, universal_groupoid
from .groupoid import EtaleGroupoid, groupoid_isomorphic
from .instances import random_action, random_semilattice
from .isaction import SemigroupAction, enumerate_equivariant_maps, terminal_map
from .morphism import (
    adjunction_backward,
    adjunction_forward,
    bisec_pushforward,
    compose_morphisms,
    counit_data,
    decompose,
    enumerate_morphisms,
    identity_morphism,
    recompose,
)
from .reconstruct import reconstruct_from_bisections
from .topspace import (
    enumerate_characters,
    enumerate_ideals,
    ideal_to_open,
    is_sober,
    open_to_ideal,
)


def _charspace_report(S) -> dict:
    E, _ = idempotent_semilattice(S)
    CS = enumerate_characters(E)
    X = CS.space
    opens = set(X.opens)
    basic = set(CS.basic)
    sober, _ = is_sober(X)
    nbhd_ok = all(X.nbhd[CS.special(e)] == CS.basic[e] for e in E if e != E.zero)
    top_ok = X.nbhd[CS.special(E.unit)] == X.full
    return {
        "characters": [X.labels[i] for i in range(X.n)],
        "n_characters": X.n,
        "n_opens": len(X.opens),
        "opens": [X.label_set(o) for o in X.opens],
        "semilattice_isomorphic_to_opens": basic == opens and len(basic) == len(E),
        "t0": X.is_t0(),
        "sober": sober,
        "minimal_neighbourhoods_are_basic": nbhd_ok,
        "unit_character_only_whole_space": top_ok,
    }


def cmd_validate(args) -> tuple[dict, bool]:
    obj = io.load(args.file)
    rep: dict[str, Any] = {"valid": True, "kind": type(obj).__name__}
    if isinstance(obj, EtaleGroupoid):
        rep.update(objects=obj.n_objects, arrows=obj.n_arrows)
    elif hasattr(obj, "labels") and hasattr(obj, "mul"):
        rep.update(size=len(obj), idempotents=len(obj.idempotents), adjoined=sorted(obj.adjoined))
    elif isinstance(obj, SemigroupAction):
        rep.update(size=len(obj.semigroup), points=obj.space.n)
    return rep, True


def cmd_charspace(args) -> tuple[dict, bool]:
    S = io.semigroup_from_json(args.file)
    rep = _charspace_report(S)
    ok = rep["t0"] and rep["sober"] and rep["minimal_neighbourhoods_are_basic"] and rep["unit_character_only_whole_space"]
    return rep, ok


def cmd_terminal(args) -> tuple[dict, bool]:
    A = io.action_from_json(args.file)
    f = terminal_map(A)
    maps = enumerate_equivariant_maps(A, f.target, args.max_search)
    unique = len(maps) == 1 and maps[0].table == f.table
    rep = {
        "terminal_map": {A.space.labels[x]: f.target.space.labels[y] for x, y in enumerate(f.table)},
        "equivariant_maps": len(maps),
        "unique": unique,
    }
    return rep, unique


def cmd_universal(args) -> tuple[dict, bool]:
    S = io.semigroup_from_json(args.file)
    U = universal_groupoid(S)
    G = U.groupoid
    theta = canonical_embedding(S, U)
    rep = {
        "objects": G.n_objects,
        "arrows": G.n_arrows,
        "groupoid": io.groupoid_to_json(G),
        "germs": U.provenance(),
        "embedding_injective": theta.is_injective(),
        "bisections": len(G.bisections),
    }
    if args.dot:
        Path(args.dot).write_text(io.groupoid_to_dot(G, bisections=True))
        rep["dot"] = str(args.dot)
    return rep, True


def cmd_bisections(args) -> tuple[dict, bool]:
    G = io.groupoid_from_json(args.file)
    B = G.bisections
    rep = {
        "count": len(B),
        "bisections": list(B.semigroup.labels),
        "semigroup": io.semigroup_to_json(B.semigroup),
    }
    if args.dot:
        Path(args.dot).write_text(io.groupoid_to_dot(G, bisections=True))
        rep["dot"] = str(args.dot)
    return rep, True


def cmd_adjunction(args) -> tuple[dict, bool]:
    S = io.semigroup_from_json(args.semigroup)
    G = io.groupoid_from_json(args.groupoid)
    U = universal_groupoid(S)
    homs = enumerate_homomorphisms(S, G.bisections.semigroup)
    morphs = enumerate_morphisms(U.groupoid, G, args.max_search)
    fwd_ok = all(adjunction_forward(adjunction_backward(h, G, U), U) == h for h in homs)
    back_ok = all(adjunction_backward(adjunction_forward(m, U), G, U) == m for m in morphs)
    ok = len(homs) == len(morphs) and fwd_ok and back_ok
    rep = {
        "homomorphisms": len(homs),
        "morphisms": len(morphs),
        "forward_after_backward_is_identity": fwd_ok,
        "backward_after_forward_is_identity": back_ok,
        "bijective": ok,
        "homomorphism_tables": [io.hom_to_json(h) for h in homs],
    }
    return rep, ok


def cmd_compose(args) -> tuple[dict, bool]:
    m1 = io.morphism_from_json(args.first)
    m2 = io.morphism_from_json(args.second)
    return {"composite": io.morphism_to_json(compose_morphisms(m1, m2))}, True


def cmd_reconstruct(args) -> tuple[dict, bool]:
    G = io.groupoid_from_json(args.file)
    R = reconstruct_from_bisections(G)
    iso = R.isomorphism
    rep = {
        "isomorphic": True,
        "bisections": len(G.bisections),
        "points": [R.universal.groupoid.object_labels[p] for p in range(R.universal.groupoid.n_objects)
                   if R.points >> p & 1],
        "object_map": {R.groupoid.object_labels[x]: G.object_labels[y] for x, y in enumerate(iso.object_map)},
        "arrow_map": {R.groupoid.arrow_labels[a]: G.arrow_labels[b] for a, b in enumerate(iso.arrow_map)},
    }
    return rep, True


# check-all


def _check_semigroup(S) -> dict:
    rep = _charspace_report(S)
    out = {k: rep[k] for k in ("t0", "sober", "minimal_neighbourhoods_are_basic", "unit_character_only_whole_space")}
    E, _ = idempotent_semilattice(S)
    CS = enumerate_characters(E)
    out["ideal_duality"] = all(open_to_ideal(CS, ideal_to_open(CS, I)) == I for I in enumerate_ideals(E)) and all(
        ideal_to_open(CS, open_to_ideal(CS, A)) == A for A in CS.space.opens)
    U = universal_groupoid(S)
    out["embedding_injective"] = canonical_embedding(S, U).is_injective()
    A = U.action
    out["action_round_trip"] = g_action_to_s_action(s_action_to_g_action(A, U), U) == A
    return out


def _check_groupoid(G: EtaleGroupoid) -> dict:
    out: dict[str, bool] = {}
    B = G.bisections
    out["bisections_form_inverse_semigroup"] = B.semigroup.zero == B.index(0) and B.semigroup.unit == B.index(G.units_mask)
    m = identity_morphism(G)
    out["identity_decomposes"] = recompose(decompose(m)) == m
    out["identity_pushforward"] = bisec_pushforward(m) == identity_hom(B.semigroup)
    if G.object_space.is_t0():
        c = counit_data(G)
        out["counit_transformation_isomorphic"] = groupoid_isomorphic(c.isomorphism.source, G) is not None
    if is_sober(G.object_space)[0]:
        R = reconstruct_from_bisections(G)
        out["reconstruction_isomorphic"] = R.isomorphism is not None
    return out


def _check_action(A: SemigroupAction, max_search: int) -> dict:
    f = terminal_map(A)
    maps = enumerate_equivariant_maps(A, f.target, max_search)
    U = universal_groupoid(A.semigroup)
    return {
        "terminal_unique": len(maps) == 1 and maps[0].table == f.table,
        "round_trip": g_action_to_s_action(s_action_to_g_action(A, U), U) == A,
    }


def _check_morphism(m) -> dict:
    return {
        "decomposition_round_trip": recompose(decompose(m)) == m,
        "left_identity": compose_morphisms(identity_morphism(m.source), m) == m,
        "right_identity": compose_morphisms(m, identity_morphism(m.target)) == m,
    }


def cmd_check_all(args) -> tuple[dict, bool]:
    rng = random.Random(args.seed)
    results: dict[str, Any] = {}
    ok = True
    for name in io.fixture_names():
        try:
            obj = io.load(name)
            if isinstance(obj, EtaleGroupoid):
                checks = _check_groupoid(obj)
            elif isinstance(obj, SemigroupAction):
                checks = _check_action(obj, args.max_search)
            elif hasattr(obj, "mul"):
                checks = _check_semigroup(obj)
            elif hasattr(obj, "action") and hasattr(obj, "target"):
                checks = _check_morphism(obj)
            else:
                checks = {"valid": True}
        except GermoidError as exc:
            checks = {"valid": False, **io.error_to_json(exc)}
        results[name] = checks
        ok &= all(v for v in checks.values() if isinstance(v, bool))
    # seeded random instances
    rand: dict[str, bool] = {}
    for i in range(5):
        E = random_semilattice(rng)
        rand[f"semilattice{i}"] = all(_check_semigroup(E).values())
        A = random_action(rng)
        rand[f"action{i}"] = all(_check_action(A, args.max_search).values())
    results["random"] = rand
    ok &= all(rand.values())
    return {"fixtures": results, "passed": ok}, ok


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "charspace": cmd_charspace,
    "terminal": cmd_terminal,
    "universal": cmd_universal,
    "bisections": cmd_bisections,
    "adjunction": cmd_adjunction,
    "compose": cmd_compose,
    "reconstruct": cmd_reconstruct,
    "check-all": cmd_check_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent JSON output")
    common.add_argument("--max-search", type=int, default=10**6, help="enumeration guard")
    common.add_argument("--seed", type=int, default=0, help="seed for random instances")
    p = argparse.ArgumentParser(prog="germoid", description="Inverse semigroups, étale groupoids and their dualities.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "charspace", "terminal", "reconstruct"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file", help="JSON file or fixture name")
    for name in ("universal", "bisections"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file", help="JSON file or fixture name")
        sp.add_argument("--dot", metavar="PATH", help="write a Graphviz file")
    sp = sub.add_parser("adjunction", parents=[common])
    sp.add_argument("semigroup")
    sp.add_argument("groupoid")
    sp = sub.add_parser("compose", parents=[common])
    sp.add_argument("first")
    sp.add_argument("second")
    sub.add_parser("check-all", parents=[common])
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, ok = COMMANDS[args.command](args)
    except (ParseError, SchemaError) as exc:
        print(io.dumps(io.error_to_json(exc), args.pretty))
        return 2
    except GermoidError as exc:
        print(io.dumps(io.error_to_json(exc), args.pretty))
        return 1
    report = {"command": args.command, "ok": ok, **report}
    print(io.dumps(report, args.pretty))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
