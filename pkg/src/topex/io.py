"""JSON encodings of trees, finite spaces and family presentations."""

from __future__ import annotations

import json
from typing import Any

from .errors import DomainError
from .finite_topology import FamilyPresentation, FiniteSpace
from .index_algebra import SignString
from .stretching import EpsilonSchedule, ExpansionTree, Interval, OpenBox


def _point(p):
    # JSON has no tuples; nested lists come back as tuples so they stay hashable.
    return tuple(_point(q) for q in p) if isinstance(p, list) else p


def _plain(p):
    return [_plain(q) for q in p] if isinstance(p, tuple) else p


def tree_to_dict(tree: ExpansionTree) -> dict:
    return {
        "base": {"lo": list(tree.base.lo), "hi": list(tree.base.hi)},
        "eps": list(tree.schedule.eps),
        "depth": tree.depth,
        "nodes": [{"sign_string": str(j), "lo": list(tree.nodes[j].lo), "hi": list(tree.nodes[j].hi)}
                  for j in tree],
    }


def tree_from_dict(data: dict) -> ExpansionTree:
    """Rebuild a tree from stored nodes (node boxes are taken as given, not recomputed)."""
    try:
        base = OpenBox.from_bounds(data["base"]["lo"], data["base"]["hi"])
        eps = EpsilonSchedule(tuple(data["eps"]))
        depth = int(data["depth"])
        nodes = {}
        for node in data["nodes"]:
            j = SignString.parse(node["sign_string"])
            if j in nodes:
                raise DomainError(f"duplicate node {j}")
            nodes[j] = OpenBox.from_bounds(node["lo"], node["hi"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed tree JSON: missing or invalid field {exc}") from None
    if depth < 0 or any(j.step > depth for j in nodes):
        raise DomainError("tree nodes exceed the declared depth")
    if not nodes:
        raise DomainError("tree has no nodes")
    return ExpansionTree(base, eps, depth, nodes)


def space_to_dict(space: FiniteSpace) -> dict:
    return {"points": [_plain(p) for p in space.points],
            "opens": [[_plain(p) for p in space.points if p in o] for o in space.sorted_opens()]}


def space_from_dict(data: dict, check: bool = True) -> FiniteSpace:
    try:
        points = [_point(p) for p in data["points"]]
        opens = [[_point(p) for p in o] for o in data["opens"]]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed space JSON: missing or invalid field {exc}") from None
    return FiniteSpace(points, opens, check=check)


def spaces_from_json(data: Any) -> dict:
    """A tagged family: ``{"spaces": {tag: space}}``, a bare mapping, or a list."""
    if isinstance(data, dict) and "spaces" in data:
        data = data["spaces"]
    if isinstance(data, list):
        return {i: space_from_dict(s) for i, s in enumerate(data)}
    if isinstance(data, dict):
        return {tag: space_from_dict(s) for tag, s in data.items()}
    raise DomainError("expected a list or mapping of spaces")


def presentation_to_dict(pres: FamilyPresentation) -> dict:
    return {
        "levels": [{str(t): space_to_dict(s) for t, s in lvl.items()} for lvl in pres.levels],
        "parent_maps": [{str(c): str(p) for c, p in pm.items()} for pm in pres.parent_maps],
        "embeddings": [{str(c): [[_plain(a), _plain(b)] for a, b in emb.items()] for c, emb in lvl.items()}
                       for lvl in pres.embeddings],
    }


def presentation_from_dict(data: dict) -> FamilyPresentation:
    """Read a presentation; constituent spaces are not validated here so the axiom check can report them."""
    try:
        levels = [{t: space_from_dict(s, check=False) for t, s in lvl.items()} for lvl in data["levels"]]
        pmaps = [dict(pm) for pm in data.get("parent_maps", [])]
        embeddings = []
        for lvl in data.get("embeddings", []):
            embeddings.append({c: {_point(a): _point(b) for a, b in pairs} for c, pairs in lvl.items()})
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise DomainError(f"malformed family JSON: {exc}") from None
    for n, pm in enumerate(pmaps):
        if n + 1 >= len(levels):
            break
        missing = [c for c in levels[n + 1] if c not in pm]
        if missing:
            raise DomainError(f"parent_maps[{n}] has no entry for {missing[0]!r}")
        unknown = [p for p in pm.values() if p not in levels[n]]
        if unknown:
            raise DomainError(f"parent_maps[{n}] names unknown parent {unknown[0]!r}")
    return FamilyPresentation(levels, pmaps, embeddings)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
