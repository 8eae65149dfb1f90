"""Finite topological spaces stored extensionally, their subspaces and
coproducts, and exhaustive checks of the fractal-family and expanding-family
axioms on finite presentations.

Points are arbitrary hashable identifiers. Inside a family presentation the
identifiers are global: ``X ⊆ Y`` for two constituent spaces means literal
inclusion of point sets, unless an explicit point embedding is supplied for a
(parent, child) pair.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, SizeLimitError, open_cap
from .report import AxiomReport

HOMEOMORPHISM_POINT_CAP = 7
# Power-set enumeration for the membership form of the coproduct topology.
MEMBERSHIP_SUBSET_CAP = 2**20

Point = Hashable


class Verdict(tuple):
    """``(ok, reason, witness)`` that is truthy exactly when ``ok``."""

    def __new__(cls, ok, reason="", witness=None):
        return super().__new__(cls, (bool(ok), reason, witness))

    ok = property(lambda self: self[0])
    reason = property(lambda self: self[1])
    witness = property(lambda self: self[2])

    def __bool__(self):
        return self[0]

    def __repr__(self):
        return f"Verdict(ok={self.ok}, reason={self.reason!r}, witness={self.witness!r})"


def _bitmasks(points: Sequence[Point], opens) -> np.ndarray:
    index = {p: i for i, p in enumerate(points)}
    masks = []
    for o in opens:
        m = 0
        for p in o:
            m |= 1 << index[p]
        masks.append(m)
    return np.array(sorted(set(masks)), dtype=np.uint64)


def _from_mask(points, mask) -> frozenset:
    mask = int(mask)
    return frozenset(p for i, p in enumerate(points) if mask >> i & 1)


def is_topology(points: Iterable[Point], opens: Iterable[Iterable[Point]]) -> Verdict:
    """Decide whether ``opens`` is a topology on ``points``.

    On failure the verdict carries the reason and the offending set or pair.
    """
    points = tuple(dict.fromkeys(points))
    full = frozenset(points)
    fam = {frozenset(o) for o in opens}
    for o in sorted(fam, key=_set_key):
        if not o <= full:
            return Verdict(False, "open set is not a subset of the points", o)
    if frozenset() not in fam:
        return Verdict(False, "missing empty set", frozenset())
    if full not in fam:
        return Verdict(False, "missing full set", full)
    if len(points) <= 63:
        masks = _bitmasks(points, fam)
        i, j, kind = _kernels.closure_violation(masks)
        if kind:
            pair = (_from_mask(points, masks[i]), _from_mask(points, masks[j]))
            return Verdict(False, "not closed under union" if kind == 1 else "not closed under intersection", pair)
        return Verdict(True)
    ordered = sorted(fam, key=_set_key)
    for a, b in itertools.combinations(ordered, 2):
        if a | b not in fam:
            return Verdict(False, "not closed under union", (a, b))
        if a & b not in fam:
            return Verdict(False, "not closed under intersection", (a, b))
    return Verdict(True)


def _set_key(s):
    return (len(s), sorted(map(repr, s)))


@dataclass(frozen=True)
class FiniteSpace:
    """Finite ground set with an explicit family of open sets."""

    points: tuple
    opens: frozenset

    def __init__(self, points: Iterable[Point], opens: Iterable[Iterable[Point]], check: bool = True):
        object.__setattr__(self, "points", tuple(dict.fromkeys(points)))
        object.__setattr__(self, "opens", frozenset(frozenset(o) for o in opens))
        if check:
            verdict = is_topology(self.points, self.opens)
            if not verdict:
                raise DomainError(f"not a topology: {verdict.reason} {_fmt(verdict.witness)}")

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return frozenset(self.points) == frozenset(other.points) and self.opens == other.opens

    def __hash__(self):
        return hash((frozenset(self.points), self.opens))

    @classmethod
    def discrete(cls, points) -> "FiniteSpace":
        points = tuple(points)
        return cls(points, (c for r in range(len(points) + 1) for c in itertools.combinations(points, r)))

    @classmethod
    def indiscrete(cls, points) -> "FiniteSpace":
        points = tuple(points)
        return cls(points, [(), points])

    @property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def sorted_opens(self) -> list[frozenset]:
        order = {p: i for i, p in enumerate(self.points)}
        return sorted(self.opens, key=lambda o: (len(o), sorted(order[p] for p in o)))

    def minimal_neighbourhood(self, p) -> frozenset:
        result = self.point_set
        for o in self.opens:
            if p in o:
                result &= o
        return result

    def is_open(self, subset) -> bool:
        return frozenset(subset) in self.opens

    def __repr__(self):
        return f"FiniteSpace({len(self.points)} points, {len(self.opens)} opens)"


def _fmt(obj):
    if isinstance(obj, frozenset):
        return "{" + ", ".join(sorted(map(str, obj))) + "}"
    if isinstance(obj, tuple):
        return "(" + ", ".join(_fmt(o) for o in obj) + ")"
    return str(obj)


def subspace(space: FiniteSpace, subset: Iterable[Point]) -> FiniteSpace:
    """Subspace topology ``{O ∩ A : O open}`` on ``A = subset``."""
    sub = frozenset(subset)
    if not sub <= space.point_set:
        raise DomainError(f"subset has points outside the space: {_fmt(sub - space.point_set)}")
    pts = [p for p in space.points if p in sub]
    return FiniteSpace(pts, {o & sub for o in space.opens}, check=False)


def enumerate_topologies(points: Sequence[Point]) -> list[FiniteSpace]:
    """Every topology on a small labelled point set, by brute force over families of subsets."""
    points = tuple(points)
    if len(points) > 4:
        raise SizeLimitError("topology enumeration is limited to 4 points")
    subsets = [frozenset(c) for r in range(len(points) + 1) for c in itertools.combinations(points, r)]
    empty, full = frozenset(), frozenset(points)
    middle = [s for s in subsets if s != empty and s != full]
    found = []
    for bits in range(1 << len(middle)):
        fam = [empty, full] + [s for i, s in enumerate(middle) if bits >> i & 1]
        if is_topology(points, fam):
            found.append(FiniteSpace(points, fam, check=False))
    return found


# -- coproducts ---------------------------------------------------------------


@dataclass(frozen=True)
class CoproductSpace:
    """Disjoint union: points are ``(point, tag)`` pairs."""

    tags: tuple
    constituents: Mapping
    points: frozenset
    opens: frozenset

    __hash__ = None

    def as_space(self) -> FiniteSpace:
        return FiniteSpace(sorted(self.points, key=repr), self.opens, check=False)

    def component(self, subset, tag) -> frozenset:
        return frozenset(p for p, t in subset if t == tag)


def _tagged(family) -> dict:
    if isinstance(family, Mapping):
        return dict(family)
    return {i: s for i, s in enumerate(family)}


def tagged_points(family) -> frozenset:
    family = _tagged(family)
    return frozenset((p, t) for t, s in family.items() for p in s.points)


def is_coproduct_open(subset, family) -> bool:
    """Membership test: every trace on a tagged constituent is open there."""
    family = _tagged(family)
    subset = frozenset(subset)
    if not subset <= tagged_points(family):
        return False
    for tag, space in family.items():
        if frozenset(p for p, t in subset if t == tag) not in space.opens:
            return False
    return True


def coproduct(family, cap: int | None = None) -> CoproductSpace:
    """Coproduct topology enumerated as ``{∪ O_i × {i} : O_i open in X_i}``."""
    family = _tagged(family)
    limit = open_cap(cap)
    total = math.prod(len(s.opens) for s in family.values())
    if total > limit:
        raise SizeLimitError(f"coproduct has {total} open sets, cap is {limit}")
    tags = tuple(family)
    per_tag = [[frozenset((p, t) for p in o) for o in family[t].sorted_opens()] for t in tags]
    opens = frozenset(frozenset().union(*combo) for combo in itertools.product(*per_tag))
    return CoproductSpace(tags, family, tagged_points(family), opens)


def coproduct_opens_by_membership(family, cap: int | None = None) -> frozenset:
    """All subsets of the disjoint union that pass :func:`is_coproduct_open` (power-set scan)."""
    family = _tagged(family)
    pts = sorted(tagged_points(family), key=repr)
    limit = MEMBERSHIP_SUBSET_CAP if cap is None else cap
    if 2 ** len(pts) > limit:
        raise SizeLimitError(f"membership scan over 2^{len(pts)} subsets exceeds cap {limit}")
    # Every subset is a bit pattern over pts; its trace on a constituent is the
    # sub-pattern on that constituent's bits, looked up in a table of open traces.
    subsets = np.arange(1 << len(pts), dtype=np.int64)
    keep = np.ones(subsets.shape[0], dtype=bool)
    for tag, space in family.items():
        local = [p for p in space.points]
        bits = [pts.index((p, tag)) for p in local]
        table = np.zeros(1 << len(local), dtype=bool)
        for o in space.opens:
            table[sum(1 << i for i, p in enumerate(local) if p in o)] = True
        code = np.zeros_like(subsets)
        for i, b in enumerate(bits):
            code |= ((subsets >> b) & 1) << i
        keep &= table[code]
    return frozenset(frozenset(p for i, p in enumerate(pts) if bits_ >> i & 1)
                     for bits_ in subsets[keep].tolist())


def _sampled_characterization(family, samples: int) -> Verdict:
    rng = random.Random(0)
    tags = list(family)
    opens = {t: family[t].sorted_opens() for t in tags}
    pts = sorted(tagged_points(family), key=repr)
    for _ in range(samples):
        combo = frozenset((p, t) for t in tags for p in rng.choice(opens[t]))
        if not is_coproduct_open(combo, family):
            return Verdict(False, "product-form open fails the membership test", combo)
        subset = frozenset(p for p in pts if rng.random() < 0.5)
        in_product = all(frozenset(p for p, s in subset if s == t) in family[t].opens for t in tags)
        if in_product != is_coproduct_open(subset, family):
            return Verdict(False, "membership and product forms differ", subset)
    return Verdict(True, f"sampled {samples} opens and subsets (family too large to enumerate)")


def coproduct_characterizations_agree(family, cap: int | None = None, samples: int = 2000) -> Verdict:
    """Compare the membership form and the product form of the coproduct topology.

    Small unions are compared set-for-set after a full power-set scan. For
    larger ones each product-form open is run through the membership test;
    since an open of the membership form is determined by its traces, it has at
    most ``prod |opens_i|`` elements, so inclusion plus equal counts is equality.
    Families whose open count exceeds the cap are checked on a seeded sample.
    """
    family = _tagged(family)
    expected = math.prod(len(s.opens) for s in family.values())
    if expected > open_cap(cap):
        return _sampled_characterization(family, samples)
    cp = coproduct(family, cap)
    if len(cp.opens) != expected:
        return Verdict(False, "product form has the wrong number of opens", len(cp.opens))
    if 2 ** len(cp.points) <= MEMBERSHIP_SUBSET_CAP:
        member = coproduct_opens_by_membership(family)
        if member != cp.opens:
            diff = sorted(member ^ cp.opens, key=_set_key)
            return Verdict(False, "membership and product forms differ", diff[0])
        return Verdict(True, "power-set comparison")
    for o in sorted(cp.opens, key=_set_key):
        if not is_coproduct_open(o, family):
            return Verdict(False, "product-form open fails the membership test", o)
    return Verdict(True, "inclusion and cardinality")


# -- comparisons ---------------------------------------------------------------


def _check_injective(embedding, domain, codomain):
    images = [embedding[p] for p in domain]
    if len(set(images)) != len(images):
        raise DomainError("embedding is not injective")
    outside = set(images) - set(codomain)
    if outside:
        raise DomainError(f"embedding leaves the larger space: {_fmt(frozenset(outside))}")


def is_finer(smaller: FiniteSpace, larger: FiniteSpace, embedding: Mapping | None = None) -> bool:
    """True when the image of every open of ``smaller`` is open in ``larger``."""
    if embedding is None:
        embedding = {p: p for p in smaller.points}
    missing = [p for p in smaller.points if p not in embedding]
    if missing:
        raise DomainError(f"embedding is undefined on {missing[0]!r}")
    _check_injective(embedding, smaller.points, larger.points)
    return all(frozenset(embedding[p] for p in o) in larger.opens for o in smaller.opens)


def homeomorphism(a: FiniteSpace, b: FiniteSpace, cap: int = HOMEOMORPHISM_POINT_CAP) -> dict | None:
    """A point bijection mapping opens onto opens, or ``None`` if none exists.

    Search is exhaustive over bijections, pruned by the specialisation order
    (``p`` lies in the minimal neighbourhood of ``q``), which any homeomorphism
    of finite spaces preserves.
    """
    if len(a.points) != len(b.points) or len(a.opens) != len(b.opens):
        return None
    if a == b:
        return {p: p for p in a.points}
    if sorted(len(o) for o in a.opens) != sorted(len(o) for o in b.opens):
        return None
    if len(a.points) > cap:
        raise SizeLimitError(f"homeomorphism search limited to {cap} points, got {len(a.points)}")
    ua = {p: a.minimal_neighbourhood(p) for p in a.points}
    ub = {p: b.minimal_neighbourhood(p) for p in b.points}

    def signature(space, u, p):
        return (len(u[p]), sum(1 for o in space.opens if p in o))

    sa = {p: signature(a, ua, p) for p in a.points}
    sb = {p: signature(b, ub, p) for p in b.points}
    if sorted(sa.values()) != sorted(sb.values()):
        return None
    order = sorted(a.points, key=lambda p: (sa[p], repr(p)))
    assignment: dict = {}
    used: set = set()

    def extend(i):
        if i == len(order):
            return all(frozenset(assignment[p] for p in o) in b.opens for o in a.opens)
        p = order[i]
        for q in b.points:
            if q in used or sb[q] != sa[p]:
                continue
            if any((r in ua[p]) != (assignment[r] in ub[q]) or (p in ua[r]) != (q in ub[assignment[r]])
                   for r in assignment):
                continue
            assignment[p] = q
            used.add(q)
            if extend(i + 1):
                return True
            del assignment[p]
            used.discard(q)
        return False

    return dict(assignment) if extend(0) else None


# -- family presentations -----------------------------------------------------


@dataclass
class FamilyPresentation:
    """Levels of tagged constituent spaces with parent maps between consecutive levels.

    ``parent_maps[n]`` sends each tag of level ``n+1`` to a tag of level ``n``.
    ``embeddings[n][child]``, when present, maps the points of the parent's
    space into the child's space; otherwise points are identified by equality.
    """

    levels: list[dict]
    parent_maps: list[dict]
    embeddings: list[dict] = field(default_factory=list)

    def __post_init__(self):
        self.levels = [dict(lvl) for lvl in self.levels]
        self.parent_maps = [dict(pm) for pm in self.parent_maps]
        self.embeddings = [dict(e) for e in (self.embeddings or [])]
        if len(self.parent_maps) != max(len(self.levels) - 1, 0):
            raise DomainError(f"{len(self.levels)} levels need {len(self.levels) - 1} parent maps, "
                              f"got {len(self.parent_maps)}")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def embedding(self, n: int, parent_tag, child_tag) -> dict | None:
        """Point map from level-``n`` space ``parent_tag`` into level-``n+1`` space ``child_tag``."""
        src = self.levels[n][parent_tag]
        dst = self.levels[n + 1][child_tag]
        if n < len(self.embeddings) and child_tag in self.embeddings[n] \
                and self.parent_maps[n].get(child_tag) == parent_tag:
            emb = self.embeddings[n][child_tag]
            if all(p in emb for p in src.points) and set(emb[p] for p in src.points) <= dst.point_set \
                    and len({emb[p] for p in src.points}) == len(src.points):
                return {p: emb[p] for p in src.points}
            return None
        if src.point_set <= dst.point_set:
            return {p: p for p in src.points}
        return None

    def coproduct(self, n: int, cap: int | None = None) -> CoproductSpace:
        return coproduct(self.levels[n], cap)


def _image(emb, subset):
    return frozenset(emb[p] for p in subset)


def _induces(parent_space, child_space, emb) -> bool:
    img = _image(emb, parent_space.points)
    traces = {o & img for o in child_space.opens}
    return traces == {_image(emb, o) for o in parent_space.opens}


def _topology_included(parent_space, child_space, emb) -> bool:
    return all(_image(emb, o) in child_space.opens for o in parent_space.opens)


def subspace_parent_candidates(pres: FamilyPresentation, n: int, child_tag) -> list:
    """Level-``n`` tags whose space embeds in the child with the induced topology."""
    child = pres.levels[n + 1][child_tag]
    found = []
    for tag, space in pres.levels[n].items():
        emb = pres.embedding(n, tag, child_tag)
        if emb is not None and _induces(space, child, emb):
            found.append(tag)
    return found


def refining_parent_candidates(pres: FamilyPresentation, n: int, child_tag) -> list:
    """Level-``n`` tags whose topology is contained in, and induced by, the child's."""
    child = pres.levels[n + 1][child_tag]
    found = []
    for tag, space in pres.levels[n].items():
        emb = pres.embedding(n, tag, child_tag)
        if emb is not None and _topology_included(space, child, emb) and _induces(space, child, emb):
            found.append(tag)
    return found


def verify_fractal_family(pres: FamilyPresentation, homeo_cap: int = HOMEOMORPHISM_POINT_CAP) -> AxiomReport:
    """Check axioms i-v of a fractal family on every pair of consecutive levels."""
    if len(pres.levels) < 2:
        raise DomainError("a family presentation needs at least two levels")
    report = AxiomReport(f"fractal family, {len(pres.levels)} levels")

    bad = next((n for n in range(pres.depth) if not len(pres.levels[n + 1]) > len(pres.levels[n])), None)
    report.add("i cardinality", bad is None, None if bad is None else f"level {bad}",
               "index sets grow strictly" if bad is None else f"card I_{bad + 1} <= card I_{bad}")

    bad = None
    for n, lvl in enumerate(pres.levels):
        for tag, space in lvl.items():
            v = is_topology(space.points, space.opens)
            if not v:
                bad = (n, tag, v.reason)
                break
        if bad:
            break
    report.add("ii topologies", bad is None, bad, "every constituent is a topological space")

    bad = None
    for n, lvl in enumerate(pres.levels):
        spaces = list(lvl.items())
        ref_tag, ref = spaces[0]
        for tag, space in spaces[1:]:
            if homeomorphism(ref, space, homeo_cap) is None:
                bad = (n, ref_tag, tag)
                break
        if bad:
            break
    report.add("iii equivalent", bad is None, bad, "constituents of each level are pairwise homeomorphic")

    bad = None
    for n in range(pres.depth):
        for child_tag in pres.levels[n + 1]:
            declared = pres.parent_maps[n].get(child_tag)
            cands = subspace_parent_candidates(pres, n, child_tag)
            if declared is None:
                bad = (n + 1, child_tag, "no parent declared")
            elif len(cands) > 1:
                bad = (n + 1, child_tag, f"parents {cands}")
            elif cands != [declared]:
                bad = (n + 1, child_tag, f"declared parent {declared} is not an induced subspace")
            if bad:
                break
        if bad:
            break
    report.add("iv unique parent", bad is None, bad,
               "each constituent has exactly one induced subspace one level down")

    bad = None
    for n in range(pres.depth):
        for tag, space in pres.levels[n].items():
            ok = False
            for child_tag, child in pres.levels[n + 1].items():
                emb = pres.embedding(n, tag, child_tag)
                if emb is not None and _topology_included(space, child, emb) and _induces(space, child, emb):
                    ok = True
                    break
            if not ok:
                bad = (n, tag)
                break
        if bad:
            break
    report.add("v child exists", bad is None, bad,
               "each constituent's topology is contained in and induced by some child's")
    return report


def check_expanding(pres: FamilyPresentation, cap: int | None = None) -> AxiomReport:
    """Check the expanding-family clauses on the coproducts of a presentation."""
    report = AxiomReport(f"expanding coproduct family, {len(pres.levels)} levels")
    bad = next((n for n in range(pres.depth) if not len(pres.levels[n]) < len(pres.levels[n + 1])), None)
    report.add("i cardinality", bad is None, None if bad is None else f"level {bad}")

    bad = None
    for n in range(pres.depth):
        for child_tag in pres.levels[n + 1]:
            cands = refining_parent_candidates(pres, n, child_tag)
            if len(cands) != 1 or pres.parent_maps[n].get(child_tag) != cands[0]:
                bad = (n + 1, child_tag, cands)
                break
        if bad:
            break
    report.add("ii unique refining parent", bad is None, bad,
               "each constituent refines exactly one constituent one level down")

    bad = None
    for n, lvl in enumerate(pres.levels):
        try:
            v = coproduct_characterizations_agree(lvl, cap)
        except SizeLimitError as exc:
            v = Verdict(False, str(exc))
        if not v:
            bad = (n, v.reason)
            break
    report.add("iii coproduct form", bad is None, bad, "membership and product forms of each coproduct agree")
    return report


def expand_open(open_n, pres: FamilyPresentation, n: int) -> frozenset:
    """Carry an open of the level-``n`` coproduct to the level-``n+1`` coproduct.

    Each child ``j`` receives the image of the parent's component of the open
    under the parent-to-child embedding.
    """
    open_n = frozenset(open_n)
    if not is_coproduct_open(open_n, pres.levels[n]):
        raise DomainError("the given set is not open in the level-%d coproduct" % n)
    parts: dict = {}
    for p, t in open_n:
        parts.setdefault(t, set()).add(p)
    out = set()
    for child_tag in pres.levels[n + 1]:
        parent_tag = pres.parent_maps[n][child_tag]
        emb = pres.embedding(n, parent_tag, child_tag)
        if emb is None:
            raise DomainError(f"no embedding from {parent_tag} into {child_tag}")
        out.update((emb[p], child_tag) for p in parts.get(parent_tag, ()))
    return frozenset(out)


def check_refinement(pres: FamilyPresentation, n: int, cap: int | None = None) -> AxiomReport:
    """Exhaustively verify that expansion sends every level-``n`` open to a level-``n+1`` open.

    Also checks injectivity and preservation of pairwise unions and intersections.
    """
    cp = pres.coproduct(n, cap)
    report = AxiomReport(f"refinement F_{n} -> F_{n + 1}")
    images = {}
    bad = None
    for o in sorted(cp.opens, key=_set_key):
        img = expand_open(o, pres, n)
        images[o] = img
        if bad is None and not is_coproduct_open(img, pres.levels[n + 1]):
            bad = o
    report.add("open image", bad is None, bad, f"{len(cp.opens)} opens mapped into the next coproduct")
    distinct = len(set(images.values())) == len(images)
    report.add("injective", distinct, None if distinct else "two opens share an image")
    bad = None
    ordered = sorted(images, key=_set_key)
    if len(ordered) <= 2000:
        pairs = itertools.combinations(ordered, 2)
    else:
        rng = random.Random(n)
        pairs = ((rng.choice(ordered), rng.choice(ordered)) for _ in range(200_000))
    for a, b in pairs:
        if images[a | b] != images[a] | images[b] or images[a & b] != images[a] & images[b]:
            bad = (a, b)
            break
    report.add("lattice", bad is None, bad, "unions and intersections are preserved")
    return report


# -- generators -----------------------------------------------------------------


def random_presentation(seed, levels: int = 3, max_points: int = 5, open_budget: int = 20_000) -> FamilyPresentation:
    """Random fractal family built so that all five axioms hold.

    Level-0 spaces are relabelled copies of one small topology. Each child
    adds fresh points to a copy of its parent using a per-level template, so
    constituents of a level stay homeomorphic and the parent is an open
    subspace carrying the induced topology.
    """
    rng = random.Random(seed)
    counter = itertools.count()

    def fresh():
        return f"p{next(counter)}"

    for _ in range(1000):
        base_n = rng.randint(1, 2)
        base_shapes = enumerate_topologies(tuple(range(base_n)))
        base = rng.choice(base_shapes)
        n0 = rng.randint(1, 2)
        level0 = {}
        for t in range(n0):
            relabel = {p: fresh() for p in base.points}
            level0[f"L0_{t}"] = FiniteSpace([relabel[p] for p in base.points],
                                            [[relabel[p] for p in o] for o in base.opens], check=False)
        lvls = [level0]
        pmaps = []
        for n in range(1, levels):
            ext_n = rng.randint(1, 2)
            ext = rng.choice(enumerate_topologies(tuple(range(ext_n))))
            wedge = rng.random() < 0.5
            prev = lvls[-1]
            tags = list(prev)
            branches = [rng.randint(1, 2) for _ in tags]
            if sum(branches) <= len(tags):
                branches[rng.randrange(len(tags))] = 2
            new, pm = {}, {}
            for tag, b in zip(tags, branches):
                for c in range(b):
                    ctag = f"L{n}_{len(new)}"
                    new[ctag] = _extend(prev[tag], ext, wedge, fresh)
                    pm[ctag] = tag
            lvls.append(new)
            pmaps.append(pm)
        sizes_ok = all(len(s.points) <= max_points for lvl in lvls for s in lvl.values())
        budget_ok = all(math.prod(len(s.opens) for s in lvl.values()) <= open_budget for lvl in lvls)
        if sizes_ok and budget_ok:
            return FamilyPresentation(lvls, pmaps)
    raise RuntimeError("could not draw a presentation within the size budget")


def _extend(parent_space: FiniteSpace, ext: FiniteSpace, wedge: bool, fresh) -> FiniteSpace:
    relabel = {p: fresh() for p in ext.points}
    q_points = [relabel[p] for p in ext.points]
    q_opens = [frozenset(relabel[p] for p in o) for o in ext.opens]
    pts = list(parent_space.points) + q_points
    whole = parent_space.point_set
    if wedge:
        # New points only appear in opens that swallow the whole parent.
        opens = set(parent_space.opens) | {whole | v for v in q_opens}
    else:
        opens = {u | v for u in parent_space.opens for v in q_opens}
    return FiniteSpace(pts, opens, check=False)


def encode_stretching_tree(tree) -> FamilyPresentation:
    """Finite cut-point model of a one-dimensional stretching tree.

    The node ``]lo, hi[`` of sign string ``j`` is cut at the endpoints of its
    ancestors that fall strictly inside it. Its points are the resulting open
    cells and cut points; cells are open and each cut point's smallest open
    neighbourhood is the point with its two adjacent cells. Identifiers are
    shared across the tree so that inclusion of nodes is inclusion of point sets.
    """
    from .index_algebra import SignString

    if tree.base.dim != 1:
        raise DomainError("the cut-point encoding is defined for one-dimensional trees")
    levels, pmaps = [], []
    for n in range(tree.depth + 1):
        lvl = {}
        pm = {}
        for j, box in tree.level(n):
            side = box.sides[0]
            cuts = set()
            for m in range(n):
                anc = tree.nodes[SignString(j.signs[: m + 1])].sides[0]
                for e in (anc.lo, anc.hi):
                    if side.lo < e < side.hi:
                        cuts.add(e)
            lvl[str(j)] = _cut_space(side.lo, side.hi, sorted(cuts))
            if n:
                pm[str(j)] = j.signs[:-1]
        levels.append(lvl)
        if n:
            pmaps.append(pm)
    return FamilyPresentation(levels, pmaps)


def _cut_space(lo, hi, cuts) -> FiniteSpace:
    bounds = [lo] + list(cuts) + [hi]
    cells = [f"]{bounds[i]!r},{bounds[i + 1]!r}[" for i in range(len(bounds) - 1)]
    marks = [f"{{{c!r}}}" for c in cuts]
    points = [cells[0]]
    for i, m in enumerate(marks):
        points += [m, cells[i + 1]]
    basis = [frozenset([c]) for c in cells] + [frozenset([cells[i], m, cells[i + 1]]) for i, m in enumerate(marks)]
    opens = set()
    for r in range(len(basis) + 1):
        for combo in itertools.combinations(basis, r):
            opens.add(frozenset().union(*combo))
    return FiniteSpace(points, opens, check=False)
