"""Left/right stretching of open intervals and boxes along sign strings.

For a base box with sides ``]a_k, b_k[`` and a decreasing schedule
``eps_0 > eps_1 > ...``, the node of sign string ``j`` of step ``n`` has sides

    ]a_k - sum(eps_i for i in I_minus(j)), b_k + sum(eps_i for i in I_plus(j))[

Sums run in ascending index order starting from ``0.0`` so that every code
path (scalar or kernel) produces bit-identical endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, step_cap, SizeLimitError
from .index_algebra import SignString, enumerate_lambda, parent, children, sign_partition
from .report import AxiomReport

# Relative tolerance for the equal-side-length check between nodes of one level.
SIDE_RTOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Open interval ``]lo, hi[`` with finite endpoints."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"interval endpoints must be finite, got ]{lo}, {hi}[ "
                              "(unbounded intervals cannot be stretched)")
        if not lo < hi:
            raise DomainError(f"empty interval ]{lo}, {hi}[")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self):
        return f"]{self.lo!r}, {self.hi!r}["


@dataclass(frozen=True)
class OpenBox:
    """Product of open intervals, one per coordinate."""

    sides: tuple[Interval, ...]

    def __post_init__(self):
        sides = tuple(s if isinstance(s, Interval) else Interval(*s) for s in self.sides)
        if not sides:
            raise DomainError("a box needs at least one side")
        object.__setattr__(self, "sides", sides)

    @classmethod
    def from_bounds(cls, lo: Sequence[float], hi: Sequence[float]) -> "OpenBox":
        if len(lo) != len(hi):
            raise DomainError("lower and upper bounds differ in dimension")
        return cls(tuple(Interval(a, b) for a, b in zip(lo, hi)))

    @classmethod
    def unit(cls, d: int = 1) -> "OpenBox":
        return cls(tuple(Interval(0.0, 1.0) for _ in range(d)))

    @property
    def dim(self) -> int:
        return len(self.sides)

    @property
    def lo(self) -> tuple[float, ...]:
        return tuple(s.lo for s in self.sides)

    @property
    def hi(self) -> tuple[float, ...]:
        return tuple(s.hi for s in self.sides)

    @property
    def volume(self) -> float:
        return math.prod(s.length for s in self.sides)

    def contains(self, other: "OpenBox") -> bool:
        """Componentwise inclusion ``other ⊆ self``."""
        return self.dim == other.dim and all(s.contains(o) for s, o in zip(self.sides, other.sides))

    def strictly_contains(self, other: "OpenBox") -> bool:
        return self.contains(other) and self != other

    def __str__(self):
        return " x ".join(str(s) for s in self.sides)


@dataclass(frozen=True)
class EpsilonSchedule:
    """Finite prefix ``eps_0 > eps_1 > ... > eps_N > 0`` of a stretching sequence."""

    eps: tuple[float, ...]

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps)
        if not eps:
            raise DomainError("epsilon schedule is empty")
        for i, e in enumerate(eps):
            if not (math.isfinite(e) and e > 0):
                raise DomainError(f"eps[{i}] = {e} is not a positive real")
            if i and not e < eps[i - 1]:
                raise DomainError(f"epsilon schedule must be strictly decreasing: eps[{i - 1}]={eps[i - 1]}, eps[{i}]={e}")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def coerce(cls, eps) -> "EpsilonSchedule":
        return eps if isinstance(eps, EpsilonSchedule) else cls(tuple(eps))

    def __len__(self):
        return len(self.eps)

    def __getitem__(self, i):
        return self.eps[i]


def _offsets(eps: EpsilonSchedule, j: SignString) -> tuple[float, float]:
    if j.step >= len(eps):
        raise DomainError(f"sign string {j} has step {j.step} but the schedule only has {len(eps)} terms")
    plus, minus = sign_partition(j)
    left = 0.0
    right = 0.0
    for i in range(j.step + 1):
        if i in minus:
            left = left + eps[i]
        else:
            right = right + eps[i]
    return left, right


def stretched_interval(base: Interval, eps, j) -> Interval:
    eps = EpsilonSchedule.coerce(eps)
    j = SignString.parse(j)
    left, right = _offsets(eps, j)
    return Interval(base.lo - left, base.hi + right)


def stretched_box(base: OpenBox, eps, j) -> OpenBox:
    """Stretch every side of ``base`` with the same sign string."""
    eps = EpsilonSchedule.coerce(eps)
    j = SignString.parse(j)
    left, right = _offsets(eps, j)
    return OpenBox(tuple(Interval(s.lo - left, s.hi + right) for s in base.sides))


@dataclass(frozen=True, eq=True)
class ExpansionTree:
    """Binary tree of stretched boxes for every sign string up to ``depth``."""

    base: OpenBox
    schedule: EpsilonSchedule
    depth: int
    nodes: Mapping[SignString, OpenBox]

    __hash__ = None

    def node(self, j) -> OpenBox:
        return self.nodes[SignString.parse(j)]

    def level(self, n: int) -> list[tuple[SignString, OpenBox]]:
        if not 0 <= n <= self.depth:
            raise DomainError(f"level {n} outside 0..{self.depth}")
        return sorted(((j, b) for j, b in self.nodes.items() if j.step == n), key=lambda kv: kv[0])

    def __iter__(self):
        return iter(sorted(self.nodes, key=lambda j: (j.step, j)))


def build_tree(base: OpenBox, eps, depth: int, cap: int | None = None) -> ExpansionTree:
    if isinstance(base, Interval):
        base = OpenBox((base,))
    eps = EpsilonSchedule.coerce(eps)
    if depth < 0:
        raise DomainError(f"depth must be non-negative, got {depth}")
    if depth >= len(eps):
        raise DomainError(f"depth {depth} needs {depth + 1} epsilon terms, schedule has {len(eps)}")
    if depth > step_cap(cap):
        raise SizeLimitError(f"depth {depth} exceeds the step cap {step_cap(cap)}")
    eps_arr = np.asarray(eps.eps, dtype=np.float64)
    lo = np.asarray(base.lo)
    hi = np.asarray(base.hi)
    nodes: dict[SignString, OpenBox] = {}
    for n in range(depth + 1):
        left, right = _kernels.stretch_offsets(eps_arr, n)
        for idx, j in enumerate(enumerate_lambda(n, cap)):
            nodes[j] = OpenBox(tuple(Interval(a - left[idx], b + right[idx]) for a, b in zip(lo.tolist(), hi.tolist())))
    return ExpansionTree(base, eps, depth, nodes)


def union_extent(tree: ExpansionTree, n: int) -> OpenBox:
    """Smallest box containing the union of the level-``n`` nodes."""
    boxes = [b for _, b in tree.level(n)]
    d = tree.base.dim
    return OpenBox(tuple(Interval(min(b.sides[k].lo for b in boxes), max(b.sides[k].hi for b in boxes))
                         for k in range(d)))


def coproduct_measure(tree: ExpansionTree, n: int) -> float:
    """Total volume of the disjoint union of the level-``n`` nodes."""
    return math.fsum(b.volume for _, b in tree.level(n))


def verify_stretching_axioms(tree: ExpansionTree) -> AxiomReport:
    """Check the five fractal-family conditions on every level of ``tree``."""
    if tree.depth < 1:
        raise DomainError("axiom verification needs depth >= 1")
    report = AxiomReport(f"stretching family, depth {tree.depth}")
    d = tree.base.dim

    levels = {n: tree.level(n) for n in range(tree.depth + 1)}

    bad = None
    for n in range(tree.depth + 1):
        expected = enumerate_lambda(n)
        got = [j for j, _ in levels[n]]
        if got != expected:
            missing = sorted(set(expected) - set(got))
            bad = (n, str(missing[0]) if missing else f"level {n} has {len(got)} nodes")
            break
        if n < tree.depth and not len(levels[n]) < 2 ** (n + 2):
            bad = (n, f"card {len(levels[n])}")
            break
    report.add("1 cardinality", bad is None, bad,
               "card level n = 2^(n+1) < card level n+1" if bad is None else "index set size mismatch")

    bad = None
    for j, b in sorted(tree.nodes.items()):
        if b.dim != d or not all(math.isfinite(s.lo) and math.isfinite(s.hi) and s.lo < s.hi for s in b.sides):
            bad = str(j)
            break
    report.add("2 open boxes", bad is None, bad, "every node is a bounded open box of the base dimension")

    bad = None
    for n, lvl in levels.items():
        ref = [s.length for s in lvl[0][1].sides]
        for j, b in lvl:
            if any(abs(s.length - r) > SIDE_RTOL * max(abs(r), 1.0) for s, r in zip(b.sides, ref)):
                bad = str(j)
                break
        if bad:
            break
    report.add("3 homeomorphic", bad is None, bad, "nodes of a level share side lengths")

    bad = None
    ambiguous = 0
    for n in range(1, tree.depth + 1):
        previous = levels[n - 1]
        for j, b in levels[n]:
            p = parent(j)
            pb = tree.nodes.get(p)
            if pb is None or not b.strictly_contains(pb):
                bad = bad or str(j)
                continue
            ambiguous += sum(1 for k, kb in previous if k != p and b.contains(kb)) > 0
    detail = "every node strictly contains the node of its parent string"
    if ambiguous:
        detail += f"; {ambiguous} node(s) also contain a non-parent node of the previous level"
    report.add("4 unique parent", bad is None, bad, detail)

    bad = None
    for n in range(tree.depth):
        for j, b in levels[n]:
            for c in children(j, cap=max(step_cap(), tree.depth)):
                cb = tree.nodes.get(c)
                if cb is None or not cb.strictly_contains(b):
                    bad = bad or str(c)
    report.add("5 children", bad is None, bad, "both one-step extensions exist and contain the node")
    return report
