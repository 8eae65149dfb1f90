import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from topex.errors import DomainError, SizeLimitError
from topex.finite_topology import (FamilyPresentation, FiniteSpace, check_expanding, check_refinement, coproduct,
                                   coproduct_characterizations_agree, coproduct_opens_by_membership,
                                   encode_stretching_tree, enumerate_topologies, expand_open, homeomorphism,
                                   is_coproduct_open, is_finer, is_topology, random_presentation, subspace,
                                   tagged_points, verify_fractal_family)
from topex.stretching import Interval, OpenBox, build_tree

SIERPINSKI = FiniteSpace("ab", [(), "a", "ab"])


def power_set(points):
    return [frozenset(c) for r in range(len(points) + 1) for c in itertools.combinations(points, r)]


# Number of labelled topologies on n points (OEIS A000798).
LABELLED_COUNTS = {1: 1, 2: 4, 3: 29, 4: 355}


def test_is_topology_examples():
    assert is_topology("ab", [(), "a", "ab"])
    v = is_topology("ab", [(), "a", "b"])
    assert not v and v.witness == frozenset("ab")
    assert is_topology("abc", power_set("abc"))


def test_is_topology_reports_violating_pair():
    v = is_topology("abc", [(), "a", "b", "abc"])
    assert not v and "union" in v.reason
    assert set(v.witness) == {frozenset("a"), frozenset("b")}
    v = is_topology("abc", [(), "ab", "bc", "abc"])
    assert not v and set(v.witness) == {frozenset("ab"), frozenset("bc")}


def test_is_topology_rejects_foreign_points():
    assert not is_topology("ab", [(), "ab", "c"])


def test_space_constructor_checks():
    with pytest.raises(DomainError):
        FiniteSpace("ab", [(), "a"])
    FiniteSpace("ab", [(), "a"], check=False)


def test_topology_counts_match_known_sequence():
    for n, count in LABELLED_COUNTS.items():
        if n <= 3:
            assert len(enumerate_topologies(tuple(range(n)))) == count


def test_subspace_examples():
    disc = FiniteSpace.discrete("abc")
    assert subspace(disc, "ab") == FiniteSpace.discrete("ab")
    assert subspace(SIERPINSKI, "b") == FiniteSpace.indiscrete("b")
    assert subspace(SIERPINSKI, "ab") == SIERPINSKI
    with pytest.raises(DomainError):
        subspace(SIERPINSKI, "c")


def test_coproduct_examples():
    cp = coproduct([SIERPINSKI, SIERPINSKI])
    assert len(cp.opens) == 9
    # brute-force: every set whose traces are open
    brute = {o for o in power_set(sorted(tagged_points([SIERPINSKI, SIERPINSKI]))) if
             all(frozenset(p for p, t in o if t == i) in SIERPINSKI.opens for i in (0, 1))}
    assert cp.opens == frozenset(brute)
    single = coproduct({"x": SIERPINSKI})
    assert {frozenset(p for p, _ in o) for o in single.opens} == SIERPINSKI.opens
    three = coproduct([FiniteSpace.indiscrete("pq"), SIERPINSKI, FiniteSpace.indiscrete("r")])
    assert len(three.opens) == 2 * 3 * 2


def test_coproduct_is_a_topology():
    cp = coproduct([SIERPINSKI, FiniteSpace.discrete("xy")])
    assert is_topology(cp.points, cp.opens)


def test_coproduct_cap():
    with pytest.raises(SizeLimitError):
        coproduct([FiniteSpace.discrete("abcd")] * 3, cap=1000)


def test_coproduct_membership():
    fam = {"u": SIERPINSKI, "v": SIERPINSKI}
    assert is_coproduct_open({("a", "u"), ("a", "v"), ("b", "v")}, fam)
    assert not is_coproduct_open({("b", "u")}, fam)
    assert not is_coproduct_open({("z", "u")}, fam)


def test_is_finer_examples():
    assert is_finer(SIERPINSKI, SIERPINSKI)
    assert is_finer(FiniteSpace.indiscrete("ab"), FiniteSpace.discrete("ab"))
    assert not is_finer(FiniteSpace.discrete("ab"), FiniteSpace.indiscrete("ab"))
    with pytest.raises(DomainError):
        is_finer(FiniteSpace.discrete("ab"), FiniteSpace.discrete("xy"), {"a": "x", "b": "x"})


def test_open_subset_criterion_exhaustive():
    for space in enumerate_topologies("abc"):
        for a in power_set("abc"):
            if a:
                assert is_finer(subspace(space, a), space) == (a in space.opens)


def test_homeomorphism_search():
    assert homeomorphism(SIERPINSKI, FiniteSpace("xy", [(), "y", "xy"])) == {"a": "y", "b": "x"}
    assert homeomorphism(SIERPINSKI, FiniteSpace.discrete("xy")) is None
    chain = FiniteSpace("abc", [(), "a", "ab", "abc"])
    vee = FiniteSpace("abc", [(), "a", "b", "ab", "abc"])
    assert homeomorphism(chain, vee) is None
    with pytest.raises(SizeLimitError):
        homeomorphism(FiniteSpace.discrete(range(8)), FiniteSpace.discrete("abcdefgh"))


def test_homeomorphism_classes_on_three_points():
    # 29 labelled topologies on 3 points fall into 9 homeomorphism classes.
    tops = enumerate_topologies("abc")
    classes = []
    for t in tops:
        for c in classes:
            if homeomorphism(c[0], t) is not None:
                c.append(t)
                break
        else:
            classes.append([t])
    assert len(classes) == 9
    for c in classes:
        for t in c:
            h = homeomorphism(c[0], t)
            assert {frozenset(h[p] for p in o) for o in c[0].opens} == t.opens


def _two_level(children_spaces, parent_space, parent_map):
    return FamilyPresentation([{"r": parent_space}, children_spaces], [parent_map])


def test_verify_examples_on_stretching_encoding():
    tree = build_tree(OpenBox((Interval(0.0, 1.0),)), (0.5, 0.25, 0.125), 2)
    pres = encode_stretching_tree(tree)
    report = verify_fractal_family(pres)
    assert report.passed, str(report)
    assert check_expanding(pres).passed


def test_encoding_shape():
    tree = build_tree(OpenBox((Interval(0.0, 1.0),)), (0.5, 0.25, 0.125), 2)
    pres = encode_stretching_tree(tree)
    for n, lvl in enumerate(pres.levels):
        assert len(lvl) == 2 ** (n + 1)
        for space in lvl.values():
            assert len(space.points) == 2 * n + 1
    # parent pieces form an open subset of each child
    for n in range(2):
        for child, par in pres.parent_maps[n].items():
            assert pres.levels[n][par].point_set in pres.levels[n + 1][child].opens


def test_axiom_i_fault():
    pres = FamilyPresentation([{"a": SIERPINSKI, "b": SIERPINSKI}, {"c": SIERPINSKI, "d": SIERPINSKI}],
                              [{"c": "a", "d": "b"}])
    assert not verify_fractal_family(pres)["i"].passed


def test_axiom_iv_fault_induced_topology():
    parent = FiniteSpace.discrete("ab")
    child_ok = FiniteSpace("abc", [(), "a", "b", "ab", "abc"])
    child_bad = FiniteSpace("abd", [(), "ab", "abd"])
    pres = _two_level({"x": child_ok, "y": child_bad}, parent, {"x": "r", "y": "r"})
    report = verify_fractal_family(pres)
    assert not report["iv"].passed
    assert report["iv"].witness[1] == "y"


def test_axiom_iv_tie_reports_both():
    p = {"u": FiniteSpace.discrete("a"), "v": FiniteSpace.discrete("b")}
    child = FiniteSpace.discrete("ab")
    pres = FamilyPresentation([p, {"x": child, "y": FiniteSpace.discrete("ac"), "z": FiniteSpace.discrete("bd")}],
                              [{"x": "u", "y": "u", "z": "v"}])
    report = verify_fractal_family(pres)
    assert not report["iv"].passed
    assert "u" in report["iv"].witness[2] and "v" in report["iv"].witness[2]


def test_axiom_iii_fault():
    pres = FamilyPresentation([{"r": FiniteSpace.discrete("a")},
                               {"x": FiniteSpace.discrete("ab"), "y": FiniteSpace("ac", [(), "a", "ac"])}],
                              [{"x": "r", "y": "r"}])
    assert not verify_fractal_family(pres)["iii"].passed


def test_axiom_v_fault():
    # the child's topology does not contain the parent's open {a}
    pres = FamilyPresentation([{"r": FiniteSpace.discrete("ab"), "s": FiniteSpace.discrete("cd")},
                               {"x": FiniteSpace("abe", [(), "ab", "abe"]),
                                "y": FiniteSpace("abf", [(), "ab", "abf"]),
                                "z": FiniteSpace("cdg", [(), "cd", "cdg"])}],
                              [{"x": "r", "y": "r", "z": "s"}])
    report = verify_fractal_family(pres)
    assert not report["v"].passed


def test_explicit_embeddings():
    pres = FamilyPresentation([{"r": FiniteSpace.discrete([0])}, {"x": FiniteSpace.discrete(["p", "q"]),
                                                                 "y": FiniteSpace.discrete(["s", "t"])}],
                              [{"x": "r", "y": "r"}], [{"x": {0: "p"}, "y": {0: "t"}}])
    assert verify_fractal_family(pres).passed
    assert expand_open(frozenset({(0, "r")}), pres, 0) == frozenset({("p", "x"), ("t", "y")})


def test_check_expanding_duplicate_parent_fault():
    a = FiniteSpace.discrete("a")
    pres = FamilyPresentation([{"u": a, "v": FiniteSpace.discrete("a")},
                               {"x": FiniteSpace.discrete("ab"), "y": FiniteSpace.discrete("ac"),
                                "z": FiniteSpace.discrete("ad")}],
                              [{"x": "u", "y": "v", "z": "u"}])
    assert not check_expanding(pres)["ii"].passed


def test_expand_open_examples():
    tree = build_tree(OpenBox((Interval(0.0, 1.0),)), (0.5, 0.25, 0.125), 2)
    pres = encode_stretching_tree(tree)
    assert expand_open(frozenset(), pres, 0) == frozenset()
    full = pres.coproduct(0).points
    image = expand_open(full, pres, 0)
    expected = {(p, c) for c, par in pres.parent_maps[0].items() for p in pres.levels[0][par].points}
    assert image == expected
    assert image < tagged_points(pres.levels[1])
    with pytest.raises(DomainError):
        expand_open(frozenset({next(iter(full))}) | {("nowhere", "+")}, pres, 0)


def test_refinement_chain_on_encoding():
    tree = build_tree(OpenBox((Interval(0.0, 1.0),)), (0.5, 0.25, 0.125), 2)
    pres = encode_stretching_tree(tree)
    for n in (0, 1):
        report = check_refinement(pres, n)
        assert report.passed, str(report)


def test_characterizations_on_sampled_large_level():
    tree = build_tree(OpenBox((Interval(0.0, 1.0),)), (0.5, 0.25, 0.125), 2)
    v = coproduct_characterizations_agree(encode_stretching_tree(tree).levels[2])
    assert v and "sampled" in v.reason


def test_membership_scan_matches_python_test():
    fam = {"s": SIERPINSKI, "d": FiniteSpace.discrete("xy")}
    pts = sorted(tagged_points(fam), key=repr)
    brute = {o for o in power_set(pts) if is_coproduct_open(o, fam)}
    assert coproduct_opens_by_membership(fam) == frozenset(brute)


topologies3 = enumerate_topologies("abc")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(topologies3), min_size=1, max_size=3))
def test_coproduct_properties(spaces):
    cp = coproduct(spaces)
    assert len(cp.opens) == math.prod(len(s.opens) for s in spaces)
    assert coproduct_characterizations_agree(spaces)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_fractal_family_implies_expanding(seed):
    pres = random_presentation(seed)
    assert verify_fractal_family(pres).passed
    assert check_expanding(pres).passed
    for n in range(pres.depth):
        assert check_refinement(pres, n).passed


def test_random_presentation_is_deterministic():
    a, b = random_presentation(7), random_presentation(7)
    assert a.levels == b.levels and a.parent_maps == b.parent_maps
