import json
from collections import Counter

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gluings.arcs import DiagramError, GluingDiagram, genus, is_bicolored_valid, is_connected, num_vertices
from gluings.deletion import (CASES, DIFFERENT_FACES, HANDLE_CUT, SPLIT, SUCCESSIVE_ARCS, ClassCache,
                              audit_lemma_multiplicities, audit_range, classify, delete_marked_edge,
                              expected_multiplicity)
from gluings.enumeration import BICOLORED, EnumerationTask, enumerate_diagrams
from gluings.formulas import closed_eps0_2, eps_one_face

from conftest import random_diagram


def D(parts, pairs):
    return GluingDiagram.from_pairs(parts, pairs)


def connected_diagrams(edges, faces, constraint="any"):
    task = EnumerationTask(edges=edges, faces=faces, constraint=constraint)
    return [d for d in enumerate_diagrams(task) if is_connected(d)]


def test_classify_examples():
    assert classify(D((4,), [(0, 1), (2, 3)])) == SUCCESSIVE_ARCS
    assert classify(D((4,), [(0, 2), (1, 3)])) == HANDLE_CUT
    assert classify(D((1, 1), [(0, 1)])) == DIFFERENT_FACES
    assert classify(D((4,), [(0, 3), (1, 2)])) == SUCCESSIVE_ARCS
    assert classify(D((6,), [(0, 3), (1, 2), (4, 5)])) == SPLIT


def test_delete_examples():
    out = delete_marked_edge(D((4,), [(0, 1), (2, 3)]))
    assert out.case == SUCCESSIVE_ARCS and out.result == D((2,), [(0, 1)])
    out = delete_marked_edge(D((4,), [(0, 2), (1, 3)]))
    assert out.case == HANDLE_CUT and out.result == D((1, 1), [(0, 1)])
    with pytest.raises(DiagramError):
        delete_marked_edge(D((1, 1), [(0, 1)]))


def test_split_is_ordered():
    # arcs 1,2 form a digon hanging after the marked arc; 4,5 the one before
    out = delete_marked_edge(D((6,), [(0, 3), (1, 2), (4, 5)]))
    assert out.case == SPLIT
    assert out.results == (D((2,), [(0, 1)]), D((2,), [(0, 1)]))
    with pytest.raises(ValueError):
        out.result


def test_rejects_bad_input():
    with pytest.raises(DiagramError):
        delete_marked_edge(D((2, 2), [(0, 1), (2, 3)]))
    with pytest.raises(DiagramError):
        classify(D((2, 2), [(0, 1), (2, 3)]))
    with pytest.raises(DiagramError):
        delete_marked_edge(D((2,), [(0, 1)]))
    with pytest.raises(DiagramError):
        delete_marked_edge(D((2, 2), [(0, 2), (1, 3)]), bicolored=True)


def check_bookkeeping(d, out):
    g, n, k, v = genus(d), d.edges, d.faces, num_vertices(d)
    res = out.results
    assert all(is_connected(r) and r.edges >= 1 for r in res)
    if out.case == DIFFERENT_FACES:
        (r,) = res
        assert (r.edges, r.faces, genus(r)) == (n - 1, k - 1, g)
    elif out.case == SUCCESSIVE_ARCS:
        (r,) = res
        assert (r.edges, r.faces, genus(r), num_vertices(r)) == (n - 1, k, g, v - 1)
    elif out.case == HANDLE_CUT:
        (r,) = res
        assert (r.edges, r.faces, genus(r)) == (n - 1, k + 1, g - 1)
    else:
        a, b = res
        assert a.edges + b.edges == n - 1
        assert a.faces + b.faces == k + 1
        assert genus(a) + genus(b) == g


@pytest.mark.parametrize("edges", [2, 3, 4])
def test_euler_bookkeeping_exhaustive(edges):
    seen = Counter()
    for k in range(1, 2 * edges + 1):
        for d in connected_diagrams(edges, k):
            out = delete_marked_edge(d)
            assert out.case == classify(d)
            check_bookkeeping(d, out)
            seen[out.case] += 1
            if genus(d) == 0:
                assert out.case != HANDLE_CUT
    assert set(seen) == set(CASES) or edges == 2


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=5).filter(lambda p: 4 <= sum(p) <= 16 and sum(p) % 2 == 0),
       st.randoms(use_true_random=False))
def test_euler_bookkeeping_random(parts, rnd):
    d = random_diagram(rnd, parts)
    assume(is_connected(d))
    check_bookkeeping(d, delete_marked_edge(d))


@pytest.mark.parametrize("edges", [2, 3, 4, 5])
def test_count_conservation_genus0_two_faces(edges):
    totals = Counter(delete_marked_edge(d).case for d in connected_diagrams(edges, 2) if genus(d) == 0)
    n = edges
    assert totals[DIFFERENT_FACES] == n * (2 * n - 1) * eps_one_face(0, n - 1)
    assert totals[SUCCESSIVE_ARCS] == 2 * closed_eps0_2(n - 1)
    assert totals[SPLIT] == 2 * sum(eps_one_face(0, i) * closed_eps0_2(n - i - 1) for i in range(1, n - 1))
    assert totals[HANDLE_CUT] == 0
    assert sum(totals.values()) == closed_eps0_2(n)


@pytest.mark.parametrize("edges", [2, 3, 4])
def test_bicolored_successors_stay_bicolored(edges):
    for k in range(1, edges + 1):
        for d in connected_diagrams(edges, k, BICOLORED):
            out = delete_marked_edge(d, bicolored=True)
            assert all(is_bicolored_valid(r) for r in out.results)
            check_bookkeeping(d, out)


def test_audit_examples():
    r = audit_lemma_multiplicities(0, 2, 1)
    assert r.passed and r.case_totals == {DIFFERENT_FACES: 0, SUCCESSIVE_ARCS: 2, HANDLE_CUT: 0, SPLIT: 0}
    assert r.checks[SUCCESSIVE_ARCS]["successors"] == 1
    r = audit_lemma_multiplicities(1, 2, 1)
    assert r.passed and r.case_totals[HANDLE_CUT] == 1 and r.checks[HANDLE_CUT]["successors"] == 1
    r = audit_lemma_multiplicities(0, 2, 2)
    assert r.passed
    # (1,3) and (3,1) merge into a 2-gon: (2+1)(2+2)/2 = 6 each
    assert r.case_totals[DIFFERENT_FACES] == 6


def test_audit_detects_wrong_multiplicity(monkeypatch):
    import gluings.deletion as dl
    monkeypatch.setattr(dl, "expected_multiplicity", lambda case, succ, faces, bicolored=False: 3)
    r = dl.audit_lemma_multiplicities(0, 2, 1)
    assert not r.passed
    v = r.violations[0]
    assert v["expected"] == 3 and v["observed"] == 2 and v["witness"].startswith("profile=")


def test_audit_report_json():
    r = audit_lemma_multiplicities(0, 3, 2)
    data = json.loads(r.to_json())
    assert data["passed"] is True and list(data["checks"]) == sorted(CASES)
    assert (data["g"], data["N"], data["K"]) == (0, 3, 2)


def test_expected_multiplicity_values():
    two = (D((2,), [(0, 1)]),)
    assert expected_multiplicity(DIFFERENT_FACES, two, 3) == 12
    assert expected_multiplicity(DIFFERENT_FACES, two, 3, bicolored=True) == 2
    assert expected_multiplicity(SUCCESSIVE_ARCS, two, 3) == 2
    assert expected_multiplicity(HANDLE_CUT, two, 3) == 1
    pair = (D((1, 1), [(0, 1)]), D((2,), [(0, 1)]))
    assert expected_multiplicity(SPLIT, pair, 4) == 3


@pytest.mark.parametrize("g, n, k", [(0, 3, 2), (1, 3, 1), (0, 4, 2), (1, 3, 2), (0, 3, 3)])
def test_audit_small_classes(g, n, k):
    assert audit_lemma_multiplicities(g, n, k).passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bicolored_two_face_audit(n):
    assert audit_lemma_multiplicities(0, n, 2, bicolored=True).passed


def test_audit_workers_invariant():
    one = audit_lemma_multiplicities(0, 3, 2, workers=1)
    many = audit_lemma_multiplicities(0, 3, 2, workers=8)
    assert one.to_dict() == many.to_dict()


def test_audit_range_small():
    reports = audit_range(8)
    assert reports and all(r.passed for r in reports)
    assert {(r.g, r.edges, r.faces) for r in reports} >= {(0, 2, 1), (1, 2, 1), (0, 4, 5), (2, 4, 1)}


def test_class_cache():
    cache = ClassCache()
    assert len(cache.get(0, 2, 1)) == 2
    assert cache.get(-1, 2, 1) == [] and cache.get(0, 0, 1) == []
    with pytest.raises(ValueError):
        audit_lemma_multiplicities(0, 1, 1)
