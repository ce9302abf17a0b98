"""
Deleting the edge that carries mark 1, and auditing the preimage counts.

Let ``e`` be the marked arc of face 1 (arc 0) and ``e'`` its partner. After
removing both arcs, the new face permutation is obtained from the old one by
skipping removed arcs along the vertex rotation::

    tau1(a) = x,  x = tau(a); while x removed: x = tau(iota(x))

Four cases arise:

``DifferentFaces``
    ``e'`` lies in another face ``j``; faces 1 and ``j`` merge into the new
    face 1, other faces keep their relative order.
``SuccessiveArcs``
    ``e`` and ``e'`` are consecutive in face 1; a leaf vertex disappears.
``HandleCut``
    otherwise, and the remaining diagram is connected; face 1 splits into a
    face that stays number 1 and a new last face, genus drops by one.
``Split``
    otherwise, and the remaining diagram falls into two components, returned
    as an ordered pair (the one holding the arc after ``e`` first).

Successors are re-encoded canonically so that equal maps compare equal.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .arcs import (DiagramError, GluingDiagram, face_permutation, format_diagram, genus,
                   is_bicolored_valid, is_connected)
from .enumeration import ANY, BICOLORED, EnumerationTask, classify_class, enumerate_diagrams

DIFFERENT_FACES = "DifferentFaces"
SUCCESSIVE_ARCS = "SuccessiveArcs"
HANDLE_CUT = "HandleCut"
SPLIT = "Split"
CASES = (DIFFERENT_FACES, SUCCESSIVE_ARCS, HANDLE_CUT, SPLIT)


@dataclass(frozen=True)
class DeletionOutcome:
    case: str
    results: tuple[GluingDiagram, ...]

    @property
    def result(self) -> GluingDiagram:
        if len(self.results) != 1:
            raise ValueError(f"{self.case} produces a pair")
        return self.results[0]


class _Removal:
    """The arcs of a diagram with the marked edge of face 1 taken out."""

    def __init__(self, diagram: GluingDiagram, single_edge_ok: bool = False):
        if diagram.edges <= 1 and not single_edge_ok:
            raise DiagramError("deleting an edge needs at least two edges")
        if not is_connected(diagram):
            raise DiagramError(f"diagram is disconnected: {format_diagram(diagram)}")
        self.diagram = diagram
        self.tau = face_permutation(diagram.profile)
        self.iota = diagram.pairing
        self.starts = diagram.profile.starts()
        self.face = diagram.profile.face_of()
        self.partner = self.iota[0]
        self.removed = (0, self.partner)

    def tau1(self, a: int) -> int:
        x = self.tau[a]
        while x in self.removed:
            x = self.tau[self.iota[x]]
        return x

    def reachable(self, start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in (self.iota[a], self.tau1(a)):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen

    def classify(self) -> str:
        p = self.partner
        if self.face[p] != 0:
            return DIFFERENT_FACES
        if self.tau[0] == p or self.tau[p] == 0:
            return SUCCESSIVE_ARCS
        remaining = len(self.iota) - 2
        if len(self.reachable(self.tau[0])) == remaining:
            return HANDLE_CUT
        return SPLIT

    def encode(self, marks: list[int]) -> GluingDiagram:
        """Relabel the faces starting at ``marks`` block by block."""
        new_index = {}
        parts = []
        for mark in marks:
            a = mark
            size = 0
            while True:
                if a in new_index or a in self.removed:
                    raise AssertionError(f"face walk from arc {mark} is not a fresh cycle")
                new_index[a] = len(new_index)
                size += 1
                a = self.tau1(a)
                if a == mark:
                    break
            parts.append(size)
        pairing = [0] * len(new_index)
        for a, i in new_index.items():
            b = self.iota[a]
            if b not in new_index:
                raise AssertionError("component is not closed under the pairing")
            pairing[i] = new_index[b]
        return GluingDiagram(tuple(parts), tuple(pairing))

    def is_black(self, a: int) -> bool:
        return self.diagram.profile.offsets()[a] % 2 == 1

    def whiten(self, a: int) -> int:
        """Move a mark from a black arc to the next (white) arc."""
        return self.tau1(a) if self.is_black(a) else a


def classify(diagram: GluingDiagram) -> str:
    """Which of the four deletion cases applies to ``diagram``.

    The label is defined for a single edge too, although there is nothing
    left to delete into.
    """
    return _Removal(diagram, single_edge_ok=True).classify()


def delete_marked_edge(diagram: GluingDiagram, bicolored: bool = False) -> DeletionOutcome:
    """Delete the edge marked 1 and re-mark the result.

    In ``bicolored`` mode a successor face 1 whose new mark would be black is
    re-marked on the following white arc, so every successor is again a
    marked bicolored diagram.
    """
    r = _Removal(diagram)
    if bicolored and not is_bicolored_valid(diagram):
        raise DiagramError(f"not a bicolored diagram: {format_diagram(diagram)}")
    case = r.classify()
    tau, starts, p = r.tau, r.starts, r.partner
    others = starts[1:]

    if case == DIFFERENT_FACES:
        j = r.face[p]
        ej = starts[j]
        if ej != p:
            mark = ej
        elif diagram.profile.parts[0] > 1:
            mark = tau[0]
        else:
            assert diagram.profile.parts[j] > 1, "1-gon glued to 1-gon in a connected map"
            mark = tau[ej]
        if bicolored:
            mark = r.whiten(mark)
        rest = [s for i, s in enumerate(starts) if i not in (0, j)]
        return DeletionOutcome(case, (r.encode([mark] + rest),))

    if case == SUCCESSIVE_ARCS:
        leaf = p if tau[0] == p else 0
        mark = tau[leaf]
        if bicolored:
            mark = r.whiten(mark)
        return DeletionOutcome(case, (r.encode([mark] + others),))

    first, second = tau[0], tau[p]
    if bicolored:
        first, second = r.whiten(first), r.whiten(second)
    if case == HANDLE_CUT:
        return DeletionOutcome(case, (r.encode([first] + others + [second]),))

    comp = r.reachable(first)
    assert second not in comp
    one = r.encode([first] + [s for s in others if s in comp])
    two = r.encode([second] + [s for s in others if s not in comp])
    return DeletionOutcome(case, (one, two))


# auditing ----------------------------------------------------------------------

def expected_multiplicity(case: str, successors: tuple[GluingDiagram, ...], faces: int,
                          bicolored: bool = False) -> int:
    """How often each successor must appear, for a source class with ``faces`` faces."""
    if case == DIFFERENT_FACES:
        m = successors[0].profile.parts[0]
        if bicolored:
            h = m // 2
            return (faces - 1) * h * (h + 1) // 2
        return (m + 1) * (m + 2) * (faces - 1) // 2
    if case == SUCCESSIVE_ARCS:
        return 2
    if case == HANDLE_CUT:
        return 1
    return comb(faces - 1, successors[0].faces - 1)


class ClassCache:
    """Connected diagrams of each class, enumerated once per ``(N, K)``."""

    def __init__(self, bicolored: bool = False, max_arcs: Optional[int] = None):
        self.constraint = BICOLORED if bicolored else ANY
        self.max_arcs = max_arcs
        self._by_size: dict[tuple[int, int], dict[int, list[GluingDiagram]]] = {}

    def get(self, g: int, edges: int, faces: int) -> list[GluingDiagram]:
        if g < 0 or edges < 1 or faces < 1:
            return []
        key = (edges, faces)
        if key not in self._by_size:
            self._by_size[key] = classify_class(edges, faces, self.constraint, self.max_arcs)[0]
        return self._by_size[key].get(g, [])


@dataclass
class AuditReport:
    g: int
    edges: int
    faces: int
    bicolored: bool
    case_totals: dict[str, int] = field(default_factory=dict)
    checks: dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.checks.values())

    @property
    def violations(self) -> list[dict]:
        return [x for v in self.checks.values() for x in v["violations"]]

    def to_dict(self) -> dict:
        return {"g": self.g, "N": self.edges, "K": self.faces, "bicolored": self.bicolored,
                "passed": self.passed, "case_totals": self.case_totals, "checks": self.checks}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _key_text(successors):
    return " | ".join(format_diagram(d) for d in successors)


def _expected_successors(case, g, edges, faces, cache: ClassCache):
    n = edges - 1
    if case == DIFFERENT_FACES:
        return [(d,) for d in cache.get(g, n, faces - 1)]
    if case == SUCCESSIVE_ARCS:
        return [(d,) for d in cache.get(g, n, faces)]
    if case == HANDLE_CUT:
        return [(d,) for d in cache.get(g - 1, n, faces + 1)]
    pairs = []
    for n1 in range(1, n):
        for k1 in range(1, faces + 1):
            for g1 in range(g + 1):
                left = cache.get(g1, n1, k1)
                right = cache.get(g - g1, n - n1, faces + 1 - k1)
                pairs.extend((a, b) for a in left for b in right)
    return pairs


def audit_lemma_multiplicities(g: int, edges: int, faces: int, bicolored: bool = False,
                               workers: int = 1, max_arcs: Optional[int] = None,
                               cache: Optional[ClassCache] = None) -> AuditReport:
    """Delete the marked edge of every diagram in class ``(g, N, K)`` and check
    that each successor (or ordered pair) is hit exactly as often as the
    preimage count predicts, and that every possible successor is hit."""
    if edges <= 1:
        raise ValueError("the audit needs N >= 2")
    cache = cache or ClassCache(bicolored, max_arcs)
    tally: dict[str, Counter] = {c: Counter() for c in CASES}
    witness: dict[tuple, GluingDiagram] = {}
    constraint = BICOLORED if bicolored else ANY
    for w in range(workers):
        task = EnumerationTask(edges=edges, faces=faces, constraint=constraint,
                               worker_index=w, worker_total=workers)
        for d in enumerate_diagrams(task, max_arcs):
            if not is_connected(d) or genus(d) != g:
                continue
            out = delete_marked_edge(d, bicolored=bicolored)
            tally[out.case][out.results] += 1
            witness.setdefault(out.results, d)

    report = AuditReport(g, edges, faces, bicolored)
    report.case_totals = {c: sum(tally[c].values()) for c in CASES}
    for case in CASES:
        violations = []
        expected = _expected_successors(case, g, edges, faces, cache)
        expected_set = set(expected)
        for succ in expected:
            want = expected_multiplicity(case, succ, faces, bicolored)
            got = tally[case].get(succ, 0)
            if got != want:
                violations.append({"case": case, "successor": _key_text(succ), "expected": want,
                                   "observed": got,
                                   "witness": format_diagram(witness[succ]) if succ in witness else None})
        for succ, got in tally[case].items():
            if succ not in expected_set:
                violations.append({"case": case, "successor": _key_text(succ), "expected": 0,
                                   "observed": got, "witness": format_diagram(witness[succ])})
        report.checks[case] = {
            "passed": not violations, "successors": len(expected),
            "hits": report.case_totals[case], "violations": violations}
    return report


def audit_range(max_arcs_total: int = 10, bicolored: bool = False, workers: int = 1) -> list[AuditReport]:
    """Audit every nonempty class ``(g, N, K)`` with ``2 <= N`` and ``2N <= max_arcs_total``."""
    cache = ClassCache(bicolored, max(max_arcs_total, 2))
    reports = []
    for edges in range(2, max_arcs_total // 2 + 1):
        for faces in range(1, 2 * edges + 1):
            for g in range(0, edges // 2 + 1):
                if edges < faces + 2 * g - 1:
                    continue
                if not cache.get(g, edges, faces):
                    continue
                reports.append(audit_lemma_multiplicities(g, edges, faces, bicolored, workers,
                                                          max_arcs_total, cache))
    return reports
