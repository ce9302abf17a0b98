import itertools
import random

import pytest

from gluings.arcs import FaceProfile, GluingDiagram

ACCEPTANCE_RESULTS = {}


def all_matchings(n):
    """Perfect matchings of range(n) by brute force over permutations.

    Deliberately unrelated to the enumerator's recursive generator; usable
    for n <= 8.
    """
    seen = set()
    for perm in itertools.permutations(range(n)):
        pairs = frozenset(frozenset(perm[i:i + 2]) for i in range(0, n, 2))
        seen.add(pairs)
    out = []
    for pairs in seen:
        lookup = [0] * n
        for pair in pairs:
            a, b = tuple(pair)
            lookup[a], lookup[b] = b, a
        out.append(tuple(lookup))
    return sorted(out)


def random_diagram(rng, profile):
    profile = FaceProfile(tuple(profile))
    arcs = list(range(profile.total_arcs))
    rng.shuffle(arcs)
    return GluingDiagram.from_pairs(profile, zip(arcs[::2], arcs[1::2]))


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {line}")
