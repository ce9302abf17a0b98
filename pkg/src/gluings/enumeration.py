"""
Brute-force enumeration of marked gluings.

Every gluing is visited as a pair (profile, pairing). Pairings are generated
by always matching the smallest unpaired arc with each admissible larger
partner in increasing order, which gives a canonical lexicographic stream.
The first two matching decisions of every profile define *work units*; a
worker ``(index, total)`` processes the units whose global position is
congruent to ``index`` modulo ``total``, so the workers partition the search
space deterministically.

Two routes are provided. :func:`enumerate_diagrams` streams explicit
:class:`~gluings.arcs.GluingDiagram` objects. :func:`genus_spectrum` and the
``count_*`` functions use a counting kernel that tracks vertex cycles and face
connectivity incrementally along the matching search and never builds the
diagrams.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

from .arcs import FaceProfile, GluingDiagram, as_profile, face_permutation, genus, is_connected

DEFAULT_MAX_ARCS = 16
ANY = "any"
BICOLORED = "bicolored"
QUASIMARKED = "quasimarked"
_UNIT_DEPTH = 2


class ExhaustionBoundError(ValueError):
    """Raised when a class is too large to enumerate under the configured bound."""


def _check_bound(total_arcs: int, max_arcs: Optional[int]):
    bound = DEFAULT_MAX_ARCS if max_arcs is None else max_arcs
    if total_arcs > bound:
        raise ExhaustionBoundError(
            f"{total_arcs} arcs exceed the exhaustion bound of {bound}; "
            f"({total_arcs - 1})!! pairings per profile")


def compositions(total: int, parts: int, even_only: bool = False) -> Iterator[FaceProfile]:
    """Ordered compositions of ``total`` into ``parts`` positive parts, lexicographically."""
    if parts < 1 or total < 1:
        return
    if total % 2 or total < parts:
        # FaceProfile requires an even arc count
        return
    if even_only:
        for c in _compositions(total // 2, parts):
            yield FaceProfile(tuple(2 * m for m in c))
        return
    yield from (FaceProfile(c) for c in _compositions(total, parts))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class EnumerationTask:
    """What to enumerate and which slice of it.

    Either ``profile`` is fixed, or ``edges``/``faces`` select every
    composition of ``2 * edges`` into ``faces`` parts (all even under the
    bicolored constraints), optionally only those whose first part is
    ``first_part``.
    """

    profile: Optional[FaceProfile] = None
    edges: Optional[int] = None
    faces: Optional[int] = None
    constraint: str = ANY
    worker_index: int = 0
    worker_total: int = 1
    first_part: Optional[int] = None

    def __post_init__(self):
        if self.profile is not None:
            object.__setattr__(self, "profile", as_profile(self.profile))
        elif self.edges is None or self.faces is None:
            raise ValueError("a task needs a profile or (edges, faces)")
        if self.constraint not in (ANY, BICOLORED, QUASIMARKED):
            raise ValueError(f"unknown constraint {self.constraint!r}")
        if not 0 <= self.worker_index < self.worker_total:
            raise ValueError("worker_index must lie in [0, worker_total)")

    def profiles(self) -> list[FaceProfile]:
        if self.profile is not None:
            return [self.profile]
        even = self.constraint != ANY
        out = compositions(2 * self.edges, self.faces, even_only=even)
        if self.first_part is not None:
            out = (p for p in out if p.parts[0] == self.first_part)
        return list(out)


def _parity_pattern(profile: FaceProfile, shifts=None) -> list[int]:
    """Colour (0 white, 1 black) of every arc; ``shifts`` flips whole faces."""
    out = []
    for i, m in enumerate(profile.parts):
        s = shifts[i] if shifts else 0
        out.extend((o + s) % 2 for o in range(m))
    return out


def _prefixes(n, parity, depth):
    """All admissible sequences of the first ``depth`` matching decisions."""
    partner = [-1] * n
    out = []

    def rec(d, acc):
        a = 0
        while a < n and partner[a] >= 0:
            a += 1
        if d == depth or a == n:
            out.append(tuple(acc))
            return
        for b in range(a + 1, n):
            if partner[b] >= 0 or (parity is not None and parity[a] == parity[b]):
                continue
            partner[a] = b
            partner[b] = a
            acc.append((a, b))
            rec(d + 1, acc)
            acc.pop()
            partner[a] = partner[b] = -1

    rec(0, [])
    return out


def _units(task: EnumerationTask):
    """Work units ``(profile, colouring, prefix)`` assigned to this worker, in order."""
    shift_sets = [()]
    if task.constraint == QUASIMARKED:
        shift_sets = []
        k = task.faces if task.profile is None else task.profile.faces
        for mask in range(1 << k):
            shift_sets.append(tuple((mask >> i) & 1 for i in range(k)))
    position = 0
    for profile in task.profiles():
        for shifts in shift_sets:
            parity = None
            if task.constraint != ANY:
                parity = _parity_pattern(profile, shifts)
            for prefix in _prefixes(profile.total_arcs, parity, _UNIT_DEPTH):
                if position % task.worker_total == task.worker_index:
                    yield profile, parity, prefix
                position += 1


def enumerate_diagrams(task: EnumerationTask, max_arcs: Optional[int] = None) -> Iterator[GluingDiagram]:
    """Stream every diagram of the task's slice exactly once."""
    for profile in task.profiles():
        _check_bound(profile.total_arcs, max_arcs)
    for profile, parity, prefix in _units(task):
        yield from _complete(profile, parity, prefix)


def _complete(profile, parity, prefix):
    n = profile.total_arcs
    partner = [-1] * n
    for a, b in prefix:
        partner[a] = b
        partner[b] = a

    def rec(a):
        while a < n and partner[a] >= 0:
            a += 1
        if a == n:
            yield GluingDiagram(profile, tuple(partner))
            return
        for b in range(a + 1, n):
            if partner[b] >= 0 or (parity is not None and parity[a] == parity[b]):
                continue
            partner[a] = b
            partner[b] = a
            yield from rec(a + 1)
            partner[a] = partner[b] = -1

    yield from rec(0)


# counting kernel -------------------------------------------------------------

def _count_unit(parts, parity, prefix):
    """Tally of ``(vertex count, connected)`` over all completions of ``prefix``.

    The vertex permutation is grown as a partial injection: pairing ``a`` with
    ``b`` adds ``a -> tau(b)`` and ``b -> tau(a)``. Open chains are tracked by
    their endpoints (``head`` of a chain end, ``tail`` of a chain start), so
    closing a cycle and undoing a step are O(1). Faces are merged in a
    union-find without path compression so that unions can be rolled back.
    """
    n = sum(parts)
    k = len(parts)
    tau = face_permutation(parts)
    face = []
    for i, m in enumerate(parts):
        face.extend([i] * m)
    partner = [-1] * n
    head = list(range(n))
    tail = list(range(n))
    parent = list(range(k))
    size = [1] * k
    conn = Counter()
    disc = Counter()

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def link(a, b, cyc, comps):
        # returns undo record and updated counters
        partner[a] = b
        partner[b] = a
        y = tau[b]
        s = head[a]
        if s == y:
            cyc += 1
            m1 = None
        else:
            t = tail[y]
            tail[s] = t
            head[t] = s
            m1 = (s, t)
        y2 = tau[a]
        s2 = head[b]
        if s2 == y2:
            cyc += 1
            m2 = None
        else:
            t2 = tail[y2]
            tail[s2] = t2
            head[t2] = s2
            m2 = (s2, t2)
        ra, rb = find(face[a]), find(face[b])
        if ra != rb:
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            comps -= 1
            u = (ra, rb)
        else:
            u = None
        return (a, b, m1, m2, u), cyc, comps

    def unlink(rec):
        a, b, m1, m2, u = rec
        if u is not None:
            ra, rb = u
            parent[rb] = rb
            size[ra] -= size[rb]
        if m2 is not None:
            s2, t2 = m2
            tail[s2] = b
            head[t2] = tau[a]
        if m1 is not None:
            s, t = m1
            tail[s] = a
            head[t] = tau[b]
        partner[a] = partner[b] = -1

    cyc, comps = 0, k
    undo = []
    for a, b in prefix:
        r, cyc, comps = link(a, b, cyc, comps)
        undo.append(r)

    def search(a, cyc, comps, left):
        while partner[a] >= 0:
            a += 1
        for b in range(a + 1, n):
            if partner[b] >= 0 or (parity is not None and parity[a] == parity[b]):
                continue
            # inline of link() for the hot path
            partner[a] = b
            partner[b] = a
            c = cyc
            y = tau[b]
            s = head[a]
            if s == y:
                c += 1
                t = -1
            else:
                t = tail[y]
                tail[s] = t
                head[t] = s
            y2 = tau[a]
            s2 = head[b]
            if s2 == y2:
                c += 1
                t2 = -1
            else:
                t2 = tail[y2]
                tail[s2] = t2
                head[t2] = s2
            cm = comps
            ra = rb = -1
            if k > 1:
                ra = face[a]
                while parent[ra] != ra:
                    ra = parent[ra]
                rb = face[b]
                while parent[rb] != rb:
                    rb = parent[rb]
                if ra != rb:
                    if size[ra] < size[rb]:
                        ra, rb = rb, ra
                    parent[rb] = ra
                    size[ra] += size[rb]
                    cm -= 1
                else:
                    ra = -1
            if left == 2:
                if cm == 1:
                    conn[c] += 1
                else:
                    disc[c] += 1
            else:
                search(a + 1, c, cm, left - 2)
            if ra >= 0:
                parent[rb] = rb
                size[ra] -= size[rb]
            if t2 >= 0:
                tail[s2] = b
                head[t2] = y2
            if t >= 0:
                tail[s] = a
                head[t] = y
            partner[a] = partner[b] = -1

    left = n - 2 * len(prefix)
    if left == 0:
        if comps == 1:
            conn[cyc] += 1
        else:
            disc[cyc] += 1
    else:
        search(0, cyc, comps, left)
    for r in reversed(undo):
        unlink(r)
    return conn, disc


@dataclass
class Spectrum:
    """Per-genus counts of connected diagrams plus the disconnected count."""

    connected: dict[int, int]
    disconnected: int

    @property
    def total(self) -> int:
        return sum(self.connected.values()) + self.disconnected

    def __getitem__(self, g: int) -> int:
        return self.connected.get(g, 0)


def _run_slice(task: EnumerationTask) -> tuple[Counter, int]:
    by_genus = Counter()
    disconnected = 0
    for profile, parity, prefix in _units(task):
        conn, disc = _count_unit(profile.parts, parity, prefix)
        edges, faces = profile.edges, profile.faces
        for v, c in conn.items():
            chi = v - edges + faces
            assert chi <= 2 and chi % 2 == 0, f"impossible Euler characteristic {chi}"
            by_genus[(2 - chi) // 2] += c
        disconnected += sum(disc.values())
    return by_genus, disconnected


def run_workers(task: EnumerationTask, workers: int = 1, max_arcs: Optional[int] = None,
                jobs: Optional[int] = None) -> Spectrum:
    """Split ``task`` over ``workers`` slices, count each, and merge by addition.

    Slices run in a process pool of ``jobs`` processes (default: one per
    available CPU, at most ``workers``); with a single process they run in
    order in this process. The result does not depend on either number.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    for profile in task.profiles():
        _check_bound(profile.total_arcs, max_arcs)
    slices = [EnumerationTask(task.profile, task.edges, task.faces, task.constraint,
                              i, workers, task.first_part) for i in range(workers)]
    if jobs is None:
        jobs = min(workers, os.cpu_count() or 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_slice, slices))
    else:
        results = [_run_slice(t) for t in slices]
    by_genus = Counter()
    disconnected = 0
    for g, d in results:
        by_genus.update(g)
        disconnected += d
    return Spectrum(dict(sorted(by_genus.items())), disconnected)


def genus_spectrum(profile, constraint: str = ANY, workers: int = 1,
                   max_arcs: Optional[int] = None, jobs: Optional[int] = None) -> Spectrum:
    """Per-genus counts of all pairings of one profile.

    >>> genus_spectrum((4,)).connected
    {0: 2, 1: 1}
    """
    task = EnumerationTask(profile=as_profile(profile), constraint=constraint)
    return run_workers(task, workers, max_arcs, jobs)


def _empty_convention(g, edges, faces):
    # the zero-edge map is a sphere with one marked vertex
    return 1 if (g == 0 and faces == 1) else 0


def count_eps(g: int, edges: int, faces: int, workers: int = 1,
              max_arcs: Optional[int] = None, jobs: Optional[int] = None) -> int:
    """Number of connected genus-``g`` gluings of ``faces`` polygons with ``2*edges`` sides."""
    _check_args(g, edges, faces)
    if edges == 0:
        return _empty_convention(g, edges, faces)
    _check_bound(2 * edges, max_arcs)
    task = EnumerationTask(edges=edges, faces=faces)
    return run_workers(task, workers, max_arcs, jobs)[g]


def count_bicolored(g: int, edges: int, faces: int, workers: int = 1,
                    max_arcs: Optional[int] = None, jobs: Optional[int] = None) -> int:
    """Number of connected genus-``g`` bicolored gluings with white marked arcs."""
    _check_args(g, edges, faces)
    if edges == 0:
        return _empty_convention(g, edges, faces)
    _check_bound(2 * edges, max_arcs)
    task = EnumerationTask(edges=edges, faces=faces, constraint=BICOLORED)
    return run_workers(task, workers, max_arcs, jobs)[g]


def count_quasimarked(g: int, edges: int, faces: int, workers: int = 1,
                      max_arcs: Optional[int] = None, jobs: Optional[int] = None) -> int:
    """Bicolored gluings whose marked arcs may be of either colour."""
    _check_args(g, edges, faces)
    if edges == 0:
        return 2 * _empty_convention(g, edges, faces)
    _check_bound(2 * edges, max_arcs)
    task = EnumerationTask(edges=edges, faces=faces, constraint=QUASIMARKED)
    return run_workers(task, workers, max_arcs, jobs)[g]


def count_eps_tilde(total_arcs: int, first_face_arcs: int, faces: int, workers: int = 1,
                    max_arcs: Optional[int] = None, jobs: Optional[int] = None) -> int:
    """Connected planar gluings with ``total_arcs`` arcs whose face 1 has exactly
    ``first_face_arcs`` arcs."""
    if faces < 1:
        raise ValueError("faces must be >= 1")
    if (total_arcs < 1 or first_face_arcs < 1 or total_arcs % 2
            or total_arcs < first_face_arcs + faces - 1):
        return 0
    _check_bound(total_arcs, max_arcs)
    task = EnumerationTask(edges=total_arcs // 2, faces=faces, first_part=first_face_arcs)
    return run_workers(task, workers, max_arcs, jobs)[0]


def _check_args(g, edges, faces):
    if g < 0 or edges < 0 or faces < 1:
        raise ValueError(f"invalid class g={g}, N={edges}, K={faces}")


def classify_class(edges: int, faces: int, constraint: str = ANY,
                   max_arcs: Optional[int] = None) -> tuple[dict[int, list[GluingDiagram]], int]:
    """All connected diagrams with ``edges`` edges and ``faces`` faces, grouped by
    genus, plus the number of disconnected ones. Uses the explicit stream."""
    by_genus: dict[int, list[GluingDiagram]] = {}
    disconnected = 0
    if edges == 0:
        return by_genus, 0
    _check_bound(2 * edges, max_arcs)
    for d in enumerate_diagrams(EnumerationTask(edges=edges, faces=faces, constraint=constraint),
                                max_arcs):
        if is_connected(d):
            by_genus.setdefault(genus(d), []).append(d)
        else:
            disconnected += 1
    return by_genus, disconnected
