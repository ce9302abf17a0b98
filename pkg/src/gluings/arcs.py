"""
Permutation model of marked polygon gluings.

A gluing of ``K`` polygons with ``2N`` sides in total is stored as a
:class:`FaceProfile` (the side counts of the polygons, in face order) and a
fixed-point-free involution on the arcs ``0 .. 2N-1``. Arcs are numbered face
by face, each face occupying a consecutive block whose first arc is the
marked arc of that face. The face permutation ``tau`` is therefore implied by
the profile; the vertex permutation is ``sigma = tau o iota``.

Example::

    >>> d = GluingDiagram.from_pairs((4,), [(0, 2), (1, 3)])
    >>> genus(d)
    1
    >>> format_diagram(d)
    'profile=4; pairing=(1 3)(2 4)'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

WHITE = "white"
BLACK = "black"


class DiagramError(ValueError):
    """Raised on malformed profiles, pairings or text forms."""


@dataclass(frozen=True)
class FaceProfile:
    """Ordered side counts ``(m_1, ..., m_K)`` of the glued polygons."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(m) for m in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise DiagramError("a profile needs at least one face")
        if any(m < 1 for m in parts):
            raise DiagramError(f"profile parts must be positive: {parts}")
        if sum(parts) % 2:
            raise DiagramError(f"profile {parts} has an odd number of arcs")

    @property
    def total_arcs(self) -> int:
        return sum(self.parts)

    @property
    def edges(self) -> int:
        return sum(self.parts) // 2

    @property
    def faces(self) -> int:
        return len(self.parts)

    def starts(self) -> list[int]:
        """First (marked) arc index of every face."""
        out, s = [], 0
        for m in self.parts:
            out.append(s)
            s += m
        return out

    def face_of(self) -> list[int]:
        """Face index (0-based) of every arc."""
        out = []
        for i, m in enumerate(self.parts):
            out.extend([i] * m)
        return out

    def offsets(self) -> list[int]:
        """Position of every arc inside its face block."""
        out = []
        for m in self.parts:
            out.extend(range(m))
        return out

    @property
    def all_even(self) -> bool:
        return all(m % 2 == 0 for m in self.parts)


def as_profile(profile) -> FaceProfile:
    if isinstance(profile, FaceProfile):
        return profile
    return FaceProfile(tuple(profile))


@dataclass(frozen=True)
class GluingDiagram:
    """A marked gluing: a face profile plus the arc pairing ``iota``.

    ``pairing[a]`` is the arc glued to ``a``.
    """

    profile: FaceProfile
    pairing: tuple[int, ...]

    def __post_init__(self):
        profile = as_profile(self.profile)
        pairing = tuple(int(b) for b in self.pairing)
        object.__setattr__(self, "profile", profile)
        object.__setattr__(self, "pairing", pairing)
        n = len(pairing)
        if n != profile.total_arcs:
            raise DiagramError(
                f"pairing acts on {n} arcs, profile {profile.parts} has {profile.total_arcs}")
        for a, b in enumerate(pairing):
            if not 0 <= b < n or b == a or pairing[b] != a:
                raise DiagramError(f"pairing is not a fixed-point-free involution at arc {a}")

    @classmethod
    def from_pairs(cls, profile, pairs: Iterable[Sequence[int]]) -> "GluingDiagram":
        profile = as_profile(profile)
        lookup = [-1] * profile.total_arcs
        for a, b in pairs:
            if lookup[a] != -1 or lookup[b] != -1:
                raise DiagramError(f"arc used twice in pair ({a} {b})")
            lookup[a] = b
            lookup[b] = a
        if -1 in lookup:
            raise DiagramError("pairing leaves arcs unmatched")
        return cls(profile, tuple(lookup))

    @property
    def edges(self) -> int:
        return len(self.pairing) // 2

    @property
    def faces(self) -> int:
        return self.profile.faces

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in enumerate(self.pairing) if a < b]

    def __str__(self):
        return format_diagram(self)


def face_permutation(profile) -> tuple[int, ...]:
    """The permutation ``tau`` cycling through each face block in order."""
    profile = as_profile(profile)
    tau = []
    s = 0
    for m in profile.parts:
        tau.extend(range(s + 1, s + m))
        tau.append(s)
        s += m
    return tuple(tau)


def vertex_permutation(diagram: GluingDiagram) -> tuple[int, ...]:
    """``sigma = tau o iota`` (apply the pairing first)."""
    tau = face_permutation(diagram.profile)
    return tuple(tau[b] for b in diagram.pairing)


def cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        a = start
        while not seen[a]:
            seen[a] = True
            cyc.append(a)
            a = perm[a]
        out.append(tuple(cyc))
    return out


def num_cycles(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    count = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        count += 1
        a = start
        while not seen[a]:
            seen[a] = True
            a = perm[a]
    return count


def num_vertices(diagram: GluingDiagram) -> int:
    return num_cycles(vertex_permutation(diagram))


def is_connected(diagram: GluingDiagram) -> bool:
    """Whether ``<iota, tau>`` acts transitively on the arcs."""
    n = len(diagram.pairing)
    if n == 0:
        return True
    tau = face_permutation(diagram.profile)
    iota = diagram.pairing
    seen = [False] * n
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        a = stack.pop()
        for b in (iota[a], tau[a]):
            if not seen[b]:
                seen[b] = True
                reached += 1
                stack.append(b)
    return reached == n


def euler_characteristic(diagram: GluingDiagram) -> int:
    return num_vertices(diagram) - diagram.edges + diagram.faces


def genus(diagram: GluingDiagram) -> int:
    """Genus of the surface of a connected diagram, from ``V - N + K = 2 - 2g``."""
    if not is_connected(diagram):
        raise DiagramError(f"genus of a disconnected diagram: {format_diagram(diagram)}")
    chi = euler_characteristic(diagram)
    assert chi <= 2 and chi % 2 == 0, f"impossible Euler characteristic {chi}"
    return (2 - chi) // 2


def _require_even(profile: FaceProfile):
    if not profile.all_even:
        raise DiagramError(f"profile {profile.parts} has an odd face; no proper bicoloring")


def arc_color(diagram: GluingDiagram, arc: int) -> str:
    """Colour of an arc: marked arcs are white, colours alternate around faces."""
    _require_even(diagram.profile)
    return WHITE if diagram.profile.offsets()[arc] % 2 == 0 else BLACK


def is_bicolored_valid(diagram: GluingDiagram) -> bool:
    """Whether every white arc is glued to a black arc."""
    _require_even(diagram.profile)
    parity = [o % 2 for o in diagram.profile.offsets()]
    return all(parity[a] != parity[b] for a, b in enumerate(diagram.pairing))


# text form ------------------------------------------------------------------

_TEXT_RE = re.compile(r"^\s*profile\s*=\s*([0-9,\s]+?)\s*;\s*pairing\s*=\s*((?:\(\s*\d+\s+\d+\s*\)\s*)*)$")
_PAIR_RE = re.compile(r"\(\s*(\d+)\s+(\d+)\s*\)")


def format_diagram(diagram: GluingDiagram) -> str:
    """Text form with 1-based arc indices, e.g. ``profile=2,2; pairing=(1 4)(2 3)``."""
    parts = ",".join(str(m) for m in diagram.profile.parts)
    pairs = "".join(f"({a + 1} {b + 1})" for a, b in diagram.pairs())
    return f"profile={parts}; pairing={pairs}"


def parse_diagram(text: str) -> GluingDiagram:
    """Inverse of :func:`format_diagram`."""
    m = _TEXT_RE.match(text)
    if m is None:
        raise DiagramError(f"cannot parse diagram {text!r}")
    try:
        parts = tuple(int(x) for x in m.group(1).split(","))
    except ValueError as exc:
        raise DiagramError(f"bad profile in {text!r}") from exc
    pairs = []
    for a, b in _PAIR_RE.findall(m.group(2)):
        a, b = int(a) - 1, int(b) - 1
        if a < 0 or b < 0:
            raise DiagramError("arc indices are 1-based")
        pairs.append((a, b))
    return GluingDiagram.from_pairs(parts, pairs)
