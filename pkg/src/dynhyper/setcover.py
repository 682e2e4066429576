"""Set cover as vertex cover in a hypergraph.

Each set becomes a vertex and each element a hyperedge joining the sets that
contain it, so the rank equals the maximum element frequency f.  The
endpoints of any maximal matching form a vertex cover of size at most
f times the optimum.

Set-system file format::

    sets <m> universe <n> <f>
    element <id> <set> <set> ...

Set ids are 0-based vertex ids in [0, m).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import UsageError


class SetSystemError(UsageError):
    """Malformed set-system file or an invalid set system."""


@dataclass
class Hypergraph:
    n_vertices: int
    r: int
    edges: dict[int, tuple[int, ...]] = field(default_factory=dict)


@dataclass
class SetSystem:
    """``elements`` maps an element id to the ids of the sets containing it."""

    m: int
    elements: dict[int, tuple[int, ...]] = field(default_factory=dict)
    f: int = 0

    def __post_init__(self) -> None:
        if not self.f:
            self.f = max((len(s) for s in self.elements.values()), default=1)

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]]) -> "SetSystem":
        """Build from a list of sets given as iterables of element ids."""
        members: dict[int, list[int]] = {}
        for sid, items in enumerate(sets):
            for el in items:
                members.setdefault(el, []).append(sid)
        return cls(len(sets), {el: tuple(s) for el, s in sorted(members.items())})

    def sets(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.m)]
        for el, owners in self.elements.items():
            for sid in owners:
                out[sid].add(el)
        return out

    def validate(self) -> None:
        for el, owners in self.elements.items():
            if not owners:
                raise SetSystemError(f"element {el} is in no set and cannot be covered")
            if len(owners) > self.f:
                raise SetSystemError(f"element {el} is in {len(owners)} sets, frequency bound {self.f}")
            if len(set(owners)) != len(owners):
                raise SetSystemError(f"element {el} lists a set twice")
            for sid in owners:
                if not 0 <= sid < self.m:
                    raise SetSystemError(f"element {el} names unknown set {sid}")


def to_hypergraph(system: SetSystem) -> Hypergraph:
    if system.f < 1:
        raise UsageError("frequency bound must be >= 1")
    system.validate()
    return Hypergraph(system.m, system.f, dict(system.elements))


def from_hypergraph(graph: Hypergraph) -> SetSystem:
    return SetSystem(graph.n_vertices, dict(graph.edges), graph.r)


def extract_cover(matcher) -> set[int]:
    """Vertices of the maintained matching: a cover within factor r of optimal."""
    return matcher.cover()


def is_cover(edges: Mapping[int, Sequence[int]], cover: set[int]) -> bool:
    return all(cover.intersection(ends) for ends in edges.values())


class DynamicSetCover:
    """Element insertions and deletions delegated to a matcher.

    Element ids double as edge ids, so no translation table is kept.
    """

    def __init__(self, matcher) -> None:
        self.matcher = matcher

    def add_element(self, element: int, sets: Sequence[int]) -> None:
        self.matcher.insert(element, sets)

    def remove_element(self, element: int) -> None:
        self.matcher.delete(element)

    def cover(self) -> set[int]:
        return extract_cover(self.matcher)


def parse_set_system(text: str) -> SetSystem:
    header = None
    elements: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 5 or parts[0] != "sets" or parts[2] != "universe":
                raise SetSystemError(f"line {lineno}: expected 'sets <m> universe <n> <f>'")
            try:
                header = (int(parts[1]), int(parts[3]), int(parts[4]))
            except ValueError:
                raise SetSystemError(f"line {lineno}: non-integer header field") from None
            continue
        if parts[0] != "element" or len(parts) < 3:
            raise SetSystemError(f"line {lineno}: expected 'element <id> <set> ...'")
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise SetSystemError(f"line {lineno}: non-integer field") from None
        if nums[0] in elements:
            raise SetSystemError(f"line {lineno}: element {nums[0]} listed twice")
        elements[nums[0]] = tuple(nums[1:])
    if header is None:
        raise SetSystemError("missing 'sets' header")
    m, n, f = header
    if len(elements) > n:
        raise SetSystemError(f"{len(elements)} elements exceed declared universe size {n}")
    system = SetSystem(m, elements, f)
    system.validate()
    return system


def emit_set_system(system: SetSystem) -> str:
    lines = [f"sets {system.m} universe {len(system.elements)} {system.f}"]
    for el, owners in system.elements.items():
        lines.append("element " + " ".join(str(x) for x in (el, *owners)))
    return "\n".join(lines) + "\n"
