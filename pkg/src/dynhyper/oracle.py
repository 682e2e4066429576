"""Independent references: greedy maximal matching, a full state auditor and
an exact minimum vertex cover for tiny instances.

Audit check names (each violation carries one):

``disjoint``          matched edges share a vertex, or matched flags disagree
``maximal``           an edge of the adversary view (live or temporarily
                      deleted) has no matched endpoint
``maximal-live``      the same, restricted to live edges (diagnostic)
``free-level``        a vertex is at level -1 but matched, or unmatched above -1
``matched-level``     an endpoint of a matched edge is not at the edge's level
``unmatched-level``   an unmatched edge's level is not its top endpoint level
``owner-level``       an endpoint sits above the edge's owner
``incident-level``    a vertex sits above an incident edge's level
``held-edge``         a temporarily deleted edge lacks a matched, incident
                      responsible edge, or still appears in some collection
``held-bound``        a matched edge holds more than alpha^(level+1) edges
``collections``       owned/incident/bucket/back-reference inconsistency
``potential-owners``  a potential-owner set differs from the endpoints at the
                      edge's level
``strong-weak``       an owned edge is filed under the wrong strong/weak set
``adversary-view``    live plus held edges differ from the expected edge set
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .core import HypergraphState, UsageError


def naive_maximal_matching(
    edges: Mapping[int, Sequence[int]], preference: Optional[Iterable[int]] = None
) -> set[int]:
    """Greedy maximal matching scanning edge ids in ``preference`` order."""
    order = list(preference) if preference is not None else sorted(edges)
    used: set[int] = set()
    out: set[int] = set()
    for eid in order:
        ends = edges[eid]
        if not used.intersection(ends):
            out.add(eid)
            used.update(ends)
    return out


def is_matching(edges: Mapping[int, Sequence[int]], matching: Iterable[int]) -> bool:
    seen: set[int] = set()
    for eid in matching:
        for v in edges[eid]:
            if v in seen:
                return False
            seen.add(v)
    return True


def is_maximal(edges: Mapping[int, Sequence[int]], matching: Iterable[int]) -> bool:
    covered = {v for eid in matching for v in edges[eid]}
    return all(covered.intersection(ends) for ends in edges.values())


def opt_cover_bruteforce(edges: Iterable[Sequence[int]], max_vertices: int = 24) -> int:
    """Exact minimum vertex cover size by branching on an uncovered edge."""
    edge_list = [tuple(e) for e in edges]
    verts = sorted({v for e in edge_list for v in e})
    if len(verts) > max_vertices:
        raise UsageError(f"{len(verts)} vertices exceed the exhaustive limit of {max_vertices}")
    if any(len(e) == 0 for e in edge_list):
        raise UsageError("an empty edge cannot be covered")
    pos = {v: i for i, v in enumerate(verts)}
    masks = sorted({sum(1 << pos[v] for v in e) for e in edge_list}, key=lambda m: bin(m).count("1"))

    def coverable(chosen: int, budget: int) -> bool:
        for m in masks:
            if not m & chosen:
                if budget == 0:
                    return False
                bits = m
                while bits:
                    low = bits & -bits
                    if coverable(chosen | low, budget - 1):
                        return True
                    bits ^= low
                return False
        return True

    k = 0
    while not coverable(0, k):
        k += 1
    return k


@dataclass(frozen=True)
class Violation:
    check: str
    entity: str
    detail: str

    def to_line(self) -> str:
        return f"VIOLATION {self.check} {self.entity}: {self.detail}"


@dataclass
class AuditReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def checks(self) -> set[str]:
        return {v.check for v in self.violations}

    def add(self, check: str, entity: str, detail: str) -> None:
        self.violations.append(Violation(check, entity, detail))

    def to_text(self) -> str:
        if self.ok:
            return "OK\n"
        return "".join(v.to_line() + "\n" for v in self.violations)

    def to_records(self) -> list[dict]:
        return [asdict(v) for v in self.violations]

    def to_json(self) -> str:
        return json.dumps(self.to_records())


def verify_state(target, live: Optional[Mapping[int, Sequence[int]]] = None) -> AuditReport:
    """Audit a matcher (or bare state) against every structural invariant.

    ``live`` is the adversary's current edge set; when given, the union of
    live and temporarily deleted edges must equal it exactly.
    """
    st: HypergraphState = getattr(target, "state", target)
    rep = AuditReport()
    add = rep.add
    L = st.params.L
    track = st.track
    alpha_pow = st.power

    for x in st.vertices:
        name = f"v{x.id}"
        if not -1 <= x.level <= L:
            add("free-level", name, f"level {x.level} outside [-1, {L}]")
        if (x.level == -1) != (x.matched is None):
            state = "matched" if x.matched is not None else "unmatched"
            add("free-level", name, f"{state} vertex at level {x.level}")
        m = x.matched
        if m is not None:
            if not m.matched or st.matching.get(m.id) is not m:
                add("disjoint", name, f"points to edge {m.id} which is not in the matching")
            elif x not in m.endpoints:
                add("disjoint", name, f"points to matched edge {m.id} it does not belong to")
        if len(x.by_level) != L + 1:
            add("collections", name, f"{len(x.by_level)} level buckets for L={L}")
        bucket_total = 0
        for lvl, bucket in enumerate(x.by_level):
            bucket_total += len(bucket)
            for e in bucket:
                if e.level != lvl or e.owner is x or x not in e.endpoints or e not in x.incident:
                    add("collections", name, f"edge {e.id} misfiled in level bucket {lvl}")
        for e in x.owned:
            if e.owner is not x or e not in x.incident:
                add("collections", name, f"owned edge {e.id} has owner {getattr(e.owner, 'id', None)}")
        if len(x.incident) != len(x.owned) + bucket_total:
            add("collections", name, "incident edges are not exactly owned plus bucketed edges")
        for e in x.incident:
            if st.edges.get(e.id) is not e:
                add("collections", name, f"incident edge {e.id} is not live")
        if track:
            if len(x.strong) + len(x.weak) != len(x.owned) or any(
                e not in x.owned for e in (*x.strong, *x.weak)
            ):
                add("strong-weak", name, "strong and weak sets do not partition owned edges")

    seen: dict = {}
    for eid, e in st.matching.items():
        if st.edges.get(eid) is not e or not e.matched:
            add("disjoint", f"e{eid}", "matching entry is not a live matched edge")
        for x in e.endpoints:
            other = seen.get(x)
            if other is not None:
                add("disjoint", f"e{eid}", f"shares vertex {x.id} with matched edge {other.id}")
            seen[x] = e

    for eid, e in st.edges.items():
        name = f"e{eid}"
        ends = e.endpoints
        if e.id != eid:
            add("collections", name, f"stored under id {eid} but named {e.id}")
        if e.held_by is not None:
            add("held-edge", name, "live edge marked as temporarily deleted")
        if not 0 <= e.level <= L:
            add("collections", name, f"edge level {e.level} outside [0, {L}]")
        owner = e.owner
        top = max(x.level for x in ends)
        if owner is None or owner not in ends:
            add("collections", name, "owner is not an endpoint")
            continue
        if e not in owner.owned:
            add("collections", name, f"missing from owned set of v{owner.id}")
        if owner.level != e.level:
            add("collections", name, f"level {e.level} differs from owner level {owner.level}")
        for x in ends:
            if e not in x.incident:
                add("collections", name, f"missing from incident set of v{x.id}")
            if x is not owner and 0 <= e.level <= L and e not in x.by_level[e.level]:
                add("collections", name, f"missing from level bucket of v{x.id}")
            if x.level > owner.level:
                add("owner-level", name, f"v{x.id} at level {x.level} above owner v{owner.id} at {owner.level}")
            if x.level > e.level:
                add("incident-level", f"v{x.id}", f"level {x.level} above incident edge {eid} at {e.level}")
        if e.matched != (st.matching.get(eid) is e):
            add("disjoint", name, "matched flag disagrees with the matching")
        if e.matched:
            for x in ends:
                if x.level != e.level:
                    add("matched-level", name, f"endpoint v{x.id} at level {x.level}, edge at {e.level}")
                if x.matched is not e:
                    add("disjoint", name, f"endpoint v{x.id} does not point back")
            if len(e.held) > alpha_pow(e.level + 1):
                add("held-bound", name, f"holds {len(e.held)} edges at level {e.level}")
        else:
            if e.level != top:
                add("unmatched-level", name, f"level {e.level} but top endpoint level {top}")
            if e.held:
                add("held-edge", name, "unmatched edge still holds temporarily deleted edges")
            if not any(x.matched is not None for x in ends):
                add("maximal-live", name, "no endpoint is matched")
                add("maximal", name, "no endpoint is matched")
        for g in e.held:
            if g.held_by is not e or st.held.get(g.id) is not g:
                add("held-edge", f"e{g.id}", f"listed under e{eid} without back-reference")
        if track:
            pot = e.potential
            expect = [x for x in ends if x.level == e.level]
            if pot is None or set(pot) != set(expect) or len(pot) != len(expect):
                add("potential-owners", name, "potential owners differ from endpoints at edge level")
            elif (e in owner.strong) != (len(pot) > 1) or (e in owner.weak) == (e in owner.strong):
                add("strong-weak", name, f"filed as {'strong' if e in owner.strong else 'weak'} with {len(pot)} potential owners")

    for eid, g in st.held.items():
        name = f"e{eid}"
        resp = g.held_by
        if resp is None or not resp.matched or st.edges.get(resp.id) is not resp:
            add("held-edge", name, "responsible edge is missing or unmatched")
        elif g not in resp.held:
            add("held-edge", name, f"not listed under responsible edge {resp.id}")
        elif not set(g.endpoints).intersection(resp.endpoints):
            add("held-edge", name, f"shares no vertex with responsible edge {resp.id}")
        if eid in st.edges:
            add("held-edge", name, "both live and temporarily deleted")
        for x in g.endpoints:
            if g in x.incident or g in x.owned:
                add("held-edge", name, f"still in collections of v{x.id}")
        if not any(x.matched is not None for x in g.endpoints):
            add("maximal", name, "temporarily deleted edge has no matched endpoint")
    if st.pending:
        add("collections", "state", f"{len(st.pending)} released edges were never reinserted")

    if live is not None:
        view = set(st.edges) | set(st.held)
        want = set(live)
        for eid in sorted(want - view):
            add("adversary-view", f"e{eid}", "live edge is missing from the structure")
        for eid in sorted(view - want):
            add("adversary-view", f"e{eid}", "structure keeps an edge the adversary deleted")
        for eid in sorted(want & view):
            e = st.edges.get(eid) or st.held[eid]
            if tuple(e.vertex_ids()) != tuple(live[eid]):
                add("adversary-view", f"e{eid}", "endpoints differ from the adversary's edge")
    return rep
