"""Hypergraph state: levels, ownership and the per-vertex level buckets.

Every collection that the algorithms need in O(1) (owned edges, incident
edges, per-level buckets, strong/weak split, potential owners) is an
insertion-ordered ``dict`` used as an ordered set.  Iteration order is the
insertion order, so replays are deterministic regardless of hashing.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterator, Optional


class UsageError(ValueError):
    """An operation was called with arguments violating its preconditions."""


class PreconditionError(UsageError):
    """A whole-run precondition (e.g. offline mode needs known deletion times) is unmet."""


@dataclass(frozen=True)
class Constants:
    """Threshold multipliers of the O(r^2) algorithm.

    ``case`` scales the Case-1 threshold ``case * alpha^(l+2)``, ``conflict``
    is the conflicting-edge threshold and ``incidence`` the incidence bound.
    The defaults are the analysed values; ``scaled_to`` keeps the two
    differences that the analysis relies on (``case - conflict == 1`` and
    ``case - incidence == 2``).
    """

    case: int = 1000
    conflict: int = 999
    incidence: int = 998

    def __post_init__(self) -> None:
        if self.case < 2 or self.conflict != self.case - 1 or self.incidence != self.case - 2:
            raise UsageError(
                f"constants must be (k, k-1, k-2) with k >= 2, got "
                f"({self.case}, {self.conflict}, {self.incidence})"
            )

    @classmethod
    def scaled_to(cls, case: int) -> "Constants":
        return cls(case, case - 1, case - 2)


ANALYSIS_CONSTANTS = Constants()
TEST_CONSTANTS = Constants.scaled_to(10)


def level_cap(alpha: int, capacity: int) -> int:
    """Smallest L >= 0 with alpha**L >= capacity (exact integer arithmetic)."""
    if alpha < 2:
        raise UsageError(f"alpha must be >= 2, got {alpha}")
    L, power = 0, 1
    while power < capacity:
        power *= alpha
        L += 1
    return L


@dataclass
class Params:
    """Scheme parameters: rank bound, level base and level cap.

    ``capacity`` is the upper bound N on |V| + |E| (temporarily deleted edges
    included) that ``L`` was computed for.
    """

    r: int
    alpha: int
    capacity: int
    L: int

    @classmethod
    def build(
        cls,
        r: int,
        n_vertices: int,
        alpha_override: Optional[int] = None,
        faithful: bool = False,
    ) -> "Params":
        if r < 1:
            raise UsageError(f"rank bound must be >= 1, got {r}")
        if n_vertices < 1:
            raise UsageError(f"need at least one vertex, got {n_vertices}")
        if alpha_override is not None:
            if faithful:
                raise UsageError("alpha override is not allowed in faithful mode")
            alpha = int(alpha_override)
        else:
            alpha = max(2, 4 * r)
        capacity = max(2, 2 * n_vertices)
        return cls(r, alpha, capacity, level_cap(alpha, capacity))


class Vertex:
    __slots__ = ("id", "level", "matched", "owned", "incident", "by_level", "strong", "weak")

    def __init__(self, vid: int, n_levels: int, track: bool) -> None:
        self.id = vid
        self.level = -1
        self.matched: Optional[Edge] = None
        self.owned: dict[Edge, None] = {}
        self.incident: dict[Edge, None] = {}
        # by_level[l] holds incident edges of level l that this vertex does not own
        self.by_level: list[dict[Edge, None]] = [{} for _ in range(n_levels)]
        self.strong: Optional[dict[Edge, None]] = {} if track else None
        self.weak: Optional[dict[Edge, None]] = {} if track else None

    def __repr__(self) -> str:
        return f"Vertex({self.id}, level={self.level})"


class Edge:
    __slots__ = ("id", "endpoints", "level", "owner", "matched", "potential", "held", "held_by")

    def __init__(self, eid: int, endpoints: tuple[Vertex, ...]) -> None:
        self.id = eid
        self.endpoints = endpoints
        self.level = -1
        self.owner: Optional[Vertex] = None
        self.matched = False
        # endpoints at the edge's level (tracked by the O(r^2) variant only)
        self.potential: Optional[dict[Vertex, None]] = None
        # edges temporarily deleted while this one is matched
        self.held: dict[Edge, None] = {}
        self.held_by: Optional[Edge] = None

    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(x.id for x in self.endpoints)

    def __repr__(self) -> str:
        return f"Edge({self.id}, {self.vertex_ids()}, level={self.level})"


class HypergraphState:
    """Mutable leveled hypergraph shared by both matcher backends.

    ``track_potential`` enables the potential-owner sets and the strong/weak
    split of owned edges used by the O(r^2) backend.  Methods prefixed with
    ``_`` take ``Vertex``/``Edge`` objects and skip validation; the public
    counterparts take integer ids.
    """

    def __init__(
        self,
        n_vertices: int,
        r: int,
        alpha_override: Optional[int] = None,
        faithful: bool = False,
        track_potential: bool = False,
    ) -> None:
        self.params = Params.build(r, n_vertices, alpha_override, faithful)
        self.track = track_potential
        self.min_capacity = self.params.capacity
        n_levels = self.params.L + 1
        self.vertices = [Vertex(i, n_levels, track_potential) for i in range(n_vertices)]
        self.edges: dict[int, Edge] = {}
        self.held: dict[int, Edge] = {}
        self.pending: dict[int, Edge] = {}
        self.matching: dict[int, Edge] = {}
        self.ops = 0
        self.rebuilds = 0
        self._powers = [1]
        self._extend_powers()

    # ------------------------------------------------------------------ basics

    @property
    def alpha(self) -> int:
        return self.params.alpha

    @property
    def L(self) -> int:
        return self.params.L

    def power(self, k: int) -> int:
        """alpha**k for k >= 0, cached."""
        if k >= len(self._powers):
            self._extend_powers(k)
        return self._powers[k]

    def _extend_powers(self, upto: int = 0) -> None:
        target = max(upto, self.params.L + 4)
        while len(self._powers) <= target:
            self._powers.append(self._powers[-1] * self.params.alpha)

    def vertex(self, vid: int) -> Vertex:
        if not isinstance(vid, int) or not 0 <= vid < len(self.vertices):
            raise UsageError(f"unknown vertex {vid!r}")
        return self.vertices[vid]

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise UsageError(f"unknown or not-live edge {eid!r}") from None

    def size(self) -> int:
        """|V| + |E| counting temporarily deleted edges."""
        return len(self.vertices) + len(self.edges) + len(self.held) + len(self.pending)

    # ------------------------------------------------------------ placement

    def _unplace(self, e: Edge, x: Vertex) -> None:
        if e.owner is x:
            del x.owned[e]
            if self.track:
                if e in x.strong:
                    del x.strong[e]
                else:
                    del x.weak[e]
        else:
            del x.by_level[e.level][e]

    def _classify(self, e: Edge, owner: Vertex) -> None:
        if len(e.potential) > 1:
            owner.strong[e] = None
        else:
            owner.weak[e] = None

    def _add_edge(self, eid: int, endpoints: tuple[Vertex, ...]) -> Edge:
        e = Edge(eid, endpoints)
        owner = endpoints[0]
        for x in endpoints:
            if x.level > owner.level or (x.level == owner.level and x.id < owner.id):
                owner = x
        if owner.level < 0:
            raise UsageError(f"edge {eid} would get level -1; raise an endpoint first")
        lvl = owner.level
        e.level = lvl
        e.owner = owner
        for x in endpoints:
            x.incident[e] = None
            if x is owner:
                x.owned[e] = None
            else:
                x.by_level[lvl][e] = None
        if self.track:
            e.potential = {x: None for x in endpoints if x.level == lvl}
            self._classify(e, owner)
        self.edges[eid] = e
        self.ops += 3 * len(endpoints)
        return e

    def _remove_edge(self, e: Edge) -> None:
        for x in e.endpoints:
            del x.incident[e]
            self._unplace(e, x)
        del self.edges[e.id]
        self.ops += 2 * len(e.endpoints)

    def _set_owner(self, e: Edge, v: Vertex) -> None:
        """Make ``v`` own ``e`` and move ``e`` to level ``v.level``."""
        old = e.owner
        lvl = v.level
        if e.level == lvl:
            if old is not v:
                del old.owned[e]
                if self.track:
                    if e in old.strong:
                        del old.strong[e]
                    else:
                        del old.weak[e]
                old.by_level[lvl][e] = None
                del v.by_level[lvl][e]
                v.owned[e] = None
                e.owner = v
                self.ops += 4
            elif self.track:
                if e in v.strong:
                    del v.strong[e]
                else:
                    del v.weak[e]
            if self.track:
                self._classify(e, v)
                self.ops += 1
            return
        for x in e.endpoints:
            self._unplace(e, x)
        e.owner = v
        e.level = lvl
        for x in e.endpoints:
            if x is v:
                x.owned[e] = None
            else:
                x.by_level[lvl][e] = None
        self.ops += 2 * len(e.endpoints)
        if self.track:
            e.potential = {x: None for x in e.endpoints if x.level == lvl}
            self._classify(e, v)
            self.ops += len(e.endpoints)

    def _drop_potential(self, e: Edge, v: Vertex) -> None:
        pot = e.potential
        del pot[v]
        if len(pot) == 1:
            owner = e.owner
            del owner.strong[e]
            owner.weak[e] = None
        self.ops += 1

    def _add_potential(self, e: Edge, v: Vertex) -> None:
        pot = e.potential
        pot[v] = None
        if len(pot) == 2:
            owner = e.owner
            del owner.weak[e]
            owner.strong[e] = None
        self.ops += 1

    def _set_level(self, v: Vertex, ell: int) -> None:
        old = v.level
        if ell == old:
            return
        self.ops += 1
        if ell < old:
            v.level = ell
            if self.track:
                for e in v.by_level[old]:
                    self._drop_potential(e, v)
                if ell >= 0:
                    for e in v.by_level[ell]:
                        self._add_potential(e, v)
                for e in list(v.owned):
                    if e in v.strong:
                        pot = e.potential
                        del pot[v]
                        target = next(iter(pot))
                        self._set_owner(e, target)
                    else:
                        self._set_owner(e, self._argmax(e))
            else:
                for e in list(v.owned):
                    self._set_owner(e, self._argmax(e))
            return
        v.level = ell
        for e in list(v.owned):
            self._set_owner(e, v)
        for lvl in range(max(old, 0), ell):
            bucket = v.by_level[lvl]
            self.ops += 1
            if bucket:
                for e in list(bucket):
                    self._set_owner(e, v)
        if self.track:
            for e in v.by_level[ell]:
                self._add_potential(e, v)

    def _argmax(self, e: Edge) -> Vertex:
        best = e.endpoints[0]
        for x in e.endpoints:
            if x.level > best.level or (x.level == best.level and x.id < best.id):
                best = x
        self.ops += len(e.endpoints)
        return best

    def _tilde_levels(self, v: Vertex) -> Iterator[tuple[int, int]]:
        """Yield (l, o~_{v,l}) for l = level(v)+1 .. L."""
        total = len(v.owned)
        base = v.level
        if base >= 0:
            total += len(v.by_level[base])
        for lvl in range(base + 1, self.params.L + 1):
            self.ops += 1
            yield lvl, total
            total += len(v.by_level[lvl])

    def _tilde_o(self, v: Vertex, ell: int) -> int:
        total = len(v.owned)
        for lvl in range(max(v.level, 0), ell):
            total += len(v.by_level[lvl])
        self.ops += ell - v.level
        return total

    # ---------------------------------------------------------- matching M

    def _match(self, e: Edge) -> None:
        e.matched = True
        self.matching[e.id] = e
        for x in e.endpoints:
            x.matched = e
        self.ops += len(e.endpoints)

    def _unmatch(self, e: Edge) -> None:
        e.matched = False
        del self.matching[e.id]
        for x in e.endpoints:
            x.matched = None
        self.ops += len(e.endpoints)

    # --------------------------------------------------- temporary deletion

    def _hold(self, g: Edge, under: Edge) -> None:
        """Temporarily delete ``g``; matched edge ``under`` becomes responsible."""
        self._remove_edge(g)
        self.held[g.id] = g
        g.held_by = under
        under.held[g] = None
        self.ops += 1

    def _release(self, e: Edge) -> list[Edge]:
        """Detach D(e) from ``e``; the edges stay pending until reinserted."""
        out = list(e.held)
        for g in out:
            g.held_by = None
            del self.held[g.id]
            self.pending[g.id] = g
        e.held = {}
        self.ops += len(out)
        return out

    def _drop_held(self, g: Edge) -> None:
        """Adversary deletion of a temporarily deleted edge."""
        del self.held[g.id]
        if g.held_by is not None:
            del g.held_by.held[g]
            g.held_by = None
        self.ops += 1

    # ------------------------------------------------------------ public ops

    def add_edge(self, eid: int, vids) -> Edge:
        """Register an unmatched edge owned by its top endpoint (no matching logic)."""
        if eid in self.edges or eid in self.held or eid in self.pending:
            raise UsageError(f"edge id {eid} already in use")
        vids = tuple(vids)
        if not 1 <= len(vids) <= self.params.r or len(set(vids)) != len(vids):
            raise UsageError(f"edge {eid} needs 1..{self.params.r} distinct endpoints, got {vids}")
        return self._add_edge(eid, tuple(self.vertex(v) for v in vids))

    def remove_edge(self, eid: int) -> None:
        e = self.edge(eid)
        if e.matched:
            raise UsageError(f"edge {eid} is matched")
        self._remove_edge(e)

    def set_owner(self, eid: int, vid: int) -> None:
        e = self.edge(eid)
        v = self.vertex(vid)
        if v not in e.endpoints:
            raise UsageError(f"vertex {vid} is not an endpoint of edge {eid}")
        if any(x.level > v.level for x in e.endpoints):
            raise UsageError(f"vertex {vid} is not at the maximum level of edge {eid}")
        if self.track and e.level == v.level and v not in e.potential:
            raise UsageError(f"vertex {vid} is not a potential owner of edge {eid}")
        self._set_owner(e, v)

    def set_level(self, vid: int, ell: int) -> None:
        v = self.vertex(vid)
        if not isinstance(ell, int) or not -1 <= ell <= self.params.L:
            raise UsageError(f"level {ell!r} outside [-1, {self.params.L}]")
        self._set_level(v, ell)

    def tilde_o(self, vid: int, ell: int) -> int:
        v = self.vertex(vid)
        if not v.level < ell <= self.params.L:
            raise UsageError(f"level {ell} must lie in ({v.level}, {self.params.L}]")
        return self._tilde_o(v, ell)

    def rebuild_if_needed(self, extra: int = 0) -> bool:
        """Recompute N and L when |V|+|E| leaves [N/4, N]; returns True on rebuild."""
        count = self.size() + extra
        cap = self.params.capacity
        if count <= cap and not (count < cap // 4 and cap > self.min_capacity):
            return False
        new_cap = max(self.min_capacity, 2 * count)
        used = max(
            max((x.level for x in self.vertices), default=-1),
            max((e.level for e in self.edges.values()), default=-1),
        )
        new_L = max(level_cap(self.params.alpha, new_cap), used, 0)
        if new_L > self.params.L:
            grow = new_L - self.params.L
            for x in self.vertices:
                x.by_level.extend({} for _ in range(grow))
        elif new_L < self.params.L:
            for x in self.vertices:
                del x.by_level[new_L + 1:]
        self.params.capacity = new_cap
        self.params.L = new_L
        self._extend_powers()
        self.rebuilds += 1
        self.ops += count
        return True

    def digest(self) -> str:
        """SHA-256 over a canonical dump of levels, ownership and the matching."""
        h = hashlib.sha256()
        h.update(f"r={self.params.r};a={self.params.alpha};L={self.params.L}\n".encode())
        for x in self.vertices:
            m = x.matched.id if x.matched is not None else -1
            h.update(f"v{x.id}:{x.level}:{m}\n".encode())
        for eid in sorted(self.edges):
            e = self.edges[eid]
            pot = ""
            if self.track:
                pot = ",".join(str(x.id) for x in sorted(e.potential, key=lambda y: y.id))
            h.update(
                f"e{eid}:{e.vertex_ids()}:{e.level}:{e.owner.id}:{int(e.matched)}:{pot}\n".encode()
            )
        for eid in sorted(self.held):
            g = self.held[eid]
            h.update(f"h{eid}:{g.vertex_ids()}:{g.held_by.id}\n".encode())
        return h.hexdigest()
