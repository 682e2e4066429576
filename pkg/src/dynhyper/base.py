"""Shared driver for the two dynamic matching backends.

Both backends keep a maximal matching of a rank-r hypergraph under edge
insertions and deletions.  Their repair procedures call each other
recursively; to keep the exact depth-first order without Python recursion,
each procedure is a generator that ``yield``s the sub-procedure it wants to
call, and :meth:`Matcher._run` drives the generators off an explicit stack.
A sub-procedure's ``return`` value is sent back into the caller.
"""
from __future__ import annotations

from typing import Generator, Iterable, Optional, Sequence

from .core import ANALYSIS_CONSTANTS, Constants, Edge, HypergraphState, UsageError, Vertex
from .instrumentation import EpochLog
from .sampler import OnlineSampler, Sampler

Proc = Generator["Proc", object, object]

# generator steps allowed inside one update before we assume a livelock
STEP_GUARD = 10_000_000


class Matcher:
    """Common interface: ``insert``, ``delete``, and read-only queries."""

    backend = "abstract"
    track_potential = False

    def __init__(
        self,
        n_vertices: int,
        r: int,
        *,
        alpha_override: Optional[int] = None,
        constants: Optional[Constants] = None,
        faithful: bool = False,
        sampler: Optional[Sampler] = None,
        seed: int = 0,
    ) -> None:
        if faithful and constants is not None and constants != ANALYSIS_CONSTANTS:
            raise UsageError("faithful mode requires the analysed constants")
        self.state = HypergraphState(
            n_vertices, r, alpha_override, faithful, track_potential=self.track_potential
        )
        self.constants = constants if constants is not None else ANALYSIS_CONSTANTS
        self.faithful = faithful
        self.sampler = sampler if sampler is not None else OnlineSampler(seed)
        self.log = EpochLog()
        self.step = 0
        self._restore: list[Edge] = []

    # ---------------------------------------------------------------- queries

    @property
    def r(self) -> int:
        return self.state.params.r

    @property
    def alpha(self) -> int:
        return self.state.params.alpha

    def is_matched(self, eid: int) -> bool:
        e = self.state.edges.get(eid)
        return e is not None and e.matched

    def matching(self) -> set[int]:
        return set(self.state.matching)

    def cover(self) -> set[int]:
        """Vertex set of the matched edges (an r-approximate vertex cover)."""
        return {x.id for e in self.state.matching.values() for x in e.endpoints}

    def level(self, vid: int) -> int:
        return self.state.vertex(vid).level

    def edge_level(self, eid: int) -> int:
        return self.state.edge(eid).level

    def live_edges(self) -> dict[int, tuple[int, ...]]:
        """Adversary view: live and temporarily deleted edges."""
        out = {eid: e.vertex_ids() for eid, e in self.state.edges.items()}
        out.update((eid, e.vertex_ids()) for eid, e in self.state.held.items())
        return out

    def digest(self) -> str:
        return self.state.digest()

    def stats(self) -> dict:
        return self.log.snapshot_stats(self.state.ops, self.step, self.r, self.alpha)

    # ---------------------------------------------------------------- updates

    def insert(self, eid: int, endpoints: Sequence[int]) -> None:
        st = self.state
        if eid in st.edges or eid in st.held or eid in st.pending:
            raise UsageError(f"edge id {eid} already in use")
        if not 1 <= len(endpoints) <= st.params.r:
            raise UsageError(f"edge {eid} has {len(endpoints)} endpoints, rank bound is {st.params.r}")
        verts = tuple(st.vertex(v) for v in endpoints)
        if len(set(endpoints)) != len(endpoints):
            raise UsageError(f"edge {eid} repeats an endpoint")
        self.step += 1
        st.rebuild_if_needed(extra=1)
        self._insert_edge(eid, verts)
        self._drain_restore()

    def delete(self, eid: int) -> None:
        st = self.state
        self.step += 1
        if eid in st.held:
            st._drop_held(st.held[eid])
        else:
            e = st.edges.get(eid)
            if e is None:
                raise UsageError(f"edge {eid} is not live")
            if e.matched:
                lvl = self.log.terminate(eid, self.step, natural=True)
                st._unmatch(e)
                self._restore.extend(st._release(e))
                st._remove_edge(e)
                self._run(self._after_removal(e, lvl, None))
            else:
                st._remove_edge(e)
        self._drain_restore()
        st.rebuild_if_needed()

    # -------------------------------------------------------------- internals

    def _insert_edge(self, eid: int, endpoints: tuple[Vertex, ...]) -> None:
        """Add an edge in a quiescent state and match it if it is free."""
        st = self.state
        free = True
        for x in endpoints:
            if x.matched is not None:
                free = False
                break
        if free:
            # every unmatched vertex sits at level -1 here
            for x in endpoints:
                st._set_level(x, 0)
            e = st._add_edge(eid, endpoints)
            st._match(e)
            self.log.create(eid, 0, self.step)
        else:
            st._add_edge(eid, endpoints)

    def _drain_restore(self) -> None:
        st = self.state
        # reinsertion never evicts, so it cannot release further edges
        batch, self._restore = self._restore, []
        for g in batch:
            if st.pending.pop(g.id, None) is not None:
                self._insert_edge(g.id, g.endpoints)

    def _run(self, root: Proc):
        stack = [root]
        value = None
        steps = 0
        result = None
        while stack:
            steps += 1
            if steps > STEP_GUARD:
                raise RuntimeError("repair procedure did not terminate")
            try:
                child = stack[-1].send(value)
            except StopIteration as stop:
                stack.pop()
                value = stop.value
                result = value
            else:
                stack.append(child)
                value = None
        return result

    def _evict(self, g: Edge, new_level: int) -> int:
        """Remove matched ``g`` from the matching (induced epoch end)."""
        st = self.state
        lvl = self.log.terminate(g.id, self.step, natural=False)
        st._unmatch(g)
        self._restore.extend(st._release(g))
        self.log.evicted(self.step, lvl, new_level)
        return lvl

    def _evict_incident(self, e: Edge, new_level: int) -> list[tuple[Edge, int]]:
        out = []
        for x in e.endpoints:
            g = x.matched
            if g is not None and g is not e:
                out.append((g, self._evict(g, new_level)))
        return out

    def _settle_match(self, e: Edge, v: Vertex) -> None:
        """Match ``e`` at level 0 with ``v`` as owner (all endpoints are free)."""
        st = self.state
        st._match(e)
        for x in e.endpoints:
            st._set_level(x, 0)
        st._set_owner(e, v)
        self.log.create(e.id, 0, self.step)

    def _after_removal(self, e: Edge, level: int, first: Optional[Vertex]) -> Proc:
        raise NotImplementedError

    def run_procedure(self, proc: Proc):
        """Run a repair procedure to completion and reinsert released edges."""
        result = self._run(proc)
        self._drain_restore()
        return result
