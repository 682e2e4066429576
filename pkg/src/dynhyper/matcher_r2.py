"""Fully dynamic maximal hypergraph matching in O(r^2) expected amortized time.

Owned edges are split into strong ones (another endpoint shares the edge's
level, so that endpoint can take the edge over in O(1)) and weak ones.  The
deterministic settle scans weak edges only.  When an edge leaves the
matching, its free endpoints are repaired together by
:meth:`MatcherR2._handle_hyperedge`, which compares the tentative cost

    gamma(e) = max(sum of |S(v)|, r * sum of |W(v)|)   over free endpoints v

against the level thresholds and picks one of four repair strategies.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .base import Matcher, Proc
from .core import Constants, Edge, UsageError, Vertex


def classify_case(gamma: int, strong_costly: bool, level: int, alpha: int, constants: Constants) -> int:
    """Repair strategy (1-4) for tentative cost ``gamma`` at base level ``level``."""
    if gamma < constants.case * alpha ** (level + 2):
        return 1
    if strong_costly:
        return 2
    if gamma < alpha ** (level + 3):
        return 3
    return 4


class MatcherR2(Matcher):
    backend = "r2"
    track_potential = True

    # ------------------------------------------------------------ helpers

    def _free(self, e: Edge) -> list[Vertex]:
        self.state.ops += len(e.endpoints)
        return [x for x in e.endpoints if x.matched is None]

    def _cost(self, verts: Iterable[Vertex]) -> tuple[int, bool]:
        """(gamma, strong_costly) over ``verts``; ties count as strong-costly."""
        s = w = 0
        for x in verts:
            s += len(x.strong)
            w += len(x.weak)
        w *= self.state.params.r
        return (s if s >= w else w), s >= w

    def _live(self, g: Edge) -> bool:
        return self.state.edges.get(g.id) is g

    def _deterministic_settle(self, v: Vertex) -> None:
        """Match a free weak edge owned by ``v``, or drop ``v`` to level -1."""
        st = self.state
        found = None
        for e in v.weak:
            st.ops += len(e.endpoints)
            for x in e.endpoints:
                if x.matched is not None:
                    break
            else:
                found = e
                break
        if found is not None:
            self._settle_match(found, v)
        else:
            st._set_level(v, -1)

    def _settle_all(self, e: Edge) -> None:
        for x in e.endpoints:
            if x.matched is None:
                self._deterministic_settle(x)

    def _after_removal(self, e: Edge, level: int, first: Optional[Vertex]) -> Proc:
        yield self._handle_hyperedge(e, level)

    # ----------------------------------------------------- case dispatch

    def _classify(self, e: Edge, base: int) -> int:
        free = self._free(e)
        if not free:
            return 0
        gamma, strong = self._cost(free)
        return classify_case(gamma, strong, base, self.state.params.alpha, self.constants)

    def _handle_hyperedge(self, e: Edge, base: int) -> Proc:
        """Repair the free endpoints of ``e``, which sit at level ``base``."""
        case = self._classify(e, base)
        while case:
            self.log.cases[case] += 1
            if case == 1:
                self._settle_all(e)
                case = 0
            elif case == 2:
                case = yield self._case_strong(e, base)
            elif case == 3:
                case = yield self._case_weak(e, base)
            else:
                case = yield self._case_high(e, base)

    def _case_strong(self, e: Edge, base: int) -> Proc:
        """Strong-costly: lift the endpoint with most strong edges and resample."""
        st = self.state
        free = self._free(e)
        v = free[0]
        for x in free:
            if len(x.strong) > len(v.strong) or (len(x.strong) == len(v.strong) and x.id < v.id):
                v = x
        for x in free:
            if x is not v and x.matched is None:
                self._deterministic_settle(x)
        if v.matched is not None:
            return 0
        target = None
        for lvl, total in st._tilde_levels(v):
            if total > st.power(lvl):
                target = lvl
        if target is None:
            self.log.notes.append(f"step {self.step}: no level to lift vertex {v.id} to")
            self._deterministic_settle(v)
            return 0
        st._set_level(v, target)
        yield self._insert_hyperedge(list(v.owned))
        return 0

    def _conflict_partition(self, members: list[Edge], threshold: int) -> tuple[list[Edge], list[Edge]]:
        """Split ``members`` by whether an edge meets >= ``threshold`` others of them."""
        index: dict[Vertex, list[Edge]] = {}
        for g in members:
            for x in g.endpoints:
                index.setdefault(x, []).append(g)
        conflicting, calm = [], []
        work = 0
        for g in members:
            seen: set = set()
            hit = False
            for x in g.endpoints:
                for h in index[x]:
                    work += 1
                    if h is not g and h not in seen:
                        seen.add(h)
                        if len(seen) >= threshold:
                            hit = True
                            break
                if hit:
                    break
            (conflicting if hit else calm).append(g)
        self.state.ops += work + len(members)
        return conflicting, calm

    def _weak_members(self, free: list[Vertex]) -> list[Edge]:
        out = []
        for x in free:
            out.extend(x.weak)
        self.state.ops += len(out)
        return out

    def _case_weak(self, e: Edge, base: int) -> Proc:
        """Weak-costly with moderate cost: sample among (non-)conflicting weak edges."""
        st = self.state
        k1 = self.constants.case
        free = self._free(e)
        members = self._weak_members(free)
        threshold = self.constants.conflict * st.power(base + 1)
        conflicting, calm = self._conflict_partition(members, threshold)
        if len(conflicting) >= threshold:
            self.log.cases["3a"] += 1
            yield self._insert_hyperedge(conflicting)
            self._settle_all(e)
            return 0

        self.log.cases["3b"] += 1
        lower = st.power(base)
        by_owner: dict[Vertex, list[Edge]] = {x: [] for x in free}
        for g in calm:
            by_owner[g.owner].append(g)
        rounds = 0
        last: Optional[Edge] = None
        while True:
            free_now = sorted((x for x in free if x.matched is None), key=lambda x: x.id)
            if not free_now or self._cost(free_now)[1]:
                break
            pick = None
            for x in free_now:
                kept = [g for g in by_owner[x] if self._live(g) and g.owner is x and g in x.weak]
                by_owner[x] = kept
                st.ops += len(kept)
                if len(kept) > lower:
                    pick = x
                    break
            if pick is None:
                break
            last = yield self._insert_hyperedge(by_owner[pick])
            rounds += 1
        if rounds == 1:
            hit = set(last.endpoints)
            free_now = sorted((x for x in free if x.matched is None), key=lambda x: x.id)
            owners = set(free_now)
            rest = [
                g
                for g in members
                if self._live(g)
                and not g.matched
                and g.owner in owners
                and g in g.owner.weak
                and not any(x in hit for x in g.endpoints)
            ]
            st.ops += len(members)
            best: list[Edge] = []
            for x in free_now:
                sub = [g for g in rest if x in g.endpoints]
                if len(sub) > len(best):
                    best = sub
            if best and len(best) >= lower:
                yield self._insert_hyperedge(best)
                rounds += 1
            else:
                self.log.notes.append(
                    f"step {self.step}: second sample space too small ({len(best)} < {lower})"
                )
        self.log.loop_counts.append(rounds)
        free_now = [x for x in free if x.matched is None]
        if not free_now:
            return 0
        gamma, strong = self._cost(free_now)
        if strong:
            return 1 if gamma < k1 * st.power(base + 2) else 2
        for x in free_now:
            if x.matched is None:
                self._deterministic_settle(x)
        return 0

    def _case_high(self, e: Edge, base: int) -> Proc:
        """Weak-costly with very high cost: lift heavy endpoints one by one."""
        st = self.state
        free = self._free(e)
        heavy = st.power(base + 1)
        while True:
            pick = None
            for x in sorted(free, key=lambda y: y.id):
                if x.matched is None and len(x.weak) >= heavy:
                    pick = x
                    break
            if pick is None:
                break
            target = None
            for lvl, total in st._tilde_levels(pick):
                if total >= st.power(lvl):
                    target = lvl
            if target is None:
                self.log.notes.append(f"step {self.step}: no level to lift vertex {pick.id} to")
                self._deterministic_settle(pick)
                continue
            st._set_level(pick, target)
            yield self._insert_hyperedge(list(pick.owned))
        free_now = [x for x in free if x.matched is None]
        if not free_now:
            return 0
        gamma, strong = self._cost(free_now)
        if gamma < self.constants.case * st.power(base + 2):
            return 1
        return 2 if strong else 3

    # ------------------------------------------------- sampling and testing

    def _insert_hyperedge(self, space: list[Edge]) -> Proc:
        """Sample from ``space``, lift the sample's endpoints and test it."""
        st = self.state
        if not space:
            raise UsageError("cannot sample from an empty set")
        size = len(space)
        top = 0
        while top < st.L and size >= st.power(top + 1):
            top += 1
        e = self.sampler.choose(space, top, self.step)
        new = top
        for x in e.endpoints:
            if x.level > new:
                new = x.level
        evicted = self._evict_incident(e, new)
        for x in e.endpoints:
            st._set_level(x, new)
        yield self._test_and_insert(e, space, evicted)
        return e

    def _test_and_insert(
        self,
        e: Edge,
        space: Optional[Sequence[Edge]] = None,
        evicted: Sequence[tuple[Edge, int]] = (),
    ) -> Proc:
        """Match ``e`` if its endpoints are cheap at its level, else repair them."""
        st = self.state
        lvl = e.level
        gamma, _ = self._cost(e.endpoints)
        if gamma < self.constants.case * st.power(lvl + 2):
            st._match(e)
            self.log.create(e.id, lvl, self.step)
            if space:
                ends = set(e.endpoints)
                for g in space:
                    if g is not e and not g.matched and self._live(g):
                        for x in g.endpoints:
                            if x in ends:
                                st._hold(g, e)
                                break
                st.ops += len(space)
            for g, glvl in evicted:
                yield self._after_removal(g, glvl, None)
            return True
        yield self._handle_hyperedge(e, lvl)
        for g, glvl in evicted:
            yield self._after_removal(g, glvl, None)
        return False

    # ------------------------------------------------------- public probes

    def tentative_cost(self, eid: int) -> tuple[int, bool]:
        """(gamma, strong_costly) of a live edge over its currently free endpoints."""
        e = self.state.edge(eid)
        return self._cost(x for x in e.endpoints if x.matched is None)

    def conflict_partition(self, eid: int, base: Optional[int] = None) -> tuple[list[int], list[int]]:
        e = self.state.edge(eid)
        lvl = e.level if base is None else base
        members = self._weak_members([x for x in e.endpoints if x.matched is None])
        threshold = self.constants.conflict * self.state.power(lvl + 1)
        hit, calm = self._conflict_partition(members, threshold)
        return [g.id for g in hit], [g.id for g in calm]

    def test_and_insert(self, eid: int) -> bool:
        e = self.state.edge(eid)
        if e.matched or any(x.matched is not None for x in e.endpoints):
            raise UsageError(f"edge {eid} must be unmatched with free endpoints")
        if any(x.level != e.level for x in e.endpoints):
            raise UsageError(f"endpoints of edge {eid} must sit at the edge's level")
        return self.run_procedure(self._test_and_insert(e))

    def insert_hyperedge(self, eids: Sequence[int]) -> int:
        space = [self.state.edge(i) for i in eids]
        for g in space:
            if g.matched:
                raise UsageError(f"edge {g.id} is matched")
        chosen = self.run_procedure(self._insert_hyperedge(space))
        return chosen.id

    def handle_hyperedge(self, eid: int, base: Optional[int] = None) -> None:
        e = self.state.edge(eid)
        if e.matched:
            raise UsageError(f"edge {eid} is matched")
        self.run_procedure(self._handle_hyperedge(e, e.level if base is None else base))
