"""Fully dynamic maximal hypergraph matching in O(r^3) expected amortized time.

A vertex freed by a deletion either settles deterministically (it owns few
edges, so scanning them is cheap) or rises to a higher level and matches a
random owned edge, temporarily deleting the other owned edges so that the
random choice stays unpredictable to the adversary.
"""
from __future__ import annotations

from typing import Optional

from .base import Matcher, Proc
from .core import Edge, Vertex


class MatcherR3(Matcher):
    backend = "r3"
    track_potential = False

    def _after_removal(self, e: Edge, level: int, first: Optional[Vertex]) -> Proc:
        """Repair after matched ``e`` left the matching: handle its endpoints."""
        order = e.endpoints
        if first is not None:
            order = (first,) + tuple(x for x in e.endpoints if x is not first)
        for v in order:
            if v.matched is None:
                yield self._handle_free(v)

    def _handle_free(self, v: Vertex) -> Proc:
        if v.matched is not None:
            return
        st = self.state
        if len(v.owned) < st.power(v.level + 1):
            self._deterministic_settle(v)
        else:
            yield self._random_settle(v)

    def _deterministic_settle(self, v: Vertex) -> None:
        """Match a free owned edge, or drop ``v`` to level -1."""
        st = self.state
        found = None
        for e in v.owned:
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

    def _rise_level(self, v: Vertex) -> int:
        """Smallest l > level(v) with o~_{v,l} < alpha^(l+1)."""
        st = self.state
        lvl = st.L
        for ell, total in st._tilde_levels(v):
            if total < st.power(ell + 1):
                lvl = ell
                break
        return lvl

    def _random_settle(self, v: Vertex) -> Proc:
        st = self.state
        new = self._rise_level(v)
        st._set_level(v, new)
        space = list(v.owned)
        e = self.sampler.choose(space, new, self.step)
        threshold = st.power(new + 1)
        blocker = None
        for u in e.endpoints:
            if u is not v and st._tilde_o(u, new) >= threshold:
                blocker = u
                break
        if blocker is None:
            evicted = self._evict_incident(e, new)
            st._match(e)
            for u in e.endpoints:
                st._set_level(u, new)
            self.log.create(e.id, new, self.step)
            for g in space:
                if g is not e:
                    st._hold(g, e)
            for g, lvl in evicted:
                yield self._after_removal(g, lvl, None)
            return
        # blocker would own too many edges at the new level: settle v cheaply
        # and hand the repair over to the blocker one level up
        self._deterministic_settle(v)
        u = blocker
        g = u.matched
        lvl = self._evict(g, new) if g is not None else -1
        st._set_level(u, new)
        if g is not None:
            yield self._after_removal(g, lvl, u)
        else:
            yield self._handle_free(u)
