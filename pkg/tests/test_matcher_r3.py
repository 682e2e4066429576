from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynhyper.core import UsageError
from dynhyper.matcher_r3 import MatcherR3
from dynhyper.oracle import is_maximal, verify_state
from dynhyper.sampler import OfflineSampler
from dynhyper.trace import append_teardown, gen_random_trace


def test_insert_free_edge_matches_at_level_zero():
    m = MatcherR3(4, 3)
    m.insert(1, (0, 1, 2))
    assert m.is_matched(1)
    assert [m.level(v) for v in range(4)] == [0, 0, 0, -1]
    assert m.edge_level(1) == 0
    assert m.log.records[0].edge_id == 1 and m.log.records[0].created == 1


def test_insert_blocked_edge_is_owned_by_top_endpoint():
    m = MatcherR3(4, 2)
    m.insert(1, (1, 2))
    m.insert(2, (3, 2))
    e = m.state.edges[2]
    assert not e.matched and e.owner.id == 2 and e.level == 0
    assert m.level(3) == -1
    assert verify_state(m).ok


def test_delete_unmatched_edge_leaves_matching_alone():
    m = MatcherR3(3, 2)
    m.insert(1, (0, 1))
    m.insert(2, (1, 2))
    m.delete(2)
    assert m.matching() == {1}
    assert verify_state(m, {1: (0, 1)}).ok


def test_path_deletion_drops_blocked_vertex():
    m = MatcherR3(4, 2)
    for eid, ends in [(1, (0, 1)), (2, (1, 2)), (3, (2, 3))]:
        m.insert(eid, ends)
    assert m.matching() == {1, 3}
    m.delete(1)
    assert m.matching() == {3}
    assert m.level(0) == -1 and m.level(1) == -1
    assert m.state.edges[2].owner.id == 2
    assert verify_state(m, {2: (1, 2), 3: (2, 3)}).ok


def test_freed_vertex_rematches_deterministically():
    m = MatcherR3(3, 2)
    m.insert(1, (0, 1))
    m.insert(2, (0, 2))
    m.delete(1)
    assert m.matching() == {2}
    assert m.level(1) == -1
    assert verify_state(m, {2: (0, 2)}).ok


def test_usage_errors():
    m = MatcherR3(3, 2)
    m.insert(1, (0, 1))
    with pytest.raises(UsageError):
        m.insert(1, (1, 2))
    with pytest.raises(UsageError):
        m.insert(2, (0, 1, 2))
    with pytest.raises(UsageError):
        m.insert(3, (1, 1))
    with pytest.raises(UsageError):
        m.insert(4, (7,))
    with pytest.raises(UsageError):
        m.delete(9)


def test_random_settle_rises_and_holds_the_rest():
    # vertex 0 owns two edges when its matched edge goes away; with alpha=2
    # that reaches alpha^1, so it rises to level 1 and matches a sample
    times = {2: 20, 3: 10}
    m = MatcherR3(4, 2, alpha_override=2, sampler=OfflineSampler(times))
    m.insert(1, (0, 1))
    m.insert(2, (0, 2))
    m.insert(3, (0, 3))
    m.delete(1)
    assert m.matching() == {2}
    assert m.edge_level(2) == 1
    assert m.level(0) == 1 and m.level(2) == 1
    assert set(m.state.held) == {3}
    assert m.state.held[3].held_by.id == 2
    assert m.sampler.records[-1].space_size == 2 and m.sampler.records[-1].level == 1
    live = {2: (0, 2), 3: (0, 3)}
    assert verify_state(m, live).ok
    # deleting the sample releases the held edge, which then gets matched
    m.delete(2)
    assert m.matching() == {3}
    assert not m.state.held
    assert verify_state(m, {3: (0, 3)}).ok
    assert [(r.edge_id, r.level, r.kind) for r in m.log.records] == [
        (1, 0, "natural"),
        (2, 1, "natural"),
        (3, 0, None),
    ]


def test_random_settle_hands_over_to_heavy_endpoint():
    # vertex 1 already owns many edges, so matching the sample {0,1} at
    # level 1 would overload it: vertex 0 settles cheaply and vertex 1
    # takes over the repair one level up
    times = {7: 55, 8: 50, 2: 65, 3: 60, 4: 90, 5: 70, 6: 80}
    m = MatcherR3(10, 2, alpha_override=2, sampler=OfflineSampler(times))
    m.insert(1, (0, 9))
    m.insert(2, (1, 3))
    for eid, w in zip(range(3, 7), range(4, 8)):
        m.insert(eid, (1, w))
    m.insert(7, (0, 1))
    m.insert(8, (0, 2))
    assert m.state.edges[7].owner.id == 0
    m.delete(1)
    chosen = [r.chosen for r in m.sampler.records]
    assert chosen == [7, 4]
    assert m.matching() == {8, 4}
    assert m.edge_level(8) == 0 and m.edge_level(4) == 2
    assert [(ev.evicted_level, ev.new_level) for ev in m.log.evictions] == [(0, 1)]
    assert set(m.state.held) == {2, 3, 5, 6, 7}
    assert len(m.state.held) <= m.alpha ** (m.edge_level(4) + 1)
    live = {2: (1, 3), 3: (1, 4), 4: (1, 5), 5: (1, 6), 6: (1, 7), 7: (0, 1), 8: (0, 2)}
    assert verify_state(m, live).ok


@settings(max_examples=120, deadline=None)
@given(
    n=st.integers(2, 9),
    r=st.integers(1, 4),
    t=st.integers(1, 120),
    seed=st.integers(0, 2**32),
    alpha=st.sampled_from([None, 2, 3]),
)
def test_random_traces_keep_every_invariant(audited, n, r, t, seed, alpha):
    trace = append_teardown(gen_random_trace(n, r, t, 0.6, seed))
    m = MatcherR3(n, r, alpha_override=alpha, seed=seed)
    assert audited(m, trace) == []
    assert not m.state.edges and not m.state.held
    assert all(m.level(v) == -1 for v in range(n))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 8), r=st.integers(2, 4), t=st.integers(1, 80), seed=st.integers(0, 2**32))
def test_cover_is_valid_and_matching_maximal(n, r, t, seed):
    trace = gen_random_trace(n, r, t, 0.7, seed)
    m = MatcherR3(n, r, alpha_override=2, seed=seed)
    for ev in trace.events:
        if hasattr(ev, "endpoints"):
            m.insert(ev.edge_id, ev.endpoints)
        else:
            m.delete(ev.edge_id)
    view = m.live_edges()
    assert view == trace.live_after()
    assert is_maximal(view, m.matching())
    assert all(set(ends) & m.cover() for ends in view.values())
