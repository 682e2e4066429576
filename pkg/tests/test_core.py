from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynhyper.core import (
    ANALYSIS_CONSTANTS,
    TEST_CONSTANTS,
    Constants,
    HypergraphState,
    Params,
    UsageError,
    level_cap,
)
from dynhyper.oracle import verify_state

STRUCTURAL = {
    "collections",
    "potential-owners",
    "strong-weak",
    "owner-level",
    "incident-level",
    "unmatched-level",
}


def structural(state):
    return [v for v in verify_state(state).violations if v.check in STRUCTURAL]


@pytest.mark.parametrize("alpha, capacity, expected", [(2, 1, 0), (2, 2, 1), (2, 8, 3), (2, 9, 4), (8, 64, 2), (8, 65, 3)])
def test_level_cap(alpha, capacity, expected):
    assert level_cap(alpha, capacity) == expected
    assert alpha**expected >= capacity


def test_params_default_alpha_is_4r():
    p = Params.build(r=3, n_vertices=10)
    assert p.alpha == 12
    assert p.alpha**p.L >= p.capacity >= 10


def test_params_faithful_refuses_override():
    with pytest.raises(UsageError):
        Params.build(r=3, n_vertices=10, alpha_override=2, faithful=True)
    with pytest.raises(UsageError):
        Params.build(r=3, n_vertices=10, alpha_override=1)


def test_constants_relationships():
    assert (ANALYSIS_CONSTANTS.case, ANALYSIS_CONSTANTS.conflict, ANALYSIS_CONSTANTS.incidence) == (1000, 999, 998)
    assert (TEST_CONSTANTS.case, TEST_CONSTANTS.conflict, TEST_CONSTANTS.incidence) == (10, 9, 8)
    with pytest.raises(UsageError):
        Constants(10, 8, 7)
    with pytest.raises(UsageError):
        Constants.scaled_to(1)


def test_set_owner_same_owner_is_noop():
    s = HypergraphState(2, 2, alpha_override=2)
    s.set_level(0, 2)
    s.set_level(1, 1)
    s.add_edge(7, (0, 1))
    e = s.edges[7]
    assert e.owner.id == 0 and e.level == 2
    before = s.digest()
    s.set_owner(7, 0)
    assert s.digest() == before
    assert e.level == 2


@pytest.mark.parametrize("track", [False, True])
def test_set_owner_between_potential_owners(track):
    s = HypergraphState(3, 3, alpha_override=2, track_potential=track)
    s.set_level(0, 3)
    s.set_level(1, 3)
    s.set_level(2, 1)
    s.add_edge(1, (0, 1, 2))
    e = s.edges[1]
    assert e.owner.id == 0
    s.set_owner(1, 1)
    assert e.owner.id == 1 and e.level == 3
    assert e in s.vertices[1].owned and e in s.vertices[0].by_level[3]
    if track:
        assert e in s.vertices[1].strong
        assert {x.id for x in e.potential} == {0, 1}
    assert structural(s) == []


def test_set_owner_after_raise_moves_buckets_and_turns_weak():
    s = HypergraphState(2, 2, alpha_override=2, track_potential=True)
    s.set_level(0, 0)
    s.set_level(1, 0)
    s.add_edge(1, (0, 1))
    e = s.edges[1]
    assert e in s.vertices[0].strong
    s.set_level(0, 2)
    assert e.level == 2 and e.owner.id == 0
    assert e not in s.vertices[1].by_level[0]
    assert e in s.vertices[1].by_level[2]
    assert {x.id for x in e.potential} == {0}
    assert e in s.vertices[0].weak
    assert structural(s) == []


def test_set_owner_rejects_bad_arguments():
    s = HypergraphState(3, 2, alpha_override=2)
    s.set_level(0, 1)
    s.add_edge(1, (0, 1))
    with pytest.raises(UsageError):
        s.set_owner(1, 2)
    with pytest.raises(UsageError):
        s.set_owner(99, 0)
    with pytest.raises(UsageError):
        s.set_owner(1, 1)  # vertex 1 sits below the edge level


def test_set_level_from_minus_one_only_changes_level():
    s = HypergraphState(2, 2)
    s.set_level(0, 0)
    assert s.vertices[0].level == 0
    assert not s.vertices[0].owned


@pytest.mark.parametrize("track", [False, True])
def test_set_level_raise_takes_over_buckets(track):
    s = HypergraphState(3, 2, alpha_override=2, track_potential=track)
    s.set_level(0, 1)
    s.set_level(1, 2)
    s.set_level(2, 1)
    s.add_edge(1, (0, 2))
    s.add_edge(2, (1, 2))
    v = s.vertices[2]
    assert s.edges[1] in v.by_level[1] and s.edges[2] in v.by_level[2]
    s.set_level(2, 3)
    assert set(v.owned) == {s.edges[1], s.edges[2]}
    assert s.edges[1].level == 3 and s.edges[2].level == 3
    assert structural(s) == []


@pytest.mark.parametrize("track", [False, True])
def test_set_level_lower_rehomes_to_top_endpoint(track):
    s = HypergraphState(2, 2, alpha_override=2, track_potential=track)
    s.set_level(0, 2)
    s.set_level(1, 1)
    s.add_edge(1, (0, 1))
    e = s.edges[1]
    s.set_level(0, 0)
    assert e.owner.id == 1 and e.level == 1
    assert e in s.vertices[0].by_level[1]
    assert structural(s) == []


def test_set_level_lower_rehomes_strong_edge_to_other_potential_owner():
    s = HypergraphState(3, 3, alpha_override=2, track_potential=True)
    for v in (0, 1, 2):
        s.set_level(v, 2)
    s.add_edge(1, (0, 1, 2))
    e = s.edges[1]
    assert e.owner.id == 0 and e in s.vertices[0].strong
    s.set_level(0, 0)
    assert e.owner.id in (1, 2) and e.level == 2
    assert e in s.vertices[e.owner.id].strong
    s.set_level(e.owner.id, -1)
    assert e.level == 2 and e in e.owner.weak
    assert structural(s) == []


def test_set_level_rejects_out_of_range():
    s = HypergraphState(2, 2)
    with pytest.raises(UsageError):
        s.set_level(0, s.L + 1)
    with pytest.raises(UsageError):
        s.set_level(0, -2)
    with pytest.raises(UsageError):
        s.set_level(5, 0)


def test_tilde_o_sums_owned_and_buckets():
    s = HypergraphState(12, 2, alpha_override=2)
    s.set_level(9, 0)
    s.set_level(1, 0)
    s.set_level(2, 1)
    eid = 0
    for _ in range(3):
        eid += 1
        s.add_edge(eid, (9, 10))
    for _ in range(2):
        eid += 1
        s.add_edge(eid, (9, 1))
    for _ in range(5):
        eid += 1
        s.add_edge(eid, (9, 2))
    assert s.tilde_o(9, 2) == 10
    assert s.tilde_o(9, 1) == 3 + 2
    with pytest.raises(UsageError):
        s.tilde_o(9, 0)


def test_tilde_o_empty_vertex():
    s = HypergraphState(3, 2, alpha_override=2)
    assert all(s.tilde_o(0, ell) == 0 for ell in range(0, s.L + 1))


def test_rebuild_grows_and_preserves_state():
    s = HypergraphState(2, 2, alpha_override=2)
    assert not s.rebuild_if_needed()
    s.set_level(0, 0)
    for eid in range(1, 30):
        s.add_edge(eid, (0, 1))
    digest_edges = {e.id: (e.owner.id, e.level) for e in s.edges.values()}
    old_L = s.L
    assert s.rebuild_if_needed()
    assert s.params.capacity >= s.size()
    assert s.alpha**s.L >= s.params.capacity
    assert s.L > old_L
    assert {e.id: (e.owner.id, e.level) for e in s.edges.values()} == digest_edges
    assert structural(s) == []


def test_rebuild_shrinks_but_keeps_used_levels():
    s = HypergraphState(2, 2, alpha_override=2)
    s.set_level(0, 0)
    for eid in range(1, 40):
        s.add_edge(eid, (0, 1))
    s.rebuild_if_needed()
    s.set_level(0, s.L)
    top = s.L
    for eid in range(1, 40):
        s.remove_edge(eid)
    assert s.rebuild_if_needed()
    assert s.L == top
    assert s.vertices[0].level == top
    assert structural(s) == []


def test_digest_is_stable_and_sensitive():
    a = HypergraphState(3, 2)
    b = HypergraphState(3, 2)
    assert a.digest() == b.digest()
    a.set_level(0, 0)
    assert a.digest() != b.digest()


ops = st.lists(
    st.tuples(st.sampled_from(["add", "remove", "level"]), st.integers(0, 5), st.integers(0, 5), st.integers(-1, 4)),
    max_size=60,
)


@settings(max_examples=150, deadline=None)
@given(ops=ops, track=st.booleans())
def test_random_maintenance_keeps_collections_consistent(ops, track):
    s = HypergraphState(6, 3, alpha_override=2, track_potential=track)
    next_id = 1
    for kind, a, b, lvl in ops:
        if kind == "add":
            ends = tuple(sorted({a, b, (a + 1) % 6}))[:3]
            if max(s.vertices[x].level for x in ends) < 0:
                s.set_level(ends[0], 0)
            s.add_edge(next_id, ends)
            next_id += 1
        elif kind == "remove" and s.edges:
            s.remove_edge(sorted(s.edges)[a % len(s.edges)])
        elif kind == "level":
            v = s.vertices[a]
            target = min(lvl, s.L)
            # an edge may not be left with all endpoints at -1
            if target == -1 and any(
                max(x.level for x in e.endpoints if x is not v) < 0 for e in v.incident
            ):
                continue
            s.set_level(a, target)
        assert structural(s) == []
