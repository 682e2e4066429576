from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynhyper.core import UsageError
from dynhyper.matcher_r2 import MatcherR2
from dynhyper.matcher_r3 import MatcherR3
from dynhyper.oracle import opt_cover_bruteforce
from dynhyper.setcover import (
    DynamicSetCover,
    SetSystem,
    SetSystemError,
    emit_set_system,
    from_hypergraph,
    is_cover,
    parse_set_system,
    to_hypergraph,
)

TEXT = """\
sets 3 universe 4 2
element 0 0 1
element 1 1 2
element 2 2
element 3 0 2
"""


def test_parse_and_reduce():
    system = parse_set_system(TEXT)
    assert (system.m, system.f) == (3, 2)
    assert system.sets() == [{0, 3}, {0, 1}, {1, 2, 3}]
    graph = to_hypergraph(system)
    assert (graph.n_vertices, graph.r) == (3, 2)
    assert graph.edges[3] == (0, 2)
    assert from_hypergraph(graph).elements == system.elements
    assert parse_set_system(emit_set_system(system)).elements == system.elements


def test_from_sets_infers_frequency():
    system = SetSystem.from_sets([{1, 2}, {2, 3}, {2}])
    assert system.elements == {1: (0,), 2: (0, 1, 2), 3: (1,)}
    assert system.f == 3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "sets 3 universe 4\n",
        "sets x universe 4 2\n",
        "sets 3 universe 4 2\nelem 0 1\n",
        "sets 3 universe 4 2\nelement 0\n",
        "sets 3 universe 4 2\nelement 0 a\n",
        "sets 3 universe 4 2\nelement 0 1\nelement 0 2\n",
        "sets 3 universe 4 2\nelement 0 0 1 2\n",
        "sets 3 universe 4 2\nelement 0 5\n",
        "sets 3 universe 4 2\nelement 0 1 1\n",
        "sets 3 universe 1 2\nelement 0 1\nelement 1 1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(SetSystemError):
        parse_set_system(text)


def test_set_system_error_is_a_usage_error():
    assert issubclass(SetSystemError, UsageError)


@pytest.mark.parametrize("backend", [MatcherR3, MatcherR2])
def test_dynamic_cover_tracks_elements(backend):
    graph = to_hypergraph(parse_set_system(TEXT))
    dyn = DynamicSetCover(backend(graph.n_vertices, graph.r, seed=1))
    for el, sets in graph.edges.items():
        dyn.add_element(el, sets)
        live = {k: v for k, v in graph.edges.items() if k <= el}
        assert is_cover(live, dyn.cover())
    assert len(dyn.cover()) <= graph.r * opt_cover_bruteforce(graph.edges.values())
    for el in list(graph.edges)[:2]:
        dyn.remove_element(el)
    rest = {k: v for k, v in graph.edges.items() if k > 1}
    assert is_cover(rest, dyn.cover())


systems = st.integers(1, 10).flatmap(
    lambda m: st.lists(st.lists(st.integers(0, m - 1), min_size=1, max_size=min(3, m), unique=True), max_size=12).map(
        lambda els: (m, els)
    )
)


@settings(max_examples=80, deadline=None)
@given(systems, st.integers(0, 2**16))
def test_cover_ratio_property(sys_, seed):
    m, els = sys_
    system = SetSystem(m, {i: tuple(s) for i, s in enumerate(els)}, 3)
    graph = to_hypergraph(system)
    for backend in (MatcherR3, MatcherR2):
        dyn = DynamicSetCover(backend(m, 3, alpha_override=3, seed=seed))
        for el, sets in graph.edges.items():
            dyn.add_element(el, sets)
        cover = dyn.cover()
        assert is_cover(graph.edges, cover)
        assert len(cover) <= 3 * opt_cover_bruteforce(graph.edges.values())
