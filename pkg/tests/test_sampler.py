from __future__ import annotations

import numpy as np
import pytest

from dynhyper.core import Edge, UsageError, Vertex
from dynhyper.sampler import OfflineSampler, OnlineSampler, make_rng, sample_offline, sample_online

# upper 0.1% point of the chi-square distribution with 7 degrees of freedom
CHI2_7DF_999 = 24.322


def edges(ids):
    v = Vertex(0, 1, False)
    return [Edge(i, (v,)) for i in ids]


def test_online_uniform_chi_square():
    rng = make_rng(2024)
    space = list(range(8))
    draws = np.array([sample_online(space, rng) for _ in range(100_000)])
    counts = np.bincount(draws, minlength=8)
    expected = len(draws) / 8
    stat = float(((counts - expected) ** 2 / expected).sum())
    assert stat < CHI2_7DF_999


def test_online_sampler_is_seeded():
    space = edges(range(20))
    a = OnlineSampler(5)
    b = OnlineSampler(5)
    c = OnlineSampler(6)
    pa = [a.choose(space, 0, k).id for k in range(50)]
    pb = [b.choose(space, 0, k).id for k in range(50)]
    pc = [c.choose(space, 0, k).id for k in range(50)]
    assert pa == pb
    assert pa != pc
    assert len(a.records) == 50
    rec = a.records[3]
    assert (rec.step, rec.level, rec.space_size, rec.chosen, rec.strategy) == (3, 0, 20, pa[3], "online")


def test_offline_picks_latest_deletion():
    assert sample_offline([1, 2, 3], {1: 10, 2: 30, 3: 20}) == 2


def test_offline_ties_go_to_smallest_id():
    assert sample_offline([9, 4, 7], {9: 5, 4: 5, 7: 5}) == 4
    s = OfflineSampler({9: 5, 4: 5, 7: 1})
    assert s.choose(edges([9, 4, 7]), 2, 1).id == 4
    assert s.records[0].strategy == "offline"


def test_offline_missing_time_is_an_error():
    with pytest.raises(UsageError):
        sample_offline([1, 2], {1: 3})
    with pytest.raises(UsageError):
        OfflineSampler({1: 3}).choose(edges([1, 2]), 0, 1)


def test_empty_space_is_an_error():
    with pytest.raises(UsageError):
        sample_online([], make_rng(0))
    with pytest.raises(UsageError):
        sample_offline([], {})
    with pytest.raises(UsageError):
        OnlineSampler(0).choose([], 0, 0)
