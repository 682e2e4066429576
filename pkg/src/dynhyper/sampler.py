"""Choosing one member of a sample space.

Online sampling draws uniformly with a counter-based generator (numpy's
Philox), so a seed fixes every draw.  Offline sampling needs the full update
sequence: it picks the member that the adversary deletes last, which is the
choice a uniformly random pick can only beat with small probability.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .core import UsageError


@dataclass(frozen=True)
class SampleRecord:
    step: int
    level: int
    space_size: int
    chosen: int
    strategy: str


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_online(space: Sequence, rng: np.random.Generator):
    """Uniformly random member of ``space``."""
    if len(space) == 0:
        raise UsageError("cannot sample from an empty set")
    return space[int(rng.integers(len(space)))]


def sample_offline(space: Sequence[Hashable], deletion_times: Mapping[Hashable, int]):
    """Member with the latest deletion time; ties go to the smallest id."""
    if len(space) == 0:
        raise UsageError("cannot sample from an empty set")
    best = None
    best_time = -1
    for item in space:
        try:
            t = deletion_times[item]
        except KeyError:
            raise UsageError(f"no recorded deletion time for edge {item!r}") from None
        if t > best_time or (t == best_time and item < best):
            best, best_time = item, t
    return best


class Sampler:
    """Base class: picks an Edge out of a list and logs the draw."""

    strategy = "abstract"

    def __init__(self) -> None:
        self.records: list[SampleRecord] = []

    def _pick(self, space: list):
        raise NotImplementedError

    def choose(self, space: list, level: int, step: int):
        if not space:
            raise UsageError("cannot sample from an empty set")
        chosen = self._pick(space)
        self.records.append(SampleRecord(step, level, len(space), chosen.id, self.strategy))
        return chosen


class OnlineSampler(Sampler):
    strategy = "online"

    def __init__(self, seed: int = 0) -> None:
        super().__init__()
        self.seed = seed
        self.rng = make_rng(seed)

    def _pick(self, space: list):
        return space[int(self.rng.integers(len(space)))]


class OfflineSampler(Sampler):
    """Deterministic choice from known future deletion times.

    ``deletion_times`` maps edge id to the step at which the adversary deletes
    it; the replay driver fills it in as edges are inserted.
    """

    strategy = "offline"

    def __init__(self, deletion_times: Optional[dict[int, int]] = None) -> None:
        super().__init__()
        self.deletion_times: dict[int, int] = {} if deletion_times is None else deletion_times

    def _pick(self, space: list):
        times = self.deletion_times
        best = None
        best_time = -1
        for e in space:
            try:
                t = times[e.id]
            except KeyError:
                raise UsageError(f"no recorded deletion time for edge {e.id}") from None
            if t > best_time or (t == best_time and e.id < best.id):
                best, best_time = e, t
        return best
