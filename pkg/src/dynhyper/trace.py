"""Update traces: text format, validation, random generation and teardown.

Format (one record per line, ``#`` starts a comment)::

    trace v=<n> r=<r> seed=<u64>
    i <edge_id> <v1> ... <vk>
    d <edge_id>
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np


class TraceError(ValueError):
    """Malformed or semantically invalid trace."""

    def __init__(self, message: str, line: Optional[int] = None, event: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if event is not None:
            where.append(f"event {event}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.event = event


@dataclass(frozen=True)
class Insert:
    edge_id: int
    endpoints: tuple[int, ...]


@dataclass(frozen=True)
class Delete:
    edge_id: int


Event = Union[Insert, Delete]


@dataclass
class UpdateTrace:
    n_vertices: int
    r: int
    seed: int = 0
    events: list[Event] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    def validate(self) -> None:
        """Raise TraceError on the first semantically invalid event."""
        if self.n_vertices < 1 or self.r < 1:
            raise TraceError("header needs v >= 1 and r >= 1")
        live: set[int] = set()
        used: set[int] = set()
        for idx, ev in enumerate(self.events):
            if isinstance(ev, Insert):
                if ev.edge_id in used:
                    raise TraceError(f"edge id {ev.edge_id} reused", event=idx)
                k = len(ev.endpoints)
                if not 1 <= k <= self.r:
                    raise TraceError(f"edge {ev.edge_id} has {k} endpoints, rank bound {self.r}", event=idx)
                if len(set(ev.endpoints)) != k:
                    raise TraceError(f"edge {ev.edge_id} repeats an endpoint", event=idx)
                for v in ev.endpoints:
                    if not 0 <= v < self.n_vertices:
                        raise TraceError(f"vertex {v} out of range", event=idx)
                used.add(ev.edge_id)
                live.add(ev.edge_id)
            else:
                if ev.edge_id not in live:
                    raise TraceError(f"delete of non-live edge {ev.edge_id}", event=idx)
                live.remove(ev.edge_id)

    def live_after(self) -> dict[int, tuple[int, ...]]:
        live: dict[int, tuple[int, ...]] = {}
        for ev in self.events:
            if isinstance(ev, Insert):
                live[ev.edge_id] = ev.endpoints
            else:
                live.pop(ev.edge_id, None)
        return live

    def deletion_schedule(self) -> dict[int, int]:
        """Map edge id to the 1-based step at which it is deleted."""
        out: dict[int, int] = {}
        for step, ev in enumerate(self.events, start=1):
            if isinstance(ev, Delete):
                out[ev.edge_id] = step
        return out

    def has_teardown(self) -> bool:
        return not self.live_after()


_HEADER = re.compile(r"^trace\s+v=(\d+)\s+r=(\d+)\s+seed=(\d+)\s*$")


def parse_trace(text: str) -> UpdateTrace:
    """Parse the text format; errors carry the 1-based line number."""
    trace: Optional[UpdateTrace] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if trace is None:
            m = _HEADER.match(line)
            if m is None:
                raise TraceError("expected header 'trace v=<n> r=<r> seed=<u64>'", line=lineno)
            seed = int(m.group(3))
            if seed >= 2**64:
                raise TraceError("seed does not fit in 64 bits", line=lineno)
            trace = UpdateTrace(int(m.group(1)), int(m.group(2)), seed)
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise TraceError(f"non-integer field in {line!r}", line=lineno) from None
        if any(x < 0 for x in nums):
            raise TraceError("ids must be non-negative", line=lineno)
        if parts[0] == "i":
            if len(nums) < 2:
                raise TraceError("insert needs an edge id and at least one vertex", line=lineno)
            trace.events.append(Insert(nums[0], tuple(nums[1:])))
        elif parts[0] == "d":
            if len(nums) != 1:
                raise TraceError("delete takes exactly one edge id", line=lineno)
            trace.events.append(Delete(nums[0]))
        else:
            raise TraceError(f"unknown event kind {parts[0]!r}", line=lineno)
    if trace is None:
        raise TraceError("empty trace: missing header")
    return trace


def emit_trace(trace: UpdateTrace) -> str:
    lines = [f"trace v={trace.n_vertices} r={trace.r} seed={trace.seed}"]
    for ev in trace.events:
        if isinstance(ev, Insert):
            lines.append("i " + " ".join(str(x) for x in (ev.edge_id, *ev.endpoints)))
        else:
            lines.append(f"d {ev.edge_id}")
    return "\n".join(lines) + "\n"


def gen_random_trace(
    n_vertices: int,
    r: int,
    t: int,
    insert_bias: float = 0.6,
    seed: int = 0,
    min_size: int = 1,
) -> UpdateTrace:
    """Oblivious random trace: insert with probability ``insert_bias``.

    Inserted edges get a uniform size in [min_size, min(r, n)] and uniform
    distinct endpoints; deletions remove a uniform live edge (an insertion
    is forced when nothing is live).
    """
    if not 0.0 <= insert_bias <= 1.0:
        raise TraceError(f"insert bias {insert_bias} outside [0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    top = min(r, n_vertices)
    low = min(max(1, min_size), top)
    trace = UpdateTrace(n_vertices, r, seed)
    live: list[int] = []
    next_id = 1
    for _ in range(t):
        if not live or rng.random() < insert_bias:
            k = int(rng.integers(low, top + 1))
            ends = rng.choice(n_vertices, size=k, replace=False)
            trace.events.append(Insert(next_id, tuple(int(x) for x in ends)))
            live.append(next_id)
            next_id += 1
        else:
            j = int(rng.integers(len(live)))
            live[j], live[-1] = live[-1], live[j]
            trace.events.append(Delete(live.pop()))
    return trace


def append_teardown(trace: UpdateTrace, seed: Optional[int] = None) -> UpdateTrace:
    """Copy of ``trace`` that ends by deleting every remaining edge.

    Without a seed the remaining edges are deleted in insertion order,
    otherwise in a seeded random order.
    """
    rest = list(trace.live_after())
    if seed is not None:
        rng = np.random.Generator(np.random.Philox(seed))
        rest = [rest[i] for i in rng.permutation(len(rest))]
    out = UpdateTrace(trace.n_vertices, trace.r, trace.seed, list(trace.events))
    out.events.extend(Delete(eid) for eid in rest)
    return out


def read_trace(path: str) -> UpdateTrace:
    with open(path, encoding="utf-8") as fh:
        return parse_trace(fh.read())


def write_trace(trace: UpdateTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_trace(trace))
