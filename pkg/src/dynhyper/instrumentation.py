"""Epoch bookkeeping, operation counts and run statistics.

An epoch is the lifetime of one edge inside the matching.  It ends either
naturally (the adversary deletes the edge) or is induced (the algorithm
evicts it).  The log also keeps the per-run observations that the tests
audit: evictions, the iteration count of the conflict loop and any
contract breaches the matchers notice while running.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional


class InstrumentationError(RuntimeError):
    """Epoch events arrived in an impossible order."""


@dataclass
class EpochRecord:
    edge_id: int
    level: int
    created: int
    terminated: Optional[int] = None
    kind: Optional[str] = None

    @property
    def duration(self) -> Optional[int]:
        return None if self.terminated is None else self.terminated - self.created


@dataclass(frozen=True)
class Eviction:
    step: int
    evicted_level: int
    new_level: int


@dataclass
class EpochLog:
    records: list[EpochRecord] = field(default_factory=list)
    evictions: list[Eviction] = field(default_factory=list)
    loop_counts: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    per_level_deletions: Counter = field(default_factory=Counter)
    cases: Counter = field(default_factory=Counter)
    _open: dict[int, EpochRecord] = field(default_factory=dict)

    def record_epoch_event(self, kind: str, edge_id: int, level: int, step: int) -> EpochRecord:
        if kind == "create":
            if edge_id in self._open:
                raise InstrumentationError(f"edge {edge_id} already has an open epoch")
            rec = EpochRecord(edge_id, level, step)
            self.records.append(rec)
            self._open[edge_id] = rec
            return rec
        if kind not in ("natural", "induced"):
            raise InstrumentationError(f"unknown epoch event {kind!r}")
        rec = self._open.pop(edge_id, None)
        if rec is None:
            raise InstrumentationError(f"edge {edge_id} terminated without an open epoch")
        rec.terminated = step
        rec.kind = kind
        if kind == "natural":
            self.per_level_deletions[rec.level] += 1
        return rec

    def create(self, edge_id: int, level: int, step: int) -> None:
        self.record_epoch_event("create", edge_id, level, step)

    def terminate(self, edge_id: int, step: int, natural: bool) -> int:
        """Close the open epoch of ``edge_id`` and return its level."""
        rec = self.record_epoch_event("natural" if natural else "induced", edge_id, -1, step)
        return rec.level

    def open_level(self, edge_id: int) -> int:
        return self._open[edge_id].level

    def evicted(self, step: int, evicted_level: int, new_level: int) -> None:
        self.evictions.append(Eviction(step, evicted_level, new_level))

    def snapshot_stats(self, basic_ops: int, t: int, r: int, alpha: int) -> dict:
        by_level: Counter = Counter()
        natural: Counter = Counter()
        induced: Counter = Counter()
        durations: Counter = Counter()
        for rec in self.records:
            by_level[rec.level] += 1
            if rec.kind == "natural":
                natural[rec.level] += 1
            elif rec.kind == "induced":
                induced[rec.level] += 1
            if rec.terminated is not None:
                durations[duration_bucket(rec.terminated - rec.created)] += 1
        per_update = basic_ops / t if t else 0.0
        return {
            "r": r,
            "alpha": alpha,
            "t": t,
            "basic_ops": basic_ops,
            "ops_per_update": per_update,
            "ops_per_update_r2": per_update / (r * r) if r else 0.0,
            "epochs": len(self.records),
            "epochs_by_level": dict(sorted(by_level.items())),
            "natural_by_level": dict(sorted(natural.items())),
            "induced_by_level": dict(sorted(induced.items())),
            "duration_histogram": dict(sorted(durations.items())),
            "evictions": len(self.evictions),
        }


def duration_bucket(d: int) -> int:
    """Power-of-two bucket of an epoch duration: 0, 1, 2, 4, 8, ..."""
    if d <= 0:
        return 0
    b = 1
    while b * 2 <= d:
        b *= 2
    return b


STAT_COLUMNS = ["r", "alpha", "t", "basic_ops", "ops_per_update"]


def stats_to_csv(rows: Iterable[dict], extra: Iterable[str] = ()) -> str:
    """CSV with the fixed columns, any ``extra`` keys, then one column per epoch level."""
    rows = list(rows)
    extra = list(extra)
    top = max((max(row["epochs_by_level"], default=-1) for row in rows), default=-1)
    level_cols = [f"epochs_l{k}" for k in range(top + 1)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STAT_COLUMNS + extra + level_cols)
    for row in rows:
        cells = [row["r"], row["alpha"], row["t"], row["basic_ops"], f"{row['ops_per_update']:.4f}"]
        cells += [row.get(k, "") for k in extra]
        cells += [row["epochs_by_level"].get(k, 0) for k in range(top + 1)]
        writer.writerow(cells)
    return buf.getvalue()
