"""Replaying traces through a matcher, with optional per-step auditing."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from .base import Matcher
from .core import TEST_CONSTANTS, Constants, PreconditionError, UsageError
from .matcher_r2 import MatcherR2
from .matcher_r3 import MatcherR3
from .oracle import AuditReport, verify_state
from .sampler import OfflineSampler, OnlineSampler
from .trace import Insert, UpdateTrace

log = logging.getLogger(__name__)

BACKENDS: dict[str, type[Matcher]] = {"r3": MatcherR3, "r2": MatcherR2}


@dataclass
class RunConfig:
    backend: str = "r3"
    mode: str = "online"
    seed: Optional[int] = None
    alpha_override: Optional[int] = None
    test_constants: bool = False
    constants: Optional[Constants] = None
    audit_every: int = 0

    def resolved_constants(self) -> Optional[Constants]:
        if self.constants is not None:
            return self.constants
        return TEST_CONSTANTS if self.test_constants else None

    @property
    def faithful(self) -> bool:
        return self.alpha_override is None and self.resolved_constants() is None


@dataclass
class RunResult:
    matcher: Matcher
    audits: int = 0
    failures: list[tuple[int, AuditReport]] = field(default_factory=list)
    observation_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.observation_failures

    def stats(self) -> dict:
        return self.matcher.stats()


def build_matcher(
    n_vertices: int,
    r: int,
    config: RunConfig,
    deletion_times: Optional[dict[int, int]] = None,
    seed: int = 0,
) -> Matcher:
    try:
        cls = BACKENDS[config.backend]
    except KeyError:
        raise UsageError(f"unknown backend {config.backend!r}") from None
    if config.mode == "online":
        sampler = OnlineSampler(config.seed if config.seed is not None else seed)
    elif config.mode == "offline":
        sampler = OfflineSampler(deletion_times)
    else:
        raise UsageError(f"unknown mode {config.mode!r}")
    return cls(
        n_vertices,
        r,
        alpha_override=config.alpha_override,
        constants=config.resolved_constants(),
        faithful=config.faithful,
        sampler=sampler,
    )


def check_observations(matcher: Matcher) -> list[str]:
    """Sampling-contract checks over everything the matcher logged so far.

    Every draw must come from a space of size >= alpha^level, every eviction
    must remove an edge of strictly lower level than its evictor, every
    completed conflict loop must have sampled at least twice, and the
    matcher must not have noted any contract breach of its own.
    """
    out = []
    alpha = matcher.alpha
    for rec in matcher.sampler.records:
        if rec.space_size < alpha**rec.level:
            out.append(f"step {rec.step}: sample space {rec.space_size} < {alpha}^{rec.level}")
    for ev in matcher.log.evictions:
        if not ev.evicted_level < ev.new_level:
            out.append(f"step {ev.step}: evicted level {ev.evicted_level} >= new level {ev.new_level}")
    for k in matcher.log.loop_counts:
        if k < 2:
            out.append(f"conflict loop sampled {k} time(s)")
    out.extend(matcher.log.notes)
    return out


def replay(
    trace: UpdateTrace,
    config: RunConfig,
    *,
    stop_on_violation: bool = True,
    on_step: Optional[Callable[[int, Matcher], None]] = None,
) -> RunResult:
    """Run ``trace`` through a fresh matcher, auditing every ``audit_every`` steps."""
    schedule = None
    if config.mode == "offline":
        schedule = trace.deletion_schedule()
        missing = [ev.edge_id for ev in trace.events if isinstance(ev, Insert) and ev.edge_id not in schedule]
        if missing:
            raise PreconditionError(
                f"offline mode needs every edge deleted; {len(missing)} edges never are (e.g. {missing[0]})"
            )
    matcher = build_matcher(trace.n_vertices, trace.r, config, schedule, seed=trace.seed)
    result = RunResult(matcher)
    every = config.audit_every
    live: dict[int, tuple[int, ...]] = {}
    for step, ev in enumerate(trace.events, start=1):
        if isinstance(ev, Insert):
            matcher.insert(ev.edge_id, ev.endpoints)
            live[ev.edge_id] = ev.endpoints
        else:
            matcher.delete(ev.edge_id)
            live.pop(ev.edge_id, None)
        if on_step is not None:
            on_step(step, matcher)
        if every and (step % every == 0 or step == len(trace.events)):
            report = verify_state(matcher, live)
            result.audits += 1
            if not report.ok:
                log.warning("audit failed at step %d: %s", step, report.to_text().strip())
                result.failures.append((step, report))
                if stop_on_violation:
                    break
    result.observation_failures = check_observations(matcher)
    return result
