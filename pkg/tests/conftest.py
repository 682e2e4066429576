from __future__ import annotations

import pytest

from dynhyper.oracle import verify_state
from dynhyper.trace import Insert


def replay_audited(matcher, trace):
    """Replay ``trace`` auditing after every update; returns the list of failures."""
    live = {}
    failures = []
    for step, ev in enumerate(trace.events, start=1):
        if isinstance(ev, Insert):
            matcher.insert(ev.edge_id, ev.endpoints)
            live[ev.edge_id] = ev.endpoints
        else:
            matcher.delete(ev.edge_id)
            del live[ev.edge_id]
        report = verify_state(matcher, live)
        if not report.ok:
            failures.append((step, report.to_text()))
    return failures


@pytest.fixture(scope="session")
def audited():
    return replay_audited


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_lines(request):
    """Criterion name -> (passed, detail); printed in the terminal summary."""
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(lines):
        passed, detail = lines[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
