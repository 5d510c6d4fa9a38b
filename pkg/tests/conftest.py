from __future__ import annotations

import pytest
from hypothesis import settings, strategies as st

from ultrawave.local_field import PAdicRational

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

PRIMES = (2, 3, 5)

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def padics(p: int, max_exp: int = 4):
    nonzero = st.builds(
        lambda a, e, b: PAdicRational(p, a, e, b),
        st.integers(-500, 500).filter(lambda a: a != 0),
        st.integers(-max_exp, max_exp),
        st.integers(1, 50),
    )
    return st.one_of(st.just(PAdicRational(p, 0)), nonzero)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def _record(number: int, name: str, ok: bool, detail: str) -> None:
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {name} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record
