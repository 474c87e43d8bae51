import numpy as np
import pytest

from hypergreedy import degseq

# independent high-precision values (mpmath, hand antiderivatives)
MIXED_C_END = 0.270125678548888040
MIXED_LEFTOVER = 0.171546780380192616


@pytest.fixture
def mixed():
    return degseq.validate([0.5, 0.5], 2)


@pytest.fixture
def r33():
    return degseq.regular(3, 3)


def random_degree_sequences(count, seed=12345):
    """Arbitrary valid sequences with k in 2..5 and delta in 2..7."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        delta = int(rng.integers(2, 8))
        w = rng.random(delta) * (rng.random(delta) < 0.7)
        w[-1] = max(w[-1], 0.05)
        out.append(degseq.validate(list(w / w.sum()), int(rng.integers(2, 6))))
    return out


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
