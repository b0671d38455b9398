import numpy as np
import pytest

from gasub import Multivector, Signature

KERNEL_SIGS = [Signature(n) for n in range(1, 6)] + [
    Signature(3, 1),
    Signature(2, 2),
    Signature(1, 1, 1),
    Signature(2, 0, 2),
    Signature(1, 0, 1),
]
NONDEGENERATE_SIGS = [s for s in KERNEL_SIGS if s.r == 0]
DEGENERATE_SIGS = [s for s in KERNEL_SIGS if s.r > 0]


def e(sig, *idx):
    """Basis blade as the ordered product of the given generators."""
    return Multivector.basis(sig, *idx)


def assert_mv_close(x, y, rel=1e-12, abs_=1e-14):
    diff = (x - y).norm()
    bound = rel * max(x.norm(), y.norm()) + abs_
    assert diff <= bound, f"{x} != {y} (diff {diff:.3g})"


@pytest.fixture
def rng():
    return np.random.default_rng(20010406)


def span(a):
    from gasub.oracle import span_of_blade

    return span_of_blade(a)


def spans_equal(a, b):
    from gasub.oracle import same_subspace

    return same_subspace(span(a), span(b))


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion and print it."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def _report(label, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
