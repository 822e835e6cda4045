import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20211125)


@pytest.fixture
def record_criterion():
    """Collect one pass/fail line per acceptance criterion for the summary."""

    def record(number, ok, detail):
        _ACCEPTANCE.append((number, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


# -- independent oracles ------------------------------------------------------

def mirror_index(i, n):
    """Reflect-without-repeat index into range(n)."""
    if n == 1:
        return 0
    period = 2 * n - 2
    i %= period
    return period - i if i >= n else i


def dense_filter_matrix(n, taps):
    """n x n matrix applying a centred odd filter with mirrored boundaries."""
    r = len(taps) // 2
    m = np.zeros((n, n))
    for i in range(n):
        for k, t in enumerate(taps):
            m[i, mirror_index(i + k - r, n)] += t
    return m


def dense_reduce(x, taps):
    h, w = x.shape
    fh = dense_filter_matrix(h, taps)[::2]
    fw = dense_filter_matrix(w, taps)[::2]
    return fh @ x @ fw.T


def dense_expand(x, taps):
    h, w = x.shape
    up_h = np.zeros((2 * h, h))
    up_h[::2] = np.eye(h)
    up_w = np.zeros((2 * w, w))
    up_w[::2] = np.eye(w)
    fh = dense_filter_matrix(2 * h, 2 * np.asarray(taps)) @ up_h
    fw = dense_filter_matrix(2 * w, 2 * np.asarray(taps)) @ up_w
    return fh @ x @ fw.T
