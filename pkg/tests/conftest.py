import numpy as np
import pytest

from fusedangles.rotcore import random_rotation

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def quats(rng):
    return random_rotation(rng, 2000)


def Rx(b):
    c, s = np.cos(b), np.sin(b)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def Ry(b):
    c, s = np.cos(b), np.sin(b)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def Rz(b):
    c, s = np.cos(b), np.sin(b)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def same_rotation(q1, q2, tol):
    q1, q2 = np.asarray(q1), np.asarray(q2)
    return np.minimum(np.abs(q1 - q2).max(-1), np.abs(q1 + q2).max(-1)) <= tol


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.rstrip("abc")), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
