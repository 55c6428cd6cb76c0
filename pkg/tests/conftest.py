import numpy as np
import pytest

from perslap.complex import SimplicialComplex, make_pair

# criterion number -> (name, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def four_point_pair():
    """Two endpoints inside the path 1-3-4-2."""
    K = SimplicialComplex.from_simplices([(1,), (2,)])
    L = SimplicialComplex.from_simplices([(1, 3), (3, 4), (2, 4)])
    return make_pair(K, L)


def parallel_routes(lengths, v=0, w=1):
    """Graph of internally disjoint v-w paths with the given lengths."""
    edges, nxt = [], max(v, w) + 1
    for length in lengths:
        path = [v] + list(range(nxt, nxt + length - 1)) + [w]
        nxt += length - 1
        edges += list(zip(path, path[1:]))
    return SimplicialComplex.from_simplices([(v,), (w,)] + edges)
