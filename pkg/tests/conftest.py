import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mtlz.generate import connected_triangle_free_levels
from mtlz.graph import build_graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=8, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p is None:
        chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        chosen = [draw(st.floats(0, 1)) < p for _ in pairs]
    return build_graph(n, [e for e, c in zip(pairs, chosen) if c])


@st.composite
def graph_and_perm(draw, max_n=8):
    g = draw(graphs(max_n=max_n))
    perm = draw(st.permutations(list(range(g.n))))
    return g, perm


@pytest.fixture(scope="session")
def levels8():
    """Connected triangle-free graphs, one per class, n = 1..8."""
    return connected_triangle_free_levels(8)


@pytest.fixture(scope="session")
def small_graphs(levels8):
    return [g for n in sorted(levels8) for g in levels8[n]]


# acceptance criteria report: filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[c]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
