import pytest

from qwtails.graph import build_circulant, build_complete, build_cycle, build_petersen

REGULAR_GRAPHS = {
    "C6": lambda: build_cycle(6),
    "K5": lambda: build_complete(5),
    "Petersen": build_petersen,
    "Circ(8,2)": lambda: build_circulant(8, 2),
    "Circ(9,3)": lambda: build_circulant(9, 3),
}


@pytest.fixture(params=sorted(REGULAR_GRAPHS))
def regular_graph(request):
    return REGULAR_GRAPHS[request.param]()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(k.rstrip("ab")), k)):
        ok, detail = results[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
