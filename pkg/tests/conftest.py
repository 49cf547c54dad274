import random

import pytest

from topocover.elements import Atom, Nat

FIB_SOURCE = "fn fib(n){ 0 -> 0; 1 -> 1; n+2 -> fib(n+1) + fib(n); }"
CHOICE_SOURCE = "fn f(n){ 0->0; 1->1; n+2 -> f(n) | f(n+1); }"
LOOP_SOURCE = "fn f(n){ n -> f(n); }"
SUCC_SOURCE = "fn f(n){ n -> f(n+1) + 1; }"


def random_graph(rng: random.Random, max_nodes=30, max_out=4):
    """Adjacency dict over Nat or Atom nodes; self-loops and cycles allowed."""
    n = rng.randint(1, max_nodes)
    if rng.random() < 0.5:
        nodes = [Nat(i) for i in range(n)]
    else:
        nodes = [Atom(f"v{i}") for i in range(n)]
    density = rng.random()
    graph = {}
    for i, x in enumerate(nodes):
        k = rng.randint(0, max_out)
        # bias towards forward edges so that a good share of roots terminate
        kids = []
        for _ in range(k):
            if rng.random() < density:
                kids.append(rng.choice(nodes))
            elif i + 1 < n:
                kids.append(rng.choice(nodes[i + 1:]))
        graph[x] = kids
    return nodes, graph


@pytest.fixture
def rng():
    return random.Random(20261017)


@pytest.fixture
def sources(tmp_path):
    paths = {}
    for name, text in [("fib", FIB_SOURCE), ("choice", CHOICE_SOURCE),
                       ("loop", LOOP_SOURCE), ("succ", SUCC_SOURCE)]:
        p = tmp_path / f"{name}.rec"
        p.write_text(text + "\n")
        paths[name] = str(p)
    return paths


# one pass/fail line per acceptance criterion in the terminal summary
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        prev = _acceptance.get(report.nodeid)
        if prev != "FAIL":
            _acceptance[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{outcome}  {nodeid.split('::')[-1]}")
