import itertools
import random

import numpy as np
import pytest

from echotrack.graph import AttributedSnapshotGraph

LABELS = ("anti", "neutral", "pro")


def make_graph(edges, labels=None, index=0):
    """Graph from ``(u, v)`` or ``(u, v, w)`` tuples."""
    e = {}
    for item in edges:
        u, v, w = item if len(item) == 3 else (*item, 1)
        key = (u, v) if u < v else (v, u)
        e[key] = e.get(key, 0) + w
    nodes = {x for pair in e for x in pair} | set(labels or {})
    return AttributedSnapshotGraph(index, (0, 1), tuple(nodes), e, labels or {})


def random_graph(rng: random.Random, n: int, p: float = 0.5, max_w: int = 3, labeled=True):
    """Connected-enough random weighted graph with at least one edge."""
    nodes = [f"n{i}" for i in range(n)]
    edges = []
    for u, v in itertools.combinations(nodes, 2):
        if rng.random() < p:
            edges.append((u, v, rng.randint(1, max_w)))
    if not edges:
        edges.append((nodes[0], nodes[1], 1))
    labels = {u: rng.choice(LABELS) for u in nodes} if labeled else {}
    return make_graph(edges, labels)


def set_partitions(items):
    """Every set partition of ``items`` (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def brute_modularity(graph, assignment):
    """Modularity term by term: (1/2m) sum over ordered pairs of [A_vw - k_v k_w / 2m] delta."""
    nodes = list(graph.nodes)
    idx = {u: i for i, u in enumerate(nodes)}
    A = np.zeros((len(nodes), len(nodes)))
    for (u, v), w in graph.edges.items():
        A[idx[u], idx[v]] = w
        A[idx[v], idx[u]] = w
    k = A.sum(axis=1)
    two_m = A.sum()
    q = 0.0
    for v in nodes:
        for w in nodes:
            if assignment[v] == assignment[w]:
                q += A[idx[v], idx[w]] - k[idx[v]] * k[idx[w]] / two_m
    return q / two_m


def two_cliques(size=5, labels=("pro", "anti")):
    a = [f"a{i}" for i in range(size)]
    b = [f"b{i}" for i in range(size)]
    edges = list(itertools.combinations(a, 2)) + list(itertools.combinations(b, 2)) + [("a0", "b0")]
    lab = {**{x: labels[0] for x in a}, **{x: labels[1] for x in b}}
    return make_graph(edges, lab), set(a), set(b)


@pytest.fixture
def cliques():
    return two_cliques()


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
