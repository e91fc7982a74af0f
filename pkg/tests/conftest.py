from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np
import pytest

from argrules import ContextualGraph, RawTable, from_table

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"

ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def dataset_path(name: str) -> Path:
    path = DATA / f"{name}.csv"
    if not path.exists():
        pytest.skip(f"{path} missing; run scripts/fetch_datasets.py")
    return path


# --- random frameworks -----------------------------------------------------

def random_dag(rng: np.random.Generator, n: int, p: float | None = None) -> ContextualGraph:
    """Acyclic attack graph on 0..n-1 (edges follow a random permutation)."""
    p = rng.uniform(0.1, 0.6) if p is None else p
    order = rng.permutation(n)
    attacks = [(int(order[a]), int(order[b])) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return ContextualGraph.build(range(n), attacks)


def attack_matrix(graph: ContextualGraph) -> np.ndarray:
    n = len(graph.arguments)
    m = np.zeros((n, n), dtype=bool)
    for i, j in graph.attacks:
        m[i, j] = True
    return m


def all_subsets(n: int) -> np.ndarray:
    return ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(bool)


def complete_extensions(graph: ContextualGraph) -> list[frozenset[int]]:
    """Every complete extension, by exhaustive subset enumeration."""
    n = len(graph.arguments)
    att = attack_matrix(graph).astype(int)
    subs = all_subsets(n)
    hit = (subs.astype(int) @ att) > 0          # hit[s, x]: some member attacks x
    conflict_free = ~(hit & subs).any(axis=1)
    # x defended by S iff every attacker of x is hit by S
    undefended = ((~hit).astype(int) @ att) > 0
    defended = ~undefended
    admissible = conflict_free & ~(subs & ~defended).any(axis=1)
    complete = admissible & (defended == subs).all(axis=1)
    return [frozenset(np.flatnonzero(s).tolist()) for s in subs[complete]]


def brute_grounded(graph: ContextualGraph) -> frozenset[int]:
    exts = complete_extensions(graph)
    least = min(exts, key=len)
    assert all(least <= e for e in exts)
    return least


def attack_paths(graph: ContextualGraph, topic: int):
    """Yield every simple directed attack path ending at ``topic`` as a tuple."""
    attackers = {a: graph.attackers(a) for a in graph.arguments}

    def walk(path):
        yield path
        for b in attackers[path[0]]:
            if b not in path:
                yield from walk((b,) + path)

    yield from walk((topic,))


def is_admissible(graph: ContextualGraph, s: set[int]) -> bool:
    if any((i, j) in graph.attacks for i in s for j in s):
        return False
    return all(any((c, b) in graph.attacks for c in s)
               for a in s for b in graph.attackers(a))


def defends(graph: ContextualGraph, s: set[int], a: int) -> bool:
    return all(any((c, b) in graph.attacks for c in s) for b in graph.attackers(a))


# --- small tables -----------------------------------------------------------

def xor_table(copies: int = 5) -> RawTable:
    rows = [[a, b] for a, b in itertools.product(["t", "?"], repeat=2) for _ in range(copies)]
    labels = [(a == "t") != (b == "t") for a, b in rows]
    return RawTable(["a", "b"], rows, labels, "y", "1")


def xor_dataset(copies: int = 5):
    return from_table(xor_table(copies))


def random_table(rng: np.random.Generator, rows: int | None = None, attrs: int | None = None) -> RawTable:
    rows = rows or int(rng.integers(4, 25))
    attrs = attrs or int(rng.integers(1, 4))
    cols = [f"x{k}" for k in range(attrs)]
    vocab = [[f"v{v}" for v in range(int(rng.integers(1, 4)))] for _ in cols]
    body = [[str(rng.choice(vocab[c])) for c in range(attrs)] for _ in range(rows)]
    labels = [bool(b) for b in rng.integers(0, 2, size=rows)]
    return RawTable(cols, body, labels, "y", "yes")
