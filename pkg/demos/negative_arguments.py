"""Exclusive-or labels need arguments that fire when an atom is absent."""
import itertools

from argrules import RawTable, SearchConfig, from_table, search

rows = [[a, b] for a, b in itertools.product(["t", "?"], repeat=2)]
labels = [(a == "t") != (b == "t") for a, b in rows]
data = from_table(RawTable(["a", "b"], rows * 5, labels * 5, "xor", "1"))

for variant in ("base", "n"):
    result = search(data, SearchConfig(500, variant))
    print(f"{variant:>4}: {result.accuracy:5.1f}% after {result.iterations} iterations")
    for i, j in result.matrix.attacks():
        print(f"      {result.matrix.universe[i]} -> {result.matrix.universe[j]}")
