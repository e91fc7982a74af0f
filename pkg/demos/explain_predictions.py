"""Explain individual predictions of a breast-cancer model."""
from argrules import EvalConfig, load_table, render, split
from argrules.experiment import run_once

table = load_table("data/bcw.csv", "class", "4")
model, _ = run_once(table, EvalConfig(), run=0)
_, test = split(table, 0.7, 0)
data = model.dataset(test)

for row in range(4):
    inst = data.instances[row]
    graph, expl = model.explain(inst.facts)
    truth = "malignant" if inst.label else "benign"
    print(f"row {row} (actually {truth}), contextual graph of {len(graph.arguments)} arguments")
    print(render(expl))
    print()
