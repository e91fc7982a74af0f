"""Learn a graph on the congressional voting records and inspect it.

Run ``python scripts/fetch_datasets.py`` first.
"""
from argrules import EvalConfig, export_dot, load_table
from argrules.experiment import run_once

table = load_table("data/voting.csv", "class", "democrat")
model, test_acc = run_once(table, EvalConfig(), run=0)

print(f"train accuracy {model.training['train_accuracy']:.1f}%, test accuracy {test_acc:.1f}%")
print(f"{model.matrix.edge_count} edges over {len(model.universe)} arguments:")
for i, j in model.matrix.attacks():
    print(f"  {model.universe[i]}  attacks  {model.universe[j]}")
print()
print(export_dot(model.matrix, "voting"))
