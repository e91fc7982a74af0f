"""The 70/30 protocol, reshuffled per run, on Iris (virginica vs rest)."""
from argrules import EvalConfig, evaluate, load_table

table = load_table("data/iris.csv", "class", "Iris-virginica")
for variant in ("base", "n", "bipolar"):
    report = evaluate(table, EvalConfig(runs=5, variant=variant, iterations=60))
    print(f"{variant:>8}: {report.summary()}  per run {[round(a, 1) for a in report.accuracies]}")
