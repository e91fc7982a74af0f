"""Repeated train/test evaluation (reshuffled split per run)."""
from __future__ import annotations

import json
import statistics
from dataclasses import asdict, dataclass, field

from .dataset import RawTable, build_dataset, fit_schema, split
from .errors import ConfigError
from .model import Model
from .search import SearchConfig


@dataclass
class EvalConfig:
    runs: int = 10
    train_ratio: float = 0.7
    iterations: int = 100
    segments: int = 6
    variant: str = "base"
    seed: int = 0
    nominal: tuple[str, ...] = ()

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")


@dataclass
class EvalReport:
    config: EvalConfig
    accuracies: list[float]
    train_accuracies: list[float] = field(default_factory=list)
    edges: list[int] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.accuracies)

    @property
    def std(self) -> float | None:
        """Sample standard deviation; None for a single run."""
        return statistics.stdev(self.accuracies) if len(self.accuracies) > 1 else None

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["nominal"] = list(cfg["nominal"])
        return {
            "config": cfg,
            "runs": [
                {"run": r, "seed": self.config.seed + r, "test_accuracy": a,
                 "train_accuracy": t, "edges": e}
                for r, (a, t, e) in enumerate(zip(self.accuracies, self.train_accuracies, self.edges))
            ],
            "mean": self.mean,
            "std": self.std,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def summary(self) -> str:
        std = "n/a" if self.std is None else f"{self.std:.1f}"
        return f"{self.mean:.1f} +- {std} over {len(self.accuracies)} runs"


def run_once(table: RawTable, config: EvalConfig, run: int) -> tuple[Model, float]:
    """Split with ``seed + run``, learn on the train part, return model and test accuracy."""
    train, test = split(table, config.train_ratio, config.seed + run)
    if len(train) == 0 or len(test) == 0:
        raise ConfigError("dataset too small to split")
    schema = fit_schema(train, config.segments, config.nominal)
    dtrain, dtest = build_dataset(train, schema), build_dataset(test, schema)
    model = Model.learn(dtrain, SearchConfig(config.iterations, config.variant, config.seed + run),
                        config.segments)
    return model, model.accuracy(dtest)


def evaluate(table: RawTable, config: EvalConfig) -> EvalReport:
    accs, train_accs, edges = [], [], []
    for r in range(config.runs):
        model, acc = run_once(table, config, r)
        accs.append(acc)
        train_accs.append(model.training["train_accuracy"])
        edges.append(model.matrix.edge_count)
    return EvalReport(config, accs, train_accs, edges)
