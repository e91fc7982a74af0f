"""Learned model: schema + argument universe + relation matrix, and its JSON file."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import explain as xp
from .dataset import AttributeSchema, Dataset, RawTable, align, build_dataset
from .errors import DataIOError, SchemaError
from .evaluate import BatchEvaluator
from .framework import (
    TARGET,
    ArgumentUniverse,
    ContextualGraph,
    RelationMatrix,
    Variant,
    extension,
    labelling,
    project,
    violations,
)
from .search import SearchConfig, search

FORMAT_VERSION = 1


@dataclass
class Model:
    schema: list[AttributeSchema]
    matrix: RelationMatrix
    label_column: str
    positive_class: str
    training: dict = field(default_factory=dict)

    @property
    def universe(self) -> ArgumentUniverse:
        return self.matrix.universe

    @property
    def variant(self) -> Variant:
        return self.universe.variant

    @classmethod
    def learn(cls, train: Dataset, config: SearchConfig, segments: int | None = None) -> "Model":
        result = search(train, config)
        training = {
            "seed": config.seed,
            "max_iterations": config.max_iterations,
            "iterations": result.iterations,
            "train_size": len(train),
            "train_errors": result.errors,
            "train_accuracy": result.accuracy,
            "edges": result.matrix.edge_count,
        }
        if segments is not None:
            training["segments"] = segments
        return cls(train.schema, result.matrix, train.label_column, train.positive_class, training)

    def dataset(self, table: RawTable) -> Dataset:
        data = build_dataset(align(table, self.schema), self.schema)
        return Dataset(self.schema, data.instances, self.label_column, self.positive_class)

    def predict(self, data: Dataset) -> np.ndarray:
        ev = BatchEvaluator(self.universe, data.instances)
        return ev.predictions(self.matrix.attacks(), self.matrix.supports())

    def accuracy(self, data: Dataset) -> float:
        if not len(data):
            return float("nan")
        pred = self.predict(data)
        return 100.0 * float(np.mean(pred == np.asarray(data.labels, dtype=bool)))

    def contextual(self, facts) -> ContextualGraph:
        return project(self.matrix, facts)

    def explain(self, facts, mode: str = "defended2") -> tuple[ContextualGraph, xp.ExplanationSet]:
        """Contextual graph for ``facts`` and the explanation of the target's status."""
        graph = project(self.matrix, facts)
        ext = extension(labelling(graph, self.variant))
        if TARGET in ext:
            if self.variant is Variant.BIPOLAR:
                return graph, xp.def_by_bipolar(graph, ext, TARGET, mode)
            return graph, xp.def_by(graph, ext, TARGET)
        return graph, xp.not_def(graph, ext, TARGET)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "variant": self.variant.value,
            "label_column": self.label_column,
            "positive_class": self.positive_class,
            "schema": [a.to_dict() for a in self.schema],
            "arguments": self.universe.names,
            "matrix": self.matrix.grid.tolist(),
            "training": self.training,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def save(self, path: str | Path) -> None:
        try:
            Path(path).write_text(self.dumps(), encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"{path}: {exc}") from None

    @classmethod
    def from_dict(cls, d: dict) -> "Model":
        if d.get("format_version") != FORMAT_VERSION:
            raise SchemaError(f"unsupported model format version {d.get('format_version')!r}")
        schema = [AttributeSchema.from_dict(a) for a in d["schema"]]
        target = f"{d['label_column']}={d['positive_class']}"
        universe = ArgumentUniverse(schema, d["variant"], target)
        if universe.names != d["arguments"]:
            raise SchemaError("argument table does not match the schema")
        grid = np.asarray(d["matrix"], dtype=np.int8)
        if grid.shape != (len(universe), len(universe)):
            raise SchemaError("relation matrix has the wrong shape")
        matrix = RelationMatrix(universe, grid)
        problems = violations(matrix)
        if problems:
            raise SchemaError(f"ill-formed relation matrix: {problems}")
        return cls(schema, matrix, d["label_column"], d["positive_class"], d.get("training", {}))

    @classmethod
    def load(cls, path: str | Path) -> "Model":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataIOError(f"{path}: {exc}") from None
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not a model file ({exc})") from None
        return cls.from_dict(d)
