"""Tabular data ingestion and discretisation into attribute-value atoms."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, DataIOError, SchemaError

MISSING = frozenset({"", "?"})

NOMINAL = "nominal"
CONTINUOUS = "continuous"


@dataclass(frozen=True, order=True)
class Atom:
    attribute: str
    value: str

    def __str__(self) -> str:
        return f"{self.attribute}={self.value}"


@dataclass(frozen=True)
class AttributeSchema:
    """One input column: its kind and the ordered value labels it can take.

    For continuous attributes ``edges`` holds the ``len(values) + 1`` interval
    boundaries; interval ``k`` is ``(edges[k], edges[k+1]]`` and the first one
    is closed on the left too.
    """

    name: str
    kind: str
    values: tuple[str, ...]
    edges: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.values:
            raise SchemaError(f"attribute {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise SchemaError(f"attribute {self.name!r} has duplicate values")
        if self.kind == CONTINUOUS and len(self.edges) != len(self.values) + 1:
            raise SchemaError(f"attribute {self.name!r}: edges do not match intervals")

    @property
    def atoms(self) -> list[Atom]:
        return [Atom(self.name, v) for v in self.values]

    def atom_for(self, cell: str, row: int | None = None) -> Atom | None:
        """Map a raw cell to its atom, or None for missing/unseen values."""
        cell = cell.strip()
        if cell in MISSING:
            return None
        if self.kind == NOMINAL:
            return Atom(self.name, cell) if cell in self.values else None
        x = _parse_float(cell, self.name, row)
        # out-of-range values clamp to the boundary intervals
        k = int(np.searchsorted(self.edges[1:-1], x, side="left"))
        return Atom(self.name, self.values[k])

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind, "values": list(self.values)}
        if self.kind == CONTINUOUS:
            d["edges"] = list(self.edges)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AttributeSchema":
        return cls(d["name"], d["kind"], tuple(d["values"]), tuple(d.get("edges", ())))


@dataclass(frozen=True)
class Instance:
    facts: frozenset[Atom]
    label: bool


@dataclass
class RawTable:
    """Rows of string cells with the label column split off."""

    columns: list[str]
    rows: list[list[str]]
    labels: list[bool]
    label_column: str
    positive_class: str
    labelled: bool = True

    def __len__(self):
        return len(self.rows)

    def subset(self, indices: Iterable[int]) -> "RawTable":
        indices = list(indices)
        return RawTable(
            self.columns,
            [self.rows[i] for i in indices],
            [self.labels[i] for i in indices],
            self.label_column,
            self.positive_class,
            self.labelled,
        )


@dataclass
class Dataset:
    schema: list[AttributeSchema]
    instances: list[Instance]
    label_column: str = "label"
    positive_class: str = "true"

    def __len__(self):
        return len(self.instances)

    @property
    def atoms(self) -> list[Atom]:
        return [a for attr in self.schema for a in attr.atoms]

    @property
    def labels(self) -> list[bool]:
        return [inst.label for inst in self.instances]


def _parse_float(cell: str, column: str, row: int | None = None) -> float:
    try:
        x = float(cell)
    except ValueError:
        where = f"row {row}, " if row is not None else ""
        raise SchemaError(f"non-numeric cell {cell!r} at {where}column {column!r}") from None
    if not math.isfinite(x):
        raise SchemaError(f"non-finite cell {cell!r} in column {column!r}")
    return x


def load_table(
    path: str | Path,
    label_column: str,
    positive_class: str,
    delimiter: str = ",",
    drop: Sequence[str] = (),
    allow_unlabelled: bool = False,
) -> RawTable:
    """Read a delimited table with a header row and split off the label column.

    With ``allow_unlabelled`` a missing label column yields all-False labels
    (prediction input); otherwise it is a configuration error, as is a
    positive class that never occurs.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, delimiter=delimiter)
            try:
                header = [h.strip() for h in next(reader)]
            except StopIteration:
                raise DataIOError(f"{path}: empty file, header row required") from None
            body = [row for row in reader if any(c.strip() for c in row)]
    except FileNotFoundError:
        raise DataIOError(f"{path}: no such file") from None
    except OSError as exc:
        raise DataIOError(f"{path}: {exc}") from None

    for i, row in enumerate(body):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i} has {len(row)} cells, header has {len(header)}")

    unknown = [d for d in drop if d not in header]
    if unknown:
        raise ConfigError(f"cannot drop unknown columns {unknown}")
    if label_column in header:
        li = header.index(label_column)
        labels = [row[li].strip() == positive_class for row in body]
        if body and not any(labels) and not allow_unlabelled:
            raise ConfigError(f"positive class {positive_class!r} never observed in {label_column!r}")
    elif allow_unlabelled:
        li = None
        labels = [False] * len(body)
    else:
        raise ConfigError(f"{path}: no label column {label_column!r}")

    keep = [j for j, h in enumerate(header) if j != li and h not in drop]
    return RawTable(
        [header[j] for j in keep],
        [[row[j].strip() for j in keep] for row in body],
        labels,
        label_column,
        positive_class,
        li is not None,
    )


def _render(x: float, decimals: int) -> str:
    s = f"{round(x, decimals):.{decimals}f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def fit_segmentation(column: Sequence[float], segments: int) -> tuple[list[str], list[float]]:
    """Equal-width intervals over ``[min, max]`` and their ``"lo-hi"`` labels.

    Returns ``(labels, edges)``. Boundaries are rendered with one decimal
    (more only when needed to keep them strictly increasing); every interval
    after the first starts one rendering unit above the previous upper bound,
    so ``[0, 10]`` in 5 segments reads ``0-2, 2.1-4, 4.1-6, 6.1-8, 8.1-10``.
    """
    if segments < 1:
        raise ConfigError("segments must be >= 1")
    values = np.asarray([v for v in column if math.isfinite(v)], dtype=float)
    if values.size == 0:
        raise SchemaError("cannot segment a column without finite values")
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        s = _render(lo, 1)
        return [f"{s}-{s}"], [lo, hi]

    edges = [lo + (hi - lo) * k / segments for k in range(segments)] + [hi]
    if not all(a < b for a, b in zip(edges, edges[1:])):
        # range below float resolution for this many bins
        return [f"{lo!r}-{hi!r}"], [lo, hi]
    decimals = 1
    while decimals <= 12:
        rounded = [round(e, decimals) for e in edges]
        if all(a < b for a, b in zip(rounded, rounded[1:])):
            break
        decimals += 1
    else:
        return [f"{a!r}-{b!r}" for a, b in zip(edges, edges[1:])], edges
    unit = 10.0 ** -decimals
    labels = []
    for k in range(segments):
        start = edges[k] if k == 0 else round(edges[k], decimals) + unit
        labels.append(f"{_render(start, decimals)}-{_render(edges[k + 1], decimals)}")
    return labels, edges


def _is_numeric_column(cells: Iterable[str]) -> bool:
    seen = False
    for c in cells:
        if c in MISSING:
            continue
        try:
            if not math.isfinite(float(c)):
                return False
        except ValueError:
            return False
        seen = True
    return seen


def fit_schema(
    table: RawTable, segments: int = 6, nominal: Sequence[str] = ()
) -> list[AttributeSchema]:
    """Infer attribute kinds and fit value sets on ``table``.

    Columns whose present cells all parse as finite numbers are continuous
    unless listed in ``nominal``; nominal values are the sorted observed
    categories.
    """
    schema = []
    for j, name in enumerate(table.columns):
        cells = [row[j] for row in table.rows]
        present = [c for c in cells if c not in MISSING]
        if name not in nominal and _is_numeric_column(cells):
            nums = [_parse_float(c, name, i) for i, c in enumerate(cells) if c not in MISSING]
            labels, edges = fit_segmentation(nums, segments)
            schema.append(AttributeSchema(name, CONTINUOUS, tuple(labels), tuple(edges)))
        else:
            values = tuple(sorted(set(present)))
            if not values:
                raise SchemaError(f"column {name!r} has no observed values")
            schema.append(AttributeSchema(name, NOMINAL, values))
    return schema


def atomize(
    row: Sequence[str], schema: Sequence[AttributeSchema], label: bool = False, index: int | None = None
) -> Instance:
    if len(row) != len(schema):
        raise SchemaError(f"row has {len(row)} cells, schema has {len(schema)} attributes")
    facts = set()
    for cell, attr in zip(row, schema):
        atom = attr.atom_for(cell, index)
        if atom is not None:
            facts.add(atom)
    return Instance(frozenset(facts), bool(label))


def align(table: RawTable, schema: Sequence[AttributeSchema]) -> RawTable:
    """Reorder ``table`` columns to match ``schema``; extra columns are ignored."""
    names = [a.name for a in schema]
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise SchemaError(f"data lacks model attributes {missing}")
    idx = [table.columns.index(n) for n in names]
    return RawTable(names, [[row[j] for j in idx] for row in table.rows],
                    table.labels, table.label_column, table.positive_class, table.labelled)


def build_dataset(table: RawTable, schema: Sequence[AttributeSchema]) -> Dataset:
    table = align(table, schema)
    instances = [atomize(row, schema, lab, i) for i, (row, lab) in enumerate(zip(table.rows, table.labels))]
    return Dataset(list(schema), instances, table.label_column, table.positive_class)


def split(data, train_ratio: float, seed: int):
    """Deterministic shuffled split into ``floor(n * ratio)`` / remainder.

    Works on anything supporting ``len`` and ``subset`` (``RawTable``) or on
    a ``Dataset``.
    """
    if not 0 < train_ratio < 1:
        raise ConfigError("train_ratio must be in (0, 1)")
    n = len(data)
    if n == 0:
        raise ConfigError("cannot split an empty dataset")
    order = np.random.default_rng(seed).permutation(n)
    cut = math.floor(n * train_ratio + 1e-9)
    train_idx, test_idx = order[:cut].tolist(), order[cut:].tolist()
    if isinstance(data, Dataset):
        pick = lambda ix: Dataset(data.schema, [data.instances[i] for i in ix],
                                  data.label_column, data.positive_class)
        return pick(train_idx), pick(test_idx)
    return data.subset(train_idx), data.subset(test_idx)


def from_table(
    table: RawTable, segments: int = 6, nominal: Sequence[str] = ()
) -> Dataset:
    """Fit a schema on ``table`` and atomise every row against it."""
    return build_dataset(table, fit_schema(table, segments, nominal))
