"""Argument universe, relation matrix, contextual projection and extensions.

Index 0 is always the target argument and index 1 the top argument; the
attribute-value arguments follow in schema order, then (for the negative
variant) their negated counterparts in the same order.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Collection, Iterable, Mapping, Sequence

import numpy as np

from .dataset import Atom, AttributeSchema
from .errors import ConfigError, InvariantError

FORBIDDEN = -1
NO_EDGE = 0
ATTACK = 1
SUPPORT = 2

TARGET = 0
TOP = 1


class Variant(str, enum.Enum):
    BASE = "base"
    NEGATIVE = "n"
    BIPOLAR = "bipolar"

    @classmethod
    def parse(cls, value) -> "Variant":
        try:
            return cls(value)
        except ValueError:
            raise ConfigError(f"unknown variant {value!r}; choose base, n or bipolar") from None


class ArgKind(str, enum.Enum):
    TARGET = "target"
    TOP = "top"
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class Argument:
    index: int
    kind: ArgKind
    atom: Atom | None = None
    label: str | None = None

    @property
    def name(self) -> str:
        if self.kind is ArgKind.TARGET:
            return self.label or "target"
        if self.kind is ArgKind.TOP:
            return "top"
        if self.kind is ArgKind.NEGATIVE:
            return f"not({self.atom})"
        return str(self.atom)

    @property
    def attribute(self) -> str | None:
        return self.atom.attribute if self.atom is not None else None

    def __str__(self):
        return self.name


class ArgumentUniverse:
    """Every argument a dataset can instantiate, with stable indices."""

    def __init__(
        self,
        schema: Sequence[AttributeSchema],
        variant: Variant | str = Variant.BASE,
        target_label: str = "target",
    ):
        self.schema = list(schema)
        self.variant = Variant.parse(variant)
        args = [Argument(TARGET, ArgKind.TARGET, label=target_label), Argument(TOP, ArgKind.TOP)]
        atoms = [a for attr in self.schema for a in attr.atoms]
        for atom in atoms:
            args.append(Argument(len(args), ArgKind.POSITIVE, atom))
        if self.variant is Variant.NEGATIVE:
            for atom in atoms:
                args.append(Argument(len(args), ArgKind.NEGATIVE, atom))
        self.arguments: list[Argument] = args
        self._positive = {a.atom: a.index for a in args if a.kind is ArgKind.POSITIVE}
        self._negative = {a.atom: a.index for a in args if a.kind is ArgKind.NEGATIVE}

    def __len__(self):
        return len(self.arguments)

    def __getitem__(self, i) -> Argument:
        return self.arguments[i]

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.arguments]

    def index(self, name: str) -> int:
        for a in self.arguments:
            if a.name == name:
                return a.index
        raise KeyError(name)

    def active(self, facts: Collection[Atom]) -> frozenset[int]:
        """Indices present in the contextual graph for ``facts``."""
        out = {TARGET, TOP}
        for atom, i in self._positive.items():
            if atom in facts:
                out.add(i)
        for atom, i in self._negative.items():
            if atom not in facts:
                out.add(i)
        return frozenset(out)

    def activity(self, instances) -> np.ndarray:
        """Boolean ``(len(instances), len(self))`` matrix of active arguments."""
        act = np.zeros((len(instances), len(self)), dtype=bool)
        act[:, TARGET] = act[:, TOP] = True
        for r, inst in enumerate(instances):
            for atom in inst.facts:
                i = self._positive.get(atom)
                if i is not None:
                    act[r, i] = True
        for atom, i in self._negative.items():
            act[:, i] = ~act[:, self._positive[atom]]
        return act

    def static_forbidden(self) -> np.ndarray:
        """Entries that can never hold an edge, whatever the rest of the graph."""
        n = len(self)
        forb = np.eye(n, dtype=bool)
        forb[TARGET, :] = True
        forb[TOP, :] = True
        forb[TOP, TARGET] = False
        attrs = np.array([a.attribute or "" for a in self.arguments], dtype=object)
        same = attrs[:, None] == attrs[None, :]
        same[:2, :] = False
        same[:, :2] = False
        return forb | same


class RelationMatrix:
    """Square grid of edge codes indexed ``(source, destination)``.

    Statically forbidden entries hold ``FORBIDDEN``. Symmetric and
    cycle-closing entries depend on the current edges, so they are left at
    ``NO_EDGE`` and rejected by :func:`legal_target` instead.
    """

    __slots__ = ("universe", "grid")

    def __init__(self, universe: ArgumentUniverse, grid: np.ndarray | None = None):
        self.universe = universe
        if grid is None:
            grid = np.where(universe.static_forbidden(), FORBIDDEN, NO_EDGE).astype(np.int8)
        self.grid = grid

    @classmethod
    def from_edges(cls, universe, attacks=(), supports=()) -> "RelationMatrix":
        m = cls(universe)
        for i, j in attacks:
            m.grid[i, j] = ATTACK
        for i, j in supports:
            m.grid[i, j] = SUPPORT
        return m

    @property
    def size(self) -> int:
        return self.grid.shape[0]

    def copy(self) -> "RelationMatrix":
        return RelationMatrix(self.universe, self.grid.copy())

    def with_entry(self, i: int, j: int, value: int) -> "RelationMatrix":
        m = self.copy()
        m.grid[i, j] = value
        return m

    def attacks(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in np.argwhere(self.grid == ATTACK).tolist()]

    def supports(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in np.argwhere(self.grid == SUPPORT).tolist()]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.grid > 0))

    def connected(self) -> np.ndarray:
        """Mask of arguments that are the target or have an outgoing edge."""
        mask = (self.grid > 0).any(axis=1)
        mask[TARGET] = True
        return mask

    def __eq__(self, other):
        return isinstance(other, RelationMatrix) and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash(self.grid.tobytes())

    def __repr__(self):
        names = self.universe.names
        edges = [f"{names[i]}->{names[j]}" for i, j in self.attacks()]
        edges += [f"{names[i]}=>{names[j]}" for i, j in self.supports()]
        return f"RelationMatrix({', '.join(edges) or 'empty'})"


def _reachable(grid: np.ndarray, start: int) -> set[int]:
    """Arguments reachable from ``start`` along attack or support edges."""
    seen = {start}
    todo = [start]
    while todo:
        i = todo.pop()
        for j in np.flatnonzero(grid[i] > 0).tolist():
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return seen


def legal_target(matrix: RelationMatrix, src: int, dst: int, kind: int = ATTACK) -> bool:
    """Whether the empty entry ``(src, dst)`` may receive an edge of ``kind``.

    Besides the static bans, the reverse entry must be empty, the edge must
    not close a directed cycle, and ``dst`` must already lead to the target
    so that the new edge lies on a path to it. Supports are only legal in
    the bipolar variant.
    """
    n = matrix.size
    if not (0 <= src < n and 0 <= dst < n):
        return False
    if kind == SUPPORT and matrix.universe.variant is not Variant.BIPOLAR:
        return False
    if kind not in (ATTACK, SUPPORT):
        return False
    g = matrix.grid
    if g[src, dst] != NO_EDGE or g[dst, src] > 0:
        return False
    if dst != TARGET and not (g[dst] > 0).any():
        return False
    return src not in _reachable(g, dst)


def removable(matrix: RelationMatrix, src: int, dst: int) -> bool:
    """Whether deleting edge ``(src, dst)`` keeps every edge on a path to the target."""
    g = matrix.grid
    if g[src, dst] <= 0:
        return False
    others = np.count_nonzero(g[src] > 0) - 1
    return others > 0 or not (g[:, src] > 0).any()


def violations(matrix: RelationMatrix) -> list[str]:
    """Every structural invariant the matrix breaks (empty when well-formed)."""
    g = matrix.grid
    out = []
    static = matrix.universe.static_forbidden()
    if ((g > 0) & static).any():
        out.append("edge on a statically forbidden entry")
    if ((g == FORBIDDEN) != static).any():
        out.append("forbidden markers do not match the static bans")
    edge = g > 0
    if (edge & edge.T).any():
        out.append("symmetric edge pair")
    if (g == SUPPORT).any() and matrix.universe.variant is not Variant.BIPOLAR:
        out.append("support outside the bipolar variant")
    if _has_cycle(edge):
        out.append("directed cycle")
    conn = matrix.connected()
    reach = _reachable(edge.T.astype(np.int8), TARGET)
    for i in np.flatnonzero(conn).tolist():
        if i not in reach:
            out.append(f"argument {i} has an edge but no path to the target")
    return out


def _has_cycle(edge: np.ndarray) -> bool:
    indeg = edge.sum(axis=0).astype(int)
    todo = [i for i in range(len(indeg)) if indeg[i] == 0]
    done = 0
    while todo:
        i = todo.pop()
        done += 1
        for j in np.flatnonzero(edge[i]).tolist():
            indeg[j] -= 1
            if indeg[j] == 0:
                todo.append(j)
    return done != len(indeg)


@dataclass(frozen=True)
class ContextualGraph:
    """An argumentation framework: arguments plus attack and support edges."""

    arguments: tuple[int, ...]
    attacks: frozenset[tuple[int, int]]
    supports: frozenset[tuple[int, int]] = frozenset()
    names: Mapping[int, str] | None = None

    @classmethod
    def build(cls, arguments, attacks=(), supports=(), names=None) -> "ContextualGraph":
        args = tuple(sorted(set(arguments)))
        present = set(args)
        for i, j in list(attacks) + list(supports):
            if i not in present or j not in present:
                raise ValueError(f"edge ({i}, {j}) has an endpoint outside the framework")
        return cls(args, frozenset(attacks), frozenset(supports), names)

    def name(self, i: int) -> str:
        return self.names[i] if self.names and i in self.names else str(i)

    def attackers(self, i: int) -> list[int]:
        return sorted(a for a, b in self.attacks if b == i)

    def attacked(self, i: int) -> list[int]:
        return sorted(b for a, b in self.attacks if a == i)

    def supporters(self, i: int) -> list[int]:
        return sorted(a for a, b in self.supports if b == i)

    def supported(self, i: int) -> list[int]:
        return sorted(b for a, b in self.supports if a == i)


def project(matrix: RelationMatrix, facts: Collection[Atom]) -> ContextualGraph:
    """Keep the arguments active under ``facts`` and the edges between them."""
    active = matrix.universe.active(facts)
    attacks = {(i, j) for i, j in matrix.attacks() if i in active and j in active}
    supports = {(i, j) for i, j in matrix.supports() if i in active and j in active}
    names = {i: matrix.universe[i].name for i in active}
    return ContextualGraph.build(active, attacks, supports, names)


class Label(str, enum.Enum):
    IN = "in"
    OUT = "out"
    UNDEC = "undec"
    SUP = "sup"
    MUST_SUP = "must_sup"


def extension(labelling: Mapping[int, Label]) -> frozenset[int]:
    return frozenset(i for i, lab in labelling.items() if lab in (Label.IN, Label.SUP))


def _topological(args: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[int]:
    args = list(args)
    succ = {a: [] for a in args}
    indeg = dict.fromkeys(args, 0)
    for i, j in edges:
        succ[i].append(j)
        indeg[j] += 1
    order = []
    todo = deque(sorted(a for a in args if indeg[a] == 0))
    while todo:
        i = todo.popleft()
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                todo.append(j)
    if len(order) != len(args):
        raise InvariantError("attack relation contains a cycle")
    return order


def grounded(graph: ContextualGraph) -> dict[int, Label]:
    """Grounded labelling of an acyclic framework (supports are ignored)."""
    attackers = {a: [] for a in graph.arguments}
    for i, j in graph.attacks:
        attackers[j].append(i)
    lab = {}
    for a in _topological(graph.arguments, graph.attacks):
        lab[a] = Label.OUT if any(lab[b] is Label.IN for b in attackers[a]) else Label.IN
    return {a: lab[a] for a in graph.arguments}


def bipolar_extension(graph: ContextualGraph, facts: Collection[int] | None = None) -> dict[int, Label]:
    """Labelling loop for bipolar frameworks.

    Arguments outside ``facts`` (default: all of them) start OUT, the rest
    UNDEC. While some argument is MUST_SUP, or UNDEC with only OUT attackers,
    the lowest-indexed such argument is promoted (MUST_SUP to SUP, otherwise
    IN); it then marks the arguments it attacks OUT unless they are SUP or
    MUST_SUP, and the arguments it supports MUST_SUP. Target and top always
    count as facts.
    """
    args = list(graph.arguments)
    if facts is None:
        facts = set(args)
    else:
        facts = set(facts) | {TARGET, TOP}
    attackers = {a: [] for a in args}
    for i, j in graph.attacks:
        attackers[j].append(i)
    attacked = {a: graph.attacked(a) for a in args}
    supported = {a: graph.supported(a) for a in args}
    lab = {a: (Label.UNDEC if a in facts else Label.OUT) for a in args}

    def ready(x):
        if lab[x] is Label.MUST_SUP:
            return True
        return lab[x] is Label.UNDEC and all(lab[a] is Label.OUT for a in attackers[x])

    # re-promotion only happens through supports, so an acyclic support
    # relation guarantees termination
    _topological(args, graph.supports)
    while True:
        x = next((a for a in args if ready(a)), None)
        if x is None:
            break
        lab[x] = Label.SUP if lab[x] is Label.MUST_SUP else Label.IN
        for y in attacked[x]:
            if lab[y] not in (Label.SUP, Label.MUST_SUP):
                lab[y] = Label.OUT
        for y in supported[x]:
            lab[y] = Label.MUST_SUP
    return lab


def labelling(graph: ContextualGraph, variant: Variant | str) -> dict[int, Label]:
    if Variant.parse(variant) is Variant.BIPOLAR:
        return bipolar_extension(graph)
    return grounded(graph)


def predict(matrix: RelationMatrix, facts: Collection[Atom]) -> bool:
    """True iff the target belongs to the extension of the contextual graph."""
    graph = project(matrix, facts)
    return TARGET in extension(labelling(graph, matrix.universe.variant))
