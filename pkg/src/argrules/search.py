"""Best-first search over relation matrices.

Nodes are scored by ``errors + edges / |A|**2``; because the edge fraction
is below one, comparing ``(errors, edges)`` lexicographically gives the
same order without floating point, and the frontier breaks remaining ties
by insertion order.
"""
from __future__ import annotations

import hashlib
import heapq
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, InvariantError
from .evaluate import BatchEvaluator
from .framework import (
    ATTACK,
    NO_EDGE,
    SUPPORT,
    TARGET,
    ArgumentUniverse,
    RelationMatrix,
    Variant,
    _reachable,
    removable,
    violations,
)

log = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    max_iterations: int = 100
    variant: Variant = Variant.BASE
    seed: int = 0
    prune: bool = True

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")


class SearchNode:
    """A candidate graph with its training score.

    Edges are kept as sorted tuples; the dense matrix is only built when a
    node is expanded or returned.
    """

    __slots__ = ("universe", "attacks", "supports", "errors", "prediction", "serial", "digest", "_matrix")

    def __init__(self, universe, attacks, supports, errors, prediction, serial=0, digest=b""):
        self.universe = universe
        self.attacks = attacks
        self.supports = supports
        self.errors = errors
        self.prediction = prediction
        self.serial = serial
        self.digest = digest
        self._matrix = None

    @property
    def matrix(self) -> RelationMatrix:
        if self._matrix is None:
            self._matrix = RelationMatrix.from_edges(self.universe, self.attacks, self.supports)
        return self._matrix

    @property
    def edge_count(self) -> int:
        return len(self.attacks) + len(self.supports)

    @property
    def h(self) -> Fraction:
        return Fraction(self.edge_count, len(self.universe) ** 2) + self.errors

    @property
    def key(self):
        return (self.errors, self.edge_count, self.serial)

    def __lt__(self, other):
        return self.key < other.key


@dataclass
class SearchResult:
    matrix: RelationMatrix
    errors: int
    accuracy: float
    iterations: int
    expanded: int
    generated: int
    history: list[tuple[int, int, int, Fraction]] = field(default_factory=list)


def _digest(size: int, attacks, supports) -> bytes:
    # sparse row-major serialisation: (flat index, code) of every edge entry;
    # the forbidden/empty entries are fixed by the universe
    entries = sorted([(i * size + j, ATTACK) for i, j in attacks] + [(i * size + j, SUPPORT) for i, j in supports])
    payload = size.to_bytes(4, "little") + b"".join(
        k.to_bytes(4, "little") + v.to_bytes(1, "little") for k, v in entries
    )
    return hashlib.blake2b(payload, digest_size=16).digest()


def node_hash(matrix: RelationMatrix) -> bytes:
    """128-bit digest of the matrix entries in row-major order."""
    return _digest(matrix.size, matrix.attacks(), matrix.supports())


def prune_check(parent_prediction, child_prediction) -> bool:
    """True when adding an edge changed no individual prediction.

    Accepts packed int masks or boolean vectors.
    """
    if isinstance(parent_prediction, int) and isinstance(child_prediction, int):
        return parent_prediction == child_prediction
    return bool(np.array_equal(np.asarray(parent_prediction), np.asarray(child_prediction)))


def heuristic(matrix: RelationMatrix, train: Dataset, variant=None) -> tuple[int, int, Fraction]:
    """``(errors, edge_count, h)`` of ``matrix`` on ``train``.

    ``variant`` defaults to the matrix universe's own; passing a different
    one is a configuration error.
    """
    if variant is not None and Variant.parse(variant) is not matrix.universe.variant:
        raise ConfigError("variant does not match the matrix universe")
    ev = BatchEvaluator(matrix.universe, train.instances)
    errors = ev.errors(ev.predict(matrix.attacks(), matrix.supports()))
    edges = matrix.edge_count
    return errors, edges, Fraction(edges, matrix.size ** 2) + errors


def candidate_moves(matrix: RelationMatrix):
    """Legal single-entry changes as ``(src, dst, new_value)``, row-major.

    Additions must pass :func:`~argrules.framework.legal_target`; removals
    must leave every remaining edge on a path to the target.
    """
    g = matrix.grid
    n = g.shape[0]
    edge = g > 0
    conn = edge.any(axis=1)
    conn[TARGET] = True
    kinds = (ATTACK, SUPPORT) if matrix.universe.variant is Variant.BIPOLAR else (ATTACK,)
    # arguments reachable from each connected destination; src in there => cycle
    below = {int(j): _reachable(g, int(j)) for j in np.flatnonzero(conn)}
    free = (g == NO_EDGE) & ~edge.T
    moves = []
    for i in range(n):
        for j in range(n):
            if edge[i, j]:
                if removable(matrix, i, j):
                    moves.append((i, j, NO_EDGE))
            elif free[i, j] and conn[j] and i not in below[j]:
                for kind in kinds:
                    moves.append((i, j, kind))
    return moves


class _Scorer:
    def __init__(self, universe: ArgumentUniverse, train: Dataset):
        self.universe = universe
        self.ev = BatchEvaluator(universe, train.instances)
        self.serial = itertools.count()
        self.bipolar = universe.variant is Variant.BIPOLAR

    def score(self, attacks, supports) -> SearchNode:
        pred = self.ev.predict(attacks, supports)
        return self._node(attacks, supports, pred)

    def _node(self, attacks, supports, pred, digest=None) -> SearchNode:
        if digest is None:
            digest = _digest(len(self.universe), attacks, supports)
        return SearchNode(self.universe, attacks, supports, self.ev.errors(pred), pred,
                          next(self.serial), digest)

    def children(self, node: SearchNode):
        """Yield ``(is_addition, attacks, supports, hint)`` per legal move."""
        masks = None if (self.bipolar and node.supports) else self.ev.grounded_masks(node.attacks)
        for i, j, v in candidate_moves(node.matrix):
            attacks, supports = node.attacks, node.supports
            if v == NO_EDGE:
                if (i, j) in attacks:
                    attacks = tuple(e for e in attacks if e != (i, j))
                else:
                    supports = tuple(e for e in supports if e != (i, j))
            elif v == ATTACK:
                attacks = tuple(sorted(attacks + ((i, j),)))
            else:
                supports = tuple(sorted(supports + ((i, j),)))
            yield v != NO_EDGE, attacks, supports, (masks, j)

    def child_node(self, attacks, supports, hint, digest=None) -> SearchNode:
        masks, changed = hint
        if masks is not None and not (self.bipolar and supports):
            pred = self.ev.regrounded(masks, attacks, changed)
        else:
            pred = self.ev.predict(attacks, supports)
        return self._node(attacks, supports, pred, digest)


def neighbours(node: SearchNode, train: Dataset, scorer: _Scorer | None = None) -> list[SearchNode]:
    """Every legal one-entry mutation of ``node``, scored on ``train``."""
    scorer = scorer or _Scorer(node.universe, train)
    return [scorer.child_node(a, s, hint) for _, a, s, hint in scorer.children(node)]


def make_node(matrix: RelationMatrix, train: Dataset) -> SearchNode:
    return _Scorer(matrix.universe, train).score(tuple(matrix.attacks()), tuple(matrix.supports()))


def start_matrix(universe: ArgumentUniverse) -> RelationMatrix:
    return RelationMatrix(universe)


def search(train: Dataset, config: SearchConfig | None = None, universe: ArgumentUniverse | None = None) -> SearchResult:
    """Learn a relation matrix that minimises training errors.

    Pops one node per iteration. Stops when the frontier empties, the
    current node classifies the whole training set correctly, or the
    iteration budget runs out; returns the most accurate node popped.
    """
    config = config or SearchConfig()
    if universe is None:
        universe = ArgumentUniverse(train.schema, config.variant,
                                    f"{train.label_column}={train.positive_class}")
    elif universe.variant is not config.variant:
        raise ConfigError("universe variant does not match the search configuration")
    scorer = _Scorer(universe, train)
    n = len(train)
    size = len(universe)

    start = scorer.score((), ())
    best = node = start
    frontier = [start]
    visited = {start.digest}
    iteration = 0
    generated = 0
    history = []
    while frontier and node.errors > 0 and iteration < config.max_iterations:
        iteration += 1
        for added, attacks, supports, hint in scorer.children(node):
            digest = _digest(size, attacks, supports)
            if digest in visited:
                continue
            visited.add(digest)
            child = scorer.child_node(attacks, supports, hint, digest)
            generated += 1
            if config.prune and added and prune_check(node.prediction, child.prediction):
                continue
            heapq.heappush(frontier, child)
        if not frontier:
            break
        node = heapq.heappop(frontier)
        if node.errors < best.errors:
            best = node
        history.append((iteration, len(frontier), best.errors, best.h))
        log.info("iteration %d frontier %d best_errors %d best_h %s",
                 iteration, len(frontier), best.errors, float(best.h))

    problems = violations(best.matrix)
    if problems:
        raise InvariantError(f"search produced an ill-formed matrix: {problems}")
    accuracy = 100.0 * (n - best.errors) / n if n else 100.0
    return SearchResult(best.matrix, best.errors, accuracy, iteration, iteration, generated, history)
