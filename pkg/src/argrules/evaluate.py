"""Whole-dataset prediction for a candidate graph.

Scoring a graph against every training instance is the inner loop of the
search, so instead of projecting one contextual graph per row this module
labels all rows at once. Each argument's activity over the rows is packed
into a Python int (bit ``r`` set when the argument is in row ``r``'s
contextual graph); on an acyclic attack graph the grounded labelling is a
single topological pass of bitwise operations.

The bipolar loop is order dependent, so it is simulated step by step with
numpy, one column of label codes per row.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantError
from .framework import TARGET, ArgumentUniverse, Variant


def pack(column: np.ndarray) -> int:
    """Pack a boolean vector into an int, element ``r`` -> bit ``r``."""
    return int.from_bytes(np.packbits(column, bitorder="little").tobytes(), "little")


def unpack(mask: int, n: int) -> np.ndarray:
    raw = mask.to_bytes((n + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


# label codes for the vectorised bipolar loop
_OUT, _UNDEC, _IN, _SUP, _MUST, _ABSENT = 0, 1, 2, 3, 4, 5


class BatchEvaluator:
    """Predictions of arbitrary graphs over a fixed list of instances."""

    def __init__(self, universe: ArgumentUniverse, instances: Sequence, labels: Sequence[bool] | None = None):
        self.universe = universe
        self.n = len(instances)
        self.activity = universe.activity(instances)
        self.masks = [pack(self.activity[:, i]) for i in range(len(universe))]
        if labels is None:
            labels = [inst.label for inst in instances]
        self.label_mask = pack(np.asarray(labels, dtype=bool)) if self.n else 0
        self.full = (1 << self.n) - 1

    def predict(self, attacks: Iterable[tuple[int, int]], supports: Iterable[tuple[int, int]] = ()) -> int:
        supports = list(supports)
        if self.universe.variant is Variant.BIPOLAR and supports:
            return pack(self._bipolar(list(attacks), supports)) if self.n else 0
        return self._grounded(attacks)

    def errors(self, prediction: int) -> int:
        return (prediction ^ self.label_mask).bit_count()

    def predictions(self, attacks, supports=()) -> np.ndarray:
        return unpack(self.predict(attacks, supports), self.n)

    def _grounded(self, attacks) -> int:
        return self.grounded_masks(attacks)[TARGET] & self.full

    def grounded_masks(self, attacks) -> dict[int, int]:
        """Per-argument IN masks for every argument touching an attack."""
        attackers: dict[int, list[int]] = {TARGET: []}
        succ: dict[int, list[int]] = {TARGET: []}
        indeg: dict[int, int] = {TARGET: 0}
        for i, j in attacks:
            for k in (i, j):
                if k not in indeg:
                    attackers[k] = []
                    succ[k] = []
                    indeg[k] = 0
            attackers[j].append(i)
            succ[i].append(j)
            indeg[j] += 1
        todo = deque(k for k, d in indeg.items() if d == 0)
        masks = self.masks
        inside = {}
        while todo:
            k = todo.popleft()
            beaten = 0
            for a in attackers[k]:
                beaten |= inside[a]
            inside[k] = masks[k] & ~beaten
            for j in succ[k]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    todo.append(j)
        if len(inside) != len(indeg):
            raise InvariantError("attack relation contains a cycle")
        return inside

    def regrounded(self, parent: dict[int, int], attacks, changed: int) -> int:
        """Target mask after an edge into ``changed`` was added or removed.

        ``parent`` holds the IN masks before the change (from
        :meth:`grounded_masks`); only ``changed`` and the arguments
        downstream of it are relabelled.
        """
        attackers: dict[int, list[int]] = {}
        succ: dict[int, list[int]] = {}
        for i, j in attacks:
            attackers.setdefault(j, []).append(i)
            succ.setdefault(i, []).append(j)
        affected = {changed}
        todo = [changed]
        while todo:
            k = todo.pop()
            for j in succ.get(k, ()):
                if j not in affected:
                    affected.add(j)
                    todo.append(j)
        indeg = dict.fromkeys(affected, 0)
        for k in affected:
            for j in succ.get(k, ()):
                indeg[j] += 1
        ready = deque(k for k in affected if indeg[k] == 0)
        masks = self.masks
        inside = {}
        while ready:
            k = ready.popleft()
            beaten = 0
            for a in attackers.get(k, ()):
                m = inside.get(a)
                if m is None:
                    m = parent.get(a)
                    if m is None:
                        # a source new to the graph has no attackers yet
                        m = masks[a]
                beaten |= m
            inside[k] = masks[k] & ~beaten
            for j in succ.get(k, ()):
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(inside) != len(affected):
            raise InvariantError("attack relation contains a cycle")
        return inside[TARGET] & self.full if TARGET in inside else parent[TARGET] & self.full

    def _bipolar(self, attacks, supports) -> np.ndarray:
        nodes = sorted({TARGET} | {k for e in attacks + supports for k in e})
        pos = {k: c for c, k in enumerate(nodes)}
        m = len(nodes)
        att = np.zeros((m, m), dtype=bool)
        sup = np.zeros((m, m), dtype=bool)
        for i, j in attacks:
            att[pos[i], pos[j]] = True
        for i, j in supports:
            sup[pos[i], pos[j]] = True
        act = self.activity[:, nodes]
        lab = np.where(act, _UNDEC, _ABSENT).astype(np.int8)
        rows = np.arange(self.n)
        att_i = att.astype(np.int32)
        while True:
            live_attackers = (lab != _OUT) & (lab != _ABSENT)
            blocked = live_attackers.astype(np.int32) @ att_i > 0
            ready = (lab == _MUST) | ((lab == _UNDEC) & ~blocked)
            has = ready.any(axis=1)
            if not has.any():
                break
            r = rows[has]
            x = ready[r].argmax(axis=1)
            lab[r, x] = np.where(lab[r, x] == _MUST, _SUP, _IN)
            hit = att[x] & (lab[r] != _SUP) & (lab[r] != _MUST) & (lab[r] != _ABSENT)
            sub = lab[r]
            sub[hit] = _OUT
            sub[sup[x] & (sub != _ABSENT)] = _MUST
            lab[r] = sub
        t = lab[:, pos[TARGET]]
        return (t == _IN) | (t == _SUP)
