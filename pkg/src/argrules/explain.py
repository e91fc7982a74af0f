"""Justification sets for the acceptance or rejection of a topic argument.

Defence is read along attack paths into the topic: an argument at even
distance defends it (defenders, defenders of defenders, ...), one at odd
distance attacks it directly or indirectly. ``def_by`` keeps the even-distance
arguments that belong to the extension; ``not_def`` keeps the odd-distance
ones that no extension member attacks.
"""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Collection, Mapping, Sequence

from .framework import ContextualGraph


class Verdict(str, enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class Role(str, enum.Enum):
    TOPIC = "topic"
    DEFENDER = "defender"
    SUPPORTER = "supporter"
    UNDEFENDED_ATTACKER = "undefended attacker"


class ExplanationError(ValueError):
    """The topic's status does not match the requested explanation."""


@dataclass(frozen=True)
class ExplanationSet:
    topic: int
    verdict: Verdict
    members: frozenset[int]
    semantics: str = "grounded"
    roles: Mapping[int, Role] = field(default_factory=dict, compare=False)
    names: Mapping[int, str] | None = field(default=None, compare=False)

    def name(self, i: int) -> str:
        return self.names[i] if self.names and i in self.names else str(i)

    def to_dict(self) -> dict:
        return {
            "topic": self.name(self.topic),
            "verdict": self.verdict.value,
            "semantics": self.semantics,
            "members": [
                {"argument": self.name(i), "role": self.roles.get(i, Role.TOPIC).value}
                for i in sorted(self.members)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _parity_reach(graph: ContextualGraph, topic: int, step=None) -> tuple[set[int], set[int]]:
    """Arguments with an even / odd length attack path into ``topic``.

    ``step(b, c)`` may veto moving from odd-distance ``b`` to its attacker
    ``c``; support edges are followed backwards when ``step`` is given.
    """
    attackers: dict[int, list[int]] = {a: [] for a in graph.arguments}
    for i, j in graph.attacks:
        attackers[j].append(i)
    supporters: dict[int, list[int]] = {a: [] for a in graph.arguments}
    if step is not None:
        for i, j in graph.supports:
            supporters[j].append(i)
    seen = {(topic, 0)}
    todo = deque(seen)
    while todo:
        node, parity = todo.popleft()
        nxt = [(a, 1 - parity) for a in attackers[node]
               if parity == 0 or step is None or step(node, a)]
        nxt += [(s, parity) for s in supporters[node]]
        for state in nxt:
            if state not in seen:
                seen.add(state)
                todo.append(state)
    even = {a for a, p in seen if p == 0}
    odd = {a for a, p in seen if p == 1}
    return even, odd


def def_by(graph: ContextualGraph, extension: Collection[int], topic: int) -> ExplanationSet:
    """The topic plus every extension member that defends it."""
    extension = set(extension)
    if topic not in extension:
        raise ExplanationError("topic is not accepted; use not_def")
    even, _ = _parity_reach(graph, topic)
    members = (even & extension) | {topic}
    roles = {i: Role.DEFENDER for i in members}
    roles[topic] = Role.TOPIC
    return ExplanationSet(topic, Verdict.ACCEPTED, frozenset(members), "grounded", roles, graph.names)


def not_def(graph: ContextualGraph, extension: Collection[int], topic: int) -> ExplanationSet:
    """The topic plus its direct and indirect attackers left undefeated by the extension."""
    extension = set(extension)
    if topic in extension:
        raise ExplanationError("topic is accepted; use def_by")
    _, odd = _parity_reach(graph, topic)
    defeated = {j for i, j in graph.attacks if i in extension}
    members = (odd - defeated) | {topic}
    roles = {i: Role.UNDEFENDED_ATTACKER for i in members}
    roles[topic] = Role.TOPIC
    return ExplanationSet(topic, Verdict.REJECTED, frozenset(members), "grounded", roles, graph.names)


def not_acc(graph: ContextualGraph, extensions: Sequence[Collection[int]], topic: int) -> ExplanationSet:
    """Union of ``not_def`` over every extension of a semantics."""
    if not extensions:
        raise ExplanationError("no extensions given")
    parts = [not_def(graph, ext, topic) for ext in extensions]
    members = frozenset().union(*(p.members for p in parts))
    roles = {}
    for p in parts:
        roles.update(p.roles)
    return ExplanationSet(topic, Verdict.REJECTED, members, "grounded", roles, graph.names)


def def_by_bipolar(
    graph: ContextualGraph,
    extension: Collection[int],
    topic: int,
    mode: str = "defended2",
    strict: bool = False,
) -> ExplanationSet:
    """Defenders of ``topic`` in a bipolar framework.

    Supporters of a defended argument count as defending it, and supporters
    of an attacker count as attackers. A counter-attack ``c -> b`` only
    defends when the mode's condition holds:

    ``defended2``
        some extension member supports ``c``. Unless ``strict``, the
        condition is waived for a ``c`` that has no supporters at all, so
        support-free graphs give the same result as :func:`def_by`.
    ``defended3``
        every supporter of ``b`` is attacked by an extension member.
    """
    extension = set(extension)
    if topic not in extension:
        raise ExplanationError("topic is not accepted")
    if mode not in ("defended2", "defended3"):
        raise ValueError(f"unknown mode {mode!r}")
    attackers_of = {a: set() for a in graph.arguments}
    for i, j in graph.attacks:
        attackers_of[j].add(i)
    supporters_of = {a: set() for a in graph.arguments}
    for i, j in graph.supports:
        supporters_of[j].add(i)

    def supported_defence(b, c):
        sup = supporters_of[c]
        if not sup:
            return not strict
        return bool(sup & extension)

    def attacking_defence(b, c):
        return all(attackers_of[d] & extension for d in supporters_of[b])

    step = supported_defence if mode == "defended2" else attacking_defence
    even, _ = _parity_reach(graph, topic, step)
    members = (even & extension) | {topic}
    supporting = {i for i, j in graph.supports if j in members}
    roles = {i: Role.SUPPORTER if i in supporting else Role.DEFENDER for i in members}
    roles[topic] = Role.TOPIC
    return ExplanationSet(topic, Verdict.ACCEPTED, frozenset(members), "bipolar-grounded",
                          roles, graph.names)


def render(explanation: ExplanationSet) -> str:
    """Plain-text account of an explanation, one line per member."""
    topic = explanation.name(explanation.topic)
    others = sorted(explanation.members - {explanation.topic}, key=explanation.name)
    if explanation.verdict is Verdict.ACCEPTED:
        if not others:
            return f"{topic}: accepted; no attackers present."
        lines = [f"{topic}: accepted, because of"]
        for i in others:
            role = explanation.roles.get(i, Role.DEFENDER)
            verb = "supports it" if role is Role.SUPPORTER else "defends it against an attack"
            lines.append(f"  - {explanation.name(i)} ({verb})")
        return "\n".join(lines)
    if not others:
        return f"{topic}: rejected; every attacker is answered but the target is not accepted."
    lines = [f"{topic}: rejected, because of"]
    for i in others:
        lines.append(f"  - {explanation.name(i)} (undefended attacker)")
    return "\n".join(lines)
