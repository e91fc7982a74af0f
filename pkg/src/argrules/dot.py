"""Graphviz DOT rendering of universal and contextual graphs.

Target is filled green, top red; attacks are solid edges and supports
dashed ones.
"""
from __future__ import annotations

from .framework import TARGET, TOP, ContextualGraph, RelationMatrix


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: RelationMatrix | ContextualGraph, name: str = "arguments") -> str:
    """DOT text for a relation matrix (edge-bearing arguments only) or a contextual graph."""
    if isinstance(graph, RelationMatrix):
        attacks, supports = graph.attacks(), graph.supports()
        nodes = sorted({TARGET} | {k for e in attacks + supports for k in e})
        label = graph.universe.names.__getitem__
    else:
        attacks, supports = sorted(graph.attacks), sorted(graph.supports)
        nodes = list(graph.arguments)
        label = graph.name
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=box, style=rounded];"]
    for k in nodes:
        attrs = [f"label={_quote(label(k))}"]
        if k == TARGET:
            attrs.append('style="rounded,filled", fillcolor=palegreen')
        elif k == TOP:
            attrs.append('style="rounded,filled", fillcolor=lightcoral')
        lines.append(f"  n{k} [{', '.join(attrs)}];")
    for i, j in attacks:
        lines.append(f"  n{i} -> n{j};")
    for i, j in supports:
        lines.append(f"  n{i} -> n{j} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
