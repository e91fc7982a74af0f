"""Labelling small frameworks by hand: grounded semantics and the bipolar loop."""
from argrules import ContextualGraph, bipolar_extension, grounded

# a chain: a attacks top, top attacks the target
chain = ContextualGraph.build([0, 1, 2], [(2, 1), (1, 0)], names={0: "target", 1: "top", 2: "a"})
for arg, lab in sorted(grounded(chain).items()):
    print(f"{chain.name(arg):>6}: {lab.value}")

# a supports b, c and d attack each other, d attacks b
baf = ContextualGraph.build(range(4), [(2, 3), (3, 2), (3, 1)], [(0, 1)],
                            names=dict(enumerate("abcd")))
for facts in ({0, 1, 2, 3}, {0, 1, 2}):
    lab = bipolar_extension(baf, facts)
    print(sorted(baf.name(f) for f in facts), {baf.name(k): v.value for k, v in lab.items()})
