import itertools

import numpy as np
import pytest

from argrules import (
    ATTACK,
    FORBIDDEN,
    NO_EDGE,
    SUPPORT,
    TARGET,
    TOP,
    ArgumentUniverse,
    Atom,
    AttributeSchema,
    ContextualGraph,
    InvariantError,
    Label,
    RelationMatrix,
    Variant,
    bipolar_extension,
    extension,
    grounded,
    legal_target,
    predict,
    project,
    violations,
)
from argrules.dataset import NOMINAL, Instance
from argrules.evaluate import BatchEvaluator, pack, unpack
from argrules.framework import labelling

from conftest import brute_grounded, is_admissible, random_dag


def schema(**attrs):
    return [AttributeSchema(k, NOMINAL, tuple(v)) for k, v in attrs.items()]


CAR = schema(
    buying_cost=["high", "low", "med", "vhigh"],
    maintenance=["high", "low", "med", "vhigh"],
    doors=["2", "3", "4", "5more"],
    nb_persons=["2", "4", "5-or-more"],
    lug_boot=["big", "med", "small"],
    safety=["high", "low", "med"],
)
CAR_FACTS = frozenset(Atom(*s.split("=")) for s in [
    "buying_cost=med", "maintenance=low", "doors=3",
    "nb_persons=5-or-more", "lug_boot=med", "safety=high",
])


def car_matrix():
    """A Car graph whose contextual graph for CAR_FACTS accepts the target."""
    u = ArgumentUniverse(CAR, "base", "acceptability=vgood")
    ix = u.index
    t = "acceptability=vgood"
    edges = [
        ("top", t),
        ("buying_cost=med", "top"),
        ("doors=3", t),
        ("nb_persons=5-or-more", "doors=3"),
        ("safety=high", t),
        ("lug_boot=med", "safety=high"),
        # inactive under CAR_FACTS
        ("buying_cost=vhigh", t),
        ("safety=low", t),
        ("lug_boot=small", "buying_cost=vhigh"),
    ]
    m = RelationMatrix.from_edges(u, [(ix(a), ix(b)) for a, b in edges])
    assert violations(m) == []
    return m


def tiny_universe(variant="base", attrs=2, values=2):
    return ArgumentUniverse(schema(**{f"a{k}": [f"v{v}" for v in range(values)] for k in range(attrs)}),
                            variant, "y=1")


class TestUniverse:
    def test_layout_base(self):
        u = tiny_universe()
        assert u.names == ["y=1", "top", "a0=v0", "a0=v1", "a1=v0", "a1=v1"]

    def test_layout_negative(self):
        u = tiny_universe("n", attrs=1)
        assert u.names == ["y=1", "top", "a0=v0", "a0=v1", "not(a0=v0)", "not(a0=v1)"]

    def test_static_bans(self):
        u = tiny_universe("n", attrs=2)
        forb = u.static_forbidden()
        assert forb.diagonal().all()
        assert forb[TARGET].all()
        assert forb[TOP].sum() == len(u) - 1 and not forb[TOP, TARGET]
        a, na = u.index("a0=v0"), u.index("not(a0=v1)")
        assert forb[a, na] and forb[na, a]
        assert not forb[a, u.index("a1=v0")]

    def test_start_matrix_marks_bans(self):
        u = tiny_universe()
        m = RelationMatrix(u)
        assert ((m.grid == FORBIDDEN) == u.static_forbidden()).all()
        assert m.edge_count == 0 and violations(m) == []

    def test_unknown_variant(self):
        from argrules import ConfigError

        with pytest.raises(ConfigError):
            tiny_universe("both")


class TestLegalTarget:
    def test_start_graph_only_edges_into_target(self):
        u = tiny_universe("n", attrs=3, values=3)
        m = RelationMatrix(u)
        legal = {(i, j) for i in range(len(u)) for j in range(len(u)) if legal_target(m, i, j)}
        assert legal == {(i, TARGET) for i in range(1, len(u))}
        assert legal_target(m, TOP, TARGET)

    def test_reflexive_and_symmetric(self):
        u = tiny_universe()
        m = RelationMatrix.from_edges(u, [(2, TARGET)])
        assert not any(legal_target(m, x, x) for x in range(len(u)))
        m = RelationMatrix.from_edges(u, [(2, TARGET), (4, 2)])
        assert not legal_target(m, 2, 4)

    def test_cycle_and_path_rules(self):
        u = tiny_universe(attrs=3)
        a, b, c = u.index("a0=v0"), u.index("a1=v0"), u.index("a2=v0")
        m = RelationMatrix.from_edges(u, [(a, TARGET), (b, a)])
        assert legal_target(m, c, b)
        assert not legal_target(m, a, c)      # c has no path to the target yet
        m2 = RelationMatrix.from_edges(u, [(a, TARGET), (b, a), (c, b)])
        assert not legal_target(m2, a, c)     # would close a -> c -> b -> a

    def test_supports_only_in_bipolar(self):
        m = RelationMatrix(tiny_universe())
        assert not legal_target(m, 2, TARGET, SUPPORT)
        mb = RelationMatrix(tiny_universe("bipolar"))
        assert legal_target(mb, 2, TARGET, SUPPORT)

    def test_same_attribute_never_legal(self):
        u = tiny_universe(attrs=2)
        m = RelationMatrix.from_edges(u, [(2, TARGET), (4, TARGET)])
        assert not legal_target(m, 3, 2)
        assert legal_target(m, 3, 4)

    def test_out_of_range(self):
        m = RelationMatrix(tiny_universe())
        assert not legal_target(m, -1, 0) and not legal_target(m, 0, 99)


class TestProjection:
    def test_empty_facts(self):
        u = tiny_universe()
        m = RelationMatrix.from_edges(u, [(TOP, TARGET), (2, TOP)])
        g = project(m, frozenset())
        assert g.arguments == (TARGET, TOP)
        assert g.attacks == {(TOP, TARGET)}

    def test_negative_argument_kept_when_atom_missing(self):
        u = tiny_universe("n", attrs=1)
        g = project(RelationMatrix(u), frozenset({Atom("a0", "v1")}))
        assert set(g.arguments) == {TARGET, TOP, u.index("a0=v1"), u.index("not(a0=v0)")}

    def test_unknown_atoms_ignored(self):
        u = tiny_universe()
        g = project(RelationMatrix(u), {Atom("zzz", "1"), Atom("a0", "v0")})
        assert set(g.arguments) == {TARGET, TOP, 2}

    def test_idempotent(self):
        m = car_matrix()
        g = project(m, CAR_FACTS)
        induced = RelationMatrix.from_edges(m.universe, g.attacks, g.supports)
        assert project(induced, CAR_FACTS) == g

    def test_edge_endpoints_checked(self):
        with pytest.raises(ValueError):
            ContextualGraph.build([0, 1], [(0, 5)])


class TestGrounded:
    def test_chain(self):
        g = ContextualGraph.build([TARGET, TOP, 2], [(2, TOP), (TOP, TARGET)])
        assert grounded(g) == {2: Label.IN, TOP: Label.OUT, TARGET: Label.IN}

    def test_top_alone(self):
        g = ContextualGraph.build([TARGET, TOP], [(TOP, TARGET)])
        assert grounded(g) == {TOP: Label.IN, TARGET: Label.OUT}

    def test_cycle_is_an_invariant_error(self):
        g = ContextualGraph.build([0, 1, 2], [(1, 2), (2, 1)])
        with pytest.raises(InvariantError):
            grounded(g)

    def test_random_dags_match_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            g = random_dag(rng, int(rng.integers(1, 9)))
            lab = grounded(g)
            assert extension(lab) == brute_grounded(g)
            assert Label.UNDEC not in lab.values()
            assert is_admissible(g, set(extension(lab)))
            assert grounded(g) == lab


class TestBipolar:
    def baf(self):
        a, b, c, d = range(4)
        return ContextualGraph.build([a, b, c, d], [(c, d), (d, c), (d, b)], [(a, b)])

    def test_fixture_all_facts(self):
        lab = bipolar_extension(self.baf())
        assert lab == {0: Label.IN, 1: Label.SUP, 2: Label.UNDEC, 3: Label.UNDEC}

    def test_fixture_without_d(self):
        lab = bipolar_extension(self.baf(), {0, 1, 2})
        assert lab == {0: Label.IN, 1: Label.SUP, 2: Label.IN, 3: Label.OUT}

    def test_without_supports_equals_grounded(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            g = random_dag(rng, int(rng.integers(1, 9)))
            assert bipolar_extension(g) == grounded(g)

    def test_support_cycle_rejected(self):
        g = ContextualGraph.build([0, 1, 2], [], [(1, 2), (2, 1)])
        with pytest.raises(InvariantError):
            bipolar_extension(g)

    def test_support_overrides_attack(self):
        # T attacked by an IN top but supported by an IN argument stays accepted
        g = ContextualGraph.build([TARGET, TOP, 2], [(TOP, TARGET)], [(2, TARGET)])
        lab = bipolar_extension(g)
        assert lab[TARGET] is Label.SUP and lab[TOP] is Label.IN


class TestPredict:
    def test_start_graph_always_true(self):
        u = tiny_universe()
        m = RelationMatrix(u)
        for facts in [set(), {Atom("a0", "v0")}, {Atom("a0", "v1"), Atom("a1", "v0")}]:
            assert predict(m, facts)

    def test_top_only_always_false(self):
        u = tiny_universe()
        m = RelationMatrix.from_edges(u, [(TOP, TARGET)])
        for facts in [set(), {Atom("a0", "v0")}, {Atom("a0", "v1"), Atom("a1", "v0")}]:
            assert not predict(m, facts)

    def test_car_instance_accepted(self):
        assert predict(car_matrix(), CAR_FACTS)

    def test_car_variations(self):
        m = car_matrix()
        no_lug = (CAR_FACTS - {Atom("lug_boot", "med")}) | {Atom("lug_boot", "big")}
        assert not predict(m, no_lug)


def random_matrix(rng, universe, steps=12):
    """Grow a well-formed matrix by random legal additions."""
    m = RelationMatrix(universe)
    kinds = (ATTACK, SUPPORT) if universe.variant is Variant.BIPOLAR else (ATTACK,)
    n = len(universe)
    for _ in range(steps):
        cands = [(i, j, k) for i in range(n) for j in range(n) for k in kinds if legal_target(m, i, j, k)]
        if not cands:
            break
        i, j, k = cands[rng.integers(len(cands))]
        m = m.with_entry(i, j, k)
    return m


def random_instances(rng, universe, count=30):
    atoms = [a for attr in universe.schema for a in attr.atoms]
    out = []
    for _ in range(count):
        facts = set()
        for attr in universe.schema:
            r = rng.integers(len(attr.values) + 1)
            if r < len(attr.values):
                facts.add(attr.atoms[r])
        out.append(Instance(frozenset(facts), bool(rng.integers(2))))
    assert atoms
    return out


class TestBatchEvaluator:
    @pytest.mark.parametrize("variant", ["base", "n", "bipolar"])
    def test_matches_scalar_predict(self, variant):
        rng = np.random.default_rng(11)
        for trial in range(40):
            u = tiny_universe(variant, attrs=int(rng.integers(1, 4)), values=int(rng.integers(1, 4)))
            m = random_matrix(rng, u, int(rng.integers(0, 15)))
            insts = random_instances(rng, u)
            ev = BatchEvaluator(u, insts)
            batch = ev.predictions(m.attacks(), m.supports())
            scalar = [predict(m, i.facts) for i in insts]
            assert batch.tolist() == scalar, (trial, m)
            assert ev.errors(ev.predict(m.attacks(), m.supports())) == sum(
                s != i.label for s, i in zip(scalar, insts))

    def test_regrounded_matches_full(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            u = tiny_universe("n", attrs=3, values=2)
            m = random_matrix(rng, u, 8)
            insts = random_instances(rng, u, 40)
            ev = BatchEvaluator(u, insts)
            masks = ev.grounded_masks(m.attacks())
            for i, j in itertools.product(range(len(u)), repeat=2):
                if legal_target(m, i, j):
                    child = m.with_entry(i, j, ATTACK)
                    assert ev.regrounded(masks, child.attacks(), j) == ev.predict(child.attacks())

    def test_pack_round_trip(self):
        v = np.array([True, False, True, True, False])
        assert unpack(pack(v), 5).tolist() == v.tolist()

    def test_labelling_dispatch(self):
        g = ContextualGraph.build([0, 1], [(1, 0)])
        assert labelling(g, "bipolar") == labelling(g, Variant.BASE)


def test_relation_matrix_value_semantics():
    u = tiny_universe()
    m = RelationMatrix.from_edges(u, [(2, TARGET)])
    assert m == m.copy() and hash(m) == hash(m.copy())
    assert m.with_entry(2, TARGET, NO_EDGE) == RelationMatrix(u)
    assert m.connected().tolist() == [True, False, True, False, False, False]
    assert "a0=v0->y=1" in repr(m)


def test_violations_detects_problems():
    u = tiny_universe()
    g = RelationMatrix(u).grid.copy()
    g[2, 4] = ATTACK                      # dangling: no path to the target
    assert any("no path" in v for v in violations(RelationMatrix(u, g)))
    g = RelationMatrix(u).grid.copy()
    g[2, TARGET] = g[4, 2] = g[2, 4] = ATTACK
    problems = violations(RelationMatrix(u, g))
    assert any("symmetric" in v for v in problems) and any("cycle" in v for v in problems)
    g = RelationMatrix(u).grid.copy()
    g[2, TARGET] = SUPPORT
    assert any("support" in v for v in violations(RelationMatrix(u, g)))
