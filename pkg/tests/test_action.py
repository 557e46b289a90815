"""Generic generating-set assembly for finite graph actions."""

import json
import random
from pathlib import Path

import pytest

from liftkit import action as ac

FIXTURES = json.loads(
    (Path(__file__).parent / "data" / "action_instances.json").read_text())


def load_instance(fixture):
    return ac.FiniteActionInstance(
        n_vertices=fixture["n_vertices"],
        edges=tuple(tuple(e) for e in fixture["edges"]),
        elements=tuple(tuple(p) for p in fixture["elements"]))


class TestPermutations:
    def test_composition_order(self):
        p, q = (1, 2, 0), (0, 2, 1)
        # apply q first: 1 -> 2 under q, then 2 -> 0 under p
        assert ac.perm_mul(p, q)[1] == 0

    def test_inverse(self):
        p = (2, 0, 3, 1)
        assert ac.perm_mul(p, ac.perm_inv(p)) == (0, 1, 2, 3)

    def test_closure_of_symmetric_group(self):
        gens = [(1, 0, 2), (1, 2, 0)]
        assert len(ac.perm_closure(gens, 3)) == 6


class TestValidation:
    def test_fixture_instances_validate(self):
        for fx in FIXTURES:
            load_instance(fx).validate()

    def test_missing_identity(self):
        inst = ac.FiniteActionInstance(2, ((0, 1),), ((1, 0),))
        with pytest.raises(ac.ActionInstanceError):
            inst.validate()

    def test_unpreserved_edge(self):
        inst = ac.FiniteActionInstance(
            3, ((0, 1),), ((0, 1, 2), (0, 2, 1)))
        with pytest.raises(ac.ActionInstanceError):
            inst.validate()

    def test_disconnected_graph(self):
        inst = ac.FiniteActionInstance(
            4, ((0, 1), (2, 3)), ((0, 1, 2, 3),))
        with pytest.raises(ac.ActionInstanceError):
            inst.validate()


class TestAssemblyConditions:
    def test_stabilizer_condition_enforced(self):
        inst = load_instance(FIXTURES[0])
        bad = ac.AssemblyInput(
            instance=inst, tree_vertices=(0,),
            stabilizer_gens=(((1, 2, 0),),),  # moves vertex 0
            loop_entries=(), edge_entries=())
        with pytest.raises(ac.AssemblyConditionError):
            ac.assemble(bad)

    def test_loop_condition_enforced(self):
        inst = load_instance(FIXTURES[0])
        bad = ac.AssemblyInput(
            instance=inst, tree_vertices=(0,),
            stabilizer_gens=((),),
            loop_entries=((0, 1, (0, 2, 1)),),  # fixes 0 instead of 0 -> 1
            edge_entries=())
        with pytest.raises(ac.AssemblyConditionError):
            ac.assemble(bad)


class TestVerification:
    def test_fixtures_generate(self):
        for fx in FIXTURES:
            ok, diag = ac.verify_finite_instance(load_instance(fx))
            assert ok == fx["expected"], fx["name"]
            assert diag["closure_order"] == diag["group_order"]

    def test_trivial_group_needs_no_elements(self):
        fx = next(f for f in FIXTURES if f["name"] == "trivial_path")
        ok, diag = ac.verify_finite_instance(load_instance(fx))
        assert ok and diag["group_order"] == 1

    def test_dropping_a_carrying_element_shrinks_the_closure(self):
        fx = next(f for f in FIXTURES if f["name"] == "rotation_ladder")
        inst = load_instance(fx)
        ok, diag = ac.verify_finite_instance(inst)
        assert ok
        inp = diag["input"]
        assert inp.loop_entries or inp.edge_entries
        pruned = ac.AssemblyInput(
            instance=inst, tree_vertices=inp.tree_vertices,
            stabilizer_gens=inp.stabilizer_gens,
            loop_entries=inp.loop_entries[1:],
            edge_entries=inp.edge_entries[1:] if not inp.loop_entries
            else inp.edge_entries)
        gens = ac.assemble(pruned)
        closure = ac.perm_closure(gens, inst.n_vertices) if gens \
            else (tuple(range(inst.n_vertices)),)
        assert len(closure) < diag["group_order"]

    def test_deterministic_diagnostics(self):
        inst = load_instance(FIXTURES[0])
        _, d1 = ac.verify_finite_instance(inst)
        _, d2 = ac.verify_finite_instance(inst)
        assert d1["input"] == d2["input"]

    def test_random_instances(self):
        rng = random.Random(1234)
        for _ in range(100):
            inst = ac.random_instance(rng)
            ok, diag = ac.verify_finite_instance(inst)
            assert ok, diag

    def test_random_instances_are_reproducible(self):
        r1, r2 = random.Random(99), random.Random(99)
        a = [ac.random_instance(r1) for _ in range(5)]
        b = [ac.random_instance(r2) for _ in range(5)]
        assert a == b
