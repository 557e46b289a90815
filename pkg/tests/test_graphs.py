"""Mod-k curve graphs, congruence-subgroup orbits, and quotient multigraphs."""

import json

import pytest

from liftkit import covers as cv
from liftkit import graphs as gr
from liftkit import symplectic as sp
from liftkit import words as wd


def cyclic(k):
    return cv.make_cover("cyclic", k=k)


def orbit_label_map(cover, k, qg):
    """orbit id -> canonical curve-class label via the closed-form classifier."""
    return {i: gr.classify_vertex(cover, rep, k)[0]
            for i, (rep, _) in enumerate(qg.vertices)}


class TestSubgroup:
    def test_orders_by_filtering(self):
        assert len(gr.subgroup_elements(cyclic(2), 2)) == 48
        assert len(gr.subgroup_elements(cv.make_cover("klein"), 2)) == 36

    def test_expected_orders(self):
        assert gr.expected_subgroup_order(cyclic(2), 2) == 48
        assert gr.expected_subgroup_order(cyclic(3), 3) == 1296
        assert gr.expected_subgroup_order(cyclic(5), 5) == 60000
        assert gr.expected_subgroup_order(cv.make_cover("klein"), 2) == 36

    def test_generator_closures(self):
        for cover, k in ((cyclic(2), 2), (cyclic(3), 3),
                         (cv.make_cover("klein"), 2)):
            gens = gr.group_generators(cover, k)
            assert len(sp.mulclose_fast(gens, k)) \
                == gr.expected_subgroup_order(cover, k)

    def test_generators_are_liftable(self):
        for cover, k in ((cyclic(3), 3), (cv.make_cover("klein"), 2)):
            for g in gr.group_generators(cover, k):
                assert cv.is_liftable_mod(cover, g)


class TestVertexOrbits:
    def test_cyclic_orbit_sizes(self):
        for k in (2, 3):
            data = gr.vertex_orbit_data(cyclic(k), k)
            assert sorted(data.orbit_sizes()) \
                == sorted([k - 1, (k - 1) * k ** 3, k * (k ** 2 - 1)])

    def test_klein_orbit_sizes(self):
        data = gr.vertex_orbit_data(cv.make_cover("klein"), 2)
        assert sorted(data.orbit_sizes()) == [3, 3, 9]

    def test_classifier_agrees_with_bfs_orbits(self):
        k = 3
        cover = cyclic(k)
        data = gr.vertex_orbit_data(cover, k)
        index = {v: i for i, v in enumerate(data.items)}
        rep_orbit = {lbl: data.orbit_of[index[rep]]
                     for lbl, rep in gr.CANONICAL_REPS.items()}
        for i, v in enumerate(data.items):
            label, a = gr.classify_vertex(cover, v, k)
            assert data.orbit_of[i] == rep_orbit[label]
            assert sp.mat_vec(a, gr.CANONICAL_REPS[label], k) == v
            assert cv.is_liftable_mod(cover, a)

    def test_classifier_rejects_bad_input(self):
        with pytest.raises(ValueError):
            gr.classify_vertex(cv.make_cover("klein"), (1, 0, 0, 0))
        with pytest.raises(ValueError):
            gr.classify_vertex(cyclic(3), (0, 0, 0, 0), 3)

    def test_vertex_witness_moves_root_to_target(self):
        for cover, k in ((cyclic(3), 3), (cv.make_cover("klein"), 2)):
            data = gr.vertex_orbit_data(cover, k)
            for i in range(0, len(data.items), 7):
                w = gr.vertex_witness(data, k, i)
                root = data.items[data.roots[data.orbit_of[i]]]
                assert sp.mat_vec(w, root, k) == data.items[i]


class TestEdgeOrbits:
    def test_edge_witness_moves_root_edge(self):
        k = 2
        cover = cyclic(k)
        ldata, cdata, _ = gr.edge_orbit_data(cover, k)
        for data, act in ((ldata, gr._loop_act), (cdata, gr._cross_act)):
            for i in range(len(data.items)):
                w = gr.edge_witness(data, k, i)
                root = data.items[data.roots[data.orbit_of[i]]]
                assert act(w, root, k) == data.items[i]

    def test_edge_set_accounting(self):
        for cover, k in ((cyclic(2), 2), (cyclic(3), 3)):
            vdata = gr.vertex_orbit_data(cover, k)
            loops, cross = gr.quotient_edge_sets(cover, k, vdata)
            _, edges = gr.all_edges(k)
            factor = 1 if k == 2 else 2
            assert len(edges) == len(loops) + factor * len(cross)


class TestQuotientGraph:
    def test_cyclic_shape(self):
        for k in (2, 3):
            qg = gr.quotient_graph(cyclic(k), k)
            assert len(qg.vertices) == 3
            labels = orbit_label_map(cyclic(k), k, qg)
            loops = {labels[i]: c for i, c in enumerate(qg.loop_counts())}
            assert loops == {"e1": 0, "e2": 2 * (k - 1), "e3": 1}
            ends = [frozenset(labels[i] for i in pair) for pair, _ in qg.edges]
            assert len(ends) == 2
            assert set(ends) == {frozenset({"e1", "e2"}),
                                 frozenset({"e2", "e3"})}
            assert len(qg.tree) == 2

    def test_klein_shape(self):
        qg = gr.quotient_graph(cv.make_cover("klein"), 2)
        assert sorted(size for _, size in qg.vertices) == [3, 3, 9]
        by_size = {}
        for i, (_, size) in enumerate(qg.vertices):
            by_size.setdefault(size, []).append(qg.loop_counts()[i])
        assert sorted(by_size[3]) == [1, 1]
        assert by_size[9] == [2]
        assert len(qg.edges) == 2

    def test_json_roundtrip_is_deterministic(self):
        qg = gr.quotient_graph(cyclic(2), 2)
        d1 = json.dumps(gr.to_json_dict(qg), sort_keys=True)
        d2 = json.dumps(gr.to_json_dict(gr.quotient_graph(cyclic(2), 2)),
                        sort_keys=True)
        assert d1 == d2

    def test_dot_output_mentions_every_vertex(self):
        qg = gr.quotient_graph(cv.make_cover("klein"), 2)
        dot = gr.to_dot(qg)
        assert dot.startswith("graph")
        for rep, _ in qg.vertices:
            assert ",".join(map(str, rep)) in dot


class TestSweepOracle:
    def test_sweep_agrees_with_bfs_partitions(self):
        for cover in (cyclic(2), cv.make_cover("klein")):
            k = 2
            vpart, lpart, cpart = gr.orbits_by_sweep(cover, k)
            vdata = gr.vertex_orbit_data(cover, k)
            ldata, cdata, _ = gr.edge_orbit_data(cover, k, vdata=vdata)
            assert vpart == gr.partition_of(vdata)
            assert lpart == gr.partition_of(ldata)
            assert cpart == gr.partition_of(cdata)
