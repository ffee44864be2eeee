import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphkern.exceptions import DisconnectedGraph
from graphkern.graph import LabeledGraph, adjacency_matrix, direct_product, validate_graph
from graphkern.transforms import (
    floyd_transform,
    morgan_index,
    morgan_relabel,
    non_tottering_transform,
    wl_refine,
    wl_refine_many,
)

from graphgen import graphs, permuted
from oracles import morgan_oracle, product_walk_counts

G = LabeledGraph.from_bonds


class TestValidate:
    def test_single_vertex_passes(self):
        assert validate_graph(G(["C"])).passed

    def test_asymmetric_edge(self):
        g = LabeledGraph(2, {(0, 1)}, ("C", "C"), {(0, 1): 0})
        report = validate_graph(g)
        assert not report
        assert any(v.startswith("asymmetric edge") for v in report.violations)

    def test_self_loop(self):
        g = LabeledGraph(1, {(0, 0)}, ("C",), {(0, 0): 0})
        assert any(v.startswith("self-loop") for v in validate_graph(g).violations)

    def test_dangling_and_missing_label(self):
        g = LabeledGraph(2, {(0, 1), (1, 0), (0, 5)}, ("C", "C"), {(0, 1): 0})
        kinds = {v.split(":")[0] for v in validate_graph(g).violations}
        assert {"dangling index", "missing edge label"} <= kinds

    def test_asymmetric_edge_label(self):
        g = LabeledGraph(2, {(0, 1), (1, 0)}, ("C", "C"), {(0, 1): 1, (1, 0): 2})
        assert any(v.startswith("asymmetric edge label") for v in validate_graph(g).violations)


class TestAdjacency:
    def test_single_edge(self):
        assert adjacency_matrix(G(["C", "C"], [(0, 1)])).tolist() == [[0, 1], [1, 0]]

    def test_path(self, path3):
        assert adjacency_matrix(path3).tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]

    def test_edgeless(self):
        assert not adjacency_matrix(G(["C", "C"])).any()

    @given(graphs())
    def test_symmetric_zero_diagonal(self, g):
        a = adjacency_matrix(g)
        assert (a == a.T).all() and not np.diag(a).any()


class TestDirectProduct:
    def test_same_label_singletons(self):
        p = direct_product(G(["C"]), G(["C"]))
        assert p.size == 1 and not p.adjacency.any()

    def test_label_mismatch_is_empty(self):
        assert direct_product(G(["C"]), G(["O"])).size == 0

    def test_identical_single_bonds(self, cs_edge):
        p = direct_product(cs_edge, cs_edge)
        assert p.size == 4
        assert p.adjacency.sum() == 4
        assert (p.adjacency == p.adjacency.T).all() and not np.diag(p.adjacency).any()

    def test_edge_labels_must_match(self):
        p = direct_product(G(["C", "C"], [(0, 1, 1)]), G(["C", "C"], [(0, 1, 2)]))
        assert p.size == 4 and p.adjacency.sum() == 0

    @given(graphs())
    def test_self_product_covers_diagonal(self, g):
        p = direct_product(g, g)
        assert p.size >= g.vertex_count
        assert all(g.vertex_labels[i] == g.vertex_labels[j] for i, j in p.vertices)

    @given(graphs(max_n=4), graphs(max_n=4), st.integers(0, 4))
    def test_walk_count_law(self, g1, g2, k):
        p = direct_product(g1, g2)
        if p.size == 0:
            return
        index = {v: n for n, v in enumerate(p.vertices)}
        power = np.linalg.matrix_power(p.adjacency.astype(np.int64), k)
        expected = np.zeros_like(power)
        for (a, b), c in product_walk_counts(g1, g2, k).items():
            expected[index[a], index[b]] = c
        assert (power == expected).all()


class TestFloyd:
    def test_path(self, path3):
        assert floyd_transform(path3).distance.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]

    def test_triangle(self, triangle):
        d = floyd_transform(triangle).distance
        assert (d[~np.eye(3, dtype=bool)] == 1).all()

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraph):
            floyd_transform(G(["C", "C"]))

    @given(graphs(connected=True))
    def test_metric(self, g):
        d = floyd_transform(g).distance
        n = g.vertex_count
        assert (d == d.T).all() and not np.diag(d).any()
        assert (d[~np.eye(n, dtype=bool)] >= 1).all()
        assert (d[:, :, None] <= d[:, None, :] + d.T[None, :, :]).all()


class TestMorgan:
    def test_zero_iterations(self, path3):
        assert morgan_index(path3, 0).tolist() == [1, 1, 1]

    def test_degrees(self, path3):
        assert morgan_index(path3, 1).tolist() == [1, 2, 1]

    def test_two_iterations(self, path3):
        assert morgan_index(path3, 2).tolist() == [2, 2, 2]

    @given(graphs(), st.integers(0, 4))
    def test_matches_matrix_power(self, g, i):
        assert morgan_index(g, i).tolist() == morgan_oracle(g, i).tolist()

    def test_relabel_pairs(self, path3):
        assert morgan_relabel(path3, 1).vertex_labels == (("C", 1), ("C", 2), ("C", 1))


def _projection(g):
    n = g.vertex_count
    arcs = g.sorted_edges()
    return lambda x: x if x < n else arcs[x - n][1]


class TestNonTottering:
    def test_single_vertex(self):
        g = G(["C"])
        t = non_tottering_transform(g)
        assert t.vertex_count == 1 and not t.edges

    def test_single_edge(self):
        g = G(["a", "b"], [(0, 1)])
        t = non_tottering_transform(g)
        assert t.vertex_count == 4
        # arcs in sorted order: (0,1) -> vertex 2, (1,0) -> vertex 3
        assert set(t.edges) == {(0, 2), (1, 3)}
        assert t.vertex_labels == ("a", "b", "b", "a")

    def test_path_size(self, path3):
        t = non_tottering_transform(path3)
        assert t.vertex_count == 3 + 4
        # arcs: (0,1)=3, (1,0)=4, (1,2)=5, (2,1)=6; only (0,1)->(1,2) and (2,1)->(1,0) avoid a return
        arc_links = {(a, b) for a, b in t.edges if a >= 3}
        assert arc_links == {(3, 5), (6, 4)}

    @given(graphs(max_n=4), st.integers(1, 4))
    def test_walks_biject_with_non_tottering_walks(self, g, k):
        t = non_tottering_transform(g)
        proj = _projection(g)
        from_originals = []
        nb = {v: sorted(w for (u, w) in t.edges if u == v) for v in range(t.vertex_count)}

        def walks(path):
            if len(path) == k + 1:
                yield path
                return
            for w in nb[path[-1]]:
                yield from walks(path + [w])

        for v in range(g.vertex_count):
            for w in walks([v]):
                from_originals.append(tuple(proj(x) for x in w))
        gnb = {v: sorted(x for (u, x) in g.edges if u == v) for v in range(g.vertex_count)}

        def nt_walks(path):
            if len(path) == k + 1:
                yield tuple(path)
                return
            for w in gnb[path[-1]]:
                if len(path) >= 2 and w == path[-2]:
                    continue
                yield from nt_walks(path + [w])

        expected = [w for v in range(g.vertex_count) for w in nt_walks([v])]
        assert sorted(from_originals) == sorted(expected)


class TestWlRefine:
    def test_path_coc_two_colors(self):
        r = wl_refine(G(["C", "O", "C"], [(0, 1), (1, 2)]), 1)
        level1 = r.labels[1].tolist()
        assert len(set(level1)) == 2 and level1[0] == level1[2]

    def test_h0_is_input_labels(self):
        g = G(["C", "O", "C"], [(0, 1), (1, 2)])
        r = wl_refine(g, 0)
        assert len(r.labels) == 1
        # interned ids preserve label equality
        assert r.labels[0][0] == r.labels[0][2] != r.labels[0][1]

    def test_hierarchy_paths(self):
        g = G(["C", "O", "C"], [(0, 1), (1, 2)])
        r = wl_refine(g, 3)
        for v, path in enumerate(r.hierarchy.per_vertex_path):
            assert len(path) == 4
            for a, b in zip(path, path[1:]):
                assert r.hierarchy.parent[b] == a

    def test_colors_unique_across_levels(self):
        g = G(["C", "O", "C", "N"], [(0, 1), (1, 2), (2, 3)])
        r = wl_refine(g, 3)
        per_level = [set(c.tolist()) for c in r.labels]
        for i in range(len(per_level)):
            for j in range(i + 1, len(per_level)):
                assert not per_level[i] & per_level[j]

    @given(graphs(), st.permutations(range(6)), st.integers(0, 3))
    def test_permutation_invariant(self, g, perm, h):
        perm = [p for p in perm if p < g.vertex_count]
        pg = permuted(g, perm)
        r1, r2 = wl_refine_many([g, pg], h)
        for a, b in zip(r1.labels, r2.labels):
            assert sorted(a.tolist()) == sorted(b.tolist())

    def test_uniform_start(self):
        r = wl_refine(G(["C", "O"], [(0, 1)]), 1, uniform_start=True)
        assert r.labels[0].tolist() == [0, 0]
        assert r.hierarchy.parent[0] is None


def test_pickle_round_trip():
    import pickle

    g = LabeledGraph.from_bonds(["C", "O"], [(0, 1, 2)], name="g")
    assert pickle.loads(pickle.dumps(g)) == g
