import shutil
from pathlib import Path

import numpy as np
import pytest

from graphkern.exceptions import IndexOutOfRange, IoFailure, MalformedLine, MissingFile
from graphkern.gram import GramMatrix, compute_gram
from graphkern.io import dataset_stats, parse_dataset, read_gram, write_dataset, write_gram


def make_dataset(root: Path, files: dict, prefix="DS") -> Path:
    root.mkdir(parents=True, exist_ok=True)
    for kind, text in files.items():
        (root / f"{prefix}_{kind}.txt").write_text(text)
    return root


BASE = {
    "A": "1, 2\n2, 1\n",
    "graph_indicator": "1\n1\n2\n",
    "graph_labels": "1\n-1\n",
    "node_labels": "0\n1\n0\n",
}


class TestParse:
    def test_tiny(self, tiny_dir):
        ds = parse_dataset(tiny_dir)
        assert [g.vertex_count for g in ds.graphs] == [2, 1]
        assert ds.class_labels == [1, -1]
        assert ds.graphs[0].edge_count == 2
        assert ds.graphs[0].vertex_labels == (0, 1)
        assert [g.name for g in ds.graphs] == ["TINY_1", "TINY_2"]

    def test_mutag(self, mutag_dir):
        ds = parse_dataset(mutag_dir)
        stats = dataset_stats(ds)
        assert stats["graphs"] == 188
        assert stats["classes"] == {"-1": 63, "1": 125}
        assert stats["vertex_labels"] == 7 and stats["edge_labels"] == 4

    def test_missing_edge_labels_default(self, tmp_path):
        ds = parse_dataset(make_dataset(tmp_path, BASE))
        assert set(ds.graphs[0].edge_labels.values()) == {0}

    def test_node_zero(self, tmp_path):
        with pytest.raises(IndexOutOfRange):
            parse_dataset(make_dataset(tmp_path, {**BASE, "A": "0, 1\n1, 0\n"}))

    def test_node_past_end(self, tmp_path):
        with pytest.raises(IndexOutOfRange):
            parse_dataset(make_dataset(tmp_path, {**BASE, "A": "1, 4\n4, 1\n"}))

    def test_graph_id_out_of_range(self, tmp_path):
        with pytest.raises(IndexOutOfRange):
            parse_dataset(make_dataset(tmp_path, {**BASE, "graph_indicator": "1\n1\n3\n"}))

    @pytest.mark.parametrize(
        "kind,text",
        [
            ("A", "1 2\n"),
            ("A", "1, 3\n3, 1\n"),
            ("A", "1, 1\n"),
            ("graph_indicator", "1\nx\n2\n"),
            ("node_labels", "0\n1\n"),
            ("edge_labels", "0\n"),
        ],
    )
    def test_malformed(self, tmp_path, kind, text):
        with pytest.raises(MalformedLine) as info:
            parse_dataset(make_dataset(tmp_path, {**BASE, kind: text}))
        assert f"DS_{kind}.txt" in str(info.value)

    def test_malformed_reports_line(self, tmp_path):
        with pytest.raises(MalformedLine, match=":2"):
            parse_dataset(make_dataset(tmp_path, {**BASE, "A": "1, 2\n2 1\n"}))

    def test_missing_file(self, tmp_path):
        files = dict(BASE)
        del files["graph_labels"]
        with pytest.raises(MissingFile):
            parse_dataset(make_dataset(tmp_path, files))

    def test_missing_directory(self, tmp_path):
        with pytest.raises(MissingFile):
            parse_dataset(tmp_path / "nope")

    def test_one_directional_edge_is_mirrored(self, tmp_path):
        with pytest.warns(UserWarning, match="mirror"):
            ds = parse_dataset(make_dataset(tmp_path, {**BASE, "A": "1, 2\n"}))
        assert ds.graphs[0].edge_count == 2

    def test_string_labels_interned(self, tmp_path):
        ds = parse_dataset(make_dataset(tmp_path, {**BASE, "node_labels": "C\nO\nC\n"}))
        assert ds.label_dictionaries["vertex"] == {"C": 0, "O": 1}


class TestDatasetRoundTrip:
    def test_tiny(self, tiny_dir, tmp_path):
        ds = parse_dataset(tiny_dir)
        again = parse_dataset(write_dataset(ds, tmp_path / "copy"))
        assert again.graphs == ds.graphs and again.class_labels == ds.class_labels

    def test_mutag(self, mutag_dir, tmp_path):
        ds = parse_dataset(mutag_dir)
        again = parse_dataset(write_dataset(ds, tmp_path / "copy"))
        assert [g.vertex_labels for g in again.graphs] == [g.vertex_labels for g in ds.graphs]
        assert [dict(g.edge_labels) for g in again.graphs] == [dict(g.edge_labels) for g in ds.graphs]
        assert again.label_dictionaries == ds.label_dictionaries


class TestGramFiles:
    def test_single_graph_csv(self, tmp_path):
        m = GramMatrix(np.array([[2.0]]), ["g1"])
        write_gram(m, tmp_path / "k.csv")
        lines = (tmp_path / "k.csv").read_text().splitlines()
        assert lines == ["g1", "2"]

    def test_csv_round_trip(self, tmp_path, mutag_dir):
        ds = parse_dataset(mutag_dir)
        m = compute_gram(ds.graphs[:20], {"kernel": "grw", "gamma_frac": 0.5})
        write_gram(m, tmp_path / "k.csv")
        back = read_gram(tmp_path / "k.csv")
        assert back.values.tobytes() == m.values.tobytes()
        assert (back.values == back.values.T).all()
        assert back.graph_ids == m.graph_ids

    def test_binary_round_trip(self, tmp_path, mutag_dir):
        ds = parse_dataset(mutag_dir)
        m = compute_gram(ds.graphs[:20], {"kernel": "sp"})
        write_gram(m, tmp_path / "k.bin", "binary")
        back = read_gram(tmp_path / "k.bin")
        assert back.values.tobytes() == m.values.tobytes()
        assert back.graph_ids == m.graph_ids
        assert back.kernel_descriptor == m.kernel_descriptor
        write_gram(back, tmp_path / "k2.bin", "binary")
        assert (tmp_path / "k2.bin").read_bytes() == (tmp_path / "k.bin").read_bytes()

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoFailure):
            write_gram(GramMatrix(np.eye(1), ["a"]), tmp_path / "missing" / "k.csv")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            write_gram(GramMatrix(np.eye(1), ["a"]), tmp_path / "k", "parquet")

    def test_read_missing(self, tmp_path):
        with pytest.raises(MissingFile):
            read_gram(tmp_path / "none.csv")
