"""Reading TU-format graph datasets and reading/writing Gram matrices."""
from __future__ import annotations

import csv
import json
import struct
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import IndexOutOfRange, IoFailure, MalformedLine, MissingFile
from .graph import LabeledGraph, validate_graph
from .gram import GramMatrix

GRAM_MAGIC = b"GRAM1"
REQUIRED = ("A", "graph_indicator", "graph_labels", "node_labels")


@dataclass
class Dataset:
    graphs: list
    class_labels: list
    label_dictionaries: dict = field(default_factory=dict)  # "vertex"/"edge": {raw token: id}
    source_path: str = ""
    name: str = ""


def _find_prefix(root: Path) -> str:
    hits = sorted(root.glob("*_A.txt"))
    if not hits:
        raise MissingFile(f"no *_A.txt file in {root}")
    if len(hits) > 1:
        raise MissingFile(f"several datasets in {root}: {[h.name for h in hits]}")
    return hits[0].name[: -len("_A.txt")]


def _read_lines(path: Path) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise MissingFile(f"required file {path} is missing") from None
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _tokens(path: Path) -> list:
    out = []
    for no, line in enumerate(_read_lines(path), 1):
        tok = line.strip()
        if not tok or "," in tok:
            raise MalformedLine(path, no, f"expected a single value, got {line!r}")
        out.append(tok)
    return out


def _ints(path: Path) -> list:
    out = []
    for no, tok in enumerate(_tokens(path), 1):
        try:
            out.append(int(tok))
        except ValueError:
            raise MalformedLine(path, no, f"expected an integer, got {tok!r}") from None
    return out


def _token_order(tok: str):
    try:
        return (0, float(tok), tok)
    except ValueError:
        return (1, 0.0, tok)


def _intern(tokens) -> dict:
    return {tok: i for i, tok in enumerate(sorted(set(tokens), key=_token_order))}


def parse_dataset(directory) -> Dataset:
    """Parse ``DS_A.txt``, ``DS_graph_indicator.txt``, ``DS_graph_labels.txt``,
    ``DS_node_labels.txt`` and the optional ``DS_edge_labels.txt``.

    Node ids are 1-indexed and global.  Raw label tokens are interned to
    integer ids in numeric order, so integer labels keep their values when
    they already start at 0.
    """
    root = Path(directory)
    if not root.is_dir():
        raise MissingFile(f"dataset directory {root} does not exist")
    prefix = _find_prefix(root)
    path = {kind: root / f"{prefix}_{kind}.txt" for kind in REQUIRED + ("edge_labels",)}

    indicator = _ints(path["graph_indicator"])
    class_labels = _ints(path["graph_labels"])
    node_tokens = _tokens(path["node_labels"])
    n_nodes, n_graphs = len(indicator), len(class_labels)
    if len(node_tokens) != n_nodes:
        raise MalformedLine(path["node_labels"], len(node_tokens), f"{len(node_tokens)} node labels for {n_nodes} nodes")
    for no, gid in enumerate(indicator, 1):
        if not 1 <= gid <= n_graphs:
            raise IndexOutOfRange(f"{path['graph_indicator']}:{no}: graph id {gid} outside 1..{n_graphs}")

    edge_rows = []
    for no, line in enumerate(_read_lines(path["A"]), 1):
        parts = line.split(",")
        try:
            i, j = (int(p) for p in parts)
        except ValueError:
            raise MalformedLine(path["A"], no, f"expected 'i, j', got {line!r}") from None
        for node in (i, j):
            if not 1 <= node <= n_nodes:
                raise IndexOutOfRange(f"{path['A']}:{no}: node {node} outside 1..{n_nodes}")
        if indicator[i - 1] != indicator[j - 1]:
            raise MalformedLine(path["A"], no, "edge joins two different graphs")
        if i == j:
            raise MalformedLine(path["A"], no, "self-loop")
        edge_rows.append((i - 1, j - 1))

    if path["edge_labels"].exists():
        edge_tokens = _tokens(path["edge_labels"])
        if len(edge_tokens) != len(edge_rows):
            raise MalformedLine(path["edge_labels"], len(edge_tokens), f"{len(edge_tokens)} edge labels for {len(edge_rows)} edges")
    else:
        edge_tokens = ["0"] * len(edge_rows)

    vertex_dict, edge_dict = _intern(node_tokens), _intern(edge_tokens)

    members = [[] for _ in range(n_graphs)]
    for t, gid in enumerate(indicator):
        members[gid - 1].append(t)
    local = {}
    for nodes in members:
        for k, t in enumerate(nodes):
            local[t] = k

    graph_edges = [dict() for _ in range(n_graphs)]
    for no, ((i, j), tok) in enumerate(zip(edge_rows, edge_tokens), 1):
        edges = graph_edges[indicator[i] - 1]
        key, lab = (local[i], local[j]), edge_dict[tok]
        if edges.get(key, lab) != lab:
            raise MalformedLine(path["A"], no, "edge listed twice with different labels")
        edges[key] = lab

    graphs = []
    for g, (nodes, edges) in enumerate(zip(members, graph_edges), 1):
        missing = [(j, i) for (i, j) in edges if (j, i) not in edges]
        if missing:
            warnings.warn(f"graph {g}: added {len(missing)} missing mirror edges", stacklevel=2)
            for (j, i) in missing:
                edges[(j, i)] = edges[(i, j)]
        graph = LabeledGraph(
            len(nodes),
            frozenset(edges),
            tuple(vertex_dict[node_tokens[t]] for t in nodes),
            edges,
            name=f"{prefix}_{g}",
        )
        report = validate_graph(graph)
        if not report:
            raise MalformedLine(path["A"], 0, f"graph {g} invalid: {report.violations}")
        graphs.append(graph)
    return Dataset(graphs, class_labels, {"vertex": vertex_dict, "edge": edge_dict}, str(root), prefix)


def write_dataset(ds: Dataset, directory, prefix: str | None = None) -> Path:
    """Write ``ds`` in the same text format; ``parse_dataset`` reads it back unchanged."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    prefix = prefix or ds.name or "DS"
    vraw = {i: tok for tok, i in ds.label_dictionaries.get("vertex", {}).items()}
    eraw = {i: tok for tok, i in ds.label_dictionaries.get("edge", {}).items()}
    a_lines, e_lines, ind_lines, node_lines = [], [], [], []
    offset = 0
    for gid, g in enumerate(ds.graphs, 1):
        for lab in g.vertex_labels:
            ind_lines.append(str(gid))
            node_lines.append(str(vraw.get(lab, lab)))
        for i, j in g.sorted_edges():
            a_lines.append(f"{i + offset + 1}, {j + offset + 1}")
            lab = g.edge_labels[(i, j)]
            e_lines.append(str(eraw.get(lab, lab)))
        offset += g.vertex_count
    files = {
        "A": a_lines,
        "edge_labels": e_lines,
        "graph_indicator": ind_lines,
        "graph_labels": [str(c) for c in ds.class_labels],
        "node_labels": node_lines,
    }
    try:
        for kind, lines in files.items():
            (root / f"{prefix}_{kind}.txt").write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write dataset to {root}: {exc}") from exc
    return root


def dataset_stats(ds: Dataset) -> dict:
    n = len(ds.graphs)
    vertices = [g.vertex_count for g in ds.graphs]
    directed = [g.edge_count for g in ds.graphs]
    return {
        "name": ds.name,
        "graphs": n,
        "classes": {str(c): k for c, k in sorted(Counter(ds.class_labels).items())},
        "vertices_total": sum(vertices),
        "vertices_mean": sum(vertices) / n if n else 0.0,
        "vertices_min": min(vertices, default=0),
        "vertices_max": max(vertices, default=0),
        "edges_directed_mean": sum(directed) / n if n else 0.0,
        "edges_undirected_mean": sum(directed) / 2 / n if n else 0.0,
        "vertex_labels": len(ds.label_dictionaries.get("vertex", {})),
        "edge_labels": len(ds.label_dictionaries.get("edge", {})),
    }


def write_gram(m: GramMatrix, path, format: str = "csv") -> None:
    path = Path(path)
    try:
        if format == "csv":
            with open(path, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(m.graph_ids)
                for row in m.values:
                    w.writerow(["%.17g" % v for v in row])
        elif format == "binary":
            n = m.values.shape[0]
            parts = [GRAM_MAGIC, struct.pack("<Q", n)]
            for gid in m.graph_ids:
                raw = str(gid).encode("utf-8")
                parts += [struct.pack("<Q", len(raw)), raw]
            parts.append(np.ascontiguousarray(m.values, dtype="<f8").tobytes())
            trailer = {"kernel_descriptor": m.kernel_descriptor, "scaling": m.scaling}
            parts.append(json.dumps(trailer, sort_keys=True).encode("utf-8"))
            path.write_bytes(b"".join(parts))
        else:
            raise ValueError(f"unknown Gram format {format!r}")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_gram(path, format: str | None = None) -> GramMatrix:
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise MissingFile(f"{path} does not exist") from None
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if format is None:
        format = "binary" if data.startswith(GRAM_MAGIC) else "csv"
    if format == "csv":
        rows = list(csv.reader(data.decode("utf-8").splitlines()))
        ids, body = rows[0], rows[1:]
        values = np.array([[float(x) for x in r] for r in body], dtype=float).reshape(len(body), len(ids))
        return GramMatrix(values, ids)
    if not data.startswith(GRAM_MAGIC):
        raise IoFailure(f"{path} is not a binary Gram file")
    pos = len(GRAM_MAGIC)
    (n,) = struct.unpack_from("<Q", data, pos)
    pos += 8
    ids = []
    for _ in range(n):
        (length,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        ids.append(data[pos : pos + length].decode("utf-8"))
        pos += length
    values = np.frombuffer(data, dtype="<f8", count=n * n, offset=pos).reshape(n, n).astype(float)
    trailer = json.loads(data[pos + 8 * n * n :].decode("utf-8"))
    return GramMatrix(values, ids, trailer.get("kernel_descriptor") or {}, trailer.get("scaling"))
