import numpy as np
import pytest

from graphon_complexity import SBM, ErdosRenyi, GeometricGraph, HolderCube, InvalidArgument
from graphon_complexity import io as gio
from graphon_complexity.model import lower_bound_sbm, sample_graph, sample_latents, sparsify


@pytest.fixture
def graph():
    spec = SBM([0.4, 0.6], [[0.7, 0.2], [0.2, 0.5]])
    return sparsify(sample_graph(spec, sample_latents(spec, 37, 3), 3), 0.75, 3)


@pytest.mark.parametrize("name", ["g.adj", "g.txt"])
def test_graph_roundtrip(tmp_path, graph, name):
    path = tmp_path / name
    gio.write_graph(graph, path)
    assert gio.read_graph(path) == graph


def test_binary_header_layout(tmp_path, graph):
    path = tmp_path / "g.adj"
    gio.write_binary(graph, path)
    data = path.read_bytes()
    assert data[:4] == b"GADJ"
    assert int.from_bytes(data[4:8], "little") == 37
    assert np.frombuffer(data[8:16], "<f8")[0] == 0.75
    assert len(data) == 16 + (37 * 37 + 7) // 8


def test_edgelist_header(tmp_path, graph):
    path = tmp_path / "g.txt"
    gio.write_edgelist(graph, path)
    first = path.read_text().splitlines()[0]
    assert first == "n=37 rho=0.75"


def test_bad_files(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("hello\n")
    with pytest.raises(InvalidArgument):
        gio.read_graph(p)
    p.write_text("n=3 rho=1\n0 5\n")
    with pytest.raises(InvalidArgument):
        gio.read_graph(p)
    b = tmp_path / "bad.adj"
    b.write_bytes(b"GADJ" + (3).to_bytes(4, "little") + np.float64(1).tobytes())
    with pytest.raises(InvalidArgument):
        gio.read_graph(b)


@pytest.mark.parametrize("spec", [
    SBM([0.25, 0.75], [[0.9, 0.1], [0.1, 0.3]]), ErdosRenyi(0.3), GeometricGraph(2, 0.15),
    HolderCube(3, "product_cosine", 0.5), lower_bound_sbm(100, 0.01)])
def test_spec_roundtrip(spec):
    assert gio.parse_spec(gio.dump_spec(spec)) == spec


def test_spec_errors():
    with pytest.raises(InvalidArgument):
        gio.parse_spec("[graphon]\nfamily = mystery\n")
    with pytest.raises(InvalidArgument):
        gio.parse_spec("[graphon]\nfamily = erdos_renyi\n")
    with pytest.raises(InvalidArgument):
        gio.parse_spec("[other]\n")


def test_csv_roundtrip(tmp_path):
    p = tmp_path / "t.csv"
    gio.write_csv(p, ["a", "b"], [(1, 0.1), (2, "x")], comments=["hello"])
    comments, cols, rows = gio.read_csv(p)
    assert comments == ["hello"] and cols == ["a", "b"] and rows == [["1", "0.1"], ["2", "x"]]
