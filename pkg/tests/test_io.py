import json

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import step_kernels
from graphon_norms import (
    AdjacencyGraph,
    Motif,
    SchemaError,
    StepGraphon,
    StepKernel,
    builtin_graphon,
    kernel_difference,
    sample_graph,
)
from graphon_norms import io


def test_kernel_round_trip(tmp_path):
    k = kernel_difference(builtin_graphon("product", resolution=3), builtin_graphon("min", resolution=2))
    path = tmp_path / "d.kernel"
    io.save_kernel(k, path)
    back = io.load_kernel(path)
    assert type(back) is StepKernel
    assert back.digest() == k.digest() and back.bound == k.bound


@settings(max_examples=40, deadline=None)
@given(step_kernels(n_max=8))
def test_kernel_dict_round_trip_is_exact(k):
    back = io.kernel_from_dict(json.loads(io.dumps(io.kernel_to_dict(k))))
    assert back.weights.tobytes() == k.weights.tobytes()
    assert back.values.tobytes() == k.values.tobytes()


def test_graphon_valued_loads_as_graphon():
    g = io.kernel_from_dict({"weights": [0.5, 0.5], "values": [[0, 1], [1, 0]]})
    assert isinstance(g, StepGraphon)
    k = io.kernel_from_dict({"weights": [1.0], "values": [[-0.5]]})
    assert not isinstance(k, StepGraphon)


def test_adjacency_file_loads_as_kernel(tmp_path):
    g = sample_graph(builtin_graphon("constant", [0.5]), 6, seed=1)
    path = tmp_path / "g.json"
    io.save_adjacency(g, path)
    assert io.load_adjacency(path).adjacency.tobytes() == g.adjacency.tobytes()
    k = io.load_kernel(path)
    assert isinstance(k, StepGraphon)
    np.testing.assert_array_equal(k.values, g.adjacency)


def test_motif_labels_and_canonical_order(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"vertices": ["a", "b", "c"], "edges": [["c", "a"], ["b", "a"]]}))
    m = io.load_motif(path)
    assert m == Motif(3, [(0, 1), (0, 2)])
    io.save_motif(m, path)
    assert io.load_motif(path) == m


@pytest.mark.parametrize(
    "obj, field",
    [
        ({"values": [[1]]}, "weights"),
        ({"weights": [1], "values": [1]}, "values/0"),
        ({"weights": ["x"], "values": [[1]]}, "weights/0"),
        ({"weights": [1], "values": [[1]], "bound": -1}, "bound"),
    ],
)
def test_kernel_schema_errors_name_the_field(obj, field):
    with pytest.raises(SchemaError) as info:
        io.kernel_from_dict(obj)
    assert field in str(info.value)
    if field == "weights":
        assert "required" in str(info.value)


def test_motif_schema_errors():
    with pytest.raises(SchemaError, match="vertices"):
        io.motif_from_dict({"vertices": [], "edges": []})
    with pytest.raises(SchemaError, match="unknown vertex"):
        io.motif_from_dict({"vertices": [0, 1], "edges": [[0, 5]]})
    with pytest.raises(SchemaError, match="duplicate"):
        io.motif_from_dict({"vertices": [0, 0], "edges": []})


def test_adjacency_schema_errors():
    with pytest.raises(SchemaError, match="edges"):
        io.adjacency_from_dict({"n": 2, "edges": [[0, 1, 2]]})


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        io.load_kernel(tmp_path / "nope.kernel")
    bad = tmp_path / "bad.kernel"
    bad.write_text("{not json")
    with pytest.raises(SchemaError, match="invalid JSON"):
        io.load_kernel(bad)


def test_report_envelope(tmp_path):
    path = tmp_path / "r.json"
    doc = io.write_report(path, "errata", {"gap": 0.25}, {"total": 1.0})
    back = io.load_report(path)
    assert back == doc
    assert back["schema_version"] == io.SCHEMA_VERSION
    assert back["payload"] == {"gap": 0.25}
    path.write_text(json.dumps({"schema_version": 99}))
    with pytest.raises(SchemaError):
        io.load_report(path)


def test_adjacency_edges_property():
    g = AdjacencyGraph.from_edges(4, [(2, 0), (3, 1)])
    assert io.adjacency_to_dict(g) == {"n": 4, "edges": [[0, 2], [1, 3]]}
