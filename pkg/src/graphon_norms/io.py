"""JSON file formats for kernels, graphs, motifs and reports.

Floats are written with Python's shortest round-trip ``repr``, so every double
survives a save/load cycle bit for bit.
"""

from __future__ import annotations

import datetime as _dt
import json
from pathlib import Path
from typing import Any

import jsonschema

from . import __version__
from .errors import SchemaError
from .homomorphism import ErrataWitness, Motif
from .kernel import AdjacencyGraph, StepKernel, StepGraphon, graphon_from_adjacency, make_step_kernel
from .norms import NormReport
from .verify import FamilyReport, InstanceResult

SCHEMA_VERSION = 1

_NUMBER = {"type": "number"}

KERNEL_SCHEMA = {
    "type": "object",
    "required": ["weights", "values"],
    "properties": {
        "weights": {"type": "array", "items": _NUMBER, "minItems": 1},
        "values": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": _NUMBER},
        },
        "bound": {"type": "number", "exclusiveMinimum": 0},
    },
}

ADJACENCY_SCHEMA = {
    "type": "object",
    "required": ["n", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}

MOTIF_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {"type": "array", "minItems": 1, "items": {"type": ["integer", "string"]}},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": ["integer", "string"]},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def _validate(obj: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{what}: field {where!r}: {e.message}") from None


def _read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _write_json(obj: Any, path) -> None:
    Path(path).write_text(dumps(obj))


# -- kernels ------------------------------------------------------------------


def kernel_to_dict(k: StepKernel) -> dict:
    d = {"weights": k.weights.tolist(), "values": k.values.tolist()}
    if not isinstance(k, StepGraphon):
        d["bound"] = k.bound
    return d


def kernel_from_dict(d: Any) -> StepKernel:
    """Build a kernel; [0, 1]-valued input without a larger bound becomes a graphon.

    Adjacency objects (``n`` + ``edges``) are accepted too and turned into
    their induced step graphon.
    """
    if isinstance(d, dict) and "edges" in d and "values" not in d:
        return graphon_from_adjacency(adjacency_from_dict(d))
    _validate(d, KERNEL_SCHEMA, "kernel")
    k = make_step_kernel(d["values"], d["weights"], d.get("bound"))
    if k.is_graphon_valued() and d.get("bound", 1.0) == 1.0:
        return StepGraphon(k.weights, k.values)
    return k


def load_kernel(path) -> StepKernel:
    return kernel_from_dict(_read_json(path))


def save_kernel(k: StepKernel, path) -> None:
    _write_json(kernel_to_dict(k), path)


# -- graphs and motifs ----------------------------------------------------------


def adjacency_to_dict(g: AdjacencyGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def adjacency_from_dict(d: Any) -> AdjacencyGraph:
    _validate(d, ADJACENCY_SCHEMA, "adjacency")
    return AdjacencyGraph.from_edges(d["n"], d["edges"])


def load_adjacency(path) -> AdjacencyGraph:
    return adjacency_from_dict(_read_json(path))


def save_adjacency(g: AdjacencyGraph, path) -> None:
    _write_json(adjacency_to_dict(g), path)


def motif_to_dict(m: Motif) -> dict:
    return {"vertices": list(range(m.vertex_count)), "edges": [list(e) for e in m.edges]}


def motif_from_dict(d: Any) -> Motif:
    """Vertices may carry any integer or string labels; edges refer to those labels."""
    _validate(d, MOTIF_SCHEMA, "motif")
    labels = d["vertices"]
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != len(labels):
        raise SchemaError("motif: field 'vertices': duplicate vertex label")
    edges = []
    for a, b in d["edges"]:
        if a not in index or b not in index:
            raise SchemaError(f"motif: field 'edges': unknown vertex in edge [{a!r}, {b!r}]")
        edges.append((index[a], index[b]))
    return Motif(len(labels), tuple(edges))


def load_motif(path) -> Motif:
    return motif_from_dict(_read_json(path))


def save_motif(m: Motif, path) -> None:
    _write_json(motif_to_dict(m), path)


# -- reports --------------------------------------------------------------------


def envelope(kind: str, payload: dict, timing: dict | None = None) -> dict:
    """Wrap a payload; the header holds everything that legitimately varies between runs."""
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "header": {
            "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "tool_version": __version__,
            "timing_seconds": timing or {},
        },
        "payload": payload,
    }


def norm_report_payload(r: NormReport) -> dict:
    return r.to_dict()


def instance_payload(inst: InstanceResult, with_kernel: bool = False) -> dict:
    d = {
        "index": inst.index,
        "seed": inst.seed,
        "digest": inst.norms.digest,
        "n_blocks": inst.norms.n_blocks,
        "status": inst.status,
        "norms": {
            "cut": inst.norms.cut_norm,
            "inf1": inst.norms.op_inf1,
            "op22": inst.norms.op_22,
            "hs": inst.norms.hs,
        },
        "reports": [r.to_dict() for r in inst.reports],
    }
    if with_kernel:
        d["kernel"] = kernel_to_dict(inst.kernel)
    return d


def family_report_payload(fr: FamilyReport) -> dict:
    """Per-instance results, aggregates, and verbatim kernels of failing and worst-ratio instances."""
    summary = fr.summary()
    keep = {inst.index for inst in fr.failures}
    for entry in summary["worst_ratio"].values():
        if entry is not None:
            keep.add(entry["instance"])
    return {
        "generator": fr.generator,
        "summary": summary,
        "instances": [instance_payload(inst, inst.index in keep) for inst in fr.instances],
        "failing_instances": [inst.index for inst in fr.failures],
    }


def errata_payload(w: ErrataWitness, digest: str) -> dict:
    return {"digest": digest, "t_c2": w.t_c2, "hs_squared": w.hs_squared, "gap": w.gap}


def write_report(path, kind: str, payload: dict, timing: dict | None = None) -> dict:
    doc = envelope(kind, payload, timing)
    _write_json(doc, path)
    return doc


def load_report(path) -> dict:
    doc = _read_json(path)
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported report schema_version")
    return doc
