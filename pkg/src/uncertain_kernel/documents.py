"""JSON documents for graphs, matroids, instances and bundles.

Every top-level document carries ``format`` and ``kind``. Weights and ids
are plain JSON integers; maps keyed by ids are written as lists of objects
so keys stay integers.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable
from typing import Any

from . import __version__
from .errors import KernelError
from .graph import BipartiteGraph, Edge, WeightedMultigraph
from .matching import MatchingBundle, UncertainMatchingInstance
from .matroid import (
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    MinorMatroid,
    TransversalMatroid,
    UniformMatroid,
)
from .matroid_compress import MatroidBundle, UncertainMatroidInstance
from .mst import (
    MstBundle,
    ShortestPathBundle,
    UncertainMstInstance,
    UncertainShortestPathInstance,
)

FORMAT_VERSION = 1
TOOL_NAME = "uncertain-kernel"
KINDS = ("mst", "matroid", "matching", "shortest-path")


class DocumentError(KernelError, ValueError):
    """A document is malformed or inconsistent."""


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def document_hash(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _ints(values: Iterable[Any], what: str) -> list[int]:
    out = []
    for x in values:
        if isinstance(x, bool) or not isinstance(x, int):
            raise DocumentError(f"{what}: expected integers, got {x!r}")
        out.append(x)
    return out


def _need(doc: dict, key: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"missing field {key!r}")
    return doc[key]


# --------------------------------------------------------------------------
# graphs


def graph_to_doc(g: WeightedMultigraph, uncertain: Iterable[int] = ()) -> dict:
    unc = set(uncertain)
    edges = []
    for eid, e in g.edges.items():
        item: dict[str, Any] = {"id": eid, "u": e.u, "v": e.v}
        if e.w is not None:
            item["w"] = e.w
        if eid in unc:
            item["uncertain"] = True
        edges.append(item)
    return {"vertices": sorted(g.vertices), "edges": edges}


def graph_from_doc(doc: dict) -> tuple[WeightedMultigraph, frozenset[int]]:
    """Return the graph and the ids of edges flagged ``uncertain``."""
    vertices = _ints(_need(doc, "vertices"), "vertices")
    edges: dict[int, Edge] = {}
    uncertain = set()
    for item in _need(doc, "edges"):
        eid, u, v = (_ints([_need(item, key)], key)[0] for key in ("id", "u", "v"))
        if eid in edges:
            raise DocumentError(f"duplicate edge id {eid}")
        w = item.get("w")
        if w is not None:
            w = _ints([w], "w")[0]
        edges[eid] = Edge(u, v, w)
        if item.get("uncertain", False):
            uncertain.add(eid)
    try:
        return WeightedMultigraph(frozenset(vertices), edges), frozenset(uncertain)
    except KernelError as exc:
        raise DocumentError(str(exc)) from exc


def bipartite_to_doc(
    g: BipartiteGraph,
    L0: Iterable[int] = (),
    R0: Iterable[int] = (),
    uncertain: Iterable[int] = (),
) -> dict:
    unc = set(uncertain)
    edges = []
    for eid, (u, v) in g.edges.items():
        item: dict[str, Any] = {"id": eid, "u": u, "v": v}
        if eid in unc:
            item["uncertain"] = True
        edges.append(item)
    doc = {
        "vertices": sorted(g.vertices),
        "left": sorted(g.left),
        "right": sorted(g.right),
        "edges": edges,
    }
    if L0 or R0:
        doc["L0"] = sorted(L0)
        doc["R0"] = sorted(R0)
    return doc


def bipartite_from_doc(doc: dict) -> tuple[BipartiteGraph, frozenset[int], frozenset[int], frozenset[int]]:
    """Return the graph, ``L0``, ``R0`` and the ids of uncertain edges."""
    left = frozenset(_ints(_need(doc, "left"), "left"))
    right = frozenset(_ints(_need(doc, "right"), "right"))
    if "vertices" in doc and set(_ints(doc["vertices"], "vertices")) != left | right:
        raise DocumentError("vertices must be exactly left ∪ right")
    edges = {}
    uncertain = set()
    for item in _need(doc, "edges"):
        eid, u, v = (_ints([_need(item, key)], key)[0] for key in ("id", "u", "v"))
        if eid in edges:
            raise DocumentError(f"duplicate edge id {eid}")
        edges[eid] = (u, v)
        if item.get("uncertain", False):
            uncertain.add(eid)
    L0 = frozenset(_ints(doc.get("L0", []), "L0"))
    R0 = frozenset(_ints(doc.get("R0", []), "R0"))
    try:
        return BipartiteGraph(left, right, edges), L0, R0, frozenset(uncertain)
    except KernelError as exc:
        raise DocumentError(str(exc)) from exc


# --------------------------------------------------------------------------
# matroids


def matroid_to_doc(m: Matroid) -> dict:
    if isinstance(m, GraphicMatroid):
        doc = {"kind": "graphic", "graph": graph_to_doc(m.graph)}
        if m.loops:
            doc["loops"] = sorted(m.loops)
        return doc
    if isinstance(m, UniformMatroid):
        return {"kind": "uniform", "rank": m.r, "n": len(m.elements), "ground": sorted(m.elements)}
    if isinstance(m, LinearMatroid):
        return {
            "kind": "linear",
            "p": m.p,
            "matrix": [list(row) for row in m.rows],
            "columns": list(m.columns),
        }
    if isinstance(m, TransversalMatroid):
        return {"kind": "transversal", "graph": bipartite_to_doc(m.graph)}
    if isinstance(m, MinorMatroid):
        return {
            "kind": "minor",
            "base": matroid_to_doc(m.base),
            "deleted": sorted(m.deleted),
            "contracted": sorted(m.contracted),
        }
    raise DocumentError(f"cannot serialize matroid of type {type(m).__name__}")


def matroid_from_doc(doc: dict) -> Matroid:
    kind = _need(doc, "kind")
    try:
        if kind == "graphic":
            g, _ = graph_from_doc(_need(doc, "graph"))
            return GraphicMatroid(g, frozenset(_ints(doc.get("loops", []), "loops")))
        if kind == "uniform":
            n = _ints([_need(doc, "n")], "n")[0]
            ground = _ints(doc.get("ground", range(n)), "ground")
            if len(ground) != n or len(set(ground)) != n:
                raise DocumentError("uniform matroid: ground must list n distinct ids")
            return UniformMatroid(frozenset(ground), _ints([_need(doc, "rank")], "rank")[0])
        if kind == "linear":
            p = _ints([_need(doc, "p")], "p")[0]
            rows = tuple(tuple(_ints(row, "matrix")) for row in _need(doc, "matrix"))
            return LinearMatroid(p, rows, tuple(_ints(_need(doc, "columns"), "columns")))
        if kind == "transversal":
            g, *_ = bipartite_from_doc(_need(doc, "graph"))
            return TransversalMatroid(g)
        if kind == "minor":
            return MinorMatroid(
                matroid_from_doc(_need(doc, "base")),
                frozenset(_ints(doc.get("deleted", []), "deleted")),
                frozenset(_ints(doc.get("contracted", []), "contracted")),
            )
    except DocumentError:
        raise
    except KernelError as exc:
        raise DocumentError(str(exc)) from exc
    raise DocumentError(f"unknown matroid kind {kind!r}")


def _weights_to_doc(w: dict[int, int]) -> list[dict]:
    return [{"id": e, "w": x} for e, x in sorted(w.items())]


def _weights_from_doc(items: Iterable[dict]) -> dict[int, int]:
    out = {}
    for item in items:
        eid, w = _ints([_need(item, "id"), _need(item, "w")], "weights")
        if eid in out:
            raise DocumentError(f"duplicate weight for element {eid}")
        out[eid] = w
    return out


# --------------------------------------------------------------------------
# instances


def instance_to_doc(inst: Any, generator: dict | None = None) -> dict:
    doc: dict[str, Any] = {"format": FORMAT_VERSION}
    if isinstance(inst, UncertainMstInstance):
        doc.update(kind="mst", graph=graph_to_doc(inst.graph, inst.F))
    elif isinstance(inst, UncertainShortestPathInstance):
        doc.update(kind="shortest-path", graph=graph_to_doc(inst.graph, inst.F), s=inst.s, t=inst.t)
    elif isinstance(inst, UncertainMatchingInstance):
        doc.update(kind="matching", graph=bipartite_to_doc(inst.graph, inst.L0, inst.R0, inst.E0))
    elif isinstance(inst, UncertainMatroidInstance):
        doc.update(
            kind="matroid",
            matroid=matroid_to_doc(inst.matroid),
            F=sorted(inst.F),
            weights=_weights_to_doc(dict(inst.weights)),
        )
    else:
        raise DocumentError(f"cannot serialize instance of type {type(inst).__name__}")
    if generator is not None:
        doc["generator"] = generator
    return doc


def _check_format(doc: Any) -> str:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise DocumentError(f"unsupported format {doc.get('format')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}")
    return kind


def instance_from_doc(doc: dict) -> Any:
    kind = _check_format(doc)
    try:
        if kind in ("mst", "shortest-path"):
            g, F = graph_from_doc(_need(doc, "graph"))
            if kind == "mst":
                return UncertainMstInstance(g, F)
            s, t = _ints([_need(doc, "s"), _need(doc, "t")], "terminals")
            return UncertainShortestPathInstance(g, F, s, t)
        if kind == "matching":
            g, L0, R0, E0 = bipartite_from_doc(_need(doc, "graph"))
            return UncertainMatchingInstance(g, L0, R0, E0)
        return UncertainMatroidInstance(
            matroid_from_doc(_need(doc, "matroid")),
            frozenset(_ints(_need(doc, "F"), "F")),
            _weights_from_doc(_need(doc, "weights")),
        )
    except DocumentError:
        raise
    except KernelError as exc:
        raise DocumentError(str(exc)) from exc


# --------------------------------------------------------------------------
# bundles


def bundle_to_doc(bundle: Any, provenance: dict | None = None) -> dict:
    doc: dict[str, Any] = {"format": FORMAT_VERSION, "k": bundle.k}
    if isinstance(bundle, MstBundle):
        doc.update(kind="mst", graph=graph_to_doc(bundle.graph, bundle.F), F=sorted(bundle.F))
    elif isinstance(bundle, ShortestPathBundle):
        doc.update(
            kind="shortest-path",
            graph=graph_to_doc(bundle.graph, bundle.F),
            F=sorted(bundle.F),
            s=bundle.s,
            t=bundle.t,
            labels=[{"edge": e, "interior": list(p)} for e, p in sorted(bundle.labels.items())],
        )
    elif isinstance(bundle, MatroidBundle):
        doc.update(
            kind="matroid",
            matroid=matroid_to_doc(bundle.matroid),
            representation="oracle" if isinstance(bundle.matroid, MinorMatroid) else "standalone",
            F=sorted(bundle.F),
            weights=_weights_to_doc(bundle.weights),
        )
    elif isinstance(bundle, MatchingBundle):
        doc.update(
            kind="matching",
            graph=bipartite_to_doc(bundle.graph, uncertain=bundle.E0),
            subdivided=bipartite_to_doc(bundle.subdivided),
            L0=sorted(bundle.L0),
            R0=sorted(bundle.R0),
            E0=sorted(bundle.E0),
            gadgets=[
                {"edge": e, "mid_right": r, "mid_left": l}
                for e, (r, l) in sorted(bundle.gadgets.items())
            ],
        )
    else:
        raise DocumentError(f"cannot serialize bundle of type {type(bundle).__name__}")
    trace = getattr(bundle, "trace", None)
    if trace is not None:
        doc["trace"] = trace
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def bundle_from_doc(doc: dict) -> Any:
    kind = _check_format(doc)
    k = _ints([_need(doc, "k")], "k")[0]
    trace = doc.get("trace")
    F = frozenset(_ints(doc.get("F", []), "F"))
    try:
        if kind == "mst":
            g, _ = graph_from_doc(_need(doc, "graph"))
            return MstBundle(g, F, k, trace)
        if kind == "shortest-path":
            g, _ = graph_from_doc(_need(doc, "graph"))
            labels = {
                _ints([_need(item, "edge")], "edge")[0]: tuple(_ints(_need(item, "interior"), "interior"))
                for item in _need(doc, "labels")
            }
            s, t = _ints([_need(doc, "s"), _need(doc, "t")], "terminals")
            return ShortestPathBundle(g, F, s, t, labels, k)
        if kind == "matroid":
            return MatroidBundle(
                matroid_from_doc(_need(doc, "matroid")), F, _weights_from_doc(_need(doc, "weights")), k, trace
            )
        g, *_ = bipartite_from_doc(_need(doc, "graph"))
        sub, *_ = bipartite_from_doc(_need(doc, "subdivided"))
        gadgets = {
            _ints([_need(item, "edge")], "edge")[0]: tuple(
                _ints([_need(item, "mid_right"), _need(item, "mid_left")], "gadget")
            )
            for item in _need(doc, "gadgets")
        }
        return MatchingBundle(
            g,
            sub,
            k,
            frozenset(_ints(_need(doc, "L0"), "L0")),
            frozenset(_ints(_need(doc, "R0"), "R0")),
            frozenset(_ints(_need(doc, "E0"), "E0")),
            gadgets,
            trace,
        )
    except DocumentError:
        raise
    except KernelError as exc:
        raise DocumentError(str(exc)) from exc


def provenance_for(instance_doc: dict) -> dict:
    prov = {"tool": TOOL_NAME, "version": __version__, "input_sha256": document_hash(instance_doc)}
    seed = (instance_doc.get("generator") or {}).get("seed")
    if seed is not None:
        prov["seed"] = seed
    return prov
