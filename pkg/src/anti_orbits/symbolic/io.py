"""JSON readers and writers for graphs and codes."""

import json
import math
from pathlib import Path
from typing import Any

from anti_orbits.errors import CodeFormatError, GraphError
from anti_orbits.symbolic.codes import Code, StandardCode
from anti_orbits.symbolic.graph import Edge, TransitionGraph


def _load(source: str | Path | dict[str, Any]) -> dict[str, Any]:
    if isinstance(source, dict):
        return source
    # json.JSONDecodeError carries lineno/colno; callers report them
    data = json.loads(Path(source).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise CodeFormatError("expected a JSON object")
    return data


def graph_from_json(source: str | Path | dict[str, Any]) -> TransitionGraph:
    data = _load(source)
    try:
        vertices = tuple(data["vertices"])
        edges = tuple(Edge(id=e["id"], src=e["src"], dst=e["dst"]) for e in data["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph description: {exc}") from exc
    return TransitionGraph(vertices, edges)


def graph_to_json(graph: TransitionGraph) -> dict[str, Any]:
    return {
        "vertices": list(graph.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in graph.edges],
    }


def code_from_json(source: str | Path | dict[str, Any]) -> Code:
    data = _load(source)
    kind = str(data.get("type", "")).lower()
    if kind not in {"periodic", "window"}:
        raise CodeFormatError("code type must be 'periodic' or 'window'")
    edges = data.get("edges")
    if not isinstance(edges, list) or not edges:
        raise CodeFormatError("code needs a non-empty 'edges' list")
    return Code(tuple(edges), periodic=kind == "periodic")


def code_to_json(code: Code) -> dict[str, Any]:
    return {"type": "periodic" if code.periodic else "window", "edges": list(code.edges)}


def standard_code_from_json(source: str | Path | dict[str, Any], bound: float | None = None) -> StandardCode:
    data = _load(source)
    multiples = data.get("multiples")
    if not isinstance(multiples, list) or not multiples:
        raise CodeFormatError("standard code needs a non-empty 'multiples' list")
    if any(not isinstance(m, int) or isinstance(m, bool) for m in multiples):
        raise CodeFormatError("multiples must be integers")
    resolved = bound if bound is not None else float(data.get("bound", math.pi))
    return StandardCode(
        tuple(multiples),
        periodic=bool(data.get("periodic", True)),
        bound=resolved,
        winding=int(data.get("winding", 0)),
        origin=int(data.get("origin", 0)),
    )


def standard_code_to_json(code: StandardCode) -> dict[str, Any]:
    return {
        "multiples": list(code.multiples),
        "periodic": code.periodic,
        "bound": code.bound,
        "winding": code.winding,
        "origin": code.origin,
    }
