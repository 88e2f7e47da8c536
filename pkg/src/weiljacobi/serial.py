"""JSON forms of objects, polynomials, maps, diagrams, reports and traces.

Rationals are ``{"num": "...", "den": "..."}`` with string digits so no JSON
reader can round them; monomials are sorted index arrays.
"""

from __future__ import annotations

from fractions import Fraction

from .weil import (
    CoordinateSpace, PolyMap, SmallObject, WeilPoly, as_rational, grlex_key, indices,
    monomial, small_object,
)

SCHEMA_VERSION = 1


def rat_to_json(c) -> dict:
    c = Fraction(c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def rat_from_json(d) -> int | Fraction:
    if isinstance(d, int):
        return d
    return as_rational(Fraction(int(d["num"]), int(d["den"])))


def object_to_json(obj) -> dict:
    if isinstance(obj, CoordinateSpace):
        return {"space": obj.m}
    return {"n": obj.n,
            "forbidden": [list(p) for p in sorted(obj.forbidden)],
            "zeroed": sorted(obj.zeroed)}


def object_from_json(d: dict):
    if "space" in d:
        return CoordinateSpace(int(d["space"]))
    return small_object(int(d["n"]), [tuple(p) for p in d.get("forbidden", [])], d.get("zeroed", []))


def poly_to_json(p: WeilPoly, with_object: bool = True) -> dict:
    terms = [[list(indices(m)), rat_to_json(c)] for m, c in sorted(p.terms.items(), key=lambda t: grlex_key(t[0]))]
    out = {"terms": terms}
    if with_object:
        out = {"object": object_to_json(p.obj), **out}
    return out


def poly_from_json(d: dict, obj: SmallObject | None = None) -> WeilPoly:
    obj = obj or object_from_json(d["object"])
    return WeilPoly(obj, {monomial(ix): rat_from_json(c) for ix, c in d["terms"]})


def polymap_to_json(F: PolyMap) -> dict:
    """Coordinates are stored sparsely: only nonzero positions appear."""
    return {
        "source": object_to_json(F.source),
        "target": object_to_json(F.target),
        "coords": {str(k): poly_to_json(c, with_object=False)["terms"] for k, c in F.sparse().items()},
    }


def polymap_from_json(d: dict, target=None) -> PolyMap:
    src = object_from_json(d["source"])
    tgt = target if target is not None else object_from_json(d["target"])
    table = {int(k): {tuple(ix): rat_from_json(c) for ix, c in terms} for k, terms in d["coords"].items()}
    return PolyMap.from_terms(src, tgt, table)


def vector_to_json(v) -> dict:
    return {"base": {str(k): rat_to_json(x) for k, x in enumerate(v.base, 1) if x},
            "linear": {str(k): rat_to_json(x) for k, x in enumerate(v.linear, 1) if x},
            "dim": len(v.linear)}


def vector_from_json(d: dict):
    from .sdiff import TangentVector
    n = d["dim"]
    base = [0] * n
    lin = [0] * n
    for k, x in d["base"].items():
        base[int(k) - 1] = rat_from_json(x)
    for k, x in d["linear"].items():
        lin[int(k) - 1] = rat_from_json(x)
    return TangentVector(tuple(base), tuple(lin))


def diagram_to_json(dg) -> dict:
    return {
        "schema": f"weiljacobi/diagram/{SCHEMA_VERSION}",
        "name": dg.name,
        "apex": object_to_json(dg.apex),
        "legs": [{"name": l.name, "leaf": object_to_json(l.leaf), "map": polymap_to_json(l.f)} for l in dg.legs],
        "edges": [{"name": e.name, "r": object_to_json(e.r), "a": e.a, "b": e.b,
                   "g": polymap_to_json(e.g), "h": polymap_to_json(e.h)} for e in dg.edges],
    }


def diagram_from_json(d: dict):
    from .colimit import Diagram, Edge, Leg
    apex = object_from_json(d["apex"])
    legs = []
    for k, l in enumerate(d["legs"]):
        leaf = object_from_json(l["leaf"])
        legs.append(Leg(l.get("name", f"leg{k + 1}"), leaf, polymap_from_json(l["map"], target=apex)))
    edges = []
    for k, e in enumerate(d.get("edges", [])):
        a, b = int(e["a"]), int(e["b"])
        g = polymap_from_json(e["g"], target=legs[a].leaf)
        h = polymap_from_json(e["h"], target=legs[b].leaf)
        edges.append(Edge(e.get("name", f"edge{k + 1}"), object_from_json(e["r"]), a, b, g, h))
    return Diagram(d.get("name", "file"), apex, tuple(legs), tuple(edges))


def report_to_json(r) -> dict:
    return {
        "schema": f"weiljacobi/colimit-report/{SCHEMA_VERSION}",
        "diagram": r.diagram,
        "apex_dim": r.apex_dim,
        "family_dim": r.family_dim,
        "compat_dim": r.compat_dim,
        "rank": r.rank,
        "kernel_dim": r.kernel_dim,
        "exists_for_all": r.exists_for_all,
        "unique": r.unique,
        "quasi_colimit": r.quasi_colimit,
        "kernel_basis": [poly_to_json(p) for p in r.kernel_basis],
    }


def trace_to_json(trace) -> dict:
    entries = []
    for e in trace.entries:
        out = e.output
        item = {
            "tag": e.tag,
            "step": e.step,
            "operation": e.operation,
            "subscript": e.subscript,
            "inputs": list(e.inputs),
        }
        if isinstance(out, PolyMap):
            item["output"] = polymap_to_json(out)
            item["mediator"] = polymap_to_json(e.mediator)
        else:
            item["output"] = vector_to_json(out)
        item["certificate"] = "ok" if e.certificate else "failed"
        item["matches_display"] = e.golden
        if e.display_diff:
            item["display_diff"] = e.display_diff
        entries.append(item)
    return {
        "schema": f"weiljacobi/trace/{SCHEMA_VERSION}",
        "entries": entries,
        "end_vectors": [vector_to_json(v) for v in trace.vectors],
        "total": vector_to_json(trace.total),
        "display_errata": [{"tag": t, "diff": d} for t, d in trace.errata],
    }
