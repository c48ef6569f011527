"""Bit-stable serialization of presentations and pipeline results.

JSON carries ``"schema": "coxforge/1"``.  Singular and Macaulay2 scripts are
emitted for external cross-checking only; nothing here reads them back.
"""

from __future__ import annotations

import json

from . import coxconstruct as cc
from .groebner import Ideal, buchberger
from .polyring import GradedRing, poly_parse
from .presentations import Presentation
from .verify import SCHEMA, spec_to_dict

FORMATS = ("json", "text", "singular", "macaulay2")


def spec_from_dict(d: dict):
    family = d.get("family")
    if family == "PowerP1":
        return cc.PowerP1(d["n"])
    if family == "ProductSquare":
        return cc.ProductSquare(tuple(d["n_list"]))
    raise ValueError(f"unknown spec family {family!r}")


def _ring_dict(ring: GradedRing) -> dict:
    return {
        "variables": list(ring.var_names),
        "degrees": [list(d) for d in ring.degrees()],
    }


def _ring_from(d: dict) -> GradedRing:
    return GradedRing.from_degrees(d["variables"], d["degrees"])


def presentation_to_dict(P: Presentation, spec=None) -> dict:
    out = {
        "schema": SCHEMA,
        "kind": "presentation",
        "label": P.label,
        "ring": _ring_dict(P.ring),
        "grading_rank": P.ring.rank,
        "extra_variable": P.extra_var,
        "generators": [str(g) for g in P.generators],
    }
    if spec is not None:
        out["spec"] = spec_to_dict(spec)
    return out


def presentation_from_dict(d: dict) -> Presentation:
    if d.get("schema") != SCHEMA or d.get("kind") != "presentation":
        raise ValueError("not a coxforge/1 presentation document")
    ring = _ring_from(d["ring"])
    gens = [poly_parse(t, ring) for t in d["generators"]]
    return Presentation(ring, Ideal(ring, gens), d["label"], d["extra_variable"])


def pipeline_to_dict(state: cc.PipelineState) -> dict:
    I1 = state.I1
    basis = buchberger(state.I2)
    return {
        "schema": SCHEMA,
        "kind": "pipeline",
        "spec": spec_to_dict(state.spec),
        "label": f"pipeline, {state.spec}",
        "ring": _ring_dict(state.k2_ring),
        "grading_rank": state.k2_ring.rank,
        "extra_variable": cc.extra_variable(state.spec),
        "stretched_ring": _ring_dict(I1.ring),
        "graph_ideal": [str(g) for g in I1.generators],
        "transferred_generators": [str(g) for g in state.I2prime_gens],
        "generators": [str(g) for g in basis],
        "certificate": state.certificate,
    }


def pipeline_presentation(state: cc.PipelineState) -> Presentation:
    basis = buchberger(state.I2)
    return Presentation(state.k2_ring, Ideal(state.k2_ring, basis), f"pipeline, {state.spec}",
                        cc.extra_variable(state.spec))


def load(text: str) -> Presentation:
    """Read a JSON presentation or pipeline document back as a Presentation."""
    d = json.loads(text)
    if d.get("kind") == "pipeline":
        d = dict(d, kind="presentation")
    return presentation_from_dict(d)


def to_json(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_text(P: Presentation) -> str:
    ring = P.ring
    lines = [P.label, "ring: QQ[" + ", ".join(ring.var_names) + "]",
             f"grading rank: {ring.rank}", "degrees:"]
    for name, d in zip(ring.var_names, ring.degrees()):
        lines.append(f"  deg({name}) = ({','.join(map(str, d))})")
    lines.append(f"ideal ({len(P.generators)} generators):")
    lines += [f"  {g}" for g in P.generators]
    return "\n".join(lines) + "\n"


def _join(items, width=76, indent="  ") -> str:
    out, line = [], indent
    for k, item in enumerate(items):
        piece = item + ("," if k < len(items) - 1 else "")
        if len(line) + len(piece) + 1 > width and line.strip():
            out.append(line.rstrip())
            line = indent
        line += piece + " "
    out.append(line.rstrip())
    return "\n".join(out)


def to_singular(P: Presentation) -> str:
    ring = P.ring
    lines = [f"// {P.label}", "// degrees (one per variable, in order):"]
    for name, d in zip(ring.var_names, ring.degrees()):
        lines.append(f"//   {name}: ({','.join(map(str, d))})")
    lines.append("ring R = 0, (")
    lines.append(_join(list(ring.var_names)))
    lines.append("), dp;")
    lines.append("ideal I =")
    lines.append(_join([str(g) for g in P.generators] or ["0"]))
    lines[-1] += ";"
    return "\n".join(lines) + "\n"


def _heft(ring: GradedRing):
    if not ring.rank:
        return None
    w = [2] * (ring.rank - 1) + [1]
    if all(sum(a * b for a, b in zip(w, d)) > 0 for d in ring.degrees()):
        return w
    return None


def to_macaulay2(P: Presentation) -> str:
    ring = P.ring
    degs = ["{" + ",".join(map(str, d)) + "}" for d in ring.degrees()]
    opts = "Degrees => {" + ", ".join(degs) + "}"
    heft = _heft(ring)
    if heft:
        opts += ", Heft => {" + ",".join(map(str, heft)) + "}"
    lines = [f"-- {P.label}", "R = QQ[", _join(list(ring.var_names)) + ",", "  " + opts + "];",
             "I = ideal(", _join([str(g) for g in P.generators] or ["0_R"]), ");"]
    return "\n".join(lines) + "\n"


def render(P: Presentation, fmt: str, document: dict | None = None) -> str:
    if fmt == "json":
        return to_json(document if document is not None else presentation_to_dict(P))
    if fmt == "text":
        return to_text(P)
    if fmt == "singular":
        return to_singular(P)
    if fmt == "macaulay2":
        return to_macaulay2(P)
    raise ValueError(f"unknown format {fmt!r}")
