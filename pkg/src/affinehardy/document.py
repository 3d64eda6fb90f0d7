"""Versioned JSON form of a :class:`DynamicsReport`."""

from __future__ import annotations

import json
from typing import Any

from .symbol import AffineSymbol, SymbolClass
from .verdicts import (NORMALITY, DynamicsReport, SpectrumDescriptor, SpectrumKind, Verdict,
                       VerdictValue)

SCHEMA_VERSION = "1"

VERDICT_FIELDS = (
    "positively_expansive",
    "uniformly_positively_expansive",
    "expansive",
    "uniformly_expansive",
    "positive_shadowing",
    "li_yorke",
)


def _verdict_dict(v: Verdict) -> dict[str, str]:
    return {"value": v.value.value, "provenance": v.provenance, "note": v.note}


def _spectrum_dict(s: SpectrumDescriptor) -> dict[str, Any]:
    return {
        "variant": s.variant.value,
        "radius": s.radius,
        "b_re": None if s.b is None else s.b.real,
        "b_im": None if s.b is None else s.b.imag,
        "description": s.describe(),
        "provenance": s.provenance,
    }


def to_document(rep: DynamicsReport) -> dict[str, Any]:
    body: dict[str, Any] = {
        "class": rep.symbol_class.value,
        "operator_norm": rep.operator_norm,
        "invertible": rep.invertible,
        "normal": rep.normal,
        "self_adjoint": rep.self_adjoint,
        "unitary": rep.unitary,
    }
    for name in VERDICT_FIELDS:
        body[name] = _verdict_dict(getattr(rep, name))
    body["spectrum"] = _spectrum_dict(rep.spectrum)
    tags = {NORMALITY}
    tags.update(getattr(rep, name).provenance for name in VERDICT_FIELDS)
    if rep.spectrum.provenance:
        tags.add(rep.spectrum.provenance)
    return {
        "schema_version": SCHEMA_VERSION,
        "symbol": {"a": rep.symbol.a, "b_re": rep.symbol.b.real, "b_im": rep.symbol.b.imag},
        "report": body,
        "provenance": sorted(tags),
    }


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def from_document(doc: dict[str, Any]) -> DynamicsReport:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    sym = doc["symbol"]
    phi = AffineSymbol(sym["a"], complex(sym["b_re"], sym["b_im"]))
    body = doc["report"]
    sp = body["spectrum"]
    spectrum = SpectrumDescriptor(
        SpectrumKind(sp["variant"]),
        radius=sp["radius"],
        b=None if sp["b_re"] is None else complex(sp["b_re"], sp["b_im"]),
        provenance=sp["provenance"],
    )
    verdicts = {name: Verdict(VerdictValue(body[name]["value"]), body[name]["provenance"],
                              body[name]["note"])
                for name in VERDICT_FIELDS}
    return DynamicsReport(
        symbol=phi,
        symbol_class=SymbolClass(body["class"]),
        operator_norm=body["operator_norm"],
        invertible=body["invertible"],
        normal=body["normal"],
        self_adjoint=body["self_adjoint"],
        unitary=body["unitary"],
        spectrum=spectrum,
        **verdicts,
    )


def loads(text: str) -> DynamicsReport:
    return from_document(json.loads(text))
