"""
JSON payloads for the cli. Every payload has the same top-level keys in the
same order: ring, result, certification, levels_computed, warnings.
"""

from __future__ import annotations

from typing import Any, Iterable, Optional

from models.cartier import CoreReport
from models.ideal_engine import Ideal, PresentedRing
from models.stanley_reisner import AtlasGraph


def ideal_payload(J: Optional[Ideal]) -> Optional[list[str]]:
    if J is None:
        return None
    return J.format()


def envelope(ring: PresentedRing, result: dict, *, certification: Optional[str] = None,
             levels_computed: int = 0, warnings: Iterable[str] = ()) -> dict[str, Any]:
    return {
        "ring": ring.describe(),
        "result": result,
        "certification": certification,
        "levels_computed": levels_computed,
        "warnings": list(warnings),
    }


def core_result(report: CoreReport, **extra) -> dict[str, Any]:
    out = {
        "core": ideal_payload(report.core),
        "upper_bound": ideal_payload(report.upper_bound),
        "stabilized_at": report.stabilized_at,
        "method": report.method,
        "f_pure": report.f_pure,
    }
    out.update(extra)
    return out


def core_payload(ring: PresentedRing, report: CoreReport, **extra) -> dict[str, Any]:
    return envelope(
        ring,
        core_result(report, **extra),
        certification=report.certification_label(),
        levels_computed=report.levels_computed,
        warnings=report.warnings,
    )


def atlas_result(graph: AtlasGraph) -> dict[str, Any]:
    return {
        "nodes": [Q.label() for Q in graph.nodes],
        "edges": [[Q.label(), graph.edges[Q].label() if graph.edges.get(Q) else None] for Q in graph.nodes],
        "image": [P.label() for P in sorted(graph.image())],
        "fixed_points": [P.label() for P in graph.fixed_points()],
        "closed_form_agrees": graph.all_agree(),
        "certifications": {Q.label(): graph.certifications.get(Q) for Q in graph.nodes},
    }


def properties_result(results) -> dict[str, Any]:
    return {
        "passed": all(r.passed for r in results),
        "properties": [r.to_payload() for r in results],
    }
