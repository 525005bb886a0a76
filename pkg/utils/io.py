"""
File IO for the cli: JSON payloads, facet files, DOT output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List, Optional, Tuple

from models.errors import ParseError
from utils.app_logging import get_logger
from utils.helpers import norm_text, split_generators

LOG = get_logger("io")

_VERTICES_HEADER = "# vertices:"


def write_json_file(path: Path, obj) -> None:
    """Write JSON file, creating parent directories if needed."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False), encoding="utf-8")


def dump_json(obj: Any) -> str:
    """Stable rendering for stdout; key order is the payload's own."""
    return json.dumps(obj, indent=2, ensure_ascii=False)


def write_text_file(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def read_facet_file(path: Path) -> Tuple[List[List[str]], Optional[List[str]]]:
    """
    One facet per line, vertices comma-separated; an empty line inside the
    file is ignored, a line ``{}`` is the empty facet. An optional
    ``# vertices: a,b,c`` header declares the vertex set (extra vertices are
    non-faces). Other ``#`` lines are comments.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read facet file {path}: {e}") from None

    facets: List[List[str]] = []
    vertices: Optional[List[str]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = norm_text(raw)
        if not line:
            continue
        if line.lower().startswith(_VERTICES_HEADER):
            if vertices is not None:
                raise ParseError(f"{path}:{lineno}: vertices declared twice")
            vertices = split_generators(line[len(_VERTICES_HEADER):])
            continue
        if line.startswith("#"):
            continue
        if line == "{}":
            facets.append([])
            continue
        names = split_generators(line)
        for n in names:
            if not n.isidentifier():
                raise ParseError(f"{path}:{lineno}: {n!r} is not a vertex name")
        facets.append(names)
    if not facets:
        raise ParseError(f"{path}: no facets")
    LOG.debug("read %d facets from %s", len(facets), path)
    return facets, vertices
