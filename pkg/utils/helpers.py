
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from models.errors import ParseError

_WS_RE = re.compile(r"\s+")
_FIELD_RE = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*)$", re.DOTALL)
_RATIONAL_RE = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass
class RingDescription:
    p: int
    variables: List[str]
    generators: List[str] = field(default_factory=list)
    order: Optional[str] = None


def norm_text(s: str) -> str:
    return _WS_RE.sub(" ", (s or "").strip())


def split_generators(text: str) -> List[str]:
    """Split a comma-separated generator list, ignoring commas inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text or "":
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    out.append("".join(cur))
    return [norm_text(g) for g in out if g.strip()]


def parse_ring_description(text: str) -> RingDescription:
    """
    Parse ``p=2; vars=x,y,z; I=x*y, y*z``. ``I`` may be empty or omitted
    (the polynomial ring); ``order`` (grevlex or lex) is optional.
    """
    fields: dict[str, str] = {}
    for chunk in (text or "").split(";"):
        if not chunk.strip():
            continue
        m = _FIELD_RE.match(chunk)
        if not m:
            raise ParseError(f"cannot read ring field {chunk.strip()!r}")
        key = m.group(1).lower()
        if key in fields:
            raise ParseError(f"ring field {key!r} given twice")
        fields[key] = m.group(2).strip()

    unknown = set(fields) - {"p", "vars", "i", "order"}
    if unknown:
        raise ParseError(f"unknown ring fields: {sorted(unknown)}")
    if "p" not in fields or "vars" not in fields:
        raise ParseError("a ring description needs p=... and vars=...")
    try:
        p = int(fields["p"])
    except ValueError:
        raise ParseError(f"characteristic must be an integer, got {fields['p']!r}") from None
    variables = split_generators(fields["vars"])
    if not variables:
        raise ParseError("a ring needs at least one variable")
    return RingDescription(p, variables, split_generators(fields.get("i", "")), fields.get("order") or None)


def parse_rational(text: str) -> Fraction:
    """``3`` or ``3/2``; no floats, no signs."""
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ParseError(f"expected a non-negative rational like 3/2, got {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError("zero denominator")
    return Fraction(num, den)
