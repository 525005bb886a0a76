"""
Exact polynomial arithmetic over the prime field F_p.

Polynomials are sympy ``PolyElement`` values (a dict from exponent tuples to
GF(p) coefficients) living in the sympy ring built by ``PolynomialRing``.
This module owns the text grammar, the printed form, term orders and the
degree cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

from sympy import Add, Integer, Mul, Pow, Symbol, isprime
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import GF
from sympy.polys.orderings import MonomialOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing
from tokenize import TokenError

from config import DEFAULT_DEGREE_CAP
from models.errors import DegreeCapExceeded, ParseError, ValidationError
from utils.app_logging import get_logger

LOG = get_logger("polyring")

Polynomial = PolyElement
Monomial = tuple[int, ...]

ORDER_KINDS = ("grevlex", "lex", "block")

_ALLOWED_TEXT_RE = re.compile(r"^[0-9A-Za-z_+\-*^()\s]*$")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VARIABLE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_TRANSFORMS = standard_transformations + (convert_xor,)


class SympyMonomialOrder(MonomialOrder):
    """grevlex / lex / block elimination over an optional variable permutation."""

    is_global = True
    is_default = False

    def __init__(self, kind: str, block: int = 0, permutation: tuple[int, ...] = ()):
        self.kind = kind
        self.block = block
        self.permutation = permutation
        self.alias = f"{kind}{block if kind == 'block' else ''}"

    def __call__(self, monomial):
        if self.permutation:
            monomial = tuple(monomial[i] for i in self.permutation)
        if self.kind == "lex":
            return lex(monomial)
        if self.kind == "block":
            k = self.block
            return (grevlex(monomial[:k]), grevlex(monomial[k:]))
        return grevlex(monomial)

    def __repr__(self):
        return f"SympyMonomialOrder({self.kind!r}, {self.block}, {self.permutation!r})"

    def __eq__(self, other):
        return (
            isinstance(other, SympyMonomialOrder)
            and (self.kind, self.block, self.permutation) == (other.kind, other.block, other.permutation)
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self).__name__, self.kind, self.block, self.permutation))


@dataclass(frozen=True)
class TermOrder:
    kind: str = "grevlex"
    block: int = 0
    permutation: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValidationError(f"unknown term order {self.kind!r}; expected one of {ORDER_KINDS}")
        if self.kind == "block" and self.block < 1:
            raise ValidationError("block-elimination order needs k >= 1")
        if self.permutation and sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValidationError(f"not a permutation: {self.permutation}")

    @property
    def is_graded(self) -> bool:
        return self.kind == "grevlex"

    def sympy_order(self) -> MonomialOrder:
        if self.kind == "grevlex" and not self.permutation:
            return grevlex
        if self.kind == "lex" and not self.permutation:
            return lex
        return SympyMonomialOrder(self.kind, self.block, self.permutation)


@dataclass(frozen=True)
class PolynomialRing:
    """S = F_p[x_1..x_n] with a term order and a degree cap."""

    p: int
    variables: tuple[str, ...]
    order: TermOrder = field(default_factory=TermOrder)
    degree_cap: int = DEFAULT_DEGREE_CAP

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not isinstance(self.p, int) or isinstance(self.p, bool) or not isprime(self.p):
            raise ValidationError(f"p must be prime, got {self.p!r}")
        if not self.variables:
            raise ValidationError("a polynomial ring needs at least one variable")
        seen: set[str] = set()
        for name in self.variables:
            if not _VARIABLE_NAME_RE.match(name):
                raise ValidationError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValidationError(f"duplicate variable {name!r}")
            seen.add(name)
        if self.order.kind == "block" and self.order.block > len(self.variables):
            raise ValidationError("block size exceeds the number of variables")
        if self.order.permutation and len(self.order.permutation) != len(self.variables):
            raise ValidationError("term-order permutation length differs from the variable count")
        if self.degree_cap <= 0:
            raise ValidationError("degree cap must be positive")

    @cached_property
    def sympy_ring(self) -> PolyRing:
        return PolyRing(self.variables, GF(self.p), self.order.sympy_order())

    @property
    def ngens(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise ValidationError(f"unknown variable {name!r}") from None

    def zero(self) -> Polynomial:
        return self.sympy_ring.zero

    def one(self) -> Polynomial:
        return self.sympy_ring.one

    def gen(self, name: str) -> Polynomial:
        return self.sympy_ring.gens[self.index(name)]

    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.sympy_ring.gens)

    def monomial(self, exponents: Monomial, coeff: int = 1) -> Polynomial:
        if len(exponents) != self.ngens:
            raise ValidationError(f"monomial {exponents} has the wrong length for {self.variables}")
        return self.from_terms({tuple(exponents): coeff})

    def from_terms(self, terms: Mapping[Monomial, int]) -> Polynomial:
        d = {}
        for m, c in terms.items():
            c = int(c) % self.p
            if c:
                d[tuple(m)] = c
        return self.sympy_ring.from_dict(d) if d else self.sympy_ring.zero

    def with_order(self, order: TermOrder) -> "PolynomialRing":
        return replace(self, order=order)

    def extended(self, names: Iterable[str], *, front: bool = False, order: TermOrder | None = None) -> "PolynomialRing":
        names = tuple(names)
        variables = names + self.variables if front else self.variables + names
        return PolynomialRing(self.p, variables, order or TermOrder(), self.degree_cap)

    def fresh_name(self, stem: str) -> str:
        name, k = stem, 0
        while name in self.variables:
            k += 1
            name = f"{stem}{k}"
        return name

    def describe(self) -> str:
        return f"F_{self.p}[{', '.join(self.variables)}]"


def _ambient(ring) -> PolynomialRing:
    return getattr(ring, "ambient", ring)


# -------------------- Degrees --------------------

def total_degree(f: Polynomial) -> int:
    """Total degree; -1 for the zero polynomial."""
    if not f:
        return -1
    return max(sum(m) for m in f.keys())


def is_homogeneous(f: Polynomial) -> bool:
    return len({sum(m) for m in f.keys()}) <= 1


def check_degree(f: Polynomial, cap: int, where: str = "") -> Polynomial:
    # single terms are exempt: a monomial never grows in size with its exponents
    if len(f) >= 2:
        d = total_degree(f)
        if d > cap:
            raise DegreeCapExceeded(d, cap, where)
    return f


def coefficient(c, p: int) -> int:
    return int(c) % p


# -------------------- Parsing and printing --------------------

def _degree_bound(expr) -> int:
    if expr.is_Symbol:
        return 1
    if expr.is_Number:
        return 0
    if isinstance(expr, Add):
        return max(_degree_bound(a) for a in expr.args)
    if isinstance(expr, Mul):
        return sum(_degree_bound(a) for a in expr.args)
    if isinstance(expr, Pow):
        return _degree_bound(expr.base) * int(expr.exp)
    raise ParseError(f"unsupported construct {expr}")


def _check_expr(expr, cap: int, text: str) -> None:
    for node in (expr, *expr.atoms(Pow)):
        if isinstance(node, Pow):
            if not (node.exp.is_Integer and node.exp >= 0):
                raise ParseError(f"exponents must be non-negative integers in {text!r}")
            if not (node.base.is_Symbol or node.base.is_Number) and _degree_bound(node) > cap:
                raise DegreeCapExceeded(_degree_bound(node), cap, f"parsing {text!r}")
    for num in expr.atoms():
        if num.is_Number and not num.is_Integer:
            raise ParseError(f"coefficients must be integers in {text!r}")
    bad = [a for a in expr.atoms() if not (a.is_Symbol or a.is_Number)]
    if bad:
        raise ParseError(f"unsupported construct {bad[0]} in {text!r}")


def parse_element(text: str, ring) -> Polynomial:
    """
    Parse ``text`` (integers, declared variables, ``+ - * ^`` and parentheses)
    into the canonical form over ``ring`` (a PolynomialRing or PresentedRing).
    """
    ambient = _ambient(ring)
    src = (text or "").strip()
    if not src:
        raise ParseError("empty polynomial")
    if not _ALLOWED_TEXT_RE.match(src):
        raise ParseError(f"illegal character in {text!r}")
    unknown = sorted({w for w in _IDENT_RE.findall(src) if w not in ambient.variables})
    if unknown:
        raise ParseError(f"unknown variable {unknown[0]!r} in {text!r}; declared: {', '.join(ambient.variables)}")

    local = {name: Symbol(name) for name in ambient.variables}
    try:
        expr = parse_expr(src, local_dict=local, global_dict={"Integer": Integer, "Symbol": Symbol},
                          transformations=_TRANSFORMS, evaluate=True)
    except (SyntaxError, TypeError, ValueError, TokenError) as exc:
        raise ParseError(f"malformed polynomial {text!r}: {exc}") from None
    _check_expr(expr, ambient.degree_cap, src)
    try:
        f = ambient.sympy_ring.from_expr(expr)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"cannot read {text!r} as a polynomial: {exc}") from None
    # parsed input is capped term by term; only computed monomials are exempt
    d = total_degree(f)
    if d > ambient.degree_cap:
        raise DegreeCapExceeded(d, ambient.degree_cap, f"parsing {text!r}")
    return f


def format_monomial(m: Monomial, variables: tuple[str, ...]) -> str:
    parts = []
    for name, k in zip(variables, m):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_element(f: Polynomial, ring) -> str:
    """Descending term order, ``^`` exponents, explicit ``*``; coefficients in [0, p)."""
    ambient = _ambient(ring)
    if not f:
        return "0"
    out = []
    for m, c in f.terms():
        c = coefficient(c, ambient.p)
        mono = format_monomial(m, ambient.variables)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


# -------------------- Arithmetic --------------------

def same_ring(a: Polynomial, b: Polynomial) -> None:
    if a.ring != b.ring:
        raise ValidationError(f"ring mismatch: {a.ring} vs {b.ring}")


def poly_arith(a: Polynomial, b: Polynomial, op: str, *, cap: int = DEFAULT_DEGREE_CAP) -> Polynomial:
    same_ring(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if len(a) >= 2 or len(b) >= 2:
            d = total_degree(a) + total_degree(b)
            if a and b and d > cap:
                raise DegreeCapExceeded(d, cap, "multiplication")
        return a * b
    raise ValidationError(f"unknown operation {op!r}")


def frobenius_power_element(f: Polynomial, e: int, ring) -> Polynomial:
    """f^(p^e) by scaling exponents; F_p coefficients are fixed by Frobenius."""
    ambient = _ambient(ring)
    if e < 0:
        raise ValidationError(f"Frobenius level must be >= 0, got {e}")
    q = ambient.p ** e
    if q == 1 or not f:
        return f
    if len(f) >= 2 and total_degree(f) * q > ambient.degree_cap:
        raise DegreeCapExceeded(total_degree(f) * q, ambient.degree_cap, f"Frobenius power q={q}")
    return f.ring.from_dict({tuple(k * q for k in m): c for m, c in f.items()})


def transport(f: Polynomial, target: PolynomialRing) -> Polynomial:
    """Re-express f in ``target`` matching variables by name."""
    names = [str(s) for s in f.ring.symbols]
    if f.ring == target.sympy_ring:
        return f
    positions = []
    for name in names:
        positions.append(target.variables.index(name) if name in target.variables else None)
    terms: dict[Monomial, int] = {}
    for m, c in f.items():
        new = [0] * target.ngens
        for k, pos in zip(m, positions):
            if k == 0:
                continue
            if pos is None:
                raise ValidationError(f"cannot move {f} into {target.describe()}: a variable is missing")
            new[pos] = k
        terms[tuple(new)] = (terms.get(tuple(new), 0) + int(c)) % target.p
    return target.from_terms(terms)
