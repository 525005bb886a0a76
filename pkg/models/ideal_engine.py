"""
Ideal arithmetic in S = F_p[x_1..x_n].

Generic operations go through reduced Gröbner bases (sympy's Buchberger);
monomial ideals short-circuit to exponent-vector combinatorics. ``PresentedRing``
(S together with a defining ideal I) lives here because every other module
needs it and it is nothing more than an ambient ring plus an Ideal.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from sympy.polys.groebnertools import groebner

from models.errors import EngineInvariantError, ValidationError
from models.polyring import (
    Monomial,
    Polynomial,
    PolynomialRing,
    TermOrder,
    check_degree,
    format_element,
    is_homogeneous,
    parse_element,
    poly_arith,
    total_degree,
    transport,
)
from utils.app_logging import get_logger

LOG = get_logger("ideal_engine")


class MonomialFlag(str, Enum):
    MONOMIAL = "monomial"
    NOT_MONOMIAL = "not-monomial"
    UNKNOWN = "unknown"


# -------------------- monomial helpers --------------------

def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minimal_monomials(monos: Iterable[Monomial]) -> list[Monomial]:
    uniq = sorted(set(monos), key=sum)
    kept: list[Monomial] = []
    for m in uniq:
        if not any(_divides(k, m) for k in kept):
            kept.append(m)
    return kept


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x - y, 0) for x, y in zip(a, b))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis under the ambient term order (monic, sorted descending)."""

    ambient: PolynomialRing
    elements: tuple[Polynomial, ...]
    monomial: bool = False

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def leading_monomials(self) -> list[Monomial]:
        return [g.LM for g in self.elements]

    def exponents(self) -> list[Monomial]:
        if not self.monomial:
            raise ValidationError("exponent vectors are only defined for monomial bases")
        return [next(iter(g.keys())) for g in self.elements]


class Ideal:
    """
    An ideal of S given by generators, with a compute-once reduced basis.
    Ideals of a quotient R = S/I are always passed around as lifts containing I.
    """

    def __init__(self, ambient: PolynomialRing, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if g.ring != ambient.sympy_ring:
                raise ValidationError(f"generator {g} does not live in {ambient.describe()}")
            if g:
                gens.append(g)
        self.ambient = ambient
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._basis: GroebnerBasis | None = None
        self._lock = threading.Lock()
        self._flag = MonomialFlag.MONOMIAL if all(len(g) == 1 for g in gens) else MonomialFlag.UNKNOWN

    # ---- construction helpers ----
    @classmethod
    def zero(cls, ambient: PolynomialRing) -> "Ideal":
        return cls(ambient, ())

    @classmethod
    def unit(cls, ambient: PolynomialRing) -> "Ideal":
        return cls(ambient, (ambient.one(),))

    @classmethod
    def of_variables(cls, ambient: PolynomialRing, names: Iterable[str]) -> "Ideal":
        return cls(ambient, [ambient.gen(n) for n in sorted(names, key=ambient.index)])

    @classmethod
    def maximal(cls, ambient: PolynomialRing) -> "Ideal":
        return cls(ambient, ambient.gens())

    @classmethod
    def from_monomials(cls, ambient: PolynomialRing, monos: Iterable[Monomial]) -> "Ideal":
        return cls(ambient, [ambient.monomial(m) for m in monos])

    @classmethod
    def from_strings(cls, ambient: PolynomialRing, texts: Iterable[str]) -> "Ideal":
        return cls(ambient, [parse_element(t, ambient) for t in texts])

    # ---- state ----
    @property
    def monomial_flag(self) -> MonomialFlag:
        return self._flag

    def basis(self) -> GroebnerBasis:
        with self._lock:
            if self._basis is None:
                self._basis = _compute_basis(self)
                self._flag = MonomialFlag.MONOMIAL if self._basis.monomial else MonomialFlag.NOT_MONOMIAL
            return self._basis

    def is_monomial(self) -> bool:
        if self._flag is MonomialFlag.UNKNOWN:
            self.basis()
        return self._flag is MonomialFlag.MONOMIAL

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_ground for g in self.generators) or (
            not self.is_zero() and contains(self, self.ambient.one())
        )

    def is_squarefree_monomial(self) -> bool:
        return self.is_monomial() and all(max(m, default=0) <= 1 for m in self.basis().exponents())

    def key(self) -> tuple:
        """Canonical, hashable identity: ambient ring plus the reduced basis."""
        elems = tuple(tuple(sorted((m, int(c) % self.ambient.p) for m, c in g.items())) for g in self.basis())
        return (self.ambient, elems)

    def format(self) -> list[str]:
        return [format_element(g, self.ambient) for g in self.basis()]

    def __repr__(self) -> str:
        shown = ", ".join(format_element(g, self.ambient) for g in self.generators) or "0"
        return f"Ideal<{shown}>"


def _compute_basis(I: Ideal) -> GroebnerBasis:
    ambient = I.ambient
    if I.is_zero():
        return GroebnerBasis(ambient, (), monomial=True)
    if I.monomial_flag is MonomialFlag.MONOMIAL:
        monos = _minimal_monomials(next(iter(g.keys())) for g in I.generators)
        elems = [ambient.monomial(m) for m in monos]
        order = ambient.sympy_ring.order
        elems.sort(key=lambda g: order(g.LM), reverse=True)
        return GroebnerBasis(ambient, tuple(elems), monomial=True)
    G = groebner(list(I.generators), ambient.sympy_ring, method="buchberger")
    G = [g.monic() for g in G if g]
    for g in G:
        check_degree(g, ambient.degree_cap, "Gröbner basis")
    LOG.debug("basis of %d generators -> %d elements", len(I.generators), len(G))
    return GroebnerBasis(ambient, tuple(G), monomial=all(len(g) == 1 for g in G))


def groebner_basis(I: Ideal) -> GroebnerBasis:
    return I.basis()


def _same_ambient(*ideals: Ideal) -> PolynomialRing:
    ambient = ideals[0].ambient
    for J in ideals[1:]:
        if J.ambient != ambient:
            raise ValidationError(f"ring mismatch: {ambient.describe()} vs {J.ambient.describe()}")
    return ambient


# -------------------- membership --------------------

def normal_form(f: Polynomial, B: GroebnerBasis) -> Polynomial:
    if f.ring != B.ambient.sympy_ring:
        raise ValidationError("ring mismatch in normal_form")
    if not B.elements or not f:
        return f
    if B.monomial:
        monos = B.exponents()
        return f.ring.from_dict({m: c for m, c in f.items() if not any(_divides(g, m) for g in monos)})
    return f.rem(list(B.elements))


def contains(I: Ideal, f: Polynomial) -> bool:
    return not normal_form(f, I.basis())


def ideal_leq(I: Ideal, J: Ideal) -> bool:
    _same_ambient(I, J)
    if J.is_zero():
        return I.is_zero()
    B = J.basis()
    return all(not normal_form(g, B) for g in I.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    return ideal_leq(I, J) and ideal_leq(J, I)


# -------------------- sums, products, intersections --------------------

def ideal_sum(*ideals: Ideal) -> Ideal:
    ambient = _same_ambient(*ideals)
    return Ideal(ambient, [g for J in ideals for g in J.generators])


def product(I: Ideal, J: Ideal) -> Ideal:
    ambient = _same_ambient(I, J)
    cap = ambient.degree_cap
    return Ideal(ambient, [poly_arith(a, b, "mul", cap=cap) for a in I.basis() for b in J.basis()])


def power(I: Ideal, n: int) -> Ideal:
    if n < 0:
        raise ValidationError("ideal powers need n >= 0")
    result = Ideal.unit(I.ambient)
    base = I
    while n:
        if n & 1:
            result = Ideal(I.ambient, product(result, base).basis().elements)
        n >>= 1
        if n:
            base = Ideal(I.ambient, product(base, base).basis().elements)
    return result


def _elimination_ring(ambient: PolynomialRing, front: Sequence[str]) -> PolynomialRing:
    rest = tuple(v for v in ambient.variables if v not in front)
    return PolynomialRing(ambient.p, tuple(front) + rest, TermOrder("block", len(front)), ambient.degree_cap)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    ambient = _same_ambient(I, J)
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ambient)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    if I.is_monomial() and J.is_monomial():
        lcms = [_lcm(a, b) for a in I.basis().exponents() for b in J.basis().exponents()]
        return Ideal.from_monomials(ambient, _minimal_monomials(lcms))

    t = ambient.fresh_name("elim_t")
    ext = _elimination_ring(ambient, [t])
    tt = ext.gen(t)
    gens = [tt * transport(g, ext) for g in I.basis()]
    gens += [(ext.one() - tt) * transport(g, ext) for g in J.basis()]
    G = Ideal(ext, gens).basis()
    kept = [transport(g, ambient) for g in G if g.LM[0] == 0]
    LOG.debug("intersection via elimination: %d of %d basis elements are t-free", len(kept), len(G))
    return Ideal(ambient, kept)


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    if not ideals:
        raise ValidationError("intersection of no ideals")
    out = ideals[0]
    for J in ideals[1:]:
        out = intersect(out, J)
    return out


def eliminate(J: Ideal, names: Sequence[str], target: PolynomialRing) -> Ideal:
    """J ∩ target, where target carries the variables of J's ring minus ``names``."""
    ambient = J.ambient
    rest = tuple(v for v in ambient.variables if v not in names)
    if set(rest) != set(target.variables) or target.p != ambient.p:
        raise ValidationError(f"{target.describe()} is not the subring left after eliminating {list(names)}")
    if J.is_zero():
        return Ideal.zero(target)
    if J.is_monomial():
        idx = [ambient.index(n) for n in names]
        kept = [m for m in J.basis().exponents() if all(m[i] == 0 for i in idx)]
        return Ideal(target, [transport(ambient.monomial(m), target) for m in kept])
    ext = _elimination_ring(ambient, list(names))
    G = Ideal(ext, [transport(g, ext) for g in J.basis()]).basis()
    k = len(names)
    kept = [transport(g, target) for g in G if not any(g.LM[:k])]
    return Ideal(target, kept)


# -------------------- colon and saturation --------------------

def _colon_element(I: Ideal, g: Polynomial) -> Ideal:
    ambient = I.ambient
    if contains(I, g):
        return Ideal.unit(ambient)
    B = I.basis()
    if len(B) == 1:
        h = B.elements[0]
        q, r = h.div(g)
        if not r:
            return Ideal(ambient, [check_degree(q, ambient.degree_cap, "colon")])
    meet = intersect(I, Ideal(ambient, [g]))
    quotients = []
    for h in meet.basis():
        q, r = h.div(g)
        if r:
            raise EngineInvariantError(f"{h} in I ∩ <g> is not divisible by g")
        quotients.append(q)
    return Ideal(ambient, quotients)


def colon(I: Ideal, J: Ideal) -> Ideal:
    ambient = _same_ambient(I, J)
    if J.is_zero():
        raise ValidationError("colon by zero ideal")
    if J.is_unit():
        return I
    if I.is_zero():
        return Ideal.zero(ambient)
    if I.is_unit() or ideal_leq(J, I):
        return Ideal.unit(ambient)
    if I.is_monomial() and J.is_monomial():
        pieces = []
        for n in J.basis().exponents():
            pieces.append(Ideal.from_monomials(ambient, _minimal_monomials(_quotient(m, n) for m in I.basis().exponents())))
        return intersect_all(pieces)
    return intersect_all([_colon_element(I, g) for g in J.basis()])


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    if not f:
        raise ValidationError("cannot saturate by the zero polynomial")
    fJ = Ideal(I.ambient, [f])
    cur = I
    while True:
        nxt = colon(cur, fJ)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt


# -------------------- graded helpers --------------------

def is_homogeneous_ideal(J: Ideal) -> bool:
    return all(is_homogeneous(g) for g in J.basis())


def degree_truncation(J: Ideal, degree: int) -> Ideal:
    """Ideal generated by the reduced-basis elements of degree <= ``degree``."""
    return Ideal(J.ambient, [g for g in J.basis() if total_degree(g) <= degree])


# -------------------- squarefree monomial ideals --------------------

@dataclass(frozen=True)
class MonomialPrime:
    """The prime generated by a subset of the variables (the empty subset is the zero ideal)."""

    variables: frozenset[str]

    def __init__(self, variables: Iterable[str]):
        object.__setattr__(self, "variables", frozenset(variables))

    def sort_key(self) -> tuple:
        return (len(self.variables), tuple(sorted(self.variables)))

    def __lt__(self, other: "MonomialPrime") -> bool:
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        return "<" + ",".join(sorted(self.variables)) + ">"

    def to_ideal(self, ambient: PolynomialRing) -> Ideal:
        return Ideal.of_variables(ambient, self.variables)

    def contains_prime(self, other: "MonomialPrime") -> bool:
        return other.variables <= self.variables

    @classmethod
    def from_ideal(cls, J: Ideal) -> "MonomialPrime | None":
        """The variable subset when J is generated by variables, else None."""
        if J.is_zero():
            return cls(())
        if not J.is_monomial():
            return None
        names = []
        for m in J.basis().exponents():
            if sum(m) != 1:
                return None
            names.append(J.ambient.variables[m.index(1)])
        return cls(names)


def minimal_primes_squarefree(I: Ideal) -> frozenset[MonomialPrime]:
    """Minimal vertex covers of the hypergraph of generator supports."""
    if not I.is_monomial():
        raise ValidationError("minimal_primes_squarefree needs a monomial ideal")
    if I.is_zero():
        return frozenset({MonomialPrime(())})
    if I.is_unit():
        return frozenset()
    exps = I.basis().exponents()
    if any(k > 1 for m in exps for k in m):
        raise ValidationError("minimal_primes_squarefree needs a squarefree ideal")
    names = I.ambient.variables
    edges = [frozenset(names[i] for i, k in enumerate(m) if k) for m in exps]
    vertices = sorted(set().union(*edges), key=names.index)

    covers: list[frozenset[str]] = []
    for size in range(1, len(vertices) + 1):
        for combo in combinations(vertices, size):
            cand = frozenset(combo)
            if any(c <= cand for c in covers):
                continue
            if all(cand & e for e in edges):
                covers.append(cand)
    return frozenset(MonomialPrime(c) for c in covers)


# -------------------- presented rings --------------------

@dataclass(frozen=True, eq=False)
class PresentedRing:
    """R = S/I for S = ambient and I = defining (zero or proper)."""

    ambient: PolynomialRing
    defining: Ideal

    def __post_init__(self):
        if self.defining.ambient != self.ambient:
            raise ValidationError("defining ideal lives in a different polynomial ring")
        if self.defining.is_unit():
            raise ValidationError("defining ideal must be proper")

    @classmethod
    def from_strings(cls, p: int, variables: Sequence[str], generators: Iterable[str], *,
                     degree_cap: int | None = None, order: TermOrder | None = None) -> "PresentedRing":
        from config import resolve_degree_cap

        ambient = PolynomialRing(p, tuple(variables), order or TermOrder(), resolve_degree_cap(degree_cap))
        return cls(ambient, Ideal.from_strings(ambient, [g for g in generators if g.strip()]))

    @classmethod
    def polynomial(cls, ambient: PolynomialRing) -> "PresentedRing":
        return cls(ambient, Ideal.zero(ambient))

    @property
    def I(self) -> Ideal:
        return self.defining

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ambient.variables

    @cached_property
    def graded(self) -> bool:
        return is_homogeneous_ideal(self.defining)

    @cached_property
    def is_stanley_reisner(self) -> bool:
        return self.defining.is_squarefree_monomial()

    def maximal_ideal(self) -> Ideal:
        return Ideal.maximal(self.ambient)

    def normalize(self, J: Ideal) -> Ideal:
        """J + I, the lift convention for ideals of R."""
        _same_ambient(J, self.defining)
        if ideal_leq(self.defining, J):
            return J
        return ideal_sum(J, self.defining)

    def parse_ideal(self, texts: Iterable[str]) -> Ideal:
        return Ideal.from_strings(self.ambient, texts)

    def key(self) -> tuple:
        return self.defining.key()

    def describe(self) -> dict:
        return {
            "p": self.p,
            "variables": list(self.variables),
            "I": self.defining.format(),
            "graded": self.graded,
        }
