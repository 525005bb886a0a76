"""
Simplicial complexes, their squarefree monomial (Stanley–Reisner) ideals, the
closed form for cores at monomial primes (sum of the minimal primes inside Q),
and the atlas of the core map on monomial primes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

from config import DEFAULT_DEGREE_CAP, DEFAULT_E_MAX, DEFAULT_WINDOW, VERTEX_BOUND
from models.errors import EngineInvariantError, ValidationError
from models.frobenius import FrobeniusLevel, bracket_power
from models.ideal_engine import (
    Ideal,
    MonomialPrime,
    PresentedRing,
    ideal_equal,
    ideal_leq,
    ideal_sum,
    minimal_primes_squarefree,
)
from models.polyring import PolynomialRing
from utils.app_logging import get_logger

LOG = get_logger("stanley_reisner")

__all__ = [
    "AtlasGraph",
    "MonomialPrime",
    "SimplicialComplex",
    "contraction_closed_form",
    "core_closed_form",
    "core_map_atlas",
    "enumerate_complexes",
    "enumerate_monomial_primes",
    "random_complex",
    "sr_ideal",
    "sr_ring",
    "sums_of_minimal_primes",
]


@dataclass(frozen=True)
class SimplicialComplex:
    """
    Facets over a declared vertex set. A declared vertex that lies in no facet
    is a non-face: its variable belongs to the Stanley–Reisner ideal.
    """

    vertices: tuple[str, ...]
    facets: frozenset[frozenset[str]]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex names")
        if not self.facets:
            raise ValidationError("a complex needs at least one facet (use the empty facet for {∅})")
        known = set(self.vertices)
        for F in self.facets:
            if not F <= known:
                raise ValidationError(f"facet {sorted(F)} uses undeclared vertices")
        for F in self.facets:
            for G in self.facets:
                if F != G and F <= G:
                    raise ValidationError(f"facet {sorted(F)} is contained in facet {sorted(G)}")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[str]], vertices: Sequence[str] | None = None) -> "SimplicialComplex":
        fs = frozenset(frozenset(F) for F in facets)
        if vertices is None:
            vertices = sorted(set().union(*fs)) if fs else []
        return cls(tuple(vertices), fs)

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[str]], vertices: Sequence[str]) -> "SimplicialComplex":
        """Keeps only the maximal members of ``faces``."""
        fs = {frozenset(F) for F in faces}
        maximal = [F for F in fs if not any(F < G for G in fs)]
        return cls(tuple(vertices), frozenset(maximal))

    def is_face(self, S: Iterable[str]) -> bool:
        S = frozenset(S)
        return any(S <= F for F in self.facets)

    @property
    def ghost_vertices(self) -> list[str]:
        used = set().union(*self.facets)
        return [v for v in self.vertices if v not in used]

    def minimal_non_faces(self) -> list[frozenset[str]]:
        if len(self.vertices) > VERTEX_BOUND:
            raise ValidationError(f"{len(self.vertices)} vertices exceeds the bound {VERTEX_BOUND}")
        found: list[frozenset[str]] = []
        for size in range(1, len(self.vertices) + 1):
            for combo in combinations(self.vertices, size):
                S = frozenset(combo)
                if any(N <= S for N in found):
                    continue
                if not self.is_face(S):
                    found.append(S)
        return found

    def canonical_form(self) -> tuple:
        """Isomorphism invariant: the least relabelled facet list over all vertex permutations."""
        n = len(self.vertices)
        best = None
        for perm in permutations(range(n)):
            relabel = {v: perm[i] for i, v in enumerate(self.vertices)}
            form = tuple(sorted(tuple(sorted(relabel[v] for v in F)) for F in self.facets))
            if best is None or form < best:
                best = form
        return (n, best)


def sr_ideal(K: SimplicialComplex, ambient: PolynomialRing) -> Ideal:
    """Squarefree monomials of the minimal non-faces."""
    missing = [v for v in K.vertices if v not in ambient.variables]
    if missing:
        raise ValidationError(f"vertices {missing} are not variables of {ambient.describe()}")
    gens = []
    for N in K.minimal_non_faces():
        g = ambient.one()
        for v in sorted(N, key=ambient.index):
            g = g * ambient.gen(v)
        gens.append(g)
    return Ideal(ambient, gens)


def sr_ring(K: SimplicialComplex, p: int, *, degree_cap: int = DEFAULT_DEGREE_CAP) -> PresentedRing:
    ambient = PolynomialRing(p, K.vertices, degree_cap=degree_cap)
    return PresentedRing(ambient, sr_ideal(K, ambient))


def complex_of(ring: PresentedRing) -> SimplicialComplex:
    """Facets are the complements of the minimal primes."""
    _require_sr(ring)
    names = ring.variables
    facets = [frozenset(names) - P.variables for P in minimal_primes_squarefree(ring.defining)]
    return SimplicialComplex(tuple(names), frozenset(facets))


def _require_sr(ring: PresentedRing) -> None:
    if not ring.is_stanley_reisner:
        raise ValidationError("the defining ideal is not a squarefree monomial ideal")


def _require_contains_I(ring: PresentedRing, Q: MonomialPrime) -> Ideal:
    Qi = Q.to_ideal(ring.ambient)
    if not ideal_leq(ring.defining, Qi):
        raise ValidationError(f"{Q.label()} does not contain the defining ideal")
    return Qi


def core_closed_form(ring: PresentedRing, Q: MonomialPrime) -> Ideal:
    """Sum of the minimal primes of I contained in Q."""
    _require_sr(ring)
    _require_contains_I(ring, Q)
    inside = [P for P in minimal_primes_squarefree(ring.defining) if P.variables <= Q.variables]
    names = frozenset().union(*(P.variables for P in inside)) if inside else frozenset()
    return ring.normalize(MonomialPrime(names).to_ideal(ring.ambient))


def contraction_closed_form(ring: PresentedRing, Q: MonomialPrime, e) -> Ideal:
    """A_e(Q) = Q^[q] + C(Q) at a monomial prime Q of a Stanley–Reisner ring."""
    Qi = _require_contains_I(ring, Q)
    level = FrobeniusLevel.of(ring.ambient, e)
    return ideal_sum(bracket_power(Qi, level), core_closed_form(ring, Q))


def enumerate_monomial_primes(ring: PresentedRing, bound: int = VERTEX_BOUND) -> list[MonomialPrime]:
    """Variable subsets whose ideal contains I (complements of faces), smallest first."""
    _require_sr(ring)
    names = ring.variables
    if len(names) > bound:
        raise ValidationError(f"{len(names)} variables exceeds the bound {bound}")
    supports = [frozenset(names[i] for i, k in enumerate(m) if k) for m in ring.defining.basis().exponents()]
    primes = []
    for size in range(len(names) + 1):
        for combo in combinations(names, size):
            A = frozenset(combo)
            if all(A & s for s in supports):
                primes.append(MonomialPrime(A))
    return sorted(primes)


def sums_of_minimal_primes(ring: PresentedRing) -> set[MonomialPrime]:
    _require_sr(ring)
    mins = sorted(minimal_primes_squarefree(ring.defining))
    sums: set[MonomialPrime] = set()
    for size in range(1, len(mins) + 1):
        for combo in combinations(mins, size):
            sums.add(MonomialPrime(frozenset().union(*(P.variables for P in combo))))
    return sums


@dataclass
class AtlasGraph:
    """Edges Q -> C(Q) on the monomial primes containing I."""

    nodes: list[MonomialPrime]
    edges: dict[MonomialPrime, MonomialPrime | None]
    agreements: dict[MonomialPrime, bool]
    certifications: dict[MonomialPrime, str] = field(default_factory=dict)

    def image(self) -> set[MonomialPrime]:
        return {t for t in self.edges.values() if t is not None}

    def fixed_points(self) -> list[MonomialPrime]:
        return [Q for Q in self.nodes if self.edges.get(Q) == Q]

    def all_agree(self) -> bool:
        return all(self.agreements.values())

    def is_idempotent_on_image(self) -> bool:
        return all(self.edges.get(P) == P for P in self.image())

    def preserves_containment(self) -> bool:
        for Q1 in self.nodes:
            for Q2 in self.nodes:
                if Q1.variables <= Q2.variables:
                    a, b = self.edges.get(Q1), self.edges.get(Q2)
                    if a is None or b is None or not a.variables <= b.variables:
                        return False
        return True

    def to_dot(self, name: str = "atlas") -> str:
        lines = [f"digraph {name} {{"]
        for Q in self.nodes:
            shape = "doublecircle" if self.edges.get(Q) == Q else "ellipse"
            lines.append(f'  "{Q.label()}" [shape={shape}];')
        for Q in self.nodes:
            target = self.edges.get(Q)
            if target is not None:
                lines.append(f'  "{Q.label()}" -> "{target.label()}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def core_map_atlas(
    ring: PresentedRing,
    e_max: int = DEFAULT_E_MAX,
    window: int = DEFAULT_WINDOW,
    *,
    strict: bool = False,
) -> AtlasGraph:
    """Computed core and closed form at every monomial prime; ``strict`` raises on disagreement."""
    from models.cartier import cartier_core

    nodes = enumerate_monomial_primes(ring)
    edges: dict[MonomialPrime, MonomialPrime | None] = {}
    agreements: dict[MonomialPrime, bool] = {}
    certs: dict[MonomialPrime, str] = {}
    for Q in nodes:
        closed = core_closed_form(ring, Q)
        report = cartier_core(ring, Q.to_ideal(ring.ambient), e_max, window)
        agree = ideal_equal(closed, report.core)
        agreements[Q] = agree
        certs[Q] = report.certification_label()
        edges[Q] = MonomialPrime.from_ideal(report.core)
        if not agree:
            LOG.warning("core at %s disagrees with the closed form", Q.label())
            if strict:
                raise EngineInvariantError(f"core at {Q.label()} disagrees with the closed form")
    LOG.info("atlas over %d monomial primes, image size %d", len(nodes), len({t for t in edges.values() if t}))
    return AtlasGraph(nodes, edges, agreements, certs)


# -------------------- corpus generation --------------------

def _antichains(subsets: list[frozenset[str]]) -> Iterable[list[frozenset[str]]]:
    def grow(start: int, chosen: list[frozenset[str]]):
        if chosen:
            yield list(chosen)
        for i in range(start, len(subsets)):
            S = subsets[i]
            if any(S <= T or T <= S for T in chosen):
                continue
            chosen.append(S)
            yield from grow(i + 1, chosen)
            chosen.pop()

    yield from grow(0, [])


def enumerate_complexes(vertices: Sequence[str]) -> list[SimplicialComplex]:
    """Every complex on the declared vertex set, one per isomorphism class."""
    vertices = tuple(vertices)
    subsets = [frozenset(c) for k in range(len(vertices) + 1) for c in combinations(vertices, k)]
    seen: dict[tuple, SimplicialComplex] = {}
    for facets in _antichains(subsets):
        K = SimplicialComplex(vertices, frozenset(facets))
        seen.setdefault(K.canonical_form(), K)
    return [seen[k] for k in sorted(seen)]


def random_complex(vertices: Sequence[str], rng: random.Random, *, density: float = 0.5) -> SimplicialComplex:
    vertices = tuple(vertices)
    candidates = [frozenset(c) for k in range(1, len(vertices) + 1) for c in combinations(vertices, k)]
    faces = [S for S in candidates if rng.random() < density / max(1, len(S) - 1)]
    if not faces:
        faces = [frozenset({rng.choice(vertices)})]
    return SimplicialComplex.from_faces(faces, vertices)
