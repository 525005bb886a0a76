"""
Changes of ring that the core commutes with: homogenization (t_h = 1 undoes
it), adjoining a polynomial variable, and shrinking I to the minimal primes
that sit inside a monomial prime Q.
"""

from __future__ import annotations

from dataclasses import dataclass

from config import ADJOINED_VARIABLE, DEFAULT_E_MAX, DEFAULT_WINDOW, HOMOGENIZING_VARIABLE
from models.errors import ValidationError
from models.ideal_engine import (
    Ideal,
    MonomialPrime,
    PresentedRing,
    eliminate,
    ideal_equal,
    ideal_leq,
    ideal_sum,
    intersect_all,
    minimal_primes_squarefree,
)
from models.polyring import Polynomial, PolynomialRing, TermOrder, total_degree, transport
from utils.app_logging import get_logger

LOG = get_logger("transforms")


@dataclass(frozen=True)
class HomogenizationContext:
    """S -> S[t_h] with t_h appended last; every variable has degree 1."""

    source: PolynomialRing
    target: PolynomialRing
    variable: str

    @classmethod
    def for_ring(cls, source: PolynomialRing, name: str = HOMOGENIZING_VARIABLE) -> "HomogenizationContext":
        var = source.fresh_name(name)
        return cls(source, source.extended([var], order=TermOrder()), var)


def homogenize_element(f: Polynomial, ctx: HomogenizationContext) -> Polynomial:
    """f^h = t^deg(f) f(x/t)."""
    if f.ring != ctx.source.sympy_ring:
        f = transport(f, ctx.source)
    d = total_degree(f)
    return ctx.target.from_terms({m + (d - sum(m),): int(c) for m, c in f.items()})


def dehomogenize_element(f: Polynomial, ctx: HomogenizationContext) -> Polynomial:
    if f.ring != ctx.target.sympy_ring:
        raise ValidationError("dehomogenize_element expects an element of the homogenized ring")
    terms: dict[tuple[int, ...], int] = {}
    for m, c in f.items():
        key = m[:-1]
        terms[key] = terms.get(key, 0) + int(c)
    return ctx.source.from_terms(terms)


def homogenize_ideal(J: Ideal, ctx: HomogenizationContext) -> Ideal:
    """J^h from a degree-compatible reduced basis of J."""
    if J.ambient != ctx.source:
        raise ValidationError("ideal does not live in the source ring of the homogenization")
    graded_ambient = ctx.source if ctx.source.order.is_graded else ctx.source.with_order(TermOrder())
    if graded_ambient is not ctx.source:
        J = Ideal(graded_ambient, [transport(g, graded_ambient) for g in J.generators])
    return Ideal(ctx.target, [homogenize_element(g, ctx) for g in J.basis()])


def dehomogenize_ideal(J: Ideal, ctx: HomogenizationContext) -> Ideal:
    if J.ambient != ctx.target:
        raise ValidationError("ideal does not live in the homogenized ring")
    return Ideal(ctx.source, [dehomogenize_element(g, ctx) for g in J.generators])


def homogenize_ring(ring: PresentedRing, ctx: HomogenizationContext) -> PresentedRing:
    """S[t]/I^h; for homogeneous I this is R[t]."""
    if ring.graded:
        I_h = extend_ideal(ring.defining, ctx.target)
    else:
        I_h = homogenize_ideal(ring.defining, ctx)
    return PresentedRing(ctx.target, I_h)


def extend_ideal(J: Ideal, target: PolynomialRing) -> Ideal:
    """J S' for a polynomial ring S' carrying the variables of J's ring."""
    return Ideal(target, [transport(g, target) for g in J.generators])


def _pull_back(report, ring: PresentedRing, ctx: HomogenizationContext, e_max: int, prefix: str):
    from models.cartier import Certification, _compatible_up_to

    down = lambda K: ring.normalize(dehomogenize_ideal(K, ctx))
    inner = report.certification
    report.core = down(report.core)
    report.contractions = {e: down(A) for e, A in report.contractions.items()}
    report.partials = {e: down(B) for e, B in report.partials.items()}
    if report.upper_bound is not None:
        report.upper_bound = down(report.upper_bound)
    report.method = f"{prefix}:{report.method}"
    if inner is not Certification.HEURISTIC and _compatible_up_to(ring, report.core, e_max, None):
        report.certification = Certification.COMPATIBLE_TO_E
    else:
        report.certification = Certification.HEURISTIC
        report.warnings.append("dehomogenized core could not be certified in the original ring")
    return report


def core_via_homogenization(ring: PresentedRing, J: Ideal, e_max: int = DEFAULT_E_MAX,
                            window: int = DEFAULT_WINDOW):
    """C_R(J) = δ(C_{R[t]}(J^h)) for homogeneous I."""
    from models.cartier import cartier_core, is_F_pure

    if not ring.graded:
        raise ValidationError("core_via_homogenization needs a homogeneous defining ideal")
    J = ring.normalize(J)
    ctx = HomogenizationContext.for_ring(ring.ambient)
    ring_h = homogenize_ring(ring, ctx)
    J_h = homogenize_ideal(J, ctx)
    LOG.debug("homogenized target into %s", ctx.target.describe())
    report = cartier_core(ring_h, J_h, e_max, window, homogenize=False)
    report = _pull_back(report, ring, ctx, e_max, "homogenized")
    report.f_pure = is_F_pure(ring)
    return report


def experimental_core_via_homogenized_ring(ring: PresentedRing, J: Ideal, e_max: int = DEFAULT_E_MAX,
                                           window: int = DEFAULT_WINDOW):
    """δ(C_{S[t]/I^h}(J^h)) for an arbitrary I; agreement with C_R(J) is unproven."""
    from models.cartier import cartier_core, is_F_pure

    J = ring.normalize(J)
    ctx = HomogenizationContext.for_ring(ring.ambient)
    ring_h = homogenize_ring(ring, ctx)
    report = cartier_core(ring_h, homogenize_ideal(J, ctx), e_max, window, homogenize=False)
    report = _pull_back(report, ring, ctx, e_max, "experimental-homogenized")
    report.f_pure = is_F_pure(ring)
    report.warnings.append("experimental: homogenized defining ideal")
    return report


# -------------------- adjoining a variable --------------------

def adjoin_variable(ring: PresentedRing, name: str = ADJOINED_VARIABLE) -> PresentedRing:
    var = ring.ambient.fresh_name(name)
    target = ring.ambient.extended([var], order=ring.ambient.order)
    return PresentedRing(target, extend_ideal(ring.defining, target))


@dataclass(frozen=True)
class AdjoinCheck:
    extended_equal: bool
    contraction_equal: bool
    core_R: Ideal
    core_x: Ideal

    def __bool__(self) -> bool:
        return self.extended_equal and self.contraction_equal


def adjoin_variable_core_check(ring: PresentedRing, J: Ideal, J_prime: Ideal, e_max: int = DEFAULT_E_MAX,
                               window: int = DEFAULT_WINDOW) -> AdjoinCheck:
    """Checks C_R(J) R[x] = C_{R[x]}(J') and C_{R[x]}(J') ∩ S = C_R(J) for JR[x] ⊆ J' ⊆ JR[x] + <x>."""
    from models.cartier import cartier_core

    ring_x_ambient = J_prime.ambient
    extra = [v for v in ring_x_ambient.variables if v not in ring.variables]
    if len(extra) != 1 or len(ring_x_ambient.variables) != len(ring.variables) + 1:
        raise ValidationError("J' must live in R[x] for exactly one new variable x")
    x = extra[0]
    ring_x = PresentedRing(ring_x_ambient, extend_ideal(ring.defining, ring_x_ambient))

    J = ring.normalize(J)
    J_ext = extend_ideal(J, ring_x_ambient)
    J_prime = ring_x.normalize(J_prime)
    upper = ideal_sum(J_ext, Ideal.of_variables(ring_x_ambient, [x]))
    if not (ideal_leq(J_ext, J_prime) and ideal_leq(J_prime, upper)):
        raise ValidationError("J' violates JR[x] ⊆ J' ⊆ JR[x] + <x>")

    core_R = cartier_core(ring, J, e_max, window).core
    core_x = cartier_core(ring_x, J_prime, e_max, window).core
    extended_equal = ideal_equal(extend_ideal(core_R, ring_x_ambient), core_x)
    contraction_equal = ideal_equal(eliminate(core_x, [x], ring.ambient), core_R)
    if not (extended_equal and contraction_equal):
        LOG.warning("adjoin-variable check failed (extended=%s, contracted=%s)", extended_equal, contraction_equal)
    return AdjoinCheck(extended_equal, contraction_equal, core_R, core_x)


# -------------------- restriction to contained minimal primes --------------------

def restrict_to_contained_minimal_primes(ring: PresentedRing, Q: MonomialPrime) -> PresentedRing:
    """S/I' with I' the intersection of the minimal primes of I inside Q."""
    if not ring.is_stanley_reisner:
        raise ValidationError("the defining ideal is not a squarefree monomial ideal")
    if not ideal_leq(ring.defining, Q.to_ideal(ring.ambient)):
        raise ValidationError(f"{Q.label()} does not contain the defining ideal")
    inside = sorted(P for P in minimal_primes_squarefree(ring.defining) if P.variables <= Q.variables)
    assert inside, "a prime containing I contains a minimal prime of I"
    I_prime = intersect_all([P.to_ideal(ring.ambient) for P in inside])
    return PresentedRing(ring.ambient, I_prime)
