"""
Cartier contractions and cores for R = S/I, computed entirely in S:

    A_e(J) = J^[q] : (I^[q] : I)        (lifts containing I)
    C(J)   = intersection of A_e(J) over e > 0

plus the classifiers built on them (Fedder, Glassbrenner, splitting prime,
strong F-regularity) and the variants for the pair algebra C^{a^t}.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

from config import DEFAULT_E_MAX, DEFAULT_WINDOW
from models import frobenius
from models.errors import DegreeCapExceeded, EngineInvariantError, ValidationError
from models.frobenius import FrobeniusLevel, bracket_power, fedder_multiplier, frobenius_root, trace_map
from models.ideal_engine import (
    Ideal,
    MonomialPrime,
    PresentedRing,
    colon,
    contains,
    degree_truncation,
    ideal_equal,
    ideal_leq,
    ideal_sum,
    intersect,
    is_homogeneous_ideal,
    minimal_primes_squarefree,
    normal_form,
    power,
    product,
)
from models.polyring import Polynomial, frobenius_power_element, poly_arith, total_degree
from utils.app_logging import get_logger

LOG = get_logger("cartier")


class Certification(str, Enum):
    CLOSED_FORM_EXACT = "closed_form_exact"
    COMPATIBLE_TO_E = "compatible_to_E"
    HEURISTIC = "heuristic"


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


# -------------------- types --------------------

@dataclass(frozen=True)
class MultiplierMap:
    """phi = Phi_e o F^e_*(s) in Hom_R(F^e_* R, R), with s in I^[q] : I."""

    ring: PresentedRing
    s: Polynomial
    level: FrobeniusLevel

    def __post_init__(self):
        if self.s.ring != self.ring.ambient.sympy_ring:
            raise ValidationError("multiplier does not live in the ambient ring")
        if not contains(fedder_multiplier(self.ring, self.level), self.s):
            raise ValidationError(f"{self.s} is not in I^[{self.level.q}] : I")

    @classmethod
    def of(cls, ring: PresentedRing, s: Polynomial, e: int) -> "MultiplierMap":
        return cls(ring, s, FrobeniusLevel.of(ring.ambient, e))

    def evaluate(self, r: Polynomial) -> Polynomial:
        """A lift of phi(F^e_* r)."""
        amb = self.ring.ambient
        return trace_map(poly_arith(self.s, r, "mul", cap=amb.degree_cap), self.level, amb)


@dataclass(frozen=True)
class CartierPair:
    """The Cartier subalgebra C^{a^t}: maps of degree e premultiplied by a^ceil(t(q-1))."""

    a: Ideal
    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        object.__setattr__(self, "t", t)
        if t <= 0:
            raise ValidationError(f"t must be positive, got {t}")
        if self.a.is_zero():
            raise ValidationError("the ideal a of a pair must be nonzero")

    def exponent(self, level: FrobeniusLevel) -> int:
        return math.ceil(self.t * (level.q - 1))


@dataclass
class CoreReport:
    core: Ideal
    contractions: dict[int, Ideal]
    partials: dict[int, Ideal]
    stabilized_at: int | None
    certification: Certification
    f_pure: bool
    e_max: int
    method: str = "stabilized"
    upper_bound: Ideal | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def levels_computed(self) -> int:
        return max(self.contractions, default=0)

    def certification_label(self) -> str:
        if self.certification is Certification.COMPATIBLE_TO_E:
            return f"compatible_to_E({self.e_max})"
        return self.certification.value


# -------------------- contractions --------------------

_CONTRACTION_CACHE: dict[tuple, Ideal] = {}
_CONTRACTION_LOCK = threading.Lock()


def _require_contraction_level(ring: PresentedRing, e) -> FrobeniusLevel:
    level = FrobeniusLevel.of(ring.ambient, e)
    if level.e < 1:
        raise ValidationError("contractions are defined for e >= 1")
    return level


def cartier_contraction(ring: PresentedRing, J: Ideal, e) -> Ideal:
    """The lift of A_e(J) = J^[q] : (I^[q] : I)."""
    level = _require_contraction_level(ring, e)
    J = ring.normalize(J)
    key = (ring.key(), J.key(), level.e)
    with _CONTRACTION_LOCK:
        hit = _CONTRACTION_CACHE.get(key)
    if hit is not None:
        return hit
    A = colon(bracket_power(J, level), fedder_multiplier(ring, level))
    with _CONTRACTION_LOCK:
        return _CONTRACTION_CACHE.setdefault(key, A)


def _colon_power(K: Ideal, a: Ideal, n: int) -> Ideal:
    # K : a^n as n successive colons; stops early once K : a = K
    for _ in range(n):
        nxt = colon(K, a)
        if ideal_equal(nxt, K):
            break
        K = nxt
    return K


def pair_contraction(ring: PresentedRing, J: Ideal, pair: CartierPair, e) -> Ideal:
    level = _require_contraction_level(ring, e)
    _check_pair(ring, pair, level.e)
    return _colon_power(cartier_contraction(ring, J, level), pair.a, pair.exponent(level))


def _check_pair(ring: PresentedRing, pair: CartierPair, e_max: int | None = None) -> None:
    if pair.a.ambient != ring.ambient:
        raise ValidationError("pair ideal lives in a different polynomial ring")
    if e_max is None or pair.a.is_unit():
        return
    # every generator of a^n has degree >= n * (least degree of a)
    n = pair.exponent(FrobeniusLevel(ring.p, e_max))
    low = min(total_degree(g) for g in pair.a.basis())
    cap = ring.ambient.degree_cap
    if n * low > cap:
        raise DegreeCapExceeded(n * low, cap, f"a^{n} at e={e_max}")


def contraction_by_evaluation(ring: PresentedRing, J: Ideal, r: Polynomial, e) -> bool:
    """
    Membership r in A_e(J) decided from the maps themselves: phi(F^e_* r) in J
    for phi = Phi_e o F^e_*(s x^a), s over generators of the Fedder multiplier
    and a over [0, q)^n. Exponential in n; meant for small cross-checks.
    """
    from itertools import product as cartesian

    level = _require_contraction_level(ring, e)
    J = ring.normalize(J)
    amb = ring.ambient
    for s in fedder_multiplier(ring, level).basis():
        sr = poly_arith(s, r, "mul", cap=amb.degree_cap)
        for a in cartesian(range(level.q), repeat=amb.ngens):
            image = trace_map(sr * amb.monomial(a), level, amb)
            if not contains(J, image):
                return False
    return True


# -------------------- compatibility --------------------

def is_compatible(ring: PresentedRing, K: Ideal, e, pair: CartierPair | None = None) -> bool:
    """K ⊆ A_e(K), i.e. (I^[q] : I) * K ⊆ K^[q]."""
    level = _require_contraction_level(ring, e)
    K = ring.normalize(K)
    if pair is not None:
        return ideal_leq(K, pair_contraction(ring, K, pair, level))
    if K.is_unit():
        return True
    target = bracket_power(K, level)
    U = fedder_multiplier(ring, level)
    cap = ring.ambient.degree_cap
    B = target.basis()
    for u in U.basis():
        for k in K.basis():
            if normal_form(poly_arith(u, k, "mul", cap=cap), B):
                return False
    return True


def _compatible_up_to(ring: PresentedRing, K: Ideal, e_max: int, pair: CartierPair | None) -> bool:
    return all(is_compatible(ring, K, e, pair) for e in range(1, e_max + 1))


# -------------------- multipliers --------------------

def multiplier_compose(f: MultiplierMap, g: MultiplierMap) -> MultiplierMap:
    """(s, e) * (t, d) = (s^(p^d) * t, e + d)."""
    if f.ring is not g.ring and f.ring.key() != g.ring.key():
        raise ValidationError("multipliers over different rings")
    ring = f.ring
    amb = ring.ambient
    s_pow = frobenius_power_element(f.s, g.level.e, amb)
    composed = poly_arith(s_pow, g.s, "mul", cap=amb.degree_cap)
    level = FrobeniusLevel(ring.p, f.level.e + g.level.e)
    if not contains(fedder_multiplier(ring, level), composed):
        raise EngineInvariantError(
            f"composition of degree {f.level.e} and {g.level.e} multipliers left I^[q] : I at q={level.q}"
        )
    return MultiplierMap(ring, composed, level)


# -------------------- F-purity --------------------

def f_pure_locus(ring: PresentedRing) -> Ideal:
    """Defining ideal (up to radical) of the non-F-pure locus: root(I^[p] : I) + I."""
    return ideal_sum(frobenius_root(fedder_multiplier(ring, 1), 1), ring.defining)


def is_F_pure(ring: PresentedRing) -> bool:
    return f_pure_locus(ring).is_unit()


def is_F_pure_at_prime(ring: PresentedRing, P: Ideal) -> bool:
    """F-purity of R_P: P does not contain the non-F-pure locus."""
    P = ring.normalize(P)
    return not ideal_leq(f_pure_locus(ring), P)


def pair_is_F_pure(ring: PresentedRing, pair: CartierPair, e_max: int = DEFAULT_E_MAX) -> bool:
    _check_pair(ring, pair, e_max)
    for e in range(1, e_max + 1):
        level = FrobeniusLevel(ring.p, e)
        maps = product(fedder_multiplier(ring, level), power(pair.a, pair.exponent(level)))
        if ideal_sum(frobenius_root(maps, level), ring.defining).is_unit():
            return True
    return False


def _require_graded(ring: PresentedRing, what: str) -> None:
    if not ring.graded:
        raise ValidationError(f"{what} needs a homogeneous defining ideal")


def is_F_pure_along(ring: PresentedRing, c: Polynomial, e_max: int = DEFAULT_E_MAX) -> bool:
    """Some e <= e_max has c not in m^[q] : (I^[q] : I). False means 'not up to e_max'."""
    _require_graded(ring, "is_F_pure_along")
    m = ring.maximal_ideal()
    cap = ring.ambient.degree_cap
    for e in range(1, e_max + 1):
        level = FrobeniusLevel(ring.p, e)
        target = bracket_power(m, level)
        for u in fedder_multiplier(ring, level).basis():
            if not contains(target, poly_arith(c, u, "mul", cap=cap)):
                LOG.debug("split along c at level e=%d", e)
                return True
    return False


# -------------------- cores --------------------

def _graded_candidate(ring: PresentedRing, window: list[Ideal]) -> Ideal:
    """
    I + the basis elements of the newest partial intersection of degree <= D,
    where D is the largest degree up to which every ideal in ``window`` agrees.
    """
    degrees = sorted({total_degree(g) for B in window for g in B.basis()})
    D = -1
    first = window[0]
    for d in degrees:
        head = degree_truncation(first, d)
        if all(ideal_equal(head, degree_truncation(B, d)) for B in window[1:]):
            D = d
        else:
            break
    return ring.normalize(degree_truncation(window[-1], D))


def _enlarge_compatible(
    ring: PresentedRing, K: Ideal, B: Ideal, e_max: int, pair: CartierPair | None
) -> Ideal:
    """
    Grow a compatible K inside B: first by the largest degree truncation of B
    that keeps K compatible up to e_max, then by single basis elements of B.
    """
    basis = sorted(B.basis(), key=lambda g: (total_degree(g), str(g)))
    for d in sorted({total_degree(g) for g in basis}, reverse=True):
        T = ring.normalize(ideal_sum(K, degree_truncation(B, d)))
        if ideal_leq(T, K):
            break
        if _compatible_up_to(ring, T, e_max, pair):
            LOG.debug("refined core grows by B truncated at degree %d", d)
            K = T
            break
    for g in basis:
        if contains(K, g):
            continue
        T = ring.normalize(ideal_sum(K, Ideal(K.ambient, [g])))
        if _compatible_up_to(ring, T, e_max, pair):
            LOG.debug("refined core grows by %s", g)
            K = T
    return K


def _monomial_prime_target(ring: PresentedRing, J: Ideal) -> MonomialPrime | None:
    if not ring.is_stanley_reisner:
        return None
    return MonomialPrime.from_ideal(J)


def _run_core(
    ring: PresentedRing,
    J: Ideal,
    e_max: int,
    window: int,
    contract: Callable[[int], Ideal],
    f_pure: bool,
    pair: CartierPair | None,
) -> CoreReport:
    refine = f_pure and ring.graded and is_homogeneous_ideal(J)
    contractions: dict[int, Ideal] = {}
    partials: dict[int, Ideal] = {}
    seq: list[Ideal] = [J]
    candidates: list[Ideal] = []
    B: Ideal | None = None
    core: Ideal | None = None
    stabilized_at = None
    method = "upper_bound"

    for e in range(1, e_max + 1):
        A = contract(e)
        contractions[e] = A
        B = A if B is None else intersect(B, A)
        partials[e] = B
        LOG.debug("level e=%d: contraction %d gens, partial %d gens", e, len(A.basis()), len(B.basis()))
        if e >= window and all(ideal_equal(partials[k], B) for k in range(e - window + 1, e)):
            core, stabilized_at, method = B, e, "stabilized"
            break
        if refine:
            seq.append(B)
            if len(seq) >= window:
                K = _graded_candidate(ring, seq[-window:])
                candidates.append(K)
                recent = candidates[-window:]
                if (
                    len(recent) == window
                    and all(ideal_equal(K, other) for other in recent[:-1])
                    and _compatible_up_to(ring, K, e_max, pair)
                ):
                    # K is only a lower bound for the core
                    core, method = _enlarge_compatible(ring, K, B, e_max, pair), "graded_refinement"
                    LOG.debug("graded refinement settled at level e=%d", e)
                    break

    assert B is not None
    if core is None:
        core = B
    report = CoreReport(
        core=core,
        contractions=contractions,
        partials=partials,
        stabilized_at=stabilized_at,
        certification=Certification.HEURISTIC,
        f_pure=f_pure,
        e_max=e_max,
        method=method,
        upper_bound=B,
    )

    target = _monomial_prime_target(ring, J) if pair is None else None
    if target is not None:
        from models.stanley_reisner import core_closed_form

        closed = core_closed_form(ring, target)
        if ideal_equal(closed, core):
            report.certification = Certification.CLOSED_FORM_EXACT
            return report
        report.warnings.append(f"computed core disagrees with the closed form for {target.label()}; left heuristic")
        LOG.warning("closed form disagreement at %s", target.label())
        return report
    if method == "graded_refinement" or _compatible_up_to(ring, core, e_max, pair):
        report.certification = Certification.COMPATIBLE_TO_E
    elif stabilized_at is not None:
        report.warnings.append(
            f"partials stabilized at e={stabilized_at} but the core is not compatible at every level up to e_max={e_max}"
        )
        LOG.warning("heuristic core: stabilized at e=%d but not compatible", stabilized_at)
    else:
        report.warnings.append(f"no stabilization within e_max={e_max}; core is the upper bound B_{e_max}")
        LOG.warning("heuristic core: no stabilization within e_max=%d", e_max)
    return report


def _check_core_args(e_max: int, window: int) -> None:
    if e_max < 2:
        raise ValidationError(f"e_max must be at least 2, got {e_max}")
    if window < 1:
        raise ValidationError(f"window must be at least 1, got {window}")


def cartier_core(
    ring: PresentedRing,
    J: Ideal,
    e_max: int = DEFAULT_E_MAX,
    window: int = DEFAULT_WINDOW,
    *,
    homogenize: bool = True,
) -> CoreReport:
    """
    C(J) as the intersection of the contractions, certified as
    closed_form_exact > compatible_to_E > heuristic.

    Over a graded ring a non-homogeneous J is computed as the dehomogenization
    of the core of J^h in R[t_h].
    """
    _check_core_args(e_max, window)
    J = ring.normalize(J)
    if homogenize and ring.graded and not is_homogeneous_ideal(J):
        from models.transforms import core_via_homogenization

        return core_via_homogenization(ring, J, e_max, window)
    f_pure = is_F_pure(ring)
    return _run_core(ring, J, e_max, window, lambda e: cartier_contraction(ring, J, e), f_pure, None)


def pair_core(
    ring: PresentedRing,
    J: Ideal,
    pair: CartierPair,
    e_max: int = DEFAULT_E_MAX,
    window: int = DEFAULT_WINDOW,
) -> CoreReport:
    _check_core_args(e_max, window)
    _check_pair(ring, pair, e_max)
    J = ring.normalize(J)
    f_pure = pair_is_F_pure(ring, pair, e_max)
    report = _run_core(ring, J, e_max, window, lambda e: pair_contraction(ring, J, pair, e), f_pure, pair)
    if not f_pure:
        report.warnings.append(f"pair is not F-pure up to e_max={e_max}; the core need not lie inside J")
    return report


def splitting_prime(ring: PresentedRing, e_max: int = DEFAULT_E_MAX, window: int = DEFAULT_WINDOW) -> CoreReport:
    _require_graded(ring, "splitting_prime")
    return cartier_core(ring, ring.maximal_ideal(), e_max, window)


# -------------------- strong F-regularity --------------------

def in_some_minimal_prime(ring: PresentedRing, K: Ideal, *, reduced: bool) -> bool:
    """
    Whether K lies in a minimal prime of I. Stanley–Reisner rings use the
    combinatorial minimal primes; otherwise, for reduced R, K lies in a minimal
    prime exactly when its annihilator I : K is nonzero in R.
    """
    K = ring.normalize(K)
    if K.is_unit():
        return False
    if ideal_equal(K, ring.defining):
        return True
    if ring.is_stanley_reisner:
        return any(ideal_leq(K, P.to_ideal(ring.ambient)) for P in minimal_primes_squarefree(ring.defining))
    if ring.defining.is_zero():
        return K.is_zero()
    if not reduced:
        raise ValidationError("minimal primes are unavailable for a non-reduced, non-monomial defining ideal")
    return not ideal_equal(colon(ring.defining, K), ring.defining)


def classify_strong_F_regularity(
    ring: PresentedRing, e_max: int = DEFAULT_E_MAX, window: int = DEFAULT_WINDOW
) -> tuple[Verdict, CoreReport]:
    _require_graded(ring, "is_strongly_F_regular")
    report = splitting_prime(ring, e_max, window)
    reduced = report.f_pure
    if report.upper_bound is not None and in_some_minimal_prime(ring, report.upper_bound, reduced=reduced):
        return Verdict.YES, report
    if report.certification is Certification.HEURISTIC:
        return Verdict.UNKNOWN, report
    if not in_some_minimal_prime(ring, report.core, reduced=reduced):
        return Verdict.NO, report
    if report.method != "graded_refinement" or report.certification is Certification.CLOSED_FORM_EXACT:
        return Verdict.YES, report
    # a refined core is a lower bound, so containment alone says nothing
    if _split_along_regular_locus(ring, e_max):
        return Verdict.YES, report
    report.warnings.append("refined splitting prime is only a lower bound; strong F-regularity left open")
    return Verdict.UNKNOWN, report


def _split_along_regular_locus(ring: PresentedRing, e_max: int) -> bool:
    """
    Whether the F-pure graded ring R is split along some c outside every minimal
    prime with R_c regular; such a c makes R strongly F-regular. Candidates for c
    are the partial derivatives of a hypersurface equation (the Jacobian criterion).
    Polynomial rings are regular.
    """
    I = ring.defining
    if I.is_zero():
        return True
    basis = list(I.basis())
    if len(basis) != 1:
        return False
    f = basis[0]
    amb = ring.ambient
    for i in range(amb.ngens):
        c = f.diff(amb.gens()[i])
        if not c or in_some_minimal_prime(ring, Ideal(amb, [c]), reduced=True):
            continue
        if is_F_pure_along(ring, c, e_max):
            LOG.debug("split along the partial derivative %s", c)
            return True
    return False


def is_strongly_F_regular(ring: PresentedRing, e_max: int = DEFAULT_E_MAX, window: int = DEFAULT_WINDOW) -> Verdict:
    return classify_strong_F_regularity(ring, e_max, window)[0]


def clear_caches(ring: PresentedRing | None = None) -> None:
    """Drop memoized contractions and multipliers, all of them or only those of ``ring``."""
    with _CONTRACTION_LOCK:
        if ring is None:
            _CONTRACTION_CACHE.clear()
        else:
            for key in [k for k in _CONTRACTION_CACHE if k[0] == ring.key()]:
                del _CONTRACTION_CACHE[key]
    frobenius.clear_caches(ring)
