from fractions import Fraction

import pytest

from conftest import ideal, make_ring
from models.cartier import (
    CartierPair,
    Certification,
    CoreReport,
    MultiplierMap,
    Verdict,
    cartier_contraction,
    cartier_core,
    classify_strong_F_regularity,
    contraction_by_evaluation,
    f_pure_locus,
    in_some_minimal_prime,
    is_compatible,
    is_F_pure,
    is_F_pure_along,
    is_F_pure_at_prime,
    is_strongly_F_regular,
    multiplier_compose,
    pair_contraction,
    pair_core,
    pair_is_F_pure,
    splitting_prime,
)
from models.errors import DegreeCapExceeded, ValidationError
from models.frobenius import FrobeniusLevel, fedder_multiplier
from models.ideal_engine import Ideal, colon, contains, ideal_equal, ideal_leq, intersect_all
from models.polyring import total_degree


# -------------------- non-reduced regression --------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_double_point_core_is_not_radical(p):
    R = make_ring(p, "x", ["x^2"])
    J = ideal(R, "x^2")
    for e in range(1, 5):
        assert ideal_equal(cartier_contraction(R, J, e), J)
    report = cartier_core(R, J)
    assert ideal_equal(report.core, J)
    assert report.certification is not Certification.HEURISTIC
    assert not is_F_pure(R)
    assert ideal_equal(f_pure_locus(R), ideal(R, "x"))


# -------------------- F-purity --------------------

def test_xy_is_f_pure(xy_ring):
    assert is_F_pure(xy_ring)
    assert f_pure_locus(xy_ring).is_unit()
    assert is_F_pure_at_prime(xy_ring, ideal(xy_ring, "x", "y"))


def test_f_pure_at_prime_of_cusp():
    R = make_ring(2, "x,y", ["y^2 - x^3"])
    assert not is_F_pure(R)
    assert not is_F_pure_at_prime(R, ideal(R, "x", "y"))
    assert is_F_pure_at_prime(R, ideal(R, "y^2 - x^3"))


def test_f_pure_along():
    R = make_ring(2, "x,y")
    assert is_F_pure_along(R, R.ambient.one())
    assert is_F_pure_along(R, R.ambient.gen("x"), e_max=2)
    xy = make_ring(2, "x,y", ["x*y"])
    assert not is_F_pure_along(xy, xy.ambient.gen("x"), e_max=3)
    with pytest.raises(ValidationError):
        is_F_pure_along(make_ring(2, "x,y", ["x - y^2"]), R.ambient.one())


# -------------------- contractions --------------------

def test_contraction_needs_positive_level(xy_ring):
    with pytest.raises(ValidationError):
        cartier_contraction(xy_ring, ideal(xy_ring, "x"), 0)


def test_contraction_of_regular_ring_is_bracket_power():
    R = make_ring(3, "x,y")
    J = ideal(R, "x + y^2")
    assert ideal_equal(cartier_contraction(R, J, 1), ideal(R, "x^3 + y^6"))


@pytest.mark.parametrize("p,gens,target,e", [
    (2, ["x*y"], ["x"], 1),
    (2, ["x*y"], ["x", "y"], 2),
    (3, ["x*y - z^2"], ["x", "z"], 1),
    (2, [], ["x + y"], 1),
])
def test_contraction_matches_evaluation(p, gens, target, e):
    R = make_ring(p, "x,y,z", gens)
    J = ideal(R, *target)
    A = cartier_contraction(R, J, e)
    amb = R.ambient
    samples = list(A.basis()) + [amb.gen(v) for v in amb.variables] + [amb.one()]
    for r in samples:
        assert contraction_by_evaluation(R, J, r, e) == contains(A, r)


# -------------------- compatibility and multipliers --------------------

def test_compatibility(xy_ring):
    assert is_compatible(xy_ring, ideal(xy_ring, "x"), 1)
    assert is_compatible(xy_ring, xy_ring.maximal_ideal(), 2)
    assert not is_compatible(xy_ring, ideal(xy_ring, "x + y"), 1)
    assert is_compatible(xy_ring, Ideal.unit(xy_ring.ambient), 1)


def test_multiplier_membership_is_checked(xy_ring):
    MultiplierMap.of(xy_ring, xy_ring.ambient.gen("x") * xy_ring.ambient.gen("y"), 1)
    with pytest.raises(ValidationError):
        MultiplierMap.of(xy_ring, xy_ring.ambient.gen("x"), 1)


def test_composition_evaluates_as_composite(a1_ring, rng):
    amb = a1_ring.ambient
    pools = {e: list(fedder_multiplier(a1_ring, e).basis()) for e in (1, 2)}
    for _ in range(25):
        e, d = rng.choice([(1, 1), (1, 2), (2, 1)])
        f = MultiplierMap.of(a1_ring, rng.choice(pools[e]) * amb.gen(rng.choice("xyz")), e)
        g = MultiplierMap.of(a1_ring, rng.choice(pools[d]), d)
        h = multiplier_compose(f, g)
        assert h.level == FrobeniusLevel(3, e + d)
        r = amb.monomial(tuple(rng.randrange(40) for _ in range(3)))
        assert f.evaluate(g.evaluate(r)) == h.evaluate(r)


# -------------------- cores --------------------

def test_core_of_minimal_prime_is_fixed(xy_ring):
    report = cartier_core(xy_ring, ideal(xy_ring, "x"))
    assert ideal_equal(report.core, ideal(xy_ring, "x"))
    assert report.certification is Certification.CLOSED_FORM_EXACT
    assert report.stabilized_at == 2


def test_core_arguments_are_validated(xy_ring):
    with pytest.raises(ValidationError):
        cartier_core(xy_ring, ideal(xy_ring, "x"), e_max=1)
    with pytest.raises(ValidationError):
        cartier_core(xy_ring, ideal(xy_ring, "x"), window=0)


def test_core_with_extra_variable_needs_refinement():
    R = make_ring(2, "x,y,z", ["x*y"])
    report = cartier_core(R, ideal(R, "x", "z"))
    assert ideal_equal(report.core, ideal(R, "x"))
    assert report.method == "graded_refinement"
    assert report.certification is Certification.CLOSED_FORM_EXACT
    assert ideal_equal(report.upper_bound, ideal(R, "x", "z^8"))


def test_partials_descend_and_bound_the_core(a1_ring):
    report = cartier_core(a1_ring, a1_ring.maximal_ideal(), e_max=2)
    levels = sorted(report.partials)
    for a, b in zip(levels, levels[1:]):
        assert ideal_leq(report.partials[b], report.partials[a])
    assert ideal_equal(report.partials[levels[-1]], intersect_all([report.contractions[e] for e in levels]))
    assert ideal_leq(report.core, report.upper_bound)


def test_heuristic_when_nothing_settles():
    R = make_ring(2, "x,y", ["x - y^2"])
    report = cartier_core(R, ideal(R, "y"), e_max=2)
    assert report.certification is Certification.HEURISTIC
    assert report.stabilized_at is None
    assert "no stabilization" in report.warnings[0]
    assert ideal_equal(report.core, report.upper_bound)


def test_refined_core_keeps_compatible_generators():
    R = make_ring(2, "a,b,c,w", ["a*b*c"])
    ab = ideal(R, "a*b")
    assert all(is_compatible(R, ab, e) for e in range(1, 5))
    report = cartier_core(R, ideal(R, "a*b", "w"))
    assert report.method == "graded_refinement"
    assert report.certification is Certification.COMPATIBLE_TO_E
    assert ideal_leq(ab, report.core)
    assert ideal_equal(report.core, ab)
    assert ideal_equal(report.upper_bound, ideal(R, "a*b", "w^4"))


def test_closed_form_disagreement_leaves_core_heuristic(xy_ring, monkeypatch):
    from models import stanley_reisner

    monkeypatch.setattr(stanley_reisner, "core_closed_form", lambda ring, Q: Ideal.unit(ring.ambient))
    report = cartier_core(xy_ring, ideal(xy_ring, "x"))
    assert report.certification is Certification.HEURISTIC
    assert any("closed form" in w for w in report.warnings)


def test_stabilized_but_incompatible_core_is_heuristic(monkeypatch):
    from models import cartier

    R = make_ring(2, "x", ["x^2"])
    monkeypatch.setattr(cartier, "_compatible_up_to", lambda *args: False)
    report = cartier_core(R, ideal(R, "x^2"))
    assert report.certification is Certification.HEURISTIC
    assert report.stabilized_at == 2
    assert "stabilized at e=2" in report.warnings[0]


# -------------------- splitting primes and strong F-regularity --------------------

def test_splitting_prime_of_xy(xy_ring):
    report = splitting_prime(xy_ring)
    assert ideal_equal(report.core, ideal(xy_ring, "x", "y"))
    assert report.certification is Certification.CLOSED_FORM_EXACT
    assert is_strongly_F_regular(xy_ring) is Verdict.NO


@pytest.mark.parametrize("p", [2, 3])
def test_polynomial_ring_is_strongly_f_regular(p):
    R = make_ring(p, "x,y")
    verdict, report = classify_strong_F_regularity(R)
    assert verdict is Verdict.YES
    assert report.core.is_zero()
    assert report.levels_computed == 2
    assert all(total_degree(g) >= p * p for g in report.upper_bound.basis())


def test_a1_singularity(a1_ring):
    verdict, report = classify_strong_F_regularity(a1_ring)
    assert verdict is Verdict.YES
    assert ideal_equal(report.core, a1_ring.defining)
    assert report.certification is not Certification.HEURISTIC


def test_refined_splitting_prime_alone_leaves_sfr_open(xy_ring, monkeypatch):
    from models import cartier

    lower = CoreReport(
        core=ideal(xy_ring, "x"),
        contractions={1: ideal(xy_ring, "x", "y")},
        partials={1: ideal(xy_ring, "x", "y")},
        stabilized_at=None,
        certification=Certification.COMPATIBLE_TO_E,
        f_pure=True,
        e_max=2,
        method="graded_refinement",
        upper_bound=ideal(xy_ring, "x", "y"),
    )
    monkeypatch.setattr(cartier, "splitting_prime", lambda ring, e_max, window: lower)
    verdict, report = classify_strong_F_regularity(xy_ring, e_max=2)
    assert verdict is Verdict.UNKNOWN
    assert report.warnings


def test_non_f_pure_ring_is_not_strongly_f_regular():
    R = make_ring(2, "x,y", ["x^2"])
    verdict, report = classify_strong_F_regularity(R)
    assert verdict is Verdict.NO
    assert report.core.is_unit()


def test_sfr_needs_graded_ring():
    with pytest.raises(ValidationError):
        is_strongly_F_regular(make_ring(2, "x,y", ["x - y^2"]))


def test_minimal_prime_containment(xy_ring, a1_ring):
    assert in_some_minimal_prime(xy_ring, ideal(xy_ring, "x"), reduced=True)
    assert not in_some_minimal_prime(xy_ring, ideal(xy_ring, "x", "y"), reduced=True)
    assert in_some_minimal_prime(a1_ring, a1_ring.defining, reduced=True)
    assert not in_some_minimal_prime(a1_ring, ideal(a1_ring, "x"), reduced=True)
    R = make_ring(3, "x,y,z", ["x*y - z^2", "x*z"])
    with pytest.raises(ValidationError):
        in_some_minimal_prime(R, ideal(R, "x"), reduced=False)


# -------------------- pairs --------------------

def test_pair_validation(xy_ring):
    with pytest.raises(ValidationError):
        CartierPair(ideal(xy_ring, "x"), Fraction(0))
    with pytest.raises(ValidationError):
        CartierPair(Ideal.zero(xy_ring.ambient), Fraction(1))
    assert CartierPair(ideal(xy_ring, "x"), Fraction(3, 2)).exponent(FrobeniusLevel(2, 2)) == 5


def test_pair_with_unit_ideal_is_full_algebra(xy_ring):
    J = ideal(xy_ring, "x", "y")
    pair = CartierPair(Ideal.unit(xy_ring.ambient), Fraction(7, 3))
    for e in (1, 2):
        assert ideal_equal(pair_contraction(xy_ring, J, pair, e), cartier_contraction(xy_ring, J, e))


def test_pair_contraction_of_maximal_ideal():
    R = make_ring(2, "x,y")
    pair = CartierPair(R.maximal_ideal(), Fraction(1))
    assert ideal_equal(pair_contraction(R, R.maximal_ideal(), pair, 1), ideal(R, "x^2", "x*y", "y^2"))


def test_small_t_costs_one_factor_of_a():
    R = make_ring(3, "x,y")
    J = ideal(R, "y")
    small = CartierPair(ideal(R, "x"), Fraction(1, 10))
    assert small.exponent(FrobeniusLevel(3, 1)) == 1
    assert ideal_equal(pair_contraction(R, J, small, 1), colon(cartier_contraction(R, J, 1), small.a))


def test_pair_core_warns_when_not_f_pure():
    R = make_ring(2, "x,y")
    pair = CartierPair(R.maximal_ideal(), Fraction(3))
    assert not pair_is_F_pure(R, pair)
    report = pair_core(R, R.maximal_ideal(), pair, e_max=2)
    assert any("not F-pure" in w for w in report.warnings)
    assert pair_is_F_pure(R, CartierPair(ideal(R, "x"), Fraction(1, 2)))


def test_pair_exponent_beyond_degree_cap():
    R = make_ring(5, "x,y,z")
    pair = CartierPair(R.maximal_ideal(), Fraction(4))
    assert pair.exponent(FrobeniusLevel(5, 4)) == 2496
    with pytest.raises(DegreeCapExceeded):
        pair_core(R, R.maximal_ideal(), pair)
    with pytest.raises(DegreeCapExceeded):
        pair_contraction(R, R.maximal_ideal(), pair, 4)
    with pytest.raises(DegreeCapExceeded):
        pair_is_F_pure(R, pair)


# -------------------- caches --------------------

def test_caches_clear_one_ring(xy_ring, a1_ring):
    from models import cartier, frobenius

    cartier_contraction(xy_ring, ideal(xy_ring, "x"), 1)
    cartier_contraction(a1_ring, ideal(a1_ring, "x"), 1)
    cartier.clear_caches(xy_ring)
    rings = {k[0] for k in cartier._CONTRACTION_CACHE} | {k[0] for k in frobenius._FEDDER_CACHE}
    assert rings == {a1_ring.key()}
