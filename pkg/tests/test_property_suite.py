import pytest

from conftest import ideal, make_ring
from features.property_suite import (
    PROPERTY_NAMES,
    PropertyResult,
    PropertySuite,
    check_radical,
    run_property_suite,
    sample_ideals,
)
from features.reports import properties_result
from models.ideal_engine import Ideal
from models.polyring import PolynomialRing
from models.stanley_reisner import SimplicialComplex, enumerate_complexes, sr_ring


def test_check_radical_on_monomial_ideals():
    S = PolynomialRing(2, ("x", "y"))
    assert check_radical(ideal(S, "x*y"))
    assert not check_radical(ideal(S, "x^2", "y"))
    assert check_radical(Ideal.unit(S))
    assert check_radical(Ideal.zero(S))


def test_check_radical_finds_witnesses():
    S = PolynomialRing(3, ("x", "y"))
    assert not check_radical(ideal(S, "x^2*(x + y)"))
    assert not check_radical(ideal(S, "x^3 + y^3"))
    assert check_radical(ideal(S, "x*y - 1"))


def test_property_result_status():
    res = PropertyResult("monotonicity")
    assert res.status == "skipped"
    res.ok()
    assert res.status == "pass"
    res.fail("boom")
    assert res.status == "fail"
    assert not res.passed
    assert res.to_payload()["failures"] == ["boom"]


def test_sample_ideals():
    sr = make_ring(2, "a,b,c", ["a*b", "a*c"])
    assert len(sample_ideals(sr)) == 5
    a1 = make_ring(3, "x,y,z", ["x*y - z^2"])
    assert len(sample_ideals(a1)) == 4


def test_suite_passes_on_two_components():
    R = make_ring(2, "a,b,c", ["a*b", "a*c"])
    results = run_property_suite(R)
    assert [r.name for r in results] == list(PROPERTY_NAMES)
    assert properties_result(results)["passed"], [r.to_payload() for r in results if not r.passed]
    by_name = {r.name: r for r in results}
    assert by_name["finiteness"].checked == 5
    assert by_name["contraction_decomposition"].checked == 10
    assert by_name["multiplier_closure"].checked == 20


def test_suite_skips_f_pure_properties_on_non_reduced_ring():
    R = make_ring(2, "x,y", ["x^2"])
    suite = PropertySuite(R, e_max=3, compositions=4)
    results = suite.run(["containment", "radicality", "minimal_primes_fixed", "compatibility_characterization"])
    by_name = {r.name: r for r in results}
    assert by_name["containment"].status == "skipped"
    assert by_name["containment"].note == "ring is not F-pure"
    assert by_name["radicality"].status == "skipped"
    assert by_name["minimal_primes_fixed"].note == "not a Stanley–Reisner ring"
    assert by_name["compatibility_characterization"].status == "pass"


@pytest.mark.slow
def test_suite_on_a1_singularity():
    results = run_property_suite(make_ring(3, "x,y,z", ["x*y - z^2"]), e_max=3, names=["containment", "radicality"])
    assert all(r.passed for r in results)


@pytest.mark.slow
@pytest.mark.parametrize("gens", [["a*b", "a*c"], ["a*b*c"]])
def test_many_multiplier_compositions(gens):
    suite = PropertySuite(make_ring(2, "a,b,c", gens), compositions=10_000, seed=7)
    (res,) = suite.run(["multiplier_closure"])
    assert res.passed
    assert res.checked == 10_000


def test_suite_leaves_no_cached_entries_for_its_ring():
    from models import cartier, frobenius

    R = make_ring(2, "a,b", ["a*b"])
    assert properties_result(run_property_suite(R, names=["finiteness", "containment"]))["passed"]
    assert not [k for k in cartier._CONTRACTION_CACHE if k[0] == R.key()]
    assert not [k for k in frobenius._FEDDER_CACHE if k[0] == R.key()]


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_suite_on_every_complex_on_three_vertices(p):
    complexes = enumerate_complexes(["a", "b", "c"]) + [SimplicialComplex.from_facets([["x", "y"], ["y", "z"]])]
    for K in complexes:
        results = run_property_suite(sr_ring(K, p), e_max=3)
        failed = [r.to_payload() for r in results if not r.passed]
        assert not failed, (K.facets, failed)
