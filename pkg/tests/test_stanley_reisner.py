import pytest

from conftest import ideal, make_ring
from models.cartier import clear_caches
from models.errors import EngineInvariantError, ValidationError
from models.ideal_engine import MonomialPrime, ideal_equal
from models.polyring import PolynomialRing
from models.stanley_reisner import (
    SimplicialComplex,
    complex_of,
    contraction_closed_form,
    core_closed_form,
    core_map_atlas,
    enumerate_complexes,
    enumerate_monomial_primes,
    random_complex,
    sr_ideal,
    sr_ring,
    sums_of_minimal_primes,
)


@pytest.fixture
def path_complex():
    return SimplicialComplex.from_facets([["x", "y"], ["y", "z"]])


@pytest.fixture
def abc_ring():
    return make_ring(2, "a,b,c", ["a*b", "a*c"])


def P(names):
    return MonomialPrime(names)


# -------------------- complexes --------------------

def test_complex_validation():
    with pytest.raises(ValidationError):
        SimplicialComplex.from_facets([["a", "b"], ["a"]])
    with pytest.raises(ValidationError):
        SimplicialComplex.from_facets([["a", "z"]], vertices=["a", "b"])
    with pytest.raises(ValidationError):
        SimplicialComplex(("a", "a"), frozenset({frozenset({"a"})}))
    with pytest.raises(ValidationError):
        SimplicialComplex(("a",), frozenset())


def test_from_faces_keeps_maximal_faces():
    K = SimplicialComplex.from_faces([["a"], ["a", "b"], ["b"], ["c"]], ["a", "b", "c"])
    assert K.facets == frozenset({frozenset("ab"), frozenset("c")})
    assert K.is_face(["a"])
    assert not K.is_face(["a", "c"])


def test_minimal_non_faces(path_complex):
    assert path_complex.minimal_non_faces() == [frozenset({"x", "z"})]
    triangle = SimplicialComplex.from_facets([["a", "b"], ["b", "c"], ["a", "c"]])
    assert triangle.minimal_non_faces() == [frozenset("abc")]


def test_ghost_vertex_is_a_generator():
    K = SimplicialComplex.from_facets([["a"]], vertices=["a", "b"])
    assert K.ghost_vertices == ["b"]
    S = PolynomialRing(2, ("a", "b"))
    assert ideal_equal(sr_ideal(K, S), ideal(S, "b"))


def test_empty_facet_gives_maximal_ideal():
    K = SimplicialComplex.from_facets([[]], vertices=["a", "b"])
    R = sr_ring(K, 3)
    assert ideal_equal(R.defining, R.maximal_ideal())


def test_sr_ideal_of_path(path_complex):
    R = sr_ring(path_complex, 2)
    assert R.defining.format() == ["x*z"]
    assert R.is_stanley_reisner
    with pytest.raises(ValidationError):
        sr_ideal(path_complex, PolynomialRing(2, ("x", "y")))


def test_complex_of_ring_inverts_sr_ring(path_complex):
    assert complex_of(sr_ring(path_complex, 5)) == path_complex
    with pytest.raises(ValidationError):
        complex_of(make_ring(2, "x,y", ["x^2"]))


def test_canonical_form_identifies_relabellings():
    K1 = SimplicialComplex.from_facets([["a", "b"], ["c"]])
    K2 = SimplicialComplex.from_facets([["b", "c"], ["a"]])
    K3 = SimplicialComplex.from_facets([["a", "b", "c"]])
    assert K1.canonical_form() == K2.canonical_form()
    assert K1.canonical_form() != K3.canonical_form()


# -------------------- monomial primes and closed forms --------------------

def test_monomial_primes_of_path(path_complex):
    R = sr_ring(path_complex, 2)
    primes = enumerate_monomial_primes(R)
    assert primes == [P("x"), P("z"), P("xy"), P("xz"), P("yz"), P("xyz")]
    with pytest.raises(ValidationError):
        enumerate_monomial_primes(R, bound=2)


@pytest.mark.parametrize("Q,expected", [
    ("ab", ["a"]),
    ("ac", ["a"]),
    ("bc", ["b", "c"]),
    ("abc", ["a", "b", "c"]),
])
def test_core_closed_form(abc_ring, Q, expected):
    assert ideal_equal(core_closed_form(abc_ring, P(Q)), ideal(abc_ring, *expected))


def test_closed_form_needs_prime_over_i(abc_ring):
    with pytest.raises(ValidationError):
        core_closed_form(abc_ring, P("b"))
    with pytest.raises(ValidationError):
        core_closed_form(make_ring(2, "a,b", ["a^2"]), P("a"))


def test_contraction_closed_form(abc_ring):
    assert ideal_equal(contraction_closed_form(abc_ring, P("ab"), 2), ideal(abc_ring, "a", "b^4"))


def test_sums_of_minimal_primes(abc_ring):
    assert sums_of_minimal_primes(abc_ring) == {P("a"), P("bc"), P("abc")}


# -------------------- atlas --------------------

def test_atlas_of_two_components(abc_ring):
    graph = core_map_atlas(abc_ring)
    assert len(graph.nodes) == 5
    assert graph.all_agree()
    assert graph.image() == {P("a"), P("bc"), P("abc")}
    assert graph.edges[P("ab")] == P("a")
    assert graph.edges[P("ac")] == P("a")
    assert graph.is_idempotent_on_image()
    assert graph.preserves_containment()
    assert set(graph.fixed_points()) == graph.image()
    assert set(graph.certifications.values()) == {"closed_form_exact"}


def test_atlas_of_path(path_complex):
    graph = core_map_atlas(sr_ring(path_complex, 2), strict=True)
    assert len(graph.nodes) == 6
    assert graph.image() == {P("x"), P("z"), P("xz")}
    assert graph.edges[P("xyz")] == P("xz")


def test_atlas_dot(abc_ring):
    dot = core_map_atlas(abc_ring).to_dot()
    assert dot.startswith("digraph atlas {")
    assert '"<a,b>" -> "<a>";' in dot
    assert '"<a>" [shape=doublecircle];' in dot
    assert '"<a,b>" [shape=ellipse];' in dot


def test_atlas_rejects_non_sr_ring():
    with pytest.raises(ValidationError):
        core_map_atlas(make_ring(3, "x,y,z", ["x*y - z^2"]))


def test_strict_atlas_raises_on_disagreement(abc_ring, monkeypatch):
    from models import stanley_reisner

    monkeypatch.setattr(stanley_reisner, "core_closed_form", lambda ring, Q: ring.normalize(Q.to_ideal(ring.ambient)))
    graph = core_map_atlas(abc_ring)
    assert not graph.all_agree()
    with pytest.raises(EngineInvariantError):
        core_map_atlas(abc_ring, strict=True)


# -------------------- corpus --------------------

def test_enumerate_complexes_on_two_vertices():
    complexes = enumerate_complexes(["a", "b"])
    assert len(complexes) == 4
    assert len({K.canonical_form() for K in complexes}) == 4


def test_random_complex_is_valid(rng):
    for _ in range(20):
        K = random_complex(["a", "b", "c", "d"], rng)
        assert K.vertices == ("a", "b", "c", "d")
        assert all(K.is_face(F) for F in K.facets)


@pytest.mark.slow
@pytest.mark.parametrize("p,vertices", [(2, "abcd"), (3, "abcd"), (5, "abc")])
def test_atlas_on_every_small_complex(p, vertices):
    for K in enumerate_complexes(list(vertices)):
        R = sr_ring(K, p)
        graph = core_map_atlas(R, strict=True)
        assert graph.image() == sums_of_minimal_primes(R)
        assert graph.is_idempotent_on_image()
        assert graph.preserves_containment()
        assert set(graph.certifications.values()) == {"closed_form_exact"}
        clear_caches(R)


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3, 5])
def test_atlas_on_random_five_vertex_complexes(p, rng):
    for _ in range(50):
        K = random_complex(list("abcde"), rng)
        R = sr_ring(K, p)
        graph = core_map_atlas(R, strict=True)
        assert graph.all_agree()
        assert graph.image() == sums_of_minimal_primes(R)
        assert set(graph.certifications.values()) == {"closed_form_exact"}
        clear_caches(R)
