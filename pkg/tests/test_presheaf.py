import random

import pytest

from cathedra.category import arrow_category, chain, discrete, divisor_poset, terminal_category
from cathedra.errors import ElementNotInValue, NotASubpresheaf
from cathedra.finset import FinFunction, FinSet
from cathedra.functor import SetNat, enumerate_set_nats
from cathedra.presheaf import (
    PresheafDiagram,
    bijection_groupoid,
    category_of_elements,
    check_classifier,
    check_currying,
    check_yoneda,
    classify_subpresheaf,
    currying_natural_in_x,
    density_check,
    empty_presheaf,
    evaluation_preserves_limits,
    exponential,
    find_representation,
    hom_bifunctor,
    is_presheaf_colimit,
    is_presheaf_limit,
    ord_functor,
    presheaf_colimit,
    presheaf_from_maps,
    presheaf_iso,
    presheaf_limit,
    presheaf_product,
    random_presheaf,
    representable,
    sieves,
    subobject_classifier,
    sym_functor,
    terminal_presheaf,
    yoneda_backward,
    yoneda_full_faithful,
    yoneda_naturality_in_object,
    yoneda_preservation,
)

from conftest import CORPUS
from oracles import factorial, naive_nat_count, naive_sieve_count

SMALL_BASES = [name for name, C in sorted(CORPUS.items()) if 0 < C.n_objects <= 4]


@pytest.mark.parametrize("name", SMALL_BASES)
def test_yoneda_counts_match_brute(name):
    C = CORPUS[name]
    rng = random.Random(name)
    for _ in range(3):
        X = random_presheaf(C, rng, max_size=2)
        for a in range(C.n_objects):
            rep = check_yoneda(X, a)
            # [DERIVED] transformations out of h_a counted by raw enumeration
            assert rep.nat_count == naive_nat_count(representable(C, a), X)
            assert rep.nat_count == rep.value_size
            assert rep.round_trip


def test_yoneda_naturality_in_the_object():
    C = divisor_poset(12)
    X = random_presheaf(C, random.Random(3), max_size=2, min_size=1)
    assert all(yoneda_naturality_in_object(X, f) for f in range(C.n_morphisms))


def test_yoneda_backward_rejects_foreign_elements():
    C = arrow_category()
    with pytest.raises(ElementNotInValue):
        yoneda_backward(terminal_presheaf(C), 0, "nope")


@pytest.mark.parametrize("name", ["two", "Z2", "Div12", "S3"])
def test_embedding_is_full_and_faithful(name):
    assert yoneda_full_faithful(CORPUS[name])


def test_representable_values_are_homs():
    C = divisor_poset(12)
    h = representable(C, C.object_index("6"))
    # [TRIVIAL] h_6(d) has one element exactly when d divides 6
    assert [len(v) for v in h.values] == [int(6 % int(d) == 0) for d in C.objects]


class TestClassifier:
    def test_sieves_on_the_arrow(self):
        C = arrow_category()
        cl = subobject_classifier(C)
        # [PAPER] Ω on the arrow category has two and three truth values
        assert [len(v) for v in cl.omega.values] == [2, 3]

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_sieve_counts(self, name):
        C = CORPUS[name]
        for a in range(C.n_objects):
            assert len(sieves(C, a)) == naive_sieve_count(C, a)

    def test_classifier_report_on_the_arrow(self):
        C = arrow_category()
        rep = check_classifier(terminal_presheaf(C))
        # [DERIVED] subterminals of a two-object presheaf: {}, {1}, both
        assert rep == (3, 3, True)

    @pytest.mark.parametrize("seed", range(6))
    def test_classifier_on_random_presheaves(self, seed):
        C = [arrow_category(), CORPUS["Z2"], chain(3)][seed % 3]
        X = random_presheaf(C, random.Random(seed), max_size=2)
        rep = check_classifier(X)
        assert rep.bijective and rep.subobjects == rep.maps_to_omega
        assert rep.maps_to_omega == naive_nat_count(X, subobject_classifier(C).omega)

    def test_non_closed_subset_rejected(self):
        C = arrow_category()
        X = representable(C, 1)
        f = C.hom(0, 1)[0]
        # {f} lives over 0 in h_1; leaving it out while keeping 1_1 breaks closure
        with pytest.raises(NotASubpresheaf):
            classify_subpresheaf(X, [set(), {C.identities[1]}])
        chi = classify_subpresheaf(X, [{f}, set()])
        assert chi[1](C.identities[1]).members == (f,)


@pytest.mark.parametrize("seed", range(8))
def test_currying_is_bijective(seed):
    rng = random.Random(seed)
    C = [arrow_category(), discrete(2), CORPUS["Z2"], terminal_category()][seed % 4]
    X, Y, Z = (random_presheaf(C, rng, max_size=2) for _ in range(3))
    rep = check_currying(X, Y, Z)
    assert rep.bijective and rep.left_count == rep.right_count
    assert rep.left_count == naive_nat_count(presheaf_product(X, Y)[0], Z)


def test_exponential_over_a_point_is_function_set():
    C = terminal_category()
    Y = presheaf_from_maps(C, [FinSet("ab")], {})
    Z = presheaf_from_maps(C, [FinSet("xyz")], {})
    # [TRIVIAL] over the point Z^Y is the set of functions Y -> Z
    assert len(exponential(Y, Z).presheaf.values[0]) == 3 ** 2


def test_discrete_base_is_pointwise():
    C = discrete(2)
    Y = presheaf_from_maps(C, [FinSet("a"), FinSet("bc")], {})
    Z = presheaf_from_maps(C, [FinSet("xy"), FinSet("z")], {})
    # [DERIVED] pointwise function sets: 2^1 and 1^2
    assert [len(v) for v in exponential(Y, Z).presheaf.values] == [2, 1]


def test_currying_natural_in_x():
    C = arrow_category()
    rng = random.Random(11)
    X = random_presheaf(C, rng, max_size=2, min_size=1)
    Y, Z = random_presheaf(C, rng, max_size=2), random_presheaf(C, rng, max_size=2)
    for xi in enumerate_set_nats(X, X)[:3]:
        assert currying_natural_in_x(xi, Y, Z)


@pytest.mark.parametrize("seed", range(6))
def test_density(seed):
    C = [arrow_category(), CORPUS["Z2"], divisor_poset(4)][seed % 3]
    X = random_presheaf(C, random.Random(seed), max_size=2)
    w = density_check(X)
    assert [len(v) for v in w.colimit.vertex.values] == [len(v) for v in X.values]
    assert is_presheaf_colimit(w.colimit)


def test_elements_of_a_representable_have_a_terminal_object():
    from cathedra.category import universal_objects

    C = divisor_poset(12)
    el = category_of_elements(representable(C, C.object_index("4")))
    term = universal_objects(el.category, "terminal")
    assert [el.elements[t][0] for t in term] == [C.object_index("4")]


class TestRepresentation:
    def test_representable_is_found(self):
        C = divisor_poset(12)
        a = C.object_index("6")
        rep = find_representation(representable(C, a))
        assert rep is not None and rep.object == a

    def test_empty_is_not_representable(self):
        assert find_representation(empty_presheaf(arrow_category())) is None

    def test_s3_has_six_universal_elements(self):
        S3 = CORPUS["S3"]
        # [DERIVED] every element of h_* is universal in a group
        assert len(find_representation(representable(S3, 0), all_reps=True)) == 6

    def test_iso_search(self):
        C = arrow_category()
        assert presheaf_iso(terminal_presheaf(C), representable(C, 1)) is not None
        assert presheaf_iso(terminal_presheaf(C), representable(C, 0)) is None


@pytest.mark.parametrize("n", [2, 3])
def test_sym_and_ord(n):
    C = bijection_groupoid(n)
    S, O = sym_functor(C, n), ord_functor(C, n)
    # [PAPER] both have n! elements at every object, yet are not isomorphic
    assert all(len(v) == factorial(n) for v in S.values + O.values)
    assert enumerate_set_nats(S, O) == []
    # [DERIVED] brute force on one copy; a transformation is fixed by any one component
    G = bijection_groupoid(n, copies=1)
    assert naive_nat_count(sym_functor(G, n), ord_functor(G, n)) == 0
    # Ord is a torsor, so it has exactly n! automorphisms
    assert len(enumerate_set_nats(O, O)) == factorial(n)


def test_hom_bifunctor_sizes():
    C = divisor_poset(4)
    H = hom_bifunctor(C)
    n = C.n_objects
    assert [len(v) for v in H.values] == [len(C.hom(a, b)) for a in range(n) for b in range(n)]


class TestPointwise:
    def test_limit_and_colimit_of_a_pair(self):
        C = arrow_category()
        rng = random.Random(5)
        X, Y = random_presheaf(C, rng, max_size=2), random_presheaf(C, rng, max_size=2)
        I = discrete(2)
        ident = [SetNat(P, P, [FinFunction.identity(v) for v in P.values]) for P in (X, Y)]
        D = PresheafDiagram(I, [X, Y], ident)
        lim, col = presheaf_limit(D, C), presheaf_colimit(D, C)
        assert [len(v) for v in lim.vertex.values] == [len(a) * len(b) for a, b in zip(X.values, Y.values)]
        assert [len(v) for v in col.vertex.values] == [len(a) + len(b) for a, b in zip(X.values, Y.values)]
        assert is_presheaf_limit(lim) and is_presheaf_colimit(col)

    def test_evaluation_preserves_limits(self):
        C = arrow_category()
        for shape_name in ("discrete2", "parallel"):
            assert evaluation_preserves_limits(C, 1, shape_name, random.Random(0), samples=6)


class TestYonedaPreservation:
    @pytest.mark.parametrize("n", [6, 12])
    def test_binary_products_preserved(self, n):
        rec = yoneda_preservation(divisor_poset(n), "discrete2", "limit")
        assert rec.preserves and rec.exhaustive

    def test_initial_object_not_preserved(self):
        rec = yoneda_preservation(divisor_poset(12), "empty", "colimit")
        # h_1 is inhabited at 1, while the initial presheaf is empty
        assert not rec.preserves
        assert rec.counterexample is not None
