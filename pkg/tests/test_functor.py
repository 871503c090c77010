import math
import random

import pytest

from cathedra.category import (
    arrow_category,
    chain,
    cyclic_monoid_table,
    discrete,
    divisor_poset,
    from_monoid,
    from_poset,
    terminal_category,
)
from cathedra.comma import comma_category, forgetful, object_as_functor, slice_category
from cathedra.errors import (
    BoundaryMismatch,
    CompositionNotPreserved,
    DomCodMismatch,
    IdentityNotPreserved,
    NaturalityViolation,
)
from cathedra.functor import (
    classify_functor,
    compose_functors,
    constant_functor,
    diagonal_functor,
    enumerate_functors,
    enumerate_nats,
    functor_category,
    functor_from_object_map,
    hcompose,
    identity_functor,
    identity_nat,
    is_nat_iso,
    nat_inverse,
    opposite_functor,
    pseudo_inverse,
    validate_functor,
    validate_nat,
    vcompose,
    whisker_left,
    whisker_right,
)
from cathedra.sampling import random_functor

from conftest import CORPUS
from oracles import naive_functor_count, naive_functor_nat_count

SMALL = [terminal_category(), arrow_category(), discrete(2), chain(3),
         from_monoid(cyclic_monoid_table(2), 0), from_monoid(cyclic_monoid_table(3), 0)]


@pytest.mark.parametrize("i", range(len(SMALL)))
@pytest.mark.parametrize("j", range(len(SMALL)))
def test_functor_counts_match_brute(i, j):
    A, B = SMALL[i], SMALL[j]
    assert len(list(enumerate_functors(A, B))) == naive_functor_count(A, B)


def test_known_counts():
    # [DERIVED] monotone maps from a 3-chain to a 2-chain
    assert len(list(enumerate_functors(chain(3), chain(2)))) == 4
    # [DERIVED] homomorphisms S3 -> Z2 (trivial and sign)
    assert len(list(enumerate_functors(CORPUS["S3"], CORPUS["Z2"]))) == 2
    # [DERIVED] Z3 -> Z3 endomorphisms x -> kx
    assert len(list(enumerate_functors(CORPUS["Z3"], CORPUS["Z3"]))) == 3


def test_validation_errors():
    A, B = arrow_category(), discrete(2)
    with pytest.raises(DomCodMismatch):
        validate_functor(A, B, [0, 1], [0, 1, 0])
    Z2 = CORPUS["Z2"]
    with pytest.raises(IdentityNotPreserved):
        validate_functor(Z2, Z2, [0], [1, 1])
    Z3 = CORPUS["Z3"]
    with pytest.raises(CompositionNotPreserved):
        # sending the generator of Z2 to a generator of Z3 breaks s.s = e
        validate_functor(Z2, Z3, [0], [0, 1])


def test_two_to_one_classification():
    # [DERIVED] hom(b, a) is empty but hom(*, *) is not, so not full; injective on homs
    F = constant_functor(arrow_category(), terminal_category(), 0)
    c = classify_functor(F)
    assert (c.full, c.faithful, c.essentially_surjective, c.equivalence) == (False, True, True, False)


def test_indiscrete_pair_is_equivalent_to_a_point():
    I = from_poset([[True, True], [True, True]])
    F = constant_functor(I, terminal_category(), 0)
    assert classify_functor(F).equivalence
    pi = pseudo_inverse(F)
    assert is_nat_iso(pi.unit) and is_nat_iso(pi.counit)
    assert pseudo_inverse(constant_functor(arrow_category(), terminal_category(), 0)) is None


def test_composition_and_identity():
    rng = random.Random(3)
    A, B, C = chain(3), divisor_poset(12), divisor_poset(36)
    for _ in range(10):
        F, G = random_functor(A, B, rng), random_functor(B, C, rng)
        GF = compose_functors(G, F)
        assert all(GF(a) == G(F(a)) for a in range(A.n_objects))
        assert compose_functors(identity_functor(B), F) == F
        assert opposite_functor(opposite_functor(F)) == F


@pytest.mark.parametrize("seed", range(12))
def test_nat_counts_match_brute(seed):
    rng = random.Random(seed)
    A, B = [(chain(2), divisor_poset(12)), (discrete(2), CORPUS["S3"]), (chain(3), chain(3))][seed % 3]
    F, G = random_functor(A, B, rng), random_functor(A, B, rng)
    assert len(enumerate_nats(F, G)) == naive_functor_nat_count(F, G)


def test_nat_validation():
    A, B = arrow_category(), chain(2)
    F = functor_from_object_map(A, B, [0, 0])
    G = functor_from_object_map(A, B, [0, 1])
    validate_nat(F, G, [0, B.hom(0, 1)[0]])
    S3 = CORPUS["S3"]
    swap = S3.morphism_index("102")
    with pytest.raises(NaturalityViolation):
        # a non-central element is not a natural endo-transformation of the identity
        validate_nat(identity_functor(S3), identity_functor(S3), [swap])
    with pytest.raises(BoundaryMismatch):
        validate_nat(F, identity_functor(discrete(2)), [0, 1])


def test_interchange_law():
    # (β'∘β) * (α'∘α) = (β' * α')∘(β * α)
    C = divisor_poset(12)
    ob = C.object_index
    F1, F2, F3 = (functor_from_object_map(chain(2), C, [ob(x), ob(y)]) for x, y in (("1", "2"), ("2", "4"), ("2", "12")))
    # x -> lcm(x, 2) sits between the identity and the constant at 12
    G1 = identity_functor(C)
    G2 = functor_from_object_map(C, C, [ob(str(math.lcm(int(x), 2))) for x in C.objects])
    G3 = constant_functor(C, C, ob("12"))
    (a,), (a2,) = enumerate_nats(F1, F2), enumerate_nats(F2, F3)
    (b,), (b2,) = enumerate_nats(G1, G2), enumerate_nats(G2, G3)
    lhs = hcompose(vcompose(b2, b), vcompose(a2, a))
    rhs = vcompose(hcompose(b2, a2), hcompose(b, a))
    assert lhs == rhs


def test_whiskering_components():
    C = divisor_poset(12)
    rng = random.Random(9)
    F = random_functor(chain(2), C, rng)
    G, H = identity_functor(C), constant_functor(C, C, C.object_index("12"))
    (alpha,) = enumerate_nats(G, H)
    w = whisker_right(alpha, F)
    assert w.components == tuple(alpha[F(a)] for a in range(2))
    K = constant_functor(C, chain(2), 0)
    wl = whisker_left(K, alpha)
    assert all(c == chain(2).identities[0] for c in wl.components)


def test_nat_inverse_in_group():
    S3 = CORPUS["S3"]
    F = identity_functor(S3)
    for alpha in enumerate_nats(F, F):
        inv = nat_inverse(alpha)
        assert vcompose(inv, alpha) == identity_nat(F)
    # [DERIVED] natural endo-transformations of the identity on a group = its centre; S3 has trivial centre
    assert len(enumerate_nats(F, F)) == 1


def test_functor_category_of_arrow_into_chain():
    fc = functor_category(arrow_category(), chain(2))
    # [DERIVED] functors 2 -> 2 are monotone maps: 3; arrows between them form a 3-chain
    assert fc.category.n_objects == 3
    assert fc.category.n_morphisms == 6


def test_diagonal_lands_on_constants():
    C = divisor_poset(12)
    delta, fc = diagonal_functor(C, discrete(2))
    for x in range(C.n_objects):
        F = fc.functors[delta(x)]
        assert F.object_map == (x, x)


class TestComma:
    def test_slice_sizes(self):
        C = divisor_poset(12)
        over = slice_category(C, C.object_index("12"))
        # [DERIVED] every divisor maps to 12, so C/12 is C
        assert over.category.n_objects == 6
        assert over.category.n_morphisms == C.n_morphisms
        under = slice_category(C, C.object_index("2"), side="under")
        assert under.category.n_objects == 4  # multiples of 2 dividing 12

    def test_comma_object_count(self):
        rng = random.Random(11)
        C = divisor_poset(36)
        P, Q = random_functor(chain(2), C, rng), random_functor(discrete(2), C, rng)
        res = comma_category(P, Q)
        expected = sum(len(C.hom(P(a), Q(b))) for a in range(2) for b in range(2))
        assert res.category.n_objects == expected
        assert forgetful(res, "over") is res.left_projection

    def test_monoid_slice(self):
        S3 = CORPUS["S3"]
        res = slice_category(S3, 0)
        # [DERIVED] S3/* has one object per group element and is discrete-up-to-iso
        assert res.category.n_objects == 6
        assert res.category.n_morphisms == 36

    def test_boundary_mismatch(self):
        with pytest.raises(BoundaryMismatch):
            comma_category(object_as_functor(chain(2), 0), object_as_functor(chain(3), 0))
