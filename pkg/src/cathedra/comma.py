"""Comma, slice and coslice categories."""

from __future__ import annotations

from typing import NamedTuple

from .caps import Caps, resolve
from .category import FiniteCategory, _assemble, _check_size, terminal_category
from .errors import BoundaryMismatch
from .functor import (
    Functor,
    NatTransformation,
    compose_functors,
    constant_functor,
    identity_functor,
    validate_functor,
    validate_nat,
)


class CommaResult(NamedTuple):
    category: FiniteCategory
    left_projection: Functor
    right_projection: Functor
    square_transformation: NatTransformation
    # (a, h, b) for each object of the comma category
    triples: tuple


def comma_category(P: Functor, Q: Functor, caps: Caps | None = None) -> CommaResult:
    """(P ↓ Q): objects (A, h: P(A) -> Q(B), B), morphisms commuting squares."""
    caps = resolve(caps)
    if not P.target.same_tables(Q.target):
        raise BoundaryMismatch("legs of a comma category must share a codomain")
    A, B, C = P.source, Q.source, P.target
    triples = [(a, h, b) for a in range(A.n_objects) for b in range(B.n_objects) for h in C.hom(P(a), Q(b))]
    _check_size(len(triples), 0, caps, "comma category")

    objects = [f"({A.objects[a]},{C.label(h)},{B.objects[b]})" for a, h, b in triples]
    morphisms = []
    pairs = []
    for i, (a, h, b) in enumerate(triples):
        for j, (a2, h2, b2) in enumerate(triples):
            for f in A.hom(a, a2):
                for g in B.hom(b, b2):
                    if C.composition[(h2, P.fmap(f))] == C.composition[(Q.fmap(g), h)]:
                        morphisms.append((i, j, f"({A.label(f)},{B.label(g)})"))
                        pairs.append((f, g))
                        if len(morphisms) > caps.max_morphisms:
                            _check_size(len(triples), len(morphisms), caps, "comma category")
    index = {(morphisms[k][0], morphisms[k][1], pairs[k]): k for k in range(len(pairs))}
    identities = [index[(i, i, (A.identities[a], B.identities[b]))] for i, (a, _, b) in enumerate(triples)]
    comp = {}
    by_dom: dict[int, list[int]] = {}
    for k, m in enumerate(morphisms):
        by_dom.setdefault(m[0], []).append(k)
    for k1, m1 in enumerate(morphisms):
        for k2 in by_dom.get(m1[1], ()):
            (f1, g1), (f2, g2) = pairs[k1], pairs[k2]
            comp[(k2, k1)] = index[(m1[0], morphisms[k2][1], (A.composition[(f2, f1)], B.composition[(g2, g1)]))]

    # _assemble moves identities to the front; track the permutation for the projections
    moved = identities + [k for k in range(len(pairs)) if k not in set(identities)]
    cat = _assemble(objects, morphisms, identities, comp)
    cat.name = "comma"
    new_pairs = [pairs[k] for k in moved]
    left = validate_functor(cat, A, [t[0] for t in triples], [p[0] for p in new_pairs])
    right = validate_functor(cat, B, [t[2] for t in triples], [p[1] for p in new_pairs])
    square = validate_nat(
        compose_functors(P, left), compose_functors(Q, right), [h for _, h, _ in triples]
    )
    return CommaResult(cat, left, right, square, tuple(triples))


def object_as_functor(C: FiniteCategory, a: int) -> Functor:
    """The functor 1 -> C picking out a."""
    return constant_functor(terminal_category(), C, a)


def slice_category(C: FiniteCategory, a: int, side: str = "over", caps: Caps | None = None) -> CommaResult:
    """C/a (``side="over"``) or a/C (``side="under"``).

    The forgetful functor to C is the left projection for ``over`` and the
    right projection for ``under``.
    """
    ident = identity_functor(C)
    point = object_as_functor(C, a)
    if side == "over":
        return comma_category(ident, point, caps)
    if side == "under":
        return comma_category(point, ident, caps)
    raise ValueError(f"side must be 'over' or 'under', not {side!r}")


def forgetful(result: CommaResult, side: str) -> Functor:
    return result.left_projection if side == "over" else result.right_projection
