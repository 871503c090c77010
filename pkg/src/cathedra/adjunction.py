"""Adjunctions: unit/counit, transpose tables, synthesis and adjoint functor theorems."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .caps import Caps, resolve
from .category import FiniteCategory, universal_objects
from .comma import comma_category, object_as_functor
from .errors import (
    BoundaryMismatch,
    CapExceeded,
    LimitMissing,
    MeetMissing,
    NaturalityViolation,
    NotBijective,
    NotMeetPreserving,
    NotWeaklyInitial,
    TriangleViolation,
)
from .functor import (
    Functor,
    NatTransformation,
    compose_functors,
    diagonal_functor,
    functor_from_object_map,
    identity_functor,
    is_nat_iso,
    validate_functor,
    validate_nat,
)
from .limits import (
    Cone,
    inclusion_diagram,
    limit,
    mediating_maps,
    parallel_diagram,
    preservation_report,
)

# (a, b) -> {g: F(a) -> b  ↦  ḡ: a -> G(b)}
TransposeFamily = dict


@dataclass
class Adjunction:
    left: Functor
    right: Functor
    unit: NatTransformation
    counit: NatTransformation
    notes: dict = field(default_factory=dict)

    @property
    def source(self) -> FiniteCategory:
        return self.left.source

    @property
    def target(self) -> FiniteCategory:
        return self.left.target

    def transpose_right(self, a: int, g: int) -> int:
        """g: F(a) -> b  ↦  G(g)∘η_a : a -> G(b)."""
        return self.source.composition[(self.right.fmap(g), self.unit[a])]

    def transpose_left(self, b: int, f: int) -> int:
        """f: a -> G(b)  ↦  ε_b∘F(f) : F(a) -> b."""
        return self.target.composition[(self.counit[b], self.left.fmap(f))]

    def tables(self) -> TransposeFamily:
        A, B = self.source, self.target
        F = self.left
        return {
            (a, b): {g: self.transpose_right(a, g) for g in B.hom(F(a), b)}
            for a in range(A.n_objects)
            for b in range(B.n_objects)
        }


def _check_pair(F: Functor, G: Functor):
    if not (F.source.same_tables(G.target) and F.target.same_tables(G.source)):
        raise BoundaryMismatch("F: A -> B and G: B -> A do not face each other")


def adjunction_from_unit_counit(F: Functor, G: Functor, unit, counit) -> Adjunction:
    """Validate η: 1 -> GF and ε: FG -> 1 against the triangle identities.

    ``unit`` and ``counit`` may be transformations or bare component lists.
    """
    _check_pair(F, G)
    A, B = F.source, F.target
    GF, FG = compose_functors(G, F), compose_functors(F, G)
    comps_u = unit.components if isinstance(unit, NatTransformation) else unit
    comps_c = counit.components if isinstance(counit, NatTransformation) else counit
    eta = validate_nat(identity_functor(A), GF, comps_u)
    eps = validate_nat(FG, identity_functor(B), comps_c)
    for a in range(A.n_objects):
        if B.composition[(eps[F(a)], F.fmap(eta[a]))] != B.identities[F(a)]:
            raise TriangleViolation(f"(εF)∘(Fη) is not the identity at {A.objects[a]}", witness=("left", a))
    for b in range(B.n_objects):
        if A.composition[(G.fmap(eps[b]), eta[G(b)])] != A.identities[G(b)]:
            raise TriangleViolation(f"(Gε)∘(ηG) is not the identity at {B.objects[b]}", witness=("right", b))
    adj = Adjunction(F, G, eta, eps)
    for a in range(A.n_objects):
        for b in range(B.n_objects):
            for g in B.hom(F(a), b):
                assert adj.transpose_left(b, adj.transpose_right(a, g)) == g
            for f in A.hom(a, G(b)):
                assert adj.transpose_right(a, adj.transpose_left(b, f)) == f
    return adj


def adjunction_from_transpose(F: Functor, G: Functor, tables: TransposeFamily) -> Adjunction:
    """Validate a family of bijections B(F a, b) -> A(a, G b) natural in a and b."""
    _check_pair(F, G)
    A, B = F.source, F.target
    for a in range(A.n_objects):
        for b in range(B.n_objects):
            t = tables.get((a, b), {})
            if set(t) != set(B.hom(F(a), b)) or sorted(t.values()) != sorted(A.hom(a, G(b))):
                raise NotBijective(f"transpose at ({A.objects[a]}, {B.objects[b]}) is not a bijection", witness=(a, b))
    for a in range(A.n_objects):
        for b in range(B.n_objects):
            for g in B.hom(F(a), b):
                gbar = tables[(a, b)][g]
                for q in B.out_of(b):
                    b2 = B.cod(q)
                    if tables[(a, b2)][B.composition[(q, g)]] != A.composition[(G.fmap(q), gbar)]:
                        raise NaturalityViolation("transpose is not natural in B", witness=("B", a, g, q))
                for p in A.into(a):
                    a2 = A.dom(p)
                    if tables[(a2, b)][B.composition[(g, F.fmap(p))]] != A.composition[(gbar, p)]:
                        raise NaturalityViolation("transpose is not natural in A", witness=("A", a, g, p))
    unit = [tables[(a, F(a))][B.identities[F(a)]] for a in range(A.n_objects)]
    counit = []
    for b in range(B.n_objects):
        inverse = {v: k for k, v in tables[(G(b), b)].items()}
        counit.append(inverse[A.identities[G(b)]])
    adj = adjunction_from_unit_counit(F, G, unit, counit)
    assert adj.tables() == {k: dict(v) for k, v in tables.items() if k in adj.tables()}
    return adj


def poset_transpose_tables(F: Functor, G: Functor) -> TransposeFamily:
    """The tables f(a) <= b <=> a <= g(b) when both homs are singletons or empty."""
    A, B = F.source, F.target
    out = {}
    for a in range(A.n_objects):
        for b in range(B.n_objects):
            left, right = B.hom(F(a), b), A.hom(a, G(b))
            out[(a, b)] = {g: right[0] for g in left} if len(left) == len(right) == 1 else {}
    return out


# synthesis from initial objects of comma categories


def comma_under(a: int, G: Functor, caps: Caps | None = None):
    """(a ⇒ G): objects (b, h: a -> G(b))."""
    return comma_category(object_as_functor(G.target, a), G, caps)


def synthesize_left_adjoint(G: Functor, pick: str = "first", caps: Caps | None = None) -> Adjunction | None:
    """A left adjoint built from initial objects of every (a ⇒ G), or None.

    ``pick`` chooses the least (``first``) or greatest (``last``) initial
    object index when there are several.
    """
    caps = resolve(caps)
    B, A = G.source, G.target
    fobj, eta = [], []
    for a in range(A.n_objects):
        cr = comma_under(a, G, caps)
        inits = universal_objects(cr.category, "initial")
        if not inits:
            return None
        k = inits[0] if pick == "first" else inits[-1]
        _, h, b = cr.triples[k]
        fobj.append(b)
        eta.append(h)
    fmor = []
    for f, m in enumerate(A.morphisms):
        target = A.composition[(eta[m.cod], f)]
        (q,) = [q for q in B.hom(fobj[m.dom], fobj[m.cod]) if A.composition[(G.fmap(q), eta[m.dom])] == target]
        fmor.append(q)
    F = validate_functor(A, B, fobj, fmor)
    counit = []
    for b in range(B.n_objects):
        gb = G(b)
        (p,) = [p for p in B.hom(fobj[gb], b) if A.composition[(G.fmap(p), eta[gb])] == A.identities[gb]]
        counit.append(p)
    adj = adjunction_from_unit_counit(F, G, eta, counit)
    adj.notes["pick"] = pick
    return adj


def unit_is_initial(adj: Adjunction, caps: Caps | None = None) -> bool:
    """Each (F a, η_a) is initial in (a ⇒ G)."""
    for a in range(adj.source.n_objects):
        cr = comma_under(a, adj.right, caps)
        k = cr.triples.index((0, adj.unit[a], adj.left(a)))
        if k not in universal_objects(cr.category, "initial"):
            return False
    return True


def left_adjoint_iso(adj1: Adjunction, adj2: Adjunction) -> NatTransformation:
    """θ: F -> F' with θ_a = ε_{F' a}∘F(η'_a), for F ⊣ G and F' ⊣ G."""
    if adj1.right != adj2.right:
        raise BoundaryMismatch("adjunctions do not share a right adjoint")
    B = adj1.target
    F, F2 = adj1.left, adj2.left
    comps = [B.composition[(adj1.counit[F2(a)], F.fmap(adj2.unit[a]))] for a in range(adj1.source.n_objects)]
    theta = validate_nat(F, F2, comps)
    assert is_nat_iso(theta), "two left adjoints of one functor are isomorphic"
    return theta


# ordered sets


def _leq(P: FiniteCategory, x: int, y: int) -> bool:
    return bool(P.hom(x, y))


def poset_meets(P: FiniteCategory, family: Sequence[int]) -> list[int]:
    """All greatest lower bounds of ``family`` (several only in a non-skeletal preorder)."""
    lower = [m for m in range(P.n_objects) if all(_leq(P, m, s) for s in family)]
    return [m for m in lower if all(_leq(P, l, m) for l in lower)]


def _check_monotone_posets(g: Functor):
    if not (g.source.is_preorder() and g.target.is_preorder()):
        raise BoundaryMismatch("the map must go between preorders")


def check_meet_preservation(g: Functor, caps: Caps | None = None) -> None:
    """g(⋀S) is a meet of g(S) for every family S whose meet exists."""
    caps = resolve(caps)
    _check_monotone_posets(g)
    B, A = g.source, g.target
    n = B.n_objects
    if 2 ** n > caps.max_enum:
        raise CapExceeded(f"{2 ** n} families exceed the enumeration cap")
    for r in range(n + 1):
        for family in itertools.combinations(range(n), r):
            meets = poset_meets(B, family)
            if not meets:
                continue
            image = poset_meets(A, [g(b) for b in family])
            if g(meets[0]) not in image:
                raise NotMeetPreserving(
                    f"g does not preserve the meet of {[B.objects[b] for b in family]}", witness=family
                )


def oaft_left_adjoint(g: Functor, caps: Caps | None = None) -> Adjunction:
    """Left adjoint of a meet-preserving map of posets, F(a) = ⋀{b : a <= g(b)}."""
    check_meet_preservation(g, caps)
    B, A = g.source, g.target
    fobj = []
    for a in range(A.n_objects):
        family = [b for b in range(B.n_objects) if _leq(A, a, g(b))]
        meets = poset_meets(B, family)
        if not meets:
            raise MeetMissing(f"no meet of {{b : {A.objects[a]} <= g(b)}}", witness=a)
        fobj.append(meets[0])
    F = functor_from_object_map(A, B, fobj)
    unit = [A.hom(a, g(F(a)))[0] for a in range(A.n_objects)]
    counit = [B.hom(F(g(b)), b)[0] for b in range(B.n_objects)]
    adj = adjunction_from_unit_counit(F, g, unit, counit)
    synth = synthesize_left_adjoint(g, caps=caps)
    assert synth is not None and is_nat_iso(left_adjoint_iso(adj, synth))
    return adj


# weakly initial sets


class WeakInitialResult(NamedTuple):
    initial: int
    projections: tuple
    splittings_checked: int


def initial_via_weakly_initial(C: FiniteCategory, S: Sequence[int], caps: Caps | None = None) -> WeakInitialResult:
    """Initial object from a weakly initial set, following the equalizer argument.

    0 is a limit of the inclusion S -> C.  Its existence maps come from weak
    initiality, and uniqueness from splitting the equalizer of any two maps
    out of 0.
    """
    S = list(S)
    if not S:
        raise NotWeaklyInitial("the weakly initial set is empty")
    for c in range(C.n_objects):
        if not any(C.hom(s, c) for s in S):
            raise NotWeaklyInitial(f"{C.objects[c]} receives no map from the set", witness=c)
    cone = limit(inclusion_diagram(C, S), caps)
    if cone is None:
        raise LimitMissing("the inclusion of the set has no limit")
    zero, proj = cone.vertex, cone.legs
    for c in range(C.n_objects):
        k, s = next((C.hom(s, c)[0], i) for i, s in enumerate(S) if C.hom(s, c))
        assert C.dom(C.composition[(k, proj[s])]) == zero
    checked = 0
    for c in range(C.n_objects):
        maps = C.hom(zero, c)
        for f, g in itertools.combinations(maps, 2):
            eq = limit(parallel_diagram(C, f, g), caps)
            if eq is None:
                raise LimitMissing("an equalizer needed for uniqueness is missing")
            e, i = eq.vertex, eq.legs[0]
            s_idx, h = next((j, C.hom(s, e)[0]) for j, s in enumerate(S) if C.hom(s, e))
            loop = C.compose(i, h, proj[s_idx])
            # jointly monic projections force the loop to be the identity
            assert all(C.composition[(p, loop)] == p for p in proj)
            assert loop == C.identities[zero]
            # f = f∘i∘h∘p = g∘i∘h∘p = g
            assert C.composition[(f, loop)] == C.composition[(g, loop)]
            assert f == g, "distinct maps out of a limit of a weakly initial set"
        checked += len(maps)
    assert zero in universal_objects(C, "initial")
    return WeakInitialResult(zero, proj, checked)


class GaftReport(NamedTuple):
    adjunction: Adjunction
    initials: tuple
    hypotheses: dict


def gaft_left_adjoint(G: Functor, solution_sets: dict | None = None, caps: Caps | None = None) -> GaftReport:
    """Left adjoint via weakly initial sets in each (a ⇒ G).

    ``solution_sets[a]`` lists pairs ``(b, h)`` with h: a -> G(b); without it
    every object of the comma category is used.
    """
    caps = resolve(caps)
    B, A = G.source, G.target
    fobj, eta, initials = [], [], []
    for a in range(A.n_objects):
        cr = comma_under(a, G, caps)
        if solution_sets is None or a not in solution_sets:
            S = list(range(cr.category.n_objects))
        else:
            S = [cr.triples.index((0, h, b)) for b, h in solution_sets[a]]
        res = initial_via_weakly_initial(cr.category, S, caps)
        _, h, b = cr.triples[res.initial]
        fobj.append(b)
        eta.append(h)
        initials.append(res.initial)
    fmor = []
    for f, m in enumerate(A.morphisms):
        target = A.composition[(eta[m.cod], f)]
        (q,) = [q for q in B.hom(fobj[m.dom], fobj[m.cod]) if A.composition[(G.fmap(q), eta[m.dom])] == target]
        fmor.append(q)
    F = validate_functor(A, B, fobj, fmor)
    counit = []
    for b in range(B.n_objects):
        gb = G(b)
        (p,) = [p for p in B.hom(fobj[gb], b) if A.composition[(G.fmap(p), eta[gb])] == A.identities[gb]]
        counit.append(p)
    adj = adjunction_from_unit_counit(F, G, eta, counit)
    hypotheses = {
        "locally_small": "vacuous: hom-sets are finite",
        "complete": "not assumed: only the limits used by the argument were computed",
        "preserves_limits": "not assumed: initial objects were found directly in each comma category",
        "solution_set": "supplied" if solution_sets else "vacuous: all comma objects used",
    }
    return GaftReport(adj, tuple(initials), hypotheses)


# preservation by adjoints


def adjoint_preservation_audit(adj: Adjunction, shapes, caps: Caps | None = None, seed: int = 0) -> dict:
    """Right adjoints preserve limits and left adjoints colimits; any failure is a bug."""
    right = preservation_report(adj.right, shapes, "limit", caps, seed)
    left = preservation_report(adj.left, shapes, "colimit", caps, seed)
    for rec in right + left:
        assert rec.preserves, f"adjoint failed to preserve a {rec.kind} of shape {rec.shape}"
    return {"right_limits": right, "left_colimits": left}


# Δ ⊣ lim


class DiagonalLimit(NamedTuple):
    adjunction: Adjunction
    functor_category: object
    diagonal: Functor
    lim: Functor


def diagonal_limit_adjunction(A: FiniteCategory, I: FiniteCategory, caps: Caps | None = None) -> DiagonalLimit:
    """Δ: A -> [I, A] with its right adjoint lim, when every I-shaped limit exists."""
    caps = resolve(caps)
    delta, fc = diagonal_functor(A, I, caps)
    cones = []
    for D in fc.functors:
        c = limit(D, caps)
        if c is None:
            raise LimitMissing(f"diagram {D.object_map} has no limit")
        cones.append(c)
    lim_mor = []
    for alpha in fc.nats:
        src, tgt = fc.index_of(alpha.source), fc.index_of(alpha.target)
        legs = tuple(A.composition[(alpha[i], p)] for i, p in enumerate(cones[src].legs))
        (h,) = [h for h in A.hom(cones[src].vertex, cones[tgt].vertex)
                if all(A.composition[(p, h)] == leg for p, leg in zip(cones[tgt].legs, legs))]
        lim_mor.append(h)
    lim = validate_functor(fc.category, A, [c.vertex for c in cones], lim_mor)
    unit = []
    for x in range(A.n_objects):
        c = cones[delta(x)]
        const_cone = Cone(c.diagram, x, tuple(A.identities[x] for _ in range(I.n_objects)))
        (h,) = mediating_maps(const_cone, c)
        unit.append(h)
    counit = []
    for k, D in enumerate(fc.functors):
        c = cones[k]
        const = fc.functors[delta(c.vertex)]
        counit.append(fc.index_of_nat(NatTransformation(const, D, c.legs)))
    adj = adjunction_from_unit_counit(delta, lim, unit, counit)
    return DiagonalLimit(adj, fc, delta, lim)


def compose_adjunctions(inner: Adjunction, outer: Adjunction) -> Adjunction:
    """Paste F ⊣ G (A -> B) and F' ⊣ G' (B -> C) into F'F ⊣ GG'."""
    F, G = inner.left, inner.right
    F2, G2 = outer.left, outer.right
    if not F.target.same_tables(F2.source):
        raise BoundaryMismatch("adjunctions are not composable")
    A, C = F.source, F2.target
    unit = [A.composition[(G.fmap(outer.unit[F(a)]), inner.unit[a])] for a in range(A.n_objects)]
    counit = [C.composition[(outer.counit[c], F2.fmap(inner.counit[G2(c)]))] for c in range(C.n_objects)]
    return adjunction_from_unit_counit(compose_functors(F2, F), compose_functors(G, G2), unit, counit)


def identity_adjunction(C: FiniteCategory) -> Adjunction:
    ident = identity_functor(C)
    return adjunction_from_unit_counit(ident, ident, list(C.identities), list(C.identities))
