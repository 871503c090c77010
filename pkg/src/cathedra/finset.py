"""Finite sets, functions, and Set-valued diagrams.

Constructed sets get deterministic element names: products are tuples, sums
are ``(injection, atom)`` pairs and quotient classes are :class:`Cls`
tokens named after their least member.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, NamedTuple, Sequence

from .caps import Caps, resolve
from .category import FiniteCategory
from .errors import (
    CapExceeded,
    CompositionNotPreserved,
    DomCodMismatch,
    IdentityNotPreserved,
    InvalidFunction,
    UnknownAtom,
)

TRUE = "⊤"
FALSE = "⊥"


@dataclass(frozen=True, order=True)
class Cls:
    """Quotient class token, named by its least (object index, atom) member."""

    obj: int
    atom: Any

    def __repr__(self):
        return f"[{self.obj}:{self.atom!r}]"


class FinSet:
    __slots__ = ("elements", "_index", "_frozen")

    def __init__(self, elements: Iterable = ()):
        elements = tuple(elements)
        index = {}
        for i, x in enumerate(elements):
            if x in index:
                raise InvalidFunction(f"duplicate atom {x!r} in finite set")
            index[x] = i
        self.elements = elements
        self._index = index
        self._frozen = frozenset(elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownAtom(f"{x!r} is not an element") from None

    def __getitem__(self, i):
        return self.elements[i]

    def __eq__(self, other):
        if not isinstance(other, FinSet):
            return NotImplemented
        return self._frozen == other._frozen

    def __hash__(self):
        return hash(self._frozen)

    def __repr__(self):
        return "{" + ", ".join(repr(x) for x in self.elements) + "}"


class FinFunction:
    __slots__ = ("dom", "cod", "assignment")

    def __init__(self, dom: FinSet, cod: FinSet, assignment: Sequence[int]):
        assignment = tuple(assignment)
        if len(assignment) != len(dom):
            raise InvalidFunction(f"function is not total: {len(assignment)} images for {len(dom)} elements")
        if any(not 0 <= j < len(cod) for j in assignment):
            raise InvalidFunction("image index out of range")
        self.dom = dom
        self.cod = cod
        self.assignment = assignment

    @classmethod
    def from_mapping(cls, dom: FinSet, cod: FinSet, mapping) -> "FinFunction":
        if callable(mapping):
            return cls(dom, cod, [cod.index(mapping(x)) for x in dom])
        missing = [x for x in dom if x not in mapping]
        if missing:
            raise InvalidFunction(f"no image given for {missing[0]!r}")
        return cls(dom, cod, [cod.index(mapping[x]) for x in dom])

    @classmethod
    def identity(cls, s: FinSet) -> "FinFunction":
        return cls(s, s, range(len(s)))

    def __call__(self, x):
        return self.cod.elements[self.assignment[self.dom.index(x)]]

    def at(self, i: int) -> int:
        return self.assignment[i]

    def after(self, f: "FinFunction") -> "FinFunction":
        """self∘f"""
        if f.cod != self.dom:
            raise InvalidFunction("functions are not composable")
        if f.cod.elements == self.dom.elements:
            return FinFunction(f.dom, self.cod, [self.assignment[j] for j in f.assignment])
        return FinFunction.from_mapping(f.dom, self.cod, lambda x: self(f(x)))

    def as_dict(self) -> dict:
        return {x: self.cod.elements[j] for x, j in zip(self.dom.elements, self.assignment)}

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(self(x) == x for x in self.dom)

    def __eq__(self, other):
        if not isinstance(other, FinFunction):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset(self.as_dict().items())))

    def __repr__(self):
        return "FinFunction(" + ", ".join(f"{x!r}->{y!r}" for x, y in self.as_dict().items()) + ")"


def all_functions(dom: FinSet, cod: FinSet):
    for images in itertools.product(range(len(cod)), repeat=len(dom)):
        yield FinFunction(dom, cod, images)


class FunctionProps(NamedTuple):
    injective: bool
    surjective: bool
    inverse: FinFunction | None


def function_props(f: FinFunction) -> FunctionProps:
    fibres = [0] * len(f.cod)
    for j in f.assignment:
        fibres[j] += 1
    injective = all(c <= 1 for c in fibres)
    surjective = all(c >= 1 for c in fibres)
    inverse = None
    if injective and surjective:
        back = [0] * len(f.cod)
        for i, j in enumerate(f.assignment):
            back[j] = i
        inverse = FinFunction(f.cod, f.dom, back)
    return FunctionProps(injective, surjective, inverse)


# equivalence relations


class Partition:
    __slots__ = ("carrier", "blocks", "_block_of")

    def __init__(self, carrier: FinSet, blocks: Sequence[Sequence]):
        self.carrier = carrier
        self.blocks = tuple(tuple(b) for b in blocks)
        self._block_of = {}
        for k, b in enumerate(self.blocks):
            if not b:
                raise InvalidFunction("empty block in partition")
            for x in b:
                if x in self._block_of or x not in carrier:
                    raise InvalidFunction(f"blocks do not partition the carrier at {x!r}")
                self._block_of[x] = k
        if len(self._block_of) != len(carrier):
            raise InvalidFunction("blocks do not cover the carrier")

    def block_of(self, x) -> int:
        return self._block_of[x]

    def representative(self, x):
        return self.blocks[self._block_of[x]][0]

    def related(self, x, y) -> bool:
        return self._block_of[x] == self._block_of[y]

    def induced_relation(self):
        return [(x, y) for b in self.blocks for x in b for y in b]

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.carrier == other.carrier and {frozenset(b) for b in self.blocks} == {
            frozenset(b) for b in other.blocks
        }

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return "Partition(" + " | ".join(", ".join(map(repr, b)) for b in self.blocks) + ")"


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        i, j = self.find(i), self.find(j)
        if i != j:
            # least index stays the root
            if i < j:
                self.parent[j] = i
            else:
                self.parent[i] = j


def generate_equivalence(carrier: FinSet, pairs: Iterable[tuple]) -> Partition:
    """Finest partition whose relation contains every pair."""
    uf = _UnionFind(len(carrier))
    for x, y in pairs:
        uf.union(carrier.index(x), carrier.index(y))
    blocks: dict[int, list] = {}
    for i, x in enumerate(carrier):
        blocks.setdefault(uf.find(i), []).append(x)
    return Partition(carrier, [blocks[r] for r in sorted(blocks)])


# set-valued functors


class SetFunctor:
    """A functor from a finite category into finite sets (covariant)."""

    def __init__(self, source: FiniteCategory, values: Sequence[FinSet], actions: Sequence[FinFunction]):
        self.source = source
        self.values = tuple(values)
        self.actions = tuple(actions)

    def __call__(self, a: int) -> FinSet:
        return self.values[a]

    def act(self, f: int) -> FinFunction:
        return self.actions[f]

    @cached_property
    def _key(self):
        return tuple(self.values), tuple(self.actions)

    def __eq__(self, other):
        if not isinstance(other, SetFunctor):
            return NotImplemented
        return self.source.same_tables(other.source) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<SetFunctor sizes={[len(v) for v in self.values]}>"


def validate_set_functor(source: FiniteCategory, values, actions, cls=SetFunctor):
    values = tuple(v if isinstance(v, FinSet) else FinSet(v) for v in values)
    if len(values) != source.n_objects or len(actions) != source.n_morphisms:
        raise DomCodMismatch("set functor tables do not match the source category")
    for f, act in enumerate(actions):
        m = source.morphisms[f]
        if act.dom != values[m.dom] or act.cod != values[m.cod]:
            raise DomCodMismatch(f"action of {source.describe(f)} has the wrong domain or codomain", witness=f)
    for a, e in enumerate(source.identities):
        if not actions[e].is_identity():
            raise IdentityNotPreserved(f"identity on {source.objects[a]} does not act as the identity", witness=a)
    for (g, f), h in source.composition.items():
        if actions[g].after(actions[f]) != actions[h]:
            raise CompositionNotPreserved(
                f"action of {source.label(h)} differs from composite of actions", witness=(g, f)
            )
    return cls(source, values, actions)


def set_functor_from_maps(source: FiniteCategory, values, mappings: dict, cls=SetFunctor):
    """Build a set functor from element mappings on some morphisms.

    Identities are implicit and missing morphisms are filled in when they are
    composites of given ones.
    """
    values = [v if isinstance(v, FinSet) else FinSet(v) for v in values]
    actions: dict[int, FinFunction] = {}
    for a, e in enumerate(source.identities):
        actions[e] = FinFunction.identity(values[a])
    for f, mp in mappings.items():
        m = source.morphisms[f]
        actions[f] = mp if isinstance(mp, FinFunction) else FinFunction.from_mapping(values[m.dom], values[m.cod], mp)
    changed = True
    while changed and len(actions) < source.n_morphisms:
        changed = False
        for (g, f), h in source.composition.items():
            if h not in actions and g in actions and f in actions:
                actions[h] = actions[g].after(actions[f])
                changed = True
    missing = [f for f in range(source.n_morphisms) if f not in actions]
    if missing:
        raise DomCodMismatch(f"no action given for {source.describe(missing[0])}", witness=missing[0])
    return validate_set_functor(source, values, [actions[f] for f in range(source.n_morphisms)], cls=cls)


def constant_set_functor(source: FiniteCategory, s: FinSet) -> SetFunctor:
    ident = FinFunction.identity(s)
    return SetFunctor(source, [s] * source.n_objects, [ident] * source.n_morphisms)


# explicit limit and colimit formulas


class SetCone(NamedTuple):
    diagram: SetFunctor
    vertex: FinSet
    legs: tuple


class SetCocone(NamedTuple):
    diagram: SetFunctor
    vertex: FinSet
    legs: tuple


def compatible_families(D: SetFunctor, caps: Caps | None = None) -> list[tuple]:
    """All families (x_I) with (Du)(x_I) = x_J for every u: I -> J.

    Objects are filled in index order; one that receives an arrow from an
    earlier object has its value forced, so only the free objects are searched.
    """
    caps = resolve(caps)
    I = D.source
    checks: list[list[int]] = [[] for _ in range(I.n_objects)]
    forced: list[int | None] = [None] * I.n_objects
    for u, m in enumerate(I.morphisms):
        if I.is_identity(u):
            continue
        k = max(m.dom, m.cod)
        checks[k].append(u)
        if m.dom < m.cod and forced[m.cod] is None:
            forced[m.cod] = u
    size = math.prod(len(D.values[i]) for i in range(I.n_objects) if forced[i] is None)
    if size > caps.max_enum:
        raise CapExceeded(f"search over {size} partial families exceeds cap {caps.max_enum}")
    families = []
    current: list[int] = []

    def go(k):
        if k == I.n_objects:
            families.append(tuple(D.values[i].elements[current[i]] for i in range(k)))
            return
        u0 = forced[k]
        options = [D.actions[u0].at(current[I.dom(u0)])] if u0 is not None else range(len(D.values[k]))
        for x in options:
            current.append(x)
            if all(D.actions[u].at(current[I.dom(u)]) == current[I.cod(u)] for u in checks[k]):
                go(k + 1)
            current.pop()

    go(0)
    return families


def limit_finset(D: SetFunctor, caps: Caps | None = None) -> SetCone:
    vertex = FinSet(compatible_families(D, caps))
    legs = tuple(
        FinFunction(vertex, D.values[j], [D.values[j].index(fam[j]) for fam in vertex])
        for j in range(D.source.n_objects)
    )
    return SetCone(D, vertex, legs)


def disjoint_sum(sets: Sequence[FinSet]) -> tuple[FinSet, tuple[FinFunction, ...]]:
    total = FinSet((i, x) for i, s in enumerate(sets) for x in s)
    injections = tuple(FinFunction(s, total, [total.index((i, x)) for x in s]) for i, s in enumerate(sets))
    return total, injections


def cartesian_product(sets: Sequence[FinSet], caps: Caps | None = None):
    caps = resolve(caps)
    size = math.prod(len(s) for s in sets)
    if size > caps.max_enum:
        raise CapExceeded(f"product of cardinalities {size} exceeds cap {caps.max_enum}")
    total = FinSet(itertools.product(*[s.elements for s in sets]))
    projections = tuple(
        FinFunction(total, s, [s.index(t[i]) for t in total]) for i, s in enumerate(sets)
    )
    return total, projections


def colimit_finset(D: SetFunctor, caps: Caps | None = None) -> SetCocone:
    caps = resolve(caps)
    total_size = sum(len(v) for v in D.values)
    if total_size > caps.max_enum:
        raise CapExceeded(f"disjoint sum of size {total_size} exceeds cap {caps.max_enum}")
    carrier, _ = disjoint_sum(D.values)
    pairs = []
    for u, m in enumerate(D.source.morphisms):
        act = D.actions[u]
        for x in D.values[m.dom]:
            pairs.append(((m.dom, x), (m.cod, act(x))))
    partition = generate_equivalence(carrier, pairs)
    tokens = [Cls(*block[0]) for block in partition.blocks]
    vertex = FinSet(tokens)
    legs = tuple(
        FinFunction(s, vertex, [partition.block_of((i, x)) for x in s]) for i, s in enumerate(D.values)
    )
    return SetCocone(D, vertex, legs)


def truth_values() -> FinSet:
    return FinSet([TRUE, FALSE])


def characteristic_function(subset, carrier: FinSet) -> FinFunction:
    subset = set(subset)
    return FinFunction.from_mapping(carrier, truth_values(), lambda x: TRUE if x in subset else FALSE)
