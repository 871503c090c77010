"""Finite categories as explicit tables.

Objects and morphisms are identified by position; labels are display-only.
Every constructor in this module routes its output through
:func:`validate_category`, so nothing unlawful escapes.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

from .caps import Caps, resolve
from .errors import (
    AssociativityViolation,
    CapExceeded,
    CompositeBoundaryError,
    DuplicateLabel,
    IdentityViolation,
    IndexOutOfRange,
    MissingComposite,
    NotAssociative,
    NotReflexive,
    NotTransitive,
    NotUnital,
)


class Morphism(NamedTuple):
    dom: int
    cod: int
    label: str


class FiniteCategory:
    """A validated finite category. Build via :func:`validate_category`."""

    def __init__(self, objects, morphisms, identities, composition, name=None):
        self.objects: tuple[str, ...] = tuple(objects)
        self.morphisms: tuple[Morphism, ...] = tuple(Morphism(*m) for m in morphisms)
        self.identities: tuple[int, ...] = tuple(identities)
        self.composition: Mapping[tuple[int, int], int] = MappingProxyType(dict(composition))
        self.name = name

    # basic accessors

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def dom(self, f: int) -> int:
        return self.morphisms[f].dom

    def cod(self, f: int) -> int:
        return self.morphisms[f].cod

    def identity(self, a: int) -> int:
        return self.identities[a]

    def is_identity(self, f: int) -> bool:
        return self.identities[self.morphisms[f].dom] == f

    def compose(self, *fs: int) -> int:
        """``compose(h, g, f)`` is h∘g∘f; raises KeyError if not composable."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.composition[(g, result)]
        return result

    def label(self, f: int) -> str:
        return self.morphisms[f].label

    def describe(self, f: int) -> str:
        m = self.morphisms[f]
        return f"{m.label}: {self.objects[m.dom]} -> {self.objects[m.cod]}"

    @cached_property
    def _homs(self) -> dict[tuple[int, int], tuple[int, ...]]:
        homs: dict[tuple[int, int], list[int]] = {}
        for i, m in enumerate(self.morphisms):
            homs.setdefault((m.dom, m.cod), []).append(i)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._homs.get((a, b), ())

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.objects]
        for i, m in enumerate(self.morphisms):
            out[m.dom].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def _into(self) -> tuple[tuple[int, ...], ...]:
        into: list[list[int]] = [[] for _ in self.objects]
        for i, m in enumerate(self.morphisms):
            into[m.cod].append(i)
        return tuple(tuple(x) for x in into)

    def out_of(self, a: int) -> tuple[int, ...]:
        return self._out[a]

    def into(self, b: int) -> tuple[int, ...]:
        return self._into[b]

    def composable_pairs(self):
        """Yield (g, f) with cod(f) = dom(g)."""
        for f, m in enumerate(self.morphisms):
            for g in self._out[m.cod]:
                yield g, f

    def non_identities(self) -> list[int]:
        return [f for f in range(self.n_morphisms) if not self.is_identity(f)]

    @cached_property
    def _object_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.objects)}

    def object_index(self, label) -> int:
        return self._object_index[str(label)]

    def morphism_index(self, label: str) -> int:
        for i, m in enumerate(self.morphisms):
            if m.label == label:
                return i
        raise KeyError(label)

    @cached_property
    def op(self) -> "FiniteCategory":
        return opposite(self)

    # comparisons

    def same_tables(self, other: "FiniteCategory") -> bool:
        """Structural equality ignoring all labels."""
        return (
            self.n_objects == other.n_objects
            and [m[:2] for m in self.morphisms] == [m[:2] for m in other.morphisms]
            and self.identities == other.identities
            and dict(self.composition) == dict(other.composition)
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.same_tables(other)
        )

    def __hash__(self):
        return hash((self.objects, self.morphisms, self.identities))

    def __repr__(self):
        name = f"{self.name} " if self.name else ""
        return f"<FiniteCategory {name}{self.n_objects} objects, {self.n_morphisms} morphisms>"

    def is_preorder(self) -> bool:
        return all(len(v) <= 1 for v in self._homs.values())


def validate_category(objects, morphisms, identities, composition, name=None) -> FiniteCategory:
    """Check raw tables against the category axioms and wrap them.

    ``composition`` maps ``(g, f)`` to the index of g∘f and must be defined
    exactly on the pairs with cod(f) = dom(g).
    """
    objects = tuple(str(o) for o in objects)
    morphisms = tuple(Morphism(int(m[0]), int(m[1]), str(m[2])) for m in morphisms)
    identities = tuple(identities)
    n, m = len(objects), len(morphisms)

    if len(set(objects)) != n:
        dup = next(o for o in objects if objects.count(o) > 1)
        raise DuplicateLabel(f"object label {dup!r} used twice")
    if len(identities) != n:
        raise IndexOutOfRange(f"expected {n} identities, got {len(identities)}")
    for i, mor in enumerate(morphisms):
        if not (0 <= mor.dom < n and 0 <= mor.cod < n):
            raise IndexOutOfRange(f"morphism {i} has endpoints out of range", witness=i)
    for a, e in enumerate(identities):
        if not 0 <= e < m:
            raise IndexOutOfRange(f"identity of object {a} out of range", witness=a)
    for (g, f), h in composition.items():
        if not (0 <= g < m and 0 <= f < m and 0 <= h < m):
            raise IndexOutOfRange(f"composition entry {(g, f)} -> {h} out of range", witness=(g, f))
        if morphisms[f].cod != morphisms[g].dom:
            raise CompositeBoundaryError(
                f"composite {g}∘{f} given for a non-composable pair", witness=(g, f)
            )

    for a, e in enumerate(identities):
        if morphisms[e].dom != a or morphisms[e].cod != a:
            raise IdentityViolation(f"identity of object {a} is not an endomorphism of it", witness=a)

    out: list[list[int]] = [[] for _ in range(n)]
    for i, mor in enumerate(morphisms):
        out[mor.dom].append(i)
    for f, mf in enumerate(morphisms):
        for g in out[mf.cod]:
            h = composition.get((g, f))
            if h is None:
                raise MissingComposite(f"no composite recorded for {g}∘{f}", witness=(g, f))
            if morphisms[h].dom != mf.dom or morphisms[h].cod != morphisms[g].cod:
                raise CompositeBoundaryError(
                    f"composite {g}∘{f} = {h} has the wrong endpoints", witness=(g, f)
                )

    for f, mf in enumerate(morphisms):
        if composition[(f, identities[mf.dom])] != f or composition[(identities[mf.cod], f)] != f:
            raise IdentityViolation(f"identity law fails at morphism {f}", witness=f)

    for f, mf in enumerate(morphisms):
        for g in out[mf.cod]:
            gf = composition[(g, f)]
            for h in out[morphisms[g].cod]:
                if composition[(composition[(h, g)], f)] != composition[(h, gf)]:
                    raise AssociativityViolation(
                        f"(h∘g)∘f != h∘(g∘f) for (h, g, f) = {(h, g, f)}", witness=(h, g, f)
                    )

    return FiniteCategory(objects, morphisms, identities, composition, name=name)


def _assemble(objects, morphisms, identities, composition, name=None) -> FiniteCategory:
    """Reorder so that the identity on object i sits at index i, then validate."""
    order = list(identities) + [i for i in range(len(morphisms)) if i not in set(identities)]
    new_index = {old: new for new, old in enumerate(order)}
    morphisms = [morphisms[old] for old in order]
    comp = {(new_index[g], new_index[f]): new_index[h] for (g, f), h in composition.items()}
    return validate_category(objects, morphisms, range(len(objects)), comp, name=name)


def _check_size(n_objects, n_morphisms, caps: Caps, what: str):
    if n_objects > caps.max_objects or n_morphisms > caps.max_morphisms:
        raise CapExceeded(
            f"{what}: {n_objects} objects / {n_morphisms} morphisms exceeds cap "
            f"{caps.max_objects} / {caps.max_morphisms}"
        )


# basic examples


def discrete(n_or_labels, name=None) -> FiniteCategory:
    labels = [str(i) for i in range(n_or_labels)] if isinstance(n_or_labels, int) else list(n_or_labels)
    morphisms = [(i, i, f"id_{lab}") for i, lab in enumerate(labels)]
    comp = {(i, i): i for i in range(len(labels))}
    return validate_category(labels, morphisms, range(len(labels)), comp, name=name)


def terminal_category() -> FiniteCategory:
    return discrete(["*"], name="1")


def arrow_category(a="a", b="b", f="f") -> FiniteCategory:
    """The category with two objects and one non-identity arrow a -> b."""
    morphisms = [(0, 0, f"id_{a}"), (1, 1, f"id_{b}"), (0, 1, f)]
    comp = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}
    return validate_category([a, b], morphisms, [0, 1], comp, name="2")


def opposite(C: FiniteCategory) -> FiniteCategory:
    morphisms = [(m.cod, m.dom, m.label) for m in C.morphisms]
    comp = {(f, g): h for (g, f), h in C.composition.items()}
    name = f"{C.name}^op" if C.name else None
    return validate_category(C.objects, morphisms, C.identities, comp, name=name)


def product_category(C: FiniteCategory, D: FiniteCategory, caps: Caps | None = None) -> FiniteCategory:
    caps = resolve(caps)
    _check_size(C.n_objects * D.n_objects, C.n_morphisms * D.n_morphisms, caps, "product category")
    objects = [f"({a},{b})" for a in C.objects for b in D.objects]
    nd = D.n_objects
    m = D.n_morphisms
    morphisms = []
    for f, mf in enumerate(C.morphisms):
        for g, mg in enumerate(D.morphisms):
            morphisms.append((mf.dom * nd + mg.dom, mf.cod * nd + mg.cod, f"({mf.label},{mg.label})"))
    identities = [C.identities[a] * m + D.identities[b] for a in range(C.n_objects) for b in range(nd)]
    comp = {}
    for (f2, f1), f3 in C.composition.items():
        for (g2, g1), g3 in D.composition.items():
            comp[(f2 * m + g2, f1 * m + g1)] = f3 * m + g3
    return _assemble(objects, morphisms, identities, comp)


def product_morphism_index(C: FiniteCategory, D: FiniteCategory) -> dict[tuple[int, int], int]:
    """Where the pair (f, g) sits among the morphisms of ``product_category(C, D)``."""
    m = D.n_morphisms
    identities = [C.identities[a] * m + D.identities[b] for a in range(C.n_objects) for b in range(D.n_objects)]
    ident_set = set(identities)
    order = identities + [k for k in range(C.n_morphisms * m) if k not in ident_set]
    return {(old // m, old % m): new for new, old in enumerate(order)}


def from_monoid(table: Sequence[Sequence[int]], unit: int, labels=None, object_label="*") -> FiniteCategory:
    """One-object category whose composite ``g∘f`` is ``table[g][f]``."""
    k = len(table)
    if any(len(row) != k for row in table):
        raise IndexOutOfRange("multiplication table is not square")
    if not 0 <= unit < k or any(not 0 <= x < k for row in table for x in row):
        raise IndexOutOfRange("multiplication table entry out of range")
    labels = [str(x) for x in labels] if labels is not None else [str(i) for i in range(k)]
    for x in range(k):
        if table[unit][x] != x or table[x][unit] != x:
            raise NotUnital(f"element {unit} is not a two-sided unit (fails at {x})", witness=x)
    for a, b, c in itertools.product(range(k), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAssociative(f"(a·b)·c != a·(b·c) at {(a, b, c)}", witness=(a, b, c))
    morphisms = [(0, 0, labels[i]) for i in range(k)]
    comp = {(g, f): table[g][f] for g in range(k) for f in range(k)}
    return _assemble([object_label], morphisms, [unit], comp)


def cyclic_monoid_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def from_poset(relation: Sequence[Sequence[bool]], labels=None, name=None) -> FiniteCategory:
    """Preorder as a category; ``relation[i][j]`` means i <= j, i.e. an arrow i -> j."""
    n = len(relation)
    labels = [str(x) for x in labels] if labels is not None else [str(i) for i in range(n)]
    for i in range(n):
        if not relation[i][i]:
            raise NotReflexive(f"{labels[i]} is not related to itself", witness=i)
    for i, j, k in itertools.product(range(n), repeat=3):
        if relation[i][j] and relation[j][k] and not relation[i][k]:
            raise NotTransitive(f"{labels[i]} <= {labels[j]} <= {labels[k]} but not {labels[i]} <= {labels[k]}",
                                witness=(i, j, k))
    index = {}
    morphisms = []
    for i in range(n):
        for j in range(n):
            if relation[i][j]:
                index[(i, j)] = len(morphisms)
                lab = f"id_{labels[i]}" if i == j else f"{labels[i]}<={labels[j]}"
                morphisms.append((i, j, lab))
    comp = {}
    for (j, k), g in index.items():
        for i in range(n):
            if (i, j) in index:
                comp[(g, index[(i, j)])] = index[(i, k)]
    identities = [index[(i, i)] for i in range(n)]
    return _assemble(labels, morphisms, identities, comp, name=name)


def poset_relation(elements: Sequence, leq) -> list[list[bool]]:
    return [[bool(leq(a, b)) for b in elements] for a in elements]


def divisor_poset(n: int) -> FiniteCategory:
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    return from_poset(poset_relation(divisors, lambda a, b: b % a == 0), divisors, name=f"Div{n}")


def chain(n: int) -> FiniteCategory:
    return from_poset(poset_relation(range(n), lambda a, b: a <= b), name=f"chain{n}")


def set_label(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s, key=_atom_key)) + "}"


def _atom_key(x):
    s = str(x)
    return (0, int(s), s) if s.lstrip("-").isdigit() else (1, 0, s)


def subset_poset(sets: Iterable[Iterable], name=None) -> FiniteCategory:
    """Poset of the given sets ordered by inclusion, labelled like ``{1,2}``."""
    sets = [frozenset(s) for s in sets]
    return from_poset(poset_relation(sets, lambda a, b: a <= b), [set_label(s) for s in sets], name=name)


def power_set_poset(atoms: Sequence, name=None) -> FiniteCategory:
    atoms = list(atoms)
    subsets = [frozenset(c) for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]
    return subset_poset(subsets, name=name)


# presented categories


def from_presentation(objects, arrows, relations, cap: int = 512, name=None) -> FiniteCategory:
    """Category presented by a finite graph and path equations.

    ``arrows`` is a list of ``(label, dom, cod)`` with endpoint labels.  Each
    relation is a pair of paths, a path being a sequence of arrow labels in
    composition order (``["g", "f"]`` is g∘f); ``"id_<object>"`` stands for an
    identity.  Congruence classes are enumerated by coincidence processing on
    the right Cayley graph; if more than ``cap`` classes are alive the
    presentation is not proven finite and :class:`CapExceeded` is raised.
    """
    objects = [str(o) for o in objects]
    obj_index = {o: i for i, o in enumerate(objects)}
    gens = []
    gen_index = {}
    for label, d, c in arrows:
        if label in gen_index:
            raise DuplicateLabel(f"arrow label {label!r} used twice")
        if str(d) not in obj_index or str(c) not in obj_index:
            raise IndexOutOfRange(f"arrow {label} has an unknown endpoint")
        gen_index[label] = len(gens)
        gens.append((obj_index[str(d)], obj_index[str(c)]))

    def to_path(path):
        # returned in application order: first generator applied first
        seq = []
        endpoint = None
        for label in reversed(list(path)):
            if label in gen_index:
                g = gen_index[label]
                if seq and gens[seq[-1]][1] != gens[g][0]:
                    raise CompositeBoundaryError(f"path {'.'.join(path)} is not composable")
                seq.append(g)
            elif label.startswith("id_") and label[3:] in obj_index:
                o = obj_index[label[3:]]
                if seq and gens[seq[-1]][1] != o:
                    raise CompositeBoundaryError(f"path {'.'.join(path)} is not composable")
                endpoint = endpoint if seq else o
            else:
                raise IndexOutOfRange(f"unknown arrow {label!r} in relation")
        if seq:
            return gens[seq[0]][0], gens[seq[-1]][1], tuple(seq)
        return endpoint, endpoint, ()

    rels = []
    for lhs, rhs in relations:
        dl, cl, pl = to_path(lhs)
        dr, cr, pr = to_path(rhs)
        if dl is None:
            dl = cl = dr
        if dr is None:
            dr = cr = dl
        if (dl, cl) != (dr, cr):
            raise CompositeBoundaryError(f"relation {lhs} = {rhs} equates non-parallel paths")
        rels.append((dl, pl, pr))

    budget = max(4 * cap, cap + 64)
    graph = _CayleyGraph(len(objects), gens, budget)
    graph.enumerate(rels)
    classes = graph.live()
    if len(classes) > cap:
        raise CapExceeded(f"presentation has more than {cap} morphism classes", witness=len(classes))

    reps = graph.representatives()
    order = sorted(classes, key=lambda c: (not graph.is_identity(c), graph.source[c], len(reps[c]), reps[c]))
    index = {c: i for i, c in enumerate(order)}

    def label(c):
        if not reps[c]:
            return f"id_{objects[graph.source[c]]}"
        return ".".join(arrows[g][0] for g in reversed(reps[c]))

    morphisms = [(graph.source[c], graph.target[c], label(c)) for c in order]
    comp = {}
    for f in order:
        for g in order:
            if graph.source[g] == graph.target[f]:
                comp[(index[g], index[f])] = index[graph.walk(f, reps[g])]
    for c in order:
        for g_idx in range(len(gens)):
            if gens[g_idx][0] == graph.target[c]:
                if graph.step(c, g_idx) != graph.walk(c, reps[graph.generator_class(g_idx)]):
                    raise AssociativityViolation("presentation enumeration is inconsistent")
    cat = validate_category(objects, morphisms, list(range(len(objects))), comp, name=name)
    for d, pl, pr in rels:
        if graph.walk(graph.ident[d], pl) != graph.walk(graph.ident[d], pr):
            raise AssociativityViolation("relation fails in enumerated category")
    return cat


class _CayleyGraph:
    """Right Cayley graph of a category presentation with coincidence merging."""

    def __init__(self, n_objects, gens, budget):
        self.gens = gens
        self.budget = budget
        self.parent: list[int] = []
        self.edges: list[dict[int, int]] = []
        self.source: list[int] = []
        self.target: list[int] = []
        self.alive = 0
        self.out = [[g for g, (d, _) in enumerate(gens) if d == o] for o in range(n_objects)]
        self.ident = [self._new(o, o) for o in range(n_objects)]

    def _new(self, src, tgt):
        self.parent.append(len(self.parent))
        self.edges.append({})
        self.source.append(src)
        self.target.append(tgt)
        self.alive += 1
        if self.alive > self.budget:
            raise CapExceeded("presentation not proven finite within the cap", witness=self.alive)
        return len(self.parent) - 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def is_identity(self, c):
        return self.find(self.ident[self.source[c]]) == c

    def step(self, node, g):
        node = self.find(node)
        nxt = self.edges[node].get(g)
        return None if nxt is None else self.find(nxt)

    def define(self, node, g):
        node = self.find(node)
        nxt = self.step(node, g)
        if nxt is None:
            nxt = self._new(self.source[node], self.gens[g][1])
            self.edges[node][g] = nxt
        return nxt

    def trace_define(self, node, path):
        for g in path:
            node = self.define(node, g)
        return self.find(node)

    def walk(self, node, path):
        node = self.find(node)
        for g in path:
            node = self.step(node, g)
        return node

    def merge(self, a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            keep, gone = min(x, y), max(x, y)
            self.parent[gone] = keep
            self.alive -= 1
            for g, t in self.edges[gone].items():
                mine = self.edges[keep].get(g)
                if mine is None:
                    self.edges[keep][g] = t
                else:
                    queue.append((mine, t))
            self.edges[gone] = {}

    def enumerate(self, rels):
        by_object: dict[int, list] = {}
        for d, pl, pr in rels:
            by_object.setdefault(d, []).append((pl, pr))
        changed = True
        while changed:
            changed = False
            i = 0
            while i < len(self.parent):
                if self.find(i) == i:
                    for pl, pr in by_object.get(self.target[i], ()):
                        a = self.trace_define(i, pl)
                        b = self.trace_define(i, pr)
                        if a != b:
                            self.merge(a, b)
                            changed = True
                        if self.find(i) != i:
                            break
                    if self.find(i) == i:
                        for g in self.out[self.target[i]]:
                            if self.step(i, g) is None:
                                self.define(i, g)
                                changed = True
                i += 1
            # a final pass: everything defined and every relation holding at every node
            if not changed:
                for i in self.live():
                    for pl, pr in by_object.get(self.target[i], ()):
                        if self.walk(i, pl) != self.walk(i, pr):
                            changed = True

    def live(self):
        return [i for i in range(len(self.parent)) if self.find(i) == i]

    def representatives(self):
        reps = {}
        frontier = []
        for o, node in enumerate(self.ident):
            node = self.find(node)
            reps[node] = ()
            frontier.append(node)
        while frontier:
            nxt = []
            for node in frontier:
                for g in self.out[self.target[node]]:
                    t = self.step(node, g)
                    if t not in reps:
                        reps[t] = reps[node] + (g,)
                        nxt.append(t)
            frontier = nxt
        return reps

    def generator_class(self, g):
        return self.step(self.ident[self.gens[g][0]], g)


# universal objects, isomorphisms


def find_universal_object(C: FiniteCategory, kind: str = "initial") -> int | None:
    """Lowest-index initial (or terminal) object, or None."""
    candidates = universal_objects(C, kind)
    return candidates[0] if candidates else None


def universal_objects(C: FiniteCategory, kind: str = "initial") -> list[int]:
    if kind not in ("initial", "terminal"):
        raise ValueError(f"kind must be 'initial' or 'terminal', not {kind!r}")
    result = []
    for a in range(C.n_objects):
        if kind == "initial":
            ok = all(len(C.hom(a, b)) == 1 for b in range(C.n_objects))
        else:
            ok = all(len(C.hom(b, a)) == 1 for b in range(C.n_objects))
        if ok:
            result.append(a)
    return result


def inverses(C: FiniteCategory, f: int) -> list[int]:
    m = C.morphisms[f]
    return [
        g
        for g in C.hom(m.cod, m.dom)
        if C.composition[(g, f)] == C.identities[m.dom] and C.composition[(f, g)] == C.identities[m.cod]
    ]


def is_isomorphism(C: FiniteCategory, f: int) -> tuple[bool, int | None]:
    inv = inverses(C, f)
    assert len(inv) <= 1, "inverse is unique whenever it exists"
    return (True, inv[0]) if inv else (False, None)


def isomorphic_objects(C: FiniteCategory, a: int, b: int) -> int | None:
    """An isomorphism a -> b if there is one."""
    for f in C.hom(a, b):
        if is_isomorphism(C, f)[0]:
            return f
    return None


def full_subcategory(C: FiniteCategory, objs: Sequence[int]):
    """Full subcategory on ``objs`` with the morphism index embedding."""
    objs = list(objs)
    pos = {o: i for i, o in enumerate(objs)}
    mors = [f for f in range(C.n_morphisms) if C.dom(f) in pos and C.cod(f) in pos]
    # identities first so the result is in canonical layout
    mors = [C.identities[o] for o in objs] + [f for f in mors if f not in set(C.identities[o] for o in objs)]
    mpos = {f: i for i, f in enumerate(mors)}
    morphisms = [(pos[C.dom(f)], pos[C.cod(f)], C.label(f)) for f in mors]
    comp = {}
    for g in mors:
        for f in mors:
            if C.cod(f) == C.dom(g):
                comp[(mpos[g], mpos[f])] = mpos[C.composition[(g, f)]]
    sub = validate_category([C.objects[o] for o in objs], morphisms, range(len(objs)), comp)
    return sub, mors


def find_isomorphism(C: FiniteCategory, D: FiniteCategory, budget: int = 10**6):
    """Search for an isomorphism of categories C -> D.

    Returns ``(object_map, morphism_map)`` or None.  The search is bounded by
    ``budget`` candidate extensions and raises :class:`CapExceeded` past it.
    """
    if C.n_objects != D.n_objects or C.n_morphisms != D.n_morphisms:
        return None

    def signature(cat, a):
        return (len(cat.hom(a, a)), sorted(len(cat.hom(a, b)) for b in range(cat.n_objects)),
                sorted(len(cat.hom(b, a)) for b in range(cat.n_objects)))

    sig_c = [signature(C, a) for a in range(C.n_objects)]
    sig_d = [signature(D, a) for a in range(D.n_objects)]
    steps = [0]

    def morphism_maps(objmap):
        # assign morphisms hom-set by hom-set, bijectively
        fs = list(range(C.n_morphisms))
        mmap: dict[int, int] = {}
        used: set[int] = set()

        def ok(f):
            for g in C.out_of(C.cod(f)):
                if g in mmap and (g, f) in C.composition:
                    h = C.composition[(g, f)]
                    if h in mmap and D.composition[(mmap[g], mmap[f])] != mmap[h]:
                        return False
            for e in C.into(C.dom(f)):
                if e in mmap:
                    h = C.composition[(f, e)]
                    if h in mmap and D.composition[(mmap[f], mmap[e])] != mmap[h]:
                        return False
            return True

        def go(i):
            if i == len(fs):
                yield dict(mmap)
                return
            f = fs[i]
            if C.is_identity(f):
                cands = [D.identities[objmap[C.dom(f)]]]
            else:
                cands = [x for x in D.hom(objmap[C.dom(f)], objmap[C.cod(f)])
                         if x not in used and not D.is_identity(x)]
            for x in cands:
                if x in used:
                    continue
                steps[0] += 1
                if steps[0] > budget:
                    raise CapExceeded("isomorphism search exceeded its budget")
                mmap[f] = x
                used.add(x)
                if ok(f):
                    yield from go(i + 1)
                del mmap[f]
                used.discard(x)

        yield from go(0)

    def objects(i, objmap, used):
        if i == C.n_objects:
            for mm in morphism_maps(objmap):
                return tuple(objmap), tuple(mm[f] for f in range(C.n_morphisms))
            return None
        for b in range(D.n_objects):
            if b in used or sig_c[i] != sig_d[b]:
                continue
            if any(len(C.hom(i, j)) != len(D.hom(b, objmap[j])) or len(C.hom(j, i)) != len(D.hom(objmap[j], b))
                   for j in range(i)):
                continue
            steps[0] += 1
            if steps[0] > budget:
                raise CapExceeded("isomorphism search exceeded its budget")
            objmap.append(b)
            used.add(b)
            found = objects(i + 1, objmap, used)
            if found:
                return found
            objmap.pop()
            used.discard(b)
        return None

    return objects(0, [], set())
