"""catlang: a small declarative language for categories, functors and tasks.

A document is a sequence of declarations::

    category Two { objects a, b; arrow f: a -> b; }
    poset Div12 { elements 1, 2, 3, 4, 6, 12; order divides; }
    functor F: Two -> Div12 { on a = 2; on b = 4; }
    task limit product 4 6 in Div12;

``parse`` builds an AST with spans, ``serialize`` prints it back in a
canonical layout, and ``elaborate`` turns it into engine objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .caps import Caps, resolve
from .category import (
    FiniteCategory,
    _assemble,
    from_monoid,
    from_poset,
    from_presentation,
    poset_relation,
    set_label,
)
from .errors import (
    ArityError,
    CathedraError,
    LexError,
    NameClash,
    ParseError,
    UnresolvedReference,
)
from .finset import FinFunction, FinSet
from .functor import Functor, NatTransformation, validate_functor, validate_nat
from .presheaf import Presheaf, presheaf_from_maps

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
NUMBER = re.compile(r"-?[0-9]+\Z")

KEYWORDS = {
    "category", "monoid", "poset", "graph", "functor", "nat", "presheaf", "task",
    "objects", "arrow", "compose", "elements", "unit", "mul", "order", "relation", "cap",
    "on", "at", "via",
}


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, STRING, PUNCT, EOF
    value: str
    span: Span


PUNCT = ["->", "=>", "<=", "{", "}", "(", ")", ",", ";", ":", ".", "=", "-"]


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k):
        nonlocal i, line, col
        for ch in text[i:i + k]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += k

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("--", i):
            j = text.find("\n", i)
            advance((n if j < 0 else j) - i)
            continue
        start = (line, col)
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            kind, value = "NAME", text[i:j]
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            kind, value = "NUMBER", text[i:j]
        elif ch == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise LexError("unterminated string", Span(line, col, line, col + 1))
                if text[j] == "\\" and j + 1 < n:
                    buf.append(text[j + 1])
                    j += 2
                    continue
                buf.append(text[j])
                j += 1
            if j >= n:
                raise LexError("unterminated string", Span(line, col, line, col + 1))
            j += 1
            kind, value = "STRING", "".join(buf)
        else:
            for p in PUNCT:
                if text.startswith(p, i):
                    j = i + len(p)
                    kind, value = "PUNCT", p
                    break
            else:
                raise LexError(f"unexpected character {ch!r}", Span(line, col, line, col + 1))
        advance(j - i)
        tokens.append(Token(kind, value, Span(start[0], start[1], line, col)))
    tokens.append(Token("EOF", "", Span(line, col, line, col)))
    return tokens


# AST


@dataclass(frozen=True)
class Atom:
    """A label: identifier, number, quoted string or set literal ``{..}``."""

    text: str
    members: tuple | None = field(default=None, compare=False)
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class ArrowDecl:
    name: Atom
    dom: Atom
    cod: Atom
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class CategoryDecl:
    name: str
    objects: list
    arrows: list
    composes: list  # (g, f, h) meaning g . f = h
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class MonoidDecl:
    name: str
    elements: list
    unit: Atom
    muls: list  # (a, b, c) meaning a . b = c
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class PosetDecl:
    name: str
    elements: list
    order: object  # "divides", "inclusion" or a list of (a, b) pairs
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class GraphDecl:
    name: str
    objects: list
    arrows: list
    relations: list  # (path, path), each path a tuple of atoms in composition order
    cap: int | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class FunctorDecl:
    name: str
    source: Atom
    target: Atom
    assignments: list  # (x, y)
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class NatDecl:
    name: str
    source: Atom
    target: Atom
    components: list  # (object, arrow)
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class PresheafDecl:
    name: str
    base: Atom
    values: list  # (object, [atoms])
    vias: list  # (arrow, [(x, y)])
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class TaskDecl:
    kind: str
    args: list
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class SourceDocument:
    declarations: list


CATEGORY_KINDS = (CategoryDecl, MonoidDecl, PosetDecl, GraphDecl)


# parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def fail(self, expected):
        t = self.tok
        got = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"expected {' or '.join(expected)}, got {got}", t.span, expected)

    def at(self, value) -> bool:
        return self.tok.kind in ("PUNCT", "NAME") and self.tok.value == value

    def expect(self, value) -> Token:
        if not self.at(value):
            self.fail([repr(value)])
        t = self.tok
        self.pos += 1
        return t

    def accept(self, value) -> bool:
        if self.at(value):
            self.pos += 1
            return True
        return False

    def semi(self):
        """Item terminator; optional before a closing brace."""
        if not self.accept(";") and not self.at("}"):
            self.fail(["';'", "'}'"])

    def name(self) -> Token:
        if self.tok.kind != "NAME":
            self.fail(["identifier"])
        t = self.tok
        self.pos += 1
        return t

    def atom(self) -> Atom:
        t = self.tok
        if t.kind in ("NAME", "NUMBER", "STRING"):
            self.pos += 1
            return Atom(t.value, None, t.span)
        if t.kind == "PUNCT" and t.value == "-" and self.peek().kind == "NUMBER":
            self.pos += 2
            return Atom("-" + self.tokens[self.pos - 1].value, None, t.span)
        if self.at("{"):
            self.pos += 1
            members = []
            if not self.at("}"):
                members.append(self.atom())
                while self.accept(","):
                    members.append(self.atom())
            end = self.expect("}")
            texts = tuple(m.text for m in members)
            return Atom(set_label(texts), texts, _join(t.span, end.span))
        self.fail(["identifier", "number", "string", "'{'"])

    def atom_list(self) -> list:
        items = [self.atom()]
        while self.accept(","):
            items.append(self.atom())
        return items

    def document(self) -> SourceDocument:
        decls = []
        while self.tok.kind != "EOF":
            decls.append(self.decl())
        return SourceDocument(decls)

    def decl(self):
        t = self.tok
        handlers = {
            "category": self.category, "monoid": self.monoid, "poset": self.poset, "graph": self.graph,
            "functor": self.functor, "nat": self.nat, "presheaf": self.presheaf, "task": self.task,
        }
        if t.kind != "NAME" or t.value not in handlers:
            self.fail(sorted(repr(k) for k in handlers))
        self.pos += 1
        node = handlers[t.value]()
        node.span = _join(t.span, self.tokens[self.pos - 1].span)
        return node

    def arrow(self) -> ArrowDecl:
        start = self.tok.span
        name = self.atom()
        self.expect(":")
        dom = self.atom()
        self.expect("->")
        cod = self.atom()
        return ArrowDecl(name, dom, cod, start)

    def category(self):
        name = self.name().value
        self.expect("{")
        self.expect("objects")
        objects = self.atom_list() if not self.at(";") else []
        self.semi()
        arrows, composes = [], []
        while self.accept("arrow"):
            arrows.append(self.arrow())
            self.semi()
        while self.accept("compose"):
            g = self.atom()
            self.expect(".")
            f = self.atom()
            self.expect("=")
            h = self.atom()
            self.semi()
            composes.append((g, f, h))
        if not self.at("}"):
            self.fail(["'arrow'", "'compose'", "'}'"])
        self.expect("}")
        return CategoryDecl(name, objects, arrows, composes)

    def monoid(self):
        name = self.name().value
        self.expect("{")
        self.expect("elements")
        elements = self.atom_list()
        self.semi()
        self.expect("unit")
        unit = self.atom()
        self.semi()
        muls = []
        while self.accept("mul"):
            a = self.atom()
            self.expect(".")
            b = self.atom()
            self.expect("=")
            c = self.atom()
            self.semi()
            muls.append((a, b, c))
        self.expect("}")
        return MonoidDecl(name, elements, unit, muls)

    def poset(self):
        name = self.name().value
        self.expect("{")
        self.expect("elements")
        elements = self.atom_list()
        self.semi()
        self.expect("order")
        if self.accept("divides"):
            order = "divides"
        elif self.accept("inclusion"):
            order = "inclusion"
        else:
            order = []
            if not self.at(";"):
                while True:
                    a = self.atom()
                    self.expect("<=")
                    b = self.atom()
                    order.append((a, b))
                    if not self.accept(","):
                        break
        self.semi()
        self.expect("}")
        return PosetDecl(name, elements, order)

    def path(self) -> tuple:
        items = [self.atom()]
        while self.accept("."):
            items.append(self.atom())
        return tuple(items)

    def graph(self):
        name = self.name().value
        self.expect("{")
        self.expect("objects")
        objects = self.atom_list()
        self.semi()
        arrows, relations, cap = [], [], None
        while self.accept("arrow"):
            arrows.append(self.arrow())
            self.semi()
        while self.accept("relation"):
            lhs = self.path()
            self.expect("=")
            rhs = self.path()
            self.semi()
            relations.append((lhs, rhs))
        if self.accept("cap"):
            if self.tok.kind != "NUMBER":
                self.fail(["number"])
            cap = int(self.tok.value)
            self.pos += 1
            self.semi()
        self.expect("}")
        return GraphDecl(name, objects, arrows, relations, cap)

    def functor(self):
        name = self.name().value
        self.expect(":")
        source = self.atom()
        self.expect("->")
        target = self.atom()
        self.expect("{")
        pairs = []
        while self.accept("on"):
            x = self.atom()
            self.expect("=")
            y = self.atom()
            self.semi()
            pairs.append((x, y))
        if not self.at("}"):
            self.fail(["'on'", "'}'"])
        self.expect("}")
        return FunctorDecl(name, source, target, pairs)

    def nat(self):
        name = self.name().value
        self.expect(":")
        source = self.atom()
        self.expect("=>")
        target = self.atom()
        self.expect("{")
        pairs = []
        while self.accept("at"):
            x = self.atom()
            self.expect("=")
            y = self.atom()
            self.semi()
            pairs.append((x, y))
        if not self.at("}"):
            self.fail(["'at'", "'}'"])
        self.expect("}")
        return NatDecl(name, source, target, pairs)

    def presheaf(self):
        name = self.name().value
        self.expect("on")
        base = self.atom()
        self.expect("{")
        values, vias = [], []
        while self.accept("at"):
            x = self.atom()
            self.expect("=")
            self.expect("{")
            items = [] if self.at("}") else self.atom_list()
            self.expect("}")
            self.semi()
            values.append((x, items))
        while self.accept("via"):
            f = self.atom()
            self.expect(":")
            maps = []
            if not self.at(";"):
                while True:
                    x = self.atom()
                    self.expect("->")
                    y = self.atom()
                    maps.append((x, y))
                    if not self.accept(","):
                        break
            self.semi()
            vias.append((f, maps))
        if not self.at("}"):
            self.fail(["'at'", "'via'", "'}'"])
        self.expect("}")
        return PresheafDecl(name, base, values, vias)

    def task(self):
        kind = self.name().value
        # hyphenated kinds such as left-adjoint
        while self.at("-") and self.peek().kind == "NAME":
            self.pos += 1
            kind += "-" + self.name().value
        args = []
        while not self.at(";"):
            if self.tok.kind == "EOF":
                self.fail(["';'"])
            args.append(self.atom())
        self.pos += 1
        return TaskDecl(kind, args)


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


def parse(text: str) -> SourceDocument:
    """Parse a document; the first error is raised with its span."""
    return _Parser(text).document()


# serializer


def _fmt(a: Atom) -> str:
    if a.members is not None:
        return "{" + ", ".join(_fmt_text(m) for m in a.members) + "}"
    return _fmt_text(a.text)


def _fmt_text(text: str) -> str:
    if (IDENT.match(text) and text not in KEYWORDS) or NUMBER.match(text):
        return text
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt_list(items) -> str:
    return ", ".join(_fmt(a) for a in items)


def serialize(doc: SourceDocument) -> str:
    out = []
    for d in doc.declarations:
        out.append(_serialize_decl(d))
    return "\n".join(out)


def _serialize_decl(d) -> str:
    if isinstance(d, CategoryDecl):
        lines = [f"category {d.name} {{", f"  objects {_fmt_list(d.objects)};"]
        lines += [f"  arrow {_fmt(a.name)}: {_fmt(a.dom)} -> {_fmt(a.cod)};" for a in d.arrows]
        lines += [f"  compose {_fmt(g)} . {_fmt(f)} = {_fmt(h)};" for g, f, h in d.composes]
    elif isinstance(d, MonoidDecl):
        lines = [f"monoid {d.name} {{", f"  elements {_fmt_list(d.elements)};", f"  unit {_fmt(d.unit)};"]
        lines += [f"  mul {_fmt(a)} . {_fmt(b)} = {_fmt(c)};" for a, b, c in d.muls]
    elif isinstance(d, PosetDecl):
        if isinstance(d.order, str):
            order = d.order
        else:
            order = ", ".join(f"{_fmt(a)} <= {_fmt(b)}" for a, b in d.order)
        lines = [f"poset {d.name} {{", f"  elements {_fmt_list(d.elements)};", f"  order {order};"]
    elif isinstance(d, GraphDecl):
        lines = [f"graph {d.name} {{", f"  objects {_fmt_list(d.objects)};"]
        lines += [f"  arrow {_fmt(a.name)}: {_fmt(a.dom)} -> {_fmt(a.cod)};" for a in d.arrows]
        lines += [
            f"  relation {' . '.join(_fmt(x) for x in l)} = {' . '.join(_fmt(x) for x in r)};"
            for l, r in d.relations
        ]
        if d.cap is not None:
            lines.append(f"  cap {d.cap};")
    elif isinstance(d, FunctorDecl):
        lines = [f"functor {d.name}: {_fmt(d.source)} -> {_fmt(d.target)} {{"]
        lines += [f"  on {_fmt(x)} = {_fmt(y)};" for x, y in d.assignments]
    elif isinstance(d, NatDecl):
        lines = [f"nat {d.name}: {_fmt(d.source)} => {_fmt(d.target)} {{"]
        lines += [f"  at {_fmt(x)} = {_fmt(y)};" for x, y in d.components]
    elif isinstance(d, PresheafDecl):
        lines = [f"presheaf {d.name} on {_fmt(d.base)} {{"]
        lines += [f"  at {_fmt(x)} = {{{_fmt_list(items)}}};" for x, items in d.values]
        lines += [
            f"  via {_fmt(f)}: {', '.join(f'{_fmt(x)} -> {_fmt(y)}' for x, y in maps)};"
            for f, maps in d.vias
        ]
    elif isinstance(d, TaskDecl):
        args = " ".join(_fmt(a) for a in d.args)
        return f"task {d.kind}{' ' + args if args else ''};\n"
    else:  # pragma: no cover - exhaustive over the AST
        raise TypeError(d)
    return "\n".join(lines) + "\n}\n"


def category_to_decl(C: FiniteCategory, name: str) -> CategoryDecl:
    """Declaration reproducing C's tables; identity labels become ``id_<object>``."""
    objects = [Atom(o) for o in C.objects]

    def ref(f):
        return Atom(f"id_{C.objects[C.dom(f)]}") if C.is_identity(f) else Atom(C.label(f))

    arrows = [ArrowDecl(Atom(C.label(f)), objects[C.dom(f)], objects[C.cod(f)]) for f in C.non_identities()]
    composes = []
    for f in C.non_identities():
        for g in C.out_of(C.cod(f)):
            if not C.is_identity(g):
                composes.append((ref(g), ref(f), ref(C.composition[(g, f)])))
    return CategoryDecl(name, objects, arrows, composes)


# elaboration


@dataclass
class TaskSpec:
    id: str
    kind: str
    args: list
    span: Span | None = None


@dataclass
class Workspace:
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    nats: dict = field(default_factory=dict)
    presheaves: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    decls: dict = field(default_factory=dict)
    parent: "Workspace | None" = None

    def find(self, table: str, key: str):
        ws = self
        while ws is not None:
            if key in getattr(ws, table):
                return getattr(ws, table)[key]
            ws = ws.parent
        return None

    def category(self, atom: Atom) -> FiniteCategory:
        return _lookup(self, "categories", atom, "category")

    def functor(self, atom: Atom) -> Functor:
        return _lookup(self, "functors", atom, "functor")

    def nat(self, atom: Atom) -> NatTransformation:
        return _lookup(self, "nats", atom, "transformation")

    def presheaf(self, atom: Atom) -> Presheaf:
        return _lookup(self, "presheaves", atom, "presheaf")


def _lookup(ws: Workspace, table: str, atom: Atom, what: str):
    key = atom.text if isinstance(atom, Atom) else str(atom)
    value = ws.find(table, key)
    if value is None:
        raise UnresolvedReference(f"no {what} named {key!r}", getattr(atom, "span", None))
    return value


def _object(C: FiniteCategory, atom: Atom, what="object") -> int:
    try:
        return C.object_index(atom.text)
    except KeyError:
        raise UnresolvedReference(f"{C.name or 'category'} has no {what} {atom.text!r}", atom.span) from None


def _arrow(C: FiniteCategory, atom: Atom) -> int:
    try:
        return C.morphism_index(atom.text)
    except KeyError:
        pass
    text = atom.text
    if text.startswith("id_") and text[3:] in C.objects:
        return C.identities[C.object_index(text[3:])]
    raise UnresolvedReference(f"{C.name or 'category'} has no arrow {text!r}", atom.span)


class _located:
    """Attach a declaration's span to engine errors raised while elaborating it."""

    def __init__(self, span):
        self.span = span

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, CathedraError) and getattr(exc, "span", None) is None:
            exc.span = self.span
        return False


def _unique_atoms(items, what):
    seen = set()
    for a in items:
        if a.text in seen:
            raise NameClash(f"duplicate {what} {a.text!r}", a.span)
        seen.add(a.text)


def elaborate(doc: SourceDocument, caps: Caps | None = None, env: Workspace | None = None) -> Workspace:
    """Build engine objects for every declaration; ``env`` supplies earlier names."""
    caps = resolve(caps)
    ws = Workspace(parent=env)
    counts: dict = {}
    for d in doc.declarations:
        if isinstance(d, TaskDecl):
            counts[d.kind] = counts.get(d.kind, 0) + 1
            ws.tasks.append(TaskSpec(f"{d.kind}#{counts[d.kind]}", d.kind, list(d.args), d.span))
            continue
        table_name, value = _elaborate_decl(d, ws, caps)
        table = getattr(ws, table_name)
        if d.name in table:
            raise NameClash(f"{d.name!r} is declared twice", d.span)
        table[d.name] = value
        ws.decls[(table_name, d.name)] = d
    return ws


def _elaborate_decl(d, ws: Workspace, caps: Caps):
    with _located(d.span):
        if isinstance(d, CategoryDecl):
            return "categories", _category(d)
        if isinstance(d, MonoidDecl):
            return "categories", _monoid(d)
        if isinstance(d, PosetDecl):
            return "categories", _poset(d)
        if isinstance(d, GraphDecl):
            return "categories", _graph(d, caps)
        if isinstance(d, FunctorDecl):
            return "functors", _functor(d, ws)
        if isinstance(d, NatDecl):
            return "nats", _nat(d, ws)
        if isinstance(d, PresheafDecl):
            return "presheaves", _presheaf(d, ws)
    raise TypeError(d)  # pragma: no cover


def _category(d: CategoryDecl) -> FiniteCategory:
    _unique_atoms(d.objects, "object")
    _unique_atoms([a.name for a in d.arrows], "arrow")
    obj = {a.text: i for i, a in enumerate(d.objects)}
    morphisms = [(i, i, f"id_{a.text}") for i, a in enumerate(d.objects)]
    index = {f"id_{a.text}": i for i, a in enumerate(d.objects)}
    for a in d.arrows:
        if a.name.text in index:
            raise NameClash(f"arrow {a.name.text!r} clashes with an identity", a.name.span)
        for end in (a.dom, a.cod):
            if end.text not in obj:
                raise UnresolvedReference(f"no object {end.text!r}", end.span)
        index[a.name.text] = len(morphisms)
        morphisms.append((obj[a.dom.text], obj[a.cod.text], a.name.text))
    comp = {}
    for f, (dom, cod, _) in enumerate(morphisms):
        comp[(cod, f)] = f
        comp[(f, dom)] = f
    for g, f, h in d.composes:
        for atom in (g, f, h):
            if atom.text not in index:
                raise UnresolvedReference(f"no arrow {atom.text!r}", atom.span)
        key = (index[g.text], index[f.text])
        if key in comp and comp[key] != index[h.text]:
            raise NameClash(f"composite {g.text} . {f.text} given twice", g.span)
        comp[key] = index[h.text]
    return _assemble([a.text for a in d.objects], morphisms, list(range(len(d.objects))), comp, name=d.name)


def _monoid(d: MonoidDecl) -> FiniteCategory:
    _unique_atoms(d.elements, "element")
    idx = {a.text: i for i, a in enumerate(d.elements)}
    for a in [d.unit] + [x for t in d.muls for x in t]:
        if a.text not in idx:
            raise UnresolvedReference(f"no element {a.text!r}", a.span)
    k = len(d.elements)
    u = idx[d.unit.text]
    table = [[None] * k for _ in range(k)]
    for x in range(k):
        table[u][x] = x
        table[x][u] = x
    for a, b, c in d.muls:
        table[idx[a.text]][idx[b.text]] = idx[c.text]
    for x in range(k):
        for y in range(k):
            if table[x][y] is None:
                raise ArityError(
                    f"no product given for {d.elements[x].text} . {d.elements[y].text}", d.span)
    C = from_monoid(table, u, [a.text for a in d.elements])
    C.name = d.name
    return C


def _poset(d: PosetDecl) -> FiniteCategory:
    _unique_atoms(d.elements, "element")
    labels = [a.text for a in d.elements]
    n = len(labels)
    if d.order == "divides":
        for a in d.elements:
            if not NUMBER.match(a.text) or int(a.text) <= 0:
                raise ArityError(f"'divides' needs positive integers, got {a.text!r}", a.span)
        rel = poset_relation([int(x) for x in labels], lambda a, b: b % a == 0)
    elif d.order == "inclusion":
        sets = []
        for a in d.elements:
            if a.members is None:
                raise ArityError(f"'inclusion' needs set literals, got {a.text!r}", a.span)
            sets.append(frozenset(a.members))
        rel = poset_relation(sets, lambda a, b: a <= b)
    else:
        idx = {x: i for i, x in enumerate(labels)}
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in d.order:
            for x in (a, b):
                if x.text not in idx:
                    raise UnresolvedReference(f"no element {x.text!r}", x.span)
            rel[idx[a.text]][idx[b.text]] = True
        # reflexive-transitive closure
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
    return from_poset(rel, labels, name=d.name)


def _graph(d: GraphDecl, caps: Caps) -> FiniteCategory:
    _unique_atoms(d.objects, "object")
    _unique_atoms([a.name for a in d.arrows], "arrow")
    objs = {a.text for a in d.objects}
    for a in d.arrows:
        for end in (a.dom, a.cod):
            if end.text not in objs:
                raise UnresolvedReference(f"no object {end.text!r}", end.span)
    names = {a.name.text for a in d.arrows}
    for l, r in d.relations:
        for x in l + r:
            if x.text not in names and not (x.text.startswith("id_") and x.text[3:] in objs):
                raise UnresolvedReference(f"no arrow {x.text!r}", x.span)
    cap = d.cap if d.cap is not None else caps.max_morphisms
    return from_presentation(
        [a.text for a in d.objects],
        [(a.name.text, a.dom.text, a.cod.text) for a in d.arrows],
        [([x.text for x in l], [x.text for x in r]) for l, r in d.relations],
        cap=cap,
        name=d.name,
    )


def _functor(d: FunctorDecl, ws: Workspace) -> Functor:
    A, B = ws.category(d.source), ws.category(d.target)
    obj = [None] * A.n_objects
    mor = [None] * A.n_morphisms
    for x, y in d.assignments:
        if x.text in A.objects:
            obj[A.object_index(x.text)] = _object(B, y)
        else:
            mor[_arrow(A, x)] = _arrow(B, y)
    if B.n_objects == 1:
        obj = [0 if o is None else o for o in obj]
    missing = [A.objects[a] for a in range(A.n_objects) if obj[a] is None]
    if missing:
        raise ArityError(f"functor {d.name} has no image for object {missing[0]!r}", d.span)
    for f, m in enumerate(A.morphisms):
        if mor[f] is None:
            if A.is_identity(f):
                mor[f] = B.identities[obj[m.dom]]
                continue
            cands = B.hom(obj[m.dom], obj[m.cod])
            if len(cands) != 1:
                raise ArityError(
                    f"functor {d.name} needs an image for arrow {A.label(f)!r} ({len(cands)} candidates)", d.span)
            mor[f] = cands[0]
    return validate_functor(A, B, obj, mor)


def _nat(d: NatDecl, ws: Workspace) -> NatTransformation:
    F, G = ws.functor(d.source), ws.functor(d.target)
    A, B = F.source, F.target
    comps = [None] * A.n_objects
    for x, f in d.components:
        comps[_object(A, x)] = _arrow(B, f)
    for a in range(A.n_objects):
        if comps[a] is None:
            cands = B.hom(F(a), G(a))
            if len(cands) != 1:
                raise ArityError(f"transformation {d.name} needs a component at {A.objects[a]!r}", d.span)
            comps[a] = cands[0]
    return validate_nat(F, G, comps)


def _presheaf(d: PresheafDecl, ws: Workspace) -> Presheaf:
    C = ws.category(d.base)
    values = [None] * C.n_objects
    for x, items in d.values:
        _unique_atoms(items, "element")
        values[_object(C, x)] = FinSet(a.text for a in items)
    missing = [C.objects[a] for a in range(C.n_objects) if values[a] is None]
    if missing:
        raise ArityError(f"presheaf {d.name} has no value at {missing[0]!r}", d.span)
    maps = {}
    for f_atom, pairs in d.vias:
        f = _arrow(C, f_atom)
        src, tgt = values[C.cod(f)], values[C.dom(f)]
        mapping = {}
        for x, y in pairs:
            if x.text not in src:
                raise UnresolvedReference(f"{x.text!r} is not in the value at {C.objects[C.cod(f)]}", x.span)
            if y.text not in tgt:
                raise UnresolvedReference(f"{y.text!r} is not in the value at {C.objects[C.dom(f)]}", y.span)
            mapping[x.text] = y.text
        for x in src:
            if x not in mapping:
                if len(tgt) == 1:
                    mapping[x] = tgt[0]
                else:
                    raise ArityError(f"via {C.label(f)} gives no image for {x!r}", f_atom.span)
        maps[f] = FinFunction.from_mapping(src, tgt, mapping)
    # unlisted arrows into a singleton are forced
    for f, m in enumerate(C.morphisms):
        if f not in maps and not C.is_identity(f) and len(values[m.dom]) == 1:
            maps[f] = FinFunction.from_mapping(values[m.cod], values[m.dom], lambda _x, t=values[m.dom][0]: t)
    return presheaf_from_maps(C, values, maps)


def load(text: str, caps: Caps | None = None, env: Workspace | None = None) -> Workspace:
    return elaborate(parse(text), caps, env)


def iter_category_decls(doc: SourceDocument) -> Iterator:
    return (d for d in doc.declarations if isinstance(d, CATEGORY_KINDS))
