import pytest
from hypothesis import given
from hypothesis import strategies as st

from cathedra.catlang import (
    CategoryDecl,
    SourceDocument,
    category_to_decl,
    elaborate,
    load,
    parse,
    serialize,
    tokenize,
)
from cathedra.category import find_isomorphism
from cathedra.errors import ArityError, LexError, NameClash, NaturalityViolation, ParseError, UnresolvedReference
from cathedra.tasks import corpus_files, corpus_workspace

from conftest import CORPUS

CORPUS_FILES = corpus_files()


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.name)
def test_corpus_round_trip(path):
    text = path.read_text(encoding="utf-8")
    doc = parse(text)
    once = serialize(doc)
    # serialization is canonical, so a second pass is a fixed point
    assert serialize(parse(once)) == once
    assert parse(once).declarations == doc.declarations
    ws1, ws2 = load(text), load(once)
    for name, C in ws1.categories.items():
        assert ws2.categories[name].same_tables(C)


def test_corpus_workspace_has_every_category():
    ws = corpus_workspace()
    for name in ("Two", "Par", "Div12", "Div36", "Z2", "Z3", "S3", "Subsets", "Closed", "D2"):
        assert ws.find("categories", name) is not None
    assert ws.tasks == []


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_category_decl_reproduces_tables(name):
    C = CORPUS[name]
    text = serialize(SourceDocument([category_to_decl(C, "C")]))
    D = load(text).categories["C"]
    assert D.same_tables(C) or find_isomorphism(D, C) is not None


def test_tokens_carry_spans():
    toks = tokenize('category A {\n  objects "x y";\n}')
    string = next(t for t in toks if t.kind == "STRING")
    assert string.value == "x y"
    assert (string.span.line, string.span.col) == (2, 11)


def test_comments_are_skipped():
    assert [t.value for t in tokenize("-- note\ntask initial A; -- tail")][:2] == ["task", "initial"]


class TestErrors:
    def span_of(self, exc_type, src):
        with pytest.raises(exc_type) as info:
            load(src)
        return info.value.span.line, info.value.span.col

    def test_lex_error(self):
        assert self.span_of(LexError, "category A { objects $; }") == (1, 22)

    def test_unterminated_string(self):
        with pytest.raises(LexError):
            tokenize('category A { objects "oops; }')

    def test_parse_error_lists_expectations(self):
        with pytest.raises(ParseError) as info:
            parse("category A { objects a a; }")
        assert info.value.span.col == 24
        assert "';'" in info.value.expected

    def test_unknown_endpoint(self):
        assert self.span_of(UnresolvedReference, "category A { objects a; arrow f: a -> b; }") == (1, 39)

    def test_unknown_category(self):
        assert self.span_of(UnresolvedReference, "functor F: A -> B {}") == (1, 12)

    def test_missing_object_image(self):
        src = "category A { objects a, b; }\ncategory B { objects x, y; }\nfunctor F: A -> B { on a = x; }"
        assert self.span_of(ArityError, src)[0] == 3

    def test_duplicate_declaration(self):
        assert self.span_of(NameClash, "category A { objects a; }\ncategory A { objects b; }") == (2, 1)

    def test_duplicate_object(self):
        assert self.span_of(NameClash, "category A { objects a, a; }") == (1, 25)

    def test_engine_errors_gain_the_declaration_span(self):
        src = ("category Two { objects a, b; arrow f: a -> b; }\n"
               "category Par { objects x, y; arrow s: x -> y; arrow t: x -> y; }\n"
               "functor S: Two -> Par { on a = x; on b = y; on f = s; }\n"
               "functor T: Two -> Par { on a = x; on b = y; on f = t; }\n"
               "nat n: S => T { at a = id_x; at b = id_y; }\n")
        with pytest.raises(NaturalityViolation) as info:
            load(src)
        assert info.value.span.line == 5

    def test_message_is_prefixed_with_location(self):
        with pytest.raises(LexError) as info:
            load("\n\n  ?")
        assert str(info.value).startswith("3:3:")


def test_env_shadowing():
    base = load("category A { objects a; }")
    ws = load("category A { objects p, q; }\nfunctor F: A -> A { on p = p; on q = q; }", env=base)
    assert ws.category("A").n_objects == 2
    assert ws.find("categories", "A") is ws.categories["A"]


def test_tasks_are_numbered_per_kind():
    ws = load("category A { objects a; }\ntask initial A;\ntask terminal A;\ntask initial A;")
    assert [t.id for t in ws.tasks] == ["initial#1", "terminal#1", "initial#2"]


def test_set_literals_and_inclusion_order():
    ws = load("poset P { elements {}, {1}, {1,2}; order inclusion; }")
    P = ws.categories["P"]
    assert P.objects == ("{}", "{1}", "{1,2}") or list(P.objects) == ["{}", "{1}", "{1,2}"]
    assert P.n_morphisms == 6


def test_graph_with_relations():
    ws = load("graph L { objects x; arrow e: x -> x; relation e . e = e; }")
    assert ws.categories["L"].n_morphisms == 2


NAMES = st.sampled_from(["a", "b", "c", "d", "x1", "y_2"])


@st.composite
def free_categories(draw):
    objs = draw(st.lists(NAMES, min_size=1, max_size=4, unique=True))
    # arrows only go forward, so the free category stays finite
    pairs = draw(st.lists(st.tuples(st.integers(0, len(objs) - 1), st.integers(0, len(objs) - 1)), max_size=4))
    arrows = [(f"f{k}", objs[min(i, j)], objs[max(i, j)]) for k, (i, j) in enumerate(pairs) if i != j]
    lines = [f"graph G {{ objects {', '.join(objs)};"]
    lines += [f"  arrow {n}: {s} -> {t};" for n, s, t in arrows]
    lines.append("}")
    return "\n".join(lines)


@given(free_categories())
def test_generated_documents_round_trip(src):
    doc = parse(src)
    out = serialize(doc)
    assert serialize(parse(out)) == out
    assert load(out).categories["G"].same_tables(load(src).categories["G"])


def test_category_decl_shape():
    decl = category_to_decl(CORPUS["two"], "T")
    assert isinstance(decl, CategoryDecl) and len(decl.arrows) == 1 and decl.composes == []
    assert elaborate(SourceDocument([decl])).categories["T"].n_morphisms == 3


def test_empty_document():
    assert serialize(parse("")) == ""
    assert parse(serialize(parse(""))).declarations == []


def test_spec_style_examples():
    # the closing brace may follow the last item without a semicolon
    assert load("category Two { objects a, b; arrow f: a -> b }").categories["Two"].n_morphisms == 3
    # [DERIVED] 18 divisibility pairs among the divisors of 12
    assert load("poset Div12 { elements 1,2,3,4,6,12; order divides }").categories["Div12"].n_morphisms == 18


def test_generated_comma_category_reparses():
    from cathedra.category import divisor_poset
    from cathedra.comma import slice_category

    C = divisor_poset(12)
    S = slice_category(C, C.object_index("6")).category
    D = load(serialize(SourceDocument([category_to_decl(S, "Slice")]))).categories["Slice"]
    assert D.same_tables(S)
