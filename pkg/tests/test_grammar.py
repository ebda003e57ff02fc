"""Tests for the term grammar, the printer and parse errors."""

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from stonekernels.dsl.grammar import parse_term
from stonekernels.dsl.loader import ProgramLoader
from stonekernels.dsl.schemas import KEYWORDS, RESERVED_OBJECT
from stonekernels.dsl.terms import (
    Copy,
    Discard,
    Ident,
    Name,
    Par,
    Seq,
    Swap,
    kernel_names,
    object_names,
    print_term,
)
from stonekernels.errors import LexicalError, ProgramError, TermSyntaxError

keyword_prefixed = st.builds(
    str.__add__,
    st.sampled_from(sorted(KEYWORDS)),
    st.from_regex(r"[A-Za-z0-9_]{1,4}", fullmatch=True),
)
plain_identifiers = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,5}", fullmatch=True).filter(
    lambda name: name not in KEYWORDS and name != RESERVED_OBJECT
)
identifiers = st.one_of(
    st.sampled_from(["f", "g", "coin", "k_2", "Bits", "identity", "copy2", "x", "idx", "copyB"]),
    keyword_prefixed,
    plain_identifiers,
)
objects = st.one_of(st.sampled_from(["X", "Y", "B", "unit"]), keyword_prefixed)


@st.composite
def term_strategy(draw, depth=3, kernels=identifiers, objs=objects):
    """Generate a random term tree over the given kernel and object names."""
    if depth == 0 or draw(st.booleans()):
        kind = draw(st.sampled_from(["name", "id", "copy", "discard", "swap"]))
        if kind == "name":
            return Name(draw(kernels))
        if kind == "id":
            return Ident(draw(objs))
        if kind == "copy":
            return Copy(draw(objs))
        if kind == "discard":
            return Discard(draw(objs))
        return Swap(draw(objs), draw(objs))
    left = draw(term_strategy(depth - 1, kernels, objs))
    right = draw(term_strategy(depth - 1, kernels, objs))
    return Seq(left, right) if draw(st.booleans()) else Par(left, right)


@st.composite
def program_strategy(draw):
    """Generate a whole program: finite objects, matrix kernels and named terms over them."""
    names = draw(st.lists(identifiers, min_size=3, max_size=9, unique=True))
    cut_objects = draw(st.integers(1, len(names) - 2))
    cut_kernels = draw(st.integers(cut_objects + 1, len(names) - 1))
    declared_objects, declared_kernels, term_names = (
        names[:cut_objects],
        names[cut_objects:cut_kernels],
        names[cut_kernels:],
    )
    sizes = {name: draw(st.integers(1, 3)) for name in declared_objects}
    objects_section: dict = dict(sizes)
    if draw(st.booleans()):
        objects_section[draw(keyword_prefixed.filter(lambda n: n not in names))] = {
            "family": "binary_prefix"
        }
    kernels_section = {}
    for name in declared_kernels:
        dom = draw(st.sampled_from(declared_objects))
        cod = draw(st.sampled_from(declared_objects))
        rows = []
        for _ in range(sizes[dom]):
            if sizes[cod] > 1 and draw(st.booleans()):
                rows.append([f"1/{sizes[cod]}"] * sizes[cod])
            else:
                hit = draw(st.integers(0, sizes[cod] - 1))
                rows.append(["1" if k == hit else "0" for k in range(sizes[cod])])
        kernels_section[name] = {"dom": dom, "cod": cod, "matrix": rows}
    term_objects = st.sampled_from([*objects_section, RESERVED_OBJECT])
    terms = {
        name: draw(term_strategy(3, st.sampled_from(declared_kernels), term_objects))
        for name in term_names
    }
    document = {
        "objects": objects_section,
        "kernels": kernels_section,
        "terms": {name: print_term(term) for name, term in terms.items()},
    }
    return document, terms


class TestParse:
    """Test parsing of atoms, precedence and associativity."""

    def test_atoms(self):
        assert parse_term("f") == Name("f")
        assert parse_term("id[X]") == Ident("X")
        assert parse_term("copy[X]") == Copy("X")
        assert parse_term("discard[ B ]") == Discard("B")
        assert parse_term("swap[X, Y]") == Swap("X", "Y")

    def test_tensor_binds_tighter_than_sequence(self):
        assert parse_term("copy[X] ; f (x) id[X]") == Seq(Copy("X"), Par(Name("f"), Ident("X")))

    def test_left_associativity(self):
        assert parse_term("f ; g ; h") == Seq(Seq(Name("f"), Name("g")), Name("h"))
        assert parse_term("f (x) g (x) h") == Par(Par(Name("f"), Name("g")), Name("h"))

    def test_parentheses(self):
        assert parse_term("f ; (g ; h)") == Seq(Name("f"), Seq(Name("g"), Name("h")))
        assert parse_term("(f ; g) (x) h") == Par(Seq(Name("f"), Name("g")), Name("h"))

    def test_keyword_prefixes_are_identifiers(self):
        assert parse_term("identity ; copy2") == Seq(Name("identity"), Name("copy2"))

    def test_kernel_named_x_in_parentheses(self):
        assert parse_term("(x)") == Name("x")

    def test_positions(self):
        term = parse_term("f ;\n  copy[X]")
        assert (term.second.line, term.second.column) == (2, 3)

    def test_names(self):
        term = parse_term("coin ; copy[B] ; f (x) swap[X, Y]")
        assert kernel_names(term) == {"coin", "f"}
        assert object_names(term) == {"B", "X", "Y"}


class TestParseErrors:
    """Test lexical and syntax errors with positions."""

    def test_lexical_error(self):
        with pytest.raises(LexicalError) as exc_info:
            parse_term("f ; g $ h")
        assert exc_info.value.line == 1
        assert exc_info.value.column == 7
        assert str(exc_info.value).startswith("lexical error at line 1, column 7")

    def test_unexpected_token(self):
        with pytest.raises(TermSyntaxError) as exc_info:
            parse_term("f ; ; g")
        assert (exc_info.value.line, exc_info.value.column) == (1, 5)
        assert "';'" in str(exc_info.value)

    def test_unexpected_end(self):
        with pytest.raises(TermSyntaxError, match="end of input") as exc_info:
            parse_term("copy[X] ;")
        assert exc_info.value.line == 1

    def test_unclosed_bracket(self):
        with pytest.raises(TermSyntaxError):
            parse_term("swap[X Y]")

    def test_keyword_alone_is_not_a_term(self):
        with pytest.raises(TermSyntaxError):
            parse_term("id")

    def test_errors_share_a_base_class(self):
        with pytest.raises(ProgramError):
            parse_term("")


class TestPrinter:
    """Test the minimal-parenthesis printer."""

    def test_minimal_parentheses(self):
        term = Seq(Copy("X"), Par(Name("f"), Ident("X")))
        assert print_term(term) == "copy[X] ; f (x) id[X]"

    def test_right_nested_sequence_keeps_parentheses(self):
        assert print_term(Seq(Name("f"), Seq(Name("g"), Name("h")))) == "f ; (g ; h)"

    def test_sequence_inside_tensor(self):
        assert print_term(Par(Seq(Name("f"), Name("g")), Name("h"))) == "(f ; g) (x) h"
        assert print_term(Par(Name("h"), Par(Name("f"), Name("g")))) == "h (x) (f (x) g)"

    def test_swap(self):
        assert print_term(Swap("X", "Y")) == "swap[X, Y]"

    @settings(max_examples=1000, deadline=None)
    @given(term_strategy())
    def test_print_then_parse_is_identity(self, term):
        assert parse_term(print_term(term)) == term

    @pytest.mark.parametrize("name", ["idx", "copyB", "identity", "discard_", "swapXY", "id0"])
    def test_keyword_prefixed_names_round_trip(self, name):
        term = Seq(Name(name), Par(Copy(name), Name(name)))
        assert print_term(term) == f"{name} ; copy[{name}] (x) {name}"
        assert parse_term(print_term(term)) == term


class TestProgramRoundTrip:
    """Test whole generated programs through YAML, the loader and the printer."""

    @settings(max_examples=1000, deadline=None)
    @given(program_strategy())
    def test_generated_programs_round_trip(self, generated):
        document, terms = generated
        text = yaml.safe_dump(document, sort_keys=False)
        program = ProgramLoader().load_from_dict(yaml.safe_load(text))

        assert set(program.objects) == set(document["objects"])
        for name, spec in document["kernels"].items():
            expected = "\n".join(" ".join(row) for row in spec["matrix"])
            assert program.kernels[name].level(0).render() == expected
        for name, term in terms.items():
            assert program.terms[name] == term
            assert print_term(program.terms[name]) == document["terms"][name]
            assert parse_term(print_term(program.terms[name])) == program.terms[name]
