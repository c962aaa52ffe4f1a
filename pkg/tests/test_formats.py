from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from extdga import formats
from extdga.errors import ParseError
from extdga.gring import Fp, GeneratorSpec
from conftest import FIXTURES

ALL_FIXTURES = sorted(p for p in FIXTURES.iterdir() if p.suffix in (".txt", ".dga", ".thh"))


def test_truncated_presentation():
    doc = formats.parse("ring F2\nkind presentation\ncap 8\ngen x deg 1 kind trunc:4\n")
    A = formats.to_algebra(doc)
    assert A.ring == Fp(2)
    assert A.dimensions()[:6] == [1, 1, 1, 1, 0, 0]
    assert doc.generators == [GeneratorSpec("x", 1, "trunc", 4)]


def test_exterior_presentation_over_f3():
    doc = formats.parse("kind presentation\nring F3\ncap 8\ngen x deg 1 kind ext\ngen y deg 4 kind ext\n")
    A = formats.to_algebra(doc)
    assert A.dimensions() == [1, 1, 0, 0, 1, 1, 0, 0, 0]
    assert A.gen("y") * A.gen("y") == A.zero()


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_document(text):
    with pytest.raises(ParseError) as exc:
        formats.parse(text)
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("kind presentation\nring Q\ncap 2\n", 2, 6),
        ("kind presentation\nring F2\ncap 2\ngen x deg 1 kind ext\ngen x deg 2 kind poly\n", 5, 5),
        ("kind presentation\nring F2\ncap 2\ngen x deg 1 kind trunc:1\n", 4, 1),
        ("kind presentation\nring F2\ncap 2\nrel y^2 = 0\n", 4, 1),
        ("kind presentation\nring F2\ncap 2\ncap 3\n", 4, 1),
        ("kind presentation\nring F2\ncap two\n", 3, 5),
        ("kind dga\nring F2\nbasis deg 0: 1\nd q = 1\n", 4, 3),
        ("kind dga\nring F2\nbasis deg 0: 1\nbasis deg 1: a a\n", 4, 1),
        ("kind dga\nring F2\nbasis deg 0: 1\nunit e\n", 4, 6),
        ("kind ring-table\nring F2\nbasis deg 0: 1\nmul 1*q = 1\n", 4, 5),
        ("kind thh-table\nring F2\ncap 2\ndim 0 = 1\n", 1, 1),
        ("kind thh-table\nring F2\ncap 2\nprovenance user\ndim 0 = 1\ndim 0 = 2\n", 6, 1),
        ("kind presentation\nring F2\ncap 2\nfrobnicate\n", 4, 1),
    ],
)
def test_error_positions(text, line, column):
    with pytest.raises(ParseError) as exc:
        formats.parse(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert str(exc.value).startswith(f"line {line}, column {column}: ")


def test_presentation_needs_cap():
    with pytest.raises(ParseError, match="cap"):
        formats.parse("kind presentation\nring F2\ngen x deg 1 kind ext\n")


def test_mul_with_star_names():
    text = "kind ring-table\nring Z\nbasis deg 0: 1\nbasis deg 2: x y x*y\nmul x*y = x*y\nmul y*x = -1*x*y\n"
    doc = formats.parse(text)
    assert doc.products[("x", "y")] == ((1, "x*y"),)
    assert doc.products[("y", "x")] == ((-1, "x*y"),)


def test_ambiguous_mul_needs_spaces():
    head = "kind ring-table\nring F2\nbasis deg 0: 1\nbasis deg 1: a b a*b b*a\n"
    with pytest.raises(ParseError):
        formats.parse(head + "mul a*b*a = 0\n")
    doc = formats.parse(head + "mul a * b*a = 0\n")
    assert ("a", "b*a") in doc.products
    assert formats.parse(formats.render(doc)) == doc


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    doc = formats.parse(path.read_text())
    text = formats.render(doc)
    assert formats.parse(text) == doc
    assert formats.render(formats.parse(text)) == text


def test_shipped_tables_round_trip():
    from importlib import resources

    for res in (resources.files("extdga") / "data").iterdir():
        if res.name.endswith(".thh"):
            doc = formats.parse(res.read_text())
            assert formats.parse(formats.render(doc)) == doc


NAMES = ["x", "y", "z", "t1", "u_2"]


@st.composite
def presentations(draw):
    ring = draw(st.sampled_from(["F2", "F3", "F5", "Z", "Z/4", "Z/12"]))
    k = draw(st.integers(1, 4))
    names = NAMES[:k]
    lines = ["kind presentation", f"ring {ring}", f"cap {draw(st.integers(0, 12))}"]
    if draw(st.booleans()):
        lines.append(f"sign {draw(st.sampled_from(['koszul', 'ungraded']))}")
    for name in names:
        kind = draw(st.sampled_from(["poly", "ext", "trunc:2", "trunc:3", "trunc:7"]))
        lines.append(f"gen {name} deg {draw(st.integers(0, 6))} kind {kind}")

    def monomial():
        factors = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
        parts = [f if (e := draw(st.integers(1, 3))) == 1 else f"{f}^{e}" for f in factors]
        return "*".join(parts)

    def expr():
        if draw(st.booleans()):
            return "0"
        out = ""
        for i in range(draw(st.integers(1, 3))):
            coef = draw(st.integers(1, 9))
            sign = draw(st.booleans())
            term = monomial() if coef == 1 else f"{coef}*{monomial()}"
            if i == 0:
                out = ("-" if sign else "") + term
            else:
                out += (" - " if sign else " + ") + term
        return out

    for directive in ("rel", "target"):
        for _ in range(draw(st.integers(0, 2))):
            lines.append(f"{directive} {monomial()} = {expr()}")
    for _ in range(draw(st.integers(0, 2))):
        lines.append("note " + draw(st.text(alphabet="abc xyz#=", min_size=1, max_size=12)).strip() + "!")
    order = draw(st.permutations(lines))
    return "\n".join(order) + "\n"


@given(presentations())
def test_random_presentation_round_trip(text):
    doc = formats.parse(text)
    assert formats.parse(formats.render(doc)) == doc


@given(st.lists(st.tuples(st.integers(0, 9), st.sampled_from(["Z", "Z/2", "Z/3 + Z/9", "Z^2 + Z/4", "0"])),
                min_size=1, max_size=6, unique_by=lambda t: t[0]))
def test_random_group_table_round_trip(entries):
    body = "".join(f"group {d} = {g}\n" for d, g in entries)
    doc = formats.parse(f"kind thh-table\nring Z\ncap 9\nprovenance user\n{body}")
    assert formats.parse(formats.render(doc)) == doc
