from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from operadforge.dsl import (
    Apply,
    DSLSyntaxError,
    GeneratorSymbol,
    Leaf,
    OperadPresentation,
    PresentationError,
    Symmetry,
    format_algebra,
    format_operad,
    normalize_combination,
    parse_algebra_presentation,
    parse_element,
    parse_operad_presentation,
    parse_polynomial,
)
from operadforge.poly import Poly
from operadforge.presets import OPERADS, algebra, operad, preset_with_params, UnknownPreset


def header(body: str, params: str = "") -> str:
    return f"operad x{params}\ngen m : comm;\ngen l : anti;\n{body}\n"


@pytest.mark.parametrize("body,cls,fragment", [
    ("rel m(a,b,c);", PresentationError, "applied to 3 arguments"),
    ("rel m(m(a,a),c);", PresentationError, "repeated letter"),
    ("rel m(m(a,b),d);", PresentationError, "unknown letter"),
    ("rel q(m(a,b),c);", PresentationError, "undeclared generator"),
    ("rel m(m(a,b),c) - m(m(a,b),c);", PresentationError, "identically zero"),
    ("rel m(a,b);", PresentationError, "exactly once"),
    ("rel m(m(a,b),c) m(a,m(b,c));", DSLSyntaxError, None),
    ("gen m : anti;", PresentationError, "duplicate"),
    ("gen a : comm;", PresentationError, "clashes"),
    ("gen q : foo;", DSLSyntaxError, "unknown symmetry"),
])
def test_rejects(body, cls, fragment):
    with pytest.raises(cls, match=fragment):
        parse_operad_presentation(header(body))


def test_malformed_exponent_points_at_token():
    with pytest.raises(DSLSyntaxError) as info:
        parse_operad_presentation(header("rel m(m(a,b),c) - h^x*m(a,m(b,c));", " params(h)"))
    assert (info.value.line, info.value.col) == (4, 21)
    assert "exponent" in str(info.value)


def test_unknown_parameter():
    with pytest.raises(DSLSyntaxError):
        parse_operad_presentation(header("rel m(m(a,b),c) - k*m(a,m(b,c));"))


def test_equation_form_is_difference():
    a = parse_operad_presentation(header("rel l(m(a,b),c) = m(a,l(b,c)) + m(l(a,c),b);"))
    b = parse_operad_presentation(header("rel l(m(a,b),c) - m(a,l(b,c)) - m(l(a,c),b);"))
    assert a.relations == b.relations


def test_distribution_over_arguments():
    # l(a, s+t) expands multilinearly
    a = parse_operad_presentation(header("rel l(a, m(b,c) + 2*l(b,c));"))
    b = parse_operad_presentation(header("rel l(a,m(b,c)) + 2*l(a,l(b,c));"))
    assert a.relations == b.relations


def test_parameter_coefficients():
    pres = parse_operad_presentation(header("rel m(m(a,b),c) - m(a,m(b,c)) = h^2*l(b,l(a,c));", " params(h)"))
    assert pres.params == ("h",)
    assert pres.parameters_used() == {"h"}
    coeffs = dict(pres.relations[0])
    key = Apply("l", Leaf("b"), Apply("l", Leaf("a"), Leaf("c")))
    assert coeffs[key] == -Poly.var("h") ** 2


def test_rational_coefficients():
    pres = parse_operad_presentation(header("rel m(m(a,b),c) - 3/2*m(a,m(b,c));"))
    values = sorted(c.constant() for _, c in pres.relations[0])
    assert values == [Fraction(-3, 2), Fraction(1)]


@pytest.mark.parametrize("name", sorted(OPERADS))
def test_presets_round_trip(name):
    pres = operad(name)
    assert parse_operad_presentation(format_operad(pres)) == pres


def test_preset_shapes():
    ll2 = operad("ll2")
    assert [g.name for g in ll2.generators] == ["m", "l", "p"]
    assert len(ll2.relations) == 6
    assert ll2.params == ("h1", "h2")
    assert len(operad("lie2").relations) == 3
    assert operad("ass2").generator("l").symmetry is Symmetry.ANTI


def test_preset_lookup():
    pres, inline = preset_with_params("ll2(1,-3/2)")
    assert pres.name == "ll2" and inline == {"h1": "1", "h2": "-3/2"}
    alg, inline = preset_with_params("gv2(3,1,1)")
    assert len(alg.variables) == 6 and inline == {"h1": "1", "h2": "1"}
    with pytest.raises(UnknownPreset):
        preset_with_params("nope")
    with pytest.raises(ValueError):
        preset_with_params("gv")


def test_algebra_round_trip():
    for name in ("gv", "gv2", "gv2alt"):
        pres = algebra(name, (1, 2, 3))
        assert parse_algebra_presentation(format_algebra(pres)) == pres


def test_algebra_rejects_unknown_variable():
    with pytest.raises(DSLSyntaxError):
        parse_algebra_presentation("algebra t\nvar x;\nrel x*y;\n")


def test_polynomial_parse():
    p = parse_polynomial("x12^2 - h*x12", ["x12"], ["h"])
    assert p == Poly.var("x12") ** 2 - Poly.var("h") * Poly.var("x12")


def test_parse_element_arity():
    pres = operad("ll2")
    comb = parse_element("m(a,l(b,c)) + m(l(a,c),b)", pres, 3)
    assert len(comb) == 2
    assert parse_element("m(a,b) - m(a,b)", pres, 2) == ()
    with pytest.raises(PresentationError):
        parse_element("m(a,b)", pres, 3)


# property: random presentations survive print/parse -----------------------------

GENS = (GeneratorSymbol("m", 2, Symmetry.SYM), GeneratorSymbol("l", 2, Symmetry.ANTI),
        GeneratorSymbol("s", 2, Symmetry.NONE))


@st.composite
def arity3_term(draw):
    a, b, c = (Leaf(x) for x in draw(st.permutations("abc")))
    outer, inner = draw(st.sampled_from(GENS)).name, draw(st.sampled_from(GENS)).name
    if draw(st.booleans()):
        return Apply(outer, Apply(inner, a, b), c)
    return Apply(outer, a, Apply(inner, b, c))


@st.composite
def relation(draw):
    terms = draw(st.lists(arity3_term(), min_size=1, max_size=4, unique=True))
    coeffs = {}
    for t in terms:
        c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool))
        h = draw(st.integers(0, 2))
        coeffs[t] = Poly.const(c) * Poly.var("h") ** h
    return normalize_combination(coeffs)


@given(st.lists(relation(), min_size=1, max_size=3))
def test_random_round_trip(rels):
    pres = OperadPresentation("rnd", GENS, tuple(rels), ("h",))
    assert parse_operad_presentation(format_operad(pres)) == pres
