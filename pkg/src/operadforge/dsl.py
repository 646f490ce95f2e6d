"""Line-oriented text format for operad and algebra presentations.

Operad files::

    operad ll params(h)
    gen m : comm;
    gen l : anti;
    rel l(m(a,b),c) - m(a,l(b,c)) - m(l(a,c),b);
    rel m(m(a,b),c) - m(a,m(b,c)) = h^2*l(b,l(a,c));

Algebra files::

    algebra gv2 params(h)
    var x12;
    rel x12^2 - h*x12;

Relations may be written as ``lhs = rhs``; ``#`` starts a comment.
Generator applications are multilinear, so ``l(b, m(a,c) + p(a,c))`` is
allowed.  Coefficients are polynomials in the declared parameters.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .poly import Poly, format_poly

LETTERS = "abcdefghij"


class Symmetry(enum.Enum):
    SYM = "comm"
    ANTI = "anti"
    NONE = "nonsym"


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    arity: int = 2
    symmetry: Symmetry = Symmetry.NONE


@dataclass(frozen=True)
class Leaf:
    letter: str

    def __str__(self) -> str:
        return self.letter


@dataclass(frozen=True)
class Apply:
    gen: str
    left: "ExprNode"
    right: "ExprNode"

    def __str__(self) -> str:
        return f"{self.gen}({self.left},{self.right})"


ExprNode = Union[Leaf, Apply]

# A formal combination: sorted tuple of (tree expression, coefficient) pairs.
Combination = tuple


def expr_letters(e: ExprNode) -> list[str]:
    if isinstance(e, Leaf):
        return [e.letter]
    return expr_letters(e.left) + expr_letters(e.right)


def normalize_combination(terms: Mapping[ExprNode, Poly]) -> Combination:
    return tuple(sorted(((e, c) for e, c in terms.items() if not c.is_zero()), key=lambda t: str(t[0])))


@dataclass(frozen=True)
class OperadPresentation:
    name: str
    generators: tuple[GeneratorSymbol, ...]
    relations: tuple[Combination, ...]
    params: tuple[str, ...] = ()

    def generator(self, name: str) -> GeneratorSymbol:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def parameters_used(self) -> set[str]:
        return {v for rel in self.relations for _, c in rel for v in c.variables()}


@dataclass(frozen=True)
class AlgebraPresentation:
    name: str
    variables: tuple[str, ...]
    relations: tuple[Poly, ...]
    params: tuple[str, ...] = ()


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})" if line else message)
        self.line = line
        self.col = col


class PresentationError(DSLSyntaxError):
    """Well-formed text that violates a presentation invariant."""


# tokenizer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[(),;:+\-*/^=])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# values during expression evaluation -------------------------------------------


@dataclass
class _Elem:
    terms: dict = field(default_factory=dict)  # ExprNode -> Poly


def _add_terms(acc: dict, terms: Mapping, scale: Poly | int = 1) -> dict:
    for e, c in terms.items():
        x = acc.get(e, Poly()) + c * scale
        if x.is_zero():
            acc.pop(e, None)
        else:
            acc[e] = x
    return acc


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        # resolution context
        self.params: set[str] = set()
        self.generators: dict[str, GeneratorSymbol] = {}
        self.variables: set[str] = set()
        self.letters: str = ""
        self.mode = "operad"

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None, cls=DSLSyntaxError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def expect(self, text: str, kind: str = "sym") -> Token:
        t = self.tok
        if t.kind != kind or (text and t.text != text):
            want = text or kind
            got = t.text or t.kind
            raise self.error(f"expected {want!r}, found {got!r}")
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    # expressions
    def expr(self):
        v = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            w = self.term()
            v = self.combine(v, w, op.text, op)
        return v

    def term(self):
        v = self.unary()
        while True:
            if self.at("*") or self.at("/"):
                op = self.advance()
                w = self.unary()
                v = self.multiply(v, w, op) if op.text == "*" else self.divide(v, w, op)
            elif self.tok.kind in ("num", "ident") or self.at("("):
                # juxtaposition, as in "2 m(a,b)"
                op = self.tok
                w = self.unary()
                v = self.multiply(v, w, op)
            else:
                return v

    def unary(self):
        if self.at("-"):
            self.advance()
            return self.negate(self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.at("^"):
            op = self.advance()
            if self.tok.kind != "num":
                raise self.error("exponent must be a nonnegative integer literal")
            e = int(self.advance().text)
            if isinstance(v, _Elem):
                raise self.error("cannot raise a tree expression to a power", op, PresentationError)
            v = v ** e
        return v

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Poly.const(int(t.text))
        if self.at("("):
            self.advance()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                return self.application(t)
            return self.resolve(t)
        raise self.error(f"unexpected {t.text or t.kind!r}")

    def application(self, name_tok: Token):
        if self.mode != "operad":
            raise self.error(f"function application {name_tok.text}(...) in an algebra", name_tok)
        name = name_tok.text
        if name not in self.generators:
            raise self.error(f"undeclared generator {name!r}", name_tok, PresentationError)
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if len(args) != 2:
            raise self.error(
                f"generator {name!r} is binary but applied to {len(args)} arguments",
                name_tok, PresentationError,
            )
        left, right = args
        if not isinstance(left, _Elem) or not isinstance(right, _Elem):
            raise self.error(f"arguments of {name!r} must be tree expressions", name_tok, PresentationError)
        out: dict = {}
        for el, cl in left.terms.items():
            for er, cr in right.terms.items():
                _add_terms(out, {Apply(name, el, er): cl * cr})
        return _Elem(out)

    def resolve(self, t: Token):
        name = t.text
        if name in self.params:
            return Poly.var(name)
        if self.mode == "algebra":
            if name in self.variables:
                return Poly.var(name)
            raise self.error(f"undeclared variable {name!r}", t, PresentationError)
        if name in self.generators:
            raise self.error(f"generator {name!r} used without arguments", t, PresentationError)
        if len(name) == 1 and name in self.letters:
            return _Elem({Leaf(name): Poly.const(1)})
        if len(name) == 1 and name in LETTERS:
            raise self.error(f"unknown letter {name!r}", t, PresentationError)
        raise self.error(f"unknown identifier {name!r}", t, PresentationError)

    # algebra of values
    def negate(self, v):
        if isinstance(v, _Elem):
            return _Elem({e: -c for e, c in v.terms.items()})
        return -v

    def combine(self, v, w, op: str, tok: Token):
        if op == "-":
            w = self.negate(w)
        if isinstance(v, _Elem) or isinstance(w, _Elem):
            if not isinstance(v, _Elem):
                v, w = w, v
            if not isinstance(w, _Elem):
                if w.is_zero():
                    return v
                raise self.error("cannot add a scalar to a tree expression", tok, PresentationError)
            out = dict(v.terms)
            return _Elem(_add_terms(out, w.terms))
        return v + w

    def multiply(self, v, w, tok: Token):
        if isinstance(v, _Elem) and isinstance(w, _Elem):
            raise self.error("product of two tree expressions", tok, PresentationError)
        if isinstance(v, _Elem) or isinstance(w, _Elem):
            if isinstance(v, _Elem):
                v, w = w, v
            return _Elem(_add_terms({}, w.terms, v))
        return v * w

    def divide(self, v, w, tok: Token):
        if isinstance(w, _Elem) or not w.is_constant() or w.is_zero():
            raise self.error("division only by a nonzero constant", tok, PresentationError)
        if isinstance(v, _Elem):
            return _Elem({e: c / w for e, c in v.terms.items()})
        return v / w

    def equation(self):
        lhs = self.expr()
        if self.at("="):
            op = self.advance()
            rhs = self.expr()
            lhs = self.combine(lhs, rhs, "-", op)
        return lhs

    # headers and declarations
    def header(self, keyword: str) -> tuple[str, tuple[str, ...]]:
        self.expect(keyword, "ident")
        name = self.expect("", "ident").text
        params: list[str] = []
        if self.tok.kind == "ident" and self.tok.text == "params":
            self.advance()
            self.expect("(")
            params.append(self.expect("", "ident").text)
            while self.at(","):
                self.advance()
                params.append(self.expect("", "ident").text)
            self.expect(")")
        if len(set(params)) != len(params):
            raise self.error("duplicate parameter name", cls=PresentationError)
        self.params = set(params)
        return name, tuple(params)


def _check_letters(term: ExprNode, letters: str, tok: Token, whole: bool = True) -> None:
    used = expr_letters(term)
    if len(set(used)) != len(used):
        raise PresentationError(f"repeated letter in term {term}", tok.line, tok.col)
    if whole and sorted(used) != sorted(letters):
        raise PresentationError(
            f"term {term} must use each of {', '.join(letters)} exactly once", tok.line, tok.col
        )


def parse_operad_presentation(text: str) -> OperadPresentation:
    p = _Parser(text)
    p.mode = "operad"
    name, params = p.header("operad")
    p.letters = LETTERS[:3]
    gens: list[GeneratorSymbol] = []
    rels: list[Combination] = []
    while p.tok.kind != "eof":
        kw = p.expect("", "ident")
        if kw.text == "gen":
            gtok = p.expect("", "ident")
            p.expect(":")
            sym_tok = p.expect("", "ident")
            try:
                sym = Symmetry(sym_tok.text)
            except ValueError:
                raise p.error(f"unknown symmetry {sym_tok.text!r} (comm, anti, nonsym)", sym_tok)
            if gtok.text in p.generators or gtok.text in p.params:
                raise p.error(f"duplicate name {gtok.text!r}", gtok, PresentationError)
            if len(gtok.text) == 1 and gtok.text in LETTERS:
                raise p.error(f"generator name {gtok.text!r} clashes with a leaf letter", gtok, PresentationError)
            g = GeneratorSymbol(gtok.text, 2, sym)
            p.generators[g.name] = g
            gens.append(g)
            p.expect(";")
        elif kw.text == "rel":
            start = p.tok
            v = p.equation()
            if not isinstance(v, _Elem):
                if v.is_zero():
                    raise p.error("relation is identically zero", start, PresentationError)
                raise p.error("relation must be a combination of tree expressions", start, PresentationError)
            for e in v.terms:
                _check_letters(e, p.letters, start)
            if not v.terms:
                raise p.error("relation is identically zero", start, PresentationError)
            rels.append(normalize_combination(v.terms))
            p.expect(";")
        else:
            raise p.error(f"expected 'gen' or 'rel', found {kw.text!r}", kw)
    return OperadPresentation(name, tuple(gens), tuple(rels), params)


def parse_element(text: str, pres: OperadPresentation, n: int) -> Combination:
    """Parse one element of arity ``n`` over ``pres`` (letters a, b, c, ...)."""
    if not 1 <= n <= len(LETTERS):
        raise ValueError(f"arity {n} outside 1..{len(LETTERS)}")
    p = _Parser(text)
    p.mode = "operad"
    p.params = set(pres.params)
    p.generators = {g.name: g for g in pres.generators}
    p.letters = LETTERS[:n]
    start = p.tok
    v = p.equation()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after element")
    if not isinstance(v, _Elem):
        if v.is_zero():
            return ()
        raise p.error("element must be a combination of tree expressions", start, PresentationError)
    for e in v.terms:
        _check_letters(e, p.letters, start)
    return normalize_combination(v.terms)


def parse_algebra_presentation(text: str) -> AlgebraPresentation:
    p = _Parser(text)
    p.mode = "algebra"
    name, params = p.header("algebra")
    variables: list[str] = []
    rels: list[Poly] = []
    while p.tok.kind != "eof":
        kw = p.expect("", "ident")
        if kw.text == "var":
            while True:
                vt = p.expect("", "ident")
                if vt.text in p.variables or vt.text in p.params:
                    raise p.error(f"duplicate name {vt.text!r}", vt, PresentationError)
                p.variables.add(vt.text)
                variables.append(vt.text)
                if not p.at(","):
                    break
                p.advance()
            p.expect(";")
        elif kw.text == "rel":
            start = p.tok
            v = p.equation()
            if v.is_zero():
                raise p.error("relation is identically zero", start, PresentationError)
            rels.append(v)
            p.expect(";")
        else:
            raise p.error(f"expected 'var' or 'rel', found {kw.text!r}", kw)
    return AlgebraPresentation(name, tuple(variables), tuple(rels), params)


def parse_polynomial(text: str, variables, params=()) -> Poly:
    p = _Parser(text)
    p.mode = "algebra"
    p.variables = set(variables)
    p.params = set(params)
    v = p.equation()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after polynomial")
    return v


# pretty printing ---------------------------------------------------------------


def _coeff_prefix(c: Poly) -> tuple[bool, str]:
    """Sign and textual multiplier for a coefficient."""
    if c.is_constant():
        x = c.constant()
        neg = x < 0
        x = -x if neg else x
        if x == 1:
            return neg, ""
        s = str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return neg, s + "*"
    if len(c.terms) == 1:
        (m, x), = c.terms.items()
        if x < 0:
            return True, format_poly(-c) + "*"
        return False, format_poly(c) + "*"
    return False, f"({format_poly(c)})*"


def format_combination(terms: Combination) -> str:
    if not terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(terms):
        neg, pre = _coeff_prefix(c)
        body = pre + str(e)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _header(keyword: str, name: str, params) -> str:
    return f"{keyword} {name}" + (f" params({', '.join(params)})" if params else "")


def format_operad(pres: OperadPresentation) -> str:
    lines = [_header("operad", pres.name, pres.params)]
    lines += [f"gen {g.name} : {g.symmetry.value};" for g in pres.generators]
    lines += [f"rel {format_combination(r)};" for r in pres.relations]
    return "\n".join(lines) + "\n"


def format_algebra(pres: AlgebraPresentation) -> str:
    lines = [_header("algebra", pres.name, pres.params)]
    lines += [f"var {v};" for v in pres.variables]
    lines += [f"rel {format_poly(r)};" for r in pres.relations]
    return "\n".join(lines) + "\n"
