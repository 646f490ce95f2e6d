"""Catalog of the presentations used throughout the package.

Operad relations are transcribed once each in the letters a, b, c; the
engine generates their S_3-orbits.  Gelfand–Varchenko style algebras are
generated as text for a given number of points, with the symmetric
generators ``x_ji`` (i < j) already replaced by ``h - x_ij``.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Sequence

from .dsl import (
    AlgebraPresentation,
    OperadPresentation,
    parse_algebra_presentation,
    parse_operad_presentation,
)

COM = """\
operad com
gen m : comm;
rel m(m(a,b),c) - m(a,m(b,c));
"""

LIE = """\
operad lie
gen l : anti;
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
"""

ASS = """\
operad ass
gen s : nonsym;
rel s(s(a,b),c) - s(a,s(b,c));
"""

POISSON = """\
operad poisson
gen m : comm;
gen l : anti;
rel m(m(a,b),c) - m(a,m(b,c));
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
rel l(m(a,b),c) = m(a,l(b,c)) + m(l(a,c),b);
"""

LIE2 = """\
operad lie2
gen l : anti;
gen p : anti;
rel p(a,p(b,c)) + p(b,p(c,a)) + p(c,p(a,b));
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
rel p(a,l(b,c)) + p(b,l(c,a)) + p(c,l(a,b)) + l(a,p(b,c)) + l(b,p(c,a)) + l(c,p(a,b));
"""

# s is the associative product, l the bracket; antisymmetry of l is its declared type
ASS2 = """\
operad ass2
gen s : nonsym;
gen l : anti;
rel s(a,s(b,c)) = s(s(a,b),c);
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
rel l(a, s(b,c) + s(c,b)) = s(l(a,b),c) + s(b,l(a,c)) + s(l(a,c),b) + s(c,l(a,b));
rel l(a, s(b,c) - s(c,b)) + l(b, s(c,a) - s(a,c)) + l(c, s(a,b) - s(b,a))
    + s(a,l(b,c)) - s(l(b,c),a) + s(b,l(c,a)) - s(l(c,a),b) + s(c,l(a,b)) - s(l(a,b),c);
"""

LL = """\
operad ll params(h)
gen m : comm;
gen l : anti;
rel l(m(a,b),c) = m(a,l(b,c)) + m(l(a,c),b);
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
rel m(m(a,b),c) - m(a,m(b,c)) = h^2*l(b,l(a,c));
"""

# m is the product, l the bracket paired with h1, p the bracket paired with h2
LL2 = """\
operad ll2 params(h1, h2)
gen m : comm;
gen l : anti;
gen p : anti;
rel l(m(a,b),c) = m(a,l(b,c)) + m(l(a,c),b);
rel p(m(a,b),c) = m(a,p(b,c)) + m(p(a,c),b);
rel p(a,p(b,c)) + p(b,p(c,a)) + p(c,p(a,b));
rel l(a,l(b,c)) + l(b,l(c,a)) + l(c,l(a,b));
rel p(a,l(b,c)) + p(b,l(c,a)) + p(c,l(a,b)) + l(a,p(b,c)) + l(b,p(c,a)) + l(c,p(a,b));
rel m(m(a,b),c) - m(a,m(b,c))
    = h1^2*l(b,l(a,c)) + h1*h2*(l(b,p(a,c)) + p(b,l(a,c))) + h2^2*p(b,p(a,c));
"""

# generator order matches LL2 under the pairing: q <-> m, s1 <-> l, s2 <-> p
LL2DUAL = """\
operad ll2dual params(h1, h2)
gen q : anti;
gen s1 : comm;
gen s2 : comm;
rel q(s1(a,b),c) = s1(a,q(b,c)) + s1(q(a,c),b);
rel q(s2(a,b),c) = s2(a,q(b,c)) + s2(q(a,c),b);
rel q(a,q(b,c)) + q(b,q(c,a)) + q(c,q(a,b));
rel s1(s1(a,b),c) - s1(a,s1(b,c)) = h1*h1*q(b,q(a,c));
rel s1(s2(a,b),c) - s1(a,s2(b,c)) = h1*h2*q(b,q(a,c));
rel s2(s1(a,b),c) - s2(a,s1(b,c)) = h2*h1*q(b,q(a,c));
rel s2(s2(a,b),c) - s2(a,s2(b,c)) = h2*h2*q(b,q(a,c));
rel s1(s2(a,b),c) = s2(s1(a,b),c);
"""

OPERADS = {
    "com": COM,
    "lie": LIE,
    "ass": ASS,
    "poisson": POISSON,
    "lie2": LIE2,
    "ass2": ASS2,
    "ll": LL,
    "ll2": LL2,
    "ll2dual": LL2DUAL,
}

ALGEBRAS = ("gv", "gv2", "gv2alt")


class UnknownPreset(KeyError):
    pass


# algebra generators ----------------------------------------------------------


def var_name(letter: str, i, j) -> str:
    si, sj = str(i).replace("*", "star"), str(j).replace("*", "star")
    if len(si) == 1 and len(sj) == 1:
        return f"{letter}{si}{sj}"
    return f"{letter}_{si}_{sj}"


def _ordered(labels: Sequence) -> list:
    """Labels in the fixed order used for variable elimination (ints first, star last)."""
    return sorted(labels, key=lambda x: (isinstance(x, str), x if isinstance(x, int) else 0, str(x)))


def _sym_var(letter: str, i, j, param: str, pos: dict, sign: str = "sym") -> str:
    """Text for generator ``letter_ij`` after eliminating the ones with i after j."""
    if pos[i] < pos[j]:
        return var_name(letter, i, j)
    if sign == "sym":
        return f"({param} - {var_name(letter, j, i)})"
    return f"(-{var_name(letter, j, i)})"


def gv_text(labels: Sequence, name: str = "gv") -> str:
    labels = _ordered(labels)
    pos = {x: k for k, x in enumerate(labels)}
    X = lambda i, j: _sym_var("x", i, j, "h", pos)
    lines = [f"algebra {name} params(h)"]
    lines += [f"var {var_name('x', i, j)};" for i, j in itertools.combinations(labels, 2)]
    for i, j in itertools.permutations(labels, 2):
        lines.append(f"rel {X(i, j)}^2 = h*{X(i, j)};")
    for i, j, k in itertools.permutations(labels, 3):
        lines.append(f"rel {X(i, j)}*{X(j, k)} + h*{X(i, k)} = {X(i, j)}*{X(i, k)} + {X(j, k)}*{X(i, k)};")
    return "\n".join(lines) + "\n"


def gv2_text(labels: Sequence, name: str = "gv2") -> str:
    labels = _ordered(labels)
    pos = {x: k for k, x in enumerate(labels)}
    X = lambda i, j: _sym_var("x", i, j, "h1", pos)
    Y = lambda i, j: _sym_var("y", i, j, "h2", pos)
    lines = [f"algebra {name} params(h1, h2)"]
    lines += [f"var {var_name('x', i, j)};" for i, j in itertools.combinations(labels, 2)]
    lines += [f"var {var_name('y', i, j)};" for i, j in itertools.combinations(labels, 2)]
    for i, j in itertools.permutations(labels, 2):
        x, y = X(i, j), Y(i, j)
        lines.append(f"rel {x}^2 = h1*{x};")
        lines.append(f"rel {y}^2 = h2*{y};")
        lines.append(f"rel 2*{x}*{y} = h2*{x} + h1*{y};")
    for i, j, k in itertools.permutations(labels, 3):
        lines.append(f"rel {X(i, j)}*{X(j, k)} + h1*{X(i, k)} = {X(i, j)}*{X(i, k)} + {X(j, k)}*{X(i, k)};")
        lines.append(
            f"rel {X(i, j)}*{Y(j, k)} + {Y(i, j)}*{X(j, k)} + h2*{X(i, k)} + h1*{Y(i, k)}"
            f" = {X(i, j)}*{Y(i, k)} + {Y(i, j)}*{X(i, k)} + {X(j, k)}*{Y(i, k)} + {Y(j, k)}*{X(i, k)};"
        )
        lines.append(f"rel {Y(i, j)}*{Y(j, k)} + h2*{Y(i, k)} = {Y(i, j)}*{Y(i, k)} + {Y(j, k)}*{Y(i, k)};")
    return "\n".join(lines) + "\n"


def gv2alt_text(labels: Sequence, name: str = "gv2alt") -> str:
    labels = _ordered(labels)
    pos = {x: k for k, x in enumerate(labels)}
    A = lambda i, j: _sym_var("a", i, j, "", pos, "anti")
    B = lambda i, j: _sym_var("b", i, j, "", pos, "anti")
    lines = [f"algebra {name} params(h1, h2)"]
    lines += [f"var {var_name('a', i, j)};" for i, j in itertools.combinations(labels, 2)]
    lines += [f"var {var_name('b', i, j)};" for i, j in itertools.combinations(labels, 2)]
    for i, j in itertools.permutations(labels, 2):
        a, b = A(i, j), B(i, j)
        lines.append(f"rel {a}^2 = h1^2;")
        lines.append(f"rel {b}^2 = h2^2;")
        lines.append(f"rel {a}*{b} = h1*h2;")
    for i, j, k in itertools.permutations(labels, 3):
        lines.append(f"rel {A(i, j)}*{A(j, k)} + {A(j, k)}*{A(k, i)} + {A(k, i)}*{A(i, j)} = h1^2;")
        lines.append(
            f"rel {A(i, j)}*{B(j, k)} + {B(i, j)}*{A(j, k)} + {A(j, k)}*{B(k, i)} + {B(j, k)}*{A(k, i)}"
            f" + {A(k, i)}*{B(i, j)} + {B(k, i)}*{A(i, j)} = 2*h1*h2;"
        )
        lines.append(f"rel {B(i, j)}*{B(j, k)} + {B(j, k)}*{B(k, i)} + {B(k, i)}*{B(i, j)} = h2^2;")
    return "\n".join(lines) + "\n"


_ALG_TEXT = {"gv": gv_text, "gv2": gv2_text, "gv2alt": gv2alt_text}


@lru_cache(maxsize=None)
def operad(name: str) -> OperadPresentation:
    if name not in OPERADS:
        raise UnknownPreset(f"unknown operad preset {name!r}")
    return parse_operad_presentation(OPERADS[name])


@lru_cache(maxsize=None)
def algebra(name: str, labels: tuple) -> AlgebraPresentation:
    if name not in _ALG_TEXT:
        raise UnknownPreset(f"unknown algebra preset {name!r}")
    if not labels:
        raise ValueError("empty label set")
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct")
    return parse_algebra_presentation(_ALG_TEXT[name](labels))


def preset_text(name: str, n: int | None = None) -> str:
    if name in OPERADS:
        return OPERADS[name]
    if name in _ALG_TEXT:
        if n is None:
            raise ValueError(f"algebra preset {name!r} needs a number of points")
        return _ALG_TEXT[name](tuple(range(1, n + 1)))
    raise UnknownPreset(f"unknown preset {name!r}")


_CALL = re.compile(r"^\s*([a-z0-9]+)\s*(?:\((.*)\))?\s*$")


def parse_preset_ref(ref: str) -> tuple[str, list[str]]:
    """Split ``"gv2(3,1,1)"`` into ``("gv2", ["3", "1", "1"])``."""
    m = _CALL.match(ref)
    if not m:
        raise UnknownPreset(f"malformed preset reference {ref!r}")
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2) else []
    return m.group(1), args


def preset(name: str):
    """Look up a preset by name, e.g. ``"lie2"``, ``"ll2"``, ``"gv(3)"``, ``"gv2(3)"``.

    Parameters are never baked into a presentation; supply them at
    computation time.  Trailing parameter arguments such as ``ll2(1,1)``
    are accepted and ignored here, use :func:`preset_with_params` to keep them.
    """
    return preset_with_params(name)[0]


def preset_with_params(ref: str):
    base, args = parse_preset_ref(ref)
    if base in OPERADS:
        pres = operad(base)
        return pres, dict(zip(pres.params, args))
    if base in _ALG_TEXT:
        if not args:
            raise ValueError(f"algebra preset {base!r} needs a number of points, e.g. {base}(3)")
        n = int(args[0])
        pres = algebra(base, tuple(range(1, n + 1)))
        return pres, dict(zip(pres.params, args[1:]))
    raise UnknownPreset(f"unknown preset {ref!r}")
