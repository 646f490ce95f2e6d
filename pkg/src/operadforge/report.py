"""Suite orchestration: the claim catalog, configuration and JSON reports."""

from __future__ import annotations

import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Callable, Sequence

from . import cooperad, groebner, koszul, species
from .dsl import DSLSyntaxError, parse_operad_presentation
from .engine import EXACT_CAP, character, check_morphism, component_dimension, in_ideal
from .linalg import DEFAULT_PRIMES
from .presets import algebra, operad

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_SAMPLES = ((0, 0), (1, 0), (0, 1), (1, 1), (2, -3))


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    samples: list = field(default_factory=lambda: [tuple(s) for s in DEFAULT_SAMPLES])
    exact_cap: int = EXACT_CAP
    modular_cap: int = 5
    primes: list = field(default_factory=lambda: list(DEFAULT_PRIMES))
    presets: dict = field(default_factory=dict)  # preset name -> DSL file overriding it
    criteria: list | None = None  # subset of criterion numbers, None for all
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        self.samples = [tuple(Fraction(x) for x in s) for s in self.samples]
        if not self.exact_cap <= self.modular_cap <= 5:
            raise ConfigError("need exact cap <= modular cap <= 5")
        if self.exact_cap > EXACT_CAP:
            raise ConfigError(f"exact cap is at most {EXACT_CAP}")
        if self.modular_cap > self.exact_cap and len(self.primes) < 2:
            raise ConfigError("modular claims need at least two primes")
        if not self.samples:
            raise ConfigError("empty parameter sample list")

    @classmethod
    def from_json(cls, data: dict, base: Path | None = None) -> SuiteConfig:
        known = {"samples", "exact_cap", "modular_cap", "primes", "presets", "criteria", "out", "jobs"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        data = dict(data)
        if base is not None and "presets" in data:
            data["presets"] = {k: str((base / v).resolve()) for k, v in data["presets"].items()}
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> SuiteConfig:
        path = Path(path)
        return cls.from_json(json.loads(path.read_text()), path.parent)


# records ----------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class Check:
    id: str
    inputs: dict
    expected: object
    computed: object
    status: str  # pass, fail, skipped, error

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "inputs": _jsonable(self.inputs),
            "expected": _jsonable(self.expected),
            "computed": _jsonable(self.computed),
            "status": self.status,
        }


@dataclass
class Claim:
    id: str
    criterion: int
    title: str
    checks: list = field(default_factory=list)
    status: str = "pass"
    error: str | None = None
    elapsed_ms: float = 0.0

    def finish(self) -> Claim:
        if self.error is not None:
            self.status = "error"
        else:
            live = [c.status for c in self.checks if c.status != "skipped"]
            if not live:
                self.status = "skipped"
            elif all(s == "pass" for s in live):
                self.status = "pass"
            else:
                self.status = "fail"
        return self

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.id,
            "criterion": self.criterion,
            "title": self.title,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.error is not None:
            out["error"] = self.error
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 1)
        return out


@dataclass
class Report:
    claims: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status in ("pass", "skipped") for c in self.claims)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0, "error": 0}
        for c in self.claims:
            out[c.status] += 1
        return out

    def to_json(self, timing: bool = False) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "passed": self.passed,
            "counts": self.counts(),
            "claims": [c.to_json(timing) for c in self.claims],
            "notes": list(self.notes),
        }

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.claims:
            bad = [k.id for k in c.checks if k.status == "fail"]
            tail = f" ({len(bad)} failing, first {bad[0]})" if bad else ""
            if c.error:
                tail = f" ({c.error})"
            lines.append(f"[{c.status.upper():7}] {c.id}: {c.title}{tail}")
        return lines


# helpers -----------------------------------------------------------------------------


def sample_tag(s) -> str:
    return "p_" + "_".join(str(Fraction(x)) for x in s)


def sample_params(s) -> dict:
    return {"h1": Fraction(s[0]), "h2": Fraction(s[1])}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


class Context:
    """Resolves presets (with optional file overrides) and holds the config."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self._cache = {}

    def operad(self, name: str):
        if name in self._cache:
            return self._cache[name]
        path = self.config.presets.get(name)
        if path is None:
            pres = operad(name)
        else:
            try:
                pres = parse_operad_presentation(Path(path).read_text())
            except DSLSyntaxError as exc:
                raise PresetLoadError(f"parse failure in preset {name!r} ({path}): {exc}") from exc
            except OSError as exc:
                raise PresetLoadError(f"cannot read preset {name!r} ({path}): {exc}") from exc
        self._cache[name] = pres
        return pres

    def dim_check(self, cid: str, name: str, params, n: int, expected: int) -> Check:
        cfg = self.config
        inputs = {"preset": name, "params": params or {}, "n": n}
        if n <= 3 or n <= cfg.exact_cap:
            mode = "exact"
        elif n <= cfg.modular_cap and n > EXACT_CAP:
            mode = "modular"
        else:
            return Check(cid, inputs, expected, None, "skipped")
        rep = component_dimension(self.operad(name), params, n, mode, cfg.primes)
        inputs["field"] = rep.field
        ok = rep.dim == expected and rep.stable
        computed = rep.dim if rep.stable else {"dim": rep.dim, "stable": False}
        return Check(cid, inputs, expected, computed, _status(ok))


class PresetLoadError(RuntimeError):
    pass


# the catalog ---------------------------------------------------------------------------


def c01_ll(ctx: Context) -> list[Check]:
    out = []
    for h in (Fraction(0), Fraction(1), Fraction(5, 3)):
        for n in range(2, 6):
            out.append(ctx.dim_check(f"dim.ll.n{n}.h_{h}", "ll", {"h": h}, n, factorial(n)))
    return out


def c02_ll2(ctx: Context) -> list[Check]:
    out = []
    for s in ctx.config.samples:
        for n in range(2, 5):
            out.append(ctx.dim_check(f"dim.ll2.n{n}.{sample_tag(s)}", "ll2", sample_params(s), n, (n + 1) ** (n - 1)))
    five = [s for s in ctx.config.samples if tuple(s) in ((0, 0), (1, 1))] or ctx.config.samples[:2]
    for s in five:
        out.append(ctx.dim_check(f"dim.ll2.n5.{sample_tag(s)}", "ll2", sample_params(s), 5, 1296))
    return out


def c03_lie2(ctx: Context) -> list[Check]:
    return [ctx.dim_check(f"dim.lie2.n{n}", "lie2", None, n, n ** (n - 1)) for n in range(2, 6)]


def c04_species(ctx: Context) -> list[Check]:
    out = []
    com = [1, 1, 1, 1]
    lie2 = [component_dimension(ctx.operad("lie2"), None, n).dim for n in range(1, 5)]
    for s in ctx.config.samples:
        for n in range(2, 5):
            sp = species.species_compose_dims(com, lie2, n)
            eng = component_dimension(ctx.operad("ll2"), sample_params(s), n).dim
            out.append(Check(f"species.ll2.n{n}.{sample_tag(s)}", {"A": "com", "B": "lie2", "n": n},
                             sp, eng, _status(sp == eng)))
    for s in ctx.config.samples:
        xi = species.xi_check(ctx.operad("com"), ctx.operad("lie2"), ctx.operad("ll2"), sample_params(s))
        out.append(Check(f"xi.com_lie2_ll2.{sample_tag(s)}", {"A": "com", "B": "lie2", "C": "ll2"},
                         xi.composite_dim, xi.target_dim, _status(xi.passed)))
    return out


def c05_groebner(ctx: Context) -> list[Check]:
    out = []
    for h in (1, 2):
        for n in range(2, 5):
            d = groebner.buchberger(algebra("gv", tuple(range(1, n + 1))), {"h": h}).dimension()
            out.append(Check(f"gb.gv.n{n}.h_{h}", {"n": n, "h": h}, factorial(n), d, _status(d == factorial(n))))
    for s in ctx.config.samples:
        for n in range(2, 5):
            m = cooperad.dim_match_operad(n, sample_params(s))
            out.append(Check(f"gb.gv2.n{n}.{sample_tag(s)}", {"n": n, "params": sample_params(s)},
                             m.operad_dim, m.algebra_dim, _status(m.passed)))
    return out


def _splits(total: int):
    labels = list(range(1, total + 1))
    for a in range(1, total):
        for I in itertools.combinations(labels, a):
            yield I, tuple(x for x in labels if x not in I)


def c06_cooperad(ctx: Context) -> list[Check]:
    out = []
    samples = [s for s in ctx.config.samples if tuple(s) in ((1, 1), (2, -3))] or ctx.config.samples[:2]
    for s in samples:
        p = sample_params(s)
        for total in range(2, 5):
            for I, J in _splits(total):
                r = cooperad.rho_well_defined(I, J, p)
                cid = f"rho.I{''.join(map(str, I))}.J{''.join(map(str, J))}.{sample_tag(s)}"
                out.append(Check(cid, {"I": I, "J": J}, True, r.failures[:3] or True, _status(r.passed)))
        for sizes in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)]:
            r = cooperad.coassociativity_check(sizes, p)
            cid = f"coassoc.{'_'.join(map(str, sizes))}.{sample_tag(s)}"
            out.append(Check(cid, {"sizes": sizes}, True, r.failures[:3] or True, _status(r.passed)))
    return out


def c07_dual(ctx: Context) -> list[Check]:
    out = []
    for s in ((1, 1), (1, 0)):
        p = sample_params(s)
        d = koszul.quadratic_dual(ctx.operad("ll2"), p)
        ok = koszul.same_relations(d, None, ctx.operad("ll2dual"), p)
        out.append(Check(f"dual.ll2.{sample_tag(s)}", {"params": p}, True, ok, _status(ok)))
    for a, b in (("com", "lie"), ("lie", "com"), ("ass", "ass")):
        ok = koszul.same_relations(koszul.quadratic_dual(ctx.operad(a)), None, ctx.operad(b), None)
        out.append(Check(f"dual.{a}", {"preset": a}, b, b if ok else "other", _status(ok)))
    return out


def _series(ctx: Context, name: str, params, N: int = 5):
    pres = ctx.operad(name)
    P = [component_dimension(pres, params, n, primes=ctx.config.primes).dim for n in range(1, N + 1)]
    dual = koszul.quadratic_dual(pres, params)
    D = [component_dimension(dual, None, n, primes=ctx.config.primes).dim for n in range(1, N + 1)]
    return P, D, koszul.koszulness_series_test(P, D, N)


def c08_series(ctx: Context) -> list[Check]:
    out = []
    if ctx.config.modular_cap < 5:
        return [Check("koszul.series", {}, None, None, "skipped")]
    for s in ctx.config.samples:
        P, D, r = _series(ctx, "ll2", sample_params(s))
        out.append(Check(f"koszul.ll2.{sample_tag(s)}", {"dims": P, "dual_dims": D}, None,
                         {"first_failure": r.first_failure}, _status(r.passed)))
    for a, b in (("com", "lie"), ("ass", "ass")):
        P = [component_dimension(ctx.operad(a), None, n, primes=ctx.config.primes).dim for n in range(1, 6)]
        D = [component_dimension(ctx.operad(b), None, n, primes=ctx.config.primes).dim for n in range(1, 6)]
        r = koszul.koszulness_series_test(P, D, 5)
        out.append(Check(f"koszul.{a}_{b}", {"dims": P, "dual_dims": D}, None,
                         {"first_failure": r.first_failure}, _status(r.passed)))
    bad = [1, 1, 3, 6, 24]
    r = koszul.koszulness_series_test([1] * 5, bad, 5)
    out.append(Check("koszul.negative_control", {"dims": [1] * 5, "dual_dims": bad}, {"first_failure": 3},
                     {"first_failure": r.first_failure}, _status(not r.passed and r.first_failure == 3)))
    return out


def star_associator() -> str:
    def star(x: str, y: str) -> str:
        return f"m({x},{y}) + h1*l({x},{y}) + h2*p({x},{y})"

    return f"{star(star('a', 'b'), 'c')} - ({star('a', star('b', 'c'))})"


def c09_star(ctx: Context) -> list[Check]:
    el = star_associator()
    out = []
    for s in ctx.config.samples:
        ok = in_ideal(ctx.operad("ll2"), sample_params(s), el)
        out.append(Check(f"star.assoc.{sample_tag(s)}", {"element": "associator of a*b"}, True, ok, _status(ok)))
    return out


ASS2_TO_LL2 = {"s": "m(a,b) + l(a,b)", "l": "p(a,b)"}


def c10_morphism(ctx: Context) -> list[Check]:
    p = {"h1": 1, "h2": 0}
    ok = check_morphism(ctx.operad("ass2"), ctx.operad("ll2"), ASS2_TO_LL2, p)
    out = [Check("morphism.ass2_ll2.p_1_0", {"assignment": ASS2_TO_LL2}, True, ok, _status(ok))]
    for n in range(1, 5):
        a = component_dimension(ctx.operad("ass2"), None, n).dim
        b = component_dimension(ctx.operad("ll2"), p, n).dim
        out.append(Check(f"dim.ass2_vs_ll2.n{n}.p_1_0", {"n": n}, a, b, _status(a == b)))
    return out


def cycle_type_representatives(n: int) -> list[tuple[int, ...]]:
    """One permutation (in one-line notation) per cycle type of S_n."""
    reps = []

    def parts(m, mx):
        if m == 0:
            yield []
            return
        for k in range(min(m, mx), 0, -1):
            for rest in parts(m - k, k):
                yield [k] + rest

    for lam in parts(n, n):
        perm = [0] * n
        start = 0
        for k in lam:
            block = list(range(start + 1, start + k + 1))
            for i, x in enumerate(block):
                perm[x - 1] = block[(i + 1) % k]
            start += k
        reps.append(tuple(perm))
    return reps


def c11_characters(ctx: Context) -> list[Check]:
    out = []
    for n in range(1, 5):
        if n == 4 and ctx.config.exact_cap < 4:
            out.append(Check("char.ll2.n4", {}, None, None, "skipped"))
            continue
        for sigma in cycle_type_representatives(n):
            a = character(ctx.operad("ll2"), {"h1": 0, "h2": 0}, n, sigma)
            b = character(ctx.operad("ll2"), {"h1": 1, "h2": 1}, n, sigma)
            cid = f"char.ll2.n{n}.s_{''.join(map(str, sigma))}"
            out.append(Check(cid, {"n": n, "sigma": sigma}, a, b, _status(a == b)))
    return out


def alt_substitutions(n: int) -> tuple[dict, dict]:
    fwd, bwd = {}, {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        fwd[f"x{i}{j}"] = f"(a{i}{j} + h1)/2"
        fwd[f"y{i}{j}"] = f"(b{i}{j} + h2)/2"
        bwd[f"a{i}{j}"] = f"2*x{i}{j} - h1"
        bwd[f"b{i}{j}"] = f"2*y{i}{j} - h2"
    return fwd, bwd


def c12_alt(ctx: Context) -> list[Check]:
    out = []
    for n in (2, 3):
        labels = tuple(range(1, n + 1))
        fwd, bwd = alt_substitutions(n)
        for s in ((1, 1), (2, -3)):
            r = groebner.check_substitution_iso(algebra("gv2", labels), algebra("gv2alt", labels), fwd, bwd,
                                                sample_params(s))
            out.append(Check(f"iso.gv2_alt.n{n}.{sample_tag(s)}", {"n": n}, True, r.failures[:2] or True,
                             _status(r.passed)))
    return out


def c13_properties(ctx: Context) -> list[Check]:
    """A fixed deterministic sample of the property suites."""
    from . import selfcheck

    return [Check(f"prop.{name}", {}, True, ok, _status(ok)) for name, ok in selfcheck.run_all()]


CATALOG: list[tuple[int, str, str, Callable[[Context], list[Check]]]] = [
    (1, "dim.ll", "dim LL_h(n) = n! at h in {0, 1, 5/3}, n = 2..5", c01_ll),
    (2, "dim.ll2", "dim LL2(n) = (n+1)^(n-1) at every parameter sample", c02_ll2),
    (3, "dim.lie2", "dim Lie2(n) = n^(n-1), n = 2..5", c03_lie2),
    (4, "species.ll2", "species Com o Lie2 agrees with the engine; xi check at arity 4", c04_species),
    (5, "groebner.dims", "dim GV(n) = n!; dim GV2(n) = dim LL2(n)", c05_groebner),
    (6, "cooperad", "rho well defined (|I|+|J| <= 4) and coassociative (total <= 4)", c06_cooperad),
    (7, "dual.ll2", "computed dual of LL2 equals the stated dual; classical anchors", c07_dual),
    (8, "koszul.series", "generating-series test through degree 5", c08_series),
    (9, "star.assoc", "star-product associator lies in the LL2 ideal", c09_star),
    (10, "morphism.ass2_ll2", "Ass2 -> LL2(1,0) is a morphism and dimensions agree", c10_morphism),
    (11, "char.ll2", "characters of LL2 agree at (0,0) and (1,1), n <= 4", c11_characters),
    (12, "iso.gv2_alt", "GV2 is isomorphic to the a/b presentation, n = 2, 3", c12_alt),
    (13, "properties", "property suites on a fixed sample", c13_properties),
]


def run_claim(number: int, config: SuiteConfig) -> Claim:
    _, cid, title, fn = next(c for c in CATALOG if c[0] == number)
    claim = Claim(cid, number, title)
    t0 = time.perf_counter()
    try:
        claim.checks = fn(Context(config))
    except PresetLoadError as exc:
        claim.error = str(exc)
    claim.elapsed_ms = (time.perf_counter() - t0) * 1000
    log.info("claim %s: %d checks in %.0f ms", cid, len(claim.checks), claim.elapsed_ms)
    return claim.finish()


def run_suite(config: SuiteConfig | None = None) -> Report:
    config = config or SuiteConfig()
    numbers = [c[0] for c in CATALOG if config.criteria is None or c[0] in config.criteria]
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            claims = list(pool.map(run_claim, numbers, itertools.repeat(config)))
    else:
        claims = [run_claim(k, config) for k in numbers]
    report = Report(claims)
    report.notes.append("the generating-series test is a necessary condition for Koszulness, not a proof")
    report.notes.append(open_question_origin_dual())
    if config.out:
        Path(config.out).write_text(report.dumps())
    return report


def open_question_origin_dual() -> str:
    p = {"h1": 0, "h2": 0}
    ok = koszul.same_relations(koszul.quadratic_dual(operad("ll2"), p), None, operad("ll2dual"), p)
    return f"stated dual relations at the origin span the annihilator: {ok}"
