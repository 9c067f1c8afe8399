import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from difflambda.generators import random_pure, random_res_term, random_term
from difflambda.resource import validate_res
from difflambda.rewrite import (
    NoRedex,
    Verdict,
    eta_diff,
    is_normal,
    normalize_diff,
    normalize_res,
    step_diff,
    step_res,
    theory_eq_diff,
    theory_eq_res,
)
from difflambda.syntax import parse_diff, parse_res
from difflambda.terms import Lam, App, Var, ZERO, open_lam, subterms, validate
from oracles import named_normalize, named_show, random_named

LETS = [
    ("I", r"\x.x"),
    ("K", r"\a b.a"),
    ("Delta", r"\x.x x"),
    ("Omega", r"(\x.x x) (\x.x x)"),
    ("S", r"\f g a.f a (g a)"),
    ("two", r"\f a.f (f a)"),
    ("three", r"\f a.f (f (f a))"),
    ("plus", r"\m n f a.m f (n f a)"),
    ("times", r"\m n f.m (n f)"),
]
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def P(src):
    return parse_diff(src, LETS)


def R(src):
    return parse_res(src, LETS)


class TestDifferential:
    def test_beta_step(self):
        assert step_diff(P(r"(\x.x) (y + z)")) == P("y + z")

    def test_beta_d_step(self):
        assert step_diff(P(r"D(\x.x x; y)")) == P(r"\x.y x + \x.D(x; y) x")

    def test_omega_reproduces_itself(self):
        assert step_diff(P("Omega")) == P("Omega")
        _, exhausted = normalize_diff(P("Omega"), 100)
        assert exhausted

    def test_no_redex(self):
        with pytest.raises(NoRedex):
            step_diff(P(r"\x.x y"))

    def test_goldens(self):
        assert normalize_diff(P("D(Delta; y) z"))[0] == P("y z + D(z; y) z")
        assert normalize_diff(P("D(Delta; x, y) 0"))[0] == P("D(x; y) 0 + D(y; x) 0")

    def test_application_to_zero_kills_linear_uses(self):
        assert normalize_diff(P(r"(\x.D(y; x)) 0"))[0] == ZERO
        assert normalize_diff(P(r"(\x.y) 0"))[0] == P("y")

    def test_verdicts(self):
        assert theory_eq_diff(P("x"), P("y")) == Verdict.NOT_EQUAL
        assert theory_eq_diff(P("Omega"), P("0"), fuel=50) == Verdict.UNKNOWN
        assert theory_eq_diff(P("D(Delta; z)"), P(r"z + \x.D(x; z) x"), 200, eta=True) == Verdict.EQUAL
        assert theory_eq_diff(P("D(Delta; z)"), P(r"z + \x.D(x; z) x"), 200) == Verdict.NOT_EQUAL
        assert theory_eq_diff(P("x + x"), P("x")) == Verdict.NOT_EQUAL
        assert theory_eq_diff(P("x + x"), P("x"), idempotent=True) == Verdict.EQUAL

    def test_church_arithmetic(self):
        assert theory_eq_diff(P("plus two three"), P(r"\f a.f (f (f (f (f a))))")) == Verdict.EQUAL
        assert theory_eq_diff(P("times two three"), P("times three two")) == Verdict.EQUAL
        assert theory_eq_diff(P("K I Omega"), P("I")) == Verdict.EQUAL
        assert theory_eq_diff(P("S K K"), P("I")) == Verdict.EQUAL

    def test_eta_contracts_only_when_variable_is_not_free(self):
        assert eta_diff(P(r"\x.y x")) == P("y")
        assert eta_diff(P(r"\x.x x")) == P(r"\x.x x")
        assert eta_diff(P(r"\x.y (x + x)")) == P(r"\x.y (x + x)")
        assert normalize_diff(P(r"\a.(\b.y b) a"), eta=True)[0] == P("y")

    def test_head_strategy_stops_at_head_normal_form(self):
        nf, exhausted = normalize_diff(P(r"x ((\a.a) y)"), 10, strategy="head")
        assert not exhausted and nf == P(r"x ((\a.a) y)")

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_steps_preserve_the_grammar(self, seed):
        s = random_term(random.Random(seed), 10)
        for _ in range(5):
            try:
                s = step_diff(s)
            except NoRedex:
                break
            validate(s)

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_strategies_agree(self, seed):
        s = random_term(random.Random(seed), 9)
        a, ea = normalize_diff(s, 300)
        b, eb = normalize_diff(s, 300, strategy="innermost")
        if not (ea or eb):
            assert a == b
            assert is_normal(a)

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_no_eta_redex_survives(self, seed):
        s = random_term(random.Random(seed), 9)
        nf, exhausted = normalize_diff(s, 300, eta=True)
        if exhausted:
            return
        for root in nf.terms():
            for t in subterms(root):
                if isinstance(t, Lam):
                    z, body = open_lam(t)
                    if isinstance(body, App) and z not in body.fun.fv:
                        assert body.arg.items() != ((Var(z), 1),)


class TestConservativity:
    """Pure terms: the differential machinery agrees with a plain named normalizer."""

    CORPUS = [
        r"(\x.x) y",
        r"(\x y.x) y",
        r"(\x y.y x) y",
        r"(\f x.f (f x)) (\z.z z)",
        r"(\x.\y.x y) (\z.y)",
        r"(\x.x x) (\y.y)",
        r"(\m n f a.m f (n f a)) (\f a.f a) (\f a.f (f a))",
        r"(\a b c.a c (b c)) (\a b.a) (\a b.a)",
        r"(\x.(\y.x y)) y",
        r"(\x y z.x z (y z)) (\p q.p) (\r.r) w",
    ]

    @pytest.mark.parametrize("src", CORPUS)
    def test_corpus(self, src):
        oracle = named_normalize(_parse_named(src), 500)
        nf, exhausted = normalize_diff(parse_diff(src), 500)
        assert not exhausted and oracle is not None
        assert nf == parse_diff(named_show(oracle))

    @settings(max_examples=300, deadline=None)
    @given(seeds)
    def test_random(self, seed):
        t = random_named(random.Random(seed), 10)
        expected = named_normalize(t, 200)
        nf, exhausted = normalize_diff(parse_diff(named_show(t)), 200)
        if expected is None or exhausted:
            return
        assert nf == parse_diff(named_show(expected))


def _parse_named(text):
    """Tiny independent parser for pure terms in backslash syntax."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").replace(".", " . ").replace("\\", " \\ ").split()
    pos = 0

    def atom():
        nonlocal pos
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            t = term()
            pos += 1
            return t
        if tok == "\\":
            pos += 1
            names = []
            while tokens[pos] != ".":
                names.append(tokens[pos])
                pos += 1
            pos += 1
            body = term()
            for n in reversed(names):
                body = ("lam", n, body)
            return body
        pos += 1
        return ("var", tok)

    def term():
        t = atom()
        while pos < len(tokens) and tokens[pos] != ")":
            t = ("app", t, atom())
        return t

    return term()


class TestResource:
    def test_goldens(self):
        assert normalize_res(R(r"(\x.x[x])[I]"))[0] == R("0")
        assert normalize_res(R(r"(\x.x[x])[I,I]"))[0] == R("I + I")
        assert normalize_res(R(r"(\x.x[x])[I,I,I]"))[0] == R("0")
        assert normalize_res(R(r"(\x.x[x])[M,N]"))[0] == R("M[N] + N[M]")

    def test_giant_step_with_banged_and_linear(self):
        # the linear a replaces either the linear x or one copy drawn from x!
        assert step_res(R(r"(\x.y[x, x!])[a, b!]")) == R("y[a, b!] + y[a, b, b!]")
        assert step_res(R(r"(\x.x[x!])[a]")) == R("a[]")
        assert step_res(R(r"(\x.x)[]")) == R("0")
        assert step_res(R(r"(\x.y)[]")) == R("y")

    def test_eta(self):
        assert normalize_res(R(r"\x.y[x!]"), eta=True)[0] == R("y")
        assert normalize_res(R(r"\x.y[x]"), eta=True)[0] == R(r"\x.y[x]")
        lhs = R(r"(\x z.y[y][z!])[]")
        assert theory_eq_res(lhs, R("y[y]"), eta=True) == Verdict.EQUAL

    def test_verdicts(self):
        assert theory_eq_res(R(r"(\x.x[x])[I,I]"), R("I")) == Verdict.NOT_EQUAL
        assert theory_eq_res(R(r"(\x.x[x])[I,I]"), R("I"), idempotent=True) == Verdict.EQUAL
        omega = R(r"(\x.x[x!])[(\x.x[x!])!]")
        assert theory_eq_res(omega, R("0"), fuel=30) == Verdict.UNKNOWN

    def test_no_redex(self):
        with pytest.raises(NoRedex):
            step_res(R("x[y!]"))

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_steps_preserve_the_grammar(self, seed):
        m = random_res_term(random.Random(seed), 10, sums=True)
        for _ in range(5):
            try:
                m = step_res(m)
            except NoRedex:
                break
            validate_res(m)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pure_terms_stay_pure(seed):
    from difflambda.terms import is_pure

    s = random_pure(random.Random(seed), 10)
    nf, exhausted = normalize_diff(s, 200)
    if not exhausted and nf:
        assert is_pure(nf)
