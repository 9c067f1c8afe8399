import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from difflambda.generators import random_term
from difflambda.syntax import parse_diff as P
from difflambda.terms import (
    ZERO,
    App,
    DApp,
    DiffSum,
    Lam,
    Var,
    alpha_eq,
    canonicalize,
    free_vars,
    is_pure,
    mk_abs,
    mk_app,
    mk_dapp,
    mk_var,
    validate,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_alpha_equivalent_abstractions_are_equal():
    assert P(r"\x.x") == P(r"\y.y")
    assert P(r"\x y.x y") == P(r"\a b.a b")
    assert P(r"\x y.x y") != P(r"\x y.y x")
    assert alpha_eq(P(r"\x.z x"), P(r"\q.z q"))


def test_free_variables():
    assert P(r"\x.x y").fv == {"y"}
    assert free_vars(P(r"D(\x.x; z) w + q")) == {"z", "w", "q"}
    assert P("0").fv == frozenset()


def test_sums_are_commutative_multisets():
    assert P("x + y") == P("y + x")
    assert P("x + x") != P("x")
    assert P("x + x").total() == 2
    assert canonicalize(P("x + x + y"), idempotent=True) == P("x + y")


def test_zero_is_absorbing_in_linear_positions():
    assert mk_app(ZERO, P("y")) == ZERO
    assert mk_dapp(P("x"), ZERO) == ZERO
    assert mk_dapp(ZERO, P("y")) == ZERO
    assert mk_abs("x", ZERO) == ZERO
    # but not in argument position of an ordinary application
    assert mk_app(P("x"), ZERO) != ZERO


def test_constructors_distribute_over_sums():
    assert mk_app(P("x + y"), P("z")) == P("x z + y z")
    assert mk_abs("v", P("v + w")) == P(r"\v.v + \v.w")
    assert mk_dapp(P("f"), P("a + b")) == P("D(f; a) + D(f; b)")
    # application is linear only in the function
    assert len(mk_app(P("x"), P("y + z"))) == 1


def test_linear_applications_flatten_and_sort():
    nested = mk_dapp(mk_dapp(P("f"), P("b")), P("a"))
    assert nested == P("D(f; a, b)")
    (t,) = nested.terms()
    assert isinstance(t, DApp) and len(t.args) == 2
    assert P("D(D(f; a); b)") == P("D(f; b, a)")


def test_is_pure():
    assert is_pure(P(r"\x.x (y z)"))
    assert not is_pure(P("D(x; y)"))
    assert not is_pure(P("x + y"))
    assert not is_pure(P("x 0"))
    assert not is_pure(P("x (y + z)"))


def test_validate_rejects_loose_indices():
    validate(P(r"\x.x y"))
    from difflambda.terms import Bound

    with pytest.raises(ValueError):
        validate(DiffSum.single(Bound(0)))


def test_term_order_is_total_and_stable():
    terms = [next(P(s).terms()) for s in ["x", "y", r"\x.x", "x y", "D(x; y)", "x 0"]]
    ordered = sorted(terms)
    assert sorted(reversed(terms)) == ordered
    assert len(set(ordered)) == len(ordered)


def test_node_types():
    (t,) = P(r"(\x.x) y").terms()
    assert isinstance(t, App) and isinstance(t.fun, Lam)
    assert next(mk_var("x").terms()) == Var("x")


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_canonicalization_is_idempotent(seed):
    s = random_term(random.Random(seed), 10)
    assert canonicalize(s) == s
    once = canonicalize(s, idempotent=True)
    assert canonicalize(once, idempotent=True) == once
    assert set(once.terms()) <= set(canonicalize(s, True).terms())


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_generated_terms_are_well_formed(seed):
    s = random_term(random.Random(seed), 12)
    validate(s)
    assert s.fv <= {"x", "y", "z"}
