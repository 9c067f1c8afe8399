"""Random terms for property tests and demos.

Every generator takes a ``random.Random`` and a size budget, so a seed
fixes the output.  Sizes are approximate upper bounds on node counts.
"""

from __future__ import annotations

import random

from .resource import EMPTY_BAG, BagSum, ResSum, mk_bag_cons, mk_rabs, mk_rapp, mk_rvar
from .terms import DiffSum, mk_abs, mk_app, mk_dapp, mk_var

FREE = ("x", "y", "z")
BINDERS = "abcdefgh"


def _split(rng: random.Random, n: int) -> tuple[int, int]:
    k = rng.randint(1, max(1, n - 1))
    return k, max(1, n - k)


def _binder(scope: tuple) -> str:
    return BINDERS[len(scope) % len(BINDERS)] + ("" if len(scope) < len(BINDERS) else str(len(scope)))


def _var(rng: random.Random, scope: tuple, free) -> str:
    pool = list(free) + list(scope)
    # favour bound variables so abstractions are rarely vacuous
    if scope and rng.random() < 0.6:
        return rng.choice(scope)
    return rng.choice(pool)


def random_term(
    rng: random.Random,
    size: int = 8,
    free=FREE,
    pure: bool = False,
    sums: bool = True,
    scope: tuple = (),
) -> DiffSum:
    """A random differential term, usually a single simple term."""
    if size <= 1 or (not scope and not free):
        if not scope and not free:
            x = _binder(scope)
            return mk_abs(x, mk_var(x))
        return mk_var(_var(rng, scope, free))
    r = rng.random()
    if r < 0.3:
        x = _binder(scope)
        return mk_abs(x, random_term(rng, size - 1, free, pure, sums, scope + (x,)), x)
    if pure or r < 0.75:
        k, rest = _split(rng, size - 1)
        fun = random_term(rng, k, free, pure, sums, scope)
        if sums and not pure and rest >= 3 and rng.random() < 0.25:
            a, b = _split(rng, rest)
            arg = random_term(rng, a, free, pure, sums, scope) + random_term(
                rng, b, free, pure, sums, scope
            )
        elif sums and not pure and rng.random() < 0.05:
            arg = DiffSum()
        else:
            arg = random_term(rng, rest, free, pure, sums, scope)
        return mk_app(fun, arg)
    k, rest = _split(rng, size - 1)
    fun = random_term(rng, k, free, pure, sums, scope)
    args = [random_term(rng, rest, free, pure, False, scope)]
    if rest >= 4 and rng.random() < 0.3:
        a, b = _split(rng, rest)
        args = [random_term(rng, a, free, pure, False, scope), random_term(rng, b, free, pure, False, scope)]
    return mk_dapp(fun, *args)


def random_pure(rng: random.Random, size: int = 8, free=FREE) -> DiffSum:
    return random_term(rng, size, free, pure=True)


def random_simple(rng: random.Random, size: int = 8, free=FREE, pure: bool = False) -> DiffSum:
    """Like random_term but always a single simple term."""
    while True:
        s = random_term(rng, size, free, pure)
        if len(s) == 1 and s.total() == 1:
            return s


def random_normal(
    rng: random.Random, size: int = 8, free=FREE, scope: tuple = (), sums: bool = True
) -> DiffSum:
    """A random beta/beta_D normal form: lambdas over a variable-headed spine."""
    if size > 2 and rng.random() < 0.3:
        x = _binder(scope)
        return mk_abs(x, random_normal(rng, size - 1, free, scope + (x,), sums), x)
    acc = mk_var(_var(rng, scope, free))
    budget = size - 1
    while budget > 0 and rng.random() < 0.7:
        n = rng.randint(1, budget)
        budget -= n
        if rng.random() < 0.6:
            arg = random_normal(rng, n, free, scope, sums)
            if sums and n >= 3 and rng.random() < 0.2:
                arg = arg + random_normal(rng, n - 1, free, scope, sums)
            elif rng.random() < 0.1:
                arg = DiffSum()
            acc = mk_app(acc, arg)
        else:
            acc = mk_dapp(acc, random_normal(rng, n, free, scope, False))
    return acc


def random_res_term(
    rng: random.Random, size: int = 8, free=FREE, scope: tuple = (), sums: bool = False
) -> ResSum:
    """A random resource term; bags mix linear and banged resources."""
    if size <= 1:
        return mk_rvar(_var(rng, scope, free))
    if rng.random() < 0.3:
        x = _binder(scope)
        return mk_rabs(x, random_res_term(rng, size - 1, free, scope + (x,), sums), x)
    k, rest = _split(rng, size - 1)
    fun = random_res_term(rng, k, free, scope, sums)
    bag = BagSum.single(EMPTY_BAG)
    n = rng.choice((0, 1, 1, 2, 2, 3)) if rest > 1 else rng.choice((0, 1))
    for _ in range(n):
        part = max(1, rest // max(n, 1))
        r = random_res_term(rng, part, free, scope, sums)
        if sums and part >= 3 and rng.random() < 0.2:
            r = r + random_res_term(rng, part - 1, free, scope, sums)
        bag = mk_bag_cons(r, bag, rng.random() < 0.4)
    return mk_rapp(fun, bag)


def random_res_simple(rng: random.Random, size: int = 8, free=FREE) -> ResSum:
    while True:
        m = random_res_term(rng, size, free)
        if len(m) == 1 and m.total() == 1:
            return m


def random_resource_normal(rng: random.Random, size: int = 6, free=FREE, scope: tuple = ()) -> ResSum:
    """A random resource normal form (variable-headed, no redex)."""
    if size > 2 and rng.random() < 0.3:
        x = _binder(scope)
        return mk_rabs(x, random_resource_normal(rng, size - 1, free, scope + (x,)), x)
    acc = mk_rvar(_var(rng, scope, free))
    budget = size - 1
    while budget > 0 and rng.random() < 0.6:
        n = rng.randint(1, budget)
        budget -= n
        bag = BagSum.single(EMPTY_BAG)
        for _ in range(rng.choice((0, 1, 2))):
            bag = mk_bag_cons(random_resource_normal(rng, max(1, n // 2), free, scope), bag, rng.random() < 0.4)
        acc = mk_rapp(acc, bag)
    return acc
