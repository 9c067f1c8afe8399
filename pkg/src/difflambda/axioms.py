"""Randomized checks of the differential-category laws in MRel.

Each law is a function from a random generator to ``(inputs, lhs, rhs)``;
a trial passes when both sides are equal as finite relations.  The report
has one line per law::

    AXIOM <name> PASS|FAIL trials=<n>

followed, for failures, by an indented counterexample block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .mrel import (
    Arrow,
    FinMultiset,
    FinRel,
    GenParams,
    Product,
    compose,
    curry,
    differential,
    eval_with,
    identity,
    is_linear,
    pairing,
    product,
    product_map,
    proj1,
    proj2,
    random_atoms,
    random_rel,
    star,
    sw,
    uncurry,
    zero,
)

Law = Callable[[random.Random, GenParams], tuple[dict, object, object]]
LAWS: dict[str, Law] = {}


def law(name: str):
    def register(fn: Law) -> Law:
        LAWS[name] = fn
        return fn

    return register


def _atoms(rng, p, *prefixes):
    return [random_atoms(rng, x, p) for x in prefixes]


# -- category, product and closed structure -----------------------------------


@law("cat-id")
def _(rng, p):
    a, b = _atoms(rng, p, "a", "b")
    f = random_rel(rng, a, b, p)
    return {"f": f}, (compose(identity(b), f), compose(f, identity(a))), (f, f)


@law("cat-assoc")
def _(rng, p):
    a, b, c, e = _atoms(rng, p, "a", "b", "c", "e")
    f, g, h = random_rel(rng, a, b, p), random_rel(rng, b, c, p), random_rel(rng, c, e, p)
    return {"f": f, "g": g, "h": h}, compose(compose(h, g), f), compose(h, compose(g, f))


@law("left-additive")
def _(rng, p):
    a, b, c = _atoms(rng, p, "a", "b", "c")
    f, g, h = random_rel(rng, b, c, p), random_rel(rng, b, c, p), random_rel(rng, a, b, p)
    lhs = (compose(f | g, h), compose(zero(b, c), h))
    return {"f": f, "g": g, "h": h}, lhs, (compose(f, h) | compose(g, h), zero(a, c))


@law("proj-pair")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, c, a, p), random_rel(rng, c, b, p)
    fg = pairing(f, g)
    return {"f": f, "g": g}, (compose(proj1(a, b), fg), compose(proj2(a, b), fg)), (f, g)


@law("pair-eta")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    k = random_rel(rng, c, Product(a, b), p)
    return {"k": k}, pairing(compose(proj1(a, b), k), compose(proj2(a, b), k)), k


@law("pair")
def _(rng, p):
    e, c, a, b = _atoms(rng, p, "e", "c", "a", "b")
    f, g, h = random_rel(rng, c, a, p), random_rel(rng, c, b, p), random_rel(rng, e, c, p)
    return {"f": f, "g": g, "h": h}, compose(pairing(f, g), h), pairing(compose(f, h), compose(g, h))


@law("Curry")
def _(rng, p):
    e, c, a, b = _atoms(rng, p, "e", "c", "a", "b")
    f, g = random_rel(rng, Product(c, a), b, p), random_rel(rng, e, c, p)
    rhs = curry(compose(f, product_map(g, identity(a))))
    return {"f": f, "g": g}, compose(curry(f), g), rhs


@law("beta-cat")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, Product(c, a), b, p), random_rel(rng, c, a, p)
    return {"f": f, "g": g}, eval_with(curry(f), g), compose(f, pairing(identity(c), g))


@law("Id-Curry")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, c, Arrow(a, b), p)
    s = random_rel(rng, Product(c, a), b, p)
    return {"f": f, "s": s}, (curry(uncurry(f)), uncurry(curry(s))), (f, s)


@law("+-curry")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, Product(c, a), b, p), random_rel(rng, Product(c, a), b, p)
    lhs = (curry(f | g), curry(zero(Product(c, a), b)))
    return {"f": f, "g": g}, lhs, (curry(f) | curry(g), zero(c, Arrow(a, b)))


@law("+-eval")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, c, Arrow(a, b), p), random_rel(rng, c, Arrow(a, b), p)
    h = random_rel(rng, c, a, p)
    lhs = (eval_with(f | g, h), eval_with(zero(c, Arrow(a, b)), h))
    return {"f": f, "g": g, "h": h}, lhs, (eval_with(f, h) | eval_with(g, h), zero(c, b))


# -- differential structure -----------------------------------------------------


@law("D1")
def _(rng, p):
    a, b = _atoms(rng, p, "a", "b")
    f, g = random_rel(rng, a, b, p), random_rel(rng, a, b, p)
    lhs = (differential(f | g), differential(zero(a, b)))
    return {"f": f, "g": g}, lhs, (differential(f) | differential(g), zero(Product(a, a), b))


@law("D2")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, a, b, p)
    h, k, v = (random_rel(rng, c, a, p) for _ in range(3))
    df = differential(f)
    lhs = (compose(df, pairing(h | k, v)), compose(df, pairing(zero(c, a), v)))
    rhs = (compose(df, pairing(h, v)) | compose(df, pairing(k, v)), zero(c, b))
    return {"f": f, "h": h, "k": k, "v": v}, lhs, rhs


@law("D3")
def _(rng, p):
    a, b = _atoms(rng, p, "a", "b")
    ab = Product(a, b)
    lhs = (differential(identity(a)), differential(proj1(a, b)), differential(proj2(a, b)))
    rhs = (
        proj1(a, a),
        compose(proj1(a, b), proj1(ab, ab)),
        compose(proj2(a, b), proj1(ab, ab)),
    )
    return {}, lhs, rhs


@law("D4")
def _(rng, p):
    a, b, e = _atoms(rng, p, "a", "b", "e")
    f, g = random_rel(rng, a, b, p), random_rel(rng, a, e, p)
    return {"f": f, "g": g}, differential(pairing(f, g)), pairing(differential(f), differential(g))


@law("D5")
def _(rng, p):
    a, b, e = _atoms(rng, p, "a", "b", "e")
    f, g = random_rel(rng, b, e, p), random_rel(rng, a, b, p)
    rhs = compose(differential(f), pairing(differential(g), compose(g, proj2(a, a))))
    return {"f": f, "g": g}, differential(compose(f, g)), rhs


@law("D6")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, a, b, p)
    g, h, k = (random_rel(rng, c, a, p) for _ in range(3))
    lhs = compose(differential(differential(f)), pairing(pairing(g, zero(c, a)), pairing(h, k)))
    return {"f": f, "g": g, "h": h, "k": k}, lhs, compose(differential(f), pairing(g, k))


@law("D7")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, a, b, p)
    g, h, k = (random_rel(rng, c, a, p) for _ in range(3))
    ddf = differential(differential(f))
    z = zero(c, a)
    lhs = compose(ddf, pairing(pairing(z, h), pairing(g, k)))
    rhs = compose(ddf, pairing(pairing(z, g), pairing(h, k)))
    return {"f": f, "g": g, "h": h, "k": k}, lhs, rhs


@law("D-curry")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, Product(c, a), b, p)
    phi = pairing(product_map(proj1(c, c), zero(a, a)), product_map(proj2(c, c), identity(a)))
    rhs = curry(compose(differential(f), phi))
    return {"f": f}, differential(curry(f)), rhs


@law("D-eval")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    h, g = random_rel(rng, c, Arrow(a, b), p), random_rel(rng, c, a, p)
    cc = Product(c, c)
    g2 = compose(g, proj2(c, c))
    first = eval_with(differential(h), g2)
    phi = pairing(pairing(zero(cc, c), differential(g)), pairing(proj2(c, c), g2))
    second = compose(differential(uncurry(h)), phi)
    return {"h": h, "g": g}, differential(eval_with(h, g)), first | second


# -- the star operator ----------------------------------------------------------


@law("star-def")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    ca = Product(c, a)
    f, g = random_rel(rng, ca, b, p), random_rel(rng, c, a, p)
    phi = pairing(pairing(zero(ca, c), compose(g, proj1(c, a))), identity(ca))
    return {"f": f, "g": g}, star(f, g), compose(differential(f), phi)


@law("star-commute")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, Product(c, a), b, p)
    g, h = random_rel(rng, c, a, p), random_rel(rng, c, a, p)
    return {"f": f, "g": g, "h": h}, star(star(f, g), h), star(star(f, h), g)


@law("D-via-star")
def _(rng, p):
    a, b = _atoms(rng, p, "a", "b")
    f = random_rel(rng, a, b, p)
    return {"f": f}, differential(f), star(compose(f, proj2(a, a)), identity(a))


@law("linear-star")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, a, b, p, linear=True), random_rel(rng, c, a, p)
    lhs = star(compose(f, proj2(c, a)), g)
    return {"f": f, "g": g}, lhs, compose(compose(f, g), proj1(c, a))


@law("linear-star-converse")
def _(rng, p):
    # With g = Id the star identity holds exactly for the linear relations.
    a, b = _atoms(rng, p, "a", "b")
    f = random_rel(rng, a, b, p)
    holds = star(compose(f, proj2(a, a)), identity(a)) == compose(f, proj1(a, a))
    return {"f": f}, holds, is_linear(f)


@law("main1-i")
def _(rng, p):
    c, a = _atoms(rng, p, "c", "a")
    g = random_rel(rng, c, a, p)
    return {"g": g}, star(proj2(c, a), g), compose(g, proj1(c, a))


@law("main1-ii")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    h, g = random_rel(rng, c, b, p), random_rel(rng, c, a, p)
    return {"h": h, "g": g}, star(compose(h, proj1(c, a)), g), zero(Product(c, a), b)


@law("main1-iii")
def _(rng, p):
    c, a, e, b = _atoms(rng, p, "c", "a", "e", "b")
    f = random_rel(rng, product(c, a, e), b, p)
    g = random_rel(rng, c, a, p)
    inner = star(compose(f, sw(c, e, a)), compose(g, proj1(c, e)))
    rhs = curry(compose(inner, sw(c, a, e)))
    return {"f": f, "g": g}, star(curry(f), g), rhs


def _main2_inputs(rng, p):
    c, a, e, b = _atoms(rng, p, "c", "a", "e", "b")
    ca = Product(c, a)
    f = random_rel(rng, ca, Arrow(e, b), p)
    g = random_rel(rng, c, a, p)
    h = random_rel(rng, ca, e, p)
    return (c, a, e, b), f, g, h


@law("main2-i")
def _(rng, p):
    _, f, g, h = _main2_inputs(rng, p)
    lhs = star(eval_with(f, h), g)
    rhs = eval_with(star(f, g) | curry(star(uncurry(f), star(h, g))), h)
    return {"f": f, "g": g, "h": h}, lhs, rhs


@law("main2-ii")
def _(rng, p):
    _, f, g, h = _main2_inputs(rng, p)
    lhs = star(curry(star(uncurry(f), h)), g)
    rhs = curry(star(uncurry(star(f, g)), h)) | curry(star(uncurry(f), star(h, g)))
    return {"f": f, "g": g, "h": h}, lhs, rhs


@law("main2-iii")
def _(rng, p):
    (c, *_), f, g, h = _main2_inputs(rng, p)
    ig = pairing(identity(c), g)
    lhs = compose(curry(star(uncurry(f), h)), ig)
    rhs = curry(star(uncurry(compose(f, ig)), compose(h, ig)))
    return {"f": f, "g": g, "h": h}, lhs, rhs


@law("main3")
def _(rng, p):
    c, a, b, e = _atoms(rng, p, "c", "a", "b", "e")
    l = random_rel(rng, b, e, p, linear=True)
    f, g = random_rel(rng, Product(c, a), b, p), random_rel(rng, c, a, p)
    return {"l": l, "f": f, "g": g}, compose(l, star(f, g)), star(compose(l, f), g)


@law("Taylor")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f, g = random_rel(rng, c, Arrow(a, b), p), random_rel(rng, c, a, p)
    top = max((len(q) for _, (q, _) in f.pairs), default=0)
    at_zero = pairing(identity(c), zero(c, a))
    term = uncurry(f)
    total = compose(term, at_zero)
    for _ in range(top + 1):
        term = star(term, g)
        total = total | compose(term, at_zero)
    return {"f": f, "g": g}, eval_with(f, g), total


# -- linear morphisms and the swap ------------------------------------------------


@law("linear-D")
def _(rng, p):
    a, b = _atoms(rng, p, "a", "b")
    f = random_rel(rng, a, b, p)
    return {"f": f}, differential(f) == compose(f, proj1(a, a)), is_linear(f)


@law("linear-compose")
def _(rng, p):
    a, b, e = _atoms(rng, p, "a", "b", "e")
    f, g = random_rel(rng, b, e, p, linear=True), random_rel(rng, a, b, p, linear=True)
    return {"f": f, "g": g}, is_linear(compose(f, g)), True


@law("linear-additive")
def _(rng, p):
    c, a, b = _atoms(rng, p, "c", "a", "b")
    f = random_rel(rng, a, b, p, linear=True)
    g, h = random_rel(rng, c, a, p), random_rel(rng, c, a, p)
    lhs = (compose(f, g | h), compose(f, zero(c, a)))
    return {"f": f, "g": g, "h": h}, lhs, (compose(f, g) | compose(f, h), zero(c, b))


@law("iso-linear")
def _(rng, p):
    (a,) = _atoms(rng, p, "a")
    b = type(a)(tuple(f"b{i}" for i in range(len(a.names))))
    image = list(b.names)
    rng.shuffle(image)
    f = FinRel(a, b, frozenset((_ms(x), y) for x, y in zip(a.names, image)))
    g = FinRel(b, a, frozenset((_ms(y), x) for x, y in zip(a.names, image)))
    lhs = (compose(g, f), compose(f, g), is_linear(f), is_linear(g))
    return {"f": f, "g": g}, lhs, (identity(a), identity(b), True, True)


def _ms(x):
    return FinMultiset((x,))


@law("sw")
def _(rng, p):
    a, b, c, x = _atoms(rng, p, "a", "b", "c", "x")
    f, g, h = random_rel(rng, x, a, p), random_rel(rng, x, b, p), random_rel(rng, x, c, p)
    s = sw(a, b, c)
    abc = product(a, b, c)
    lhs = (
        compose(sw(a, c, b), s),
        compose(s, pairing(pairing(f, g), h)),
        differential(s),
        is_linear(s),
    )
    rhs = (identity(abc), pairing(pairing(f, h), g), compose(s, proj1(abc, abc)), True)
    return {"f": f, "g": g, "h": h}, lhs, rhs


# -- driver -------------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool
    trials: int
    counterexample: str | None = None


def _show(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    return repr(v)


def check_axioms(
    seed: int = 0, trials: int = 500, params: GenParams = GenParams(), names=None
) -> list[AxiomResult]:
    results = []
    for name in names or LAWS:
        fn = LAWS[name]
        rng = random.Random(f"{seed}/{name}")
        failure = None
        for i in range(trials):
            inputs, lhs, rhs = fn(rng, params)
            if lhs != rhs and failure is None:
                lines = [f"  counterexample (trial {i}):"]
                lines += [f"    {k} = {_show(v)}" for k, v in inputs.items()]
                lines += [f"    lhs = {_show(lhs)}", f"    rhs = {_show(rhs)}"]
                failure = "\n".join(lines)
        results.append(AxiomResult(name, failure is None, trials, failure))
    return results


def format_report(results: list[AxiomResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"AXIOM {r.name} {'PASS' if r.passed else 'FAIL'} trials={r.trials}")
        if r.counterexample:
            lines.append(r.counterexample)
    return "\n".join(lines)
