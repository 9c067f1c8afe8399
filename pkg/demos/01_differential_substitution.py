"""Differential substitution and the lambda-beta-d theory, step by step.

Run with ``python3 demos/01_differential_substitution.py``.
"""

from difflambda import dsubst, normalize_diff, parse_diff, show, subst
from difflambda.rewrite import NoRedex, step_diff

LETS = [("I", r"\x.x"), ("Delta", r"\x.x x")]


def P(src):
    return parse_diff(src, LETS)


def banner(text):
    print()
    print(text)
    print("-" * len(text))


banner("Classic substitution is capture-free")
print(r"(\y.x){y/x} =", show(subst(P(r"\y.x"), "x", P("y"))))

banner("The linear derivative of x x in x, along I")
first = dsubst(P("x x"), "x", P("I"))
print("d(x x)/dx . I =", show(first))
# one summand per occurrence of x; the application argument picks up a D(x; I)
second = dsubst(first, "x", P("Delta"))
print("... and then along Delta =", show(second))

banner("A variable that does not occur gives 0")
print("d(y z)/dx . I =", show(dsubst(P("y z"), "x", P("I"))))

banner("beta_D contracts a linear application of an abstraction")
s = P("D(Delta; y) z")
while True:
    print("  ", show(s))
    try:
        s = step_diff(s)
    except NoRedex:
        break

banner("Normalization reports whether the fuel ran out")
omega = P(r"(\x.x x) (\x.x x)")
nf, exhausted = normalize_diff(omega, 25)
print("Omega after 25 steps:", show(nf), "| exhausted:", exhausted)
