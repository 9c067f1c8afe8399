"""Sums that duplicate, fixpoints over sums, and the resource calculus.

Run with ``python3 demos/02_fixpoints_and_resources.py``.
"""

from difflambda import normalize_diff, normalize_res, parse_diff, parse_res, show
from difflambda.rewrite import Verdict, step_diff, theory_eq_res

LETS = [("I", r"\x.x"), ("Y", r"\f.(\a.f (a a)) (\a.f (a a))")]

print("A fixpoint combinator applied to a sum")
once = step_diff(parse_diff("Y (x + y)", LETS))
print("  one step:", show(once))
# head reduction leaves the argument alone and exposes both summands
head, _ = normalize_diff(once, 10, strategy="head")
print("  head normal form:", show(head))
print()

print("Resources are consumed, not copied")
for bag in ["[I]", "[I, I]", "[I, I, I]", "[M, N]"]:
    src = r"(\x.x[x])" + bag
    nf, _ = normalize_res(parse_res(src, LETS))
    print(f"  {src:24} -> {show(nf)}")
print()

two = parse_res(r"(\x.x[x])[I, I]", LETS)
ident = parse_res("I", LETS)
print("I + I against I, counting multiplicities:", theory_eq_res(two, ident))
print("... and with idempotent sums:", theory_eq_res(two, ident, idempotent=True))
assert theory_eq_res(two, ident, idempotent=True) == Verdict.EQUAL

print()
print("A banged resource can be used any number of times")
m = parse_res(r"(\x.x[x!])[(\z.z[z!])!]")
print("  ", show(m))
print("  ->", show(normalize_res(m, 3)[0]), "(still looping after 3 steps)")
