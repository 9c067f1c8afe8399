"""Truncated Taylor expansion and the two translations between calculi.

Run with ``python3 demos/03_taylor_and_translations.py``.
"""

from difflambda import (
    TaylorBudget,
    parse_diff,
    parse_res,
    show,
    taylor,
    taylor_eq,
    taylor_nf,
    to_diff,
    to_res,
)
from difflambda.translate import roundtrip_dr, roundtrip_rd

print("Each application becomes a series of linear applications to 0")
for k in range(3):
    print(f"  degree {k}:", show(taylor(parse_diff("x y"), TaylorBudget(degree=k))))
print()

s, t = parse_diff(r"\x.(\y.y) x"), parse_diff(r"\x.x")
print("Taylor normal form of", show(s), "at degree 2:")
print("  ", show(taylor_nf(taylor(s, TaylorBudget(2)))))
print("  compared with", show(t), ":", taylor_eq(s, t, TaylorBudget(2)))
print()

omega = parse_diff(r"(\x.x x) (\x.x x)")
print("Omega has an empty Taylor normal form:", show(taylor_nf(taylor(omega))))
print()

print("Resource terms into differential terms and back")
for src in ["x[y]", "x[y!, z!]", r"(\a.a[a])[u, v]"]:
    m = parse_res(src)
    print(f"  {src:18} -> {show(to_diff(m)):22} round trip: {roundtrip_rd(m)}")
for src in ["x y", "D(x; x)", r"\f a.f (f a)"]:
    s = parse_diff(src)
    print(f"  {src:18} -> {show(to_res(s)):22} round trip: {roundtrip_dr(s)}")
