"""The relational model: finite relations, the differential, and term meanings.

Run with ``python3 demos/04_relational_model.py``.
"""

from difflambda import Budgets, interp_eq, interpret, parse_diff
from difflambda.axioms import check_axioms, format_report
from difflambda.dmodel import enumerate_delems
from difflambda.mrel import EMPTY, Atoms, FinMultiset, differential, rel

A, B = Atoms(("a", "b")), Atoms(("u",))
f = rel(A, B, [(FinMultiset(("a", "a", "b")), "u"), (EMPTY, "u")])
print("f =", f)
# the derivative pulls one element out of the input multiset
print("D(f) =", differential(f))
print()

print("Elements of the reflexive object, by size:")
counts = {}
for e in enumerate_delems(8):
    counts[e.size] = counts.get(e.size, 0) + 1
print("  ", counts)
print()

print("Meanings are enumerated up to a size bound B")
r = interpret(parse_diff(r"\x.x"), (), Budgets(5, 5))
for _, val in r.sorted_entries():
    print("   identity contains", val)
omega = interpret(parse_diff(r"(\x.x x) (\x.x x)"), (), Budgets(6, 12))
print("  Omega:", set(omega.entries), "| clipped:", omega.clipped)
print()

s, t = parse_diff(r"D(\a.a a; y) z"), parse_diff("y z + D(z; y) z")
print("A redex and its contractum:", interp_eq(s, t, ("y", "z"), Budgets(6, 12)))
print("x and y:", interp_eq(parse_diff("x"), parse_diff("y"), ("x", "y"), Budgets(4, 4)))
print()

print("A few laws, checked on random finite relations:")
print(format_report(check_axioms(seed=1, trials=50, names=["D2", "D5", "D-eval", "Taylor"])))
