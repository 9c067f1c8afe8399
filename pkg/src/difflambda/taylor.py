"""Truncated Taylor expansion and Taylor normal forms.

Sums here are idempotent, so they are handled as plain sets of simple
terms.  An application ``sT`` expands to the terms ``(D^k s*.(T*,...,T*))0``
for ``k <= degree``; summands larger than the size cap are dropped and the
expansion is marked as clipped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .rewrite import DEFAULT_FUEL, Verdict
from .subst import dsubst, subst
from .terms import ZERO, App, Bound, DApp, DiffSum, Lam, Term, Var, close_term, open_lam


@dataclass(frozen=True)
class TaylorBudget:
    degree: int = 3
    size_cap: int = 64

    def __post_init__(self):
        if self.degree < 0 or self.size_cap < 1:
            raise ValueError("degree must be >= 0 and size cap >= 1")


class TaylorFuelExhausted(RuntimeError):
    pass


def taylor_expand(s: DiffSum, budget: TaylorBudget = TaylorBudget()) -> tuple[DiffSum, bool]:
    """Return the truncated expansion and whether any summand was clipped."""
    clipped = False
    memo: dict = {}

    def keep(terms) -> set:
        nonlocal clipped
        out = {t for t in terms if t.size <= budget.size_cap}
        if len(out) != len(terms):
            clipped = True
        return out

    def tx(t: Term) -> set:
        if t in memo:
            return memo[t]
        if isinstance(t, (Var, Bound)):
            out = {t}
        elif isinstance(t, Lam):
            out = keep({Lam(b, t.hint) for b in tx(t.body)})
        elif isinstance(t, DApp):
            heads = tx(t.fun)
            argsets = [sorted(tx(a), key=lambda u: u.key) for a in t.args]
            out = keep({DApp(h, combo) for h in heads for combo in itertools.product(*argsets)})
        elif isinstance(t, App):
            heads = tx(t.fun)
            args = sorted(set().union(*(tx(u) for u in t.arg.terms())), key=lambda u: u.key)
            cand = {App(h, ZERO) for h in heads}
            for k in range(1, budget.degree + 1):
                for combo in itertools.combinations_with_replacement(args, k):
                    cand.update(App(DApp(h, combo), ZERO) for h in heads)
            out = keep(cand)
        else:
            raise TypeError(t)
        memo[t] = out
        return out

    result: set = set()
    for t in s.terms():
        result |= tx(t)
    return DiffSum((t, 1) for t in result), clipped


def taylor(s: DiffSum, budget: TaylorBudget = TaylorBudget()) -> DiffSum:
    return taylor_expand(s, budget)[0]


def in_taylor_fragment(s: DiffSum) -> bool:
    """Only iterated linear applications and applications to 0."""
    from .terms import subterms

    return all(
        not isinstance(u, App) or not u.arg for t in s.terms() for u in subterms(t)
    )


def taylor_nf(s: DiffSum, fuel: int = DEFAULT_FUEL) -> DiffSum:
    """Normal form of a finite sum of the Taylor fragment (idempotent)."""
    budget = [fuel]
    memo: dict = {}

    def spend() -> None:
        if budget[0] <= 0:
            raise TaylorFuelExhausted("fuel exhausted in Taylor normal form")
        budget[0] -= 1

    def nf_all(terms) -> set:
        out: set = set()
        for t in terms:
            out |= nf(t)
        return out

    def nf(t: Term) -> set:
        if t in memo:
            return memo[t]
        if isinstance(t, (Var, Bound)):
            out = {t}
        elif isinstance(t, Lam):
            z, body = open_lam(t)
            out = {Lam(close_term(b, z), t.hint) for b in nf(body)}
        elif isinstance(t, DApp):
            heads = nf(t.fun)
            argsets = [sorted(nf(a), key=lambda u: u.key) for a in t.args]
            out = set()
            for h in heads:
                for combo in itertools.product(*argsets):
                    if isinstance(h, Lam):
                        spend()
                        z, body = open_lam(h)
                        acc = DiffSum.single(body)
                        for a in combo:
                            acc = dsubst(acc, z, DiffSum.single(a))
                        out |= nf_all(Lam(close_term(b, z), h.hint) for b in acc.terms())
                    else:
                        out.add(DApp(h, combo))
        elif isinstance(t, App):
            if t.arg:
                raise ValueError("application to a non-zero sum is outside the Taylor fragment")
            out = set()
            for h in nf(t.fun):
                if isinstance(h, Lam):
                    spend()
                    z, body = open_lam(h)
                    out |= nf_all(subst(DiffSum.single(body), z, ZERO).terms())
                else:
                    out.add(App(h, ZERO))
        else:
            raise TypeError(t)
        memo[t] = out
        return out

    return DiffSum((t, 1) for t in nf_all(s.terms()))


def taylor_eq(
    s: DiffSum,
    t: DiffSum,
    budget: TaylorBudget = TaylorBudget(),
    fuel: int = DEFAULT_FUEL,
) -> Verdict:
    """Compare Taylor normal forms of the truncated expansions.

    Equal means equal at this budget.  NotEqual is only reported when
    neither expansion lost a summand to the size cap.
    """
    a, ca = taylor_expand(s, budget)
    b, cb = taylor_expand(t, budget)
    try:
        na, nb = taylor_nf(a, fuel), taylor_nf(b, fuel)
    except TaylorFuelExhausted:
        return Verdict.UNKNOWN
    if na == nb:
        return Verdict.EQUAL
    return Verdict.UNKNOWN if (ca or cb) else Verdict.NOT_EQUAL
