"""Translations between resource terms and differential terms.

``to_diff`` sends a bag with linear part L1..Lk and banged part N1..Nn to
``(D^k M.(L1,...,Lk))(N1 + ... + Nn)``; an empty banged part gives an
application to 0.  ``to_res`` sends ``sT`` to ``s[T!]`` and a linear
application ``D^k s.(t1,...,tk)`` to ``\\y.s[t1,...,tk,y!]`` with a fresh
``y``.  The second one is not an eta-expansion, so round trips only hold up
to the equational theories.
"""

from __future__ import annotations

from .resource import (
    EMPTY_BAG,
    BagSum,
    RApp,
    RBound,
    RLam,
    ResSum,
    RTerm,
    RVar,
    mk_bag_cons,
    mk_rabs,
    mk_rapp,
    mk_rvar,
)
from .rewrite import DEFAULT_FUEL, Verdict, theory_eq_diff, theory_eq_res
from .subst import FreshSupply
from .terms import App, Bound, DApp, DiffSum, Lam, Term, Var, is_pure, open_lam


def to_diff(m: ResSum) -> DiffSum:
    return DiffSum((_to_diff(t), k) for t, k in m.items())


def _to_diff(t: RTerm) -> Term:
    # Binders correspond one to one, so de Bruijn indices carry over.
    if isinstance(t, RVar):
        return Var(t.name)
    if isinstance(t, RBound):
        return Bound(t.index)
    if isinstance(t, RLam):
        return Lam(_to_diff(t.body), t.hint)
    if isinstance(t, RApp):
        head = _to_diff(t.fun)
        linear = [_to_diff(u) for u in t.bag.linear]
        if linear:
            head = DApp(head, linear)
        return App(head, DiffSum((_to_diff(u), 1) for u in t.bag.banged))
    raise TypeError(t)


def to_res(s: DiffSum, supply: FreshSupply | None = None) -> ResSum:
    """Translate; fresh abstraction names come from ``supply`` (``y$0``, ``y$1``, ...)."""
    if supply is None:
        supply = FreshSupply(s.fv)
    out = ResSum()
    for t, k in s.items():
        out = out + _to_res(t, supply) * k
    return out


def _to_res(t: Term, supply: FreshSupply) -> ResSum:
    if isinstance(t, Var):
        return mk_rvar(t.name)
    if isinstance(t, Lam):
        z, body = open_lam(t)
        return mk_rabs(z, _to_res(body, supply), t.hint)
    if isinstance(t, App):
        bag = mk_bag_cons(to_res(t.arg, supply), BagSum.single(EMPTY_BAG), banged=True)
        return mk_rapp(_to_res(t.fun, supply), bag)
    if isinstance(t, DApp):
        y = supply.fresh()
        bag = BagSum.single(EMPTY_BAG)
        for a in t.args:
            bag = mk_bag_cons(_to_res(a, supply), bag)
        bag = mk_bag_cons(mk_rvar(y), bag, banged=True)
        return mk_rabs(y, mk_rapp(_to_res(t.fun, supply), bag), "y")
    raise TypeError(f"cannot translate {t!r}")


def roundtrip_dr(s: DiffSum, fuel: int = DEFAULT_FUEL) -> Verdict:
    """(S^r)^d against S modulo beta, beta_D and eta; pure terms must come back unchanged."""
    back = to_diff(to_res(s))
    if is_pure(s):
        return Verdict.EQUAL if back == s else Verdict.NOT_EQUAL
    return theory_eq_diff(back, s, fuel, eta=True)


def roundtrip_rd(m: ResSum, fuel: int = DEFAULT_FUEL) -> Verdict:
    """(M^d)^r against M modulo resource beta."""
    return theory_eq_res(to_res(to_diff(m)), m, fuel)
