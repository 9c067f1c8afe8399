"""Reduction and fuel-bounded equality for both calculi.

The default strategy contracts the leftmost-outermost redex of the least
summand (all copies of that summand at once).  Binders are opened with
fresh names on the way down, so every contracted redex is locally closed.
"""

from __future__ import annotations

import enum

from .resource import (
    Bag,
    BagSum,
    RApp,
    RLam,
    ResSum,
    RTerm,
    RVar,
    mk_bag_cons,
    mk_rabs,
    mk_rapp,
    open_rlam,
)
from .subst import dsubst, lsubst, rsubst, subst
from .terms import (
    App,
    DApp,
    DiffSum,
    Lam,
    Term,
    Var,
    canonicalize,
    mk_abs,
    mk_app,
    mk_dapp,
    open_lam,
)
from .resource import canonicalize_res

DEFAULT_FUEL = 10_000


class NoRedex(Exception):
    """Raised by a single step on a normal form."""


class Verdict(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


# -- differential calculus ----------------------------------------------------


def _beta(t: App) -> DiffSum:
    z, body = open_lam(t.fun)
    return subst(DiffSum.single(body), z, t.arg)


def _beta_d(t: DApp) -> DiffSum:
    # D^n(lambda x.s).(t1,...,tn): fire on the first argument only.
    lam = t.fun
    z, body = open_lam(lam)
    first, rest = t.args[0], t.args[1:]
    head = mk_abs(z, dsubst(DiffSum.single(body), z, DiffSum.single(first)), lam.hint)
    return mk_dapp(head, *(DiffSum.single(a) for a in rest))


def _step_outer(t: Term) -> DiffSum | None:
    if isinstance(t, Lam):
        z, body = open_lam(t)
        r = _step_outer(body)
        return None if r is None else mk_abs(z, r, t.hint)
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return _beta(t)
        r = _step_outer(t.fun)
        if r is not None:
            return mk_app(r, t.arg)
        r = _step_sum(t.arg, _step_outer)
        return None if r is None else DiffSum.single(App(t.fun, r))
    if isinstance(t, DApp):
        if isinstance(t.fun, Lam):
            return _beta_d(t)
        return _step_dapp_parts(t, _step_outer)
    return None


def _step_inner(t: Term) -> DiffSum | None:
    if isinstance(t, Lam):
        z, body = open_lam(t)
        r = _step_inner(body)
        return None if r is None else mk_abs(z, r, t.hint)
    if isinstance(t, App):
        r = _step_inner(t.fun)
        if r is not None:
            return mk_app(r, t.arg)
        r = _step_sum(t.arg, _step_inner)
        if r is not None:
            return DiffSum.single(App(t.fun, r))
        return _beta(t) if isinstance(t.fun, Lam) else None
    if isinstance(t, DApp):
        r = _step_dapp_parts(t, _step_inner)
        if r is not None:
            return r
        return _beta_d(t) if isinstance(t.fun, Lam) else None
    return None


def _step_head(t: Term) -> DiffSum | None:
    # only the head redex; arguments are left alone
    if isinstance(t, Lam):
        z, body = open_lam(t)
        r = _step_head(body)
        return None if r is None else mk_abs(z, r, t.hint)
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return _beta(t)
        r = _step_head(t.fun)
        return None if r is None else mk_app(r, t.arg)
    if isinstance(t, DApp):
        if isinstance(t.fun, Lam):
            return _beta_d(t)
        r = _step_head(t.fun)
        return None if r is None else mk_dapp(r, *(DiffSum.single(a) for a in t.args))
    return None


def _step_dapp_parts(t: DApp, step) -> DiffSum | None:
    args = [DiffSum.single(a) for a in t.args]
    r = step(t.fun)
    if r is not None:
        return mk_dapp(r, *args)
    for i, a in enumerate(t.args):
        r = step(a)
        if r is not None:
            return mk_dapp(DiffSum.single(t.fun), *(args[:i] + [r] + args[i + 1 :]))
    return None


def _step_sum(s: DiffSum, step) -> DiffSum | None:
    for t, m in s.items():
        r = step(t)
        if r is not None:
            return s - DiffSum.single(t, m) + r * m
    return None


_STRATEGIES = {"outermost": _step_outer, "innermost": _step_inner, "head": _step_head}


def step_diff(s: DiffSum, strategy: str = "outermost") -> DiffSum:
    """One beta or beta_D contraction; raises NoRedex on a normal form."""
    r = _step_sum(s, _STRATEGIES[strategy])
    if r is None:
        raise NoRedex
    return r


def is_normal(s: DiffSum) -> bool:
    return _step_sum(s, _step_outer) is None


def eta_diff(s: DiffSum) -> DiffSum:
    """Contract every eta-redex lambda x.s x (x not free in s), bottom-up."""
    return DiffSum((_eta(t), m) for t, m in s.items())


def _eta(t: Term) -> Term:
    if isinstance(t, Lam):
        z, body = open_lam(t)
        body = _eta(body)
        if (
            isinstance(body, App)
            and z not in body.fun.fv
            and len(body.arg) == 1
            and body.arg.items()[0] == (Var(z), 1)
        ):
            return body.fun
        return next(mk_abs(z, DiffSum.single(body), t.hint).terms())
    if isinstance(t, App):
        return App(_eta(t.fun), eta_diff(t.arg))
    if isinstance(t, DApp):
        return DApp(_eta(t.fun), [_eta(a) for a in t.args])
    return t


def normalize_diff(
    s: DiffSum, fuel: int = DEFAULT_FUEL, eta: bool = False, strategy: str = "outermost"
) -> tuple[DiffSum, bool]:
    """Reduce until no redex is left for the strategy; returns (term, exhausted).

    With the "head" strategy the result is a head normal form.
    """
    step = _STRATEGIES[strategy]
    while True:
        while True:
            r = _step_sum(s, step)
            if r is None:
                break
            if fuel <= 0:
                return s, True
            fuel -= 1
            s = r
        if not eta:
            return s, False
        contracted = eta_diff(s)
        if contracted == s:
            return s, False
        s = contracted


def _compare(a, b, exhausted: bool, idempotent: bool, canon) -> Verdict:
    if exhausted:
        return Verdict.UNKNOWN
    if idempotent:
        a, b = canon(a, True), canon(b, True)
    return Verdict.EQUAL if a == b else Verdict.NOT_EQUAL


def theory_eq_diff(
    s: DiffSum, t: DiffSum, fuel: int = DEFAULT_FUEL, eta: bool = False, idempotent: bool = False
) -> Verdict:
    a, ea = normalize_diff(s, fuel, eta)
    b, eb = normalize_diff(t, fuel, eta)
    return _compare(a, b, ea or eb, idempotent, canonicalize)


# -- resource calculus --------------------------------------------------------


def _beta_r(t: RApp) -> ResSum:
    """Giant step: (lambda x.M)[L1..Lk, N1!..Nn!] = (M<L1/x>..<Lk/x>){sum N/x}."""
    z, body = open_rlam(t.fun)
    out = ResSum.single(body)
    for lin in t.bag.linear:
        out = lsubst(out, z, ResSum.single(lin))
    banged = ResSum((n, 1) for n in t.bag.banged)
    return rsubst(out, z, banged)


def _step_rterm(t: RTerm) -> ResSum | None:
    if isinstance(t, RLam):
        z, body = open_rlam(t)
        r = _step_rterm(body)
        return None if r is None else mk_rabs(z, r, t.hint)
    if isinstance(t, RApp):
        if isinstance(t.fun, RLam):
            return _beta_r(t)
        r = _step_rterm(t.fun)
        if r is not None:
            return mk_rapp(r, BagSum.single(t.bag))
        items = t.bag.items
        for i, (u, banged) in enumerate(items):
            r = _step_rterm(u)
            if r is not None:
                rest = BagSum.single(Bag(items[:i] + items[i + 1 :]))
                return mk_rapp(ResSum.single(t.fun), mk_bag_cons(r, rest, banged))
    return None


def step_res(m: ResSum) -> ResSum:
    for t, k in m.items():
        r = _step_rterm(t)
        if r is not None:
            return m - ResSum.single(t, k) + r * k
    raise NoRedex


def eta_res(m: ResSum) -> ResSum:
    return ResSum((_eta_r(t), k) for t, k in m.items())


def _eta_r(t: RTerm) -> RTerm:
    if isinstance(t, RLam):
        z, body = open_rlam(t)
        body = _eta_r(body)
        if (
            isinstance(body, RApp)
            and z not in body.fun.fv
            and body.bag.items == ((RVar(z), True),)
        ):
            return body.fun
        return next(mk_rabs(z, ResSum.single(body), t.hint).terms())
    if isinstance(t, RApp):
        return RApp(_eta_r(t.fun), Bag((_eta_r(u), b) for u, b in t.bag.items))
    return t


def normalize_res(m: ResSum, fuel: int = DEFAULT_FUEL, eta: bool = False) -> tuple[ResSum, bool]:
    while True:
        while True:
            try:
                r = step_res(m)
            except NoRedex:
                break
            if fuel <= 0:
                return m, True
            fuel -= 1
            m = r
        if not eta:
            return m, False
        contracted = eta_res(m)
        if contracted == m:
            return m, False
        m = contracted


def theory_eq_res(
    m: ResSum, n: ResSum, fuel: int = DEFAULT_FUEL, eta: bool = False, idempotent: bool = False
) -> Verdict:
    a, ea = normalize_res(m, fuel, eta)
    b, eb = normalize_res(n, fuel, eta)
    return _compare(a, b, ea or eb, idempotent, canonicalize_res)
