"""Classic, differential, linear and resource substitution.

All functions take and return canonical sums.  The substituted sum must be
locally closed, which is always the case for user-level terms; recursion
under a binder then needs no index shifting, so capture cannot happen.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .resource import (
    EMPTY_BAG,
    Bag,
    BagSum,
    RApp,
    RLam,
    ResSum,
    RTerm,
    RVar,
    RZERO,
    mk_bag_cons,
    mk_rapp,
)
from .terms import ZERO, App, DApp, DiffSum, Lam, Term, Var, mk_app, mk_dapp


class PreconditionViolation(ValueError):
    pass


class FreshSupply:
    """Emits names outside ``reserved`` and never twice."""

    def __init__(self, reserved=(), prefix: str = "y$"):
        self.reserved = set(reserved)
        self.prefix = prefix
        self.counter = 0

    def fresh(self) -> str:
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in self.reserved:
                self.reserved.add(name)
                return name


def _need_closed(s) -> None:
    if s.loose:
        raise ValueError("substituted term must be locally closed")


# -- differential calculus ----------------------------------------------------


def subst(s: DiffSum, x: str, t: DiffSum) -> DiffSum:
    """S{T/x}."""
    _need_closed(t)
    return s.bind(lambda u: _subst(u, x, t))


def _subst(u: Term, x: str, t: DiffSum) -> DiffSum:
    if x not in u.fv:
        return DiffSum.single(u)
    if isinstance(u, Var):
        return t
    if isinstance(u, Lam):
        return DiffSum((Lam(b, u.hint), m) for b, m in _subst(u.body, x, t).items())
    if isinstance(u, App):
        return mk_app(_subst(u.fun, x, t), u.arg.bind(lambda a: _subst(a, x, t)))
    if isinstance(u, DApp):
        return mk_dapp(_subst(u.fun, x, t), *(_subst(a, x, t) for a in u.args))
    raise TypeError(u)


def dsubst(s: DiffSum, x: str, t: DiffSum) -> DiffSum:
    """dS/dx . T: replace exactly one linear occurrence of x by T."""
    _need_closed(t)
    return s.bind(lambda u: _dsubst(u, x, t))


def _dsubst(u: Term, x: str, t: DiffSum) -> DiffSum:
    if x not in u.fv:
        return ZERO
    if isinstance(u, Var):
        return t
    if isinstance(u, Lam):
        return DiffSum((Lam(b, u.hint), m) for b, m in _dsubst(u.body, x, t).items())
    if isinstance(u, App):
        head = DiffSum.single(u.fun)
        first = mk_app(_dsubst(u.fun, x, t), u.arg)
        darg = u.arg.bind(lambda a: _dsubst(a, x, t))
        return first + mk_app(mk_dapp(head, darg), u.arg)
    if isinstance(u, DApp):
        args = [DiffSum.single(a) for a in u.args]
        out = mk_dapp(_dsubst(u.fun, x, t), *args)
        for i, a in enumerate(u.args):
            if x in a.fv:
                moved = args[:i] + [_dsubst(a, x, t)] + args[i + 1 :]
                out = out + mk_dapp(DiffSum.single(u.fun), *moved)
        return out
    raise TypeError(u)


def dsubst_multi(s: DiffSum, xs: Sequence[str], ts: Sequence[DiffSum]) -> DiffSum:
    """d^n S / dx1..dxn . (t1,...,tn), iterated left to right."""
    if len(xs) != len(ts):
        raise PreconditionViolation("variable and argument lists differ in length")
    fv = frozenset().union(*(t.fv for t in ts))
    bad = [x for x in xs if x in fv]
    if bad:
        raise PreconditionViolation(f"variables occur free in the arguments: {sorted(set(bad))}")
    for x, t in zip(xs, ts):
        s = dsubst(s, x, t)
    return s


# -- resource calculus --------------------------------------------------------


def lsubst(a, x: str, n: ResSum):
    """Linear substitution M<N/x> on a ResSum or a BagSum."""
    _need_closed(n)
    if isinstance(a, BagSum):
        return a.bind(lambda p: _lsubst_bag(p, x, n))
    return a.bind(lambda u: _lsubst(u, x, n))


def _lsubst(u: RTerm, x: str, n: ResSum) -> ResSum:
    if x not in u.fv:
        return RZERO
    if isinstance(u, RVar):
        return n
    if isinstance(u, RLam):
        return ResSum((RLam(b, u.hint), m) for b, m in _lsubst(u.body, x, n).items())
    if isinstance(u, RApp):
        left = mk_rapp(_lsubst(u.fun, x, n), BagSum.single(u.bag))
        return left + mk_rapp(ResSum.single(u.fun), _lsubst_bag(u.bag, x, n))
    raise TypeError(u)


def _lsubst_bag(p: Bag, x: str, n: ResSum) -> BagSum:
    # <P + R> = <P> + R + P + <R>; one addend per resource occurrence.
    out: list = []
    items = p.items
    for (t, banged), group in itertools.groupby(enumerate(items), key=lambda e: e[1]):
        idx = [i for i, _ in group]
        if x not in t.fv:
            continue
        rest = Bag(items[: idx[0]] + items[idx[0] + 1 :])
        changed = _lsubst(t, x, n)
        if banged:
            rest = rest | Bag(((t, True),))
        for q, m in mk_bag_cons(changed, BagSum.single(rest)).items():
            out.append((q, m * len(idx)))
    return BagSum(out)


def rsubst(a: ResSum, x: str, n: ResSum) -> ResSum:
    """Classic substitution M{N/x}."""
    _need_closed(n)
    return a.bind(lambda u: _rsubst(u, x, n))


def _rsubst(u: RTerm, x: str, n: ResSum) -> ResSum:
    if x not in u.fv:
        return ResSum.single(u)
    if isinstance(u, RVar):
        return n
    if isinstance(u, RLam):
        return ResSum((RLam(b, u.hint), m) for b, m in _rsubst(u.body, x, n).items())
    if isinstance(u, RApp):
        return mk_rapp(_rsubst(u.fun, x, n), _rsubst_bag(u.bag, x, n))
    raise TypeError(u)


def _rsubst_bag(p: Bag, x: str, n: ResSum) -> BagSum:
    acc = BagSum.single(EMPTY_BAG)
    for t, banged in p.items:
        acc = mk_bag_cons(_rsubst(t, x, n), acc, banged)
    return acc


__all__ = [
    "FreshSupply",
    "PreconditionViolation",
    "subst",
    "dsubst",
    "dsubst_multi",
    "lsubst",
    "rsubst",
]
