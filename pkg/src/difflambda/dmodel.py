"""The reflexive object D of MRel and a bounded interpretation of terms.

An element of D is a finite sequence of finite multisets of elements, with
no trailing empty multiset; ``*`` is the empty sequence.  ``cons(m, s)``
prepends ``m`` and is a bijection with ``uncons``.

Interpretations are infinite, so :func:`interpret` enumerates the entries
``(contexts, value)`` whose total size is at most ``B``.  Variable-headed
applications are computed top-down from their value, and every element they
need already occurs in the output context, so normal forms are handled
exactly.  Redexes need witnesses that never appear in the output; their
combined size per redex is bounded by ``W`` and the result is flagged as
clipped.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .mrel import EMPTY, Arrow, FinMultiset, FinRel, Universe
from .rewrite import DEFAULT_FUEL, NoRedex, Verdict, is_normal, normalize_diff, step_diff
from .terms import App, DApp, DiffSum, Lam, Term, Var, is_pure, is_var_headed, open_term


class DElem:
    __slots__ = ("seq", "sort_key", "size", "_hash")

    def __init__(self, seq=()):
        seq = list(seq)
        while seq and not seq[-1]:
            seq.pop()
        self.seq = tuple(seq)
        self.sort_key = (4,) + tuple(m.sort_key for m in self.seq)
        self.size = 1 + sum(msize(m) + 1 for m in self.seq)
        self._hash = hash(self.sort_key)

    def __eq__(self, other) -> bool:
        return isinstance(other, DElem) and self.sort_key == other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return (self.size, self.sort_key) < (other.size, other.sort_key)

    def __repr__(self) -> str:
        if not self.seq:
            return "*"
        return "(" + ", ".join(repr(m) for m in self.seq) + ")"


STAR = DElem()


def msize(m: FinMultiset) -> int:
    return sum(x.size for x in m.items)


def cons(m: FinMultiset, s: DElem) -> DElem:
    return DElem((m,) + s.seq)


def uncons(s: DElem) -> tuple[FinMultiset, DElem]:
    if not s.seq:
        return EMPTY, STAR
    return s.seq[0], DElem(s.seq[1:])


class _Domain(Universe):
    finite = False

    def contains(self, e) -> bool:
        return isinstance(e, DElem)

    def __repr__(self) -> str:
        return "D"


DOMAIN = _Domain()


def model_morphisms(sample) -> tuple[FinRel, FinRel]:
    """(A, lambda) restricted to a finite sample of elements of D.

    A sends ``[m::s]`` to ``(m, s)`` and lambda sends ``[(m, s)]`` back.
    """
    arrow = Arrow(DOMAIN, DOMAIN)
    app = FinRel(DOMAIN, arrow, frozenset((FinMultiset((s,)), uncons(s)) for s in sample))
    lam = FinRel(arrow, DOMAIN, frozenset((FinMultiset((uncons(s),)), s) for s in sample))
    return app, lam


# -- enumeration ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _by_size(n: int) -> tuple:
    """All elements of size exactly n, in key order."""
    if n < 1:
        return ()
    if n == 1:
        return (STAR,)
    out = []
    # n = |m| + 1 + |rest|, where rest = * forces m nonempty
    for rest_size in range(1, n):
        msz = n - 1 - rest_size
        for rest in _by_size(rest_size):
            for m in _multisets(msz):
                if rest_size == 1 and not m:
                    continue
                out.append(cons(m, rest))
    out.sort(key=lambda s: s.sort_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _multisets(total: int, floor: int = 1, start=None) -> tuple:
    """Multisets of elements with member sizes summing to ``total``.

    Members are drawn in nondecreasing (size, key) order from ``floor``.
    """
    if total == 0:
        return (EMPTY,)
    out = []
    for sz in range(floor, total + 1):
        elems = _by_size(sz)
        for x in elems:
            if sz == floor and start is not None and x.sort_key < start:
                continue
            for tail in _multisets(total - sz, sz, x.sort_key):
                out.append(FinMultiset((x,) + tail.items))
    return tuple(out)


def enumerate_delems(max_size: int):
    """Every element of size <= max_size once, ordered by (size, key)."""
    for n in range(1, max_size + 1):
        yield from _by_size(n)


def _upto(n: int) -> list:
    return list(enumerate_delems(n))


# -- interpretation -------------------------------------------------------------


@dataclass(frozen=True)
class Budgets:
    B: int = 8
    W: int = 16

    def __post_init__(self):
        if self.B < 0 or self.W < 0:
            raise ValueError("budgets must be non-negative")


class InadequateVariables(ValueError):
    pass


@dataclass(frozen=True)
class InterpResult:
    entries: frozenset
    clipped: bool

    def sorted_entries(self) -> list:
        return sorted(self.entries, key=entry_key)


@dataclass(frozen=True)
class _Q:
    """Query bounds: per-variable context, total context, value, entry.

    ``allow`` optionally restricts the elements a variable may take.
    """

    cb: tuple
    ct: int
    v: int
    w: int
    allow: tuple

    def arg(self) -> "_Q":
        a = min(self.ct, self.w)
        return _Q(tuple(min(c, a) for c in self.cb), a, a, a, self.allow)

    def extend(self, zb: int, v: int, extra: int, allowed=None) -> "_Q":
        return _Q(self.cb + (zb,), self.ct + zb, v, self.w + extra, self.allow + (allowed,))

    def with_sizes(self, ct: int, v: int, w: int) -> "_Q":
        return _Q(self.cb, ct, v, w, self.allow)


def entry_key(e) -> tuple:
    ctx, val = e
    return (tuple(m.sort_key for m in ctx), val.sort_key)


def _fits(ctx: tuple, val: DElem, q: _Q) -> bool:
    if val.size > q.v:
        return False
    total = 0
    for m, bound in zip(ctx, q.cb):
        sz = msize(m)
        if sz > bound:
            return False
        total += sz
    return total <= q.ct and total + val.size <= q.w


def _ctx_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _ctx_size(ctx: tuple) -> int:
    return sum(msize(m) for m in ctx)


def _index(entries) -> dict:
    """Map each value to its contexts as (size, ctx), smallest first."""
    idx: dict = {}
    for ctx, val in entries:
        idx.setdefault(val, []).append((_ctx_size(ctx), ctx))
    for v in idx:
        idx[v].sort(key=lambda r: (r[0], tuple(m.sort_key for m in r[1])))
    return idx


def _spine(t: Term):
    ops = []
    while isinstance(t, (App, DApp)):
        if isinstance(t, App):
            ops.append(("app", t.arg))
        else:
            ops.extend(("d", a) for a in t.args)
        t = t.fun
    return t, ops


class _Interp:
    def __init__(self, witness: int):
        self.W = witness
        self.memo: dict = {}
        self.at_memo: dict = {}
        self.tables: dict = {}

    def sum(self, s: DiffSum, xs: tuple, q: _Q) -> frozenset:
        out: set = set()
        for t in s.terms():
            out |= self.term(t, xs, q)
        return frozenset(out)

    def term(self, t: Term, xs: tuple, q: _Q) -> frozenset:
        """All entries of t within the bounds q."""
        if q.v < 1 or q.ct < 0 or q.w < 1:
            return frozenset()
        key = (t, xs, q)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            out = self._var(t, xs, q)
        elif isinstance(t, Lam):
            out = self._lam(t, xs, q)
        else:
            head, _ = _spine(t)
            if isinstance(head, Var) and q.allow[xs.index(head.name)] is not None:
                out = self._restricted_spine(t, xs, q)
            else:
                if isinstance(head, Var):
                    i = xs.index(head.name)
                    top = min(q.v, q.w // 2, q.ct, q.cb[i])
                else:
                    top = min(q.v, q.w)
                out = set()
                for rho in _upto(top):
                    out |= self.at(t, xs, q, rho)
        out = frozenset(out)
        self.memo[key] = out
        return out

    def at(self, t: Term, xs: tuple, q: _Q, val: DElem) -> frozenset:
        """Entries of t with value exactly val, within the bounds q."""
        if val.size > q.v or val.size > q.w:
            return frozenset()
        key = (t, xs, q, val)
        hit = self.at_memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            i = xs.index(t.name)
            blank = (EMPTY,) * len(xs)
            e = (blank[:i] + (FinMultiset((val,)),) + blank[i + 1 :], val)
            allowed = q.allow[i]
            out = {e} if _fits(*e, q) and (allowed is None or val in allowed) else set()
        elif isinstance(t, Lam):
            m, beta = uncons(val)
            z = f"%{len(xs)}"
            sub = q.extend(msize(m), q.v, msize(m), frozenset(m.items))
            body = self.at(open_term(t.body, z), xs + (z,), sub, beta)
            out = {(ctx[:-1], val) for ctx, _ in body if ctx[-1] == m}
            out = {e for e in out if _fits(*e, q)}
        elif is_var_headed(t):
            head, _ = _spine(t)
            if q.allow[xs.index(head.name)] is not None:
                out = {e for e in self.term(t, xs, q) if e[1] == val}
            else:
                out = self._spine_at(t, xs, q, val)
        elif isinstance(t, App):
            out = (self._beta_at if isinstance(t.fun, Lam) else self._app_at)(t, xs, q, val)
        elif isinstance(t, DApp):
            out = (self._beta_d_at if isinstance(t.fun, Lam) else self._dapp_at)(t, xs, q, val)
        else:
            raise TypeError(f"unexpected node {t!r}")
        out = frozenset(out)
        self.at_memo[key] = out
        return out

    def _var(self, t: Var, xs: tuple, q: _Q):
        i = xs.index(t.name)
        top = min(q.cb[i], q.ct, q.v, q.w // 2)
        blank = (EMPTY,) * len(xs)
        allowed = q.allow[i]
        pool = _upto(top) if allowed is None else sorted(e for e in allowed if e.size <= top)
        for s in pool:
            yield blank[:i] + (FinMultiset((s,)),) + blank[i + 1 :], s

    def _lam(self, t: Lam, xs: tuple, q: _Q):
        z = f"%{len(xs)}"
        zb = min(q.v, q.w) - 1
        body = self.term(open_term(t.body, z), xs + (z,), q.extend(zb, q.v, 0))
        for ctx, s in body:
            e = (ctx[:-1], cons(ctx[-1], s))
            if _fits(*e, q):
                yield e

    def _witness_q(self, q: _Q) -> _Q:
        return q.with_sizes(q.ct, self.W, min(q.ct, q.w) + self.W)

    def _entries(self, a, xs: tuple, q: _Q) -> frozenset:
        return self.sum(a, xs, q) if isinstance(a, DiffSum) else self.term(a, xs, q)

    def _table(self, a, xs: tuple, q: _Q) -> list:
        key = ("table", a, xs, q)
        rows = self.tables.get(key)
        if rows is None:
            rows = [(c, v, _ctx_size(c), v.size) for c, v in self._entries(a, xs, q)]
            rows.sort(key=lambda r: (r[2] + r[3], entry_key(r[:2])))
            self.tables[key] = rows
        return rows

    def _idx(self, a, xs: tuple, q: _Q) -> dict:
        key = ("index", a, xs, q)
        idx = self.tables.get(key)
        if idx is None:
            idx = self.tables[key] = _index(self._entries(a, xs, q))
        return idx

    def _spine_at(self, t: Term, xs: tuple, q: _Q, rho: DElem) -> set:
        # Head is a variable: walk the spine from the value inwards, choosing
        # argument entries.  This fixes the element the variable must produce,
        # and that element lands in its own context, so the bounds of q cap
        # every choice.
        head, ops = _spine(t)
        i = xs.index(head.name)
        aq = q.arg()
        tables = [(kind, self._table(a, xs, aq)) for kind, a in ops]
        ctx_limit = min(q.ct, q.w - rho.size)
        out: set = set()

        def descend(j, s, acc):
            acc_size = _ctx_size(acc)
            if acc_size + s.size > ctx_limit or msize(acc[i]) + s.size > q.cb[i]:
                return
            if j == len(tables):
                ctx = acc[:i] + (acc[i] + FinMultiset((s,)),) + acc[i + 1 :]
                if _fits(ctx, rho, q):
                    out.add((ctx, rho))
                return
            kind, rows = tables[j]
            if kind == "d":
                m, beta = uncons(s)
                for c, alpha, _, _ in rows:
                    descend(j + 1, cons(m + FinMultiset((alpha,)), beta), _ctx_add(acc, c))
                return
            for chosen in _bounded_multisets(rows, ctx_limit - acc_size - s.size, both=True):
                ctx = acc
                for row in chosen:
                    ctx = _ctx_add(ctx, row[0])
                descend(j + 1, cons(FinMultiset(r[1] for r in chosen), s), ctx)

        descend(0, rho, (EMPTY,) * len(xs))
        return out

    def _restricted_spine(self, t: Term, xs: tuple, q: _Q) -> set:
        # The head variable ranges over a known finite set of elements, so
        # build entries outwards from each of them.
        head, ops = _spine(t)
        i = xs.index(head.name)
        aq = q.arg()
        limit = min(q.ct, q.w)
        blank = (EMPTY,) * len(xs)
        cur = set()
        for s in q.allow[i]:
            if s.size <= min(q.cb[i], limit):
                cur.add((blank[:i] + (FinMultiset((s,)),) + blank[i + 1 :], s))
        for kind, a in reversed(ops):
            idx = self._idx(a, xs, aq)
            nxt = set()
            for ctx, hv in cur:
                h, beta = uncons(hv)
                if kind == "app":
                    for extra in _match_all(h, idx, limit - _ctx_size(ctx)):
                        nxt.add((_ctx_add(ctx, extra) if extra else ctx, beta))
                else:
                    for alpha in h.distinct():
                        for _, c in idx.get(alpha, ()):
                            nxt.add((_ctx_add(ctx, c), cons(h.remove_one(alpha), beta)))
            cur = {e for e in nxt if _ctx_size(e[0]) <= limit}
        return {e for e in cur if _fits(*e, q)}

    def _beta_at(self, t: App, xs: tuple, q: _Q, rho: DElem) -> set:
        # (lambda z.s)T: the witnesses are exactly the z-context of the body.
        idx = self._idx(t.arg, xs, self._witness_q(q))
        z = f"%{len(xs)}"
        sub = q.extend(self.W, q.v, self.W, frozenset(idx))
        body = self.at(open_term(t.fun.body, z), xs + (z,), sub, rho)
        out = set()
        room = min(q.ct, q.w - rho.size)
        for ctx, _ in body:
            for extra in _match_all(ctx[-1], idx, room - _ctx_size(ctx[:-1])):
                e = (_ctx_add(ctx[:-1], extra) if extra else ctx[:-1], rho)
                if _fits(*e, q):
                    out.add(e)
        return out

    def _beta_d_at(self, t: DApp, xs: tuple, q: _Q, rho: DElem) -> set:
        # D^n(lambda z.s).(t1..tn) at m::beta: the body's z-context is m plus
        # one witness per argument.
        wq = self._witness_q(q)
        idxs = [self._idx(a, xs, wq) for a in t.args]
        m, beta = uncons(rho)
        z = f"%{len(xs)}"
        extra_z = msize(m) + len(t.args) * self.W
        allowed = frozenset(m.items).union(*idxs)
        sub = q.extend(extra_z, q.v, extra_z, allowed)
        body = self.at(open_term(t.fun.body, z), xs + (z,), sub, beta)
        out = set()
        for ctx, _ in body:
            zc = ctx[-1]
            if any(zc.counts()[x] < k for x, k in m.counts().items()):
                continue
            for extra, rest in _pick_each(zc - m, idxs):
                if rest:
                    continue
                e = (_ctx_add(ctx[:-1], extra), rho)
                if _fits(*e, q):
                    out.add(e)
        return out

    def _app_at(self, t: App, xs: tuple, q: _Q, rho: DElem) -> set:
        # Head is itself a redex: choose the witnesses, then ask the head for
        # the element they determine.
        rows = self._table(t.arg, xs, self._witness_q(q))
        ctx_limit = min(q.ct, q.w - rho.size)
        out = set()
        for chosen in _bounded_multisets(rows, self.W, both=False, ctx_left=ctx_limit):
            acc = (EMPTY,) * len(xs)
            for row in chosen:
                acc = _ctx_add(acc, row[0])
            out |= self._head_at(t.fun, xs, q, cons(FinMultiset(r[1] for r in chosen), rho), acc, rho)
        return out

    def _dapp_at(self, t: DApp, xs: tuple, q: _Q, rho: DElem) -> set:
        wq = self._witness_q(q)
        tables = [self._table(a, xs, wq) for a in t.args]
        m, beta = uncons(rho)
        out = set()
        for picks in itertools.product(*tables):
            acc = (EMPTY,) * len(xs)
            for row in picks:
                acc = _ctx_add(acc, row[0])
            s = cons(m + FinMultiset(r[1] for r in picks), beta)
            out |= self._head_at(t.fun, xs, q, s, acc, rho)
        return out

    def _head_at(self, head: Term, xs: tuple, q: _Q, s: DElem, acc: tuple, rho: DElem) -> set:
        left = min(q.ct, q.w - rho.size) - _ctx_size(acc)
        if left < 0:
            return set()
        out = set()
        for c, _ in self.at(head, xs, q.with_sizes(left, s.size, left + s.size), s):
            e = (_ctx_add(acc, c), rho)
            if _fits(*e, q):
                out.add(e)
        return out


def _bounded_multisets(rows: list, limit: int, both: bool, ctx_left: int | None = None):
    """Multisets of rows (ctx, value, ctx size, value size).

    With ``both`` the summed context and value sizes stay within ``limit``;
    otherwise the value sizes do, and the context sizes stay within ``ctx_left``.
    """
    if not both:
        rows = sorted(rows, key=lambda r: (r[3], entry_key(r[:2])))
    chosen: list = []

    def go(start, left, cleft):
        yield list(chosen)
        for k in range(start, len(rows)):
            r = rows[k]
            cost = r[2] + r[3] if both else r[3]
            if cost > left:
                break
            if not both and r[2] > cleft:
                continue
            chosen.append(r)
            yield from go(k, left - cost, cleft - r[2])
            chosen.pop()

    yield from go(0, limit, ctx_left if ctx_left is not None else limit)


def _head_cycles(t: Term, limit: int = 64) -> bool:
    """True when head reduction of a pure term provably loops."""
    s = DiffSum.single(t)
    seen = {s}
    for _ in range(limit):
        u = next(s.terms())
        while isinstance(u, Lam):
            u = u.body
        head = u
        while isinstance(head, App):
            head = head.fun
        if not isinstance(head, Lam):
            return False
        try:
            s = step_diff(s)
        except NoRedex:
            return False
        if len(s) != 1 or s in seen:
            return len(s) == 1
        seen.add(s)
    return False


def interpret(
    s: DiffSum,
    xs=(),
    budgets: Budgets = Budgets(),
    normalize_first: bool = False,
    fuel: int = DEFAULT_FUEL,
) -> InterpResult:
    xs = tuple(xs)
    if len(set(xs)) != len(xs):
        raise InadequateVariables("variable list has repetitions")
    missing = s.fv - set(xs)
    if missing:
        raise InadequateVariables(f"free variables not listed: {', '.join(sorted(missing))}")
    clipped = False
    if normalize_first:
        s, clipped = normalize_diff(s, fuel)
    n = len(xs)
    q = _Q((budgets.B,) * n, budgets.B, budgets.B, budgets.B, (None,) * n)
    entries = _Interp(budgets.W).sum(s, xs, q)
    if not is_normal(s):
        # an unsolvable pure term whose head reduction loops denotes the empty set
        looping = not entries and is_pure(s) and len(s) == 1 and _head_cycles(next(s.terms()))
        clipped = clipped or not looping
    return InterpResult(entries, clipped)


def interp_eq(
    s: DiffSum,
    t: DiffSum,
    xs=(),
    budgets: Budgets = Budgets(),
    normalize_first: bool = False,
    normalize_second: bool | None = None,
    fuel: int = DEFAULT_FUEL,
) -> Verdict:
    """Compare bounded interpretations.

    Equal is relative to the budgets.  NotEqual needs an entry found on one
    side that the other side's unclipped enumeration lacks.
    """
    if normalize_second is None:
        normalize_second = normalize_first
    a = interpret(s, xs, budgets, normalize_first, fuel)
    b = interpret(t, xs, budgets, normalize_second, fuel)
    if a.entries == b.entries:
        return Verdict.EQUAL
    if (a.entries - b.entries and not b.clipped) or (b.entries - a.entries and not a.clipped):
        return Verdict.NOT_EQUAL
    return Verdict.UNKNOWN


# -- serialization --------------------------------------------------------------


def encode_delem(s: DElem) -> list:
    return [[encode_delem(x) for x in m.items] for m in s.seq]


def decode_delem(data) -> DElem:
    return DElem(FinMultiset(decode_delem(x) for x in m) for m in data)


def encode_entries(entries) -> list:
    return [
        {"ctx": [[encode_delem(x) for x in m.items] for m in ctx], "val": encode_delem(val)}
        for ctx, val in sorted(entries, key=entry_key)
    ]


def to_json(entries) -> str:
    return json.dumps(encode_entries(entries), separators=(",", ":"))


def _match_all(wits: FinMultiset, idx: dict, limit: int):
    """Every way of giving each witness an argument entry, with summed context
    size at most ``limit``; yields the summed contexts (None for no witnesses)."""
    slots = []
    for alpha, k in wits.counts().items():
        options = idx.get(alpha)
        if not options:
            return
        slots += [options] * k

    def go(j, start, left, acc):
        if j == len(slots):
            yield acc
            return
        options = slots[j]
        # equal witnesses take their entries in non-decreasing order
        lo = start if j and slots[j - 1] is options else 0
        for k in range(lo, len(options)):
            size, c = options[k]
            if size > left:
                break
            yield from go(j + 1, k, left - size, c if acc is None else _ctx_add(acc, c))

    yield from go(0, 0, limit, None)


def _pick_each(zc: FinMultiset, idxs: list):
    """Take one element of zc per argument, matched with that argument's entries."""
    if not idxs:
        yield None, zc
        return
    idx, more = idxs[0], idxs[1:]
    for alpha in zc.distinct():
        for _, c in idx.get(alpha, ()):
            for extra, rest in _pick_each(zc.remove_one(alpha), more):
                yield (c if extra is None else _ctx_add(c, extra)), rest
