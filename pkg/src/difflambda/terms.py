"""Simple differential lambda-terms and their finite formal sums.

Terms are locally nameless: free variables carry their names, bound
variables are de Bruijn indices pointing at their binder.  Structural
equality of this representation is therefore alpha-equivalence, and the
structural ``key`` of a term doubles as the total term order used to
canonicalize sums and the argument lists of linear applications.

Every node computes its key, size and free variables once, at
construction, so comparisons and hashing are cheap afterwards.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator

_fresh_counter = itertools.count()


def fresh_name(base: str = "v") -> str:
    """A name no parsed term can contain (``%`` is not an identifier char)."""
    return f"{base}%{next(_fresh_counter)}"


class Sum:
    """A finite multiset of keyed items with positive multiplicities.

    The empty sum is the term 0.  Items are kept sorted by key, so two sums
    are equal exactly when they are equal as multisets.
    """

    __slots__ = ("_items", "key", "_hash")

    def __init__(self, pairs: Iterable[tuple[object, int]] = ()):
        acc: dict = {}
        for item, mult in pairs:
            if mult:
                acc[item] = acc.get(item, 0) + mult
        items = [(t, m) for t, m in acc.items() if m > 0]
        items.sort(key=lambda p: p[0].key)
        self._items = tuple(items)
        self.key = tuple((t.key, m) for t, m in self._items)
        self._hash = hash((type(self).__name__, self.key))

    @classmethod
    def single(cls, item, mult: int = 1):
        return cls(((item, mult),))

    @classmethod
    def of(cls, items: Iterable) -> "Sum":
        return cls((t, 1) for t in items)

    def items(self) -> tuple:
        return self._items

    def terms(self) -> Iterator:
        return (t for t, _ in self._items)

    def mult(self, item) -> int:
        for t, m in self._items:
            if t == item:
                return m
        return 0

    def total(self) -> int:
        return sum(m for _, m in self._items)

    def idempotent(self):
        """Collapse every multiplicity to 1 (top level only)."""
        return type(self)((t, 1) for t, _ in self._items)

    def bind(self, f: Callable[[object], "Sum"]):
        """Linear extension of ``f``: sum of m * f(t) over the summands."""
        out: list = []
        for t, m in self._items:
            for u, k in f(t)._items:
                out.append((u, m * k))
        return type(self)(out)

    def map(self, f: Callable[[object], object]):
        return type(self)((f(t), m) for t, m in self._items)

    @property
    def fv(self) -> frozenset:
        return frozenset().union(*(t.fv for t, _ in self._items))

    @property
    def size(self) -> int:
        return sum(m * t.size for t, m in self._items)

    @property
    def loose(self) -> int:
        return max((t.loose for t, _ in self._items), default=0)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self._items + other._items)

    def __sub__(self, other):
        acc = dict(self._items)
        for t, m in other._items:
            left = acc.get(t, 0) - m
            if left < 0:
                raise ValueError("sum difference would be negative")
            acc[t] = left
        return type(self)(acc.items())

    def __mul__(self, k: int):
        return type(self)((t, m * k) for t, m in self._items)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __iter__(self):
        return self.terms()

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .syntax import show

        return f"{type(self).__name__}({show(self)!r})"


class Term:
    """Base class of simple differential terms."""

    __slots__ = ("key", "_hash", "size", "fv", "loose")

    def _finish(self, key: tuple, size: int, fv: frozenset, loose: int) -> None:
        self.key = key
        self._hash = hash(key)
        self.size = size
        self.fv = fv
        self.loose = loose

    def __eq__(self, other) -> bool:
        return self is other or (type(other) is type(self) and self.key == other.key)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .syntax import show

        return f"{type(self).__name__}({show(DiffSum.single(self))!r})"


class Bound(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._finish((0, index), 1, frozenset(), index + 1)


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._finish((1, name), 1, frozenset((name,)), 0)


class Lam(Term):
    """Abstraction; ``hint`` is the user-facing binder name, ignored by equality."""

    __slots__ = ("body", "hint")

    def __init__(self, body: Term, hint: str = "x"):
        self.body = body
        self.hint = hint
        self._finish((2, body.key), 1 + body.size, body.fv, max(body.loose - 1, 0))


class App(Term):
    """Application of a simple term to a sum (not distributed)."""

    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: "DiffSum"):
        if not isinstance(fun, Term):
            raise TypeError("function position must be a simple term")
        self.fun = fun
        self.arg = arg
        self._finish(
            (3, fun.key, arg.key),
            1 + fun.size + arg.size,
            fun.fv | arg.fv,
            max(fun.loose, arg.loose),
        )


class DApp(Term):
    """Iterated linear application D^n s.(t1,...,tn), flattened and sorted."""

    __slots__ = ("fun", "args")

    def __init__(self, fun: Term, args: Iterable[Term]):
        args = list(args)
        if isinstance(fun, DApp):
            args.extend(fun.args)
            fun = fun.fun
        if not args:
            raise ValueError("linear application needs at least one argument")
        if not isinstance(fun, Term) or not all(isinstance(a, Term) for a in args):
            raise TypeError("linear application takes simple terms only")
        args.sort(key=lambda a: a.key)
        self.fun = fun
        self.args = tuple(args)
        fv = fun.fv.union(*(a.fv for a in args))
        self._finish(
            (4, fun.key, tuple(a.key for a in args)),
            len(args) + fun.size + sum(a.size for a in args),
            fv,
            max(fun.loose, max(a.loose for a in args)),
        )


class DiffSum(Sum):
    """Finite sum of simple differential terms."""

    __slots__ = ()


ZERO = DiffSum()


# -- smart constructors -------------------------------------------------------


def mk_var(name: str) -> DiffSum:
    return DiffSum.single(Var(name))


def mk_abs(x: str, body: DiffSum, hint: str | None = None) -> DiffSum:
    """lambda x.(s1 + ... + sk) = lambda x.s1 + ... + lambda x.sk"""
    hint = hint or x
    return DiffSum((Lam(close_term(s, x), hint), m) for s, m in body.items())


def mk_app(fun: DiffSum, arg: DiffSum) -> DiffSum:
    """Left-linear: (s1 + ... + sk) T = s1 T + ... + sk T."""
    return DiffSum((App(s, arg), m) for s, m in fun.items())


def mk_dapp(fun: DiffSum, *args: DiffSum) -> DiffSum:
    """D^n applied to sums, extended multilinearly."""
    acc = fun
    for arg in args:
        acc = DiffSum(
            (DApp(s, (t,)), m * n) for s, m in acc.items() for t, n in arg.items()
        )
    return acc


# -- locally nameless plumbing ------------------------------------------------


def open_term(t: Term, name: str, depth: int = 0) -> Term:
    """Replace the bound index ``depth`` by the free variable ``name``."""
    if t.loose <= depth:
        return t
    if isinstance(t, Bound):
        return Var(name) if t.index == depth else t
    if isinstance(t, Lam):
        return Lam(open_term(t.body, name, depth + 1), t.hint)
    if isinstance(t, App):
        return App(open_term(t.fun, name, depth), _open_sum(t.arg, name, depth))
    if isinstance(t, DApp):
        return DApp(open_term(t.fun, name, depth), [open_term(a, name, depth) for a in t.args])
    return t


def _open_sum(s: DiffSum, name: str, depth: int) -> DiffSum:
    if s.loose <= depth:
        return s
    return DiffSum((open_term(t, name, depth), m) for t, m in s.items())


def close_term(t: Term, name: str, depth: int = 0) -> Term:
    """Turn the free variable ``name`` into the bound index ``depth``."""
    if name not in t.fv:
        return t
    if isinstance(t, Var):
        return Bound(depth)
    if isinstance(t, Lam):
        return Lam(close_term(t.body, name, depth + 1), t.hint)
    if isinstance(t, App):
        arg = DiffSum((close_term(u, name, depth), m) for u, m in t.arg.items())
        return App(close_term(t.fun, name, depth), arg)
    if isinstance(t, DApp):
        return DApp(close_term(t.fun, name, depth), [close_term(a, name, depth) for a in t.args])
    return t


def open_lam(t: Lam) -> tuple[str, Term]:
    """Open an abstraction with a fresh name; returns (name, body)."""
    z = fresh_name(t.hint.split("%")[0] or "v")
    return z, open_term(t.body, z)


# -- queries ------------------------------------------------------------------


def free_vars(s) -> frozenset:
    """Free variables of a term, sum, bag or resource expression."""
    return s.fv


def alpha_eq(a, b) -> bool:
    return a == b


def canonicalize(s: DiffSum, idempotent: bool = False) -> DiffSum:
    """Sums are canonical by construction; the flag collapses multiplicities deeply."""
    if not idempotent:
        return s
    return DiffSum((_idem_term(t), 1) for t in s.terms())


def _idem_term(t: Term) -> Term:
    if isinstance(t, Lam):
        return Lam(_idem_term(t.body), t.hint)
    if isinstance(t, App):
        return App(_idem_term(t.fun), canonicalize(t.arg, True))
    if isinstance(t, DApp):
        return DApp(_idem_term(t.fun), [_idem_term(a) for a in t.args])
    return t


def is_pure(s: DiffSum) -> bool:
    """True for a single ordinary lambda-term: no D, no sums, no 0 arguments."""
    if len(s) != 1 or s.total() != 1:
        return False
    stack = [next(s.terms())]
    while stack:
        t = stack.pop()
        if isinstance(t, DApp):
            return False
        if isinstance(t, Lam):
            stack.append(t.body)
        elif isinstance(t, App):
            if len(t.arg) != 1 or t.arg.total() != 1:
                return False
            stack.append(t.fun)
            stack.extend(t.arg.terms())
    return True


def is_var_headed(t: Term) -> bool:
    while isinstance(t, (App, DApp)):
        t = t.fun
    return isinstance(t, (Var, Bound))


def subterms(t: Term) -> Iterator[Term]:
    """All simple subterms, including ``t`` itself (pre-order)."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, Lam):
            stack.append(u.body)
        elif isinstance(u, App):
            stack.extend(u.arg.terms())
            stack.append(u.fun)
        elif isinstance(u, DApp):
            stack.extend(reversed(u.args))
            stack.append(u.fun)


def validate(s: DiffSum) -> None:
    """Raise ValueError if ``s`` breaks a structural invariant of the grammar."""
    if not isinstance(s, DiffSum):
        raise ValueError(f"expected a DiffSum, got {type(s).__name__}")
    if s.loose:
        raise ValueError("dangling bound index")
    _validate_sum(s)


def _validate_sum(s: DiffSum) -> None:
    # argument sums may mention enclosing binders, so only the shape is checked here
    if any(m < 1 for _, m in s.items()):
        raise ValueError("non-positive multiplicity")
    keys = [t.key for t in s.terms()]
    if keys != sorted(keys) or len(set(keys)) != len(keys):
        raise ValueError("sum is not in canonical order")
    for root in s.terms():
        for t in subterms(root):
            if isinstance(t, DApp):
                if isinstance(t.fun, DApp) or not t.args:
                    raise ValueError("linear application is not flattened")
                ak = [a.key for a in t.args]
                if ak != sorted(ak):
                    raise ValueError("linear arguments are not sorted")
            elif isinstance(t, App):
                _validate_sum(t.arg)
            elif not isinstance(t, (Var, Bound, Lam)):
                raise ValueError(f"unexpected node {type(t).__name__}")
