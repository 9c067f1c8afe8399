"""Resource lambda-terms, bags and sums.

Same locally nameless scheme as the differential terms.  A bag is a
multiset of resources, each either linear or banged; it is stored as a
sorted tuple of ``(term, banged)`` pairs, linear resources first.  Sums
live only at the surface: ``ResSum`` for terms, ``BagSum`` for bags.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import Sum, fresh_name


class RTerm:
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

        return f"{type(self).__name__}({show(ResSum.single(self))!r})"


class RBound(RTerm):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._finish((0, index), 1, frozenset(), index + 1)


class RVar(RTerm):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._finish((1, name), 1, frozenset((name,)), 0)


class RLam(RTerm):
    __slots__ = ("body", "hint")

    def __init__(self, body: RTerm, hint: str = "x"):
        self.body = body
        self.hint = hint
        self._finish((2, body.key), 1 + body.size, body.fv, max(body.loose - 1, 0))


class Bag:
    """A finite multiset of resources."""

    __slots__ = ("items", "key", "_hash", "size", "fv", "loose")

    def __init__(self, items: Iterable[tuple[RTerm, bool]] = ()):
        items = sorted(((t, bool(b)) for t, b in items), key=lambda r: (r[1], r[0].key))
        self.items = tuple(items)
        self.key = tuple((int(b), t.key) for t, b in self.items)
        self._hash = hash(("bag", self.key))
        self.size = sum(t.size + b for t, b in self.items)
        self.fv = frozenset().union(*(t.fv for t, _ in self.items))
        self.loose = max((t.loose for t, _ in self.items), default=0)

    @property
    def linear(self) -> tuple[RTerm, ...]:
        return tuple(t for t, b in self.items if not b)

    @property
    def banged(self) -> tuple[RTerm, ...]:
        return tuple(t for t, b in self.items if b)

    def __or__(self, other: "Bag") -> "Bag":
        return Bag(self.items + other.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other) -> bool:
        return type(other) is Bag and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .syntax import show_bag

        return f"Bag({show_bag(self)!r})"


EMPTY_BAG = Bag()


class RApp(RTerm):
    __slots__ = ("fun", "bag")

    def __init__(self, fun: RTerm, bag: Bag):
        if not isinstance(fun, RTerm) or not isinstance(bag, Bag):
            raise TypeError("resource application is a term applied to a bag")
        self.fun = fun
        self.bag = bag
        self._finish(
            (3, fun.key, bag.key),
            1 + fun.size + bag.size,
            fun.fv | bag.fv,
            max(fun.loose, bag.loose),
        )


class ResSum(Sum):
    __slots__ = ()


class BagSum(Sum):
    __slots__ = ()


RZERO = ResSum()


# -- smart constructors -------------------------------------------------------


def mk_rvar(name: str) -> ResSum:
    return ResSum.single(RVar(name))


def mk_rabs(x: str, body: ResSum, hint: str | None = None) -> ResSum:
    hint = hint or x
    return ResSum((RLam(close_rterm(s, x), hint), m) for s, m in body.items())


def mk_rapp(fun: ResSum, bags: BagSum) -> ResSum:
    """Bilinear: (sum M_i)(sum P_j) = sum M_i P_j."""
    return ResSum((RApp(s, p), m * n) for s, m in fun.items() for p, n in bags.items())


def mk_bag_cons(r: ResSum, bags: BagSum, banged: bool = False) -> BagSum:
    """Add a resource built from the sum ``r`` to every bag of ``bags``.

    Linear: [sum M_i] + P = sum [M_i] + P.
    Banged: [(sum M_i)!] + P = [M_1!, ..., M_k!] + P, repetitions included.
    """
    if banged:
        extra = tuple((t, True) for t, m in r.items() for _ in range(m))
        return BagSum((Bag(p.items + extra), n) for p, n in bags.items())
    return BagSum(
        (Bag(p.items + ((t, False),)), m * n) for t, m in r.items() for p, n in bags.items()
    )


def bag_of(*resources: tuple[ResSum, bool]) -> BagSum:
    """Build a bag sum from (sum, banged) resources, applying the bag notation."""
    acc = BagSum.single(EMPTY_BAG)
    for r, banged in resources:
        acc = mk_bag_cons(r, acc, banged)
    return acc


# -- locally nameless plumbing ------------------------------------------------


def open_rterm(t: RTerm, name: str, depth: int = 0) -> RTerm:
    if t.loose <= depth:
        return t
    if isinstance(t, RBound):
        return RVar(name) if t.index == depth else t
    if isinstance(t, RLam):
        return RLam(open_rterm(t.body, name, depth + 1), t.hint)
    if isinstance(t, RApp):
        return RApp(open_rterm(t.fun, name, depth), open_bag(t.bag, name, depth))
    return t


def open_bag(p: Bag, name: str, depth: int = 0) -> Bag:
    if p.loose <= depth:
        return p
    return Bag((open_rterm(t, name, depth), b) for t, b in p.items)


def close_rterm(t: RTerm, name: str, depth: int = 0) -> RTerm:
    if name not in t.fv:
        return t
    if isinstance(t, RVar):
        return RBound(depth)
    if isinstance(t, RLam):
        return RLam(close_rterm(t.body, name, depth + 1), t.hint)
    if isinstance(t, RApp):
        bag = Bag((close_rterm(u, name, depth), b) for u, b in t.bag.items)
        return RApp(close_rterm(t.fun, name, depth), bag)
    return t


def open_rlam(t: RLam) -> tuple[str, RTerm]:
    z = fresh_name(t.hint.split("%")[0] or "v")
    return z, open_rterm(t.body, z)


# -- queries ------------------------------------------------------------------


def canonicalize_res(s: ResSum, idempotent: bool = False) -> ResSum:
    if not idempotent:
        return s
    return ResSum((_idem(t), 1) for t in s.terms())


def _idem(t: RTerm) -> RTerm:
    if isinstance(t, RLam):
        return RLam(_idem(t.body), t.hint)
    if isinstance(t, RApp):
        return RApp(_idem(t.fun), Bag((_idem(u), b) for u, b in t.bag.items))
    return t


def rsubterms(t: RTerm) -> Iterator[RTerm]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, RLam):
            stack.append(u.body)
        elif isinstance(u, RApp):
            stack.extend(v for v, _ in reversed(u.bag.items))
            stack.append(u.fun)


def validate_res(s: ResSum) -> None:
    if not isinstance(s, ResSum):
        raise ValueError(f"expected a ResSum, got {type(s).__name__}")
    if s.loose:
        raise ValueError("dangling bound index")
    keys = [t.key for t in s.terms()]
    if keys != sorted(keys) or len(set(keys)) != len(keys):
        raise ValueError("sum is not in canonical order")
    for root in s.terms():
        for t in rsubterms(root):
            if isinstance(t, RApp):
                ks = [(b, u.key) for u, b in t.bag.items]
                if ks != sorted(ks):
                    raise ValueError("bag is not sorted")
            elif not isinstance(t, (RVar, RBound, RLam)):
                raise ValueError(f"unexpected node {type(t).__name__}")
