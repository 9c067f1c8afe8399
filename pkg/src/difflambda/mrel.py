"""The category MRel at desk scale.

Objects are element universes, a morphism A -> B is a finite set of pairs
(finite multiset over A, element of B).  Elements of a product A & B are
tagged pairs ``(1, a)`` / ``(2, b)``, so a multiset over A & B is one
multiset holding both tagged parts.  Exponentials are never materialized:
``ev`` is only available through :func:`eval_with`, and identities and
projections need a finite universe (or an explicit sample).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable


# -- elements and multisets ---------------------------------------------------


def elem_key(e) -> tuple:
    """Total structural order on model elements."""
    k = getattr(e, "sort_key", None)
    if k is not None:
        return k
    if isinstance(e, str):
        return (0, e)
    if isinstance(e, int):
        return (1, e)
    if isinstance(e, tuple):
        return (2,) + tuple(elem_key(x) for x in e)
    raise TypeError(f"not a model element: {e!r}")


class FinMultiset:
    """A finite multiset, stored as a sorted tuple."""

    __slots__ = ("items", "sort_key", "_hash")

    def __init__(self, items: Iterable = ()):
        keyed = sorted(((elem_key(x), x) for x in items), key=lambda p: p[0])
        self.items = tuple(x for _, x in keyed)
        self.sort_key = (3,) + tuple(k for k, _ in keyed)
        self._hash = hash(self.sort_key)

    def __add__(self, other: "FinMultiset") -> "FinMultiset":
        if not other.items:
            return self
        if not self.items:
            return other
        return FinMultiset(self.items + other.items)

    def __sub__(self, other: "FinMultiset") -> "FinMultiset":
        left = list(self.items)
        for x in other.items:
            left.remove(x)
        return FinMultiset(left)

    def remove_one(self, x) -> "FinMultiset":
        left = list(self.items)
        left.remove(x)
        return FinMultiset(left)

    def distinct(self) -> list:
        out = []
        for x in self.items:
            if not out or out[-1] != x:
                out.append(x)
        return out

    def counts(self) -> Counter:
        return Counter(self.items)

    def __contains__(self, x) -> bool:
        return x in self.items

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinMultiset) and self.sort_key == other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return "[" + ", ".join(show_elem(x) for x in self.items) + "]"


EMPTY = FinMultiset()


def mpair(left: FinMultiset, right: FinMultiset) -> FinMultiset:
    """The multiset over A & B corresponding to (left, right)."""
    return FinMultiset([(1, x) for x in left] + [(2, y) for y in right])


def munpair(m: FinMultiset) -> tuple[FinMultiset, FinMultiset]:
    left, right = [], []
    for tag, x in m.items:
        (left if tag == 1 else right).append(x)
    return FinMultiset(left), FinMultiset(right)


def show_elem(e) -> str:
    if isinstance(e, FinMultiset):
        return repr(e)
    if isinstance(e, tuple):
        return "(" + ", ".join(show_elem(x) for x in e) + ")"
    return str(e)


# -- universes ----------------------------------------------------------------


class Universe:
    finite = True

    def elements(self) -> tuple:
        raise NotImplementedError

    def contains(self, e) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Atoms(Universe):
    names: tuple = ()

    def elements(self) -> tuple:
        return self.names

    def contains(self, e) -> bool:
        return e in self.names


TERMINAL = Atoms(())


@dataclass(frozen=True)
class Product(Universe):
    left: Universe
    right: Universe

    @property
    def finite(self) -> bool:
        return self.left.finite and self.right.finite

    def elements(self) -> tuple:
        return tuple((1, a) for a in self.left.elements()) + tuple(
            (2, b) for b in self.right.elements()
        )

    def contains(self, e) -> bool:
        if not (isinstance(e, tuple) and len(e) == 2 and e[0] in (1, 2)):
            return False
        return (self.left if e[0] == 1 else self.right).contains(e[1])


@dataclass(frozen=True)
class Arrow(Universe):
    dom: Universe
    cod: Universe

    @property
    def finite(self) -> bool:
        return self.dom == TERMINAL or self.cod == TERMINAL

    def elements(self) -> tuple:
        if self.cod == TERMINAL:
            return ()
        if self.dom == TERMINAL:
            return tuple((EMPTY, b) for b in self.cod.elements())
        raise ValueError("exponential object is infinite")

    def contains(self, e) -> bool:
        return (
            isinstance(e, tuple)
            and len(e) == 2
            and isinstance(e[0], FinMultiset)
            and all(self.dom.contains(x) for x in e[0])
            and self.cod.contains(e[1])
        )


def product(*parts: Universe) -> Universe:
    """Left-nested product ((A1 & A2) & A3) ..."""
    acc = parts[0]
    for p in parts[1:]:
        acc = Product(acc, p)
    return acc


# -- relations ----------------------------------------------------------------


class TypeMismatch(TypeError):
    pass


@dataclass(frozen=True)
class FinRel:
    source: Universe
    target: Universe
    pairs: frozenset

    def __post_init__(self):
        if not isinstance(self.pairs, frozenset):
            object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __or__(self, other: "FinRel") -> "FinRel":
        _same_type(self, other)
        return FinRel(self.source, self.target, self.pairs | other.pairs)

    __add__ = __or__

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=lambda p: (p[0].sort_key, elem_key(p[1])))

    def __repr__(self) -> str:
        body = ", ".join(f"({m!r}, {show_elem(b)})" for m, b in self.sorted_pairs())
        return "{" + body + "}"


def _same_type(f: FinRel, g: FinRel) -> None:
    if f.source != g.source or f.target != g.target:
        raise TypeMismatch("relations have different types")


def rel(source: Universe, target: Universe, pairs: Iterable) -> FinRel:
    return FinRel(source, target, frozenset(pairs))


def zero(source: Universe, target: Universe) -> FinRel:
    return FinRel(source, target, frozenset())


def _finite_elements(u: Universe, sample) -> tuple:
    if sample is not None:
        return tuple(sample)
    if not u.finite:
        raise ValueError("universe is infinite; pass a finite sample")
    return u.elements()


def identity(u: Universe, sample=None) -> FinRel:
    return FinRel(u, u, frozenset((FinMultiset((a,)), a) for a in _finite_elements(u, sample)))


def compose(t: FinRel, s: FinRel) -> FinRel:
    """t o s: split the input multiset among k pairs of s."""
    if t.source != s.target:
        raise TypeMismatch("compose: source of t differs from target of s")
    by_target: dict = defaultdict(list)
    for m, b in s.pairs:
        by_target[b].append(m)
    out = set()
    for mb, c in t.pairs:
        choices = []
        for b, k in mb.counts().items():
            options = by_target.get(b)
            if not options:
                break
            choices.append(list(itertools.combinations_with_replacement(options, k)))
        else:
            for combo in itertools.product(*choices):
                acc: list = []
                for group in combo:
                    for m in group:
                        acc.extend(m.items)
                out.add((FinMultiset(acc), c))
    return FinRel(s.source, t.target, frozenset(out))


def proj1(a: Universe, b: Universe, sample=None) -> FinRel:
    return FinRel(
        Product(a, b), a, frozenset((FinMultiset(((1, x),)), x) for x in _finite_elements(a, sample))
    )


def proj2(a: Universe, b: Universe, sample=None) -> FinRel:
    return FinRel(
        Product(a, b), b, frozenset((FinMultiset(((2, x),)), x) for x in _finite_elements(b, sample))
    )


def pairing(f: FinRel, g: FinRel) -> FinRel:
    if f.source != g.source:
        raise TypeMismatch("pairing: different sources")
    pairs = {(m, (1, a)) for m, a in f.pairs} | {(m, (2, b)) for m, b in g.pairs}
    return FinRel(f.source, Product(f.target, g.target), frozenset(pairs))


def product_map(f: FinRel, g: FinRel) -> FinRel:
    """f x g = <f o pi1, g o pi2>, computed directly."""
    pairs = {(mpair(m, EMPTY), (1, a)) for m, a in f.pairs}
    pairs |= {(mpair(EMPTY, m), (2, b)) for m, b in g.pairs}
    return FinRel(Product(f.source, g.source), Product(f.target, g.target), frozenset(pairs))


def terminal_map(a: Universe) -> FinRel:
    return zero(a, TERMINAL)


def _split_source(f: FinRel) -> Product:
    if not isinstance(f.source, Product):
        raise TypeMismatch("source is not a product")
    return f.source


def curry(s: FinRel) -> FinRel:
    src = _split_source(s)
    pairs = set()
    for m, b in s.pairs:
        p, q = munpair(m)
        pairs.add((p, (q, b)))
    return FinRel(src.left, Arrow(src.right, s.target), frozenset(pairs))


def uncurry(f: FinRel) -> FinRel:
    if not isinstance(f.target, Arrow):
        raise TypeMismatch("uncurry needs an exponential target")
    arr = f.target
    pairs = {(mpair(p, q), b) for p, (q, b) in f.pairs}
    return FinRel(Product(f.source, arr.dom), arr.cod, frozenset(pairs))


def eval_with(f: FinRel, h: FinRel) -> FinRel:
    """ev o <f, h> without materializing ev."""
    if not isinstance(f.target, Arrow) or f.source != h.source or f.target.dom != h.target:
        raise TypeMismatch("eval_with: incompatible types")
    by_target: dict = defaultdict(list)
    for m, a in h.pairs:
        by_target[a].append(m)
    out = set()
    for m0, (args, c) in f.pairs:
        choices = []
        for a, k in args.counts().items():
            options = by_target.get(a)
            if not options:
                break
            choices.append(list(itertools.combinations_with_replacement(options, k)))
        else:
            for combo in itertools.product(*choices):
                acc = list(m0.items)
                for group in combo:
                    for m in group:
                        acc.extend(m.items)
                out.add((FinMultiset(acc), c))
    return FinRel(f.source, f.target.cod, frozenset(out))


def differential(f: FinRel) -> FinRel:
    """D(f) = {(([a], m), b) | (m + [a], b) in f}."""
    pairs = set()
    for m, b in f.pairs:
        for a in m.distinct():
            pairs.add((mpair(FinMultiset((a,)), m.remove_one(a)), b))
    return FinRel(Product(f.source, f.source), f.target, frozenset(pairs))


def star(f: FinRel, g: FinRel) -> FinRel:
    """f * g = {((m1 + m2, m), b) | (m1, a) in g, ((m2, m + [a]), b) in f}."""
    src = _split_source(f)
    if g.source != src.left or g.target != src.right:
        raise TypeMismatch("star: incompatible types")
    by_target: dict = defaultdict(list)
    for m, a in g.pairs:
        by_target[a].append(m)
    pairs = set()
    for m, b in f.pairs:
        m2, ma = munpair(m)
        for a in ma.distinct():
            rest = ma.remove_one(a)
            for m1 in by_target.get(a, ()):
                pairs.add((mpair(m1 + m2, rest), b))
    return FinRel(f.source, f.target, frozenset(pairs))


def is_linear(f: FinRel) -> bool:
    return all(len(m) == 1 for m, _ in f.pairs)


def sw(a: Universe, b: Universe, c: Universe) -> FinRel:
    """<<pi1 o pi1, pi2>, pi2 o pi1> : (A & B) & C -> (A & C) & B."""
    ab = Product(a, b)
    p11 = compose(proj1(a, b), proj1(ab, c))
    p21 = compose(proj2(a, b), proj1(ab, c))
    return pairing(pairing(p11, proj2(ab, c)), p21)


# -- random generation ----------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    atoms: tuple[int, int] = (1, 4)
    mset: tuple[int, int] = (0, 3)
    rel: tuple[int, int] = (0, 6)


def random_atoms(rng: random.Random, prefix: str, params: GenParams) -> Atoms:
    n = rng.randint(*params.atoms)
    return Atoms(tuple(f"{prefix}{i}" for i in range(n)))


def random_element(rng: random.Random, u: Universe, params: GenParams):
    if isinstance(u, Atoms):
        return rng.choice(u.names)
    if isinstance(u, Product):
        sides = [(i, s) for i, s in ((1, u.left), (2, u.right)) if not _empty(s)]
        tag, side = rng.choice(sides)
        return (tag, random_element(rng, side, params))
    if isinstance(u, Arrow):
        return (random_multiset(rng, u.dom, params), random_element(rng, u.cod, params))
    raise TypeError(u)


def _empty(u: Universe) -> bool:
    if isinstance(u, Atoms):
        return not u.names
    if isinstance(u, Product):
        return _empty(u.left) and _empty(u.right)
    if isinstance(u, Arrow):
        return _empty(u.cod)
    return False


def random_multiset(rng: random.Random, u: Universe, params: GenParams) -> FinMultiset:
    if _empty(u):
        return EMPTY
    n = rng.randint(*params.mset)
    return FinMultiset(random_element(rng, u, params) for _ in range(n))


def random_rel(
    rng: random.Random, source: Universe, target: Universe, params: GenParams, linear: bool = False
) -> FinRel:
    if _empty(target) or (linear and _empty(source)):
        return zero(source, target)
    n = rng.randint(*params.rel)
    pairs = set()
    for _ in range(n):
        if linear:
            m = FinMultiset((random_element(rng, source, params),))
        else:
            m = random_multiset(rng, source, params)
        pairs.add((m, random_element(rng, target, params)))
    return FinRel(source, target, frozenset(pairs))
