"""Concrete syntax for both calculi: tokenizer, parsers, printers.

Differential terms::

    sum   := '0' | sterm ('+' sterm)*
    sterm := atom+
    atom  := var | '(' sum ')' | '\\' var+ '.' sterm | 'D(' sterm ';' sterm (',' sterm)* ')'

Resource terms::

    rsum  := '0' | rterm ('+' rterm)*
    rterm := ratom bag*
    ratom := var | '(' rsum ')' | '\\' var+ '.' rterm
    bag   := '[' (res (',' res)*)? ']'
    res   := rterm '!'?

``λ`` is accepted as a synonym of ``\\``.  The parser is slightly more
liberal than the grammar: ``0`` may also appear wherever an atom may.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .resource import (
    EMPTY_BAG,
    Bag,
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
from .terms import App, Bound, DApp, DiffSum, Lam, Term, Var, mk_abs, mk_app, mk_dapp, mk_var

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: frozenset = frozenset()):
        self.line = line
        self.col = col
        self.expected = expected
        exp = ", ".join(sorted(expected))
        detail = f" (expected one of: {exp})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'var' or the literal punctuation, 'D(' , '0', 'eof'
    text: str
    line: int
    col: int


_PUNCT = set("\\.()[],;+!")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "λ":
            c = "\\"
        if c in _PUNCT:
            tokens.append(Token(c, c, line, col))
            i += 1
            col += 1
            continue
        if c == "0":
            tokens.append(Token("0", c, line, col))
            i += 1
            col += 1
            continue
        m = IDENT.match(text, i)
        if m:
            word = m.group()
            end = m.end()
            if word == "D" and end < len(text) and text[end] == "(":
                tokens.append(Token("D(", "D(", line, col))
                end += 1
            elif end < len(text) and text[end] in "$%":
                raise ParseError(f"reserved name {text[i:end + 1]!r}", line, col)
            else:
                tokens.append(Token("var", word, line, col))
            col += end - i
            i = end
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def fail(self, expected) -> None:
        t = self.cur
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.line, t.col, frozenset(expected))

    def take(self, kind: str) -> Token:
        if self.cur.kind != kind:
            self.fail({kind})
        tok = self.cur
        self.pos += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.cur.kind == kind:
            self.pos += 1
            return True
        return False

    def binders(self) -> list[str]:
        self.take("\\")
        names = [self.take("var").text]
        while self.cur.kind == "var":
            names.append(self.take("var").text)
        self.take(".")
        return names

    def finish(self, value):
        if self.cur.kind != "eof":
            self.fail({"eof", "+"})
        return value


class DiffParser(_Parser):
    ATOM_START = {"var", "0", "(", "\\", "D("}

    def parse(self) -> DiffSum:
        return self.finish(self.sum())

    def sum(self) -> DiffSum:
        acc = self.sterm()
        while self.accept("+"):
            acc = acc + self.sterm()
        return acc

    def sterm(self) -> DiffSum:
        if self.cur.kind not in self.ATOM_START:
            self.fail(self.ATOM_START)
        acc = self.atom()
        while self.cur.kind in self.ATOM_START:
            acc = mk_app(acc, self.atom())
        return acc

    def atom(self) -> DiffSum:
        k = self.cur.kind
        if k == "var":
            return mk_var(self.take("var").text)
        if k == "0":
            self.take("0")
            return DiffSum()
        if k == "(":
            self.take("(")
            inner = self.sum()
            self.take(")")
            return inner
        if k == "\\":
            names = self.binders()
            body = self.sterm()
            for x in reversed(names):
                body = mk_abs(x, body)
            return body
        if k == "D(":
            self.take("D(")
            head = self.sterm()
            self.take(";")
            args = [self.sterm()]
            while self.accept(","):
                args.append(self.sterm())
            self.take(")")
            return mk_dapp(head, *args)
        self.fail(self.ATOM_START)


class ResParser(_Parser):
    ATOM_START = {"var", "0", "(", "\\"}

    def parse(self) -> ResSum:
        return self.finish(self.sum())

    def sum(self) -> ResSum:
        acc = self.rterm()
        while self.accept("+"):
            acc = acc + self.rterm()
        return acc

    def rterm(self) -> ResSum:
        acc = self.ratom()
        while self.cur.kind == "[":
            acc = mk_rapp(acc, self.bag())
        return acc

    def ratom(self) -> ResSum:
        k = self.cur.kind
        if k == "var":
            return mk_rvar(self.take("var").text)
        if k == "0":
            self.take("0")
            return ResSum()
        if k == "(":
            self.take("(")
            inner = self.sum()
            self.take(")")
            return inner
        if k == "\\":
            names = self.binders()
            body = self.rterm()
            for x in reversed(names):
                body = mk_rabs(x, body)
            return body
        self.fail(self.ATOM_START)

    def bag(self) -> BagSum:
        self.take("[")
        acc = BagSum.single(EMPTY_BAG)
        if self.accept("]"):
            return acc
        while True:
            r = self.rterm()
            acc = mk_bag_cons(r, acc, self.accept("!"))
            if self.accept("]"):
                return acc
            if not self.accept(","):
                self.fail({",", "]", "!", "["})


def expand_lets(text: str, lets) -> str:
    """Textual prelude expansion; later definitions may use earlier ones."""
    for name, body in reversed(list(lets)):
        if not IDENT.fullmatch(name):
            raise ParseError(f"bad let name {name!r}", 1, 1)
        stop = "A-Za-z0-9_$%(" if name == "D" else "A-Za-z0-9_$%"
        pat = re.compile(rf"(?<![A-Za-z0-9_$%]){re.escape(name)}(?![{stop}])")
        text = pat.sub(lambda _: f"({body})", text)
    return text


def parse(text: str, calculus: str = "diff", lets=()):
    text = expand_lets(text, lets)
    if calculus == "diff":
        return DiffParser(text).parse()
    if calculus == "res":
        return ResParser(text).parse()
    raise ValueError(f"unknown calculus {calculus!r}")


def parse_diff(text: str, lets=()) -> DiffSum:
    return parse(text, "diff", lets)


def parse_res(text: str, lets=()) -> ResSum:
    return parse(text, "res", lets)


# -- printing -----------------------------------------------------------------


def _binder_name(hint: str, taken: set) -> str:
    base = re.split(r"[$%]", hint)[0]
    if not IDENT.fullmatch(base) or base == "D":
        base = "y"
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


class _DiffPrinter:
    def sum(self, s: DiffSum, names: list) -> str:
        if not s:
            return "0"
        parts = []
        for t, m in s.items():
            parts.extend([self.sterm(t, names)] * m)
        return " + ".join(parts)

    def sterm(self, t: Term, names: list) -> str:
        if isinstance(t, Lam):
            bound = []
            while isinstance(t, Lam):
                n = _binder_name(t.hint, t.fv | set(names))
                names = names + [n]
                bound.append(n)
                t = t.body
            return "\\" + " ".join(bound) + "." + self.sterm(t, names)
        if isinstance(t, App):
            f = t.fun
            head = f"({self.sterm(f, names)})" if isinstance(f, Lam) else self.sterm(f, names)
            return f"{head} {self.arg(t.arg, names)}"
        return self.atom(t, names)

    def atom(self, t: Term, names: list) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Bound):
            return names[-1 - t.index]
        if isinstance(t, DApp):
            args = ", ".join(self.sterm(a, names) for a in t.args)
            return f"D({self.sterm(t.fun, names)}; {args})"
        return f"({self.sterm(t, names)})"

    def arg(self, s: DiffSum, names: list) -> str:
        if len(s) == 1 and s.total() == 1:
            return self.atom(next(s.terms()), names)
        return f"({self.sum(s, names)})"


class _ResPrinter:
    def sum(self, s: ResSum, names: list) -> str:
        if not s:
            return "0"
        parts = []
        for t, m in s.items():
            parts.extend([self.rterm(t, names)] * m)
        return " + ".join(parts)

    def rterm(self, t: RTerm, names: list) -> str:
        if isinstance(t, RLam):
            bound = []
            while isinstance(t, RLam):
                n = _binder_name(t.hint, t.fv | set(names))
                names = names + [n]
                bound.append(n)
                t = t.body
            return "\\" + " ".join(bound) + "." + self.rterm(t, names)
        if isinstance(t, RApp):
            f = t.fun
            head = f"({self.rterm(f, names)})" if isinstance(f, RLam) else self.rterm(f, names)
            return head + self.bag(t.bag, names)
        if isinstance(t, RVar):
            return t.name
        if isinstance(t, RBound):
            return names[-1 - t.index]
        raise TypeError(t)

    def bag(self, p: Bag, names: list) -> str:
        parts = []
        for t, banged in p.items:
            s = self.rterm(t, names)
            if isinstance(t, RLam):
                s = f"({s})"
            parts.append(s + ("!" if banged else ""))
        return "[" + ", ".join(parts) + "]"


def show(s) -> str:
    """Canonical concrete syntax of a DiffSum or ResSum."""
    if isinstance(s, DiffSum):
        return _DiffPrinter().sum(s, [])
    if isinstance(s, ResSum):
        return _ResPrinter().sum(s, [])
    if isinstance(s, BagSum):
        pr = _ResPrinter()
        if not s:
            return "0"
        return " + ".join(pr.bag(p, []) for p, m in s.items() for _ in range(m))
    raise TypeError(f"cannot print {type(s).__name__}")


def show_bag(p: Bag) -> str:
    return _ResPrinter().bag(p, [])
