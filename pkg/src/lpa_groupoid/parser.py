"""Recursive-descent parser for algebra expressions over a graph.

Grammar (columns in error messages are 1-based)::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "." | juxtaposition) factor)*
    factor  := "-" factor | atom
    atom    := number ["/" number] | name ["^*"] | "(" expr ")"
             | "[" path "]" | ("δ" | "d") ("[" walk "]" | "_{" walk "}")

A name is a vertex or an edge; ``[path]`` is a cylinder indicator placed on
the identities; ``δ[walk]`` is the homogeneous element 1_g δ_g.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError
from .lpa import Cyl, Delta, LeavittEmbedding, Num, Prod, Sum, Sym, eval_word
from .skew import SkewElement
from .walks import WalkError, parse_walk


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, delta, bracket, end
    text: str
    column: int


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUM = re.compile(r"\d+")


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i + 1
        if ch.isspace():
            i += 1
            continue
        if ch in "δd" and (text.startswith("[", i + 1) or text.startswith("_{", i + 1)):
            close = "]" if text[i + 1] == "[" else "}"
            start = i + (2 if close == "]" else 3)
            end = text.find(close, start)
            if end < 0:
                raise ParseError(f"unterminated walk literal, expected {close!r}", n + 1)
            out.append(Token("delta", text[start:end], col))
            i = end + 1
            continue
        if ch == "[":
            end = text.find("]", i + 1)
            if end < 0:
                raise ParseError("unterminated cylinder literal, expected ']'", n + 1)
            out.append(Token("bracket", text[i + 1 : end], col))
            i = end + 1
            continue
        m = _NUM.match(text, i)
        if m:
            out.append(Token("num", m.group(), col))
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            j = m.end()
            name = m.group()
            if text.startswith("^*", j):
                name += "^*"
                j += 2
            out.append(Token("name", name, col))
            i = j
            continue
        if ch in "+-*./()":
            out.append(Token("op", ch, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", col)
    out.append(Token("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, graph: Graph, text: str):
        self.graph = graph
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def starts_atom(self) -> bool:
        tok = self.peek()
        return tok.kind in ("num", "name", "delta", "bracket") or (tok.kind == "op" and tok.text == "(")

    def parse(self):
        tree = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.column)
        return tree

    def expr(self):
        terms, signs = [self.term()], [1]
        while self.at_op("+", "-"):
            signs.append(1 if self.take().text == "+" else -1)
            terms.append(self.term())
        return terms[0] if len(terms) == 1 and signs[0] == 1 else Sum(tuple(terms), tuple(signs))

    def term(self):
        factors = [self.factor()]
        while True:
            if self.at_op("*", "."):
                self.take()
                factors.append(self.factor())
            elif self.starts_atom():
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self):
        if self.at_op("-"):
            self.take()
            return Prod((Num(Fraction(-1)), self.factor()))
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok.kind == "end":
            raise ParseError("expected an operand", tok.column)
        if tok.kind == "num":
            value = Fraction(int(tok.text))
            if self.at_op("/") and self.tokens[self.pos + 1].kind == "num":
                self.take()
                den = self.take()
                if int(den.text) == 0:
                    raise ParseError("division by zero", den.column)
                value /= int(den.text)
            return Num(value)
        if tok.kind == "name":
            star = tok.text.endswith("^*")
            name = tok.text[:-2] if star else tok.text
            g = self.graph
            if star and name not in g.edge_index:
                raise ParseError(f"unknown edge {name!r}", tok.column)
            if not star and name not in g.vertex_index and name not in g.edge_index:
                raise ParseError(f"unknown symbol {name!r}", tok.column)
            return Sym(name, star, tok.column)
        if tok.kind in ("delta", "bracket"):
            try:
                walk = parse_walk(self.graph, tok.text)
            except (WalkError, GraphError) as exc:
                raise ParseError(str(exc), tok.column) from None
            if tok.kind == "delta":
                return Delta(tok.text, tok.column)
            if any(star for _, star in walk.letters):
                raise ParseError("cylinder literal must be a path without ghosts", tok.column)
            return Cyl(tok.text, tok.column)
        if tok.text == "(":
            inner = self.expr()
            if not self.at_op(")"):
                raise ParseError("expected ')'", self.peek().column)
            self.take()
            return inner
        raise ParseError(f"unexpected {tok.text!r}", tok.column)


def parse_expression(graph: Graph, text: str):
    """Parse ``text`` into a generator word tree."""
    return _Parser(graph, text).parse()


def evaluate(emb: LeavittEmbedding, text: str) -> SkewElement:
    return eval_word(emb, parse_expression(emb.graph, text))
