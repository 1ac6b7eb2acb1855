"""Łukasiewicz propositional formulas: syntax tree, parser, printer.

Connective surface syntax, tightest first:

    !    negation            1 - x
    *    strong conjunction  max(0, x + y - 1)
    +    strong disjunction  min(1, x + y)
    &    lattice meet        min(x, y)
    |    lattice join        max(x, y)
    ->   implication         min(1, 1 - x + y), right associative

Binary connectives other than ``->`` associate to the left.  Atoms are
variables ``X1, X2, ...`` (indices start at 1), parenthesised formulas, and
the shorthand ``k.F`` for the k-fold ``+`` of F, which the parser expands.

Syntax trees are immutable; identical subterms may be shared, so large
formulas are cheap to build and traverse with memoised walks.  Structural
equality and hashing walk the whole logical tree: fine for ordinary
formulas, to be avoided for heavily shared giants.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(ValueError):
    """Rejected input, with 1-based line and column of the offence."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    child: "Formula"


@dataclass(frozen=True)
class Impl:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class OPlus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class OTimes:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Max:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Min:
    left: "Formula"
    right: "Formula"


Formula = Var | Neg | Impl | OPlus | OTimes | Max | Min

_BINARY = {OPlus: "+", OTimes: "*", Max: "|", Min: "&", Impl: "->"}
_PREC = {Impl: 0, Max: 1, Min: 2, OPlus: 3, OTimes: 4, Neg: 5, Var: 6}


# === tokenizer =========================================================

_TOKENS = ("->", "!", "*", "+", "&", "|", "(", ")", ".")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    """(kind, value, line, col) list; kinds: op, var, int, end."""
    out = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("->", i):
            out.append(("op", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "!*+&|().":
            out.append(("op", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "X":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable needs an index, e.g. X1", line, col)
            out.append(("var", text[i + 1:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(("end", "", line, col))
    return out


# === parser ============================================================

class _Parser:
    """Recursive descent mirroring the precedence ladder:

    formula := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := sum ("&" sum)*
    sum     := prod ("+" prod)*
    prod    := unary ("*" unary)*
    unary   := "!" unary | atom
    atom    := VAR | INT "." unary | "(" formula ")"
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, val, line, col = self.peek()
        if kind != "op" or val != value:
            raise ParseError(f"expected {value!r}", line, col)
        return self.take()

    def formula(self) -> Formula:
        return self.impl()

    def impl(self) -> Formula:
        left = self.chain("|", self.meet)
        kind, val, _, _ = self.peek()
        if kind == "op" and val == "->":
            self.take()
            return Impl(left, self.impl())
        return left

    def meet(self) -> Formula:
        return self.chain("&", lambda: self.chain("+", lambda: self.chain("*", self.unary)))

    def chain(self, op: str, sub) -> Formula:
        node = sub()
        ctor = {"|": Max, "&": Min, "+": OPlus, "*": OTimes}[op]
        while True:
            kind, val, _, _ = self.peek()
            if kind == "op" and val == op:
                self.take()
                node = ctor(node, sub())
            else:
                return node

    def unary(self) -> Formula:
        kind, val, line, col = self.peek()
        if kind == "op" and val == "!":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, val, line, col = self.take()
        if kind == "var":
            index = int(val)
            if index < 1:
                raise ParseError("variable indices start at 1", line, col)
            return Var(index)
        if kind == "int":
            k = int(val)
            if k < 1:
                raise ParseError("multiplicity must be a positive integer", line, col)
            self.expect(".")
            child = self.unary()
            node: Formula = child
            for _ in range(k - 1):
                # shared child: k.F builds a left comb over one F object
                node = OPlus(node, child)
            return node
        if kind == "op" and val == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError("expected a formula", line, col)


def parse(text: str) -> Formula:
    """Parse a formula; raises ParseError with position on bad input."""
    parser = _Parser(_tokenize(text))
    node = parser.formula()
    kind, val, line, col = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", line, col)
    return node


# === printer ===========================================================

def to_text(f: Formula) -> str:
    """Minimal parenthesisation; parse(to_text(f)) == f structurally."""
    memo: dict[int, str] = {}

    def walk(node: Formula) -> str:
        key = id(node)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Var):
            text = f"X{node.index}"
        elif isinstance(node, Neg):
            text = "!" + wrap(node.child, _PREC[Neg])
        else:
            op = _BINARY[type(node)]
            prec = _PREC[type(node)]
            if isinstance(node, Impl):
                # right associative: parenthesise an equal-precedence left child
                lhs = wrap(node.left, prec, strict=True)
                rhs = wrap(node.right, prec)
            else:
                lhs = wrap(node.left, prec)
                rhs = wrap(node.right, prec, strict=True)
            text = f"{lhs} {op} {rhs}"
        memo[key] = text
        return text

    def wrap(node: Formula, prec: int, strict: bool = False) -> str:
        child_prec = _PREC[type(node)]
        need = child_prec < prec or (strict and child_prec == prec)
        text = walk(node)
        return f"({text})" if need else text

    return walk(f)


# === structural helpers ================================================

def variables_of(f: Formula) -> frozenset[int]:
    """Indices of the variables occurring in f."""
    memo: dict[int, frozenset[int]] = {}

    def walk(node: Formula) -> frozenset[int]:
        key = id(node)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Var):
            out = frozenset((node.index,))
        elif isinstance(node, Neg):
            out = walk(node.child)
        else:
            out = walk(node.left) | walk(node.right)
        memo[key] = out
        return out

    return walk(f)


def top_dimension(f: Formula) -> int:
    return max(variables_of(f), default=0)


def expand_derived(f: Formula) -> Formula:
    """Rewrite into the !/-> fragment:

    a + b  =  !a -> b
    a * b  =  !(a -> !b)
    a | b  =  (a -> b) -> b
    a & b  =  !(!a | !b)
    """
    memo: dict[int, Formula] = {}

    def walk(node: Formula) -> Formula:
        key = id(node)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Var):
            out: Formula = node
        elif isinstance(node, Neg):
            out = Neg(walk(node.child))
        else:
            a, b = walk(node.left), walk(node.right)
            if isinstance(node, Impl):
                out = Impl(a, b)
            elif isinstance(node, OPlus):
                out = Impl(Neg(a), b)
            elif isinstance(node, OTimes):
                out = Neg(Impl(a, Neg(b)))
            elif isinstance(node, Max):
                out = Impl(Impl(a, b), b)
            else:  # Min
                join = Impl(Impl(Neg(a), Neg(b)), Neg(b))
                out = Neg(join)
        memo[key] = out
        return out

    return walk(f)


def count_connectives(f: Formula) -> int:
    """Connective count of the logical tree (shared subterms recounted)."""
    memo: dict[int, int] = {}

    def walk(node: Formula) -> int:
        key = id(node)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Var):
            out = 0
        elif isinstance(node, Neg):
            out = 1 + walk(node.child)
        else:
            out = 1 + walk(node.left) + walk(node.right)
        memo[key] = out
        return out

    return walk(f)
