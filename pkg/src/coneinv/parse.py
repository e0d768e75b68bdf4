"""Text format for polynomials and ideals.

Grammar for a single polynomial::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor (("*"|"/") factor | factor)*      # juxtaposition multiplies
    factor := primary ["^" INT]
    primary:= INT | NAME | "(" expr ")"

``/`` builds rational literals; the right operand must be a nonzero constant
(``3/2*x`` works, ``x/y`` is rejected). Variables are identifiers. The unicode
minus sign is accepted as ``-``.

An ideal file holds one generator per line, ``#`` starts a comment, and an
optional first line ``vars: x, y, z`` fixes the ring and the variable order.
Without the header the ring is the alphabetically sorted set of identifiers
seen anywhere in the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .poly import Polynomial

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    line: int
    col: int


def _tokenize(text: str, line_offset: int = 1) -> list[_Token]:
    text = text.replace("−", "-")  # unicode minus
    tokens: list[_Token] = []
    line = line_offset
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


def collect_variable_names(text: str) -> list[str]:
    """All identifiers occurring in the text, sorted."""
    text = text.replace("−", "-")
    return sorted({m.group() for m in re.finditer(r"[A-Za-z_][A-Za-z_0-9]*", text)})


class _Parser:
    def __init__(self, tokens: list[_Token], ring: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.line, tok.col)
        return self.advance()

    def parse_expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            sign = -1 if tok.text == "-" else 1
        result = self.parse_term() * sign
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                term = self.parse_term()
                result = result - term if tok.text == "-" else result + term
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.advance()
                result = result * self.parse_factor()
            elif tok.kind == "op" and tok.text == "/":
                self.advance()
                divisor = self.parse_factor()
                if not divisor.is_constant():
                    raise ParseError("division only by a nonzero constant", tok.line, tok.col)
                value = divisor.constant_value()
                if value == 0:
                    raise ParseError("division by zero", tok.line, tok.col)
                result = result / value
            elif tok.kind in ("int", "name") or (tok.kind == "op" and tok.text == "("):
                result = result * self.parse_factor()
            else:
                return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_primary()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            etok = self.peek()
            if etok.kind != "int":
                raise ParseError("exponent must be a non-negative integer", etok.line, etok.col)
            self.advance()
            return base ** int(etok.text)
        return base

    def parse_primary(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Polynomial.constant(self.ring, int(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text not in self.ring:
                raise ParseError(f"unknown variable {tok.text!r}", tok.line, tok.col)
            return Polynomial.variable(self.ring, tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return -self.parse_primary()
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.col)


def parse_polynomial(text: str, ring=None, line_offset: int = 1) -> Polynomial:
    """Parse one polynomial. Infers the ring alphabetically when not given."""
    if ring is None:
        ring = tuple(collect_variable_names(text))
    tokens = _tokenize(text, line_offset)
    parser = _Parser(tokens, tuple(ring))
    poly = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return poly


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_ideal_text(text: str) -> tuple[tuple[str, ...], list[Polynomial]]:
    """Parse an ideal block: optional ``vars:`` header, one generator per line."""
    lines = text.splitlines() or [text]
    ring = None
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        header = re.match(r"vars\s*:\s*(.*)$", stripped)
        if header is not None:
            if ring is not None:
                raise ParseError("duplicate vars: header", lineno, 1)
            if body:
                raise ParseError("vars: header must precede generators", lineno, 1)
            names = [v.strip() for v in header.group(1).split(",") if v.strip()]
            if not names:
                raise ParseError("empty vars: header", lineno, 1)
            for v in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                    raise ParseError(f"bad variable name {v!r}", lineno, 1)
            if len(set(names)) != len(names):
                raise ParseError("repeated variable in vars: header", lineno, 1)
            ring = tuple(names)
            continue
        body.append((lineno, stripped))
    if not body:
        raise ParseError("no generators found", len(lines), 1)
    if ring is None:
        ring = tuple(sorted(set().union(*(collect_variable_names(s) for _, s in body))))
    polys = [parse_polynomial(s, ring, line_offset=lineno) for lineno, s in body]
    return ring, polys
