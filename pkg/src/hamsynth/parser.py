"""Text grammar for operator expressions.

::

    expr   := term (('+' | '-') term)*
    term   := [coeff '*'] factor+ ['+' 'h.c.']
    coeff  := float | '(' float ('+' | '-') float 'i' ')'
    factor := ('I' | 'X' | 'Y' | 'Z' | 'n' | 'o' | 's' | 'sd') nonneg-int

Factors are whitespace separated; ``+ h.c.`` marks the term hermitized.
``print -> parse`` round-trips to an equal expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import HamiltonianExpr, Symbol, Term, merge_terms

__all__ = ["ParseError", "parse_expr", "format_expr", "format_term"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<hc>h\.c\.)
    | (?P<factor>(?:sd|[IXYZnos])\d+)
    | (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
    | (?P<op>[+\-*()i])
    """,
    re.VERBOSE,
)

_FACTOR_RE = re.compile(r"(sd|[IXYZnos])(\d+)")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(_Token(kind if kind != "op" else chunk, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], text_len_line: tuple[int, int]):
        self.tokens = tokens
        self.pos = 0
        self.end = text_len_line

    def peek(self, offset: int = 0) -> _Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", *self.end)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, got {tok.text!r}", tok.line, tok.column)
        return tok

    def parse(self) -> list[Term]:
        lead = self.peek()
        negate_first = False
        if lead is not None and lead.kind in ("+", "-"):
            self.next()
            negate_first = lead.kind == "-"
        terms = [self.term(negate=negate_first)]
        while self.peek() is not None:
            tok = self.next()
            if tok.kind == "+":
                terms.append(self.term(negate=False))
            elif tok.kind == "-":
                terms.append(self.term(negate=True))
            else:
                raise ParseError(f"expected '+' or '-', got {tok.text!r}", tok.line, tok.column)
        return terms

    def term(self, negate: bool) -> Term:
        start = self.peek()
        if start is None:
            raise ParseError("expected a term", *self.end)
        coefficient = self.coefficient()
        factors: dict[int, Symbol] = {}
        saw_factor = False
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "factor":
                break
            self.next()
            m = _FACTOR_RE.fullmatch(tok.text)
            symbol = Symbol(m.group(1))
            index = int(m.group(2))
            if index in factors:
                raise ParseError(f"duplicate qubit index {index}", tok.line, tok.column)
            factors[index] = symbol
            saw_factor = True
        if not saw_factor:
            tok = self.peek()
            where = (tok.line, tok.column) if tok else self.end
            raise ParseError("expected at least one factor", *where)
        hermitized = False
        if (
            self.peek() is not None
            and self.peek().kind == "+"
            and self.peek(1) is not None
            and self.peek(1).kind == "hc"
        ):
            self.next()
            self.next()
            hermitized = True
        if negate:
            coefficient = -coefficient
        try:
            return Term(coefficient, factors, hermitized)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.column) from None

    def coefficient(self) -> complex:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a coefficient or factor", *self.end)
        if tok.kind == "number":
            self.next()
            self.expect("*")
            return complex(float(tok.text))
        if tok.kind == "(":
            self.next()
            real = float(self.expect("number").text)
            sign_tok = self.next()
            if sign_tok.kind not in ("+", "-"):
                raise ParseError("expected '+' or '-' in complex coefficient",
                                 sign_tok.line, sign_tok.column)
            imag = float(self.expect("number").text)
            self.expect("i")
            self.expect(")")
            self.expect("*")
            if sign_tok.kind == "-":
                imag = -imag
            return complex(real, imag)
        return complex(1.0)


def parse_expr(text: str, num_qubits: int | None = None) -> HamiltonianExpr:
    """Parse an expression; like terms are merged, indices fix the register."""
    stripped = text.rstrip("\n")
    lines = stripped.splitlines() or [""]
    end = (len(lines), len(lines[-1]) + 1)
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 1, 1)
    terms = merge_terms(_Parser(tokens, end).parse())
    span = max((t.max_index for t in terms), default=-1) + 1
    n = num_qubits if num_qubits is not None else max(span, 1)
    if span > n:
        raise ParseError(f"expression needs {span} qubits, register has {n}", 1, 1)
    return HamiltonianExpr(n, tuple(terms))


def _format_float(x: float) -> str:
    return repr(float(x))


def _format_coefficient(z: complex) -> str:
    if z.imag == 0:
        return _format_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"({_format_float(z.real)}{sign}{_format_float(abs(z.imag))}i)"


def format_term(term: Term) -> str:
    factors = " ".join(
        f"{s.value}{q}" for q, s in sorted(term.factors.items())
    ) or "I0"
    out = f"{_format_coefficient(term.coefficient)} * {factors}"
    if term.hermitized:
        out += " + h.c."
    return out


def format_expr(expr: HamiltonianExpr) -> str:
    """Canonical text form; reparsing yields an equal expression."""
    parts = []
    for i, term in enumerate(merge_terms(expr.terms)):
        z = term.coefficient
        negate = z.real < 0 or (z.real == 0 and z.imag < 0)
        shown = -z if negate else z
        rendered = format_term(Term(shown, term.factors, term.hermitized, check=False))
        if i == 0:
            parts.append(("- " if negate else "") + rendered)
        else:
            parts.append(("- " if negate else "+ ") + rendered)
    return " ".join(parts) if parts else "0.0 * I0"
