"""Tokenizer and expression grammar shared by the library and the CLI.

Polynomial expressions:

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | primary ('^' NAT)*
    primary:= NAT ('/' NAT)? | IDENT | '(' expr ')'

Integer and rational literals (`-3`, `5/7`), explicit `*`, `^` with a
non-negative integer exponent.  `#` starts a comment running to end of line.
Every diagnostic carries a (line, column) position, 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import Poly
from .errors import ParseError

_SYMBOLS = ("->", "{", "}", "(", ")", "[", "]", ",", ";", "=", "+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "num" | "sym" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            while i < n and text[i] == "'":
                i += 1
            tokens.append(Token("ident", text[start:i], line, col))
            col += i - start
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("num", text[start:i], line, col))
            col += i - start
            continue
        if text.startswith("->", i):
            tokens.append(Token("sym", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "{}()[],;=+-*/^":
            tokens.append(Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- expression AST ----------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    line: int
    col: int


Expr = object


class ExprParser:
    """Recursive-descent parser over a token list; shared cursor style."""

    def __init__(self, tokens: list[Token], pos: int = 0):
        self.tokens = tokens
        self.pos = pos

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect_sym(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def at_sym(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    # grammar ---------------------------------------------------------------

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.at_sym("+") or self.at_sym("-"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.at_sym("*"):
            self.advance()
            node = BinOp("*", node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        if self.at_sym("-"):
            self.advance()
            return Neg(self.parse_factor())
        node = self.parse_primary()
        while self.at_sym("^"):
            caret = self.advance()
            tok = self.peek()
            if tok.kind != "num":
                raise self.error("expected a non-negative integer exponent after '^'")
            self.advance()
            node = Pow(node, int(tok.text), caret.line, caret.col)
        return node

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            numerator = int(tok.text)
            if self.at_sym("/"):
                self.advance()
                denom_tok = self.peek()
                if denom_tok.kind != "num":
                    raise self.error("expected an integer denominator after '/'")
                self.advance()
                if int(denom_tok.text) == 0:
                    raise ParseError("zero denominator", denom_tok.line, denom_tok.col)
                return Num(Fraction(numerator, int(denom_tok.text)))
            return Num(Fraction(numerator))
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text, tok.line, tok.col)
        if self.at_sym("("):
            self.advance()
            node = self.parse_expr()
            self.expect_sym(")")
            return node
        raise self.error(f"expected an expression, found {tok.text or 'end of input'!r}")


def eval_expr(node: Expr, vars: tuple[str, ...], *, max_power: int | None = None) -> Poly:
    """Evaluate an expression AST into the given ring.

    `max_power` guards against exponent bombs on multi-term bases when
    evaluating untrusted input; the core library itself has no such limit.
    """
    if isinstance(node, Num):
        return Poly.const(vars, node.value)
    if isinstance(node, Var):
        if node.name not in vars:
            raise ParseError(
                f"unknown variable {node.name!r} (ring has {', '.join(vars)})",
                node.line,
                node.col,
            )
        return Poly.variable(vars, node.name)
    if isinstance(node, Neg):
        return -eval_expr(node.operand, vars, max_power=max_power)
    if isinstance(node, BinOp):
        left = eval_expr(node.left, vars, max_power=max_power)
        right = eval_expr(node.right, vars, max_power=max_power)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return left * right
    if isinstance(node, Pow):
        base = eval_expr(node.base, vars, max_power=max_power)
        if (
            max_power is not None
            and node.exponent > max_power
            and len(base.terms) > 1
        ):
            raise ParseError(
                f"exponent {node.exponent} too large for a multi-term base",
                node.line,
                node.col,
            )
        return base**node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def expr_to_str(node: Expr, parent: str = "") -> str:
    """Canonical text for an expression AST (normalized spacing)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = expr_to_str(node.operand, "neg")
        text = f"-{inner}"
        return f"({text})" if parent in ("*", "^", "neg") else text
    if isinstance(node, BinOp):
        left = expr_to_str(node.left, node.op)
        right = expr_to_str(node.right, node.op + "r")
        if node.op == "*":
            text = f"{left}*{right}"
            needs = parent in ("^",)
        else:
            text = f"{left} {node.op} {right}"
            needs = parent in ("*", "^", "neg", "+r", "-r")
        return f"({text})" if needs else text
    if isinstance(node, Pow):
        base = expr_to_str(node.base, "^")
        if isinstance(node.base, (BinOp, Neg, Pow)):
            base = f"({expr_to_str(node.base)})"
        return f"{base}^{node.exponent}"
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(text: str, vars: tuple[str, ...]) -> Poly:
    """Parse a standalone polynomial in the given ring."""
    parser = ExprParser(tokenize(text))
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.col)
    return eval_expr(node, vars)
