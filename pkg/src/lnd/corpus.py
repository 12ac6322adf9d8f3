"""Corpus files: definitions plus check directives, and their canonical text.

Grammar (comments run from '#' to end of line):

    file  := item*
    item  := def | check
    def   := ("poly" | "unipoly") NAME "=" expr
           | "derivation" NAME "{" x -> expr ";" y -> expr ";" z -> expr "}"
           | "automorphism" NAME "{" triple "}"
           | "automorphism" NAME "=" compose "(" NAME "," NAME ")"
           | "planeaut" NAME "{" y -> expr ";" z -> expr "}"
           | "divisor" NAME "=" expr                      # in (y, z)
           | "context" NAME "{" P = expr ";" d = expr ";" deg_max = INT "}"
           | "law" NAME "{" mu = ints; rho1 = ints; rho2 = ints
                            [; nu = ints]; a' = expr "}"
    check := "check" NAME "(" [arg ("," arg)*] ")"
    arg   := [NAME "="] value
    value := "[" ... "]" | "n" "(" expr "," expr ")"
           | "gelem" "(" rat,* ";" expr ";" expr ")" | INT | expr | NAME

Parsing is total: every failure is a positioned ParseError.  Names must be
defined before use and never redefined.  Polynomial bodies are evaluated at
parse time in the ring their definition kind dictates; heavyweight objects
(contexts, laws) are validated structurally here and constructed by the
runner, so that their mathematical failures surface as report entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import XYZ, YZ, ZVAR, Poly, poly_to_str
from .automorphisms import Automorphism
from .derivations import Derivation
from .errors import ParseError
from .quotient_geometry import PlaneAut, plane_divisor
from .syntax import ExprParser, Token, eval_expr, expr_to_str, tokenize

# Directive vocabulary; unknown directives are positioned parse errors.
DIRECTIVES = (
    "exp_log_roundtrip",
    "one_parameter_group",
    "standard_decomposition_expect",
    "plinth_expect",
    "admissible_complement",
    "ad_identity",
    "n_group_homomorphism",
    "sat_instance",
    "irreducibility_criterion",
    "conjugation_formula",
    "divisor_symmetry_expect",
    "lift_H",
    "pres_lemma",
    "char_commutator",
    "nonfence_commutator",
    "fixed_scheme",
)

# Identifiers usable bare inside polynomial arguments.
_POLY_VARS = {"x", "y", "z", "P"}
_KEYWORDS = {"torus"}
# Value-literal heads and structural words; not definable as names.
_RESERVED = {"n", "gelem", "compose", "check", "poly", "unipoly", "derivation",
             "automorphism", "planeaut", "divisor", "context", "law"}

# Exponent guard for untrusted corpus text (multi-term bases only).
MAX_PARSED_POWER = 999


@dataclass(frozen=True)
class ContextSpec:
    P: Poly
    d: Poly
    deg_max: int


@dataclass(frozen=True)
class LawSpec:
    mu: tuple[int, ...]
    rho1: tuple[int, ...]
    rho2: tuple[int, ...]
    nu: tuple[int, ...] | None
    a_prime: Poly


@dataclass(frozen=True)
class Definition:
    kind: str  # poly | unipoly | derivation | automorphism | planeaut | divisor | context | law
    name: str
    value: object
    line: int


# -- directive argument values ---------------------------------------------


@dataclass(frozen=True)
class NameRef:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class ExprValue:
    ast: object
    line: int
    col: int


@dataclass(frozen=True)
class ListValue:
    items: tuple[ExprValue, ...]


@dataclass(frozen=True)
class NElemValue:
    h: ExprValue
    f: ExprValue


@dataclass(frozen=True)
class GElemValue:
    torus: tuple[Fraction, ...]
    h: ExprValue
    f: ExprValue


@dataclass(frozen=True)
class KeywordValue:
    word: str


@dataclass(frozen=True)
class Arg:
    key: str | None
    value: object


@dataclass(frozen=True)
class Directive:
    name: str
    args: tuple[Arg, ...]
    line: int
    col: int


@dataclass
class CorpusCase:
    definitions: list[Definition] = field(default_factory=list)
    directives: list[Directive] = field(default_factory=list)

    def lookup(self) -> dict[str, Definition]:
        return {d.name: d for d in self.definitions}


class _CorpusParser(ExprParser):
    def __init__(self, tokens: list[Token]):
        super().__init__(tokens)
        self.case = CorpusCase()
        self.names: set[str] = set()

    # helpers ---------------------------------------------------------------

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> None:
        tok = self.expect_ident(f"keyword {word!r}")
        if tok.text != word:
            raise ParseError(f"expected {word!r}, found {tok.text!r}", tok.line, tok.col)

    def fresh_name(self) -> Token:
        tok = self.expect_ident("a name")
        if tok.text in self.names:
            raise ParseError(f"redefinition of {tok.text!r}", tok.line, tok.col)
        if tok.text in _KEYWORDS or tok.text in _RESERVED or tok.text in DIRECTIVES:
            raise ParseError(f"{tok.text!r} is reserved", tok.line, tok.col)
        return tok

    def parse_expr_in(self, vars: tuple[str, ...]) -> Poly:
        node = self.parse_expr()
        return eval_expr(node, vars, max_power=MAX_PARSED_POWER)

    def parse_int(self, what: str = "an integer") -> int:
        sign = 1
        if self.at_sym("-"):
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "num":
            raise self.error(f"expected {what}")
        self.advance()
        return sign * int(tok.text)

    def parse_int_list(self) -> tuple[int, ...]:
        self.expect_sym("[")
        items = []
        if not self.at_sym("]"):
            items.append(self.parse_int())
            while self.at_sym(","):
                self.advance()
                items.append(self.parse_int())
        self.expect_sym("]")
        return tuple(items)

    # file structure ---------------------------------------------------------

    def parse_file(self) -> CorpusCase:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "ident":
                raise self.error("expected a definition or a check directive")
            handler = {
                "poly": self._def_poly,
                "unipoly": self._def_unipoly,
                "derivation": self._def_derivation,
                "automorphism": self._def_automorphism,
                "planeaut": self._def_planeaut,
                "divisor": self._def_divisor,
                "context": self._def_context,
                "law": self._def_law,
                "check": self._check,
            }.get(tok.text)
            if handler is None:
                raise ParseError(
                    f"unknown item {tok.text!r} (expected a definition or 'check')",
                    tok.line,
                    tok.col,
                )
            self.advance()
            handler(tok)
        return self.case

    def _add(self, kind: str, name_tok: Token, value) -> None:
        self.case.definitions.append(Definition(kind, name_tok.text, value, name_tok.line))
        self.names.add(name_tok.text)

    def _def_poly(self, tok: Token) -> None:
        name = self.fresh_name()
        self.expect_sym("=")
        self._add("poly", name, self.parse_expr_in(XYZ))

    def _def_unipoly(self, tok: Token) -> None:
        name = self.fresh_name()
        self.expect_sym("=")
        self._add("unipoly", name, self.parse_expr_in(ZVAR))

    def _triple(self, coords: tuple[str, ...], ring: tuple[str, ...]) -> list[Poly]:
        self.expect_sym("{")
        images = []
        for i, coord in enumerate(coords):
            self.expect_keyword(coord)
            self.expect_sym("->")
            images.append(self.parse_expr_in(ring))
            if i < len(coords) - 1:
                self.expect_sym(";")
        if self.at_sym(";"):
            self.advance()
        self.expect_sym("}")
        return images

    def _def_derivation(self, tok: Token) -> None:
        name = self.fresh_name()
        images = self._triple(XYZ, XYZ)
        self._add("derivation", name, Derivation(*images))

    def _def_automorphism(self, tok: Token) -> None:
        name = self.fresh_name()
        if self.at_sym("="):
            self.advance()
            self.expect_keyword("compose")
            self.expect_sym("(")
            left = self._defined_name("automorphism")
            self.expect_sym(",")
            right = self._defined_name("automorphism")
            self.expect_sym(")")
            self._add("automorphism", name, ("compose", left, right))
            return
        images = self._triple(XYZ, XYZ)
        self._add("automorphism", name, Automorphism(*images))

    def _defined_name(self, expected_kind: str) -> str:
        tok = self.expect_ident(f"a defined {expected_kind} name")
        if tok.text not in self.names:
            raise ParseError(f"undefined name {tok.text!r}", tok.line, tok.col)
        return tok.text

    def _def_planeaut(self, tok: Token) -> None:
        name = self.fresh_name()
        images = self._triple(("y", "z"), YZ)
        self._add("planeaut", name, PlaneAut(*images))

    def _def_divisor(self, tok: Token) -> None:
        name = self.fresh_name()
        self.expect_sym("=")
        poly = self.parse_expr_in(YZ)
        if poly.is_zero():
            raise self.error("divisor polynomial must be nonzero")
        self._add("divisor", name, plane_divisor(poly))

    def _def_context(self, tok: Token) -> None:
        name = self.fresh_name()
        self.expect_sym("{")
        fields: dict[str, object] = {}
        while not self.at_sym("}"):
            key = self.expect_ident("a context field (P, d, deg_max)")
            self.expect_sym("=")
            if key.text == "P":
                fields["P"] = self.parse_expr_in(XYZ)
            elif key.text == "d":
                fields["d"] = self.parse_expr_in(ZVAR)
            elif key.text == "deg_max":
                fields["deg_max"] = self.parse_int()
            else:
                raise ParseError(f"unknown context field {key.text!r}", key.line, key.col)
            if self.at_sym(";"):
                self.advance()
        self.expect_sym("}")
        if "P" not in fields:
            raise self.error("context needs a P field")
        spec = ContextSpec(
            fields["P"],
            fields.get("d", Poly.one(ZVAR)),
            fields.get("deg_max", 3),
        )
        self._add("context", name, spec)

    def _def_law(self, tok: Token) -> None:
        name = self.fresh_name()
        self.expect_sym("{")
        vectors: dict[str, tuple[int, ...]] = {}
        a_prime: Poly | None = None
        while not self.at_sym("}"):
            key = self.expect_ident("a law field (mu, rho1, rho2, nu, a')")
            self.expect_sym("=")
            if key.text in ("mu", "rho1", "rho2", "nu"):
                vectors[key.text] = self.parse_int_list()
            elif key.text == "a'":
                a_prime = self.parse_expr_in(ZVAR)
            else:
                raise ParseError(f"unknown law field {key.text!r}", key.line, key.col)
            if self.at_sym(";"):
                self.advance()
        self.expect_sym("}")
        missing = [k for k in ("mu", "rho1", "rho2") if k not in vectors]
        if missing or a_prime is None:
            raise self.error(
                "law needs mu, rho1, rho2 and a' fields"
            )
        ranks = {len(v) for v in vectors.values()}
        if len(ranks) != 1:
            raise self.error("law character vectors have mixed ranks")
        spec = LawSpec(
            vectors["mu"], vectors["rho1"], vectors["rho2"], vectors.get("nu"), a_prime
        )
        self._add("law", name, spec)

    # directives -------------------------------------------------------------

    def _check(self, tok: Token) -> None:
        name_tok = self.expect_ident("a directive name")
        if name_tok.text not in DIRECTIVES:
            raise ParseError(
                f"unknown directive {name_tok.text!r}", name_tok.line, name_tok.col
            )
        self.expect_sym("(")
        args: list[Arg] = []
        if not self.at_sym(")"):
            args.append(self._arg())
            while self.at_sym(","):
                self.advance()
                args.append(self._arg())
        self.expect_sym(")")
        self.case.directives.append(
            Directive(name_tok.text, tuple(args), name_tok.line, name_tok.col)
        )

    def _arg(self) -> Arg:
        key = None
        tok = self.peek()
        if (
            tok.kind == "ident"
            and self.tokens[self.pos + 1].kind == "sym"
            and self.tokens[self.pos + 1].text == "="
        ):
            key = tok.text
            self.advance()
            self.advance()
        return Arg(key, self._value())

    def _value(self):
        tok = self.peek()
        if self.at_sym("["):
            self.advance()
            items = []
            if not self.at_sym("]"):
                items.append(self._expr_value())
                while self.at_sym(","):
                    self.advance()
                    items.append(self._expr_value())
            self.expect_sym("]")
            return ListValue(tuple(items))
        if tok.kind == "ident" and tok.text == "n" and self._next_is("("):
            self.advance()
            self.expect_sym("(")
            h = self._expr_value()
            self.expect_sym(",")
            f = self._expr_value()
            self.expect_sym(")")
            return NElemValue(h, f)
        if tok.kind == "ident" and tok.text == "gelem" and self._next_is("("):
            self.advance()
            self.expect_sym("(")
            coords = [self._rational()]
            while self.at_sym(","):
                self.advance()
                coords.append(self._rational())
            self.expect_sym(";")
            h = self._expr_value()
            self.expect_sym(";")
            f = self._expr_value()
            self.expect_sym(")")
            return GElemValue(tuple(coords), h, f)
        if tok.kind == "ident" and tok.text in _KEYWORDS and not self._next_is("("):
            self.advance()
            return KeywordValue(tok.text)
        if tok.kind == "ident" and tok.text in self.names and not self._next_is("("):
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "sym" and nxt.text in ("+", "-", "*", "^", "/"):
                return self._expr_value()
            self.advance()
            return NameRef(tok.text, tok.line, tok.col)
        return self._expr_value()

    def _next_is(self, sym: str) -> bool:
        nxt = self.tokens[self.pos + 1]
        return nxt.kind == "sym" and nxt.text == sym

    def _expr_value(self) -> ExprValue:
        tok = self.peek()
        node = self.parse_expr()
        self._check_expr_names(node)
        return ExprValue(node, tok.line, tok.col)

    def _check_expr_names(self, node) -> None:
        from .syntax import BinOp, Neg, Pow, Var

        if isinstance(node, Var):
            if node.name not in _POLY_VARS and node.name not in self.names:
                raise ParseError(f"undefined name {node.name!r}", node.line, node.col)
        elif isinstance(node, BinOp):
            self._check_expr_names(node.left)
            self._check_expr_names(node.right)
        elif isinstance(node, (Neg,)):
            self._check_expr_names(node.operand)
        elif isinstance(node, Pow):
            self._check_expr_names(node.base)

    def _rational(self) -> Fraction:
        sign = 1
        if self.at_sym("-"):
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "num":
            raise self.error("expected a rational number")
        self.advance()
        numerator = int(tok.text)
        if self.at_sym("/"):
            self.advance()
            den_tok = self.peek()
            if den_tok.kind != "num" or int(den_tok.text) == 0:
                raise self.error("expected a nonzero integer denominator")
            self.advance()
            return Fraction(sign * numerator, int(den_tok.text))
        return Fraction(sign * numerator)


def parse(source: str) -> CorpusCase:
    """Parse a corpus file; raises ParseError with a (line, column) position."""
    parser = _CorpusParser(tokenize(source))
    return parser.parse_file()


# -- canonical printing -------------------------------------------------------


def _value_text(value) -> str:
    if isinstance(value, NameRef):
        return value.name
    if isinstance(value, ExprValue):
        return expr_to_str(value.ast)
    if isinstance(value, ListValue):
        return "[" + ", ".join(_value_text(v) for v in value.items) + "]"
    if isinstance(value, NElemValue):
        return f"n({_value_text(value.h)}, {_value_text(value.f)})"
    if isinstance(value, GElemValue):
        coords = ", ".join(str(c) for c in value.torus)
        return f"gelem({coords}; {_value_text(value.h)}; {_value_text(value.f)})"
    if isinstance(value, KeywordValue):
        return value.word
    raise TypeError(f"unprintable value {value!r}")


def directive_text(d: Directive) -> str:
    args = ", ".join(
        f"{a.key} = {_value_text(a.value)}" if a.key else _value_text(a.value)
        for a in d.args
    )
    return f"{d.name}({args})"


def to_text(case: CorpusCase) -> str:
    """Canonical corpus text; parse(to_text(parse(s))) round-trips."""
    lines: list[str] = []
    for definition in case.definitions:
        kind, name, value = definition.kind, definition.name, definition.value
        if kind in ("poly", "unipoly"):
            lines.append(f"{kind} {name} = {poly_to_str(value)}")
        elif kind == "derivation":
            lines.append(
                f"derivation {name} {{ x -> {value.image_x}; "
                f"y -> {value.image_y}; z -> {value.image_z} }}"
            )
        elif kind == "automorphism":
            if isinstance(value, tuple):
                lines.append(f"automorphism {name} = compose({value[1]}, {value[2]})")
            else:
                lines.append(
                    f"automorphism {name} {{ x -> {value.pullback_x}; "
                    f"y -> {value.pullback_y}; z -> {value.pullback_z} }}"
                )
        elif kind == "planeaut":
            lines.append(
                f"planeaut {name} {{ y -> {value.pullback_y}; z -> {value.pullback_z} }}"
            )
        elif kind == "divisor":
            lines.append(f"divisor {name} = {poly_to_str(value.a)}")
        elif kind == "context":
            lines.append(
                f"context {name} {{ P = {poly_to_str(value.P)}; "
                f"d = {poly_to_str(value.d)}; deg_max = {value.deg_max} }}"
            )
        elif kind == "law":
            parts = [
                f"mu = [{', '.join(map(str, value.mu))}]",
                f"rho1 = [{', '.join(map(str, value.rho1))}]",
                f"rho2 = [{', '.join(map(str, value.rho2))}]",
            ]
            if value.nu is not None:
                parts.append(f"nu = [{', '.join(map(str, value.nu))}]")
            parts.append(f"a' = {poly_to_str(value.a_prime)}")
            lines.append(f"law {name} {{ {'; '.join(parts)} }}")
        else:  # pragma: no cover
            raise TypeError(f"unprintable definition kind {kind!r}")
    for directive in case.directives:
        lines.append(f"check {directive_text(directive)}")
    return "\n".join(lines) + "\n"
