"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from monomials to nonzero Fraction coefficients,
together with an ordered tuple of variable names.  The monomial for a ring
with variables (x, y, z) is an exponent tuple (ex, ey, ez).

  x*z + y^2   over ("x", "y", "z")   ->   {(1, 0, 1): 1, (0, 2, 0): 1}

Everything is exact: coefficients are `fractions.Fraction`, no rounding ever
occurs and equality of polynomials is equality of canonical term maps (no
zero coefficient is ever stored).  All values are immutable once built, so
they can be shared freely.

The canonical term order is graded lexicographic with the earlier variable
bigger (x > y > z for the ambient ring); printing emits terms in descending
graded-lex order, so string output is deterministic and parse/print
round-trips byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MissingImageError, NonDivisibleError, RingMismatchError

# Exact rational scalar type; always stored in lowest terms with a positive
# denominator (fractions.Fraction guarantees both).
Rational = Fraction

# Coefficients are stored as plain int whenever the value is integral (int
# and Fraction compare and hash equal for equal values, so this is purely a
# speed representation; no observable behavior depends on it).
Coef = int | Fraction

Monomial = tuple[int, ...]

# Standard rings used throughout the higher modules.
XYZ = ("x", "y", "z")
ZP = ("z", "P")
YZ = ("y", "z")
ZVAR = ("z",)


def frac(value) -> Fraction:
    """Coerce an int/Fraction/str into an exact Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


def _intern(value) -> Coef:
    """Normalize integral Fractions to int (faster arithmetic)."""
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    f = Fraction(value)
    return f.numerator if f.denominator == 1 else f


def exact_div(a: Coef, b: Coef) -> Coef:
    """a / b as an exact rational (int when integral)."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return _intern(frac(a) / frac(b))


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded-lex order (earlier variables are bigger)."""
    return (sum(mono), mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: tuple[str, ...], terms: Mapping[Monomial, Coef]):
        canonical: dict[Monomial, Coef] = {}
        for mono, coeff in terms.items():
            c = _intern(coeff)
            if c:
                canonical[tuple(mono)] = c
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "terms", canonical)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: tuple[str, ...]) -> "Poly":
        return cls(vars, {})

    @classmethod
    def one(cls, vars: tuple[str, ...]) -> "Poly":
        return cls.const(vars, 1)

    @classmethod
    def const(cls, vars: tuple[str, ...], value) -> "Poly":
        c = frac(value)
        if not c:
            return cls.zero(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: tuple[str, ...], name: str) -> "Poly":
        if name not in vars:
            raise RingMismatchError(f"variable {name!r} not in ring {vars}")
        mono = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {mono: Fraction(1)})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Coef:
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Max total degree of the support; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self._var_index(var)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def variables_present(self) -> set[str]:
        present: set[str] = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    present.add(self.vars[i])
        return present

    def coefficient(self, mono: Monomial) -> Coef:
        return self.terms.get(tuple(mono), 0)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (the canonical print order)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> Coef:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Poly":
        """Scale so the graded-lex leading coefficient equals 1."""
        if self.is_zero():
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self * (Fraction(1) / frac(lc))

    def _var_index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise RingMismatchError(f"variable {var!r} not in ring {self.vars}") from None

    def _check_ring(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise RingMismatchError(f"ring mismatch: {self.vars} vs {other.vars}")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.terms)
        get = out.get
        for mono, coeff in other.terms.items():
            s = get(mono, 0) + coeff
            if s:
                out[mono] = s
            else:
                del out[mono]
        return _raw(self.vars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.terms)
        get = out.get
        for mono, coeff in other.terms.items():
            s = get(mono, 0) - coeff
            if s:
                out[mono] = s
            else:
                del out[mono]
        return _raw(self.vars, out)

    def __neg__(self) -> "Poly":
        return _raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = _intern(other)
            if not c:
                return Poly.zero(self.vars)
            return _raw(self.vars, {m: k * c for m, k in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, Coef] = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                mono = tuple(i + j for i, j in zip(ma, mb))
                s = get(mono, 0) + ca * cb
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return _raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative polynomial exponent")
        result = Poly.one(self.vars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparisons -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and structure -------------------------------------------

    def partial_derivative(self, var: str) -> "Poly":
        i = self._var_index(var)
        out: dict[Monomial, Coef] = {}
        for mono, coeff in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            lowered = mono[:i] + (e - 1,) + mono[i + 1 :]
            out[lowered] = coeff * e
        return _raw(self.vars, out)

    def integrate_in(self, var: str) -> "Poly":
        """Formal antiderivative with zero constant term in `var`."""
        i = self._var_index(var)
        out: dict[Monomial, Coef] = {}
        for mono, coeff in self.terms.items():
            e = mono[i]
            raised = mono[:i] + (e + 1,) + mono[i + 1 :]
            out[raised] = exact_div(coeff, e + 1)
        return _raw(self.vars, out)

    def substitute(self, images: Mapping[str, "Poly"]) -> "Poly":
        return substitute(self, images)

    def to_ring(self, vars: tuple[str, ...]) -> "Poly":
        """Re-express over another variable list, matching by name.

        Every variable that actually occurs must exist in the target ring.
        """
        vars = tuple(vars)
        if vars == self.vars:
            return self
        positions: list[int | None] = [
            vars.index(v) if v in vars else None for v in self.vars
        ]
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            target = [0] * len(vars)
            for i, e in enumerate(mono):
                if not e:
                    continue
                j = positions[i]
                if j is None:
                    raise RingMismatchError(
                        f"cannot move {self.vars[i]!r}-term into ring {vars}"
                    )
                target[j] = e
            out[tuple(target)] = coeff
        return Poly(vars, out)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"Poly({'+'.join(self.vars)}: {poly_to_str(self)})"


def _raw(vars: tuple[str, ...], terms: dict[Monomial, Fraction]) -> Poly:
    """Build a Poly from terms already known to be canonical."""
    p = Poly.__new__(Poly)
    object.__setattr__(p, "vars", vars)
    object.__setattr__(p, "terms", terms)
    object.__setattr__(p, "_hash", None)
    return p


class _Substitution:
    """Reusable substitution context: shares power and prefix-product caches
    across several polynomials evaluated at the same images."""

    def __init__(self, images: Mapping[str, Poly]):
        self.images = dict(images)
        target: tuple[str, ...] | None = None
        for img in self.images.values():
            if target is None:
                target = img.vars
            elif img.vars != target:
                raise RingMismatchError("substitution images live in different rings")
        self.target = target
        self.powers: dict[str, list[Poly]] = {v: [] for v in self.images}
        self.prefix: dict[tuple, Poly] = {}

    def _power(self, v: str, e: int) -> Poly:
        cache = self.powers[v]
        if not cache:
            cache.append(Poly.one(self.target))
        while len(cache) <= e:
            cache.append(cache[-1] * self.images[v])
        return cache[e]

    def apply(self, p: Poly) -> Poly:
        occurring = p.variables_present()
        missing = sorted(occurring - set(self.images))
        if missing:
            raise MissingImageError(
                f"no image for variable(s): {', '.join(missing)}"
            )
        if self.target is None or not occurring:
            if self.target is None:
                return p
            zero_mono = (0,) * len(self.target)
            total = sum(p.terms.values())
            return Poly(self.target, {zero_mono: total} if total else {})
        acc: dict[Monomial, Coef] = {}
        get = acc.get
        names = p.vars
        for mono, coeff in p.terms.items():
            prod = self._prefix_product(names, mono)
            for m2, c2 in prod.terms.items():
                s = get(m2, 0) + coeff * c2
                if s:
                    acc[m2] = s
                else:
                    del acc[m2]
        return _raw(self.target, acc)

    def _prefix_product(self, names: tuple[str, ...], mono: Monomial) -> Poly:
        # Fold left to right, memoizing on the partial exponent tuple so
        # terms sharing a prefix reuse its product.
        key = ()
        prod = Poly.one(self.target)
        for i, e in enumerate(mono):
            if not e:
                continue
            key = key + (i, e)
            cached = self.prefix.get(key)
            if cached is None:
                cached = prod * self._power(names[i], e)
                self.prefix[key] = cached
            prod = cached
        return prod


def substitute(p: Poly, images: Mapping[str, Poly]) -> Poly:
    """Evaluate `p` at the given variable images (a ring homomorphism).

    Every variable occurring in `p` must have an image; all images must share
    one target ring, which becomes the ring of the result.
    """
    return _Substitution(images).apply(p)


def substitute_many(polys: Iterable[Poly], images: Mapping[str, Poly]) -> list[Poly]:
    """Substitute several polynomials at the same images, sharing caches."""
    ctx = _Substitution(images)
    return [ctx.apply(p) for p in polys]


def partial_derivative(p: Poly, var: str) -> Poly:
    return p.partial_derivative(var)


def integrate_in(p: Poly, var: str) -> Poly:
    return p.integrate_in(var)


def divide_exact(p: Poly, q: Poly) -> Poly:
    """Return r with p = q*r, or raise NonDivisibleError.

    Non-divisibility is a meaningful signal for the callers (membership
    tests), so it gets its own exception rather than returning a remainder.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p._check_ring(q)
    if p.is_zero():
        return Poly.zero(p.vars)
    q_lead = q.leading_monomial()
    q_lc = q.terms[q_lead]
    remainder = p
    quotient: dict[Monomial, Coef] = {}
    while not remainder.is_zero():
        lead = remainder.leading_monomial()
        diff = tuple(a - b for a, b in zip(lead, q_lead))
        if any(d < 0 for d in diff):
            raise NonDivisibleError(
                f"leading term {_mono_str(p.vars, lead)} not divisible by "
                f"{_mono_str(p.vars, q_lead)}"
            )
        coeff = exact_div(remainder.terms[lead], q_lc)
        quotient[diff] = coeff
        remainder = remainder - _raw(p.vars, {diff: coeff}) * q
    return Poly(p.vars, quotient)


def divides(q: Poly, p: Poly) -> bool:
    """True iff q divides p exactly (q nonzero)."""
    try:
        divide_exact(p, q)
        return True
    except NonDivisibleError:
        return False


# -- greatest common divisors ---------------------------------------------
#
# Multivariate gcd by recursive content / primitive-part reduction: pick the
# highest-priority variable present, strip contents (gcds in one fewer
# variable), then run a pseudo-remainder sequence on the primitive parts,
# keeping remainders primitive at every step.  Output is normalized so the
# graded-lex leading coefficient is 1, and verified to divide both inputs.


def _univ_split(p: Poly, i: int) -> dict[int, Poly]:
    """View p as univariate in variable index i; coefficients keep the ring."""
    out: dict[int, dict[Monomial, Coef]] = {}
    for mono, coeff in p.terms.items():
        e = mono[i]
        rest = mono[:i] + (0,) + mono[i + 1 :]
        out.setdefault(e, {})[rest] = coeff
    return {e: _raw(p.vars, terms) for e, terms in out.items()}


def _shift(p: Poly, i: int, e: int) -> Poly:
    """Multiply by (variable i)^e."""
    if e == 0 or p.is_zero():
        return p
    return _raw(
        p.vars, {m[:i] + (m[i] + e,) + m[i + 1 :]: c for m, c in p.terms.items()}
    )


def _lc_in(p: Poly, i: int) -> tuple[int, Poly]:
    """(degree, leading coefficient) of p viewed in variable index i."""
    split = _univ_split(p, i)
    d = max(split)
    return d, split[d]


def _prem(a: Poly, b: Poly, i: int) -> Poly:
    """Pseudo-remainder of a by b in variable index i (lc(b)^k * a mod b)."""
    db, lb = _lc_in(b, i)
    r = a
    while not r.is_zero():
        dr, lr = _lc_in(r, i)
        if dr < db:
            break
        r = lb * r - _shift(lr, i, dr - db) * b
    return r


def _content_in(p: Poly, i: int) -> Poly:
    coeffs = list(_univ_split(p, i).values())
    return gcd_many(coeffs)


def gcd_multivariate(p: Poly, q: Poly) -> Poly:
    """A greatest common divisor, monic in graded-lex leading coefficient."""
    p._check_ring(q)
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    present = [
        i
        for i in range(len(p.vars))
        if p.degree_in(p.vars[i]) > 0 or q.degree_in(p.vars[i]) > 0
    ]
    if not present:
        return Poly.one(p.vars)
    i = present[0]
    cont_p = _content_in(p, i)
    cont_q = _content_in(q, i)
    pp_p = divide_exact(p, cont_p)
    pp_q = divide_exact(q, cont_q)
    cont = gcd_multivariate(cont_p, cont_q)
    if pp_p.degree_in(p.vars[i]) < pp_q.degree_in(p.vars[i]):
        pp_p, pp_q = pp_q, pp_p
    a, b = pp_p, pp_q
    while not b.is_zero():
        r = _prem(a, b, i)
        if not r.is_zero():
            r = divide_exact(r, _content_in(r, i))
        a, b = b, r
    return (cont * a).monic()


def gcd_many(polys: Iterable[Poly]) -> Poly:
    """Fold gcd over an iterable of polynomials (ignoring zeros)."""
    acc: Poly | None = None
    ring: tuple[str, ...] | None = None
    for p in polys:
        ring = p.vars
        if p.is_zero():
            continue
        acc = p.monic() if acc is None else gcd_multivariate(acc, p)
        if acc.is_constant():
            return Poly.one(acc.vars)
    if acc is None:
        if ring is None:
            raise ValueError("gcd of an empty collection")
        raise ValueError("gcd(0, ..., 0) is undefined")
    return acc


# -- printing ----------------------------------------------------------------


def _mono_str(vars: tuple[str, ...], mono: Monomial) -> str:
    parts = []
    for name, e in zip(vars, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def poly_to_str(p: Poly) -> str:
    """Deterministic text form: descending graded-lex, canonical spacing.

    The output is re-parseable by the shared expression grammar and
    round-trips byte for byte.
    """
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for idx, (mono, coeff) in enumerate(p.sorted_terms()):
        negative = coeff < 0
        mag = -coeff if negative else coeff
        vars_part = _mono_str(p.vars, mono)
        if vars_part == "1":
            body = str(mag)
        elif mag == 1:
            body = vars_part
        else:
            body = f"{mag}*{vars_part}"
        if idx == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def arithmetic(p: Poly, q: Poly, op: str) -> Poly:
    """Dispatch helper mirroring the basic ring operations by name."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    raise ValueError(f"unknown operation {op!r}")


def is_univariate_in(p: Poly, var: str) -> bool:
    """True iff every monomial of p uses only `var`."""
    i = p._var_index(var)
    return all(
        all(e == 0 for j, e in enumerate(m) if j != i) for m in p.terms
    )
