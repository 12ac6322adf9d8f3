"""The plinth family over A = Q[z]: Jacobian-type derivations, admissible
complements, and the group N of pairs (h, f) with the shifted product law.

A context packages a kernel generator P in x, y with z-coefficients together
with everything derived from it: the derivation D' that kills z and P, a
plinth element Q with D'(Q) = a', the complement E that kills z and Q, the
optional modification factor d, and the resolved composition convention.

NElem pairs (h, f) live in the abstract kernel ring Q[z, P]; h uses z only.
They model both group elements h.e o f.u' and derivations h E + f D'.  The
product law is

    (h, f) . (hb, fb) = (h + hb, f(P - hb a') + fb)

and the map (h, f) -> h.e o f.u' is a group isomorphism onto N under the
composition convention recorded in the context (resolved empirically at
construction, since the source calculus never fixes the order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    XYZ,
    ZP,
    Poly,
    divide_exact,
    gcd_many,
    gcd_multivariate,
    is_univariate_in,
    substitute,
)
from .automorphisms import (
    Automorphism,
    commutes,
    compose,
    express_in_kernel,
    pullback,
)
from .derivations import (
    Derivation,
    apply,
    apply_exp,
    compose_exp_word,
    delta,
    exponential,
    is_irreducible,
    is_locally_nilpotent,
    lie_bracket,
    plinth_search,
    scale,
    scale_poly,
)
from .errors import (
    ContextError,
    NonDivisibleError,
    NotInNError,
    RingMismatchError,
    SearchExhaustedError,
    VerificationError,
)

# Composition conventions for realizing (h, f) as an automorphism.
E_OUTER = "e-outer"  # compose(h.e, f.u'): the u'-modification acts first
U_OUTER = "u-outer"  # compose(f.u', h.e): the complement acts first


@dataclass(frozen=True)
class NElem:
    """Pair (h, f) in the kernel ring Q[z, P]; h must use z alone."""

    h: Poly
    f: Poly

    def __post_init__(self):
        if self.h.vars != ZP or self.f.vars != ZP:
            raise RingMismatchError("NElem components live in the (z, P) ring")
        if not is_univariate_in(self.h, "z"):
            raise ValueError(f"h component must lie in Q[z]: {self.h}")

    def is_identity(self) -> bool:
        return self.h.is_zero() and self.f.is_zero()

    def __str__(self) -> str:
        return f"n({self.h}, {self.f})"


def n_elem(h, f) -> NElem:
    """Coerce (h, f) given as Polys in compatible rings or scalars."""
    if not isinstance(h, Poly):
        h = Poly.const(ZP, h)
    if not isinstance(f, Poly):
        f = Poly.const(ZP, f)
    return NElem(h.to_ring(ZP), f.to_ring(ZP))


def n_identity() -> NElem:
    return NElem(Poly.zero(ZP), Poly.zero(ZP))


@dataclass(frozen=True)
class DeltaContext:
    """Validated plinth-family data; immutable, including the convention."""

    P: Poly  # in (x, y, z)
    d: Poly  # in (z,): stored over XYZ with z-support only
    Q: Poly
    a_prime: Poly
    a: Poly
    D_prime: Derivation
    E: Derivation
    D: Derivation
    u_prime: Automorphism
    e: Automorphism
    u: Automorphism
    convention: str
    deg_max: int

    @property
    def kernel_gens(self) -> list[Poly]:
        return [Poly.variable(XYZ, "z"), self.P]

    def a_prime_zp(self) -> Poly:
        return self.a_prime.to_ring(ZP)


def _realization_word(
    e_der: Derivation, d_prime: Derivation, h_amb: Poly, f_amb: Poly, conv: str
) -> list[Derivation]:
    w_h = scale_poly(h_amb, e_der)
    w_f = scale_poly(f_amb, d_prime)
    return [w_h, w_f] if conv == E_OUTER else [w_f, w_h]


def _resolve_convention(e_der, d_prime, a_prime_zp, p_poly) -> str:
    """Try both realization orders against the product law on fixed pairs."""
    z = Poly.variable(ZP, "z")
    pv = Poly.variable(ZP, "P")
    pairs = [
        (n_elem(Poly.one(ZP), pv), n_elem(Poly.one(ZP), Poly.zero(ZP))),
        (n_elem(z, pv * pv), n_elem(z * z, pv + z)),
    ]

    def realize(n: NElem, conv: str) -> Automorphism:
        h_amb = n.h.to_ring(XYZ)
        f_amb = substitute(n.f, {"z": Poly.variable(XYZ, "z"), "P": p_poly})
        return compose_exp_word(_realization_word(e_der, d_prime, h_amb, f_amb, conv))

    def product(a: NElem, b: NElem) -> NElem:
        shifted = substitute(
            a.f, {"z": z, "P": pv - b.h * a_prime_zp}
        )
        return NElem(a.h + b.h, shifted + b.f)

    for conv in (E_OUTER, U_OUTER):
        if all(
            realize(product(a, b), conv) == compose(realize(a, conv), realize(b, conv))
            for a, b in pairs
        ):
            return conv
    raise ContextError("no composition convention satisfies the product law")


def make_context(P: Poly, d: Poly | None = None, deg_max: int = 4) -> DeltaContext:
    """Build and verify a context for the kernel generator P (and factor d).

    Runs the plinth search with kernel generators [z, P], forms the
    complement from its output, and checks every structural invariant; any
    failure raises ContextError with the offending fact.
    """
    P = P.to_ring(XYZ)
    if d is None:
        d = Poly.one(XYZ)
    d = d.to_ring(XYZ)
    if not is_univariate_in(d, "z") or d.is_zero():
        raise ContextError(f"modification factor must be a nonzero element of Q[z]: {d}")
    if max(P.degree_in("x"), P.degree_in("y")) < 1:
        raise ContextError("P must have positive degree in (x, y)")
    d_prime = delta(P)
    if not is_locally_nilpotent(d_prime).is_nilpotent:
        raise ContextError("no nilpotency certificate for the derivation of P")
    z_poly = Poly.variable(XYZ, "z")
    q_poly, a_prime = plinth_search(d_prime, [z_poly, P], deg_max)
    if not is_univariate_in(a_prime, "z"):
        raise ContextError(f"plinth generator is not in Q[z]: {a_prime}")
    e_der = delta(q_poly)
    checks = [
        (apply(d_prime, P).is_zero(), "D'(P) = 0"),
        (apply(d_prime, z_poly).is_zero(), "D'(z) = 0"),
        (not a_prime.is_zero(), "a' != 0"),
        (apply(d_prime, q_poly) == a_prime, "D'(Q) = a'"),
        (apply(e_der, P) == -a_prime, "E(P) = -a'"),
        (lie_bracket(d_prime, e_der).is_zero(), "[D', E] = 0"),
        (is_irreducible(d_prime), "D' irreducible"),
        (is_irreducible(e_der), "E irreducible"),
        (is_locally_nilpotent(e_der).is_nilpotent, "E locally nilpotent"),
    ]
    for ok, fact in checks:
        if not ok:
            raise ContextError(f"context invariant failed: {fact}")
    a = d * a_prime
    d_full = Derivation(*(d * img for img in d_prime.images))
    u_prime = exponential(d_prime)
    e_aut = exponential(e_der)
    u = exponential(d_full)
    convention = _resolve_convention(e_der, d_prime, a_prime.to_ring(ZP), P)
    return DeltaContext(
        P=P,
        d=d,
        Q=q_poly,
        a_prime=a_prime,
        a=a,
        D_prime=d_prime,
        E=e_der,
        D=d_full,
        u_prime=u_prime,
        e=e_aut,
        u=u,
        convention=convention,
        deg_max=deg_max,
    )


# -- moving between the abstract kernel ring and the ambient ring -------------


def expand_kernel_poly(ctx: DeltaContext, f: Poly) -> Poly:
    """Substitute the actual z and P for the kernel variables."""
    if f.vars != ZP:
        f = f.to_ring(ZP)
    if f.is_zero():
        return Poly.zero(XYZ)
    return substitute(f, {"z": Poly.variable(XYZ, "z"), "P": ctx.P})


def express_in_zp(ctx: DeltaContext, g: Poly) -> Poly:
    """Write an ambient kernel element as a polynomial in (z, P).

    Fast structural extraction when P is linear in x (peel the top x-degree
    coefficient, which must be f_n(z) * lc_x(P)^n); otherwise a bounded
    linear solve with a little headroom for top-degree cancellation.
    """
    g = g.to_ring(XYZ)
    if g.is_zero():
        return Poly.zero(ZP)
    p_poly = ctx.P
    if p_poly.degree_in("x") == 1:
        lc = Poly.zero(XYZ)
        for mono, coeff in p_poly.terms.items():
            if mono[0] == 1:
                lc = lc + Poly(XYZ, {(0,) + mono[1:]: coeff})
        out = Poly.zero(ZP)
        remainder = g
        while not remainder.is_zero():
            n = remainder.degree_in("x")
            top = Poly.zero(XYZ)
            for mono, coeff in remainder.terms.items():
                if mono[0] == n:
                    top = top + Poly(XYZ, {(0,) + mono[1:]: coeff})
            try:
                c = divide_exact(top, lc**n) if n else top
            except NonDivisibleError:
                raise NotInNError(f"{g} is not a polynomial in z and P") from None
            if not is_univariate_in(c, "z"):
                raise NotInNError(f"{g} is not a polynomial in z and P")
            c_zp = c.to_ring(ZP)
            out = out + c_zp * Poly.variable(ZP, "P") ** n
            remainder = remainder - expand_kernel_poly(ctx, c_zp * Poly.variable(ZP, "P") ** n)
        return out
    bound = max(g.total_degree(), 1)
    headroom = 2 * max(p_poly.total_degree(), 1)
    for extra in (0, headroom, 2 * headroom):
        try:
            return express_in_kernel(
                g, [Poly.variable(XYZ, "z"), p_poly], bound + extra, ZP
            )
        except SearchExhaustedError:
            continue
    raise NotInNError(f"{g} has no (z, P) representation within degree {bound + 2 * headroom}")


# -- the group law -------------------------------------------------------------


def n_mul(lhs: NElem, rhs: NElem, ctx: DeltaContext) -> NElem:
    """(h, f) . (hb, fb) = (h + hb, f(P - hb a') + fb)."""
    z = Poly.variable(ZP, "z")
    pv = Poly.variable(ZP, "P")
    shifted = substitute(lhs.f, {"z": z, "P": pv - rhs.h * ctx.a_prime_zp()})
    return NElem(lhs.h + rhs.h, shifted + rhs.f)


def n_inverse(n: NElem, ctx: DeltaContext) -> NElem:
    """(-h, -f(P + h a')); both products with n give the identity."""
    z = Poly.variable(ZP, "z")
    pv = Poly.variable(ZP, "P")
    shifted = substitute(n.f, {"z": z, "P": pv + n.h * ctx.a_prime_zp()})
    return NElem(-n.h, -shifted)


def m_derivation(ctx: DeltaContext, n: NElem) -> Derivation:
    """The derivation h E + f D' with f expanded."""
    h_amb = n.h.to_ring(XYZ)
    f_amb = expand_kernel_poly(ctx, n.f)
    return Derivation(
        *(
            h_amb * ei + f_amb * di
            for ei, di in zip(ctx.E.images, ctx.D_prime.images)
        )
    )


def n_to_aut(n: NElem, ctx: DeltaContext) -> Automorphism:
    """Realize (h, f) as h.e o f.u' under the recorded convention.

    The pullbacks are produced by the terminating exp-series of the two
    modification factors (equal to composing the modifications, with no
    intermediate power blowup); the inverse witness comes from the reversed
    word with negated derivations.
    """
    h_amb = n.h.to_ring(XYZ)
    f_amb = expand_kernel_poly(ctx, n.f)
    word = _realization_word(ctx.E, ctx.D_prime, h_amb, f_amb, ctx.convention)
    fwd = compose_exp_word(word)
    fwd.inverse_factory = lambda: compose_exp_word(
        [scale(Fraction(-1), w) for w in reversed(word)]
    )
    return fwd


def compose_with_family(g: Automorphism, n: NElem, ctx: DeltaContext) -> Automorphism:
    """compose(g, n_to_aut(n)) with the inner factor applied as exp-series.

    Identical to the generic composition (the series is the pullback of the
    realized automorphism) but avoids expanding powers of large images.
    """
    word = _realization_word(
        ctx.E,
        ctx.D_prime,
        n.h.to_ring(XYZ),
        expand_kernel_poly(ctx, n.f),
        ctx.convention,
    )
    images = []
    for p in (g.pullback_x, g.pullback_y, g.pullback_z):
        for w in word:
            p = apply_exp(w, p)
        images.append(p)
    return Automorphism(*images)


def _strip_complement(
    ctx: DeltaContext, g: Automorphism, h_amb: Poly
) -> Automorphism:
    """Remove the h.e factor from g per the recorded convention."""
    w_neg = scale_poly(-h_amb, ctx.E)
    images = []
    for v in XYZ:
        if ctx.convention == E_OUTER:
            # (exp(-hE) o g)*(v) = g*(exp(-hE)*(v))
            p = substitute(apply_exp(w_neg, Poly.variable(XYZ, v)), g.pullbacks)
        else:
            # (g o exp(-hE))*(v) = exp(-hE)*(g*(v))
            p = apply_exp(w_neg, substitute(Poly.variable(XYZ, v), g.pullbacks))
        images.append(p)
    return Automorphism(*images)


def _modification_factor(ctx: DeltaContext, residual: Automorphism) -> Poly:
    """The f with residual = Exp(f D'), via the plinth element.

    Exp(f D')*(Q) = Q + f a' since D'(Q) = a' lies in ker D'; the candidate
    from that exact division is then certified by re-exponentiation.
    Failure means the residual is not a modification of u'.
    """
    shift = substitute(ctx.Q, residual.pullbacks) - ctx.Q
    try:
        f_amb = divide_exact(shift, ctx.a_prime)
    except NonDivisibleError:
        raise NotInNError("residual is not a modification of u'") from None
    if not apply(ctx.D_prime, f_amb).is_zero():
        raise NotInNError("residual is not a modification of u'")
    expected = compose_exp_word([scale_poly(f_amb, ctx.D_prime)])
    if expected != residual:
        raise NotInNError("residual is not a modification of u'")
    return f_amb


def aut_to_n(g: Automorphism, ctx: DeltaContext) -> NElem:
    """Recover (h, f) from an automorphism, or prove it is not in N.

    h comes from the exact division (P - g*(P)) / a' (must land in Q[z]);
    stripping the h.e part leaves a residual that must be a modification of
    u', whose factor comes from the exact division (residual*(Q) - Q) / a'
    and is certified by re-exponentiation and re-expression in (z, P).
    Any failure raises NotInNError.
    """
    if not commutes(g, ctx.u):
        raise NotInNError("candidate does not commute with u")
    moved = ctx.P - pullback(g, ctx.P)
    try:
        h_amb = divide_exact(moved, ctx.a_prime)
    except NonDivisibleError:
        raise NotInNError("P-shift is not divisible by the plinth generator") from None
    if not is_univariate_in(h_amb, "z"):
        raise NotInNError("P-shift quotient does not lie in Q[z]")
    residual = _strip_complement(ctx, g, h_amb)
    f_amb = _modification_factor(ctx, residual)
    result = NElem(h_amb.to_ring(ZP), express_in_zp(ctx, f_amb))
    if n_to_aut(result, ctx) != g:
        raise VerificationError("recovered pair fails to reproduce the automorphism")
    return result


def exp_m_decompose(n: NElem, ctx: DeltaContext) -> Poly:
    """Split Exp(h E + f D') as h.e composed with a modification of u'.

    Returns the factor g in (z, P) with Exp(hE + fD') realized by the pair
    (h, g); the derivation is exponentiated directly by its series, so this
    realizes membership of the exponential in N.
    """
    w = m_derivation(ctx, n)
    if not is_locally_nilpotent(w).is_nilpotent:
        raise VerificationError("combined derivation lost local nilpotency")
    big = exponential(w)
    h_amb = n.h.to_ring(XYZ)
    residual = _strip_complement(ctx, big, h_amb)
    try:
        f_amb = _modification_factor(ctx, residual)
    except NotInNError as exc:
        raise VerificationError(str(exc)) from None
    g_zp = express_in_zp(ctx, f_amb)
    word = _realization_word(ctx.E, ctx.D_prime, h_amb, f_amb, ctx.convention)
    if compose_exp_word(word) != big:
        raise VerificationError("decomposition does not recompose")
    return g_zp


def combine_to_delta(ctx: DeltaContext, n: NElem) -> tuple[Poly, bool]:
    """The combined potential F = h Q + f P - int(df/dP * P) dP, and whether
    the derivation of F equals h E + f D' exactly."""
    pv = Poly.variable(ZP, "P")
    correction = (n.f.partial_derivative("P") * pv).integrate_in("P")
    g_part = n.f * pv - correction
    f_poly = n.h.to_ring(XYZ) * ctx.Q + expand_kernel_poly(ctx, g_part)
    check = delta(f_poly).images == m_derivation(ctx, n).images
    return f_poly, check


@dataclass(frozen=True)
class IrreducibilityReport:
    gcd_hf: Poly  # gcd of the pair in Q[z, P]
    combined_content: Poly  # gcd of the generator images of h E + f D'
    criterion_applies: bool  # gcd(h, f) = 1
    combined_irreducible: bool | None  # set when the criterion applies
    content_matches: bool  # expanded gcd equals the content (up to monic)

    @property
    def holds(self) -> bool:
        if self.criterion_applies:
            return bool(self.combined_irreducible)
        return self.content_matches


def irreducibility_criterion_check(ctx: DeltaContext, n: NElem) -> IrreducibilityReport:
    """gcd(h, f) = 1 forces irreducibility of h E + f D'; otherwise the gcd
    is exactly the content of the combined derivation."""
    w = m_derivation(ctx, n)
    if w.is_zero():
        raise ValueError("zero combined derivation")
    if n.h.is_zero():
        g = n.f.monic()
    elif n.f.is_zero():
        g = n.h.monic()
    else:
        g = gcd_multivariate(n.h, n.f)
    content = gcd_many(w.images)
    if g.is_constant():
        return IrreducibilityReport(
            g, content, True, is_irreducible(w), content.is_constant()
        )
    expanded = expand_kernel_poly(ctx, g).monic()
    return IrreducibilityReport(g, content, False, None, expanded == content)


@dataclass(frozen=True)
class AdIdentityReport:
    q_max: int
    failures: tuple[int, ...]  # bracket powers where the identity failed

    @property
    def holds(self) -> bool:
        return not self.failures


def ad_identity_check(ctx: DeltaContext, h: Poly, f: Poly, q_max: int) -> AdIdentityReport:
    """Iterated bracket identity: (f D') ad(h E)^q = (-1)^q h^q E^q(f) D'."""
    if q_max < 0:
        raise ValueError("q_max must be non-negative")
    h_amb = h.to_ring(XYZ)
    f_amb = expand_kernel_poly(ctx, f) if f.vars == ZP else f.to_ring(XYZ)
    he = scale_poly(h_amb, ctx.E)
    current = scale_poly(f_amb, ctx.D_prime)
    e_power_f = f_amb
    failures = []
    for q in range(q_max + 1):
        sign = Fraction(1) if q % 2 == 0 else Fraction(-1)
        expected = scale_poly(h_amb**q * e_power_f * sign, ctx.D_prime)
        if current.images != expected.images:
            failures.append(q)
        current = lie_bracket(current, he)
        e_power_f = apply(ctx.E, e_power_f)
    return AdIdentityReport(q_max, tuple(failures))
