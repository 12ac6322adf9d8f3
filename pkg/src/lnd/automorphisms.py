"""Polynomial endomorphisms and automorphisms of affine 3-space.

An automorphism is stored through its pullback images: the triple
(g*(x), g*(y), g*(z)).  Composition follows (g o h)(v) = g(h(v)), so
pullbacks compose in reverse: (g o h)* = h* o g*.  That convention is fixed
here once and stated wherever an identity depends on it.

General inversion is deliberately not provided.  Inverses exist for
automorphisms carrying a witness, for affine maps (exact linear solve), and
for unipotent maps (exponential of the negated logarithm); everything the
constructions in this package produce falls in one of those classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .arith import XYZ, Poly, frac, substitute
from .errors import (
    NotInKernelError,
    NotInvertibleError,
    RingMismatchError,
    SearchExhaustedError,
)


class Automorphism:
    """Endomorphism of A^3 given by pullbacks, with an optional inverse witness.

    Equality and hashing look only at the pullback triple; the witness is a
    certificate, not part of the value.  When a witness is present, both
    compositions with it are the identity (checked on construction).
    """

    __slots__ = ("pullback_x", "pullback_y", "pullback_z", "inverse_witness", "inverse_factory")

    def __init__(
        self,
        pullback_x: Poly,
        pullback_y: Poly,
        pullback_z: Poly,
        inverse_witness: "Automorphism | None" = None,
        *,
        _trust_witness: bool = False,
    ):
        for img in (pullback_x, pullback_y, pullback_z):
            if img.vars != XYZ:
                raise RingMismatchError("pullbacks must live in the (x, y, z) ring")
        self.pullback_x = pullback_x
        self.pullback_y = pullback_y
        self.pullback_z = pullback_z
        self.inverse_witness = inverse_witness
        # Deferred witness construction; invoked at most once by inverse().
        self.inverse_factory = None
        if inverse_witness is not None and not _trust_witness:
            if (
                compose(self, inverse_witness) != identity()
                or compose(inverse_witness, self) != identity()
            ):
                raise ValueError("inverse witness fails to invert")

    @property
    def pullbacks(self) -> dict[str, Poly]:
        return {"x": self.pullback_x, "y": self.pullback_y, "z": self.pullback_z}

    @property
    def degree(self) -> int:
        """Max total degree of the pullbacks (the ind-group filtration level)."""
        return max(
            self.pullback_x.total_degree(),
            self.pullback_y.total_degree(),
            self.pullback_z.total_degree(),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Automorphism)
            and self.pullback_x == other.pullback_x
            and self.pullback_y == other.pullback_y
            and self.pullback_z == other.pullback_z
        )

    def __hash__(self) -> int:
        return hash((self.pullback_x, self.pullback_y, self.pullback_z))

    def __repr__(self) -> str:
        return (
            f"Automorphism(x -> {self.pullback_x}, y -> {self.pullback_y}, "
            f"z -> {self.pullback_z})"
        )


def link_inverses(fwd: Automorphism, bwd: Automorphism) -> None:
    """Attach two automorphisms as each other's inverse witnesses."""
    fwd.inverse_witness = bwd
    bwd.inverse_witness = fwd


def identity() -> Automorphism:
    g = Automorphism(*(Poly.variable(XYZ, v) for v in XYZ))
    g.inverse_witness = g
    return g


def pullback(g: Automorphism, p: Poly) -> Poly:
    """g*(p) = p composed with g."""
    return substitute(p, g.pullbacks)


def _invertible_evidence(g: Automorphism) -> bool:
    return (
        g.inverse_witness is not None
        or g.inverse_factory is not None
        or is_affine(g)
    )


def compose(g: Automorphism, h: Automorphism) -> Automorphism:
    """(g o h)(v) = g(h(v)); pullback images are h*(g*(v))."""
    from .arith import substitute_many

    out = Automorphism(
        *substitute_many(
            (g.pullback_x, g.pullback_y, g.pullback_z), h.pullbacks
        )
    )
    if _invertible_evidence(g) and _invertible_evidence(h):
        out.inverse_factory = lambda: compose(inverse(h), inverse(g))
    return out


def commutes(g: Automorphism, u: Automorphism) -> bool:
    return compose(g, u) == compose(u, g)


def is_affine(g: Automorphism) -> bool:
    return g.degree <= 1


def _affine_inverse(g: Automorphism) -> Automorphism:
    """Invert an affine map by solving the 3x3 linear part exactly."""
    names = XYZ
    rows = []
    consts = []
    for img in (g.pullback_x, g.pullback_y, g.pullback_z):
        rows.append([img.coefficient(tuple(1 if i == j else 0 for j in range(3))) for i in range(3)])
        consts.append(img.coefficient((0, 0, 0)))
    inverse_images = []
    for i in range(3):
        # solve A^T? no: we need h with A*h_images + b = vars; columns are rows of A.
        rhs = [Fraction(1) if j == i else Fraction(0) for j in range(3)]
        col = linalg.solve([list(r) for r in rows], rhs)
        if col is None:
            raise NotInvertibleError("affine map is singular")
        inverse_images.append(col)
    # h*(v_i) = sum_j inv[i][j] * (v_j - b_j)
    images = []
    for i in range(3):
        acc = Poly.zero(XYZ)
        for j in range(3):
            coeff = inverse_images[j][i]
            if coeff:
                acc = acc + (Poly.variable(XYZ, names[j]) - Poly.const(XYZ, consts[j])) * coeff
        images.append(acc)
    h = Automorphism(*images)
    if compose(g, h) != identity() or compose(h, g) != identity():
        raise NotInvertibleError("affine inverse verification failed")
    link_inverses(g, h)
    return h


def inverse(g: Automorphism) -> Automorphism:
    """Inverse via witness, deferred factory, affine solve, or unipotent
    logarithm, in that order."""
    if g.inverse_witness is not None:
        return g.inverse_witness
    if g.inverse_factory is not None:
        back = g.inverse_factory()
        link_inverses(g, back)
        return back
    if is_affine(g):
        return _affine_inverse(g)
    from . import derivations

    d = derivations.logarithm(g)
    back = derivations.exponential(derivations.scale(Fraction(-1), d))
    link_inverses(g, back)
    return back


def inverse_unipotent(u: Automorphism) -> Automorphism:
    """exponential(-logarithm(u)); errors if u is not unipotent."""
    from . import derivations

    d = derivations.logarithm(u)
    back = derivations.exponential(derivations.scale(Fraction(-1), d))
    link_inverses(u, back)
    return back


def modification(f: Poly, u: Automorphism) -> Automorphism:
    """exponential(f * log(u)) for f in the kernel of log(u)."""
    from . import derivations

    d = derivations.logarithm(u)
    f = f.to_ring(XYZ)
    if not derivations.apply(d, f).is_zero():
        raise NotInKernelError(
            f"modification factor {f} is not annihilated by the logarithm"
        )
    return derivations.exponential(derivations.scale_poly(f, d))


def mu_character(g: Automorphism, d: Poly) -> Fraction:
    """The scalar with g*(d) = scalar * d; errors if d is not semi-invariant."""
    d = d.to_ring(XYZ)
    if d.is_zero():
        raise ValueError("divisor polynomial must be nonzero")
    image = pullback(g, d)
    if image.is_zero():
        raise NotInvertibleError("pullback of the divisor polynomial vanished")
    from .arith import exact_div

    ratio = exact_div(image.leading_coeff(), d.leading_coeff())
    if image != d * ratio:
        raise ValueError(f"g*({d}) = {image} is not proportional to {d}")
    return ratio


@dataclass(frozen=True)
class ConjugationReport:
    """Outcome of checking conjugation of a modification against the
    character formula, recording which character orientation matched."""

    holds: bool
    mu: Fraction
    orientation: str  # "mu" or "mu-inverse"
    lhs: Automorphism
    rhs: Automorphism


def conjugation_formula_check(
    g: Automorphism, f: Poly, u_prime: Automorphism, d: Poly
) -> ConjugationReport:
    """Check g^{-1} o (f.u') o g against modification(mu^{±1} g*(f), u').

    The character formula does not by itself fix a composition order, and
    the order flips mu to its inverse; both orientations are tried and the
    matching one is recorded.  Preconditions: g commutes with
    the d-modification of u', and f lies in ker(log u').
    """
    from . import derivations

    d = d.to_ring(XYZ)
    f = f.to_ring(XYZ)
    u = modification(d, u_prime)
    if not commutes(g, u):
        raise ValueError("g does not commute with the modified automorphism")
    dp = derivations.logarithm(u_prime)
    if not derivations.apply(dp, f).is_zero():
        raise NotInKernelError("f is not invariant for u'")
    mu = mu_character(g, d)
    lhs = compose(inverse(g), compose(modification(f, u_prime), g))
    gf = pullback(g, f)
    rhs_mu = modification(gf * mu, u_prime)
    if lhs == rhs_mu:
        return ConjugationReport(True, mu, "mu", lhs, rhs_mu)
    rhs_inv = modification(gf * (Fraction(1) / frac(mu)), u_prime)
    if lhs == rhs_inv:
        return ConjugationReport(True, mu, "mu-inverse", lhs, rhs_inv)
    return ConjugationReport(False, mu, "none", lhs, rhs_mu)


# -- expressing invariants in kernel coordinates ------------------------------


def kernel_products(
    gens: list[Poly], deg_max: int
) -> list[tuple[tuple[int, ...], Poly]]:
    """All products gens^e with expanded total degree <= deg_max."""
    for g in gens:
        if g.is_zero() or g.is_constant():
            raise ValueError("kernel generators must be nonconstant")
    degs = [g.total_degree() for g in gens]
    products: list[tuple[tuple[int, ...], Poly]] = []

    def extend(i: int, exps: tuple[int, ...], value: Poly, used: int) -> None:
        if i == len(gens):
            products.append((exps, value))
            return
        e = 0
        current = value
        while used + e * degs[i] <= deg_max:
            extend(i + 1, exps + (e,), current, used + e * degs[i])
            e += 1
            if used + e * degs[i] <= deg_max:
                current = current * gens[i]
    extend(0, (), Poly.one(gens[0].vars), 0)
    return products


def express_in_kernel(
    f: Poly,
    gens: list[Poly],
    deg_max: int,
    var_names: tuple[str, ...] | None = None,
) -> Poly:
    """Write f as a polynomial in the generators, as an exact linear solve.

    Searches products of the generators with expanded total degree at most
    `deg_max`.  The result lives in a fresh ring with one variable per
    generator (names default to g1, g2, ...) and substitutes back to f
    exactly; failure to represent raises SearchExhaustedError.
    """
    if var_names is None:
        var_names = tuple(f"g{i + 1}" for i in range(len(gens)))
    if len(var_names) != len(gens):
        raise ValueError("need one variable name per generator")
    ring = f.vars
    gens = [g.to_ring(ring) for g in gens]
    products = kernel_products(gens, max(deg_max, 0))
    monomials = sorted(
        {m for _, kp in products for m in kp.terms} | set(f.terms),
        key=lambda m: (sum(m), m),
        reverse=True,
    )
    index = {m: i for i, m in enumerate(monomials)}
    rows = [[Fraction(0)] * len(products) for _ in monomials]
    for j, (_, kp) in enumerate(products):
        for mono, coeff in kp.terms.items():
            rows[index[mono]][j] = coeff
    rhs = [f.coefficient(m) for m in monomials]
    solution = linalg.solve(rows, rhs)
    if solution is None:
        raise SearchExhaustedError(
            f"{f} has no representation in the generators within degree {deg_max}"
        )
    out = Poly.zero(var_names)
    for (exps, _), coeff in zip(products, solution):
        if coeff:
            out = out + Poly(var_names, {exps: coeff})
    check = substitute(out, dict(zip(var_names, gens))) if not out.is_zero() else Poly.zero(ring)
    if check != f:
        raise SearchExhaustedError("representation verification failed")
    return out


def quotient_action(
    g: Automorphism,
    gens: list[Poly],
    deg_max: int,
    var_names: tuple[str, ...] | None = None,
) -> tuple[Poly, Poly]:
    """The induced map on the algebraic quotient, in kernel coordinates.

    Returns the re-expressions of g*(gen1), g*(gen2); errors if g does not
    normalize the kernel ring within the degree bound.
    """
    if len(gens) != 2:
        raise ValueError("expected exactly two kernel generators")
    images = []
    for gen in gens:
        moved = pullback(g, gen.to_ring(XYZ))
        bound = max(deg_max, moved.total_degree())
        images.append(express_in_kernel(moved, gens, bound, var_names))
    return images[0], images[1]
