"""Divisors on the quotient plane and the automorphisms that respect them.

The quotient plane carries coordinates (y, z).  A divisor is a nonzero
polynomial up to scalar, stored monic.  A vertical fence is a divisor whose
polynomial depends on z alone: its components are parallel lines, pairwise
disjoint.  For root divisors on the line this module computes the affine
symmetry data (center, rotation order, scaling character) exactly, with the
finite-order cases certified inside cyclotomic quotient rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import XYZ, YZ, Poly, divide_exact, divides, exact_div, frac, is_univariate_in
from .automorphisms import Automorphism, commutes
from .errors import RingMismatchError, VerificationError


@dataclass(frozen=True)
class PlaneDivisor:
    """Effective divisor div(a) on the plane; a is nonzero and stored monic."""

    a: Poly

    def __post_init__(self):
        if self.a.vars != YZ:
            raise RingMismatchError("divisor polynomial must live in (y, z)")
        if self.a.is_zero():
            raise ValueError("divisor polynomial must be nonzero")

    def __str__(self) -> str:
        return f"div({self.a})"


def plane_divisor(a: Poly) -> PlaneDivisor:
    return PlaneDivisor(a.to_ring(YZ).monic())


class PlaneAut:
    """Plane endomorphism by pullbacks (g*(y), g*(z)); equality by pullbacks."""

    __slots__ = ("pullback_y", "pullback_z", "inverse_witness")

    def __init__(self, pullback_y: Poly, pullback_z: Poly, inverse_witness=None):
        for img in (pullback_y, pullback_z):
            if img.vars != YZ:
                raise RingMismatchError("plane pullbacks must live in (y, z)")
        self.pullback_y = pullback_y
        self.pullback_z = pullback_z
        self.inverse_witness = inverse_witness
        if inverse_witness is not None:
            if (
                plane_compose(self, inverse_witness) != plane_identity()
                or plane_compose(inverse_witness, self) != plane_identity()
            ):
                raise ValueError("inverse witness fails to invert")

    @property
    def pullbacks(self) -> dict[str, Poly]:
        return {"y": self.pullback_y, "z": self.pullback_z}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlaneAut)
            and self.pullback_y == other.pullback_y
            and self.pullback_z == other.pullback_z
        )

    def __hash__(self) -> int:
        return hash((self.pullback_y, self.pullback_z))

    def __repr__(self) -> str:
        return f"PlaneAut(y -> {self.pullback_y}, z -> {self.pullback_z})"


def plane_identity() -> PlaneAut:
    return PlaneAut(Poly.variable(YZ, "y"), Poly.variable(YZ, "z"))


def plane_compose(g: PlaneAut, h: PlaneAut) -> PlaneAut:
    """(g o h)(v) = g(h(v)); pullbacks compose in reverse, as in 3-space."""
    from .arith import substitute_many

    out = PlaneAut(*substitute_many((g.pullback_y, g.pullback_z), h.pullbacks))
    if g.inverse_witness is not None and h.inverse_witness is not None:
        out.inverse_witness = PlaneAut(
            *substitute_many(
                (
                    h.inverse_witness.pullback_y,
                    h.inverse_witness.pullback_z,
                ),
                g.inverse_witness.pullbacks,
            )
        )
        out.inverse_witness.inverse_witness = out
    return out


def is_vertical_fence(a: Poly) -> bool:
    """True iff a depends on z alone.

    Then div(a) is a disjoint union of vertical lines, hence a fence whenever
    a is non-constant; nonzero constants pass trivially (empty divisor).
    """
    a = a.to_ring(YZ)
    if a.is_zero():
        raise ValueError("zero polynomial defines no divisor")
    return all(m[0] == 0 for m in a.terms)


def preserves_divisor(g: PlaneAut, div: PlaneDivisor) -> Fraction | None:
    """The scalar with g*(a) = scalar * a, or None if the divisor moves."""
    from .arith import substitute

    image = substitute(div.a, g.pullbacks)
    if image.is_zero():
        return None
    ratio = frac(exact_div(image.leading_coeff(), div.a.leading_coeff()))
    if image == div.a * ratio:
        return ratio
    return None


def is_inert(g: PlaneAut, div: PlaneDivisor) -> bool:
    """True iff g preserves div(a) and restricts to the identity on it,
    i.e. both pullback shifts are divisible by a."""
    if preserves_divisor(g, div) is None:
        raise ValueError("automorphism does not preserve the divisor")
    y, z = Poly.variable(YZ, "y"), Poly.variable(YZ, "z")
    return divides(div.a, g.pullback_y - y) and divides(div.a, g.pullback_z - z)


# -- affine symmetries of a root divisor on the line ---------------------------


def cyclotomic(order: int) -> Poly:
    """The cyclotomic polynomial of the given order, in the ring ("t",),
    by the divisibility sieve over t^order - 1."""
    if order < 1:
        raise ValueError("order must be positive")
    t_ring = ("t",)
    t = Poly.variable(t_ring, "t")
    result = t**order - Poly.one(t_ring)
    for d in range(1, order):
        if order % d == 0:
            result = divide_exact(result, cyclotomic(d))
    return result


def _mod_reduce(p: Poly, modulus: Poly) -> Poly:
    """Remainder of a univariate p by a monic univariate modulus."""
    deg_m = modulus.total_degree()
    while not p.is_zero() and p.total_degree() >= deg_m:
        lead = p.leading_monomial()
        shift = Poly(p.vars, {(lead[0] - deg_m,): p.leading_coeff()})
        p = p - shift * modulus
    return p


@dataclass(frozen=True)
class DivisorSymmetry:
    """Affine symmetry data of a root divisor on the line.

    center: the unique fixed point every affine symmetry must fix
    (multiplicity-weighted root centroid, computed from coefficients).
    order: rotation order e of the symmetry group, or None for the torus
    case (recentred polynomial is a monomial, so every scaling works).
    lambda_exponent: k0 with the scaling character acting as alpha^k0.
    """

    center: Fraction
    order: int | None
    lambda_exponent: int

    @property
    def is_torus(self) -> bool:
        return self.order is None


def affine_symmetries(a: Poly) -> DivisorSymmetry:
    """Symmetry data of div(a) on the line, exactly.

    The center is -c_{d-1}/(d c_d).  After recentring, a monomial means the
    full torus acts; otherwise the order is the gcd of the support-exponent
    differences, certified by direct substitution for order <= 2 and inside
    Q[t]/(cyclotomic) for larger orders.
    """
    if "z" not in a.vars or not is_univariate_in(a, "z"):
        raise ValueError("expected a polynomial in z alone")
    coeffs: dict[int, Fraction] = {}
    for mono, c in a.terms.items():
        coeffs[sum(mono)] = frac(c)
    d = max(coeffs)
    if d < 1:
        raise ValueError("divisor polynomial must be non-constant")
    center = -coeffs.get(d - 1, Fraction(0)) / (d * coeffs[d])
    z_ring = ("z",)
    z = Poly.variable(z_ring, "z")
    recentred = Poly(z_ring, {(e,): c for e, c in coeffs.items()}).substitute(
        {"z": z + Poly.const(z_ring, center)}
    )
    support = sorted(sum(m) for m in recentred.terms)
    if len(support) == 1:
        return DivisorSymmetry(center, None, support[0])
    base = support[0]
    order = 0
    for e in support[1:]:
        diff = e - base
        order = diff if order == 0 else _gcd(order, diff)
    k0 = base % order
    _certify_symmetry(recentred, order, k0)
    return DivisorSymmetry(center, order, k0)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _certify_symmetry(recentred: Poly, order: int, k0: int) -> None:
    """Check a(zeta t) = zeta^k0 a(t) for zeta of the claimed order.

    Order 1 is vacuous and order 2 is substitution by -1; beyond that the
    identity is verified with exact arithmetic in Q[t]/(cyclotomic(order)).
    """
    if order == 1:
        return
    if order == 2:
        z_ring = recentred.vars
        flipped = recentred.substitute({"z": -Poly.variable(z_ring, "z")})
        expected = recentred * (Fraction(-1) ** k0)
        if flipped != expected:
            raise VerificationError("order-2 symmetry failed direct substitution")
        return
    modulus = cyclotomic(order)
    t_ring = ("t",)
    t = Poly.variable(t_ring, "t")
    for mono in recentred.terms:
        e = sum(mono)
        # zeta^e must equal zeta^k0, i.e. t^e - t^k0 reduces to zero
        residue = _mod_reduce(t**e - t**k0, modulus)
        if not residue.is_zero():
            raise VerificationError(
                f"support exponent {e} breaks the order-{order} symmetry"
            )


def symmetry_lambda_value(sym: DivisorSymmetry) -> Fraction | None:
    """The rational scaling value alpha^k0 when the order divides 2."""
    if sym.order == 1:
        return Fraction(1)
    if sym.order == 2:
        return Fraction(-1) ** sym.lambda_exponent
    return None


# -- lifting plane data to 3-space ---------------------------------------------


def lift_to_H(g: PlaneAut, div: PlaneDivisor) -> Automorphism:
    """Lift a divisor-preserving plane automorphism to (lambda x, g(y, z)).

    The lift commutes with the modified translation (x + a, y, z), which is
    verified before returning.
    """
    lam = preserves_divisor(g, div)
    if lam is None:
        raise ValueError("plane automorphism does not preserve the divisor")
    sigma = Automorphism(
        Poly.variable(XYZ, "x") * lam,
        g.pullback_y.to_ring(XYZ),
        g.pullback_z.to_ring(XYZ),
    )
    if g.inverse_witness is not None:
        sigma.inverse_witness = Automorphism(
            Poly.variable(XYZ, "x") * (Fraction(1) / lam),
            g.inverse_witness.pullback_y.to_ring(XYZ),
            g.inverse_witness.pullback_z.to_ring(XYZ),
        )
        sigma.inverse_witness.inverse_witness = sigma
    translation = Automorphism(
        Poly.variable(XYZ, "x") + div.a.to_ring(XYZ),
        Poly.variable(XYZ, "y"),
        Poly.variable(XYZ, "z"),
    )
    if not commutes(sigma, translation):
        raise VerificationError("lift fails to commute with the modified translation")
    return sigma


def fence_unipotent_witness(div: PlaneDivisor) -> PlaneAut:
    """The shear (y + a(z), z) witnessing unipotent symmetries of a fence."""
    if not is_vertical_fence(div.a):
        raise ValueError("divisor is not a vertical fence")
    if div.a.degree_in("z") < 1:
        raise ValueError("fence witness needs a non-constant divisor")
    y = Poly.variable(YZ, "y")
    z = Poly.variable(YZ, "z")
    shear = PlaneAut(y + div.a, z)
    shear.inverse_witness = PlaneAut(y - div.a, z)
    # unipotent by shape: z is fixed and the y-shift depends on z alone
    if shear.pullback_z != z or not is_vertical_fence(shear.pullback_y - y):
        raise VerificationError("witness shear is not a vertical-fence shear")
    if preserves_divisor(shear, div) != 1:
        raise VerificationError("witness shear does not fix the divisor")
    return shear


@dataclass(frozen=True)
class FixedSchemeReport:
    """Whether div(a) is fixed pointwise by the witness shear while every
    proper enlargement div(a*m) in the test family moves."""

    divisor_fixed: bool
    moved_multipliers: tuple[Poly, ...]
    failed_multipliers: tuple[Poly, ...]

    @property
    def holds(self) -> bool:
        return self.divisor_fixed and not self.failed_multipliers


def fixed_scheme_check(div: PlaneDivisor, multipliers: list[Poly]) -> FixedSchemeReport:
    shear = fence_unipotent_witness(div)
    fixed = is_inert(shear, div)
    moved: list[Poly] = []
    failed: list[Poly] = []
    for m in multipliers:
        m = m.to_ring(YZ)
        if m.is_constant():
            raise ValueError("enlargement multipliers must be non-constant")
        bigger = plane_divisor(div.a * m)
        if preserves_divisor(shear, bigger) is not None and is_inert(shear, bigger):
            failed.append(m)
        else:
            moved.append(m)
    return FixedSchemeReport(fixed, tuple(moved), tuple(failed))
