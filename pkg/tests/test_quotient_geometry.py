import random
from fractions import Fraction

import pytest

from lnd.arith import XYZ, YZ, Poly
from lnd.automorphisms import Automorphism, commutes
from lnd.quotient_geometry import (
    PlaneAut,
    affine_symmetries,
    cyclotomic,
    fence_unipotent_witness,
    fixed_scheme_check,
    is_inert,
    is_vertical_fence,
    lift_to_H,
    plane_compose,
    plane_divisor,
    plane_identity,
    preserves_divisor,
    symmetry_lambda_value,
)
from lnd.syntax import parse_poly


def q(text):
    return parse_poly(text, YZ)


Y, Z = Poly.variable(YZ, "y"), Poly.variable(YZ, "z")


def test_is_vertical_fence():
    assert is_vertical_fence(q("z^2"))
    assert is_vertical_fence(q("z^3 - z"))
    assert not is_vertical_fence(q("y*z^2"))
    with pytest.raises(ValueError):
        is_vertical_fence(Poly.zero(YZ))


def test_preserves_divisor():
    shear = PlaneAut(Y + Z, Z)
    assert preserves_divisor(shear, plane_divisor(q("z^2"))) == 1
    reflect = PlaneAut(-Y, -Z)
    assert preserves_divisor(reflect, plane_divisor(q("z^3 - z"))) == -1
    shift = PlaneAut(Y, Z + Poly.one(YZ))
    assert preserves_divisor(shift, plane_divisor(q("z"))) is None


def test_preserves_divisor_multiplicative():
    rng = random.Random(97)
    div = plane_divisor(q("z^3 - z"))
    pool = [
        PlaneAut(-Y, -Z, PlaneAut(-Y, -Z)),
        PlaneAut(Y + q("z^3 - z"), Z, PlaneAut(Y - q("z^3 - z"), Z)),
        PlaneAut(Y * 2, Z, PlaneAut(Y * Fraction(1, 2), Z)),
    ]
    for _ in range(10):
        g = pool[rng.randrange(len(pool))]
        h = pool[rng.randrange(len(pool))]
        lg, lh = preserves_divisor(g, div), preserves_divisor(h, div)
        assert preserves_divisor(plane_compose(g, h), div) == lg * lh


def test_is_inert():
    d2 = plane_divisor(q("z^2"))
    for h in (Poly.one(YZ), Z, q("z^2 - 3*z")):
        g = PlaneAut(Y + q("z^2") * h, Z)
        assert is_inert(g, d2)
    assert not is_inert(PlaneAut(Y + Z, Z), d2)
    assert is_inert(plane_identity(), d2)


def test_inert_elements_form_group():
    d2 = plane_divisor(q("z^2"))
    g = PlaneAut(Y + q("z^2"), Z, PlaneAut(Y - q("z^2"), Z))
    h = PlaneAut(Y + q("z^3"), Z, PlaneAut(Y - q("z^3"), Z))
    assert is_inert(plane_compose(g, h), d2)
    assert is_inert(g.inverse_witness, d2)


def test_cyclotomic_polynomials():
    t = ("t",)
    assert cyclotomic(1) == parse_poly("t - 1", t)
    assert cyclotomic(2) == parse_poly("t + 1", t)
    assert cyclotomic(3) == parse_poly("t^2 + t + 1", t)
    assert cyclotomic(4) == parse_poly("t^2 + 1", t)
    assert cyclotomic(6) == parse_poly("t^2 - t + 1", t)


def test_affine_symmetries_three_line_fence():
    sym = affine_symmetries(parse_poly("z^3 - z", ("z",)))
    assert sym.center == 0
    assert sym.order == 2
    assert symmetry_lambda_value(sym) == -1
    # direct substitution oracle: a(-z) = -a(z)
    a = parse_poly("z^3 - z", ("z",))
    assert a.substitute({"z": -Poly.variable(("z",), "z")}) == -a


def test_affine_symmetries_torus_case():
    sym = affine_symmetries(parse_poly("z^2", ("z",)))
    assert sym.center == 0 and sym.is_torus


def test_affine_symmetries_cube_roots():
    sym = affine_symmetries(parse_poly("z^3 + 1", ("z",)))
    assert sym.center == 0
    assert sym.order == 3
    assert sym.lambda_exponent == 0


def test_affine_symmetries_shifted_center():
    # roots centered at 1: (z-1)^3 - (z-1)
    a = parse_poly("z^3 - 3*z^2 + 2*z", ("z",))
    sym = affine_symmetries(a)
    assert sym.center == 1
    assert sym.order == 2


def test_no_larger_symmetry_order():
    # support differences of the recentred z^3 - z are not divisible by 3..4
    a = parse_poly("z^3 - z", ("z",))
    support = sorted(sum(m) for m in a.terms)
    for order in (3, 4):
        assert any((e - support[0]) % order for e in support[1:])


def test_lift_to_H():
    div = plane_divisor(q("z^3 - z"))
    assert lift_to_H(plane_identity(), div) == Automorphism(
        *(Poly.variable(XYZ, v) for v in XYZ)
    )
    reflect = PlaneAut(-Y, -Z, PlaneAut(-Y, -Z))
    sigma = lift_to_H(reflect, div)
    assert sigma == Automorphism(
        parse_poly("-x", XYZ), parse_poly("-y", XYZ), parse_poly("-z", XYZ)
    )
    shear = PlaneAut(Y + q("z^3 - z"), Z)
    sigma = lift_to_H(shear, div)
    assert sigma.pullback_x == parse_poly("x", XYZ)
    assert sigma.pullback_y == parse_poly("y + z^3 - z", XYZ)


def test_lift_is_homomorphism_into_centralizer():
    div = plane_divisor(q("z^3 - z"))
    g = PlaneAut(-Y, -Z, PlaneAut(-Y, -Z))
    h = PlaneAut(Y + q("z^3 - z"), Z, PlaneAut(Y - q("z^3 - z"), Z))
    assert lift_to_H(plane_compose(g, h), div) == __import__(
        "lnd.automorphisms", fromlist=["compose"]
    ).compose(lift_to_H(g, div), lift_to_H(h, div))
    translation = Automorphism(
        parse_poly("x + z^3 - z", XYZ),
        Poly.variable(XYZ, "y"),
        Poly.variable(XYZ, "z"),
    )
    assert commutes(lift_to_H(g, div), translation)


def test_lift_recovers_plane_action_on_quotient():
    from lnd.automorphisms import quotient_action

    div = plane_divisor(q("z^3 - z"))
    g = PlaneAut(-Y, -Z, PlaneAut(-Y, -Z))
    sigma = lift_to_H(g, div)
    ey, ez = quotient_action(
        sigma, [Poly.variable(XYZ, "y"), Poly.variable(XYZ, "z")], 3, YZ
    )
    assert ey == q("-y") and ez == q("-z")


def test_fence_unipotent_witness():
    assert fence_unipotent_witness(plane_divisor(q("z"))) == PlaneAut(Y + Z, Z)
    assert fence_unipotent_witness(plane_divisor(q("z^2"))) == PlaneAut(Y + q("z^2"), Z)
    with pytest.raises(ValueError):
        fence_unipotent_witness(plane_divisor(q("y*z")))


def test_fixed_scheme_check():
    multipliers = [q("z"), q("y"), q("z + 1")]
    for a_text in ("z", "z^2"):
        report = fixed_scheme_check(plane_divisor(q(a_text)), multipliers)
        assert report.holds
        assert len(report.moved_multipliers) == 3


def test_affine_symmetries_higher_orders():
    # support gaps of 4, 5, 6: certified inside the matching cyclotomic ring
    for text, order, k0 in (("z^5 - z", 4, 1), ("z^6 + z", 5, 1), ("z^7 + z", 6, 1)):
        sym = affine_symmetries(parse_poly(text, ("z",)))
        assert (sym.center, sym.order, sym.lambda_exponent) == (0, order, k0)
    # and no strictly larger order up to 2e passes the support test
    for text, order in (("z^5 - z", 4), ("z^7 + z", 6)):
        support = sorted(sum(m) for m in parse_poly(text, ("z",)).terms)
        for bigger in range(order + 1, 2 * order + 1):
            assert any((e - support[0]) % bigger for e in support[1:])
