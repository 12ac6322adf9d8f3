"""Execute the directives of a parsed corpus and assemble a report.

Every directive yields PASS, FAIL or ERROR plus a one-line detail (FAIL
carries a counterexample witness, ERROR the offending condition); directive
failures never abort the run.  Output is byte-deterministic for a fixed
(file, seed, budget) triple: randomized directives draw from a generator
seeded by (seed, directive index).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import delta_family, groupmodel, quotient_geometry
from .arith import XYZ, YZ, ZP, ZVAR, Poly
from .automorphisms import Automorphism, commutes, compose
from .corpus import (
    ContextSpec,
    CorpusCase,
    Directive,
    ExprValue,
    GElemValue,
    KeywordValue,
    ListValue,
    NameRef,
    NElemValue,
    directive_text,
)
from .derivations import (
    Derivation,
    apply,
    exponential,
    is_locally_nilpotent,
    lie_bracket,
    logarithm,
    sat_instance_check,
    scale,
    standard_decomposition,
)
from .errors import LndError
from .quotient_geometry import PlaneDivisor
from .syntax import eval_expr

# Protective bounds for untrusted corpus input; honest errors, not crashes.
MAX_DEG_MAX = 12
MAX_SAMPLES = 10_000
MAX_Q_MAX = 16
MAX_K = 16


@dataclass(frozen=True)
class Entry:
    name: str
    verdict: str  # PASS | FAIL | ERROR
    detail: str
    extra: tuple[str, ...] = ()


@dataclass(frozen=True)
class Report:
    entries: tuple[Entry, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        p = sum(1 for e in self.entries if e.verdict == "PASS")
        f = sum(1 for e in self.entries if e.verdict == "FAIL")
        err = sum(1 for e in self.entries if e.verdict == "ERROR")
        return p, f, err

    @property
    def ok(self) -> bool:
        _, f, e = self.counts
        return f == 0 and e == 0


def format_report(report: Report, full: bool = False) -> str:
    lines = []
    for entry in report.entries:
        lines.append(f"{entry.verdict} {entry.name} — {entry.detail}")
        if full:
            lines.extend(f"  {line}" for line in entry.extra)
    p, f, e = report.counts
    lines.append(f"summary: {p}/{f}/{e}")
    return "\n".join(lines) + "\n"


class DirectiveError(LndError):
    """Schema violation in directive arguments."""


@dataclass
class _Env:
    objects: dict[str, tuple[str, object]]
    deg_max_cap: int

    def fetch(self, name: str, kinds: tuple[str, ...]):
        if name not in self.objects:
            raise DirectiveError(f"{name!r} is not defined or failed to build")
        kind, value = self.objects[name]
        if kind not in kinds:
            raise DirectiveError(f"{name!r} is a {kind}, expected {' or '.join(kinds)}")
        return value


class _Args:
    """Positional/keyword argument access with ring-aware coercions."""

    def __init__(self, directive: Directive, env: _Env):
        self.directive = directive
        self.env = env
        self.positional = [a.value for a in directive.args if a.key is None]
        self.keyword = {a.key: a.value for a in directive.args if a.key is not None}
        self.pos_index = 0

    def _next_positional(self, what: str):
        if self.pos_index >= len(self.positional):
            raise DirectiveError(f"missing argument: {what}")
        value = self.positional[self.pos_index]
        self.pos_index += 1
        return value

    def take(self, what: str, key: str | None = None):
        if key is not None and key in self.keyword:
            return self.keyword[key]
        return self._next_positional(what)

    def optional(self, key: str, default=None):
        if key in self.keyword:
            return self.keyword[key]
        if self.pos_index < len(self.positional):
            return self._next_positional(key)
        return default

    def optional_kw(self, key: str, default=None):
        return self.keyword.get(key, default)

    # coercions --------------------------------------------------------------

    def as_object(self, value, kinds: tuple[str, ...]):
        if isinstance(value, NameRef):
            return self.env.fetch(value.name, kinds)
        raise DirectiveError(f"expected a defined {' or '.join(kinds)} name")

    def as_poly(self, value, ring: tuple[str, ...]) -> Poly:
        if isinstance(value, NameRef):
            obj = self.env.fetch(value.name, ("poly", "unipoly", "divisor"))
            if isinstance(obj, PlaneDivisor):
                obj = obj.a
            return obj.to_ring(ring)
        if isinstance(value, ExprValue):
            return eval_expr(value.ast, ring)
        raise DirectiveError("expected a polynomial")

    def as_int(self, value, what: str, low: int, high: int) -> int:
        if isinstance(value, ExprValue):
            poly = eval_expr(value.ast, ())
            constant = poly.constant_value()
            if isinstance(constant, Fraction) and constant.denominator != 1:
                raise DirectiveError(f"{what} must be an integer")
            number = int(constant)
            if not low <= number <= high:
                raise DirectiveError(f"{what} must lie in [{low}, {high}]")
            return number
        raise DirectiveError(f"expected an integer for {what}")

    def as_nelem(self, value) -> delta_family.NElem:
        if isinstance(value, NElemValue):
            return delta_family.n_elem(
                eval_expr(value.h.ast, ZP), eval_expr(value.f.ast, ZP)
            )
        raise DirectiveError("expected an n(h, f) literal")

    def as_gelem(self, value) -> groupmodel.GElem:
        if isinstance(value, GElemValue):
            return groupmodel.g_elem(
                value.torus, eval_expr(value.h.ast, ZP), eval_expr(value.f.ast, ZP)
            )
        raise DirectiveError("expected a gelem(...; h; f) literal")

    def as_poly_list(self, value, ring: tuple[str, ...]) -> list[Poly]:
        if isinstance(value, ListValue):
            return [eval_expr(item.ast, ring) for item in value.items]
        raise DirectiveError("expected a [p1, p2, ...] list")


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def _rand_kernel_poly(rng: random.Random, deg: int, z_only: bool = False) -> Poly:
    out = Poly.zero(ZP)
    for _ in range(4):
        ez = rng.randint(0, deg)
        ep = 0 if z_only else rng.randint(0, deg - ez)
        out = out + Poly(ZP, {(ez, ep): Fraction(rng.randint(-9, 9))})
    return out


def _rand_nelem(rng: random.Random, deg: int) -> delta_family.NElem:
    return delta_family.n_elem(
        _rand_kernel_poly(rng, deg, z_only=True), _rand_kernel_poly(rng, deg)
    )


def _budget(args: _Args, default: int) -> int:
    raw = args.optional_kw("samples")
    if raw is None:
        return default
    return args.as_int(raw, "samples", 1, MAX_SAMPLES)


# -- directive implementations ------------------------------------------------


def _derivation_of(args: _Args, value) -> Derivation:
    obj = args.as_object(value, ("derivation", "automorphism"))
    if isinstance(obj, Automorphism):
        return logarithm(obj)
    return obj


def _run_exp_log_roundtrip(args: _Args, rng) -> tuple[str, str]:
    value = args.take("derivation or automorphism")
    if isinstance(value, NameRef) and args.env.objects.get(value.name, ("",))[0] == "automorphism":
        u = args.env.fetch(value.name, ("automorphism",))
        d = logarithm(u)
        if exponential(d) != u:
            return "FAIL", f"exp(log(u)) != u for {value.name}"
        return "PASS", f"exp(log({value.name})) = {value.name} exactly"
    d = _derivation_of(args, value)
    u = exponential(d)
    back = logarithm(u)
    if back != d:
        return "FAIL", f"log(exp(D)) = {back}, expected {d}"
    evidence = is_locally_nilpotent(d)
    return "PASS", f"roundtrip exact; vanishing orders {evidence.vanishing_orders}"


def _run_one_parameter_group(args: _Args, rng) -> tuple[str, str]:
    d = _derivation_of(args, args.take("derivation"))
    samples = _budget(args, 200)
    for _ in range(samples):
        s, t = _rand_fraction(rng), _rand_fraction(rng)
        lhs = compose(exponential(scale(s, d)), exponential(scale(t, d)))
        rhs = exponential(scale(s + t, d))
        if lhs != rhs:
            return "FAIL", f"group law fails at (s, t) = ({s}, {t})"
    return "PASS", f"exp(sD) o exp(tD) = exp((s+t)D) on {samples} rational pairs"


def _run_standard_decomposition_expect(args: _Args, rng) -> tuple[str, str]:
    u = args.as_object(args.take("automorphism"), ("automorphism",))
    expected_d = args.as_poly(args.take("expected invariant factor", key="d"), XYZ)
    d, u_prime = standard_decomposition(u)
    if d != expected_d.monic():
        return "FAIL", f"expected d = {expected_d.monic()}, got d = {d}"
    raw = args.optional_kw("uprime")
    if raw is not None:
        expected_up = args.as_object(raw, ("automorphism",))
        if u_prime != expected_up:
            return "FAIL", "irreducible part differs from the expected automorphism"
    return (
        "PASS",
        f"d = {d}, u' irreducible with pullback x -> {u_prime.pullback_x}",
        (
            f"u' pullbacks: x -> {u_prime.pullback_x}; y -> {u_prime.pullback_y}; "
            f"z -> {u_prime.pullback_z}",
        ),
    )


def _run_plinth_expect(args: _Args, rng) -> tuple[str, str]:
    from .derivations import plinth_search

    d = _derivation_of(args, args.take("derivation"))
    gens = args.as_poly_list(args.take("kernel generators", key="gens"), XYZ)
    raw_deg = args.optional_kw("deg_max")
    deg_max = (
        args.as_int(raw_deg, "deg_max", 1, MAX_DEG_MAX) if raw_deg is not None else 3
    )
    deg_max = min(deg_max, args.env.deg_max_cap)
    q_poly, a_poly = plinth_search(d, gens, deg_max)
    raw_a = args.optional_kw("a")
    if raw_a is not None:
        expected = args.as_poly(raw_a, XYZ).monic()
        if a_poly != expected:
            return "FAIL", f"expected a = {expected}, got a = {a_poly}"
    raw_q = args.optional_kw("q")
    if raw_q is not None:
        expected_q = args.as_poly(raw_q, XYZ)
        if q_poly != expected_q:
            return "FAIL", f"expected Q = {expected_q}, got Q = {q_poly}"
    return (
        "PASS",
        f"plinth pair Q = {q_poly}, a = {a_poly}",
        (f"d(Q) = {apply(d, q_poly)}", f"degree bound {deg_max}"),
    )


def _get_context(args: _Args, value) -> delta_family.DeltaContext:
    return args.as_object(value, ("context",))


def _run_admissible_complement(args: _Args, rng) -> tuple[str, str]:
    ctx = _get_context(args, args.take("context"))
    checks = [
        (apply(ctx.D_prime, ctx.Q) == ctx.a_prime, "D'(Q) = a'"),
        (apply(ctx.E, ctx.P) == -ctx.a_prime, "E(P) = -a'"),
        (lie_bracket(ctx.D_prime, ctx.E).is_zero(), "[D', E] = 0"),
        (ctx.a == ctx.d * ctx.a_prime, "a = d a'"),
    ]
    from .derivations import is_irreducible

    checks.append((is_irreducible(ctx.E), "E irreducible"))
    checks.append((is_irreducible(ctx.D_prime), "D' irreducible"))
    failed = [fact for ok, fact in checks if not ok]
    if failed:
        return "FAIL", "violated: " + ", ".join(failed)
    return "PASS", f"Q = {ctx.Q}, a' = {ctx.a_prime}, e pullback x -> {ctx.e.pullback_x}"


def _run_ad_identity(args: _Args, rng) -> tuple[str, str]:
    ctx = _get_context(args, args.take("context"))
    q_max = args.as_int(
        args.optional_kw("q_max", None) or _int_value(4), "q_max", 0, MAX_Q_MAX
    )
    samples = _budget(args, 200)
    for _ in range(samples):
        n = _rand_nelem(rng, 3)
        report = delta_family.ad_identity_check(ctx, n.h, n.f, q_max)
        if not report.holds:
            return "FAIL", f"bracket power(s) {report.failures} fail for {n}"
    return "PASS", f"iterated-bracket identity for q <= {q_max} on {samples} samples"


def _int_value(number: int):
    from .syntax import Num

    return ExprValue(Num(Fraction(number)), 0, 0)


def _run_n_group_homomorphism(args: _Args, rng) -> tuple[str, str]:
    ctx = _get_context(args, args.take("context"))
    samples = _budget(args, 200)
    for _ in range(samples):
        a, b = _rand_nelem(rng, 3), _rand_nelem(rng, 3)
        product = delta_family.n_mul(a, b, ctx)
        lhs = delta_family.n_to_aut(product, ctx)
        ga = delta_family.n_to_aut(a, ctx)
        rhs = delta_family.compose_with_family(ga, b, ctx)
        if lhs != rhs:
            return "FAIL", f"homomorphism fails on {a}, {b}"
        if not commutes(lhs, ctx.u) or not commutes(lhs, ctx.u_prime):
            return "FAIL", f"image of {product} does not centralize u or u'"
        if delta_family.aut_to_n(lhs, ctx) != product:
            return "FAIL", f"round-trip fails on {product}"
        delta_family.exp_m_decompose(a, ctx)
    return (
        "PASS",
        f"homomorphism, centralizing, round-trip and Exp-split on {samples} pairs "
        f"(convention {ctx.convention})",
    )


def _run_sat_instance(args: _Args, rng) -> tuple[str, str]:
    b = _derivation_of(args, args.take("derivation B"))
    f_der = _derivation_of(args, args.take("derivation F"))
    f = args.as_poly(args.take("invariant f"), XYZ)
    report = sat_instance_check(b, f_der, f)
    if not report.identity_holds:
        return "FAIL", "bracket identity [fF, B] = f[F, B] - B(f) F violated"
    if report.bracket_is_zero:
        if not report.conclusions_hold:
            return "FAIL", f"[fF, B] = 0 but B(f) = {report.b_of_f} or [F, B] != 0"
        return "PASS", "bracket vanishes; B(f) = 0 and [F, B] = 0 follow"
    return "PASS", f"obstruction reported: B(f) = {report.b_of_f}"


def _run_irreducibility_criterion(args: _Args, rng) -> tuple[str, str]:
    ctx = _get_context(args, args.take("context"))
    raw = args.optional_kw("pair")
    if raw is None and args.pos_index < len(args.positional):
        raw = args._next_positional("pair")
    if raw is not None:
        pairs = [args.as_nelem(raw)]
        described = str(pairs[0])
    else:
        samples = _budget(args, 200)
        pairs = [_rand_nelem(rng, 3) for _ in range(samples)]
        described = f"{samples} random pairs"
    checked = 0
    for n in pairs:
        if n.h.is_zero() and n.f.is_zero():
            continue
        checked += 1
        report = delta_family.irreducibility_criterion_check(ctx, n)
        if not report.holds:
            side = "irreducibility" if report.criterion_applies else "content"
            return "FAIL", f"{side} check fails for {n} (gcd = {report.gcd_hf})"
    return "PASS", f"criterion verified on {described} ({checked} nonzero)"


def _run_conjugation_formula(args: _Args, rng) -> tuple[str, str]:
    from .automorphisms import conjugation_formula_check

    g = args.as_object(args.take("automorphism g"), ("automorphism",))
    f = args.as_poly(args.take("kernel element f"), XYZ)
    u_prime = args.as_object(args.take("automorphism u'"), ("automorphism",))
    d = args.as_poly(args.take("invariant factor d"), XYZ)
    report = conjugation_formula_check(g, f, u_prime, d)
    if not report.holds:
        return "FAIL", f"conjugate is not the predicted modification (mu = {report.mu})"
    return "PASS", f"mu = {report.mu}, orientation {report.orientation}"


def _run_divisor_symmetry_expect(args: _Args, rng) -> tuple[str, str]:
    a = args.as_poly(args.take("divisor polynomial"), ZVAR)
    sym = quotient_geometry.affine_symmetries(a)
    raw_mu = args.optional_kw("mu")
    if raw_mu is not None:
        expected = eval_expr(raw_mu.ast, ()).constant_value()
        if sym.center != expected:
            return "FAIL", f"expected center {expected}, got {sym.center}"
    raw_order = args.optional_kw("order")
    if raw_order is not None:
        if isinstance(raw_order, KeywordValue) and raw_order.word == "torus":
            if not sym.is_torus:
                return "FAIL", f"expected the torus case, got order {sym.order}"
        else:
            expected_order = args.as_int(raw_order, "order", 1, 10**6)
            if sym.order != expected_order:
                return "FAIL", f"expected order {expected_order}, got {sym.order}"
    raw_k0 = args.optional_kw("k0")
    if raw_k0 is not None:
        expected_k0 = args.as_int(raw_k0, "k0", 0, 10**6)
        if sym.lambda_exponent != expected_k0:
            return "FAIL", f"expected k0 = {expected_k0}, got {sym.lambda_exponent}"
    order = "torus" if sym.is_torus else str(sym.order)
    return "PASS", f"center {sym.center}, order {order}, k0 = {sym.lambda_exponent}"


def _run_lift_H(args: _Args, rng) -> tuple[str, str]:
    g = args.as_object(args.take("plane automorphism"), ("planeaut",))
    div = args.as_object(args.take("divisor"), ("divisor",))
    sigma = quotient_geometry.lift_to_H(g, div)
    return "PASS", (
        f"lift ({sigma.pullback_x}, {sigma.pullback_y}, {sigma.pullback_z}) "
        f"centralizes the modified translation"
    )


def _run_pres_lemma(args: _Args, rng) -> tuple[str, str]:
    law_spec = args.as_object(args.take("law"), ("law",))
    law = groupmodel.make_group_law(
        law_spec.mu, law_spec.rho1, law_spec.rho2, law_spec.a_prime, law_spec.nu
    )
    candidates = []
    while args.pos_index < len(args.positional):
        candidates.append(args.as_gelem(args._next_positional("gelem")))
    if not candidates:
        z = Poly.variable(ZP, "z")
        pv = Poly.variable(ZP, "P")
        point = tuple(Fraction(p) for p in (2, 3, 5, 7)[: law.rank])
        candidates = [
            groupmodel.g_identity(law),
            groupmodel.g_elem(point, 0, 0),
            groupmodel.g_elem((Fraction(1),) * law.rank, z, 0),
            groupmodel.g_elem((Fraction(1),) * law.rank, 0, pv),
        ]
    witnesses = [
        groupmodel.derived_witness(law, Poly.one(ZP)),
        groupmodel.derived_witness(law, Poly.variable(ZP, "z")),
        groupmodel.derived_witness(law, Poly.variable(ZP, "z") ** 2),
    ]
    report = groupmodel.verify_pres_lemma(law, witnesses, candidates)
    if not report.holds:
        bad = next(v for v in report.verdicts if not v.consistent)
        return "FAIL", f"candidate {bad.candidate} misclassified"
    survivors = sum(1 for v in report.verdicts if v.centralizes_all)
    return "PASS", (
        f"fiber isolated: {survivors}/{len(report.verdicts)} candidates "
        f"centralize all {len(report.witnesses)} derived witnesses"
    )


def _run_char_commutator(args: _Args, rng) -> tuple[str, str]:
    ctx = _get_context(args, args.take("context"))
    raw_h = args.optional_kw("h")
    if raw_h is not None:
        h = eval_expr(raw_h.ast, ZP)
        f_raw = args.optional_kw("f")
        f = eval_expr(f_raw.ast, ZP) if f_raw is not None else Poly.zero(ZP)
        report = groupmodel.char_commutator_check(ctx, h, f)
        if not report.holds:
            return "FAIL", f"nested commutator differs from {report.expected_factor}.u'"
        return "PASS", f"nested commutator equals ({report.expected_factor}).u'"
    samples = _budget(args, 200)
    for _ in range(samples):
        h = _rand_kernel_poly(rng, 3, z_only=True)
        f = _rand_kernel_poly(rng, 1)
        report = groupmodel.char_commutator_check(ctx, h, f)
        if not report.holds:
            return "FAIL", f"nested commutator fails for h = {h}, f = {f}"
    return "PASS", f"nested commutator identity on {samples} random h"


def _run_nonfence_commutator(args: _Args, rng) -> tuple[str, str]:
    u_prime = args.as_object(args.take("automorphism u'"), ("automorphism",))
    d = args.as_poly(args.take("invariant d"), XYZ)
    t = args.as_object(args.take("torus element t"), ("automorphism",))
    f = args.as_poly(args.take("invariant f"), XYZ)
    v = args.as_poly(args.take("quotient coordinate v"), XYZ)
    k = args.as_int(args.take("power k", key="k"), "k", 0, MAX_K)
    report = groupmodel.nonfence_commutator_check(u_prime, d, t, f, v, k)
    if not report.holds:
        return "FAIL", f"composition differs from the scalar form ({report.scalar})"
    return "PASS", f"scalar {report.scalar}, orientation {report.orientation}"


def _run_fixed_scheme(args: _Args, rng) -> tuple[str, str]:
    div = args.as_object(args.take("divisor"), ("divisor",))
    raw = args.optional_kw("multipliers")
    if raw is not None:
        multipliers = args.as_poly_list(raw, YZ)
    else:
        multipliers = [
            Poly.variable(YZ, "z"),
            Poly.variable(YZ, "y"),
            Poly.variable(YZ, "z") + Poly.one(YZ),
        ]
    report = quotient_geometry.fixed_scheme_check(div, multipliers)
    if not report.holds:
        if not report.divisor_fixed:
            return "FAIL", "witness shear does not fix the divisor pointwise"
        bad = ", ".join(str(m) for m in report.failed_multipliers)
        return "FAIL", f"enlarged subscheme(s) not moved: {bad}"
    return "PASS", (
        f"divisor fixed pointwise; {len(report.moved_multipliers)} enlargements moved"
    )


_HANDLERS = {
    "exp_log_roundtrip": _run_exp_log_roundtrip,
    "one_parameter_group": _run_one_parameter_group,
    "standard_decomposition_expect": _run_standard_decomposition_expect,
    "plinth_expect": _run_plinth_expect,
    "admissible_complement": _run_admissible_complement,
    "ad_identity": _run_ad_identity,
    "n_group_homomorphism": _run_n_group_homomorphism,
    "sat_instance": _run_sat_instance,
    "irreducibility_criterion": _run_irreducibility_criterion,
    "conjugation_formula": _run_conjugation_formula,
    "divisor_symmetry_expect": _run_divisor_symmetry_expect,
    "lift_H": _run_lift_H,
    "pres_lemma": _run_pres_lemma,
    "char_commutator": _run_char_commutator,
    "nonfence_commutator": _run_nonfence_commutator,
    "fixed_scheme": _run_fixed_scheme,
}


def _build_definitions(case: CorpusCase, env: _Env, entries: list[Entry]) -> None:
    for definition in case.definitions:
        kind, name, value = definition.kind, definition.name, definition.value
        try:
            if kind == "context":
                spec: ContextSpec = value
                ctx = delta_family.make_context(
                    spec.P, spec.d, min(spec.deg_max, env.deg_max_cap, MAX_DEG_MAX)
                )
                env.objects[name] = ("context", ctx)
            elif kind == "automorphism" and isinstance(value, tuple):
                _, left, right = value
                g = env.fetch(left, ("automorphism",))
                h = env.fetch(right, ("automorphism",))
                env.objects[name] = ("automorphism", compose(g, h))
            else:
                env.objects[name] = (kind, value)
        except LndError as exc:
            entries.append(Entry(f"{kind} {name}", "ERROR", str(exc)))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            entries.append(Entry(f"{kind} {name}", "ERROR", str(exc)))


def run(
    case: CorpusCase,
    seed: int = 0,
    budget: int | None = None,
    deg_max_cap: int = MAX_DEG_MAX,
) -> Report:
    """Execute all directives in source order.

    `budget` overrides the per-directive sample count when given; `seed`
    fixes the random streams; `deg_max_cap` bounds search degrees so that
    hostile inputs terminate with honest ERROR entries.
    """
    entries: list[Entry] = []
    env = _Env({}, deg_max_cap)
    _build_definitions(case, env, entries)
    for index, directive in enumerate(case.directives):
        name = directive_text(directive)
        rng = random.Random(f"{seed}:{index}:{directive.name}")
        args = _Args(directive, env)
        if budget is not None:
            args.keyword["samples"] = _int_value(budget)
        try:
            outcome = _HANDLERS[directive.name](args, rng)
            verdict, detail = outcome[0], outcome[1]
            extra = outcome[2] if len(outcome) > 2 else ()
            entries.append(Entry(name, verdict, detail, tuple(extra)))
        except LndError as exc:
            entries.append(Entry(name, "ERROR", str(exc)))
        except (ValueError, ZeroDivisionError, OverflowError, KeyError) as exc:
            entries.append(Entry(name, "ERROR", f"{type(exc).__name__}: {exc}"))
    return Report(tuple(entries))
