"""Named verification suites over a problem file.

Each suite checks one family of structural identities on the file's
algebra in exact arithmetic and reports pass/fail with a witness, or a
skip notice when a hypothesis (smoothness assertion, rational points,
declared morphisms) is absent.  Randomized samples use fixed seeds, so
output is deterministic for a fixed input.
"""

from __future__ import annotations

import random

from .errors import NotADomainSuspected
from .forms import (
    DerivationSpec,
    ModulePresentation,
    base_change_iso,
    commutator,
    delta_tilde_field,
    derivation_from_hom,
    first_tau_sequence,
    iota,
    is_tau_derivation,
    kernel_basis,
    omega_kahler_presentation,
    omega_tau_presentation,
    split_section_search,
    tau_basis_check,
    tau_in_localization,
    tau_of,
)
from .geometry import (
    FiberPoint,
    prolongation_derivation_image,
    lift_morphism,
    point_on,
    prolongation,
    prolongation_cone,
    prolongation_fiber_point,
    rational_points,
    tangent_fiber_vectors,
    tangent_variety,
    torsor_act,
)
from .ideal import PresentedAlgebra, groebner_basis, jacobian_smooth_check
from .linalg import mat_rank
from .poly import Poly, RingCtx, coeff_derivation, partial_derivative
from .scalar import BaseField, FieldElem, embed_field_elem

SUITE_ORDER = (
    "leibniz",
    "sequences",
    "split",
    "localization",
    "basechange",
    "commutator",
    "kernel",
    "torsor",
    "slices",
    "lift-equivariance",
    "basis",
)

_SEED = 0x7A0D1FF


class CheckResult:
    __slots__ = ("name", "passed", "skipped", "lines")

    def __init__(self, name):
        self.name = name
        self.passed = True
        self.skipped = False
        self.lines = []

    def note(self, text):
        self.lines.append(text)

    def fail(self, witness):
        self.passed = False
        self.lines.append("witness: %s" % witness)

    def skip(self, reason):
        self.skipped = True
        self.lines.append("skipped: %s" % reason)

    @property
    def status(self):
        if self.skipped and self.passed:
            return "skip"
        return "pass" if self.passed else "FAIL"


def _rng(salt):
    return random.Random(_SEED + salt)


def _rand_field_elem(rng, field):
    num = {}
    for _ in range(rng.randint(0, 2)):
        exp = tuple(rng.randint(0, 2) for _ in range(field.m))
        num[exp] = num.get(exp, 0) + rng.randint(-3, 3)
    from .scalar import QPoly
    from fractions import Fraction

    return FieldElem(QPoly(field.m, {e: Fraction(c) for e, c in num.items() if c}))


def _rand_poly(rng, ctx, max_deg=2, max_terms=3):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(ctx.n))
        c = _rand_field_elem(rng, ctx.base)
        if c:
            prev = terms.get(e)
            terms[e] = c if prev is None else prev + c
    return Poly(ctx, {e: c for e, c in terms.items() if c})


def _smooth_gate(prob, result):
    """Smoothness hypothesis: needs a dim assertion and a passing check."""
    if prob.assert_dim is None:
        result.skip("no dim assertion in the input file")
        return None
    report = jacobian_smooth_check(prob.algebra, prob.assert_dim)
    if not report.smooth:
        result.skip("smoothness not verified: %s" % report.witness)
        return None
    return report


# -- suites ------------------------------------------------------------------


def check_leibniz(prob, options):
    result = CheckResult("leibniz")
    rng = _rng(1)
    ctx = prob.ring
    K = prob.field
    for i in range(10):
        f = _rand_poly(rng, ctx)
        g = _rand_poly(rng, ctx)
        if tau_of(f * g) != tau_of(g) * f + tau_of(f) * g:
            result.fail("tau(fg) != f tau g + g tau f for f=%s, g=%s" % (f, g))
            return result
        if coeff_derivation(f * g) != f * coeff_derivation(g) + g * coeff_derivation(f):
            result.fail("eps not Leibniz for f=%s, g=%s" % (f, g))
            return result
        for j in range(1, ctx.n + 1):
            if coeff_derivation(partial_derivative(f, j)) != partial_derivative(
                coeff_derivation(f), j
            ):
                result.fail("eps does not commute with d/dx_%d on %s" % (j, f))
                return result
    for _ in range(10):
        a = _rand_field_elem(rng, K)
        if tau_of(ctx.const(a)) != iota(ctx.one()) * ctx.const(K.derive(a)):
            result.fail("tau(a) != delta(a) tau_e for a=%s" % a)
            return result
    result.note("10 product samples, 10 scalar samples, all exact")
    return result


def check_sequences(prob, options):
    result = CheckResult("sequences")
    B = prob.algebra
    ctx = prob.ring
    mp_tau = omega_tau_presentation(B)

    gens = [g for g in B.gens if not g.is_zero()]
    if gens:
        rng = _rng(2)
        trials = options.get("sequence_samples", 20)
        for _ in range(trials):
            f = ctx.zero()
            for g in gens:
                f = f + _rand_poly(rng, ctx) * g
            if not mp_tau.is_zero_element(tau_of(f).coords):
                result.fail("tau of ideal element %s escapes the relation row span" % f)
                return result
        result.note("tau of %d random ideal elements lies in the generator rows" % trials)

    if not prob.assert_prime:
        result.note("rank checks skipped (ideal not asserted prime)")
        return result

    mp_kah = omega_kahler_presentation(B)
    rank_tau = mp_tau.generic_rank()
    rank_kah = mp_kah.generic_rank()
    if rank_tau != rank_kah + 1:
        result.fail(
            "rank accounting: rank(omega_tau)=%d, rank(omega_rel)=%d"
            % (rank_tau, rank_kah)
        )
        return result
    if mp_tau.is_zero_element(iota(ctx.one()).coords):
        result.fail("iota(1) = tau_e is zero in the presented module")
        return result
    result.note("ker(lambda)/im(iota) rank accounting: %d = %d + 1" % (rank_tau, rank_kah))

    # first sequence along K -> B and along the ambient cover K[x] -> B
    base_ring = PresentedAlgebra(RingCtx(prob.field, [], ctx.order))
    rep = first_tau_sequence([], base_ring, B)
    if not rep.image_in_kernel:
        result.fail("first sequence: im(alpha) not inside ker(beta) for K -> B")
        return result
    ambient = PresentedAlgebra(ctx)
    rep2 = first_tau_sequence([ctx.var(i) for i in range(ctx.n)], ambient, B)
    if not rep2.image_in_kernel:
        result.fail("first sequence: im(alpha) not inside ker(beta) for K[x] -> B")
        return result
    if rep2.rank_relative != 0 or rep2.rank_image != rep2.rank_target:
        result.fail(
            "quotient map right-exactness: image rank %d, target rank %d, tail %d"
            % (rep2.rank_image, rep2.rank_target, rep2.rank_relative)
        )
        return result
    smooth = None
    if prob.assert_dim is not None:
        smooth = jacobian_smooth_check(B, prob.assert_dim)
    if smooth is not None and smooth.smooth:
        if not rep.additive:
            result.fail(
                "rank additivity fails for K -> B: %d + %d != %d"
                % (rep.rank_image, rep.rank_relative, rep.rank_target)
            )
            return result
        result.note(
            "first-sequence additivity: %d + %d = %d"
            % (rep.rank_image, rep.rank_relative, rep.rank_target)
        )
    return result


def check_split(prob, options):
    result = CheckResult("split")
    if _smooth_gate(prob, result) is None:
        return result
    bound = options.get("degree_bound", 3)
    res = split_section_search(prob.algebra, bound)
    if not res.found:
        result.fail("no section of the affine ansatz at degree bound %d" % bound)
        return result
    result.note("section found at degree %d:" % res.degree)
    for i, row in enumerate(res.rows):
        result.note("  d_%s -> %s" % (prob.ring.vars[i], row))
    return result


def check_localization(prob, options):
    result = CheckResult("localization")
    rng = _rng(3)
    ctx = prob.ring
    trials = options.get("localization_samples", 10)
    done = 0
    while done < trials:
        f = _rand_poly(rng, ctx)
        u = _rand_poly(rng, ctx, max_deg=1, max_terms=2)
        if u.is_zero():
            continue
        k = rng.randint(1, 3)
        loc = tau_in_localization(f, u, k)
        lhs = tau_of(f) * (u**k)
        rhs = tau_of(u**k) * f + loc.num
        if any(a != b for a, b in zip(lhs.coords, rhs.coords)):
            result.fail("quotient rule identity fails for f=%s, u=%s, k=%d" % (f, u, k))
            return result
        done += 1
    result.note("%d random (f, u, k) localizations verified exactly" % trials)
    return result


def _fresh_symbol(field, taken=(), start="s"):
    name = start
    while name in field.symbols or name in taken:
        name = name + "_"
    return name


def check_basechange(prob, options):
    result = CheckResult("basechange")
    K = prob.field
    m = K.m
    new = _fresh_symbol(K, taken=prob.ring.vars)
    index = list(range(m))
    embedded = [embed_field_elem(img, index, m + 1) for img in K.derivation_images]
    s_elem = FieldElem.sym(m + 1, m)
    e_elem = FieldElem.sym(m + 1, K.designated)
    choices = [("0", FieldElem.from_rat(m + 1, 0)), (new, s_elem), (K.symbols[K.designated], e_elem)]
    for label, image in choices:
        Kp = BaseField(list(K.symbols) + [new], embedded + [image])
        rep = base_change_iso(Kp, prob.algebra)
        if not rep.roundtrip_identity:
            result.fail("roundtrip not the identity for d(%s) = %s" % (new, label))
            return result
        bad = [lbl for lbl, ok in rep.formula_checks if not ok]
        if bad:
            result.fail("tensor formula fails at %s for d(%s) = %s" % (bad[0], new, label))
            return result
        result.note("extension with d(%s) = %s: roundtrip and %d formula samples exact"
                    % (new, label, len(rep.formula_checks)))
    return result


def check_commutator(prob, options):
    result = CheckResult("commutator")
    rng = _rng(4)
    ctx = prob.ring
    trials = options.get("commutator_samples", 10)
    for _ in range(trials):
        h1 = [_rand_poly(rng, ctx) for _ in range(ctx.n + 1)]
        h2 = [_rand_poly(rng, ctx) for _ in range(ctx.n + 1)]
        D1 = derivation_from_hom(h1)
        D2 = derivation_from_hom(h2)
        com = commutator(D1, D2)
        if not is_tau_derivation(com).ok:
            result.fail("commutator of %r and %r fails the compatibility check" % (D1, D2))
            return result
        rev = commutator(D2, D1)
        if any((a + b) != ctx.zero() for a, b in zip(com.image_of_vars, rev.image_of_vars)):
            result.fail("commutator not antisymmetric for %r, %r" % (D1, D2))
            return result
    ddx = DerivationSpec(ctx, [ctx.one()] + [ctx.zero()] * (ctx.n - 1), "zero_on_K")
    eps = DerivationSpec(ctx, [ctx.zero()] * ctx.n, "extends_delta")
    com = commutator(ddx, eps)
    if any(not p.is_zero() for p in com.image_of_vars) or any(
        not p.is_zero() for p in com.base_images()
    ):
        result.fail("[d/dx, eps] is not the zero derivation")
        return result
    result.note("%d random commutators closed and antisymmetric; [d/dx, eps] = 0" % trials)
    return result


def check_kernel(prob, options):
    result = CheckResult("kernel")
    K = prob.field
    kb = kernel_basis(K)
    if len(kb) != K.m - 1:
        result.fail("kernel basis has %d vectors, expected %d" % (len(kb), K.m - 1))
        return result
    for vec in kb.vectors:
        image = delta_tilde_field(vec, K)
        if not image.is_zero():
            result.fail("delta-tilde does not kill %s" % (vec,))
            return result
    if kb.vectors and mat_rank([list(v) for v in kb.vectors]) != len(kb.vectors):
        result.fail("kernel vectors are linearly dependent")
        return result
    result.note("%d kernel vectors, all annihilated and independent" % len(kb))
    return result


def _classified_fiber_points(prob):
    """Base points with tangent vectors and prolongation points, from the
    file's declarations supplemented by solving the fiber systems."""
    B = prob.algebra
    K = prob.field
    bases = list(prob.points.values())
    if len(bases) < 3:
        for p in rational_points(B, count=3 - len(bases)):
            if p not in bases:
                bases.append(p)
    tangent = tangent_variety(B)
    prolong = prolongation(B)
    samples = []
    declared = {}
    for name, (base_name, coords) in prob.fibers.items():
        declared.setdefault(base_name, []).append(FiberPoint(prob.points[base_name], coords))
    for base in bases:
        if not point_on(B, base).ok:
            continue
        tangents = []
        prolongs = []
        for name, pt in prob.points.items():
            if pt != base:
                continue
            for fp in declared.get(name, []):
                if point_on(tangent, fp).ok:
                    tangents.append(fp)
                elif point_on(prolong, fp).ok:
                    prolongs.append(fp)
        for vec in tangent_fiber_vectors(B, base, count=2):
            fp = FiberPoint(base, vec)
            if all(fp != other for other in tangents):
                tangents.append(fp)
        if not tangents:
            # zero-dimensional tangent fiber: the zero vector still
            # witnesses the identity action
            tangents.append(FiberPoint(base, tuple(K.zero() for _ in range(B.ctx.n))))
        w = prolongation_fiber_point(B, base)
        if w is not None and all(w != other for other in prolongs):
            prolongs.append(w)
        if tangents and prolongs:
            samples.append((base, tangents, prolongs))
    return samples


def check_torsor(prob, options):
    result = CheckResult("torsor")
    B = prob.algebra
    samples = _classified_fiber_points(prob)
    if not samples:
        result.skip("no rational sample points found at small height")
        return result
    cone = prolongation_cone(B)
    tangent = tangent_variety(B)
    prolong = prolongation(B)
    K = prob.field
    acted = 0
    for base, tangents, prolongs in samples:
        w = prolongs[0]
        for v in tangents:
            moved = torsor_act(cone, v, w)
            if not point_on(prolong, moved).ok:
                result.fail("action left the prolongation at base %s" % (base,))
                return result
            acted += 1
            diff = FiberPoint(base, tuple(a - b for a, b in zip(moved.fiber, w.fiber)))
            if not point_on(tangent, diff).ok:
                result.fail("difference of prolongation points misses the tangent fiber")
                return result
        zero = FiberPoint(base, tuple(K.zero() for _ in range(B.ctx.n)))
        if torsor_act(cone, zero, w) != w:
            result.fail("zero vector does not act as the identity at base %s" % (base,))
            return result
    result.note(
        "torsor laws verified at %d base points (%d actions)" % (len(samples), acted)
    )
    return result


def check_slices(prob, options):
    result = CheckResult("slices")
    B = prob.algebra
    ctx = prob.ring
    gens = [g for g in B.gens if not g.is_zero()]
    cone = prolongation_cone(B)
    pr = prolongation(B)
    tg = tangent_variety(B)

    # direct slice construction, bypassing the cone
    slice_ctx = pr.ideal.ctx
    from .poly import embed

    direct_pr = [embed(g, slice_ctx) for g in gens]
    direct_pr += [prolongation_derivation_image(B, g) for g in gens]
    direct_tg = [embed(g, slice_ctx) for g in gens]
    for g in gens:
        total = slice_ctx.zero()
        for i in range(ctx.n):
            total = total + embed(g.partial(i), slice_ctx) * slice_ctx.var(ctx.n + i)
        direct_tg.append(total)

    def gb_strings(algebra):
        return [str(p) for p in groebner_basis(algebra)]

    if gb_strings(pr.ideal) != gb_strings(PresentedAlgebra(slice_ctx, direct_pr)):
        result.fail("prolongation slice differs from the direct construction")
        return result
    if gb_strings(tg.ideal) != gb_strings(PresentedAlgebra(slice_ctx, direct_tg)):
        result.fail("tangent slice differs from the direct construction")
        return result
    result.note("slice coherence: reduced bases identical for both routes")

    for direct, sliced, tag in ((direct_pr, pr, "prolongation"), (direct_tg, tg, "tangent")):
        for g in direct:
            if not sliced.ideal.contains(g):
                result.fail("%s relation %s missing from the substituted cone ideal" % (tag, g))
                return result
    result.note("cone surjects onto both slices")

    te = cone.cone_ctx.var(cone.cone_ctx.n - 1)
    combined = PresentedAlgebra(
        cone.cone_ctx, list(cone.cone_ideal.gens) + [te, te - 1]
    )
    if te - (te - 1) != cone.cone_ctx.one() or not combined.contains(cone.cone_ctx.one()):
        result.fail("slice disjointness certificate 1 = tau_e - (tau_e - 1) fails")
        return result
    result.note("disjointness certificate: 1 = tau_e - (tau_e - 1) in the combined ideal")

    n_gens = len(gens)
    tau_rels = pr.ideal.gens[n_gens:]
    for g, rel in zip(gens, tau_rels):
        if str(prolongation_derivation_image(B, g)) != str(rel):
            result.fail("prolongation relation of %s differs from the direct image" % g)
            return result
    result.note("prolongation derivation matches the slice relations on all generators")

    if prob.assert_dim is not None:
        report = jacobian_smooth_check(B, prob.assert_dim)
        if report.smooth:
            # degree-<=1 part of the prolongation ring, decomposed from
            # the actual slice relations (independent of tau_of)
            rows = []
            for rel in pr.ideal.gens[len(gens):]:
                row = [ctx.zero() for _ in range(ctx.n + 1)]
                for e, c in rel.terms.items():
                    head, tail = e[: ctx.n], e[ctx.n :]
                    if sum(tail) == 0:
                        row[0] = row[0] + Poly(ctx, {head: c})
                    elif sum(tail) == 1:
                        j = tail.index(1)
                        row[j + 1] = row[j + 1] + Poly(ctx, {head: c})
                    else:
                        result.fail("slice relation %s is not affine in the fiber" % rel)
                        return result
                rows.append(row)
            part = ModulePresentation(
                B, ctx.n + 1, rows, ("one",) + tuple("tau_" + v for v in ctx.vars)
            )
            rank = part.generic_rank()
            tau_rank = omega_tau_presentation(B).generic_rank()
            if rank != prob.assert_dim + 1 or rank != tau_rank:
                result.fail(
                    "embedded degree-1 part has rank %d, expected dim+1 = %d"
                    % (rank, prob.assert_dim + 1)
                )
                return result
            result.note("embedding: degree-1 part has rank dim+1 = %d" % rank)
    return result


def check_lift_equivariance(prob, options):
    result = CheckResult("lift-equivariance")
    if not prob.morphisms:
        result.skip("no morphism declared in the input file")
        return result
    f = prob.morphisms[0]
    lift_f = lift_morphism(f)
    if len(prob.morphisms) >= 2:
        g = prob.morphisms[1]
        composite = f.then(g)
        lhs = lift_morphism(composite)
        rhs = lift_f.then(lift_morphism(g))
        if any(a != b for a, b in zip(lhs.images, rhs.images)):
            result.fail("lift of the composite differs from the composite of lifts")
            return result
        result.note("functoriality: lift(g o f) = lift(g) o lift(f)")
    samples = _classified_fiber_points(prob)
    if not samples:
        result.note("equivariance skipped: no sample points")
        return result
    cone = prolongation_cone(prob.algebra)
    checked = 0
    for base, tangents, prolongs in samples:
        w = prolongs[0]
        for v in tangents:
            moved = torsor_act(cone, v, w)
            lhs = lift_f.apply_fiber_point(moved, 1)
            fw = lift_f.apply_fiber_point(w, 1)
            dfv = lift_f.apply_fiber_point(v, 0)
            rhs = FiberPoint(fw.base_point, tuple(b + c for b, c in zip(fw.fiber, dfv.fiber)))
            if lhs != rhs:
                result.fail("equivariance fails at base %s" % (base,))
                return result
            checked += 1
    result.note("equivariance verified at %d samples" % checked)
    return result


def check_basis(prob, options):
    result = CheckResult("basis")
    ctx = prob.ring
    xs = [ctx.var(i) for i in range(ctx.n)]
    verdict = tau_basis_check(xs)
    if not verdict.is_basis:
        result.fail("coordinate set rejected: %s" % verdict.reason)
        return result
    squared = [xs[0] * xs[0]] + xs[1:]
    verdict = tau_basis_check(squared)
    if not verdict.is_basis:
        result.fail("squared coordinate set rejected: %s" % verdict.reason)
        return result
    e = ctx.base.sym(ctx.base.designated)
    constant = [ctx.const(e + 1)] + xs[1:]
    verdict = tau_basis_check(constant)
    if verdict.is_basis:
        result.fail("constant candidate accepted as a basis element")
        return result
    result.note("coordinates and squares accepted, constants rejected")
    return result


_SUITES = {
    "leibniz": check_leibniz,
    "sequences": check_sequences,
    "split": check_split,
    "localization": check_localization,
    "basechange": check_basechange,
    "commutator": check_commutator,
    "kernel": check_kernel,
    "torsor": check_torsor,
    "slices": check_slices,
    "lift-equivariance": check_lift_equivariance,
    "basis": check_basis,
}


def run_check(name, prob, **options):
    if name not in _SUITES:
        raise KeyError(name)
    return _SUITES[name](prob, options)


def run_all(prob, **options):
    return [run_check(name, prob, **options) for name in SUITE_ORDER]
