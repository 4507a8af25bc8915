"""Acceptance criteria, one test per criterion.

Every check is exact (tolerance: exact equality of field elements and
polynomials) and each criterion must finish well under a minute.  Each
test prints one pass line; run with `pytest tests/test_acceptance.py -v -s`
to see them.
"""

import pathlib
import random

import pytest

from taudiff.forms import (
    DerivationSpec,
    commutator,
    base_change_iso,
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
from taudiff.geometry import (
    FiberPoint,
    prolongation_derivation_image,
    lift_morphism,
    point_on,
    prolongation,
    prolongation_cone,
    prolongation_fiber_point,
    tangent_fiber_vectors,
    tangent_variety,
    torsor_act,
)
from taudiff.ideal import PresentedAlgebra, groebner_basis, jacobian_smooth_check
from taudiff.linalg import mat_rank
from taudiff.poly import Poly, RingCtx, embed
from taudiff.scalar import BaseField, FieldElem
from taudiff.textio import load_problem_file
from util import field_t, rand_field_elem

PROBLEMS = pathlib.Path(__file__).resolve().parent.parent / "problems"

SMOOTH_ENTRIES = (
    "affine_line",
    "circle_t",
    "circle_unit",
    "hyperbola_t",
    "fermat_cubic_t",
    "sphere_t",
    "ci_line_t",
    "origin_point",
)

_cache = {}


def load(name):
    if name not in _cache:
        _cache[name] = load_problem_file(PROBLEMS / ("%s.prob" % name))
    return _cache[name]


def rand_poly(rng, ctx, max_deg=2, max_terms=3):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(ctx.n))
        c = rand_field_elem(rng, ctx.base)
        if c:
            prev = terms.get(e)
            terms[e] = c if prev is None else prev + c
    return Poly(ctx, {e: c for e, c in terms.items() if c})


def report(num, text):
    print("ACCEPTANCE %2d: %s ... PASS" % (num, text))


def test_criterion_1_free_rank_law():
    # Omega^tau of K[x_1..x_n] is free of rank n+1 with no relations.
    K = field_t()
    for n in (1, 2, 3):
        ctx = RingCtx(K, ["x%d" % i for i in range(1, n + 1)])
        mp = omega_tau_presentation(PresentedAlgebra(ctx))
        assert mp.free_rank == n + 1
        assert mp.relations.nrows == 0
        assert mp.generic_rank() == n + 1
    report(1, "free rank n+1 with zero relations for n in {1,2,3}")


def test_criterion_2_smooth_rank_law():
    # For every smooth corpus entry: rank(omega_tau) = dim + 1 and
    # rank(omega_rel) = dim.
    for name in SMOOTH_ENTRIES:
        prob = load(name)
        dim = prob.assert_dim
        assert jacobian_smooth_check(prob.algebra, dim).smooth, name
        assert omega_tau_presentation(prob.algebra).generic_rank() == dim + 1, name
        assert omega_kahler_presentation(prob.algebra).generic_rank() == dim, name
    report(2, "rank dim+1 / dim on %d smooth entries" % len(SMOOTH_ENTRIES))


def test_criterion_3_exact_sequences():
    # (a) bottom-row rank accounting on prime entries:
    # rank(ker lambda) = rank(omega_tau) - rank(omega_rel) must equal
    # rank(im iota) = rank([iota row; relations]) - rank(relations) = 1
    from taudiff.ideal import QuotientMatrix, generic_rank

    for name in SMOOTH_ENTRIES:
        prob = load(name)
        assert prob.assert_prime
        mp_tau = omega_tau_presentation(prob.algebra)
        mp_kah = omega_kahler_presentation(prob.algebra)
        kernel_rank = mp_tau.generic_rank() - mp_kah.generic_rank()
        rel_rows = [list(r) for r in mp_tau.relations.rows]
        stacked = QuotientMatrix(
            prob.algebra,
            [list(iota(prob.ring.one()).coords)] + rel_rows,
            ncols=prob.ring.n + 1,
        )
        image_rank = generic_rank(stacked) - mp_tau.relation_rank()
        assert kernel_rank == image_rank == 1, name
        assert not mp_tau.is_zero_element(iota(prob.ring.one()).coords), name

    # (b) first-sequence rank additivity on three ring maps
    K = field_t()
    base = PresentedAlgebra(RingCtx(K, []))
    line = PresentedAlgebra(RingCtx(K, ["x"]))
    rep = first_tau_sequence([], base, line)
    assert rep.exact and rep.rank_image + rep.rank_relative == rep.rank_target == 2

    plane = PresentedAlgebra(RingCtx(K, ["x", "y"]))
    rep = first_tau_sequence([plane.ctx.var_named("x")], line, plane)
    assert rep.exact and rep.rank_image + rep.rank_relative == rep.rank_target == 3

    point_ctx = RingCtx(K, ["x"])
    point = PresentedAlgebra(point_ctx, [point_ctx.var(0)])
    rep = first_tau_sequence([point_ctx.var(0)], line, point)
    assert rep.exact and rep.rank_relative == 0 and rep.rank_image == rep.rank_target

    # (c) tau of 100 random ideal elements lies in the generator row span
    rng = random.Random(31)
    checked = 0
    names = [n for n in SMOOTH_ENTRIES if load(n).algebra.gens] + ["nonreduced"]
    spans = {n: omega_tau_presentation(load(n).algebra) for n in names}
    while checked < 100:
        name = names[checked % len(names)]
        prob = load(name)
        f = prob.ring.zero()
        for g in prob.algebra.gens:
            f = f + rand_poly(rng, prob.ring) * g
        assert spans[name].is_zero_element(tau_of(f).coords), name
        checked += 1
    report(3, "sequence accounting, 3 ring maps, 100 random membership checks")


def test_criterion_4_split_sections():
    for name in SMOOTH_ENTRIES:
        prob = load(name)
        res = split_section_search(prob.algebra, 3)
        assert res.found, "no section at degree <= 3 for %s" % name
        assert res.degree <= 3
    report(4, "split sections at degree <= 3 on all %d smooth entries" % len(SMOOTH_ENTRIES))


def test_criterion_5_localization_identity():
    # u^2k tau(f/u^k) + k f u^(k-1) tau(u) - u^k tau(f) = 0, exactly
    rng = random.Random(51)
    ctx = RingCtx(field_t(), ["x", "y"])
    done = 0
    while done < 50:
        f = rand_poly(rng, ctx)
        u = rand_poly(rng, ctx, max_deg=1, max_terms=2)
        if u.is_zero():
            continue
        k = rng.randint(1, 3)
        loc = tau_in_localization(f, u, k)
        assert loc.den == u ** (2 * k)
        residual = loc.num + tau_of(u) * (f * u ** (k - 1) * k) - tau_of(f) * u**k
        assert residual.is_zero()
        done += 1
    report(5, "localization quotient-rule identity on 50 random triples")


def test_criterion_6_base_change_roundtrips():
    B = load("circle_t").algebra
    s = FieldElem.sym(2, 1)
    t = FieldElem.sym(2, 0)
    for ds, label in ((FieldElem.from_rat(2, 0), "0"), (s, "s"), (t, "t")):
        Kp = BaseField(["t", "s"], [1, ds])
        rep = base_change_iso(Kp, B)
        assert rep.roundtrip_identity, "roundtrip failed for d(s)=%s" % label
        assert all(ok for _, ok in rep.formula_checks), label
    report(6, "base change roundtrip identity for d(s) in {0, s, t}")


def test_criterion_7_commutator_closure():
    rng = random.Random(71)
    ctx = RingCtx(field_t(), ["x", "y"])
    for _ in range(20):
        D1 = derivation_from_hom([rand_poly(rng, ctx) for _ in range(3)])
        D2 = derivation_from_hom([rand_poly(rng, ctx) for _ in range(3)])
        assert is_tau_derivation(commutator(D1, D2)).ok

    ddx = DerivationSpec(ctx, [ctx.one(), ctx.zero()], "zero_on_K")
    eps = DerivationSpec(ctx, [ctx.zero(), ctx.zero()], "extends_delta")
    com = commutator(ddx, eps)
    assert all(p.is_zero() for p in com.image_of_vars)
    assert all(p.is_zero() for p in com.base_images())
    report(7, "20 random commutators closed; [d/dx, eps] = 0 exactly")


def test_criterion_8_kernel_dimension():
    u3 = FieldElem.sym(3, 1)
    fields = [
        BaseField(["t"], [1]),
        BaseField(["t", "u"], [1, FieldElem.sym(2, 1)]),
        BaseField(["t", "u", "w"], [1, u3, 0]),
    ]
    for K in fields:
        kb = kernel_basis(K)
        assert len(kb) == K.m - 1
        for vec in kb.vectors:
            assert delta_tilde_field(vec, K).is_zero()
        if kb.vectors:
            assert mat_rank([list(v) for v in kb.vectors]) == len(kb)
    report(8, "kernel basis has m-1 independent annihilated vectors, m in {1,2,3}")


def test_criterion_9_geometry_suite():
    # slice coherence via reduced-basis string identity, both routes
    for name in ("circle_t", "circle_unit", "hyperbola_t", "ci_line_t"):
        prob = load(name)
        B = prob.algebra
        gens = [g for g in B.gens if not g.is_zero()]
        pr = prolongation(B)
        tg = tangent_variety(B)
        slice_ctx = pr.ideal.ctx
        direct_pr = [embed(g, slice_ctx) for g in gens]
        direct_pr += [prolongation_derivation_image(B, g) for g in gens]
        direct_tg = [embed(g, slice_ctx) for g in gens]
        for g in gens:
            lin = slice_ctx.zero()
            for i in range(B.ctx.n):
                lin = lin + embed(g.partial(i), slice_ctx) * slice_ctx.var(B.ctx.n + i)
            direct_tg.append(lin)
        assert [str(p) for p in groebner_basis(pr.ideal)] == [
            str(p) for p in groebner_basis(PresentedAlgebra(slice_ctx, direct_pr))
        ], name
        assert [str(p) for p in groebner_basis(tg.ideal)] == [
            str(p) for p in groebner_basis(PresentedAlgebra(slice_ctx, direct_tg))
        ], name

    # disjointness certificate on the cone
    for name in ("circle_t", "hyperbola_t"):
        cone = prolongation_cone(load(name).algebra)
        cc = cone.cone_ctx
        te = cc.var(cc.n - 1)
        assert te - (te - 1) == cc.one()
        combined = PresentedAlgebra(cc, list(cone.cone_ideal.gens) + [te, te - 1])
        assert combined.contains(cc.one())

    # torsor laws at >= 3 rational sample points
    prob = load("hyperbola_t")
    B = prob.algebra
    cone = prolongation_cone(B)
    tg = tangent_variety(B)
    pr = prolongation(B)
    bases = list(prob.points.values())
    assert len(bases) >= 3
    actions = 0
    for a in bases:
        w = prolongation_fiber_point(B, a)
        assert w is not None and point_on(pr, w).ok
        for vec in tangent_fiber_vectors(B, a, count=2):
            v = FiberPoint(a, vec)
            moved = torsor_act(cone, v, w)
            assert point_on(pr, moved).ok
            diff = FiberPoint(a, tuple(x - y for x, y in zip(moved.fiber, w.fiber)))
            assert point_on(tg, diff).ok
            actions += 1
    assert actions >= 3

    # lift functoriality on two composable morphisms, and equivariance
    chain = load("chain_maps")
    f, g = chain.morphisms
    lhs = lift_morphism(f.then(g))
    rhs = lift_morphism(f).then(lift_morphism(g))
    assert all(a == b for a, b in zip(lhs.images, rhs.images))

    hy = load("hyperbola_t")
    proj = hy.morphisms[0]
    lift = lift_morphism(proj)
    K = hy.field
    a = hy.points["a"]
    w = FiberPoint(a, hy.fibers["w"][1])
    v = FiberPoint(a, hy.fibers["v"][1])
    moved = torsor_act(prolongation_cone(hy.algebra), v, w)
    fw = lift.apply_fiber_point(w, 1)
    dfv = lift.apply_fiber_point(v, 0)
    expect = FiberPoint(fw.base_point, tuple(b + c for b, c in zip(fw.fiber, dfv.fiber)))
    assert lift.apply_fiber_point(moved, 1) == expect
    report(9, "slice coherence, disjointness, torsor laws, lift functoriality")


def test_criterion_10_derivation_coincidence():
    checked = 0
    for path in sorted(PROBLEMS.glob("*.prob")):
        prob = load_problem_file(path)
        B = prob.algebra
        gens = [g for g in B.gens if not g.is_zero()]
        if not gens:
            continue
        pr = prolongation(B)
        tau_rels = pr.ideal.gens[len(gens):]
        assert len(tau_rels) == len(gens)
        for g, rel in zip(gens, tau_rels):
            assert str(prolongation_derivation_image(B, g)) == str(rel), path.name
            checked += 1
    assert checked >= 8
    report(10, "prolongation derivation matches slice relations on %d generators" % checked)


def test_criterion_11_transcendence_basis():
    ctx = RingCtx(field_t(), ["x"])
    x = ctx.var(0)
    t = ctx.base.sym("t")
    assert tau_basis_check([x]).is_basis
    assert tau_basis_check([x * x]).is_basis
    verdict = tau_basis_check([ctx.const(t + 1)])
    assert not verdict.is_basis
    report(11, "transcendence-basis criterion verdicts: basis, basis, not_basis")
