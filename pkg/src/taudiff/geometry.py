"""Affine differential-algebraic geometry on explicit coordinates.

For X = V(I) in affine n-space the prolongation cone CX lives in the
2n+1 coordinates (x*, tau_x*, tau_e) and is cut out by I together with
one linearized twisted relation per generator.  The two hyperplane
slices tau_e = 1 and tau_e = 0 are the prolongation and the tangent
variety; fiberwise vector addition in the cone makes the prolongation a
torsor under the tangent variety, checked here pointwise in exact
arithmetic.  Morphisms lift to cone coordinates by differentiating the
coordinate images once, with tau_e kept symbolic so a single lift serves
both slices.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ArityMismatch,
    BasePointMismatch,
    ContextMismatch,
    NotAMorphism,
    NotOnVariety,
)
from .ideal import PresentedAlgebra
from .linalg import nullspace, solve_linear
from .poly import Poly, RingCtx, coeff_derivation, embed, evaluate, substitute
from .scalar import FieldElem


class ConeAlgebra:
    """Coordinate data of the prolongation cone of V(I)."""

    __slots__ = ("base", "cone_ctx", "cone_ideal")

    def __init__(self, base, cone_ctx, cone_ideal):
        self.base = base
        self.cone_ctx = cone_ctx
        self.cone_ideal = cone_ideal

    @property
    def n(self):
        return self.base.ctx.n

    def __repr__(self):
        return "ConeAlgebra(%d base vars, %d relations)" % (
            self.n,
            len(self.cone_ideal.gens),
        )


class SlicedVariety:
    """A hyperplane slice of a cone: tau_e = 1 (prolongation) or 0 (tangent)."""

    __slots__ = ("cone", "slice", "ideal")

    def __init__(self, cone, slice_tag, ideal):
        if slice_tag not in ("prolongation", "tangent"):
            raise ValueError("unknown slice %r" % (slice_tag,))
        self.cone = cone
        self.slice = slice_tag
        self.ideal = ideal

    @property
    def n(self):
        return self.cone.n

    def __repr__(self):
        return "SlicedVariety(%s, %d relations)" % (self.slice, len(self.ideal.gens))


class FiberPoint:
    """A point of a slice: base coordinates plus fiber coordinates."""

    __slots__ = ("base_point", "fiber")

    def __init__(self, base_point, fiber):
        self.base_point = tuple(base_point)
        self.fiber = tuple(fiber)
        if len(self.base_point) != len(self.fiber):
            raise ArityMismatch("base and fiber lengths differ")

    def coords(self):
        return self.base_point + self.fiber

    def __eq__(self, other):
        return (
            isinstance(other, FiberPoint)
            and len(self.base_point) == len(other.base_point)
            and all(a == b for a, b in zip(self.coords(), other.coords()))
        )

    __hash__ = None

    def __repr__(self):
        return "FiberPoint(base (%s), fiber (%s))" % (
            ", ".join(str(c) for c in self.base_point),
            ", ".join(str(c) for c in self.fiber),
        )


def _cone_names(ctx):
    names = list(ctx.vars) + ["tau_" + v for v in ctx.vars] + ["tau_e"]
    if len(set(names)) != len(names) or set(names) & set(ctx.base.symbols):
        raise ValueError("variable names collide with cone coordinates")
    return names


def linearized_tau_relation(g, cone_ctx):
    """tau(g) written as a polynomial of degree <= 1 in the tau block:
    sum_i dg/dx_i * tau_x_i + eps(g) * tau_e."""
    n = g.ctx.n
    total = embed(coeff_derivation(g), cone_ctx) * cone_ctx.var(2 * n)
    for i in range(n):
        total = total + embed(g.partial(i), cone_ctx) * cone_ctx.var(n + i)
    return total


def prolongation_cone(B):
    """The cone of V(I): relations I plus one linearized tau(g) per
    generator, in coordinates (x*, tau_x*, tau_e)."""
    ctx = B.ctx
    cone_ctx = RingCtx(ctx.base, _cone_names(ctx), ctx.order)
    gens = []
    for g in B.gens:
        if g.is_zero():
            continue
        gens.append(embed(g, cone_ctx))
    for g in B.gens:
        if g.is_zero():
            continue
        gens.append(linearized_tau_relation(g, cone_ctx))
    cone_ideal = PresentedAlgebra(
        cone_ctx, gens, max_pairs=B.max_pairs, max_degree=B.max_degree
    )
    return ConeAlgebra(B, cone_ctx, cone_ideal)


def _slice_of(cone, value, tag):
    ctx = cone.base.ctx
    n = ctx.n
    cone_ctx = cone.cone_ctx
    slice_ctx = RingCtx(ctx.base, cone_ctx.vars[: 2 * n], ctx.order)
    images = [slice_ctx.var(i) for i in range(2 * n)]
    images.append(slice_ctx.const(value))
    gens = []
    for g in cone.cone_ideal.gens:
        s = substitute(g, slice_ctx, images)
        if not s.is_zero():
            gens.append(s)
    ideal = PresentedAlgebra(
        slice_ctx, gens, max_pairs=cone.base.max_pairs, max_degree=cone.base.max_degree
    )
    return SlicedVariety(cone, tag, ideal)


def prolongation(B):
    """The tau_e = 1 slice of the cone; its relations realize the
    classical prolongation derivation r -> eps(r) + sum dr/dx_i tau_x_i."""
    return _slice_of(prolongation_cone(B), 1, "prolongation")


def tangent_variety(B):
    """The tau_e = 0 slice: base relations plus Jacobian linear forms."""
    return _slice_of(prolongation_cone(B), 0, "tangent")


def prolongation_derivation_image(B, r):
    """Direct image of r under the prolongation derivation, written in
    the tau_e = 1 slice coordinates (independent of the cone route)."""
    ctx = B.ctx
    n = ctx.n
    slice_ctx = RingCtx(ctx.base, _cone_names(ctx)[: 2 * n], ctx.order)
    total = embed(coeff_derivation(r), slice_ctx)
    for i in range(n):
        total = total + embed(r.partial(i), slice_ctx) * slice_ctx.var(n + i)
    return total


class RingMap:
    """Polynomial map X -> Y, stored as the images in O(X) of Y's
    coordinates; checked to send the ideal of Y into the ideal of X."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        images = tuple(images)
        if len(images) != target.ctx.n:
            raise ArityMismatch("need one image per target variable")
        for p in images:
            if p.ctx != source.ctx:
                raise ContextMismatch("image outside the source ring")
        for g in target.gens:
            if not source.normal_form(substitute(g, source.ctx, list(images))).is_zero():
                raise NotAMorphism(
                    "defining equation %s does not pull back into the source ideal" % g
                )
        self.source = source
        self.target = target
        self.images = images

    def apply_point(self, point):
        return tuple(evaluate(p, list(point)) for p in self.images)

    def then(self, second):
        """Composite X -> Y -> Z of self: X -> Y and second: Y -> Z."""
        if second.source is not self.target and second.source != self.target:
            raise ContextMismatch("maps do not compose")
        images = [
            substitute(p, self.source.ctx, list(self.images)) for p in second.images
        ]
        return RingMap(self.source, second.target, images)

    def __repr__(self):
        return "RingMap(%s)" % (", ".join(str(p) for p in self.images),)


class ConeLift:
    """Cone-coordinate lift of a morphism: base coordinates map by f,
    fiber coordinates by the linearized tau of the coordinate images,
    tau_e stays symbolic."""

    __slots__ = ("ringmap", "source_cone", "target_cone", "images")

    def __init__(self, ringmap, source_cone, target_cone, images):
        self.ringmap = ringmap
        self.source_cone = source_cone
        self.target_cone = target_cone
        self.images = tuple(images)

    def slice_images(self, value):
        """Images for the tau_e = value slices of both cones."""
        n_src = self.ringmap.source.ctx.n
        src_slice_ctx = RingCtx(
            self.ringmap.source.ctx.base,
            self.source_cone.cone_ctx.vars[: 2 * n_src],
            self.ringmap.source.ctx.order,
        )
        subs = [src_slice_ctx.var(i) for i in range(2 * n_src)]
        subs.append(src_slice_ctx.const(value))
        return [substitute(p, src_slice_ctx, subs) for p in self.images[:-1]]

    def apply_fiber_point(self, point, value=1):
        """Image of a slice point (tau_e = value) under the sliced lift."""
        images = self.slice_images(value)
        coords = list(point.coords())
        out = [evaluate(p, coords) for p in images]
        m = self.ringmap.target.ctx.n
        return FiberPoint(out[:m], out[m:])

    def then(self, second):
        """Composite lift, by substitution of cone coordinates."""
        images = [
            substitute(p, self.source_cone.cone_ctx, list(self.images))
            for p in second.images
        ]
        return ConeLift(
            self.ringmap.then(second.ringmap),
            self.source_cone,
            second.target_cone,
            images,
        )


def lift_morphism(ringmap):
    """Lift X -> Y to cone coordinates: y_j -> f_j, tau_y_j -> the
    linearized tau(f_j), tau_e -> tau_e."""
    source_cone = prolongation_cone(ringmap.source)
    target_cone = prolongation_cone(ringmap.target)
    cc = source_cone.cone_ctx
    images = []
    for f in ringmap.images:
        images.append(embed(f, cc))
    for f in ringmap.images:
        images.append(linearized_tau_relation(f, cc))
    images.append(cc.var(cc.n - 1))  # tau_e -> tau_e
    return ConeLift(ringmap, source_cone, target_cone, images)


class PointCheck:
    __slots__ = ("ok", "witness", "value")

    def __init__(self, ok, witness=None, value=None):
        self.ok = ok
        self.witness = witness
        self.value = value

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "true"
        return "false(%s -> %s)" % (self.witness, self.value)


def point_on(variety, point):
    """Evaluate every defining equation; true iff all vanish exactly."""
    if isinstance(variety, SlicedVariety):
        algebra = variety.ideal
        if isinstance(point, FiberPoint):
            point = point.coords()
    else:
        algebra = variety
        if isinstance(point, FiberPoint):
            point = point.base_point
    point = list(point)
    if len(point) != algebra.ctx.n:
        raise ArityMismatch(
            "point has %d coordinates, variety lives in %d" % (len(point), algebra.ctx.n)
        )
    for g in algebra.gens:
        value = evaluate(g, point)
        if not value.is_zero():
            return PointCheck(False, witness=g, value=value)
    return PointCheck(True)


def torsor_act(cone, v, w):
    """Act by a tangent vector v on a prolongation point w over the same
    base point: fiberwise vector addition in the cone."""
    if len(v.base_point) != len(w.base_point) or any(
        a != b for a, b in zip(v.base_point, w.base_point)
    ):
        raise BasePointMismatch("tangent vector and point sit over different base points")
    tangent = _slice_of(cone, 0, "tangent")
    prolong = _slice_of(cone, 1, "prolongation")
    for variety, pt in ((tangent, v), (prolong, w)):
        check = point_on(variety, pt)
        if not check.ok:
            raise NotOnVariety(check.witness, check.value)
    result = FiberPoint(
        w.base_point, [a + b for a, b in zip(v.fiber, w.fiber)]
    )
    check = point_on(prolong, result)
    if not check.ok:
        raise NotOnVariety(check.witness, check.value)
    return result


# -- rational point search ---------------------------------------------------


def _candidate_scalars(field):
    """Small-height candidates in K, deterministic order."""
    rats = [0, 1, -1, 2, -2, 3, -3, Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3),
            Fraction(2, 3), Fraction(3, 2), Fraction(-3, 2)]
    out = [field.rat(q) for q in rats]
    e = field.sym(field.designated)
    for q in (1, -1, 2, Fraction(1, 2), Fraction(-1, 2)):
        out.append(e * field.rat(q))
    for q in (1, -1, 2):
        out.append(e + field.rat(q))
        out.append(field.rat(q) - e)
    out.append(1 / e)
    out.append(-1 / e)
    out.append(e * e)
    return out


def rational_points(B, count=3, candidates=None, budget=2500):
    """Search for K-valued points of V(I) with small-height coordinates.

    Deterministic sweep over a fixed candidate list, capped at `budget`
    full-point evaluations; may legitimately find nothing (some
    varieties have no K-points at all).
    """
    ctx = B.ctx
    n = ctx.n
    cands = candidates if candidates is not None else _candidate_scalars(ctx.base)
    gens = [g for g in B.gens if not g.is_zero()]
    found = []
    spent = [0]

    def rec(prefix):
        if len(found) >= count or spent[0] >= budget:
            return
        if len(prefix) == n:
            spent[0] += 1
            for g in gens:
                if not evaluate(g, prefix).is_zero():
                    return
            found.append(tuple(prefix))
            return
        for c in cands:
            rec(prefix + [c])

    rec([])
    return found


def tangent_fiber_vectors(B, base_point, count=2):
    """Vectors in the tangent fiber over the base point: nullspace of the
    Jacobian evaluated there."""
    K = B.ctx.base
    rows = []
    for g in B.gens:
        if g.is_zero():
            continue
        rows.append([evaluate(g.partial(j), list(base_point)) for j in range(B.ctx.n)])
    if not rows:
        basis = [
            tuple(K.one() if i == j else K.zero() for j in range(B.ctx.n))
            for i in range(B.ctx.n)
        ]
        return basis[:count]
    basis = nullspace(rows, K.zero(), K.one())
    out = [tuple(v) for v in basis]
    if len(out) >= 2:
        out.append(tuple(a + b for a, b in zip(out[0], out[1])))
    return out[:count]


def prolongation_fiber_point(B, base_point):
    """One point of the prolongation fiber over the base point, solving
    the affine system J(a) w = -eps(g)(a); None when inconsistent."""
    K = B.ctx.base
    rows = []
    rhs = []
    for g in B.gens:
        if g.is_zero():
            continue
        rows.append([evaluate(g.partial(j), list(base_point)) for j in range(B.ctx.n)])
        rhs.append(K.zero() - evaluate(coeff_derivation(g), list(base_point)))
    if not rows:
        return FiberPoint(base_point, [K.zero()] * B.ctx.n)
    sol = solve_linear(rows, rhs, K.zero(), K.one())
    if sol is None:
        return None
    return FiberPoint(base_point, sol)
