"""Ideals in K[x]: Buchberger bases, normal forms, ranks over quotients.

The reduced Groebner basis is the canonical object everything else rests
on: ideal membership, module membership (through a tag-variable
idealization), generic ranks over the fraction field of a quotient
domain, and the Jacobian smoothness gate.

Primality of ideals is never computed here; callers assert it.  Rank
operations watch for products of nonzero normal forms reducing to zero
and raise NotADomainSuspected with the witness pair when the assertion
fails in practice.
"""

from __future__ import annotations

from .errors import (
    ContextMismatch,
    NotADomainSuspected,
    ResourceLimit,
)
from .monomials import mono_deg, mono_div, mono_divides, mono_lcm, mono_mul
from .poly import Poly, RingCtx, embed
from .scalar import FieldElem, QPoly, qpoly_gcd

DEFAULT_MAX_PAIRS = 10000


def primitive_scale(f):
    """Multiply f by the unit of K that clears coefficient denominators,
    removes common polynomial/integer content and makes the leading
    coefficient's leading rational positive."""
    if f.is_zero():
        return f
    nsyms = f.ctx.base.m
    den_lcm = QPoly.const(nsyms, 1)
    for c in f.terms.values():
        g = qpoly_gcd(den_lcm, c.den)
        den_lcm = den_lcm.divexact(g) * c.den
    f = f * FieldElem(den_lcm)
    content = QPoly.zero(nsyms)
    for c in f.terms.values():
        content = qpoly_gcd(content, c.num)
        if content.is_const():
            break
    if not content.is_const():
        f = f * FieldElem(QPoly.const(nsyms, 1), content)
    from .scalar import _rat_primitive_scale

    coeffs = []
    for c in f.terms.values():
        coeffs.extend(c.num.terms.values())
    scale = _rat_primitive_scale(coeffs)
    _, lead_coeff = f.leading()
    _, lead_rat = lead_coeff.num.leading()
    if lead_rat * scale < 0:
        scale = -scale
    return f * FieldElem(QPoly.const(nsyms, scale))


def reduce_full(f, basis, with_cofactors=False):
    """Remainder of multivariate division of f by the list `basis`.

    Returns (remainder, cofactors) with f = sum(cofactors[i]*basis[i]) +
    remainder and no remainder term divisible by any leading monomial.
    """
    ctx = f.ctx
    rem_terms = {}
    work = f
    cofactors = [ctx.zero() for _ in basis] if with_cofactors else None
    leads = [g.leading() for g in basis]
    while work.terms:
        wexp, wc = work.leading()
        hit = None
        for i, (gexp, gc) in enumerate(leads):
            q = mono_div(wexp, gexp)
            if q is not None:
                hit = (i, q, wc / gc)
                break
        if hit is None:
            rem_terms[wexp] = wc
            work = Poly(ctx, {e: c for e, c in work.terms.items() if e != wexp})
            continue
        i, q, c = hit
        mult = Poly(ctx, {q: c})
        work = work - mult * basis[i]
        if with_cofactors:
            cofactors[i] = cofactors[i] + mult
    return Poly(ctx, rem_terms), cofactors


def _spoly(f, g):
    fexp, fc = f.leading()
    gexp, gc = g.leading()
    lcm = mono_lcm(fexp, gexp)
    mf = Poly(f.ctx, {mono_div(lcm, fexp): gc})
    mg = Poly(f.ctx, {mono_div(lcm, gexp): fc})
    return mf * f - mg * g


def buchberger(gens, max_pairs=DEFAULT_MAX_PAIRS, max_degree=None):
    """Unique reduced Groebner basis of <gens> for the ring's order.

    Pair selection: minimal lcm degree, ties by pair index.  Raises
    ResourceLimit when more than max_pairs pairs are processed or a
    basis element exceeds max_degree.
    """
    basis = [primitive_scale(g) for g in gens if not g.is_zero()]
    if not basis:
        return ()
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    processed = 0
    while pairs:
        best = min(
            pairs,
            key=lambda p: (
                mono_deg(mono_lcm(basis[p[0]].leading()[0], basis[p[1]].leading()[0])),
                p,
            ),
        )
        pairs.discard(best)
        processed += 1
        if processed > max_pairs:
            raise ResourceLimit(
                "pair queue exceeded %d pairs" % max_pairs, kind="pairs"
            )
        i, j = best
        fexp = basis[i].leading()[0]
        gexp = basis[j].leading()[0]
        if mono_lcm(fexp, gexp) == mono_mul(fexp, gexp):
            continue  # coprime leading monomials: S-poly reduces to 0
        s = _spoly(basis[i], basis[j])
        r, _ = reduce_full(s, basis)
        if r.is_zero():
            continue
        r = primitive_scale(r)
        if max_degree is not None and r.total_degree() > max_degree:
            raise ResourceLimit(
                "basis degree exceeded %d" % max_degree, kind="degree"
            )
        basis.append(r)
        k = len(basis) - 1
        pairs.update((i2, k) for i2 in range(k))
    return _reduce_basis(basis)


def _reduce_basis(basis):
    """Inter-reduce to the unique reduced (monic) Groebner basis."""
    # minimal: drop any element whose leading monomial another divides
    keep = []
    for i, f in enumerate(basis):
        fexp = f.leading()[0]
        redundant = False
        for j, g in enumerate(basis):
            if i == j:
                continue
            gexp = g.leading()[0]
            if mono_divides(gexp, fexp) and (gexp != fexp or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(f)
    # tail-reduce each against the others, make monic
    reduced = []
    for i, f in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        r, _ = reduce_full(f, others) if others else (f, None)
        if r.is_zero():
            continue
        _, lc = r.leading()
        one = r.ctx.base.one()
        if lc != one:
            r = r * (one / lc)
        reduced.append(r)
    reduced.sort(key=lambda g: g.ctx._key(g.leading()[0]), reverse=True)
    return tuple(reduced)


class PresentedAlgebra:
    """K[x1..xn]/<gens> with a lazily cached reduced Groebner basis.

    The gb cache is write-once; concurrent readers after the first
    computation are safe.
    """

    __slots__ = ("ctx", "gens", "max_pairs", "max_degree", "assume_prime", "_gb")

    def __init__(self, ctx, gens=(), max_pairs=DEFAULT_MAX_PAIRS, max_degree=None,
                 assume_prime=False):
        gens = tuple(gens)
        for g in gens:
            if g.ctx != ctx:
                raise ContextMismatch("generator from a different ring")
        self.ctx = ctx
        self.gens = gens
        self.max_pairs = max_pairs
        self.max_degree = max_degree
        self.assume_prime = assume_prime
        self._gb = None

    @property
    def gb(self):
        if self._gb is None:
            self._gb = buchberger(self.gens, self.max_pairs, self.max_degree)
        return self._gb

    def normal_form(self, f, with_cofactors=False):
        if f.ctx != self.ctx:
            raise ContextMismatch("normal form of a polynomial from another ring")
        gb = self.gb
        if not gb:
            return (f, []) if with_cofactors else f
        r, cof = reduce_full(f, list(gb), with_cofactors=with_cofactors)
        return (r, cof) if with_cofactors else r

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_trivial(self):
        """True when the ideal is the whole ring."""
        gb = self.gb
        return len(gb) == 1 and gb[0].is_const()

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAlgebra)
            and self.ctx == other.ctx
            and all(a == b for a, b in zip(self.gb, other.gb))
            and len(self.gb) == len(other.gb)
        )

    __hash__ = None

    def __repr__(self):
        return "PresentedAlgebra(%r, %d gens)" % (self.ctx, len(self.gens))


def groebner_basis(algebra):
    """The unique reduced Groebner basis, as a list."""
    return list(algebra.gb)


def normal_form(f, algebra):
    """Division remainder of f against the cached basis; zero iff f is
    in the ideal."""
    return algebra.normal_form(f)


class QuotientMatrix:
    """Matrix of ring elements interpreted modulo the ideal.

    Entries are stored in normal form with respect to the cached basis.
    """

    __slots__ = ("algebra", "rows", "ncols")

    def __init__(self, algebra, rows, ncols=None):
        nf_rows = []
        width = ncols
        for row in rows:
            row = tuple(algebra.normal_form(p) for p in row)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged matrix rows")
            nf_rows.append(row)
        if width is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.algebra = algebra
        self.rows = tuple(nf_rows)
        self.ncols = width

    @property
    def nrows(self):
        return len(self.rows)

    def __repr__(self):
        return "QuotientMatrix(%dx%d)" % (self.nrows, self.ncols)


def _guard_product(algebra, a, b):
    """NF(a*b) with the zero-divisor guard for nonzero operands."""
    p = algebra.normal_form(a * b)
    if p.is_zero() and not a.is_zero() and not b.is_zero():
        raise NotADomainSuspected(a, b)
    return p


def generic_rank(matrix):
    """Rank over the fraction field of the quotient domain.

    Fraction-free cross-multiplication elimination; every zero test is a
    normal form computation.  The caller asserts the ideal is prime; a
    witnessed zero divisor raises NotADomainSuspected.
    """
    algebra = matrix.algebra
    rows = [list(r) for r in matrix.rows]
    nrows = len(rows)
    ncols = matrix.ncols
    rank = 0
    top = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(top, nrows):
            if not rows[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[top], rows[pivot_row] = rows[pivot_row], rows[top]
        pivot = rows[top][col]
        _guard_product(algebra, pivot, pivot)
        for r in range(top + 1, nrows):
            entry = rows[r][col]
            if entry.is_zero():
                continue
            new_row = []
            for c in range(ncols):
                if c < col:
                    new_row.append(rows[r][c])
                    continue
                left = _guard_product(algebra, pivot, rows[r][c]) if not rows[r][c].is_zero() else rows[r][c].ctx.zero()
                right = algebra.normal_form(entry * rows[top][c])
                new_row.append(algebra.normal_form(left - right))
            if any(not p.is_zero() for p in new_row):
                scaled = _primitive_row(new_row)
                rows[r] = scaled
            else:
                rows[r] = new_row
        rank += 1
        top += 1
        if top == nrows:
            break
    return rank


def _primitive_row(row):
    """Scale a whole row by one unit of K to keep coefficients small."""
    from .scalar import _rat_primitive_scale

    ctx = row[0].ctx
    nsyms = ctx.base.m
    den_lcm = QPoly.const(nsyms, 1)
    any_terms = False
    for p in row:
        for c in p.terms.values():
            any_terms = True
            g = qpoly_gcd(den_lcm, c.den)
            den_lcm = den_lcm.divexact(g) * c.den
    if not any_terms:
        return row
    unit = FieldElem(den_lcm)
    scaled = [p * unit for p in row]
    content = QPoly.zero(nsyms)
    for p in scaled:
        for c in p.terms.values():
            content = qpoly_gcd(content, c.num)
        if content.is_const() and not content.is_zero():
            break
    if not content.is_zero() and not content.is_const():
        inv = FieldElem(QPoly.const(nsyms, 1), content)
        scaled = [p * inv for p in scaled]
    coeffs = []
    for p in scaled:
        for fe in p.terms.values():
            coeffs.extend(fe.num.terms.values())
    s = _rat_primitive_scale(coeffs)
    # orient by the entry carrying the row's leading monomial
    best = None
    lead_rat = None
    for j, p in enumerate(scaled):
        if p.is_zero():
            continue
        exp, c = p.leading()
        cand = (ctx._key(exp), -j)
        if best is None or cand > best:
            best = cand
            _, lead_rat = c.num.leading()
    if lead_rat is not None and lead_rat * s < 0:
        s = -s
    unit2 = FieldElem(QPoly.const(nsyms, s))
    return [p * unit2 for p in scaled]


class SmoothnessReport:
    """Outcome of the Jacobian criterion at the generic point."""

    __slots__ = ("status", "witness", "jacobian_rank", "expected_rank")

    def __init__(self, status, witness=None, jacobian_rank=None, expected_rank=None):
        self.status = status
        self.witness = witness
        self.jacobian_rank = jacobian_rank
        self.expected_rank = expected_rank

    @property
    def smooth(self):
        return self.status == "smooth"

    def __repr__(self):
        if self.smooth:
            return "smooth"
        return "not_verified(%s)" % (self.witness,)


def jacobian_matrix(algebra):
    rows = [
        [g.partial(j) for j in range(algebra.ctx.n)]
        for g in algebra.gens
        if not g.is_zero()
    ]
    return QuotientMatrix(algebra, rows, ncols=algebra.ctx.n)


def jacobian_smooth_check(algebra, expected_dim):
    """Check generic-point smoothness: Jacobian rank must equal
    n - expected_dim over the fraction field of the quotient."""
    expected = algebra.ctx.n - expected_dim
    try:
        rank = generic_rank(jacobian_matrix(algebra))
    except NotADomainSuspected as err:
        return SmoothnessReport(
            "not_verified",
            witness="zero divisor: (%s)*(%s) = 0 in the quotient" % (err.left, err.right),
            expected_rank=expected,
        )
    if rank == expected:
        return SmoothnessReport("smooth", jacobian_rank=rank, expected_rank=expected)
    return SmoothnessReport(
        "not_verified",
        witness="jacobian generic rank %d, expected %d" % (rank, expected),
        jacobian_rank=rank,
        expected_rank=expected,
    )


class RowSpan:
    """Submodule of B^k spanned by the given rows, with membership test.

    Implemented by idealization: adjoin tag variables z_0..z_{k-1}, kill
    their pairwise products, and reduce degree-1 tag polynomials modulo
    the ideal generated by the algebra's generators and the row
    polynomials sum_j row[j]*z_j.
    """

    __slots__ = ("algebra", "free_rank", "tag_ctx", "tag_algebra", "_var_index")

    def __init__(self, algebra, rows, free_rank):
        ctx = algebra.ctx
        taken = set(ctx.vars) | set(ctx.base.symbols)
        tags = []
        for j in range(free_rank):
            name = "_z%d" % j
            while name in taken:
                name = "_" + name
            taken.add(name)
            tags.append(name)
        tag_ctx = RingCtx(ctx.base, ctx.vars + tuple(tags), ctx.order)
        n = ctx.n
        gens = [embed(g, tag_ctx) for g in algebra.gens if not g.is_zero()]
        for row in rows:
            if len(row) != free_rank:
                raise ValueError("row width differs from free rank")
            acc = tag_ctx.zero()
            for j, p in enumerate(row):
                acc = acc + embed(p, tag_ctx) * tag_ctx.var(n + j)
            if not acc.is_zero():
                gens.append(acc)
        for i in range(free_rank):
            for j in range(i, free_rank):
                gens.append(tag_ctx.var(n + i) * tag_ctx.var(n + j))
        self.algebra = algebra
        self.free_rank = free_rank
        self.tag_ctx = tag_ctx
        self.tag_algebra = PresentedAlgebra(
            tag_ctx, gens, max_pairs=algebra.max_pairs, max_degree=algebra.max_degree
        )
        self._var_index = n

    def contains(self, vector):
        """Is the vector in (row span) + I*B^k, i.e. zero in the module?"""
        if len(vector) != self.free_rank:
            raise ValueError("vector width differs from free rank")
        acc = self.tag_ctx.zero()
        for j, p in enumerate(vector):
            acc = acc + embed(p, self.tag_ctx) * self.tag_ctx.var(self._var_index + j)
        return self.tag_algebra.normal_form(acc).is_zero()
