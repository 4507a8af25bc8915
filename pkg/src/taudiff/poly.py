"""Sparse multivariate polynomials over K in ring variables x1..xn.

Supports the two derivations the rest of the package is built from:
formal partials d/dx_i and the coefficient-wise derivation eps, which
applies the base field derivation to every coefficient and leaves
monomials alone.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ArityMismatch, ContextMismatch, IndexOutOfRange
from .monomials import DEGREVLEX, ORDERS, mono_mul, order_key
from .scalar import BaseField, FieldElem, fe_str


class RingCtx:
    """Polynomial ring context: base field, ordered variables, monomial order."""

    __slots__ = ("base", "vars", "order", "_key")

    def __init__(self, base, variables, order=DEGREVLEX):
        variables = tuple(variables)
        if order not in ORDERS:
            raise ValueError("unknown monomial order %r" % (order,))
        if len(set(variables)) != len(variables):
            raise ValueError("ring variables must be distinct")
        clash = set(variables) & set(base.symbols)
        if clash:
            raise ValueError("ring variables shadow base symbols: %s" % sorted(clash))
        self.base = base
        self.vars = variables
        self.order = order
        self._key = order_key(order)

    @property
    def n(self):
        return len(self.vars)

    def __eq__(self, other):
        return (
            isinstance(other, RingCtx)
            and self.vars == other.vars
            and self.order == other.order
            and self.base == other.base
        )

    __hash__ = None

    def __repr__(self):
        return "RingCtx(%s[%s], %s)" % (
            "Q(%s)" % ",".join(self.base.symbols),
            ", ".join(self.vars) if self.vars else "",
            self.order,
        )

    def zero(self):
        return Poly(self)

    def one(self):
        return self.const(1)

    def const(self, value):
        if isinstance(value, (int, Fraction)):
            value = self.base.rat(value)
        if value.is_zero():
            return Poly(self)
        return Poly(self, {(0,) * self.n: value})

    def var(self, i):
        exp = [0] * self.n
        exp[i] = 1
        return Poly(self, {tuple(exp): self.base.one()})

    def var_named(self, name):
        return self.var(self.vars.index(name))


class Poly:
    """Element of K[x1..xn]; immutable by convention."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    self.terms[exp] = c

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        if isinstance(other, FieldElem):
            return self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch("polynomials from different rings")
        return other

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    __hash__ = None

    def __neg__(self):
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ctx, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.base.rat(other)
        if isinstance(other, FieldElem):
            if other.is_zero():
                return Poly(self.ctx)
            return Poly(self.ctx, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                s = out.get(e)
                p = c1 * c2
                s = p if s is None else s + p
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, indices):
        """Max total degree restricted to the given variable indices."""
        if not self.terms:
            return -1
        return max(sum(e[i] for i in indices) for e in self.terms)

    def leading(self):
        """(exponent, coefficient) under the ring's monomial order."""
        exp = max(self.terms, key=self.ctx._key)
        return exp, self.terms[exp]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ctx._key(t[0]), reverse=True)

    def coeff(self, exp):
        return self.terms.get(tuple(exp), self.ctx.base.zero())

    def const_part(self):
        return self.terms.get((0,) * self.ctx.n, self.ctx.base.zero())

    def is_const(self):
        return all(sum(e) == 0 for e in self.terms)

    def partial(self, i):
        """d/dx_i with 0-based index."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                key = tuple(ne)
                add = c * e[i]
                s = out.get(key)
                s = add if s is None else s + add
                if s:
                    out[key] = s
                else:
                    del out[key]
        return Poly(self.ctx, out)

    def map_coeffs(self, fn):
        return Poly(self.ctx, {e: fn(c) for e, c in self.terms.items()})

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return "Poly(%s)" % (self,)


def poly_arith(op, f, g):
    """Dispatch {add|sub|mul} by name."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError("unknown operation %r" % (op,))


def partial_derivative(f, i):
    """Formal partial derivative d f / d x_i, 1-based index."""
    if not 1 <= i <= f.ctx.n:
        raise IndexOutOfRange("variable index %d outside 1..%d" % (i, f.ctx.n))
    return f.partial(i - 1)


def coeff_derivation(f):
    """eps(f): apply the base derivation to every coefficient."""
    base = f.ctx.base
    return Poly(f.ctx, {e: base.derive(c) for e, c in f.terms.items()})


def evaluate(f, point):
    """Exact substitution of a FieldElem per variable."""
    point = list(point)
    if len(point) != f.ctx.n:
        raise ArityMismatch(
            "point has %d coordinates, ring has %d variables" % (len(point), f.ctx.n)
        )
    base = f.ctx.base
    coerced = []
    for a in point:
        if isinstance(a, (int, Fraction)):
            a = base.rat(a)
        if a.nsyms != base.m:
            raise ContextMismatch("point coordinate over the wrong base field")
        coerced.append(a)
    powers = [{0: base.one(), 1: a} for a in coerced]
    total = base.zero()
    for e, c in f.terms.items():
        term = c
        for i, k in enumerate(e):
            if not k:
                continue
            cache = powers[i]
            p = cache.get(k)
            if p is None:
                p = cache[1]
                for _ in range(k - 1):
                    p = p * cache[1]
                cache[k] = p
            term = term * p
        total = total + term
    return total


def substitute(f, target_ctx, images):
    """Image of f under x_i -> images[i], a polynomial over target_ctx.

    The base fields must agree; coefficients are carried along unchanged.
    """
    if len(images) != f.ctx.n:
        raise ArityMismatch("need one image per variable")
    if f.ctx.base != target_ctx.base:
        raise ContextMismatch("substitution across different base fields")
    total = target_ctx.zero()
    cache = {}
    for e, c in f.terms.items():
        term = target_ctx.const(c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                p = cache.get(key)
                if p is None:
                    p = images[i] ** k
                    cache[key] = p
                term = term * p
        total = total + term
    return total


def embed(f, target_ctx):
    """Reinterpret f in a ring whose variables contain f's (matched by name)."""
    index = []
    for name in f.ctx.vars:
        if name not in target_ctx.vars:
            raise ContextMismatch("variable %r missing from target ring" % name)
        index.append(target_ctx.vars.index(name))
    if f.ctx.base != target_ctx.base:
        raise ContextMismatch("embedding across different base fields")
    out = {}
    for e, c in f.terms.items():
        ne = [0] * target_ctx.n
        for i, k in enumerate(e):
            if k:
                ne[index[i]] = k
        out[tuple(ne)] = c
    return Poly(target_ctx, out)


# -- rendering ---------------------------------------------------------------


def _mono_str(exp, names):
    parts = []
    for i, k in enumerate(exp):
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append("%s^%d" % (names[i], k))
    return "*".join(parts)


def _coeff_mono_str(c, mono, names):
    fe = fe_str(c, names)
    if not mono:
        return fe
    if fe == "1":
        return mono
    if fe == "-1":
        return "-" + mono
    if fe.startswith("(") or " " in fe:
        return "(%s)*%s" % (fe, mono)
    return "%s*%s" % (fe, mono)


def poly_str(f):
    if f.is_zero():
        return "0"
    names = f.ctx.base.symbols
    pieces = []
    for exp, c in f.sorted_terms():
        term = _coeff_mono_str(c, _mono_str(exp, f.ctx.vars), names)
        if not pieces:
            pieces.append(term)
        elif term.startswith("-") and not term.startswith("(-"):
            pieces.append("- " + term[1:])
        else:
            pieces.append("+ " + term)
    return " ".join(pieces)
