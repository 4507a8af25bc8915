"""Exact arithmetic in Q and in the differential base field K = Q(e1,...,em).

Rat is an alias for fractions.Fraction, whose canonical form (reduced,
positive denominator, zero stored as 0/1) is exactly the invariant we need.

QPoly is a sparse multivariate polynomial over Q in the base symbols; a
FieldElem is a reduced quotient num/den of two QPolys whose denominator
is integer-primitive with positive leading coefficient under degrevlex.
The derivation on K is determined by its images on the symbols and is
extended to quotients by the Leibniz and quotient rules.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .errors import (
    ContextMismatch,
    DivisionByZero,
    InvalidBaseField,
    UnknownSymbol,
)
from .monomials import degrevlex_key, mono_div, mono_mul

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class QPoly:
    """Sparse polynomial over Q in a fixed number of symbols."""

    __slots__ = ("nsyms", "terms")

    def __init__(self, nsyms, terms=None):
        self.nsyms = nsyms
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    self.terms[exp] = c

    @classmethod
    def zero(cls, nsyms):
        return cls(nsyms)

    @classmethod
    def const(cls, nsyms, value):
        value = Fraction(value)
        if not value:
            return cls(nsyms)
        return cls(nsyms, {(0,) * nsyms: value})

    @classmethod
    def sym(cls, nsyms, i):
        exp = [0] * nsyms
        exp[i] = 1
        return cls(nsyms, {tuple(exp): _ONE})

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(sum(e) == 0 for e in self.terms)

    def const_value(self):
        if not self.terms:
            return _ZERO
        return self.terms[(0,) * self.nsyms]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, QPoly)
            and self.nsyms == other.nsyms
            and self.terms == other.terms
        )

    __hash__ = None

    def __neg__(self):
        return QPoly(self.nsyms, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return QPoly(self.nsyms, out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Fraction):
            if not other:
                return QPoly(self.nsyms)
            return QPoly(self.nsyms, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                s = out.get(e, _ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return QPoly(self.nsyms, out)

    def scaled(self, q):
        return self * Fraction(q)

    def __pow__(self, k):
        result = QPoly.const(self.nsyms, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def deg_in(self, i):
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the degrevlex-leading term."""
        exp = max(self.terms, key=degrevlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def partial(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = out.get(tuple(ne), _ZERO) + c * e[i]
        return QPoly(self.nsyms, out)

    def eval_all(self, values):
        """Substitute a Fraction (or FieldElem-free Fraction) per symbol."""
        total = _ZERO
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term *= values[i] ** k
            total += term
        return total

    def coeffs_in(self, i):
        """Map degree-in-symbol-i -> QPoly coefficient (degree 0 in i)."""
        out = {}
        for e, c in self.terms.items():
            d = e[i]
            ne = list(e)
            ne[i] = 0
            bucket = out.setdefault(d, {})
            bucket[tuple(ne)] = bucket.get(tuple(ne), _ZERO) + c
        return {d: QPoly(self.nsyms, t) for d, t in out.items()}

    def mul_sym_pow(self, i, k):
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += k
            out[tuple(ne)] = c
        return QPoly(self.nsyms, out)

    def divexact(self, other):
        """Exact division; None when other does not divide self."""
        if other.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        rem = self
        quo = {}
        lexp, lc = other.leading()
        while rem.terms:
            rexp, rc = rem.leading()
            q = mono_div(rexp, lexp)
            if q is None:
                return None
            c = rc / lc
            quo[q] = c
            rem = rem - other * QPoly(self.nsyms, {q: c})
        return QPoly(self.nsyms, quo)

    def __str__(self):
        return qpoly_str(self, ())

    def __repr__(self):
        return "QPoly(%s)" % (self,)


def _rat_primitive_scale(coeffs):
    """Fraction s > 0 such that [c*s for c in coeffs] are integers with gcd 1."""
    den_lcm = 1
    for c in coeffs:
        den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    num_gcd = 0
    for c in coeffs:
        num_gcd = int_gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
    if num_gcd == 0:
        return _ONE
    return Fraction(den_lcm, num_gcd)


def _gcd_normalize(f):
    """Scale to integer-primitive with positive leading coefficient."""
    if f.is_zero():
        return f
    s = _rat_primitive_scale(list(f.terms.values()))
    _, lc = f.leading()
    if lc < 0:
        s = -s
    return f * s


def _prem(f, g, v):
    """Pseudo-remainder of f by g in the symbol v."""
    dg = g.deg_in(v)
    g_coeffs = g.coeffs_in(v)
    lc_g = g_coeffs[dg]
    while not f.is_zero():
        df = f.deg_in(v)
        if df < dg:
            break
        f_coeffs = f.coeffs_in(v)
        lc_f = f_coeffs[df]
        f = f * lc_g - (g * lc_f).mul_sym_pow(v, df - dg)
    return f


def qpoly_gcd(a, b):
    """Deterministic gcd, integer-primitive with positive leading coefficient."""
    if a.is_zero():
        return _gcd_normalize(b)
    if b.is_zero():
        return _gcd_normalize(a)
    used = [
        i
        for i in range(a.nsyms)
        if a.deg_in(i) > 0 or b.deg_in(i) > 0
    ]
    if not used:
        return QPoly.const(a.nsyms, 1)
    v = used[-1]
    ca, pa = _content_primitive(a, v)
    cb, pb = _content_primitive(b, v)
    cont = qpoly_gcd(ca, cb)
    f, g = pa, pb
    if f.deg_in(v) < g.deg_in(v):
        f, g = g, f
    while not g.is_zero():
        r = _prem(f, g, v)
        if not r.is_zero():
            _, r = _content_primitive(r, v)
        f, g = g, r
    _, f = _content_primitive(f, v)
    return _gcd_normalize(cont * f)


def _content_primitive(f, v):
    """(content, primitive part) of f viewed in the symbol v."""
    coeffs = list(f.coeffs_in(v).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        cont = qpoly_gcd(cont, c)
        if cont.is_const():
            break
    cont = _gcd_normalize(cont)
    if cont.is_const() and cont.const_value() == 1:
        return cont, _gcd_normalize(f)
    prim = f.divexact(cont)
    assert prim is not None, "content must divide"
    return cont, _gcd_normalize(prim)


class FieldElem:
    """Element of K = Q(e1,...,em), stored as a reduced quotient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = QPoly.const(num.nsyms, 1)
        if _normalized:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise DivisionByZero("zero denominator in field element")
        if num.is_zero():
            self.num = QPoly.zero(num.nsyms)
            self.den = QPoly.const(num.nsyms, 1)
            return
        if den.is_const():
            # constants are units: no polynomial gcd needed
            self.num = num * (1 / den.const_value())
            self.den = QPoly.const(num.nsyms, 1)
            return
        if not num.is_const():
            g = qpoly_gcd(num, den)
            if not (g.is_const() and g.const_value() == 1):
                num = num.divexact(g)
                den = den.divexact(g)
                if den.is_const():
                    self.num = num * (1 / den.const_value())
                    self.den = QPoly.const(num.nsyms, 1)
                    return
        s = _rat_primitive_scale(list(den.terms.values()))
        _, lc = den.leading()
        if lc < 0:
            s = -s
        self.num = num * s
        self.den = den * s

    @classmethod
    def from_rat(cls, nsyms, q):
        return cls(QPoly.const(nsyms, Fraction(q)))

    @classmethod
    def sym(cls, nsyms, i):
        return cls(QPoly.sym(nsyms, i))

    @property
    def nsyms(self):
        return self.num.nsyms

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_rational(self):
        return self.num.is_const() and self.den.is_const()

    def as_rat(self):
        return self.num.const_value() / self.den.const_value()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FieldElem.from_rat(self.nsyms, other)
        return (
            isinstance(other, FieldElem)
            and self.num == other.num
            and self.den == other.den
        )

    __hash__ = None

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem.from_rat(self.nsyms, other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        if other.nsyms != self.nsyms:
            raise ContextMismatch("field elements over different symbol lists")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FieldElem(self.num + other.num, self.den)
        return FieldElem(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("division by zero in the base field")
        return FieldElem(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return FieldElem.from_rat(self.nsyms, other) / self

    def partial(self, i):
        """Formal partial derivative with respect to symbol i."""
        dn = self.num.partial(i)
        dd = self.den.partial(i)
        return FieldElem(dn * self.den - self.num * dd, self.den * self.den)

    def __str__(self):
        return fe_str(self, ())

    def __repr__(self):
        return "FieldElem(%s)" % (self,)


class BaseField:
    """K = Q(e1,...,em) with derivation given by its images on the symbols.

    One symbol, the designated one, must have derivative exactly 1; the
    whole theory assumes such an element exists and construction is
    rejected otherwise.  Instances are immutable.
    """

    __slots__ = ("symbols", "derivation_images", "designated")

    def __init__(self, symbols, derivation_images):
        symbols = tuple(symbols)
        if not symbols:
            raise InvalidBaseField("at least one base symbol required")
        if len(set(symbols)) != len(symbols):
            raise InvalidBaseField("base symbols must be distinct")
        m = len(symbols)
        images = []
        for img in derivation_images:
            if isinstance(img, (int, Fraction)):
                img = FieldElem.from_rat(m, img)
            if img.nsyms != m:
                raise InvalidBaseField("derivation image over the wrong symbol list")
            images.append(img)
        if len(images) != m:
            raise InvalidBaseField("need one derivation image per symbol")
        one = FieldElem.from_rat(m, 1)
        designated = None
        for i, img in enumerate(images):
            if img == one:
                designated = i
                break
        if designated is None:
            raise InvalidBaseField(
                "no symbol has derivative exactly 1; such an element is required"
            )
        self.symbols = symbols
        self.derivation_images = tuple(images)
        self.designated = designated

    @property
    def m(self):
        return len(self.symbols)

    def __eq__(self, other):
        return (
            isinstance(other, BaseField)
            and self.symbols == other.symbols
            and all(a == b for a, b in zip(self.derivation_images, other.derivation_images))
        )

    __hash__ = None

    def __repr__(self):
        images = ", ".join(
            "d(%s)=%s" % (s, i) for s, i in zip(self.symbols, self.derivation_images)
        )
        return "BaseField(Q(%s); %s)" % (", ".join(self.symbols), images)

    def zero(self):
        return FieldElem.from_rat(self.m, 0)

    def one(self):
        return FieldElem.from_rat(self.m, 1)

    def rat(self, q):
        return FieldElem.from_rat(self.m, q)

    def sym(self, name_or_index):
        if isinstance(name_or_index, str):
            try:
                i = self.symbols.index(name_or_index)
            except ValueError:
                raise UnknownSymbol(name_or_index) from None
        else:
            i = name_or_index
        return FieldElem.sym(self.m, i)

    def derive(self, a):
        """delta(a), extended from the symbol images by the quotient rule."""
        if not isinstance(a, FieldElem):
            a = self.rat(a)
        if a.nsyms != self.m:
            raise UnknownSymbol("element mentions symbols outside this field")
        total = self.zero()
        for i in range(self.m):
            da = a.partial(i)
            if da.is_zero():
                continue
            total = total + da * self.derivation_images[i]
        return total

    def embedding_into(self, larger):
        """Index map of self.symbols into larger.symbols.

        Raises NotAnExtension unless every symbol of self appears in
        larger with the same derivation image and the designated element
        is unchanged.
        """
        from .errors import NotAnExtension

        index = []
        for name in self.symbols:
            if name not in larger.symbols:
                raise NotAnExtension("missing symbol %r in the extension" % name)
            index.append(larger.symbols.index(name))
        for i, j in enumerate(index):
            if embed_field_elem(self.derivation_images[i], index, larger.m) != larger.derivation_images[j]:
                raise NotAnExtension(
                    "derivation disagrees on common symbol %r" % self.symbols[i]
                )
        if index[self.designated] != larger.designated:
            raise NotAnExtension("designated element changed in the extension")
        return index


def embed_qpoly(p, index, new_nsyms):
    out = {}
    for e, c in p.terms.items():
        ne = [0] * new_nsyms
        for i, k in enumerate(e):
            if k:
                ne[index[i]] = k
        out[tuple(ne)] = c
    return QPoly(new_nsyms, out)


def embed_field_elem(a, index, new_nsyms):
    # Reindexing can change the degrevlex-leading term, so renormalize.
    return FieldElem(
        embed_qpoly(a.num, index, new_nsyms),
        embed_qpoly(a.den, index, new_nsyms),
    )


def fe_arith(op, a, b):
    """Dispatch the four field operations by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown operation %r" % (op,))


def fe_derive(a, field):
    return field.derive(a)


# -- canonical rendering ----------------------------------------------------
#
# Symbol names are supplied by the caller (a BaseField knows its own), so
# the renderers take the name tuple; empty names fall back to e0, e1, ...


def _sym_name(names, i):
    return names[i] if i < len(names) else "e%d" % i


def _rat_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def _qpoly_term_str(exp, coeff, names):
    parts = []
    for i, k in enumerate(exp):
        if k == 1:
            parts.append(_sym_name(names, i))
        elif k > 1:
            parts.append("%s^%d" % (_sym_name(names, i), k))
    if not parts:
        return _rat_str(coeff)
    body = "*".join(parts)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return "%s*%s" % (_rat_str(coeff), body)


def qpoly_str(p, names):
    if p.is_zero():
        return "0"
    pieces = []
    for exp, c in p.sorted_terms():
        term = _qpoly_term_str(exp, c, names)
        if not pieces:
            pieces.append(term)
        elif term.startswith("-"):
            pieces.append("- " + term[1:])
        else:
            pieces.append("+ " + term)
    return " ".join(pieces)


def fe_str(a, names):
    num = qpoly_str(a.num, names)
    if a.den.is_const() and a.den.const_value() == 1:
        return num
    den = qpoly_str(a.den, names)
    return "(%s)/(%s)" % (num, den)
