"""Shared helpers for the test suite: deterministic random algebra samples."""

from fractions import Fraction

from taudiff.scalar import BaseField, FieldElem, QPoly


def field_t():
    return BaseField(["t"], [1])


def field_tu(du="u"):
    """Q(t,u) with d(t)=1 and d(u) given by a small expression keyword."""
    u = FieldElem.sym(2, 1)
    images = {"u": u, "0": 0, "1": 1, "t": FieldElem.sym(2, 0), "u^2": u * u}
    return BaseField(["t", "u"], [1, images[du]])


def field_tuw():
    u = FieldElem.sym(3, 1)
    return BaseField(["t", "u", "w"], [1, u, 0])


def rand_rat(rng, bound=4):
    n = rng.randint(-bound, bound)
    d = rng.randint(1, bound)
    return Fraction(n, d)


def rand_qpoly(rng, nsyms, max_deg=2, max_terms=3, allow_zero=True):
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        exp = tuple(rng.randint(0, max_deg) for _ in range(nsyms))
        c = rand_rat(rng)
        if c:
            terms[exp] = terms.get(exp, 0) + c
    return QPoly(nsyms, {e: c for e, c in terms.items() if c})


def rand_field_elem(rng, field, with_den=False):
    m = field.m
    num = rand_qpoly(rng, m)
    if with_den:
        den = rand_qpoly(rng, m, max_deg=1, max_terms=2, allow_zero=False)
        while den.is_zero():
            den = rand_qpoly(rng, m, max_deg=1, max_terms=2, allow_zero=False)
        return FieldElem(num, den)
    return FieldElem(num)
