"""Exponent-vector helpers and monomial orders.

Monomials are plain tuples of nonnegative ints.  Order keys are built so
that max(terms, key=...) picks the leading monomial.
"""

DEGREVLEX = "degrevlex"
LEX = "lex"

ORDERS = (DEGREVLEX, LEX)


def degrevlex_key(exp):
    # a > b iff deg a > deg b, or degrees tie and the rightmost nonzero
    # entry of a-b is negative.
    return (sum(exp), tuple(-e for e in reversed(exp)))


def lex_key(exp):
    return exp


def order_key(order):
    if order == DEGREVLEX:
        return degrevlex_key
    if order == LEX:
        return lex_key
    raise ValueError("unknown monomial order: %r" % (order,))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_divides(b, a):
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_is_one(a):
    return all(e == 0 for e in a)


def mono_deg(a):
    return sum(a)
