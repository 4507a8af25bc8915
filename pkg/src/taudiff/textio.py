"""Problem file format and canonical text output.

Expression grammar (LL(1), whitespace-insensitive, '#' comments):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := INT ['/' INT] | IDENT | '(' expr ')'

'/' is only a rational literal separator; implicit multiplication is not
allowed.  Problem files are sectioned plain text with [field], [ring],
[ideal], [points], [morphism] and [assert] headers, one declaration per
line; repeated [morphism] sections declare a chain of composable maps.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError, UnknownSymbol
from .forms import ModulePresentation, TauForm, linear_combo_str
from .geometry import ConeAlgebra, RingMap, SlicedVariety
from .ideal import PresentedAlgebra, primitive_scale
from .monomials import DEGREVLEX, order_key
from .poly import Poly, RingCtx
from .scalar import BaseField, FieldElem

# -- tokenizer ---------------------------------------------------------------

_PUNCT = "+-*^/()=,:[]"


class Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return "Token(%s, %r)" % (self.kind, self.value)


def tokenize(text, line=1):
    tokens = []
    col = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            start_col = col
            while i < len(text) and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token("INT", int(text[start:i]), line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(Token("IDENT", text[start:i], line, start_col))
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, col)
    tokens.append(Token("EOF", None, line, col))
    return tokens


# -- expression parser -------------------------------------------------------


class _ExprParser:
    """Recursive-descent parser over an abstract value algebra.

    make_rat(Fraction) and lookup(name, token) supply the atoms; values
    must support +, -, * and ** with int exponents.
    """

    def __init__(self, tokens, make_rat, lookup):
        self.tokens = tokens
        self.pos = 0
        self.make_rat = make_rat
        self.lookup = lookup

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise ParseError(
                "expected %s, found %r" % (kind, tok.value if tok.value is not None else "end of input"),
                tok.line,
                tok.col,
            )
        self.pos += 1
        return tok

    def parse_expr(self):
        negate = False
        if self.peek().kind == "-":
            self.take()
            negate = True
        value = self.parse_term()
        if negate:
            value = -value
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self):
        value = self.parse_factor()
        while self.peek().kind == "*":
            self.take()
            value = value * self.parse_factor()
        return value

    def parse_factor(self):
        value = self.parse_atom()
        if self.peek().kind == "^":
            caret = self.take()
            tok = self.peek()
            if tok.kind != "INT":
                raise ParseError("exponent must be a nonnegative integer", tok.line, tok.col)
            self.take()
            value = value ** tok.value
        return value

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.take()
            value = Fraction(tok.value)
            if self.peek().kind == "/":
                self.take()
                den_tok = self.peek()
                if den_tok.kind != "INT":
                    raise ParseError(
                        "'/' is only allowed between integers", den_tok.line, den_tok.col
                    )
                self.take()
                if den_tok.value == 0:
                    raise ParseError("zero denominator in rational literal", den_tok.line, den_tok.col)
                value = value / den_tok.value
            return self.make_rat(value)
        if tok.kind == "IDENT":
            self.take()
            return self.lookup(tok.value, tok)
        if tok.kind == "(":
            self.take()
            value = self.parse_expr()
            self.take(")")
            return value
        raise ParseError(
            "expected a number, name or '('; found %r"
            % (tok.value if tok.value is not None else "end of input"),
            tok.line,
            tok.col,
        )

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError("trailing input %r" % (tok.value,), tok.line, tok.col)


def _parse_tokens_poly(tokens, ctx):
    def lookup(name, tok):
        if name in ctx.vars:
            return ctx.var(ctx.vars.index(name))
        if name in ctx.base.symbols:
            return ctx.const(ctx.base.sym(name))
        raise UnknownSymbol(
            "unknown name %r at line %d, column %d" % (name, tok.line, tok.col)
        )

    parser = _ExprParser(tokens, ctx.const, lookup)
    value = parser.parse_expr()
    parser.expect_end()
    return value


def parse_poly(text, ctx, line=1):
    """Parse an expression into the given ring."""
    return _parse_tokens_poly(tokenize(text, line), ctx)


def parse_field_elem(text, field, line=1):
    """Parse an expression mentioning only base symbols."""

    def lookup(name, tok):
        if name in field.symbols:
            return field.sym(name)
        raise UnknownSymbol(
            "unknown name %r at line %d, column %d" % (name, tok.line, tok.col)
        )

    parser = _ExprParser(tokenize(text, line), field.rat, lookup)
    value = parser.parse_expr()
    parser.expect_end()
    return value


# -- problem files -----------------------------------------------------------


class ProblemFile:
    """Parsed input: field, ring, ideal, optional points/morphisms/assertions."""

    __slots__ = (
        "name",
        "field",
        "ring",
        "algebra",
        "points",
        "fibers",
        "morphisms",
        "assert_prime",
        "assert_dim",
    )

    def __init__(self, name, field, ring, algebra, points, fibers, morphisms,
                 assert_prime, assert_dim):
        self.name = name
        self.field = field
        self.ring = ring
        self.algebra = algebra
        self.points = points
        self.fibers = fibers
        self.morphisms = morphisms
        self.assert_prime = assert_prime
        self.assert_dim = assert_dim


def _strip(line):
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def _split_names(rest, line_no):
    names = rest.replace(",", " ").split()
    if not names:
        raise ParseError("expected at least one name", line_no, 1)
    return names


def _parse_tuple_exprs(text, field, line_no):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError("expected a parenthesized coordinate tuple", line_no, 1)
    inner = text[1:-1]
    parts = _split_top_level(inner, line_no)
    return tuple(parse_field_elem(p, field, line_no) for p in parts)


def _split_top_level(text, line_no):
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses", line_no, 1)
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    if any(not p.strip() for p in parts):
        raise ParseError("empty coordinate in tuple", line_no, 1)
    return [p.strip() for p in parts]


def load_problem(text, name="<input>", order=DEGREVLEX, max_pairs=None):
    """Parse a sectioned problem description into live objects."""
    sections = []
    current = None
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError("malformed section header", idx, 1)
            current = (line[1:-1].strip().lower(), [])
            sections.append(current)
            continue
        if current is None:
            raise ParseError("declaration before any section header", idx, 1)
        current[1].append((idx, line))

    known = {"field", "ring", "ideal", "points", "morphism", "assert"}
    for sec_name, _ in sections:
        if sec_name not in known:
            raise ParseError("unknown section [%s]" % sec_name, 1, 1)

    field = _build_field(sections)
    ring = _build_ring(sections, field, order)
    kwargs = {}
    if max_pairs is not None:
        kwargs["max_pairs"] = max_pairs
    gens = []
    for sec_name, lines in sections:
        if sec_name != "ideal":
            continue
        for line_no, line in lines:
            gens.append(parse_poly(line, ring, line_no))
    assert_prime, assert_dim = _build_asserts(sections)
    algebra = PresentedAlgebra(ring, gens, assume_prime=assert_prime, **kwargs)
    points, fibers = _build_points(sections, field, ring)
    morphisms = _build_morphisms(sections, field, algebra, order, kwargs)
    return ProblemFile(
        name, field, ring, algebra, points, fibers, morphisms, assert_prime, assert_dim
    )


def load_problem_file(path, order=DEGREVLEX, max_pairs=None):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_problem(text, name=str(path), order=order, max_pairs=max_pairs)


def _build_field(sections):
    decls = []
    for sec_name, lines in sections:
        if sec_name == "field":
            decls.extend(lines)
    if not decls:
        raise ParseError("missing [field] section", 1, 1)
    names = []
    exprs = []
    for line_no, line in decls:
        parts = line.split("=", 1)
        head = parts[0].split()
        if len(head) != 2 or head[0] != "symbol" or len(parts) != 2:
            raise ParseError("expected 'symbol NAME = EXPR'", line_no, 1)
        names.append(head[1])
        exprs.append((line_no, parts[1].strip()))
    m = len(names)

    def lookup_factory():
        def lookup(name, tok):
            if name in names:
                return FieldElem.sym(m, names.index(name))
            raise UnknownSymbol(
                "unknown name %r at line %d, column %d" % (name, tok.line, tok.col)
            )

        return lookup

    images = []
    for line_no, expr in exprs:
        parser = _ExprParser(
            tokenize(expr, line_no), lambda q: FieldElem.from_rat(m, q), lookup_factory()
        )
        value = parser.parse_expr()
        parser.expect_end()
        images.append(value)
    return BaseField(names, images)


def _build_ring(sections, field, order):
    names = None
    for sec_name, lines in sections:
        if sec_name != "ring":
            continue
        for line_no, line in lines:
            if not line.startswith("vars"):
                raise ParseError("expected 'vars NAME ...'", line_no, 1)
            if names is not None:
                raise ParseError("duplicate vars declaration", line_no, 1)
            names = _split_names(line[len("vars"):], line_no)
    if names is None:
        raise ParseError("missing [ring] section with a vars declaration", 1, 1)
    return RingCtx(field, names, order)


def _build_asserts(sections):
    assert_prime = False
    assert_dim = None
    for sec_name, lines in sections:
        if sec_name != "assert":
            continue
        for line_no, line in lines:
            words = line.split()
            if words == ["prime"]:
                assert_prime = True
            elif len(words) == 2 and words[0] == "dim":
                try:
                    assert_dim = int(words[1])
                except ValueError:
                    raise ParseError("dim expects an integer", line_no, 1) from None
            else:
                raise ParseError("unknown assertion %r" % line, line_no, 1)
    return assert_prime, assert_dim


def _build_points(sections, field, ring):
    points = {}
    fibers = {}
    for sec_name, lines in sections:
        if sec_name != "points":
            continue
        for line_no, line in lines:
            if line.startswith("point"):
                rest = line[len("point"):]
                if "=" not in rest:
                    raise ParseError("expected 'point NAME = (c1, ..., cn)'", line_no, 1)
                name, coords = rest.split("=", 1)
                name = name.strip()
                tup = _parse_tuple_exprs(coords, field, line_no)
                if len(tup) != ring.n:
                    raise ParseError(
                        "point has %d coordinates, ring has %d" % (len(tup), ring.n),
                        line_no,
                        1,
                    )
                points[name] = tup
            elif line.startswith("fiber"):
                rest = line[len("fiber"):]
                if "=" not in rest or ":" not in rest:
                    raise ParseError(
                        "expected 'fiber NAME = BASE : (c1, ..., cn)'", line_no, 1
                    )
                name, spec = rest.split("=", 1)
                base_name, coords = spec.split(":", 1)
                name = name.strip()
                base_name = base_name.strip()
                if base_name not in points:
                    raise ParseError("unknown base point %r" % base_name, line_no, 1)
                tup = _parse_tuple_exprs(coords, field, line_no)
                if len(tup) != ring.n:
                    raise ParseError(
                        "fiber has %d coordinates, ring has %d" % (len(tup), ring.n),
                        line_no,
                        1,
                    )
                fibers[name] = (base_name, tup)
            else:
                raise ParseError("unknown points declaration %r" % line, line_no, 1)
    return points, fibers


def _build_morphisms(sections, field, algebra, order, kwargs):
    morphisms = []
    source = algebra
    for sec_name, lines in sections:
        if sec_name != "morphism":
            continue
        target_vars = None
        target_gens = []
        image_decls = []
        for line_no, line in lines:
            if line.startswith("vars"):
                target_vars = _split_names(line[len("vars"):], line_no)
            elif line.startswith("gen"):
                target_gens.append((line_no, line[len("gen"):].strip()))
            elif line.startswith("map"):
                rest = line[len("map"):]
                if "=" not in rest:
                    raise ParseError("expected 'map VAR = EXPR'", line_no, 1)
                var, expr = rest.split("=", 1)
                image_decls.append((line_no, var.strip(), expr.strip()))
            else:
                raise ParseError("unknown morphism declaration %r" % line, line_no, 1)
        if target_vars is None:
            raise ParseError("morphism section needs a vars declaration", 1, 1)
        target_ctx = RingCtx(field, target_vars, order)
        gens = [parse_poly(expr, target_ctx, line_no) for line_no, expr in target_gens]
        target = PresentedAlgebra(target_ctx, gens, **kwargs)
        images = {}
        for line_no, var, expr in image_decls:
            if var not in target_vars:
                raise ParseError("map for unknown target variable %r" % var, line_no, 1)
            images[var] = parse_poly(expr, source.ctx, line_no)
        missing = [v for v in target_vars if v not in images]
        if missing:
            raise ParseError("missing map for %s" % ", ".join(missing), 1, 1)
        morphisms.append(RingMap(source, target, [images[v] for v in target_vars]))
        source = target
    return morphisms


# -- canonical printing ------------------------------------------------------


def canonical_poly_str(f):
    """Primitive-scaled rendering: every coefficient is a polynomial in
    the base symbols, so the text re-parses under the grammar."""
    return str(primitive_scale(f))


def _row_sort_key(ctx, row):
    key = order_key(ctx.order)
    best = None
    for j, p in enumerate(row):
        if p.is_zero():
            continue
        exp, _ = p.leading()
        cand = (key(exp), -j)
        if best is None or cand > best:
            best = cand
    return best if best is not None else ((), 0)


def _scaled_row(row):
    from .ideal import _primitive_row

    if all(p.is_zero() for p in row):
        return list(row)
    return _primitive_row(list(row))


def print_presentation(obj):
    """Deterministic canonical text for presentations, cones and slices."""
    if isinstance(obj, ModulePresentation):
        labels = ", ".join(obj.basis_labels)
        rows = [_scaled_row(r) for r in obj.relations.rows]
        rows = [r for r in rows if any(not p.is_zero() for p in r)]
        rows.sort(key=lambda r: _row_sort_key(obj.algebra.ctx, r), reverse=True)
        if not rows:
            return "free: %s; relations: (none)" % labels
        lines = ["free: %s; relations:" % labels]
        for r in rows:
            lines.append("  " + linear_combo_str(r, obj.basis_labels))
        return "\n".join(lines)
    if isinstance(obj, ConeAlgebra):
        return _ideal_text(obj.cone_ideal)
    if isinstance(obj, SlicedVariety):
        return "slice: %s\n%s" % (obj.slice, _ideal_text(obj.ideal))
    if isinstance(obj, PresentedAlgebra):
        return _ideal_text(obj)
    raise TypeError("cannot print %r" % (obj,))


def _ideal_text(algebra):
    ctx = algebra.ctx
    head = "vars: %s" % ", ".join(ctx.vars)
    gens = [primitive_scale(g) for g in algebra.gens if not g.is_zero()]
    gens.sort(key=lambda g: order_key(ctx.order)(g.leading()[0]), reverse=True)
    if not gens:
        return "%s\nideal: (none)" % head
    lines = [head, "ideal:"]
    for g in gens:
        lines.append("  " + str(g))
    return "\n".join(lines)


def parse_presentation(text, field=None, algebra=None, order=DEGREVLEX):
    """Inverse of print_presentation on canonical output.

    Returns a ModulePresentation (needs `algebra`), a PresentedAlgebra
    (needs `field`), or a (slice_tag, PresentedAlgebra) pair.
    """
    lines = [l for l in (_strip(l) for l in text.splitlines()) if l]
    if not lines:
        raise ParseError("empty presentation text", 1, 1)
    if lines[0].startswith("slice:"):
        tag = lines[0][len("slice:"):].strip()
        rest = "\n".join(lines[1:])
        return tag, parse_presentation(rest, field=field, order=order)
    if lines[0].startswith("free:"):
        if algebra is None:
            raise ParseError("module presentation needs its quotient algebra", 1, 1)
        return _parse_module(lines, algebra)
    if lines[0].startswith("vars:"):
        if field is None:
            raise ParseError("ideal presentation needs the base field", 1, 1)
        names = _split_names(lines[0][len("vars:"):], 1)
        ctx = RingCtx(field, names, order)
        gens = []
        idx = 1
        if idx < len(lines) and lines[idx].startswith("ideal:"):
            rest = lines[idx][len("ideal:"):].strip()
            idx += 1
            if rest == "(none)":
                return PresentedAlgebra(ctx)
        for line in lines[idx:]:
            gens.append(parse_poly(line, ctx))
        return PresentedAlgebra(ctx, gens)
    raise ParseError("unrecognized presentation header", 1, 1)


def _parse_module(lines, algebra):
    head = lines[0][len("free:"):]
    if ";" not in head:
        raise ParseError("malformed module header", 1, 1)
    labels_part, relations_part = head.split(";", 1)
    labels = tuple(_split_names(labels_part, 1))
    relations_part = relations_part.strip()
    ctx = algebra.ctx
    ext_ctx = RingCtx(ctx.base, ctx.vars + labels, ctx.order)
    rows = []
    if relations_part == "relations: (none)":
        body = []
    elif relations_part == "relations:":
        body = lines[1:]
    else:
        raise ParseError("malformed relations header", 1, 1)
    n = ctx.n
    for line in body:
        p = parse_poly(line, ext_ctx)
        row = [ctx.zero() for _ in labels]
        for e, c in p.terms.items():
            label_part = e[n:]
            if sum(label_part) != 1:
                raise ParseError("relation row is not linear in the basis labels", 1, 1)
            j = label_part.index(1)
            mono = e[:n]
            row[j] = row[j] + Poly(ctx, {mono: c})
        rows.append(row)
    return ModulePresentation(algebra, len(labels), rows, labels)
