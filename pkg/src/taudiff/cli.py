"""Command-line front end.

Exit codes: 0 verified/success, 1 verification failed (witness printed),
2 usage or parse error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .checks import SUITE_ORDER, run_all, run_check
from .errors import (
    ArityMismatch,
    BasePointMismatch,
    ContextMismatch,
    NotADomainSuspected,
    NotAMorphism,
    NotAnAlgebraMap,
    NotAnExtension,
    NotOnVariety,
    NotTauDerivation,
    ParseError,
    ResourceLimit,
    TauDiffError,
    UnknownSymbol,
)
from .forms import omega_kahler_presentation, omega_tau_presentation, tau_of
from .geometry import (
    FiberPoint,
    lift_morphism,
    prolongation,
    prolongation_cone,
    tangent_variety,
    torsor_act,
)
from .ideal import PresentedAlgebra
from .monomials import DEGREVLEX, LEX
from .scalar import fe_str
from .textio import load_problem_file, parse_poly, print_presentation

_USAGE_ERRORS = (ParseError, UnknownSymbol, ArityMismatch, ContextMismatch)
_VERIFICATION_ERRORS = (
    NotOnVariety,
    BasePointMismatch,
    NotAMorphism,
    NotAnAlgebraMap,
    NotAnExtension,
    NotTauDerivation,
    NotADomainSuspected,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="taudiff",
        description="Exact twisted-differential algebra over differential fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="problem file")
        p.add_argument("--order", choices=[DEGREVLEX, LEX], default=DEGREVLEX)
        p.add_argument("--max-pairs", type=int, default=None)
        p.add_argument("--canonical", action="store_true",
                       help="bare golden output, no comment headers")
        return p

    p = add("tau", "coordinates of the universal twisted derivation of a polynomial")
    p.add_argument("--poly", required=True, help="expression over the file's ring")

    add("gb", "reduced Groebner basis of the ideal")
    add("cone", "prolongation cone presentation")
    add("prolong", "prolongation slice (tau_e = 1)")
    add("tangent", "tangent variety slice (tau_e = 0)")
    add("rank", "generic ranks of the twisted and Kaehler differential modules")
    add("lift", "cone-coordinate lift of the file's morphisms")

    p = add("act", "torsor action of a tangent fiber point on a prolongation point")
    p.add_argument("--tangent", required=True, metavar="NAME", help="fiber point on the tangent slice")
    p.add_argument("--point", required=True, metavar="NAME", help="fiber point on the prolongation slice")

    p = sub.add_parser("check", help="run a named verification suite (or 'all')")
    p.add_argument("suite", help="one of: %s, all" % ", ".join(SUITE_ORDER))
    p.add_argument("file", help="problem file")
    p.add_argument("--order", choices=[DEGREVLEX, LEX], default=DEGREVLEX)
    p.add_argument("--max-pairs", type=int, default=None)
    p.add_argument("--degree-bound", type=int, default=3)
    p.add_argument("--canonical", action="store_true")
    return parser


def _load(args):
    return load_problem_file(args.file, order=args.order, max_pairs=args.max_pairs)


def _header(args, text):
    if not args.canonical:
        print("# " + text)


def _fe_text(fe, field):
    return fe_str(fe, field.symbols)


def _point_text(pt, field):
    return "base (%s), fiber (%s)" % (
        ", ".join(_fe_text(c, field) for c in pt.base_point),
        ", ".join(_fe_text(c, field) for c in pt.fiber),
    )


def _cmd_tau(args):
    prob = _load(args)
    f = parse_poly(args.poly, prob.ring)
    print(tau_of(f))
    return 0


def _cmd_gb(args):
    prob = _load(args)
    _header(args, "reduced groebner basis (%s) of %s" % (args.order, prob.name))
    basis = PresentedAlgebra(prob.ring, list(prob.algebra.gb))
    print(print_presentation(basis))
    return 0


def _cmd_cone(args):
    prob = _load(args)
    _header(args, "prolongation cone of %s" % prob.name)
    print(print_presentation(prolongation_cone(prob.algebra)))
    return 0


def _cmd_prolong(args):
    prob = _load(args)
    _header(args, "prolongation of %s" % prob.name)
    print(print_presentation(prolongation(prob.algebra)))
    return 0


def _cmd_tangent(args):
    prob = _load(args)
    _header(args, "tangent variety of %s" % prob.name)
    print(print_presentation(tangent_variety(prob.algebra)))
    return 0


def _cmd_rank(args):
    prob = _load(args)
    tau_rank = omega_tau_presentation(prob.algebra).generic_rank()
    rel_rank = omega_kahler_presentation(prob.algebra).generic_rank()
    print("omega_tau: %d, omega_rel: %d" % (tau_rank, rel_rank))
    return 0


def _cmd_lift(args):
    prob = _load(args)
    if not prob.morphisms:
        print("error: no morphism declared in %s" % prob.name, file=sys.stderr)
        return 2
    for idx, ringmap in enumerate(prob.morphisms):
        lift = lift_morphism(ringmap)
        _header(args, "cone lift of morphism %d" % (idx + 1))
        target_ctx = ringmap.target.ctx
        names = (
            list(target_ctx.vars)
            + ["tau_" + v for v in target_ctx.vars]
            + ["tau_e"]
        )
        for name, image in zip(names, lift.images):
            print("%s -> %s" % (name, image))
    return 0


def _cmd_act(args):
    prob = _load(args)
    for key in (args.tangent, args.point):
        if key not in prob.fibers:
            print("error: fiber point %r not declared" % key, file=sys.stderr)
            return 2
    base_v, coords_v = prob.fibers[args.tangent]
    base_w, coords_w = prob.fibers[args.point]
    v = FiberPoint(prob.points[base_v], coords_v)
    w = FiberPoint(prob.points[base_w], coords_w)
    cone = prolongation_cone(prob.algebra)
    moved = torsor_act(cone, v, w)
    print("result: %s" % _point_text(moved, prob.field))
    return 0


def _cmd_check(args):
    prob = _load(args)
    options = {"degree_bound": args.degree_bound}
    if args.suite == "all":
        results = run_all(prob, **options)
    else:
        try:
            results = [run_check(args.suite, prob, **options)]
        except KeyError:
            print(
                "error: unknown suite %r (expected one of: %s, all)"
                % (args.suite, ", ".join(SUITE_ORDER)),
                file=sys.stderr,
            )
            return 2
    failed = False
    for res in results:
        print("[%s] %s" % (res.status, res.name))
        for line in res.lines:
            print("    " + line)
        failed = failed or not res.passed
    return 1 if failed else 0


_COMMANDS = {
    "tau": _cmd_tau,
    "gb": _cmd_gb,
    "cone": _cmd_cone,
    "prolong": _cmd_prolong,
    "tangent": _cmd_tangent,
    "rank": _cmd_rank,
    "lift": _cmd_lift,
    "act": _cmd_act,
    "check": _cmd_check,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except ResourceLimit as err:
        print("resource limit: %s" % err, file=sys.stderr)
        return 3
    except _USAGE_ERRORS as err:
        print("error: %s" % err, file=sys.stderr)
        return 2
    except _VERIFICATION_ERRORS as err:
        print("verification failed: %s" % err, file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2
    except TauDiffError as err:
        print("error: %s" % err, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
