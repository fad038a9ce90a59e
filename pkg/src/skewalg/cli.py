"""Command-line front end: ``skewalg <command> <problem.json>``.

Exit codes: 0 success, 1 validation failure or negative verdict, 2 undecided.
"""
import argparse
import json
import sys

from .algebra import AlgebraError, Undecided
from .grouprep import irreducibles
from .scalars import DegreeCeilingExceeded
from .serialize import (ProblemError, dumps, load_problem, resolve_path, field_from_json,
                        group_from_json, algebra_to_json, matrix_to_json, field_to_json)
from .equivariant import skew_algebra
from .theorems import (Options, validate_setup, verify_main_theorem, basic_reduction,
                       quiver_of_basic, demonet_check)

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED = 0, 1, 2


class _Result:
    def __init__(self, payload, lines, code=EXIT_OK):
        self.payload = payload
        self.lines = lines
        self.code = code


def _overrides(args):
    return {"seed": args.seed, "max_samples": args.max_samples,
            "degree_ceiling": args.degree_ceiling}


def _problem(args):
    return load_problem(resolve_path(args.problem), _overrides(args))


def _fmt_matrix(M):
    return ["  " + " ".join(str(x) for x in row) for row in M]


# ----------------------------------------------------------------- commands

def cmd_check(args):
    prob = _problem(args)
    rep = validate_setup(prob.setup, prob.options)
    lines = [f"setup: {prob.name}"]
    lines += [f"{'ok  ' if c.passed else 'FAIL'} {c.name}" + (f" ({c.detail})" if c.detail else "")
              for c in rep.checks]
    lines.append("VALID" if rep.ok else "INVALID")
    payload = {"command": "check", "name": prob.name, **rep.to_dict()}
    return _Result(payload, lines, EXIT_OK if rep.ok else EXIT_FAIL)


def cmd_skew(args):
    prob = _problem(args)
    S = skew_algebra(prob.action)
    payload = {"command": "skew", "name": prob.name, "dim": S.dim,
               "group_order": prob.group.order, "base_dim": prob.algebra.dim,
               "generators": len(S.generators())}
    lines = [f"dim {S.dim}", f"|G| = {prob.group.order}, dim A = {prob.algebra.dim}",
             f"generators {payload['generators']}"]
    if args.structure:
        payload["algebra"] = algebra_to_json(S)
        payload["field"] = field_to_json(S.field)
        lines.append(json.dumps(payload["algebra"], sort_keys=True))
    return _Result(payload, lines)


def cmd_basic(args):
    prob = _problem(args)
    red = basic_reduction(skew_algebra(prob.action), prob.options)
    payload = {"command": "basic", "name": prob.name, **red.to_dict()}
    lines = [f"dim {red.algebra.dim} -> basic dim {red.basic.dim}",
             f"classes {len(red.class_dims)}: dims {red.class_dims}, "
             f"multiplicities {red.multiplicities}", "cartan:"] + _fmt_matrix(red.cartan)
    return _Result(payload, lines)


def cmd_irr(args):
    spec = args.group
    field = args.field
    try:
        with open(resolve_path(spec)) as fh:
            obj = json.load(fh)
        group_obj = obj["group"]
        field = field or obj.get("field")
    except (FileNotFoundError, IsADirectoryError, OSError):
        group_obj = spec
    if field is None:
        field = "Q"
    if isinstance(field, str) and field.isdigit():
        field = {"Fp": int(field)}
    F = field_from_json(field, "--field")
    G = group_from_json(group_obj, "group")
    table = irreducibles(G, F, args.seed or 0, args.max_samples or Options.budget,
                         args.degree_ceiling or Options.degree_ceiling)
    rows = [list(r) for r in table.rows()]
    payload = {"command": "irr", "group_order": G.order, "field": field_to_json(F),
               "rows": rows, "status": table.status}
    lines = [f"|G| = {G.order}", "dim endo-dim mult"] + [f"{r[0]} {r[1]} {r[2]}" for r in rows]
    return _Result(payload, lines)


def cmd_verify_main(args):
    prob = _problem(args)
    rep = verify_main_theorem(prob.setup, prob.options)
    payload = {"command": "verify-main", "name": prob.name, **rep.to_dict()}
    if rep.isomorphism is not None:
        payload["isomorphism"] = matrix_to_json(prob.field, rep.isomorphism)
    objs = rep.collection.objects
    lines = [rep.verdict,
             f"dims (skew, basic) = ({rep.skew_dim}, {rep.basic_dim}), dim End(F) = {rep.end_F_dim}",
             "multiplicities " + " ".join(f"{o.label()}={o.multiplicity}" for o in objs)]
    lines += [f"FAIL {c.name}" + (f" ({c.detail})" if c.detail else "")
              for c in rep.checks if not c.passed]
    return _Result(payload, lines, EXIT_OK if rep.verified else EXIT_FAIL)


def cmd_quiver(args):
    prob = _problem(args)
    red = basic_reduction(skew_algebra(prob.action), prob.options)
    q = quiver_of_basic(red.basic, prob.options, check_basic=False)
    dem = demonet_check(prob.setup, prob.options, quiver=q)
    payload = {"command": "quiver", "name": prob.name, "quiver": q.to_dict(),
               "demonet": dem.to_dict()}
    lines = [f"{len(q.vertices)} vertices, {q.arrow_count} arrows",
             "division dims " + " ".join(map(str, q.division_dims))]
    lines += [f"  {u} -> {v}: {d}" for (u, v), d in sorted(q.arrows.items())]
    lines.append(f"vertex count {dem.vertex_count} = "
                 + " + ".join(map(str, dem.per_orbit)) + (" ok" if dem.ok else " MISMATCH"))
    return _Result(payload, lines, EXIT_OK if dem.ok else EXIT_FAIL)


# ------------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--max-samples", type=int, default=None,
                        help="random samples per search before reporting undecided")
    common.add_argument("--degree-ceiling", type=int, default=None,
                        help="largest polynomial degree factored")
    common.add_argument("--output", choices=("text", "json"), default="text")
    p = argparse.ArgumentParser(prog="skewalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, hlp in (("check", cmd_check, "validate an exceptional setup"),
                          ("skew", cmd_skew, "build the skew group algebra"),
                          ("basic", cmd_basic, "basic reduction of the skew group algebra"),
                          ("verify-main", cmd_verify_main,
                           "verify End(F) against the basic skew algebra"),
                          ("quiver", cmd_quiver, "quiver of the basic skew algebra")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("problem", help="problem file, or bundled:<name>")
        if name == "skew":
            sp.add_argument("--structure", action="store_true",
                            help="include structure constants")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("irr", parents=[common], help="irreducible representations of a group")
    sp.add_argument("group", help="group name (C3, S3, ...), group file, or bundled:<name>")
    sp.add_argument("--field", default=None, help='"Q" or a prime p')
    sp.set_defaults(func=cmd_irr)
    return p


def _emit(args, payload, lines, out):
    if args.output == "json":
        out.write(dumps(payload))
    else:
        out.write("\n".join(lines) + "\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        res = args.func(args)
    except Undecided as exc:
        _emit(args, {"command": args.command, "status": "undecided", "reason": exc.reason},
              [f"UNDECIDED: {exc.reason}"], out)
        return EXIT_UNDECIDED
    except DegreeCeilingExceeded as exc:
        _emit(args, {"command": args.command, "status": "undecided", "reason": str(exc)},
              [f"UNDECIDED: {exc}"], out)
        return EXIT_UNDECIDED
    except (ProblemError, AlgebraError, FileNotFoundError, ValueError) as exc:
        _emit(args, {"command": args.command, "status": "error", "error": str(exc)},
              [f"error: {exc}"], out)
        return EXIT_FAIL
    _emit(args, res.payload, res.lines, out)
    return res.code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
