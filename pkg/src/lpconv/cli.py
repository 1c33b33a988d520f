"""Command line front end: JSON in, JSON out, deterministic under --seed.

Exit codes: 0 success, 1 domain error (invalid isometry, ungrouplike
algebra, mismatched contexts, failed suite), 2 usage error, 3 malformed
input JSON, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, serialize
from .convolution import ConvolutionContext, convolver_algebra, unitary_group_enumerate
from .errors import BudgetError, LpconvError
from .groups import (is_isomorphic, make_cyclic, make_dihedral,
                     make_direct_product, make_quaternion, make_symmetric)
from .isometry import lamperti_decompose, lamperti_distance
from .measure import (BooleanAutomorphism, Valuation, rn_chain_rules,
                      rn_derivative)
from .pnorm import pnorm_estimate
from .reconstruction import decide_isomorphism, p2_degeneracy_demo, recover_group
from .serialize import SchemaError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_BAD_JSON = 3
EXIT_BUDGET = 4


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_perm(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad permutation flag: {text}") from exc


def _cmd_group(args) -> tuple[object, int]:
    rest = args.rest
    if args.action == "make":
        if not rest:
            raise SchemaError("group make needs a family name")
        family, params = rest[0], rest[1:]
        if family == "cyclic":
            g = make_cyclic(int(params[0]))
        elif family == "dihedral":
            g = make_dihedral(int(params[0]))
        elif family == "symmetric":
            g = make_symmetric(int(params[0]))
        elif family == "quaternion":
            g = make_quaternion()
        elif family == "product":
            g = make_direct_product(serialize.group_from_json(_load(params[0])),
                                    serialize.group_from_json(_load(params[1])))
        else:
            raise SchemaError(f"unknown family {family}")
        return serialize.group_to_json(g), EXIT_OK
    # action == "iso"
    if len(rest) != 2:
        raise SchemaError("group iso takes two group files")
    a = serialize.group_from_json(_load(rest[0]))
    b = serialize.group_from_json(_load(rest[1]))
    return serialize.iso_to_json(is_isomorphic(a, b)), EXIT_OK


def _weights_list(data) -> tuple[float, ...]:
    try:
        return tuple(float(w) for w in data["weights"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad weights payload: {exc}") from exc


def _cmd_measure(args) -> tuple[object, int]:
    if args.action == "rnd":
        if len(args.files) != 2:
            raise SchemaError("measure rnd takes <sigma.json> <mu.json>")
        sigma_weights = _weights_list(_load(args.files[0]))
        algebra = serialize.algebra_weights_from_json(_load(args.files[1]))
        sigma = Valuation(algebra, sigma_weights)
        return serialize.function_to_json(rn_derivative(sigma, algebra.mu())), EXIT_OK
    # action == "check-rn"
    if len(args.files) != 3:
        raise SchemaError("measure check-rn takes <mu.json> <sigma.json> <rho.json>")
    algebra = serialize.algebra_weights_from_json(_load(args.files[0]))
    mu = algebra.mu()
    sigma = Valuation(algebra, _weights_list(_load(args.files[1])))
    rho = Valuation(algebra, _weights_list(_load(args.files[2])))
    perm = _parse_perm(args.perm) if args.perm else tuple(range(algebra.atoms))
    phi = BooleanAutomorphism(algebra, perm)
    report = rn_chain_rules(mu, sigma, rho, phi)
    return {"product_deviation": report.product_deviation,
            "push_deviation": report.push_deviation,
            "max_deviation": report.max_deviation}, EXIT_OK


def _cmd_isom(args) -> tuple[object, int]:
    if args.action == "decompose":
        op = serialize.operator_from_json(_load(args.files[0]))
        kwargs = {}
        if args.tol is not None:
            kwargs = {"support_tol": args.tol, "isometry_tol": args.tol}
        form = lamperti_decompose(op, **kwargs)
        return {"phases": serialize.function_to_json(form.f),
                "perm": list(form.phi.perm)}, EXIT_OK
    # action == "distance"
    op_a = serialize.operator_from_json(_load(args.files[0]))
    op_b = serialize.operator_from_json(_load(args.files[1]))
    if op_a.context != op_b.context:
        raise LpconvError("operators live on different contexts")
    form_a = lamperti_decompose(op_a)
    form_b = lamperti_decompose(op_b)
    est = pnorm_estimate(op_a - op_b, op_a.context, seed=args.seed)
    return {"distance": lamperti_distance(form_a, form_b, op_a.context),
            "estimate": {"lower": est.lower, "upper": est.upper}}, EXIT_OK


def _cmd_norm(args) -> tuple[object, int]:
    op = serialize.operator_from_json(_load(args.file))
    ctx = op.context
    if args.p is not None:
        from .isometry import LpContext
        ctx = LpContext(ctx.algebra, args.p)
    est = pnorm_estimate(op.matrix, ctx, starts=args.starts, seed=args.seed)
    return serialize.norm_estimate_to_json(est), EXIT_OK


def _cmd_algebra(args) -> tuple[object, int]:
    if args.action == "build":
        g = serialize.group_from_json(_load(args.files[0]))
        basis = convolver_algebra(ConvolutionContext(g, args.p))
        return serialize.algebra_basis_to_json(basis), EXIT_OK
    # action == "unitaries"
    basis = serialize.algebra_basis_from_json(_load(args.files[0]))
    units = unitary_group_enumerate(basis, basis.p)
    return {"count": len(units),
            "classes": [serialize.phased_permutation_to_json(u) for u in units]}, EXIT_OK


def _cmd_recover(args) -> tuple[object, int]:
    basis = serialize.algebra_basis_from_json(_load(args.file))
    rec = recover_group(basis, basis.p)
    return serialize.recovered_group_to_json(rec), EXIT_OK


def _cmd_decide(args) -> tuple[object, int]:
    basis_a = serialize.algebra_basis_from_json(_load(args.files[0]))
    basis_b = serialize.algebra_basis_from_json(_load(args.files[1]))
    verdict = decide_isomorphism(basis_a, basis_a.p, basis_b, basis_b.p)
    return serialize.verdict_to_json(verdict), EXIT_OK


def _cmd_demo(args) -> tuple[object, int]:
    report = p2_degeneracy_demo(seed=args.seed)
    return serialize.p2_report_to_json(report), EXIT_OK


def _cmd_suite(args) -> tuple[object, int]:
    indices = None
    if args.criteria:
        indices = [int(v) for v in args.criteria.split(",")]
    report = acceptance.run_suite(seed=args.seed, indices=indices)
    return report, EXIT_OK if report["all_passed"] else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpconv")
    parser.add_argument("--out", help="write the JSON result to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="construct groups and test isomorphism")
    p_group.add_argument("action", choices=["make", "iso"])
    p_group.add_argument("rest", nargs="*",
                         help="make: <family> <params...>; iso: <a.json> <b.json>")
    p_group.set_defaults(handler=_cmd_group)

    p_measure = sub.add_parser("measure", help="derivatives on finite measure algebras")
    p_measure.add_argument("action", choices=["rnd", "check-rn"])
    p_measure.add_argument("files", nargs="+")
    p_measure.add_argument("--perm", help="comma separated atom permutation")
    p_measure.set_defaults(handler=_cmd_measure)

    p_isom = sub.add_parser("isom", help="factor isometries and measure distances")
    p_isom.add_argument("action", choices=["decompose", "distance"])
    p_isom.add_argument("files", nargs="+")
    p_isom.add_argument("--tol", type=float, help="validation tolerance override")
    p_isom.add_argument("--seed", type=int, default=0)
    p_isom.set_defaults(handler=_cmd_isom)

    p_norm = sub.add_parser("norm", help="certified operator norm sandwich")
    p_norm.add_argument("file")
    p_norm.add_argument("--p", type=float)
    p_norm.add_argument("--starts", type=int, default=8)
    p_norm.add_argument("--seed", type=int, default=0)
    p_norm.set_defaults(handler=_cmd_norm)

    p_algebra = sub.add_parser("algebra", help="build algebras and list isometries")
    p_algebra.add_argument("action", choices=["build", "unitaries"])
    p_algebra.add_argument("files", nargs="+")
    p_algebra.add_argument("--p", type=float, default=3.0)
    p_algebra.set_defaults(handler=_cmd_algebra)

    p_recover = sub.add_parser("recover", help="recover a group from an algebra")
    p_recover.add_argument("file")
    p_recover.set_defaults(handler=_cmd_recover)

    p_decide = sub.add_parser("decide", help="decide algebra isomorphism")
    p_decide.add_argument("files", nargs=2)
    p_decide.set_defaults(handler=_cmd_decide)

    p_demo = sub.add_parser("demo", help="run a named demonstration")
    p_demo.add_argument("name", choices=["p2"])
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.set_defaults(handler=_cmd_demo)

    p_suite = sub.add_parser("suite", help="run the acceptance criteria")
    p_suite.add_argument("action", choices=["run"])
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--criteria", help="comma separated criterion numbers")
    p_suite.set_defaults(handler=_cmd_suite)

    return parser


def _emit(payload, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        payload, code = args.handler(args)
    except BudgetError as exc:
        _emit({"error": str(exc), "kind": "budget"}, args.out)
        return EXIT_BUDGET
    except (SchemaError, json.JSONDecodeError) as exc:
        _emit({"error": str(exc), "kind": "malformed-input"}, args.out)
        return EXIT_BAD_JSON
    except FileNotFoundError as exc:
        _emit({"error": str(exc), "kind": "missing-file"}, args.out)
        return EXIT_BAD_JSON
    except (LpconvError, ValueError, KeyError, IndexError) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, args.out)
        return EXIT_DOMAIN
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
