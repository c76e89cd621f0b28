"""Command-line interface.

JSON reports go to stdout, a one-line human summary to stderr. Exit codes:
0 all checks passed, 1 a check failed, 2 input error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__
from ._backend import kernels
from .bounds import (
    DEFAULT_TOL,
    connected_sum_direct,
    connected_sum_resummed,
    evaluate_bound,
    improved_edge_factor,
    key_gap_scan,
    naive_edge_factor,
    naive_tree_bound,
    tree_bound_complex,
    tree_bound_real,
)
from .errors import CapacityError, DomainError, StabilityError
from .graph import edge_pairs
from .instances import (
    GENERATOR_NAME,
    Distribution,
    certificate_from_json,
    dumps,
    emit_instance,
    generate_instance,
    instance_digest,
    load_json,
    parse_instance,
    sample_potential,
    spawn_rngs,
)
from .potentials import check_stability, edge_order_from_potential, minimal_uniform_stability
from .scheme import EdgeOrder, verify_partition

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3
KEY_GAP_TOL = 1e-12


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check(name, passed, values=None, tolerance=None, counterexample=None):
    return {
        "name": name,
        "passed": bool(passed),
        "values": values or {},
        "tolerance": tolerance,
        "counterexample": counterexample,
    }


def _subset_label(subset):
    return [v + 1 for v in subset]


def _pairs_label(n, edges):
    table = edge_pairs(n)
    return [[table[e][0] + 1, table[e][1] + 1] for e in edges]


def _load_instance(args):
    u, cert = parse_instance(args.instance)
    b_arg = getattr(args, "b", None)
    if b_arg is None:
        b = cert if cert is not None else "auto"
    elif b_arg == "auto":
        b = "auto"
    else:
        b = certificate_from_json(load_json(b_arg), u.n)
    return u, cert, b


def _workers(args):
    return max(1, args.parallel or 1)


def cmd_verify_scheme(args, report):
    n = args.n
    if args.order == "lex":
        orders = [("lex", EdgeOrder.lexicographic(n))]
    else:
        report["rng"] = {"generator": GENERATOR_NAME, "seed": args.seed}
        orders = [(f"random[{k}]", EdgeOrder.random(n, rng)) for k, rng in enumerate(spawn_rngs(args.seed, args.count))]
    for label, order in orders:
        res = verify_partition(n, order)
        report["checks"].append(
            _check(
                f"partition_scheme/{label}",
                res.passed,
                {
                    "connected_count": res.connected_count,
                    "tree_count": res.tree_count,
                    "interval_total": res.interval_total,
                    "interval_size_histogram": {str(k): v for k, v in res.size_histogram().items()},
                    "facts": res.checks,
                    "order_ranks": list(order.rank),
                },
                0,
                res.counterexample,
            )
        )


def cmd_verify_identity(args, report):
    n, tol = args.n, args.tol
    dist = Distribution("uniform", tuple(args.range))
    report["rng"] = {"generator": GENERATOR_NAME, "seed": args.seed}
    report["distribution"] = str(dist)
    worst, worst_case, count = 0.0, None, 0
    for trial, rng in enumerate(spawn_rngs(args.seed, args.trials)):
        u = sample_potential(n, dist, rng)
        direct = connected_sum_direct(u)
        orders = [("nondecreasing", edge_order_from_potential(u))]
        orders += [(f"random[{k}]", EdgeOrder.random(n, rng)) for k in range(args.orders)]
        for label, order in orders:
            resummed = connected_sum_resummed(u, order, workers=_workers(args))
            err = abs(resummed - direct) / (1 + abs(direct))
            count += 1
            if err > worst:
                worst = err
                worst_case = {"trial": trial, "order": label, "direct": [direct.real, direct.imag],
                              "resummed": [resummed.real, resummed.imag]}
    report["checks"].append(
        _check("resummation_identity", worst <= tol,
               {"comparisons": count, "max_scaled_error": worst}, tol, worst_case if worst > tol else None)
    )


def cmd_verify_key(args, report):
    n = args.n
    if args.complex:
        dist = Distribution("complex-uniform", (-1.0, 1.0, -math.pi, math.pi))
    else:
        dist = Distribution("uniform", tuple(args.range))
    report["rng"] = {"generator": GENERATOR_NAME, "seed": args.seed}
    report["distribution"] = str(dist)
    best, where = math.inf, None
    random_min = math.inf
    trees = 0
    for trial, rng in enumerate(spawn_rngs(args.seed, args.trials)):
        u = sample_potential(n, dist, rng)
        scan = key_gap_scan(u, allow_large=args.allow_large)
        trees += scan.tree_count
        if scan.min_gap < best:
            best, where = scan.min_gap, {"trial": trial, "tree": _pairs_label(n, scan.argmin.edges())}
        for _ in range(args.random_orders):
            random_min = min(random_min, key_gap_scan(u, EdgeOrder.random(n, rng), args.allow_large).min_gap)
    values = {"trees_scanned": trees, "min_gap": best, "argmin": where}
    if args.random_orders:
        # other orders are recorded as data only, nothing is asserted about them
        values["random_order_min_gap"] = random_min
    report["checks"].append(
        _check("key_inequality", best >= -KEY_GAP_TOL, values, KEY_GAP_TOL, where if best < -KEY_GAP_TOL else None)
    )


def cmd_bound(args, report):
    u, _, b = _load_instance(args)
    report["instance_digest"] = instance_digest(u)
    res = evaluate_bound(u, b, complex_form=args.complex or u.is_complex, tol=args.tol,
                         allow_large=args.allow_large, workers=_workers(args))
    report["mode"] = res.mode
    values = res.to_dict()
    lhs_ok = res.satisfied is not False
    report["checks"].append(_check("tree_graph_bound", lhs_ok, values, args.tol))
    report["checks"].append(
        _check("improved_le_naive", res.rhs_improved <= res.rhs_naive,
               {"rhs_improved": res.rhs_improved, "rhs_naive": res.rhs_naive}, 0)
    )


def cmd_stability(args, report):
    u, _, b = _load_instance(args)
    report["instance_digest"] = instance_digest(u)
    big_b = minimal_uniform_stability(u)
    report["checks"].append(_check("minimal_uniform", True, {"B": big_b, "sum_b": big_b * u.n}))
    if b != "auto":
        res = check_stability(u, b)
        counter = None if res else {"subset": _subset_label(res.violating_subset)}
        report["checks"].append(_check("certificate", res.passed, {"b": list(b.b)}, 0, counter))


def cmd_compare(args, report):
    u, _, b = _load_instance(args)
    report["instance_digest"] = instance_digest(u)
    workers = _workers(args)
    bound = tree_bound_complex if u.is_complex else tree_bound_real
    improved = bound(u, b, args.allow_large, workers)
    naive = naive_tree_bound(u, b, args.allow_large, workers)
    per_edge = [
        {"pair": [i + 1, j + 1], "improved": float(a), "naive": float(c)}
        for (i, j), a, c in zip(edge_pairs(u.n), improved_edge_factor(u.values), naive_edge_factor(u.values))
    ]
    report["checks"].append(
        _check("improved_le_naive", improved <= naive,
               {"rhs_improved": improved, "rhs_naive": naive,
                "ratio": improved / naive if naive > 0 else None, "edge_factors": per_edge}, 0)
    )


def cmd_generate(args, report):
    u = generate_instance(args.n, args.dist, args.seed)
    report["rng"] = {"generator": GENERATOR_NAME, "seed": args.seed}
    report["distribution"] = args.dist
    report["instance_digest"] = instance_digest(u)
    data = emit_instance(u)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(data) + "\n")
        report["path"] = args.out
    else:
        report["instance"] = data


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance (default 1e-9)")
    common.add_argument("--parallel", type=int, default=0, metavar="WORKERS",
                        help="split tree sums over WORKERS processes (default: sequential)")
    common.add_argument("--allow-large", action="store_true", help="allow tree sums up to n = 12")

    parser = _Parser(prog="treebound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-scheme", parents=[common], help="exhaustive Kruskal partition check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", choices=["lex", "random"], default="lex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1, help="number of random orders")
    p.set_defaults(func=cmd_verify_scheme)

    p = sub.add_parser("verify-identity", parents=[common], help="tree resummation vs direct graph sum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--range", type=float, nargs=2, default=(-2.0, 3.0), metavar=("LO", "HI"))
    p.add_argument("--orders", type=int, default=5, help="random orders per trial")
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("verify-key", parents=[common], help="minimum key-inequality gap over all trees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--range", type=float, nargs=2, default=(-2.0, 3.0), metavar=("LO", "HI"))
    p.add_argument("--complex", action="store_true", help="complex potentials, gap taken on Re u")
    p.add_argument("--random-orders", type=int, default=0, help="also record gaps under random orders")
    p.set_defaults(func=cmd_verify_key)

    for name, func, text in [
        ("bound", cmd_bound, "both sides of the tree-graph bound"),
        ("stability", cmd_stability, "minimal uniform B and certificate check"),
        ("compare", cmd_compare, "improved vs naive tree bound"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--instance", required=True)
        p.add_argument("--b", help="certificate JSON file, or 'auto'" if name != "stability" else "certificate JSON file")
        if name == "bound":
            p.add_argument("--complex", action="store_true", help="use the complex form of the bound")
        p.set_defaults(func=func)

    p = sub.add_parser("generate", parents=[common], help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", default="uniform:-2,3", help="uniform:LO,HI | gaussian:MU,SIGMA | complex-uniform:RL,RH,IL,IH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def _emit(report, out, err):
    out.write(dumps(report) + "\n")
    if report["status"] == "error":
        err.write(f"treebound {report['command']}: error: {report['error']['message']}\n")
        return
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    summary = "PASS" if not failed else "FAIL (" + ", ".join(failed) + ")"
    err.write(f"treebound {report['command']}: {summary} [{len(report['checks'])} checks, "
              f"{report['runtime_seconds']:.3f}s, {report['mode']}, {report['backend']}]\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    report = {
        "command": argv[0] if argv else None,
        "argv": argv,
        "status": None,
        "instance_digest": None,
        "mode": "sequential",
        "backend": kernels.NAME,
        "checks": [],
    }
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        report["command"] = args.command
        if args.parallel and args.parallel > 1:
            report["mode"] = "parallel"
        args.func(args, report)
    except CapacityError as exc:
        code = EXIT_CAPACITY
        report.update(status="error", error={"type": type(exc).__name__, "message": str(exc), "exit_code": code})
    except DomainError as exc:
        code = EXIT_INPUT
        error = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
        if isinstance(exc, StabilityError):
            error["subset"] = _subset_label(exc.subset)
        report.update(status="error", error=error)
    else:
        passed = all(c["passed"] for c in report["checks"])
        report["status"] = "pass" if passed else "fail"
        code = EXIT_PASS if passed else EXIT_FAIL
    report["runtime_seconds"] = time.perf_counter() - start
    _emit(report, out, err)
    return code


if __name__ == "__main__":
    sys.exit(main())
