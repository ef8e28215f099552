"""Command-line driver: analysis, generation, builds, probes, verification.

Exit status: 0 on success, 1 on usage or input errors, 2 when `verify` finds
a failing check. Reports are JSON on stdout unless -o is given.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any

from .core import Domain, expectation, tree_to_table, variance
from .corpus import random_function
from .discretize import check_certificates, discretize
from .errors import InfluenceLabError
from .extremal import gen_counterexample, gen_example1, junta_distance
from .fourier import DEFAULT_DECOMPOSITION_CAP, efron_stein, walsh_spectrum
from .inequalities import (
    InequalityReport,
    check_analog,
    check_bonami_beckner,
    check_variance_bound,
    kkl_constant_probe,
)
from .influence import InfluenceProfile
from .io import (
    dump_report,
    encode_number,
    function_to_dict,
    input_digest,
    load_function,
    new_report,
    save_function,
    save_tree,
    tree_to_dict,
)
from .subcube import bourgain_probe, greedy_subcube, restriction_search
from .treebuilder import BuildParams, build_tree
from .verify import CHECKS, run_all, run_check


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _inequality_dict(rep: InequalityReport) -> dict[str, Any]:
    return {
        "name": rep.name,
        "left": encode_number(rep.left),
        "right": encode_number(rep.right),
        "slack": encode_number(rep.slack),
        "holds": rep.holds,
        "parameters": rep.parameters,
    }


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)


def _analyze(args) -> int:
    f = load_function(args.input)
    report = new_report(
        "analyze",
        {"constant": args.constant, "log_base": args.log_base},
        input_digest(args.input),
    )
    dom = f.domain
    profile = InfluenceProfile.of(f)
    report["sections"]["function"] = {
        "n": dom.n,
        "arities": list(dom.arities),
        "size": dom.size,
        "uniform": dom.is_uniform,
        "boolean": f.is_boolean,
        "expectation": encode_number(expectation(f)),
        "variance": encode_number(variance(f)),
    }
    report["sections"]["influence"] = {
        "digital": [encode_number(v) for v in profile.digital],
        "variational": [encode_number(v) for v in profile.variational],
        "total_digital": encode_number(profile.total_digital),
        "total_variational": encode_number(profile.total_variational),
        "coordinates": list(range(1, dom.n + 1)),
    }
    if dom.n <= DEFAULT_DECOMPOSITION_CAP and dom.size <= 4096:
        dec = efron_stein(f)
        report["sections"]["fourier"] = {
            "norms_sq": [
                {"subset": sorted(i + 1 for i in S), "norm_sq": norm}
                for S, norm in sorted(dec.norms_sq.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            ]
        }
        if all(r == 2 for r in dom.arities) and dom.is_uniform:
            spectrum = walsh_spectrum(f)
            report["sections"]["walsh"] = [
                {"subset": sorted(i + 1 for i in spectrum.subset_of_rank(k)), "coefficient": float(c)}
                for k, c in enumerate(spectrum.coeffs)
            ]
    checks: list[dict[str, Any]] = []
    if f.is_boolean:
        checks.extend(_inequality_dict(r) for r in check_analog(f))
        checks.append(
            _inequality_dict(check_variance_bound(f, constant=args.constant, log_base=args.log_base))
        )
        if not f.is_constant:
            report["sections"]["kkl_probe"] = {"empirical_constant": kkl_constant_probe(f)}
    if all(r == 2 for r in dom.arities) and dom.is_uniform:
        checks.append(_inequality_dict(check_bonami_beckner(f, 4.0)))
        checks.append(_inequality_dict(check_bonami_beckner(f, 1.5)))
    report["sections"]["inequalities"] = checks
    _emit(dump_report(report), args.output)
    return 0


def _build_tree(args) -> int:
    f = load_function(args.input)
    params = BuildParams(
        epsilon=args.epsilon,
        tau=args.tau,
        depth_cap=args.depth_cap,
        stop_fraction=args.stop_fraction,
    )
    tree, diag = build_tree(f, params)
    report = new_report(
        "build-tree",
        {
            "epsilon": args.epsilon,
            "tau": args.tau,
            "depth_cap": args.depth_cap,
            "stop_fraction": params.resolved_stop_fraction(),
        },
        input_digest(args.input),
    )
    report["sections"]["diagnostics"] = {
        "depth": diag.depth,
        "stop_reason": diag.stop_reason,
        "achieved_error": encode_number(diag.achieved_error),
        "l1_mass": encode_number(diag.l1_mass),
        "l2_mass": encode_number(diag.l2_mass),
        "rounding_mass": encode_number(diag.rounding_mass),
        "error_bound": encode_number(diag.error_bound),
        "node_accounting_sum": encode_number(diag.node_accounting_sum),
        "leaf_parent_sum": encode_number(diag.leaf_parent_sum),
        "budget": encode_number(diag.budget),
    }
    if args.output:
        save_tree(tree, args.output)
        report["sections"]["tree_file"] = args.output
    else:
        report["sections"]["tree"] = tree_to_dict(tree)
    print(dump_report(report))
    return 0


def _gen(args) -> int:
    if args.kind == "counterexample":
        tree = gen_counterexample(args.r, args.k, args.n)
        f = tree_to_table(tree, Domain((args.r,) * args.n))
        if args.tree_out:
            save_tree(tree, args.tree_out)
    elif args.kind == "example1":
        f = gen_example1(args.r, args.n)
    else:
        f = random_function(n=args.n, arities=args.r, seed=args.seed, bias=args.bias)
    if args.output:
        save_function(f, args.output)
    else:
        import json

        print(json.dumps(function_to_dict(f)))
    return 0


def _junta(args) -> int:
    f = load_function(args.input)
    result = junta_distance(f, args.m)
    report = new_report("junta-distance", {"m": args.m}, input_digest(args.input))
    report["sections"]["junta"] = {
        "distance": encode_number(result.distance),
        "witness_set": sorted(i + 1 for i in result.witness_set),
    }
    if args.witness_out:
        save_function(result.witness, args.witness_out)
        report["sections"]["junta"]["witness_file"] = args.witness_out
    _emit(dump_report(report), args.output)
    return 0


def _discretize(args) -> int:
    f = load_function(args.input)
    h, rep = discretize(f, args.m, args.delta)
    inf_reps, dis_rep = check_certificates(f, h, args.delta)
    report = new_report("discretize", {"m": args.m, "delta": args.delta}, input_digest(args.input))
    report["sections"]["discretization"] = {
        "t": rep.t,
        "f_determined_fraction": encode_number(rep.f_determined_fraction),
        "a_determined_fractions": [encode_number(v) for v in rep.a_determined_fractions],
        "disagreement": encode_number(rep.disagreement),
        "influence_pairs": [
            {"coarse": encode_number(a), "bound": encode_number(b)} for a, b in rep.influence_pairs
        ],
        "certificates": [_inequality_dict(r) for r in inf_reps] + [_inequality_dict(dis_rep)],
    }
    if args.output:
        save_function(h, args.output)
        report["sections"]["coarse_file"] = args.output
    print(dump_report(report))
    return 0


def _subcube(args) -> int:
    f = load_function(args.input)
    trace = greedy_subcube(f, B=args.B, epsilon=args.epsilon)
    report = new_report("subcube", {"B": args.B, "epsilon": args.epsilon}, input_digest(args.input))
    report["sections"]["greedy"] = {
        "steps": [
            {
                "coordinate": s.coordinate + 1,
                "variational_at_selection": encode_number(s.variational_at_selection),
                "expectation_before": encode_number(s.expectation_before),
                "expectation_after": encode_number(s.expectation_after),
            }
            for s in trace.steps
        ],
        "fixed": sorted(i + 1 for i in trace.fixed),
        "final_expectation": encode_number(trace.final_expectation),
        "reason": trace.reason,
    }
    _emit(dump_report(report), args.output)
    return 0


def _probe(args) -> int:
    f = load_function(args.input)
    report = new_report(f"probe {args.kind}", {"B": getattr(args, "B", None)}, input_digest(args.input))
    if args.kind == "bourgain":
        value = bourgain_probe(f, args.B)
        J, assignment, dev = restriction_search(f, args.B)
        threshold = 3.0 ** (-500.0 * args.B * args.B)
        report["sections"]["bourgain"] = {
            "probe": encode_number(value),
            "search_set": sorted(j + 1 for j in J),
            "search_assignment": {str(j + 1): a for j, a in assignment.items()},
            "search_deviation": encode_number(dev),
            "informational_threshold": threshold,
        }
    else:
        report["sections"]["kkl"] = {"empirical_constant": kkl_constant_probe(f)}
    _emit(dump_report(report), args.output)
    return 0


def _verify(args) -> int:
    results = [run_check(args.check)] if args.check else run_all()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({res.seconds:.2f}s): {res.detail}")
        if not res.passed:
            failed += 1
    total = sum(r.seconds for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed in {total:.1f}s")
    return 2 if failed else 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="influence-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="influences, decomposition norms, inequality suite")
    p.add_argument("input")
    p.add_argument("--constant", type=float, default=10.0)
    p.add_argument("--log-base", type=float, default=2.0)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_analyze)

    p = sub.add_parser("build-tree", help="greedy decision-tree approximation")
    p.add_argument("input")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--tau", type=float, default=1e-3)
    p.add_argument("--depth-cap", type=int, default=12)
    p.add_argument("--stop-fraction", type=float, default=None)
    p.add_argument("-o", "--output", help="tree file destination")
    p.set_defaults(fn=_build_tree)

    p = sub.add_parser("gen", help="generate a function file")
    p.add_argument("kind", choices=["counterexample", "example1", "random"])
    p.add_argument("--r", type=int, default=2, help="arity per coordinate")
    p.add_argument("--k", type=int, default=1, help="tree depth (counterexample)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bias", type=float, default=0.5)
    p.add_argument("--tree-out", help="also save the counterexample tree")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_gen)

    p = sub.add_parser("junta-distance", help="exact distance to the nearest m-junta")
    p.add_argument("input")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--witness-out")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_junta)

    p = sub.add_parser("discretize", help="cell coarsening with certificates")
    p.add_argument("input")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("-o", "--output", help="coarse function destination")
    p.set_defaults(fn=_discretize)

    p = sub.add_parser("subcube", help="greedy top-restriction trace")
    p.add_argument("input")
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_subcube)

    p = sub.add_parser("probe", help="report-only probes")
    p.add_argument("kind", choices=["bourgain", "kkl"])
    p.add_argument("input")
    p.add_argument("--B", type=float, default=0.1)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_probe)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--check", choices=[name for name, _ in CHECKS])
    p.set_defaults(fn=_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InfluenceLabError as exc:
        print(f"influence-lab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"influence-lab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
