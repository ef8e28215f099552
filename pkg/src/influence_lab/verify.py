"""Desk-scale verification suite.

Each check reproduces one acceptance claim exactly (counts and rationals, no
sampling) or sweeps a seeded corpus. The CLI `verify` subcommand and the
acceptance tests share this registry, so there is a single source of
pass/fail truth. Checks return (passed, detail).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import Domain, TabulatedFunction, expectation, tree_to_table, variance
from .corpus import (
    dictator,
    majority3,
    random_increasing_function,
    random_tree,
    random_weights,
    threshold_line,
)
from .discretize import check_certificates, discretize
from .extremal import gen_counterexample, gen_example1, junta_distance
from .fourier import efron_stein
from .inequalities import (
    check_analog,
    check_bonami_beckner,
    check_tree_influence,
    check_variance_bound,
)
from .influence import total_influence, total_variational_influence, variational_influence
from .io import tree_to_dict
from .subcube import bourgain_probe, greedy_subcube, restriction_search
from .treebuilder import BuildParams, build_tree

RESIDUAL_TOL = 1e-10
SLACK_TOL = 1e-9

_SEED_TREES = 20_002
_SEED_BOOLEAN = 30_003
_SEED_DECOMP = 40_004
_SEED_CUBE = 60_006
_SEED_BUILDS = 70_007
_SEED_GRID = 80_008
_SEED_MONOTONE = 90_009
_SEED_PROBE = 100_010


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


# ---------------------------------------------------------------------------
# Seeded corpora (regenerated identically on every call)


def _boolean_instance(idx: int) -> TabulatedFunction:
    rng = np.random.default_rng([_SEED_BOOLEAN, idx])
    n = int(rng.integers(1, 5))
    arities = tuple(int(a) for a in rng.integers(2, 4, n))
    bias = float(rng.choice([0.25, 0.5, 0.75]))
    dom = Domain(arities)
    return TabulatedFunction(dom, (rng.random(dom.size) < bias).astype(np.float64))


def _boolean_corpus(count: int = 1000):
    return (_boolean_instance(i) for i in range(count))


def _tree_instance(idx: int):
    rng = np.random.default_rng([_SEED_TREES, idx])
    n = int(rng.integers(1, 9))
    arities = tuple(int(a) for a in rng.integers(2, 4, n))
    depth = int(rng.integers(1, 6))
    dom = Domain(arities)
    tree = random_tree(dom, depth, seed=[_SEED_TREES, idx, 1])
    return tree, dom


def _decomposition_instance(idx: int) -> TabulatedFunction:
    rng = np.random.default_rng([_SEED_DECOMP, idx])
    n = int(rng.integers(1, 5))
    arities = tuple(int(a) for a in rng.integers(2, 4, n))
    weights = random_weights(arities, seed=[_SEED_DECOMP, idx, 1]) if idx % 2 else None
    dom = Domain(arities, weights)
    return TabulatedFunction(dom, rng.uniform(-1.0, 1.0, dom.size))


def _cube_instance(idx: int) -> TabulatedFunction:
    rng = np.random.default_rng([_SEED_CUBE, idx])
    n = int(rng.integers(1, 9))
    dom = Domain((2,) * n)
    return TabulatedFunction(dom, rng.uniform(-1.0, 1.0, dom.size))


def _grid_instance(idx: int) -> TabulatedFunction:
    """Cell-aligned fine tables: t=1 tables are arbitrary, t=3 tables are
    lifts of random coarse tables, so the certificate hypotheses hold."""
    rng = np.random.default_rng([_SEED_GRID, idx])
    n = int(rng.integers(1, 4))
    if idx % 2 == 0:
        dom = Domain((3,) * n)
        return TabulatedFunction(dom, (rng.random(dom.size) < 0.5).astype(np.float64))
    coarse = (rng.random(3**n) < 0.5).astype(np.float64)
    fine = Domain((9,) * n)
    cell = np.zeros(fine.size, dtype=np.int64)
    stride = 3**n
    for i in range(n):
        stride //= 3
        cell += (fine.digits(i) // 3) * stride
    return TabulatedFunction(fine, coarse[cell])


def _monotone_instance(idx: int) -> TabulatedFunction:
    rng = np.random.default_rng([_SEED_MONOTONE, idx])
    n = int(rng.integers(1, 5))
    arities = tuple(int(a) for a in rng.integers(2, 4, n))
    density = float(rng.uniform(0.05, 0.5))
    return random_increasing_function(arities, seed=[_SEED_MONOTONE, idx, 1], density=density)


# ---------------------------------------------------------------------------
# Criteria


def _check_counterexample() -> tuple[bool, str]:
    start = time.perf_counter()
    tree = gen_counterexample(4, 2, 5)
    f = tree_to_table(tree, Domain((4,) * 5))
    total = total_influence(f)
    result = junta_distance(f, 2)
    elapsed = time.perf_counter() - start
    ok = total <= 2 and result.distance >= Fraction(1, 4) and elapsed < 10.0
    return ok, (
        f"I_f={total} (<=2), junta distance m=2: {result.distance} (>=1/4), "
        f"witness={sorted(i + 1 for i in result.witness_set)}, {elapsed:.2f}s"
    )


def _check_tree_influence_corpus() -> tuple[bool, str]:
    violations = 0
    for idx in range(1000):
        tree, dom = _tree_instance(idx)
        report = check_tree_influence(tree, dom)
        if report.slack < 0:  # exact: Fraction vs int
            violations += 1
    return violations == 0, f"1000 random labeled trees, {violations} violations of I <= depth"


def _check_analog_corpus() -> tuple[bool, str]:
    violations = 0
    for f in _boolean_corpus(1000):
        for rep in check_analog(f):
            if rep.slack < 0:  # exact rational comparison
                violations += 1
    return violations == 0, f"1000 random Boolean tables, {violations} violations of 4*var <= dig"


def _spread_along(arr: np.ndarray, axis: int) -> float:
    return float(np.max(arr, axis=axis).max() - np.min(arr, axis=axis).min()) if arr.size else 0.0


def _check_decomposition_suite() -> tuple[bool, str]:
    worst = 0.0
    for idx in range(200):
        f = _decomposition_instance(idx)
        dec = efron_stein(f)
        dom = f.domain
        n = dom.n
        pw = dom.point_weights()
        shape = dom.arities

        worst = max(worst, float(np.abs(dec.reconstruction() - f.values).max()))
        for S, comp in dec.components.items():
            arr = comp.values.reshape(shape)
            for i in range(n):
                mono = np.moveaxis(arr, i, -1)
                if i not in S:
                    # (ii): constant along every coordinate outside S
                    worst = max(worst, float(np.abs(mono - mono[..., :1]).max()))
                else:
                    # (iii): zero partial integral along every coordinate in S
                    w = dom.weight_vector(i)
                    worst = max(worst, float(np.abs(mono @ w).max()) if mono.size else 0.0)
        subsets = list(dec.components)
        for S in subsets:
            for T in subsets:
                extra = T - S
                if not extra:
                    continue
                prod = dec.components[S].values.reshape(shape) * dec.components[T].values.reshape(shape)
                for i in extra:
                    # (iv): zero partial integral of F_S * F_T along i in T \ S
                    w = dom.weight_vector(i)
                    worst = max(worst, float(np.abs(np.moveaxis(prod, i, -1) @ w).max()))
        norm_f = float(np.dot(pw, f.values * f.values))
        worst = max(worst, abs(norm_f - dec.norm_total()))
        worst = max(worst, abs(float(variance(f)) - dec.variance_from_norms()))
        for i in range(n):
            worst = max(
                worst,
                abs(float(variational_influence(f, i)) - dec.coordinate_norm_sum(i)),
            )
    return worst <= RESIDUAL_TOL, f"200 decompositions, worst residual {worst:.3e} (tol 1e-10)"


def _check_variance_bound_corpus() -> tuple[bool, str]:
    violations = 0
    degenerate = 0
    for f in _boolean_corpus(1000):
        rep = check_variance_bound(f, constant=10.0, log_base=2.0)
        degenerate += rep.parameters["degenerate_terms"]
        if not rep.holds:
            violations += 1
    return (
        violations == 0,
        f"1000 random Boolean tables, {violations} violations; {degenerate} degenerate I=1 terms",
    )


def _check_bonami_beckner_corpus() -> tuple[bool, str]:
    worst = float("inf")
    violations = 0
    for idx in range(500):
        f = _cube_instance(idx)
        for p in (4.0, 1.5):
            rep = check_bonami_beckner(f, p)
            worst = min(worst, float(rep.slack))
            if not rep.holds:
                violations += 1
    return violations == 0, f"500 tables x p in (4, 3/2), min slack {worst:.3e}, {violations} violations"


def _check_tree_builder() -> tuple[bool, str]:
    notes = []

    ce_tree = gen_counterexample(4, 2, 5)
    f4 = tree_to_table(ce_tree, Domain((4,) * 5))
    tree, diag = build_tree(f4, BuildParams(epsilon=0.25, tau=0.01, depth_cap=8))
    total4 = total_influence(f4)
    ok = (
        diag.achieved_error <= Fraction(1, 4)
        and diag.depth <= 8
        and diag.node_accounting_sum <= total4
        and diag.leaf_parent_sum <= total4
        and diag.achieved_error <= diag.error_bound + SLACK_TOL
    )
    notes.append(f"counterexample build: error={diag.achieved_error}, depth={diag.depth}")

    for n in (1, 2, 3):
        f = dictator(n)
        t, d = build_tree(f, BuildParams(epsilon=0.2))
        ok = ok and d.depth == 1 and d.achieved_error == 0
    notes.append("dictators: depth 1, error 0")

    worst_acc = Fraction(0)
    for idx in range(50):
        rng = np.random.default_rng([_SEED_BUILDS, idx])
        n = int(rng.integers(1, 5))
        arities = tuple(int(a) for a in rng.integers(2, 4, n))
        dom = Domain(arities)
        f = TabulatedFunction(dom, (rng.random(dom.size) < 0.5).astype(np.float64))
        t, d = build_tree(f, BuildParams(epsilon=0.3))
        total = total_influence(f)
        if d.node_accounting_sum > total or d.leaf_parent_sum > total:
            ok = False
        if d.achieved_error > d.error_bound + SLACK_TOL:
            ok = False
        if total > 0:
            worst_acc = max(worst_acc, d.node_accounting_sum / total)
    notes.append(f"50 random builds: accounting <= I_f (max ratio {float(worst_acc):.3f})")
    return ok, "; ".join(notes)


def _check_discretization() -> tuple[bool, str]:
    delta = Fraction(9, 100)
    failures = 0
    for idx in range(100):
        f = _grid_instance(idx)
        h, _ = discretize(f, 3, delta)
        inf_reps, dis_rep = check_certificates(f, h, delta)
        if any(rep.slack < 0 for rep in inf_reps) or dis_rep.slack < 0:
            failures += 1

    # threshold fixtures at their own scales
    fixtures = []
    line = threshold_line(4, 2)
    h, rep = discretize(line, 2, Fraction(5, 100))
    inf_reps, dis_rep = check_certificates(line, h, Fraction(5, 100))
    fixtures.append(
        all(r.slack >= 0 for r in inf_reps) and dis_rep.slack >= 0 and rep.disagreement == 0
    )
    plane_dom = Domain((4, 4))
    plane = TabulatedFunction(plane_dom, (plane_dom.digits(0) >= 2).astype(np.float64))
    h2, rep2 = discretize(plane, 2, Fraction(5, 100))
    inf_reps2, dis_rep2 = check_certificates(plane, h2, Fraction(5, 100))
    fixtures.append(all(r.slack >= 0 for r in inf_reps2) and dis_rep2.slack >= 0)
    for cut in (0, 3, 6, 9):
        fline = threshold_line(9, cut)
        hh, _ = discretize(fline, 3, delta)
        reps, drep = check_certificates(fline, hh, delta)
        fixtures.append(all(r.slack >= 0 for r in reps) and drep.slack >= 0)

    ok = failures == 0 and all(fixtures)
    return ok, f"100 aligned random grids + {len(fixtures)} threshold fixtures, {failures} certificate failures"


def _check_greedy_subcube() -> tuple[bool, str]:
    bad_steps = 0
    for idx in range(200):
        f = _monotone_instance(idx)
        trace = greedy_subcube(f, B=0.02, epsilon=0.1)
        for step in trace.steps:
            if step.expectation_after - step.expectation_before < step.variational_at_selection:
                bad_steps += 1  # exact rational comparison

    trace = greedy_subcube(majority3(), B=0.1, epsilon=0.05)
    expectations = [trace.steps[0].expectation_before] + [s.expectation_after for s in trace.steps]
    maj_ok = (
        expectations == [Fraction(1, 2), Fraction(3, 4), Fraction(1, 1)]
        and trace.fixed == frozenset({0, 1})
    )

    ex1 = gen_example1(10, 2)
    ti = total_variational_influence(ex1)
    ex1_ok = ti == Fraction(1, 4) and ti <= 2 and expectation(ex1) == Fraction(3, 4)
    ok = bad_steps == 0 and maj_ok and ex1_ok
    return ok, (
        f"200 increasing tables, {bad_steps} bad increments; majority trace "
        f"{[str(e) for e in expectations]}; corner example var-influence {ti}, E={expectation(ex1)}"
    )


def _check_bourgain_probe() -> tuple[bool, str]:
    p_dict = bourgain_probe(dictator(3), 0.1)
    p_maj = bourgain_probe(majority3(), 0.1)
    exact_ok = p_dict == Fraction(1, 2) and p_maj == Fraction(1, 4)

    recorded = []
    failures = 0
    for idx in range(50):
        rng = np.random.default_rng([_SEED_PROBE, idx])
        n = int(rng.integers(1, 5))
        arities = tuple(int(a) for a in rng.integers(2, 4, n))
        dom = Domain(arities)
        f = TabulatedFunction(dom, (rng.random(dom.size) < 0.5).astype(np.float64))
        if f.is_constant:
            continue
        b = max(0.1, float(total_variational_influence(f)))
        _, _, dev = restriction_search(f, b)
        threshold = 3.0 ** (-500.0 * b * b)
        recorded.append(float(dev) / threshold)
        if float(dev) < threshold:
            failures += 1
    ok = exact_ok and failures == 0
    return ok, (
        f"probe(dictator)={p_dict}, probe(majority-3)={p_maj}; "
        f"{len(recorded)} searches vs 3^(-500 B^2): min ratio {min(recorded):.3e}, {failures} below"
    )


def _check_determinism() -> tuple[bool, str]:
    def corpus_digest() -> str:
        import hashlib

        blob = hashlib.sha256()
        for idx in range(1000):
            blob.update(_boolean_instance(idx).values.tobytes())
            tree, _ = _tree_instance(idx)
            blob.update(json.dumps(tree_to_dict(tree)).encode())
        for idx in range(500):
            blob.update(_cube_instance(idx).values.tobytes())
        for idx in range(200):
            blob.update(_decomposition_instance(idx).values.tobytes())
            blob.update(_monotone_instance(idx).values.tobytes())
        for idx in range(100):
            blob.update(_grid_instance(idx).values.tobytes())
        return blob.hexdigest()

    d1, d2 = corpus_digest(), corpus_digest()

    ce_tree = gen_counterexample(4, 2, 5)
    f4 = tree_to_table(ce_tree, Domain((4,) * 5))
    t1, g1 = build_tree(f4, BuildParams(epsilon=0.25, tau=0.01, depth_cap=8))
    t2, g2 = build_tree(f4, BuildParams(epsilon=0.25, tau=0.01, depth_cap=8))
    trees_equal = tree_to_dict(t1) == tree_to_dict(t2) and g1 == g2
    ok = d1 == d2 and trees_equal
    return ok, f"corpus digest stable ({d1[:12]}...), repeated builds identical: {trees_equal}"


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("01-counterexample-reproduction", _check_counterexample),
    ("02-tree-influence-bound", _check_tree_influence_corpus),
    ("03-influence-inequality", _check_analog_corpus),
    ("04-decomposition-suite", _check_decomposition_suite),
    ("05-variance-bound", _check_variance_bound_corpus),
    ("06-bonami-beckner", _check_bonami_beckner_corpus),
    ("07-tree-builder", _check_tree_builder),
    ("08-discretization-certificates", _check_discretization),
    ("09-greedy-subcube", _check_greedy_subcube),
    ("10-bourgain-probe", _check_bourgain_probe),
    ("11-determinism", _check_determinism),
]


def run_check(name: str) -> CheckResult:
    fn = dict(CHECKS)[name]
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, not an abort
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(name, passed, detail, time.perf_counter() - start)


def run_all() -> list[CheckResult]:
    return [run_check(name) for name, _ in CHECKS]
