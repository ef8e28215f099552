"""Numerical checkers for the constant-explicit inequalities, plus probes.

Each check produces an InequalityReport oriented so that the inequality holds
iff slack >= -1e-9. Probes for statements whose universal constants are
unknown only report empirical values and never fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .core import DecisionTree, Domain, Scalar, TabulatedFunction, tree_to_table
from .errors import DomainError
from .fourier import noise_operator, p_norm, walsh_spectrum
from .influence import influence, total_influence, variational_influence

HOLDS_TOL = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    """One checked inequality: left <= right with slack = right - left."""

    name: str
    left: Scalar
    right: Scalar
    slack: Scalar
    holds: bool
    parameters: dict[str, Any] = field(default_factory=dict)


def _report(name: str, left: Scalar, right: Scalar, **params: Any) -> InequalityReport:
    slack = right - left
    return InequalityReport(name, left, right, slack, slack >= -HOLDS_TOL, params)


def check_analog(f: TabulatedFunction) -> list[InequalityReport]:
    """4 * variational <= digital, per coordinate (Boolean tables only)."""
    if not f.is_boolean:
        raise DomainError("the 4x influence comparison applies to Boolean tables")
    out = []
    for i in range(f.domain.n):
        out.append(
            _report(
                f"influence-analog[{i + 1}]",
                4 * variational_influence(f, i),
                influence(f, i),
                coordinate=i + 1,
            )
        )
    return out


def check_variance_bound(
    f: TabulatedFunction, constant: float = 10.0, log_base: float = 2.0
) -> InequalityReport:
    """Var[f] <= constant * sum_i variational(i) / log_base(1 / digital(i)).

    A coordinate with zero variational influence contributes nothing; a
    coordinate with digital influence exactly 1 makes its term +inf and the
    bound vacuous (recorded in the parameters).
    """
    from .core import variance

    n = f.domain.n
    rhs = 0.0
    degenerate = 0
    for i in range(n):
        vi = variational_influence(f, i)
        if vi == 0:
            continue
        di = influence(f, i)
        if di >= 1:
            degenerate += 1
            rhs = math.inf
            break
        rhs += constant * float(vi) / (math.log(1.0 / float(di)) / math.log(log_base))
    return _report(
        "variance-bound",
        variance(f),
        rhs,
        constant=constant,
        log_base=log_base,
        degenerate_terms=degenerate,
    )


def check_bonami_beckner(f: TabulatedFunction, p: float) -> InequalityReport:
    """Hypercontractive comparison of ||f||_p with ||T_delta f||_2, delta = sqrt(p-1).

    For p >= 2 the p-norm is the smaller side; for 1 <= p <= 2 the larger.
    """
    if p < 1:
        raise DomainError(f"hypercontractivity check needs p >= 1, got {p}")
    spectrum = walsh_spectrum(f)  # raises DomainError off the uniform binary cube
    delta = math.sqrt(p - 1.0)
    noisy_two_norm = math.sqrt(noise_operator(spectrum, delta).two_norm_squared())
    fp = p_norm(f, p)
    if p >= 2:
        return _report(
            "bonami-beckner[p>=2]", fp, noisy_two_norm, p=p, delta=delta, direction="p-norm <= noisy 2-norm"
        )
    return _report(
        "bonami-beckner[p<=2]", noisy_two_norm, fp, p=p, delta=delta, direction="noisy 2-norm <= p-norm"
    )


def check_tree_influence(tree: DecisionTree, domain: Domain) -> InequalityReport:
    """Total influence of the tree's function is at most the tree depth."""
    table = tree_to_table(tree, domain)
    return _report(
        "tree-influence",
        total_influence(table),
        tree.depth,
        depth=tree.depth,
        n=domain.n,
    )


def kkl_constant_probe(f: TabulatedFunction) -> float:
    """Smallest C with exp(-C * I_f / (rho (1-rho))) <= max_i I_f(i) for this f.

    Report-only: the universal constant in the max-influence lower bound is
    unknown, so this never passes or fails anything.
    """
    from .core import expectation

    if not f.is_boolean:
        raise DomainError("the max-influence probe applies to Boolean tables")
    if f.is_constant:
        raise DomainError("the max-influence probe needs a non-constant table")
    rho = float(expectation(f))
    total = float(total_influence(f))
    max_inf = max(float(influence(f, i)) for i in range(f.domain.n))
    return -math.log(max_inf) * rho * (1.0 - rho) / total
