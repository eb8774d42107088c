"""Linear programming for causal transport between discrete measures.

The causal polytope is the usual transportation polytope cut by equality
rows that force conditional CDFs to agree above each target atom.  The
LP is solved by the dense two-phase simplex in :mod:`causalot.simplex`;
optimality is certified separately from the reported duals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .causality import (causality_constraint_groups, check_cyclical_monotonicity,
                        check_plan_causal)
from .measures import DiscreteMeasure
from .plans import COST_FUNCTIONS, TransportPlan, evaluate_cost
from .simplex import SimplexSettings, solve_standard_form


@dataclass
class LpProblem:
    """Equality-form LP data for one causal transport instance.

    Variables are the plan entries flattened row-major.  ``row_kinds``
    tags each constraint row: ("source", i), ("target", j), or
    ("causal", target_index, row, anchor).  The target-marginal row for
    the last atom is dropped as redundant.
    """

    source: DiscreteMeasure
    target: DiscreteMeasure
    cost_matrix: np.ndarray
    matrix: np.ndarray
    rhs: np.ndarray
    objective: np.ndarray
    row_kinds: list[tuple]

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_vars(self) -> int:
        return self.matrix.shape[1]


def build_causal_lp(source: DiscreteMeasure, target: DiscreteMeasure, costfn) -> LpProblem:
    n, m = source.n, target.n
    cost = evaluate_cost(costfn, source.support, target.support)
    groups = causality_constraint_groups(source.support, target.support)
    n_causal = sum(g.members.size - 1 for g in groups)
    rows = n + (m - 1) + n_causal
    A = np.zeros((rows, n * m))
    rhs = np.zeros(rows)
    kinds: list[tuple] = []
    r = 0
    for i in range(n):
        A[r, i * m:(i + 1) * m] = 1.0
        rhs[r] = source.weights[i]
        kinds.append(("source", i))
        r += 1
    for j in range(m - 1):
        A[r, j::m] = 1.0
        rhs[r] = target.weights[j]
        kinds.append(("target", j))
        r += 1
    # Equal conditional CDFs, cleared of denominators:
    # w_anchor * sum_{l<=j} g[k, l] - w_k * sum_{l<=j} g[anchor, l] = 0.
    for g in groups:
        j = g.target_index
        a = g.anchor
        w_a = source.weights[a]
        for k in g.members[1:]:
            A[r, k * m:k * m + j + 1] = w_a
            A[r, a * m:a * m + j + 1] = -source.weights[k]
            kinds.append(("causal", j, int(k), a))
            r += 1
    return LpProblem(source=source, target=target, cost_matrix=cost, matrix=A,
                     rhs=rhs, objective=cost.ravel(), row_kinds=kinds)


@dataclass
class SolveResult:
    status: str  # "optimal" | "infeasible" | "iteration-limit"
    plan: TransportPlan | None
    value: float | None
    duals: np.ndarray | None
    reduced_costs: np.ndarray | None
    iterations: int
    primal_residual: float | None
    dual_gap: float | None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "iterations": self.iterations,
            "primal_residual": self.primal_residual,
            "dual_gap": self.dual_gap,
            "plan": self.plan.to_dict() if self.plan is not None else None,
            "duals": self.duals.tolist() if self.duals is not None else None,
        }


def solve(problem: LpProblem, settings: SimplexSettings | None = None) -> SolveResult:
    """Run the two-phase simplex on a built instance."""
    sol = solve_standard_form(problem.matrix, problem.rhs, problem.objective, settings)
    if sol.status != "optimal":
        return SolveResult(status=sol.status, plan=None, value=None, duals=None,
                           reduced_costs=None, iterations=sol.iterations,
                           primal_residual=None, dual_gap=None)
    mass = sol.x.reshape(problem.source.n, problem.target.n)
    plan = TransportPlan(problem.source, problem.target, mass)
    return SolveResult(status="optimal", plan=plan, value=sol.objective,
                       duals=sol.duals, reduced_costs=sol.reduced_costs,
                       iterations=sol.iterations,
                       primal_residual=sol.primal_residual, dual_gap=sol.dual_gap)


@dataclass
class CertificateReport:
    ok: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.ok


def certify(problem: LpProblem, x, duals, *, residual_tol: float = 1e-9,
            reduced_cost_tol: float = 1e-8) -> CertificateReport:
    """Duality certificate for raw primal/dual vectors of a built instance."""
    x = np.asarray(x, dtype=float).ravel()
    failures = []
    if x.size != problem.n_vars:
        return CertificateReport(False, ["primal vector has the wrong length"])
    if x.min() < -residual_tol:
        failures.append(f"negative mass {x.min():g}")
    residual = float(np.abs(problem.matrix @ x - problem.rhs).max())
    if residual > residual_tol:
        failures.append(f"primal residual {residual:g}")
    value = float(problem.objective @ x)
    if duals is None:
        failures.append("no dual vector")
    else:
        duals = np.asarray(duals, dtype=float)
        reduced = problem.objective - problem.matrix.T @ duals
        if reduced.min() < -reduced_cost_tol:
            failures.append(f"reduced cost {reduced.min():g}")
        slackness = float(np.abs(x * reduced).max())
        if slackness > 1e-7 * max(1.0, abs(value)):
            failures.append(f"complementary slackness {slackness:g}")
        gap = abs(value - float(problem.rhs @ duals))
        if gap > 1e-8 * max(1.0, abs(value)):
            failures.append(f"dual gap {gap:g}")
    return CertificateReport(not failures, failures)


def verify_optimality(problem: LpProblem, result: SolveResult) -> CertificateReport:
    """Check a solve result against its own instance; true only for certified optima."""
    if result.status != "optimal" or result.plan is None:
        return CertificateReport(False, [f"status is {result.status!r}"])
    return certify(problem, result.plan.mass.ravel(), result.duals)


def classic_ot_1d(source: DiscreteMeasure, target: DiscreteMeasure):
    """Unconstrained 1-d transport under |x - y|: comonotone plan, exact value.

    Merges the two cumulative weight sequences with two pointers, which is
    the quantile coupling; the value is the finite sum it induces.
    """
    xs, ws = source.support, source.weights
    ys, vs = target.support, target.weights
    mass = np.zeros((xs.size, ys.size))
    value = 0.0
    i = j = 0
    row_left = ws[0]
    col_left = vs[0]
    while True:
        step = min(row_left, col_left)
        mass[i, j] += step
        value += step * abs(xs[i] - ys[j])
        row_left -= step
        col_left -= step
        if row_left <= 1e-15:
            i += 1
            if i == xs.size:
                break
            row_left = ws[i]
        if col_left <= 1e-15:
            j += 1
            if j == ys.size:
                break
            col_left = vs[j]
    plan = TransportPlan(source, target, mass)
    return value, plan


def solve_causal_transport(source: DiscreteMeasure, target: DiscreteMeasure, costfn,
                           settings: SimplexSettings | None = None) -> SolveResult:
    """Build and solve one instance, then re-verify causality of the output.

    An optimal plan that fails the causality re-check or admits a cheaper
    local reshuffle indicates a numerical failure and raises rather than
    being reported as optimal.
    """
    problem = build_causal_lp(source, target, costfn)
    result = solve(problem, settings)
    if result.status != "optimal":
        return result
    report = check_plan_causal(result.plan, tol=1e-8)
    if not report.causal:
        raise RuntimeError(
            f"solver output violates causality by {report.max_deviation:g}")
    mono = check_cyclical_monotonicity(result.plan, problem.cost_matrix,
                                       max_subset=3, mass_tol=1e-9)
    if not mono.ok:
        raise RuntimeError(
            f"solver output admits a cheaper reshuffle ({mono.worst_violation:g})")
    return result


def instance_from_dict(data: dict):
    """Parse {"eta": measure, "nu": measure, "cost": name-or-table}."""
    try:
        eta = DiscreteMeasure.from_dict(data["eta"])
        nu = DiscreteMeasure.from_dict(data["nu"])
        cost = data["cost"]
    except KeyError as exc:
        raise ValueError(f"instance data is missing field {exc}") from exc
    if isinstance(cost, dict):
        try:
            cost = np.asarray(cost["table"], dtype=float)
        except KeyError:
            raise ValueError("a cost object must carry a 'table'") from None
    elif not isinstance(cost, str):
        raise ValueError("cost must be a name or a {'table': ...} object")
    return eta, nu, cost
