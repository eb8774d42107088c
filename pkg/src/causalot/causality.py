"""Causality checks for plans and maps.

A plan between discrete measures is causal when, for every target atom a
and every source atom t above it, the conditional probability of landing
at or below a is the same for all source atoms from t upward.  The checks
here enumerate those constraints, measure the worst deviation, and
classify deterministic maps into the two shapes a causal map can have.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .measures import DiscreteMeasure
from .plans import TransportPlan, evaluate_cost

DEFAULT_PLAN_TOL = 1e-9


@dataclass(frozen=True)
class ConstraintGroup:
    """Rows whose conditional CDF at one target atom must agree.

    ``anchor`` is the first source index strictly above the target atom
    ``target_index``; ``members`` are all indices from the anchor up.
    """

    target_index: int
    anchor: int
    members: np.ndarray


def causality_constraint_groups(source_support, target_support) -> list[ConstraintGroup]:
    """One group per target atom with at least two source atoms strictly above it."""
    xs = np.asarray(source_support, dtype=float)
    ys = np.asarray(target_support, dtype=float)
    anchors = np.searchsorted(xs, ys, side="right")
    groups = []
    for j, a in enumerate(anchors):
        if xs.size - a >= 2:
            groups.append(ConstraintGroup(target_index=j, anchor=int(a),
                                          members=np.arange(a, xs.size)))
    return groups


@dataclass(frozen=True)
class CausalityViolation:
    target_index: int
    row: int
    deviation: float


@dataclass
class CausalityReport:
    causal: bool
    max_deviation: float
    tolerance: float
    violations: list[CausalityViolation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "causal": self.causal,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "violations": [
                {"j": v.target_index, "k": v.row, "dev": v.deviation}
                for v in self.violations
            ],
        }


def check_plan_causal(plan: TransportPlan, tol: float = DEFAULT_PLAN_TOL) -> CausalityReport:
    """Largest disagreement of conditional CDFs against each group's anchor row."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    cdf = plan.conditional_cdf_matrix()
    groups = causality_constraint_groups(plan.source.support, plan.target.support)
    if not groups:
        return CausalityReport(causal=True, max_deviation=0.0, tolerance=tol)
    # Suffix extrema over rows give each group's worst member in one sweep.
    suffix_max = np.maximum.accumulate(cdf[::-1], axis=0)[::-1]
    suffix_min = np.minimum.accumulate(cdf[::-1], axis=0)[::-1]
    max_dev = 0.0
    offenders = []
    for g in groups:
        a, j = g.anchor, g.target_index
        dev = max(suffix_max[a, j] - cdf[a, j], cdf[a, j] - suffix_min[a, j])
        if dev > max_dev:
            max_dev = dev
        if dev > tol:
            offenders.append(g)
    violations = []
    for g in offenders:
        a, j = g.anchor, g.target_index
        devs = np.abs(cdf[a:, j] - cdf[a, j])
        for k in np.flatnonzero(devs > tol):
            violations.append(CausalityViolation(target_index=j, row=int(a + k),
                                                 deviation=float(devs[k])))
    return CausalityReport(causal=bool(max_dev <= tol), max_deviation=float(max_dev),
                           tolerance=tol, violations=violations)


@dataclass
class MapCausalityReport:
    causal: bool
    branch: str | None
    t0: float | None
    offending_mass: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "causal": self.causal,
            "branch": self.branch,
            "t0": self.t0,
            "offending_mass": self.offending_mass,
            "tolerance": self.tolerance,
        }


def check_map_causal(measure: DiscreteMeasure, values,
                     tol: float = 0.0) -> MapCausalityReport:
    """Classify a map as above-diagonal, truncated at a common late value, or neither.

    The first branch accepts maps with T(x) >= x up to mass ``tol``.  The
    second looks for a cut t0 such that T(x) >= x below t0 and T(x) = t0
    above, scanning candidate values from the largest atom downward.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (measure.n,):
        raise ValueError("need one map value per atom")
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    xs = measure.support
    ws = measure.weights
    below_mass = float(ws[values < xs].sum())
    if below_mass <= tol:
        return MapCausalityReport(causal=True, branch="above-diagonal", t0=None,
                                  offending_mass=below_mass, tolerance=tol)
    best_mass = np.inf
    best_t0 = None
    seen = set()
    for i in range(measure.n - 1, -1, -1):
        c = float(values[i])
        if c in seen:
            continue
        seen.add(c)
        early = (xs <= c) & (values < xs)
        late = (xs > c) & (values != c)
        offending = float(ws[early].sum() + ws[late].sum())
        if offending <= tol:
            return MapCausalityReport(causal=True, branch="truncated", t0=c,
                                      offending_mass=offending, tolerance=tol)
        if offending < best_mass:
            best_mass = offending
            best_t0 = c
    return MapCausalityReport(causal=False, branch=None, t0=best_t0,
                              offending_mass=float(min(below_mass, best_mass)),
                              tolerance=tol)


@dataclass
class MonotonicityWitness:
    pairs: list[tuple[int, int]]
    permutation: tuple[int, ...]
    improvement: float


@dataclass
class MonotonicityReport:
    ok: bool
    worst_violation: float
    subsets_checked: int
    witness: MonotonicityWitness | None = None


def check_cyclical_monotonicity(plan: TransportPlan, costfn, max_subset: int = 3,
                                mass_tol: float = 0.0,
                                slack: float = 1e-9) -> MonotonicityReport:
    """Search support-pair subsets below a common threshold for cheaper reshuffles.

    Only subsets whose source points all sit strictly below every target
    point are eligible.  A permutation of the targets that undercuts the
    identity assignment by more than ``slack`` is a violation.
    """
    if not 2 <= max_subset <= 5:
        raise ValueError("max_subset must lie in [2, 5]")
    pairs = np.argwhere(plan.mass > mass_tol)
    if pairs.size == 0:
        return MonotonicityReport(ok=True, worst_violation=0.0, subsets_checked=0)
    px = plan.source.support[pairs[:, 0]]
    py = plan.target.support[pairs[:, 1]]
    order = np.lexsort((py, px))
    pairs, px, py = pairs[order], px[order], py[order]
    cost = evaluate_cost(costfn, plan.source.support, plan.target.support)

    worst = 0.0
    witness = None
    checked = 0
    chosen: list[int] = []

    def own_cost(idx: int) -> float:
        return cost[pairs[idx, 0], pairs[idx, 1]]

    def explore(start: int, min_y: float):
        nonlocal worst, witness, checked
        for idx in range(start, px.size):
            x = px[idx]
            if x >= min_y:
                break  # later pairs only have larger x
            if x >= py[idx]:
                continue
            chosen.append(idx)
            if len(chosen) >= 2:
                checked += 1
                identity = sum(own_cost(t) for t in chosen)
                rows = pairs[chosen, 0]
                cols = pairs[chosen, 1]
                sub = cost[np.ix_(rows, cols)]
                for perm in itertools.permutations(range(len(chosen))):
                    gain = identity - sum(sub[t, perm[t]] for t in range(len(chosen)))
                    if gain > worst:
                        worst = gain
                        witness = MonotonicityWitness(
                            pairs=[(int(pairs[t, 0]), int(pairs[t, 1])) for t in chosen],
                            permutation=perm, improvement=float(gain))
            if len(chosen) < max_subset:
                explore(idx + 1, min(min_y, py[idx]))
            chosen.pop()

    explore(0, np.inf)
    ok = bool(worst <= slack)
    return MonotonicityReport(ok=ok, worst_violation=float(worst),
                              subsets_checked=checked,
                              witness=witness if not ok else None)
