"""Transport plans between discrete measures on the real line.

A plan is an n-by-m nonnegative matrix whose row sums are the source
weights and whose column sums are the target weights.  Disintegrating the
rows gives a Markov kernel; the conditional CDFs of that kernel are what
the causality checks look at.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .measures import (SUPPORT_DECIMALS, DiscreteMeasure, Family, discretize,
                       merge_atoms)

_MARGINAL_TOL = 1e-9
_MASS_FLOOR = -1e-12


def _round_support(values) -> np.ndarray:
    return np.round(np.asarray(values, dtype=float), SUPPORT_DECIMALS)


class TransportPlan:
    """Coupling of two discrete measures, stored as a dense mass matrix."""

    def __init__(self, source: DiscreteMeasure, target: DiscreteMeasure, mass):
        mass = np.array(mass, dtype=float)
        if mass.shape != (source.n, target.n):
            raise ValueError(
                f"mass must have shape {(source.n, target.n)}, got {mass.shape}")
        if mass.min(initial=0.0) < _MASS_FLOOR:
            raise ValueError("mass entries must be nonnegative")
        mass[mass < 0.0] = 0.0
        row_err = np.abs(mass.sum(axis=1) - source.weights).max()
        col_err = np.abs(mass.sum(axis=0) - target.weights).max()
        if row_err > _MARGINAL_TOL:
            raise ValueError(f"row sums deviate from source weights by {row_err:g}")
        if col_err > _MARGINAL_TOL:
            raise ValueError(f"column sums deviate from target weights by {col_err:g}")
        mass.flags.writeable = False
        self.source = source
        self.target = target
        self.mass = mass
        self._cond_cdf = None

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def m(self) -> int:
        return self.target.n

    def kernel(self) -> "Kernel":
        rows = self.mass / self.source.weights[:, None]
        return Kernel(rows=rows, source=self.source, target=self.target)

    def conditional_cdf_matrix(self) -> np.ndarray:
        """Matrix F with F[i, j] = P(Y <= y_j | X = x_i)."""
        if self._cond_cdf is None:
            cum = np.cumsum(self.mass, axis=1)
            self._cond_cdf = cum / self.source.weights[:, None]
        return self._cond_cdf

    def conditional_cdf(self, i: int, a: float) -> float:
        """P(Y <= a | X = x_i)."""
        if not 0 <= i < self.n:
            raise ValueError(f"row index {i} out of range")
        j = int(np.searchsorted(self.target.support, a, side="right"))
        if j == 0:
            return 0.0
        return float(self.conditional_cdf_matrix()[i, j - 1])

    def cost(self, costfn) -> float:
        """Total transport cost under a nonnegative cost function or matrix."""
        c = evaluate_cost(costfn, self.source.support, self.target.support)
        return float(np.sum(c * self.mass))

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "mass": self.mass.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransportPlan":
        try:
            source = DiscreteMeasure.from_dict(data["source"])
            target = DiscreteMeasure.from_dict(data["target"])
            mass = data["mass"]
        except KeyError as exc:
            raise ValueError(f"plan data is missing field {exc}") from exc
        return cls(source, target, mass)

    def __repr__(self) -> str:
        return f"TransportPlan(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Kernel:
    """Row-wise disintegration of a plan: rows[i] is the law of Y given X = x_i."""

    rows: np.ndarray
    source: DiscreteMeasure
    target: DiscreteMeasure

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.shape != (self.source.n, self.target.n):
            raise ValueError("kernel rows have the wrong shape")
        err = np.abs(rows.sum(axis=1) - 1.0).max()
        if err > _MARGINAL_TOL:
            raise ValueError(f"kernel rows must each sum to 1 (off by {err:g})")

    def row(self, i: int) -> np.ndarray:
        return self.rows[i]

    def cdf(self, i: int, a: float) -> float:
        j = int(np.searchsorted(self.target.support, a, side="right"))
        return float(self.rows[i, :j].sum())

    def reconstruct(self) -> TransportPlan:
        """Multiply the rows back by the source weights."""
        return TransportPlan(self.source, self.target,
                             self.rows * self.source.weights[:, None])


COST_FUNCTIONS = {
    "abs": lambda x, y: np.abs(x - y),
    "square": lambda x, y: (x - y) ** 2,
}


def evaluate_cost(costfn, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Cost matrix on a support grid from a name, a callable c(x, y), or a matrix."""
    if isinstance(costfn, str):
        try:
            costfn = COST_FUNCTIONS[costfn]
        except KeyError:
            raise ValueError(f"unknown cost name {costfn!r}") from None
    if callable(costfn):
        c = np.asarray(costfn(xs[:, None], ys[None, :]), dtype=float)
    else:
        c = np.asarray(costfn, dtype=float)
    if c.shape != (xs.size, ys.size):
        raise ValueError(f"cost must have shape {(xs.size, ys.size)}, got {c.shape}")
    if np.any(c < 0):
        raise ValueError("cost values must be nonnegative")
    return c


# ---------- constructors ----------


def product_plan(source: DiscreteMeasure, target: DiscreteMeasure) -> TransportPlan:
    """Independent coupling: every row is the target law."""
    return TransportPlan(source, target, np.outer(source.weights, target.weights))


def deterministic_plan(source: DiscreteMeasure, values) -> TransportPlan:
    """Plan concentrated on the graph of a map given by its values on the support."""
    values = np.asarray(values, dtype=float)
    if values.shape != (source.n,):
        raise ValueError("need one map value per source atom")
    rounded = _round_support(values)
    support, weights = merge_atoms(rounded, source.weights)
    target = DiscreteMeasure(support, weights)
    cols = np.searchsorted(support, rounded)
    mass = np.zeros((source.n, support.size))
    mass[np.arange(source.n), cols] = source.weights
    return TransportPlan(source, target, mass)


def mix_plans(components: list[tuple[float, TransportPlan]]) -> TransportPlan:
    """Convex mixture of plans sharing one source measure.

    Weights must be positive and sum to 1.  Target supports are aligned by
    exact matching after rounding coordinates to 12 decimals.
    """
    if not components:
        raise ValueError("need at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights <= 0):
        raise ValueError("mixture weights must be positive")
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError(f"mixture weights sum to {weights.sum()!r}, not 1")
    base = components[0][1].source
    base_support = _round_support(base.support)
    for _, plan in components[1:]:
        if not np.array_equal(_round_support(plan.source.support), base_support):
            raise ValueError("components must share the source support")
        if np.abs(plan.source.weights - base.weights).max() > 1e-12:
            raise ValueError("components must share the source weights")
    union = np.unique(np.concatenate(
        [_round_support(p.target.support) for _, p in components]))
    mass = np.zeros((base.n, union.size))
    for w, plan in components:
        cols = np.searchsorted(union, _round_support(plan.target.support))
        np.add.at(mass, (slice(None), cols), w * plan.mass)
    target = DiscreteMeasure(union, mass.sum(axis=0))
    return TransportPlan(base, target, mass)


def independent_sum_plan(source_spec: Family, increment_spec: Family,
                         n: int, m: int) -> TransportPlan:
    """Plan of (X, X + W) for W independent of X and nonnegative.

    Both laws are discretized on quantile grids; the target support is the
    set of sums x_i + w_l with the induced weights.
    """
    if increment_spec.support_lower < 0:
        raise ValueError("the increment law must live on [0, inf)")
    src = discretize(source_spec, n)
    inc = discretize(increment_spec, m)
    sums = _round_support(src.support[:, None] + inc.support[None, :])
    union, inverse = np.unique(sums, return_inverse=True)
    inverse = inverse.reshape(sums.shape)
    mass = np.zeros((src.n, union.size))
    contrib = src.weights[:, None] * inc.weights[None, :]
    rows = np.repeat(np.arange(src.n), inc.n)
    np.add.at(mass, (rows, inverse.ravel()), contrib.ravel())
    target = DiscreteMeasure(union, mass.sum(axis=0))
    return TransportPlan(src, target, mass)


def plan_from_samples(x, y, *, x_atoms=None, y_atoms=None,
                      cells: tuple[int, int] | None = None) -> TransportPlan:
    """Empirical plan from paired samples.

    Either snap both coordinates to given atom grids (``x_atoms``/``y_atoms``)
    or histogram them on ``cells=(nx, ny)`` equal-width midpoint grids.
    Bins that receive no mass are dropped; marginals are the realized ones.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError("x and y must be equal-length nonempty 1-d arrays")
    if (x_atoms is None) != (y_atoms is None):
        raise ValueError("give both atom grids or neither")
    if x_atoms is not None:
        if cells is not None:
            raise ValueError("choose atom snapping or cell binning, not both")
        xi, xs = _snap(x, np.asarray(x_atoms, dtype=float))
        yi, ys = _snap(y, np.asarray(y_atoms, dtype=float))
    elif cells is not None:
        xi, xs = _cell_bin(x, cells[0])
        yi, ys = _cell_bin(y, cells[1])
    else:
        raise ValueError("give atom grids or a cell count")
    counts = np.zeros((xs.size, ys.size))
    np.add.at(counts, (xi, yi), 1.0)
    counts /= x.size
    keep_rows = counts.sum(axis=1) > 0
    keep_cols = counts.sum(axis=0) > 0
    counts = counts[np.ix_(keep_rows, keep_cols)]
    source = DiscreteMeasure(xs[keep_rows], counts.sum(axis=1))
    target = DiscreteMeasure(ys[keep_cols], counts.sum(axis=0))
    return TransportPlan(source, target, counts)


def _snap(values: np.ndarray, atoms: np.ndarray):
    if atoms.ndim != 1 or atoms.size == 0 or (atoms.size > 1 and not np.all(np.diff(atoms) > 0)):
        raise ValueError("atom grids must be strictly increasing and nonempty")
    mids = 0.5 * (atoms[:-1] + atoms[1:])
    return np.searchsorted(mids, values), atoms


def _cell_bin(values: np.ndarray, count: int):
    if count < 1:
        raise ValueError("cell counts must be positive")
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return np.zeros(values.size, dtype=int), np.array([lo])
    edges = np.linspace(lo, hi, count + 1)
    idx = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, count - 1)
    mids = _round_support(0.5 * (edges[:-1] + edges[1:]))
    return idx, mids


# ---------- closed forms and grid emission ----------


def brownian_passage_conditional_cdf(lower_level: float, upper_level: float, x, y):
    """Conditional CDF of the passage time to the upper level given the one to the lower.

    For standard Brownian motion from 0 and levels 0 < lower < upper, the
    value at (x, y) is 1 - erf((upper - lower) / sqrt(2 (y - x))) when
    y > x and 0 otherwise.
    """
    if not 0 < lower_level < upper_level:
        raise ValueError("need 0 < lower_level < upper_level")
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    safe = np.where(d > 0, d, 1.0)
    out = np.where(d > 0,
                   1.0 - special.erf((upper_level - lower_level) / np.sqrt(2.0 * safe)),
                   0.0)
    return float(out) if out.ndim == 0 else out


def conditional_cdf_grid(plan: TransportPlan, xs, ys) -> np.ndarray:
    """Rows (x, y, F(x, y)) over a rectangular grid, x-major.

    Each x is evaluated at its nearest source atom (ties resolve to the
    lower atom), so the grid may extend beyond the discrete support.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1 or xs.size == 0 or ys.size == 0:
        raise ValueError("xs and ys must be nonempty 1-d arrays")
    sup = plan.source.support
    mids = 0.5 * (sup[:-1] + sup[1:])
    rows = np.searchsorted(mids, xs)
    cols = np.searchsorted(plan.target.support, ys, side="right")
    cdf = plan.conditional_cdf_matrix()
    padded = np.concatenate([np.zeros((plan.n, 1)), cdf], axis=1)
    values = padded[np.ix_(rows, cols)]
    out = np.empty((xs.size * ys.size, 3))
    out[:, 0] = np.repeat(xs, ys.size)
    out[:, 1] = np.tile(ys, xs.size)
    out[:, 2] = values.ravel()
    return out
