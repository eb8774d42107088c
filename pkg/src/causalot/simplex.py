"""Dense two-phase primal simplex for equality-form linear programs.

Solves  min c'x  subject to  A x = b, x >= 0  on a full tableau.  Phase 1
starts from an all-artificial basis but never materializes the artificial
columns; both objective rows ride along in the tableau so phase 2 can
continue in place.  Pricing is Dantzig's most-negative rule with a switch
to Bland's rule after a run of degenerate pivots, which guarantees
termination.  The reported solution is recomputed from the final basis by
a fresh factorization, so residuals do not inherit pivot drift.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

_ARTIFICIAL = -1


@dataclass(frozen=True)
class SimplexSettings:
    max_iterations: int = 50_000
    tolerance: float = 1e-9


@dataclass
class SimplexSolution:
    status: str  # "optimal" | "infeasible" | "iteration-limit"
    x: np.ndarray | None
    objective: float | None
    iterations: int
    basis: np.ndarray | None
    duals: np.ndarray | None
    reduced_costs: np.ndarray | None
    primal_residual: float | None
    dual_gap: float | None


def solve_standard_form(A, b, c, settings: SimplexSettings | None = None) -> SimplexSolution:
    settings = settings or SimplexSettings()
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.ascontiguousarray(c, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],) or c.shape != (A.shape[1],):
        raise ValueError("inconsistent LP dimensions")
    rows, cols = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Tableau layout: rows 0..rows-1 hold B^-1 [A | b]; row `rows` is the
    # phase-1 objective, row rows+1 the phase-2 objective.
    tab = np.zeros((rows + 2, cols + 1), order="F")
    tab[:rows, :cols] = A
    tab[:rows, cols] = b
    tab[rows, :cols] = -A.sum(axis=0)
    tab[rows, cols] = -b.sum()
    tab[rows + 1, :cols] = c

    basis = np.full(rows, _ARTIFICIAL, dtype=int)
    in_basis = np.zeros(cols, dtype=bool)
    active = np.ones(rows, dtype=bool)
    tol = settings.tolerance
    iterations = 0
    stall = 0
    stall_limit = 5 * rows

    def pivot(row: int, col: int) -> None:
        nonlocal iterations
        piv = tab[row, col]
        tab[row] /= piv
        column = tab[:, col].copy()
        column[row] = 0.0
        out = dger(-1.0, column, tab[row], a=tab, overwrite_a=1)
        if out is not tab:  # pragma: no cover - dger copies only for non-F arrays
            tab[...] = out
        tab[:, col] = 0.0
        tab[row, col] = 1.0
        iterations += 1

    def ratio_row(col: int, bland: bool) -> int | None:
        coefs = tab[:rows, col]
        eligible = active & (coefs > tol)
        if not eligible.any():
            return None
        idx = np.flatnonzero(eligible)
        ratios = tab[idx, cols] / coefs[idx]
        best = ratios.min()
        ties = idx[ratios <= best + 1e-12]
        if ties.size == 1:
            return int(ties[0])
        if bland:
            # Smallest basis label leaves; artificials rank above real columns.
            labels = np.where(basis[ties] == _ARTIFICIAL, cols + ties, basis[ties])
            return int(ties[np.argmin(labels)])
        return int(ties[np.argmax(coefs[ties])])

    def run_phase(obj_row: int, phase_one: bool) -> str:
        nonlocal stall
        while True:
            if phase_one and -tab[obj_row, cols] <= 1e-10:
                return "done"
            if iterations >= settings.max_iterations:
                return "iteration-limit"
            reduced = tab[obj_row, :cols]
            candidates = (reduced < -tol) & ~in_basis
            if not candidates.any():
                return "done"
            if stall >= stall_limit:
                col = int(np.flatnonzero(candidates)[0])
            else:
                masked = np.where(candidates, reduced, np.inf)
                col = int(np.argmin(masked))
            row = ratio_row(col, bland=stall >= stall_limit)
            if row is None:
                if phase_one:  # pragma: no cover - phase 1 is bounded below
                    raise RuntimeError("phase 1 claims an unbounded direction")
                raise RuntimeError("LP is unbounded below")
            step = tab[row, cols] / tab[row, col]
            stall = stall + 1 if step <= 1e-12 else 0
            leaving = basis[row]
            if leaving != _ARTIFICIAL:
                in_basis[leaving] = False
            basis[row] = col
            in_basis[col] = True
            pivot(row, col)

    status = run_phase(rows, phase_one=True)
    if status == "iteration-limit":
        return SimplexSolution("iteration-limit", None, None, iterations,
                               None, None, None, None, None)
    infeasibility = -tab[rows, cols]
    if infeasibility > 1e-7:
        return SimplexSolution("infeasible", None, None, iterations,
                               None, None, None, None, None)

    # Drive leftover artificials out of the basis or retire their rows.
    for i in range(rows):
        if basis[i] != _ARTIFICIAL:
            continue
        options = np.flatnonzero((np.abs(tab[i, :cols]) > 1e-7) & ~in_basis)
        if options.size:
            col = int(options[0])
            basis[i] = col
            in_basis[col] = True
            pivot(i, col)
        else:
            active[i] = False

    status = run_phase(rows + 1, phase_one=False)
    if status == "iteration-limit":
        return SimplexSolution("iteration-limit", None, None, iterations,
                               None, None, None, None, None)

    # Recompute everything from the final basis against the original data.
    act = np.flatnonzero(active)
    basic_cols = basis[act]
    B = A[np.ix_(act, basic_cols)]
    x = np.zeros(cols)
    duals = np.zeros(rows)
    try:
        x[basic_cols] = np.linalg.solve(B, b[act])
        duals[act] = np.linalg.solve(B.T, c[basic_cols])
    except np.linalg.LinAlgError:  # pragma: no cover - simplex bases are invertible
        for i, r in enumerate(act):
            x[basis[r]] = tab[r, cols]
        duals = None
    if x.min() < -1e-7:
        # Refactorization disagrees with the tableau; fall back to tableau values.
        x[:] = 0.0
        for r in act:
            x[basis[r]] = tab[r, cols]
    np.maximum(x, 0.0, out=x)
    objective = float(c @ x)
    residual = float(np.abs(A @ x - b).max())
    if duals is not None:
        reduced = c - A.T @ duals
        gap = abs(objective - float(b @ duals))
        duals = np.where(flip, -duals, duals)
    else:
        reduced, gap = None, None
    return SimplexSolution("optimal", x, objective, iterations, basis.copy(),
                           duals, reduced, residual, gap)
