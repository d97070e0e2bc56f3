"""Bounded-variable primal and dual simplex on dense matrices.

Every linear program is held as

    min c.x   s.t.   A x >= b,   lower <= x <= upper

and solved on the standard form A x - s = b, s >= 0. Cold starts run a
two-phase primal simplex with artificial columns; warm starts from a
previous basis run the dual simplex, which is what branching (bound
changes) and cutting (appended rows) leave us with.

   Classes:
       LpModel
       LpSolution
       Basis

   Functions:
       solve_lp
       add_rows
       fix_bounds
"""

__all__ = ["FEASIBILITY_TOLERANCE", "OPTIMALITY_TOLERANCE", "LpModel", "LpSolution",
           "Basis", "solve_lp", "add_rows", "fix_bounds"]

import logging
import numpy as np

from .enums import BasisStatus, LpStatus
from .exceptions import InvalidParameterException, IterationLimitException

FEASIBILITY_TOLERANCE = 1e-7
OPTIMALITY_TOLERANCE = 1e-7
PIVOT_TOLERANCE = 1e-9
# pivots without objective progress before Bland's rule takes over
BLAND_THRESHOLD = 5000
ITERATION_LIMIT = 200000
REFACTOR_FREQUENCY = 50

logger = logging.getLogger(__name__)

_BASIC = int(BasisStatus.Basic)
_LOWER = int(BasisStatus.AtLower)
_UPPER = int(BasisStatus.AtUpper)
_FREE = int(BasisStatus.Free)


class LpModel():
    """Linear program  min c.x  s.t.  A x >= b,  lower <= x <= upper.

    Attributes:
        objective(ndarray): cost vector c
        matrix(ndarray): constraint matrix A, one row per >= constraint
        rhs(ndarray): right-hand sides b
        lower(ndarray): column lower bounds (may be -inf)
        upper(ndarray): column upper bounds (may be +inf)
    """

    def __init__(self, objective, matrix, rhs, lower, upper):
        """Class constructor.

        Raises:
            InvalidParameterException: if dimensions disagree or a bound is
                infinite on the wrong side.
        """
        self.objective = np.array(objective, dtype=float).reshape(-1)
        n = self.objective.size
        self.rhs = np.array(rhs, dtype=float).reshape(-1)
        matrix = np.array(matrix, dtype=float)
        if matrix.size == 0:
            matrix = matrix.reshape(self.rhs.size, n)
        if matrix.ndim != 2 or matrix.shape != (self.rhs.size, n):
            raise InvalidParameterException("Constraint matrix shape {} doesn't match {} rows and {} columns."
                                            .format(matrix.shape, self.rhs.size, n))
        self.matrix = matrix
        self.lower = np.array(lower, dtype=float).reshape(-1)
        self.upper = np.array(upper, dtype=float).reshape(-1)
        if self.lower.size != n or self.upper.size != n:
            raise InvalidParameterException("Bound vectors must have one entry per column.")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise InvalidParameterException("Infinite bound on the wrong side.")

    @property
    def num_rows(self) -> int:
        return self.rhs.size

    @property
    def num_columns(self) -> int:
        return self.objective.size

    def copy(self) -> 'LpModel':
        return LpModel(self.objective, self.matrix, self.rhs, self.lower, self.upper)


class Basis():
    """Basis descriptor: one BasisStatus per structural column and one per row slack.

    Attributes:
        columns(ndarray): statuses of the structural columns
        rows(ndarray): statuses of the row slacks
    """

    def __init__(self, columns, rows):
        self.columns = np.array(columns, dtype=np.int8)
        self.rows = np.array(rows, dtype=np.int8)

    def __repr__(self):
        return "Basis(columns={}, rows={})".format(self.columns.tolist(), self.rows.tolist())


class LpSolution():
    """Result of solve_lp.

    Attributes:
        status(LpStatus): Optimal, Infeasible or Unbounded
        x(ndarray): primal point (last iterate when not optimal)
        objective(float): objective value at x (+inf if infeasible, -inf if unbounded)
        basis(Basis): final basis, usable as a warm start (None if unavailable)
        duals(ndarray): row multipliers, nonnegative at optimality
        reduced_costs(ndarray): structural reduced costs
        ray(ndarray): dual ray over rows when Infeasible, primal ray when Unbounded
        iterations(int): simplex pivots and bound flips performed
    """

    def __init__(self, status:LpStatus, x=None, objective:float = None, basis:Basis = None,
                 duals=None, reduced_costs=None, ray=None, iterations:int = 0):
        self.status = status
        self.x = x
        self.objective = objective
        self.basis = basis
        self.duals = duals
        self.reduced_costs = reduced_costs
        self.ray = ray
        self.iterations = iterations

    def __repr__(self):
        return "LpSolution({}, objective={})".format(self.status.name, self.objective)


def add_rows(model:LpModel, rows, rhs) -> LpModel:
    """Returns a copy of model with extra >= rows appended at the bottom.

    Parameters:
        model(LpModel): the model to extend
        rows(array): one row (1-D) or several rows (2-D) of coefficients
        rhs(array): matching right-hand sides

    Returns:
        LpModel: the extended model. A basis of the original model stays a
        valid warm start; the new slacks enter it as basic.

    Raises:
        InvalidParameterException: if the row length doesn't match the column count.
    """
    rows = np.atleast_2d(np.array(rows, dtype=float))
    rhs = np.atleast_1d(np.array(rhs, dtype=float))
    if rows.shape[1] != model.num_columns or rows.shape[0] != rhs.size:
        raise InvalidParameterException("Row dimension doesn't match the model.")
    return LpModel(model.objective, np.vstack([model.matrix, rows]),
                   np.concatenate([model.rhs, rhs]), model.lower, model.upper)


def fix_bounds(model:LpModel, column:int, lo:float, hi:float) -> LpModel:
    """Returns a copy of model with the bounds of one column tightened to [lo, hi].

    Bounds are intersected with the current ones, so this never relaxes a column.

    Raises:
        InvalidParameterException: if lo > hi or the column doesn't exist.
    """
    if lo > hi:
        raise InvalidParameterException("Lower bound {} exceeds upper bound {}.".format(lo, hi))
    if column < 0 or column >= model.num_columns:
        raise InvalidParameterException("Column {:d} out of range.".format(column))
    new = model.copy()
    new.lower[column] = max(new.lower[column], lo)
    new.upper[column] = min(new.upper[column], hi)
    return new


def solve_lp(model:LpModel, warm_basis:Basis = None) -> LpSolution:
    """Solves a linear program.

    Parameters:
        model(LpModel): the program to solve
        warm_basis(Basis): a basis to start from (default None). It may come
            from a model with fewer rows; missing row slacks start basic.

    Returns:
        LpSolution: proven optimum, or infeasibility with a dual ray, or
        unboundedness with a primal ray.

    Raises:
        IterationLimitException: if the hard iteration cap is hit.
    """
    if np.any(model.lower > model.upper + FEASIBILITY_TOLERANCE):
        return LpSolution(LpStatus.Infeasible, objective=np.inf)
    engine = _Simplex(model)
    status = None
    if warm_basis != None:
        status = engine.warm_start(warm_basis)
    if status == None:
        status = engine.cold_start()
    return engine.solution(status)


class _Simplex():
    """Working state of one solve.

    Protected attributes:
        _full(ndarray): [A, -I] followed by artificial columns, if any
        _lower(ndarray), _upper(ndarray): bounds of all columns
        _status(ndarray): BasisStatus of every column
        _basic(ndarray): basic column of each row
        _inverse(ndarray): inverse of the basis matrix
    """

    def __init__(self, model:LpModel):
        self.model = model
        m, n = model.matrix.shape
        self.m = m
        self.n = n
        self._full = np.hstack([model.matrix, -np.eye(m)])
        self._rhs = model.rhs
        self._lower = np.concatenate([model.lower, np.zeros(m)])
        self._upper = np.concatenate([model.upper, np.full(m, np.inf)])
        self._cost = np.concatenate([model.objective, np.zeros(m)])
        self._status = np.full(n + m, _LOWER, dtype=np.int8)
        self._basic = np.arange(n, n + m)
        self._inverse = -np.eye(m)
        self._pivots = 0
        self.iterations = 0
        self._ray = None

    ##################
    # Basis handling #
    ##################
    def _refactor(self) -> None:
        if self.m:
            self._inverse = np.linalg.inv(self._full[:, self._basic])
        self._pivots = 0

    def _pivot(self, row:int, col:int, column) -> None:
        self._basic[row] = col
        self._inverse[row] /= column[row]
        factor = column.copy()
        factor[row] = 0.0
        self._inverse -= np.outer(factor, self._inverse[row])
        self._pivots += 1
        if self._pivots >= REFACTOR_FREQUENCY:
            self._refactor()

    def _tick(self) -> None:
        self.iterations += 1
        if self.iterations > ITERATION_LIMIT:
            raise IterationLimitException("Simplex exceeded {:d} iterations.".format(ITERATION_LIMIT))

    def _nonbasic_status(self, j:int) -> int:
        if np.isfinite(self._lower[j]):
            return _LOWER
        if np.isfinite(self._upper[j]):
            return _UPPER
        return _FREE

    def _primal_values(self):
        x = np.zeros(self._full.shape[1])
        at_lower = self._status == _LOWER
        at_upper = self._status == _UPPER
        x[at_lower] = self._lower[at_lower]
        x[at_upper] = self._upper[at_upper]
        if self.m:
            x[self._basic] = self._inverse @ (self._rhs - self._full @ x)
        return x

    def _reduced_costs(self, cost):
        pi = cost[self._basic] @ self._inverse if self.m else np.zeros(0)
        d = cost - pi @ self._full
        d[self._basic] = 0.0
        return pi, d

    ##################
    # Primal simplex #
    ##################
    def _entering(self, d, bland:bool):
        movable = self._upper - self._lower > 0
        eligible = ((self._status == _LOWER) & movable & (d < -OPTIMALITY_TOLERANCE)) \
            | ((self._status == _UPPER) & movable & (d > OPTIMALITY_TOLERANCE)) \
            | ((self._status == _FREE) & (np.abs(d) > OPTIMALITY_TOLERANCE))
        if not eligible.any():
            return None, 0
        if bland:
            col = int(np.flatnonzero(eligible)[0])
        else:
            col = int(np.argmax(np.where(eligible, np.abs(d), -1.0)))
        return col, (1 if d[col] < 0 else -1)

    def _ratio_test(self, x, column, direction:int, bland:bool):
        if not self.m:
            return None, np.inf, None
        rate = -direction * column
        xb = x[self._basic]
        limits = np.full(self.m, np.inf)
        dec = rate < -PIVOT_TOLERANCE
        inc = rate > PIVOT_TOLERANCE
        with np.errstate(invalid="ignore"):
            limits[dec] = (xb[dec] - self._lower[self._basic][dec]) / -rate[dec]
            limits[inc] = (self._upper[self._basic][inc] - xb[inc]) / rate[inc]
        limits = np.maximum(limits, 0.0)
        step = limits.min()
        if not np.isfinite(step):
            return None, np.inf, None
        ties = np.flatnonzero(limits <= step + 1e-12)
        if bland:
            row = int(ties[np.argmin(self._basic[ties])])
        else:
            row = int(ties[np.argmax(np.abs(rate[ties]))])
        return row, step, (_LOWER if rate[row] < 0 else _UPPER)

    def _primal(self, cost) -> LpStatus:
        best = np.inf
        stalled = 0
        bland = False
        while True:
            x = self._primal_values()
            value = cost @ x
            if value < best - 1e-12:
                best = value
                stalled = 0
            else:
                stalled += 1
                if stalled > BLAND_THRESHOLD and not bland:
                    logger.debug("primal simplex stalled, switching to Bland's rule")
                    bland = True
            _, d = self._reduced_costs(cost)
            col, direction = self._entering(d, bland)
            if col == None:
                return LpStatus.Optimal
            self._tick()
            column = self._inverse @ self._full[:, col] if self.m else np.zeros(0)
            row, step, leaving_status = self._ratio_test(x, column, direction, bland)
            span = self._upper[col] - self._lower[col]
            if row == None and not np.isfinite(span):
                ray = np.zeros(self._full.shape[1])
                ray[col] = direction
                if self.m:
                    ray[self._basic] = -direction * column
                self._ray = ray[:self.n]
                return LpStatus.Unbounded
            if row == None or span <= step:
                # bound flip, basis unchanged
                self._status[col] = _UPPER if direction > 0 else _LOWER
                continue
            leaving = self._basic[row]
            self._pivot(row, col, column)
            self._status[leaving] = leaving_status
            self._status[col] = _BASIC

    ################
    # Dual simplex #
    ################
    def _dual(self, cost) -> LpStatus:
        best = -np.inf
        stalled = 0
        bland = False
        movable = self._upper - self._lower > 0
        while True:
            x = self._primal_values()
            value = cost @ x
            if value > best + 1e-12:
                best = value
                stalled = 0
            else:
                stalled += 1
                if stalled > BLAND_THRESHOLD and not bland:
                    logger.debug("dual simplex stalled, switching to Bland's rule")
                    bland = True
            xb = x[self._basic]
            below = self._lower[self._basic] - xb
            above = xb - self._upper[self._basic]
            violation = np.maximum(below, above)
            if not self.m or violation.max() <= FEASIBILITY_TOLERANCE:
                return LpStatus.Optimal
            if bland:
                rows = np.flatnonzero(violation > FEASIBILITY_TOLERANCE)
                row = int(rows[np.argmin(self._basic[rows])])
            else:
                row = int(np.argmax(violation))
            increase = below[row] > FEASIBILITY_TOLERANCE
            alpha = self._inverse[row] @ self._full
            sign = -1.0 if increase else 1.0
            eligible = (((self._status == _LOWER) & (sign * alpha > PIVOT_TOLERANCE))
                        | ((self._status == _UPPER) & (sign * alpha < -PIVOT_TOLERANCE))
                        | ((self._status == _FREE) & (np.abs(alpha) > PIVOT_TOLERANCE))) & movable
            if not eligible.any():
                self._ray = self._inverse[row] * (1.0 if increase else -1.0)
                return LpStatus.Infeasible
            self._tick()
            _, d = self._reduced_costs(cost)
            ratios = np.full(alpha.size, np.inf)
            ratios[eligible] = np.abs(d[eligible]) / np.abs(alpha[eligible])
            if bland:
                col = int(np.flatnonzero(ratios <= ratios.min() + 1e-12)[0])
            else:
                col = int(np.argmin(ratios))
            column = self._inverse @ self._full[:, col]
            leaving = self._basic[row]
            self._pivot(row, col, column)
            self._status[leaving] = _LOWER if increase else _UPPER
            self._status[col] = _BASIC

    ##########
    # Starts #
    ##########
    def cold_start(self) -> LpStatus:
        """Two-phase primal simplex from the slack basis, with artificials on violated rows."""
        n, m = self.n, self.m
        self._full = self._full[:, :n + m]
        self._lower = self._lower[:n + m]
        self._upper = self._upper[:n + m]
        for j in range(n):
            self._status[j] = self._nonbasic_status(j)
        self._status = self._status[:n + m]
        x = np.zeros(n + m)
        x[:n] = np.where(self._status[:n] == _LOWER, self._lower[:n],
                         np.where(self._status[:n] == _UPPER, self._upper[:n], 0.0))
        residual = self.model.matrix @ x[:n] - self._rhs
        need = np.flatnonzero(residual < -FEASIBILITY_TOLERANCE)
        k = need.size
        artificial = np.zeros((m, k))
        artificial[need, np.arange(k)] = 1.0
        self._full = np.hstack([self._full, artificial])
        self._lower = np.concatenate([self._lower, np.zeros(k)])
        self._upper = np.concatenate([self._upper, np.full(k, np.inf)])
        self._status = np.concatenate([self._status, np.full(k, _BASIC, dtype=np.int8)])
        self._basic = np.arange(n, n + m)
        self._basic[need] = n + m + np.arange(k)
        self._status[n:n + m] = _BASIC
        self._status[n + need] = _LOWER
        self._inverse = np.diag(np.where(np.isin(np.arange(m), need), 1.0, -1.0)) if m else np.zeros((0, 0))
        self._pivots = 0
        cost = np.concatenate([self._cost, np.zeros(k)])
        if k:
            phase_one = np.zeros(n + m + k)
            phase_one[n + m:] = 1.0
            self._primal(phase_one)
            x = self._primal_values()
            if x[n + m:].sum() > FEASIBILITY_TOLERANCE * max(1.0, np.abs(self._rhs).max()):
                self._ray, _ = self._reduced_costs(phase_one)
                return LpStatus.Infeasible
            self._upper[n + m:] = 0.0
            self._drive_out_artificials()
        return self._primal(cost)

    def _drive_out_artificials(self) -> None:
        limit = self.n + self.m
        for row in range(self.m):
            if self._basic[row] < limit:
                continue
            alpha = self._inverse[row] @ self._full[:, :limit]
            alpha[self._status[:limit] == _BASIC] = 0.0
            col = int(np.argmax(np.abs(alpha)))
            if abs(alpha[col]) <= PIVOT_TOLERANCE:
                continue
            leaving = self._basic[row]
            self._pivot(row, col, self._inverse @ self._full[:, col])
            self._status[leaving] = _LOWER
            self._status[col] = _BASIC

    def warm_start(self, basis:Basis):
        """Restarts from a previous basis. Returns None when a cold start is needed."""
        n, m = self.n, self.m
        if basis.columns.size != n:
            return None
        rows = basis.rows[:m]
        if rows.size < m:
            rows = np.concatenate([rows, np.full(m - rows.size, _BASIC, dtype=np.int8)])
        status = np.concatenate([basis.columns, rows]).astype(np.int8)
        for j in np.flatnonzero(status != _BASIC):
            s = status[j]
            if (s == _LOWER and not np.isfinite(self._lower[j])) \
                    or (s == _UPPER and not np.isfinite(self._upper[j])) \
                    or (s == _FREE and (np.isfinite(self._lower[j]) or np.isfinite(self._upper[j]))):
                status[j] = self._nonbasic_status(j)
        basic = np.flatnonzero(status == _BASIC)
        if basic.size != m:
            return None
        self._status = status
        self._basic = basic
        try:
            self._refactor()
        except np.linalg.LinAlgError:
            return None
        _, d = self._reduced_costs(self._cost)
        movable = self._upper - self._lower > 0
        dual_infeasible = ((status == _LOWER) & movable & (d < -OPTIMALITY_TOLERANCE)) \
            | ((status == _UPPER) & movable & (d > OPTIMALITY_TOLERANCE)) \
            | ((status == _FREE) & (np.abs(d) > OPTIMALITY_TOLERANCE))
        if not dual_infeasible.any():
            return self._dual(self._cost)
        x = self._primal_values()
        xb = x[self._basic]
        if np.all(xb >= self._lower[self._basic] - FEASIBILITY_TOLERANCE) \
                and np.all(xb <= self._upper[self._basic] + FEASIBILITY_TOLERANCE):
            return self._primal(self._cost)
        return None

    def solution(self, status:LpStatus) -> LpSolution:
        n, m = self.n, self.m
        x = self._primal_values()
        result = LpSolution(status, x=x[:n].copy(), iterations=self.iterations)
        if status == LpStatus.Infeasible:
            result.objective = np.inf
            result.ray = self._ray
            return result
        if status == LpStatus.Unbounded:
            result.objective = -np.inf
            result.ray = self._ray
            return result
        cost = np.concatenate([self._cost, np.zeros(self._full.shape[1] - n - m)])
        pi, d = self._reduced_costs(cost)
        result.objective = float(self.model.objective @ x[:n])
        result.duals = pi
        result.reduced_costs = d[:n]
        if np.all(self._basic < n + m):
            result.basis = Basis(self._status[:n], self._status[n:n + m])
        return result
