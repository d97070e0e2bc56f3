"""Brute-force bilevel solver for small instances.

Every first-level point of the integer grid is tried. The follower's value
is found by enumerating its integer grid and solving the residual LP over
continuous second-level columns with scipy's HiGHS; the optimistic reaction
is then picked among the follower-optimal points. Nothing here shares code
with the branch-and-cut engine.

   Classes:
       OracleResult

   Functions:
       brute_force_solve
       enumerate_bilevel_feasible
       follower_value
"""

__all__ = ["OracleResult", "MAX_POINTS", "brute_force_solve", "enumerate_bilevel_feasible", "follower_value"]

import collections
import itertools
import logging
import numpy as np
from scipy.optimize import linprog

from .enums import BilevelStatus
from .exceptions import EnumerationLimitException, InvalidInstanceException
from .model import MiblpInstance, linking_set

MAX_POINTS = 10**6
# row and follower-value tolerance; d2 y <= phi gets nothing beyond it
TOLERANCE = 1e-9

logger = logging.getLogger(__name__)

OracleResult = collections.namedtuple("OracleResult", ["status", "x", "y", "value"])
OracleResult.__doc__ = """Brute-force optimum: BilevelStatus Optimal or Infeasible,
the optimal (x, y) (None when infeasible) and its value (+inf when infeasible)."""


def _grid(lower, upper, max_points:int):
    """Integer points of a box, one per line, in lexicographic order."""
    lo = np.ceil(np.asarray(lower, dtype=float) - TOLERANCE)
    hi = np.floor(np.asarray(upper, dtype=float) + TOLERANCE)
    if np.any(~np.isfinite(lo)) or np.any(~np.isfinite(hi)):
        raise EnumerationLimitException("integer column without finite bounds")
    sizes = np.maximum(hi - lo + 1, 0)
    if np.prod(sizes, dtype=float) > max_points:
        raise EnumerationLimitException("{:g} grid points exceed the cap of {:d}".format(np.prod(sizes, dtype=float), max_points))
    ranges = [range(int(a), int(b) + 1) for a, b in zip(lo, hi)]
    points = list(itertools.product(*ranges))
    return np.array(points, dtype=float).reshape(len(points), len(ranges))


def _lp(cost, rows, rhs, lower, upper):
    """min cost.z s.t. rows z >= rhs, bounds; returns (value, z) with value +inf if infeasible."""
    cost = np.asarray(cost, dtype=float)
    if cost.size == 0:
        feasible = np.all(np.asarray(rhs) <= TOLERANCE)
        return (0.0, np.zeros(0)) if feasible else (np.inf, None)
    bounds = [(lo if np.isfinite(lo) else None, hi if np.isfinite(hi) else None) for lo, hi in zip(lower, upper)]
    rows = np.asarray(rows, dtype=float).reshape(-1, cost.size)
    result = linprog(cost, A_ub=-rows if rows.size else None, b_ub=-np.asarray(rhs) if rows.size else None,
                     bounds=bounds, method="highs")
    if result.status == 2:
        return np.inf, None
    if result.status == 3:
        raise InvalidInstanceException("second-level problem unbounded")
    if result.status != 0:
        raise EnumerationLimitException("residual LP failed: {}".format(result.message))
    return float(result.fun), np.asarray(result.x, dtype=float)


class _Follower():
    """Enumeration data of the second level of an instance."""

    def __init__(self, instance:MiblpInstance, max_points:int):
        self.instance = instance
        r2 = instance.r2
        self.grid = _grid(instance.lb_y[:r2], instance.ub_y[:r2], max_points)
        self.continuous = instance.n2 > r2

    def value(self, beta) -> float:
        """phi(beta) = min d2.y over G2 y >= beta, y in Y."""
        inst = self.instance
        r2 = inst.r2
        integer_part = self.grid @ inst.G2[:, :r2].T if inst.m2 else np.zeros((self.grid.shape[0], 0))
        costs = self.grid @ inst.d2[:r2]
        if not self.continuous:
            feasible = np.all(integer_part >= beta - TOLERANCE, axis=1)
            return float(costs[feasible].min(initial=np.inf))
        best = np.inf
        for k in range(self.grid.shape[0]):
            value, _ = _lp(inst.d2[r2:], inst.G2[:, r2:], beta - integer_part[k], inst.lb_y[r2:], inst.ub_y[r2:])
            best = min(best, costs[k] + value)
        return best

    def reactions(self, x, phi:float, lower, upper):
        """Optimistic reactions at x that lie in [lower, upper] and satisfy the first-level rows.

        Pure-integer reactions are all listed; with continuous columns there
        is one d1-best point per integer assignment.
        """
        inst = self.instance
        r2 = inst.r2
        beta = inst.A2 @ x if inst.m2 else np.zeros(0)
        first = inst.b1 - inst.A1 @ x if inst.m1 else np.zeros(0)
        grid = self.grid
        keep = np.all((grid >= lower[:r2] - TOLERANCE) & (grid <= upper[:r2] + TOLERANCE), axis=1)
        grid = grid[keep]
        if not self.continuous:
            ok = grid @ inst.d2 <= phi + TOLERANCE
            if inst.m2:
                ok &= np.all(grid @ inst.G2.T >= beta - TOLERANCE, axis=1)
            if inst.m1:
                ok &= np.all(grid @ inst.G1.T >= first - TOLERANCE, axis=1)
            return [y.copy() for y in grid[ok]]
        points = []
        lo = np.maximum(inst.lb_y[r2:], lower[r2:])
        hi = np.minimum(inst.ub_y[r2:], upper[r2:])
        for y_int in grid:
            rows = np.vstack([inst.G2[:, r2:], inst.G1[:, r2:], -inst.d2[r2:].reshape(1, -1)])
            rhs = np.concatenate([beta - inst.G2[:, :r2] @ y_int, first - inst.G1[:, :r2] @ y_int,
                                  [-(phi - inst.d2[:r2] @ y_int) - TOLERANCE]])
            value, y_cont = _lp(inst.d1[r2:], rows, rhs, lo, hi)
            if np.isfinite(value):
                points.append(np.concatenate([y_int, y_cont]))
        return points


def follower_value(instance:MiblpInstance, x, max_points:int = MAX_POINTS) -> float:
    """Second-level value phi(A2 x) by enumeration (+inf when infeasible)."""
    x = np.asarray(x, dtype=float)
    beta = instance.A2 @ x if instance.m2 else np.zeros(0)
    return _Follower(instance, max_points).value(beta)


def _leader_grid(instance:MiblpInstance, lower, upper, linking_value, max_points:int):
    n1, r1 = instance.n1, instance.r1
    lo = np.maximum(instance.lb_x, lower[:n1])
    hi = np.minimum(instance.ub_x, upper[:n1])
    if np.any(lo[r1:] != hi[r1:]):
        raise InvalidInstanceException("continuous first-level columns must be fixed for enumeration")
    if linking_value is not None:
        links = linking_set(instance)
        gamma = np.asarray(linking_value, dtype=float).reshape(-1)
        lo[links] = np.maximum(lo[links], gamma)
        hi[links] = np.minimum(hi[links], gamma)
    if np.any(lo > hi):
        return np.zeros((0, n1))
    grid = _grid(lo[:r1], hi[:r1], max_points)
    return np.hstack([grid, np.tile(lo[r1:], (grid.shape[0], 1))])


def _scan(instance:MiblpInstance, lower, upper, linking_value, max_points:int):
    n = instance.num_columns
    lower = np.full(n, -np.inf) if lower is None else np.asarray(lower, dtype=float)
    upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
    follower = _Follower(instance, max_points)
    for x in _leader_grid(instance, lower, upper, linking_value, max_points):
        beta = instance.A2 @ x if instance.m2 else np.zeros(0)
        phi = follower.value(beta)
        if not np.isfinite(phi):
            continue
        for y in follower.reactions(x, phi, lower[instance.n1:], upper[instance.n1:]):
            yield x, y


def enumerate_bilevel_feasible(instance:MiblpInstance, max_points:int = MAX_POINTS, lower=None, upper=None,
                               linking_value=None) -> list:
    """Lists bilevel feasible points.

    Parameters:
        instance(MiblpInstance): the instance
        max_points(int): cap on each enumerated grid
        lower(ndarray), upper(ndarray): optional box over (x, y) restricting the points
        linking_value(array): optional value the linking columns are fixed to

    Returns:
        list: (x, y) pairs. With continuous second-level columns only one
        leader-best point per integer assignment is listed.

    Raises:
        EnumerationLimitException: if a grid exceeds the cap.
    """
    return list(_scan(instance, lower, upper, linking_value, max_points))


def brute_force_solve(instance:MiblpInstance, max_points:int = MAX_POINTS, lower=None, upper=None,
                      linking_value=None) -> OracleResult:
    """Optimistic bilevel optimum by exhaustive enumeration.

    Parameters are those of enumerate_bilevel_feasible.

    Returns:
        OracleResult: the first optimal point in grid order, or Infeasible.
    """
    best = OracleResult(BilevelStatus.Infeasible, None, None, np.inf)
    for x, y in _scan(instance, lower, upper, linking_value, max_points):
        value = instance.value(x, y)
        if value < best.value - 1e-9:
            best = OracleResult(BilevelStatus.Optimal, x, y, value)
    return best
