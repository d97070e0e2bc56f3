"""Branch-and-bound MILP subsolver built on the simplex module.

Used for the second-level problem, the best-bound problem of a linking
solution, the optimistic reaction Xi(x) and the heuristics. Nodes are
explored best-first, branching on the most fractional column; ties go to
the lowest column index and equal bounds to the earliest node. Once the
integer columns of a point are rounded, its continuous columns are re-solved
with them fixed.

   Classes:
       MilpModel
       MilpSolution

   Functions:
       solve_milp
       set_callback_incumbent_filter
"""

__all__ = ["MilpModel", "MilpSolution", "solve_milp", "set_callback_incumbent_filter"]

import heapq
import itertools
import logging
import time
import numpy as np

from .enums import LpStatus, MilpStatus
from .exceptions import InvalidParameterException, UnboundedException
from .model import INTEGRALITY_TOLERANCE
from .simplex import OPTIMALITY_TOLERANCE, LpModel, add_rows, solve_lp

logger = logging.getLogger(__name__)


class MilpModel():
    """An LP model with an integrality mask and an optional objective cutoff.

    Attributes:
        lp(LpModel): the continuous relaxation
        integer(ndarray): boolean mask of integer columns
        cutoff(float): points with objective above this value are rejected (None for no cutoff)
        incumbent_filter(callable): predicate on integral points (None accepts all)
    """

    def __init__(self, objective, matrix, rhs, lower, upper, integer, cutoff:float = None):
        """Class constructor.

        Raises:
            InvalidParameterException: if an integer column has an infinite bound.
        """
        self.lp = LpModel(objective, matrix, rhs, lower, upper)
        self.integer = np.array(integer, dtype=bool).reshape(-1)
        if self.integer.size != self.lp.num_columns:
            raise InvalidParameterException("Integrality mask must have one entry per column.")
        bounded = np.isfinite(self.lp.lower[self.integer]) & np.isfinite(self.lp.upper[self.integer])
        if not bounded.all():
            raise InvalidParameterException("Integer columns need finite bounds.")
        self.cutoff = cutoff
        self.incumbent_filter = None

    def add_rows(self, rows, rhs) -> 'MilpModel':
        """Returns a copy with extra >= rows; cutoff and filter carry over."""
        lp = add_rows(self.lp, rows, rhs)
        model = MilpModel(lp.objective, lp.matrix, lp.rhs, lp.lower, lp.upper, self.integer, self.cutoff)
        model.incumbent_filter = self.incumbent_filter
        return model


class MilpSolution():
    """Result of solve_milp.

    Attributes:
        status(MilpStatus): Optimal, Infeasible, CutoffExceeded or Limit
        x(ndarray): best integral point found (None if none)
        objective(float): its objective (+inf if none)
        nodes(int): number of nodes whose relaxation was solved
        lp_iterations(int): simplex iterations over all nodes
    """

    def __init__(self, status:MilpStatus, x=None, objective:float = np.inf, nodes:int = 0, lp_iterations:int = 0):
        self.status = status
        self.x = x
        self.objective = objective
        self.nodes = nodes
        self.lp_iterations = lp_iterations

    def __repr__(self):
        return "MilpSolution({}, objective={})".format(self.status.name, self.objective)


def set_callback_incumbent_filter(model:MilpModel, predicate) -> None:
    """Installs a predicate consulted before any integral point becomes incumbent.

    Parameters:
        model(MilpModel): the model to configure
        predicate(callable): takes a point, returns True to accept it (None removes the filter)

    Note:
        A rejected point doesn't end its node: the node is split on an unfixed
        integer column until the point is isolated, so other integral points
        of the region are still found.
    """
    model.incumbent_filter = predicate


def _polish(lp:LpModel, point, integer, basis):
    """Re-solves the continuous columns with the integer ones fixed at their rounded values.

    Keeps the point when every column is integer or the fixed LP fails.
    """
    if integer.all():
        return point
    lower, upper = lp.lower.copy(), lp.upper.copy()
    lower[integer] = upper[integer] = point[integer]
    fixed = solve_lp(LpModel(lp.objective, lp.matrix, lp.rhs, lower, upper), basis)
    if fixed.status != LpStatus.Optimal:
        return point
    polished = fixed.x.copy()
    polished[integer] = point[integer]
    return polished


def _split_integral(point, lower, upper, integer):
    """Split for an integral point rejected by the filter: first unfixed integer column."""
    for j in np.flatnonzero(integer):
        if lower[j] < upper[j]:
            v = point[j]
            if v <= upper[j] - 1:
                return j, (lower[j], v), (v + 1, upper[j])
            return j, (lower[j], v - 1), (v, upper[j])
    return None


def solve_milp(model:MilpModel, node_limit:int = None, time_limit:float = None) -> MilpSolution:
    """Solves a MILP by LP-based branch and bound.

    Parameters:
        model(MilpModel): the problem
        node_limit(int): maximum number of nodes (default None, unlimited)
        time_limit(float): wall-clock limit in seconds (default None, unlimited)

    Returns:
        MilpSolution: the proven optimum, or the reason there is none.

    Raises:
        UnboundedException: if the root relaxation is unbounded.
    """
    start = time.perf_counter()
    lp = model.lp
    integer = model.integer
    cutoff = np.inf if model.cutoff == None else model.cutoff
    counter = itertools.count()
    heap = [(-np.inf, next(counter), lp.lower.copy(), lp.upper.copy(), None)]
    incumbent = None
    best = np.inf
    cut_off = False
    nodes = 0
    iterations = 0
    while heap:
        if (node_limit != None and nodes >= node_limit) \
                or (time_limit != None and time.perf_counter() - start >= time_limit):
            logger.debug("MILP stopped on a limit after %d nodes", nodes)
            return MilpSolution(MilpStatus.Limit, incumbent, best, nodes, iterations)
        bound, _, lower, upper, basis = heapq.heappop(heap)
        if incumbent is not None and bound >= best - OPTIMALITY_TOLERANCE:
            continue
        nodes += 1
        relaxation = solve_lp(LpModel(lp.objective, lp.matrix, lp.rhs, lower, upper), basis)
        iterations += relaxation.iterations
        if relaxation.status == LpStatus.Infeasible:
            continue
        if relaxation.status == LpStatus.Unbounded:
            raise UnboundedException("unbounded MILP")
        value = relaxation.objective
        if value > cutoff + OPTIMALITY_TOLERANCE:
            cut_off = True
            continue
        if incumbent is not None and value >= best - OPTIMALITY_TOLERANCE:
            continue
        point = relaxation.x
        distance = np.abs(point - np.round(point))
        distance[~integer] = 0.0
        if distance.max(initial=0.0) <= INTEGRALITY_TOLERANCE:
            point = point.copy()
            point[integer] = np.round(point[integer])
            point = _polish(lp, point, integer, relaxation.basis)
            if model.incumbent_filter is None or model.incumbent_filter(point):
                incumbent = point
                best = float(lp.objective @ point)
                continue
            split = _split_integral(point, lower, upper, integer)
            if split is None:
                continue
            column, down, up = split
        else:
            # most fractional column, argmax keeps the lowest index on ties
            column = int(np.argmax(distance))
            v = np.floor(point[column])
            down, up = (lower[column], v), (v + 1, upper[column])
        for lo, hi in (down, up):
            child_lower, child_upper = lower.copy(), upper.copy()
            child_lower[column], child_upper[column] = lo, hi
            heapq.heappush(heap, (value, next(counter), child_lower, child_upper, relaxation.basis))
    if incumbent is not None:
        return MilpSolution(MilpStatus.Optimal, incumbent, best, nodes, iterations)
    if cut_off:
        return MilpSolution(MilpStatus.CutoffExceeded, None, np.inf, nodes, iterations)
    return MilpSolution(MilpStatus.Infeasible, None, np.inf, nodes, iterations)
