"""Branching candidates, pseudocost selection and variable disjunctions.

   Classes:
       Candidate
       BranchDecision
       PseudocostTable

   Functions:
       candidates
       make_decision
       select
       select_strong
       update_pseudocosts
"""

__all__ = ["Candidate", "BranchDecision", "PseudocostTable", "STRONG_BRANCHING_CANDIDATES",
           "candidates", "make_decision", "select", "select_strong", "update_pseudocosts"]

import collections
import logging
import numpy as np

from .enums import BranchStrategy
from .exceptions import InvalidParameterException
from .model import INTEGRALITY_TOLERANCE

SCORE_EPSILON = 1e-6
STRONG_BRANCHING_CANDIDATES = 20

logger = logging.getLogger(__name__)

Candidate = collections.namedtuple("Candidate", ["column", "value", "fractional"])
Candidate.__doc__ = """A branching candidate: column over (x, y), its relaxation
value and whether that value is fractional."""

BranchDecision = collections.namedtuple("BranchDecision", [
    "column", "value", "down", "up", "down_distance", "up_distance"])
BranchDecision.__doc__ = """A variable disjunction. down and up are the (lo, hi)
ranges of the two children on the branching column; the distances are how far
the relaxation value lies outside each child (0 when the child keeps it)."""


class PseudocostTable():
    """Per-column running averages of objective degradation per unit change.

    Attributes:
        down_sum(ndarray), up_sum(ndarray): accumulated per-unit degradations
        down_count(ndarray), up_count(ndarray): number of observations
    """

    def __init__(self, num_columns:int):
        self.down_sum = np.zeros(num_columns)
        self.up_sum = np.zeros(num_columns)
        self.down_count = np.zeros(num_columns, dtype=int)
        self.up_count = np.zeros(num_columns, dtype=int)

    def observe(self, column:int, direction:str, degradation:float) -> None:
        """Adds one per-unit degradation to the 'down' or 'up' average of a column."""
        if direction == "down":
            self.down_sum[column] += degradation
            self.down_count[column] += 1
        elif direction == "up":
            self.up_sum[column] += degradation
            self.up_count[column] += 1
        else:
            raise InvalidParameterException("Unknown direction {}.".format(direction))

    def _estimate(self, sums, counts, column:int) -> float:
        if counts[column] > 0:
            return sums[column] / counts[column]
        seen = counts > 0
        if not seen.any():
            return 1.0
        return float(np.mean(sums[seen] / counts[seen]))

    def down(self, column:int) -> float:
        """Down pseudocost; average of initialized columns (or 1) when unseen."""
        return self._estimate(self.down_sum, self.down_count, column)

    def up(self, column:int) -> float:
        """Up pseudocost; average of initialized columns (or 1) when unseen."""
        return self._estimate(self.up_sum, self.up_count, column)


def candidates(point, lower, upper, integer, linking, strategy:BranchStrategy) -> list:
    """Builds the branching candidate list.

    Parameters:
        point(ndarray): relaxation solution over (x, y)
        lower(ndarray), upper(ndarray): node bounds
        integer(ndarray): integrality mask over (x, y)
        linking(ndarray): linking column indices
        strategy(BranchStrategy): Linking or Fractional

    Returns:
        list: Candidate entries in column order. Linking: fractional linking
        columns, else unfixed linking columns, else fractional non-linking
        integer columns. Fractional: every fractional integer column.
    """
    point = np.asarray(point, dtype=float)
    fractional = np.abs(point - np.round(point)) > INTEGRALITY_TOLERANCE
    fractional &= np.asarray(integer, dtype=bool)
    if strategy == BranchStrategy.Fractional:
        return [Candidate(int(j), float(point[j]), True) for j in np.flatnonzero(fractional)]
    linking = np.asarray(linking, dtype=int)
    chosen = [Candidate(int(j), float(point[j]), True) for j in linking if fractional[j]]
    if chosen:
        return chosen
    chosen = [Candidate(int(j), float(np.round(point[j])), False) for j in linking if lower[j] < upper[j]]
    if chosen:
        return chosen
    mask = fractional.copy()
    mask[linking] = False
    return [Candidate(int(j), float(point[j]), True) for j in np.flatnonzero(mask)]


def make_decision(candidate:Candidate, lower, upper) -> BranchDecision:
    """Turns a candidate into a disjunction.

    A fractional value v gives x <= floor(v) / x >= floor(v) + 1. An
    integral value v gives x <= v / x >= v + 1 when v <= u - 1 and
    x <= v - 1 / x >= v otherwise.

    Raises:
        InvalidParameterException: if the column is already fixed.
    """
    j = candidate.column
    lo, hi = lower[j], upper[j]
    if lo >= hi:
        raise InvalidParameterException("Can't branch on fixed column {:d}.".format(j))
    if candidate.fractional:
        v = np.floor(candidate.value)
        f = candidate.value - v
        return BranchDecision(j, candidate.value, (lo, v), (v + 1, hi), f, 1.0 - f)
    v = np.round(candidate.value)
    if v <= hi - 1:
        return BranchDecision(j, v, (lo, v), (v + 1, hi), 0.0, 1.0)
    return BranchDecision(j, v, (lo, v - 1), (v, hi), 1.0, 0.0)


def _score(down:float, up:float) -> float:
    return max(down, SCORE_EPSILON) * max(up, SCORE_EPSILON)


def select(candidate_list:list, table:PseudocostTable, lower, upper) -> BranchDecision:
    """Picks the candidate with the best pseudocost product score.

    Ties go to the lowest column index.

    Raises:
        InvalidParameterException: if the candidate list is empty.
    """
    if not candidate_list:
        raise InvalidParameterException("No branching candidate.")
    best, best_score = None, -np.inf
    for candidate in sorted(candidate_list, key=lambda c: c.column):
        decision = make_decision(candidate, lower, upper)
        score = _score(table.down(candidate.column) * decision.down_distance,
                       table.up(candidate.column) * decision.up_distance)
        if score > best_score:
            best, best_score = decision, score
    logger.debug("branching on column %d (score %g)", best.column, best_score)
    return best


def select_strong(candidate_list:list, parent_bound:float, evaluate, lower, upper) -> BranchDecision:
    """Picks a candidate by solving both child relaxations.

    Parameters:
        candidate_list(list): candidates (only the first STRONG_BRANCHING_CANDIDATES are tried)
        parent_bound(float): node relaxation value
        evaluate(callable): evaluate(column, lo, hi) returns the child
            relaxation value (+inf when infeasible)
        lower(ndarray), upper(ndarray): node bounds

    Returns:
        BranchDecision: the candidate with the best product of gains.
    """
    if not candidate_list:
        raise InvalidParameterException("No branching candidate.")
    best, best_score = None, -np.inf
    pool = sorted(candidate_list, key=lambda c: c.column)[:STRONG_BRANCHING_CANDIDATES]
    for candidate in pool:
        decision = make_decision(candidate, lower, upper)
        gains = []
        for lo, hi in (decision.down, decision.up):
            value = evaluate(decision.column, lo, hi)
            # an infeasible child is as good as it gets
            gains.append(1e12 if not np.isfinite(value) else value - parent_bound)
        score = _score(*gains)
        if score > best_score:
            best, best_score = decision, score
    return best


def update_pseudocosts(table:PseudocostTable, column:int, direction:str, distance:float,
                       parent_bound:float, child_bound:float) -> PseudocostTable:
    """Records the degradation observed in a child relaxation.

    Nothing is recorded when the distance is zero or a bound isn't finite.

    Returns:
        PseudocostTable: the same table, updated in place.
    """
    if distance <= 0 or not np.isfinite(parent_bound) or not np.isfinite(child_bound):
        return table
    table.observe(column, direction, max(child_bound - parent_bound, 0.0) / distance)
    return table
