"""Primal heuristics of the bilevel branch and cut.

Each heuristic solves MILPs over the relaxation set (relaxation rows,
integrality, original bounds) through the solver and returns only points
that pass the full bilevel feasibility check.

   Functions:
       improving_objective_cut_heur
       second_level_priority_heur
       weighted_sums_heur
"""

__all__ = ["improving_objective_cut_heur", "second_level_priority_heur", "weighted_sums_heur"]

import logging
import numpy as np

from .enums import MilpStatus

# keeps the follower-value row from cutting off its own boundary
ROW_SLACK = 1e-7

logger = logging.getLogger(__name__)


def _verified(solver, point, pool):
    """(x, y, value) if point is bilevel feasible, else (x, y(x), value) for the
    leader-best reaction at x, else None. Continuous followers always take the
    leader-best reaction, which holds follower optimality exactly."""
    x, y = solver._split(point)
    if solver.instance.r2 == solver.instance.n2 and solver.is_bilevel_feasible(x, y, pool):
        return x, y, solver.instance.value(x, y)
    value, reaction = solver.evaluate_xi(x, pool)
    if reaction is None:
        return None
    x, y = solver._split(np.concatenate([x, reaction]))
    if not solver.is_bilevel_feasible(x, y, pool):
        return None
    return x, y, solver.instance.value(x, y)


def improving_objective_cut_heur(solver, x_bar, y_hat, pool=None):
    """Looks for a leader-better point whose follower does at least as well as y_hat.

    Solves min c x + d1 y over the relaxation set with d2 y <= d2 y_hat. The
    optimum is kept if bilevel feasible; otherwise the leader-best reaction
    at its x is tried.

    Parameters:
        solver(BilevelSolver): the running solver
        x_bar(ndarray): first-level point y_hat reacts to (unused by the MILP,
            logged for tracing)
        y_hat(ndarray): a second-level optimal reaction
        pool(LinkingPool): pool for second-level lookups

    Returns:
        tuple: (x, y, value) or None.
    """
    inst = solver.instance
    y_hat = np.asarray(y_hat, dtype=float)
    row = np.concatenate([np.zeros(inst.n1), -inst.d2])
    result = solver.relaxation_milp(solver._objective, row, -(inst.d2 @ y_hat) - ROW_SLACK)
    if result.status != MilpStatus.Optimal:
        return None
    found = _verified(solver, result.x, pool)
    logger.debug("improving objective cut from x=%s: %s", x_bar, None if found is None else found[2])
    return found


def second_level_priority_heur(solver, upper_bound:float, pool=None):
    """Favours the follower among points no worse than the incumbent.

    Solves min d2 y over the relaxation set with c x + d1 y <= upper_bound
    and checks the optimum. Nothing is tried without an incumbent.

    Returns:
        tuple: (x, y, value) or None.
    """
    if not np.isfinite(upper_bound):
        return None
    inst = solver.instance
    objective = np.concatenate([np.zeros(inst.n1), inst.d2])
    result = solver.relaxation_milp(objective, -solver._objective, -upper_bound)
    if result.status != MilpStatus.Optimal:
        return None
    return _verified(solver, result.x, pool)


def weighted_sums_heur(solver, weights, pool=None) -> list:
    """Scalarizes the two objectives: for each w minimizes
    w (c x + d1 y) + (1 - w) d2 y over the relaxation set.

    Parameters:
        solver(BilevelSolver): the running solver
        weights(iterable): values in [0, 1]
        pool(LinkingPool): pool for second-level lookups

    Returns:
        list: the verified (x, y, value) found, in weight order.
    """
    inst = solver.instance
    follower = np.concatenate([np.zeros(inst.n1), inst.d2])
    found = []
    for w in weights:
        result = solver.relaxation_milp(w * solver._objective + (1.0 - w) * follower)
        if result.status != MilpStatus.Optimal:
            continue
        candidate = _verified(solver, result.x, pool)
        if candidate is not None:
            found.append(candidate)
    return found
