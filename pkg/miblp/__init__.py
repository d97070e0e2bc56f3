"""A branch-and-cut solver for mixed integer bilevel linear programs,
together with instance readers, a brute-force oracle and a benchmark harness.

   Classes:
       BilevelSolver

   Functions:
       solve

   Submodules:
       enums
       exceptions
       model
       fileio
       simplex
       milp
       params
       tree
       branching
       cuts
       heuristics
       oracle
       generator
       profile
       cli
"""

__all__ = ['BilevelSolver', 'solve']

import dataclasses
import itertools
import logging
import time
import warnings
import numpy as np

from .enums import *
from .exceptions import *
from .model import INTEGRALITY_TOLERANCE, MiblpInstance, classify, validate
from .simplex import OPTIMALITY_TOLERANCE, LpModel, solve_lp
from .milp import MilpModel, solve_milp
from .params import SolverParams
from .tree import BilevelResult, EventLog, LinkingPool, Node, NodeQueue, Statistics, default_event_log
from . import branching, cuts, heuristics

logger = logging.getLogger(__name__)


class BilevelSolver():
    """Branch and cut for the optimistic MIBLP

        min c x + d1 y  s.t.  A1 x + G1 y >= b1,  x in X,
                              y in argmin { d2 y : G2 y >= A2 x, y in Y }.

    Nodes are relaxations of the problem without the follower's optimality
    condition. Bilevel infeasible relaxation points are removed by cuts or
    by branching, and second-level results are remembered per linking
    solution, the values of the linking columns.

    Attributes:
        instance(MiblpInstance): the problem
        params(SolverParams): resolved parameters
        properties(InstanceProperties): structural flags of the instance
        linking(ndarray): linking column indices
        pool(LinkingPool): linking solution pool shared by the whole tree
        cuts(list): every cut generated, indexed by cut id
        pseudocosts(PseudocostTable): branching history
        statistics(Statistics): counters
        events(EventLog): structured event log
        upper_bound(float): incumbent value U
        lower_bound(float): global lower bound L
        incumbent(tuple): best (x, y) found (None if none)
        epsilon(float): required improvement over U, 1 when objective values are integral

    """

    def __init__(self, instance:MiblpInstance, params:SolverParams = None):
        """Class constructor.

        Parameters:
            instance(MiblpInstance): the problem to solve
            params(SolverParams): parameters (default SolverParams())

        Raises:
            InvalidInstanceException: if validate reports anything.
            InvalidParameterException: if the parameters are inconsistent.
        """
        diagnostics = validate(instance)
        if diagnostics:
            raise InvalidInstanceException("; ".join(d.message for d in diagnostics))
        self.instance = instance
        self.params = (params if params is not None else SolverParams()).resolve(instance.r1, instance.r2)
        self.properties = classify(instance)
        self.linking = self.properties.linking_set
        self.integer = instance.integer_mask()
        self._objective = instance.objective()
        self._matrix, self._rhs, self._lower, self._upper = instance.relaxation()
        self.epsilon = 1.0 if self.properties.integer_objective else 1e-6
        self.pool = LinkingPool()
        self.cuts = []
        self.pseudocosts = branching.PseudocostTable(instance.num_columns)
        self.statistics = Statistics()
        self.events = EventLog(self.params.event_log)
        self.upper_bound = np.inf
        self.lower_bound = -np.inf
        self.incumbent = None
        self._last_reaction = None
        self._queue = NodeQueue(self.params.search)
        self._node_ids = itertools.count()
        self._start = None
        if default_event_log() >= 2:
            logging.getLogger(__package__).setLevel(logging.DEBUG)

    ###########
    # Helpers #
    ###########
    def _elapsed(self) -> float:
        return 0.0 if self._start is None else time.perf_counter() - self._start

    def _time_exceeded(self) -> bool:
        return self.params.time_limit != None and self._elapsed() >= self.params.time_limit

    def _active_pool(self, node:Node) -> LinkingPool:
        return self.pool if self.params.use_linking_pool else node.memo

    def _rows(self, node:Node):
        """Rows of the node relaxation: the base rows, then the node's cuts."""
        if not node.cuts:
            return self._matrix, self._rhs
        active = [self.cuts[i] for i in node.cuts]
        return (np.vstack([self._matrix] + [cut.coef for cut in active]),
                np.concatenate([self._rhs, [cut.rhs for cut in active]]))

    def _milp(self, objective, matrix, rhs, lower, upper):
        model = MilpModel(objective, matrix, rhs, lower, upper, self.integer)
        return solve_milp(model, node_limit=self.params.milp_node_limit)

    def _split(self, point):
        point = np.array(point, dtype=float)
        point[self.integer] = np.round(point[self.integer])
        return self.instance.split(point)

    def _first_level_ok(self, x, y) -> bool:
        inst = self.instance
        if not inst.m1:
            return True
        return bool(np.all(inst.A1 @ x + inst.G1 @ y >= inst.b1 - 1e-6))

    def _global_lower(self, node:Node = None) -> float:
        bound = self._queue.min_bound()
        if node is not None:
            bound = min(bound, node.bound)
        return min(bound, self.upper_bound)

    def _update_incumbent(self, x, y, value:float, source:str, node:Node = None) -> bool:
        """Installs (x, y) as incumbent when it beats U. Callers guarantee bilevel feasibility."""
        if value >= self.upper_bound - 1e-9:
            return False
        self.upper_bound = float(value)
        self.incumbent = (np.array(x, dtype=float), np.array(y, dtype=float))
        self.events.record(EventKind.IncumbentUpdated, None if node is None else node.id, value=value, source=source)
        logger.info("new incumbent %g from %s", value, source)
        return True

    ################################
    # Second level and best bounds #
    ################################
    def _second_level_milp(self, gamma):
        """Solves the follower MILP for x_L = gamma; returns (phi, y_hat), phi = +inf if infeasible."""
        inst = self.instance
        beta = inst.A2[:, self.linking] @ np.asarray(gamma, dtype=float) if inst.m2 else np.zeros(0)
        model = MilpModel(inst.d2, inst.G2, beta, inst.lb_y, inst.ub_y, np.arange(inst.n2) < inst.r2)
        result = solve_milp(model, node_limit=self.params.milp_node_limit)
        if result.status == MilpStatus.Limit:
            raise SubsolverLimitException("second-level MILP stopped on a limit")
        if result.status != MilpStatus.Optimal:
            return np.inf, None
        return result.objective, result.x

    def solve_second_level(self, gamma, pool:LinkingPool = None):
        """Returns what is known about the second level at x_L = gamma, solving it if needed.

        Parameters:
            gamma(array): values of the linking columns
            pool(LinkingPool): where results are kept (default the shared pool)

        Returns:
            PoolEntry: tagged SecondLevelIsInfeasible, or carrying y_hat and phi.

        Raises:
            SubsolverLimitException: if the MILP stops on its node limit.
        """
        pool = self.pool if pool is None else pool
        entry = pool.get(gamma)
        if entry is not None:
            self.statistics.pool_hits += 1
            self.events.record(EventKind.PoolHit, gamma=pool.key(gamma), tag=entry.tag)
            return entry
        phi, y_hat = self._second_level_milp(gamma)
        key = pool.key(gamma)
        self.statistics.sl_milp_solves += 1
        self.statistics.sl_by_gamma[key] += 1
        if y_hat is None:
            entry = pool.record_infeasible(key)
        else:
            entry = pool.record_feasible(key, y_hat, phi)
        self.events.record(EventKind.SecondLevelSolved, gamma=key, feasible=y_hat is not None, phi=phi)
        return entry

    def solve_best_ub(self, gamma, pool:LinkingPool = None):
        """Finds the best bilevel feasible point with x_L = gamma.

        Solves min c x + d1 y over the relaxation rows with x_L fixed to gamma
        and d2 y <= phi(A2 x), then updates the pool and the incumbent.

        Parameters:
            gamma(array): values of the linking columns
            pool(LinkingPool): where results are kept (default the shared pool)

        Returns:
            PoolEntry: tagged UBIsSolved; ub_value is +inf when no point exists.

        Raises:
            InvalidParameterException: if the second level is infeasible at gamma.
            SubsolverLimitException: if the MILP stops on its node limit.
        """
        pool = self.pool if pool is None else pool
        entry = self.solve_second_level(gamma, pool)
        if entry.tag == LinkingTag.UBIsSolved:
            return entry
        if entry.tag == LinkingTag.SecondLevelIsInfeasible:
            raise InvalidParameterException("No bilevel point when the second level is infeasible.")
        inst = self.instance
        key = pool.key(gamma)
        row = np.concatenate([np.zeros(inst.n1), -inst.d2])
        matrix = np.vstack([self._matrix, row])
        rhs = np.concatenate([self._rhs, [-entry.phi]])
        lower, upper = self._lower.copy(), self._upper.copy()
        gamma_values = np.array(key, dtype=float)
        lower[self.linking] = np.maximum(lower[self.linking], gamma_values)
        upper[self.linking] = np.minimum(upper[self.linking], gamma_values)
        point, value = None, np.inf
        if np.all(lower <= upper):
            result = self._milp(self._objective, matrix, rhs, lower, upper)
            if result.status == MilpStatus.Limit:
                raise SubsolverLimitException("best-bound MILP stopped on a limit")
            if result.status == MilpStatus.Optimal:
                point, value = result.x, result.objective
        self.statistics.ub_solves += 1
        self.statistics.ub_by_gamma[key] += 1
        entry = pool.record_best_ub(key, point, value)
        self.events.record(EventKind.BestUBSolved, gamma=key, value=value)
        if point is not None:
            x, y = self._split(point)
            self._update_incumbent(x, y, self.instance.value(x, y), "best bound")
        return entry

    def evaluate_xi(self, x, pool:LinkingPool = None):
        """Leader-best follower reaction value Xi(x) = min d1 y over optimal reactions meeting the first-level rows.

        Returns:
            tuple: (value, y), (+inf, None) when no such y exists.
        """
        inst = self.instance
        x = np.asarray(x, dtype=float)
        entry = self.solve_second_level(x[self.linking], pool)
        if entry.tag == LinkingTag.SecondLevelIsInfeasible:
            return np.inf, None
        matrix = np.vstack([inst.G1, inst.G2, -inst.d2.reshape(1, -1)])
        rhs = np.concatenate([inst.b1 - inst.A1 @ x, inst.A2 @ x, [-entry.phi]])
        model = MilpModel(inst.d1, matrix, rhs, inst.lb_y, inst.ub_y, np.arange(inst.n2) < inst.r2)
        result = solve_milp(model, node_limit=self.params.milp_node_limit)
        if result.status == MilpStatus.Limit:
            raise SubsolverLimitException("reaction MILP stopped on a limit")
        if result.status != MilpStatus.Optimal:
            return np.inf, None
        return result.objective, result.x

    def _exact_reaction(self, x, y, pool:LinkingPool):
        """y itself for a pure-integer follower, else the leader-best reaction at x,
        which meets d2 y <= phi without tolerance (None if none is found)."""
        if self.instance.r2 == self.instance.n2:
            return y
        _, reaction = self.evaluate_xi(x, pool)
        return reaction

    def relaxation_milp(self, objective, rows=None, rhs=None):
        """Solves a MILP over the relaxation rows with original bounds and
        integrality, plus optional extra >= rows. Used by the heuristics.

        Returns:
            MilpSolution: the subsolver result.
        """
        matrix, b = self._matrix, self._rhs
        if rows is not None:
            matrix = np.vstack([matrix, np.atleast_2d(rows)])
            b = np.concatenate([b, np.atleast_1d(rhs)])
        return self._milp(objective, matrix, b, self._lower, self._upper)

    def is_bilevel_feasible(self, x, y, pool:LinkingPool = None) -> bool:
        """Full check of a point: rows, integrality and follower optimality."""
        inst = self.instance
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        point = np.concatenate([x, y])
        if np.any(point < self._lower - 1e-6) or np.any(point > self._upper + 1e-6):
            return False
        if inst.m2 and np.any(inst.G2 @ y < inst.A2 @ x - 1e-6):
            return False
        if not self._first_level_ok(x, y):
            return False
        if np.any(np.abs(x[:inst.r1] - np.round(x[:inst.r1])) > INTEGRALITY_TOLERANCE):
            return False
        entry = self.solve_second_level(np.round(x[self.linking]), pool)
        if entry.tag == LinkingTag.SecondLevelIsInfeasible:
            return False
        return self.check_feasibility(x, y, entry.phi) == FeasibilityStatus.BilevelFeasible

    #########################
    # Checks and predicates #
    #########################
    def check_feasibility(self, x, y, phi:float) -> FeasibilityStatus:
        """Checks bilevel feasibility of a relaxation point, cheapest test first.

        Parameters:
            x(ndarray), y(ndarray): the point, assumed to satisfy the relaxation rows
            phi(float): follower value phi(A2 x)

        Returns:
            FeasibilityStatus: IntegralityViolated if x or y breaks integrality,
            OptimalityViolated if d2 y exceeds phi, BilevelFeasible otherwise.
        """
        inst = self.instance
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if np.any(np.abs(x[:inst.r1] - np.round(x[:inst.r1])) > INTEGRALITY_TOLERANCE):
            return FeasibilityStatus.IntegralityViolated
        if np.any(np.abs(y[:inst.r2] - np.round(y[:inst.r2])) > INTEGRALITY_TOLERANCE):
            return FeasibilityStatus.IntegralityViolated
        if not np.isfinite(phi) or inst.d2 @ y > phi + 1e-6 * max(1.0, abs(phi)):
            return FeasibilityStatus.OptimalityViolated
        return FeasibilityStatus.BilevelFeasible

    def should_prune(self, node:Node, pool:LinkingPool = None):
        """Tells if a node can be fathomed from its bound and the pool.

        Returns:
            tuple: (True, PruneReason) or (False, None).
        """
        pool = self._active_pool(node) if pool is None else pool
        if node.bound > self.upper_bound - self.epsilon + OPTIMALITY_TOLERANCE:
            return True, PruneReason.Bound
        links = self.linking
        if np.all(node.lower[links] == node.upper[links]):
            tag = pool.tag(node.lower[links])
            if tag == LinkingTag.SecondLevelIsInfeasible:
                return True, PruneReason.SecondLevelInfeasible
            if tag == LinkingTag.UBIsSolved:
                return True, PruneReason.BestUBSolved
        return False, None

    def _prune(self, node:Node, reason:PruneReason):
        self.events.record(EventKind.NodePruned, node.id, reason=reason)
        logger.debug("node %d pruned: %s", node.id, reason.name)
        return NodeOutcome.Pruned, []

    ##########
    # Search #
    ##########
    def solve(self) -> BilevelResult:
        """Runs the branch and cut.

        Returns:
            BilevelResult: status, incumbent, bounds and statistics.

        Raises:
            UnboundedException: if the root relaxation is unbounded.
            SubsolverLimitException: if a subsolver stops on a limit.
        """
        self._start = time.perf_counter()
        root = Node(next(self._node_ids), self._lower, self._upper)
        self._queue.push(root)
        status = None
        while self._queue:
            if self.params.node_limit != None and self.statistics.nodes >= self.params.node_limit:
                status = BilevelStatus.NodeLimit
                self.events.record(EventKind.LimitReached, limit="nodes")
                break
            node = self._queue.pop()
            if node.bound > self.upper_bound - self.epsilon + OPTIMALITY_TOLERANCE:
                self._prune(node, PruneReason.Bound)
                continue
            outcome, children = self.process_node(node)
            if outcome == NodeOutcome.Interrupted:
                self._queue.push(node)
                status = BilevelStatus.TimeLimit
                self.events.record(EventKind.LimitReached, node.id, limit="time")
                break
            for child in children:
                self._queue.push(child)
            self.lower_bound = self._global_lower()
        if status is None:
            status = BilevelStatus.Optimal if self.incumbent is not None else BilevelStatus.Infeasible
            self.lower_bound = self.upper_bound
        else:
            self.lower_bound = self._global_lower()
        self._verify_incumbent()
        self.statistics.wall_time = self._elapsed()
        logger.info("%s: %s U=%g L=%g after %d nodes", self.instance.name or "instance", status.name,
                    self.upper_bound, self.lower_bound, self.statistics.nodes)
        x, y = self.incumbent if self.incumbent is not None else (None, None)
        return BilevelResult(status, x, y, self.upper_bound, self.lower_bound,
                             self.statistics.as_dict(), self.instance.name)

    def _verify_incumbent(self) -> None:
        if self.incumbent is None:
            return
        x, y = self.incumbent
        phi, _ = self._second_level_milp(np.round(x[self.linking]))
        if self.check_feasibility(x, y, phi) != FeasibilityStatus.BilevelFeasible:
            warnings.warn("incumbent failed re-verification", VerificationWarning)

    def process_node(self, node:Node):
        """Processes one node until it is pruned, branched or interrupted.

        The relaxation is solved repeatedly; each round may fathom the node,
        consult or fill the linking pool, update the incumbent, add a cut
        and loop, or branch.

        Parameters:
            node(Node): an open node

        Returns:
            tuple: (NodeOutcome, list of child nodes)
        """
        params = self.params
        inst = self.instance
        self.statistics.nodes += 1
        self.events.record(EventKind.NodeOpened, node.id, parent=node.parent, depth=node.depth)
        pool = self._active_pool(node)
        links = self.linking
        linking_mode = params.branch_strategy == BranchStrategy.Linking
        fractional_mode = params.branch_strategy == BranchStrategy.Fractional
        first = True
        heuristics_due = self._heuristics_due()
        rounds = 0
        while True:
            matrix, rhs = self._rows(node)
            solution = solve_lp(LpModel(self._objective, matrix, rhs, node.lower, node.upper), node.basis)
            self.statistics.lp_iterations += solution.iterations
            if solution.status == LpStatus.Unbounded:
                raise UnboundedException("unbounded relaxation at node {:d}".format(node.id))
            if solution.status == LpStatus.Infeasible:
                return self._prune(node, PruneReason.Infeasible)
            if solution.basis is not None:
                node.basis = solution.basis
            node.bound = max(node.bound, solution.objective)
            if first and node.branching is not None:
                column, direction, distance, parent_bound = node.branching
                branching.update_pseudocosts(self.pseudocosts, column, direction, distance,
                                             parent_bound, solution.objective)
            first = False
            self.events.record(EventKind.NodeBound, node.id, lower=node.lower.copy(), upper=node.upper.copy(),
                               bound=node.bound, global_lower=self._global_lower(node), upper_bound=self.upper_bound)
            if self._time_exceeded():
                return NodeOutcome.Interrupted, []
            prune, reason = self.should_prune(node, pool)
            if prune:
                return self._prune(node, reason)
            if heuristics_due:
                heuristics_due = False
                self._run_heuristics(node, pool)
                prune, reason = self.should_prune(node, pool)
                if prune:
                    return self._prune(node, reason)

            point = solution.x
            frac = np.abs(point - np.round(point)) > INTEGRALITY_TOLERANCE
            x_int = not frac[:inst.r1].any()
            y_int = not frac[inst.n1:inst.n1 + inst.r2].any()
            xy_int = x_int and y_int
            l_int = not frac[links].any()
            fixed = bool(np.all(node.lower[links] == node.upper[links]))
            gamma = LinkingPool.key(point[links]) if l_int else None
            entry = pool.get(gamma) if l_int else None
            x, y = self._split(point)

            # second level
            if l_int and entry is None and (
                    (linking_mode and xy_int and fixed) or (fractional_mode and xy_int)
                    or (params.solve_second_level_when_xy_vars_int and xy_int)
                    or (params.solve_second_level_when_x_vars_int and x_int)
                    or params.solve_second_level_when_l_vars_int
                    or (params.solve_second_level_when_l_vars_fixed and fixed)):
                entry = self.solve_second_level(gamma, pool)
                if entry.tag == LinkingTag.SecondLevelIsInfeasible and fixed:
                    return self._prune(node, PruneReason.SecondLevelInfeasible)

            # feasibility and bounds
            if entry is not None and entry.tag != LinkingTag.SecondLevelIsInfeasible:
                if xy_int and self.check_feasibility(x, y, entry.phi) == FeasibilityStatus.BilevelFeasible:
                    reaction = self._exact_reaction(x, y, pool)
                    if reaction is not None:
                        self._update_incumbent(x, reaction, inst.value(x, reaction), "relaxation", node)
                        return self._prune(node, PruneReason.BilevelFeasible)
                if x_int:
                    self._last_reaction = (x, entry.y_hat)
                if entry.tag != LinkingTag.UBIsSolved and (
                        (linking_mode and xy_int and fixed)
                        or (params.compute_best_ub_when_x_vars_int and x_int)
                        or (params.compute_best_ub_when_l_vars_fixed and fixed)
                        or params.compute_best_ub_when_l_vars_int):
                    entry = self.solve_best_ub(gamma, pool)
                    if fixed:
                        return self._prune(node, PruneReason.BestUBSolved)
                elif x_int and self._first_level_ok(x, entry.y_hat):
                    self._update_incumbent(x, entry.y_hat, inst.value(x, entry.y_hat), "reaction", node)
                prune, reason = self.should_prune(node, pool)
                if prune:
                    return self._prune(node, reason)

            # removal: a fractional-mode integral point must be cut
            if fractional_mode and xy_int:
                if rounds >= params.max_cut_rounds:
                    return self._fallback(node, point, pool)
                cut = self._generate_cut(node, solution, matrix, rhs, gamma, xy_int, l_int, pool, True)
                if cut is None:
                    return self._fallback(node, point, pool)
                if not np.any(cut.coef):
                    return self._prune(node, PruneReason.BestUBSolved)
                self._add_cut(node, cut, point)
                rounds += 1
                continue
            if not (entry is None and xy_int) and rounds < params.max_cut_rounds:
                cut = self._generate_cut(node, solution, matrix, rhs, gamma, xy_int, l_int, pool, False)
                if cut is not None:
                    if not np.any(cut.coef):
                        return self._prune(node, PruneReason.BestUBSolved)
                    self._add_cut(node, cut, point)
                    rounds += 1
                    continue
            if linking_mode and fixed and l_int and pool.get(gamma) is None:
                # the fiber is settled on this path before splitting other columns
                self.solve_second_level(gamma, pool)
                continue
            candidates = branching.candidates(point, node.lower, node.upper, self.integer, links,
                                              params.branch_strategy)
            if not candidates:
                return self._fallback(node, point, pool)
            return self._branch(node, candidates, solution.objective, matrix, rhs)

    def _cut_families(self) -> list:
        strategy = self.params.cut_strategy
        if strategy == CutStrategy.Disabled:
            return []
        if strategy != CutStrategy.Auto:
            return [CutClass(int(strategy))]
        props = self.properties
        families = []
        if props.pure_integer and props.integer_data:
            families.append(CutClass.IntegerNoGood)
        if props.all_linking_binary and len(self.linking):
            families.append(CutClass.GeneralizedNoGood)
        if len(self.linking):
            families.append(CutClass.HypercubeIC)
        return families

    def _settle(self, gamma, pool:LinkingPool):
        """Makes gamma's fiber known: second level infeasible or best bound solved."""
        entry = self.solve_second_level(gamma, pool)
        if entry.tag == LinkingTag.SecondLevelIsFeasible:
            entry = self.solve_best_ub(gamma, pool)
        return entry

    def _generate_cut(self, node:Node, solution, matrix, rhs, gamma, xy_int:bool, l_int:bool,
                      pool:LinkingPool, forced:bool):
        """First violated, new cut among the allowed families (None if there is none)."""
        point = solution.x
        entry = pool.get(gamma) if l_int else None
        for family in self._cut_families():
            cut = None
            if family == CutClass.IntegerNoGood:
                if xy_int and entry is not None:
                    cut = cuts.integer_no_good(point, matrix, rhs, node.lower, node.upper, self.properties,
                                               node.id, self.upper_bound)
            elif l_int:
                if family == CutClass.GeneralizedNoGood and not self.properties.all_linking_binary:
                    continue
                if forced and (entry is None or entry.tag == LinkingTag.SecondLevelIsFeasible):
                    entry = self._settle(gamma, pool)
                if entry is None or entry.tag == LinkingTag.SecondLevelIsFeasible:
                    continue
                if family == CutClass.GeneralizedNoGood:
                    cut = cuts.generalized_no_good(gamma, self.linking, self.instance.num_columns,
                                                   node.id, self.upper_bound)
                else:
                    cut = cuts.hypercube_intersection(point, matrix, rhs, node.lower, node.upper, solution.basis,
                                                      self.linking, node.id, self.upper_bound)
            if cut is None or cut.violation(point) < cuts.MIN_VIOLATION:
                continue
            if any(self.cuts[i].same_as(cut) for i in node.cuts):
                continue
            return cut
        return None

    def _add_cut(self, node:Node, cut, point) -> None:
        self.cuts.append(cut)
        cut_id = len(self.cuts) - 1
        node.cuts = node.cuts + (cut_id,)
        self.statistics.cuts[cut.cut_class] += 1
        self.events.record(EventKind.CutAdded, node.id, id=cut_id, cut_class=cut.cut_class,
                           violation=cut.violation(point))

    def _fallback(self, node:Node, point, pool:LinkingPool):
        """Ends a node no cut can handle: split an unfixed linking column, or
        settle the fixed fiber and prune."""
        links = self.linking
        unfixed = [int(j) for j in links if node.lower[j] < node.upper[j]]
        if unfixed:
            rounded = np.clip(np.round(point), node.lower, node.upper)
            candidates = [branching.Candidate(j, float(rounded[j]), False) for j in unfixed]
            return self._branch(node, candidates, node.bound, None, None)
        entry = self._settle(node.lower[links], pool)
        if entry.tag == LinkingTag.SecondLevelIsInfeasible:
            return self._prune(node, PruneReason.SecondLevelInfeasible)
        return self._prune(node, PruneReason.BestUBSolved)

    def _branch(self, node:Node, candidates:list, bound:float, matrix, rhs):
        if self.params.strong_branching and matrix is not None:
            def evaluate(column, lo, hi):
                lower, upper = node.lower.copy(), node.upper.copy()
                lower[column], upper[column] = lo, hi
                result = solve_lp(LpModel(self._objective, matrix, rhs, lower, upper), node.basis)
                self.statistics.lp_iterations += result.iterations
                return result.objective if result.status == LpStatus.Optimal else np.inf
            decision = branching.select_strong(candidates, bound, evaluate, node.lower, node.upper)
        else:
            decision = branching.select(candidates, self.pseudocosts, node.lower, node.upper)
        children = []
        for (lo, hi), direction, distance in ((decision.down, "down", decision.down_distance),
                                              (decision.up, "up", decision.up_distance)):
            children.append(node.child(next(self._node_ids), decision.column, lo, hi, direction, distance))
        self.events.record(EventKind.Branched, node.id, column=decision.column, down=decision.down,
                           up=decision.up, children=[child.id for child in children])
        return NodeOutcome.Branched, children

    ##############
    # Heuristics #
    ##############
    def _heuristics_due(self) -> bool:
        params = self.params
        if not (params.improving_objective_cut_heuristic or params.second_level_priority_heuristic
                or params.weighted_sums_heuristic):
            return False
        return (self.statistics.nodes - 1) % params.heuristic_frequency == 0

    def _run_heuristics(self, node:Node, pool:LinkingPool) -> None:
        params = self.params
        found = []
        if params.improving_objective_cut_heuristic and self._last_reaction is not None:
            x_bar, y_hat = self._last_reaction
            found.append(("improving objective cut", heuristics.improving_objective_cut_heur(self, x_bar, y_hat, pool)))
        if params.second_level_priority_heuristic:
            found.append(("second level priority",
                          heuristics.second_level_priority_heur(self, self.upper_bound, pool)))
        if params.weighted_sums_heuristic:
            for candidate in heuristics.weighted_sums_heur(self, params.weights, pool):
                found.append(("weighted sums", candidate))
        for name, candidate in found:
            if candidate is None:
                continue
            x, y, value = candidate
            self.events.record(EventKind.HeuristicFound, node.id, heuristic=name, value=value)
            if self._update_incumbent(x, y, value, name, node):
                self.statistics.heuristic_solutions += 1


def solve(instance:MiblpInstance, params:SolverParams = None, **overrides) -> BilevelResult:
    """Solves an instance.

    Parameters:
        instance(MiblpInstance): the problem
        params(SolverParams): parameters (default SolverParams())
        overrides: SolverParams fields replacing those of params

    Returns:
        BilevelResult: the outcome.
    """
    params = params if params is not None else SolverParams()
    if overrides:
        params = dataclasses.replace(params, **overrides)
    return BilevelSolver(instance, params).solve()
