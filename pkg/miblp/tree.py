"""Search-tree state of the bilevel engine: nodes, the open-node queue,
the linking solution pool, the event log and run statistics.

   Classes:
       Node
       NodeQueue
       PoolEntry
       LinkingPool
       Event
       EventLog
       Statistics
       BilevelResult

   Functions:
       default_event_log
"""

__all__ = ["Node", "NodeQueue", "PoolEntry", "LinkingPool", "Event", "EventLog",
           "Statistics", "BilevelResult", "default_event_log", "LOG_ENVIRONMENT_VARIABLE"]

import collections
import heapq
import itertools
import logging
import os
import numpy as np

from .enums import BilevelStatus, CutClass, EventKind, LinkingTag, SearchStrategy
from .exceptions import InvalidParameterException

LOG_ENVIRONMENT_VARIABLE = "BILEVEL_BNC_LOG"

logger = logging.getLogger(__name__)


def default_event_log() -> int:
    """Reads the event-log verbosity from the environment.

    Returns:
        int: 0 (off), 1 (events) or 2 (events and DEBUG logging). Unset or
        unparsable values read as 0.
    """
    try:
        level = int(os.environ.get(LOG_ENVIRONMENT_VARIABLE, "0"))
    except ValueError:
        return 0
    return min(max(level, 0), 2)


class Node():
    """A subproblem of the bilevel branch and cut.

    Attributes:
        id(int): node number, the root is 0
        parent(int): id of the parent node (None for the root)
        lower(ndarray), upper(ndarray): bounds over (x, y)
        cuts(tuple): ids of the cuts active at this node
        bound(float): lower bound L^t, starts at the parent's bound
        depth(int): distance to the root
        basis(Basis): warm start for the node relaxation
        memo(LinkingPool): second-level results known on the root-to-node path
        branching(tuple): (column, direction, distance, parent bound) of the
            split that created the node, consumed by pseudocost updates
    """

    def __init__(self, id:int, lower, upper, parent:int = None, cuts:tuple = (), bound:float = -np.inf,
                 depth:int = 0, basis = None, memo:'LinkingPool' = None, branching:tuple = None):
        self.id = id
        self.parent = parent
        self.lower = np.array(lower, dtype=float)
        self.upper = np.array(upper, dtype=float)
        self.cuts = tuple(cuts)
        self.bound = bound
        self.depth = depth
        self.basis = basis
        self.memo = memo if memo is not None else LinkingPool()
        self.branching = branching

    def child(self, id:int, column:int, lo:float, hi:float, direction:str, distance:float) -> 'Node':
        """Creates a child whose bounds on one column are [lo, hi].

        Raises:
            InvalidParameterException: if [lo, hi] isn't inside the parent's range.
        """
        if lo > hi or lo < self.lower[column] or hi > self.upper[column]:
            raise InvalidParameterException("Child range [{}, {}] outside parent range on column {:d}."
                                            .format(lo, hi, column))
        lower, upper = self.lower.copy(), self.upper.copy()
        lower[column], upper[column] = lo, hi
        return Node(id, lower, upper, parent=self.id, cuts=self.cuts, bound=self.bound,
                    depth=self.depth + 1, basis=self.basis, memo=self.memo.copy(),
                    branching=(column, direction, distance, self.bound))

    def __repr__(self):
        return "Node({:d}, depth={:d}, bound={})".format(self.id, self.depth, self.bound)


class NodeQueue():
    """Open nodes, popped best-first (lowest bound, oldest first) or
    depth-first (deepest, newest first).
    """

    def __init__(self, strategy:SearchStrategy = SearchStrategy.BestFirst):
        self.strategy = strategy
        self._heap = []
        self._counter = itertools.count()

    def push(self, node:Node) -> None:
        seq = next(self._counter)
        if self.strategy == SearchStrategy.DepthFirst:
            key = (-node.depth, -seq)
        else:
            key = (node.bound, seq)
        heapq.heappush(self._heap, (key, seq, node))

    def pop(self) -> Node:
        return heapq.heappop(self._heap)[2]

    def min_bound(self) -> float:
        """Smallest bound among open nodes (+inf when empty)."""
        return min((entry[2].bound for entry in self._heap), default=np.inf)

    def __len__(self):
        return len(self._heap)

    def __bool__(self):
        return len(self._heap) > 0


PoolEntry = collections.namedtuple("PoolEntry", ["tag", "y_hat", "phi", "ub_point", "ub_value"])
PoolEntry.__doc__ = """What is known about one linking solution. y_hat and phi
are set once the second level is solved, ub_point and ub_value once the best
bilevel-feasible point of the fiber is known (ub_point None and ub_value +inf
when the fiber holds none)."""


class LinkingPool():
    """Hash table from linking solutions to PoolEntry records.

    Keys are tuples of integers; vectors passed in are rounded first.
    Entries are immutable and replaced on update, so copies can share them.
    """

    def __init__(self, entries:dict = None):
        self._entries = dict(entries) if entries else {}

    @staticmethod
    def key(gamma) -> tuple:
        return tuple(int(v) for v in np.round(np.asarray(gamma, dtype=float)).reshape(-1))

    def get(self, gamma) -> PoolEntry:
        """Returns the entry of gamma (None if gamma was never recorded)."""
        return self._entries.get(self.key(gamma))

    def tag(self, gamma) -> LinkingTag:
        entry = self.get(gamma)
        return None if entry is None else entry.tag

    def record_infeasible(self, gamma) -> PoolEntry:
        key = self.key(gamma)
        if key in self._entries:
            raise InvalidParameterException("Linking solution {} already recorded.".format(key))
        entry = PoolEntry(LinkingTag.SecondLevelIsInfeasible, None, np.inf, None, np.inf)
        self._entries[key] = entry
        return entry

    def record_feasible(self, gamma, y_hat, phi:float) -> PoolEntry:
        key = self.key(gamma)
        if key in self._entries:
            raise InvalidParameterException("Linking solution {} already recorded.".format(key))
        entry = PoolEntry(LinkingTag.SecondLevelIsFeasible, np.array(y_hat, dtype=float), float(phi), None, np.inf)
        self._entries[key] = entry
        return entry

    def record_best_ub(self, gamma, point, value:float) -> PoolEntry:
        """Promotes a feasible entry to UBIsSolved.

        Raises:
            InvalidParameterException: if gamma isn't tagged SecondLevelIsFeasible.
        """
        key = self.key(gamma)
        entry = self._entries.get(key)
        if entry is None or entry.tag != LinkingTag.SecondLevelIsFeasible:
            raise InvalidParameterException("Best bound needs a feasible second level at {}.".format(key))
        entry = entry._replace(tag=LinkingTag.UBIsSolved,
                               ub_point=None if point is None else np.array(point, dtype=float),
                               ub_value=float(value))
        self._entries[key] = entry
        return entry

    def copy(self) -> 'LinkingPool':
        return LinkingPool(self._entries)

    def items(self):
        return self._entries.items()

    def __contains__(self, gamma):
        return self.key(gamma) in self._entries

    def __len__(self):
        return len(self._entries)


Event = collections.namedtuple("Event", ["kind", "node", "data"])
Event.__doc__ = """One record of the engine event log: an EventKind, the node id
(None outside node processing) and a dict of kind-specific data."""


class EventLog():
    """Append-only list of Event records, active only when enabled."""

    def __init__(self, enabled:bool = False):
        self.enabled = enabled
        self.events = []

    def record(self, kind:EventKind, node:int = None, **data) -> None:
        if not self.enabled:
            return
        self.events.append(Event(kind, node, data))
        logger.debug("%s node=%s %s", kind.name, node, data)

    def of_kind(self, kind:EventKind) -> list:
        return [event for event in self.events if event.kind == kind]

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


class Statistics():
    """Counters of a bilevel solve.

    Attributes:
        nodes(int): processed nodes
        sl_milp_solves(int): fresh second-level MILP solves
        ub_solves(int): fresh best-bound MILP solves
        cuts(Counter): added cuts per CutClass
        lp_iterations(int): simplex iterations of node relaxations
        pool_hits(int): linking solutions served from memory
        heuristic_solutions(int): incumbents installed by heuristics
        sl_by_gamma(Counter), ub_by_gamma(Counter): fresh solves per linking solution
        wall_time(float): seconds spent in solve
    """

    def __init__(self):
        self.nodes = 0
        self.sl_milp_solves = 0
        self.ub_solves = 0
        self.cuts = collections.Counter()
        self.lp_iterations = 0
        self.pool_hits = 0
        self.heuristic_solutions = 0
        self.sl_by_gamma = collections.Counter()
        self.ub_by_gamma = collections.Counter()
        self.wall_time = 0.0

    @property
    def cuts_added(self) -> int:
        return sum(self.cuts.values())

    def as_dict(self) -> dict:
        """Flat summary, the form written to solution files."""
        summary = {"nodes": self.nodes, "sl_milp_solves": self.sl_milp_solves, "ub_solves": self.ub_solves,
                   "cuts_added": self.cuts_added}
        for cut_class in CutClass:
            summary["cuts_" + cut_class.name] = self.cuts[cut_class]
        summary.update({"lp_iterations": self.lp_iterations, "pool_hits": self.pool_hits,
                        "heuristic_solutions": self.heuristic_solutions, "wall_time": self.wall_time})
        return summary


class BilevelResult():
    """Outcome of a bilevel solve.

    Attributes:
        status(BilevelStatus): Optimal, Infeasible, TimeLimit or NodeLimit
        x(ndarray), y(ndarray): incumbent (None when there is none)
        objective(float): upper bound U, the incumbent value (+inf if none)
        lower_bound(float): global lower bound L
        statistics(dict): flat counters, see Statistics.as_dict
        name(str): instance name
    """

    def __init__(self, status:BilevelStatus, x=None, y=None, objective:float = np.inf,
                 lower_bound:float = -np.inf, statistics:dict = None, name:str = ""):
        self.status = status
        self.x = None if x is None else np.array(x, dtype=float)
        self.y = None if y is None else np.array(y, dtype=float)
        self.objective = objective
        self.lower_bound = lower_bound
        self.statistics = dict(statistics) if statistics else {}
        self.name = name

    @property
    def gap(self) -> float:
        if not np.isfinite(self.objective) or not np.isfinite(self.lower_bound):
            return np.inf
        return self.objective - self.lower_bound

    def __repr__(self):
        return "BilevelResult({}, objective={}, lower_bound={})".format(
            self.status.name, self.objective, self.lower_bound)
