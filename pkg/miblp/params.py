"""Solver parameters and the named solve strategies.

   Classes:
       SolverParams

   Constants:
       PRESETS: flag settings of the named strategies
"""

__all__ = ["SolverParams", "PRESETS", "DEFAULT_PRESET"]

import dataclasses

from .enums import BranchStrategy, CutStrategy, SearchStrategy
from .exceptions import InvalidParameterException
from .tree import default_event_log

_SL_FLAGS = ("solve_second_level_when_l_vars_fixed", "solve_second_level_when_l_vars_int",
             "solve_second_level_when_x_vars_int", "solve_second_level_when_xy_vars_int")
_UB_FLAGS = ("compute_best_ub_when_l_vars_fixed", "compute_best_ub_when_l_vars_int",
             "compute_best_ub_when_x_vars_int")


def _preset(second_level:tuple, best_ub:tuple) -> dict:
    flags = {name: False for name in _SL_FLAGS + _UB_FLAGS}
    for name in second_level:
        flags["solve_second_level_when_" + name] = True
    for name in best_ub:
        flags["compute_best_ub_when_" + name] = True
    return flags

PRESETS = {
    "whenLInt-LInt": _preset(("l_vars_int",), ("l_vars_int",)),
    "whenLInt-LFixed": _preset(("l_vars_int",), ("l_vars_fixed",)),
    "whenLFixed-LFixed": _preset(("l_vars_fixed",), ("l_vars_fixed",)),
    "whenXYInt-LFixed": _preset(("xy_vars_int",), ("l_vars_fixed",)),
    "whenXYIntOrLFixed-LFixed": _preset(("xy_vars_int", "l_vars_fixed"), ("l_vars_fixed",)),
}
DEFAULT_PRESET = "whenXYIntOrLFixed-LFixed"


@dataclasses.dataclass
class SolverParams():
    """Parameters of a bilevel solve. Defaults give the whenXYIntOrLFixed-LFixed
    strategy with the pool on, best-first search and no heuristics.

    Attributes:
        branch_strategy(BranchStrategy): Linking or Fractional; None picks
            Linking when r1 <= r2 and Fractional otherwise
        use_linking_pool(bool): share second-level and best-bound results across the tree
        solve_second_level_when_*(bool): extra triggers for the second-level MILP
        compute_best_ub_when_*(bool): triggers for the best-bound MILP of a linking solution
        cut_strategy(CutStrategy): cut families allowed
        improving_objective_cut_heuristic(bool), second_level_priority_heuristic(bool),
        weighted_sums_heuristic(bool): primal heuristics
        heuristic_frequency(int): heuristics run every that many nodes
        weights(tuple): weighted-sums schedule, each in [0, 1]
        search(SearchStrategy): node selection
        time_limit(float): seconds (None for none)
        node_limit(int): processed nodes (None for none)
        strong_branching(bool): score candidates with child relaxations
        max_cut_rounds(int): consecutive cuts per node before a forced split
        event_log(bool): record Event tuples
        milp_node_limit(int): node cap of subsolver MILPs (None for none)
        feas_check_solver(str): subsolver for feasibility checks, only "internal"
    """
    branch_strategy: BranchStrategy = None
    use_linking_pool: bool = True
    solve_second_level_when_l_vars_fixed: bool = True
    solve_second_level_when_l_vars_int: bool = False
    solve_second_level_when_x_vars_int: bool = False
    solve_second_level_when_xy_vars_int: bool = True
    compute_best_ub_when_l_vars_fixed: bool = True
    compute_best_ub_when_l_vars_int: bool = False
    compute_best_ub_when_x_vars_int: bool = False
    cut_strategy: CutStrategy = CutStrategy.Auto
    improving_objective_cut_heuristic: bool = False
    second_level_priority_heuristic: bool = False
    weighted_sums_heuristic: bool = False
    heuristic_frequency: int = 100
    weights: tuple = (0.9, 0.5, 0.1)
    search: SearchStrategy = SearchStrategy.BestFirst
    time_limit: float = None
    node_limit: int = None
    strong_branching: bool = False
    max_cut_rounds: int = 50
    event_log: bool = dataclasses.field(default_factory=lambda: default_event_log() > 0)
    milp_node_limit: int = None
    feas_check_solver: str = "internal"

    @classmethod
    def from_preset(cls, name:str, **overrides) -> 'SolverParams':
        """Builds parameters for a named strategy.

        Parameters:
            name(str): one of PRESETS, optionally prefixed with withPool or
                withoutPool and suffixed with :linking or :fractional
                (case-insensitive, e.g. withoutPoolWhenLInt-LInt:fractional)
            overrides: any other field

        Raises:
            InvalidParameterException: if the name is unknown.
        """
        flags = {}
        base, _, branch = name.partition(":")
        lowered = base.lower()
        for prefix, pool in (("withoutpool", False), ("withpool", True)):
            if lowered.startswith(prefix):
                lowered = lowered[len(prefix):]
                flags["use_linking_pool"] = pool
                break
        matches = [key for key in PRESETS if key.lower() == lowered]
        if not matches:
            raise InvalidParameterException("Unknown strategy {:s}.".format(name))
        flags.update(PRESETS[matches[0]])
        if branch:
            flags["branch_strategy"] = _branch_strategy(branch)
        flags.update(overrides)
        return cls(**flags)

    def check(self) -> None:
        """Checks that the settings are consistent.

        Raises:
            InvalidParameterException: on fractional branching without cuts,
                non-positive frequencies or limits, or weights outside [0, 1].
        """
        if self.branch_strategy == BranchStrategy.Fractional and self.cut_strategy == CutStrategy.Disabled:
            raise InvalidParameterException("Fractional branching needs a cut strategy.")
        if self.heuristic_frequency < 1:
            raise InvalidParameterException("Heuristic frequency must be positive.")
        if self.max_cut_rounds < 1:
            raise InvalidParameterException("Cut round limit must be positive.")
        if any(not 0.0 <= w <= 1.0 for w in self.weights):
            raise InvalidParameterException("Weights must lie in [0, 1].")
        if self.time_limit != None and self.time_limit < 0:
            raise InvalidParameterException("Time limit can't be negative.")
        if self.node_limit != None and self.node_limit < 0:
            raise InvalidParameterException("Node limit can't be negative.")
        if self.feas_check_solver != "internal":
            raise InvalidParameterException("Unsupported feasibility check solver {:s}.".format(self.feas_check_solver))

    def resolve(self, r1:int, r2:int) -> 'SolverParams':
        """Returns a checked copy with the branching strategy decided.

        Parameters:
            r1(int), r2(int): integer variable counts of the instance
        """
        branch = self.branch_strategy
        if branch == None:
            branch = BranchStrategy.Linking if r1 <= r2 else BranchStrategy.Fractional
        params = dataclasses.replace(self, branch_strategy=branch)
        params.check()
        return params


def _branch_strategy(name:str) -> BranchStrategy:
    for strategy in BranchStrategy:
        if strategy.name.lower() == name.strip().lower():
            return strategy
    raise InvalidParameterException("Unknown branch strategy {:s}.".format(name))
