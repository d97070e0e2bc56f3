"""Enums for the bilevel branch-and-cut solver."""

__all__ = ["LpStatus", "MilpStatus", "BilevelStatus", "BasisStatus", "LinkingTag",
           "BranchStrategy", "SearchStrategy", "CutStrategy", "CutClass",
           "FeasibilityStatus", "PruneReason", "NodeOutcome", "EventKind", "GeneratorProfile"]

import enum

class LpStatus(enum.IntEnum):
    """Outcome of a linear program solve."""
    Optimal = 0x00
    Infeasible = 0x01
    Unbounded = 0x02

class MilpStatus(enum.IntEnum):
    """Outcome of a MILP subsolver run. These are:
        Optimal: proven optimum found
        Infeasible: no integral point satisfies the rows
        CutoffExceeded: the objective cutoff excludes every integral point
        Limit: node or time cap reached (best incumbent, if any, is kept)
    """
    Optimal = 0x00
    Infeasible = 0x01
    CutoffExceeded = 0x02
    Limit = 0x03

class BilevelStatus(enum.IntEnum):
    """Final status of a bilevel solve."""
    Optimal = 0x00
    Infeasible = 0x01
    TimeLimit = 0x02
    NodeLimit = 0x03

class BasisStatus(enum.IntEnum):
    """Status of a column or slack in a simplex basis. These are:
        Basic: variable is basic
        AtLower: nonbasic at its lower bound
        AtUpper: nonbasic at its upper bound
        Free: nonbasic free variable held at zero
    """
    Basic = 0x00
    AtLower = 0x01
    AtUpper = 0x02
    Free = 0x03

class LinkingTag(enum.IntEnum):
    """Status tags stored with a linking solution in the pool. These are:
        SecondLevelIsInfeasible: the second-level MILP has no solution
        SecondLevelIsFeasible: the second-level MILP was solved to optimality
        UBIsSolved: the best bilevel-feasible point for this linking part is known
    """
    SecondLevelIsInfeasible = 0x00
    SecondLevelIsFeasible = 0x01
    UBIsSolved = 0x02

class BranchStrategy(enum.IntEnum):
    """Which variables are branching candidates. These are:
        Linking: linking variables only (fractional first, then unfixed integral ones)
        Fractional: every integer variable with a fractional value
    """
    Linking = 0x00
    Fractional = 0x01

class SearchStrategy(enum.IntEnum):
    """Order in which open nodes are explored."""
    BestFirst = 0x00
    DepthFirst = 0x01

class CutStrategy(enum.IntEnum):
    """Cut families the engine may generate. Auto picks them from instance properties."""
    Auto = 0x00
    IntegerNoGood = 0x01
    GeneralizedNoGood = 0x02
    HypercubeIC = 0x03
    Disabled = 0x04

class CutClass(enum.IntEnum):
    """Class tag carried by every generated cut."""
    IntegerNoGood = 0x01
    GeneralizedNoGood = 0x02
    HypercubeIC = 0x03

class FeasibilityStatus(enum.IntEnum):
    """Result of a bilevel feasibility check. These are:
        BilevelFeasible: point is in the bilevel feasible region
        IntegralityViolated: an integer variable has a fractional value
        OptimalityViolated: y is not a rational reaction to x
    """
    BilevelFeasible = 0x00
    IntegralityViolated = 0x01
    OptimalityViolated = 0x02

class PruneReason(enum.IntEnum):
    """Why a node was fathomed. These are:
        Infeasible: the node relaxation is empty
        Bound: the node lower bound cannot improve on the incumbent
        SecondLevelInfeasible: linking part fixed and the follower has no reaction
        BestUBSolved: linking part fixed and its best bilevel point is already known
        BilevelFeasible: the relaxation optimum is bilevel feasible
    """
    Infeasible = 0x00
    Bound = 0x01
    SecondLevelInfeasible = 0x02
    BestUBSolved = 0x03
    BilevelFeasible = 0x04

class NodeOutcome(enum.IntEnum):
    """What processing a node produced."""
    Pruned = 0x00
    Branched = 0x01
    Interrupted = 0x02

class EventKind(enum.IntEnum):
    """Kinds of records in the engine event log."""
    NodeOpened = 0x00
    NodeBound = 0x01
    NodePruned = 0x02
    PoolHit = 0x03
    SecondLevelSolved = 0x04
    BestUBSolved = 0x05
    CutAdded = 0x06
    Branched = 0x07
    IncumbentUpdated = 0x08
    HeuristicFound = 0x09
    LimitReached = 0x0a

class GeneratorProfile(enum.IntEnum):
    """Random instance families. These are:
        IblpDen: pure integer, no first-level rows, 20 second-level rows
        MiblpXu: integer leader in [0, 10], mixed follower, 0.4*n1 rows per level
        Interdiction: knapsack interdiction with a cardinality budget
    """
    IblpDen = 0x00
    MiblpXu = 0x01
    Interdiction = 0x02
