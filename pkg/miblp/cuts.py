"""Valid inequalities removing bilevel-infeasible relaxation points.

Every cut is a row alpha.(x, y) >= beta. Cuts are valid for the bilevel
feasible points that improve on the incumbent value recorded with them,
inside the node region recorded with them (or everywhere when the region
is None).

   Classes:
       Cut

   Functions:
       integer_no_good
       generalized_no_good
       hypercube_intersection
       intersection_coefficients
       audit_cut
"""

__all__ = ["Cut", "BINDING_TOLERANCE", "MIN_VIOLATION", "integer_no_good", "generalized_no_good",
           "hypercube_intersection", "intersection_coefficients", "audit_cut"]

import logging
import numpy as np

from .enums import BasisStatus, CutClass
from .model import DATA_TOLERANCE, INTEGRALITY_TOLERANCE, InstanceProperties

BINDING_TOLERANCE = 1e-6
MIN_VIOLATION = 1e-6
# points within this relative margin of the incumbent do not count as improving
IMPROVING_TOLERANCE = 1e-7
DEGENERATE_STEP = 1e-9
COEFFICIENT_ZERO = 1e-12

logger = logging.getLogger(__name__)


class Cut():
    """A cut alpha.(x, y) >= beta.

    Attributes:
        coef(ndarray): alpha over (x, y)
        rhs(float): beta
        cut_class(CutClass): generating family
        node(int): node where the cut was generated (None if unknown)
        region(tuple): (lower, upper) bounds where the cut is valid, None if global
        incumbent(float): upper bound U when the cut was generated
    """

    def __init__(self, coef, rhs:float, cut_class:CutClass, node:int = None, region:tuple = None,
                 incumbent:float = np.inf):
        self.coef = np.array(coef, dtype=float).reshape(-1)
        self.rhs = float(rhs)
        self.cut_class = cut_class
        self.node = node
        self.region = None if region is None else (np.array(region[0], dtype=float),
                                                   np.array(region[1], dtype=float))
        self.incumbent = incumbent

    def violation(self, point) -> float:
        """How far point is from satisfying the cut (positive when violated)."""
        return self.rhs - float(self.coef @ np.asarray(point, dtype=float))

    def in_region(self, point) -> bool:
        if self.region is None:
            return True
        point = np.asarray(point, dtype=float)
        lower, upper = self.region
        return bool(np.all(point >= lower - INTEGRALITY_TOLERANCE) and np.all(point <= upper + INTEGRALITY_TOLERANCE))

    def same_as(self, other:'Cut') -> bool:
        return self.coef.shape == other.coef.shape and np.allclose(self.coef, other.coef) \
            and abs(self.rhs - other.rhs) <= 1e-9

    def __repr__(self):
        return "Cut({}, rhs={})".format(self.cut_class.name, self.rhs)


def _integral(array) -> bool:
    array = np.asarray(array, dtype=float)
    return bool(np.all(np.abs(array - np.round(array)) <= DATA_TOLERANCE))


def integer_no_good(point, matrix, rhs, lower, upper, properties:InstanceProperties = None,
                    node:int = None, incumbent:float = np.inf) -> Cut:
    """Cuts off one integral vertex by summing the rows binding at it.

    Every other integral point leaves at least one binding row slack by at
    least 1 when all data are integral, so the sum of binding rows with its
    right-hand side raised by 1 keeps them and cuts off the vertex.

    Parameters:
        point(ndarray): integral relaxation vertex over (x, y)
        matrix(ndarray), rhs(ndarray): >= rows of the node relaxation
        lower(ndarray), upper(ndarray): node bounds, counted as rows
        properties(InstanceProperties): when given, the instance must be
            pure integer with integral data
        node(int): node id stored in the cut
        incumbent(float): upper bound stored in the cut

    Returns:
        Cut: the no-good, or None when a precondition fails (fractional
        point, non-integral data or binding row, nothing binding).
    """
    if properties is not None and not (properties.pure_integer and properties.integer_data):
        return None
    point = np.asarray(point, dtype=float)
    if not np.all(np.abs(point - np.round(point)) <= INTEGRALITY_TOLERANCE):
        return None
    point = np.round(point)
    matrix = np.asarray(matrix, dtype=float).reshape(-1, point.size)
    rhs = np.asarray(rhs, dtype=float).reshape(-1)
    binding = np.abs(matrix @ point - rhs) <= BINDING_TOLERANCE
    if not (_integral(matrix[binding]) and _integral(rhs[binding])):
        return None
    coef = matrix[binding].sum(axis=0)
    beta = rhs[binding].sum()
    at_lower = np.abs(point - lower) <= BINDING_TOLERANCE
    at_upper = np.abs(upper - point) <= BINDING_TOLERANCE
    coef = coef + at_lower - at_upper
    beta += np.asarray(lower)[at_lower].sum() - np.asarray(upper)[at_upper].sum()
    if not binding.any() and not at_lower.any() and not at_upper.any():
        return None
    return Cut(coef, beta + 1.0, CutClass.IntegerNoGood, node, (lower, upper), incumbent)


def generalized_no_good(gamma, linking, num_columns:int, node:int = None, incumbent:float = np.inf) -> Cut:
    """Removes every point whose binary linking part equals gamma.

    The cut is sum_{gamma_i = 0} x_i + sum_{gamma_i = 1} (1 - x_i) >= 1.

    Parameters:
        gamma(array): binary values of the linking columns
        linking(array): linking column indices
        num_columns(int): number of columns over (x, y)

    Returns:
        Cut: the global cut, or None if gamma isn't binary.
    """
    gamma = np.asarray(gamma, dtype=float).reshape(-1)
    if np.any((np.abs(gamma) > DATA_TOLERANCE) & (np.abs(gamma - 1) > DATA_TOLERANCE)):
        return None
    ones = np.abs(gamma - 1) <= DATA_TOLERANCE
    coef = np.zeros(num_columns)
    coef[np.asarray(linking, dtype=int)] = np.where(ones, -1.0, 1.0)
    return Cut(coef, 1.0 - np.count_nonzero(ones), CutClass.GeneralizedNoGood, node, None, incumbent)


def intersection_coefficients(point_linking, rays_linking, gamma):
    """Inverse step lengths from a vertex along each ray to the box |x_L - gamma| <= 1.

    Parameters:
        point_linking(array): linking part of the vertex
        rays_linking(array): linking part of each ray, one ray per line
        gamma(array): box centre

    Returns:
        tuple: (weights, steps) where steps[j] is lambda_j (+inf when the
        ray never leaves the box) and weights[j] is 1 / lambda_j (0 then).
    """
    point = np.asarray(point_linking, dtype=float).reshape(-1)
    rays = np.asarray(rays_linking, dtype=float).reshape(-1, point.size)
    gamma = np.asarray(gamma, dtype=float).reshape(-1)
    up = gamma + 1.0 - point
    down = point - (gamma - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        steps = np.where(rays > COEFFICIENT_ZERO, up / rays,
                         np.where(rays < -COEFFICIENT_ZERO, down / -rays, np.inf))
    lam = steps.min(axis=1, initial=np.inf)
    return np.where(np.isfinite(lam), 1.0 / lam, 0.0), lam


def hypercube_intersection(point, matrix, rhs, lower, upper, basis, linking, node:int = None,
                           incumbent:float = np.inf) -> Cut:
    """Intersection cut from the optimal basis cone against the box around x_L.

    The box |x_L - gamma| < 1 holds no integral linking value but gamma, so
    once gamma's fiber is settled (second level infeasible or its best
    bilevel point known) the box interior holds no improving point and the
    cone can be cut where it leaves the box.

    Parameters:
        point(ndarray): relaxation vertex over (x, y) with integral x_L
        matrix(ndarray), rhs(ndarray): >= rows of the node relaxation
        lower(ndarray), upper(ndarray): node bounds
        basis(Basis): optimal basis of the node relaxation
        linking(array): linking column indices

    Returns:
        Cut: the cut, None when refused (fractional x_L, degenerate or
        singular basis, free nonbasic column). When no ray leaves the box
        the cut is 0 >= 1: the node holds no improving point.
    """
    point = np.asarray(point, dtype=float)
    linking = np.asarray(linking, dtype=int)
    if basis is None or linking.size == 0:
        return None
    gamma = np.round(point[linking])
    if np.any(np.abs(point[linking] - gamma) > INTEGRALITY_TOLERANCE):
        return None
    matrix = np.asarray(matrix, dtype=float).reshape(-1, point.size)
    m, n = matrix.shape
    status = np.concatenate([basis.columns, basis.rows])
    if status.size != n + m:
        return None
    basic = np.flatnonzero(status == BasisStatus.Basic)
    nonbasic = np.flatnonzero(status != BasisStatus.Basic)
    if basic.size != m or np.any(status[nonbasic] == BasisStatus.Free):
        return None
    full = np.hstack([matrix, -np.eye(m)])
    sign = np.where(status[nonbasic] == BasisStatus.AtUpper, -1.0, 1.0)
    try:
        moves = -np.linalg.solve(full[:, basic], full[:, nonbasic] * sign) if m else np.zeros((0, nonbasic.size))
    except np.linalg.LinAlgError:
        return None
    rays = np.zeros((nonbasic.size, n + m))
    rays[np.arange(nonbasic.size), nonbasic] = sign
    rays[:, basic] = moves.T
    weights, lam = intersection_coefficients(point[linking], rays[:, linking], gamma)
    if np.any(lam < DEGENERATE_STEP):
        return None
    # s_j is the distance of nonbasic j from its bound, as an affine function of (x, y)
    coef = np.zeros(n)
    constant = 0.0
    for w, j, s in zip(weights, nonbasic, sign):
        if w == 0:
            continue
        if j < n:
            coef[j] += w * s
            constant -= w * (lower[j] if s > 0 else -upper[j])
        else:
            coef += w * matrix[j - n]
            constant -= w * rhs[j - n]
    coef[np.abs(coef) < COEFFICIENT_ZERO] = 0.0
    return Cut(coef, 1.0 - constant, CutClass.HypercubeIC, node, (lower, upper), incumbent)


def audit_cut(cut:Cut, instance, incumbent:float = None, points:list = None, max_points:int = 10**6) -> list:
    """Lists improving bilevel-feasible points of the cut's region that violate it.

    Parameters:
        cut(Cut): the cut to check
        instance(MiblpInstance): its instance
        incumbent(float): improvement threshold (default the cut's own)
        points(list): (x, y) pairs to check (default all of the bilevel
            feasible set, enumerated by brute force)
        max_points(int): enumeration cap

    Returns:
        list: offending (x, y) pairs; empty for a valid cut.

    Raises:
        EnumerationLimitException: if enumeration exceeds the cap.
    """
    if points is None:
        from .oracle import enumerate_bilevel_feasible
        points = enumerate_bilevel_feasible(instance, max_points=max_points)
    threshold = cut.incumbent if incumbent is None else incumbent
    if np.isfinite(threshold):
        threshold -= IMPROVING_TOLERANCE * max(1.0, abs(threshold))
    offending = []
    for x, y in points:
        point = np.concatenate([x, y])
        if instance.value(x, y) >= threshold or not cut.in_region(point):
            continue
        if cut.violation(point) > MIN_VIOLATION:
            offending.append((x, y))
    return offending
