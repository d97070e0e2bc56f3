"""Data model for mixed integer bilevel linear programs.

An instance is stored in the normalized form

    min  c x + d1 y
    s.t. A1 x + G1 y >= b1
         lb_x <= x <= ub_x,  x_1..x_r1 integer
         y in argmin { d2 y : G2 y >= A2 x, lb_y <= y <= ub_y, y_1..y_r2 integer }

with integer variables first at each level. Second-level rows carry no
constant right-hand side; a constant is expressed through a first-level
integer column fixed to 1 (see fileio.assemble).

   Classes:
       MiblpInstance
       InstanceProperties
       Diagnostic

   Functions:
       linking_set
       validate
       classify
"""

__all__ = ["INTEGRALITY_TOLERANCE", "DATA_TOLERANCE", "MiblpInstance", "InstanceProperties",
           "Diagnostic", "linking_set", "validate", "classify"]

import collections
import numpy as np

from .enums import LpStatus
from .exceptions import InvalidInstanceException
from .simplex import LpModel, solve_lp

INTEGRALITY_TOLERANCE = 1e-6
DATA_TOLERANCE = 1e-9

Diagnostic = collections.namedtuple("Diagnostic", ["kind", "message"])
Diagnostic.__doc__ = """A single validation finding. kind is one of
'dimension', 'linking', 'bounds' or 'unbounded'."""


def _matrix(value, rows:int, cols:int):
    value = np.array([] if value is None else value, dtype=float)
    if value.size == 0 and rows * cols == 0:
        return value.reshape(rows, cols)
    return np.atleast_2d(value)


class MiblpInstance():
    """Full data of a MIBLP. Arrays are stored read-only.

    Attributes:
        c(ndarray): first-level objective on x (n1)
        d1(ndarray): first-level objective on y (n2)
        d2(ndarray): second-level objective (n2)
        A1(ndarray), G1(ndarray), b1(ndarray): first-level rows A1 x + G1 y >= b1
        A2(ndarray), G2(ndarray): second-level rows G2 y >= A2 x
        lb_x(ndarray), ub_x(ndarray): bounds on x
        lb_y(ndarray), ub_y(ndarray): bounds on y
        r1(int): number of integer first-level variables (they come first)
        r2(int): number of integer second-level variables (they come first)
        name(str): instance name
        x_names(list), y_names(list): variable names used in reports
    """

    def __init__(self, c, d1, d2, A1, G1, b1, A2, G2, lb_x=None, ub_x=None, lb_y=None, ub_y=None,
                 r1:int = None, r2:int = None, name:str = "", x_names:list = None, y_names:list = None):
        """Class constructor.

        Parameters:
            c, d1, d2: objective vectors
            A1, G1, b1: first-level rows (may be empty)
            A2, G2: second-level rows (may be empty)
            lb_x, ub_x, lb_y, ub_y: bounds (default 0 and +inf)
            r1(int), r2(int): integer counts per level (default all integer)
            name(str): instance name (default "")
            x_names(list), y_names(list): variable names (default x0.., y0..)

        Raises:
            InvalidInstanceException: if dimensions are mutually inconsistent.
        """
        self.c = np.array(c, dtype=float).reshape(-1)
        self.d1 = np.array(d1, dtype=float).reshape(-1)
        self.d2 = np.array(d2, dtype=float).reshape(-1)
        n1, n2 = self.c.size, self.d1.size
        self.b1 = np.array(b1 if b1 is not None else [], dtype=float).reshape(-1)
        m1 = self.b1.size
        self.A1 = _matrix(A1, m1, n1)
        self.G1 = _matrix(G1, m1, n2)
        A2 = np.array([] if A2 is None else A2, dtype=float)
        G2 = np.array([] if G2 is None else G2, dtype=float)
        m2 = A2.shape[0] if A2.ndim == 2 else (G2.shape[0] if G2.ndim == 2 else 0)
        self.A2 = _matrix(A2, m2, n1)
        self.G2 = _matrix(G2, m2, n2)
        self.lb_x = np.zeros(n1) if lb_x is None else np.array(lb_x, dtype=float).reshape(-1)
        self.ub_x = np.full(n1, np.inf) if ub_x is None else np.array(ub_x, dtype=float).reshape(-1)
        self.lb_y = np.zeros(n2) if lb_y is None else np.array(lb_y, dtype=float).reshape(-1)
        self.ub_y = np.full(n2, np.inf) if ub_y is None else np.array(ub_y, dtype=float).reshape(-1)
        self.r1 = n1 if r1 is None else int(r1)
        self.r2 = n2 if r2 is None else int(r2)
        self.name = name
        self.x_names = list(x_names) if x_names else ["x{:d}".format(i) for i in range(n1)]
        self.y_names = list(y_names) if y_names else ["y{:d}".format(i) for i in range(n2)]
        problems = self._dimension_problems()
        if problems:
            raise InvalidInstanceException("; ".join(problems))
        for array in (self.c, self.d1, self.d2, self.A1, self.G1, self.b1, self.A2, self.G2,
                      self.lb_x, self.ub_x, self.lb_y, self.ub_y):
            array.setflags(write=False)

    def _dimension_problems(self) -> list:
        n1, n2 = self.n1, self.n2
        problems = []
        if self.d2.size != n2:
            problems.append("d2 has {:d} entries, expected {:d}".format(self.d2.size, n2))
        if self.A1.shape != (self.m1, n1) or self.G1.shape != (self.m1, n2):
            problems.append("first-level blocks are {}x{} and {}x{}, expected {:d} rows".format(
                *self.A1.shape, *self.G1.shape, self.m1))
        if self.A2.shape[1] != n1 or self.G2.shape[1] != n2 or self.A2.shape[0] != self.G2.shape[0]:
            problems.append("second-level blocks A2 {} and G2 {} are inconsistent".format(self.A2.shape, self.G2.shape))
        for name, array, size in (("lb_x", self.lb_x, n1), ("ub_x", self.ub_x, n1),
                                  ("lb_y", self.lb_y, n2), ("ub_y", self.ub_y, n2)):
            if array.size != size:
                problems.append("{:s} has {:d} entries, expected {:d}".format(name, array.size, size))
        if not 0 <= self.r1 <= n1 or not 0 <= self.r2 <= n2:
            problems.append("integer counts r1={:d}, r2={:d} out of range".format(self.r1, self.r2))
        if len(self.x_names) != n1 or len(self.y_names) != n2:
            problems.append("variable name lists don't match variable counts")
        return problems

    @property
    def n1(self) -> int:
        return self.c.size

    @property
    def n2(self) -> int:
        return self.d1.size

    @property
    def m1(self) -> int:
        return self.b1.size

    @property
    def m2(self) -> int:
        return self.G2.shape[0]

    @property
    def num_columns(self) -> int:
        return self.n1 + self.n2

    def integer_mask(self):
        """Returns a boolean mask over (x, y) marking integer columns."""
        mask = np.zeros(self.num_columns, dtype=bool)
        mask[:self.r1] = True
        mask[self.n1:self.n1 + self.r2] = True
        return mask

    def objective(self):
        """Returns the first-level objective over (x, y)."""
        return np.concatenate([self.c, self.d1])

    def relaxation(self):
        """Returns (matrix, rhs, lower, upper) of the high-point relaxation over (x, y).

        First-level rows come first, then second-level rows as -A2 x + G2 y >= 0.
        """
        matrix = np.vstack([np.hstack([self.A1, self.G1]), np.hstack([-self.A2, self.G2])])
        rhs = np.concatenate([self.b1, np.zeros(self.m2)])
        lower = np.concatenate([self.lb_x, self.lb_y])
        upper = np.concatenate([self.ub_x, self.ub_y])
        return matrix, rhs, lower, upper

    def split(self, point):
        """Splits a point over (x, y) into its x and y parts."""
        point = np.asarray(point, dtype=float)
        return point[:self.n1], point[self.n1:]

    def value(self, x, y) -> float:
        """First-level objective c x + d1 y."""
        return float(self.c @ np.asarray(x, dtype=float) + self.d1 @ np.asarray(y, dtype=float))

    def describe(self) -> str:
        """One-line summary of sizes."""
        return "{:s}: n1={:d} (r1={:d}) n2={:d} (r2={:d}) m1={:d} m2={:d}".format(
            self.name or "instance", self.n1, self.r1, self.n2, self.r2, self.m1, self.m2)

    def __eq__(self, other):
        if not isinstance(other, MiblpInstance):
            return NotImplemented
        pairs = ((self.c, other.c), (self.d1, other.d1), (self.d2, other.d2), (self.A1, other.A1),
                 (self.G1, other.G1), (self.b1, other.b1), (self.A2, other.A2), (self.G2, other.G2),
                 (self.lb_x, other.lb_x), (self.ub_x, other.ub_x), (self.lb_y, other.lb_y), (self.ub_y, other.ub_y))
        return self.r1 == other.r1 and self.r2 == other.r2 \
            and all(a.shape == b.shape and np.array_equal(a, b) for a, b in pairs)

    def __repr__(self):
        return "MiblpInstance({:s})".format(self.describe())


InstanceProperties = collections.namedtuple("InstanceProperties", [
    "linking_set", "all_linking_binary", "pure_integer", "integer_data",
    "integer_objective", "zero_sum", "is_interdiction"])
InstanceProperties.__doc__ = """Structural flags of an instance, derived by classify()."""


def linking_set(instance:MiblpInstance):
    """Returns the indices of first-level columns with a nonzero column in A2.

    Parameters:
        instance(MiblpInstance): the instance to analyze

    Returns:
        ndarray: sorted linking indices (0-based, possibly empty)
    """
    if instance.m2 == 0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(np.any(np.abs(instance.A2) > 0, axis=0))


def _is_integral(array) -> bool:
    array = np.asarray(array, dtype=float)
    return bool(np.all(np.abs(array - np.round(array)) <= DATA_TOLERANCE))


def validate(instance:MiblpInstance) -> list:
    """Checks the standing assumptions on an instance.

    Parameters:
        instance(MiblpInstance): the instance to check

    Returns:
        list: Diagnostic entries; empty when the instance is valid.

    Note:
        Boundedness of the relaxation is only checked when solving.
    """
    problems = instance._dimension_problems()
    if problems:
        return [Diagnostic("dimension", p) for p in problems]
    diagnostics = []
    for i in linking_set(instance):
        if i >= instance.r1:
            diagnostics.append(Diagnostic("linking", "linking variable {:s} not integer".format(instance.x_names[i])))
    for names, lb, ub, count in ((instance.x_names, instance.lb_x, instance.ub_x, instance.r1),
                                 (instance.y_names, instance.lb_y, instance.ub_y, instance.r2)):
        for i in range(count):
            if not (np.isfinite(lb[i]) and np.isfinite(ub[i])):
                diagnostics.append(Diagnostic("bounds", "integer variable {:s} has an infinite bound".format(names[i])))
    if instance.n2:
        # a ray r >= 0 with G2 r >= 0 and d2 r < 0 makes the follower unbounded;
        # columns with a finite upper bound can't move along it
        reach = np.where(np.isfinite(instance.ub_y), 0.0, 1.0)
        ray = solve_lp(LpModel(instance.d2, instance.G2, np.zeros(instance.m2), np.zeros(instance.n2), reach))
        if ray.status == LpStatus.Optimal and ray.objective < -1e-9:
            diagnostics.append(Diagnostic("unbounded", "second-level unbounded ray exists"))
    return diagnostics


def _constant_columns(instance:MiblpInstance):
    """First-level integer columns fixed to one with zero cost (encoded constants)."""
    return [i for i in range(instance.r1)
            if instance.lb_x[i] == 1 and instance.ub_x[i] == 1 and instance.c[i] == 0]


def _interdiction_structure(instance:MiblpInstance, zero_sum:bool) -> bool:
    if not zero_sum or instance.n2 == 0:
        return False
    constants = set(_constant_columns(instance))
    leader = [i for i in range(instance.n1) if i not in constants]
    if len(leader) != instance.n2 or any(i >= instance.r1 for i in leader):
        return False
    if np.any(instance.lb_x[leader] < 0) or np.any(instance.ub_x[leader] > 1) or np.any(instance.c[leader] != 0):
        return False
    G2 = instance.G2
    A2 = instance.A2[:, leader]
    for k, column in enumerate(leader):
        coupled = False
        for row in range(instance.m2):
            g = np.flatnonzero(G2[row])
            a = np.flatnonzero(A2[row])
            if list(g) == [k] and G2[row, k] < 0 and list(a) == [k] and A2[row, k] > 0:
                coupled = True
                break
        if not coupled:
            return False
    return True


def classify(instance:MiblpInstance) -> InstanceProperties:
    """Derives the structural flags used for cut selection and pruning offsets.

    Parameters:
        instance(MiblpInstance): a validated instance

    Returns:
        InstanceProperties: the flags, computed purely from instance data.
    """
    links = linking_set(instance)
    binary = bool(all(i < instance.r1 and instance.lb_x[i] >= 0 and instance.ub_x[i] <= 1 for i in links))
    pure = instance.r1 == instance.n1 and instance.r2 == instance.n2
    integer_data = all(_is_integral(a) for a in (instance.c, instance.d1, instance.d2, instance.A1, instance.G1,
                                              instance.b1, instance.A2, instance.G2))
    # objective values are integral on every integer point when costs sit on integer columns only
    objective = instance.objective()
    integer_objective = _is_integral(objective) and not np.any(objective[~instance.integer_mask()] != 0)
    zero_sum = bool(np.allclose(instance.d1, -instance.d2, rtol=0.0, atol=DATA_TOLERANCE))
    return InstanceProperties(
        linking_set=links,
        all_linking_binary=binary,
        pure_integer=pure,
        integer_data=integer_data,
        integer_objective=integer_objective,
        zero_sum=zero_sum,
        is_interdiction=_interdiction_structure(instance, zero_sum))
