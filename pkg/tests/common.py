import itertools
import os
import shutil
import tempfile
import unittest
import warnings
import numpy as np

import miblp
from miblp.enums import *
from miblp.exceptions import *
from miblp.model import MiblpInstance
from miblp.params import PRESETS, SolverParams
from miblp import oracle

# every strategy the engine must agree on
ALL_CONFIGURATIONS = [(preset, branch, pool) for preset in PRESETS
                      for branch in (BranchStrategy.Linking, BranchStrategy.Fractional)
                      for pool in (True, False)]


def moore_bard() -> MiblpInstance:
    """min -x - 10y, y in argmin {y : -25x + 20y <= 30, x + 2y <= 10, 2x - y <= 15, 2x + 10y >= 15},
    with the constants carried by a fixed first-level column. Optimum (2, 2), value -22."""
    return MiblpInstance(
        c=[-1, 0], d1=[-10], d2=[1],
        A1=np.zeros((0, 2)), G1=np.zeros((0, 1)), b1=[],
        A2=[[-25, -30], [1, -10], [2, -15], [-2, 15]], G2=[[-20], [-2], [1], [10]],
        lb_x=[0, 1], ub_x=[10, 1], lb_y=[0], ub_y=[10], r1=2, r2=1, name="moore-bard",
        x_names=["x", "__one__"], y_names=["y"])


MOORE_BARD_MPS = """NAME moore-bard
ROWS
 N OBJ
 L R0
 L R1
 L R2
 G R3
COLUMNS
    MARKER 'MARKER' 'INTORG'
    x OBJ -1 R0 -25
    x R1 1 R2 2
    x R3 2
    y OBJ -10 R0 20
    y R1 2 R2 -1
    y R3 10
    MARKER 'MARKER' 'INTEND'
RHS
    RHS R0 30 R1 10
    RHS R2 15 R3 15
BOUNDS
 UP BND x 10
 UP BND y 10
ENDATA
"""

MOORE_BARD_AUX = """# second level: y and all four rows
N 1
M 4
LC 1
LR 0
LR 1
LR 2
LR 3
LO 1
OS 1
"""


def knapsack_interdiction(budget:int = 1):
    """Follower max 3y1 + 2y2 s.t. y1 + y2 <= 1, binary; leader interdicts at most budget items."""
    from miblp.fileio import build_interdiction
    return build_interdiction([3, 2], [[-1, -1]], [-1], [1, 1], [[-1, -1]], [-budget], name="toy")


def random_instance(seed:int, continuous:bool = None) -> MiblpInstance:
    """A small seeded instance with integral data: n1, n2 <= 3, integer ranges <= 3.

    Half of the seeds get continuous second-level columns and half a fixed
    constant column feeding the second-level right-hand side.
    """
    rng = np.random.default_rng(seed)
    n1 = int(rng.integers(1, 3, endpoint=True))
    n2 = int(rng.integers(1, 3, endpoint=True))
    if continuous is None:
        continuous = seed % 2 == 1
    r2 = int(rng.integers(0, n2 - 1, endpoint=True)) if continuous else n2
    constant = rng.random() < 0.5
    m1 = int(rng.integers(0, 1, endpoint=True))
    m2 = int(rng.integers(1, 3, endpoint=True))
    ub_x = rng.integers(1, 3, size=n1, endpoint=True).astype(float)
    ub_y = rng.integers(1, 3, size=n2, endpoint=True).astype(float)
    A2 = rng.integers(-3, 3, size=(m2, n1), endpoint=True).astype(float)
    lb_x, c = np.zeros(n1), rng.integers(-5, 5, size=n1, endpoint=True).astype(float)
    if constant:
        A2 = np.hstack([A2, -rng.integers(0, 4, size=(m2, 1), endpoint=True)])
        ub_x, lb_x, c = np.append(ub_x, 1.0), np.append(lb_x, 1.0), np.append(c, 0.0)
    A1 = rng.integers(-3, 3, size=(m1, A2.shape[1]), endpoint=True).astype(float)
    G1 = rng.integers(-3, 3, size=(m1, n2), endpoint=True).astype(float)
    b1 = -rng.integers(0, 4, size=m1, endpoint=True).astype(float)
    return MiblpInstance(
        c=c, d1=rng.integers(-5, 5, size=n2, endpoint=True), d2=rng.integers(-5, 5, size=n2, endpoint=True),
        A1=A1, G1=G1, b1=b1, A2=A2, G2=rng.integers(-3, 3, size=(m2, n2), endpoint=True),
        lb_x=lb_x, ub_x=ub_x, lb_y=np.zeros(n2), ub_y=ub_y, r1=A2.shape[1], r2=r2,
        name="random-{:d}".format(seed))


def _shrink(upper, cap:int):
    """Lowers the largest bounds until the integer grid has at most cap points."""
    upper = upper.copy()
    while np.prod(upper + 1) > cap:
        upper[np.argmax(upper)] -= 1
    return upper


def larger_instance(seed:int, fractional:bool = False, max_columns:int = 6) -> MiblpInstance:
    """A seeded instance with n1, n2 in [2, max_columns] and integer ranges up to 5.

    Odd seeds get continuous second-level columns. Fractional instances draw
    every coefficient on a grid of 0.1; integral ones draw integers. Bounds
    are lowered so brute force stays cheap.
    """
    rng = np.random.default_rng(10**4 + seed)
    n1 = int(rng.integers(2, max_columns, endpoint=True))
    n2 = int(rng.integers(2, max_columns, endpoint=True))
    continuous = seed % 2 == 1
    r2 = int(rng.integers(1, n2 - 1, endpoint=True)) if continuous else n2
    m1 = int(rng.integers(0, 2, endpoint=True))
    m2 = int(rng.integers(1, 3, endpoint=True))

    def draw(low, high, size):
        if fractional:
            return np.round(rng.uniform(low, high, size=size), 1)
        return rng.integers(low, high, size=size, endpoint=True).astype(float)

    ub_x = _shrink(rng.integers(1, 5, size=n1, endpoint=True).astype(float), 64 if continuous else 243)
    ub_y = rng.integers(1, 5, size=n2, endpoint=True).astype(float)
    ub_y[:r2] = _shrink(ub_y[:r2], 16 if continuous else 243)
    return MiblpInstance(
        c=draw(-5, 5, n1), d1=draw(-5, 5, n2), d2=draw(-5, 5, n2),
        A1=draw(-3, 3, (m1, n1)), G1=draw(-3, 3, (m1, n2)), b1=-draw(0, 4, m1),
        A2=draw(-3, 3, (m2, n1)), G2=draw(-3, 3, (m2, n2)),
        lb_x=np.zeros(n1), ub_x=ub_x, lb_y=np.zeros(n2), ub_y=ub_y, r1=n1, r2=r2,
        name="larger-{:d}{:s}".format(seed, "-frac" if fractional else ""))


def continuous_reaction_instance() -> MiblpInstance:
    """Leader min -x - 3y over x in {0, 1, 2}; follower min y s.t. y >= x - 1, y continuous.

    The follower value is max(0, x - 1) and the optimum is x = 2, y = 1 with
    value -5 exactly; any slack on d2 y <= phi would let y drift above 1.
    """
    return MiblpInstance(
        c=[-1, 0], d1=[-3], d2=[1],
        A1=np.zeros((0, 2)), G1=np.zeros((0, 1)), b1=[],
        A2=[[1, -1]], G2=[[1]],
        lb_x=[0, 1], ub_x=[2, 1], lb_y=[0], ub_y=[10], r1=2, r2=0, name="continuous-reaction",
        x_names=["x", "__one__"], y_names=["y"])


def mixed_interdiction(seed:int, size:int = 3):
    """Knapsack interdiction whose middle item is continuous."""
    from miblp.fileio import build_interdiction
    rng = np.random.default_rng(seed)
    weights = rng.integers(1, 9, size=size, endpoint=True).astype(float)
    profits = rng.integers(1, 30, size=size, endpoint=True).astype(float)
    integer = [True] * size
    integer[size // 2] = False
    return build_interdiction(profits, -weights.reshape(1, -1), [-np.floor(weights.sum() / 2)], np.ones(size),
                              -np.ones((1, size)), [-(size // 2)], integer=integer,
                              name="mixed-interdiction-{:d}".format(seed))


def random_instances(count:int, start:int = 0) -> list:
    return [random_instance(seed) for seed in range(start, start + count)]


def params(preset:str = "whenXYIntOrLFixed-LFixed", branch:BranchStrategy = None, pool:bool = True,
           **overrides) -> SolverParams:
    return SolverParams.from_preset(preset, branch_strategy=branch, use_linking_pool=pool, **overrides)


class MiblpTestCase(unittest.TestCase):
    def setUp(self):
        self.moore_bard = moore_bard()

    def make_temp_dir(self) -> str:
        directory = tempfile.mkdtemp(prefix="miblp-")
        self.addCleanup(shutil.rmtree, directory, ignore_errors=True)
        return directory

    def write_files(self, directory:str, name:str, mps:str, aux:str) -> tuple:
        mps_path = os.path.join(directory, name + ".mps")
        aux_path = os.path.join(directory, name + ".aux")
        with open(mps_path, "w") as fh:
            fh.write(mps)
        with open(aux_path, "w") as fh:
            fh.write(aux)
        return mps_path, aux_path

    def assertArrayEqual(self, first, second) -> None:
        np.testing.assert_array_equal(np.asarray(first, dtype=float), np.asarray(second, dtype=float))

    def assertArrayAlmostEqual(self, first, second, tolerance:float = 1e-6) -> None:
        np.testing.assert_allclose(np.asarray(first, dtype=float), np.asarray(second, dtype=float),
                                   rtol=0.0, atol=tolerance)

    def do_test_against_oracle(self, instance:MiblpInstance, solver_params:SolverParams):
        expected = oracle.brute_force_solve(instance)
        solver = miblp.BilevelSolver(instance, solver_params)
        result = solver.solve()
        self.assertEqual(result.status, expected.status, instance.name)
        if expected.status == BilevelStatus.Optimal:
            self.assertAlmostEqual(result.objective, expected.value, delta=1e-6, msg=instance.name)
            self.assertAlmostEqual(instance.value(result.x, result.y), expected.value, delta=1e-6)
        return solver, result, expected
