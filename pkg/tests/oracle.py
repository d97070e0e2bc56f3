from .common import *

__all__ = ["TestEnumeration", "TestBruteForce"]

def continuous_follower():
    """Follower min y s.t. y >= x, y continuous; leader min -2x + y over x in {0, 1, 2}."""
    return MiblpInstance(c=[-2], d1=[1], d2=[1], A1=None, G1=None, b1=None, A2=[[1]], G2=[[1]],
                         ub_x=[2], ub_y=[10], r2=0, name="continuous")


class TestEnumeration(MiblpTestCase):
    def test_moore_bard(self):
        points = oracle.enumerate_bilevel_feasible(self.moore_bard)
        pairs = [(int(x[0]), int(y[0])) for x, y in points]
        self.assertEqual(pairs, [(1, 2), (2, 2), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (8, 1)])
        self.assertTrue(all(x[1] == 1 for x, _ in points))

    def test_box(self):
        points = oracle.enumerate_bilevel_feasible(self.moore_bard, lower=[3, 1, 0], upper=[5, 1, 10])
        self.assertEqual([int(x[0]) for x, _ in points], [3, 4, 5])
        # reactions outside the box are dropped, not replaced
        self.assertEqual(oracle.enumerate_bilevel_feasible(self.moore_bard, lower=[1, 1, 3], upper=[2, 1, 10]), [])

    def test_follower_value(self):
        self.assertEqual(oracle.follower_value(self.moore_bard, [2, 1]), 2)
        self.assertEqual(oracle.follower_value(self.moore_bard, [8, 1]), 1)
        self.assertEqual(oracle.follower_value(self.moore_bard, [0, 1]), np.inf)

    def test_cap(self):
        with self.assertRaises(EnumerationLimitException):
            oracle.enumerate_bilevel_feasible(self.moore_bard, max_points=5)

    def test_unbounded_integer(self):
        instance = MiblpInstance(c=[1], d1=[1], d2=[1], A1=None, G1=None, b1=None, A2=[[1]], G2=[[1]], ub_y=[3])
        with self.assertRaises(EnumerationLimitException):
            oracle.brute_force_solve(instance)

    def test_continuous_follower(self):
        instance = continuous_follower()
        self.assertAlmostEqual(oracle.follower_value(instance, [2]), 2)
        points = oracle.enumerate_bilevel_feasible(instance)
        self.assertEqual(len(points), 3)
        for x, y in points:
            self.assertAlmostEqual(y[0], x[0])


class TestBruteForce(MiblpTestCase):
    def test_moore_bard(self):
        result = oracle.brute_force_solve(self.moore_bard)
        self.assertEqual(result.status, BilevelStatus.Optimal)
        self.assertEqual(result.value, -22)
        self.assertArrayEqual(result.x, [2, 1])
        self.assertArrayEqual(result.y, [2])

    def test_restricted(self):
        self.assertEqual(oracle.brute_force_solve(self.moore_bard, lower=[3, 1, 0], upper=[10, 1, 10]).value, -18)
        self.assertEqual(oracle.brute_force_solve(self.moore_bard, linking_value=(6, 1)).value, -16)
        result = oracle.brute_force_solve(self.moore_bard, linking_value=(0, 1))
        self.assertEqual(result.status, BilevelStatus.Infeasible)
        self.assertEqual(result.value, np.inf)
        self.assertIsNone(result.x)

    def test_interdiction(self):
        for budget, expected in ((0, 3), (1, 2), (2, 0)):
            self.assertEqual(oracle.brute_force_solve(knapsack_interdiction(budget)).value, expected)

    def test_continuous_follower(self):
        result = oracle.brute_force_solve(continuous_follower())
        self.assertAlmostEqual(result.value, -2)
        self.assertArrayEqual(result.x, [2])
        self.do_test_against_oracle(continuous_follower(), SolverParams())
