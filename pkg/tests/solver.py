from .common import *

from miblp.cuts import audit_cut
from miblp.generator import generate
from miblp.tree import LinkingPool, Node

__all__ = ["TestMooreBard", "TestSubproblems", "TestPredicates", "TestAgainstOracle", "TestProperties",
           "TestLimits", "TestEdgeCases"]

class TestMooreBard(MiblpTestCase):
    def test_all_configurations(self):
        for preset, branch, pool in ALL_CONFIGURATIONS:
            with self.subTest(preset=preset, branch=branch.name, pool=pool):
                result = miblp.BilevelSolver(self.moore_bard, params(preset, branch, pool)).solve()
                self.assertEqual(result.status, BilevelStatus.Optimal)
                self.assertEqual(result.objective, -22)
                self.assertEqual(result.lower_bound, -22)
                self.assertArrayEqual(result.x, [2, 1])
                self.assertArrayEqual(result.y, [2])

    def test_default_is_fractional(self):
        solver = miblp.BilevelSolver(self.moore_bard)
        self.assertEqual(solver.params.branch_strategy, BranchStrategy.Fractional)
        self.assertEqual(solver.epsilon, 1.0)
        self.assertArrayEqual(solver.linking, [0, 1])

    def test_solve_function(self):
        result = miblp.solve(self.moore_bard, node_limit=1000, search=SearchStrategy.DepthFirst)
        self.assertEqual(result.objective, -22)
        self.assertEqual(result.name, "moore-bard")
        for key in ("nodes", "sl_milp_solves", "ub_solves", "cuts_added", "lp_iterations", "wall_time"):
            self.assertIn(key, result.statistics)

    def test_variants(self):
        for overrides in ({"strong_branching": True}, {"search": SearchStrategy.DepthFirst},
                          {"cut_strategy": CutStrategy.HypercubeIC}, {"cut_strategy": CutStrategy.IntegerNoGood},
                          {"cut_strategy": CutStrategy.Disabled, "branch_strategy": BranchStrategy.Linking},
                          {"improving_objective_cut_heuristic": True, "second_level_priority_heuristic": True,
                           "weighted_sums_heuristic": True, "heuristic_frequency": 1}):
            with self.subTest(**{k: str(v) for k, v in overrides.items()}):
                self.assertEqual(miblp.solve(self.moore_bard, **overrides).objective, -22)


class TestSubproblems(MiblpTestCase):
    def setUp(self):
        super().setUp()
        self.solver = miblp.BilevelSolver(self.moore_bard)

    def test_second_level(self):
        entry = self.solver.solve_second_level([2, 1])
        self.assertEqual(entry.tag, LinkingTag.SecondLevelIsFeasible)
        self.assertEqual(entry.phi, 2)
        self.assertArrayEqual(entry.y_hat, [2])
        self.assertEqual(self.solver.statistics.sl_milp_solves, 1)
        # second call comes from the pool
        self.solver.solve_second_level([2, 1])
        self.assertEqual(self.solver.statistics.sl_milp_solves, 1)
        self.assertEqual(self.solver.statistics.pool_hits, 1)

    def test_second_level_infeasible(self):
        entry = self.solver.solve_second_level([0, 1])
        self.assertEqual(entry.tag, LinkingTag.SecondLevelIsInfeasible)
        self.assertEqual(self.solver.pool.tag([0, 1]), LinkingTag.SecondLevelIsInfeasible)

    def test_private_pool(self):
        pool = LinkingPool()
        self.solver.solve_second_level([2, 1], pool)
        self.assertIn([2, 1], pool)
        self.assertEqual(len(self.solver.pool), 0)

    def test_best_ub(self):
        entry = self.solver.solve_best_ub([2, 1])
        self.assertEqual(entry.tag, LinkingTag.UBIsSolved)
        self.assertEqual(entry.ub_value, -22)
        self.assertArrayEqual(entry.ub_point, [2, 1, 2])
        self.assertEqual(self.solver.upper_bound, -22)
        self.assertEqual(self.solver.statistics.ub_solves, 1)
        entry = self.solver.solve_best_ub([8, 1])
        self.assertEqual(entry.ub_value, -18)
        self.assertEqual(self.solver.upper_bound, -22)
        self.solver.solve_best_ub([8, 1])
        self.assertEqual(self.solver.statistics.ub_solves, 2)

    def test_best_ub_needs_feasible_second_level(self):
        with self.assertRaises(InvalidParameterException):
            self.solver.solve_best_ub([0, 1])

    def test_xi(self):
        value, y = self.solver.evaluate_xi([2, 1])
        self.assertEqual(value, -20)
        self.assertArrayEqual(y, [2])
        self.assertEqual(self.solver.evaluate_xi([0, 1]), (np.inf, None))

    def test_is_bilevel_feasible(self):
        self.assertTrue(self.solver.is_bilevel_feasible([2, 1], [2]))
        self.assertFalse(self.solver.is_bilevel_feasible([2, 1], [4]))
        self.assertFalse(self.solver.is_bilevel_feasible([2, 1], [3]))
        self.assertFalse(self.solver.is_bilevel_feasible([0, 1], [1]))
        for x, y in oracle.enumerate_bilevel_feasible(self.moore_bard):
            self.assertTrue(self.solver.is_bilevel_feasible(x, y))


class TestPredicates(MiblpTestCase):
    def setUp(self):
        super().setUp()
        self.solver = miblp.BilevelSolver(self.moore_bard)

    def test_check_feasibility(self):
        check = self.solver.check_feasibility
        self.assertEqual(check([2, 1], [2], 2), FeasibilityStatus.BilevelFeasible)
        self.assertEqual(check([2, 1], [4], 2), FeasibilityStatus.OptimalityViolated)
        self.assertEqual(check([1.5, 1], [2], 2), FeasibilityStatus.IntegralityViolated)
        self.assertEqual(check([2, 1], [2.5], 2), FeasibilityStatus.IntegralityViolated)
        self.assertEqual(check([2, 1], [2], np.inf), FeasibilityStatus.OptimalityViolated)

    def test_bound(self):
        self.solver.upper_bound = -22
        node = Node(0, [0, 0, 0], [10, 1, 10], bound=-22)
        self.assertEqual(self.solver.should_prune(node), (True, PruneReason.Bound))
        node.bound = -23
        self.assertEqual(self.solver.should_prune(node), (False, None))
        node.bound = -22.5
        # objective values are integral, so nothing below U can come from this node
        self.assertEqual(self.solver.should_prune(node), (True, PruneReason.Bound))

    def test_pool_tags(self):
        infeasible = Node(0, [0, 1, 0], [0, 1, 10])
        solved = Node(1, [2, 1, 0], [2, 1, 10])
        unfixed = Node(2, [0, 1, 0], [2, 1, 10])
        self.assertEqual(self.solver.should_prune(infeasible, self.solver.pool), (False, None))
        self.solver.solve_second_level([0, 1])
        self.solver.solve_best_ub([2, 1])
        pool = self.solver.pool
        self.assertEqual(self.solver.should_prune(infeasible, pool), (True, PruneReason.SecondLevelInfeasible))
        self.assertEqual(self.solver.should_prune(solved, pool), (True, PruneReason.BestUBSolved))
        self.assertEqual(self.solver.should_prune(unfixed, pool), (False, None))
        unfixed.bound = -22
        self.assertEqual(self.solver.should_prune(unfixed, pool), (True, PruneReason.Bound))


class TestAgainstOracle(MiblpTestCase):
    def test_random_instances(self):
        configurations = [("whenXYIntOrLFixed-LFixed", None, True),
                          ("whenLInt-LInt", BranchStrategy.Fractional, True),
                          ("whenLFixed-LFixed", BranchStrategy.Linking, False)]
        for instance in random_instances(60):
            for preset, branch, pool in configurations:
                with self.subTest(instance=instance.name, preset=preset):
                    self.do_test_against_oracle(instance, params(preset, branch, pool))

    def test_all_presets(self):
        for instance in random_instances(10, start=100):
            for preset, branch, pool in ALL_CONFIGURATIONS:
                with self.subTest(instance=instance.name, preset=preset, branch=branch.name, pool=pool):
                    self.do_test_against_oracle(instance, params(preset, branch, pool))

    def test_interdiction(self):
        for seed in range(20):
            instance = generate(GeneratorProfile.Interdiction, 3 + seed % 2, seed)
            with self.subTest(seed=seed):
                self.do_test_against_oracle(instance, SolverParams())

    def test_knapsack_interdiction(self):
        for budget in range(3):
            self.do_test_against_oracle(knapsack_interdiction(budget), SolverParams())

    def test_larger_instances(self):
        for fractional in (False, True):
            for seed in range(16):
                instance = larger_instance(seed, fractional)
                with self.subTest(instance=instance.name):
                    self.do_test_against_oracle(instance, SolverParams())

    def test_larger_instances_linking(self):
        for seed in range(8):
            instance = larger_instance(seed, seed % 4 >= 2)
            with self.subTest(instance=instance.name):
                self.do_test_against_oracle(instance, params("whenLFixed-LFixed", BranchStrategy.Linking, False))

    def test_continuous_reaction_is_exact(self):
        instance = continuous_reaction_instance()
        expected = oracle.brute_force_solve(instance)
        self.assertAlmostEqual(expected.value, -5, delta=1e-8)
        for preset, branch, pool in ALL_CONFIGURATIONS:
            with self.subTest(preset=preset, branch=branch.name, pool=pool):
                result = miblp.solve(instance, params(preset, branch, pool))
                self.assertEqual(result.status, BilevelStatus.Optimal)
                self.assertAlmostEqual(result.objective, -5, delta=1e-9)
                self.assertArrayAlmostEqual(result.x, [2, 1], 1e-9)
                self.assertLessEqual(result.y[0], 1 + 1e-9)
                self.assertAlmostEqual(result.y[0], 1, delta=1e-9)

    def test_mixed_interdiction(self):
        for seed in range(12):
            instance = mixed_interdiction(seed, 3 + seed % 2)
            with self.subTest(instance=instance.name):
                self.do_test_against_oracle(instance, SolverParams())

    def test_heuristics_keep_optimum(self):
        for instance in random_instances(20, start=200):
            with self.subTest(instance=instance.name):
                solver, result, expected = self.do_test_against_oracle(instance, params(
                    improving_objective_cut_heuristic=True, second_level_priority_heuristic=True,
                    weighted_sums_heuristic=True, heuristic_frequency=1, event_log=True))
                for event in solver.events.of_kind(EventKind.HeuristicFound):
                    self.assertGreaterEqual(event.data["value"], expected.value - 1e-6)


class TestProperties(MiblpTestCase):
    def solve_logged(self, instance, preset="whenXYIntOrLFixed-LFixed", branch=None, pool=True):
        solver = miblp.BilevelSolver(instance, params(preset, branch, pool, event_log=True))
        return solver, solver.solve()

    def test_cuts_valid(self):
        for instance in [self.moore_bard] + random_instances(40):
            points = oracle.enumerate_bilevel_feasible(instance)
            for branch in BranchStrategy:
                solver, _ = self.solve_logged(instance, branch=branch)
                for cut in solver.cuts:
                    self.assertEqual(audit_cut(cut, instance, points=points), [], (instance.name, cut))

    def test_pool_idempotence(self):
        for instance in [self.moore_bard] + random_instances(30):
            for preset in PRESETS:
                solver, _ = self.solve_logged(instance, preset, BranchStrategy.Fractional, True)
                self.assertLessEqual(max(solver.statistics.sl_by_gamma.values(), default=0), 1, instance.name)
                self.assertLessEqual(max(solver.statistics.ub_by_gamma.values(), default=0), 1, instance.name)
                self.assertEqual(solver.statistics.sl_milp_solves, sum(solver.statistics.sl_by_gamma.values()))

    def test_cuts_valid_mixed_follower(self):
        for seed in range(10):
            instance = mixed_interdiction(seed, 3 + seed % 2)
            points = oracle.enumerate_bilevel_feasible(instance)
            for branch in BranchStrategy:
                solver, _ = self.solve_logged(instance, branch=branch)
                for cut in solver.cuts:
                    self.assertEqual(audit_cut(cut, instance, points=points), [], (instance.name, cut))
                for event in solver.events.of_kind(EventKind.BestUBSolved):
                    expected = oracle.brute_force_solve(instance, linking_value=event.data["gamma"])
                    self.assertAlmostEqual(event.data["value"], expected.value, delta=1e-7,
                                           msg=(instance.name, event.data["gamma"]))

    def test_pool_saves_solves(self):
        instances = [larger_instance(seed, seed % 4 >= 2, max_columns=4) for seed in range(40)]
        reduced = 0
        for instance in instances:
            counts = {}
            for branch in BranchStrategy:
                for pool in (True, False):
                    solver, _ = self.solve_logged(instance, branch=branch, pool=pool)
                    counts[branch, pool] = (solver.statistics.sl_milp_solves, solver.statistics.ub_solves)
            with_pool, without_pool = counts[BranchStrategy.Fractional, True], counts[BranchStrategy.Fractional, False]
            self.assertLessEqual(with_pool[0], without_pool[0], instance.name)
            self.assertLessEqual(with_pool[1], without_pool[1], instance.name)
            if with_pool != without_pool:
                reduced += 1
            self.assertEqual(counts[BranchStrategy.Linking, True], counts[BranchStrategy.Linking, False], instance.name)
        self.assertGreaterEqual(reduced, len(instances) // 4)

    def test_bound_sandwich(self):
        for instance in [self.moore_bard] + random_instances(15):
            optimum = oracle.brute_force_solve(instance).value
            for branch in BranchStrategy:
                solver, result = self.solve_logged(instance, branch=branch)
                events = solver.events.of_kind(EventKind.NodeBound)
                self.assertTrue(events)
                for event in events:
                    self.assertLessEqual(event.data["global_lower"], optimum + 1e-6)
                    self.assertGreaterEqual(event.data["upper_bound"], optimum - 1e-6)

    def test_node_bounds(self):
        for instance in [self.moore_bard] + random_instances(10, start=300):
            solver, _ = self.solve_logged(instance, branch=BranchStrategy.Fractional)
            for event in solver.events.of_kind(EventKind.NodeBound):
                best = oracle.brute_force_solve(instance, lower=event.data["lower"], upper=event.data["upper"])
                # cuts may remove points that don't beat the incumbent
                if best.value < event.data["upper_bound"] - 1e-6:
                    self.assertLessEqual(event.data["bound"], best.value + 1e-6, (instance.name, event.node))

    def test_best_ub_matches_fiber_optimum(self):
        for instance in [self.moore_bard] + random_instances(30):
            solver, _ = self.solve_logged(instance)
            for event in solver.events.of_kind(EventKind.BestUBSolved):
                expected = oracle.brute_force_solve(instance, linking_value=event.data["gamma"])
                self.assertAlmostEqual(event.data["value"], expected.value, delta=1e-6,
                                       msg=(instance.name, event.data["gamma"]))

    def test_incumbents_bilevel_feasible(self):
        for instance in random_instances(20, start=400):
            solver, result = self.solve_logged(instance)
            values = [event.data["value"] for event in solver.events.of_kind(EventKind.IncumbentUpdated)]
            self.assertEqual(values, sorted(values, reverse=True))
            if result.x is not None:
                self.assertTrue(miblp.BilevelSolver(instance).is_bilevel_feasible(result.x, result.y))

    def test_prune_reasons_logged(self):
        solver, _ = self.solve_logged(self.moore_bard, branch=BranchStrategy.Linking)
        reasons = {event.data["reason"] for event in solver.events.of_kind(EventKind.NodePruned)}
        self.assertTrue(reasons)
        self.assertTrue(reasons <= set(PruneReason))
        opened = solver.events.of_kind(EventKind.NodeOpened)
        self.assertEqual(len(opened), solver.statistics.nodes)


class TestLimits(MiblpTestCase):
    def test_time_limit(self):
        result = miblp.solve(self.moore_bard, time_limit=0)
        self.assertEqual(result.status, BilevelStatus.TimeLimit)
        self.assertEqual(result.lower_bound, -42)
        self.assertEqual(result.objective, np.inf)
        self.assertIsNone(result.x)

    def test_node_limit(self):
        result = miblp.solve(self.moore_bard, node_limit=0)
        self.assertEqual(result.status, BilevelStatus.NodeLimit)
        self.assertEqual(result.statistics["nodes"], 0)
        result = miblp.solve(self.moore_bard, node_limit=1, branch_strategy=BranchStrategy.Linking)
        self.assertEqual(result.statistics["nodes"], 1)
        self.assertLessEqual(result.lower_bound, -22)


class TestEdgeCases(MiblpTestCase):
    def test_infeasible(self):
        # x >= 1 and x <= 0
        instance = MiblpInstance(c=[1], d1=[0], d2=[1], A1=[[1], [-1]], G1=[[0], [0]], b1=[1, 0],
                                 A2=[[1]], G2=[[1]], ub_x=[1], ub_y=[1])
        result = miblp.solve(instance)
        self.assertEqual(result.status, BilevelStatus.Infeasible)
        self.assertEqual(result.objective, np.inf)
        self.assertIsNone(result.x)

    def test_empty_linking_set(self):
        # the follower doesn't see x: a plain MILP on the leader side
        instance = MiblpInstance(c=[-1], d1=[-1], d2=[1], A1=None, G1=None, b1=None,
                                 A2=[[0]], G2=[[1]], ub_x=[3], ub_y=[2])
        for branch in BranchStrategy:
            result = miblp.solve(instance, branch_strategy=branch)
            self.assertEqual(result.objective, -3)
            self.assertArrayEqual(result.y, [0])

    def test_unbounded_root(self):
        instance = MiblpInstance(c=[-1], d1=[0], d2=[1], A1=None, G1=None, b1=None,
                                 A2=[[0]], G2=[[1]], ub_y=[1], r1=0)
        with self.assertRaises(UnboundedException):
            miblp.solve(instance)

    def test_invalid_instance(self):
        instance = MiblpInstance(c=[1], d1=[1], d2=[1], A1=None, G1=None, b1=None,
                                 A2=[[1]], G2=[[1]], ub_x=[1], ub_y=[5], r1=0)
        with self.assertRaises(InvalidInstanceException):
            miblp.BilevelSolver(instance)

    def test_inconsistent_params(self):
        with self.assertRaises(InvalidParameterException):
            miblp.solve(self.moore_bard, branch_strategy=BranchStrategy.Fractional, cut_strategy=CutStrategy.Disabled)
