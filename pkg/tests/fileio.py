from .common import *

from miblp.fileio import *
from miblp.model import classify, validate
from miblp.tree import BilevelResult

__all__ = ["TestReadMps", "TestReadAux", "TestAssemble", "TestInterdiction", "TestWriteInstance", "TestSolutionFile"]

RANGED_MPS = """NAME ranged
ROWS
 N COST
 E BAL
 G LIM
 N SPARE
COLUMNS
    a COST 1 BAL 1
    a LIM 2 SPARE 7
    b COST -1 BAL 1
RHS
    BAL 4 LIM 1
RANGES
    RNG LIM 3
BOUNDS
 UP BND a 5
 MI BND b
 BV BND c
ENDATA
"""

class TestReadMps(MiblpTestCase):
    def setUp(self):
        super().setUp()
        self.directory = self.make_temp_dir()

    def read(self, text:str):
        path = os.path.join(self.directory, "problem.mps")
        with open(path, "w") as fh:
            fh.write(text)
        return read_mps(path)

    def test_moore_bard(self):
        mps = self.read(MOORE_BARD_MPS)
        self.assertEqual(mps.name, "moore-bard")
        self.assertEqual(mps.columns, ["x", "y"])
        self.assertEqual(mps.num_rows, 4)
        self.assertArrayEqual(mps.objective, [-1, -10])
        self.assertArrayEqual(mps.integer, [True, True])
        self.assertArrayEqual(mps.upper, [10, 10])
        self.assertEqual(mps.senses, ["L", "L", "L", "G"])

    def test_ranges_and_free_rows(self):
        with self.assertRaises(FileFormatException):
            self.read(RANGED_MPS)  # c is declared in BOUNDS only
        mps = self.read(RANGED_MPS.replace(" BV BND c\n", ""))
        self.assertEqual(mps.rows, ["BAL", "LIM"])
        matrix, rhs, origin = mps.ge_rows()
        # equality and ranged rows both give two rows
        self.assertEqual(origin, [0, 0, 1, 1])
        self.assertArrayEqual(matrix[0], [1, 1])
        self.assertArrayEqual(matrix[1], [-1, -1])
        self.assertArrayEqual(rhs, [4, -4, 1, -4])
        self.assertEqual(mps.lower[1], -np.inf)
        self.assertEqual(mps.upper[0], 5)

    def test_objective_sense_max(self):
        text = MOORE_BARD_MPS.replace("ROWS\n", "OBJSENSE\n    MAX\nROWS\n")
        mps = self.read(text)
        self.assertEqual(mps.objective_sense, -1)
        self.assertArrayEqual(mps.objective, [1, 10])

    def test_no_variables(self):
        with self.assertRaises(FileFormatException) as context:
            self.read("NAME empty\nROWS\n N OBJ\nCOLUMNS\nRHS\nENDATA\n")
        self.assertIn("no variables", str(context.exception))

    def test_unknown_row(self):
        with self.assertRaises(FileFormatException) as context:
            self.read(MOORE_BARD_MPS.replace("x R3 2", "x R9 2"))
        self.assertEqual(context.exception.line, 12)
        self.assertIn("line 12", str(context.exception))

    def test_duplicate_entry(self):
        with self.assertRaises(FileFormatException):
            self.read(MOORE_BARD_MPS.replace("x R3 2", "x R0 2"))

    def test_unknown_section(self):
        with self.assertRaises(FileFormatException):
            self.read(MOORE_BARD_MPS.replace("BOUNDS", "LIMITS"))

    def test_objective_constant_warns(self):
        with self.assertWarns(IgnoredDataWarning):
            self.read(MOORE_BARD_MPS.replace("RHS R2 15 R3 15", "RHS R2 15 OBJ 15\n    RHS R3 15"))

    def test_negative_upper_bound_warns(self):
        with self.assertWarns(IgnoredDataWarning):
            mps = self.read(MOORE_BARD_MPS.replace("UP BND x 10", "UP BND x -1"))
        self.assertEqual(mps.lower[0], -np.inf)


class TestReadAux(MiblpTestCase):
    def setUp(self):
        super().setUp()
        self.directory = self.make_temp_dir()
        self.mps_path, self.aux_path = self.write_files(self.directory, "mb", MOORE_BARD_MPS, MOORE_BARD_AUX)

    def read(self, text:str):
        path = os.path.join(self.directory, "other.aux")
        with open(path, "w") as fh:
            fh.write(text)
        return read_aux(path, read_mps(self.mps_path))

    def test_moore_bard(self):
        aux = read_aux(self.aux_path)
        self.assertEqual((aux.n_lower, aux.m_lower), (1, 4))
        self.assertEqual(aux.lower_cols, [1])
        self.assertEqual(aux.lower_rows, [0, 1, 2, 3])
        self.assertEqual(aux.lower_obj, [1.0])
        self.assertEqual(aux.obj_sense, 1)

    def test_count_mismatch(self):
        with self.assertRaises(FileFormatException):
            self.read(MOORE_BARD_AUX.replace("LR 3\n", ""))

    def test_index_out_of_range(self):
        with self.assertRaises(FileFormatException):
            self.read(MOORE_BARD_AUX.replace("LC 1", "LC 2"))

    def test_missing_record(self):
        with self.assertRaises(FileFormatException):
            self.read(MOORE_BARD_AUX.replace("N 1\n", ""))

    def test_unknown_record(self):
        with self.assertRaises(FileFormatException) as context:
            self.read(MOORE_BARD_AUX + "XX 3\n")
        self.assertIn("unknown record", str(context.exception))


class TestAssemble(MiblpTestCase):
    def setUp(self):
        super().setUp()
        self.directory = self.make_temp_dir()
        self.mps_path, self.aux_path = self.write_files(self.directory, "mb", MOORE_BARD_MPS, MOORE_BARD_AUX)

    def test_constant_rhs_needed(self):
        with self.assertRaises(InvalidInstanceException):
            read_instance(self.mps_path, self.aux_path)

    def test_moore_bard(self):
        instance = read_instance(self.mps_path, self.aux_path, constant_rhs=True)
        self.assertEqual((instance.n1, instance.n2, instance.m1, instance.m2), (2, 1, 0, 4))
        self.assertEqual(instance, self.moore_bard)
        self.assertEqual(instance.x_names, ["x", CONSTANT_COLUMN])
        self.assertEqual(validate(instance), [])

    def test_max_sense_follower(self):
        path = os.path.join(self.directory, "max.aux")
        with open(path, "w") as fh:
            fh.write(MOORE_BARD_AUX.replace("LO 1", "LO -1").replace("OS 1", "OS -1"))
        instance = read_instance(self.mps_path, path, constant_rhs=True)
        self.assertArrayEqual(instance.d2, [1])

    def test_integer_columns_first(self):
        text = MOORE_BARD_MPS.replace("    MARKER 'MARKER' 'INTORG'\n", "").replace(
            "    y OBJ -10 R0 20", "    MARKER 'MARKER' 'INTORG'\n    y OBJ -10 R0 20")
        mps_path, aux_path = self.write_files(self.directory, "mixed", text,
                                              MOORE_BARD_AUX.replace("LC 1", "LC 0"))
        instance = read_instance(mps_path, aux_path, constant_rhs=True)
        # y is the integer column; x moved to the second level stays continuous
        self.assertEqual(instance.y_names, ["x"])
        self.assertEqual(instance.r2, 0)
        self.assertEqual(instance.x_names, ["y", CONSTANT_COLUMN])

    def test_solve_unchanged_against_direct_encoding(self):
        instance = read_instance(self.mps_path, self.aux_path, constant_rhs=True)
        self.assertEqual(miblp.solve(instance).objective, miblp.solve(self.moore_bard).objective)


class TestInterdiction(MiblpTestCase):
    def test_structure(self):
        instance = knapsack_interdiction()
        self.assertEqual((instance.n1, instance.n2, instance.r1), (3, 2, 3))
        self.assertEqual(instance.x_names[-1], CONSTANT_COLUMN)
        props = classify(instance)
        self.assertTrue(props.is_interdiction and props.zero_sum)

    def test_optimum(self):
        for budget, value in ((1, 2), (0, 3), (2, 0)):
            result = miblp.solve(knapsack_interdiction(budget))
            self.assertEqual(result.status, BilevelStatus.Optimal)
            self.assertEqual(result.objective, value)
        result = miblp.solve(knapsack_interdiction(1))
        self.assertArrayEqual(result.x[:2], [1, 0])

    def test_missing_upper_bound(self):
        with self.assertRaises(InvalidInstanceException):
            build_interdiction([3, 2], [[-1, -1]], [-1], [1, np.inf], [[-1, -1]], [-1])
        with self.assertRaises(InvalidInstanceException):
            build_interdiction([3, 2], [[-1, -1]], [-1], [1], [[-1, -1]], [-1])


class TestWriteInstance(MiblpTestCase):
    def test_round_trip(self):
        directory = self.make_temp_dir()
        for instance in [self.moore_bard, knapsack_interdiction()] + random_instances(10):
            mps_path = os.path.join(directory, "i.mps")
            aux_path = os.path.join(directory, "i.aux")
            write_instance(instance, mps_path, aux_path)
            again = read_instance(mps_path, aux_path)
            self.assertEqual(again, instance, instance.name)
            self.assertEqual(again.y_names, instance.y_names)


class TestSolutionFile(MiblpTestCase):
    def test_round_trip(self):
        directory = self.make_temp_dir()
        path = os.path.join(directory, "mb.sol")
        result = miblp.solve(self.moore_bard)
        write_solution(result, path, self.moore_bard)
        again = read_solution(path)
        self.assertEqual(again.status, BilevelStatus.Optimal)
        self.assertEqual(again.objective, -22)
        self.assertEqual(again.lower_bound, -22)
        self.assertArrayEqual(again.x, result.x)
        self.assertArrayEqual(again.y, result.y)
        self.assertEqual(again.statistics["nodes"], result.statistics["nodes"])

    def test_infeasible_result(self):
        path = os.path.join(self.make_temp_dir(), "none.sol")
        write_solution(BilevelResult(BilevelStatus.Infeasible, statistics={"nodes": 3}), path)
        again = read_solution(path)
        self.assertEqual(again.status, BilevelStatus.Infeasible)
        self.assertEqual(again.objective, np.inf)
        self.assertIsNone(again.x)

    def test_missing_end(self):
        path = os.path.join(self.make_temp_dir(), "bad.sol")
        with open(path, "w") as fh:
            fh.write("STATUS Optimal\nOBJECTIVE 1.0\n")
        with self.assertRaises(FileFormatException):
            read_solution(path)
