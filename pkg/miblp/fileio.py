"""Reading and writing instances and solutions.

An instance is given as an MPS file holding every row and column, plus an
auxiliary file telling which of them belong to the second level:

    N <int>       number of second-level columns
    M <int>       number of second-level rows
    LC <int>      index of a second-level column (N times)
    LR <int>      index of a second-level row (M times)
    LO <real>     second-level objective coefficient (N times, LC order)
    OS <1|-1>     second-level objective sense, 1 for min and -1 for max

Indices are 0-based, in MPS order (rows without the objective row).

Solution files are line based:

    STATUS <name>
    OBJECTIVE <value>
    UPPER_BOUND <value>
    LOWER_BOUND <value>
    X <index> <name> <value>
    Y <index> <name> <value>
    STAT <key> <value>
    END

   Classes:
       MpsData
       AuxInfo

   Functions:
       read_mps
       read_aux
       assemble
       read_instance
       build_interdiction
       write_instance
       write_solution
       read_solution
"""

__all__ = ["MpsData", "AuxInfo", "CONSTANT_COLUMN", "read_mps", "read_aux", "assemble", "read_instance",
           "build_interdiction", "write_instance", "write_solution", "read_solution"]

import collections
import logging
import warnings
import numpy as np

from .enums import BilevelStatus
from .exceptions import FileFormatException, IgnoredDataWarning, InvalidInstanceException
from .model import MiblpInstance
from .tree import BilevelResult

CONSTANT_COLUMN = "__one__"

logger = logging.getLogger(__name__)

_SECTIONS = {"NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "OBJSENSE", "ENDATA"}
_VALUELESS_BOUNDS = {"FR", "MI", "PL", "BV"}
_VALUED_BOUNDS = {"UP", "LO", "FX", "LI", "UI"}


class MpsData():
    """Flat LP/MILP read from an MPS file.

    Attributes:
        name(str): problem name
        columns(list): column names in file order
        rows(list): constraint row names in file order (objective row excluded)
        senses(list): 'G', 'L' or 'E' per row
        matrix(ndarray): coefficients, one line per row
        rhs(ndarray): right-hand sides
        ranges(ndarray): RANGES values (nan where absent)
        objective(ndarray): objective coefficients, minimization sense
        lower(ndarray), upper(ndarray): column bounds
        integer(ndarray): boolean integrality mask
        objective_sense(int): 1 if the file minimizes, -1 if it maximizes
    """

    def __init__(self, name:str, columns:list, rows:list, senses:list, matrix, rhs, ranges,
                 objective, lower, upper, integer, objective_sense:int = 1):
        self.name = name
        self.columns = list(columns)
        self.rows = list(rows)
        self.senses = list(senses)
        self.matrix = np.array(matrix, dtype=float).reshape(len(self.rows), len(self.columns))
        self.rhs = np.array(rhs, dtype=float).reshape(-1)
        self.ranges = np.array(ranges, dtype=float).reshape(-1)
        self.objective = np.array(objective, dtype=float).reshape(-1)
        self.lower = np.array(lower, dtype=float).reshape(-1)
        self.upper = np.array(upper, dtype=float).reshape(-1)
        self.integer = np.array(integer, dtype=bool).reshape(-1)
        self.objective_sense = objective_sense

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    def ge_rows(self):
        """Rewrites every row as one or two >= rows.

        Returns:
            tuple: (matrix, rhs, origin) where origin[k] is the MPS row index
            of row k. Equality and ranged rows give two consecutive rows.
        """
        lines, rhs, origin = [], [], []
        for i, sense in enumerate(self.senses):
            a, b, r = self.matrix[i], self.rhs[i], self.ranges[i]
            if np.isnan(r):
                low = b if sense in "GE" else -np.inf
                high = b if sense in "LE" else np.inf
            elif sense == "G":
                low, high = b, b + abs(r)
            elif sense == "L":
                low, high = b - abs(r), b
            else:
                low, high = (b, b + r) if r >= 0 else (b + r, b)
            if np.isfinite(low):
                lines.append(a)
                rhs.append(low)
                origin.append(i)
            if np.isfinite(high):
                lines.append(-a)
                rhs.append(-high)
                origin.append(i)
        matrix = np.array(lines, dtype=float).reshape(len(lines), self.num_columns)
        return matrix, np.array(rhs, dtype=float), origin


class AuxInfo():
    """Second-level description of an instance.

    Attributes:
        n_lower(int): number of second-level columns
        m_lower(int): number of second-level rows
        lower_cols(list): second-level column indices
        lower_rows(list): second-level row indices
        lower_obj(list): second-level objective, in lower_cols order
        obj_sense(int): 1 (min) or -1 (max)
    """

    def __init__(self, n_lower:int, m_lower:int, lower_cols:list, lower_rows:list, lower_obj:list, obj_sense:int = 1):
        self.n_lower = n_lower
        self.m_lower = m_lower
        self.lower_cols = list(lower_cols)
        self.lower_rows = list(lower_rows)
        self.lower_obj = list(lower_obj)
        self.obj_sense = obj_sense

    def check(self, mps:MpsData = None) -> None:
        """Checks counts, duplicates and, when mps is given, index ranges.

        Raises:
            FileFormatException: on the first problem found.
        """
        if len(self.lower_cols) != self.n_lower or len(self.lower_obj) != self.n_lower:
            raise FileFormatException("expected {:d} LC and LO records, found {:d} and {:d}".format(
                self.n_lower, len(self.lower_cols), len(self.lower_obj)))
        if len(self.lower_rows) != self.m_lower:
            raise FileFormatException("expected {:d} LR records, found {:d}".format(self.m_lower, len(self.lower_rows)))
        if len(set(self.lower_cols)) != len(self.lower_cols) or len(set(self.lower_rows)) != len(self.lower_rows):
            raise FileFormatException("duplicate LC or LR index")
        if self.obj_sense not in (1, -1):
            raise FileFormatException("OS must be 1 or -1")
        if mps is not None:
            for index in self.lower_cols:
                if not 0 <= index < mps.num_columns:
                    raise FileFormatException("LC index {:d} out of range".format(index))
            for index in self.lower_rows:
                if not 0 <= index < mps.num_rows:
                    raise FileFormatException("LR index {:d} out of range".format(index))

    def __repr__(self):
        return "AuxInfo(N={:d}, M={:d})".format(self.n_lower, self.m_lower)


####################
# MPS reading      #
####################

def _number(token:str, line:int) -> float:
    try:
        return float(token)
    except ValueError:
        raise FileFormatException("invalid number '{:s}'".format(token), line)


def _pairs(tokens:list, line:int):
    """Splits 'name value [name value]' records."""
    if len(tokens) not in (2, 4):
        raise FileFormatException("malformed record", line)
    return [(tokens[k], _number(tokens[k + 1], line)) for k in range(0, len(tokens), 2)]


def read_mps(path:str) -> MpsData:
    """Reads a fixed- or free-format MPS file.

    Fields are split on whitespace, so names must not contain blanks.
    Rows of type N after the first one are free rows and are dropped.

    Parameters:
        path(str): file to read

    Returns:
        MpsData: the flat problem.

    Raises:
        FileFormatException: on malformed sections or records, unknown row
            or column references, duplicate entries or a missing COLUMNS
            section; the message carries the line number.
    """
    name = ""
    section = None
    sense = 1
    objective_row = None
    free_rows = set()
    rows, senses, row_index = [], [], {}
    columns, column_index, integer = [], {}, []
    entries = {}
    rhs, ranges, bounds = {}, {}, {}
    integer_block = False
    number = 0
    with open(path, "r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n\r")
            if not line.strip() or line.startswith("*"):
                continue
            tokens = line.split()
            if not line[0].isspace():
                keyword = tokens[0].upper()
                if keyword not in _SECTIONS:
                    raise FileFormatException("unknown section {:s}".format(tokens[0]), number)
                section = keyword
                if section == "NAME":
                    name = " ".join(tokens[1:])
                elif section == "OBJSENSE" and len(tokens) > 1:
                    sense = _objective_sense(tokens[1], number)
                elif section == "ENDATA":
                    break
                continue
            if section is None:
                raise FileFormatException("record outside any section", number)
            if section == "OBJSENSE":
                sense = _objective_sense(tokens[0], number)
            elif section == "ROWS":
                if len(tokens) != 2:
                    raise FileFormatException("malformed ROWS record", number)
                kind, row = tokens[0].upper(), tokens[1]
                if row in row_index or row == objective_row or row in free_rows:
                    raise FileFormatException("duplicate row {:s}".format(row), number)
                if kind == "N":
                    if objective_row is None:
                        objective_row = row
                    else:
                        free_rows.add(row)
                elif kind in ("G", "L", "E"):
                    row_index[row] = len(rows)
                    rows.append(row)
                    senses.append(kind)
                else:
                    raise FileFormatException("unknown row type {:s}".format(tokens[0]), number)
            elif section == "COLUMNS":
                if len(tokens) >= 3 and tokens[1].strip("'\"").upper() == "MARKER":
                    marker = tokens[2].strip("'\"").upper()
                    if marker not in ("INTORG", "INTEND"):
                        raise FileFormatException("unknown marker {:s}".format(tokens[2]), number)
                    integer_block = marker == "INTORG"
                    continue
                column = tokens[0]
                if column not in column_index:
                    column_index[column] = len(columns)
                    columns.append(column)
                    integer.append(integer_block)
                j = column_index[column]
                for row, value in _pairs(tokens[1:], number):
                    if row in free_rows:
                        continue
                    if row != objective_row and row not in row_index:
                        raise FileFormatException("unknown row {:s}".format(row), number)
                    if (row, j) in entries:
                        raise FileFormatException("duplicate entry {:s}/{:s}".format(column, row), number)
                    entries[(row, j)] = value
            elif section in ("RHS", "RANGES"):
                target = rhs if section == "RHS" else ranges
                for row, value in _pairs(tokens[1:] if len(tokens) % 2 else tokens, number):
                    if row in free_rows:
                        continue
                    if row == objective_row:
                        if section == "RHS":
                            warnings.warn("objective constant {:g} ignored".format(value), IgnoredDataWarning)
                            continue
                        raise FileFormatException("range on the objective row", number)
                    if row not in row_index:
                        raise FileFormatException("unknown row {:s}".format(row), number)
                    if row in target:
                        raise FileFormatException("duplicate {:s} entry for {:s}".format(section, row), number)
                    target[row] = value
            elif section == "BOUNDS":
                _read_bound(tokens, number, column_index, bounds)
    if not columns:
        raise FileFormatException("no variables", number)
    if objective_row is None:
        raise FileFormatException("no objective row", number)
    return _build_mps(name, rows, senses, row_index, columns, integer, entries, objective_row,
                      rhs, ranges, bounds, sense)


def _objective_sense(token:str, line:int) -> int:
    token = token.upper()
    if token in ("MIN", "MINIMIZE"):
        return 1
    if token in ("MAX", "MAXIMIZE"):
        return -1
    raise FileFormatException("unknown objective sense {:s}".format(token), line)


def _read_bound(tokens:list, line:int, column_index:dict, bounds:dict) -> None:
    kind = tokens[0].upper()
    if kind in _VALUELESS_BOUNDS:
        fields = tokens[1:]
        if len(fields) not in (1, 2):
            raise FileFormatException("malformed BOUNDS record", line)
        column, value = fields[-1], None
    elif kind in _VALUED_BOUNDS:
        fields = tokens[1:]
        if len(fields) not in (2, 3):
            raise FileFormatException("malformed BOUNDS record", line)
        column, value = fields[-2], _number(fields[-1], line)
    else:
        raise FileFormatException("unknown bound type {:s}".format(tokens[0]), line)
    if column not in column_index:
        raise FileFormatException("unknown column {:s}".format(column), line)
    key = (kind, column)
    if key in bounds:
        raise FileFormatException("duplicate bound {:s} on {:s}".format(kind, column), line)
    bounds[key] = (value, line)


def _build_mps(name, rows, senses, row_index, columns, integer, entries, objective_row,
               rhs, ranges, bounds, sense) -> MpsData:
    m, n = len(rows), len(columns)
    matrix = np.zeros((m, n))
    objective = np.zeros(n)
    for (row, j), value in entries.items():
        if row == objective_row:
            objective[j] = value
        else:
            matrix[row_index[row], j] = value
    b = np.zeros(m)
    for row, value in rhs.items():
        b[row_index[row]] = value
    r = np.full(m, np.nan)
    for row, value in ranges.items():
        r[row_index[row]] = value
    index = {column: j for j, column in enumerate(columns)}
    lower, upper = np.zeros(n), np.full(n, np.inf)
    integer = np.array(integer, dtype=bool)
    explicit_lower = set()
    # records apply in file order so later bounds override earlier ones
    for (kind, column), (value, _) in sorted(bounds.items(), key=lambda item: item[1][1]):
        j = index[column]
        if kind == "UP":
            if value < 0 and lower[j] == 0 and j not in explicit_lower:
                warnings.warn("negative upper bound on {:s} sets its lower bound to -inf".format(column),
                              IgnoredDataWarning)
                lower[j] = -np.inf
            upper[j] = value
        elif kind == "LO":
            lower[j] = value
            explicit_lower.add(j)
        elif kind == "FX":
            lower[j] = upper[j] = value
            explicit_lower.add(j)
        elif kind == "FR":
            lower[j], upper[j] = -np.inf, np.inf
        elif kind == "MI":
            lower[j] = -np.inf
            explicit_lower.add(j)
        elif kind == "PL":
            upper[j] = np.inf
        elif kind == "BV":
            lower[j], upper[j] = 0.0, 1.0
            integer[j] = True
        elif kind == "LI":
            lower[j] = value
            integer[j] = True
            explicit_lower.add(j)
        elif kind == "UI":
            upper[j] = value
            integer[j] = True
    return MpsData(name, columns, rows, senses, matrix, b, r, sense * objective, lower, upper, integer, sense)


####################
# Auxiliary file   #
####################

def read_aux(path:str, mps:MpsData = None) -> AuxInfo:
    """Reads an auxiliary information file.

    Parameters:
        path(str): file to read
        mps(MpsData): when given, indices are range-checked against it

    Returns:
        AuxInfo: the second-level description.

    Raises:
        FileFormatException: on unknown records, missing N or M, count
            mismatches, duplicates or out-of-range indices.
    """
    counts = {}
    lists = {"LC": [], "LR": [], "LO": []}
    sense = 1
    with open(path, "r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            if len(tokens) != 2:
                raise FileFormatException("malformed record", number)
            kind = tokens[0].upper()
            if kind in ("N", "M", "OS"):
                try:
                    value = int(tokens[1])
                except ValueError:
                    raise FileFormatException("invalid integer '{:s}'".format(tokens[1]), number)
                if kind == "OS":
                    sense = value
                else:
                    if kind in counts:
                        raise FileFormatException("duplicate {:s} record".format(kind), number)
                    counts[kind] = value
            elif kind in ("LC", "LR"):
                try:
                    lists[kind].append(int(tokens[1]))
                except ValueError:
                    raise FileFormatException("invalid index '{:s}'".format(tokens[1]), number)
            elif kind == "LO":
                lists["LO"].append(_number(tokens[1], number))
            else:
                raise FileFormatException("unknown record {:s}".format(tokens[0]), number)
    for kind in ("N", "M"):
        if kind not in counts:
            raise FileFormatException("missing {:s} record".format(kind))
    aux = AuxInfo(counts["N"], counts["M"], lists["LC"], lists["LR"], lists["LO"], sense)
    aux.check(mps)
    return aux


####################
# Assembly         #
####################

def _integers_first(indices:list, integer) -> list:
    return [j for j in indices if integer[j]] + [j for j in indices if not integer[j]]


def assemble(mps:MpsData, aux:AuxInfo, constant_rhs:bool = False) -> MiblpInstance:
    """Builds an instance from a parsed MPS file and auxiliary file.

    Columns keep their relative order within each level, integer ones moved
    first. Rows keep their MPS order within each level.

    Parameters:
        mps(MpsData): the flat problem
        aux(AuxInfo): the second-level description
        constant_rhs(bool): move constant second-level right-hand sides into
            a first-level column fixed to 1 (default False)

    Returns:
        MiblpInstance: the normalized instance.

    Raises:
        FileFormatException: if aux doesn't fit mps.
        InvalidInstanceException: if a second-level row has a nonzero
            right-hand side and constant_rhs is off.
    """
    aux.check(mps)
    lower_set = set(aux.lower_cols)
    lower_obj = dict(zip(aux.lower_cols, aux.lower_obj))
    x_cols = _integers_first([j for j in range(mps.num_columns) if j not in lower_set], mps.integer)
    y_cols = _integers_first(aux.lower_cols, mps.integer)
    matrix, rhs, origin = mps.ge_rows()
    second = np.array([i in set(aux.lower_rows) for i in origin], dtype=bool)
    first = ~second
    A1, G1, b1 = matrix[first][:, x_cols], matrix[first][:, y_cols], rhs[first]
    A2, G2, b2 = -matrix[second][:, x_cols], matrix[second][:, y_cols], rhs[second]
    c = mps.objective[x_cols]
    lb_x, ub_x = mps.lower[x_cols], mps.upper[x_cols]
    r1 = int(np.count_nonzero(mps.integer[x_cols]))
    x_names = [mps.columns[j] for j in x_cols]
    if np.any(b2 != 0):
        if not constant_rhs:
            raise InvalidInstanceException("second-level row with nonzero right-hand side "
                                           "(use the constant right-hand side option)")
        # the constant column joins the integer block of x
        A1 = np.insert(A1, r1, 0.0, axis=1)
        A2 = np.insert(A2, r1, b2, axis=1)
        c = np.insert(c, r1, 0.0)
        lb_x, ub_x = np.insert(lb_x, r1, 1.0), np.insert(ub_x, r1, 1.0)
        x_names.insert(r1, CONSTANT_COLUMN)
        r1 += 1
        logger.debug("constant second-level right-hand side moved to column %s", CONSTANT_COLUMN)
    return MiblpInstance(
        c=c, d1=mps.objective[y_cols], d2=aux.obj_sense * np.array([lower_obj[j] for j in y_cols]),
        A1=A1, G1=G1, b1=b1, A2=A2, G2=G2, lb_x=lb_x, ub_x=ub_x,
        lb_y=mps.lower[y_cols], ub_y=mps.upper[y_cols], r1=r1,
        r2=int(np.count_nonzero(mps.integer[y_cols])), name=mps.name,
        x_names=x_names, y_names=[mps.columns[j] for j in y_cols])


def read_instance(mps_path:str, aux_path:str, constant_rhs:bool = False) -> MiblpInstance:
    """Reads and assembles an instance in one call."""
    mps = read_mps(mps_path)
    return assemble(mps, read_aux(aux_path, mps), constant_rhs)


def build_interdiction(objective, rows, rhs, upper, leader_rows, leader_rhs,
                       integer=None, name:str = "interdiction") -> MiblpInstance:
    """Builds a zero-sum interdiction instance from a follower MILP.

    The follower maximizes objective.y over rows.y >= rhs, 0 <= y <= upper.
    The leader picks binary x under leader_rows.x >= leader_rhs; x_i = 1
    forces y_i = 0 through the coupling row y_i <= upper_i (1 - x_i). The
    leader minimizes the follower's value. A first-level column fixed to 1
    carries the constants.

    Parameters:
        objective(array): follower objective, maximization sense (n)
        rows(array), rhs(array): follower rows in >= form
        upper(array): finite positive upper bounds on y (n)
        leader_rows(array), leader_rhs(array): leader budget rows over x, >= form
        integer(array): follower integrality mask (default all integer)
        name(str): instance name

    Returns:
        MiblpInstance: the bilevel instance, x = (x_1..x_n, constant).

    Raises:
        InvalidInstanceException: if an upper bound is missing, infinite or not positive.
    """
    f = np.array(objective, dtype=float).reshape(-1)
    n = f.size
    u = np.array(upper, dtype=float).reshape(-1)
    if u.size != n or not np.all(np.isfinite(u)) or np.any(u <= 0):
        raise InvalidInstanceException("interdiction needs a finite positive upper bound per variable")
    G = np.array(rows, dtype=float).reshape(-1, n)
    b = np.array(rhs, dtype=float).reshape(-1)
    budget = np.array(leader_rows, dtype=float).reshape(-1, n)
    mask = np.ones(n, dtype=bool) if integer is None else np.array(integer, dtype=bool).reshape(-1)
    # integer follower columns first, leader columns follow the same order
    order = _integers_first(list(range(n)), mask)
    f, u, G, budget, mask = f[order], u[order], G[:, order], budget[:, order], mask[order]
    coupling_G = -np.eye(n)
    coupling_A = np.hstack([np.diag(u), -u.reshape(-1, 1)])
    follower_A = np.hstack([np.zeros((G.shape[0], n)), b.reshape(-1, 1)])
    return MiblpInstance(
        c=np.zeros(n + 1), d1=f, d2=-f,
        A1=np.hstack([budget, np.zeros((budget.shape[0], 1))]), G1=np.zeros((budget.shape[0], n)),
        b1=leader_rhs, A2=np.vstack([coupling_A, follower_A]), G2=np.vstack([coupling_G, G]),
        lb_x=np.concatenate([np.zeros(n), [1.0]]), ub_x=np.ones(n + 1),
        lb_y=np.zeros(n), ub_y=u, r1=n + 1, r2=int(np.count_nonzero(mask)), name=name,
        x_names=["x{:d}".format(order[i]) for i in range(n)] + [CONSTANT_COLUMN],
        y_names=["y{:d}".format(order[i]) for i in range(n)])


####################
# Writing          #
####################

def _format(value:float) -> str:
    value = float(value)
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def write_instance(instance:MiblpInstance, mps_path:str, aux_path:str) -> None:
    """Writes an instance as an MPS file and an auxiliary file.

    Every row is written as a >= row with right-hand side b1 (first level)
    or 0 (second level), so reading the pair back without the constant
    option gives an equal instance. A constant column is written as an
    ordinary fixed column.
    """
    n1, m1 = instance.n1, instance.m1
    matrix, rhs, lower, upper = instance.relaxation()
    objective = instance.objective()
    names = list(instance.x_names) + list(instance.y_names)
    integer = instance.integer_mask()
    row_names = ["R{:d}".format(i) for i in range(matrix.shape[0])]
    out = ["NAME {:s}".format(instance.name or "miblp"), "ROWS", " N OBJ"]
    out.extend(" G {:s}".format(row) for row in row_names)
    out.append("COLUMNS")
    in_block = False
    for j, column in enumerate(names):
        if integer[j] != in_block:
            out.append("    MARKER 'MARKER' '{:s}'".format("INTORG" if integer[j] else "INTEND"))
            in_block = integer[j]
        if objective[j] != 0:
            out.append("    {:s} OBJ {:s}".format(column, _format(objective[j])))
        for i in np.flatnonzero(matrix[:, j]):
            out.append("    {:s} {:s} {:s}".format(column, row_names[i], _format(matrix[i, j])))
        if objective[j] == 0 and not np.any(matrix[:, j]):
            out.append("    {:s} OBJ 0.0".format(column))
    if in_block:
        out.append("    MARKER 'MARKER' 'INTEND'")
    out.append("RHS")
    out.extend("    RHS {:s} {:s}".format(row_names[i], _format(rhs[i])) for i in np.flatnonzero(rhs))
    out.append("BOUNDS")
    for j, column in enumerate(names):
        if lower[j] == upper[j]:
            out.append(" FX BND {:s} {:s}".format(column, _format(lower[j])))
            continue
        if lower[j] == -np.inf:
            out.append(" MI BND {:s}".format(column))
        elif lower[j] != 0 or upper[j] < 0:
            out.append(" LO BND {:s} {:s}".format(column, _format(lower[j])))
        if np.isfinite(upper[j]):
            out.append(" UP BND {:s} {:s}".format(column, _format(upper[j])))
    out.append("ENDATA")
    with open(mps_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    aux = ["N {:d}".format(instance.n2), "M {:d}".format(instance.m2)]
    aux.extend("LC {:d}".format(n1 + j) for j in range(instance.n2))
    aux.extend("LR {:d}".format(m1 + i) for i in range(instance.m2))
    aux.extend("LO {:s}".format(_format(v)) for v in instance.d2)
    aux.append("OS 1")
    with open(aux_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(aux) + "\n")


def write_solution(result:BilevelResult, path:str, instance:MiblpInstance = None) -> None:
    """Writes a solve result in the solution file format.

    Parameters:
        result(BilevelResult): what to write
        path(str): output file
        instance(MiblpInstance): source of variable names (default x0.., y0..)
    """
    out = ["STATUS {:s}".format(result.status.name),
           "OBJECTIVE {:s}".format(_format(result.objective)),
           "UPPER_BOUND {:s}".format(_format(result.objective)),
           "LOWER_BOUND {:s}".format(_format(result.lower_bound))]
    for label, values, names in (("X", result.x, instance.x_names if instance else None),
                                 ("Y", result.y, instance.y_names if instance else None)):
        if values is None:
            continue
        for i, value in enumerate(values):
            name = names[i] if names else "{:s}{:d}".format(label.lower(), i)
            out.append("{:s} {:d} {:s} {:s}".format(label, i, name, _format(value)))
    for key, value in result.statistics.items():
        out.append("STAT {:s} {:s}".format(key, str(value) if isinstance(value, int) else _format(value)))
    out.append("END")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_solution(path:str) -> BilevelResult:
    """Reads a file written by write_solution.

    Raises:
        FileFormatException: on unknown records, a bad status or a missing END.
    """
    status, objective, lower = None, np.inf, -np.inf
    values = {"X": {}, "Y": {}}
    statistics = collections.OrderedDict()
    ended = False
    with open(path, "r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            kind = tokens[0]
            if kind == "STATUS" and len(tokens) == 2:
                if tokens[1] not in BilevelStatus.__members__:
                    raise FileFormatException("unknown status {:s}".format(tokens[1]), number)
                status = BilevelStatus[tokens[1]]
            elif kind in ("OBJECTIVE", "UPPER_BOUND") and len(tokens) == 2:
                objective = _number(tokens[1], number)
            elif kind == "LOWER_BOUND" and len(tokens) == 2:
                lower = _number(tokens[1], number)
            elif kind in ("X", "Y") and len(tokens) == 4:
                values[kind][int(tokens[1])] = _number(tokens[3], number)
            elif kind == "STAT" and len(tokens) == 3:
                try:
                    statistics[tokens[1]] = int(tokens[2])
                except ValueError:
                    statistics[tokens[1]] = _number(tokens[2], number)
            elif kind == "END":
                ended = True
                break
            else:
                raise FileFormatException("unknown record {:s}".format(kind), number)
    if status is None or not ended:
        raise FileFormatException("incomplete solution file")
    x = [values["X"][i] for i in sorted(values["X"])] if values["X"] else None
    y = [values["Y"][i] for i in sorted(values["Y"])] if values["Y"] else None
    return BilevelResult(status, x, y, objective, lower, statistics)
