from .common import *
from .model import *
from .fileio import *
from .simplex import *
from .milp import *
from .branching import *
from .cuts import *
from .tree import *
from .params import *
from .solver import *
from .heuristics import *
from .oracle import *
from .generator import *
from .cli import *

if __name__ == '__main__':
    unittest.main(exit=False)
