"""Seeded random instance families.

Coefficient distributions: matrix entries are uniform integers in
[-50, 50] and objective entries uniform integers in [-100, -1]. Second-level
rows have a nonpositive A2 so y = 0 answers every leader decision, and
first-level rows are satisfied at the origin.

   Functions:
       generate
       generate_files
       profile_from_name
"""

__all__ = ["generate", "generate_files", "profile_from_name", "DEFAULT_BOUNDS", "PROFILE_NAMES"]

import logging
import os
import numpy as np

from .enums import GeneratorProfile
from .exceptions import InvalidParameterException
from .fileio import build_interdiction, write_instance
from .model import MiblpInstance

MATRIX_RANGE = (-50, 50)
OBJECTIVE_RANGE = (-100, -1)
IBLP_DEN_ROWS = 20

PROFILE_NAMES = {
    GeneratorProfile.IblpDen: "iblp-den",
    GeneratorProfile.MiblpXu: "miblp-xu",
    GeneratorProfile.Interdiction: "interdiction",
}

# (leader, integer follower) upper bounds per family
DEFAULT_BOUNDS = {
    GeneratorProfile.IblpDen: (10, 10),
    GeneratorProfile.MiblpXu: (10, 1500),
    GeneratorProfile.Interdiction: (1, 1),
}

logger = logging.getLogger(__name__)


def profile_from_name(name:str) -> GeneratorProfile:
    """Maps 'iblp-den', 'miblp-xu' or 'interdiction' (any case) to a GeneratorProfile."""
    key = name.strip().lower().replace("_", "-")
    for profile, label in PROFILE_NAMES.items():
        if label == key or profile.name.lower() == key:
            return profile
    raise InvalidParameterException("Unknown generator profile {:s}.".format(name))


def _matrix(rng, rows:int, cols:int, low:int = MATRIX_RANGE[0], high:int = MATRIX_RANGE[1]):
    return rng.integers(low, high, size=(rows, cols), endpoint=True).astype(float)


def _objective(rng, size:int):
    return rng.integers(OBJECTIVE_RANGE[0], OBJECTIVE_RANGE[1], size=size, endpoint=True).astype(float)


def _first_level_rhs(rng, rows:int, cols:int):
    """Right-hand sides at most 0, so the origin meets every first-level row."""
    return -rng.integers(0, MATRIX_RANGE[1] * cols, size=rows, endpoint=True).astype(float)


def _iblp_den(rng, size:int, x_bound:float, y_bound:float, name:str) -> MiblpInstance:
    m2 = IBLP_DEN_ROWS
    return MiblpInstance(
        c=_objective(rng, size), d1=_objective(rng, size), d2=_objective(rng, size),
        A1=np.zeros((0, size)), G1=np.zeros((0, size)), b1=np.zeros(0),
        A2=_matrix(rng, m2, size, MATRIX_RANGE[0], 0), G2=_matrix(rng, m2, size),
        lb_x=np.zeros(size), ub_x=np.full(size, x_bound), lb_y=np.zeros(size), ub_y=np.full(size, y_bound),
        name=name)


def _miblp_xu(rng, size:int, x_bound:float, y_bound:float, name:str) -> MiblpInstance:
    rows = max(1, int(round(0.4 * size)))
    continuous = rng.random(size) < 0.5
    r2 = int(np.count_nonzero(~continuous))
    A1, G1 = _matrix(rng, rows, size), _matrix(rng, rows, size)
    # continuous columns share the integer bound so the relaxation stays bounded
    return MiblpInstance(
        c=_objective(rng, size), d1=_objective(rng, size), d2=_objective(rng, size),
        A1=A1, G1=G1, b1=_first_level_rhs(rng, rows, size),
        A2=_matrix(rng, rows, size, MATRIX_RANGE[0], 0), G2=_matrix(rng, rows, size),
        lb_x=np.zeros(size), ub_x=np.full(size, x_bound), lb_y=np.zeros(size), ub_y=np.full(size, y_bound),
        r1=size, r2=r2, name=name)


def _interdiction(rng, size:int, name:str) -> MiblpInstance:
    weights = rng.integers(1, 20, size=size, endpoint=True).astype(float)
    profits = rng.integers(1, 100, size=size, endpoint=True).astype(float)
    capacity = np.floor(weights.sum() / 2)
    budget = size // 2
    return build_interdiction(profits, -weights.reshape(1, -1), [-capacity], np.ones(size),
                              -np.ones((1, size)), [-budget], name=name)


def generate(profile:GeneratorProfile, size:int, seed:int, integer_upper_bound:float = None) -> MiblpInstance:
    """Draws one instance of a family.

    Parameters:
        profile(GeneratorProfile): IblpDen, MiblpXu or Interdiction
        size(int): n1 = n2 = size (items for Interdiction)
        seed(int): numpy generator seed
        integer_upper_bound(float): bound on integer second-level columns
            (default from DEFAULT_BOUNDS)

    Returns:
        MiblpInstance: the instance, the same for the same arguments.

    Raises:
        InvalidParameterException: if size is below 2.
    """
    if size < 2:
        raise InvalidParameterException("Instance size must be at least 2.")
    rng = np.random.default_rng(seed)
    x_bound, y_bound = DEFAULT_BOUNDS[profile]
    if integer_upper_bound != None:
        y_bound = integer_upper_bound
    name = "{:s}-{:d}-{:d}".format(PROFILE_NAMES[profile], size, seed)
    if profile == GeneratorProfile.IblpDen:
        return _iblp_den(rng, size, x_bound, y_bound, name)
    if profile == GeneratorProfile.MiblpXu:
        return _miblp_xu(rng, size, x_bound, y_bound, name)
    return _interdiction(rng, size, name)


def generate_files(profile:GeneratorProfile, size:int, seed:int, directory:str = ".",
                   integer_upper_bound:float = None) -> tuple:
    """Draws an instance and writes it as <name>.mps and <name>.aux.

    Returns:
        tuple: (mps path, aux path)
    """
    instance = generate(profile, size, seed, integer_upper_bound)
    os.makedirs(directory, exist_ok=True)
    mps_path = os.path.join(directory, instance.name + ".mps")
    aux_path = os.path.join(directory, instance.name + ".aux")
    write_instance(instance, mps_path, aux_path)
    logger.info("wrote %s", mps_path)
    return mps_path, aux_path
