"""Benchmark runs of several solver configurations over an instance corpus,
and performance-profile curves built from their timings.

   Functions:
       find_corpus
       run_one
       run_profile
       write_csv
       read_csv
       performance_profile
"""

__all__ = ["CSV_COLUMNS", "find_corpus", "run_one", "run_profile", "write_csv", "read_csv",
           "performance_profile"]

import concurrent.futures
import csv
import glob
import logging
import os
import numpy as np

from . import solve
from .enums import BilevelStatus
from .exceptions import InvalidParameterException
from .fileio import read_instance
from .params import SolverParams

CSV_COLUMNS = ["instance", "config", "status", "value", "time", "nodes", "sl_count", "ub_count"]

logger = logging.getLogger(__name__)


def find_corpus(directory:str) -> list:
    """Lists (name, mps path, aux path) for every .mps file with a matching .aux file, sorted by name.

    Raises:
        InvalidParameterException: if the directory holds no instance.
    """
    corpus = []
    for mps_path in sorted(glob.glob(os.path.join(directory, "*.mps"))):
        aux_path = os.path.splitext(mps_path)[0] + ".aux"
        if os.path.exists(aux_path):
            corpus.append((os.path.splitext(os.path.basename(mps_path))[0], mps_path, aux_path))
    if not corpus:
        raise InvalidParameterException("No instance found in {:s}.".format(directory))
    return corpus


def run_one(name:str, mps_path:str, aux_path:str, config:str, time_limit:float = None,
            constant_rhs:bool = False) -> dict:
    """Solves one instance with one named configuration.

    Parameters:
        name(str): instance label
        mps_path(str), aux_path(str): instance files
        config(str): a SolverParams.from_preset name
        time_limit(float): seconds (None for none)
        constant_rhs(bool): accept constant second-level right-hand sides

    Returns:
        dict: one CSV row.
    """
    instance = read_instance(mps_path, aux_path, constant_rhs)
    params = SolverParams.from_preset(config, time_limit=time_limit, event_log=False)
    result = solve(instance, params)
    stats = result.statistics
    logger.info("%s / %s: %s %g", name, config, result.status.name, result.objective)
    return {"instance": name, "config": config, "status": result.status.name, "value": result.objective,
            "time": stats["wall_time"], "nodes": stats["nodes"], "sl_count": stats["sl_milp_solves"],
            "ub_count": stats["ub_solves"]}


def run_profile(directory:str, configs:list, time_limit:float = None, jobs:int = 1,
                constant_rhs:bool = False) -> list:
    """Runs every configuration on every instance of a corpus.

    Parameters:
        directory(str): folder of .mps/.aux pairs
        configs(list): configuration names
        time_limit(float): per-run budget in seconds
        jobs(int): worker processes (1 runs in this process)
        constant_rhs(bool): accept constant second-level right-hand sides

    Returns:
        list: CSV rows in instance order, then configuration order.
    """
    if not configs:
        raise InvalidParameterException("No configuration given.")
    for config in configs:
        SolverParams.from_preset(config)
    tasks = [(name, mps, aux, config, time_limit, constant_rhs)
             for name, mps, aux in find_corpus(directory) for config in configs]
    if jobs <= 1:
        return [run_one(*task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = [executor.submit(run_one, *task) for task in tasks]
        return [future.result() for future in futures]


def write_csv(rows:list, path:str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def read_csv(path:str) -> list:
    """Reads rows written by write_csv, converting numbers back."""
    rows = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            row["value"] = float(row["value"])
            row["time"] = float(row["time"])
            for key in ("nodes", "sl_count", "ub_count"):
                row[key] = int(row[key])
            rows.append(row)
    return rows


def performance_profile(rows:list, taus=None) -> dict:
    """Cumulative time-ratio curves, one per configuration.

    For each instance the fastest configuration that proved optimality sets
    the reference time; rho_c(tau) is the share of instances configuration c
    solved within tau times that reference. Unsolved runs never count.

    Parameters:
        rows(list): CSV rows as produced by run_profile
        taus(array): ratios to evaluate (default the observed ratios)

    Returns:
        dict: config -> (taus, fractions), two ndarrays of equal length.
    """
    configs = list(dict.fromkeys(row["config"] for row in rows))
    instances = list(dict.fromkeys(row["instance"] for row in rows))
    ratios = {config: np.full(len(instances), np.inf) for config in configs}
    for k, instance in enumerate(instances):
        solved = [row for row in rows if row["instance"] == instance and row["status"] == BilevelStatus.Optimal.name]
        if not solved:
            continue
        # a zero timing would make every ratio infinite
        best = max(min(float(row["time"]) for row in solved), 1e-9)
        for row in solved:
            ratios[row["config"]][k] = max(float(row["time"]), 1e-9) / best
    if taus is None:
        finite = np.concatenate([r[np.isfinite(r)] for r in ratios.values()]) if ratios else np.zeros(0)
        taus = np.unique(np.concatenate([[1.0], finite]))
    taus = np.asarray(taus, dtype=float)
    count = max(len(instances), 1)
    return {config: (taus, np.array([np.count_nonzero(ratios[config] <= tau) / count for tau in taus]))
            for config in configs}
