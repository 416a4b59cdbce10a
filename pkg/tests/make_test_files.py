"""
Make local test input files
"""

import json

import numpy as np


def write_matrix_literal(fname, matrix):
    """Write a matrix literal ``{"dim", "rows"}`` and return its path as str."""
    matrix = np.asarray(matrix, dtype=float)
    literal = {"dim": matrix.shape[0], "rows": matrix.tolist()}
    with open(fname, "w") as f:
        json.dump(literal, f)
    return str(fname)


def write_config(fname, **kwargs):
    """Write harness keyword arguments as a JSON config file."""
    with open(fname, "w") as f:
        json.dump(kwargs, f)
    return str(fname)
