import json
import numbers

import numpy as np
import pandas as pd

from blenderlab.error import (
    ParameterRequiredError,
    ParameterValueError,
    ParameterTypeError,
    ParameterArgumentError,
)

DEFAULT_TOLERANCES = {
    "modulus": 1e-9,
    "nonreal": 1e-9,
    "angle": 1e-12,
    "implicit": 1e-12,
    "implicit_iterations": 100,
    "newton_residual": 1e-10,
    "newton_steps": 200,
    "dedup": 1e-8,
    "bisection": 1e-10,
    "cone_frame": 1e-9,
    "quadrature_points": 64,
    "k_search_max": 400,
    "domination_max": 1000000,
    "fd_step": 1e-5,
    "strip_inset": 1e-9,
    "tangency_samples": 65536,
}


def check_required_parameter(value, name):
    if value is None or (isinstance(value, (str, list, tuple, dict)) and not value):
        raise ParameterRequiredError([name])


def check_required_parameters(params):
    """validate multiple parameters
    params = [
        [model, 'model'],
        [10, 'k']
    ]

    """
    for p in params:
        check_required_parameter(p[0], p[1])


def check_enum_parameter(value, allowed):
    if value not in set(allowed):
        raise ParameterValueError([value])


def check_type_parameter(value, name, data_type):
    if value is not None and not isinstance(value, data_type):
        raise ParameterTypeError([name, data_type])


def check_count_parameter(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ParameterTypeError([name, int])
    if value < minimum:
        raise ParameterArgumentError(f"{name} must be at least {minimum}, got {value}")


def merge_tolerances(overrides=None) -> dict:
    tolerances = dict(DEFAULT_TOLERANCES)
    if not overrides:
        return tolerances
    for key, value in overrides.items():
        check_enum_parameter(key, DEFAULT_TOLERANCES)
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ParameterTypeError([key, float])
        tolerances[key] = type(DEFAULT_TOLERANCES[key])(value)
    return tolerances


def as_matrix(value, name, shape=None) -> np.ndarray:
    """Read a nested list into a 2-d float array; scalars become 1x1 blocks."""
    if value is None:
        raise ParameterRequiredError([name])
    matrix = np.atleast_2d(np.asarray(value, dtype=float))
    if matrix.ndim != 2:
        raise ParameterArgumentError(f"{name} must be a matrix")
    if shape is not None and matrix.shape != tuple(shape):
        raise ParameterArgumentError(
            f"{name} must have shape {tuple(shape)}, got {matrix.shape}"
        )
    return matrix


def parse_complex_list(pairs, name="multipliers") -> list:
    check_required_parameter(pairs, name)
    values = []
    for pair in pairs:
        if isinstance(pair, numbers.Real):
            values.append(complex(pair, 0.0))
            continue
        if len(pair) != 2:
            raise ParameterArgumentError(f"{name} entries must be [re, im] pairs")
        values.append(complex(float(pair[0]), float(pair[1])))
    return values


def to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return value


def dump_json(report) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def write_json(path, report):
    with open(path, "w", newline="\n") as fh:
        fh.write(dump_json(report))


def write_csv(path, rows, columns):
    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")


def config_logging(logging, logging_devel, log_file=None):
    logging.basicConfig(level=logging_devel, filename=log_file)
