import itertools
import logging

import numpy as np

from blenderlab.error import ParameterArgumentError
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter
from blenderlab.unfolding.params import NAMES
from blenderlab.unfolding.params import UnfoldingParams
from blenderlab.unfolding.saddles import find_single_round_saddles

MAX_BISECTIONS = 40
BASE_COLUMNS = ["k", "t", "alpha", "beta", "u_index", "residual"]


def axis_values(spec, name):
    """Grid points of one parameter axis: {"lo", "hi", "steps"}; missing axis is {0}."""
    if spec is None:
        return np.zeros(1)
    if not isinstance(spec, dict):
        raise ParameterArgumentError(f"{name} must be an object with lo, hi, steps")
    for key in ("lo", "hi", "steps"):
        check_required_parameter(spec.get(key), f"{name}.{key}")
    steps = spec["steps"]
    check_count_parameter(steps, f"{name}.steps", minimum=1)
    if steps == 1:
        return np.array([float(spec["lo"])])
    return np.linspace(float(spec["lo"]), float(spec["hi"]), steps)


def k_values(k_range):
    check_required_parameter(k_range, "k")
    if len(k_range) != 2:
        raise ParameterArgumentError("k must be [k_min, k_max]")
    k_min, k_max = k_range
    check_count_parameter(k_min, "k_min")
    check_count_parameter(k_max, "k_max")
    return list(range(k_min, k_max + 1))


def coordinate_columns(dims):
    columns = []
    for name in "uxyv":
        size = dims.sizes[name]
        columns.extend([name] if size == 1 else [f"{name}{i + 1}" for i in range(size)])
    return columns


class SweepResult(object):
    def __init__(self, rows, columns, summary):
        self.rows = rows
        self.columns = columns
        self.summary = summary

    def to_dict(self):
        return {"rows": self.rows, "columns": self.columns, "summary": self.summary}


def _target_present(self, model, k, params, target):
    return any(s.u_index == target for s in find_single_round_saddles(self, model, params, k))


def _refine(self, model, k, alpha, beta, target, outside, inside):
    """Bisect between a grid point without and one with a saddle of the target u-index."""
    tol = self.tol("bisection")
    for _ in range(MAX_BISECTIONS):
        if abs(inside - outside) <= tol * max(1.0, abs(inside)):
            break
        mid = (outside + inside) / 2
        if _target_present(self, model, k, UnfoldingParams(mid, alpha, beta), target):
            inside = mid
        else:
            outside = mid
    return inside


def _windows(self, model, k, alpha, beta, ts, flags, target, refine):
    windows = []
    runs = itertools.groupby(enumerate(flags), key=lambda item: item[1])
    for present, group in runs:
        if not present:
            continue
        indices = [i for i, _ in group]
        first, last = indices[0], indices[-1]
        lo, hi = ts[first], ts[last]
        if refine and first > 0:
            lo = _refine(self, model, k, alpha, beta, target, ts[first - 1], lo)
        if refine and last < len(ts) - 1:
            hi = _refine(self, model, k, alpha, beta, target, ts[last + 1], hi)
        windows.append(
            {"alpha": alpha, "beta": beta, "lo": lo, "hi": hi, "width": hi - lo, "grid_points": len(indices)}
        )
    return windows


def index_variation_sweep(self, model, k_range, param_grid, target_u_index=None, refine=True):
    """
    |
    | **Index Variation Sweep**
    | *Single-round saddles over a (k, t, alpha, beta) grid and the parameter windows of a target u-index.*

    :parameter model: LocalTangencyModel; the base model.
    :parameter k_range: [k_min, k_max]; inclusive, empty when k_min > k_max.
    :parameter param_grid: dict; axes "t", "alpha", "beta" as {"lo", "hi", "steps"}.
    :parameter target_u_index: optional int; window target, by default n + 1.
    :parameter refine: optional bool; bisect window endpoints between grid points. Default True.
    |
    """

    check_required_parameter(model, "model")
    param_grid = param_grid or {}
    unknown = set(param_grid) - set(NAMES)
    if unknown:
        raise ParameterArgumentError(f"unknown sweep axes {sorted(unknown)}")
    ks = k_values(k_range)
    ts = axis_values(param_grid.get("t"), "t")
    alphas = axis_values(param_grid.get("alpha"), "alpha")
    betas = axis_values(param_grid.get("beta"), "beta")
    target = model.dims.n + 1 if target_u_index is None else target_u_index

    cells = [
        (k, float(t), float(alpha), float(beta))
        for k in ks
        for t in ts
        for alpha in alphas
        for beta in betas
    ]

    def run_cell(cell):
        k, t, alpha, beta = cell
        return find_single_round_saddles(self, model, UnfoldingParams(t, alpha, beta), k)

    searches = self.map_cells(run_cell, cells)
    columns = BASE_COLUMNS + coordinate_columns(model.dims)
    rows = []
    for (k, t, alpha, beta), search in zip(cells, searches):
        for saddle in search:
            rows.append([k, t, alpha, beta, saddle.u_index, saddle.residual] + saddle.location.tolist())

    found = {cell: search for cell, search in zip(cells, searches)}
    windows = {}
    for k in ks:
        windows[k] = []
        for alpha in alphas:
            for beta in betas:
                flags = [
                    any(s.u_index == target for s in found[(k, float(t), float(alpha), float(beta))])
                    for t in ts
                ]
                windows[k].extend(
                    _windows(self, model, k, float(alpha), float(beta), ts, flags, target, refine)
                )
        logging.info("sweep k=%d: %d windows for u-index %d" % (k, len(windows[k]), target))
    summary = {"target_u_index": target, "windows": windows}
    return SweepResult(rows, columns, summary)
