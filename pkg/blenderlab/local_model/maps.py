import logging

import numpy as np

from blenderlab.error import LeftNeighborhood
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameters

SINGULAR_FLOOR = 1e-9


def _implicit(self):
    return {"tol": self.tol("implicit"), "iterations": int(self.tol("implicit_iterations"))}


def apply_T0(self, model, point, k: int):
    """
    |
    | **Linear Neighbourhood Map**
    | *k-fold iterate (A^k u, B^k x, C^k y, D^k v); every iterate must remain in W.*

    :parameter model: LocalTangencyModel.
    :parameter point: array; one point or a stack of points along the last axis.
    :parameter k: int; number of iterates.
    |
    """

    check_required_parameters([[model, "model"], [point, "point"]])
    check_count_parameter(k, "k")
    return model.t0(np.asarray(point, dtype=float), k)


def apply_T1(self, model, point):
    """
    |
    | **Transition Map**
    | *Image of points of the exit box near the tangency.*

    :parameter model: LocalTangencyModel.
    :parameter point: array; one point or a stack of points inside the exit box.
    |
    """

    check_required_parameters([[model, "model"], [point, "point"]])
    points = np.asarray(point, dtype=float)
    _require_exit_box(model, points)
    return model.t1(points, **_implicit(self))


def _require_exit_box(model, points):
    inside = np.asarray(model.pi_minus.contains_points(points, tol=1e-9)).reshape(-1)
    if not np.all(inside):
        outside = points.reshape(-1, model.dims.total)[~inside][0]
        raise LeftNeighborhood(0, outside.tolist(), region="pi_minus")


def return_map(self, model, k: int, point):
    """
    |
    | **Return Map**
    | *T1 composed with the k-fold linear map.*

    :parameter model: LocalTangencyModel.
    :parameter k: int; number of linear iterates.
    :parameter point: array; one point or a stack of points of the strip.
    |
    """

    exit_points = apply_T0(self, model, point, k)
    _require_exit_box(model, exit_points)
    return model.t1(exit_points, **_implicit(self))


def return_jacobian(self, model, k, points, check=False):
    """Derivative of the return map at each point."""
    exit_points = model.t0(np.asarray(points, dtype=float), k, check=check)
    jac = model.dt1(exit_points, fd_step=self.tol("fd_step"), **_implicit(self))
    return jac @ model.t0_matrix(k)


def _square_range(lo, hi):
    sq_lo = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(lo * lo, hi * hi))
    return sq_lo, np.maximum(lo * lo, hi * hi)


def _affine_range(offset, terms):
    """Interval hull of offset + sum M @ z over z in the given boxes."""
    center = np.array(offset, dtype=float)
    radius = np.zeros_like(center)
    for M, box in terms:
        if M.size == 0:
            continue
        center = center + M @ box.center
        radius = radius + np.abs(M) @ (box.widths / 2)
    return center - radius, center + radius


def transition_enclosure(self, model, box=None):
    """
    |
    | **Transition Enclosure**
    | *Interval enclosure of the transition image of a box inside the exit box, inflated by the remainder bound.*

    :parameter model: LocalTangencyModel.
    :parameter box: optional Box; defaults to the exit box.
    |
    """

    box = model.pi_minus if box is None else box
    T = model.transition
    dims = model.dims
    u, x, y, v = (box.sub(dims[name]) for name in "uxyv")
    d = Box(y.lo - model.y_minus, y.hi - model.y_minus)
    q = Box(*_square_range(d.lo, d.hi))
    base = Box(v.lo - model.v_minus, v.hi - model.v_minus)
    vbar = Box(
        *_affine_range(
            np.zeros(dims.sizes["v"]),
            [(T.d4_inv, base), (-T.d4_inv @ T["A4"], u), (-T.d4_inv @ T["B4"], x), (-T.d4_inv @ T["C4"], d)],
        )
    )
    d_max = float(np.max(np.abs(np.concatenate([d.lo, d.hi])))) if d.dim else 0.0
    slack = T.remainder.bound(d_max)
    shift = np.zeros(dims.sizes["y"])
    if dims.sizes["y"]:
        shift[0] = model.shift
    pieces = [
        _affine_range(model.u_plus, [(T["A1"], u), (T["B1"], x), (T["C1"], d), (T["D1"], vbar)]),
        _affine_range(model.x_plus, [(T["A2"], u), (T["B2"], x), (T["C2"], d), (T["D2"], vbar)]),
        _affine_range(shift, [(T["A3"], u), (T["B3"], x), (T["C3"], q), (T["D3"], vbar)]),
        (vbar.lo, vbar.hi),
    ]
    lo = np.concatenate([p[0] for p in pieces]) - slack
    hi = np.concatenate([p[1] for p in pieces]) + slack
    return Box(lo, hi)


def _condition(ok, value):
    return {"ok": bool(ok), "value": float(value)}


def _min_singular(M):
    if M.size == 0:
        return 0.0
    return float(np.min(np.linalg.svd(M, compute_uv=False)))


def check_generic_conditions(self, model):
    """
    |
    | **Generic Conditions**
    | *Numeric checks of the tangency conditions at Y_minus; failures are report entries.*

    :parameter model: LocalTangencyModel.
    |
    """

    T = model.transition
    dims = model.dims
    N = dims.total
    Y = model.Y_minus
    jac = model.dt1(Y, fd_step=self.tol("fd_step"), **_implicit(self))

    unstable_cols = np.r_[np.arange(N)[dims["y"]], np.arange(N)[dims["v"]]]
    stable_dirs = np.eye(N)[:, : dims.m]
    combined = np.hstack([jac[:, unstable_cols], stable_dirs])
    defect = N - np.linalg.matrix_rank(combined, tol=SINGULAR_FLOOR)

    central = dims.central
    central_det = np.linalg.det(jac[np.ix_(central, central)])

    report = {
        "C1": _condition(defect == 1, defect),
        "C2": _condition(np.linalg.norm(T["B3"]) > SINGULAR_FLOOR, np.linalg.norm(T["B3"])),
        "C3": _condition(_min_singular(T["C3"]) > SINGULAR_FLOOR, _min_singular(T["C3"])),
        "C4": _condition(abs(central_det) > SINGULAR_FLOOR, central_det),
    }
    if dims.sizes["v"]:
        report["C5"] = _condition(_min_singular(T["D4"]) > SINGULAR_FLOOR, _min_singular(T["D4"]))
    else:
        report["C5"] = _condition(True, 1.0)
    report["all_ok"] = all(entry["ok"] for entry in report.values())
    logging.debug("generic conditions %s" % {key: value["ok"] for key, value in report.items() if key != "all_ok"})
    return report
