import logging

import numpy as np

from blenderlab.error import (
    EmptyStrip,
    WrongCodimension,
    QuantifierViolation,
    ParameterArgumentError,
)
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

BLOCKS = "uxyv"


class Strip(object):
    """Entry and exit boxes of the points returning after k linear iterates.

    Resized strips also carry their s-boundary faces (on the Theta levels) and
    u-boundary faces, plus the quantifiers they were built with.
    """

    def __init__(self, k, box_plus, box_minus, dims, s_boundary=None, u_boundary=None, **extras):
        self.k = k
        self.box_plus = box_plus
        self.box_minus = box_minus
        self.dims = dims
        self.s_boundary = s_boundary
        self.u_boundary = u_boundary
        self.extras = extras

    @property
    def resized(self):
        return self.s_boundary is not None

    @property
    def rho(self):
        return self.extras.get("rho")

    @property
    def diam_u(self):
        return self.box_plus.diameter(self.dims["y"])

    @property
    def diam_c(self):
        return self.box_plus.diameter(self.dims["x"])

    @property
    def diam_uu(self):
        return self.box_plus.diameter(self.dims["u"])

    def to_dict(self):
        report = {
            "k": self.k,
            "box_plus": self.box_plus,
            "box_minus": self.box_minus,
            "diam_u": self.diam_u,
            "diam_c": self.diam_c,
        }
        if self.resized:
            report["s_boundary"] = self.s_boundary
            report["u_boundary"] = self.u_boundary
        report.update(self.extras)
        return report


def _is_diagonal(M):
    return np.count_nonzero(M - np.diag(np.diag(M))) == 0


def block_preimage(M, target):
    """Box of points sent into `target` by M.

    Exact for diagonal M; otherwise the largest box, scaled from the bounding box of
    the true preimage about the preimage of the centre, whose image stays in `target`.
    """
    if M.size == 0 or _is_diagonal(M):
        return target.linear_preimage(M)
    outer = target.linear_preimage(M)
    center = np.linalg.solve(M, target.center)
    half = outer.widths / 2
    reach = np.abs(M) @ half
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(reach > 0, (target.widths / 2) / reach, np.inf)
    s = min(float(np.min(scale)), 1.0)
    return Box.around(center, s * half)


def _strip_box(model, k):
    lo, hi = [], []
    for name, step in zip(BLOCKS, model.t0_blocks(1)):
        index = model.dims[name]
        sub = model.pi_plus.sub(index)
        if sub.dim == 0:
            continue
        M = np.eye(sub.dim)
        for _ in range(k + 1):
            sub = sub.intersect(block_preimage(M, model.W.sub(index)))
            M = step @ M
        M = np.linalg.matrix_power(step, k)
        sub = sub.intersect(block_preimage(M, model.pi_minus.sub(index)))
        lo.append(sub.lo)
        hi.append(sub.hi)
    return Box(np.concatenate(lo), np.concatenate(hi))


def _search_first_index(model, k_max):
    for k in range(1, k_max + 1):
        if not _strip_box(model, k).is_empty():
            return k
    return None


def first_strip_index(self, model):
    """
    |
    | **First Strip Index**
    | *Least k whose strip is nonempty, searched up to the k_search_max tolerance.*

    :parameter model: LocalTangencyModel.
    |
    """

    check_required_parameter(model, "model")
    k0 = _search_first_index(model, int(self.tol("k_search_max")))
    if k0 is None:
        raise EmptyStrip(int(self.tol("k_search_max")))
    logging.debug("first nonempty strip at k0=%d" % k0)
    return k0


def strip(self, model, k: int):
    """
    |
    | **Strip**
    | *Points of the entry box whose k-th linear iterate lies in the exit box.*

    :parameter model: LocalTangencyModel.
    :parameter k: int; number of linear iterates.
    |
    """

    check_required_parameter(model, "model")
    check_count_parameter(k, "k")
    box_plus = _strip_box(model, k)
    if k == 0 or box_plus.is_empty():
        raise EmptyStrip(k, _search_first_index(model, int(self.tol("k_search_max"))))
    box_minus = box_plus.linear_image(model.t0_matrix(k)).intersect(model.pi_minus)
    return Strip(k, box_plus, box_minus, model.dims)


def _theta_pair(levels, y_minus, j):
    below = sorted(level for level in levels if level < y_minus)
    above = sorted((level for level in levels if level > y_minus), reverse=True)
    if j < 1 or j > min(len(below), len(above)):
        raise ParameterArgumentError(
            f"j={j} needs {j} Theta levels on each side of y_minus, got {len(below)} below and {len(above)} above"
        )
    return below[j - 1], above[j - 1]


def resized_strip(self, model, j: int, k: int, theta_planes, rho: float):
    """
    |
    | **Resized Strip**
    | *Strip whose s-boundary lies on the j-th pair of Theta levels around y_minus.*

    :parameter model: LocalTangencyModel; u-index one.
    :parameter j: int; Theta pair, counted from the outermost pair inwards.
    :parameter k: int; number of linear iterates.
    :parameter theta_planes: list of float; y-levels of the Theta planes.
    :parameter rho: float; lower bound required for the c-diameter.
    |
    """

    check_required_parameter(theta_planes, "theta_planes")
    check_required_parameter(rho, "rho")
    if model.dims.n != 1:
        raise WrongCodimension(model.dims.n)
    y_minus = float(model.y_minus[0])
    lower, upper = _theta_pair([float(level) for level in theta_planes], y_minus, j)
    delta = upper - lower
    K = model.K
    margin = 1 - 10 * K * delta / rho
    if margin <= 0:
        raise QuantifierViolation(
            "K*delta=%.6g is not below rho/10=%.6g" % (K * delta, rho / 10), margin
        )

    base = strip(self, model, k)
    y_axis = model.dims["y"].start
    gamma_k = float(np.linalg.matrix_power(model.C, k)[0, 0])
    levels = sorted((lower / gamma_k, upper / gamma_k))
    y_range = Box([levels[0]], [levels[1]]).intersect(base.box_plus.sub(model.dims["y"]))
    if y_range.is_empty():
        raise EmptyStrip(k)
    # open strip: faces sit just inside the Theta levels
    inset = self.tol("strip_inset") * float(y_range.widths[0])
    y_range = Box(y_range.lo + inset, y_range.hi - inset)
    box_plus = base.box_plus.replace(model.dims["y"], y_range)
    if box_plus.diameter(model.dims["x"]) <= rho:
        raise QuantifierViolation(
            "c-diameter %.6g is not above rho=%.6g" % (box_plus.diameter(model.dims["x"]), rho), margin
        )

    s_boundary = [
        {"axis": y_axis, "side": "lo", "value": float(y_range.lo[0])},
        {"axis": y_axis, "side": "hi", "value": float(y_range.hi[0])},
    ]
    u_boundary = [
        {"axis": axis, "side": side, "value": float(getattr(box_plus, side)[axis])}
        for axis in range(model.dims.total)
        if axis != y_axis
        for side in ("lo", "hi")
    ]
    box_minus = box_plus.linear_image(model.t0_matrix(k)).intersect(model.pi_minus)
    logging.debug("resized strip k=%d j=%d delta=%g margin=%.6g" % (k, j, delta, margin))
    return Strip(
        k,
        box_plus,
        box_minus,
        model.dims,
        s_boundary,
        u_boundary,
        j=j,
        delta=delta,
        rho=rho,
        K=K,
        margin=margin,
        diam_u_bound=delta / abs(gamma_k),
    )


def is_centered(self, model, strip, point, ratio=0.1):
    """Whether `point` keeps c-distance above rho*ratio from the u-boundary of a resized strip of `model`."""
    if not strip.resized:
        raise ParameterArgumentError("centering is defined for resized strips only")
    if strip.dims.to_dict() != model.dims.to_dict():
        raise ParameterArgumentError(f"strip of dimensions {strip.dims.to_dict()} does not belong to the model")
    x = np.asarray(point, dtype=float)[strip.dims["x"]]
    sub = strip.box_plus.sub(strip.dims["x"])
    distance = float(np.min(np.minimum(x - sub.lo, sub.hi - x)))
    return distance > strip.rho * ratio
