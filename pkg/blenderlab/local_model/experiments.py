import logging

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import pdist

from blenderlab.error import (
    ConeViolation,
    DegenerateDisk,
    WrongCodimension,
    ParameterArgumentError,
)
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_required_parameters
from blenderlab.local_model.maps import return_jacobian
from blenderlab.local_model.maps import return_map
from blenderlab.local_model.strips import strip as strip_for

MAX_QUADRATURE_POINTS = 2 ** 18
DIAMETER_SAMPLES = 17
MAX_DIAMETER_POINTS = 4096


class AffineDisk(object):
    """Affine disk s -> origin + frame @ s over the unit cube."""

    def __init__(self, origin, frame):
        self.origin = np.asarray(origin, dtype=float).reshape(-1)
        self.frame = as_matrix(frame, "frame")
        if self.frame.shape[0] != self.origin.size:
            raise ParameterArgumentError("frame rows must match the point dimension")

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise ParameterArgumentError("disk must be a JSON object")
        check_required_parameters([[data.get("origin"), "origin"], [data.get("frame"), "frame"]])
        return cls(data["origin"], data["frame"])

    @property
    def dim(self):
        return self.frame.shape[1]

    def points(self, params):
        return self.origin + np.asarray(params) @ self.frame.T

    def corners(self):
        cube = np.array(np.meshgrid(*[[0.0, 1.0]] * self.dim, indexing="ij")).reshape(self.dim, -1).T
        return self.points(cube)

    def extent(self, index):
        """Euclidean diameter of the projection onto the given coordinates."""
        widths = np.sum(np.abs(self.frame[index]), axis=1)
        return float(np.sqrt(np.sum(widths ** 2)))

    def to_dict(self):
        return {"origin": self.origin, "frame": self.frame}


def cone_slope(frame, e_rows, f_rows):
    """Largest |w_E| / |w_F| over tangent vectors w of the frame."""
    _, singular, vt = np.linalg.svd(frame, full_matrices=False)
    keep = singular > 1e-12 * max(float(np.max(singular, initial=0.0)), 1e-300)
    if not np.any(keep):
        return 0.0
    basis = frame @ vt[keep].T
    part_e = basis[e_rows]
    part_f = basis[f_rows]
    if part_e.size == 0:
        return 0.0
    gram_f = part_f.T @ part_f
    if np.min(np.linalg.eigvalsh(gram_f)) <= 1e-24 * max(np.trace(gram_f), 1.0):
        return np.inf
    values = eigh(part_e.T @ part_e, gram_f, eigvals_only=True)
    return float(np.sqrt(max(np.max(values), 0.0)))


def _check_cone(self, model, disk):
    slope = cone_slope(disk.frame, model.dims["u"], model.dims.central)
    bound = np.tan(model.cone_half_angle)
    if slope > bound + self.tol("cone_frame"):
        raise ConeViolation(slope, bound)
    return slope


def _require_inside(strip, disk):
    if not np.all(strip.box_plus.contains_points(disk.corners(), tol=1e-9)):
        raise ParameterArgumentError(f"disk leaves the strip for k={strip.k}")


def _midpoint_grid(d, per_axis):
    axis = (np.arange(per_axis) + 0.5) / per_axis
    mesh = np.meshgrid(*[axis] * d, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


def _mean_ratio(self, model, k, disk, per_axis, base_det):
    central = model.dims.central
    points = disk.points(_midpoint_grid(disk.dim, per_axis))
    jac = return_jacobian(self, model, k, points)
    image_frames = (jac @ disk.frame)[:, central, :]
    return float(np.mean(np.abs(np.linalg.det(image_frames)))) / base_det


def volume_expansion_experiment(self, model, k: int, disk: AffineDisk):
    """
    |
    | **Volume Expansion**
    | *Growth of center-unstable volume of a disk under the k-th return map.*

    :parameter model: LocalTangencyModel.
    :parameter k: int; return index, at least the first strip index.
    :parameter disk: AffineDisk; (m_s + n)-dimensional disk inside the strip, tangent to the center-unstable cone.
    |
    """

    check_required_parameters([[model, "model"], [disk, "disk"]])
    if model.L is None:
        raise model.calibration_error
    central = model.dims.central
    if disk.dim != central.size:
        raise ParameterArgumentError(f"disk must be {central.size}-dimensional, got {disk.dim}")
    strip = strip_for(self, model, k)

    base_det = abs(np.linalg.det(disk.frame[central, :]))
    scale = np.prod(np.linalg.norm(disk.frame, axis=0))
    if base_det <= 1e-12 * max(scale, 1e-300):
        raise DegenerateDisk("disk has zero center-unstable volume")
    _check_cone(self, model, disk)
    _require_inside(strip, disk)

    d = disk.dim
    per_axis = int(self.tol("quadrature_points"))
    per_axis = max(2, min(per_axis, int(np.floor(MAX_QUADRATURE_POINTS ** (1.0 / d) + 1e-9))))
    ratio = _mean_ratio(self, model, k, disk, per_axis, base_det)
    richardson = None
    if d <= 2:
        richardson = abs(_mean_ratio(self, model, k, disk, 2 * per_axis, base_det) - ratio)

    jacobian = model.leading_jacobian
    bound = model.L * jacobian ** k
    logging.debug("volume k=%d ratio=%.6g bound=%.6g" % (k, ratio, bound))
    return {
        "k": k,
        "ratio": ratio,
        "bound": bound,
        "bound_ok": bool(ratio > bound),
        "L_used": model.L,
        "leading_jacobian": jacobian,
        "richardson_delta": richardson,
    }


def _norm(M):
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def _sample_grid(d):
    per_axis = DIAMETER_SAMPLES
    while per_axis > 2 and per_axis ** d > MAX_DIAMETER_POINTS:
        per_axis -= 1
    axis = np.linspace(0.0, 1.0, per_axis)
    mesh = np.meshgrid(*[axis] * d, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


def diameter_experiment(self, model, k: int, disk: AffineDisk):
    """
    |
    | **Diameter Bound**
    | *Compares the c-diameter of the returned disk with the u-diameter growth bound.*

    :parameter model: LocalTangencyModel; u-index one.
    :parameter k: int; return index.
    :parameter disk: AffineDisk inside the strip, tangent to the center-unstable cone.
    |
    """

    check_required_parameters([[model, "model"], [disk, "disk"]])
    if model.dims.n != 1:
        raise WrongCodimension(model.dims.n)
    strip = strip_for(self, model, k)
    _check_cone(self, model, disk)
    _require_inside(strip, disk)

    dims = model.dims
    T = model.transition
    diam_u = disk.extent(dims["y"])
    diam_c = disk.extent(dims["x"])
    diam_uu = disk.extent(dims["u"])

    image = return_map(self, model, k, disk.points(_sample_grid(disk.dim)))
    projected = image[:, dims["x"]]
    out = float(np.max(pdist(projected))) if projected.shape[0] > 1 else 0.0

    A_k, B_k, C_k, _ = model.t0_blocks(k)
    contraction = 1.05 * max(_norm(T["A2"]), _norm(T["B2"])) * (_norm(A_k) * diam_uu + _norm(B_k) * diam_c)
    bound = model.K * _norm(C_k) * diam_u + contraction
    ok = out < bound or out == 0.0
    return {
        "k": k,
        "diam_c_out": out,
        "bound": bound,
        "ok": bool(ok),
        "diam_u": diam_u,
        "K": model.K,
    }


def central_rectangle_disk(strip, fill=1.0):
    """u-flat disk spanning `fill` of the central extent of a strip, centred in it."""
    box = strip.box_plus
    central = strip.dims.central
    widths = fill * box.widths[central]
    frame = np.zeros((box.dim, central.size))
    frame[central, np.arange(central.size)] = widths
    origin = box.center.copy()
    origin[central] -= widths / 2
    return AffineDisk(origin, frame)


def random_cu_disk(self, strip, stream=0):
    """Seeded u-flat disk inside a strip: small offsets from the centre, slightly tilted frame."""
    rng = self.rng(stream)
    box = strip.box_plus
    central = strip.dims.central
    d = central.size
    half = box.widths[central] / 2
    tilt = rng.uniform(-1.0, 1.0, size=(d, d))
    np.fill_diagonal(tilt, 0.0)
    frame = np.zeros((box.dim, d))
    frame[central, :] = 0.3 * half[:, None] * (np.eye(d) + 0.1 * tilt)
    center = box.center.copy()
    center[central] += rng.uniform(-0.2, 0.2, size=d) * half
    origin = center - frame @ np.full(d, 0.5)
    return AffineDisk(origin, frame)
