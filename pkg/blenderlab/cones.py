import itertools
import logging

import numpy as np

from blenderlab.error import NotContracting
from blenderlab.error import NotDominated
from blenderlab.error import ParameterArgumentError
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

DIRECTIONS_PER_PLANE = 32
MAX_DIRECTIONS = 4096
RATE_SAFETY = 1e-12
INVARIANCE_TOL = 1e-12


class ConeField(object):
    """Constant cone field around the F-plane: vectors with |v_E| <= tan(half_angle) |v_F|."""

    def __init__(self, E, F, half_angle):
        E = sorted(int(i) for i in E)
        F = sorted(int(i) for i in F)
        if not E or not F:
            raise ParameterArgumentError("cone needs nonempty E and F index sets")
        if set(E) & set(F) or sorted(E + F) != list(range(len(E) + len(F))):
            raise ParameterArgumentError(f"E={E} and F={F} do not partition the coordinates")
        if not 0 < half_angle < np.pi / 2:
            raise ParameterArgumentError(f"half_angle {half_angle} is not in (0, pi/2)")
        self.E = E
        self.F = F
        self.half_angle = float(half_angle)

    @classmethod
    def from_json(cls, data):
        check_required_parameter(data, "cone")
        for key in ("E", "F", "half_angle"):
            check_required_parameter(data.get(key), key)
        return cls(data["E"], data["F"], data["half_angle"])

    @property
    def dim(self):
        return len(self.E) + len(self.F)

    def angle(self, vectors):
        """Angle of each vector from the F-plane."""
        vectors = np.atleast_2d(vectors)
        return np.arctan2(np.linalg.norm(vectors[:, self.E], axis=1), np.linalg.norm(vectors[:, self.F], axis=1))

    def to_dict(self):
        return {"E": self.E, "F": self.F, "half_angle": self.half_angle}


class LinearMap(object):
    def __init__(self, matrix):
        self.matrix = as_matrix(matrix, "linear_map")

    def __call__(self, points):
        return np.atleast_2d(points) @ self.matrix.T

    def jacobian(self, points):
        return np.broadcast_to(self.matrix, (np.atleast_2d(points).shape[0],) + self.matrix.shape)


class SampledMap(object):
    """Differentiable map given by a vectorized function; Jacobians by central differences."""

    def __init__(self, func, fd_step=1e-5):
        self.func = func
        self.fd_step = fd_step

    def __call__(self, points):
        return self.func(np.atleast_2d(points))

    def jacobian(self, points):
        points = np.atleast_2d(points)
        columns = [
            (self.func(points + e) - self.func(points - e)) / (2 * self.fd_step)
            for e in np.eye(points.shape[1]) * self.fd_step
        ]
        return np.stack(columns, axis=-1)


def _splitting(splitting):
    if isinstance(splitting, ConeField):
        return splitting.E, splitting.F
    E, F = splitting
    return sorted(E), sorted(F)


def _blocks(matrix, E, F):
    if np.any(np.abs(matrix[np.ix_(E, F)]) > INVARIANCE_TOL) or np.any(np.abs(matrix[np.ix_(F, E)]) > INVARIANCE_TOL):
        raise ParameterArgumentError("splitting is not invariant under the linear map")
    return matrix[np.ix_(E, E)], matrix[np.ix_(F, F)]


def domination_time(self, linear_map, splitting) -> int:
    """
    |
    | **Domination Time**
    | *Least l with |L^l u| / |L^l v| < 1/2 for all unit u in E, v in F.*

    :parameter linear_map: matrix; invertible, block diagonal for the splitting.
    :parameter splitting: ConeField or (E, F) index lists.
    |
    """

    matrix = as_matrix(linear_map, "linear_map")
    E, F = _splitting(splitting)
    L_E, L_F = _blocks(matrix, E, F)
    if abs(np.linalg.det(matrix)) == 0:
        raise ParameterArgumentError("linear map is not invertible")
    rho_E = float(np.max(np.abs(np.linalg.eigvals(L_E))))
    floor_F = float(np.min(np.abs(np.linalg.eigvals(L_F))))
    if rho_E >= floor_F:
        raise NotDominated("E-rate %.6g is not below the F-rate %.6g" % (rho_E, floor_F))

    limit = int(self.tol("domination_max"))
    power_E = np.eye(len(E))
    power_F = np.eye(len(F))
    log_ratio = 0.0
    for step in range(1, limit + 1):
        power_E = L_E @ power_E
        power_F = L_F @ power_F
        top = np.linalg.norm(power_E, 2)
        bottom = np.linalg.svd(power_F, compute_uv=False).min()
        # rescale so long horizons neither overflow nor underflow
        power_E /= top
        power_F /= bottom
        log_ratio += np.log(top) - np.log(bottom)
        if log_ratio < -np.log(2):
            logging.debug("domination after %d steps" % step)
            return step
    raise NotDominated(f"no domination within {limit} steps")


def _unit_directions(dim):
    """Deterministic sample of unit vectors: signs in 1-d, circles on every coordinate 2-plane otherwise."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    angles = np.arange(DIRECTIONS_PER_PLANE) * (2 * np.pi / DIRECTIONS_PER_PLANE)
    vectors = []
    for i, j in itertools.combinations(range(dim), 2):
        v = np.zeros((angles.size, dim))
        v[:, i] = np.cos(angles)
        v[:, j] = np.sin(angles)
        vectors.append(v)
    return np.vstack(vectors)


def boundary_directions(cone: ConeField):
    """Unit vectors on the boundary of the cone, capped at 4096 by even thinning."""
    e_dirs = _unit_directions(len(cone.E))
    f_dirs = _unit_directions(len(cone.F))
    pairs = np.array(list(itertools.product(range(len(e_dirs)), range(len(f_dirs)))))
    if len(pairs) > MAX_DIRECTIONS:
        pairs = pairs[np.linspace(0, len(pairs) - 1, MAX_DIRECTIONS).astype(int)]
    directions = np.zeros((len(pairs), cone.dim))
    directions[:, cone.E] = np.sin(cone.half_angle) * e_dirs[pairs[:, 0]]
    directions[:, cone.F] = np.cos(cone.half_angle) * f_dirs[pairs[:, 1]]
    return directions


def check_cone_invariance(self, mapping, cone: ConeField, grid_resolution: int, domain=None):
    """
    |
    | **Check Cone Invariance**
    | *Worst angular margin of boundary directions of the cone mapped by the derivative over a grid.*

    :parameter mapping: matrix, LinearMap or SampledMap.
    :parameter cone: ConeField.
    :parameter grid_resolution: int; grid points per axis.
    :parameter domain: optional Box; by default the unit cube centred at the origin.
    |
    """

    check_required_parameter(cone, "cone")
    check_count_parameter(grid_resolution, "grid_resolution", minimum=1)
    if not hasattr(mapping, "jacobian"):
        mapping = LinearMap(mapping)
    domain = domain or Box(-np.ones(cone.dim), np.ones(cone.dim))
    points = domain.grid(grid_resolution)
    directions = boundary_directions(cone)
    frame_tol = self.tol("cone_frame")

    def run_chunk(chunk):
        inside = domain.contains_points(mapping(chunk), tol=1e-12)
        kept = chunk[inside]
        if not kept.shape[0]:
            return np.inf, int(np.count_nonzero(~inside))
        images = np.einsum("pij,dj->pdi", mapping.jacobian(kept), directions)
        angles = cone.angle(images.reshape(-1, cone.dim))
        return float(cone.half_angle - np.max(angles)), int(np.count_nonzero(~inside))

    chunks = np.array_split(points, max(1, min(self.threads * 4, len(points))))
    results = self.map_cells(run_chunk, [chunk for chunk in chunks if len(chunk)])
    worst = min(margin for margin, _ in results)
    skipped = sum(count for _, count in results)
    if np.isfinite(worst) and abs(worst) < frame_tol:
        worst = 0.0
    return {"ok": bool(np.isfinite(worst) and worst > 0), "worst_margin": float(worst), "skipped": skipped}


def uniform_rate_check(self, linear_map, bundle, horizon: int):
    """
    |
    | **Uniform Rate Check**
    | *Constants C and kappa with |block^n| <= C kappa^n for the restriction to an invariant bundle.*

    :parameter linear_map: matrix.
    :parameter bundle: list of int; coordinate indices of the bundle.
    :parameter horizon: int; largest power examined.
    |
    """

    check_count_parameter(horizon, "horizon", minimum=1)
    matrix = as_matrix(linear_map, "linear_map")
    bundle = sorted(int(i) for i in bundle)
    other = [i for i in range(matrix.shape[0]) if i not in bundle]
    if other and np.any(np.abs(matrix[np.ix_(other, bundle)]) > INVARIANCE_TOL):
        raise ParameterArgumentError("bundle is not invariant under the linear map")
    block = matrix[np.ix_(bundle, bundle)]
    radius = float(np.max(np.abs(np.linalg.eigvals(block))))
    if radius >= 1:
        raise NotContracting(radius, where="bundle block")
    kappa = radius + RATE_SAFETY
    log_C = 0.0
    log_norm = 0.0
    power = np.eye(len(bundle))
    for n in range(1, horizon + 1):
        power = block @ power
        norm = np.linalg.norm(power, 2)
        if norm == 0:
            break
        power /= norm
        log_norm += np.log(norm)
        log_C = max(log_C, log_norm - n * np.log(kappa))
    return {"C": float(np.exp(log_C)), "kappa": kappa}


def cone_half_angle_for(self, linear_map, splitting) -> float:
    """Widest half-angle whose cone is mapped inside the unit-slope cone: atan of the inverse rate ratio."""
    matrix = as_matrix(linear_map, "linear_map")
    E, F = _splitting(splitting)
    L_E, L_F = _blocks(matrix, E, F)
    ratio = float(np.linalg.norm(L_E, 2) / np.linalg.svd(L_F, compute_uv=False).min())
    if ratio >= 1:
        raise NotDominated("one-step rate ratio %.6g is not below one" % ratio)
    return float(min(np.arctan(1.0 / ratio), np.pi / 2 - self.tol("cone_frame")))
