import logging

import numpy as np
from scipy.linalg import block_diag

from blenderlab.error import (
    ParameterArgumentError,
    ParameterValueError,
    LeftNeighborhood,
    ImplicitSolveFailure,
)
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

# row block of each transition coefficient, column block given by its letter
ROW_BLOCKS = {"1": "u", "2": "x", "3": "y", "4": "v"}
COL_BLOCKS = {"A": "u", "B": "x", "C": "y", "D": "v"}
COEFFICIENTS = tuple(letter + row for row in "1234" for letter in "ABCD")

DEFAULT_CONE_HALF_ANGLE = 0.25
CALIBRATION_POINTS = 5


class Dims(object):
    """Block sizes of the coordinates (u, x, y, v)."""

    def __init__(self, m, n, m_s, n_u):
        for value, name in ((m, "m"), (n, "n"), (m_s, "m_s"), (n_u, "n_u")):
            check_count_parameter(value, name)
        if not (1 <= m_s <= m and 1 <= n_u <= n):
            raise ParameterArgumentError(
                f"need 1 <= m_s <= m and 1 <= n_u <= n, got m={m} n={n} m_s={m_s} n_u={n_u}"
            )
        self.m, self.n, self.m_s, self.n_u = m, n, m_s, n_u
        self.sizes = {"u": m - m_s, "x": m_s, "y": n_u, "v": n - n_u}
        offsets = np.cumsum([0, m - m_s, m_s, n_u])
        self.slices = {
            name: slice(int(start), int(start) + self.sizes[name])
            for name, start in zip("uxyv", offsets)
        }

    @property
    def total(self):
        return self.m + self.n

    @property
    def central(self):
        """Indices of the center-unstable coordinates (x, y, v)."""
        return np.arange(self.sizes["u"], self.total)

    def __getitem__(self, name):
        return self.slices[name]

    def to_dict(self):
        return {"m": self.m, "n": self.n, "m_s": self.m_s, "n_u": self.n_u}


def _block(value, rows, cols, name):
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols))
    return as_matrix(value, name, shape=(rows, cols))


def _vector(value, size, name, default_zero=True):
    if value is None:
        if not default_zero:
            raise ParameterArgumentError(f"{name} is required")
        return np.zeros(size)
    vector = np.asarray(value, dtype=float).reshape(-1)
    if vector.size != size:
        raise ParameterArgumentError(f"{name} must have length {size}, got {vector.size}")
    return vector


class Remainder(object):
    """Higher-order terms of the transition map.

    ``func(u, x, d, vbar)`` returns the four output rows (u, x, y, v) and ``bound``
    maps the largest |y - y_minus| on the entry box to a sup bound of those rows.
    """

    def __init__(self, name="zero", coef=0.0, func=None, bound=None):
        self.name = name
        self.coef = float(coef)
        self._func = func
        self._bound = bound

    @classmethod
    def from_json(cls, data):
        if data is None or data == "zero":
            return cls()
        if isinstance(data, str):
            data = {"name": data}
        name = data.get("name", "zero")
        if name not in ("zero", "cubic"):
            raise ParameterValueError([name])
        return cls(name, data.get("coef", 0.0))

    @property
    def is_zero(self):
        return self._func is None and (self.name == "zero" or self.coef == 0.0)

    def __call__(self, u, x, d, vbar):
        zeros = [np.zeros_like(u), np.zeros_like(x), np.zeros_like(d), np.zeros_like(vbar)]
        if self._func is not None:
            return self._func(u, x, d, vbar)
        if self.name == "cubic":
            zeros[2] = self.coef * d ** 3
        return zeros

    def bound(self, d_max):
        if self._func is not None:
            return float(self._bound(d_max)) if callable(self._bound) else float(self._bound or 0.0)
        if self.name == "cubic":
            return abs(self.coef) * d_max ** 3
        return 0.0

    def to_dict(self):
        return {"name": self.name, "coef": self.coef}


class TransitionMap(object):
    """Coefficient blocks of the transition from the exit box to the entry box.

    With d = y - y_minus the map reads
        u_bar = u_plus + A1 u + B1 x + C1 d + D1 v_bar
        x_bar = x_plus + A2 u + B2 x + C2 d + D2 v_bar
        y_bar =          A3 u + B3 x + C3 (d*d) + D3 v_bar
        v - v_minus =    A4 u + B4 x + C4 d + D4 v_bar
    plus the remainder rows; the last line is solved for v_bar.
    """

    def __init__(self, dims, blocks=None, remainder=None):
        blocks = blocks or {}
        unknown = set(blocks) - set(COEFFICIENTS)
        if unknown:
            raise ParameterValueError(sorted(unknown))
        self.dims = dims
        self.blocks = {}
        for key in COEFFICIENTS:
            rows = dims.sizes[ROW_BLOCKS[key[1]]]
            cols = dims.sizes[COL_BLOCKS[key[0]]]
            value = blocks.get(key)
            if value is None:
                value = np.eye(rows) if key == "D4" and rows == cols else np.zeros((rows, cols))
            self.blocks[key] = _block(value, rows, cols, key)
        self.remainder = remainder or Remainder()
        dv = dims.sizes["v"]
        if dv:
            if abs(np.linalg.det(self.blocks["D4"])) < 1e-14:
                raise ParameterArgumentError("D4 must be invertible")
            self.d4_inv = np.linalg.inv(self.blocks["D4"])
        else:
            self.d4_inv = np.zeros((0, 0))

    @classmethod
    def from_json(cls, data, dims):
        data = dict(data or {})
        remainder = Remainder.from_json(data.pop("remainder", None))
        return cls(dims, data, remainder)

    def __getitem__(self, key):
        return self.blocks[key]

    def to_dict(self):
        report = {key: value for key, value in self.blocks.items() if value.size}
        report["remainder"] = self.remainder.to_dict()
        return report


class LocalTangencyModel(object):
    """Linearized neighbourhood of a saddle together with the transition near a tangency.

    Keyword Args:
        ell (int, optional): number of iterates spent outside the neighbourhood by the transition.
        cone_half_angle (float, optional): half-angle of the center-unstable cone around (x, y, v).
        shift (float, optional): translation added to the first y_bar component.
        validate (bool, optional): check the block ordering and the reference boxes. Derived models skip it.
    """

    def __init__(
        self,
        dims,
        blocks,
        W,
        y_minus,
        x_plus,
        pi_minus,
        pi_plus,
        transition,
        u_plus=None,
        v_minus=None,
        ell=0,
        cone_half_angle=DEFAULT_CONE_HALF_ANGLE,
        shift=0.0,
        validate=True,
    ):
        self.dims = dims
        sizes = dims.sizes
        self.A = _block(blocks.get("A"), sizes["u"], sizes["u"], "A")
        self.B = _block(blocks.get("B"), sizes["x"], sizes["x"], "B")
        self.C = _block(blocks.get("C"), sizes["y"], sizes["y"], "C")
        self.D = _block(blocks.get("D"), sizes["v"], sizes["v"], "D")
        self.W = W
        self.y_minus = _vector(y_minus, sizes["y"], "y_minus", default_zero=False)
        self.v_minus = _vector(v_minus, sizes["v"], "v_minus")
        self.u_plus = _vector(u_plus, sizes["u"], "u_plus")
        self.x_plus = _vector(x_plus, sizes["x"], "x_plus", default_zero=False)
        self.pi_minus = pi_minus
        self.pi_plus = pi_plus
        self.transition = transition
        self.ell = int(ell)
        self.cone_half_angle = float(cone_half_angle)
        self.shift = float(shift)
        for box, name in ((W, "W"), (pi_minus, "pi_minus"), (pi_plus, "pi_plus")):
            if box.dim != dims.total:
                raise ParameterArgumentError(f"{name} must have dimension {dims.total}")
        if not 0 < self.cone_half_angle < np.pi / 2:
            raise ParameterArgumentError("cone_half_angle must lie in (0, pi/2)")
        if validate:
            self._validate()
        self.K = 1.05 * float(np.linalg.norm(transition["C2"], 2)) if transition["C2"].size else 0.0
        self.calibration_error = None
        try:
            self.L = self._calibrate_volume_constant()
        except ImplicitSolveFailure as error:
            # volume bounds need L; the experiment re-raises
            self.L = None
            self.calibration_error = error
            logging.info("volume constant not calibrated: %s" % error)
        else:
            logging.debug("model calibrated K=%.6g L=%.6g" % (self.K, self.L))

    @classmethod
    def from_json(cls, data, validate=True):
        if not isinstance(data, dict):
            raise ParameterArgumentError("model must be a JSON object")
        for key in ("dims", "W", "pi_minus", "pi_plus", "y_minus", "x_plus"):
            check_required_parameter(data.get(key), key)
        d = data["dims"]
        dims = Dims(d.get("m"), d.get("n"), d.get("m_s"), d.get("n_u"))
        return cls(
            dims,
            {name: data.get(name) for name in "ABCD"},
            Box.from_json(data["W"], "W"),
            data["y_minus"],
            data["x_plus"],
            Box.from_json(data["pi_minus"], "pi_minus"),
            Box.from_json(data["pi_plus"], "pi_plus"),
            TransitionMap.from_json(data.get("transition"), dims),
            u_plus=data.get("u_plus"),
            v_minus=data.get("v_minus"),
            ell=data.get("ell", 0),
            cone_half_angle=data.get("cone_half_angle", DEFAULT_CONE_HALF_ANGLE),
            shift=data.get("shift", 0.0),
            validate=validate,
        )

    def derive(self, B=None, C=None, shift=None):
        """Copy of the model with replaced leading blocks or shift, unvalidated."""
        return LocalTangencyModel(
            self.dims,
            {
                "A": self.A,
                "B": self.B if B is None else B,
                "C": self.C if C is None else C,
                "D": self.D,
            },
            self.W,
            self.y_minus,
            self.x_plus,
            self.pi_minus,
            self.pi_plus,
            self.transition,
            u_plus=self.u_plus,
            v_minus=self.v_minus,
            ell=self.ell,
            cone_half_angle=self.cone_half_angle,
            shift=self.shift if shift is None else shift,
            validate=False,
        )

    @property
    def Y_minus(self):
        return self.assemble(
            np.zeros(self.dims.sizes["u"]), np.zeros(self.dims.sizes["x"]), self.y_minus, self.v_minus
        )

    @property
    def Y_plus(self):
        return self.assemble(
            self.u_plus, self.x_plus, np.zeros(self.dims.sizes["y"]), np.zeros(self.dims.sizes["v"])
        )

    @property
    def lam(self):
        return float(np.max(np.abs(np.linalg.eigvals(self.B))))

    @property
    def gamma(self):
        return float(np.min(np.abs(np.linalg.eigvals(self.C))))

    @property
    def leading_jacobian(self):
        return self.lam ** self.dims.m_s * self.gamma ** self.dims.n_u

    def assemble(self, u, x, y, v):
        return np.concatenate([np.atleast_1d(u), np.atleast_1d(x), np.atleast_1d(y), np.atleast_1d(v)], axis=-1)

    def split(self, points):
        return tuple(points[..., self.dims[name]] for name in "uxyv")

    def t0_blocks(self, k):
        return [np.linalg.matrix_power(M, k) if M.size else M for M in (self.A, self.B, self.C, self.D)]

    def t0_matrix(self, k):
        return block_diag(*self.t0_blocks(k))

    def t0(self, points, k, check=True):
        """k-fold linear map; with check every intermediate iterate must stay in W."""
        points = np.asarray(points, dtype=float)
        if not check:
            return points @ self.t0_matrix(k).T
        step = self.t0_matrix(1)
        current = points
        for i in range(1, k + 1):
            current = current @ step.T
            inside = self.W.contains_points(current, tol=1e-12)
            if not np.all(inside):
                first = np.asarray(current).reshape(-1, self.dims.total)[~np.asarray(inside).reshape(-1)][0]
                raise LeftNeighborhood(i, first.tolist())
        return current

    def t1(self, points, tol=1e-12, iterations=100):
        points = np.asarray(points, dtype=float)
        shape = points.shape
        flat = points.reshape(-1, self.dims.total)
        u, x, y, v = self.split(flat)
        d = y - self.y_minus
        T = self.transition
        vbar = self._solve_vbar(u, x, d, v, tol, iterations)
        ru, rx, ry, _ = T.remainder(u, x, d, vbar)
        ubar = self.u_plus + u @ T["A1"].T + x @ T["B1"].T + d @ T["C1"].T + vbar @ T["D1"].T + ru
        xbar = self.x_plus + u @ T["A2"].T + x @ T["B2"].T + d @ T["C2"].T + vbar @ T["D2"].T + rx
        ybar = u @ T["A3"].T + x @ T["B3"].T + (d * d) @ T["C3"].T + vbar @ T["D3"].T + ry
        if self.shift:
            ybar = ybar.copy()
            ybar[:, 0] += self.shift
        return np.concatenate([ubar, xbar, ybar, vbar], axis=-1).reshape(shape)

    def _solve_vbar(self, u, x, d, v, tol, iterations):
        T = self.transition
        if not self.dims.sizes["v"]:
            return np.zeros((u.shape[0], 0))
        base = v - self.v_minus - u @ T["A4"].T - x @ T["B4"].T - d @ T["C4"].T
        vbar = base @ T.d4_inv.T
        if T.remainder.is_zero:
            return vbar
        residual = np.inf
        for _ in range(iterations):
            rv = T.remainder(u, x, d, vbar)[3]
            updated = (base - rv) @ T.d4_inv.T
            residual = float(np.max(np.abs(updated - vbar))) if updated.size else 0.0
            vbar = updated
            if residual < tol:
                return vbar
        raise ImplicitSolveFailure(iterations, residual)

    def dt1(self, points, fd_step=1e-5, tol=1e-12, iterations=100):
        """Derivative of the transition map, analytic unless a remainder is present."""
        points = np.asarray(points, dtype=float)
        shape = points.shape
        flat = points.reshape(-1, self.dims.total)
        N = self.dims.total
        if not self.transition.remainder.is_zero:
            jac = np.empty((flat.shape[0], N, N))
            for j in range(N):
                offset = np.zeros(N)
                offset[j] = fd_step
                plus = self.t1(flat + offset, tol, iterations)
                minus = self.t1(flat - offset, tol, iterations)
                jac[:, :, j] = (plus - minus) / (2 * fd_step)
            return jac.reshape(shape[:-1] + (N, N))

        T = self.transition
        sizes = self.dims.sizes
        d = flat[:, self.dims["y"]] - self.y_minus
        eye_v = np.eye(sizes["v"])
        dv_cols = np.hstack([-T["A4"], -T["B4"], -T["C4"], eye_v])
        dvbar = T.d4_inv @ dv_cols if sizes["v"] else np.zeros((0, N))

        rows_u = np.hstack([T["A1"], T["B1"], T["C1"], np.zeros((sizes["u"], sizes["v"]))]) + T["D1"] @ dvbar
        rows_x = np.hstack([T["A2"], T["B2"], T["C2"], np.zeros((sizes["x"], sizes["v"]))]) + T["D2"] @ dvbar
        fixed_y = np.hstack([T["A3"], T["B3"], np.zeros_like(T["C3"]), np.zeros((sizes["y"], sizes["v"]))])
        fixed_y = fixed_y + T["D3"] @ dvbar

        jac = np.empty((flat.shape[0], N, N))
        jac[:, self.dims["u"], :] = rows_u
        jac[:, self.dims["x"], :] = rows_x
        jac[:, self.dims["y"], :] = fixed_y
        # quadratic term contributes 2 C3 diag(d) in the y columns
        jac[:, self.dims["y"], self.dims["y"]] += 2 * T["C3"][None, :, :] * d[:, None, :]
        jac[:, self.dims["v"], :] = dvbar
        return jac.reshape(shape[:-1] + (N, N))

    def central_determinant(self, points, **kwargs):
        jac = self.dt1(points, **kwargs)
        central = self.dims.central
        return np.linalg.det(jac[..., central[:, None], central[None, :]])

    def _validate(self):
        moduli = [np.abs(np.linalg.eigvals(M)) if M.size else np.zeros(0) for M in (self.A, self.B, self.C, self.D)]
        mod_a, mod_b, mod_c, mod_d = moduli
        for mod, name in ((mod_b, "B"), (mod_c, "C")):
            if np.ptp(mod) > 1e-9 * np.max(mod):
                raise ParameterArgumentError(f"eigenvalues of {name} must share one modulus")
        if not np.max(mod_b) < 1 < np.min(mod_c):
            raise ParameterArgumentError("need |eig B| < 1 < |eig C|")
        if mod_a.size and not np.max(mod_a) < np.min(mod_b):
            raise ParameterArgumentError("need |eig A| < |eig B|")
        if mod_d.size and not np.max(mod_c) < np.min(mod_d):
            raise ParameterArgumentError("need |eig C| < |eig D|")

        for box, name in ((self.pi_minus, "pi_minus"), (self.pi_plus, "pi_plus")):
            if box.is_empty() or not self.W.contains_box(box):
                raise ParameterArgumentError(f"{name} must be a nonempty box inside W")
        if not self.pi_minus.contains(self.Y_minus):
            raise ParameterArgumentError("pi_minus must contain Y_minus")
        if not self.pi_plus.contains(self.Y_plus):
            raise ParameterArgumentError("pi_plus must contain Y_plus")
        step = self.t0_matrix(1)
        if not self.pi_plus.linear_image(step).disjoint(self.pi_plus):
            raise ParameterArgumentError("pi_plus meets its forward image")
        if not self.pi_minus.linear_image(np.linalg.inv(step)).disjoint(self.pi_minus):
            raise ParameterArgumentError("pi_minus meets its backward image")

    def _calibrate_volume_constant(self):
        per_axis = CALIBRATION_POINTS if self.dims.total <= 6 else 2
        grid = self.pi_minus.grid(per_axis)
        dets = np.abs(self.central_determinant(grid))
        d = self.dims.central.size
        return float(np.min(dets) * np.cos(self.cone_half_angle) ** d)

    def to_dict(self):
        return {
            "dims": self.dims.to_dict(),
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "D": self.D,
            "W": self.W,
            "pi_minus": self.pi_minus,
            "pi_plus": self.pi_plus,
            "y_minus": self.y_minus,
            "v_minus": self.v_minus,
            "u_plus": self.u_plus,
            "x_plus": self.x_plus,
            "ell": self.ell,
            "cone_half_angle": self.cone_half_angle,
            "shift": self.shift,
            "transition": self.transition,
        }
