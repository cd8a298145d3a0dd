import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.linalg import block_diag

from blenderlab.error import ConeViolation
from blenderlab.error import DegenerateDisk
from blenderlab.error import ParameterArgumentError
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_enum_parameter
from blenderlab.lib.utils import check_required_parameter

BLOCKS = ("ss", "c", "uu")
ORIENTATIONS = ("cs", "cu")
DEFAULT_CONE_HALF_ANGLE = 0.25
DISK_SAMPLES = 9
FD_STEP = 1e-5


class Branch(object):
    """Affine branch x -> linear @ x + offset defined on `domain`."""

    def __init__(self, linear, offset, domain):
        self.linear = np.asarray(linear, dtype=float)
        self.offset = np.asarray(offset, dtype=float).reshape(-1)
        self.domain = domain

    @classmethod
    def from_json(cls, data, splitting, index):
        check_required_parameter(data, f"branches[{index}]")
        size = sum(splitting)
        linear = data.get("linear")
        if isinstance(linear, dict):
            matrix = block_diag(
                *[
                    as_matrix(linear.get(name), f"branches[{index}].linear.{name}", (d, d))
                    for name, d in zip(BLOCKS, splitting)
                ]
            )
        else:
            matrix = as_matrix(linear, f"branches[{index}].linear", (size, size))
        offset = np.asarray(data.get("offset", np.zeros(size)), dtype=float).reshape(-1)
        if offset.size != size:
            raise ParameterArgumentError(f"branches[{index}].offset must have {size} entries")
        domain = Box.from_json(data.get("domain"), f"branches[{index}].domain")
        return cls(matrix, offset, domain)

    def __call__(self, points):
        return np.asarray(points, dtype=float) @ self.linear.T + self.offset

    def fixed_point(self):
        return np.linalg.solve(np.eye(self.offset.size) - self.linear, self.offset)

    def inverse(self):
        inv = np.linalg.inv(self.linear)
        return Branch(inv, -inv @ self.offset, self.domain.linear_image(self.linear).translate(self.offset))

    def permuted(self, perm):
        return Branch(
            self.linear[np.ix_(perm, perm)],
            self.offset[perm],
            Box(self.domain.lo[perm], self.domain.hi[perm]),
        )

    def to_dict(self):
        return {"linear": self.linear, "offset": self.offset, "domain": self.domain}


class BlenderSpec(object):
    """Affine blender-horseshoe on the reference box U.

    Coordinates are ordered (ss, c, uu). A cu-oriented spec is analysed through
    `cs_view()`, the spec of the inverse branches with the ss and uu blocks swapped.
    A spec produced by `reduce_central_dimension` carries its covering re-check in `covering`.

    Keyword Args:
        distinctive (int, optional): index of the branch whose fixed point is the distinctive saddle. By default it's 0.
        orientation (str, optional): "cs" or "cu". By default it's "cs".
        cone_half_angle (float, optional): largest tilt of accepted ss-disks from the ss-plane. By default it's 0.25.
        repeller (PlanarRepeller, optional): planar factor of a product blender.
        resolution (float, optional): lamination resolution of a product blender.
    """

    def __init__(
        self,
        U,
        branches,
        splitting,
        distinctive=0,
        orientation="cs",
        cone_half_angle=DEFAULT_CONE_HALF_ANGLE,
        repeller=None,
        resolution=None,
        validate=True,
    ):
        check_enum_parameter(orientation, ORIENTATIONS)
        self.U = U
        self.branches = list(branches)
        self.splitting = tuple(int(d) for d in splitting)
        self.distinctive = distinctive
        self.orientation = orientation
        self.cone_half_angle = float(cone_half_angle)
        self.repeller = repeller
        self.resolution = resolution
        self.covering = None
        if validate:
            self.cs_view()._validate()

    @classmethod
    def from_json(cls, data):
        check_required_parameter(data, "blender")
        dims = data.get("dims")
        check_required_parameter(dims, "dims")
        splitting = []
        for name in ("ss", "cs", "uu"):
            check_count_parameter(dims.get(name), f"dims.{name}", minimum=1)
            splitting.append(dims[name])
        branches = data.get("branches")
        check_required_parameter(branches, "branches")
        distinctive = data.get("distinctive", 1)
        check_count_parameter(distinctive, "distinctive", minimum=1)
        repeller = None
        if data.get("repeller") is not None:
            from blenderlab.blender.product import repeller_from_json

            repeller = repeller_from_json(data["repeller"])
        return cls(
            Box.from_json(data.get("U"), "U"),
            [Branch.from_json(b, splitting, i) for i, b in enumerate(branches)],
            splitting,
            distinctive=distinctive - 1,
            orientation=data.get("orientation", "cs"),
            cone_half_angle=data.get("cone_half_angle", DEFAULT_CONE_HALF_ANGLE),
            repeller=repeller,
            resolution=data.get("resolution"),
        )

    @property
    def d_ss(self):
        return self.splitting[0]

    @property
    def d_cs(self):
        return self.splitting[1]

    @property
    def d_uu(self):
        return self.splitting[2]

    @property
    def size(self):
        return sum(self.splitting)

    def axes(self, name):
        d_ss, d_cs, _ = self.splitting
        return {
            "ss": slice(0, d_ss),
            "c": slice(d_ss, d_ss + d_cs),
            "uu": slice(d_ss + d_cs, self.size),
        }[name]

    def block(self, branch, name):
        index = self.axes(name)
        return branch.linear[index, index]

    def permutation(self):
        """Coordinate order of the cs view inside the original coordinates."""
        order = np.arange(self.size)
        if self.orientation == "cs":
            return order
        return np.concatenate([order[self.axes("uu")], order[self.axes("c")], order[self.axes("ss")]])

    def to_cs(self, points):
        return np.asarray(points, dtype=float)[..., self.permutation()]

    def from_cs(self, points):
        return np.asarray(points, dtype=float)[..., np.argsort(self.permutation())]

    def cs_view(self):
        if self.orientation == "cs":
            return self
        perm = self.permutation()
        return BlenderSpec(
            Box(self.U.lo[perm], self.U.hi[perm]),
            [branch.inverse().permuted(perm) for branch in self.branches],
            (self.d_uu, self.d_cs, self.d_ss),
            distinctive=self.distinctive,
            cone_half_angle=self.cone_half_angle,
            repeller=self.repeller,
            resolution=self.resolution,
            validate=False,
        )

    def central_rates(self):
        """Diagonal central rates, one row per branch."""
        index = self.axes("c")
        return np.array([np.diag(branch.linear[index, index]) for branch in self.branches])

    def central_offsets(self):
        index = self.axes("c")
        return np.array([branch.offset[index] for branch in self.branches])

    def central_fixed_points(self):
        return self.central_offsets() / (1 - self.central_rates())

    def central_box(self):
        """Hull of the extremal central fixed points; U's central range on axes where it degenerates."""
        points = self.central_fixed_points()
        lo, hi = points.min(axis=0), points.max(axis=0)
        u_box = self.U.sub(self.axes("c"))
        flat = (hi - lo) <= 1e-12 * (1 + np.abs(hi))
        return Box(np.where(flat, u_box.lo, lo), np.where(flat, u_box.hi, hi))

    def central_images(self, box=None):
        box = self.central_box() if box is None else box
        rates, offsets = self.central_rates(), self.central_offsets()
        images = []
        for a, o in zip(rates, offsets):
            ends = np.stack([a * box.lo + o, a * box.hi + o])
            images.append(Box(ends.min(axis=0), ends.max(axis=0)))
        return images

    def saddle(self):
        return self.branches[self.distinctive].fixed_point()

    def _validate(self):
        size = self.size
        if self.U.dim != size:
            raise ParameterArgumentError(f"U has dimension {self.U.dim}, splitting needs {size}")
        if len(self.branches) < 1:
            raise ParameterArgumentError("a blender needs at least one branch")
        blocks = np.zeros((size, size), dtype=bool)
        for name in BLOCKS:
            index = self.axes(name)
            blocks[index, index] = True
        for i, branch in enumerate(self.branches, start=1):
            if branch.linear.shape != (size, size) or branch.offset.size != size or branch.domain.dim != size:
                raise ParameterArgumentError(f"branch {i} does not match dimension {size}")
            if np.any(branch.linear[~blocks] != 0):
                raise ParameterArgumentError(f"branch {i} is not block diagonal in (ss, c, uu)")
            central = self.block(branch, "c")
            if np.count_nonzero(central - np.diag(np.diag(central))):
                raise ParameterArgumentError(f"branch {i} has a non-diagonal central block")
            rates = np.abs(np.diag(central))
            if np.any(rates <= 0) or np.any(rates >= 1):
                raise ParameterArgumentError(f"branch {i} central rates {rates.tolist()} are not in (0, 1)")
            if np.linalg.norm(self.block(branch, "ss"), 2) >= 1:
                raise ParameterArgumentError(f"branch {i} does not contract the ss-coordinates")
            if np.linalg.svd(self.block(branch, "uu"), compute_uv=False).min() <= 1:
                raise ParameterArgumentError(f"branch {i} does not expand the uu-coordinates")
            if not self.U.contains_box(branch.domain, tol=1e-12):
                raise ParameterArgumentError(f"branch {i} domain is not inside U")
        for i in range(len(self.branches)):
            for j in range(i + 1, len(self.branches)):
                if not self.branches[i].domain.disjoint(self.branches[j].domain):
                    raise ParameterArgumentError(f"domains of branches {i + 1} and {j + 1} overlap")
        if not 0 <= self.distinctive < len(self.branches):
            raise ParameterArgumentError(f"distinctive branch {self.distinctive + 1} does not exist")
        branch = self.branches[self.distinctive]
        saddle = branch.fixed_point()
        if not np.all((saddle > branch.domain.lo) & (saddle < branch.domain.hi)):
            raise ParameterArgumentError(
                f"distinctive saddle {saddle.tolist()} is not interior to branch {self.distinctive + 1}"
            )

    def to_dict(self):
        report = {
            "dims": {"ss": self.d_ss, "cs": self.d_cs, "uu": self.d_uu},
            "U": self.U,
            "branches": self.branches,
            "distinctive": self.distinctive + 1,
            "orientation": self.orientation,
            "cone_half_angle": self.cone_half_angle,
        }
        if self.repeller is not None:
            report["repeller"] = self.repeller
            report["resolution"] = self.resolution
        if self.covering is not None:
            report["covering"] = {"ok": self.covering["ok"], "margin": self.covering["margin"]}
        return report


class SsDisk(object):
    """Graph s -> (s, c(s), u(s)) over the ss-range of U, in cs-view coordinates.

    Parametrized by the unit d_ss-cube; the graph map comes from one of the
    constructors below and is validated against its BlenderSpec on construction.
    """

    def __init__(self, spec, transverse, kind, source=None):
        self.spec = spec.cs_view()
        self.transverse = transverse
        self.kind = kind
        self.source = source
        self.ss_box = self.spec.U.sub(self.spec.axes("ss"))
        self.tangent_bound = self._tangent_bound()
        self._validate()

    @classmethod
    def vertical(cls, spec, central, transverse=None):
        view = spec.cs_view()
        fixed = _fixed_part(view, central, transverse)

        def graph(s):
            return np.tile(fixed, (np.atleast_2d(s).shape[0], 1))

        return cls(spec, graph, "vertical", {"vertical_at": fixed[: view.d_cs]})

    @classmethod
    def tilted(cls, spec, central, tilt, transverse=None):
        """Disk whose first central coordinate moves with slope tan(tilt) along the first ss-axis."""
        view = spec.cs_view()
        fixed = _fixed_part(view, central, transverse)
        middle = view.U.sub(view.axes("ss")).center
        slope = np.tan(float(tilt))

        def graph(s):
            s = np.atleast_2d(s)
            values = np.tile(fixed, (s.shape[0], 1))
            values[:, 0] += slope * (s[:, 0] - middle[0])
            return values

        return cls(spec, graph, "tilted", {"tilted_at": fixed[: view.d_cs], "tilt": float(tilt)})

    @classmethod
    def from_grid(cls, spec, samples):
        """Disk interpolated from a tensor grid of points, given in the BlenderSpec's own coordinates."""
        view = spec.cs_view()
        samples = spec.to_cs(np.asarray(samples, dtype=float))
        d_ss = view.d_ss
        if samples.ndim != d_ss + 1 or samples.shape[-1] != view.size:
            raise ParameterArgumentError(
                f"grid must have {d_ss} sample axes of points with {view.size} coordinates"
            )
        axes = []
        for j in range(d_ss):
            line = np.moveaxis(samples, j, 0)[(slice(None),) + (0,) * (d_ss - 1)]
            values = line[:, j]
            if values.size < 2 or np.any(np.diff(values) <= 0):
                raise ParameterArgumentError(f"grid ss-axis {j} must be strictly increasing")
            axes.append(values)
        interpolator = RegularGridInterpolator(
            tuple(axes), samples[..., d_ss:], bounds_error=False, fill_value=None
        )
        disk = cls(spec, lambda s: interpolator(np.atleast_2d(s)), "grid", {"grid": samples})
        for j, values in enumerate(axes):
            lo, hi = disk.ss_box.lo[j], disk.ss_box.hi[j]
            slack = 1e-9 * (hi - lo)
            if values[0] > lo + slack or values[-1] < hi - slack:
                raise DegenerateDisk(
                    f"grid disk spans [{values[0]}, {values[-1]}] on ss-axis {j}, U needs [{lo}, {hi}]"
                )
        return disk

    @classmethod
    def from_json(cls, data, spec):
        check_required_parameter(data, "disk")
        transverse = data.get("transverse")
        if "vertical_at" in data:
            return cls.vertical(spec, data["vertical_at"], transverse)
        if "tilted_at" in data:
            return cls.tilted(spec, data["tilted_at"], data.get("tilt", 0.0), transverse)
        if "grid" in data:
            return cls.from_grid(spec, data["grid"])
        raise ParameterArgumentError("disk needs one of vertical_at, tilted_at, grid")

    def points(self, s):
        s = np.atleast_2d(np.asarray(s, dtype=float))
        return np.hstack([s, self.transverse(s)])

    def at_parameter(self, params):
        """Points of the disk at parameters in the unit cube."""
        params = np.atleast_2d(np.asarray(params, dtype=float))
        return self.points(self.ss_box.lo + params * self.ss_box.widths)

    def _sample_ss(self):
        axis = np.linspace(0.0, 1.0, DISK_SAMPLES)
        mesh = np.meshgrid(*[axis] * self.spec.d_ss, indexing="ij")
        params = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        return self.ss_box.lo + params * self.ss_box.widths

    def _tangent_bound(self):
        s = self._sample_ss()
        columns = []
        for step in np.eye(self.spec.d_ss) * FD_STEP:
            columns.append((self.transverse(s + step) - self.transverse(s - step)) / (2 * FD_STEP))
        jac = np.stack(columns, axis=2)
        return float(np.arctan(np.max(np.linalg.norm(jac, ord=2, axis=(1, 2)))))

    def _validate(self):
        if self.tangent_bound >= self.spec.cone_half_angle:
            raise ConeViolation(np.tan(self.tangent_bound), np.tan(self.spec.cone_half_angle))
        inside = self.spec.U.contains_points(self.points(self._sample_ss()), tol=1e-9)
        if not np.all(inside):
            raise DegenerateDisk("ss-disk leaves U")

    def to_dict(self):
        report = {"kind": self.kind, "tangent_bound": self.tangent_bound}
        report.update(self.source or {})
        return report


def _fixed_part(view, central, transverse):
    central = np.atleast_1d(np.asarray(central, dtype=float))
    if central.size != view.d_cs:
        raise ParameterArgumentError(f"central coordinate needs {view.d_cs} entries")
    if transverse is None:
        transverse = view.U.sub(view.axes("uu")).center
    transverse = np.atleast_1d(np.asarray(transverse, dtype=float))
    if transverse.size != view.d_uu:
        raise ParameterArgumentError(f"transverse coordinate needs {view.d_uu} entries")
    return np.concatenate([central, transverse])
