import logging

import numpy as np
from scipy.linalg import block_diag

from blenderlab.blender.spec import BlenderSpec
from blenderlab.blender.spec import Branch
from blenderlab.error import LaminationGap
from blenderlab.error import ParameterArgumentError
from blenderlab.error import RateViolation
from blenderlab.lib.boxes import Box
from blenderlab.lib.boxes import Interval
from blenderlab.lib.boxes import IntervalSet
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

DEFAULT_RESOLUTION = 1e-3
MAX_LEVELS = 200


class PlanarRepeller(object):
    """Planar factor of a product blender.

    Coordinates are (y, z): z is expanded along the unstable leaves, which are the
    lines y = const through the leaf positions of the repeller. Subclasses provide
    the affine branches and the disk they live on.
    """

    def disk(self) -> Box:
        raise NotImplementedError

    def branches(self):
        """List of (linear 2x2, offset, domain Box)."""
        raise NotImplementedError

    def min_conorm(self) -> float:
        return float(min(np.linalg.svd(linear, compute_uv=False).min() for linear, _, _ in self.branches()))

    def leaf_positions(self, resolution: float) -> IntervalSet:
        """y-positions of the unstable leaves, as a union of intervals of length at most `resolution`."""
        maps = [(linear[0, 0], offset[0]) for linear, offset, _ in self.branches()]
        fixed = [b / (1 - a) for a, b in maps]
        hull = Interval(min(fixed), max(fixed))
        pieces = IntervalSet([hull])
        width = hull.length
        for _ in range(MAX_LEVELS):
            if width <= resolution:
                break
            images = []
            for a, b in maps:
                for piece in pieces:
                    ends = (a * piece.a + b, a * piece.b + b)
                    images.append(Interval(min(ends), max(ends)))
            pieces = IntervalSet(images)
            width *= max(abs(a) for a, _ in maps)
        return pieces

    def leaf_hull(self) -> Interval:
        maps = [(linear[0, 0], offset[0]) for linear, offset, _ in self.branches()]
        fixed = [b / (1 - a) for a, b in maps]
        return Interval(min(fixed), max(fixed))

    def lamination_gap(self, resolution: float) -> float:
        return self.leaf_positions(resolution).largest_gap(self.leaf_hull())

    def leaf_distance(self, y: float, resolution: float) -> float:
        """Distance from y to the nearest unstable leaf, at the given resolution."""
        resolution = DEFAULT_RESOLUTION if resolution is None else resolution
        distance = np.inf
        for piece in self.leaf_positions(resolution):
            if piece.contains(y):
                return 0.0
            distance = min(distance, abs(y - piece.a), abs(y - piece.b))
        return float(distance)

    def to_dict(self):
        return {"branches": [{"linear": m, "offset": o, "domain": d} for m, o, d in self.branches()]}


class AffineRepeller(PlanarRepeller):
    """Affine repeller with branches (y, z) -> (contraction*y + offset_i, expansion*z - slab_i).

    The branch domains are the z-slabs [slab_i, slab_i + 1] / expansion; when the
    y-images of the leaf hull cover it, the unstable leaves fill the hull exactly.

    Keyword Args:
        contraction (float, optional): rate along y. By default it's 0.6.
        offsets (list, optional): y-offsets of the branches. By default it's (0.0, 0.4).
        expansion (float, optional): rate along z. By default it's 3.0.
        slabs (list, optional): z-translations of the branches. By default it's (0.25, 1.5).
        margin (float, optional): y-collar of the disk around [0, 1]. By default it's 0.25.
    """

    def __init__(self, contraction=0.6, offsets=(0.0, 0.4), expansion=3.0, slabs=(0.25, 1.5), margin=0.25):
        if not 0 < contraction < 1:
            raise ParameterArgumentError(f"contraction {contraction} is not in (0, 1)")
        if expansion <= 1:
            raise ParameterArgumentError(f"expansion {expansion} is not above 1")
        if len(offsets) != len(slabs) or not offsets:
            raise ParameterArgumentError("offsets and slabs need one entry per branch")
        self.contraction = float(contraction)
        self.offsets = [float(o) for o in offsets]
        self.expansion = float(expansion)
        self.slabs = [float(c) for c in slabs]
        self.margin = float(margin)

    @classmethod
    def from_json(cls, data):
        data = data or {}
        unknown = set(data) - {"contraction", "offsets", "expansion", "slabs", "margin"}
        if unknown:
            raise ParameterArgumentError(f"unknown affine repeller fields {sorted(unknown)}")
        return cls(**data)

    def disk(self):
        return Box([-self.margin, 0.0], [1.0 + self.margin, 1.0])

    def branches(self):
        linear = np.diag([self.contraction, self.expansion])
        disk = self.disk()
        return [
            (
                linear,
                np.array([offset, -slab]),
                Box([disk.lo[0], slab / self.expansion], [disk.hi[0], (slab + 1) / self.expansion]),
            )
            for offset, slab in zip(self.offsets, self.slabs)
        ]

    def to_dict(self):
        return {
            "affine": {
                "contraction": self.contraction,
                "offsets": self.offsets,
                "expansion": self.expansion,
                "slabs": self.slabs,
                "margin": self.margin,
            }
        }


def repeller_from_json(data):
    check_required_parameter(data, "repeller")
    if "affine" in data:
        return AffineRepeller.from_json(data["affine"])
    raise ParameterArgumentError("repeller must be {\"affine\": {...}}")


def product_blender(self, planar_repeller: PlanarRepeller, gamma: float, ss_dim: int, resolution=DEFAULT_RESOLUTION):
    """
    |
    | **Product Blender**
    | *cs-blender (s, p) -> (gamma s, h(p)) on (-1, 1)^ss_dim times the repeller disk.*

    :parameter planar_repeller: PlanarRepeller.
    :parameter gamma: float; ss contraction, below the minimal conorm of the repeller.
    :parameter ss_dim: int; number of ss-coordinates.
    :parameter resolution: optional float; lamination resolution. Default 1e-3.
    |
    """

    check_required_parameter(planar_repeller, "planar_repeller")
    check_count_parameter(ss_dim, "ss_dim", minimum=1)
    if not 0 < gamma < 1:
        raise ParameterArgumentError(f"gamma {gamma} is not in (0, 1)")
    bound = planar_repeller.min_conorm()
    if gamma >= bound:
        raise RateViolation(gamma, bound)
    gap = planar_repeller.lamination_gap(resolution)
    if gap > resolution:
        raise LaminationGap(gap, resolution)

    cube = Box(-np.ones(ss_dim), np.ones(ss_dim))
    disk = planar_repeller.disk()
    U = Box(np.concatenate([cube.lo, disk.lo]), np.concatenate([cube.hi, disk.hi]))
    branches = [
        Branch(
            block_diag(gamma * np.eye(ss_dim), linear),
            np.concatenate([np.zeros(ss_dim), offset]),
            Box(np.concatenate([cube.lo, domain.lo]), np.concatenate([cube.hi, domain.hi])),
        )
        for linear, offset, domain in planar_repeller.branches()
    ]
    logging.info("product blender gamma=%g below conorm %g, lamination gap %.3g" % (gamma, bound, gap))
    return BlenderSpec(U, branches, (ss_dim, 1, 1), repeller=planar_repeller, resolution=resolution)
