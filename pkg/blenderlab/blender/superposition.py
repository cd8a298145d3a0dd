import logging

import numpy as np

from blenderlab.blender.covering import covering_criterion
from blenderlab.blender.spec import BlenderSpec
from blenderlab.blender.spec import SsDisk
from blenderlab.error import CoverageGap
from blenderlab.error import DegenerateDisk
from blenderlab.error import NotDominated
from blenderlab.error import ParameterArgumentError
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameters

TILT_ITERATIONS = 50
CONTAINS_TOL = 1e-12


def itinerary_string(itinerary):
    labels = [str(i + 1) for i in itinerary]
    if max(itinerary, default=0) < 9:
        return "".join(labels)
    return ".".join(labels)


def backward_itinerary(view: BlenderSpec, central, transverse, depth: int):
    """Branches whose central images successively contain the central coordinate, lowest index first.

    Returns the itinerary and the central coordinate reached after `depth` pullbacks.
    """
    c_axes, u_axes = view.axes("c"), view.axes("uu")
    reference = view.central_box()
    images = view.central_images(reference)
    rates, offsets = view.central_rates(), view.central_offsets()
    uu_inverse = [np.linalg.inv(view.block(b, "uu")) for b in view.branches]
    x = np.array(central, dtype=float)
    u = np.array(transverse, dtype=float)
    itinerary = []
    for step in range(depth):
        for i, (branch, image) in enumerate(zip(view.branches, images)):
            if not image.contains(x, tol=CONTAINS_TOL):
                continue
            x_back = (x - offsets[i]) / rates[i]
            u_back = uu_inverse[i] @ (u - branch.offset[u_axes])
            if branch.domain.sub(c_axes).contains(x_back, tol=CONTAINS_TOL) and branch.domain.sub(
                u_axes
            ).contains(u_back, tol=CONTAINS_TOL):
                itinerary.append(i)
                x, u = x_back, u_back
                break
        else:
            raise CoverageGap(step, x.tolist())
    return itinerary, x


def _forward_ss(view, itinerary):
    """ss-coordinate of the point whose backward orbit ends on the fixed point of the last branch."""
    index = view.axes("ss")
    last = view.branches[itinerary[-1]] if itinerary else view.branches[view.distinctive]
    s = last.fixed_point()[index]
    for i in reversed(itinerary):
        branch = view.branches[i]
        s = view.block(branch, "ss") @ s + branch.offset[index]
    return s


def _unstable_central(view, itinerary, x_end):
    """Central coordinate of the genuine unstable-set point sharing the itinerary."""
    if not itinerary:
        return x_end
    rates, offsets = view.central_rates(), view.central_offsets()
    x = view.central_fixed_points()[itinerary[-1]]
    for i in reversed(itinerary):
        x = rates[i] * x + offsets[i]
    return x


def verify_superposition(self, spec: BlenderSpec, disk: SsDisk, depth: int):
    """
    |
    | **Verify Superposition**
    | *Point of the ss-disk lying within `residual` of the local unstable set, with its backward itinerary.*

    :parameter spec: BlenderSpec.
    :parameter disk: SsDisk; built against the same spec.
    :parameter depth: int; number of pullbacks.
    |
    """

    check_required_parameters([[spec, "spec"], [disk, "disk"]])
    check_count_parameter(depth, "depth")
    view = spec.cs_view()
    c_axes, u_axes = view.axes("c"), view.axes("uu")

    s = disk.ss_box.center
    for _ in range(TILT_ITERATIONS):
        point = disk.points(s)[0]
        itinerary, x_end = backward_itinerary(view, point[c_axes], point[u_axes], depth)
        s_next = _forward_ss(view, itinerary)
        if np.allclose(s_next, s, rtol=0, atol=1e-13):
            s = s_next
            break
        s = s_next
    else:
        raise DegenerateDisk("witness on the disk did not settle after %d iterations" % TILT_ITERATIONS)
    if not disk.ss_box.contains(s, tol=1e-12):
        raise DegenerateDisk(f"witness ss-coordinate {s.tolist()} is outside the disk")

    point = disk.points(s)[0]
    itinerary, x_end = backward_itinerary(view, point[c_axes], point[u_axes], depth)
    if view.repeller is not None:
        residual = view.repeller.leaf_distance(point[c_axes][0], view.resolution)
    else:
        residual = float(np.max(np.abs(point[c_axes] - _unstable_central(view, itinerary, x_end))))
    logging.debug("superposition depth=%d residual=%.3e" % (depth, residual))
    return {
        "point": spec.from_cs(point),
        "itinerary": itinerary_string(itinerary),
        "residual": residual,
        "depth": depth,
    }


def verify_superposition_battery(self, spec: BlenderSpec, disks, depth: int):
    """Runs `verify_superposition` on every disk, one pool cell per disk, in input order."""
    return self.map_cells(lambda disk: verify_superposition(self, spec, disk, depth), list(disks))


def distinctive_saddle_disk(self, spec: BlenderSpec) -> SsDisk:
    """
    |
    | **Distinctive Saddle Disk**
    | *The ss-plane disk through the distinctive saddle.*

    :parameter spec: BlenderSpec.
    |
    """

    view = spec.cs_view()
    saddle = view.saddle()
    return SsDisk.vertical(spec, saddle[view.axes("c")], saddle[view.axes("uu")])


def reduce_central_dimension(self, spec: BlenderSpec, keep: int) -> BlenderSpec:
    """
    |
    | **Reduce Central Dimension**
    | *Relabels the most contracted central coordinates as strong stable ones.*
    | *The covering re-check on the kept coordinates is attached as `covering`.*

    :parameter spec: BlenderSpec; cs-oriented, central blocks diagonal.
    :parameter keep: int; central coordinates kept, 1 <= keep < d_cs.
    |
    """

    check_count_parameter(keep, "keep", minimum=1)
    if spec.orientation != "cs":
        raise ParameterArgumentError("central reduction is defined for cs-oriented specs")
    if keep >= spec.d_cs:
        raise ParameterArgumentError(f"keep={keep} leaves nothing to reduce for d_cs={spec.d_cs}")
    moved = spec.d_cs - keep
    rates = np.abs(spec.central_rates())
    weakest_moved = float(np.max(rates[:, :moved]))
    strongest_kept = float(np.min(rates[:, moved:]))
    if weakest_moved >= strongest_kept:
        raise NotDominated(
            "central rates %.6g (relabelled) and %.6g (kept) are not strictly ordered"
            % (weakest_moved, strongest_kept)
        )
    reduced = BlenderSpec(
        spec.U,
        spec.branches,
        (spec.d_ss + moved, keep, spec.d_uu),
        distinctive=spec.distinctive,
        cone_half_angle=spec.cone_half_angle,
    )
    covering = covering_criterion(self, reduced)
    reduced.covering = covering
    logging.info(
        "central dimension reduced from %d to %d, covering ok=%s margin=%.6g"
        % (spec.d_cs, keep, covering["ok"], covering["margin"])
    )
    return reduced
