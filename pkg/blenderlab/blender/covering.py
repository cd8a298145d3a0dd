import logging

import numpy as np

from blenderlab.blender.spec import BlenderSpec
from blenderlab.blender.spec import Branch
from blenderlab.error import CoverageGap
from blenderlab.error import DegenerateDisk
from blenderlab.lib.boxes import Box
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

ROBUSTNESS_TRIALS = 20
WITNESS_DEPTH = 20
CELL_TOL = 1e-12


def _breakpoints(values, lo, hi):
    values = np.clip(np.concatenate([[lo, hi], values]), lo, hi)
    return np.unique(values)


def _covers(images, reference):
    """Whether the union of boxes covers `reference`, checked on the cells cut by all faces."""
    images = [box for box in images if not box.is_empty()]
    if not images:
        return False
    scale = CELL_TOL * (1 + float(np.max(reference.widths)))
    axes = []
    for a in range(reference.dim):
        cuts = _breakpoints(
            [box.lo[a] for box in images] + [box.hi[a] for box in images], reference.lo[a], reference.hi[a]
        )
        mids = [(x + y) / 2 for x, y in zip(cuts[:-1], cuts[1:]) if y - x > scale]
        axes.append(mids or [reference.center[a]])
    for center in np.array(np.meshgrid(*axes, indexing="ij")).reshape(reference.dim, -1).T:
        if not any(box.contains(center) for box in images):
            return False
    return True


def _interior(value, end, reference_scale):
    return abs(value - end) > CELL_TOL * reference_scale


def _shrunk(images, reference, depth):
    """Move every image face lying inside `reference` inwards by depth/2 (outwards when negative)."""
    scale = 1 + float(np.max(np.abs(np.concatenate([reference.lo, reference.hi]))))
    result = []
    for box in images:
        lo, hi = box.lo.copy(), box.hi.copy()
        for a in range(box.dim):
            if _interior(lo[a], reference.lo[a], scale):
                lo[a] += depth / 2
            if _interior(hi[a], reference.hi[a], scale):
                hi[a] -= depth / 2
        result.append(Box(lo, hi))
    return result


def _candidate_depths(images, reference):
    """Depths at which a hi face and a lo face meet; the covering margin is one of them."""
    scale = 1 + float(np.max(np.abs(np.concatenate([reference.lo, reference.hi]))))
    candidates = {0.0}
    for a in range(reference.dim):
        his = [(reference.lo[a], 0.0)] + [
            (box.hi[a], 1.0 if _interior(box.hi[a], reference.hi[a], scale) else 0.0) for box in images
        ]
        los = [(reference.hi[a], 0.0)] + [
            (box.lo[a], 1.0 if _interior(box.lo[a], reference.lo[a], scale) else 0.0) for box in images
        ]
        for h, mh in his:
            for lo, ml in los:
                if mh + ml:
                    candidates.add((h - lo) / ((mh + ml) / 2))
    return np.array(sorted(candidates))


def coverage_margin(images, reference):
    """Signed overlap depth of `images` over `reference`: the largest face shift that keeps covering."""
    candidates = _candidate_depths(images, reference)
    lo, hi = 0, candidates.size - 1
    if not _covers(_shrunk(images, reference, candidates[0]), reference):
        return float(candidates[0])
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _covers(_shrunk(images, reference, candidates[mid]), reference):
            lo = mid
        else:
            hi = mid - 1
    return float(candidates[lo])


def covering_criterion(self, spec: BlenderSpec):
    """
    |
    | **Covering Criterion**
    | *Whether the central images of the branches cover the central box, with the overlap margin.*

    :parameter spec: BlenderSpec.
    |
    """

    check_required_parameter(spec, "spec")
    view = spec.cs_view()
    reference = view.central_box()
    images = view.central_images(reference)
    ok = _covers(images, reference)
    margin = coverage_margin(images, reference)
    margin = max(margin, 0.0) if ok else min(margin, 0.0)
    logging.info("covering ok=%s margin=%.6g over %d branches" % (ok, margin, len(images)))
    return {"ok": ok, "margin": margin, "central_box": reference, "images": images}


def _carried_domain(spec, branch, linear, offset):
    """Domain whose uu-image under the moved branch is the uu-image of the original one."""
    index = spec.axes("uu")
    image = branch.domain.sub(index).linear_image(spec.block(branch, "uu")).translate(branch.offset[index])
    moved = image.translate(-offset[index]).linear_preimage(linear[index, index])
    return branch.domain.replace(index, moved)


def perturbed_spec(spec: BlenderSpec, rng, size: float) -> BlenderSpec:
    """Copy of `spec` whose linear blocks and offsets each move by at most `size`.

    Blocks stay block diagonal and central blocks stay diagonal, so the copy is a
    spec of the same kind; it is not revalidated. Branch domains follow the uu
    part of the map so that every branch keeps its image across U.
    """
    branches = []
    for branch in spec.branches:
        linear = branch.linear.copy()
        for name in ("ss", "c", "uu"):
            index = spec.axes(name)
            block = linear[index, index]
            if name == "c":
                noise = np.diag(rng.uniform(-size, size, block.shape[0]))
            else:
                noise = rng.uniform(-1, 1, block.shape)
                noise *= size / max(np.linalg.norm(noise, 2), 1e-300)
            linear[index, index] = block + noise
        offset = branch.offset + rng.uniform(-size, size, branch.offset.size)
        branches.append(Branch(linear, offset, _carried_domain(spec, branch, linear, offset)))
    return BlenderSpec(
        spec.U,
        branches,
        spec.splitting,
        distinctive=spec.distinctive,
        orientation=spec.orientation,
        cone_half_angle=spec.cone_half_angle,
        repeller=spec.repeller,
        resolution=spec.resolution,
        validate=False,
    )


def _witnessed(self, spec, disks, depth):
    from blenderlab.blender.superposition import verify_superposition

    try:
        for disk in disks:
            verify_superposition(self, spec, disk, depth)
    except (CoverageGap, DegenerateDisk) as error:
        logging.debug("perturbed witness failed: %s" % error)
        return False
    return True


def robustness_margin(self, spec: BlenderSpec, trials=ROBUSTNESS_TRIALS, disks=None, depth=WITNESS_DEPTH):
    """
    |
    | **Robustness Margin**
    | *Perturbation size eps0 of linear parts and offsets under which the covering survives.*

    eps0 = min(margin / c, (1 - L) / 2) with propagation constant c = 4 (1 + R) / (1 - L),
    L the largest central rate and R the sup-norm radius of the central box.

    :parameter spec: BlenderSpec.
    :parameter trials: optional int; seeded random eps0-perturbations re-checked. Default 20.
    :parameter disks: optional list of SsDisk; each trial also perturbs by eps0/2 and
        requires a superposition witness on every disk.
    :parameter depth: optional int; pullback depth of those witnesses. Default 20.
    |
    """

    check_count_parameter(trials, "trials")
    check_count_parameter(depth, "depth")
    disks = list(disks or [])
    covering = covering_criterion(self, spec)
    view = spec.cs_view()
    rate = float(np.max(np.abs(view.central_rates())))
    box = covering["central_box"]
    radius = float(np.max(np.abs(np.concatenate([box.lo, box.hi]))))
    propagation = 4 * (1 + radius) / (1 - rate)
    report = {"ok": covering["ok"], "margin": covering["margin"], "propagation": propagation}
    if disks:
        report["witness_depth"] = depth
    if not covering["ok"] or covering["margin"] <= 0:
        report.update({"epsilon0": 0.0, "trials": 0, "trials_passed": 0})
        if disks:
            report["witness_trials_passed"] = 0
        return report

    epsilon = min(covering["margin"] / propagation, (1 - rate) / 2)

    def trial(stream):
        rng = self.rng(stream)
        covers = covering_criterion(self, perturbed_spec(view, rng, epsilon))["ok"]
        if not disks:
            return covers, None
        return covers, _witnessed(self, perturbed_spec(view, rng, epsilon / 2), disks, depth)

    outcomes = self.map_cells(trial, list(range(trials)))
    passed = sum(1 for covers, _ in outcomes if covers)
    report.update({"epsilon0": epsilon, "trials": trials, "trials_passed": passed})
    if disks:
        report["witness_trials_passed"] = sum(1 for _, witnessed in outcomes if witnessed)
    logging.info("robustness eps0=%.6g, %d/%d perturbations cover" % (epsilon, passed, trials))
    return report
