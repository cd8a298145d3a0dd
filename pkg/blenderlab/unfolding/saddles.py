import logging

import numpy as np

from blenderlab.error import EmptyStrip
from blenderlab.error import NotContracting
from blenderlab.local_model.maps import return_jacobian
from blenderlab.local_model.strips import strip as strip_for
from blenderlab.unfolding.family import unfold
from blenderlab.unfolding.params import UnfoldingParams

SEEDS_PER_AXIS = 5
MAX_HALVINGS = 30


class SingleRoundSaddle(object):
    def __init__(self, location, k, u_index, residual, eigenvalues, params):
        self.location = location
        self.k = k
        self.u_index = u_index
        self.residual = residual
        self.eigenvalues = eigenvalues
        self.params = params

    def to_dict(self):
        return {
            "location": self.location,
            "k": self.k,
            "u_index": self.u_index,
            "residual": self.residual,
            "eigenvalues": self.eigenvalues,
            "params": self.params,
        }

    def __repr__(self):
        return "SingleRoundSaddle(k=%d, u_index=%d, location=%s)" % (self.k, self.u_index, self.location.tolist())


class SaddleSearch(object):
    """Distinct converged saddles of one Newton search plus the count of dropped seeds."""

    def __init__(self, saddles, dropped):
        self.saddles = saddles
        self.dropped = dropped

    def __iter__(self):
        return iter(self.saddles)

    def __len__(self):
        return len(self.saddles)

    def __getitem__(self, index):
        return self.saddles[index]

    def u_indices(self):
        return sorted({saddle.u_index for saddle in self.saddles})

    def to_dict(self):
        return {"saddles": self.saddles, "dropped": self.dropped}


def _residual(self, family, k, points):
    with np.errstate(over="ignore", invalid="ignore"):
        images = family.t1(
            family.t0(points, k, check=False),
            tol=self.tol("implicit"),
            iterations=int(self.tol("implicit_iterations")),
        )
        values = images - points
        norms = np.linalg.norm(values, axis=-1)
    norms[~np.isfinite(norms)] = np.inf
    return values, norms


def newton_fixed_points(self, family, k, seeds):
    """Damped Newton on R(p) - p for a stack of seeds; returns points, residuals."""
    tol = self.tol("newton_residual")
    points = np.array(seeds, dtype=float, copy=True)
    values, res = _residual(self, family, k, points)
    identity = np.eye(family.dims.total)
    active = np.isfinite(res) & (res >= tol)
    for _ in range(int(self.tol("newton_steps"))):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            jac = return_jacobian(self, family, k, points[idx]) - identity
        if not np.all(np.isfinite(jac)):
            bad = ~np.all(np.isfinite(jac), axis=(1, 2))
            active[idx[bad]] = False
            idx, jac = idx[~bad], jac[~bad]
            if idx.size == 0:
                break
        step = -(np.linalg.pinv(jac) @ values[idx][..., None])[..., 0]
        scale = np.ones(idx.size)
        improved = np.zeros(idx.size, dtype=bool)
        for _ in range(MAX_HALVINGS):
            pending = ~improved
            trial = points[idx[pending]] + scale[pending, None] * step[pending]
            trial_values, trial_res = _residual(self, family, k, trial)
            better = trial_res < res[idx[pending]]
            targets = idx[pending][better]
            points[targets] = trial[better]
            values[targets] = trial_values[better]
            res[targets] = trial_res[better]
            improved[np.flatnonzero(pending)[better]] = True
            scale[~improved] *= 0.5
            if np.all(improved):
                break
        active[idx[~improved]] = False
        active &= res >= tol
    return points, res


def default_seeds(family, box, k):
    """Grid over the central coordinates of the strip plus the fold-point estimate."""
    dims = family.dims
    central = dims.central
    axis = (np.arange(SEEDS_PER_AXIS) + 0.5) / SEEDS_PER_AXIS
    mesh = np.meshgrid(*[axis] * central.size, indexing="ij")
    fractions = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    seeds = np.tile(box.center, (fractions.shape[0], 1))
    seeds[:, central] = box.lo[central] + fractions * box.widths[central]

    _, _, C_k, D_k = family.t0_blocks(k)
    fold = family.Y_plus.copy()
    fold[dims["y"]] = np.linalg.solve(C_k, family.y_minus)
    if dims.sizes["v"]:
        fold[dims["v"]] = np.linalg.solve(D_k, family.v_minus)
    return np.vstack([seeds, fold])


def _deduplicate(points, tol):
    kept = []
    for point in points:
        if all(np.linalg.norm(point - other) > tol for other in kept):
            kept.append(point)
    return kept


def _strong_stable_check(self, family, k, location):
    if not family.dims.sizes["u"]:
        return
    A_k = family.t0_blocks(k)[0]
    exit_point = family.t0(location, k, check=False)
    jac = family.dt1(exit_point, fd_step=self.tol("fd_step"))
    radius = float(np.linalg.norm(A_k, 2) * np.linalg.norm(jac, 2))
    if radius >= 1:
        raise NotContracting(radius, where="strong-stable return block")


def find_single_round_saddles(self, model, params: UnfoldingParams, k: int, seeds=None, strip=None):
    """
    |
    | **Single-Round Saddles**
    | *Fixed points of the unfolded return map found by Newton iteration, with their u-index.*

    :parameter model: LocalTangencyModel; the base model.
    :parameter params: UnfoldingParams.
    :parameter k: int; return index.
    :parameter seeds: optional array; starting points, by default a grid over the strip and the fold estimate.
    :parameter strip: optional Strip; restricts results to its entry box (e.g. a resized strip).
    |
    """

    params = params or UnfoldingParams()
    family = unfold(self, model, params)
    if strip is None:
        try:
            strip = strip_for(self, family, k)
        except EmptyStrip:
            return SaddleSearch([], 0)
    box = strip.box_plus
    seeds = default_seeds(family, box, k) if seeds is None else np.atleast_2d(np.asarray(seeds, dtype=float))

    points, res = newton_fixed_points(self, family, k, seeds)
    converged = res < self.tol("newton_residual")
    inside = np.asarray(box.contains_points(points, tol=1e-9)) & converged
    dropped = int(np.count_nonzero(~converged))
    if dropped:
        logging.debug("k=%d %r: %d of %d seeds did not converge" % (k, params, dropped, len(seeds)))

    saddles = []
    order = np.argsort(res[inside], kind="stable")
    for location in _deduplicate(points[inside][order], self.tol("dedup")):
        _strong_stable_check(self, family, k, location)
        jac = return_jacobian(self, family, k, location)
        eigenvalues = np.linalg.eigvals(jac)
        eigenvalues = eigenvalues[np.argsort(-np.abs(eigenvalues), kind="stable")]
        residual = float(_residual(self, family, k, location[None, :])[1][0])
        saddles.append(
            SingleRoundSaddle(
                location,
                k,
                int(np.count_nonzero(np.abs(eigenvalues) > 1)),
                residual,
                eigenvalues,
                params,
            )
        )
    saddles.sort(key=lambda s: tuple(s.location))
    return SaddleSearch(saddles, dropped)
