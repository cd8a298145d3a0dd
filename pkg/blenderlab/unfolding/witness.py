import logging

import numpy as np

from blenderlab.error import NotFound
from blenderlab.error import ParameterArgumentError
from blenderlab.error import WrongCodimension
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter
from blenderlab.local_model.maps import return_jacobian
from blenderlab.local_model.strips import resized_strip
from blenderlab.unfolding.family import unfold

SEGMENT_SAMPLES = 257
MAX_BISECTIONS = 200


def _iterate(self, family, k, points, rounds):
    for _ in range(rounds):
        points = family.t1(
            family.t0(points, k, check=False),
            tol=self.tol("implicit"),
            iterations=int(self.tol("implicit_iterations")),
        )
    return points


def _unstable_direction(self, family, k, location):
    eigenvalues, vectors = np.linalg.eig(return_jacobian(self, family, k, location))
    leading = vectors[:, int(np.argmax(np.abs(eigenvalues)))]
    direction = np.real(leading)
    if np.linalg.norm(direction) < 1e-8:
        direction = np.imag(leading)
    return direction / np.linalg.norm(direction)


def _inside_run(mask, anchor):
    """Bounds of the contiguous True run of `mask` containing index `anchor`."""
    if not mask[anchor]:
        return None
    lo = anchor
    while lo > 0 and mask[lo - 1]:
        lo -= 1
    hi = anchor
    while hi < mask.size - 1 and mask[hi + 1]:
        hi += 1
    return lo, hi


def _u_inside(strip, points):
    y_axis = strip.dims["y"].start
    others = [axis for axis in range(strip.dims.total) if axis != y_axis]
    box = strip.box_plus
    return np.all(
        (points[:, others] >= box.lo[others] - 1e-12) & (points[:, others] <= box.hi[others] + 1e-12),
        axis=1,
    )


def _first_crossing(strip, points, lo, hi, anchor):
    """Sample pair nearest the saddle where the signed distance to an s-face changes sign."""
    best = None
    for face in strip.s_boundary:
        sigma = points[lo : hi + 1, face["axis"]] - face["value"]
        changes = np.flatnonzero(sigma[:-1] * sigma[1:] <= 0) + lo
        for i in changes:
            distance = min(abs(i - anchor), abs(i + 1 - anchor))
            if best is None or distance < best[0]:
                best = (distance, i, face)
    return best


def cycle_witness(self, model, params, k: int, saddle, resize, max_rounds=50, radius=1e-3):
    """
    |
    | **Cycle Witness**
    | *Iterates a local unstable segment of a saddle until it crosses the s-boundary of the resized strip.*

    :parameter model: LocalTangencyModel; the base model, u-index one.
    :parameter params: UnfoldingParams of the saddle.
    :parameter k: int; return index.
    :parameter saddle: SingleRoundSaddle; u-index at least two.
    :parameter resize: dict; "theta_planes", "rho" and "j" of the resized strip.
    :parameter max_rounds: optional int; rounds before giving up. Default 50.
    :parameter radius: optional float; half-length of the initial unstable segment. Default 1e-3.
    |
    """

    check_required_parameter(saddle, "saddle")
    check_required_parameter(resize, "resize")
    check_count_parameter(max_rounds, "max_rounds", minimum=1)
    if model.dims.n != 1:
        raise WrongCodimension(model.dims.n)
    if saddle.u_index < 2:
        raise ParameterArgumentError(f"saddle has u-index {saddle.u_index}, need at least 2")
    family = unfold(self, model, params)
    strip = resized_strip(self, family, resize.get("j", 1), k, resize.get("theta_planes"), resize.get("rho"))

    location = np.asarray(saddle.location, dtype=float)
    direction = _unstable_direction(self, family, k, location)

    def curve(s):
        return location + np.outer(s, radius * direction)

    s_lo, s_hi = -1.0, 1.0
    tol = self.tol("bisection")
    points = None
    for m in range(1, max_rounds + 1):
        params_s = np.linspace(s_lo, s_hi, SEGMENT_SAMPLES)
        anchor = int(np.argmin(np.abs(params_s)))
        with np.errstate(over="ignore", invalid="ignore"):
            points = _iterate(self, family, k, curve(params_s), m)
        run = _inside_run(_u_inside(strip, points), anchor)
        if run is None:
            raise ParameterArgumentError("saddle lies outside the u-boundary of the resized strip")
        lo, hi = run
        hit = _first_crossing(strip, points, lo, hi, anchor)
        if hit is None:
            s_lo, s_hi = params_s[lo], params_s[hi]
            logging.debug("cycle witness round %d: no crossing, segment [%.6g, %.6g]" % (m, s_lo, s_hi))
            continue

        _, i, face = hit
        axis, value = face["axis"], face["value"]

        def sigma(s):
            return float(_iterate(self, family, k, curve(np.array([s])), m)[0, axis] - value)

        a, b = params_s[i], params_s[i + 1]
        sigma_a, sigma_b = sigma(a), sigma(b)
        bracket = [sigma_a, sigma_b]
        s_mid, sigma_mid = (a, sigma_a) if abs(sigma_a) < abs(sigma_b) else (b, sigma_b)
        for _ in range(MAX_BISECTIONS):
            if abs(sigma_mid) < tol:
                break
            s_mid = (a + b) / 2
            sigma_mid = sigma(s_mid)
            if (sigma_mid < 0) == (sigma_a < 0):
                a, sigma_a = s_mid, sigma_mid
            else:
                b, sigma_b = s_mid, sigma_mid
        crossing = _iterate(self, family, k, curve(np.array([s_mid])), m)[0]
        logging.info("cycle witness crossed %s face after %d rounds" % (face["side"], m))
        return {
            "m0": m,
            "crossing": crossing,
            "sigma": sigma_mid,
            "parameter": s_mid,
            "face": face,
            "bracket": bracket,
            "saddle": location,
            "margin": strip.extras["margin"],
        }

    diagnostics = {"segment": [s_lo, s_hi]}
    if points is not None:
        finite = points[np.all(np.isfinite(points), axis=1)]
        if finite.size:
            diagnostics["c_extent"] = float(np.ptp(finite[:, strip.dims["x"]], axis=0).max())
            diagnostics["u_extent"] = float(np.ptp(finite[:, strip.dims["y"]], axis=0).max())
    raise NotFound(max_rounds, diagnostics)
