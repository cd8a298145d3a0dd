import logging

import numpy as np

from blenderlab.error import ParameterArgumentError
from blenderlab.error import Reducible
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter

POWER_TOL = 1e-12
POWER_STEPS = 100000
DEFAULT_SMOOTHNESS = 2.0


class HorseshoeSpec(object):
    """Subshift of finite type with constant diagonal derivative moduli per state.

    Keyword Args:
        r (float, optional): smoothness of the diffeomorphism, above one. By default it's 2.
    """

    def __init__(self, matrix, rates, m: int, n: int, r=DEFAULT_SMOOTHNESS):
        check_count_parameter(m, "m", minimum=1)
        check_count_parameter(n, "n", minimum=1)
        matrix = as_matrix(matrix, "matrix")
        if matrix.shape[0] != matrix.shape[1]:
            raise ParameterArgumentError("transition matrix must be square")
        if not np.all((matrix == 0) | (matrix == 1)):
            raise ParameterArgumentError("transition matrix entries must be 0 or 1")
        rates = as_matrix(rates, "rates", (matrix.shape[0], m + n))
        if np.any(rates <= 0):
            raise ParameterArgumentError("rates must be positive")
        if np.any(rates == 1):
            raise ParameterArgumentError("no rate may equal one")
        stable = rates < 1
        if np.any(stable.sum(axis=1) != m):
            raise ParameterArgumentError(f"every state needs exactly {m} rates below one")
        if np.any(stable != stable[0]):
            raise ParameterArgumentError("stable directions must be the same in every state")
        if float(r) <= 1:
            raise ParameterArgumentError(f"smoothness r={r} must exceed one")
        self.matrix = matrix
        self.rates = rates
        self.m = m
        self.n = n
        self.r = float(r)

    @classmethod
    def from_json(cls, data):
        check_required_parameter(data, "horseshoe")
        for key in ("matrix", "rates", "m", "n"):
            check_required_parameter(data.get(key), key)
        return cls(data["matrix"], data["rates"], data["m"], data["n"], data.get("r", DEFAULT_SMOOTHNESS))

    @property
    def states(self):
        return self.matrix.shape[0]

    def inverse(self):
        """Spec of the inverse map: rates inverted, stable and unstable groups swapped."""
        return HorseshoeSpec(self.matrix.T, 1.0 / self.rates, self.n, self.m, self.r)

    def to_dict(self):
        return {"matrix": self.matrix, "rates": self.rates, "m": self.m, "n": self.n, "r": self.r}


class MaximalEntropyMeasure(object):
    def __init__(self, weights, transition, entropy):
        self.weights = weights
        self.transition = transition
        self.entropy = entropy

    def to_dict(self):
        return {"weights": self.weights, "transition": self.transition, "entropy": self.entropy}


class SpectrumReport(object):
    def __init__(self, h_top, exponents, stable_count):
        self.h_top = h_top
        self.exponents = exponents
        stable = exponents[:stable_count]
        unstable = exponents[stable_count:]
        self.chi_cs = float(stable[-1])
        self.chi_cu = float(unstable[0])
        self.J_s = float(np.exp(np.sum(stable)))
        self.J_u = float(np.exp(np.sum(unstable)))

    def to_dict(self):
        return {
            "h_top": self.h_top,
            "exponents": self.exponents,
            "chi_cs": self.chi_cs,
            "chi_cu": self.chi_cu,
            "J_s": self.J_s,
            "J_u": self.J_u,
        }


def _positive_power(matrix, power):
    """Whether matrix**power has only positive entries, by boolean repeated squaring."""
    result = np.eye(matrix.shape[0], dtype=bool)
    base = matrix > 0
    while power:
        if power & 1:
            result = (result.astype(int) @ base.astype(int)) > 0
        base = (base.astype(int) @ base.astype(int)) > 0
        power >>= 1
    return bool(np.all(result))


def _require_irreducible(matrix, aperiodic=False):
    size = matrix.shape[0]
    if not _positive_power(np.eye(size) + matrix, size - 1):
        raise Reducible("not irreducible")
    if aperiodic and not _positive_power(matrix, (size - 1) ** 2 + 1):
        raise Reducible("not aperiodic")


def _perron(matrix):
    """Perron root and positive eigenvector by power iteration on I + matrix."""
    shifted = np.eye(matrix.shape[0]) + matrix
    v = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    root = 0.0
    for _ in range(POWER_STEPS):
        w = shifted @ v
        estimate = float(np.sum(w) / np.sum(v))
        w /= np.sum(w)
        if abs(estimate - root) <= POWER_TOL * estimate and np.max(np.abs(w - v)) <= POWER_TOL:
            v, root = w, estimate
            break
        v, root = w, estimate
    return root - 1.0, v


def topological_entropy(self, spec: HorseshoeSpec) -> float:
    """
    |
    | **Topological Entropy**
    | *Log of the spectral radius of the transition matrix, in nats.*

    :parameter spec: HorseshoeSpec.
    |
    """

    check_required_parameter(spec, "spec")
    _require_irreducible(spec.matrix)
    radius, _ = _perron(spec.matrix)
    return float(np.log(radius))


def maximal_entropy_measure(self, spec: HorseshoeSpec) -> MaximalEntropyMeasure:
    """
    |
    | **Maximal Entropy Measure**
    | *Parry measure: stationary weights and transition probabilities from the Perron eigenvectors.*

    :parameter spec: HorseshoeSpec; irreducible and aperiodic.
    |
    """

    check_required_parameter(spec, "spec")
    _require_irreducible(spec.matrix, aperiodic=True)
    radius, right = _perron(spec.matrix)
    _, left = _perron(spec.matrix.T)
    transition = spec.matrix * right[None, :] / (radius * right[:, None])
    weights = left * right / float(left @ right)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(transition > 0, transition * np.log(transition), 0.0)
    entropy = float(-np.sum(weights[:, None] * terms))
    logging.debug("parry measure entropy %.15g, log radius %.15g" % (entropy, np.log(radius)))
    return MaximalEntropyMeasure(weights, transition, entropy)


def lyapunov_spectrum(self, spec: HorseshoeSpec, measure=None) -> SpectrumReport:
    """
    |
    | **Lyapunov Spectrum**
    | *Measure averages of the log-rates per direction, ordered increasingly.*

    :parameter spec: HorseshoeSpec.
    :parameter measure: optional MaximalEntropyMeasure or per-state weights; by default the maximal entropy measure.
    |
    """

    check_required_parameter(spec, "spec")
    if measure is None:
        measure = maximal_entropy_measure(self, spec)
    weights = np.asarray(getattr(measure, "weights", measure), dtype=float)
    if weights.shape != (spec.states,) or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-9:
        raise ParameterArgumentError("measure weights must be a probability vector over the states")
    exponents = np.sort(weights @ np.log(spec.rates))
    return SpectrumReport(topological_entropy(self, spec), exponents, spec.m)


def entropy_gap(self, spec: HorseshoeSpec):
    """
    |
    | **Entropy Gap**
    | *Whether the topological entropy exceeds the cs and cu thresholds of the blender criteria.*

    Thresholds are -log J_s + chi_cs / 2r (cs side) and log J_u - chi_cu / 2r (cu side).
    Passing is a hypothesis check for the perturbative construction, not a certificate
    that a blender is present.

    :parameter spec: HorseshoeSpec.
    |
    """

    report = lyapunov_spectrum(self, spec)
    h = report.h_top
    threshold_cs = -np.log(report.J_s) + report.chi_cs / (2 * spec.r)
    threshold_cu = np.log(report.J_u) - report.chi_cu / (2 * spec.r)
    cs_ok = bool(h > threshold_cs)
    cu_ok = bool(h > threshold_cu)
    logging.info("entropy gap h=%.6g cs=%.6g cu=%.6g" % (h, threshold_cs, threshold_cu))
    return {
        "cs_ok": cs_ok,
        "cu_ok": cu_ok,
        "double_ok": cs_ok and cu_ok,
        "thresholds": {"cs": float(threshold_cs), "cu": float(threshold_cu)},
        "h_top": h,
        "central_dimensions": {"cs": spec.m - 1, "cu": spec.n - 1},
        "pesin_defect": float(np.log(report.J_u) - h),
        "spectrum": report,
    }
