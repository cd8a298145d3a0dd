import logging
import numbers

import numpy as np

from blenderlab.error import (
    UnitModulus,
    IndexMismatch,
    NotSimple,
    JacobianNotExpanding,
    NoBifurcation,
    ParameterArgumentError,
)
from blenderlab.lib.utils import as_matrix
from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import check_required_parameter
from blenderlab.lib.utils import parse_complex_list

SIMPLE_TYPES = ((1, 1), (2, 1), (1, 2), (2, 2))
ANGLE_SCAN_POINTS = 2048


def _as_complex_list(values, name="multipliers"):
    check_required_parameter(values, name)
    if all(isinstance(v, numbers.Complex) for v in values):
        return [complex(v) for v in values]
    return parse_complex_list(values, name)


def rotation(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


class SaddleSpectrum(object):
    """Multipliers of a periodic point ordered by modulus, with the declared u-index."""

    def __init__(self, multipliers, u_index):
        check_count_parameter(u_index, "u_index")
        values = _as_complex_list(multipliers)
        self.multipliers = tuple(sorted(values, key=lambda z: (abs(z), z.imag)))
        self.u_index = u_index

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise ParameterArgumentError("spectrum must be a JSON object")
        check_required_parameter(data.get("multipliers"), "multipliers")
        check_required_parameter(data.get("u_index"), "u_index")
        return cls(data["multipliers"], data["u_index"])

    @property
    def n(self):
        return self.u_index

    @property
    def m(self):
        return len(self.multipliers) - self.u_index

    def inverse(self):
        """Spectrum of the inverse period map."""
        return SaddleSpectrum([1 / z for z in self.multipliers], self.m)

    def to_dict(self):
        return {"multipliers": list(self.multipliers), "u_index": self.u_index}


class SaddleClassification(object):
    def __init__(self, m_s, n_u, simple, leading_jacobian, effective_dimension, lam, gamma, m, n):
        self.m_s = m_s
        self.n_u = n_u
        self.simple = simple
        self.leading_jacobian = leading_jacobian
        self.effective_dimension = effective_dimension
        self.lam = lam
        self.gamma = gamma
        self.m = m
        self.n = n

    @property
    def saddle_type(self):
        return (self.m_s, self.n_u)

    def to_dict(self):
        return {
            "m_s": self.m_s,
            "n_u": self.n_u,
            "simple": self.simple,
            "leading_jacobian": self.leading_jacobian,
            "effective_dimension": self.effective_dimension,
            "lambda": self.lam,
            "gamma": self.gamma,
            "m": self.m,
            "n": self.n,
        }


def _leading_group_is_pair(group, nonreal_tol):
    # equal moduli and nonreal forces a conjugate pair for a real period map
    return all(abs(z.imag) > nonreal_tol * abs(z) for z in group)


def _dimension_for(m_s, n_u, lam, gamma):
    if (m_s, n_u) == (1, 1):
        return 1
    if (m_s, n_u) == (1, 2):
        return 1 if lam * gamma > 1 else 2
    if (m_s, n_u) == (2, 1):
        return 2
    return 2 if lam * lam * gamma > 1 else 3


def classify(self, multipliers, u_index: int):
    """
    |
    | **Classify Saddle Spectrum**
    | *Leading multipliers, saddle type, simplicity and leading Jacobian of a periodic point.*

    :parameter multipliers: list; complex numbers or [re, im] pairs, counted with multiplicity.
    :parameter u_index: int; declared number of multipliers with modulus above one.
    |
    """

    spectrum = SaddleSpectrum(multipliers, u_index)
    tol = self.tol("modulus")
    for z in spectrum.multipliers:
        if abs(abs(z) - 1.0) <= tol:
            raise UnitModulus(z, tol)

    stable = [z for z in spectrum.multipliers if abs(z) < 1]
    unstable = [z for z in spectrum.multipliers if abs(z) > 1]
    if len(unstable) != u_index or not stable or not unstable:
        raise IndexMismatch(u_index, len(unstable))

    lam = max(abs(z) for z in stable)
    gamma = min(abs(z) for z in unstable)
    leading_s = [z for z in stable if abs(abs(z) - lam) <= tol * lam]
    leading_u = [z for z in unstable if abs(abs(z) - gamma) <= tol * gamma]
    m_s, n_u = len(leading_s), len(leading_u)

    nonreal_tol = self.tol("nonreal")
    simple = (m_s, n_u) in SIMPLE_TYPES and all(
        len(group) == 1 or _leading_group_is_pair(group, nonreal_tol)
        for group in (leading_s, leading_u)
    )
    jacobian = lam ** m_s * gamma ** n_u
    dimension = None
    if simple and jacobian > 1:
        dimension = _dimension_for(m_s, n_u, lam, gamma)

    logging.debug("classified type (%d,%d) simple=%s J=%.6g" % (m_s, n_u, simple, jacobian))
    return SaddleClassification(
        m_s, n_u, simple, jacobian, dimension, lam, gamma, spectrum.m, spectrum.n
    )


def effective_dimension(self, classification: SaddleClassification, lam=None, gamma=None):
    """
    |
    | **Effective Dimension**
    | *Number of unfolding parameters for a simple saddle with expanding leading Jacobian.*

    :parameter classification: SaddleClassification; result of ``classify``.
    :parameter lam: optional float; leading stable modulus, defaults to the classification's.
    :parameter gamma: optional float; leading unstable modulus, defaults to the classification's.
    |
    """

    check_required_parameter(classification, "classification")
    lam = classification.lam if lam is None else float(lam)
    gamma = classification.gamma if gamma is None else float(gamma)
    if not classification.simple:
        raise NotSimple(classification.m_s, classification.n_u)
    jacobian = lam ** classification.m_s * gamma ** classification.n_u
    if jacobian <= 1:
        raise JacobianNotExpanding(jacobian)
    return _dimension_for(classification.m_s, classification.n_u, lam, gamma)


def rotation_eigenvalues(self, matrix, phi: float):
    """
    |
    | **Rotation Family Eigenvalues**
    | *Eigenvalues of A composed with the rotation by phi, closed form.*

    :parameter matrix: 2x2 nested list or array.
    :parameter phi: float; rotation angle in radians.
    |
    """

    a = as_matrix(matrix, "matrix", shape=(2, 2))
    trace = (a[0, 0] + a[1, 1]) * np.cos(phi) + (a[0, 1] - a[1, 0]) * np.sin(phi)
    det = np.linalg.det(a)
    disc = trace * trace - 4 * det
    if disc >= 0:
        root = np.sqrt(disc)
        return complex((trace + root) / 2), complex((trace - root) / 2)
    root = np.sqrt(-disc)
    return complex(trace / 2, root / 2), complex(trace / 2, -root / 2)


def rotation_discriminant(a, phi):
    trace = (a[0, 0] + a[1, 1]) * np.cos(phi) + (a[0, 1] - a[1, 0]) * np.sin(phi)
    return trace * trace - 4 * np.linalg.det(a)


def saddle_node_angle(self, matrix):
    """
    |
    | **Saddle-Node Angle**
    | *Smallest rotation angle at which A composed with the rotation has a double real eigenvalue.*

    :parameter matrix: 2x2 nested list or array with real eigenvalues tau > rho > 0.
    |
    """

    a = as_matrix(matrix, "matrix", shape=(2, 2))
    disc0 = rotation_discriminant(a, 0.0)
    det = np.linalg.det(a)
    trace = a[0, 0] + a[1, 1]
    if disc0 < 0 or det <= 0 or trace <= 0:
        raise NoBifurcation(
            "eigenvalues are not real and positive",
            {"discriminant": disc0, "det": det, "trace": trace},
        )
    tau = (trace + np.sqrt(disc0)) / 2
    rho = (trace - np.sqrt(disc0)) / 2
    if (tau - rho) <= 1e-9 * tau:
        raise NoBifurcation("eigenvalues are not distinct", {"tau": tau, "rho": rho})

    phis = np.linspace(0.0, np.pi, ANGLE_SCAN_POINTS + 1)[1:-1]
    values = np.array([rotation_discriminant(a, p) for p in phis])
    crossing = np.flatnonzero(values <= 0)
    if crossing.size == 0:
        raise NoBifurcation(
            "discriminant keeps its sign on (0, pi)",
            {"tau": tau, "rho": rho, "min_discriminant": float(values.min())},
        )
    index = int(crossing[0])
    hi = phis[index]
    lo = phis[index - 1] if index > 0 else 0.0
    tol = self.tol("angle")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if rotation_discriminant(a, mid) > 0:
            lo = mid
        else:
            hi = mid
    phi0 = (lo + hi) / 2
    logging.debug("saddle-node angle %.15g for tau=%g rho=%g" % (phi0, tau, rho))
    return float(phi0)


def predicted_index_variation(self, classification: SaddleClassification):
    """
    |
    | **Predicted Index Variation**
    | *u-indices of the saddles created when unfolding a tangency of a simple saddle.*

    :parameter classification: SaddleClassification; simple, leading Jacobian above one.
    |
    """

    d_e = effective_dimension(self, classification)
    n = classification.n
    if d_e == 1:
        indices = [n + 1]
    elif d_e == 2 and classification.saddle_type == (1, 2):
        indices = [n - 1, n + 1]
    elif d_e == 2:
        indices = [n + 1, n + 2]
    else:
        indices = [n - 1, n + 1, n + 2]
    return {"effective_dimension": d_e, "u_indices": indices, "center_dimension": n + d_e}


def double_blender_dimension(self, classification: SaddleClassification):
    """Central dimension of the double blender generated from a simple saddle."""
    if not classification.simple:
        raise NotSimple(classification.m_s, classification.n_u)
    if classification.leading_jacobian >= 1:
        return classification.m_s
    return classification.n_u
