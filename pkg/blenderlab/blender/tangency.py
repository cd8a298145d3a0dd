import logging

import numpy as np

from blenderlab.error import DegenerateFoliation
from blenderlab.error import ParameterArgumentError
from blenderlab.lib.utils import check_required_parameter

DERIVATIVE_STEP = 1e-6
GRADIENT_FLOOR = 1e-12
MAX_BISECTIONS = 200


class ClosedCurve(object):
    """Smooth closed curve t -> (y(t), z(t)) with the given period."""

    def __init__(self, func, period=2 * np.pi, source=None):
        self.func = func
        self.period = float(period)
        self.source = source

    @classmethod
    def ellipse(cls, axes=(1.0, 1.0), center=(0.0, 0.0)):
        a, b = axes
        cy, cz = center

        def func(t):
            t = np.asarray(t, dtype=float)
            return np.stack([cy + a * np.cos(t), cz + b * np.sin(t)], axis=-1)

        return cls(func, source={"ellipse": {"axes": list(axes), "center": list(center)}})

    @classmethod
    def trigonometric(cls, y, z):
        """Coordinates given as {"cos": [a0, a1, ...], "sin": [b1, b2, ...]} trigonometric polynomials."""

        def series(coefs, t):
            cos = np.asarray(coefs.get("cos", [0.0]), dtype=float)
            sin = np.asarray(coefs.get("sin", []), dtype=float)
            value = np.full_like(t, cos[0] if cos.size else 0.0)
            for k, a in enumerate(cos[1:], start=1):
                value = value + a * np.cos(k * t)
            for k, b in enumerate(sin, start=1):
                value = value + b * np.sin(k * t)
            return value

        def func(t):
            t = np.asarray(t, dtype=float)
            return np.stack([series(y, t), series(z, t)], axis=-1)

        return cls(func, source={"trig": {"y": y, "z": z}})

    @classmethod
    def random(cls, rng, degree=4, scale=1.0):
        """Random trigonometric curve with coefficients decaying like 1/k^2."""
        decay = 1.0 / np.arange(1, degree + 1) ** 2

        def coefficients():
            return {
                "cos": [0.0] + (scale * decay * rng.normal(size=degree)).tolist(),
                "sin": (scale * decay * rng.normal(size=degree)).tolist(),
            }

        return cls.trigonometric(coefficients(), coefficients())

    @classmethod
    def from_json(cls, data):
        check_required_parameter(data, "curve")
        if "ellipse" in data:
            spec = data["ellipse"] or {}
            return cls.ellipse(tuple(spec.get("axes", (1.0, 1.0))), tuple(spec.get("center", (0.0, 0.0))))
        if "trig" in data:
            return cls.trigonometric(data["trig"].get("y", {}), data["trig"].get("z", {}))
        raise ParameterArgumentError("curve must be {\"ellipse\": ...} or {\"trig\": ...}")

    def __call__(self, t):
        return self.func(t)

    def to_dict(self):
        return self.source


class Foliation(object):
    """Submersion (y, z) -> F whose level sets are the unstable leaves."""

    def __init__(self, func, source=None):
        self.func = func
        self.source = source

    @classmethod
    def linear(cls, gradient):
        g = np.asarray(gradient, dtype=float)
        return cls(lambda p: np.asarray(p, dtype=float) @ g, {"linear": g.tolist()})

    @classmethod
    def radial(cls, center):
        c = np.asarray(center, dtype=float)
        return cls(lambda p: np.sum((np.asarray(p, dtype=float) - c) ** 2, axis=-1), {"radial": c.tolist()})

    @classmethod
    def from_json(cls, data):
        check_required_parameter(data, "foliation")
        if "linear" in data:
            return cls.linear(data["linear"])
        if "radial" in data:
            return cls.radial(data["radial"])
        raise ParameterArgumentError("foliation must be {\"linear\": [gy, gz]} or {\"radial\": [cy, cz]}")

    def __call__(self, points):
        return self.func(points)

    def gradient(self, points, h=DERIVATIVE_STEP):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        columns = [(self.func(points + e) - self.func(points - e)) / (2 * h) for e in np.eye(2) * h]
        return np.stack(columns, axis=-1)

    def to_dict(self):
        return self.source


def _slope(curve, foliation, t, h=DERIVATIVE_STEP):
    return (foliation(curve(t + h)) - foliation(curve(t - h))) / (2 * h)


def tangency_witness(self, curve: ClosedCurve, foliation: Foliation, samples=None):
    """
    |
    | **Tangency Witness**
    | *Parameters where the closed curve is tangent to a leaf of the foliation.*

    :parameter curve: ClosedCurve.
    :parameter foliation: Foliation; nonvanishing gradient along the curve.
    :parameter samples: optional int; sign-change grid size, by default the tangency_samples tolerance.
    |
    """

    check_required_parameter(curve, "curve")
    check_required_parameter(foliation, "foliation")
    samples = int(self.tol("tangency_samples")) if samples is None else samples
    t = np.arange(samples) * (curve.period / samples)

    norms = np.linalg.norm(foliation.gradient(curve(t)), axis=-1)
    weakest = int(np.argmin(norms))
    if norms[weakest] < GRADIENT_FLOOR:
        raise DegenerateFoliation(float(t[weakest]))

    positive = _slope(curve, foliation, t) > 0
    changes = np.flatnonzero(positive != np.roll(positive, -1))
    tol = self.tol("bisection")
    roots = []
    for i in changes:
        a = t[i]
        b = a + curve.period / samples
        sign_a = positive[i]
        for _ in range(MAX_BISECTIONS):
            if b - a <= tol:
                break
            mid = (a + b) / 2
            if (_slope(curve, foliation, mid) > 0) == sign_a:
                a = mid
            else:
                b = mid
        roots.append(float(((a + b) / 2) % curve.period))
    roots.sort()
    logging.debug("tangency witness: %d tangencies on %d samples" % (len(roots), samples))
    return roots
