import numbers

import numpy as np

from blenderlab.error import ParameterArgumentError
from blenderlab.error import ParameterTypeError
from blenderlab.error import DomainError
from blenderlab.spectra import classify
from blenderlab.spectra import effective_dimension

NAMES = ("t", "alpha", "beta")


class UnfoldingParams(object):
    """Parameters (t, alpha, beta) of the unfolding family; all zero is the base model."""

    def __init__(self, t=0.0, alpha=0.0, beta=0.0):
        for value, name in ((t, "t"), (alpha, "alpha"), (beta, "beta")):
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise ParameterTypeError([name, float])
        self.t = float(t)
        self.alpha = float(alpha)
        self.beta = float(beta)

    @classmethod
    def from_json(cls, data):
        if data is None:
            return cls()
        if not isinstance(data, dict):
            raise ParameterArgumentError("params must be an object with t, alpha, beta")
        unknown = set(data) - set(NAMES)
        if unknown:
            raise ParameterArgumentError(f"unknown unfolding parameters {sorted(unknown)}")
        return cls(data.get("t", 0.0), data.get("alpha", 0.0), data.get("beta", 0.0))

    def values(self):
        return {"t": self.t, "alpha": self.alpha, "beta": self.beta}

    def to_dict(self):
        return self.values()

    def __repr__(self):
        return "UnfoldingParams(t=%r, alpha=%r, beta=%r)" % (self.t, self.alpha, self.beta)


def model_multipliers(model):
    """Eigenvalues of the linear neighbourhood map, block by block."""
    return [complex(z) for M in (model.A, model.B, model.C, model.D) if M.size for z in np.linalg.eigvals(M)]


def active_parameters(self, model):
    """
    |
    | **Active Unfolding Parameters**
    | *Names of the parameters used by the family, one per effective dimension.*

    :parameter model: LocalTangencyModel.
    |
    """

    try:
        classification = classify(self, model_multipliers(model), model.dims.n)
        d_e = effective_dimension(self, classification)
    except DomainError:
        return ("t",)
    if d_e == 1:
        return ("t",)
    if d_e == 3:
        return NAMES
    if classification.m_s == 2:
        return ("t", "alpha")
    return ("t", "beta")


def check_active(self, model, params):
    active = active_parameters(self, model)
    for name, value in params.values().items():
        if value != 0.0 and name not in active:
            raise ParameterArgumentError(
                f"parameter {name} is inactive for this model (active: {', '.join(active)})"
            )
    return active
