import numpy as np

from blenderlab.error import ParameterValueError
from blenderlab.lib.boxes import Box
from blenderlab.local_model.model import Dims
from blenderlab.local_model.model import LocalTangencyModel
from blenderlab.local_model.model import TransitionMap

# Theta levels counted outwards-in around y_minus = 1; the third pair gives delta = 0.02
RESIZE_CONFIG = {"theta_planes": [0.9, 0.95, 0.99, 1.01, 1.05, 1.1], "rho": 0.25, "j": 3}

PLANE_TRANSITION = {
    "A1": [[0.1]],
    "B1": [[0.1]],
    "C1": [[0.1]],
    "C2": [[1.0]],
    "B3": [[-1.0]],
    "C3": [[1.0]],
}


def _plane_model(lam, x_box, remainder=None):
    dims = Dims(2, 1, 1, 1)
    return LocalTangencyModel(
        dims,
        {"A": [[0.2]], "B": [[lam]], "C": [[2.0]]},
        Box([-2.0] * 3, [2.0] * 3),
        [1.0],
        [1.0],
        Box([-0.3, -0.3, 0.8], [0.3, 0.3, 1.2]),
        Box([-0.2, x_box[0], -0.2], [0.2, x_box[1], 0.2]),
        TransitionMap(dims, PLANE_TRANSITION, remainder),
    )


def tangency_model(remainder=None):
    """Type (1,1) saddle with lambda=0.75, gamma=2, so lambda*gamma=1.5 and one unfolding parameter."""
    return _plane_model(0.75, (0.86, 1.14), remainder)


def volume_model():
    """lambda=0.9, gamma=2; plane transition with unit central determinant and the quadratic fold C3=1."""
    return _plane_model(0.9, (0.95, 1.05))


def rotational_model(theta=np.pi / 4):
    """
    Type (2,1) saddle, B = 0.8 R_theta and gamma = 2, so lambda^2*gamma = 1.28.

    At k=6, alpha=0 and t = (1 - 0.8^12 * 32) / 64 single-round saddles of u-index 2 and 3 coexist.
    """
    dims = Dims(2, 1, 2, 1)
    c, s = np.cos(theta), np.sin(theta)
    transition = TransitionMap(
        dims,
        {
            "B2": [[0.0, 0.0], [0.0, 0.5]],
            "C2": [[1.0], [0.0]],
            "B3": [[-1.0, 0.0]],
            "C3": [[1.0]],
        },
    )
    return LocalTangencyModel(
        dims,
        {"B": [[0.8 * c, -0.8 * s], [0.8 * s, 0.8 * c]], "C": [[2.0]]},
        Box([-2.0] * 3, [2.0] * 3),
        [1.0],
        [1.0, 0.0],
        Box([-0.3, -0.3, 0.8], [0.3, 0.3, 1.2]),
        Box([0.8, -0.2, -0.2], [1.2, 0.2, 0.2]),
        transition,
    )


PRESETS = {
    "tangency": tangency_model,
    "volume": volume_model,
    "rotational": rotational_model,
}


def preset(name):
    if name not in PRESETS:
        raise ParameterValueError([name])
    return PRESETS[name]()


def model_from_json(data):
    """A preset reference {"preset": name} or a full model object."""
    if isinstance(data, dict) and "preset" in data:
        return preset(data["preset"])
    return LocalTangencyModel.from_json(data)
