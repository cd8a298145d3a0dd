import logging

from blenderlab.lib.utils import check_required_parameters
from blenderlab.local_model.maps import return_map
from blenderlab.spectra import rotation
from blenderlab.unfolding.params import UnfoldingParams
from blenderlab.unfolding.params import check_active


def unfold(self, model, params: UnfoldingParams):
    """
    |
    | **Unfold**
    | *Family member at the given parameters: leading blocks rotated, transition translated by t.*

    :parameter model: LocalTangencyModel; the base model.
    :parameter params: UnfoldingParams; inactive components must be zero.
    |
    """

    check_required_parameters([[model, "model"], [params, "params"]])
    check_active(self, model, params)
    B = model.B @ rotation(params.alpha) if params.alpha else None
    C = model.C @ rotation(params.beta) if params.beta else None
    logging.debug("unfold %r" % params)
    return model.derive(B=B, C=C, shift=model.shift + params.t)


def unfolded_return_map(self, model, params: UnfoldingParams, k: int, point):
    """
    |
    | **Unfolded Return Map**
    | *Return map of the family member at the given parameters.*

    :parameter model: LocalTangencyModel; the base model.
    :parameter params: UnfoldingParams.
    :parameter k: int; number of linear iterates.
    :parameter point: array; one point or a stack of points.
    |
    """

    return return_map(self, unfold(self, model, params), k, point)
