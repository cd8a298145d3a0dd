import numpy as np
import pytest
from sure import expect

from blenderlab.error import ParameterArgumentError
from blenderlab.error import ParameterTypeError
from blenderlab.local_model.presets import rotational_model
from blenderlab.local_model.presets import tangency_model
from blenderlab.unfolding import UnfoldingParams


def test_params_from_json():
    params = UnfoldingParams.from_json({"t": 0.25})
    expect(params.values()).to.equal({"t": 0.25, "alpha": 0.0, "beta": 0.0})
    expect(UnfoldingParams.from_json(None).values()).to.equal({"t": 0.0, "alpha": 0.0, "beta": 0.0})
    expect(UnfoldingParams.from_json).when.called_with({"gamma": 1.0}).should.throw(ParameterArgumentError)
    expect(UnfoldingParams).when.called_with("0.1").should.throw(ParameterTypeError)


def test_active_parameters(lab):
    expect(lab.active_parameters(tangency_model())).to.equal(("t",))
    expect(lab.active_parameters(rotational_model())).to.equal(("t", "alpha"))


def test_inactive_parameter_rejected(lab):
    expect(lab.unfold).when.called_with(tangency_model(), UnfoldingParams(alpha=0.1)).should.throw(
        ParameterArgumentError
    )


def test_zero_parameters_reduce_to_base(lab):
    model = tangency_model()
    strip = lab.strip(model, 6)
    points = lab.rng(1).uniform(strip.box_plus.lo, strip.box_plus.hi, size=(100, 3))
    base = lab.return_map(model, 6, points)
    unfolded = lab.unfolded_return_map(model, UnfoldingParams(), 6, points)
    expect(np.max(np.abs(base - unfolded))).should.be.lower_than(1e-14)


def test_t_shifts_only_y_bar(lab):
    model = tangency_model()
    point = np.array([0.01, 1.0, 1.05 / 64])
    base = lab.unfolded_return_map(model, UnfoldingParams(), 6, point)
    shifted = lab.unfolded_return_map(model, UnfoldingParams(t=0.125), 6, point)
    assert (shifted - base).tolist() == pytest.approx([0.0, 0.0, 0.125], abs=1e-15)


def test_alpha_rotates_the_central_block(lab):
    k = 8
    family = lab.unfold(rotational_model(), UnfoldingParams(alpha=2 * np.pi / k))
    image = family.t0(np.array([1.0, 0.0, 1e-3]), k)
    assert image[:2].tolist() == pytest.approx([0.8 ** k, 0.0], abs=1e-12)
