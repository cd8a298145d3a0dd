import numpy as np
from sure import expect

from blenderlab.error import ParameterArgumentError
from blenderlab.error import QuantifierViolation
from blenderlab.local_model.presets import RESIZE_CONFIG
from blenderlab.local_model.presets import tangency_model
from blenderlab.unfolding import SingleRoundSaddle
from blenderlab.unfolding import UnfoldingParams

K = 5
PARAMS = UnfoldingParams(t=0.25)


def raised_saddle(lab):
    return [s for s in lab.find_single_round_saddles(tangency_model(), PARAMS, K) if s.u_index == 2][0]


def test_unstable_segment_crosses_the_s_boundary(lab):
    result = lab.cycle_witness(tangency_model(), PARAMS, K, raised_saddle(lab), RESIZE_CONFIG)
    expect(result["m0"]).should.be.greater_than_or_equal_to(1)
    expect(result["bracket"][0] * result["bracket"][1]).should.be.lower_than_or_equal_to(0.0)
    expect(abs(result["crossing"][2] - result["face"]["value"])).should.be.lower_than(1e-9)
    expect(["lo", "hi"]).to.contain(result["face"]["side"])
    expect(result["margin"]).to.equal(1 - 10 * 1.05 * (1.01 - 0.99) / 0.25)


def test_quantifiers_checked_first(lab):
    config = dict(RESIZE_CONFIG, j=1)
    expect(lab.cycle_witness).when.called_with(tangency_model(), PARAMS, K, raised_saddle(lab), config).should.throw(
        QuantifierViolation
    )


def test_needs_raised_index(lab):
    saddle = SingleRoundSaddle(np.array([0.0, 1.0, 1.0 / 32]), K, 1, 0.0, np.array([2.0, 0.5, 0.0]), PARAMS)
    expect(lab.cycle_witness).when.called_with(tangency_model(), PARAMS, K, saddle, RESIZE_CONFIG).should.throw(
        ParameterArgumentError
    )


def test_every_raised_saddle_in_the_windows_has_a_witness(lab):
    model = tangency_model()
    grid = {"t": {"lo": 0.05, "hi": 0.35, "steps": 61}}
    rows = lab.index_variation_sweep(model, [5, 7], grid, refine=False).rows
    cells = sorted({(row[0], row[1]) for row in rows if row[4] == 2})
    expect(len(cells)).should.be.greater_than(10)
    for k, t in cells:
        params = UnfoldingParams(t=t)
        for saddle in lab.find_single_round_saddles(model, params, k):
            if saddle.u_index != 2:
                continue
            result = lab.cycle_witness(model, params, k, saddle, RESIZE_CONFIG)
            expect(result["m0"]).should.be.lower_than_or_equal_to(50)
            expect(abs(result["sigma"])).should.be.lower_than(1e-10)
            expect(result["bracket"][0] * result["bracket"][1]).should.be.lower_than_or_equal_to(0.0)
