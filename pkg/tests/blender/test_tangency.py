import numpy as np
import pytest
from sure import expect

from blenderlab.blender import ClosedCurve
from blenderlab.blender import Foliation
from blenderlab.error import DegenerateFoliation
from blenderlab.error import ParameterArgumentError

VERTICAL_LEAVES = Foliation.linear([0.0, 1.0])


def dense_tangency_count(curve, foliation, samples=200000):
    t = np.linspace(0.0, curve.period, samples, endpoint=False)
    values = foliation(curve(t))
    slope = np.roll(values, -1) - values
    return int(np.count_nonzero(np.sign(slope) != np.sign(np.roll(slope, -1))))


def test_circle_touches_horizontal_leaves_twice(lab):
    roots = lab.tangency_witness(ClosedCurve.ellipse(), VERTICAL_LEAVES)
    expect(len(roots)).to.equal(2)
    assert roots == pytest.approx([np.pi / 2, 3 * np.pi / 2], abs=1e-8)


def test_ellipse_axes_do_not_move_tangencies(lab):
    curve = ClosedCurve.from_json({"ellipse": {"axes": [2.0, 0.5], "center": [1.0, -1.0]}})
    roots = lab.tangency_witness(curve, Foliation.from_json({"linear": [0.0, 1.0]}))
    assert roots == pytest.approx([np.pi / 2, 3 * np.pi / 2], abs=1e-8)


def test_tilted_leaves(lab):
    roots = lab.tangency_witness(ClosedCurve.ellipse(), Foliation.linear([1.0, 1.0]))
    assert roots == pytest.approx([np.pi / 4, 5 * np.pi / 4], abs=1e-8)


def test_radial_leaves_around_an_outer_point(lab):
    curve = ClosedCurve.ellipse()
    roots = lab.tangency_witness(curve, Foliation.radial([3.0, 0.0]))
    assert roots == pytest.approx([0.0, np.pi], abs=1e-8)


@pytest.mark.parametrize("stream", range(5))
def test_random_curves_match_dense_sampling(lab, stream):
    curve = ClosedCurve.random(lab.rng(stream))
    roots = lab.tangency_witness(curve, VERTICAL_LEAVES)
    expect(len(roots)).to.equal(dense_tangency_count(curve, VERTICAL_LEAVES))
    expect(len(roots) % 2).to.equal(0)
    for root in roots:
        slope = (VERTICAL_LEAVES(curve(root + 1e-6)) - VERTICAL_LEAVES(curve(root - 1e-6))) / 2e-6
        expect(abs(float(slope))).should.be.lower_than(1e-5)


def test_trigonometric_curve(lab):
    curve = ClosedCurve.from_json({"trig": {"y": {"cos": [0.0, 1.0]}, "z": {"sin": [0.0, 1.0]}}})
    roots = lab.tangency_witness(curve, VERTICAL_LEAVES, samples=4096)
    expect(len(roots)).to.equal(4)


def test_critical_point_on_the_curve(lab):
    expect(lab.tangency_witness).when.called_with(ClosedCurve.ellipse(), Foliation.radial([1.0, 0.0])).should.throw(
        DegenerateFoliation
    )


def test_unknown_curve():
    expect(ClosedCurve.from_json).when.called_with({"spline": []}).should.throw(ParameterArgumentError)
    expect(Foliation.from_json).when.called_with({"spiral": 1}).should.throw(ParameterArgumentError)
