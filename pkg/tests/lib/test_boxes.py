import numpy as np
from sure import expect

from blenderlab.error import ParameterArgumentError
from blenderlab.lib.boxes import Box
from blenderlab.lib.boxes import Interval
from blenderlab.lib.boxes import IntervalSet


def test_interval_set_merges_overlaps():
    pieces = IntervalSet([Interval(0.5, 1.0), Interval(0.0, 0.6), Interval(2.0, 3.0), Interval(1.0, 0.0)])
    expect([(iv.a, iv.b) for iv in pieces]).to.equal([(0.0, 1.0), (2.0, 3.0)])
    expect(pieces.covers(Interval(0.2, 0.9))).to.be.true
    expect(pieces.covers(Interval(0.9, 2.1))).to.be.false


def test_largest_gap():
    pieces = IntervalSet([Interval(0.0, 0.3), Interval(0.5, 0.6), Interval(0.9, 1.0)])
    expect(pieces.largest_gap(Interval(0.0, 1.0))).to.equal(0.3)
    expect(IntervalSet([Interval(0.0, 1.0)]).largest_gap(Interval(0.0, 1.0))).to.equal(0.0)


def test_box_geometry():
    box = Box([0.0, -1.0], [2.0, 1.0])
    expect(box.dim).to.equal(2)
    expect(box.center.tolist()).to.equal([1.0, 0.0])
    expect(box.diameter()).to.equal(np.sqrt(8.0))
    expect(box.diameter([1])).to.equal(2.0)
    expect(box.contains([2.0, 1.0])).to.be.true
    expect(box.contains([2.1, 0.0])).to.be.false
    expect(len(box.corners())).to.equal(4)


def test_box_from_json_requires_corners():
    expect(Box.from_json({"lo": [0], "hi": [1]}).widths.tolist()).to.equal([1.0])
    expect(Box.from_json).when.called_with({"lo": [0]}, "U").should.throw(ParameterArgumentError)
    expect(Box).when.called_with([0.0], [1.0, 2.0]).should.throw(ParameterArgumentError)


def test_linear_image_and_preimage():
    box = Box([1.0, 1.0], [2.0, 3.0])
    image = box.linear_image(np.diag([2.0, -1.0]))
    expect(image.lo.tolist()).to.equal([2.0, -3.0])
    expect(image.hi.tolist()).to.equal([4.0, -1.0])
    back = image.linear_preimage(np.diag([2.0, -1.0]))
    expect(back.lo.tolist()).to.equal([1.0, 1.0])
    expect(back.hi.tolist()).to.equal([2.0, 3.0])


def test_translate_intersect_disjoint():
    box = Box([0.0, 0.0], [1.0, 1.0])
    moved = box.translate([2.0, 0.0])
    expect(moved.lo.tolist()).to.equal([2.0, 0.0])
    expect(box.disjoint(moved)).to.be.true
    expect(box.intersect(Box([0.5, 0.5], [3.0, 3.0])).hi.tolist()).to.equal([1.0, 1.0])


def test_grid_points():
    points = Box([0.0, 0.0], [1.0, 2.0]).grid(3)
    expect(points.shape).to.equal((9, 2))
    expect(points[-1].tolist()).to.equal([1.0, 2.0])
