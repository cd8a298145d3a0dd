from sure import expect

from blenderlab.client import BlenderLab
from blenderlab.error import ParameterArgumentError
from blenderlab.error import ParameterValueError


def test_defaults():
    lab = BlenderLab()
    expect(lab.threads).to.equal(1)
    expect(lab.seed).to.equal(0)
    expect(lab.tol("bisection")).to.equal(1e-10)


def test_overrides_reach_the_tolerance_table():
    lab = BlenderLab(tolerance_overrides={"tangency_samples": 1024})
    expect(lab.tol("tangency_samples")).to.equal(1024)
    expect(BlenderLab).when.called_with(tolerance_overrides={"nope": 1}).should.throw(ParameterValueError)


def test_rng_streams_are_reproducible():
    a = BlenderLab(seed=11).rng(3).normal(size=4)
    b = BlenderLab(seed=11).rng(3).normal(size=4)
    c = BlenderLab(seed=11).rng(4).normal(size=4)
    expect(a.tolist()).to.equal(b.tolist())
    expect(a.tolist()).should_not.equal(c.tolist())


def test_threads_must_be_positive():
    expect(BlenderLab).when.called_with(threads=0).should.throw(ParameterArgumentError)


def test_map_cells_same_with_threads(threaded_lab):
    expect(threaded_lab.map_cells(lambda x: 2 * x, range(10))).to.equal(list(range(0, 20, 2)))
