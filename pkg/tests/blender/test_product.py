import numpy as np
import pytest
from sure import expect

from blenderlab.blender import AffineRepeller
from blenderlab.blender import SsDisk
from blenderlab.blender.product import repeller_from_json
from blenderlab.error import LaminationGap
from blenderlab.error import ParameterArgumentError
from blenderlab.error import RateViolation


@pytest.fixture
def product(lab):
    return lab.product_blender(AffineRepeller(), 0.3, 2)


def test_product_spec_layout(product):
    expect(product.splitting).to.equal((2, 1, 1))
    expect(product.U.lo.tolist()).to.equal([-1.0, -1.0, -0.25, 0.0])
    expect(product.U.hi.tolist()).to.equal([1.0, 1.0, 1.25, 1.0])
    expect(product.block(product.branches[1], "ss").tolist()).to.equal([[0.3, 0.0], [0.0, 0.3]])
    expect(product.branches[1].offset.tolist()).to.equal([0.0, 0.0, 0.4, -1.5])


def test_product_covers(lab, product):
    result = lab.covering_criterion(product)
    expect(result["ok"]).to.be.true
    assert result["margin"] == pytest.approx(0.2)


def test_leaves_fill_the_hull():
    repeller = AffineRepeller()
    expect(repeller.min_conorm()).to.equal(0.6)
    expect(repeller.lamination_gap(1e-3)).to.equal(0.0)
    expect(repeller.leaf_distance(0.73, 1e-3)).to.equal(0.0)
    assert repeller.leaf_distance(1.1, 1e-3) == pytest.approx(0.1)


def test_superposition_residual_vanishes(lab, product):
    saddle = lab.verify_superposition(product, lab.distinctive_saddle_disk(product), 20)
    expect(saddle["residual"]).to.equal(0.0)
    inner = lab.verify_superposition(product, SsDisk.vertical(product, [0.5]), 20)
    expect(inner["residual"]).to.equal(0.0)
    expect(len(inner["itinerary"])).to.equal(20)


def test_gamma_above_conorm(lab):
    expect(lab.product_blender).when.called_with(AffineRepeller(), 0.6, 1).should.throw(RateViolation)


def test_cantor_leaves_leave_gaps(lab):
    repeller = AffineRepeller(contraction=0.3, offsets=(0.0, 0.7))
    assert repeller.lamination_gap(1e-3) == pytest.approx(0.4)
    expect(lab.product_blender).when.called_with(repeller, 0.2, 1).should.throw(LaminationGap)


def test_gamma_must_contract(lab):
    expect(lab.product_blender).when.called_with(AffineRepeller(), 1.5, 1).should.throw(ParameterArgumentError)


def test_repeller_from_json():
    repeller = repeller_from_json({"affine": {"contraction": 0.55, "offsets": [0.0, 0.45]}})
    expect(repeller.contraction).to.equal(0.55)
    expect(repeller.to_dict()["affine"]["slabs"]).to.equal([0.25, 1.5])


def test_unknown_repeller():
    expect(repeller_from_json).when.called_with({"solenoid": {}}).should.throw(ParameterArgumentError)
    expect(repeller_from_json).when.called_with({"affine": {"rate": 0.5}}).should.throw(ParameterArgumentError)


def test_branch_slabs_are_disjoint():
    domains = [domain for _, _, domain in AffineRepeller().branches()]
    expect(domains[0].disjoint(domains[1])).to.be.true
    assert np.allclose(domains[0].lo, [-0.25, 0.25 / 3])
