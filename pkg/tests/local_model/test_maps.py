import json

import numpy as np
import pytest
from sure import expect

from blenderlab.error import LeftNeighborhood
from blenderlab.lib.utils import dump_json
from blenderlab.local_model.model import LocalTangencyModel
from blenderlab.local_model.model import TransitionMap
from blenderlab.local_model.presets import PLANE_TRANSITION
from blenderlab.local_model.presets import rotational_model
from blenderlab.local_model.presets import tangency_model


def with_transition(**changes):
    base = tangency_model()
    blocks = dict(PLANE_TRANSITION)
    blocks.update(changes)
    return LocalTangencyModel(
        base.dims,
        {"A": base.A, "B": base.B, "C": base.C},
        base.W,
        base.y_minus,
        base.x_plus,
        base.pi_minus,
        base.pi_plus,
        TransitionMap(base.dims, blocks),
    )


def test_apply_T0_diagonal_powers(lab):
    model = tangency_model()
    image = lab.apply_T0(model, [1.0, 1.0, 1e-3], 3)
    assert image.tolist() == pytest.approx([0.008, 0.421875, 8e-3], rel=1e-14)


def test_apply_T0_zero_iterates_is_identity(lab):
    point = np.array([0.1, -0.2, 0.3])
    expect(lab.apply_T0(tangency_model(), point, 0).tolist()).to.equal(point.tolist())


def test_apply_T0_semigroup(lab):
    model = tangency_model()
    point = np.array([0.5, 0.5, 1e-3])
    direct = lab.apply_T0(model, point, 7)
    stepped = lab.apply_T0(model, lab.apply_T0(model, point, 3), 4)
    expect(np.max(np.abs(direct - stepped))).should.be.lower_than(1e-12)


def test_apply_T0_rotation_block(lab):
    image = lab.apply_T0(rotational_model(), [1.0, 0.0, 1e-3], 8)
    assert image[:2].tolist() == pytest.approx([0.8 ** 8, 0.0], abs=1e-12)


def test_apply_T0_leaving_W(lab):
    with pytest.raises(LeftNeighborhood) as info:
        lab.apply_T0(tangency_model(), [0.0, 0.0, 1.0], 3)
    expect(info.value.iterate).to.equal(2)


def test_apply_T1_maps_tangency_to_tangency(lab):
    model = tangency_model()
    expect(lab.apply_T1(model, model.Y_minus).tolist()).to.equal(model.Y_plus.tolist())


def test_apply_T1_quadratic_in_y(lab):
    image = lab.apply_T1(tangency_model(), [0.0, 0.0, 1.1])
    assert image.tolist() == pytest.approx([0.01, 1.1, 0.01], abs=1e-14)


def test_apply_T1_linear_in_x(lab):
    image = lab.apply_T1(tangency_model(), [0.0, 0.2, 1.0])
    assert image.tolist() == pytest.approx([0.02, 1.0, -0.2], abs=1e-14)


def test_apply_T1_outside_exit_box(lab):
    expect(lab.apply_T1).when.called_with(tangency_model(), [0.0, 0.0, 0.5]).should.throw(LeftNeighborhood)


def test_return_map_hits_tangency(lab):
    model = tangency_model()
    image = lab.return_map(model, 5, [0.0, 0.0, 1.0 / 32])
    assert image.tolist() == pytest.approx(model.Y_plus.tolist(), abs=1e-14)


def test_return_jacobian_matches_differences(lab):
    model = tangency_model()
    point = np.array([0.05, 1.0, 1.05 / 64])
    jac = lab.return_jacobian(model, 6, point)
    h = 1e-7
    columns = [
        (lab.return_map(model, 6, point + e) - lab.return_map(model, 6, point - e)) / (2 * h)
        for e in np.eye(3) * h
    ]
    expect(np.max(np.abs(jac - np.stack(columns, axis=-1)))).should.be.lower_than(1e-4)


def test_transition_enclosure_contains_images(lab):
    model = tangency_model()
    enclosure = lab.transition_enclosure(model)
    images = lab.apply_T1(model, model.pi_minus.grid(7))
    expect(bool(np.all(enclosure.contains_points(images, tol=1e-12)))).to.be.true
    assert enclosure.lo.tolist() == pytest.approx([-0.08, 0.8, -0.3])
    assert enclosure.hi.tolist() == pytest.approx([0.08, 1.2, 0.34])


def test_generic_conditions_hold_for_preset(lab):
    report = lab.check_generic_conditions(tangency_model())
    expect(report["all_ok"]).to.be.true
    expect(report["C1"]["value"]).to.equal(1.0)
    assert report["C4"]["value"] == pytest.approx(1.0)
    expect(report["C5"]).to.equal({"ok": True, "value": 1.0})


def test_generic_conditions_degenerate_tangency(lab):
    report = lab.check_generic_conditions(with_transition(C3=[[0.0]]))
    expect(report["C3"]["ok"]).to.be.false
    expect(report["all_ok"]).to.be.false


def test_generic_conditions_singular_central_block(lab):
    report = lab.check_generic_conditions(with_transition(C2=[[0.0]]))
    expect(report["C4"]["ok"]).to.be.false
    expect(report["C1"]["ok"]).to.be.true


def test_model_json_round_trip():
    model = tangency_model()
    again = LocalTangencyModel.from_json(json.loads(dump_json(model)))
    expect(again.dims.to_dict()).to.equal(model.dims.to_dict())
    expect(again.K).to.equal(model.K)
    expect(dump_json(again)).to.equal(dump_json(model))
