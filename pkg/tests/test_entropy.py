import numpy as np
import pytest
from sure import expect

from blenderlab.entropy import HorseshoeSpec
from blenderlab.error import ParameterArgumentError
from blenderlab.error import Reducible

FULL_2 = [[1, 1], [1, 1]]
GOLDEN = [[1, 1], [1, 0]]
PHI = (1 + np.sqrt(5)) / 2


def full_shift(rates, m=2, n=1):
    return HorseshoeSpec(FULL_2, [rates, rates], m, n)


@pytest.mark.parametrize(
    "matrix, expected",
    [(FULL_2, np.log(2)), (GOLDEN, np.log(PHI)), (np.ones((3, 3)), np.log(3))],
)
def test_topological_entropy(lab, matrix, expected):
    spec = HorseshoeSpec(matrix, np.tile([0.5, 2.0], (len(matrix), 1)), 1, 1)
    assert lab.topological_entropy(spec) == pytest.approx(expected, abs=1e-10)


def test_golden_mean_parry_measure(lab):
    spec = HorseshoeSpec(GOLDEN, [[0.5, 2.0], [0.5, 2.0]], 1, 1)
    measure = lab.maximal_entropy_measure(spec)
    assert measure.weights == pytest.approx([PHI**2 / (1 + PHI**2), 1 / (1 + PHI**2)], abs=1e-10)
    assert measure.transition.sum(axis=1) == pytest.approx([1.0, 1.0], abs=1e-12)
    expect(measure.transition[1, 1]).to.equal(0.0)
    assert measure.entropy == pytest.approx(np.log(PHI), abs=1e-10)


def test_full_shift_measure_is_uniform(lab):
    measure = lab.maximal_entropy_measure(full_shift([0.9, 0.8, 4.0]))
    assert measure.weights == pytest.approx([0.5, 0.5])
    assert measure.transition == pytest.approx(np.full((2, 2), 0.5))


def test_spectrum_under_uniform_weights(lab):
    spec = HorseshoeSpec(FULL_2, [[0.5, 2.0], [0.25, 4.0]], 1, 1)
    report = lab.lyapunov_spectrum(spec, [0.5, 0.5])
    assert report.exponents == pytest.approx([-1.03972, 1.03972], abs=1e-5)
    assert report.chi_cs == pytest.approx(-1.03972, abs=1e-5)
    assert report.J_s * report.J_u == pytest.approx(1.0)


def test_spectrum_rejects_bad_weights(lab):
    spec = full_shift([0.9, 0.8, 4.0])
    expect(lab.lyapunov_spectrum).when.called_with(spec, [0.7, 0.7]).should.throw(ParameterArgumentError)
    expect(lab.lyapunov_spectrum).when.called_with(spec, [1.0]).should.throw(ParameterArgumentError)


def test_cs_gap_holds(lab):
    gap = lab.entropy_gap(full_shift([0.9, 0.8, 4.0]))
    assert gap["thresholds"]["cs"] == pytest.approx(0.30216, abs=1e-5)
    assert gap["h_top"] == pytest.approx(np.log(2))
    expect(gap["cs_ok"]).to.be.true
    expect(gap["central_dimensions"]).to.equal({"cs": 1, "cu": 0})


def test_cs_gap_fails(lab):
    gap = lab.entropy_gap(full_shift([0.25, 1 / 3, 4.0]))
    assert gap["thresholds"]["cs"] == pytest.approx(2.21026, abs=1e-5)
    expect(gap["cs_ok"]).to.be.false
    expect(gap["double_ok"]).to.be.false


def test_cu_gap_holds_for_weak_expansion(lab):
    gap = lab.entropy_gap(full_shift([0.9, 0.8, 1.5]))
    assert gap["thresholds"]["cu"] == pytest.approx(0.30410, abs=1e-5)
    expect(gap["cu_ok"]).to.be.true
    expect(gap["double_ok"]).to.be.true


def test_cu_gap_fails_for_strong_expansion(lab):
    gap = lab.entropy_gap(full_shift([0.9, 0.8, 4.0]))
    assert gap["thresholds"]["cu"] == pytest.approx(1.03972, abs=1e-5)
    expect(gap["cu_ok"]).to.be.false
    assert gap["pesin_defect"] == pytest.approx(np.log(2))


@pytest.mark.parametrize("rates", [[0.9, 0.8, 4.0], [0.25, 1 / 3, 4.0], [0.9, 0.8, 1.5]])
def test_inverse_swaps_sides(lab, rates):
    spec = full_shift(rates)
    forward, backward = lab.entropy_gap(spec), lab.entropy_gap(spec.inverse())
    expect(backward["cs_ok"]).to.equal(forward["cu_ok"])
    expect(backward["cu_ok"]).to.equal(forward["cs_ok"])
    assert backward["thresholds"]["cs"] == pytest.approx(forward["thresholds"]["cu"])


def test_reducible_matrix(lab):
    spec = HorseshoeSpec([[1, 1], [0, 1]], [[0.5, 2.0], [0.5, 2.0]], 1, 1)
    expect(lab.topological_entropy).when.called_with(spec).should.throw(Reducible)


def test_periodic_matrix_has_no_parry_measure(lab):
    spec = HorseshoeSpec([[0, 1], [1, 0]], [[0.5, 2.0], [0.5, 2.0]], 1, 1)
    assert lab.topological_entropy(spec) == pytest.approx(0.0, abs=1e-10)
    expect(lab.maximal_entropy_measure).when.called_with(spec).should.throw(Reducible)


@pytest.mark.parametrize(
    "matrix, rates, m",
    [
        ([[1, 2], [1, 1]], [[0.5, 2.0], [0.5, 2.0]], 1),
        (FULL_2, [[0.5, 1.0], [0.5, 2.0]], 1),
        (FULL_2, [[0.5, 2.0], [0.5, 0.7]], 1),
        (FULL_2, [[0.5, 2.0], [2.0, 0.5]], 1),
        (FULL_2, [[0.5, 2.0], [0.5, 2.0]], 2),
    ],
)
def test_invalid_horseshoe(matrix, rates, m):
    expect(HorseshoeSpec).when.called_with(matrix, rates, m, 1).should.throw(
        ParameterArgumentError
    )


def test_smoothness_above_one():
    expect(HorseshoeSpec).when.called_with(FULL_2, [[0.5, 2.0], [0.5, 2.0]], 1, 1, r=1.0).should.throw(
        ParameterArgumentError
    )


def test_from_json_defaults_smoothness():
    spec = HorseshoeSpec.from_json({"matrix": FULL_2, "rates": [[0.9, 0.8, 4.0]] * 2, "m": 2, "n": 1})
    expect(spec.r).to.equal(2.0)
    expect(spec.states).to.equal(2)
