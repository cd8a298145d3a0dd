import numpy as np
import pytest
from sure import expect

from blenderlab.local_model.presets import rotational_model
from blenderlab.local_model.presets import tangency_model
from blenderlab.unfolding import UnfoldingParams


def window_scale(k):
    return (2.0 ** -k + 0.75 ** k) / 2


def test_saddle_of_raised_index_in_window(lab):
    k, t = 5, 0.25
    search = lab.find_single_round_saddles(tangency_model(), UnfoldingParams(t=t), k)
    expect(search.u_indices()).to.equal([2])
    saddle = search[0]
    expect(saddle.residual).should.be.lower_than(1e-10)

    Y = window_scale(k)
    d = Y - np.sqrt(Y * Y + 2 * Y - t)
    assert saddle.location[1] == pytest.approx(1 + d, abs=1e-9)
    assert saddle.location[2] == pytest.approx((1 + d) / 2 ** k, abs=1e-9)
    expect(np.abs(saddle.eigenvalues[:2]).min()).should.be.greater_than(1.0)


def test_no_saddles_far_from_window(lab):
    search = lab.find_single_round_saddles(tangency_model(), UnfoldingParams(t=5.0), 5)
    expect(len(search)).to.equal(0)


def test_no_saddles_below_first_strip(lab):
    search = lab.find_single_round_saddles(tangency_model(), UnfoldingParams(t=0.25), 2)
    expect(len(search)).to.equal(0)
    expect(search.dropped).to.equal(0)


def test_saddle_is_fixed(lab):
    model = tangency_model()
    params = UnfoldingParams(t=0.2)
    for saddle in lab.find_single_round_saddles(model, params, 6):
        image = lab.unfolded_return_map(model, params, 6, saddle.location)
        expect(np.linalg.norm(image - saddle.location)).should.be.lower_than(1e-10)


def test_saddle_report_fields(lab):
    search = lab.find_single_round_saddles(tangency_model(), UnfoldingParams(t=0.25), 5)
    report = search.to_dict()
    expect(report).to.have.key("dropped")
    expect(report["saddles"][0].to_dict()["u_index"]).to.equal(2)


def test_saddle_moves_continuously_with_t(lab):
    model = tangency_model()
    delta = 1e-6
    here = lab.find_single_round_saddles(model, UnfoldingParams(t=0.25), 5)[0]
    there = lab.find_single_round_saddles(model, UnfoldingParams(t=0.25 + delta), 5)[0]
    expect(there.u_index).to.equal(here.u_index)
    expect(np.linalg.norm(there.location - here.location)).should.be.lower_than(10 * delta)


def test_u_index_matches_singular_value_growth(lab):
    model = tangency_model()
    checked = 0
    for k in (5, 6, 7):
        for t in np.linspace(0.13, 0.29, 33):
            params = UnfoldingParams(t=float(t))
            family = lab.unfold(model, params)
            for saddle in lab.find_single_round_saddles(model, params, k):
                # complex pair: non-defective with equal moduli
                if np.abs(saddle.eigenvalues.imag).max() < 1e-6:
                    continue
                jac = lab.return_jacobian(family, k, saddle.location)
                singular = np.linalg.svd(np.linalg.matrix_power(jac, 12), compute_uv=False)
                expect(int(np.sum(singular > 1.0))).to.equal(saddle.u_index)
                checked += 1
    expect(checked).should.be.greater_than_or_equal_to(10)


def test_leading_jacobian_independent_of_parameters(lab):
    model = rotational_model()
    base = model.leading_jacobian
    for t, alpha in ((0.1, 0.0), (-0.05, 0.3), (0.2, np.pi / 3), (0.0, 2.0)):
        family = lab.unfold(model, UnfoldingParams(t=t, alpha=alpha))
        assert family.leading_jacobian == pytest.approx(base, rel=1e-14)


def test_indices_two_and_three_coexist(lab):
    # k=6 turns the central plane by 3pi/2, so DR has characteristic polynomial mu^2 (mu - s) = K
    k = 6
    a, b = 0.5 * 0.8 ** k, 0.8 ** k
    K = 64 * a * b
    t = (1 - K) / 64
    d = t
    analytic = np.array([[1.0, -a, 1.0 / 64], [1 + d, -a * (1 + d), (1 + d) / 64]])
    seeds = analytic + 1e-6

    search = lab.find_single_round_saddles(rotational_model(), UnfoldingParams(t=t), k, seeds=seeds)
    expect(search.u_indices()).to.equal([2, 3])
    expect(len(search)).to.equal(2)
    by_index = {saddle.u_index: saddle for saddle in search}
    for u_index, expected in ((3, analytic[0]), (2, analytic[1])):
        saddle = by_index[u_index]
        expect(saddle.residual).should.be.lower_than(1e-10)
        assert saddle.location.tolist() == pytest.approx(expected.tolist(), abs=1e-9)
    assert np.abs(by_index[3].eigenvalues).tolist() == pytest.approx([K ** (1 / 3)] * 3, rel=1e-6)
