import json

import numpy as np
import pandas as pd
import pytest
from sure import expect

from blenderlab import cli
from blenderlab.error import ParameterValueError
from tests.blender.models import affine_blender


@pytest.fixture
def run_command(tmp_path):
    def run(command, payload, out_name="out.json", *extra):
        source = tmp_path / "in.json"
        source.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        target = tmp_path / out_name
        code = cli.main(["--command", command, "--in", str(source), "--out", str(target)] + list(extra))
        return code, target

    return run


def read_error(capsys):
    lines = capsys.readouterr().err.strip().splitlines()
    expect(len(lines)).to.equal(1)
    return json.loads(lines[0])


def test_classify(run_command):
    code, target = run_command("classify", {"multipliers": [0.5, 2.0], "u_index": 1})
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["classification"]["leading_jacobian"]).to.equal(1.0)
    expect(report["classification"]["simple"]).to.be.true


def test_unit_multiplier_is_a_domain_error(run_command, capsys):
    code, target = run_command("classify", {"multipliers": [1.0, 2.0], "u_index": 1})
    expect(code).to.equal(cli.EXIT_DOMAIN)
    expect(read_error(capsys)["error"]).to.equal("UnitModulus")
    expect(target.exists()).to.be.false


def test_missing_field_is_a_schema_error(run_command, capsys):
    code, _ = run_command("classify", {"u_index": 1})
    expect(code).to.equal(cli.EXIT_SCHEMA)
    expect(read_error(capsys)["error"]).to.equal("ParameterRequiredError")


def test_malformed_json(run_command, capsys):
    code, _ = run_command("classify", "{not json")
    expect(code).to.equal(cli.EXIT_SCHEMA)
    read_error(capsys)


def test_input_must_be_an_object(run_command, capsys):
    code, _ = run_command("classify", [0.5, 2.0])
    expect(code).to.equal(cli.EXIT_SCHEMA)
    expect(read_error(capsys)["error"]).to.equal("ParameterArgumentError")


def test_bad_tolerance_override(run_command, capsys):
    payload = {"multipliers": [0.5, 2.0], "u_index": 1}
    code, _ = run_command("classify", payload, "out.json", "--tolerance-overrides", '{"no_such_tolerance": 1}')
    expect(code).to.equal(cli.EXIT_SCHEMA)
    read_error(capsys)


def test_bifurcate(run_command):
    code, target = run_command("bifurcate", {"matrix": [[2.0, 0.0], [0.0, 0.5]], "phi": 0.7})
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    assert report["phi0"] == pytest.approx(np.arccos(0.8), abs=1e-9)
    expect(len(report["eigenvalues"])).to.equal(2)


def test_empty_volume_range_writes_the_header(run_command):
    code, target = run_command("volume", {"model": {"preset": "volume"}, "k": [12, 11]}, "volume.csv")
    expect(code).to.equal(cli.EXIT_OK)
    expect(target.read_text()).to.equal("k,ratio,bound,ok\n")


def test_volume_rows(run_command):
    code, target = run_command("volume", {"model": {"preset": "volume"}, "k": 11}, "volume.csv")
    expect(code).to.equal(cli.EXIT_OK)
    frame = pd.read_csv(target)
    expect(frame.columns.tolist()).to.equal(cli.VOLUME_COLUMNS)
    expect(frame["k"].tolist()).to.equal([11])
    assert frame["ratio"][0] == pytest.approx(1.8**11, rel=1e-6)
    expect(bool(frame["ok"][0])).to.be.true


def test_unknown_preset(run_command, capsys):
    code, _ = run_command("strips", {"model": {"preset": "heteroclinic"}})
    expect(code).to.equal(cli.EXIT_SCHEMA)
    expect(read_error(capsys)["error"]).to.equal("ParameterValueError")


def test_strips_start_at_the_first_index(run_command):
    code, target = run_command("strips", {"model": {"preset": "tangency"}, "k": [4, 5]})
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["k0"]).to.equal(4)
    expect(len(report["strips"])).to.equal(2)


def test_blender_check_with_a_gap(run_command):
    code, target = run_command(
        "blender-check", dict(affine_blender((0.4, 0.4), (0.0, 0.6)), disks=[{"vertical_at": [0.5]}])
    )
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["ok"]).to.be.false
    assert report["margin"] == pytest.approx(-0.2)
    expect(report["robustness"]["epsilon0"]).to.equal(0.0)
    expect(report["witnesses"][0]["error"]["error"]).to.equal("CoverageGap")


def test_blender_check_witnesses(run_command):
    payload = dict(affine_blender((0.7, 0.7), (0.0, 0.3)), disks=[{"vertical_at": [0.5]}], depth=20, trials=4)
    code, target = run_command("blender-check", payload, "out.json", "--threads", "2", "--seed", "3")
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["ok"]).to.be.true
    expect(report["robustness"]["trials_passed"]).to.equal(4)
    expect(report["robustness"]["witness_trials_passed"]).to.equal(4)
    expect(report["robustness"]["witness_depth"]).to.equal(20)
    expect(report["witnesses"][0]["itinerary"]).to.have.length_of(20)


def test_product_rate_violation(run_command, capsys):
    code, _ = run_command("blender-product", {"repeller": {"affine": {}}, "gamma": 0.7, "ss_dim": 1})
    expect(code).to.equal(cli.EXIT_DOMAIN)
    expect(read_error(capsys)["error"]).to.equal("RateViolation")


def test_tangency(run_command):
    code, target = run_command("tangency", {"curve": {"ellipse": {}}, "foliation": {"linear": [0.0, 1.0]}})
    expect(code).to.equal(cli.EXIT_OK)
    expect(json.loads(target.read_text())["count"]).to.equal(2)


def test_entropy_gap(run_command):
    payload = {"matrix": [[1, 1], [1, 1]], "rates": [[0.9, 0.8, 4.0], [0.9, 0.8, 4.0]], "m": 2, "n": 1}
    code, target = run_command("entropy-gap", payload)
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["cs_ok"]).to.be.true
    expect(report["cu_ok"]).to.be.false
    assert report["measure"]["weights"] == pytest.approx([0.5, 0.5])


def test_cones(run_command):
    payload = {
        "linear_map": [[0.9, 0.0], [0.0, 1.0]],
        "cone": {"E": [0], "F": [1], "half_angle": 0.5},
        "horizon": 10,
    }
    code, target = run_command("cones", payload)
    expect(code).to.equal(cli.EXIT_OK)
    report = json.loads(target.read_text())
    expect(report["domination_time"]).to.equal(7)
    expect(report["invariance"]["ok"]).to.be.true
    expect(report["uniform_rate"]).to.have.key("C")


def test_unknown_command_is_rejected_by_the_parser(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["--command", "plot", "--in", str(tmp_path / "a"), "--out", str(tmp_path / "b")])


def test_logging_levels(monkeypatch):
    monkeypatch.setenv("BLENDERLAB_LOG", "loud")
    expect(cli.setup_logging).when.called_with().should.throw(ParameterValueError)
    cli.setup_logging("off")
    cli.setup_logging("debug")


def test_tolerance_overrides_must_be_an_object(run_command, capsys):
    payload = {"multipliers": [0.5, 2.0], "u_index": 1}
    code, _ = run_command("classify", payload, "out.json", "--tolerance-overrides", "[1]")
    expect(code).to.equal(cli.EXIT_SCHEMA)
    expect(read_error(capsys)["error"]).to.equal("ParameterTypeError")
