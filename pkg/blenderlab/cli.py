import argparse
import json
import logging
import os
import sys
from pathlib import Path

from blenderlab.blender.spec import BlenderSpec
from blenderlab.blender.spec import SsDisk
from blenderlab.blender.product import repeller_from_json
from blenderlab.blender.tangency import ClosedCurve
from blenderlab.blender.tangency import Foliation
from blenderlab.client import BlenderLab
from blenderlab.cones import ConeField
from blenderlab.entropy import HorseshoeSpec
from blenderlab.error import DomainError
from blenderlab.error import Error
from blenderlab.error import NotFound
from blenderlab.error import NotSimple
from blenderlab.error import JacobianNotExpanding
from blenderlab.error import ParameterArgumentError
from blenderlab.error import ParameterValueError
from blenderlab.lib.utils import check_enum_parameter
from blenderlab.lib.utils import check_required_parameter
from blenderlab.lib.utils import check_type_parameter
from blenderlab.lib.utils import config_logging
from blenderlab.lib.utils import write_csv
from blenderlab.lib.utils import write_json
from blenderlab.local_model.experiments import central_rectangle_disk
from blenderlab.local_model.presets import RESIZE_CONFIG
from blenderlab.local_model.presets import model_from_json
from blenderlab.unfolding.params import UnfoldingParams
from blenderlab.unfolding.sweep import k_values

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_DOMAIN = 3

LOG_LEVELS = {"off": None, "info": logging.INFO, "debug": logging.DEBUG}
VOLUME_COLUMNS = ["k", "ratio", "bound", "ok"]
DEFAULT_DIAMETER_DISKS = 20
DEFAULT_DEPTH = 40


class RunConfig(object):
    """One batch run.

    Keyword Args:
        seed (int, optional): seed of the lab's random draws. By default it's 0.
        threads (int, optional): worker-pool size. By default it's 1.
        tolerance_overrides (dict, optional): entries replacing the default tolerances.
    """

    def __init__(self, command, input_path, output_path, seed=0, threads=1, tolerance_overrides=None):
        check_enum_parameter(command, COMMANDS)
        check_type_parameter(tolerance_overrides, "tolerance_overrides", dict)
        self.command = command
        self.input_path = input_path
        self.output_path = output_path
        self.seed = seed
        self.threads = threads
        self.tolerance_overrides = tolerance_overrides

    @classmethod
    def from_args(cls, args):
        overrides = json.loads(args.tolerance_overrides) if args.tolerance_overrides else None
        return cls(args.command, args.input_path, args.output_path, args.seed, args.threads, overrides)

    def lab(self):
        return BlenderLab(threads=self.threads, tolerance_overrides=self.tolerance_overrides, seed=self.seed)


def _k_range(data, lab, model):
    """[k_min, k_max] from the input; a bare int is a single k, missing means ten steps from k0."""
    k = data.get("k")
    if k is None:
        k0 = lab.first_strip_index(model)
        return [k0, k0 + 10]
    if isinstance(k, int):
        return [k, k]
    return k


def _model(data):
    check_required_parameter(data.get("model"), "model")
    return model_from_json(data["model"])


def run_classify(lab, data, config):
    check_required_parameter(data.get("multipliers"), "multipliers")
    check_required_parameter(data.get("u_index"), "u_index")
    classification = lab.classify(data["multipliers"], data["u_index"])
    report = {"classification": classification}
    try:
        report["double_blender_dimension"] = lab.double_blender_dimension(classification)
        report["index_variation"] = lab.predicted_index_variation(classification)
    except (NotSimple, JacobianNotExpanding) as error:
        logging.info("no index prediction: %s" % error)
    write_json(config.output_path, report)


def run_bifurcate(lab, data, config):
    check_required_parameter(data.get("matrix"), "matrix")
    report = {"phi0": lab.saddle_node_angle(data["matrix"])}
    if data.get("phi") is not None:
        report["eigenvalues"] = list(lab.rotation_eigenvalues(data["matrix"], data["phi"]))
    write_json(config.output_path, report)


def run_strips(lab, data, config):
    model = _model(data)
    resize = data.get("resize")
    strips = []
    for k in k_values(_k_range(data, lab, model)):
        if resize is None:
            strips.append(lab.strip(model, k))
        else:
            strips.append(lab.resized_strip(model, resize["j"], k, resize["theta_planes"], resize["rho"]))
    write_json(config.output_path, {"k0": lab.first_strip_index(model), "strips": strips})


def run_volume(lab, data, config):
    model = _model(data)
    fill = data.get("fill", 1.0)
    rows = []
    for k in k_values(_k_range(data, lab, model)):
        disk = central_rectangle_disk(lab.strip(model, k), fill)
        result = lab.volume_expansion_experiment(model, k, disk)
        rows.append([k, result["ratio"], result["bound"], result["bound_ok"]])
    write_csv(config.output_path, rows, VOLUME_COLUMNS)


def run_diameter(lab, data, config):
    model = _model(data)
    count = data.get("disks", DEFAULT_DIAMETER_DISKS)
    rows = []
    for k in k_values(_k_range(data, lab, model)):
        current = lab.strip(model, k)
        disks = [lab.random_cu_disk(current, stream=i) for i in range(count)]
        rows.extend(lab.map_cells(lambda disk, k=k: lab.diameter_experiment(model, k, disk), disks))
    violations = sum(1 for row in rows if not row["ok"])
    write_json(config.output_path, {"rows": rows, "violations": violations})


def run_unfold_sweep(lab, data, config):
    model = _model(data)
    check_required_parameter(data.get("k"), "k")
    grid = {name: data[name] for name in ("t", "alpha", "beta") if data.get(name) is not None}
    result = lab.index_variation_sweep(model, data["k"], grid, data.get("target_u_index"), data.get("refine", True))
    write_csv(config.output_path, result.rows, result.columns)
    write_json(Path(config.output_path).with_suffix(".summary.json"), result.summary)


def run_cycle_witness(lab, data, config):
    model = _model(data)
    check_required_parameter(data.get("k"), "k")
    params = UnfoldingParams.from_json(data.get("params"))
    resize = data.get("resize", RESIZE_CONFIG)
    search = lab.find_single_round_saddles(model, params, data["k"])
    witnesses = []
    for saddle in search:
        if saddle.u_index < 2:
            continue
        try:
            witness = lab.cycle_witness(model, params, data["k"], saddle, resize, data.get("max_rounds", 50))
            witnesses.append({"saddle": saddle, "witness": witness})
        except NotFound as error:
            witnesses.append({"saddle": saddle, "error": _error_payload(error)})
    write_json(config.output_path, {"params": params, "k": data["k"], "witnesses": witnesses})


def _disks(spec, data):
    return [SsDisk.from_json(item, spec) for item in data.get("disks", [])]


def _superposition(lab, spec, data):
    """Witness per requested disk; a coverage gap is a result, not a failure."""
    witnesses = []
    depth = data.get("depth", DEFAULT_DEPTH)
    disks = _disks(spec, data)
    for disk in disks:
        try:
            witnesses.append(lab.verify_superposition(spec, disk, depth))
        except DomainError as error:
            witnesses.append({"error": _error_payload(error)})
    return witnesses


def run_blender_check(lab, data, config):
    spec = BlenderSpec.from_json(data.get("blender", data))
    covering = lab.covering_criterion(spec)
    report = {
        "ok": covering["ok"],
        "margin": covering["margin"],
        "central_box": covering["central_box"],
        "robustness": lab.robustness_margin(
            spec, data.get("trials", 20), disks=_disks(spec, data), depth=data.get("depth", DEFAULT_DEPTH)
        ),
        "witnesses": _superposition(lab, spec, data),
    }
    write_json(config.output_path, report)


def run_blender_product(lab, data, config):
    for key in ("repeller", "gamma", "ss_dim"):
        check_required_parameter(data.get(key), key)
    repeller = repeller_from_json(data["repeller"])
    spec = lab.product_blender(repeller, data["gamma"], data["ss_dim"], data.get("resolution", 1e-3))
    covering = lab.covering_criterion(spec)
    report = {
        "spec": spec,
        "ok": covering["ok"],
        "margin": covering["margin"],
        "lamination_gap": repeller.lamination_gap(spec.resolution),
        "witnesses": _superposition(lab, spec, data),
    }
    write_json(config.output_path, report)


def run_tangency(lab, data, config):
    curve = ClosedCurve.from_json(data.get("curve"))
    foliation = Foliation.from_json(data.get("foliation"))
    roots = lab.tangency_witness(curve, foliation, data.get("samples"))
    write_json(config.output_path, {"parameters": roots, "count": len(roots)})


def run_entropy_gap(lab, data, config):
    spec = HorseshoeSpec.from_json(data)
    report = lab.entropy_gap(spec)
    report["measure"] = lab.maximal_entropy_measure(spec)
    write_json(config.output_path, report)


def run_cones(lab, data, config):
    check_required_parameter(data.get("linear_map"), "linear_map")
    cone = ConeField.from_json(data.get("cone"))
    matrix = data["linear_map"]
    report = {
        "invariance": lab.check_cone_invariance(matrix, cone, data.get("grid_resolution", 5)),
        "domination_time": lab.domination_time(matrix, cone),
        "half_angle_for": lab.cone_half_angle_for(matrix, cone),
    }
    if data.get("horizon") is not None:
        report["uniform_rate"] = lab.uniform_rate_check(matrix, cone.E, data["horizon"])
    write_json(config.output_path, report)


COMMANDS = {
    "classify": run_classify,
    "bifurcate": run_bifurcate,
    "strips": run_strips,
    "volume": run_volume,
    "diameter": run_diameter,
    "unfold-sweep": run_unfold_sweep,
    "cycle-witness": run_cycle_witness,
    "blender-check": run_blender_check,
    "blender-product": run_blender_product,
    "tangency": run_tangency,
    "entropy-gap": run_entropy_gap,
    "cones": run_cones,
}


def _error_payload(error):
    return {"error": type(error).__name__, "message": str(error)}


def _report_error(error):
    sys.stderr.write(json.dumps(_error_payload(error)) + "\n")


def setup_logging(value=None):
    """Maps BLENDERLAB_LOG (off, info, debug) onto the logging module; default off."""
    value = (value if value is not None else os.environ.get("BLENDERLAB_LOG", "off")).lower()
    if value not in LOG_LEVELS:
        raise ParameterValueError([value])
    if LOG_LEVELS[value] is None:
        logging.disable(logging.CRITICAL)
        return
    logging.disable(logging.NOTSET)
    config_logging(logging, LOG_LEVELS[value])


def run(config: RunConfig) -> int:
    """Runs one command; returns 0 on success, 2 on schema errors, 3 on domain errors."""
    try:
        with open(config.input_path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ParameterArgumentError("input must be a JSON object")
        COMMANDS[config.command](config.lab(), data, config)
    except DomainError as error:
        _report_error(error)
        return EXIT_DOMAIN
    except (Error, ValueError, TypeError, KeyError, OSError) as error:
        _report_error(error)
        return EXIT_SCHEMA
    logging.info("%s written to %s" % (config.command, config.output_path))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="blenderlab", description="Batch front-end of the blender laboratory.")
    parser.add_argument("--command", required=True, choices=sorted(COMMANDS))
    parser.add_argument("--in", dest="input_path", required=True, help="input JSON file")
    parser.add_argument("--out", dest="output_path", required=True, help="report file (JSON or CSV)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--tolerance-overrides", default=None, help="JSON object of tolerance entries")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        setup_logging()
        config = RunConfig.from_args(args)
    except (Error, ValueError) as error:
        _report_error(error)
        return EXIT_SCHEMA
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
