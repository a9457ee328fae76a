"""Command-line entry point.

Subcommands: ``permanent``, ``distribution``, ``sample``, ``scaling``,
``filter``.  Configs are JSON, bulk results CSV, summaries JSON; every
output is written atomically.  Exit codes: 0 success, 2 config/parse
error, 3 guard violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import __version__
from .distribution import output_distribution
from .experiments import run_filter_experiment, run_scaling_experiment
from .fock import DEFAULT_GUARD_LIMIT, ExperimentShape, GuardLimitError
from .interferometer import compose, elements_from_json, haar_random, matrix_from_json
from .noise import NoiseModel, ideal_component_probability, input_ensemble
from .output import (
    write_distribution_csv,
    write_filter_csv,
    write_samples_csv,
    write_scaling_csv,
    write_summary_json,
)
from .permanent import (
    RYSER_DIMENSION_LIMIT,
    permanent_ryser,
    set_default_partitions,
)
from .rng import RandomSeed
from .sampling import postselect, sample_noisy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_IO = 4

_MODE_RULES = {
    "n_squared": lambda n: n * n,
    "equal": lambda n: n,
}


class ConfigError(ValueError):
    """Invalid or unparseable configuration input."""


def _load_json(path):
    with open(path, "r") as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: JSON parse error at {exc}") from exc


def _require(data: dict, field: str, path: str):
    if field not in data:
        raise ConfigError(f"{path}: missing required field {field!r}")
    return data[field]


@dataclasses.dataclass
class RunConfig:
    shape: ExperimentShape | None
    elements: list | None
    haar_seed: int | None
    noise: NoiseModel
    trials: int
    seed: int
    experiment: dict


def load_config(path, guard_limit: int = DEFAULT_GUARD_LIMIT) -> RunConfig:
    """Parse and fully validate a run config before any computation starts."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")

    shape = None
    if "shape" in data:
        raw = data["shape"]
        try:
            shape = ExperimentShape(int(_require(raw, "n", path)), int(_require(raw, "m", path)))
        except ValueError as exc:
            raise ConfigError(f"{path}: bad shape: {exc}") from exc

    elements = None
    haar_seed = None
    if "circuit" in data:
        circuit = data["circuit"]
        has_elements = "elements" in circuit
        has_haar = "haar_seed" in circuit
        if has_elements == has_haar:
            raise ConfigError(
                f"{path}: circuit must give exactly one of 'elements' or 'haar_seed'"
            )
        if has_elements:
            try:
                elements = elements_from_json(circuit["elements"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"{path}: bad circuit element: {exc}") from exc
        else:
            haar_seed = int(circuit["haar_seed"])

    try:
        noise = NoiseModel.from_json(data.get("noise", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad noise model: {exc}") from exc

    sampling = data.get("sampling", {})
    trials = int(sampling.get("trials", 0))
    seed = int(sampling.get("seed", 0))
    if trials < 0:
        raise ConfigError(f"{path}: trials must be >= 0, got {trials}")

    experiment = data.get("experiment", {})
    if "photon_counts" in experiment:
        counts = experiment["photon_counts"]
        if not counts or any(int(n) < 1 for n in counts):
            raise ConfigError(f"{path}: photon_counts must be positive ints")
    if "mode_rule" in experiment and experiment["mode_rule"] not in _MODE_RULES:
        raise ConfigError(
            f"{path}: unknown mode_rule {experiment['mode_rule']!r} "
            f"(choose from {sorted(_MODE_RULES)})"
        )

    config = RunConfig(shape, elements, haar_seed, noise, trials, seed, experiment)
    # Guard checks happen here, after parsing, so a bad config never starts
    # a heavy computation.
    if shape is not None:
        shape.check_guard(guard_limit)
        input_ensemble(shape, noise, guard_limit)
    return config


def _resolve_unitary(config: RunConfig, path: str):
    if config.shape is None:
        raise ConfigError(f"{path}: this command requires a 'shape' section")
    if config.elements is not None:
        return compose(config.elements, config.shape.m)
    if config.haar_seed is not None:
        return haar_random(config.shape.m, config.haar_seed)
    raise ConfigError(f"{path}: this command requires a 'circuit' section")


def cmd_permanent(args) -> int:
    data = _load_json(args.matrix)
    try:
        matrix = matrix_from_json(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{args.matrix}: bad matrix JSON: {exc}") from exc
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ConfigError(f"{args.matrix}: matrix must be square, got {matrix.shape}")
    if matrix.shape[0] > RYSER_DIMENSION_LIMIT:
        raise GuardLimitError(
            f"{args.matrix}: dimension {matrix.shape[0]} exceeds Ryser guard "
            f"{RYSER_DIMENSION_LIMIT}",
            count=matrix.shape[0],
        )
    value = permanent_ryser(matrix)
    print(json.dumps([value.real, value.imag]))
    return EXIT_OK


def cmd_distribution(args) -> int:
    config = load_config(args.config)
    u = _resolve_unitary(config, args.config)
    dist = output_distribution(u, config.shape.input_occupation)
    write_distribution_csv(dist, os.path.join(args.out, "distribution.csv"))
    return EXIT_OK


def cmd_sample(args) -> int:
    config = load_config(args.config)
    u = _resolve_unitary(config, args.config)
    seed = config.seed if args.seed is None else args.seed
    records = sample_noisy(u, config.shape, config.noise, RandomSeed(seed), config.trials)
    kept, rate = postselect(records, config.shape.n)
    ideal_fraction = (
        sum(r.branch_ideal for r in records) / len(records) if records else 0.0
    )
    write_samples_csv(records, os.path.join(args.out, "samples.csv"))
    write_summary_json(
        {
            "command": "sample",
            "version": __version__,
            "seed": seed,
            "trials": config.trials,
            "shape": {"n": config.shape.n, "m": config.shape.m},
            "noise": config.noise.to_json(),
            "ideal_branch_fraction": ideal_fraction,
            "analytic_ideal_probability": ideal_component_probability(
                config.noise, config.shape.n
            ),
            "postselect_success_rate": rate,
            "postselect_kept": len(kept),
        },
        os.path.join(args.out, "summary.json"),
    )
    return EXIT_OK


def cmd_scaling(args) -> int:
    config = load_config(args.config)
    experiment = config.experiment
    if "photon_counts" not in experiment or "p" not in experiment:
        raise ConfigError(
            f"{args.config}: scaling needs experiment.photon_counts and experiment.p"
        )
    photon_counts = [int(n) for n in experiment["photon_counts"]]
    p = float(experiment["p"])
    rule_name = experiment.get("mode_rule", "n_squared")
    seed = config.seed if args.seed is None else args.seed
    rows = run_scaling_experiment(
        p,
        photon_counts,
        mode_rule=_MODE_RULES[rule_name],
        noise=config.noise,
        trials=config.trials,
        seed=seed,
    )
    write_scaling_csv(rows, os.path.join(args.out, "scaling.csv"))
    write_summary_json(
        {
            "command": "scaling",
            "version": __version__,
            "seed": seed,
            "trials": config.trials,
            "p": p,
            "photon_counts": photon_counts,
            "mode_rule": rule_name,
            "noise": config.noise.to_json(),
            "guard_limit": DEFAULT_GUARD_LIMIT,
            "threads": args.threads or 1,
        },
        os.path.join(args.out, "summary.json"),
    )
    return EXIT_OK


def cmd_filter(args) -> int:
    config = load_config(args.config)
    experiment = config.experiment
    if "photon_counts" not in experiment or "eta" not in experiment:
        raise ConfigError(
            f"{args.config}: filter needs experiment.photon_counts and experiment.eta"
        )
    eta = float(experiment["eta"])
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"{args.config}: eta={eta} outside [0, 1]")
    photon_counts = [int(n) for n in experiment["photon_counts"]]
    seed = config.seed if args.seed is None else args.seed
    rows = run_filter_experiment(eta, photon_counts, trials=config.trials, seed=seed)
    write_filter_csv(rows, os.path.join(args.out, "filter.csv"))
    write_summary_json(
        {
            "command": "filter",
            "version": __version__,
            "seed": seed,
            "trials": config.trials,
            "eta": eta,
            "photon_counts": photon_counts,
            "guard_limit": DEFAULT_GUARD_LIMIT,
        },
        os.path.join(args.out, "summary.json"),
    )
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="override sampling seed")
    parser.add_argument(
        "--threads", type=int, default=None, help="fix the permanent partition count"
    )
    parser.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosonsampler",
        description="Exact simulator of ideal and noisy boson-sampling",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    perm = sub.add_parser("permanent", help="print the permanent of a JSON matrix")
    perm.add_argument("matrix", help="JSON file: array of arrays of [re, im] pairs")
    perm.add_argument("--threads", type=int, default=None)
    perm.set_defaults(func=cmd_permanent)

    dist = sub.add_parser("distribution", help="write the exact ideal distribution CSV")
    _add_common(dist)
    dist.set_defaults(func=cmd_distribution)

    sample = sub.add_parser("sample", help="Monte-Carlo sample the noisy device")
    _add_common(sample)
    sample.set_defaults(func=cmd_sample)

    scaling = sub.add_parser("scaling", help="error-scaling table across photon counts")
    _add_common(scaling)
    scaling.set_defaults(func=cmd_scaling)

    filt = sub.add_parser("filter", help="loss-filtering success table")
    _add_common(filt)
    filt.set_defaults(func=cmd_filter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        set_default_partitions(args.threads)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardLimitError as exc:
        print(f"error: guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
