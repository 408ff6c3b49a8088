"""Command-line interface.

Subcommands: dla, bound (eval|budget|curve), data gen, train, sweep, report.
Any option may come from a JSON config file of flat dotted keys
(e.g. {"sweep.datasets": 20}); explicit flags override file values and the
override is noted on stderr.  Exit codes: 0 success, 1 runtime failure,
2 usage error, 3 domain or validation error.  All file writes are atomic
(temp then rename) and carry a provenance header (config hash, master seed,
package version).  DLABOUND_OUTDIR supplies a default output directory.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .bounds import (
    BoundInputs,
    ParameterDomainError,
    epsilon_max,
    generalization_bound,
    max_params_from_epsilon,
    max_trainable_params,
    nt_curve,
)
from .dla import (
    GeneratorSet,
    generator_set_from_text,
    generator_set_to_text,
    lie_closure,
    tfim_generators,
    tfim_hamiltonian,
    tfim_reference_dimension,
)
from .experiments import (
    SweepConfig,
    atomic_write_text,
    compute_cr,
    compute_pmax_nmax,
    closure_dimension,
    dataset_from_dict,
    dataset_to_dict,
    generate_dataset,
    provenance_dict,
    records_from_csv_text,
    run_sweep,
    summarize_records,
    write_sweep_outputs,
)
from .simulator import make_model
from .training import TrainConfig, predict, train_ran, train_sps

ENV_OUTDIR = "DLABOUND_OUTDIR"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class CliValidationError(ValueError):
    """All collected validation problems for one invocation."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Accept '2..6', '2,3,4', or '3'."""
    text = str(text).strip()
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in str(text).split(",") if p.strip())


@dataclass(frozen=True)
class Opt:
    """One CLI option: flag name, conversion, default, optional validator."""

    name: str
    conv: Callable | None
    default: object
    help: str
    required: bool = False
    choices: tuple | None = None
    check: Callable[[object], str | None] | None = None

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


def _positive(name: str) -> Callable:
    return lambda v: None if v > 0 else f"{name} must be positive, got {v}"


def _nonneg(name: str) -> Callable:
    return lambda v: None if v >= 0 else f"{name} must be >= 0, got {v}"


def _ge(name: str, lo) -> Callable:
    return lambda v: None if v >= lo else f"{name} must be >= {lo}, got {v}"


_TRAIN_OPTS = [
    Opt("epochs", int, 200, "optimizer epochs", check=_nonneg("epochs")),
    Opt("a0", float, 0.1, "sps step-size scale", check=_positive("a0")),
    Opt("c0", float, 0.1, "sps perturbation scale", check=_positive("c0")),
    Opt("big-a", float, 20.0, "sps stability offset", check=_nonneg("big-a")),
    Opt("alpha-gain", float, 0.602, "sps step decay exponent"),
    Opt("gamma-gain", float, 0.101, "sps perturbation decay exponent"),
    Opt("ran-step", float, 0.1, "ran proposal half-width", check=_positive("ran-step")),
    Opt("init-low", float, -0.01, "sps init lower bound"),
    Opt("init-high", float, 0.01, "sps init upper bound"),
    Opt("theta-clip", float, None, "clip |theta_i| to this radius (off by default)"),
]

COMMANDS: dict[str, list[Opt]] = {
    "dla": [
        Opt("model", str, "tfim", "built-in generator family", choices=("tfim",)),
        Opt("n", int, None, "qubit count (with --model)"),
        Opt("boundary", str, None, "chain boundary (with --model)", choices=("open", "closed")),
        Opt("generators", str, None, "generator-set file (blank-line separated Pauli blocks)"),
        Opt("max-dim", int, None, "closure dimension cap", check=_ge("max-dim", 1)),
        Opt("basis-out", str, None, "write the closure basis to this file"),
        Opt("json", None, False, "emit JSON instead of labeled text"),
    ],
    "bound.eval": [
        Opt("m", int, None, "training-set size", required=True, check=_ge("m", 1)),
        Opt("nt", int, None, "trainable parameter count", required=True, check=_ge("nt", 1)),
        Opt("dimg", int, None, "Lie-closure dimension", required=True, check=_ge("dimg", 1)),
        Opt("n-qubits", int, None, "qubit count (eigenvalue count is 2**n)", required=True, check=_ge("n-qubits", 1)),
        Opt("o-norm", float, 1.0, "observable spectral norm", check=_positive("o-norm")),
        Opt("c", float, 1.0, "loss range constant", check=_positive("c")),
        Opt("delta", float, 0.05, "confidence level in (0,1)"),
        Opt("radius", float, math.pi, "parameter ball radius", check=_positive("radius")),
        Opt("json", None, False, "emit JSON instead of labeled text"),
    ],
    "bound.budget": [
        Opt("p", float, None, "per-factor scale, 0 < p < ln 2"),
        Opt("eps", float, None, "radius form, eps > 0"),
        Opt("json", None, False, "emit JSON instead of labeled text"),
    ],
    "bound.curve": [
        Opt("p-min", float, 0.1, "grid start", check=_positive("p-min")),
        Opt("p-max", float, 0.69, "grid end"),
        Opt("points", int, 200, "grid size", check=_ge("points", 2)),
        Opt("out", str, None, "output CSV path"),
    ],
    "data.gen": [
        Opt("n", int, None, "qubit count", required=True, check=_ge("n", 1)),
        Opt("seed", int, None, "dataset seed", required=True),
        Opt("m-train", int, 10, "training points", check=_ge("m-train", 1)),
        Opt("m-test", int, 100, "test points", check=_ge("m-test", 1)),
        Opt("out", str, None, "output JSON path"),
    ],
    "train": [
        Opt("model", str, "tfim", "built-in model family", choices=("tfim",)),
        Opt("n", int, None, "qubit count", required=True, check=_ge("n", 2)),
        Opt("boundary", str, None, "chain boundary", required=True, choices=("open", "closed")),
        Opt("algo", str, None, "optimizer", required=True, choices=("sps", "ran")),
        Opt("seed", int, 0, "training seed"),
        Opt("data", str, None, "dataset JSON from `data gen`", required=True),
        Opt("layers", int, 2, "ansatz layers L", check=_ge("layers", 1)),
        Opt("reps", int, 10, "factors per layer K", check=_ge("reps", 1)),
        Opt("out", str, None, "write result JSON here instead of stdout"),
        *_TRAIN_OPTS,
    ],
    "sweep": [
        Opt("n", _parse_int_list, (2, 3, 4, 5, 6), "qubit counts: '2..6' or '2,4'"),
        Opt("boundaries", _parse_str_list, ("open", "closed"), "comma list"),
        Opt("algos", _parse_str_list, ("sps", "ran"), "comma list"),
        Opt("datasets", int, 20, "dataset realizations per condition", check=_ge("datasets", 1)),
        Opt("seed", int, 6, "master seed"),
        Opt("layers", int, 2, "ansatz layers L", check=_ge("layers", 1)),
        Opt("reps", int, 10, "factors per layer K", check=_ge("reps", 1)),
        Opt("out", str, None, "output directory"),
        Opt("welch", None, False, "add unequal-variance t-tests to the summary"),
        Opt("quiet", None, False, "suppress per-run progress on stderr"),
        *_TRAIN_OPTS,
    ],
    "report": [
        Opt("records", str, None, "directory containing records.csv", required=True),
        Opt("out", str, None, "output directory (default: the records directory)"),
    ],
}

_LEAF_HELP = {
    "dla": "compute the Lie-closure dimension of a generator set",
    "bound.eval": "evaluate the generalization-gap bound",
    "bound.budget": "trainable-parameter budget from a scale p or radius eps",
    "bound.curve": "write the budget-vs-p curve as CSV",
    "data.gen": "generate a dataset from a random target unitary",
    "train": "train one model on a dataset and report metrics",
    "sweep": "run the full experiment grid and write records + summary",
    "report": "render figures (SVG + CSV) from sweep records",
}


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved, validated invocation."""

    command: str
    params: dict
    overrides: tuple[str, ...] = ()

    def config_hash(self) -> str:
        payload = {"command": self.command, "params": {k: _jsonable(v) for k, v in sorted(self.params.items())}}
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()[:16]

    def to_flat(self) -> dict:
        return {f"{self.command}.{k}": _jsonable(v) for k, v in sorted(self.params.items())}


def _jsonable(v):
    if isinstance(v, tuple):
        return list(v)
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlabound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dlabound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_leaf(owner, name: str, key: str):
        leaf = owner.add_parser(name, help=_LEAF_HELP[key])
        leaf.set_defaults(_leaf=key)
        leaf.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file of flat dotted keys")
        for opt in COMMANDS[key]:
            kwargs: dict = {"default": argparse.SUPPRESS, "help": opt.help, "dest": opt.dest}
            if opt.conv is None:
                kwargs["action"] = "store_true"
            else:
                kwargs["type"] = str
            if opt.choices is not None:
                kwargs["choices"] = [str(c) for c in opt.choices]
            leaf.add_argument(f"--{opt.name}", **kwargs)
        return leaf

    add_leaf(sub, "dla", "dla")
    bound = sub.add_parser("bound", help="covering-number bound tools")
    bound_sub = bound.add_subparsers(dest="bound_command", required=True)
    add_leaf(bound_sub, "eval", "bound.eval")
    add_leaf(bound_sub, "budget", "bound.budget")
    add_leaf(bound_sub, "curve", "bound.curve")
    data = sub.add_parser("data", help="dataset tools")
    data_sub = data.add_subparsers(dest="data_command", required=True)
    add_leaf(data_sub, "gen", "data.gen")
    add_leaf(sub, "train", "train")
    add_leaf(sub, "sweep", "sweep")
    add_leaf(sub, "report", "report")
    return parser


def _convert(opt: Opt, raw, source: str, errors: list[str]):
    if raw is None:
        return None
    if opt.conv is None:
        if isinstance(raw, bool):
            return raw
        errors.append(f"{source} key {opt.name!r} must be a boolean, got {raw!r}")
        return None
    try:
        if opt.conv is _parse_int_list and isinstance(raw, (list, tuple)):
            value = tuple(int(v) for v in raw)
        elif opt.conv is _parse_str_list and isinstance(raw, (list, tuple)):
            value = tuple(str(v) for v in raw)
        elif opt.conv in (int, float) and isinstance(raw, (int, float)) and not isinstance(raw, bool):
            value = opt.conv(raw)
        else:
            value = opt.conv(raw)
    except (TypeError, ValueError) as exc:
        errors.append(f"{source} value for {opt.name!r} is invalid: {exc}")
        return None
    if opt.choices is not None and value not in opt.choices:
        errors.append(f"{opt.name} must be one of {list(opt.choices)}, got {value!r}")
        return None
    return value


def parse_config(argv: list[str]) -> RunConfig:
    """Parse argv (and an optional --config JSON file) into a RunConfig.

    Precedence: built-in defaults < config file < explicit flags.  Every
    validation problem is collected and reported at once.
    """
    ns = build_parser().parse_args(argv)
    leaf: str = ns._leaf
    opts = COMMANDS[leaf]
    by_dest = {o.dest: o for o in opts}
    errors: list[str] = []

    file_values: dict[str, object] = {}
    config_path = getattr(ns, "config", None)
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise CliValidationError([f"config file not found: {path}"])
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliValidationError([f"config file is not valid JSON: {exc}"]) from exc
        if not isinstance(raw, dict):
            raise CliValidationError(["config file must hold a JSON object of dotted keys"])
        for key, value in raw.items():
            head, _, opt_name = key.rpartition(".")
            if not head or head not in COMMANDS:
                errors.append(f"config key {key!r} does not start with a known command")
                continue
            if head != leaf:
                continue
            opt = by_dest.get(opt_name.replace("-", "_"))
            if opt is None:
                errors.append(f"config key {key!r} is not an option of {leaf!r}")
                continue
            converted = _convert(opt, value, "config", errors)
            if converted is not None:
                file_values[opt.dest] = converted

    explicit: dict[str, object] = {}
    for opt in opts:
        if hasattr(ns, opt.dest):
            raw = getattr(ns, opt.dest)
            converted = _convert(opt, raw, "flag", errors) if opt.conv is not None else raw
            if converted is not None or opt.conv is None:
                explicit[opt.dest] = converted

    params = {o.dest: o.default for o in opts}
    params.update(file_values)
    params.update(explicit)
    overrides = tuple(sorted(set(file_values) & set(explicit)))

    for opt in opts:
        value = params[opt.dest]
        if opt.required and value is None:
            errors.append(f"missing required option --{opt.name}")
        if value is not None and opt.check is not None:
            problem = opt.check(value)
            if problem:
                errors.append(problem)
    if errors:
        raise CliValidationError(errors)
    return RunConfig(leaf, params, overrides)


def _default_out(params: dict, filename: str | None) -> Path:
    """Resolve an output path from --out or DLABOUND_OUTDIR."""
    out = params.get("out")
    if out is not None:
        return Path(out)
    env = os.environ.get(ENV_OUTDIR)
    if env is None:
        raise CliValidationError([f"no --out given and {ENV_OUTDIR} is not set"])
    return Path(env) / filename if filename else Path(env)


def _emit(lines_or_obj, as_json: bool, out=None) -> None:
    stream = out or sys.stdout
    if as_json:
        print(json.dumps(lines_or_obj, indent=2, sort_keys=True), file=stream)
    else:
        for key, value in lines_or_obj.items():
            print(f"{key} = {value}", file=stream)


def cmd_dla(cfg: RunConfig) -> int:
    p = cfg.params
    if p["generators"] is not None:
        path = Path(p["generators"])
        if not path.is_file():
            raise CliValidationError([f"generator file not found: {path}"])
        gens = generator_set_from_text(path.read_text(encoding="utf-8"), label=path.name)
        reference = None
    else:
        if p["n"] is None or p["boundary"] is None:
            raise CliValidationError(["--model tfim needs both --n and --boundary (or pass --generators)"])
        gens = tfim_generators(p["n"], p["boundary"])
        reference = tfim_reference_dimension(p["n"], p["boundary"])
    basis = lie_closure(gens, max_dim=p["max_dim"])
    payload: dict = {
        "dim_g": basis.dim,
        "depth_reached": basis.depth_reached,
        "truncated": basis.truncated,
    }
    if reference is not None:
        payload["reference_formula"] = reference
        if reference != basis.dim:
            payload["note"] = (
                "computed closure differs from the quoted closed-form; the computed value is authoritative"
            )
    _emit(payload, p["json"])
    if p["basis_out"] is not None:
        out = Path(p["basis_out"])
        atomic_write_text(out, generator_set_to_text(GeneratorSet(basis.n_qubits, basis.basis, label="closure-basis")))
        print(f"basis written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_bound_eval(cfg: RunConfig) -> int:
    p = cfg.params
    if not 0 < p["delta"] < 1:
        raise CliValidationError([f"delta must be in (0, 1), got {p['delta']}"])
    inputs = BoundInputs(
        m=p["m"],
        n_t=p["nt"],
        dim_g=p["dimg"],
        n_eigen=2 ** p["n_qubits"],
        o_norm=p["o_norm"],
        c=p["c"],
        delta=p["delta"],
        radius=p["radius"],
    )
    report = generalization_bound(inputs)
    _emit(
        {
            "d": report.d,
            "alpha": report.alpha,
            "dudley_term": report.dudley_term,
            "rademacher_bound": report.rademacher_bound,
            "gap_bound": report.gap_bound,
        },
        p["json"],
    )
    return EXIT_OK


def cmd_bound_budget(cfg: RunConfig) -> int:
    p = cfg.params
    if (p["p"] is None) == (p["eps"] is None):
        raise CliValidationError(["pass exactly one of --p or --eps"])
    if p["p"] is not None:
        full = epsilon_max(p["p"])
        payload = {
            "nt_budget": max_trainable_params(p["p"]),
            "epsilon_max": full,
            "epsilon_max_half": full / 2.0,
            "warning": (
                "two covering-radius conventions (2p vs p) circulate for the epsilon ceiling; "
                "nt_budget uses the unhalved formula (2 - e^p) * p"
            ),
        }
    else:
        payload = {"nt_budget": max_params_from_epsilon(p["eps"])}
    _emit(payload, p["json"])
    return EXIT_OK


def cmd_bound_curve(cfg: RunConfig) -> int:
    p = cfg.params
    if not p["p_min"] < p["p_max"] < math.log(2.0):
        raise CliValidationError([f"need p-min < p-max < ln 2, got {p['p_min']}, {p['p_max']}"])
    out = _default_out(p, "nt_curve.csv")
    pts = p["points"]
    grid = [p["p_min"] + i * (p["p_max"] - p["p_min"]) / (pts - 1) for i in range(pts)]
    rows = nt_curve(grid)
    prov = provenance_dict(cfg.config_hash(), None)
    lines = [f"# {k}={v}" for k, v in prov.items()]
    lines.append("p,nt_budget")
    lines.extend(f"{x!r},{y!r}" for x, y in rows)
    atomic_write_text(out, "\n".join(lines) + "\n")
    print(f"curve written to {out}")
    return EXIT_OK


def cmd_data_gen(cfg: RunConfig) -> int:
    p = cfg.params
    out = _default_out(p, f"dataset_n{p['n']}_seed{p['seed']}.json")
    ds = generate_dataset(p["n"], p["seed"], p["m_train"], p["m_test"])
    payload = {"provenance": provenance_dict(cfg.config_hash(), p["seed"]), **dataset_to_dict(ds)}
    atomic_write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"dataset written to {out}")
    return EXIT_OK


def cmd_train(cfg: RunConfig) -> int:
    p = cfg.params
    data_path = Path(p["data"])
    if not data_path.is_file():
        raise CliValidationError([f"dataset file not found: {data_path}"])
    ds = dataset_from_dict(json.loads(data_path.read_text(encoding="utf-8")))
    if ds.n_qubits != p["n"]:
        raise CliValidationError([f"dataset is for n={ds.n_qubits}, but --n {p['n']} was given"])
    train_cfg = TrainConfig(
        algorithm=p["algo"],
        epochs=p["epochs"],
        seed=p["seed"],
        init_low=p["init_low"],
        init_high=p["init_high"],
        a0=p["a0"],
        c0=p["c0"],
        big_a=p["big_a"],
        alpha_gain=p["alpha_gain"],
        gamma_gain=p["gamma_gain"],
        ran_step=p["ran_step"],
        theta_clip=p["theta_clip"],
    )
    model = make_model(p["n"], p["boundary"], p["layers"], p["reps"])
    trainer = train_sps if p["algo"] == "sps" else train_ran
    result = trainer(model, ds, train_cfg)
    train_pred = predict(model, result.theta_star, ds.train_x)
    test_pred = predict(model, result.theta_star, ds.test_x)
    train_mse = float(np.mean((train_pred - ds.train_y) ** 2))
    test_mse = float(np.mean((test_pred - ds.test_y) ** 2))
    h = tfim_hamiltonian(p["n"], p["boundary"])
    p_max, n_max = compute_pmax_nmax(result.theta_star, h)
    payload = {
        "provenance": provenance_dict(cfg.config_hash(), p["seed"]),
        "result": {
            "theta_star": [float(t) for t in result.theta_star],
            "final_train_rmse": result.final_train_rmse,
            "evaluations_used": result.evaluations_used,
            "train_rmse_trace": [float(v) for v in result.train_rmse_trace],
        },
        "metrics": {
            "dim_g": closure_dimension(p["n"], p["boundary"]),
            "train_rmse": math.sqrt(train_mse),
            "test_rmse": math.sqrt(test_mse),
            "gap_rmse": math.sqrt(test_mse) - math.sqrt(train_mse),
            "gap_mse": test_mse - train_mse,
            "cr": compute_cr(result.theta_star, h),
            "p_max": p_max,
            "n_max": n_max,
        },
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if p["out"] is not None:
        atomic_write_text(Path(p["out"]), text)
        print(f"result written to {p['out']}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    p = cfg.params
    out_dir = _default_out(p, None)
    train_cfg = TrainConfig(
        epochs=p["epochs"],
        init_low=p["init_low"],
        init_high=p["init_high"],
        a0=p["a0"],
        c0=p["c0"],
        big_a=p["big_a"],
        alpha_gain=p["alpha_gain"],
        gamma_gain=p["gamma_gain"],
        ran_step=p["ran_step"],
        theta_clip=p["theta_clip"],
    )
    sweep_cfg = SweepConfig(
        n_list=tuple(p["n"]),
        boundaries=tuple(p["boundaries"]),
        algorithms=tuple(p["algos"]),
        n_datasets=p["datasets"],
        master_seed=p["seed"],
        layers=p["layers"],
        reps=p["reps"],
        train=train_cfg,
    )

    def progress(rec):
        if not p["quiet"]:
            print(
                f"n={rec.n} {rec.boundary}/{rec.algorithm} seed={rec.dataset_seed}: {rec.status}"
                + (f" gap_rmse={rec.gap_rmse:+.4f}" if rec.status == "ok" else ""),
                file=sys.stderr,
            )

    records = run_sweep(sweep_cfg, progress=progress)
    summary = summarize_records(records, config_echo=sweep_cfg.to_dict())
    if p["welch"]:
        from .experiments import t_test_two_sample

        welch: dict = {}
        ok = [r for r in records if r.status == "ok"]
        present = sorted({(r.boundary, r.algorithm) for r in ok})
        for metric in ("train_rmse", "test_rmse", "gap_rmse"):
            welch[metric] = {}
            for i in range(len(present)):
                for j in range(i + 1, len(present)):
                    ga, gb = present[i], present[j]
                    a = [getattr(r, metric) for r in ok if (r.boundary, r.algorithm) == ga]
                    b = [getattr(r, metric) for r in ok if (r.boundary, r.algorithm) == gb]
                    key = f"{ga[0]}/{ga[1]} vs {gb[0]}/{gb[1]}"
                    try:
                        welch[metric][key] = t_test_two_sample(a, b, welch=True)
                    except ValueError:
                        welch[metric][key] = None
        summary["t_tests"]["pooled_welch"] = welch
    prov = provenance_dict(cfg.config_hash(), p["seed"])
    paths = write_sweep_outputs(records, summary, out_dir, prov)
    for label, path in paths.items():
        print(f"{label}: {path}")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    p = cfg.params
    records_dir = Path(p["records"])
    records_csv = records_dir / "records.csv"
    if not records_csv.is_file():
        raise CliValidationError([f"records.csv not found in {records_dir}"])
    records = records_from_csv_text(records_csv.read_text(encoding="utf-8"))
    out_dir = Path(p["out"]) if p["out"] is not None else records_dir
    ok = [r for r in records if r.status == "ok"]
    if not ok:
        print("no usable records; nothing to render")
        return EXIT_OK
    from .reports import render_reports

    prov = provenance_dict(cfg.config_hash(), None)
    paths = render_reports(records, out_dir, prov)
    for path in paths:
        print(str(path))
    return EXIT_OK


_DISPATCH = {
    "dla": cmd_dla,
    "bound.eval": cmd_bound_eval,
    "bound.budget": cmd_bound_budget,
    "bound.curve": cmd_bound_curve,
    "data.gen": cmd_data_gen,
    "train": cmd_train,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def _error_payload(exc: Exception) -> str:
    return json.dumps({"error": str(exc), "type": type(exc).__name__}, sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        # argparse already printed a usage message (or --version/--help text)
        return int(exc.code or 0)
    except CliValidationError as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_DOMAIN
    for key in cfg.overrides:
        print(f"note: flag --{key.replace('_', '-')} overrides the config file value", file=sys.stderr)
    try:
        return _DISPATCH[cfg.command](cfg)
    except (CliValidationError, ParameterDomainError, ValueError) as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
