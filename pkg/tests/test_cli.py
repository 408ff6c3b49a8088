"""CLI tests: parsing, config-file precedence, exit codes, reproducible outputs.

Everything drives `main(argv)` in-process so stdout/stderr can be captured
with capsys and output files land in tmp_path.
"""

import json
import math
from pathlib import Path

import pytest

from dlabound.bounds import (
    BoundInputs,
    epsilon_max,
    generalization_bound,
    max_params_from_epsilon,
    max_trainable_params,
)
from dlabound.cli import (
    ENV_OUTDIR,
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_USAGE,
    CliValidationError,
    RunConfig,
    main,
    parse_config,
)
from dlabound.dla import generator_set_from_text
from dlabound.experiments import (
    RECORD_COLUMNS,
    compute_cr,
    dataset_from_dict,
    records_from_csv_text,
)
from dlabound.dla import tfim_hamiltonian


# ---------------------------------------------------------------------------
# parse_config: defaults, list syntax, to_flat round trip
# ---------------------------------------------------------------------------


def test_parse_config_budget_minimal():
    cfg = parse_config(["bound", "budget", "--p", "0.1"])
    assert cfg.command == "bound.budget"
    assert cfg.params["p"] == 0.1
    assert cfg.params["eps"] is None
    assert cfg.params["json"] is False
    assert cfg.overrides == ()


def test_parse_config_sweep_defaults():
    cfg = parse_config(["sweep"])
    p = cfg.params
    assert p["n"] == (2, 3, 4, 5, 6)
    assert p["boundaries"] == ("open", "closed")
    assert p["algos"] == ("sps", "ran")
    assert p["datasets"] == 20
    assert p["seed"] == 6
    assert p["epochs"] == 200
    assert p["layers"] == 2 and p["reps"] == 10
    assert p["quiet"] is False and p["welch"] is False


def test_parse_config_int_list_syntax():
    assert parse_config(["sweep", "--n", "2..4"]).params["n"] == (2, 3, 4)
    assert parse_config(["sweep", "--n", "2,5"]).params["n"] == (2, 5)
    assert parse_config(["sweep", "--n", "3"]).params["n"] == (3,)
    assert parse_config(["sweep", "--boundaries", "open"]).params["boundaries"] == ("open",)


def test_config_hash_is_short_hex_and_param_sensitive():
    a = parse_config(["bound", "budget", "--p", "0.1"])
    b = parse_config(["bound", "budget", "--p", "0.2"])
    assert len(a.config_hash()) == 16
    assert int(a.config_hash(), 16) >= 0
    assert a.config_hash() != b.config_hash()
    assert a.config_hash() == parse_config(["bound", "budget", "--p", "0.1"]).config_hash()


def test_to_flat_round_trips_through_a_config_file(tmp_path):
    cfg = parse_config(["sweep", "--n", "2..4", "--datasets", "3", "--quiet"])
    flat = cfg.to_flat()
    assert flat["sweep.n"] == [2, 3, 4]
    assert flat["sweep.datasets"] == 3
    assert all(key.startswith("sweep.") for key in flat)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(flat), encoding="utf-8")
    again = parse_config(["sweep", "--config", str(path)])
    assert again.params == cfg.params
    assert again.config_hash() == cfg.config_hash()
    assert again.overrides == ()


def test_to_flat_dotted_subcommand_round_trip(tmp_path):
    cfg = parse_config(["bound", "budget", "--p", "0.25"])
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_flat()), encoding="utf-8")
    again = parse_config(["bound", "budget", "--config", str(path)])
    assert again.params == cfg.params


# ---------------------------------------------------------------------------
# config file: precedence, override notes, rejection of bad keys
# ---------------------------------------------------------------------------


def test_precedence_default_under_file_under_flag(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"sweep.datasets": 5, "sweep.seed": 9}), encoding="utf-8")
    cfg = parse_config(["sweep", "--config", str(path), "--datasets", "2"])
    assert cfg.params["datasets"] == 2  # flag wins
    assert cfg.params["seed"] == 9  # file beats default 7
    assert cfg.params["layers"] == 2  # untouched default
    assert cfg.overrides == ("datasets",)


def test_override_note_printed_on_stderr(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"bound.budget.p": 0.2}), encoding="utf-8")
    code = main(["bound", "budget", "--config", str(path), "--p", "0.1", "--json"])
    out, err = capsys.readouterr()
    assert code == EXIT_OK
    assert "note: flag --p overrides the config file value" in err
    assert json.loads(out)["nt_budget"] == pytest.approx(max_trainable_params(0.1))


def test_config_keys_for_other_commands_are_ignored(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"train.seed": 3, "sweep.seed": 11}), encoding="utf-8")
    cfg = parse_config(["sweep", "--config", str(path)])
    assert cfg.params["seed"] == 11


def test_config_unknown_keys_rejected(tmp_path):
    bad_head = tmp_path / "a.json"
    bad_head.write_text(json.dumps({"nope.p": 0.1}), encoding="utf-8")
    with pytest.raises(CliValidationError, match="does not start with a known command"):
        parse_config(["bound", "budget", "--config", str(bad_head)])
    bad_opt = tmp_path / "b.json"
    bad_opt.write_text(json.dumps({"bound.budget.pp": 0.1}), encoding="utf-8")
    with pytest.raises(CliValidationError, match="not an option"):
        parse_config(["bound", "budget", "--config", str(bad_opt)])


def test_config_file_problems_are_domain_errors(tmp_path, capsys):
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == EXIT_DOMAIN
    not_json = tmp_path / "bad.json"
    not_json.write_text("{not json", encoding="utf-8")
    assert main(["sweep", "--config", str(not_json)]) == EXIT_DOMAIN
    not_dict = tmp_path / "list.json"
    not_dict.write_text("[1, 2]", encoding="utf-8")
    assert main(["sweep", "--config", str(not_dict)]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert '"type": "CliValidationError"' in err


def test_config_boolean_and_choice_validation(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"sweep.quiet": True}), encoding="utf-8")
    assert parse_config(["sweep", "--config", str(path)]).params["quiet"] is True
    bad_bool = tmp_path / "bad_bool.json"
    bad_bool.write_text(json.dumps({"sweep.quiet": "yes"}), encoding="utf-8")
    with pytest.raises(CliValidationError, match="must be a boolean"):
        parse_config(["sweep", "--config", str(bad_bool)])
    bad_choice = tmp_path / "bad_choice.json"
    bad_choice.write_text(json.dumps({"train.algo": "bogus"}), encoding="utf-8")
    with pytest.raises(CliValidationError, match="algo must be one of"):
        parse_config(
            ["train", "--config", str(bad_choice), "--n", "2", "--boundary", "open", "--data", "x.json"]
        )


def test_validation_collects_every_error_at_once():
    with pytest.raises(CliValidationError) as excinfo:
        parse_config(["bound", "eval", "--m", "0", "--nt", "-1", "--dimg", "4", "--n-qubits", "2"])
    joined = "; ".join(excinfo.value.errors)
    assert "m must be >= 1" in joined
    assert "nt must be >= 1" in joined


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_usage_errors_exit_2(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["dla", "--boundary", "diagonal"]) == EXIT_USAGE
    assert main(["bound"]) == EXIT_USAGE
    capsys.readouterr()


def test_version_and_help_exit_0(capsys):
    assert main(["--version"]) == EXIT_OK
    assert "dlabound" in capsys.readouterr().out
    assert main(["--help"]) == EXIT_OK
    capsys.readouterr()


def test_missing_required_option_exits_3(capsys):
    assert main(["bound", "eval", "--m", "10"]) == EXIT_DOMAIN
    payload = json.loads(capsys.readouterr().err)
    assert "missing required option --nt" in payload["error"]


def test_domain_error_emits_json_on_stderr(capsys):
    assert main(["bound", "budget", "--p", "0.8"]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    payload = json.loads(err)
    assert payload["type"] == "ParameterDomainError"
    assert "0.8" in payload["error"]


def test_budget_needs_exactly_one_of_p_and_eps(capsys):
    assert main(["bound", "budget"]) == EXIT_DOMAIN
    assert main(["bound", "budget", "--p", "0.1", "--eps", "0.05"]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert "exactly one of --p or --eps" in err


# ---------------------------------------------------------------------------
# bound budget / eval / curve
# ---------------------------------------------------------------------------


def test_budget_json_output_matches_library(capsys):
    assert main(["bound", "budget", "--p", "0.1", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["nt_budget"] == pytest.approx(23.35063701437765, abs=1e-12)
    assert payload["epsilon_max"] == pytest.approx(epsilon_max(0.1), abs=0)
    assert payload["epsilon_max_half"] == pytest.approx(payload["epsilon_max"] / 2.0, abs=0)
    assert "warning" in payload


def test_budget_from_eps_matches_p_form(capsys):
    eps = epsilon_max(0.1)
    assert main(["bound", "budget", "--eps", repr(eps), "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["nt_budget"] == pytest.approx(max_params_from_epsilon(eps), abs=0)
    assert payload["nt_budget"] == pytest.approx(23.35063701437765, abs=1e-9)


def test_budget_plain_output_is_key_equals_value(capsys):
    assert main(["bound", "budget", "--p", "0.1"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    keyed = dict(line.split(" = ", 1) for line in lines)
    assert float(keyed["nt_budget"]) == pytest.approx(23.35063701437765, abs=1e-12)
    assert "epsilon_max" in keyed and "warning" in keyed


def test_bound_eval_matches_library(capsys):
    argv = ["bound", "eval", "--m", "10", "--nt", "20", "--dimg", "9", "--n-qubits", "3", "--json"]
    assert main(argv) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    report = generalization_bound(
        BoundInputs(m=10, n_t=20, dim_g=9, n_eigen=8, o_norm=1.0, c=1.0, delta=0.05, radius=math.pi)
    )
    assert payload["gap_bound"] == pytest.approx(report.gap_bound, abs=0)
    assert payload["rademacher_bound"] == pytest.approx(report.rademacher_bound, abs=0)
    assert payload["dudley_term"] == pytest.approx(report.dudley_term, abs=0)
    assert payload["d"] == report.d
    assert payload["alpha"] == pytest.approx(report.alpha, abs=0)


def test_bound_eval_rejects_bad_delta(capsys):
    argv = ["bound", "eval", "--m", "10", "--nt", "20", "--dimg", "9", "--n-qubits", "3"]
    assert main(argv + ["--delta", "1.5"]) == EXIT_DOMAIN
    assert "delta" in capsys.readouterr().err


def test_curve_writes_grid_and_is_byte_stable(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    argv = ["bound", "curve", "--p-min", "0.2", "--p-max", "0.6", "--points", "5", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert f"curve written to {out}" in capsys.readouterr().out
    text = out.read_text(encoding="utf-8")
    lines = text.splitlines()
    prov = [ln for ln in lines if ln.startswith("# ")]
    assert any(ln.startswith("# config_hash=") for ln in prov)
    body = [ln for ln in lines if not ln.startswith("# ")]
    assert body[0] == "p,nt_budget"
    rows = [tuple(float(c) for c in ln.split(",")) for ln in body[1:]]
    assert len(rows) == 5
    assert rows[0][0] == pytest.approx(0.2, abs=0)
    assert rows[-1][0] == pytest.approx(0.6, abs=1e-15)
    for p, nt in rows:
        assert nt == pytest.approx(max_trainable_params(p), abs=0)
    first = out.read_bytes()
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    assert out.read_bytes() == first


def test_curve_rejects_inverted_or_out_of_range_grid(tmp_path, capsys):
    out = str(tmp_path / "c.csv")
    assert main(["bound", "curve", "--p-min", "0.5", "--p-max", "0.2", "--out", out]) == EXIT_DOMAIN
    assert main(["bound", "curve", "--p-min", "0.1", "--p-max", "0.7", "--out", out]) == EXIT_DOMAIN
    capsys.readouterr()


# ---------------------------------------------------------------------------
# dla
# ---------------------------------------------------------------------------


def test_dla_open_chain_reports_dim_and_reference(capsys):
    assert main(["dla", "--n", "3", "--boundary", "open", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim_g"] == 9
    assert payload["reference_formula"] == 9
    assert payload["truncated"] is False
    assert "note" not in payload


def test_dla_closed_chain_flags_reference_mismatch(capsys):
    assert main(["dla", "--n", "3", "--boundary", "closed", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim_g"] == 8
    assert payload["reference_formula"] == 3
    assert "computed value is authoritative" in payload["note"]


def test_dla_generator_file_input(tmp_path, capsys):
    gens = tmp_path / "gens.txt"
    gens.write_text("1.0 X\n\n1.0 Z\n", encoding="utf-8")
    assert main(["dla", "--generators", str(gens), "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim_g"] == 3
    assert "reference_formula" not in payload


def test_dla_basis_out_round_trips(tmp_path, capsys):
    basis_path = tmp_path / "basis.txt"
    argv = ["dla", "--n", "2", "--boundary", "open", "--basis-out", str(basis_path), "--json"]
    assert main(argv) == EXIT_OK
    out, err = capsys.readouterr()
    assert json.loads(out)["dim_g"] == 4
    assert f"basis written to {basis_path}" in err
    parsed = generator_set_from_text(basis_path.read_text(encoding="utf-8"))
    assert len(parsed.generators) == 4
    assert parsed.n_qubits == 2


def test_dla_input_errors(tmp_path, capsys):
    assert main(["dla", "--generators", str(tmp_path / "nope.txt")]) == EXIT_DOMAIN
    assert main(["dla", "--n", "3"]) == EXIT_DOMAIN  # boundary missing
    assert main(["dla"]) == EXIT_DOMAIN  # neither generators nor n/boundary
    err = capsys.readouterr().err
    assert "needs both --n and --boundary" in err


def test_dla_max_dim_truncates(capsys):
    assert main(["dla", "--n", "4", "--boundary", "open", "--max-dim", "5", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim_g"] == 5
    assert payload["truncated"] is True


# ---------------------------------------------------------------------------
# data gen / train
# ---------------------------------------------------------------------------


def test_data_gen_writes_loadable_deterministic_dataset(tmp_path, capsys):
    out = tmp_path / "ds.json"
    argv = ["data", "gen", "--n", "2", "--seed", "5", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert f"dataset written to {out}" in capsys.readouterr().out
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["provenance"]["master_seed"] == "5"
    ds = dataset_from_dict(payload)
    assert ds.n_qubits == 2 and ds.seed == 5
    assert ds.train_x.shape == (10, 2)
    assert ds.test_x.shape == (100, 2)
    first = out.read_bytes()
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    assert out.read_bytes() == first


def test_data_gen_custom_sizes(tmp_path, capsys):
    out = tmp_path / "ds.json"
    assert main(["data", "gen", "--n", "3", "--seed", "1", "--m-train", "4", "--m-test", "6", "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    ds = dataset_from_dict(json.loads(out.read_text(encoding="utf-8")))
    assert ds.train_x.shape == (4, 3) and ds.test_x.shape == (6, 3)


def test_outdir_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(ENV_OUTDIR, str(tmp_path))
    assert main(["data", "gen", "--n", "2", "--seed", "5"]) == EXIT_OK
    capsys.readouterr()
    assert (tmp_path / "dataset_n2_seed5.json").is_file()


def test_missing_out_and_env_is_domain_error(capsys, monkeypatch):
    monkeypatch.delenv(ENV_OUTDIR, raising=False)
    assert main(["data", "gen", "--n", "2", "--seed", "5"]) == EXIT_DOMAIN
    assert ENV_OUTDIR in capsys.readouterr().err


@pytest.fixture(scope="module")
def dataset_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "ds_n2_seed5.json"
    code = main(["data", "gen", "--n", "2", "--seed", "5", "--out", str(out)])
    assert code == EXIT_OK
    return out


def test_train_result_fields_are_consistent(tmp_path, dataset_file, capsys):
    out = tmp_path / "res.json"
    argv = [
        "train", "--n", "2", "--boundary", "open", "--algo", "sps",
        "--data", str(dataset_file), "--seed", "3", "--epochs", "2", "--out", str(out),
    ]
    assert main(argv) == EXIT_OK
    assert f"result written to {out}" in capsys.readouterr().out
    payload = json.loads(out.read_text(encoding="utf-8"))
    res, met = payload["result"], payload["metrics"]
    assert len(res["theta_star"]) == 20
    assert res["evaluations_used"] == 1 + 3 * 2
    assert len(res["train_rmse_trace"]) == 3
    assert met["dim_g"] == 4
    assert met["gap_rmse"] == pytest.approx(met["test_rmse"] - met["train_rmse"], abs=1e-15)
    assert met["gap_mse"] == pytest.approx(met["test_rmse"] ** 2 - met["train_rmse"] ** 2, abs=1e-12)
    h = tfim_hamiltonian(2, "open")
    assert met["cr"] == pytest.approx(compute_cr(res["theta_star"], h), abs=0)
    assert res["final_train_rmse"] == pytest.approx(met["train_rmse"], abs=1e-12)


def test_train_writes_json_to_stdout_without_out(dataset_file, capsys):
    argv = ["train", "--n", "2", "--boundary", "open", "--algo", "ran", "--data", str(dataset_file), "--epochs", "1"]
    assert main(argv) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["result"]["evaluations_used"] == 2


def test_train_rejects_dataset_qubit_mismatch(dataset_file, capsys):
    argv = ["train", "--n", "3", "--boundary", "open", "--algo", "sps", "--data", str(dataset_file)]
    assert main(argv) == EXIT_DOMAIN
    assert "dataset is for n=2" in capsys.readouterr().err


def test_train_missing_dataset_file(tmp_path, capsys):
    argv = ["train", "--n", "2", "--boundary", "open", "--algo", "sps", "--data", str(tmp_path / "no.json")]
    assert main(argv) == EXIT_DOMAIN
    assert "dataset file not found" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# sweep + report
# ---------------------------------------------------------------------------

_TINY_SWEEP = ["sweep", "--n", "2", "--datasets", "1", "--epochs", "1", "--seed", "5", "--quiet"]


@pytest.fixture(scope="module")
def tiny_sweep_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    code = main(_TINY_SWEEP + ["--out", str(out)])
    assert code == EXIT_OK
    return out


def test_sweep_writes_all_four_files(tiny_sweep_dir):
    for name in ("records.csv", "summary.json", "thetas.json", "golden_record.json"):
        assert (tiny_sweep_dir / name).is_file()


def test_sweep_records_parse_back(tiny_sweep_dir):
    records = records_from_csv_text((tiny_sweep_dir / "records.csv").read_text(encoding="utf-8"))
    assert len(records) == 4  # 1 n x 2 boundaries x 2 algos x 1 dataset
    assert {(r.boundary, r.algorithm) for r in records} == {
        ("open", "sps"), ("open", "ran"), ("closed", "sps"), ("closed", "ran"),
    }
    assert all(r.n == 2 for r in records)
    header = next(
        ln for ln in (tiny_sweep_dir / "records.csv").read_text(encoding="utf-8").splitlines()
        if not ln.startswith("#")
    )
    assert header.split(",") == list(RECORD_COLUMNS)


def test_sweep_summary_echoes_config(tiny_sweep_dir):
    summary = json.loads((tiny_sweep_dir / "summary.json").read_text(encoding="utf-8"))
    assert summary["counts"]["total"] == 4
    assert summary["config"]["master_seed"] == 5
    assert summary["config"]["n_list"] == [2]


def test_sweep_rerun_is_byte_identical(tiny_sweep_dir, capsys):
    before = {
        name: (tiny_sweep_dir / name).read_bytes()
        for name in ("records.csv", "summary.json", "thetas.json", "golden_record.json")
    }
    assert main(_TINY_SWEEP + ["--out", str(tiny_sweep_dir)]) == EXIT_OK
    capsys.readouterr()
    for name, blob in before.items():
        assert (tiny_sweep_dir / name).read_bytes() == blob, name


def test_sweep_progress_lines_unless_quiet(tmp_path, capsys):
    argv = ["sweep", "--n", "2", "--datasets", "1", "--epochs", "0", "--seed", "5", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    out, err = capsys.readouterr()
    assert "n=2 open/sps seed=" in err
    assert "gap_rmse=" in err
    assert "records" in out  # file labels listed on stdout


def test_sweep_welch_block_present(tmp_path, capsys):
    argv = [
        "sweep", "--n", "2", "--datasets", "2", "--epochs", "0",
        "--seed", "5", "--quiet", "--welch", "--out", str(tmp_path),
    ]
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    welch = summary["t_tests"]["pooled_welch"]
    assert set(welch) == {"train_rmse", "test_rmse", "gap_rmse"}
    assert "closed/ran vs open/sps" in welch["gap_rmse"]


def test_report_renders_figures_and_is_byte_stable(tiny_sweep_dir, tmp_path, capsys):
    argv = ["report", "--records", str(tiny_sweep_dir), "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    listed = [Path(line) for line in capsys.readouterr().out.splitlines() if line.strip()]
    expected = {
        f"fig_{stem}.{ext}"
        for stem in ("nt_budget", "gap_vs_n", "rmse_vs_n", "cr_vs_n", "pmax_nmax")
        for ext in ("csv", "svg")
    }
    assert {p.name for p in listed} == expected
    for p in listed:
        assert p.is_file() and p.parent == tmp_path
    svg_text = (tmp_path / "fig_gap_vs_n.svg").read_text(encoding="utf-8")
    assert "<dc:date>" not in svg_text  # reproducible: no timestamp metadata
    before = {p.name: p.read_bytes() for p in listed}
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    for name, blob in before.items():
        assert (tmp_path / name).read_bytes() == blob, name


def test_report_defaults_to_records_dir(tiny_sweep_dir, capsys):
    assert main(["report", "--records", str(tiny_sweep_dir)]) == EXIT_OK
    capsys.readouterr()
    assert (tiny_sweep_dir / "fig_gap_vs_n.svg").is_file()


def test_report_missing_records_csv(tmp_path, capsys):
    assert main(["report", "--records", str(tmp_path)]) == EXIT_DOMAIN
    assert "records.csv not found" in capsys.readouterr().err


def test_report_with_no_ok_records_says_so(tiny_sweep_dir, tmp_path, capsys):
    text = (tiny_sweep_dir / "records.csv").read_text(encoding="utf-8")
    broken = "\n".join(
        ln[: -len("ok")] + "diverged" if ln.endswith(",ok") else ln for ln in text.splitlines()
    ) + "\n"
    target = tmp_path / "records.csv"
    target.write_text(broken, encoding="utf-8")
    assert main(["report", "--records", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "no usable records" in out
    assert not (tmp_path / "fig_gap_vs_n.svg").exists()
