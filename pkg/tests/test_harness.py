"""Config parsing, report writing, reservoir builders, and the CLI."""

import json
import os

import numpy as np
import pytest

import landauer
from landauer.cli import main
from landauer.errors import ConfigError
from landauer.harness import (
    ReportWriter,
    RunReport,
    build_reservoir,
    build_state,
    default_config,
    detuned_couplings,
    detuned_fields,
    list_scenarios,
    min_gap,
    parse_config,
    run_scenario,
    single_spin_reservoir,
    spin_chain_reservoir,
)

ALL_SCENARIOS = [
    "adiabatic-sweep",
    "example1",
    "example2-sweep",
    "instantaneous-quench",
    "property-fuzz",
    "remark2-bounds",
    "remark3-epsilon",
    "target-solver",
    "thermo-integration",
]


# ---------------------------------------------------------------------------
# configuration


def test_catalogue_and_defaults_agree():
    assert sorted(list_scenarios()) == ALL_SCENARIOS
    for name in ALL_SCENARIOS:
        cfg = parse_config({"scenario": name})
        assert cfg.scenario == name
        assert cfg.raw == parse_config(default_config(name)).raw


def test_unknown_scenario_and_missing_name_are_config_errors():
    with pytest.raises(ConfigError):
        parse_config({"scenario": "no-such-thing"})
    with pytest.raises(ConfigError):
        parse_config({"seed": 1})
    with pytest.raises(ConfigError):
        default_config("bogus")


def test_merge_rejects_unknown_keys_at_any_depth():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config({"scenario": "example1", "bogus": 1})
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config({"scenario": "example1", "system": {"bogus": 1}})


def test_merge_rejects_type_changes():
    with pytest.raises(ConfigError, match="integer"):
        parse_config({"scenario": "example1", "seed": "soon"})
    with pytest.raises(ConfigError, match="number"):
        parse_config({"scenario": "example2-sweep",
                      "tolerances": {"final_gap": "tight"}})
    with pytest.raises(ConfigError, match="expected a number"):
        parse_config({"scenario": "remark2-bounds",
                      "instances": {"dims_s": [2, "three"]}})


def test_merge_accepts_numbers_where_floats_default():
    cfg = parse_config({"scenario": "example1", "tolerances": {"balance": 1}})
    assert cfg.raw["tolerances"]["balance"] == 1.0


def test_auto_placeholders_accept_explicit_lists():
    base = {"scenario": "instantaneous-quench"}
    assert parse_config(base).raw["reservoir"]["j"] == "auto"
    explicit = parse_config({**base, "reservoir": {"j": [1.0, 0.9, 1.1]}})
    assert explicit.raw["reservoir"]["j"] == [1.0, 0.9, 1.1]
    with pytest.raises(ConfigError, match="auto"):
        parse_config({**base, "reservoir": {"j": "bogus"}})


def test_tolerance_lookup():
    cfg = parse_config({"scenario": "example1"})
    assert cfg.tolerance("balance") == 1e-8
    with pytest.raises(ConfigError, match="no tolerance"):
        cfg.tolerance("nope")


def test_content_hash_tracks_the_merged_config():
    a = parse_config({"scenario": "example1"})
    b = parse_config({"scenario": "example1"})
    c = parse_config({"scenario": "example1", "seed": 7})
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != c.content_hash()


# ---------------------------------------------------------------------------
# state and reservoir builders


def test_build_state_kinds():
    rng = np.random.default_rng(100)
    np.testing.assert_allclose(
        build_state({"kind": "maximally_mixed"}, 3, rng), np.eye(3) / 3)
    np.testing.assert_allclose(
        build_state({"kind": "diag", "probs": [0.75, 0.25]}, 2, rng),
        np.diag([0.75, 0.25]))
    np.testing.assert_allclose(
        build_state({"kind": "pure", "index": 1}, 2, rng), np.diag([0.0, 1.0]))
    mixed = build_state({"kind": "haar_mixed", "floor": 0.1}, 3, rng)
    assert np.linalg.eigvalsh(mixed).min() >= 0.1 / 3 - 1e-12


def test_build_state_rejects_bad_specs():
    rng = np.random.default_rng(101)
    with pytest.raises(ConfigError):
        build_state({"kind": "diag", "probs": [0.75, 0.25]}, 3, rng)
    with pytest.raises(ConfigError):
        build_state({"kind": "diag", "probs": [1.5, -0.5]}, 2, rng)
    with pytest.raises(ConfigError):
        build_state({"kind": "pure", "index": 5}, 2, rng)
    with pytest.raises(ConfigError):
        build_state({"kind": "cat"}, 2, rng)


def test_build_reservoir_models():
    chain = build_reservoir({"model": "spin-chain", "n_qubits": 2, "j": "auto",
                             "h": "auto", "base": 1.0, "detuning": 0.35, "beta": 1.0})
    assert chain.dim == 4 and chain.beta == 1.0
    level = build_reservoir({"model": "single-level", "splitting": 1.5, "beta": 2.0})
    np.testing.assert_allclose(level.h_r, np.diag([0.0, 1.5]))
    with pytest.raises(ConfigError):
        build_reservoir({"model": "harmonic", "beta": 1.0})


def test_detuned_chain_spectrum_is_nondegenerate():
    n = 6
    r = spin_chain_reservoir(n, detuned_couplings(n - 1), detuned_fields(n), 1.0)
    assert r.dim == 64
    assert min_gap(r) > 1e-6
    # uniform couplings, by contrast, produce exact degeneracies
    uniform = spin_chain_reservoir(3, 1.0, 0.0, 1.0)
    assert min_gap(uniform) < 1e-12


def test_reservoir_builders_validate_lengths():
    with pytest.raises(ValueError):
        spin_chain_reservoir(3, [1.0], [1.0, 1.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        spin_chain_reservoir(0, [], [], 1.0)
    with pytest.raises(ValueError):
        single_spin_reservoir(0.0, 1.0)


# ---------------------------------------------------------------------------
# report writing


def _fresh_report() -> RunReport:
    return RunReport(scenario="example1", version="0.0.0", seed=1, config_hash="x")


def test_report_checks_and_duplicate_names():
    report = _fresh_report()
    assert report.check_le("small", 1e-12, 1e-10).passed
    assert not report.check_ge("large", 0.5, 0.9).passed
    assert report.check_true("flag", True).comparator == "is"
    assert not report.passed
    with pytest.raises(ValueError, match="duplicate"):
        report.check_le("small", 0.0, 1.0)


def test_write_table_formats_and_hashes(tmp_path):
    writer = ReportWriter(str(tmp_path), _fresh_report())
    writer.write_table("t", ["idx", "value"], [[0, 0.1], [1, 0.25]])
    blob = (tmp_path / "t.csv").read_bytes()
    assert blob.decode().splitlines()[0] == "idx,value"
    assert "0.25" in blob.decode()
    assert writer.report.tables["t"]["rows"] == 2
    assert len(writer.report.tables["t"]["sha256"]) == 64
    path = writer.finish()
    data = json.loads(open(path).read())
    assert data["units"] == "nats" and data["tables"]["t"]["rows"] == 2


def test_write_table_validations(tmp_path):
    writer = ReportWriter(str(tmp_path), _fresh_report())
    with pytest.raises(ValueError, match="entropy columns"):
        writer.write_table("t", ["idx"], [[0]], entropy_cols={"sigma"})
    with pytest.raises(ValueError, match="row width"):
        writer.write_table("t", ["idx", "value"], [[0]])


def test_bits_mode_scales_only_entropy_columns(tmp_path):
    writer = ReportWriter(str(tmp_path), _fresh_report(), bits=True)
    writer.write_table("t", ["sigma", "heat"], [[np.log(2.0), np.log(2.0)]],
                       entropy_cols={"sigma"})
    row = (tmp_path / "t.csv").read_text().splitlines()[1].split(",")
    assert float(row[0]) == pytest.approx(1.0, abs=1e-15)      # nats -> bits
    assert float(row[1]) == pytest.approx(np.log(2.0), abs=1e-15)
    assert writer.report.units == "bits"


# ---------------------------------------------------------------------------
# scenario engine + CLI (in-process)


def _write_config(tmp_path, name, **overrides):
    payload = {"scenario": name, "output": str(tmp_path / "out"), **overrides}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_run_scenario_returns_a_full_report(tmp_path):
    cfg = parse_config({"scenario": "example1", "output": str(tmp_path / "out"),
                        "protocol": {"random_pairs": 10}})
    report = run_scenario(cfg)
    assert report.passed
    assert report.version == landauer.__version__
    assert report.config_hash == cfg.content_hash()
    assert {c.name for c in report.checks} >= {
        "sigma_matches_relative_entropy", "reservoir_returns_initial_state"}
    assert (tmp_path / "out" / "flip.csv").exists()
    assert (tmp_path / "out" / "report.json").exists()


def test_cli_list_names_every_scenario(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ALL_SCENARIOS:
        assert name in out


def test_cli_check_valid_config(tmp_path, capsys):
    path = _write_config(tmp_path, "example1")
    assert main(["check", path]) == 0
    captured = capsys.readouterr()
    merged = json.loads(captured.out)
    assert merged["scenario"] == "example1"
    assert merged["seed"] == 2026
    assert "ok: example1" in captured.err


def test_cli_check_rejects_bad_configs(tmp_path, capsys):
    bad_key = tmp_path / "bad.json"
    bad_key.write_text(json.dumps({"scenario": "example1", "bogus": 1}))
    assert main(["check", str(bad_key)]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
    not_json = tmp_path / "nj.json"
    not_json.write_text("{nope")
    assert main(["check", str(not_json)]) == 2


def test_cli_run_passes_and_writes_outputs(tmp_path, capsys):
    path = _write_config(tmp_path, "example1", protocol={"random_pairs": 10})
    assert main(["run", path]) == 0
    out = capsys.readouterr().out
    assert "[PASS] sigma_matches_relative_entropy" in out
    assert out.strip().splitlines()[-1].startswith("PASS: example1")
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["passed"] is True
    assert report["tables"]["flip"]["rows"] >= 11


def test_cli_run_exit_one_on_failed_check(tmp_path, capsys):
    path = _write_config(tmp_path, "example1",
                         protocol={"random_pairs": 5},
                         tolerances={"sigma_match": 1e-30})
    assert main(["run", path]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] sigma_matches_relative_entropy" in out
    assert "FAIL: example1" in out


def test_cli_run_seed_and_out_overrides_are_hashed(tmp_path, capsys):
    path = _write_config(tmp_path, "example1", protocol={"random_pairs": 5})
    alt = str(tmp_path / "alt")
    assert main(["run", path, "--out", alt, "--seed", "7"]) == 0
    capsys.readouterr()
    report = json.loads(open(os.path.join(alt, "report.json")).read())
    assert report["seed"] == 7
    want = parse_config({"scenario": "example1", "output": alt, "seed": 7,
                         "protocol": {"random_pairs": 5}}).content_hash()
    assert report["config_hash"] == want


def test_cli_run_is_deterministic(tmp_path, capsys):
    path = _write_config(tmp_path, "example1", protocol={"random_pairs": 10})
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["run", path, "--out", a]) == 0
    assert main(["run", path, "--out", b]) == 0
    capsys.readouterr()
    assert open(os.path.join(a, "flip.csv"), "rb").read() == \
        open(os.path.join(b, "flip.csv"), "rb").read()
    ra = json.loads(open(os.path.join(a, "report.json")).read())
    rb = json.loads(open(os.path.join(b, "report.json")).read())
    assert ra["tables"] == rb["tables"] and ra["checks"] == rb["checks"]


def test_cli_run_bits_flag_rescales_tables(tmp_path, capsys):
    path = _write_config(tmp_path, "example1", protocol={"random_pairs": 5})
    nat_dir, bit_dir = str(tmp_path / "nats"), str(tmp_path / "bits")
    assert main(["run", path, "--out", nat_dir]) == 0
    assert main(["run", path, "--out", bit_dir, "--bits"]) == 0
    capsys.readouterr()
    report = json.loads(open(os.path.join(bit_dir, "report.json")).read())
    assert report["units"] == "bits"
    nat_row = open(os.path.join(nat_dir, "flip.csv")).read().splitlines()[1].split(",")
    bit_row = open(os.path.join(bit_dir, "flip.csv")).read().splitlines()[1].split(",")
    # column 1 is an entropy column; the bits value is the nats value / ln 2
    assert float(bit_row[1]) == pytest.approx(float(nat_row[1]) / np.log(2.0), rel=1e-12)


def test_cli_run_renders_figures(tmp_path, capsys):
    path = _write_config(tmp_path, "example2-sweep")
    assert main(["run", path]) == 0
    capsys.readouterr()
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert "staged_convergence.png" in report["figures"]
    assert (tmp_path / "out" / "staged_convergence.png").stat().st_size > 0


def test_cli_version_and_bad_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert landauer.__version__ in capsys.readouterr().out
    with pytest.raises(SystemExit):
        main([])  # a subcommand is required
