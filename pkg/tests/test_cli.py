"""Run configs, planning, verification, writers and the batch CLI end to end."""

import json
from pathlib import Path

import numpy as np
import pytest

from runner import main
from src.errors import ConfigError
from src.models.ida import IdaConfig
from src.models.simulation import ModelKind
from src.models.statistics import BurstinessReport
from src.pipeline import AnalysisPlanner, RunManager, RunVerifier
from src.utils import writers
from src.utils.config_loader import ConfigLoader, deep_merge, unflatten

TESTS_DIR = Path(__file__).parent


def write_values(path: Path, values) -> str:
    path.write_text("".join(f"{value}\n" for value in values), encoding="utf-8")
    return str(path)


def periodic_file(path: Path, periods: int = 20) -> str:
    return write_values(path, ([1] * 16 + [0] * 4) * periods)


def read_manifest(out_dir: Path) -> dict:
    return json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))


# Config loading
def test_key_value_config(model_a_env):
    config = ConfigLoader.resolve_sim_config(config_file=model_a_env)
    assert config.model == ModelKind.MODEL_A
    assert config.users == 20
    assert config.bins_log2 == 12
    assert config.seed == 3
    assert config.load.p == pytest.approx(1.4)
    assert config.off.mean == pytest.approx(8.0)


def test_yaml_config_with_level_preset(levels_yaml):
    config = ConfigLoader.resolve_sim_config(config_file=levels_yaml)
    assert config.model == ModelKind.COMBINED_RTT_LEVELS
    assert len(config.levels) == 3
    assert config.levels[0].on_mean == 2 ** 17
    assert config.slow_start_max == 8
    assert config.rtt_level_count == 1


def test_precedence_of_preset_file_and_flags(model_a_env):
    config = ConfigLoader.resolve_sim_config(
        preset="ARR",
        config_file=model_a_env,
        overrides={"users": 5, "seed": None},
        base={"seed": 99, "bin_width": 0.01},
    )
    assert config.model == ModelKind.MODEL_B
    assert config.users == 5
    assert config.seed == 3
    assert config.bin_width == pytest.approx(0.01)
    assert config.load.p == pytest.approx(1.4)


def test_model_alias_and_level_label_flags():
    config = ConfigLoader.resolve_sim_config(overrides={"model": "levels", "levels": "9/5"})
    assert config.model == ModelKind.MODEL_D
    assert [level.on_mean for level in config.levels] == [2 ** 9, 2 ** 5]


def test_ida_section_and_overrides(levels_yaml):
    config = ConfigLoader.resolve_ida_config(levels_yaml, {"gamma": 0.2, "c1": None})
    assert config.gamma == pytest.approx(0.2)
    assert config.c1 == pytest.approx(3.0)
    assert config.base == pytest.approx(2.0)


def test_invalid_config_names_offending_keys():
    with pytest.raises(ConfigError) as info:
        ConfigLoader.resolve_sim_config(config_file=str(TESTS_DIR / "invalid.yaml"))
    assert "users" in info.value.keys
    assert "load.p" in info.value.keys
    assert info.value.exit_code == 9


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigLoader.load_file(str(tmp_path / "absent.yaml"))


def test_validate_config_syntax(levels_yaml):
    valid = ConfigLoader.validate_config_syntax(levels_yaml)
    assert valid["valid"]
    assert valid["model"] == "combined_rtt_levels"
    assert valid["bins"] == 2 ** 14

    invalid = ConfigLoader.validate_config_syntax(str(TESTS_DIR / "invalid.yaml"))
    assert not invalid["valid"]
    assert "users" in invalid["keys"]


def test_example_configs_resolve_identically(tmp_path):
    yaml_path = tmp_path / "example.yaml"
    conf_path = tmp_path / "example.conf"
    assert ConfigLoader.create_example_config(str(yaml_path))
    assert ConfigLoader.create_example_config(str(conf_path))
    assert "load.p=1.5" in conf_path.read_text(encoding="utf-8")
    assert ConfigLoader.resolve_sim_config(config_file=str(yaml_path)) == ConfigLoader.resolve_sim_config(config_file=str(conf_path))
    assert ConfigLoader.resolve_ida_config(str(conf_path)) == ConfigLoader.resolve_ida_config(str(yaml_path))


def test_unflatten_and_deep_merge():
    assert unflatten({"load.p": 1.5, "users": 3}) == {"load": {"p": 1.5}, "users": 3}
    with pytest.raises(ConfigError):
        unflatten({"load": 1, "load.p": 1.5})
    merged = deep_merge({"load": {"p": 1.5, "scale": 2.0}, "users": 1}, {"load": {"p": 1.2}})
    assert merged == {"load": {"p": 1.2, "scale": 2.0}, "users": 1}


# Planner, verifier, writers
def test_plan_orders_steps_and_adds_dependencies():
    plan = AnalysisPlanner().create_plan(["tool2", "energy", "tool1", "tool1"], 14, {})
    assert plan["status"] == "success"
    assert [step["name"] for step in plan["steps"]] == ["averaging", "energy", "tool1", "tool2"]
    assert plan["implied"] == ["averaging"]
    assert plan["steps"][0]["implied"]
    assert plan["warnings"] == []


def test_plan_rejects_unknown_analyses():
    plan = AnalysisPlanner().create_plan(["averaging", "hurst"], 14, {})
    assert plan["status"] == "error"
    assert "hurst" in plan["error"]


def test_plan_warnings():
    plan = AnalysisPlanner().create_plan(
        ["kolmogorov", "tool3", "tool4", "autocorr"], 10, {"k": 3, "s": 6, "window": 1024, "max_lag": 1024}
    )
    warnings = plan["warnings"]
    assert any(warning.startswith("kolmogorov") for warning in warnings)
    assert any(warning.startswith("tool3") for warning in warnings)
    assert sum(warning.startswith("tool4") for warning in warnings) == 2
    assert any(warning.startswith("autocorr") for warning in warnings)


def test_verifier_exit_codes():
    verifier = RunVerifier()
    ok = verifier.verify_results([{"status": "success"}, {"status": "success"}])
    assert ok["overall_status"] == "success"
    assert ok["exit_code"] == 0

    mixed = verifier.verify_results([
        {"status": "success"},
        {"status": "error", "step": "tool3", "error": "k", "exit_code": 3},
        {"status": "error", "step": "tool4", "error": "s", "exit_code": 8},
    ])
    assert mixed["overall_status"] == "partial"
    assert mixed["exit_code"] == 3
    assert mixed["failed_steps"] == 2

    skipped = verifier.verify_results([{"status": "skipped", "step": "tool1"}])
    assert skipped["overall_status"] == "error"
    assert skipped["exit_code"] == 1


def test_writers(tmp_path):
    assert writers.fmt(0.1) == "0.10000000000000001"
    assert writers.fmt(None) == ""
    assert writers.fmt(np.nan) == ""
    assert writers.fmt(True) == "1"
    assert writers.fmt(np.int64(7)) == "7"
    assert writers.fmt("trace") == "trace"
    assert writers.fmt(np.str_("b")) == "b"

    pgm = writers.write_pgm(str(tmp_path / "im.pgm"), np.array([[0.0, 1.0, 0.5]]))
    assert Path(pgm).read_text(encoding="ascii") == "P2\n3 1\n255\n255 0 128\n"

    path = writers.write_json(str(tmp_path / "doc.json"), {"b": 1, "a": None})
    assert Path(path).read_text(encoding="utf-8").index('"a"') < Path(path).read_text(encoding="utf-8").index('"b"')


def test_burstiness_csv_keeps_trace_name(tmp_path):
    report = BurstinessReport(k=2, D=0.25, O=-0.5)
    path = writers.write_burstiness_csv(str(tmp_path / "burstiness.csv"), "m_c", report)
    assert Path(path).read_text(encoding="utf-8") == "trace,D,O\nm_c,0.25,-0.5\n"

    missing = BurstinessReport(k=2, D=0.25)
    path = writers.write_burstiness_csv(str(tmp_path / "partial.csv"), "m_c", missing)
    assert Path(path).read_text(encoding="utf-8") == "trace,D,O\nm_c,0.25,\n"


# Manager
def test_failed_dependency_skips_dependents(tmp_path, white_noise):
    trace = write_values(tmp_path / "trace.txt", white_noise)
    manager = RunManager(str(tmp_path / "out"))
    result = manager.analyze(trace, ["tool1"], {"p": -1.0})
    steps = {step["step"]: step["status"] for step in result["steps"]}
    assert steps == {"averaging": "error", "tool1": "skipped"}
    assert result["summary"]["exit_code"] == 3
    assert result["status"] == "error"


def test_missing_trace_reports_invalid_argument(tmp_path):
    manager = RunManager(str(tmp_path / "out"))
    result = manager.analyze(str(tmp_path / "absent.txt"), ["averaging"], {})
    assert result["summary"]["exit_code"] == 3
    assert result["status"] == "error"


def test_missing_session_reports_invalid_argument(tmp_path):
    manager = RunManager(str(tmp_path / "out"))
    result = manager.ida([str(tmp_path / "absent.txt")], IdaConfig())
    assert result["summary"]["exit_code"] == 3


# CLI
def test_simulate_writes_trace_and_manifest(tmp_path):
    out_dir = tmp_path / "sim"
    code = main(["simulate", "--preset", "0-1", "--users", "4", "--bins-log2", "10", "--seed", "5",
                 "--out-dir", str(out_dir)])
    assert code == 0
    lines = (out_dir / "trace.txt").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1024

    manifest = read_manifest(out_dir)
    assert manifest["command"] == "simulate"
    assert manifest["seed"] == 5
    assert manifest["outputs"] == ["trace.txt"]
    assert manifest["config"]["model"] == "model_a"
    assert manifest["status"] == "success"
    assert manifest["tool_version"] == "1.0.0"


def test_simulate_is_reproducible(tmp_path):
    args = ["simulate", "--config-file", str(TESTS_DIR / "model_a.conf"), "--bins-log2", "11"]
    assert main(args + ["--out-dir", str(tmp_path / "first")]) == 0
    assert main(args + ["--out-dir", str(tmp_path / "second")]) == 0
    for name in ("trace.txt", "manifest.json"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_simulate_without_rtt(tmp_path):
    out_dir = tmp_path / "sim"
    assert main(["simulate", "--preset", "8", "--bins-log2", "10", "--no-rtt", "--out-dir", str(out_dir)]) == 0
    assert read_manifest(out_dir)["config"]["rtt"] is None


def test_analyze_adds_implied_averaging(tmp_path, white_noise):
    trace = write_values(tmp_path / "trace.txt", white_noise)
    out_dir = tmp_path / "out"
    assert main(["analyze", trace, "--analyses", "tool1", "--out-dir", str(out_dir)]) == 0

    manifest = read_manifest(out_dir)
    assert manifest["outputs"] == ["averaging.csv", "tool1.csv", "tool1.json"]
    assert manifest["config"]["implied"] == ["averaging"]
    assert list(manifest["input_digests"]) == ["trace.txt"]
    header = (out_dir / "averaging.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "j,value,log2_value"


def test_analyze_missing_input(tmp_path):
    assert main(["analyze", str(tmp_path / "absent.txt"), "--out-dir", str(tmp_path / "out")]) == 3


def test_analyze_strict_scale_limits(tmp_path, white_noise):
    trace = write_values(tmp_path / "trace.txt", white_noise)
    assert main(["analyze", trace, "--analyses", "tool3", "--out-dir", str(tmp_path / "strict")]) == 3
    assert main(["analyze", trace, "--analyses", "tool3", "--no-strict", "--out-dir", str(tmp_path / "relaxed")]) == 0
    assert (tmp_path / "relaxed" / "burstiness.csv").read_text(encoding="utf-8").startswith("trace,D,O\n")


def test_analyze_kolmogorov_summary(tmp_path, rng):
    trace = write_values(tmp_path / "trace.txt", rng.normal(10.0, 1.0, 2 ** 12))
    out_dir = tmp_path / "out"
    assert main(["analyze", trace, "--analyses", "kolmogorov", "--window", "256", "--out-dir", str(out_dir)]) == 0
    summary = json.loads((out_dir / "kolmogorov.json").read_text(encoding="utf-8"))
    assert summary["windows"] == 16
    assert summary["missing"] == 0
    assert summary["regime"] in ("gaussian", "borderline", "intermediate", "far")


def test_ida_on_one_session(tmp_path):
    session = periodic_file(tmp_path / "session.txt")
    out_dir = tmp_path / "out"
    assert main(["ida", session, "--out-dir", str(out_dir)]) == 0
    assert (out_dir / "ida.pgm").read_text(encoding="ascii").startswith("P2\n11 9\n255\n")
    assert read_manifest(out_dir)["outputs"] == ["ida.csv", "ida.json", "ida.pgm"]


def test_ida_degenerate_session(tmp_path):
    flat = write_values(tmp_path / "flat.txt", [1] * 64)
    assert main(["ida", flat, "--out-dir", str(tmp_path / "out")]) == 7


def test_ida_aggregate_skips_degenerate_sessions(tmp_path):
    sessions = tmp_path / "sessions"
    sessions.mkdir()
    periodic_file(sessions / "a.txt")
    write_values(sessions / "b.txt", [1] * 64)
    out_dir = tmp_path / "out"
    assert main(["ida", str(sessions), "--aggregate", "--out-dir", str(out_dir)]) == 0
    config = read_manifest(out_dir)["config"]
    assert config["sessions"] == ["a", "b"]
    assert [item["session"] for item in config["skipped"]] == ["b"]


def test_invalid_config_exit_code(tmp_path):
    args = ["simulate", "--config-file", str(TESTS_DIR / "invalid.yaml"), "--out-dir", str(tmp_path)]
    assert main(args) == 9


def test_special_commands(tmp_path, capsys):
    example = tmp_path / "example.yaml"
    assert main(["--create-example", str(example)]) == 0
    assert main(["--validate", str(example)]) == 0
    assert main(["--validate", str(TESTS_DIR / "invalid.yaml")]) == 9
    assert main([]) == 2
    assert "Config invalid" in capsys.readouterr().out
