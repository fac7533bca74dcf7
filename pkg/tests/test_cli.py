import json

import pytest
from click.testing import CliRunner

from sedmap.cli import main
from sedmap.fixtures import chain_map
from sedmap.formats import save_map


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.json"
    path.write_bytes(save_map(chain_map()))
    return str(path)


@pytest.fixture
def bad_map_file(tmp_path):
    doc = json.loads(save_map(chain_map()))
    doc["edges"][0]["weight"] = 1.5
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def scenario_file(tmp_path, runner):
    path = tmp_path / "scen.json"
    result = runner.invoke(main, ["fixture", "scenarios", "--out", str(path)])
    assert result.exit_code == 0
    return str(path)


def test_validate_ok(runner, chain_file):
    result = runner.invoke(main, ["validate", chain_file])
    assert result.exit_code == 0
    assert "valid" in result.output


def test_validate_invalid_map_exits_1(runner, bad_map_file):
    result = runner.invoke(main, ["validate", bad_map_file])
    assert result.exit_code == 1
    assert "weight-range" in result.output


def test_usage_error_exits_2(runner, chain_file):
    result = runner.invoke(main, ["simulate", chain_file, "--horizon", "notanumber"])
    assert result.exit_code == 2


def test_simulate_tabular(runner, chain_file):
    result = runner.invoke(
        main, ["simulate", chain_file, "--impulse", "p=1", "--horizon", "2"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "t,p,q"
    assert lines[1:] == ["0,1,0", "1,1,0.5", "2,1,0.5"]


def test_simulate_json_document(runner, chain_file):
    result = runner.invoke(
        main,
        ["simulate", chain_file, "--impulse", "p=1", "--horizon", "2", "--format", "json"],
    )
    doc = json.loads(result.output)
    assert doc["kind"] == "trajectory"
    assert doc["y"][2] == [1.0, 0.5]


def test_simulate_bad_impulse_spec_is_usage_error(runner, chain_file):
    result = runner.invoke(main, ["simulate", chain_file, "--impulse", "p", "--horizon", "2"])
    assert result.exit_code == 2


def test_simulate_unknown_factor_fails(runner, chain_file):
    result = runner.invoke(
        main, ["simulate", chain_file, "--impulse", "zz=1", "--horizon", "2"]
    )
    assert result.exit_code == 1
    assert "unknown factor" in result.stderr


def test_analyze_table(runner, chain_file):
    result = runner.invoke(main, ["analyze", chain_file])
    assert result.exit_code == 0
    assert "stability: stable" in result.output


def test_analyze_json(runner, chain_file):
    result = runner.invoke(main, ["analyze", chain_file, "--format", "json"])
    doc = json.loads(result.output)
    assert doc["stability"]["classification"] == "stable"
    assert doc["closure"]["v_plus"][0][1] == 0.5


def test_stabilize_self_loop(runner, tmp_path):
    from sedmap.mapcore import Factor, WeightedEdge, build_map

    path = tmp_path / "loop.json"
    path.write_bytes(save_map(build_map([Factor("a")], [WeightedEdge("a", "a", 1.0)])))
    result = runner.invoke(main, ["stabilize", str(path), "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["succeeded"] is True
    assert doc["changes"] == [
        {"source": "a", "target": "a", "old_weight": 1.0, "new_weight": 0.5}
    ]


def test_stabilize_lock_syntax_error(runner, chain_file):
    result = runner.invoke(main, ["stabilize", chain_file, "--lock", "nonsense"])
    assert result.exit_code == 2


def test_scenario_run(runner, chain_file, scenario_file):
    result = runner.invoke(main, ["scenario", "run", chain_file, scenario_file])
    assert result.exit_code == 0
    assert "push" in result.output and "0.5" in result.output


def test_scenario_compare(runner, chain_file, scenario_file):
    result = runner.invoke(
        main, ["scenario", "compare", chain_file, scenario_file, "--format", "json"]
    )
    doc = json.loads(result.output)
    assert doc["ranking"][0]["name"] == "push"
    assert doc["ranking"][0]["target_delta"] == 0.5


def test_scenario_invert(runner, chain_file, scenario_file):
    result = runner.invoke(
        main, ["scenario", "invert", chain_file, scenario_file, "--format", "json"]
    )
    doc = json.loads(result.output)
    assert doc["impulse"] == {"p": 2.0}
    assert doc["achieved_delta"] == 1.0


def test_template(runner, tmp_path):
    registry_path = tmp_path / "registry.json"
    result = runner.invoke(main, ["fixture", "registry", "--out", str(registry_path)])
    assert result.exit_code == 0
    result = runner.invoke(
        main,
        [
            "template", str(registry_path),
            "--climate", "temperate",
            "--population", "25000",
            "--specialization", "agriculture",
        ],
    )
    assert result.exit_code == 0
    assert "temperate / medium / agriculture" in result.output
    assert "agricultural_output" in result.output


def test_template_unknown_specialization_exits_1(runner, tmp_path):
    registry_path = tmp_path / "registry.json"
    runner.invoke(main, ["fixture", "registry", "--out", str(registry_path)])
    result = runner.invoke(
        main,
        [
            "template", str(registry_path),
            "--climate", "temperate",
            "--population", "25000",
            "--specialization", "tourism",
        ],
    )
    assert result.exit_code == 1


def test_fixture_outputs_parse(runner):
    for name in ("chain", "standard", "registry", "scenarios"):
        result = runner.invoke(main, ["fixture", name])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["format"] == "fcm/1"


def test_out_writes_file(runner, chain_file, tmp_path):
    out = tmp_path / "traj.csv"
    result = runner.invoke(
        main,
        ["simulate", chain_file, "--impulse", "p=1", "--horizon", "2", "--out", str(out)],
    )
    assert result.exit_code == 0
    assert out.read_text().startswith("t,p,q")
