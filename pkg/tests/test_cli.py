"""CLI contract: outputs, exit codes, JSON determinism, file inputs."""

import json

import pytest
from click.testing import CliRunner

from treegrp.cli import main
from treegrp.portrait import FiniteAutomorphism, generator


@pytest.fixture()
def runner():
    return CliRunner()


def hexes(d, *indices):
    return [generator(d, i).to_hex() for i in indices]


# -- elem ------------------------------------------------------------------------


def test_elem_compose_matches_library(runner):
    a0, a1 = hexes(2, 0, 1)
    res = runner.invoke(main, ["elem", "compose", "--d", "2", "--lhs", a0, "--rhs", a1])
    assert res.exit_code == 0
    assert res.output.strip() == (generator(2, 0) * generator(2, 1)).to_hex()


def test_elem_apply_example(runner):
    res = runner.invoke(
        main, ["elem", "apply", "--d", "3", "--g", generator(3, 1).to_hex(), "--w", "000"]
    )
    assert res.exit_code == 0
    assert res.output.strip() == "010"


def test_elem_alpha_top_generator(runner):
    res = runner.invoke(
        main, ["elem", "alpha", "--d", "4", "--g", generator(4, 3).to_hex(), "--J", "3"]
    )
    assert res.exit_code == 0
    assert res.output.strip() == "1"


def test_elem_invert_and_section(runner):
    g = FiniteAutomorphism.from_labels(3, {"": 1, "0": 1, "10": 1})
    res = runner.invoke(main, ["elem", "invert", "--d", "3", "--g", g.to_hex()])
    assert res.exit_code == 0
    assert res.output.strip() == (~g).to_hex()
    res = runner.invoke(main, ["elem", "section", "--d", "3", "--g", g.to_hex(), "--w", "0"])
    assert res.exit_code == 0
    assert res.output.strip() == g.section("0").to_hex()


def test_elem_distance_output(runner):
    res = runner.invoke(
        main,
        ["elem", "distance", "--d", "2", "--lhs", generator(2, 1).to_hex(), "--rhs", "00"],
    )
    assert res.exit_code == 0
    assert res.output.strip() == "1/2"


def test_elem_malformed_hex_exits_2_with_field_name(runner):
    res = runner.invoke(
        main, ["elem", "compose", "--d", "2", "--lhs", "zz", "--rhs", "00"]
    )
    assert res.exit_code == 2
    assert "--lhs" in res.output


def test_elem_word_too_long_exits_2(runner):
    res = runner.invoke(
        main, ["elem", "apply", "--d", "2", "--g", "00", "--w", "000"]
    )
    assert res.exit_code == 2
    assert "--w" in res.output


# -- classify ---------------------------------------------------------------------


def test_classify_depth2_text(runner):
    res = runner.invoke(main, ["classify", "--d", "2"])
    assert res.exit_code == 0
    assert "maximal-dimension count: 2 (expected 2) -> PASS" in res.output


def test_classify_depth9_exits_3(runner):
    res = runner.invoke(main, ["classify", "--d", "9"])
    assert res.exit_code == 3


def test_classify_depth5_requires_gf2(runner):
    res = runner.invoke(main, ["classify", "--d", "5"])
    assert res.exit_code == 3
    res = runner.invoke(main, ["classify", "--d", "5", "--gf2", "--format", "json",
                               "--no-timestamp"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["report"]["used_gf2"] is True
    assert doc["report"]["max_dimension_count"] == 16


def test_classify_json_is_deterministic(runner):
    args = ["classify", "--d", "3", "--format", "json", "--no-timestamp"]
    out1 = runner.invoke(main, args).output
    out2 = runner.invoke(main, args).output
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["schema"] == 1
    assert doc["command"] == "classify"
    assert len(doc["report"]["rows"]) == 7


def test_classify_json_has_timestamp_by_default(runner):
    res = runner.invoke(main, ["classify", "--d", "2", "--format", "json"])
    assert "generated_at" in json.loads(res.output)


def test_cap_env_var_is_honored(runner, monkeypatch):
    monkeypatch.setenv("TREEGRP_CAP", "100")
    res = runner.invoke(main, ["classify", "--d", "4"])
    assert res.exit_code == 3


def test_cli_cap_flag_overrides(runner):
    res = runner.invoke(main, ["classify", "--d", "4", "--cap", "100"])
    assert res.exit_code == 3


# -- verify ------------------------------------------------------------------------


def test_verify_all_depth2(runner):
    res = runner.invoke(
        main,
        ["verify", "--suite", "all", "--d", "2", "--samples", "500", "--seed", "7"],
    )
    assert res.exit_code == 0
    assert "overall: PASS" in res.output


def test_verify_single_suites(runner):
    for suite in ("ni", "noadad", "topfg", "relation", "aux"):
        res = runner.invoke(
            main,
            ["verify", "--suite", suite, "--d", "2", "--samples", "200", "--seed", "1"],
        )
        assert res.exit_code == 0, (suite, res.output)


def test_verify_json_counterexample_fields_empty(runner):
    res = runner.invoke(
        main,
        ["verify", "--suite", "ni", "--d", "3", "--samples", "300", "--seed", "7",
         "--format", "json", "--no-timestamp"],
    )
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["passed"] is True
    for suite in doc["results"][0]["suites"]:
        assert suite["failures"] == []


def test_verify_json_deterministic(runner):
    args = ["verify", "--suite", "noadad", "--d", "3", "--format", "json", "--no-timestamp"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output
    # seeded randomness: the sampling suite must also be byte-stable
    args = ["verify", "--suite", "ni", "--d", "4", "--samples", "400", "--seed", "11",
            "--format", "json", "--no-timestamp"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


def test_verify_depth_limits(runner):
    res = runner.invoke(main, ["verify", "--suite", "relation", "--d", "4"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["verify", "--suite", "all", "--d", "6",
                               "--samples", "100"])
    assert res.exit_code == 0
    assert "topfg: skipped" in res.output


def test_verify_failure_exits_1(runner, monkeypatch):
    from treegrp import verify as vf

    def broken(d, cap=None):
        report = vf.NoAdadReport(d)
        report.cases.append(
            vf.NoAdadCase((1,), "INCONCLUSIVE", None, False, None)
        )
        return report

    monkeypatch.setattr(vf, "verify_no_adad", broken)
    res = runner.invoke(main, ["verify", "--suite", "noadad", "--d", "2"])
    assert res.exit_code == 1
    assert "FAIL" in res.output


# -- analyze ------------------------------------------------------------------------


def test_analyze_generated_pattern_group(runner, tmp_path):
    doc = {
        "d": 2,
        "kind": "generated",
        "generators": [generator(2, 0).to_hex(), generator(2, 1).to_hex()],
        "role": "pattern_group",
    }
    path = tmp_path / "subgroup.json"
    path.write_text(json.dumps(doc))
    res = runner.invoke(main, ["analyze", "--file", str(path), "--format", "json",
                               "--no-timestamp"])
    assert res.exit_code == 0
    result = json.loads(res.output)["result"]
    assert result["order"] == 8
    assert result["essential"] is True
    assert result["dimension"] == {"num": 1, "den": 1}


def test_analyze_pj_file(runner, tmp_path):
    path = tmp_path / "pj.json"
    path.write_text(json.dumps({"d": 3, "kind": "PJ", "J": [2], "role": "pattern_group"}))
    res = runner.invoke(main, ["analyze", "--file", str(path), "--format", "json",
                               "--no-timestamp"])
    assert res.exit_code == 0
    result = json.loads(res.output)["result"]
    assert result["order"] == 64
    assert result["index_in_full_group"] == 2
    assert result["dimension"] == {"num": 3, "den": 4}


def test_analyze_mv_file(runner, tmp_path):
    path = tmp_path / "mv.json"
    path.write_text(json.dumps({"d": 3, "kind": "MV", "V": ["00", "01", "10", "11"]}))
    res = runner.invoke(main, ["analyze", "--file", str(path), "--format", "json",
                               "--no-timestamp"])
    assert res.exit_code == 0
    result = json.loads(res.output)["result"]
    assert result["order"] == 8  # index-2 inside the order-16 top stabilizer


def test_analyze_malformed_file_exits_2(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    res = runner.invoke(main, ["analyze", "--file", str(path)])
    assert res.exit_code == 2
