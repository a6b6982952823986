# -*- coding: utf-8 -*-
"""Tests for `stablewalk.massive.cli` module."""

from .conftest import assert_result_ok
from click.testing import CliRunner
from stablewalk.massive.cli import massive as massive_cli_group

import json
import math
import pytest


runner = CliRunner(mix_stderr=False)


@pytest.fixture(autouse=True)
def small_kernels(monkeypatch):
    monkeypatch.setenv("MASSIVE_FAR_FIELD_RADIUS", "32")


def test_massive_help():
    result = runner.invoke(massive_cli_group)
    assert_result_ok(result)
    assert "Massive sets" in result.stdout
    for command in ("green", "capacity", "classify", "wiener", "simulate", "sets"):
        assert command in result.stdout


def test_green_json():
    result = runner.invoke(
        massive_cli_group, ["green", "-a", "0.5", "-x", "3", "-x-3", "--format", "json"]
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    first, second = data["rows"]
    assert first["x"] == [3]
    assert first["method"] == "quadrature"
    assert first["value"] > 0
    assert first["value"] == pytest.approx(second["value"], rel=1e-10)
    assert data["config"]["command"] == "green"


def test_green_asymptotic_table():
    result = runner.invoke(
        massive_cli_group,
        ["green", "-d", "2", "-a", "1", "-x", "300,0", "--method", "asymptotic"],
    )
    assert_result_ok(result)
    assert f"{1 / (300 * math.pi):.10g}" in result.stdout


def test_green_errors():
    result = runner.invoke(massive_cli_group, ["green", "-a", "1.5", "-x", "0"])
    assert result.exit_code == 2
    assert "not transient" in result.stderr

    result = runner.invoke(massive_cli_group, ["green", "-a", "0.5", "-x", "a"])
    assert result.exit_code == 2
    assert "Usage:" in result.stderr

    result = runner.invoke(massive_cli_group, ["green", "-a", "2.5", "-x", "1"])
    assert result.exit_code == 2


def test_capacity_of_a_singleton():
    from stablewalk.massive.kernels import green_quadrature
    from stablewalk.massive.kernels import WalkConfig

    result = runner.invoke(
        massive_cli_group, ["capacity", "-a", "0.5", "-x", "0", "--format", "json"]
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    g0 = green_quadrature(WalkConfig(1, 0.5), (0,)).value
    assert data["size"] == 1
    assert data["capacity"] == pytest.approx(1 / g0, rel=1e-8)
    assert data["lower"] <= data["capacity"] <= data["upper"]
    assert not data["subsampled"]


def test_capacity_of_a_family_shell():
    result = runner.invoke(
        massive_cli_group,
        ["capacity", "-a", "0.5", "--family", "primes", "--shell", "3"],
    )
    assert_result_ok(result)
    assert "size" in result.stdout

    result = runner.invoke(
        massive_cli_group,
        [
            "capacity",
            "-a",
            "0.5",
            "--family",
            "naturals",
            "--shell",
            "7",
            "--solver-cap",
            "32",
            "--format",
            "json",
        ],
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    assert data["size"] == 128
    assert data["subsampled"]
    assert data["sample_size"] == 32
    assert data["lower"] <= data["capacity"] <= data["upper"]


@pytest.mark.parametrize(
    "args",
    [
        ["capacity", "-a", "0.5"],
        ["capacity", "-a", "0.5", "-x", "0", "--family", "primes", "--shell", "2"],
        ["capacity", "-a", "0.5", "--family", "primes"],
        ["capacity", "-a", "0.5", "--family", "list:values=1", "--shell", "3"],
        ["capacity", "-a", "0.5", "-x", "0", "--solver-cap", "0"],
    ],
)
def test_capacity_errors(args):
    result = runner.invoke(massive_cli_group, args)
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args,expected",
    [
        (["axis", "-d", "2", "-a", "1.5"], "axis: massive (axis criterion)"),
        (
            ["thorn:t=n/loglog;base=primes", "-d", "2", "-a", "0.5"],
            "massive-by-sufficiency (subthorn sufficient condition)",
        ),
        (
            ["piatetski:beta=1.1", "-a", "0.05"],
            "non-massive (Piatetski-Shapiro density bound)",
        ),
        (["primes", "-a", "0.3"], "primes: massive (prime criterion)"),
    ],
)
def test_classify(args, expected):
    result = runner.invoke(massive_cli_group, ["classify"] + args)
    assert_result_ok(result)
    assert expected in result.stdout


def test_classify_json_and_errors():
    result = runner.invoke(
        massive_cli_group, ["classify", "power:beta=3", "-a", "0.5", "--format", "json"]
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    assert data["verdict"] == "non-massive"
    assert data["rule"] == "power sequence criterion"

    result = runner.invoke(massive_cli_group, ["classify", "cantor", "-a", "0.5"])
    assert result.exit_code == 2
    assert "Unknown family kind" in result.stderr


def test_wiener_writes_its_outputs(tmp_path):
    result = runner.invoke(
        massive_cli_group,
        [
            "wiener",
            "primes",
            "-a",
            "0.5",
            "--shells",
            "2..5",
            "--output-dir",
            str(tmp_path),
        ],
    )
    assert_result_ok(result)
    assert "Verdict:" in result.stdout
    data = json.loads((tmp_path / "wiener.json").read_text())
    assert [term["n"] for term in data["terms"]] == [2, 3, 4, 5]
    assert data["config"]["shells"] == [2, 5]
    assert len((tmp_path / "wiener.csv").read_text().splitlines()) == 5
    assert (tmp_path / "config.yaml").is_file()


def test_wiener_errors():
    result = runner.invoke(
        massive_cli_group, ["wiener", "primes", "-a", "0.5", "--shells", "a..b"]
    )
    assert result.exit_code == 2
    result = runner.invoke(
        massive_cli_group, ["wiener", "primes", "-a", "0.5", "--shells", "5..3"]
    )
    assert result.exit_code == 2
    result = runner.invoke(massive_cli_group, ["wiener", "primes", "-a", "1.5"])
    assert result.exit_code == 2


def test_simulate_the_lattice():
    result = runner.invoke(
        massive_cli_group,
        [
            "simulate",
            "lattice",
            "-a",
            "0.5",
            "--paths",
            "50",
            "--horizon",
            "5",
            "--horizons",
            "2",
            "--format",
            "json",
        ],
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    assert [item["horizon"] for item in data["estimates"]] == [2, 5]
    assert all(item["estimate"] == 1.0 for item in data["estimates"])
    assert data["plan"]["n_paths"] == 50


def test_simulate_trace(tmp_path):
    args = ["simulate", "lattice", "-a", "0.5", "--paths", "4", "--horizon", "3"]
    result = runner.invoke(massive_cli_group, args + ["--trace"])
    assert result.exit_code == 2
    assert "--trace needs --output-dir" in result.stderr

    result = runner.invoke(
        massive_cli_group, args + ["--trace", "--output-dir", str(tmp_path)]
    )
    assert_result_ok(result)
    assert len((tmp_path / "trace.csv").read_text().splitlines()) == 5
    assert (tmp_path / "simulate.json").is_file()
    assert (tmp_path / "config.yaml").is_file()


@pytest.mark.parametrize(
    "extra",
    [
        ["--horizons", "10"],
        ["--start", "x"],
        ["--start", "0,0"],
        ["--paths", "0"],
    ],
)
def test_simulate_errors(extra):
    args = ["simulate", "primes", "-a", "0.5", "--paths", "4", "--horizon", "3"]
    result = runner.invoke(massive_cli_group, args + extra)
    assert result.exit_code == 2


def test_sets_kinds():
    result = runner.invoke(massive_cli_group, ["sets", "kinds"])
    assert_result_ok(result)
    for kind in ("primes", "thorn", "bucy", "lattice"):
        assert kind in result.stdout


def test_sets_shell():
    result = runner.invoke(massive_cli_group, ["sets", "shell", "primes", "2"])
    assert_result_ok(result)
    assert result.stdout == "Shell 2 of primes: 2 points\n5, 7\n"

    result = runner.invoke(
        massive_cli_group, ["sets", "shell", "axis", "3", "-d", "2", "--format", "json"]
    )
    assert_result_ok(result)
    data = json.loads(result.stdout)
    assert data["size"] == 8
    assert data["points"][0] == [8, 0]

    result = runner.invoke(
        massive_cli_group, ["sets", "shell", "naturals", "6", "--limit", "3"]
    )
    assert_result_ok(result)
    assert "64, 65, 66, ... (64 points)" in result.stdout


def test_sets_check():
    result = runner.invoke(massive_cli_group, ["sets", "check", "power:beta=2"])
    assert_result_ok(result)
    assert result.stdout == "superlinear: yes (200 members)\nconvex gaps: yes\n"

    result = runner.invoke(massive_cli_group, ["sets", "check", "bucy:alpha=0.5"])
    assert_result_ok(result)
    assert "superlinear: no, a_2 = 3 < a_1 + a_1 = 4" in result.stdout

    result = runner.invoke(massive_cli_group, ["sets", "check", "axis"])
    assert result.exit_code == 2


def test_config_file_precedence(tmp_path, workdir, write_config):
    write_config(
        tmp_path, "seed: 5\nhorizon: 4\nsimulate:\n  n_paths: 7\n  horizon: 3\n"
    )
    args = ["simulate", "lattice", "-a", "0.5", "--format", "json"]
    with workdir(tmp_path):
        result = runner.invoke(massive_cli_group, args)
        assert_result_ok(result)
        plan = json.loads(result.stdout)["plan"]
        assert (plan["n_paths"], plan["horizon"], plan["seed"]) == (7, 3, 5)

        result = runner.invoke(massive_cli_group, args + ["--paths", "9"])
        assert_result_ok(result)
        assert json.loads(result.stdout)["plan"]["n_paths"] == 9


def test_explicit_config_file(tmp_path, write_config):
    path = write_config(tmp_path, "simulate:\n  n_paths: 11\n  horizon: 2\n")
    result = runner.invoke(
        massive_cli_group,
        ["--config", str(path), "simulate", "lattice", "-a", "0.5", "--format", "json"],
    )
    assert_result_ok(result)
    assert json.loads(result.stdout)["plan"]["n_paths"] == 11

    result = runner.invoke(
        massive_cli_group,
        ["--config", str(tmp_path / "missing.yaml"), "classify", "primes", "-a", "0.5"],
    )
    assert result.exit_code == 2
    assert "not found" in result.stderr
