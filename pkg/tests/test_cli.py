import json

import pytest

from hochschild.main import display_label, main

from .instances import GOLDEN_WINDOWS, SAMPLES, build


def _sample(name):
    return str(SAMPLES / name)


def test_validate_ok(capsys):
    assert main(["validate", _sample("golden.toml")]) == 0
    assert capsys.readouterr().out.startswith("ok: 6 branches")


def test_validate_relation_on_arrow(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("branches = [1, 3]\n[[monomial_relations]]\nbranch = 1\nstart = 0\nlength = 2\n", encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    assert "RelationOnArrow [monomial_relations[0]]" in capsys.readouterr().err


def test_validate_float(tmp_path, capsys):
    path = tmp_path / "float.toml"
    path.write_text('branches = [2, 2]\n[[linear_relations]]\ncoefficients = { "1" = 0.5, "2" = 1 }\n', encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    assert "ParseError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "left, right, value",
    [
        ("w12", "rho1||a1", "rho1‖a2"),
        ("y4", "a4‖a6", "-a4‖a6"),
        ("z16", "a4‖a1", "a4‖a6"),
        ("y4", "t1", "0"),
        ("w12", "w21", "x2"),
    ],
)
def test_bracket(capsys, left, right, value):
    assert main(["bracket", _sample("golden.toml"), left, right]) == 0
    assert capsys.readouterr().out == f"[{left}, {right}] = {value}\n"


def test_bracket_json(capsys):
    assert main(["bracket", _sample("golden.toml"), "w12", "rho1‖a1", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["degree"] == 2
    assert out["coordinates"] == {"rho1‖a2": "1"}


def test_bracket_json_uses_the_short_alias(capsys):
    assert main(["bracket", _sample("golden.toml"), "y4", "a4||a6", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == "-a4‖a6"
    assert out["coordinates"] == {"amb(4,0,8)‖a6": "-1"}


def test_display_label():
    alg = build([1, 1, 2, 8, 2, 2], GOLDEN_WINDOWS, [{5: 1, 6: -1}])
    assert display_label(alg, "-amb(4,0,8)‖a6 + 2 sigma(4,0,8)‖a1") == "-a4‖a6 + 2 a4‖a1"
    # a window shorter than its branch keeps the long form
    assert display_label(alg, "sigma(4,0,4)‖a1") == "sigma(4,0,4)‖a1"
    assert display_label(alg, "amb(9,0,8)‖a1") == "amb(9,0,8)‖a1"


def test_unknown_label(capsys):
    assert main(["bracket", _sample("golden.toml"), "w33", "t1"]) == 2
    assert "UnknownLabel" in capsys.readouterr().err


def test_report_json(capsys):
    assert main(["report", _sample("kronecker3.toml"), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [d["dimension"] for d in doc["degrees"]] == [1, 8, 0]
    assert doc["lie"]["semisimple"] is True
    assert "oracle" not in doc


def test_report_to_file(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["report", _sample("commutative_square.toml"), "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    text = out.read_text(encoding="utf-8")
    assert "HH^1: dim 0" in text
    assert "abelian of dimension 0" in text


def test_report_with_oracle(capsys):
    assert main(["report", _sample("staircase.toml"), "--oracle", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["oracle"]["agrees"] is True
    assert doc["oracle"]["bar_dimensions"] == [1, 1, 0, 0, 1, 0]


def test_oracle_command(capsys):
    assert main(["oracle", _sample("canonical.toml")]) == 0
    assert "agreement: yes" in capsys.readouterr().out


def test_oracle_budget(capsys):
    assert main(["oracle", _sample("golden.toml"), "--budget", "10", "--max-degree", "4"]) == 1
    captured = capsys.readouterr()
    assert "BudgetExceeded" in captured.err
    assert "stopped early" in captured.out


def test_oracle_rejects_bad_budget(capsys):
    assert main(["oracle", _sample("kronecker2.toml"), "--budget", "0"]) == 1
    assert "budget must be positive" in capsys.readouterr().err
