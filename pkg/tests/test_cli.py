import json

import pytest

from app.main import main


def test_series_text(capsys):
    assert main(["series", "kummer-quotient", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "series: kummer-quotient  model: abelian  n: 2" in out
    assert "betti: 1 0 22 0 1" in out
    assert "total: 24" in out


def test_series_json_is_sorted_and_stable(capsys):
    assert main(["series", "hilbert", "--n", "2", "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["series", "hilbert", "--n", "2", "--format", "json"]) == 0
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert payload["betti"] == [1, 4, 13, 32, 44, 32, 13, 4, 1]
    assert payload["total_dimension"] == 144
    assert list(payload) == sorted(payload)


def test_series_csv(capsys):
    assert main(["series", "surface", "--case", "e-times-line", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "d,p,c\n0,0,1\n1,1,2\n2,2,1\n"


def test_series_latex(capsys):
    assert main(["series", "kummer", "--n", "2", "--format", "latex"]) == 0
    out = capsys.readouterr().out
    assert "\\begin{tabular}" in out
    assert "\\end{tabular}" in out


def test_partitions_table(capsys):
    assert main(["partitions", "--n", "4", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 5
    rows = {row["partition"]: row for row in payload["rows"]}
    assert rows["(4)"]["torsion_count"] == 256
    assert rows["(2,2)"]["kernel_dimension"] == 256
    assert rows["(1,1,1,1)"]["kernel_dimension"] == 4096
    assert rows["(3,1)"]["class_size"] == 8


def test_torsion_rank_override(capsys):
    assert main(["partitions", "--n", "2", "--torsion-rank", "2", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert rows[0]["torsion_count"] == 4


def test_torsion_factors_flag(capsys):
    argv = ["partitions", "--n", "4", "--torsion-rank", "0", "--torsion-factors", "2", "--format", "json"]
    assert main(argv) == 0
    rows = {row["partition"]: row for row in json.loads(capsys.readouterr().out)["rows"]}
    assert rows["(4)"]["torsion_count"] == 2
    assert rows["(2,2)"]["torsion_count"] == 2
    assert rows["(3,1)"]["torsion_count"] == 1


def test_torsion_factors_from_yaml(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text("n: 2\nformat: json\ntorsion-factors: [2, 4]\n", encoding="utf-8")
    assert main(["partitions", "--config", str(config)]) == 0
    rows = {row["partition"]: row for row in json.loads(capsys.readouterr().out)["rows"]}
    assert rows["(2)"]["torsion_count"] == 16 * 2 * 2


@pytest.mark.parametrize("factors", [["1"], ["2", "3"]])
def test_bad_torsion_factors_are_usage_errors(factors, capsys):
    assert main(["partitions", "--n", "2", "--torsion-factors", *factors]) == 2


def test_check_passes(capsys):
    assert main(["check", "strong-splitting", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "status: PASS" in out
    assert "elapsed" not in out


def test_check_frobenius_json(capsys):
    assert main(["check", "frobenius", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert payload["check"] == "frobenius"


def test_noncompact_check_fails_with_exit_one(capsys):
    assert main(["check", "frobenius", "--case", "e-times-line"]) == 1
    assert "compact" in capsys.readouterr().err


def test_invalid_n_is_a_usage_error(capsys):
    assert main(["series", "hilbert", "--n", "0"]) == 2
    assert "invalid run configuration" in capsys.readouterr().err


def test_feasibility_error_exit_code(capsys):
    assert main(["check", "multiplicativity", "--n", "9", "--format", "json"]) == 3
    payload = json.loads(capsys.readouterr().out)
    assert payload["success"] is False
    assert payload["exit_code"] == 3
    assert payload["errors"] == ["FeasibilityError"]


def test_unknown_target_exits_through_argparse():
    with pytest.raises(SystemExit) as info:
        main(["series", "k3"])
    assert info.value.code == 2


def test_yaml_config_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text("n: 3\nformat: json\ncase: abelian\n", encoding="utf-8")
    assert main(["series", "hilbert", "--config", str(config), "--n", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 2


def test_missing_config_file(tmp_path, capsys):
    assert main(["series", "hilbert", "--config", str(tmp_path / "missing.yaml")]) == 2


def test_unwritable_output_is_a_usage_error(tmp_path, capsys):
    target = tmp_path / "missing" / "series.txt"
    assert main(["series", "surface", "--output", str(target)]) == 2
    assert "cannot write output file" in capsys.readouterr().err


def test_output_file(tmp_path, capsys):
    target = tmp_path / "series.txt"
    assert main(["series", "surface", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert "betti: 1 4 6 4 1" in target.read_text(encoding="utf-8")
