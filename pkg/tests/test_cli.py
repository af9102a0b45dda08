import json

import pytest

from surgery_homology.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_table(capsys):
    code, out, _ = call(capsys, "homology", "yzrem(S5, lens(3,1))")
    assert code == 0
    lines = out.splitlines()
    assert lines[3].split() == ["0", "Z"] and lines[5].split() == ["2", "Z/3"]
    assert lines[8].split() == ["5", "0"]


def test_homology_json_schema(capsys):
    code, out, _ = call(capsys, "homology", "yzrem(D5, lens(3,1))", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"input", "attrs", "homology", "checks"}
    assert obj["homology"][2] == {"degree": 2, "rank": 0, "torsion": [3]}
    assert obj["homology"][4] == {"degree": 4, "rank": 1, "torsion": []}
    assert obj["attrs"]["simply_connected"] == "asserted-by-paper"


def test_dimension_mismatch_exit_two(capsys):
    code, out, err = call(capsys, "homology", "connsum(S2, lens(2,1))")
    assert code == 2 and "dimension mismatch" in err and "Traceback" not in err


def test_parse_error_exit_two(capsys):
    code, _, err = call(capsys, "homology", "prod(S2")
    assert code == 2 and err


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["realize", "--h3", "x"])
    assert exc.value.code == 2


def test_verify_thm5(capsys):
    code, out, _ = call(capsys, "verify", "thm5", "--y", "lens(4,1)", "--base", "D5")
    assert code == 0 and "all degrees agree" in out


def test_verify_thm5_relative(capsys):
    code, out, _ = call(capsys, "verify", "thm5", "--y", "lens(4,1)", "--base", "D5",
                        "--show-relative-reading", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    diff = [r["degree"] for r in obj["degrees"] if not r["relative_agrees"]]
    assert diff == [3]


def test_oracle(capsys):
    code, out, _ = call(capsys, "oracle", "connsum(lens(2,1),lens(3,1))", "--format", "json")
    assert code == 0
    assert json.loads(out)["homology"][1] == {"degree": 1, "rank": 0, "torsion": [6]}


def test_realize(capsys, tmp_path):
    dump = tmp_path / "r.json"
    code, out, _ = call(capsys, "realize", "--torsion", "3,9", "--free-h2", "2", "--h3", "1", "--h4", "0",
                        "--format", "json", "--out", str(dump))
    assert code == 0
    obj = json.loads(out)
    assert obj["recipe"].startswith("bcs(yzrem(S5, connsum(lens(3,1),lens(9,1)))")
    assert obj["checks"]["verify"]["passed"]
    assert json.loads(dump.read_text()) == obj


def test_realize_paper_mode(capsys):
    code, out, _ = call(capsys, "realize", "--torsion", "2,4", "--h4", "1", "--paper-mode")
    assert code == 0 and "yzrem(D5" in out


def test_check_freeness(capsys):
    assert call(capsys, "check", "nishioka", "--groups", "Z;0;Z/3+Z;Z;Z^2", "--dim", "5")[0] == 0
    assert call(capsys, "check", "nishioka", "--groups", "Z;0;Z/3;Z/3;Z;0", "--dim", "5")[0] == 1


def test_check_sgm(capsys):
    assert call(capsys, "check", "sgm", "--groups", "Z;0;Z^2;Z^2;0;Z")[0] == 0
    assert call(capsys, "check", "sgm", "--groups", "Z;0;Z/3;0;0;Z")[0] == 1


def test_lift(capsys):
    code, out, _ = call(capsys, "lift", "--m", "8", "bcs(yzrem(S5, lens(3,1)))", "--format", "json")
    assert code == 0
    d = json.loads(out)["descriptor"]
    assert d["predicted_range"] == [0, 3] and len(d["predicted"]) == 4


def test_lift_errors(capsys):
    assert call(capsys, "lift", "--m", "5", "D5")[0] == 2
    assert call(capsys, "lift", "--m", "7", "S5")[0] == 2


def test_suite_vacuous(capsys):
    code, out, _ = call(capsys, "verify", "suite", "--targets", "0", "--matrices", "5")
    assert code == 0 and "vacuous" in out


def test_suite_relative_reading_fails(capsys):
    code, out, _ = call(capsys, "verify", "suite", "--targets", "2", "--matrices", "2",
                        "--relative-reading", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    thm5 = next(s for s in obj["suites"] if s["suite"] == "thm5")
    lens_failures = [f for f in thm5["failures"] if "lens" in f["case"] and "row" not in f["case"]]
    assert lens_failures and all(f["detail"] == "disagree at degrees [3]" for f in lens_failures)


def test_byte_identical(capsys):
    a = call(capsys, "verify", "suite", "--seed", "3", "--targets", "5", "--matrices", "10", "--format", "json")
    b = call(capsys, "verify", "suite", "--seed", "3", "--targets", "5", "--matrices", "10", "--format", "json")
    assert a == b
