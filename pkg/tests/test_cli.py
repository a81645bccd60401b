import json
import subprocess
import sys

import pytest

from fqforge.cli import run

TRIVIAL = "group trivial\ngens\n"


def report(tmp_path, *argv):
    out = tmp_path / "r.json"
    code = run([*argv, "--report", str(out)])
    return code, json.loads(out.read_text())


def test_fixtures_list(capsys):
    assert run(["fixtures", "--list"]) == 0
    assert capsys.readouterr().out.split() == ["bs23", "t2", "t3", "wise37", "double-LD"]


def test_fixtures_show(capsys):
    assert run(["fixtures", "--show", "bs23"]) == 0
    assert "rel t^-1 a^2 t a^-3" in capsys.readouterr().out


def test_usage_and_parse_errors(tmp_path):
    assert run(["quotients"]) == 2
    assert run(["nonsense"]) == 2
    bad = tmp_path / "bad.grp"
    bad.write_text("group x\ngens a\nrel a^\n")
    assert run(["quotients", "--group", str(bad), "--report", str(tmp_path / "x.json")]) == 3
    assert run(["quotients", "--group", str(tmp_path / "missing.grp")]) == 2


def test_construct(tmp_path):
    src = tmp_path / "trivial.grp"
    src.write_text(TRIVIAL)
    out = tmp_path / "ghat.grp"
    code, rep = report(tmp_path, "construct", "--input", str(src), "--n", "2", "--out", str(out))
    assert code == 0 and rep["verdict"] == "PASS"
    assert rep["results"]["ranks"]["Ghat"] == 30
    assert all(item["ok"] for item in rep["results"]["audit"])
    assert "group Ghat" in out.read_text()
    assert set(rep) == {"schema", "tool", "version", "command", "flags", "inputs", "budget", "verdict", "results"}
    assert rep["schema"] == 1


def test_reports_are_byte_identical(tmp_path):
    src = tmp_path / "trivial.grp"
    src.write_text(TRIVIAL)
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert run(["construct", "--input", str(src), "--out", str(tmp_path / f"g{k}.grp"), "--report", str(out)]) == 0
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]


def test_dead_element(tmp_path):
    code, rep = report(tmp_path, "dead-element", "--group", "fixtures:t2",
                       "--word", "[t_a (a b) t_a^-1, b]", "--order-bound", "8")
    assert code == 0 and rep["verdict"] == "PASS"


def test_quotients_fail_exit(tmp_path):
    code, rep = report(tmp_path, "quotients", "--group", "fixtures:bs23", "--order-bound", "4", "--max-index", "2")
    assert code == 1 and rep["verdict"] == "FAIL"


def test_ball_and_isometric(tmp_path):
    code, rep = report(tmp_path, "ball", "--group", "fixtures:bs23", "--radius", "1")
    assert code == 0 and rep["results"]["size"] == 5
    src = tmp_path / "trivial.grp"
    src.write_text(TRIVIAL)
    code, rep = report(tmp_path, "isometric", "--tower", str(src), "--stage", "G1",
                       "--sub", "g0", "--ambient", "A*", "--radius", "2")
    assert code == 0 and rep["results"]["isometric"] == "ISOMETRIC"


def test_dehn_word(tmp_path):
    src = tmp_path / "z2.grp"
    src.write_text("group Z2\ngens a b\nrel [a,b]\n")
    code, rep = report(tmp_path, "dehn", "--group", str(src), "--word", "[a^2,b^2]")
    assert code == 0 and rep["results"]["certificate"]["area"] == 4
    assert rep["results"]["certificate"]["replays"]


def test_budget_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FQFORGE_BUDGET", "12345")
    code, rep = report(tmp_path, "ball", "--group", "fixtures:bs23", "--radius", "1")
    assert rep["budget"] == 12345


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fqforge", "fixtures", "--list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "wise37" in proc.stdout
