import json
import subprocess
import sys

import pytest

from shuffleword.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--stable")
    return code, json.loads(out)


class TestGen:
    @pytest.mark.parametrize(
        "name,length,expected",
        [("hall", 12, "012021012102"), ("g-fix", 4, "0121"), ("hall", 0, ""), ("hall@3", 6, "021012")],
    )
    def test_prefix(self, capsys, name, length, expected):
        code, out, _ = run(capsys, "gen", "--word", name, "--length", str(length))
        assert code == 0 and out == expected + "\n"

    def test_periodic(self, capsys):
        assert run(capsys, "gen", "--word", "periodic:01", "--length", "5")[1] == "01010\n"

    def test_morphism_file(self, capsys, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("# Thue-Morse\n0 -> 01\n1 -> 10\n")
        code, out, _ = run(capsys, "gen", "--morphism", str(p), "--seed", "0", "--length", "8")
        assert code == 0 and out == "01101001\n"

    def test_catalog_morphism_seed(self, capsys):
        assert run(capsys, "gen", "--morphism", "h", "--length", "6")[1] == "012021\n"

    @pytest.mark.parametrize(
        "argv",
        [
            ["gen", "--word", "nope", "--length", "3"],
            ["gen", "--morphism", "/no/such/file", "--length", "3"],
            ["gen", "--morphism", "h", "--seed", "1", "--length", "3"],
            ["gen", "--word", "hall", "--length", "-1"],
            ["gen", "--length", "3"],
            ["gen", "--word", "hall@x", "--length", "3"],
        ],
    )
    def test_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 64 and out == "" and err.startswith("shuffleword: ")


class TestCheck:
    def test_squarefree_clean(self, capsys):
        code, rep = run_json(capsys, "check", "squarefree", "--word", "g-fix", "--length", "5000")
        assert code == 0 and rep["outcome"] == "pass" and rep["payload"] == {"clean": True}

    def test_squarefree_violation(self, capsys):
        code, rep = run_json(capsys, "check", "squarefree", "--word", "blocks", "--length", "10")
        assert code == 1 and rep["payload"] == {"clean": False, "position": 3, "root": "0"}

    def test_pattern(self, capsys):
        assert run(capsys, "check", "pattern-3u1u3", "--word", "g-fix", "--length", "3000")[:2] == (0, "clean\n")
        code, rep = run_json(capsys, "check", "pattern-3u1u3", "--word", "periodic:30103", "--length", "5")
        assert code == 1 and rep["payload"]["root"] == "0"

    def test_exponent(self, capsys):
        code, rep = run_json(capsys, "check", "exponent", "--word", "periodic:01", "--length", "5")
        assert code == 0 and rep["outcome"] == "value" and rep["payload"]["exponent"] == "5/2"

    def test_exponent_bound(self, capsys):
        code, rep = run_json(capsys, "check", "exponent", "--word", "hall", "--length", "500", "--bound", "rt")
        assert code == 1 and rep["payload"]["bound"] == "7/4" and not rep["payload"]["clean"]
        code, _ = run_json(capsys, "check", "exponent", "--word", "g-fix", "--length", "500", "--bound", "2")
        assert code == 0

    def test_bad_bound(self, capsys):
        assert run(capsys, "check", "exponent", "--word", "hall", "--bound", "x/y")[0] == 64

    def test_bad_kind(self, capsys):
        assert run(capsys, "check", "cubefree", "--word", "hall")[0] == 64


class TestShuffle:
    def test_verify_g(self, capsys):
        code, rep = run_json(capsys, "shuffle", "verify-witness", "--witness", "g-self", "--depth", "2000")
        assert code == 0 and rep["payload"]["ok"]

    def test_verify_hall_default_streams(self, capsys):
        code, rep = run_json(capsys, "shuffle", "verify-witness", "--witness", "hall", "--depth", "2000")
        assert code == 0 and rep["parameters"]["x"] == "hall-u"

    def test_verify_mismatch(self, capsys):
        code, rep = run_json(
            capsys, "shuffle", "verify-witness", "--witness", "g-self",
            "--z", "hall", "--x", "hall", "--y", "hall", "--depth", "8",
        )
        assert code == 1 and rep["payload"]["mismatch"]["position"] == 3

    def test_frontier(self, capsys):
        code, out, _ = run(capsys, "shuffle", "frontier", "--z", "hall", "--x", "hall", "--y", "hall", "--depth", "1")
        assert code == 0 and out == "(0,1) (1,0)\n"
        code, out, _ = run(
            capsys, "shuffle", "frontier", "--z", "periodic:2", "--x", "periodic:0", "--y", "periodic:1", "--depth", "3"
        )
        assert code == 1 and out == "empty\n"

    def test_survival_csv(self, capsys):
        code, out, _ = run(
            capsys, "shuffle", "survival", "--z", "periodic:3", "--x", "hall", "--y", "hall", "--depth", "3"
        )
        assert code == 0 and out == "n,b\n1,-inf\n2,-inf\n3,-inf\n"

    def test_survival_json(self, capsys):
        code, rep = run_json(capsys, "shuffle", "survival", "--z", "hall", "--x", "hall", "--y", "hall", "--depth", "10")
        assert rep["payload"]["curve"] == [0, 0, 0, 1, 0, 0, 1, 2, 3, 0]
        assert rep["payload"]["tail_value"] == 0 and rep["payload"]["tail_start"] == 10

    def test_finite(self, capsys):
        assert run(capsys, "shuffle", "finite", "--z", "0011", "--x", "01", "--y", "01")[:2] == (0, "shuffle\n")
        assert run(capsys, "shuffle", "finite", "--z", "1100", "--x", "01", "--y", "01")[0] == 1
        assert run(capsys, "shuffle", "finite", "--z", "110", "--x", "01", "--y", "01")[0] == 64

    def test_build(self, capsys):
        code, out, _ = run(capsys, "shuffle", "build", "--word", "hall", "--rounds", "3")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "U[0]=0 V[0]=120" and lines[-1].startswith("pass")

    def test_build_budget(self, capsys):
        code, out, err = run(capsys, "shuffle", "build", "--word", "hall-3", "--u0", "3", "--rounds", "1", "--limit", "10000")
        assert code == 2 and "recurrence budget exceeded" in err

    def test_build_budget_json(self, capsys):
        code, out, _ = run(capsys, "shuffle", "build", "--word", "hall-3", "--u0", "3", "--limit", "10000", "--json")
        assert code == 2 and json.loads(out)["exit_code"] == 2


class TestMorph:
    def test_decode(self, capsys):
        assert run(capsys, "decode", "--morphism", "g", "--word", "0121032")[:2] == (0, "01\n")
        assert run(capsys, "decode", "--morphism", "g", "--word", "012")[0] == 1

    def test_apply(self, capsys):
        assert run(capsys, "morph", "apply", "--morphism", "h", "--word", "0", "--times", "3")[1] == "012021012102\n"

    def test_compose(self, capsys):
        code, rep = run_json(capsys, "morph", "compose", "--outer", "h'", "--inner", "h")
        assert code == 0 and rep["payload"]["images"] == ["210201", "2101", "20"]

    def test_compose_file(self, capsys, tmp_path):
        p = tmp_path / "swap.txt"
        p.write_text("0 -> 1\n1 -> 0\n")
        assert run(capsys, "morph", "compose", "--outer", str(p), "--inner", str(p))[1] == "0 -> 0\n1 -> 1\n"

    def test_bad_file(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("0 => 1\n")
        assert run(capsys, "morph", "apply", "--morphism", str(p), "--word", "0")[0] == 64


class TestPlumbing:
    def test_list(self, capsys):
        code, rep = run_json(capsys, "list")
        names = [e["name"] for e in rep["payload"]["entries"]]
        assert code == 0 and "hall-v" in names and "h'" in names

    def test_stable_is_deterministic(self, capsys):
        argv = ["shuffle", "survival", "--z", "g-fix", "--x", "g-fix", "--y", "g-fix", "--depth", "200", "--json", "--stable"]
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first and "elapsed_s" not in first

    def test_timing_present(self, capsys):
        code, out, _ = run(capsys, "gen", "--word", "hall", "--length", "3", "--json")
        assert "elapsed_s" in json.loads(out)

    def test_memory_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("SHUFFLEWORD_MAX_MEM_MB", "0.01")
        code, _, err = run(capsys, "gen", "--word", "hall", "--length", "100000")
        assert code == 2 and "SHUFFLEWORD_MAX_MEM_MB" in err

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 64

    def test_module_entry(self):
        proc = subprocess.run(
            [sys.executable, "-m", "shuffleword", "gen", "--word", "hall", "--length", "12"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0 and proc.stdout == "012021012102\n"
