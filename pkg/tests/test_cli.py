import json
import subprocess
import sys

import pytest

from cyclord.cli import (
    EXIT_BUDGET,
    EXIT_CHECK,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_PRECISION,
    main,
    parse_range,
)
from cyclord.errors import InputError

from oracles import fibonacci_oracle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


def test_gen_fibonacci_matches_oracle(capsys):
    code, out, _ = run(capsys, "gen", "--alpha", "golden", "--cuts", "0,1-alpha", "--z", "0", "--range", "0..20")
    assert code == EXIT_OK
    assert out.strip() == "".join(map(str, fibonacci_oracle(21)))


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "--range", "-50..50")
    b = run(capsys, "gen", "--range", "-50..50")
    assert a == b


def test_gen_rational_warns(capsys):
    code, out, err = run(capsys, "gen", "--alpha", "1/3", "--cuts", "0,1/3", "--range", "0..5")
    assert code == EXIT_OK
    assert "not minimal" in err
    assert out.strip() == "011011"


def test_gen_bad_cuts(capsys):
    code, _, err = run(capsys, "gen", "--cuts", "0,1/2,1/4")
    assert code == EXIT_INPUT
    assert "cyclic order" in err


def test_gen_k2_json_and_csv(capsys):
    args = ("gen", "--alpha", "golden,1/4", "--cuts", "0,1/2", "--box", "0..2,0..3")
    code, data = run_json(capsys, *args)
    assert code == EXIT_OK
    assert data["box"] == [[0, 2], [0, 3]]
    assert len(data["symbols"]) == 3 and len(data["symbols"][0]) == 4
    code, out, _ = run(capsys, "--format", "csv", *args)
    assert len(out.strip().splitlines()) >= 3


def test_unknown_command_is_input_error(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT


def test_analyze_complexity(capsys):
    code, data = run_json(capsys, "analyze", "complexity", "--n", "1..10")
    assert code == EXIT_OK
    assert data["p"] == list(range(2, 12))
    assert data["stabilized"]


def test_analyze_complexity_inconclusive(capsys):
    code, _, err = run(capsys, "analyze", "complexity", "--n", "30", "--window", "8")
    assert code == EXIT_INCONCLUSIVE


def test_analyze_cover_growth(capsys):
    code, data = run_json(capsys, "analyze", "cover-growth", "--arcs", "0:0.4;0.33:0.73;0.66:1.06", "--A", "powers", "--n-max", "8")
    assert code == EXIT_OK
    assert data["step_bound_holds"] and data["linear_bound_holds"]
    assert data["cover_growth"][0] == data["N1_direct"] == 3


def test_config_file_supplies_options(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"arcs": "0:0.4;0.33:0.73;0.66:1.06", "a_seq": "consecutive", "n_max": 3}))
    code, data = run_json(capsys, "--config", str(cfg), "analyze", "cover-growth")
    assert code == EXIT_OK and len(data["cover_growth"]) == 3


def test_analyze_independence(capsys):
    args = ("analyze", "independence", "--arcs", "0:0.5;0.25:0.75;0.1:0.3;0.6:0.95", "--cap", "3")
    code, data = run_json(capsys, "--seed", "4", *args)
    assert code == EXIT_OK
    assert data["independence"]["size"] <= 2
    assert run_json(capsys, "--seed", "4", *args)[1] == data


def test_analyze_independence_budget(capsys):
    family = json.dumps([[0, 1] * 5] * 40)
    code, _, err = run(capsys, "analyze", "independence", "--family", family, "--cap", "4", "--budget", "10")
    assert code == EXIT_BUDGET


def test_analyze_variation(capsys):
    payload = json.dumps({"arrangement": [0, 1, 2, 3], "values": [0, 1, 2, 3]})
    code, data = run_json(capsys, "analyze", "variation", "--input", payload, "--cut", "1", "--gap")
    assert code == EXIT_OK
    assert data["variation"] == 6
    # chain 2, 3, 0, 1 drops only the wraparound jump
    assert data["cut"]["holds"] and data["cut"]["upsilon_cut"] == 5


def test_analyze_language_and_rotation(capsys):
    code, data = run_json(capsys, "analyze", "language-eq", "--n", "1..4")
    assert code == EXIT_OK and data["equal"]
    code, data = run_json(capsys, "analyze", "rotation-number", "--N", "10000")
    assert code == EXIT_OK and data["error"] < 0.002


def test_corder_commands(capsys, tmp_path):
    c3 = tmp_path / "c3.json"
    c3.write_text(json.dumps({"ground": [0, 1, 2], "triples": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
    code, data = run_json(capsys, "corder", "validate", str(c3))
    assert code == EXIT_OK and data["is_corder"]

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"ground": [0, 1, 2], "triples": [[0, 1, 2]]}))
    code, data = run_json(capsys, "corder", "validate", str(bad))
    assert code == EXIT_CHECK and data["violations"]

    glue = {"domain": {"arrangement": [0, 1, 2, 3]}, "codomain": {"arrangement": [0, 1, 2, 3]}, "map": {"0": 0, "1": 1, "2": 2, "3": 0}}
    code, data = run_json(capsys, "corder", "cop", json.dumps(glue))
    assert code == EXIT_OK and data["cop"]
    glue["map"] = {"0": 0, "1": 2, "2": 1, "3": 3}
    assert run_json(capsys, "corder", "cop", json.dumps(glue))[0] == EXIT_CHECK

    code, data = run_json(capsys, "corder", "split", '{"arrangement":[0,1,2,3]}', "--A", "[1]")
    assert data["arrangement"] == [0, [1, "-"], [1, "+"], 2, 3]

    code, data = run_json(capsys, "corder", "cut", '{"arrangement":[0,1,2,3]}', "--at", "2")
    assert data["restores"] and data["order"][0] == [2, "-"]

    code, data = run_json(capsys, "corder", "lexprod", '{"arrangement":[0,1]}')
    assert len(data["arrangement"]) == 4

    code, data = run_json(capsys, "corder", "double-circle", "--n", "4", "--markers", "1")
    assert data["valid"] and len(data["arrangement"]) == 9


def test_missing_file_is_input_error(capsys, tmp_path):
    assert run(capsys, "corder", "validate", str(tmp_path / "nope.json"))[0] == EXIT_INPUT


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    assert main(["--output", str(target), "gen", "--range", "0..9"]) == EXIT_OK
    assert target.read_text().strip() == "".join(map(str, fibonacci_oracle(10)))


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"range": "0..4", "alpha": "golden"}))
    code, out, _ = run(capsys, "--config", str(cfg), "gen")
    assert len(out.strip()) == 5
    code, out, _ = run(capsys, "--config", str(cfg), "gen", "--range", "0..2")
    assert len(out.strip()) == 3


def test_precision_env_and_exhaustion(capsys, monkeypatch):
    # sqrt2 - 1 - golden + 0.20382 is about -4e-7: not certifiable at 10 digits
    args = ("gen", "--alpha", "sqrt2m1,golden", "--cuts", "0,alpha1-alpha2+0.20382", "--box", "0..0,0..0")
    monkeypatch.setenv("CYCLORD_PRECISION", "10")
    code, _, err = run(capsys, *args)
    assert code == EXIT_PRECISION
    assert "suggested precision: 20" in err
    # the flag beats the environment
    assert run(capsys, "--precision", "30", *args)[0] == EXIT_OK


def test_parse_range():
    assert parse_range("3..7") == (3, 7)
    assert parse_range("4") == (4, 4)
    with pytest.raises(InputError):
        parse_range("7..3")
    with pytest.raises(InputError):
        parse_range("a..b")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cyclord", "gen", "--range", "0..4"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "".join(map(str, fibonacci_oracle(5)))


def test_global_options_after_subcommand(capsys):
    before = run(capsys, "--format", "json", "gen", "--range", "0..5")
    after = run(capsys, "gen", "--range", "0..5", "--format", "json")
    assert before == after and before[0] == EXIT_OK
    assert json.loads(after[1])["symbols"] == fibonacci_oracle(6)
