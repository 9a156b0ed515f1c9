import csv
import io
import json

import pytest

from bernoulli_lotto.bernoulli_eq import bl_payoff_nocost
from bernoulli_lotto.cli import main
from bernoulli_lotto.core import BernoulliEndowment

GAME = {"endowment": {"A1": 3, "A2": 0.2, "p": 0.5}, "opponent": {"B": 1, "c": 0}, "battlefields": [1]}
COMMANDER = {"c": 4, "c1": 1, "c2": 2, "phi1": 1, "phi2": 1}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_payoff(tmp_path, capsys):
    code, out = run(capsys, "payoff", write(tmp_path, "g.json", GAME))
    data = json.loads(out)
    assert code == 0 and data["region"] == "R5/Case2" and data["pi_A"] == 0.527777778
    assert data["pi_A"] == round(bl_payoff_nocost(BernoulliEndowment(3, 0.2, 0.5), 1.0).player_a, 9)


def test_payoff_complete_information_route(tmp_path, capsys):
    game = {**GAME, "endowment": {"A1": 3, "A2": 0.2, "p": 1}}
    code, out = run(capsys, "payoff", write(tmp_path, "g.json", game))
    assert code == 0 and json.loads(out)["region"] == "CI"


@pytest.mark.parametrize("text", ["{bad", "[1, 2]", json.dumps({"endowment": {"A1": 1, "A2": 2, "p": 0.5},
                                                                  "opponent": {"B": 1}})])
def test_validation_exit_code(tmp_path, capsys, text):
    assert main(["payoff", write(tmp_path, "g.json", text)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_is_io_error(tmp_path):
    assert main(["payoff", str(tmp_path / "nope.json")]) == 4


def test_strategy_invest_randomize(tmp_path, capsys):
    path = write(tmp_path, "g.json", GAME)
    code, out = run(capsys, "strategy", path)
    assert code == 0 and "f_b" in json.loads(out)["profile"]
    cost_game = write(tmp_path, "c.json", {**GAME, "opponent": {"B": "inf", "c": 0.5}})
    code, out = run(capsys, "invest", cost_game)
    assert code == 0 and json.loads(out)["spend"] == pytest.approx(0.316227766)
    ci_game = write(tmp_path, "r.json", {"endowment": {"A1": 1, "A2": 1, "p": 1},
                                         "opponent": {"B": "inf", "c": 0.125}})
    code, out = run(capsys, "randomize", ci_game)
    data = json.loads(out)
    assert code == 0 and (data["A1"], data["A2"], data["p"], data["pi_A"]) == (2.0, 0.0, 0.5, 0.5)
    code, out = run(capsys, "randomize", ci_game, "--p", "0.25")
    assert json.loads(out)["pi_A"] == 0.375


def test_commander_modes(tmp_path, capsys):
    path = write(tmp_path, "k.json", COMMANDER)
    code, out = run(capsys, "commander", path, "--mode", "rand")
    data = json.loads(out)
    assert code == 0 and data["W"] == 0.375 and len(data["support"]) == 4
    code, out = run(capsys, "commander", path, "--mode", "det")
    assert json.loads(out)["W"] == 0.09375
    assert main(["commander", path, "--mode", "general"]) == 3


def test_commander_fixed_budget_equal(tmp_path, capsys):
    path = write(tmp_path, "k.json", {"c": 0, "c1": 0, "c2": 0, "phi1": 1, "phi2": 2, "A": 2, "B1": 0.5, "B2": 1.5})
    _, det = run(capsys, "commander", path, "--mode", "det")
    _, rand = run(capsys, "commander", path, "--mode", "rand")
    assert json.loads(det)["W"] == pytest.approx(json.loads(rand)["W"], abs=1e-4)


def test_commander_general_reports_tolerance(tmp_path, capsys):
    path = write(tmp_path, "k.json", {"c": 0.3, "c1": 1, "c2": 1, "phi1": 1, "phi2": 2, "A": 1, "B1": 0.4, "B2": 0.4})
    code, out = run(capsys, "commander", path, "--mode", "general")
    data = json.loads(out)
    assert code == 0 and data["grid_tolerance"] < 3e-4 and data["W_rand"] >= data["W_det"]


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_commander_sweep(tmp_path, capsys):
    sweep = {"parameter": "commander_cost", "range": [0.1, 5, 100],
             "instance": {"c1": 1, "c2": 2, "phi1": 1, "phi2": 1}}
    out_path = tmp_path / "s.csv"
    assert main(["sweep", write(tmp_path, "s.json", sweep), "--out", str(out_path)]) == 0
    text = out_path.read_bytes()
    assert text.startswith(b"c,W_det,W_rand,ratio,setting\n") and b"\r" not in text
    rows = read_csv(text.decode())
    assert len(rows) == 100
    for row in rows:
        ratio = float(row["ratio"])
        assert 1 - 1e-9 <= ratio <= 4 + 1e-9
        if float(row["c"]) > 3.7321:
            assert ratio == 4.0
    main(["sweep", write(tmp_path, "s.json", sweep), "--out", str(tmp_path / "t.csv")])
    assert (tmp_path / "t.csv").read_bytes() == text


def test_two_step_sweep(tmp_path, capsys):
    sweep = {"parameter": "commander_cost", "range": [1, 2, 2], "instance": {"c1": 1, "c2": 2, "phi1": 1, "phi2": 1}}
    code, out = run(capsys, "sweep", write(tmp_path, "s.json", sweep))
    rows = read_csv(out)
    assert code == 0 and [float(r["c"]) for r in rows] == [1.0, 2.0]


def test_bad_sweep_range(tmp_path):
    sweep = {"parameter": "commander_cost", "range": [2, 1, 5], "instance": COMMANDER}
    assert main(["sweep", write(tmp_path, "s.json", sweep)]) == 2


def test_unwritable_output(tmp_path):
    sweep = {"parameter": "commander_cost", "range": [1, 2, 2], "instance": COMMANDER}
    assert main(["sweep", write(tmp_path, "s.json", sweep), "--out", str(tmp_path / "no" / "x.csv")]) == 4


def test_opponent_cost_sweep_doubles_benchmark(tmp_path, capsys):
    sweep = {"parameter": "opponent_cost", "range": [0, 1, 101],
             "instance": {"endowment": {"A1": 2.5, "A2": 0.5, "p": 0.5}, "opponent": {"B": "inf", "c": 1}}}
    code, out = run(capsys, "sweep", write(tmp_path, "s.json", sweep))
    rows = read_csv(out)
    assert code == 0 and list(rows[0]) == ["c", "pi_A_fixed", "pi_A_optimal", "pi_A_ci"]
    for row in rows:
        c = float(row["c"])
        if 0 < c < 1 / 3:
            assert float(row["pi_A_optimal"]) == pytest.approx(2 * float(row["pi_A_ci"]), rel=1e-8)


def test_verify(tmp_path, capsys):
    r3 = write(tmp_path, "r3.json", {**GAME, "endowment": {"A1": 6, "A2": 1.5, "p": 0.5}})
    code, out = run(capsys, "verify", r3)
    assert code == 0 and json.loads(out)["epsilon"] <= 1e-4
    code, out = run(capsys, "verify", r3, "--perturb")
    assert code == 5 and json.loads(out)["certified"] is False
    code, out = run(capsys, "verify", write(tmp_path, "g.json", GAME), "--mc", "1000000", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["monte_carlo"]["within_3se"]
