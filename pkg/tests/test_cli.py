import json

import pytest

from kerind.cli import main
from kerind.report import run
from kerind.scenario import ScenarioError, load_scenario, parse_scenario

F4 = """schema: kerind-scenario/1
name: f4
ring: F4
group: C2
action:
  generators: [frobenius]
tasks:
  - command: h1
    n: [1, 2]
"""


def test_parse_f4_fixture():
    sc = load_scenario("f4-frobenius")
    assert sc.action.ring.size == 4 and sc.group.order == 2


def test_empty_task_list():
    sc = parse_scenario(F4.split("tasks:")[0] + "tasks: []\n")
    rep = run(sc)
    assert rep.tasks == [] and rep.ok


def test_parse_error_location():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("name: x\nring: [F4\ngroup: C2\n")
    assert err.value.line is not None and err.value.column is not None


def test_validation_errors():
    with pytest.raises(ScenarioError, match="not a homomorphism|respect"):
        parse_scenario(F4.replace("group: C2", "group: C3"))
    with pytest.raises(ScenarioError, match=r"\(\*\) has no witness"):
        parse_scenario(F4.replace("ring: F4", "ring: Z/8").replace("[frobenius]", "[identity]"))
    with pytest.raises(ScenarioError, match="unknown command") as err:
        parse_scenario(F4.replace("command: h1", "command: nope"))
    assert err.value.line == 8
    with pytest.raises(ScenarioError, match="cap must be positive"):
        parse_scenario(F4 + "    cap: 0\n")
    with pytest.raises(ScenarioError, match="unknown keys"):
        parse_scenario(F4 + "colour: blue\n")


def test_h1_command_dual():
    rep = run(load_scenario("z3-dual-negate"), "h1", [1])
    assert len(rep.tasks[0].result["levels"][0]["classes"]) == 2


def test_pic_command():
    rep = run(load_scenario("lattice-neg-z"), "pic")
    assert rep.tasks[0].result["pic"]["invariant_factors"] == []


def test_determinism():
    a = run(load_scenario("f3-mixed-negate"), "verify-theorem", [1])
    b = run(load_scenario("f3-mixed-negate"), "verify-theorem", [1])
    assert a.digest == b.digest and a.ok


def test_cap_exceeded_is_reported():
    rep = run(load_scenario("f3-mixed-negate"), "h1", [2], cap=100)
    assert rep.tasks[0].status == "cap-exceeded"


def test_command_mismatch_is_an_error():
    rep = run(load_scenario("lattice-neg-z"), "oracle")
    assert rep.tasks[0].status == "error" and not rep.ok


def test_all_expands():
    rep = run(load_scenario("lattice-swap-z2"), "all")
    assert [t.command for t in rep.tasks] == ["h1", "pic", "coinvariants"]


def test_cli_json_and_exit(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["--scenario", "z3-dual-negate", "--command", "verify-theorem", "--n", "1", "--json", str(out), "--seed", "3"])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["schema"] == "kerind-report/1" and len(data["digest"]) == 64
    row = data["tasks"][0]["result"]["levels"][0]
    assert row["agree"] and row["disagreements"] == []
    assert "verify-theorem" in capsys.readouterr().out


def test_cli_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: x\nring: [\n")
    assert main(["--scenario", str(bad)]) == 2
    assert main(["--scenario", "lattice-neg-z", "--n", "0"]) == 2
    assert main(["--scenario", "lattice-neg-z", "--command", "oracle"]) == 1
