import json
import subprocess
import sys

import pytest

from stablevote.cli import main

MAJ3 = "mwc@3:{1,2|1,3|2,3}"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("argv,code", [
    (["analyze", MAJ3], 0),
    (["index", "banzhaf", "wt:[3;2,1,1]"], 0),
    (["axioms", "shapley_shubik", "3"], 0),
    (["axioms", "public_help", "3"], 1),
    (["stability", "ms", "shapley_shubik", "mwc@3:{1,2}"], 0),
    (["stability", "ms", "shapley_shubik", MAJ3], 1),
    (["stability", "wms", "banzhaf", MAJ3], 1),
    (["constitution", "shapley_shubik", MAJ3, "mwc@3:{1,2,3}"], 0),
    (["constitution", "shapley_shubik", MAJ3, MAJ3], 1),
    (["census", "equal_swing", "3"], 0),
    (["verify", "theorem1", "shapley_shubik", "3"], 0),
    (["verify", "theorem1", "public_help", "3"], 1),
    (["verify", "theorem2", "banzhaf", "3"], 0),
    (["verify", "corollaries", "3"], 0),
    (["realworld", "un"], 0),
    (["realworld", "china"], 0),
    (["realworld", "us"], 0),
    (["analyze", "mwc@3:{1|1,2}"], 2),
    (["analyze", "mwc@3:{1,2"], 2),
    (["index", "nucleolus", MAJ3], 2),
    (["census", "banzhaf", "6"], 2),
    (["index", "banzhaf", "qr@193:[129;req=1,2,3,4,5]"], 2),
    (["realworld", "/no/such/file.csv"], 2),
])
def test_exit_status(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "theorem1", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["stability", "xs", "banzhaf", MAJ3])
    assert exc.value.code == 2


def test_structured_output(capsys):
    code, out = run(capsys, "index", "banzhaf", "wt:[3;2,1,1]", "--format", "structured")
    doc = json.loads(out.out)
    assert code == 0 and doc["schema"] == "stablevote.cli/1"
    assert doc["result"]["values"] == ["3/5", "1/5", "1/5"]


def test_realworld_text(capsys):
    code, out = run(capsys, "realworld", "un")
    assert "Indeterminate" in out.out and "France, China, Russia, UK, US" in out.out
    doc = json.loads(run(capsys, "realworld", "us", "--format", "structured")[1].out)
    assert doc["result"]["extraordinary"]["oligarchic"]["players"] == ["Dem", "Rep"]
    assert doc["result"]["ordinary"]["oligarchic"]["players"] == ["Rep"]


def test_epsilon_flag(capsys):
    doc = json.loads(run(capsys, "index", "veto_epsilon", "mwc@3:{1,2|1,3}", "--epsilon", "1/100",
                         "--format", "structured")[1].out)
    assert doc["result"]["index"] == "veto_epsilon:1/100"
    assert doc["result"]["values"][1] == "1/2700"


def test_out_directory(capsys, tmp_path):
    code, _ = run(capsys, "verify", "theorem1", "banzhaf", "3", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "theorem1_banzhaf_n3.json").is_file()
    run(capsys, "census", "banzhaf", "3", "--out", str(tmp_path))
    assert (tmp_path / "census_ms_banzhaf_n3.json").is_file()


def test_sampled_pair_census_is_bit_identical(capsys, tmp_path):
    args = ["verify", "theorem2", "banzhaf", "5", "--budget", "500", "--seed", "11", "--format", "structured"]
    a = json.loads(run(capsys, *args)[1].out)
    b = json.loads(run(capsys, *args)[1].out)
    for doc in (a, b):
        for r in doc["result"]["reports"]:
            r.pop("wall_clock_seconds")
    assert a == b and a["result"]["reports"][0]["seed"] == 11


def test_axiom_table_command(capsys):
    code, out = run(capsys, "verify", "table1", "3")
    assert "not implemented" in out.out


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "stablevote.cli", "analyze", "wt:[1;1,0,0]"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "oligarchic  {1}" in out.stdout
