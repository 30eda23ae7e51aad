import json
import subprocess
import sys

import pytest

from ploi.cli import main, parse_group, parse_map
from ploi.construct import alpha1, alpha2, beta, bump
from ploi.plcore import Interval, rational


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    assert run(capsys, "eval", "a1", "1/4") == (0, "1/2\n", "")
    code, out, _ = run(capsys, "eval", "a2", "1/4", "5/16", "3/8", "1/2", "--format", "csv")
    assert out == "x,y\n1/4,1/4\n5/16,3/8\n3/8,7/16\n1/2,1/2\n"


def test_classify(capsys):
    assert run(capsys, "classify", "w:2", "--radius", "2") == (0, "Wr[Wr[1]], derived length 2, embeds in G_2\n", "")
    code, out, _ = run(capsys, "classify", "g:2:1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["derived_length"] == 2 and data["certificate"]["orbital_tree"]


def test_classify_obstruction_exit_code(capsys):
    code, out, _ = run(capsys, "classify", "bump:1/8:1/2", "bump:1/4:3/4")
    assert code == 1 and out.startswith("obstruction (transition-chain)")


def test_depth(capsys):
    code, out, _ = run(capsys, "depth", "w:3", "--radius", "3")
    data = json.loads(out)
    assert code == 0 and data["height"] == 3 and len(data["witness"]) == 3


def test_balance(capsys):
    code, out, _ = run(capsys, "balance", "a1", "bump:0:1/2", "--radius", "1")
    assert code == 1 and json.loads(out)["status"] == "ImbalancedWitness"
    code, out, _ = run(capsys, "balance", "w:2", "--format", "text")
    assert code == 0 and out == "BalancedUpToRadius\n"


def test_orbitals_and_towers(capsys):
    code, out, _ = run(capsys, "orbitals", "a2", "beta:1", "--format", "text")
    assert code == 0 and out == "group orbitals: (1/4, 1/2) (1/2, 3/4)\n"
    code, out, _ = run(capsys, "orbitals", "bump:1/8:1/2", "bump:1/4:3/4", "--radius", "1")
    assert code == 1 and json.loads(out)["transition_chains"]
    code, out, _ = run(capsys, "towers", "w:2", "--format", "text")
    assert out == "height 2: (1/4, 1/2) < (0, 1)\n"


def test_phi_controller(capsys):
    code, out, _ = run(capsys, "phi", "a1", "--format", "text")
    assert out == "a1 (2, 1/2)\nlattice: Cyclic, rank 1, generator (2, 1/2)\n"
    code, out, _ = run(capsys, "controller", "w:2", "--orbital", "0:1", "--radius", "1", "--format", "text")
    assert code == 0 and out == "a1 slopes (2, 1/2)\n"
    code, out, _ = run(capsys, "controller", "a2", "--orbital", "0:1")
    assert code == 1


def test_split(capsys):
    code, out, _ = run(capsys, "split", "a2", "beta:2", "--orbital", "1/4:1/2", "--product", "beta:2,a2", "--radius", "1")
    data = json.loads(out)
    assert code == 0 and data["element"] == alpha2().to_json()
    assert data["trace"][-1]["step"] == "done"


def test_make_compose_graph(capsys, tmp_path):
    code, out, _ = run(capsys, "make", "a1")
    assert json.loads(out) == {"a1": {"breakpoints": [["0", "0"], ["1/4", "1/2"], ["1/2", "3/4"], ["1", "1"]]}}
    code, out, _ = run(capsys, "compose", "a1", "a1", "--format", "text")
    assert json.loads(out)["breakpoints"][1] == ["1/8", "1/2"]
    target = tmp_path / "g.svg"
    code, out, _ = run(capsys, "graph", "a1", "a2", "--out", str(target))
    svg = target.read_text()
    assert code == 0 and out == "" and svg.startswith("<svg") and svg.count("<polyline") == 3
    code, out, _ = run(capsys, "graph", "a1", "--format", "csv")
    assert out.splitlines()[:2] == ["name,x,y", "a1,0,0"]


def test_errors(capsys):
    code, _, err = run(capsys, "eval", "a1", "1/0")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "eval", "nope", "1/2")
    assert code == 2
    code, _, err = run(capsys, "graph", "a1", "--format", "json")
    assert code == 2


def test_parsers():
    assert parse_map("beta:1") == beta(1)
    assert parse_map("bump:1/8:1/2") == bump(Interval(rational("1/8"), rational("1/2")))
    assert parse_map('[[0,0],["1/4","1/2"],["1/2","3/4"],[1,1]]') == alpha1()
    assert len(parse_group(["w:3"])) == 3
    assert len(parse_group(["g:2:1"])) == 6
    assert len(parse_group(["w:2", "beta:1"])) == 3


@pytest.mark.parametrize("argv", [["classify", "g:2:1", "--format", "json"], ["graph", "a1", "a2"], ["depth", "w:3", "--radius", "3"]])
def test_byte_stable_subprocess(argv):
    outs = {subprocess.run([sys.executable, "-m", "ploi", *argv], capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1
