import json
import subprocess
import sys

import pytest

from eistri.cli import EXIT_OK, EXIT_REFUSED, EXIT_UNKNOWN, main, run
from eistri.enumeration import CONJECTURE_TAG
from eistri.quasigroup import CayleyTable, TripleSystem, blocks_from


def doc(argv):
    res, code = run(argv)
    return res.document(), code


def test_roots():
    d, code = doc(["roots", "--p", "7", "--n", "2"])
    assert code == EXIT_OK and d["roots"] == [19, 31]


def test_roots_refuses_three():
    d, code = doc(["roots", "--p", "3", "--n", "1"])
    assert code == EXIT_REFUSED and d["status"] == "refused" and d["reason"]


def test_count():
    d, code = doc(["count", "--order", "21"])
    assert code == EXIT_OK and d["linear_count"] == 2 and d["distributive_count"] == 2
    assert d["assumptions"] == []


def test_count_unknown_and_strict():
    d, code = doc(["count", "--order", "729"])
    assert d["status"] == "unknown" and d["linear_count"] == "unknown" and d["reason"]
    assert code == EXIT_OK
    _, code = doc(["--strict", "count", "--order", "729"])
    assert code == EXIT_UNKNOWN
    _, code = doc(["count", "--order", "729", "--strict"])
    assert code == EXIT_UNKNOWN


def test_conjectural_numbers_carry_their_assumption():
    d, _ = doc(["count", "--order", "729", "--assume-conjecture"])
    assert d["linear_count"] == 11 and CONJECTURE_TAG in d["assumptions"]
    d, code = doc(["classes", "--prime-power", "3^7"])
    assert code == EXIT_REFUSED and d["reason"]
    d, code = doc(["classes", "--prime-power", "3^7", "--assume-conjecture"])
    assert code == EXIT_OK and d["count"] == 15 and CONJECTURE_TAG in d["assumptions"]
    d, code = doc(["decompose", "--desc", "ram:3^7", "--assume-conjecture"])
    assert code == EXIT_OK and CONJECTURE_TAG in d["assumptions"]
    d, _ = doc(["count", "--order", "243"])
    assert d["linear_count"] == 7 and d["assumptions"] == []


def test_check_pure():
    d, code = doc(["check", "--property", "pure", "--desc", "split:7^1:a"])
    assert code == EXIT_OK and d["pure"] is True
    d, _ = doc(["check", "--property", "pure", "--desc", "ram:3^1"])
    assert d["pure"] is False


@pytest.mark.parametrize("prop,desc,expected", [
    ("self-orthogonal", "split:7^1:a", True),
    ("self-converse", "split:7^1:a", False),
    ("self-converse", "inert:2^1", True),
    ("entropic", "ram:3^2", True),
    ("mendelsohn", "inert:5^1", True),
    ("LE", "split:7^1:a", False),
])
def test_check_properties(prop, desc, expected):
    d, code = doc(["check", "--property", prop, "--desc", desc])
    assert code == EXIT_OK and d[prop.replace("-", "_")] is expected


def test_factor_and_quotient():
    d, _ = doc(["factor", "--z", "3"])
    assert d["factors"] == [{"prime": "1+1*z", "exponent": 2}]
    d, _ = doc(["quotient", "--prime", "1+1*z", "--exp", "3", "--reps"])
    assert d["group"] == {"prime": 3, "exponents": [1, 2]}
    assert len(d["coset_reps"]) == 27 and d["coset_reps"][:2] == ["0+0*z", "1+0*z"]
    d, code = doc(["quotient", "--prime", "7", "--exp", "1"])
    assert code == EXIT_REFUSED


def test_construct_text_round_trip(capsys):
    assert main(["construct", "--desc", "split:7^1:a | inert:2^1", "--format", "text"]) == EXIT_OK
    text = capsys.readouterr().out
    ts = TripleSystem.from_text(text)
    assert ts.n == 28 and len(ts.blocks) == 28 * 27 // 3
    assert main(["construct", "--desc", "split:7^1:a | inert:2^1"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert blocks_from(CayleyTable.from_json(d["table"])) == ts
    assert [list(b) for b in ts.blocks] == d["blocks"]


def test_table_file_commands(tmp_path, capsys):
    main(["construct", "--desc", "split:7^1:b | ram:3^3"])
    d = json.loads(capsys.readouterr().out)
    path = tmp_path / "t.json"
    path.write_text(json.dumps(d["table"]))
    out, code = doc(["decompose", "--table", str(path)])
    assert code == EXIT_OK and out["descriptor"] == "ram:3^3 | split:7^1:b"
    out, _ = doc(["classify", "--table", str(path)])
    assert out["non_ramified"] is False and len(out["quotients"]) == 2
    out, _ = doc(["check", "--table", str(path), "--property", "self-orthogonal"])
    assert out["self_orthogonal"] is False
    bpath = tmp_path / "b.txt"
    main(["blocks", "--table", str(path), "--format", "text"])
    bpath.write_text(capsys.readouterr().out)
    out, _ = doc(["decompose", "--blocks", str(bpath)])
    assert out["descriptor"] == "ram:3^3 | split:7^1:b"


def test_bad_inputs_are_refused(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "table": [[0, 0], [1, 1]]}))
    d, code = doc(["decompose", "--table", str(bad)])
    assert code == EXIT_REFUSED and "Latin" in d["reason"]
    _, code = doc(["decompose", "--table", str(tmp_path / "missing.json")])
    assert code == EXIT_REFUSED
    _, code = doc(["decompose"])
    assert code == EXIT_REFUSED
    _, code = doc(["construct", "--desc", "split:5^1:a"])
    assert code == EXIT_REFUSED


def test_malformed_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        run(["count"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["nonsense"])
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_classes_sorted_and_deterministic():
    a, _ = doc(["classes", "--prime-power", "7^2"])
    b, _ = doc(["classes", "--prime-power", "7^2"])
    assert a == b and a["classes"] == sorted(a["classes"]) and a["count"] == 5


def test_oracle_and_lift():
    d, _ = doc(["oracle", "--group", "3:1,2"])
    assert d["solution_count"] == 6 and len(d["classes"]) == 1 and len(d["solutions"]) == 6
    d, _ = doc(["oracle", "--group", "3:1,2", "--max-list", "2"])
    assert d["solutions_truncated"] is True
    d, _ = doc(["oracle", "--prime-power", "7^2"])
    assert d["oracle_count"] == 5
    d, code = doc(["oracle", "--group", "3:3,3"])
    assert code == EXIT_REFUSED
    d, code = doc(["lift", "--matrix", "2,2;3,8", "--group", "3:1,2"])
    assert code == EXIT_OK and d["lift"] == [[2, -1], [3, -1]]
    d, code = doc(["lift", "--matrix", "2,-1;3,-1", "--group", "3:2,3", "--bound", "2"])
    assert d["status"] == "unknown" and d["reason"]


@pytest.mark.parametrize("name", ["roots", "order7", "mixedcong", "sl2", "charpoly", "l27"])
def test_selfcheck(name):
    d, code = doc(["selfcheck", "--only", name])
    assert code == EXIT_OK and d["all_pass"] is True
    assert d["checks"][0]["check"] == name and d["checks"][0]["seconds"] >= 0


def test_selfcheck_unknown_name():
    _, code = doc(["selfcheck", "--only", "nope"])
    assert code == EXIT_REFUSED


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "eistri.cli", "roots", "--p", "7", "--n", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["roots"] == [3, 5]
