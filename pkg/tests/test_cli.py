import json
import subprocess
import sys
from pathlib import Path

import pytest

from mackey_fusion.cli import EXIT_CAP, EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_group_inspect_d8(capsys):
    code, out = run(capsys, "group-inspect", str(DATA / "d8_group.json"))
    doc = json.loads(out)
    assert code == EXIT_PASS and doc["pass"] and doc["schema"] == 1
    res = doc["result"]
    assert res["order"] == 8 and res["center"]["order"] == 2
    assert res["subgroups"] == 10 and res["classes"] == 8


def test_group_inspect_trivial_group(capsys):
    code, out = run(capsys, "group-inspect", str(DATA / "c1_group.json"))
    res = json.loads(out)["result"]
    assert code == EXIT_PASS and res["order"] == 1 and res["classes"] == 1


def test_text_output(capsys):
    code, out = run(capsys, "group-inspect", str(DATA / "d8_group.json"), "--text")
    assert code == EXIT_PASS
    assert "order: 8" in out and "pass: PASS" in out


@pytest.mark.parametrize("path", ["d8_inner.json", "s4_ambient.json", "example43_inner.json",
                                  "c3xc3_generated.json"])
def test_limits_on_data_files(capsys, path):
    code, out = run(capsys, "limits", str(DATA / path))
    doc = json.loads(out)
    assert code == EXIT_PASS and doc["pass"]
    assert all(v == 0 for k, v in doc["result"]["dims"].items() if k != "lim0")


def test_missing_file_is_input_error(capsys, tmp_path):
    code, out = run(capsys, "limits", str(tmp_path / "nope.json"))
    assert code == EXIT_INPUT and json.loads(out)["error"] == "input"


def test_bad_schema_and_bad_group(capsys, tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"schema": 7, "named": "d8"}))
    assert run(capsys, "group-inspect", str(f))[0] == EXIT_INPUT
    f.write_text(json.dumps({"schema": 1, "cayley": [[0, 1], [0, 1]]}))
    assert run(capsys, "group-inspect", str(f))[0] == EXIT_INPUT
    f.write_text(json.dumps({"schema": 1, "group": {"named": "d8"}, "kind": "generated",
                             "maps": [{"generators": [[1, 2, 3, 0]], "images": [[0, 1, 3, 2]]}]}))
    assert run(capsys, "limits", str(f))[0] == EXIT_INPUT


def test_dumped_functor_round_trip_and_corruption(capsys, tmp_path):
    dump = tmp_path / "h1.json"
    code, out = run(capsys, "limits", str(DATA / "d8_inner.json"), "--dump-functor", str(dump))
    assert code == EXIT_PASS
    ref = json.loads(out)["result"]["dims"]
    code, out = run(capsys, "limits", str(DATA / "d8_inner.json"), "--functor", str(dump))
    assert code == EXIT_PASS and json.loads(out)["result"]["dims"] == ref
    doc = json.loads(dump.read_text())
    # zero every endomorphism of one nonzero object, so the identity is not sent to the identity
    a = next(k for k, d in enumerate(doc["functor"]["dims"]) if d)
    for m in doc["functor"]["morphisms"]:
        if m["src"] == m["tgt"] == a:
            m["matrix"] = [[0] * len(row) for row in m["matrix"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run(capsys, "limits", str(DATA / "d8_inner.json"), "--functor", str(bad))
    assert code == EXIT_INPUT and "not a functor" in json.loads(out)["message"]


def test_cap_exceeded(capsys):
    code, out = run(capsys, "limits", str(DATA / "s4_ambient.json"), "--cap", "1")
    assert code == EXIT_CAP and json.loads(out)["error"] == "cap"
    code, _ = run(capsys, "group-inspect", str(DATA / "d8_group.json"), "--cap", "4")
    assert code == EXIT_CAP


def test_repro_thm63_case2(capsys):
    code, out = run(capsys, "repro", "thm63", "--case", "2")
    assert code == EXIT_PASS and json.loads(out)["result"]["pass"]


def test_repro_bad_case(capsys):
    assert run(capsys, "repro", "thm63", "--case", "9")[0] == EXIT_INPUT
    assert run(capsys, "repro", "example43", "--p", "5")[0] == EXIT_INPUT


def test_repro_output_is_byte_identical(capsys):
    args = ("repro", "boundB", "--group", "d8", "--count", "5", "--seed", "7")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b
    assert json.loads(a)["config"]["seed"] == 7


def test_repro_example43_p3_shallow(capsys):
    code, out = run(capsys, "repro", "example43", "--p", "3")
    res = json.loads(out)["result"]
    assert code == EXIT_PASS and res["column"]["values"] == [1, 3, 3]
    assert "limits" not in res


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "mackey_fusion.cli", "group-inspect",
                        str(DATA / "c1_group.json")], capture_output=True, text=True)
    assert r.returncode == EXIT_PASS and json.loads(r.stdout)["pass"]


def test_exit_fail_constant_distinct():
    assert len({EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP}) == 4
