import json
import subprocess
import sys
from pathlib import Path

import pytest

from tamepl.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(args, capsys):
    code, out, _ = run(args, capsys)
    return code, json.loads(out)


def test_validate_square(capsys):
    code, rep = run_json(["validate", FIX / "square.json"], capsys)
    assert code == 0 and rep["ok"]


def test_resolve_interval(capsys):
    code, rep = run_json(["resolve", FIX / "interval.json", "--kind", "upset"], capsys)
    assert code == 0
    assert rep["poset_resolution"]["generators"] == {"-1": ["c"], "0": ["b"]}
    assert rep["summands"] == 2
    assert all(v["ok"] for v in rep["verification"].values())


def test_resolve_downset_adjusted(capsys):
    code, rep = run_json(["resolve", FIX / "interval.json", "--kind", "downset", "--adjust"], capsys)
    assert code == 0
    assert rep["adjusted"] and list(rep["verification"]) == ["conic"]
    terms = rep["indicator_complex"]["terms"]
    assert [s["faces"] for s in terms["0"]] == [["--", "0-", "+-", "+0"]]


def test_stratify_square(capsys):
    code, rep = run_json(["stratify", FIX / "square.json"], capsys)
    assert code == 0
    assert len(rep["strata"]) == 1
    assert rep["strata"][0]["homology"] == {"0": 1}


def test_clip_square(capsys):
    code, rep = run_json(["clip", FIX / "square.json"], capsys)
    assert code == 0
    assert rep["p0"] == ["-1", "-1"] and rep["p1"] == ["2", "2"]
    assert len(rep["pieces"]) == 4


def test_validate_bad_assign(capsys):
    code, rep = run_json(["validate", FIX / "bad_assign.json"], capsys)
    assert code == 1 and not rep["ok"]
    assert ["00", "++"] in rep["checks"]["encoding"]


@pytest.mark.parametrize("cmd", ["stratify", "clip"])
def test_noncompact_exit_2(cmd, capsys):
    code, rep = run_json([cmd, FIX / "quadrant.json"], capsys)
    assert code == 2
    assert rep["error"] == "PreconditionError"
    assert "compact" in rep["message"]


def test_stalk(capsys):
    code, rep = run_json(["stalk", FIX / "square.json", "--point", "1/2,1"], capsys)
    assert code == 0 and rep["homology"] == {"0": 1}
    code, rep = run_json(["stalk", FIX / "square.json", "--point", "0,0"], capsys)
    assert code == 0 and rep["homology"] == {}
    code, rep = run_json(["stalk", FIX / "square.json", "--point", "0,0", "--semantics", "alexandrov"], capsys)
    assert rep["homology"] == {"0": 1}
    code, rep = run_json(["stalk", FIX / "square.json", "--point", "1"], capsys)
    assert code == 2 and rep["path"] == "--point"


def test_schema_error_has_pointer(tmp_path, capsys):
    doc = json.loads((FIX / "square.json").read_text())
    doc["poset"]["elements"] = "oops"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, rep = run_json(["validate", p], capsys)
    assert code == 2
    assert rep["path"] == "/poset/elements"


def test_semantic_error_has_pointer(tmp_path, capsys):
    doc = json.loads((FIX / "interval.json").read_text())
    doc["module"]["rank"]["zz"] = 1
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, rep = run_json(["validate", p], capsys)
    assert code == 2 and rep["path"] == "/module/rank/zz"


def test_invalid_json(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{nope")
    code, _, err = run(["validate", p], capsys)
    assert code == 2 and "invalid JSON" in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = run(["validate", tmp_path / "absent.json"], capsys)
    assert code == 2


def test_out_flag_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["resolve", FIX / "square.json", "--out", a], capsys)[0] == 0
    assert run(["resolve", FIX / "square.json", "--out", b], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")


def test_round_trip_through_check(tmp_path, capsys):
    for cmd in ("resolve", "stratify", "clip", "validate"):
        out = tmp_path / f"{cmd}.json"
        assert run([cmd, FIX / "square.json", "--out", out], capsys)[0] == 0
        code, rep = run_json(["check", out], capsys)
        assert code == 0, rep
        assert all(p["pass"] for p in rep["properties"].values())


def test_check_parallel_matches_serial(tmp_path, capsys):
    r1, r2 = tmp_path / "1.json", tmp_path / "2.json"
    assert run(["check", FIX / "interval.json", "--report", r1], capsys)[0] == 0
    assert run(["check", FIX / "interval.json", "--parallel", "3", "--report", r2], capsys)[0] == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_prime_field_flag(capsys):
    code, rep = run_json(["resolve", FIX / "square.json", "--field", "fp:7"], capsys)
    assert code == 0 and rep["field"] == "fp:7"
    code, rep = run_json(["resolve", FIX / "square.json", "--field", "fp:8"], capsys)
    assert code == 2


def test_check_on_quadrant_skips_geometry(capsys):
    code, rep = run_json(["check", FIX / "quadrant.json"], capsys)
    assert code == 0
    assert rep["properties"]["stratification"]["detail"].startswith("skipped")


def test_process_exit_codes():
    py = sys.executable
    ok = subprocess.run([py, "-m", "tamepl", "validate", str(FIX / "square.json")], capture_output=True)
    assert ok.returncode == 0
    bad = subprocess.run([py, "-m", "tamepl", "stratify", str(FIX / "quadrant.json")], capture_output=True)
    assert bad.returncode == 2 and b"compact" in bad.stderr


def test_fixtures_are_current():
    sys.path.insert(0, str(FIX))
    import make_fixtures
    from tamepl.serialize import dumps
    for name in ("interval", "square", "quadrant", "bad_assign"):
        assert (FIX / f"{name}.json").read_text() == dumps(getattr(make_fixtures, name)())
