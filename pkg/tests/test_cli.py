import json
import subprocess
import sys

import pytest

from latglue import cli
from latglue.lattice import direct_sum, make_ade, make_hyperbolic


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def a2(tmp_path):
    return write(tmp_path, "a2.json", {"rank": 2, "gram": [[-2, 1], [1, -2]], "labels": ["a", "b"]})


def test_discform(a2, capsys):
    code, out, _ = run(["discform", a2], capsys)
    data = json.loads(out)
    assert code == 0 and data["invariant_factors"] == [3]
    assert data["q"] == ["4/3"] and data["b"] == [["1/3"]]


def test_roots_all(tmp_path, capsys):
    path = write(tmp_path, "e6.json", make_ade("E6").to_json())
    code, out, _ = run(["roots", path, "--all"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 72 and data["types"] == ["E6"] and len(data["roots"]) == 72


def test_glue_overlattices(tmp_path, capsys):
    path = write(tmp_path, "l.json", direct_sum([make_ade("A2"), make_ade("E6")]).to_json())
    code, out, _ = run(["glue", "overlattices", path], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 3
    assert [o["index"] for o in data["overlattices"]] == [1, 3, 3]
    assert all("/" in c or c in ("0", "1") for o in data["overlattices"] for v in o["glue_vectors"] for c in v)


def test_glue_saturate_and_complement(tmp_path, capsys):
    amb = write(tmp_path, "e8.json", make_ade("E8").to_json())
    sub = write(tmp_path, "sub.json", {"basis": [[0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0],
                                                 [0, 0, 0, 0, 0, 0, 0, 1], [0, 1, 2, 1, 0, 0, 0, 1]]})
    code, out, _ = run(["glue", "saturate", amb, sub], capsys)
    assert code == 0 and json.loads(out)["index"] == 2
    a2 = write(tmp_path, "a2sub.json", {"basis": [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]]})
    code, out, _ = run(["complement", amb, a2], capsys)
    data = json.loads(out)
    assert code == 0 and data["rank"] == 6 and data["discriminant"] == 3 and data["roots"] == 72


def test_complement_indefinite(tmp_path, capsys):
    amb = write(tmp_path, "ue8.json", direct_sum([make_hyperbolic(), make_ade("E8")]).to_json())
    sub = write(tmp_path, "u.json", {"basis": [[1] + [0] * 9, [0, 1] + [0] * 8]})
    code, out, _ = run(["complement", amb, sub], capsys)
    data = json.loads(out)
    assert code == 0 and data["rank"] == 8 and data["discriminant"] == 1 and data["roots"] == 240


def test_scan_text(capsys):
    code, out, _ = run(["glue", "scan", "--p", "2", "--rmax", "3", "--format", "text"], capsys)
    assert code == 0 and "no overlattice for r <= 3" in out


def test_graph_analyze(tmp_path, capsys):
    from latglue.curvegraph import figure_catalog
    path = write(tmp_path, "g.json", figure_catalog()["d5_d5_a1"].to_json())
    code, out, _ = run(["graph", "analyze", path], capsys)
    data = json.loads(out)
    assert code == 0 and data["orthogonal_vertices"] == ["R1", "R2"]
    assert data["orthogonal_types"] == ["A1", "A1"]


@pytest.mark.parametrize("args, code, kind", [
    (["roots"], 2, "usage"),
    (["bogus"], 2, "usage"),
    (["discform", "/nonexistent.json"], 2, "domain"),
    (["glue", "scan", "--p", "4", "--rmax", "2"], 2, "domain"),
    (["--max-disc-group", "0", "glue", "scan", "--p", "2", "--rmax", "2"], 2, "domain"),
])
def test_error_codes(args, code, kind, capsys):
    got, _, err = run(args, capsys)
    assert got == code
    assert json.loads(err)["error"] == kind


def test_schema_and_domain_errors(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"gram": [[1.5]]})
    code, _, err = run(["discform", bad], capsys)
    assert code == 2 and "schema" in json.loads(err)["message"]
    asym = write(tmp_path, "asym.json", {"gram": [[-2, 1], [0, -2]]})
    code, _, err = run(["discform", asym], capsys)
    assert code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    code, _, _ = run(["discform", str(broken)], capsys)
    assert code == 2
    indef = write(tmp_path, "u.json", make_hyperbolic().to_json())
    code, _, _ = run(["roots", indef], capsys)
    assert code == 2


def test_resource_cap(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "a1.json", direct_sum([make_ade("A1")] * 5).to_json())
    code, _, err = run(["--max-disc-group", "16", "glue", "overlattices", path], capsys)
    assert code == 3 and json.loads(err)["required"] == 32
    monkeypatch.setenv("GLUE_MAX_DISC_GROUP", "8")
    code, _, _ = run(["glue", "overlattices", path], capsys)
    assert code == 3
    code, _, _ = run(["roots", path, "--max-rank", "3"], capsys)
    assert code == 3


def test_verification_failure_exit(monkeypatch, capsys):
    from latglue import verify
    from latglue.errors import VerificationError

    def broken():
        raise VerificationError("forced")

    monkeypatch.setattr(verify, "CHECKS", [("forced", broken)])
    code, out, err = run(["verify-paper"], capsys)
    assert code == 1 and json.loads(out)["passed"] is False
    assert json.loads(err)["error"] == "verification"


def test_byte_identical_runs(tmp_path):
    path = write(tmp_path, "l.json", direct_sum([make_ade("A1")] * 4 + [make_ade("D4")]).to_json())
    cmd = [sys.executable, "-m", "latglue", "glue", "overlattices", path]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_to_plain():
    from fractions import Fraction
    assert cli.to_plain({"x": (Fraction(1, 2), 3), "s": frozenset({2, 1})}) == {"x": ["1/2", 3], "s": [1, 2]}
