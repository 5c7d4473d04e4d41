import io
import json
from pathlib import Path

from fractions import Fraction
from hypothesis import given, strategies as st

from gradedreg import cli

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_betti_text_cube():
    code, out, _ = run("betti", "--input", str(DATA / "example_iii.json"), "--module", "k", "--imax", "6",
                       "--jmax", "10")
    assert code == 0
    assert out == ("   0 1 2 3 4 5 6\n"
                   "0: 1 1 . . . . .\n"
                   "1: . . 1 1 . . .\n"
                   "2: . . . . 1 1 .\n"
                   "3: . . . . . . 1\n")


def test_betti_single_entry():
    code, out, _ = run("betti", "--input", str(DATA / "example_i.json"), "--module", "R")
    assert code == 0 and out == "   0\n0: 1\n"


def test_betti_v1_linear_strand():
    code, out, _ = run("betti", "--input", str(DATA / "example_i.json"), "--module", "V1", "--imax", "4")
    assert out.splitlines()[1] == "0: 2 2 2 2 2"


def test_betti_json_csv():
    code, out, _ = run("betti", "--input", str(DATA / "example_iii.json"), "--module", "k", "--imax", "3",
                       "--jmax", "6", "--format", "json")
    doc = json.loads(out)
    assert doc["result"]["betti"] == [{"i": 0, "j": 0, "beta": 1}, {"i": 1, "j": 1, "beta": 1},
                                      {"i": 2, "j": 3, "beta": 1}, {"i": 3, "j": 4, "beta": 1}]
    assert doc["caps"] == {"i_max": 3, "j_max": 6}
    code, out, _ = run("betti", "--input", str(DATA / "example_iii.json"), "--module", "k", "--imax", "3",
                       "--jmax", "6", "--format", "csv")
    assert out.splitlines() == ["i,j,beta", "0,0,1", "1,1,1", "2,3,1", "3,4,1"]


def test_koszul_command():
    code, out, _ = run("koszul", "--input", str(DATA / "example_i.json"), "--imax", "6", "--jmax", "10")
    assert code == 0 and out.strip() == "KoszulUpToWindow"
    code, out, _ = run("koszul", "--input", str(DATA / "example_iii.json"), "--format", "json")
    assert json.loads(out)["result"] == {"verdict": "NotKoszul", "witness": [2, 3]}


def test_frobenius_command():
    code, out, _ = run("frobenius", "--input", str(DATA / "example_iii.json"), "--e", "1", "--piece", "all",
                       "--format", "json")
    pieces = json.loads(out)["result"]["pieces"]
    assert [(p["piece"], p["dims"]) for p in pieces] == [("V_0", [1, 1]), ("V_1", [1])]


def test_reg_and_reg_hom():
    code, out, _ = run("reg", "--input", str(DATA / "example_i.json"), "--module", "V1", "--format", "json")
    reg = json.loads(out)["result"]["reg"]
    assert reg == {"num": 0, "den": 1, "text": "0"}
    code, out, _ = run("reg-hom", "--input", str(DATA / "example_i.json"), "--hom", str(DATA / "frobenius_hom.json"),
                       "--format", "json")
    assert json.loads(out)["result"]["reg"]["text"] == "1/2"
    code, out, _ = run("reg-hom", "--input", str(DATA / "poly_source.json"), "--hom",
                       str(DATA / "square_into_plane.json"), "--imax", "5")
    assert out.strip().endswith("reg_h = 1 witness=(1,4) [certified]")


def test_veronese_and_tower():
    code, out, _ = run("veronese", "--input", str(DATA / "example_ii.json"), "--d", "2", "--piece", "0",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["pieces"][0]["dims"][:3] == [1, 4, 6]
    code, out, _ = run("tower", "--input", str(DATA / "example_i.json"), "--module", "M", "--steps", "2")
    assert code == 0 and out.count("level") == 2


def test_exit_codes(tmp_path):
    assert run("betti", "--input", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": 2, "ring": {"vars": ["x"], "relations": ["x^2+x"]}}')
    code, _, err = run("betti", "--input", str(bad))
    assert code == 2 and "ring.relations" in err
    bad.write_text('{"field": 2, "ring": {"vars": ["x"]}, "modules": {"M": {"kind": "nope"}}}')
    code, _, err = run("betti", "--input", str(bad), "--module", "M")
    assert code == 2 and "modules.M.kind" in err
    win = tmp_path / "win.json"
    win.write_text('{"field": 2, "ring": {"vars": ["x","y"]},'
                   ' "modules": {"M": {"kind": "cokernel", "twists": [0], "relations": [["x^20"]]}}}')
    assert run("betti", "--input", str(win), "--module", "M", "--jmax", "3")[0] == 3
    assert run("verify", "--suite", "nosuch")[0] == 2


def test_verify_command():
    code, out, _ = run("verify", "--suite", "order-composition")
    assert code == 0 and out.startswith("order-composition: pass")


def test_verify_failure_exit(monkeypatch):
    from gradedreg import suites

    def broken(caps):
        rep = suites.SuiteReport("broken", caps)
        rep.add("1 <= 0", 1, 0, "<=", True)
        return rep

    monkeypatch.setitem(suites.SUITES, "broken", broken)
    code, out, _ = run("verify", "--suite", "broken")
    assert code == 1 and "FAIL" in out


def test_renderer_purity():
    args = ("betti", "--input", str(DATA / "example_i.json"), "--module", "V1", "--imax", "3")
    assert run(*args)[1] == run(*args)[1]


@given(st.one_of(st.none(), st.fractions(max_denominator=50)))
def test_rational_roundtrip(v):
    assert cli.rational_from_json(json.loads(json.dumps(cli.rational_json(v)))) == v


def test_report_roundtrip():
    code, out, _ = run("reg-hom", "--input", str(DATA / "example_i.json"), "--hom", str(DATA / "frobenius_hom.json"),
                       "--format", "json", "--imax", "4")
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert cli.rational_from_json(doc["result"]["reg"]) == Fraction(1, 2)


def test_rational_field(tmp_path):
    doc = tmp_path / "q.json"
    doc.write_text(json.dumps({"field": "Q", "ring": {"vars": ["x", "y"], "relations": ["x*y"]},
                               "modules": {"M": {"kind": "cokernel", "twists": [0],
                                                 "relations": [["x-y"]]}}}))
    code, out, _ = run("betti", "--input", str(doc), "--module", "k", "--imax", "3", "--jmax", "5")
    assert code == 0
    assert out.splitlines()[1] == "0: 1 2 2 2"
    code, out, _ = run("reg", "--input", str(doc), "--module", "M")
    assert code == 0 and out.startswith("reg = 0")
