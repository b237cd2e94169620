import io
import json
import subprocess
import sys

import pytest

from abelspc.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return out


def test_spectrum_dot_for_z2():
    out = ok("spectrum", "-g", "2", "-p", "2", "--cap", "2", "--format", "dot")
    assert out.startswith("digraph spectrum {") and out.rstrip().endswith("}")
    # the Z/2 picture: two columns joined by P(0, n+1) -> P(Z/2, n)
    assert "s0_h2 -> s1_h1;" in out
    assert "s0_hinf -> s1_hinf;" in out
    assert "s0_h1 -> s1_h1;" not in out
    assert out.count("->") == 6


def test_blueshift_z4():
    assert ok("blueshift", "-g", "4", "-p", "2", "--H", "full", "--K", "trivial") == "1\n"
    doc = json.loads(ok("blueshift", "-g", "6", "-p", "2", "--H", "Z/2", "--format", "json"))
    assert doc["value"] == 1 and doc["criterion_derived"] is True


def test_admissible_false():
    assert ok("admissible", "-g", "2", "-p", "2", "--typefn", '{"1":2,"Z/2":0}') == "false\n"
    assert ok("admissible", "-g", "2", "-p", "2", "--typefn", '{"1":1,"Z/2":0}') == "true\n"


def test_domain_error_exit_1():
    code, out, err = run("blueshift", "-g", "6", "-p", "2", "--H", "full", "--K", "trivial")
    assert code == 1 and out == ""
    doc = json.loads(err)
    assert doc["error"] == "E_NOT_PGROUP_QUOTIENT"
    code, _, err = run("tate", "-g", "6", "-p", "2", "--family", "proper", "-n", "2")
    assert code == 1 and json.loads(err)["error"] == "E_NOT_PGROUP"
    code, _, err = run("kuhn", "-g", "2", "-p", "4", "-n", "2")
    assert code == 1 and json.loads(err)["error"] == "E_NOT_PRIME"


@pytest.mark.parametrize("argv", [
    ["spectrum", "-g", "Z/4xQ", "-p", "2"],
    ["family", "-g", "4", "--family", "everything"],
    ["admissible", "-g", "2", "-p", "2", "--typefn", "{nope"],
    ["includes", "-g", "2", "-p", "2", "--src", "#0@1"],
    ["kuhn", "-g", "2", "--format", "dot", "-p", "2", "-n", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(*argv)
    assert code == 2


def test_bad_group_token_is_named():
    code, _, err = run("subgroups", "-g", "Z/4xQ")
    assert code == 2 and "Q" in json.loads(err)["message"]


def test_deterministic_output():
    argv = ["spectrum", "-g", "4,2", "-p", "2", "--cap", "3", "--format", "json"]
    assert ok(*argv) == ok(*argv)
    cmd = [sys.executable, "-m", "abelspc", "family", "-g", "2,2,2", "-p", "2", "--family", "rank<=1", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["cork"] == 2


def test_subgroups_round_trip():
    doc = json.loads(ok("subgroups", "-g", "4x2", "--format", "json"))
    assert doc["schema"] == 1 and doc["kind"] == "subgroups" and len(doc["subgroups"]) == 8
    for entry in doc["subgroups"]:
        for field in ("selector", "gens", "key"):
            got = json.loads(ok("blueshift", "-g", "4x2", "-p", "2", "--H", entry[field], "--format", "json"))
            assert got["H"] == entry["selector"]


def test_support_round_trip():
    f = '{"1": 1, "Z/2": 1, "Z/4": 0}'
    doc = json.loads(ok("support", "-g", "4", "-p", "2", "--cap", "3", "--typefn", f, "--format", "json"))
    assert doc["kind"] == "support"
    for pt in doc["points"]:
        closure = json.loads(ok("closure", "-g", "4", "-p", "2", "--cap", "3", "--point", pt["selector"], "--format", "json"))
        assert closure["point"]["id"] == pt["id"]
        # supports are closed: everything in the closure is in the support
        assert {q["id"] for q in closure["points"]} <= {q["id"] for q in doc["points"]}


def test_family_round_trip():
    for text in ["proper", "rank<=1", "below:#3", "{(1,0);(0,2)}", "{}"]:
        doc = json.loads(ok("family", "-g", "2,4", "-p", "2", "--family", text, "--format", "json"))
        again = json.loads(ok("family", "-g", "2,4", "-p", "2", "--family", doc["literal"], "--format", "json"))
        assert again == doc


def test_typefn_file_and_completion(tmp_path):
    path = tmp_path / "f.json"
    path.write_text('{"1": 5, "Z/2": 0, "Z/4": 3}')
    out = ok("complete", "-g", "4", "-p", "2", "--typefn", f"@{path}")
    assert json.loads(out) == {"1": 1, "Z/2": 0, "Z/4": 3}
    out = ok("complete", "-g", "2", "-p", "2", "--direction", "upper", "--typefn", '{"1": 2, "Z/2": 0}')
    assert json.loads(out) == {"1": 2, "Z/2": 1}
    code, _, err = run("complete", "-g", "4", "-p", "2", "--typefn", f"@{tmp_path / 'missing.json'}")
    assert code == 1 and json.loads(err)["error"] == "E_IO"


def test_ideal_ops():
    f, g = '{"1": 1, "Z/2": 0}', '{"1": 2, "Z/2": 1}'
    base = ["ideal", "-g", "2", "-p", "2", "--typefn", f, "--other", g]
    assert ok(*base) == "false\n"
    assert ok(*base[:-1], f) == "true\n"
    assert json.loads(ok(*base, "--op", "join")) == {"1": 1, "Z/2": 0}
    assert json.loads(ok(*base, "--op", "meet")) == {"1": 2, "Z/2": 1}
    code, _, err = run("ideal", "-g", "2", "-p", "2", "--typefn", '{"1": 2, "Z/2": 0}', "--other", g, "--op", "join")
    assert code == 1 and json.loads(err)["error"] == "E_INADMISSIBLE"


def test_remaining_subcommands():
    assert ok("includes", "-g", "2", "-p", "2", "--src", "trivial@2", "--dst", "full@1") == "true\n"
    assert ok("includes", "-g", "2", "-p", "2", "--src", "trivial@1", "--dst", "full@1") == "false\n"
    assert ok("tate", "-g", "2,2", "-p", "2", "--family", "proper", "-n", "3") == "1\n"
    assert ok("tate", "-g", "2,2", "-p", "2", "--family", "rank<=1", "-n", "1") == "vanishes\n"
    assert ok("kuhn", "-g", "4x2", "-p", "2", "-n", "5") == "3\n"
    text = ok("subgroups", "-g", "2,2")
    assert len(text.splitlines()) == 5
    for fmt in ("text", "json"):
        out = ok("spectrum", "-g", "6", "-p", "3", "--cap", "2", "--format", fmt)
        assert out
    assert "cork\t2" in ok("family", "-g", "2,2", "-p", "2", "--family", "proper")


def test_verify():
    code, out, _ = run("verify", "-g", "4,2", "-p", "2", "--cap", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "verify"
    assert all(set(r) == {"check", "instance", "pass", "detail"} and r["pass"] for r in doc["results"])
    code, out, _ = run("verify", "--cap", "2")
    assert code == 0 and out.count("PASS") == len(out.splitlines())
