import json
import subprocess
import sys

import pytest

from walklab.cli import main
from walklab.arith import Prime
from walklab.search import Walk, WalkPolicy, validate_walk
from walklab.theorems import VerificationReport


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_search_single_start(capsys):
    code, out = run(capsys, "search", "--pred", "prime", "--base", "10", "--policy", "append-right", "--start", "3")
    assert code == 0
    walk = Walk.from_dict(json.loads(out)["walk"])
    assert walk.length == 8 and walk.final == 37337999


def test_search_range_with_residue(capsys):
    code, out = run(capsys, "search", "--start", "2", "--start-max", "1000", "--start-mod", "3:2")
    summary = json.loads(out)["summary"]
    assert code == 0 and all(x % 3 == 2 for x in summary["argmax"])


def test_search_csv_is_crlf(capsys):
    code, out = run(capsys, "search", "--start", "19", "--format", "csv")
    assert code == 0
    lines = out.split("\r\n")
    assert lines[0] == "index,value,position,block"
    assert lines[-2].split(",")[1] == "1979339333"


def test_insert_anywhere(capsys):
    code, out = run(capsys, "search", "--policy", "insert-anywhere", "--start", "7", "--rounds", "40", "--n-max", "17")
    w = Walk.from_dict(json.loads(out)["walk"])
    assert code == 0 and w.length == 17
    assert validate_walk(w, Prime(40), WalkPolicy(10, "insert-anywhere")) == []


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "--pred", "prime", "--base", "10")
    r = json.loads(out)["result"]
    assert (r["count"], r["maximum"], r["depth"]) == (83, 73939133, 8)


def test_enumerate_squarefree_counts(capsys):
    code, out = run(capsys, "enumerate", "--pred", "squarefree", "--base", "10", "--n-max", "5")
    assert [row["total"] for row in json.loads(out)["result"]["per_length"]] == [6, 39, 251, 1601, 10143]


def test_simulate_needs_seed(capsys):
    with pytest.raises(SystemExit) as e:
        main(["simulate", "--model", "greedy", "--start-digits", "1"])
    assert e.value.code == 2


def test_simulate_parallelism_byte_identical(tmp_path):
    outs = []
    for par in ("1", "2"):
        f = tmp_path / f"out{par}.json"
        assert main(["simulate", "--model", "refined-greedy", "--start-digits", "1", "--trials", "70000",
                     "--seed", "42", "--parallelism", par, "--out", str(f)]) == 0
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_simulate_env_threads(monkeypatch, tmp_path):
    monkeypatch.setenv("WALKLAB_THREADS", "2")
    f = tmp_path / "o.json"
    assert main(["simulate", "--model", "greedy-cramer", "--start-digits", "1", "--trials", "40000",
                 "--seed", "1", "--out", str(f)]) == 0
    monkeypatch.setenv("WALKLAB_THREADS", "1")
    g = tmp_path / "p.json"
    main(["simulate", "--model", "greedy-cramer", "--start-digits", "1", "--trials", "40000", "--seed", "1",
          "--out", str(g)])
    assert f.read_bytes() == g.read_bytes()


def test_analytic(capsys):
    code, out = run(capsys, "analytic", "--base", "10", "--start-digits", "1")
    assert code == 0 and abs(json.loads(out)["expected_length"] - 4.690852) < 1e-6


def test_verify(capsys):
    code, out = run(capsys, "verify", "--claim", "fibo1digit")
    rep = VerificationReport.from_dict(json.loads(out)["reports"][0])
    assert code == 0 and rep.status == "Verified" and len(rep.witnesses) == 5


def test_verify_unknown_claim(capsys):
    assert main(["verify", "--claim", "nope"]) == 2


def test_reproduce_pass_and_markdown(capsys):
    code, out = run(capsys, "reproduce", "T7", "--format", "markdown")
    assert code == 0 and "**PASS**" in out


def test_reproduce_failure_exit(capsys):
    code, out = run(capsys, "reproduce", "T8")  # two printed cells differ by more than 0.01
    assert code == 1 and json.loads(out)["table"]["ok"] is False


def test_reproduce_unknown_table(capsys):
    assert main(["reproduce", "T99"]) == 2


def test_usage_errors(capsys):
    assert main(["search", "--pred", "happy", "--start", "3"]) == 2
    assert main(["search"]) == 2
    assert main(["search", "--start", "4"]) == 2  # 4 is not prime
    assert main(["analytic", "--base", "1"]) == 2


def test_json_is_stable(capsys):
    _, a = run(capsys, "reproduce", "walk-examples")
    _, b = run(capsys, "reproduce", "walk-examples")
    assert a == b
    keys = list(json.loads(a))
    assert keys == sorted(keys)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "walklab", "verify", "--claim", "power2", "--format", "markdown"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "Verified" in r.stdout
