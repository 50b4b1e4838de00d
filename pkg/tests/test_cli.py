import json

import pytest

from spcheck import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_classes_invariant_example(capsys):
    code, rep = run_json(capsys, "classes", "invariant", "--n", "1", "--q", "3", "--q1", "3", "--diagonal")
    assert code == 0
    assert rep["schema"] == cli.SCHEMA
    assert rep["checks"]["classes.invariant.n1.q3.q1_3.delta"]["value"] == 3


def test_classes_count_example(capsys):
    code, rep = run_json(capsys, "classes", "count", "--n", "2", "--q", "3")
    assert code == 0 and rep["checks"]["classes.count.n2.q3"]["value"] == 34


def test_classes_count_with_oracle(capsys):
    code, rep = run_json(capsys, "classes", "count", "--n", "1", "--q", "5", "--oracle")
    assert code == 0
    chk = rep["checks"]["classes.count.n1.q5.oracle"]
    assert chk["value"] == chk["expected"] == 9 and "witness" not in chk


def test_series_examples(capsys):
    assert run_json(capsys, "series", "main-identity", "--order", "30")[1]["status"] == "pass"
    assert run_json(capsys, "series", "jacobi", "--order", "60")[1]["status"] == "pass"
    code, rep = run_json(capsys, "series", "genfun", "--order", "2")
    assert code == 0
    assert [r[1] for r in rep["table"]["rows"]] == [[1], [0, 1], [2, 1, 1]]
    assert [r[2] for r in rep["table"]["rows"]] == ["1", "u", "u^2 + u + 2"]


def test_symbols_examples(capsys):
    code, rep = run_json(capsys, "symbols", "phi", "--n", "2")
    assert code == 0 and rep["checks"]["symbols.phi.n2"]["value"] == 6
    code, rep = run_json(capsys, "symbols", "dprime", "--n", "12")
    chk = rep["checks"]["symbols.dprime.n12"]
    assert code == 0 and chk["value"] == chk["expected"]


def test_weyl_check_example(capsys):
    code, rep = run_json(capsys, "weyl", "check", "--l", "2", "--d", "2", "--q", "3")
    assert code == 0
    assert rep["summary"]["fail"] == 0 and rep["summary"]["pass"] == len(rep["checks"]) > 10


def test_command_echo_excludes_output_options(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "symbols", "phi", "--n", "1", "-o", str(out))
    rep = json.loads(out.read_text())
    assert code == 0
    for k in ("output", "format", "timings"):
        assert k not in rep["command"]
    assert "timings_ms" not in rep


def test_timings_flag(capsys):
    _, rep = run_json(capsys, "symbols", "phi", "--n", "1", "--timings")
    assert all(isinstance(v, int) for v in rep["timings_ms"].values())


def test_tsv_output(capsys):
    code, out, _ = run(capsys, "symbols", "phi", "--n", "3", "--upto", "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["n\tphi", "0\t1", "1\t2", "2\t6", "3\t12"]
    code, out, _ = run(capsys, "classes", "count", "--n", "1", "--q", "3", "--format", "tsv")
    assert out.splitlines()[1] == "classes.count.n1.q3\tpass\t7\t7"


def test_failure_exit_code_carries_witness(capsys, monkeypatch):
    monkeypatch.setattr(cli, "count_classes", lambda n, q, budget=None: 0)
    code, rep = run_json(capsys, "classes", "count", "--n", "1", "--q", "3")
    assert code == 1 and rep["status"] == "fail"
    assert rep["checks"]["classes.count.n1.q3"]["witness"] == {"value": 0, "expected": 7}


def test_budget_refusal_exit_code(capsys):
    code, rep = run_json(capsys, "symbols", "phi", "--n", "30", "--method", "pairs", "--budget", "100")
    assert code == 2 and rep["status"] == "skipped-budget"
    (chk,) = rep["checks"].values()
    assert chk["witness"]["budget"] == 100


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SPCHECK_BUDGET", "100")
    code, _ = run_json(capsys, "symbols", "phi", "--n", "30", "--method", "pairs")
    assert code == 2
    monkeypatch.setenv("SPCHECK_BUDGET", "not-a-number")
    assert run(capsys, "symbols", "phi", "--n", "2")[0] == 3


@pytest.mark.parametrize("argv", [
    ["classes", "invariant", "--n", "1", "--q", "9", "--q1", "5"],
    ["classes", "count", "--n", "1", "--q", "4"],
    ["weyl", "check", "--l", "2", "--d", "3"],
    ["series", "bogus", "--order", "3"],
    ["symbols", "phi"],
    [],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 3


def test_suite_is_deterministic_across_job_counts(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["suite", "--tier", "quick", "-o", str(a)]) == 0
    assert cli.main(["suite", "--tier", "quick", "--jobs", "2", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["summary"]["fail"] == rep["summary"]["skipped-budget"] == 0
