import io
import json
import math
import re
from pathlib import Path

import jsonschema
import pytest

from treebound.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMA = json.loads((FIXTURES / "report.schema.json").read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    report = json.loads(out.getvalue())
    jsonschema.validate(report, SCHEMA)
    return code, report, err.getvalue()


def check(report, name):
    return next(c for c in report["checks"] if c["name"] == name)


def test_bound_worked_example():
    code, rep, err = run("bound", "--instance", FIXTURES / "tri_ln2.json", "--b", "auto")
    assert code == 0 and rep["status"] == "pass"
    values = check(rep, "tree_graph_bound")["values"]
    assert values["lhs_magnitude"] == pytest.approx(0.625, rel=1e-12)
    assert values["rhs_improved"] == pytest.approx(0.75, rel=1e-12)
    assert values["satisfied"] is True
    assert rep["instance_digest"].startswith("sha256:")
    assert "PASS" in err


def test_bound_uses_certificate_in_file():
    code, rep, _ = run("bound", "--instance", FIXTURES / "mixed4.json")
    values = check(rep, "tree_graph_bound")["values"]
    assert code == 0 and values["b_source"] == "given" and values["b"] == [1.0] * 4
    assert values["stability_prefactor"] == pytest.approx(math.exp(4))


def test_bound_complex_instance():
    code, rep, _ = run("bound", "--instance", FIXTURES / "complex_pair.json", "--complex", "--b", "auto")
    values = check(rep, "tree_graph_bound")["values"]
    assert code == 0 and values["kind"] == "complex"
    assert values["lhs_magnitude"] == pytest.approx(2.0) and values["rhs_improved"] == pytest.approx(2.0)


def test_verify_scheme_n3():
    code, rep, _ = run("verify-scheme", "--n", 3)
    values = check(rep, "partition_scheme/lex")["values"]
    assert code == 0 and values["interval_total"] == 4 == values["connected_count"]


def test_verify_scheme_random_orders_echo_rng():
    code, rep, _ = run("verify-scheme", "--n", 4, "--order", "random", "--seed", 3, "--count", 3)
    assert code == 0 and len(rep["checks"]) == 3
    assert rep["rng"] == {"generator": "PCG64", "seed": 3}


def test_verify_identity():
    code, rep, _ = run("verify-identity", "--n", 4, "--trials", 5, "--seed", 1)
    c = check(rep, "resummation_identity")
    assert code == 0 and c["values"]["comparisons"] == 30 and c["tolerance"] == 1e-9


def test_verify_key_real_and_complex():
    for extra in ([], ["--complex"], ["--random-orders", "1"]):
        code, rep, _ = run("verify-key", "--n", 4, "--trials", 3, "--seed", 2, *extra)
        assert code == 0
        assert check(rep, "key_inequality")["values"]["trees_scanned"] == 48


def test_stability_pair():
    code, rep, _ = run("stability", "--instance", FIXTURES / "pair_neg1.json")
    assert code == 0 and check(rep, "minimal_uniform")["values"]["B"] == 0.5


def test_stability_certificate_failure_reports_subset():
    code, rep, _ = run("stability", "--instance", FIXTURES / "pair_neg1.json", "--b", FIXTURES / "b_pair_weak.json")
    assert code == 1 and rep["status"] == "fail"
    assert check(rep, "certificate")["counterexample"] == {"subset": [1, 2]}


def test_compare_ratio():
    code, rep, _ = run("compare", "--instance", FIXTURES / "pair_neg1.json", "--b", FIXTURES / "b_pair.json")
    values = check(rep, "improved_le_naive")["values"]
    assert code == 0
    assert values["ratio"] == pytest.approx(1 / math.e)
    assert values["edge_factors"][0]["pair"] == [1, 2]


def test_compare_defaults_to_auto():
    code, rep, _ = run("compare", "--instance", FIXTURES / "mixed4.json", "--b", "auto")
    assert code == 0 and check(rep, "improved_le_naive")["values"]["ratio"] < 1


def test_generate_round_trips(tmp_path):
    out = tmp_path / "g.json"
    code, rep, _ = run("generate", "--n", 4, "--dist", "gaussian:0,1", "--seed", 7, "--out", out)
    assert code == 0 and rep["rng"]["seed"] == 7
    code, rep2, _ = run("bound", "--instance", out)
    assert code == 0 and rep2["instance_digest"] == rep["instance_digest"]


@pytest.mark.parametrize(
    "name,message",
    [
        ("missing_pair.json", "missing pair (1,3)"),
        ("self_pair.json", "self-pair (1,1)"),
        ("duplicate_pair.json", "duplicate pair (1,2)"),
        ("nonfinite.json", "non-finite value"),
        ("negative_b.json", "negative b_2"),
        ("not_json.json", "malformed JSON"),
    ],
)
def test_malformed_fixtures_exit_2(name, message):
    code, rep, err = run("bound", "--instance", FIXTURES / name)
    assert code == 2 and rep["status"] == "error"
    assert rep["error"]["type"] == "InstanceError" and message in rep["error"]["message"]
    assert "error" in err


def test_unstable_certificate_is_input_error():
    code, rep, _ = run("bound", "--instance", FIXTURES / "pair_neg1.json", "--b", FIXTURES / "b_pair_weak.json")
    assert code == 2 and rep["error"]["type"] == "StabilityError" and rep["error"]["subset"] == [1, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-scheme"],
        ["no-such-command"],
        ["verify-scheme", "--n", "x"],
        ["generate", "--n", "3", "--dist", "uniform:3,1"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    code, rep, _ = run(*argv)
    assert code == 2 and rep["status"] == "error"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-scheme", "--n", "7"],
        ["verify-identity", "--n", "8", "--trials", "1"],
        ["verify-key", "--n", "10", "--trials", "1"],
    ],
)
def test_capacity_errors_exit_3(argv):
    code, rep, _ = run(*argv)
    assert code == 3 and rep["error"]["type"] == "CapacityError"


def test_failed_check_exits_1():
    # a tolerance of -1 can never be met
    code, rep, err = run("verify-identity", "--n", 3, "--trials", 2, "--tol", -1)
    assert code == 1 and rep["status"] == "fail" and "FAIL" in err


def test_parallel_mode_is_recorded():
    code, rep, _ = run("verify-identity", "--n", 5, "--trials", 1, "--orders", 0, "--parallel", 2)
    assert code == 0 and rep["mode"] == "parallel"


def test_numbers_serialised_with_17_digits():
    out = io.StringIO()
    main(["generate", "--n", "4", "--seed", "5"], out, io.StringIO())
    tokens = re.findall(r"-?\d+\.\d+(?:e[-+]?\d+)?", out.getvalue())
    assert tokens
    for tok in tokens:
        assert tok == format(float(tok), ".17g") or tok == format(float(tok), ".17g") + ".0"


def test_console_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "treebound.cli", "verify-scheme", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "pass"
