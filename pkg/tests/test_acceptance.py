"""Acceptance criteria AC1-AC9, one test each; every test logs a pass/fail line."""

import io
import json
import math
import time
from pathlib import Path

import jsonschema
import mpmath
import numpy as np
import pytest

from treebound.bounds import (
    connected_sum_direct,
    connected_sum_resummed,
    evaluate_bound,
    improved_edge_factor,
    key_gap_scan,
    naive_edge_factor,
    tree_bound_real,
)
from treebound.cli import main
from treebound.graph import enumerate_connected_graphs, enumerate_trees, num_edges
from treebound.potentials import Potential, edge_order_from_potential, trick_factorization
from treebound.scheme import EdgeOrder, verify_partition

from oracles import connected_graph_counts

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMA = json.loads((FIXTURES / "report.schema.json").read_text())


class Criterion:
    def __init__(self, log, tag, text, budget=None):
        self.log, self.tag, self.text, self.budget = log, tag, text, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and (self.budget is None or elapsed < self.budget)
        limit = f" (limit {self.budget:g}s)" if self.budget else ""
        self.log.append(f"[{'PASS' if ok else 'FAIL'}] {self.tag} {self.text}: {elapsed:.2f}s{limit}")
        print(self.log[-1])
        if exc_type is None and not ok:
            pytest.fail(f"{self.tag} exceeded its runtime budget: {elapsed:.2f}s")
        return False


def test_ac1_enumeration_counts(acceptance_log):
    with Criterion(acceptance_log, "AC1", "tree counts n=2..8, connected counts n=2..6", 10):
        for n, expected in zip(range(2, 9), [1, 3, 16, 125, 1296, 16807, 262144]):
            got = sum(1 for _ in enumerate_trees(n))
            assert got == expected == n ** (n - 2)
        counts = connected_graph_counts(6)
        assert [counts[n] for n in range(2, 7)] == [1, 4, 38, 728, 26704]
        for n in range(2, 7):
            assert sum(1 for _ in enumerate_connected_graphs(n)) == counts[n]


def test_ac2_partition_scheme(acceptance_log):
    with Criterion(acceptance_log, "AC2", "partition intervals n=2..6, lex + 20 random orders", 60):
        rng = np.random.default_rng(2024)
        for n in range(2, 7):
            for order in [EdgeOrder.lexicographic(n)] + [EdgeOrder.random(n, rng) for _ in range(20)]:
                report = verify_partition(n, order)
                assert report.passed, report.counterexample
                assert report.interval_total == report.connected_count == connected_graph_counts(n)[n]


def test_ac3_resummation_identity(acceptance_log):
    worst = 0.0
    with Criterion(acceptance_log, "AC3", "resummed vs direct, 200 potentials x 6 orders, n=2..6", 120) as c:
        rng = np.random.default_rng(3)
        for n in range(2, 7):
            for _ in range(200):
                u = Potential.from_real(n, rng.uniform(-2, 3, num_edges(n)))
                direct = connected_sum_direct(u)
                orders = [edge_order_from_potential(u)] + [EdgeOrder.random(n, rng) for _ in range(5)]
                for order in orders:
                    err = abs(connected_sum_resummed(u, order) - direct)
                    worst = max(worst, err / (1 + abs(direct)))
                    assert err <= 1e-9 * (1 + abs(direct))
        c.text += f", max scaled error {worst:.2e}"


def test_ac4_trick_identity(acceptance_log):
    with Criterion(acceptance_log, "AC4", "trick factorization on 1e5 samples", None) as c:
        xs = np.random.default_rng(4).uniform(-10, 10, 100_000)
        worst = 0.0
        with mpmath.workdps(30):
            for x in xs:
                amp, tree = trick_factorization(float(x))
                exact = abs(mpmath.expm1(-mpmath.mpf(float(x))))
                worst = max(worst, float(abs(amp * tree - exact) / exact))
        c.text += f", max relative error {worst:.2e}"
        assert worst <= 1e-12


def test_ac5_key_inequality(acceptance_log):
    with Criterion(acceptance_log, "AC5", "key inequality over all trees, n=3..7, 50 real + 50 complex", 120) as c:
        rng = np.random.default_rng(5)
        minimum = math.inf
        for n in range(3, 8):
            m = num_edges(n)
            for _ in range(50):
                real = Potential.from_real(n, rng.uniform(-2, 3, m))
                cplx = Potential.from_complex(n, rng.uniform(-1, 1, m) + 1j * rng.uniform(-math.pi, math.pi, m))
                for u in (real, cplx):
                    scan = key_gap_scan(u)
                    assert scan.tree_count == n ** (n - 2)
                    minimum = min(minimum, scan.min_gap)
        c.text += f", minimum gap {minimum:.3e}"
        assert minimum >= -1e-12


def test_ac6_real_bound(acceptance_log):
    with Criterion(acceptance_log, "AC6", "|LHS| <= RHS for 100 real potentials, n=2..6, auto b", None) as c:
        rng = np.random.default_rng(6)
        tightest = 0.0
        for n in range(2, 7):
            for _ in range(100):
                r = evaluate_bound(Potential.from_real(n, rng.uniform(-2, 3, num_edges(n))))
                assert r.lhs_magnitude <= (1 + 1e-9) * r.rhs_improved
                tightest = max(tightest, r.lhs_magnitude / r.rhs_improved if r.rhs_improved else 0.0)
        r = evaluate_bound(Potential.from_real(2, [-1.0]))
        assert r.b == (0.5, 0.5)
        assert abs(r.lhs_magnitude - r.rhs_improved) <= 1e-9 * r.rhs_improved
        c.text += f", max LHS/RHS {tightest:.4f}; n=2,u=-1 equality {r.lhs_magnitude:.15f}"


def test_ac7_complex_extension(acceptance_log):
    with Criterion(acceptance_log, "AC7", "complex bound n=2..5 x 100, improved <= naive, 1e5 factors", None):
        rng = np.random.default_rng(7)
        for n in range(2, 6):
            m = num_edges(n)
            for _ in range(100):
                u = Potential.from_complex(n, rng.uniform(-1, 1, m) + 1j * rng.uniform(-math.pi, math.pi, m))
                r = evaluate_bound(u)
                assert r.kind == "complex"
                assert r.lhs_magnitude <= (1 + 1e-9) * r.rhs_improved
                assert r.rhs_improved <= r.rhs_naive
        z = rng.uniform(-1, 1, 100_000) + 1j * rng.uniform(-math.pi, math.pi, 100_000)
        assert np.all(improved_edge_factor(z) <= naive_edge_factor(z))


def test_ac8_worked_example(acceptance_log):
    with Criterion(acceptance_log, "AC8", "n=3, u=ln 2: 0.625 / 0.625 / 0.75", None):
        u = Potential.constant(3, math.log(2))
        direct = connected_sum_direct(u)
        resummed = connected_sum_resummed(u, EdgeOrder.lexicographic(3))
        bound = tree_bound_real(u, (0.0, 0.0, 0.0))
        assert abs(direct - 0.625) <= 1e-12 * 0.625
        assert abs(resummed - 0.625) <= 1e-12 * 0.625
        assert abs(bound - 0.75) <= 1e-12 * 0.75


def _run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out, io.StringIO())
    report = json.loads(out.getvalue())
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_ac9_cli_contract(acceptance_log, tmp_path):
    with Criterion(acceptance_log, "AC9", "six subcommands exit 0, malformed fixtures exit 2", None):
        ok = [
            ["verify-scheme", "--n", 3],
            ["verify-scheme", "--n", 5, "--order", "random", "--seed", 1, "--count", 2],
            ["verify-identity", "--n", 4, "--trials", 5, "--seed", 1],
            ["verify-key", "--n", 5, "--trials", 3, "--seed", 1],
            ["verify-key", "--n", 4, "--trials", 3, "--seed", 1, "--complex"],
            ["bound", "--instance", FIXTURES / "tri_ln2.json", "--b", "auto"],
            ["bound", "--instance", FIXTURES / "complex_pair.json", "--complex"],
            ["stability", "--instance", FIXTURES / "pair_neg1.json"],
            ["stability", "--instance", FIXTURES / "pair_neg1.json", "--b", FIXTURES / "b_pair.json"],
            ["compare", "--instance", FIXTURES / "mixed4.json"],
        ]
        for argv in ok:
            code, report = _run(argv)
            assert code == 0 and report["status"] == "pass", argv

        _, report = _run(["bound", "--instance", FIXTURES / "tri_ln2.json", "--b", "auto"])
        values = report["checks"][0]["values"]
        assert values["lhs_magnitude"] == pytest.approx(0.625, rel=1e-12)
        assert values["rhs_improved"] == pytest.approx(0.75, rel=1e-12) and values["satisfied"] is True
        _, report = _run(["stability", "--instance", FIXTURES / "pair_neg1.json"])
        assert report["checks"][0]["values"]["B"] == 0.5

        expected = {
            "missing_pair.json": "missing pair (1,3)",
            "self_pair.json": "self-pair (1,1)",
            "duplicate_pair.json": "duplicate pair (1,2)",
            "nonfinite.json": "non-finite value for pair (1,2)",
            "negative_b.json": "negative b_2",
            "not_json.json": "malformed JSON",
        }
        for name, message in expected.items():
            for cmd in ("bound", "stability", "compare"):
                code, report = _run([cmd, "--instance", FIXTURES / name])
                assert code == 2 and report["status"] == "error"
                assert message in report["error"]["message"] and report["error"]["exit_code"] == 2
