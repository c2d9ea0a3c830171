"""The nine acceptance criteria, each at its stated scale and time budget.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
one PASS/FAIL line per criterion.
"""
import sys
import time
from itertools import combinations
from math import factorial

import numpy as np
import pytest

from biasedclique.bipartite import (
    BipartiteBiasedInstance,
    bipartite_circuit_keys,
    find_consistent_biclique,
    induced_circuit_keys,
    random_bipartite_labelling,
    valid_assignments,
    validate_bipartite,
)
from biasedclique.circuits import circuit_count_formula, circuit_table, enumerate_paths, path_count_formula
from biasedclique.counterexample import verify_counterexample_theorem
from biasedclique.generate import premise_instance, random_valid_instance
from biasedclique.kernels import digits
from biasedclique.instance import BiasedInstance, make_ka, make_ko, make_ku, restrict, validate
from biasedclique.labelling import derive_instance, gamma_a, gamma_o, gamma_u
from biasedclique.omega import build_omega, verify_omega_components
from biasedclique.search import Kind, classify_constant, search_unavoidable

from cli_fixtures import commands, run_cli, write_suite

A_VALUES = (0, 1, 2, 3, 5)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


@pytest.mark.criterion(1, "labellings of the canonical families derive make_ku/make_ko/make_ka")
def test_criterion_1_labelling_equivalence():
    with Budget(30):
        for n in range(1, 7):
            assert derive_instance(gamma_u(n)) == make_ku(n)
            assert derive_instance(gamma_o(n)) == make_ko(n)
        for n in range(1, 8):
            for a in A_VALUES:
                assert derive_instance(gamma_a(a, n)) == make_ka(a, n)


@pytest.mark.criterion(2, "path and circuit counts match closed forms and bounds, n <= 8")
def test_criterion_2_counts():
    with Budget(10):
        assert len(circuit_table(4).keys) == 7
        assert enumerate_paths(3) == 9
        for n in range(1, 9):
            p = enumerate_paths(n)
            assert p == path_count_formula(n)
            assert p < 2 * factorial(n)
            if n >= 3:
                c = len(circuit_table(n).keys)
                assert c == circuit_count_formula(n)
                assert c <= 2 * factorial(n - 1)


@pytest.mark.criterion(3, "canonical families valid for n <= 7; planted violation found at n = 4, 5")
def test_criterion_3_validity():
    with Budget(120):
        for n in range(3, 8):
            assert validate(make_ku(n)).valid
            assert validate(make_ko(n)).valid
            for a in A_VALUES:
                assert validate(make_ka(a, n)).valid
        for n in (4, 5):
            inst = BiasedInstance(n, [(1, 2, 3), (1, 2, 4)])
            report = validate(inst)
            assert not report.valid
            theta = report.violations[0]
            assert sum(inst.is_balanced(c) for c in theta.circuits) == 2


@pytest.mark.criterion(4, "Omega components are the delta classes, n = 5, 6, 7")
def test_criterion_4_omega():
    with Budget(60):
        for n in (5, 6):
            om = build_omega(n)
            deltas = circuit_table(n).deltas
            assert np.array_equal(deltas[om.adjacency[:, 0]], deltas[om.adjacency[:, 1]])
            assert verify_omega_components(n, om)
    with Budget(30 * 60):
        assert verify_omega_components(7)


@pytest.mark.criterion(5, "50 premise instances at n = 6, 7 classify with per-vertex check")
def test_criterion_5_constant():
    rng = np.random.default_rng(20240607)
    with Budget(300):
        for n in (6, 7):
            for _ in range(50):
                inst = premise_instance(n, rng)
                res = classify_constant(inst)
                assert res is not None and res[1], (n, res)


@pytest.mark.criterion(6, "n = 10: all 16 B_Q valid, 14 not labellable, empty Q gives IsKa(6), 14 >= 4")
def test_criterion_6_perturbed_family():
    with Budget(3600):
        report = verify_counterexample_theorem(10, jobs=2)
    for line in report.lines() + report.summary_lines():
        print(line)
    proper, bound, holds = report.count_inequality()
    assert (proper, bound, holds) == (14, 4, True)
    assert report.base_labelled
    assert str(report.results[0].verdict) == "IsKa:6"
    assert all(str(r.verdict) == "No" for r in report.results[1:15])
    invalid = [r.qmask for r in report.results if not r.valid]
    assert invalid == [], f"B_Q fails the theta property for Q masks {invalid}"


@pytest.mark.criterion(7, "search_unavoidable sound on 200 random valid instances; families recognised")
def test_criterion_7_search():
    rng = np.random.default_rng(7)
    with Budget(600):
        for _ in range(200):
            n = int(rng.integers(5, 8))
            inst = random_valid_instance(n, rng)
            assert validate(inst).valid
            r, s = int(rng.integers(3, n + 1)), int(rng.integers(3, n + 1))
            t = int(rng.integers(4, n))
            res = search_unavoidable(inst, r, s, t)
            if res.kind is not Kind.OTHER:
                assert restrict(inst, res.witness) == res.expected()
        for n in (5, 6, 7):
            assert search_unavoidable(make_ku(n), n, n, 4).kind is Kind.KU
            assert search_unavoidable(make_ko(n), n, n, 4).kind is Kind.KO
            for a in (1, 2, 3):
                assert search_unavoidable(make_ka(a, n), n, n, n - 1).kind is Kind.KA


def _consistent(inst, res):
    flags = inst.flags(induced_circuit_keys(inst.nA, res.A, res.B))
    return len(res.A) == len(res.B) and bool(flags.all() or not flags.any())


def _closure_holds(nA, nB, rows):
    """In every sub-biclique, all 4-circuits balanced forces all circuits balanced."""
    keys = bipartite_circuit_keys(nA, nB)
    verts, length = digits(keys)
    masks = np.bitwise_or.reduce(np.where(verts > 0, np.left_shift(1, verts.astype(np.int64)), 0), axis=1)
    for ka in range(2, nA + 1):
        for kb in range(2, nB + 1):
            for A in combinations(range(1, nA + 1), ka):
                for B in combinations(range(1, nB + 1), kb):
                    sub = sum(1 << a for a in A) | sum(1 << (nA + b) for b in B)
                    inside = (masks & ~sub) == 0
                    four = rows[:, inside & (length == 4)].all(axis=1)
                    if not rows[four][:, inside].all():
                        return False
    return True


@pytest.mark.criterion(8, "find_consistent_biclique sound on K_{4,4} and K_{6,6}; bipartite structure claims")
def test_criterion_8_biclique():
    with Budget(600):
        # every consistent assignment of the 36 four-circuits of K_{4,4}, each with its first valid extension
        rows44 = valid_assignments(4, 4, max_length=4)
        assert len(rows44) == 157896
        found = 0
        for row in rows44:
            inst = BipartiteBiasedInstance.from_mask(4, 4, row)
            res = find_consistent_biclique(inst, 3)
            if res is not None:
                assert _consistent(inst, res)
                found += 1
        print(f"K_4,4: {found}/{len(rows44)} consistent K_3,3 found")
        for row in rows44[:: max(1, len(rows44) // 500)]:
            assert validate_bipartite(BipartiteBiasedInstance.from_mask(4, 4, row)).valid
        rows33 = valid_assignments(3, 3)
        assert len(rows33) == 164
        for row in rows33:
            inst = BipartiteBiasedInstance.from_mask(3, 3, row)
            for t in (2, 3):
                res = find_consistent_biclique(inst, t)
                assert t == 3 or res is not None
                if res is not None:
                    assert _consistent(inst, res)
        rng = np.random.default_rng(66)
        for _ in range(100):
            inst = random_bipartite_labelling(6, 6, rng, int(rng.choice([0, 2, 3, 5])))
            assert validate_bipartite(inst).valid
            for t in (2, 3):
                res = find_consistent_biclique(inst, t)
                if res is not None:
                    assert _consistent(inst, res)
        # equivalence relation on all valid K_{2,5}
        for row in valid_assignments(2, 5):
            inst = BipartiteBiasedInstance.from_mask(2, 5, row)
            for u, v, w in combinations(range(1, 6), 3):
                for p, q, r in ((u, v, w), (v, u, w), (w, u, v)):
                    if inst.four_balanced(1, 2, p, q) and inst.four_balanced(1, 2, p, r):
                        assert inst.four_balanced(1, 2, q, r)
        # short-circuit closure for sides <= 4
        assert _closure_holds(2, 4, valid_assignments(2, 4))
        assert _closure_holds(3, 3, rows33)
        assert _closure_holds(3, 4, valid_assignments(3, 4, max_length=4))
        assert _closure_holds(4, 4, rows44)


@pytest.mark.criterion(9, "CLI output byte-identical across runs and --jobs settings")
def test_criterion_9_determinism(tmp_path):
    paths = write_suite(tmp_path)
    outputs = {}
    for label, jobs in (("first", None), ("second", None), ("jobs1", 1), ("jobs2", 2)):
        out_dir = tmp_path / label
        out_dir.mkdir()
        results = []
        for argv in commands(paths, out_dir):
            proc = run_cli(argv, jobs)
            generated = sorted(p.read_bytes() for p in out_dir.iterdir())
            results.append((proc.returncode, proc.stdout, proc.stderr, generated))
        outputs[label] = results
    assert outputs["first"] == outputs["second"]
    assert outputs["jobs1"] == outputs["jobs2"]
    assert outputs["first"] == outputs["jobs1"]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
