from itertools import combinations, permutations
from math import factorial

import pytest
from hypothesis import given, strategies as st

from biasedclique.circuits import (
    Circuit,
    FourPattern,
    SpanningFilter,
    canonicalize,
    circuit_count_formula,
    circuit_table,
    classify_four_circuit,
    delta,
    enumerate_circuits,
    enumerate_paths,
    enumerate_thetas,
    is_oscillating,
    oscillating_mask,
    parse_circuit,
    path_count_formula,
    path_delta,
    similar,
    theta_count_formula,
)

from oracles import brute_circuits, brute_thetas


def representations(seq):
    k = len(seq)
    for s in range(k):
        rot = seq[s:] + seq[:s]
        yield rot
        yield tuple(reversed(rot))


def brute_canonical(seq):
    reps = [r for r in representations(tuple(seq)) if r[0] == min(seq) and r[1] < r[-1]]
    assert len(reps) == 1
    return reps[0]


@pytest.mark.parametrize(
    "seq, expected",
    [((2, 4, 1, 3), (1, 3, 2, 4)), ((1, 2, 3), (1, 2, 3)), ((3, 4, 2, 1), (1, 2, 4, 3))],
)
def test_canonicalize_examples(seq, expected):
    assert canonicalize(seq) == expected
    assert brute_canonical(seq) == expected


@given(st.lists(st.integers(1, 15), min_size=3, max_size=15, unique=True))
def test_canonicalize_constant_on_representations(seq):
    c = canonicalize(seq)
    assert tuple(c) == brute_canonical(seq)
    assert canonicalize(c) == c
    for rep in representations(tuple(seq)):
        assert canonicalize(rep) == c


@given(st.lists(st.integers(1, 15), min_size=3, max_size=15, unique=True))
def test_key_round_trip_and_order(seq):
    c = Circuit(seq)
    assert Circuit.from_key(c.key) == c
    assert parse_circuit(str(c)) == c


def test_key_order_is_length_then_lex():
    circs = sorted(brute_circuits(6), key=lambda c: (len(c), tuple(c)))
    keys = [c.key for c in circs]
    assert keys == sorted(keys)


@pytest.mark.parametrize("bad", [(1, 2), (1, 2, 2), (0, 1, 2)])
def test_circuit_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        Circuit(bad)


@pytest.mark.parametrize(
    "c, d", [((1, 2, 4, 3), 0), ((1, 2, 3, 4, 5), 3), ((1, 2, 3), 1), ((2, 5, 7), 1)]
)
def test_delta_examples(c, d):
    assert delta(c) == d


@pytest.mark.parametrize("p, d", [((1, 2, 3), 2), ((3, 1, 2), 0), ((5,), 0)])
def test_path_delta_examples(p, d):
    assert path_delta(p) == d


def test_delta_bound_and_parity_k7():
    for c in enumerate_circuits(7):
        k = len(c)
        assert delta(c) <= k - 2
        assert delta(c) % 2 == k % 2


def test_table_deltas_match_scalar():
    table = circuit_table(7)
    for c, d in zip(table.circuits(), table.deltas.tolist()):
        assert delta(c) == d


def test_oscillating_examples():
    # every vertex of [1,3,2,4] is a local extremum; [1,2,4,3] has 2 between 1 and 4
    assert is_oscillating((1, 3, 2, 4))
    assert not is_oscillating((1, 2, 4, 3))
    assert not is_oscillating((1, 2, 3))


def test_oscillating_four_circuits_are_1324_k6():
    for c in enumerate_circuits(6):
        if len(c) == 4:
            assert is_oscillating(c) == (classify_four_circuit(c) is FourPattern.C1324)


def test_oscillating_mask_matches_scalar():
    table = circuit_table(7)
    mask = oscillating_mask(table.keys)
    assert [is_oscillating(c) for c in table.circuits()] == mask.tolist()


def test_oscillating_implies_delta_zero():
    for c in enumerate_circuits(7):
        if is_oscillating(c):
            assert delta(c) == 0 and len(c) % 2 == 0


@pytest.mark.parametrize(
    "c, pattern",
    [((1, 3, 2, 4), FourPattern.C1324), ((1, 2, 4, 3), FourPattern.C1243), ((1, 2, 3, 4), FourPattern.OTHER)],
)
def test_classify_four_examples(c, pattern):
    assert classify_four_circuit(Circuit(c)) is pattern


def test_classify_four_rejects_triangle():
    with pytest.raises(ValueError):
        classify_four_circuit(Circuit((1, 2, 3)))


def test_similar_examples():
    assert similar(Circuit((1, 3, 2, 4)), Circuit((2, 6, 5, 9)))
    assert not similar(Circuit((1, 2, 4, 3)), Circuit((1, 3, 2, 4)))
    c = Circuit((1, 4, 2, 5, 3))
    assert similar(c, c)


@pytest.mark.parametrize("k", [4, 5])
def test_similarity_classes_have_one_circuit_per_vertex_set(k):
    n = 6
    circs = [c for c in enumerate_circuits(n) if len(c) == k]
    reps = [c for c in circs if set(c) == set(range(1, k + 1))]
    for X in combinations(range(1, n + 1), k):
        on_x = [c for c in circs if set(c) == set(X)]
        for r in reps:
            assert sum(1 for c in on_x if similar(c, r)) == 1
    # symmetry and transitivity on a sample
    sample = circs[:40]
    for a in sample:
        for b in sample:
            assert similar(a, b) == similar(b, a)
            if similar(a, b):
                assert all(similar(a, c) == similar(b, c) for c in sample)


def test_enumerate_circuit_examples():
    assert len(enumerate_circuits(4)) == 7
    assert len(enumerate_circuits(5, SpanningFilter.NONSPANNING)) == 25
    assert enumerate_circuits(3, SpanningFilter.SPANNING) == [Circuit((1, 2, 3))]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_enumerate_circuits_matches_brute_force(n):
    got = enumerate_circuits(n)
    assert set(got) == brute_circuits(n)
    assert got == sorted(got, key=lambda c: (len(c), tuple(c)))


@pytest.mark.parametrize("n, p", [(1, 1), (3, 9), (4, 34)])
def test_path_count_examples(n, p):
    assert enumerate_paths(n) == p == path_count_formula(n)


@pytest.mark.parametrize("n", range(3, 9))
def test_counts_and_factorial_bounds(n):
    c = len(circuit_table(n).keys)
    assert c == circuit_count_formula(n)
    assert c <= 2 * factorial(n - 1)
    assert path_count_formula(n) < 2 * factorial(n)


def test_theta_examples():
    assert len(list(enumerate_thetas(4))) == 6
    assert len(list(enumerate_thetas(4, restrict_to_circuit=(1, 2, 3, 4)))) == 2
    with pytest.raises(ValueError):
        list(enumerate_thetas(3))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_thetas_match_brute_force(n):
    got = [frozenset(t.circuits) for t in enumerate_thetas(n)]
    assert len(got) == len(set(got)) == theta_count_formula(n)
    assert set(got) == brute_thetas(n)


def test_theta_order_is_deterministic():
    rows = [(t.branch_vertices, tuple(sorted(t.paths))) for t in enumerate_thetas(5)]
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)


def test_theta_structure_k6():
    for t in enumerate_thetas(6):
        x, y = t.branch_vertices
        interiors = [set(p[1:-1]) for p in t.paths]
        for i, j in combinations(range(3), 2):
            assert not interiors[i] & interiors[j]
        for i in range(3):
            others = [t.paths[j] for j in range(3) if j != i]
            assert set(t.circuits[i]) == set(others[0]) | set(others[1])


def test_theta_delta_identity_k6():
    for t in enumerate_thetas(6):
        x, y = t.branch_vertices
        # orient every path from x to y
        ds = [path_delta(p if p[0] == x else p[::-1]) for p in t.paths]
        expected = (abs(ds[2] - ds[1]), abs(ds[0] - ds[2]), abs(ds[1] - ds[0]))
        assert tuple(delta(c) for c in t.circuits) == expected


def test_restricted_thetas_contain_the_circuit():
    c = Circuit((1, 3, 2, 5))
    thetas = list(enumerate_thetas(6, restrict_to_circuit=c))
    assert thetas and all(c in t.circuits for t in thetas)
    full = [t for t in enumerate_thetas(6) if c in t.circuits]
    assert [frozenset(t.circuits) for t in thetas] == [frozenset(t.circuits) for t in full]


def test_theta_counts_formula_matches_enumeration_k7():
    assert sum(1 for _ in enumerate_thetas(7)) == theta_count_formula(7)


@given(st.permutations(range(1, 8)))
def test_delta_invariant_under_representation(perm):
    seq = tuple(perm[:5])
    for rep in representations(seq):
        assert delta(rep) == delta(seq)
