import io
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biasedclique.circuits import Circuit, circuit_table, delta, enumerate_circuits, is_oscillating
from biasedclique.instance import (
    BiasedInstance,
    InstanceFormatError,
    equals_instance,
    format_instance,
    is_consistent,
    make_ka,
    make_ko,
    make_ku,
    parse_instance,
    read_instance,
    restrict,
    validate,
    write_instance,
)

from oracles import brute_theta_violations, brute_thetas

A_VALUES = (0, 1, 2, 3, 5)


def families(n):
    yield "ku", make_ku(n)
    yield "ko", make_ko(n)
    for a in A_VALUES:
        yield f"ka{a}", make_ka(a, n)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_families_are_valid(n):
    for name, inst in families(n):
        assert validate(inst).valid, name


def test_ka2_n5_valid():
    assert validate(make_ka(2, 5)).valid


def test_planted_violation_n4():
    inst = BiasedInstance(4, [(1, 2, 3), (1, 2, 4)])
    report = validate(inst)
    assert not report.valid
    assert report.violations and report.violation_count == len(report.violations)
    theta = report.violations[0]
    assert theta.branch_vertices == (1, 2)
    assert sum(inst.is_balanced(c) for c in theta.circuits) == 2
    assert report.lines()[0].startswith("valid=false")


def test_validate_matches_brute_force_on_random_instances():
    rng = np.random.default_rng(7)
    n = 5
    thetas = brute_thetas(n)
    table = circuit_table(n)
    for _ in range(30):
        mask = rng.random(len(table.keys)) < rng.random()
        inst = BiasedInstance.from_mask(n, mask)
        report = validate(inst, max_violations=10**6)
        expected = brute_theta_violations(inst.balanced, thetas)
        assert report.violation_count == expected
        assert report.valid == (expected == 0)
        assert report.checked_count == len(thetas)


def test_restricted_agrees_with_full():
    rng = np.random.default_rng(11)
    for n in (4, 5, 6):
        table = circuit_table(n)
        for _ in range(15):
            base = make_ka(int(rng.integers(0, n)), n)
            changed = rng.choice(len(table.keys), size=int(rng.integers(1, 4)), replace=False)
            mask = base.mask()
            mask[changed] = ~mask[changed]
            inst = BiasedInstance.from_mask(n, mask)
            circs = [Circuit.from_key(table.keys[i]) for i in changed]
            assert validate(inst, restricted_to=circs).valid == validate(inst).valid


def test_validate_errors():
    with pytest.raises(ValueError):
        validate(BiasedInstance(2))
    with pytest.raises(ValueError):
        validate(make_ku(5), restricted_to=[(1, 2, 9)])
    with pytest.raises(ValueError):
        validate(make_ku(9))
    assert validate(make_ku(3)).valid


def test_constructor_rejects_foreign_circuit():
    with pytest.raises(ValueError):
        BiasedInstance(4, [(1, 2, 5)])


def test_restrict_examples():
    assert restrict(make_ku(5), {1, 2, 3, 4}) == make_ku(4)
    inst = BiasedInstance(6, [(2, 5, 6)])
    assert restrict(inst, {2, 5, 6}).balanced == {Circuit((1, 2, 3))}
    with pytest.raises(ValueError):
        restrict(inst, {1, 2})


@pytest.mark.parametrize("a", [1, 2, 3])
def test_restrict_ka_to_five_subsets(a):
    for X in combinations(range(1, 7), 5):
        assert restrict(make_ka(a, 6), X) == make_ka(a, 5)


def test_restrict_commutes_with_families():
    n = 7
    for k in (3, 4, 5, 6):
        for X in combinations(range(1, n + 1), k):
            assert restrict(make_ku(n), X) == make_ku(k)
            assert restrict(make_ko(n), X) == make_ko(k)
            for a in (0, 2, 3):
                assert restrict(make_ka(a, n), X) == make_ka(a, k)


def test_restrict_matches_direct_definition():
    rng = np.random.default_rng(3)
    table = circuit_table(6)
    inst = BiasedInstance.from_mask(6, rng.random(len(table.keys)) < 0.5)
    for X in [(1, 3, 4, 6), (2, 3, 5, 6, 1)]:
        xs = sorted(X)
        rank = {v: i + 1 for i, v in enumerate(xs)}
        expected = {Circuit(rank[v] for v in c) for c in inst.balanced if set(c) <= set(xs)}
        assert restrict(inst, X).balanced == expected


def test_consistency_examples():
    inst = make_ka(2, 5)
    assert is_consistent(inst, [(1, 2, 3)])
    assert is_consistent(inst, [])
    assert not is_consistent(inst, [(1, 2, 3), (1, 2, 4, 3)])
    assert is_consistent(inst, [(1, 2, 4, 3), (1, 2, 3, 4)])


def test_family_examples():
    n = 6
    all_circuits = set(enumerate_circuits(n))
    assert make_ka(1, n).balanced == all_circuits
    assert make_ka(2, n).balanced == {c for c in all_circuits if len(c) % 2 == 0}
    assert len(make_ku(n)) == 0
    assert equals_instance(make_ka(1, 4), BiasedInstance(4, enumerate_circuits(4)))
    assert not equals_instance(make_ku(4), make_ka(1, 4))
    # the one oscillating circuit of K_4
    assert equals_instance(make_ko(4), BiasedInstance(4, [(1, 3, 2, 4)]))
    with pytest.raises(ValueError):
        make_ka(-1, 4)


def test_ka_zero_is_delta_zero():
    inst = make_ka(0, 6)
    assert inst.balanced == {c for c in enumerate_circuits(6) if delta(c) == 0}


def test_ko_circuits_even_delta_zero():
    for c in make_ko(7).balanced:
        assert len(c) % 2 == 0 and delta(c) == 0 and is_oscillating(c)


def test_equality_and_hash():
    assert make_ka(2, 5) == make_ka(2, 5)
    assert hash(make_ka(2, 5)) == hash(make_ka(2, 5))
    assert make_ka(2, 5) != make_ka(2, 6)
    assert make_ka(4, 5) == make_ka(0, 5)


def test_file_format_bit_exact():
    text = format_instance(BiasedInstance(4, [(1, 2, 4, 3), (1, 2, 3)]))
    assert text == "biased-clique v1\nn 4\nbalanced 2\n1 2 3\n1 2 4 3\nend\n"


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.data())
def test_round_trip(n, data):
    table = circuit_table(n)
    picks = data.draw(st.lists(st.integers(0, len(table.keys) - 1), max_size=20))
    inst = BiasedInstance.from_keys(n, table.keys[picks])
    buf = io.StringIO()
    write_instance(inst, buf)
    buf.seek(0)
    assert equals_instance(read_instance(buf), inst)


def test_round_trip_on_disk(tmp_path):
    path = tmp_path / "ko.txt"
    write_instance(make_ko(6), path)
    assert read_instance(path) == make_ko(6)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("wrong\n", 1),
        ("biased-clique v1\nn x\nbalanced 0\nend\n", 2),
        ("biased-clique v1\nn 4\nbalance 0\nend\n", 3),
        ("biased-clique v1\nn 4\nbalanced 1\n1 2\nend\n", 4),
        ("biased-clique v1\nn 4\nbalanced 2\n1 2 3\n1 2 5\nend\n", 5),
        ("biased-clique v1\nn 4\nbalanced 1\n1 2 3\nfin\n", 5),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(InstanceFormatError) as exc:
        parse_instance(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)
