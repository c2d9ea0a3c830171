import numpy as np

from biasedclique.generate import perturb_hamilton, premise_instance, random_valid_instance
from biasedclique.instance import make_ka, validate
from biasedclique.labelling import four_circuit_premise


def test_perturbation_keeps_validity_and_nonspanning_part():
    rng = np.random.default_rng(1)
    for n in (5, 6, 7):
        base = make_ka(int(rng.integers(0, n - 1)), n)
        inst = perturb_hamilton(base, rng, attempts=12)
        assert validate(inst).valid
        short = lambda i: {c for c in i.balanced if len(c) < n}
        assert short(inst) == short(base)


def test_premise_instances():
    rng = np.random.default_rng(2)
    for n in (5, 6, 7):
        for _ in range(5):
            inst = premise_instance(n, rng)
            assert four_circuit_premise(inst) and validate(inst).valid


def test_generators_are_seeded():
    a = [random_valid_instance(6, np.random.default_rng(s)) for s in range(10)]
    b = [random_valid_instance(6, np.random.default_rng(s)) for s in range(10)]
    assert a == b
    assert all(validate(x).valid for x in a)
