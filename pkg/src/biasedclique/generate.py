"""Seeded generators of valid instances for experiments and tests."""
from __future__ import annotations

import numpy as np

from .circuits import Circuit, circuit_table
from .instance import BiasedInstance, make_ka, make_ko, make_ku, validate
from .labelling import derive_instance, random_labelling


def perturb_hamilton(base: BiasedInstance, rng: np.random.Generator, attempts: int = 8) -> BiasedInstance:
    """Flip the balance of random Hamilton circuits, keeping each flip only if still valid.

    ``base`` must be valid.  The current instance differs from it only on
    the flipped circuits, so validating the thetas through them suffices.
    """
    n = base.n
    table = circuit_table(n)
    spanning = table.keys[table.lengths == n]
    mask = base.flags(spanning)
    flipped: set[int] = set()
    for _ in range(attempts):
        i = int(rng.integers(len(spanning)))
        trial = flipped ^ {i}
        mask[i] = not mask[i]
        inst = _with_spanning(base, spanning, mask)
        if not trial or validate(inst, restricted_to=[Circuit.from_key(spanning[j]) for j in sorted(trial)]).valid:
            flipped = trial
        else:
            mask[i] = not mask[i]
    return _with_spanning(base, spanning, mask)


def _with_spanning(base: BiasedInstance, spanning: np.ndarray, mask: np.ndarray) -> BiasedInstance:
    keys = base.keys[~np.isin(base.keys, spanning)]
    return BiasedInstance.from_keys(base.n, np.concatenate([keys, spanning[mask]]))


def premise_instance(n: int, rng: np.random.Generator, attempts: int = 8) -> BiasedInstance:
    """A valid instance with every 1324- and 1243-circuit balanced."""
    a = int(rng.integers(0, n - 1))
    return perturb_hamilton(make_ka(a, n), rng, attempts)


MODULI = (0, 2, 3, 4, 5, 6, 7, 8)


def random_valid_instance(n: int, rng: np.random.Generator) -> BiasedInstance:
    """A valid instance from one of several sources, chosen at random."""
    source = int(rng.integers(4))
    if source == 0:
        modulus = MODULI[int(rng.integers(len(MODULI)))]
        return derive_instance(random_labelling(n, modulus, rng, spread=int(rng.integers(1, 5))))
    if source == 1:
        return premise_instance(n, rng)
    if source == 2:
        return perturb_hamilton((make_ku(n), make_ko(n))[int(rng.integers(2))], rng)
    # a labelling with many repeated labels balances more circuits
    lab = random_labelling(n, 0, rng, spread=1)
    return derive_instance(lab)
