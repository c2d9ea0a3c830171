"""Circuits, paths and theta subgraphs of the ordered complete graph K_n.

Vertices are the integers ``1..n`` with their usual order.  A circuit is
always held in canonical form: it starts at its minimum vertex and the
second vertex is smaller than the last.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from collections import Counter
from itertools import combinations, combinations_with_replacement, permutations
from math import comb, factorial
from typing import Iterator, Sequence

import numpy as np

from . import kernels


class Circuit(tuple):
    """A circuit of an ordered graph, stored in canonical form.

    ``Circuit((2, 4, 1, 3))`` accepts any of the 2k cyclic representations
    and normalises it, so two circuits compare equal exactly when their
    canonical sequences do.
    """

    __slots__ = ()

    def __new__(cls, vertices: Sequence[int]):
        seq = tuple(int(v) for v in vertices)
        if len(seq) < 3:
            raise ValueError(f"a circuit needs at least 3 vertices, got {len(seq)}")
        if len(set(seq)) != len(seq):
            raise ValueError(f"repeated vertex in circuit {seq}")
        if min(seq) < 1:
            raise ValueError(f"circuit vertices must be positive, got {seq}")
        return tuple.__new__(cls, _canonical_sequence(seq))

    @classmethod
    def from_key(cls, key) -> "Circuit":
        return tuple.__new__(cls, kernels.unpack(int(key)))

    @property
    def key(self) -> int:
        return kernels.pack(self)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self)

    def __repr__(self) -> str:
        return f"Circuit({', '.join(map(str, self))})"

    def __str__(self) -> str:
        return " ".join(map(str, self))


def _canonical_sequence(seq: tuple[int, ...]) -> tuple[int, ...]:
    k = len(seq)
    p = min(range(k), key=seq.__getitem__)
    if seq[(p + 1) % k] < seq[p - 1]:
        return tuple(seq[(p + i) % k] for i in range(k))
    return tuple(seq[(p - i) % k] for i in range(k))


def canonicalize(cyclic_sequence: Sequence[int]) -> Circuit:
    return Circuit(cyclic_sequence)


def parse_circuit(text: str) -> Circuit:
    """Read the one-line text form, e.g. ``"1 3 2 4"``."""
    return Circuit(int(tok) for tok in text.split())


class FourPattern(enum.Enum):
    C1324 = "1324"
    C1243 = "1243"
    OTHER = "other"


class SpanningFilter(enum.Enum):
    ALL = "all"
    NONSPANNING = "nonspanning"
    SPANNING = "spanning"


def signed_delta(seq: Sequence[int]) -> int:
    """Ascents minus descents around the cyclic sequence ``seq``."""
    k = len(seq)
    total = 0
    for i in range(k):
        total += 1 if seq[i] > seq[i - 1] else -1
    return total


def delta(c: Sequence[int]) -> int:
    return abs(signed_delta(c))


def path_delta(p: Sequence[int]) -> int:
    """Signed ascent-minus-descent count along a path, first vertex to last."""
    return sum(1 if b > a else -1 for a, b in zip(p, p[1:]))


def is_oscillating(c: Sequence[int]) -> bool:
    k = len(c)
    for i in range(k):
        prev, cur, nxt = c[i - 1], c[i], c[(i + 1) % k]
        if not (cur < min(prev, nxt) or cur > max(prev, nxt)):
            return False
    return True


def classify_four_circuit(c: Circuit) -> FourPattern:
    if len(c) != 4:
        raise ValueError(f"expected a 4-circuit, got length {len(c)}")
    v1, v2, v3, v4 = Circuit(c)
    if v1 < v3 < v2 < v4:
        return FourPattern.C1324
    if v1 < v2 < v4 < v3:
        return FourPattern.C1243
    return FourPattern.OTHER


def order_pattern(seq: Sequence[int]) -> tuple[int, ...]:
    """Replace each entry by its rank (1-based) within ``seq``."""
    ranks = {v: r for r, v in enumerate(sorted(seq), start=1)}
    return tuple(ranks[v] for v in seq)


def similar(c1: Circuit, c2: Circuit) -> bool:
    if len(c1) != len(c2):
        raise ValueError("similarity is only defined for circuits of equal length")
    return order_pattern(Circuit(c1)) == order_pattern(Circuit(c2))


def circuit_on(vertices, pattern: Sequence[int]) -> Circuit:
    """The circuit on ``vertices`` similar to the canonical ``pattern``."""
    ordered = sorted(vertices)
    if len(ordered) != len(pattern):
        raise ValueError("pattern length does not match vertex count")
    return Circuit(ordered[r - 1] for r in pattern)


def oscillating_mask(keys: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_oscillating` over packed circuit keys."""
    signs = kernels.edge_signs(keys)
    _, length = kernels.digits(keys)
    rolled = np.roll(signs, -1, axis=-1)
    pos = np.arange(signs.shape[-1])
    # the successor of the last live edge is edge 0
    rolled = np.where(pos == (length[..., None] - 1), signs[..., :1], rolled)
    live = pos < length[..., None]
    return np.all(~live | (signs * rolled == -1), axis=-1)


def circuit_1324(quad) -> Circuit:
    return circuit_on(quad, (1, 3, 2, 4))


def circuit_1243(quad) -> Circuit:
    return circuit_on(quad, (1, 2, 4, 3))


# -- enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class CircuitTable:
    """All circuits of a graph as sorted packed keys, with cached invariants.

    Key order is (length, canonical sequence), which is also the
    deterministic enumeration order used everywhere else.
    """

    n: int
    keys: np.ndarray
    deltas: np.ndarray
    lengths: np.ndarray

    @classmethod
    def build(cls, adj, n: int) -> "CircuitTable":
        keys = kernels.circuit_keys(adj, n)
        keys.setflags(write=False)
        deltas = np.abs(kernels.signed_deltas(keys))
        lengths = (keys >> np.uint64(60)).astype(np.int64)
        deltas.setflags(write=False)
        lengths.setflags(write=False)
        return cls(n, keys, deltas, lengths)

    def __len__(self) -> int:
        return len(self.keys)

    def index(self, keys) -> np.ndarray:
        """Positions of ``keys`` in the table; -1 where absent."""
        keys = np.asarray(keys, dtype=np.uint64)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        return np.where(self.keys[pos] == keys, pos, -1)

    def circuits(self, mask: np.ndarray | None = None) -> list[Circuit]:
        keys = self.keys if mask is None else self.keys[mask]
        return [Circuit.from_key(k) for k in keys]


@lru_cache(maxsize=16)
def circuit_table(n: int) -> CircuitTable:
    if n < 3:
        raise ValueError(f"K_n has circuits only for n >= 3, got {n}")
    return CircuitTable.build(kernels.complete_adjacency(n), n)


def circuit_count_formula(n: int) -> int:
    return sum(comb(n, k) * factorial(k - 1) // 2 for k in range(3, n + 1))


def path_count_formula(n: int) -> int:
    return n + sum(comb(n, i) * factorial(i) // 2 for i in range(2, n + 1))


def enumerate_circuits(n: int, spanning_filter: SpanningFilter = SpanningFilter.ALL) -> list[Circuit]:
    table = circuit_table(n)
    if spanning_filter is SpanningFilter.ALL:
        return table.circuits()
    spanning = table.lengths == n
    if spanning_filter is SpanningFilter.SPANNING:
        return table.circuits(spanning)
    return table.circuits(~spanning)


def iter_paths(n: int) -> Iterator[tuple[int, ...]]:
    """Every path of K_n once, listed with its smaller end first.

    Single vertices count as paths.
    """
    if n < 1:
        return
    for v in range(1, n + 1):
        yield (v,)
    for size in range(2, n + 1):
        for subset in combinations(range(1, n + 1), size):
            for perm in permutations(subset):
                if perm[0] < perm[-1]:
                    yield perm


def enumerate_paths(n: int) -> int:
    """Number of paths of K_n, counted by walking :func:`iter_paths`."""
    return sum(1 for _ in iter_paths(n))


# -- theta subgraphs ---------------------------------------------------------


@dataclass(frozen=True)
class ThetaSubgraph:
    """Three internally disjoint x-y paths; ``circuits[i]`` avoids ``paths[i]``."""

    branch_vertices: tuple[int, int]
    paths: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    circuits: tuple[Circuit, Circuit, Circuit]

    @classmethod
    def from_row(cls, path_keys, circuit_keys) -> "ThetaSubgraph":
        paths = tuple(kernels.unpack(int(k)) for k in path_keys)
        return cls(
            (paths[0][0], paths[0][-1]),
            paths,
            tuple(Circuit.from_key(k) for k in circuit_keys),
        )

    def __str__(self) -> str:
        x, y = self.branch_vertices
        body = " | ".join(" ".join(map(str, p)) for p in self.paths)
        return f"theta x={x} y={y}: {body}"


def _check_theta_n(n: int) -> None:
    if n < 4:
        raise ValueError(f"K_n contains a theta subgraph only for n >= 4, got {n}")


def iter_theta_blocks(n: int, impl=None) -> Iterator[tuple[int, int, np.ndarray, np.ndarray]]:
    """Yield ``(x, y, path_keys, circuit_keys)`` for each branch pair in order."""
    _check_theta_n(n)
    adj = kernels.complete_adjacency(n)
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            paths, circs = kernels.theta_block(adj, n, x, y, impl)
            yield x, y, paths, circs


@lru_cache(maxsize=8)
def theta_rows(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All theta rows of K_n, concatenated in enumeration order (n <= 8)."""
    if n > 8:
        raise ValueError("theta rows are only materialised for n <= 8; stream blocks instead")
    blocks = list(iter_theta_blocks(n))
    paths = np.concatenate([b[2] for b in blocks])
    circs = np.concatenate([b[3] for b in blocks])
    paths.setflags(write=False)
    circs.setflags(write=False)
    return paths, circs


def restricted_theta_rows(n: int, circuits, adj=None) -> tuple[np.ndarray, np.ndarray]:
    """Theta rows containing at least one of ``circuits``, each row once."""
    if adj is None:
        _check_theta_n(n)
        adj = kernels.complete_adjacency(n)
    ps, cs = [], []
    for c in circuits:
        p, q = kernels.ear_thetas(adj, n, Circuit(c).key)
        ps.append(p)
        cs.append(q)
    if not ps:
        empty = np.zeros((0, 3), dtype=np.uint64)
        return empty, empty.copy()
    return kernels.sort_theta_rows(np.concatenate(ps), np.concatenate(cs))


def enumerate_thetas(n: int, restrict_to_circuit: Sequence[int] | None = None) -> Iterator[ThetaSubgraph]:
    _check_theta_n(n)
    if restrict_to_circuit is not None:
        c = Circuit(restrict_to_circuit)
        if max(c) > n:
            raise ValueError(f"{c!r} is not a circuit of K_{n}")
        paths, circs = restricted_theta_rows(n, [c])
        for p, q in zip(paths, circs):
            yield ThetaSubgraph.from_row(p, q)
        return
    for _, _, paths, circs in iter_theta_blocks(n):
        for p, q in zip(paths, circs):
            yield ThetaSubgraph.from_row(p, q)


def theta_count_formula(n: int) -> int:
    """Number of theta subgraphs of K_n, counted by internal path sizes."""
    m = n - 2
    per_pair = 0
    for sizes in combinations_with_replacement(range(m + 1), 3):
        if sum(sizes) > m or sizes.count(0) > 1:
            continue
        ways = factorial(m) // factorial(m - sum(sizes))
        for mult in Counter(sizes).values():
            ways //= factorial(mult)
        per_pair += ways
    return comb(n, 2) * per_pair
