"""The graph on nonspanning circuits joined through thetas with a 1324/1243 member."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import (
    Circuit,
    circuit_table,
    iter_theta_blocks,
    restricted_theta_rows,
    theta_rows,
)
from .instance import four_circuit_keys, member_flags
from .unionfind import UnionFind

OMEGA_LIMIT = 8


def special_keys(n: int) -> np.ndarray:
    """Sorted keys of all 1324- and 1243-circuits of K_n."""
    keys = np.concatenate([four_circuit_keys(n, (1, 3, 2, 4)), four_circuit_keys(n, (1, 2, 4, 3))])
    return np.unique(keys)


@dataclass
class OmegaGraph:
    n: int
    vertices: list[Circuit]
    adjacency: np.ndarray  # (E, 2) sorted vertex-index pairs, i < j
    components: list[list[int]]

    def adjacent(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        m = len(self.vertices)
        codes = self.adjacency[:, 0] * m + self.adjacency[:, 1]
        pos = np.searchsorted(codes, i * m + j)
        return bool(pos < len(codes) and codes[pos] == i * m + j)

    def component_index(self) -> np.ndarray:
        out = np.empty(len(self.vertices), dtype=np.int64)
        for cid, comp in enumerate(self.components):
            out[comp] = cid
        return out

    def summary_lines(self) -> list[str]:
        deltas = circuit_table(self.n).deltas[: len(self.vertices)]
        lines = []
        for comp in sorted(self.components, key=lambda c: (int(deltas[c].min()), c[0])):
            ds = sorted({int(d) for d in deltas[comp]})
            label = ",".join(map(str, ds))
            lines.append(f"delta={label}: {len(comp)} circuits")
        return lines


def _omega_edges(n: int, circs: np.ndarray, special: np.ndarray, nonspan_count: int, table) -> np.ndarray:
    """Omega edges contributed by a block of theta rows."""
    idx = table.index(circs)
    is_special = member_flags(special, circs)
    # nonspanning circuits occupy the first table positions (keys sort by length)
    nonspan = idx < nonspan_count
    pairs = []
    for third, (a, b) in ((0, (1, 2)), (1, (0, 2)), (2, (0, 1))):
        sel = is_special[:, third] & nonspan[:, a] & nonspan[:, b]
        if sel.any():
            u, v = idx[sel, a], idx[sel, b]
            pairs.append(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(pairs)


def build_omega(n: int, allow_large: bool = False) -> OmegaGraph:
    if n < 5:
        raise ValueError(f"Omega is studied for n >= 5, got {n}")
    if n > OMEGA_LIMIT and not allow_large:
        raise ValueError(f"building Omega for n = {n} is disabled by default; pass allow_large")
    table = circuit_table(n)
    nonspan_count = int(np.count_nonzero(table.lengths < n))
    special = special_keys(n)
    if n <= OMEGA_LIMIT:
        blocks = [theta_rows(n)[1]]
    else:
        blocks = (c for _, _, _, c in iter_theta_blocks(n))
    edges = [_omega_edges(n, circs, special, nonspan_count, table) for circs in blocks]
    adjacency = np.unique(np.concatenate(edges), axis=0) if edges else np.zeros((0, 2), dtype=np.int64)
    uf = UnionFind(nonspan_count)
    for u, v in adjacency.tolist():
        uf.union(u, v)
    vertices = [Circuit.from_key(k) for k in table.keys[:nonspan_count]]
    return OmegaGraph(n, vertices, adjacency, uf.groups())


def omega_adjacent(n: int, c1, c2) -> bool:
    """Whether some theta holds ``c1``, ``c2`` and a 1324- or 1243-circuit as its third circuit."""
    c1, c2 = Circuit(c1), Circuit(c2)
    for c in (c1, c2):
        if len(c) >= n or max(c) > n:
            raise ValueError(f"{c!r} is not a nonspanning circuit of K_{n}")
    if c1 == c2:
        raise ValueError("Omega adjacency needs two distinct circuits")
    _, circs = restricted_theta_rows(n, [c1])
    special = special_keys(n)
    for row in circs.tolist():
        if c2.key in row:
            third = next(k for k in row if k not in (c1.key, c2.key))
            if member_flags(special, [third])[0]:
                return True
    return False


def delta_partition(n: int) -> list[list[int]]:
    """Nonspanning circuit indices grouped by delta, ordered by smallest index."""
    table = circuit_table(n)
    nonspan_count = int(np.count_nonzero(table.lengths < n))
    groups: dict[int, list[int]] = {}
    for i, d in enumerate(table.deltas[:nonspan_count].tolist()):
        groups.setdefault(d, []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def verify_omega_components(n: int, omega: OmegaGraph | None = None) -> bool:
    """True iff Omega's components are exactly the delta classes."""
    omega = omega or build_omega(n, allow_large=True)
    return omega.components == delta_partition(n)
