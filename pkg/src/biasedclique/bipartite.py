"""Biased complete bipartite graphs K_{nA,nB} and consistent K_{t,t} subgraphs.

Side A vertex ``a_i`` is stored as ``i`` and side B vertex ``b_j`` as
``nA + j``, so the clique kernels and canonical form apply unchanged: a
circuit starts at its least A vertex and continues to the smaller of its
two B neighbours.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import kernels
from .circuits import Circuit
from .instance import (
    InstanceFormatError,
    ValidationReport,
    _count_violations,
    _sorted_unique,
    member_flags,
)

_TOKEN = re.compile(r"^([ab])([1-9][0-9]*)$")


def bipartite_adjacency(nA: int, nB: int) -> list[int]:
    if nA < 1 or nB < 1:
        raise ValueError(f"both sides need a vertex, got nA={nA} nB={nB}")
    if nA + nB > kernels.MAX_VERTICES:
        raise ValueError(f"at most {kernels.MAX_VERTICES} vertices in total, got {nA + nB}")
    side_a = sum(1 << i for i in range(1, nA + 1))
    side_b = sum(1 << (nA + j) for j in range(1, nB + 1))
    return [0] + [side_b] * nA + [side_a] * nB


def _sub_adjacency(nA: int, A: Sequence[int], B: Sequence[int]) -> list[int]:
    """Adjacency of the complete bipartite graph induced on side indices ``A`` and ``B``."""
    amask = sum(1 << a for a in A)
    bmask = sum(1 << (nA + b) for b in B)
    adj = [0] * (kernels.MAX_VERTICES + 1)
    for a in A:
        adj[a] = bmask
    for b in B:
        adj[nA + b] = amask
    return adj


@lru_cache(maxsize=16)
def bipartite_circuit_keys(nA: int, nB: int) -> np.ndarray:
    keys = kernels.circuit_keys(bipartite_adjacency(nA, nB), nA + nB)
    keys.setflags(write=False)
    return keys


def induced_circuit_keys(nA: int, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """Keys of all circuits inside the sub-biclique on ``A`` and ``B``."""
    return kernels.circuit_keys(_sub_adjacency(nA, A, B), nA + max(B, default=0))


def iter_bipartite_theta_blocks(nA: int, nB: int):
    adj = bipartite_adjacency(nA, nB)
    N = nA + nB
    for x in range(1, N + 1):
        for y in range(x + 1, N + 1):
            yield kernels.theta_block(adj, N, x, y)


@lru_cache(maxsize=16)
def bipartite_theta_rows(nA: int, nB: int) -> tuple[np.ndarray, np.ndarray]:
    blocks = list(iter_bipartite_theta_blocks(nA, nB))
    paths = np.concatenate([b[0] for b in blocks])
    circs = np.concatenate([b[1] for b in blocks])
    paths.setflags(write=False)
    circs.setflags(write=False)
    return paths, circs


# -- circuits in side notation -----------------------------------------------


def to_side(nA: int, v: int) -> tuple[str, int]:
    return ("a", v) if v <= nA else ("b", v - nA)


def from_side(nA: int, nB: int, side: str, i: int) -> int:
    limit = nA if side == "a" else nB
    if not 1 <= i <= limit:
        raise ValueError(f"vertex {side}{i} is outside side {side.upper()} of size {limit}")
    return i if side == "a" else nA + i


def bicircuit(nA: int, nB: int, seq) -> Circuit:
    """Canonical circuit from a sequence of ``"a3"`` strings or ``("a", 3)`` pairs."""
    verts = []
    for item in seq:
        if isinstance(item, str):
            m = _TOKEN.match(item)
            if not m:
                raise ValueError(f"bad bipartite vertex {item!r}")
            side, i = m.group(1), int(m.group(2))
        else:
            side, i = item
        verts.append(from_side(nA, nB, side, int(i)))
    k = len(verts)
    if k < 4 or k % 2:
        raise ValueError(f"a bipartite circuit has even length >= 4, got {k}")
    sides = [v <= nA for v in verts]
    if any(sides[i] == sides[i - 1] for i in range(k)):
        raise ValueError(f"circuit {' '.join(map(str, seq))} does not alternate sides")
    return Circuit(verts)


def parse_bicircuit(nA: int, nB: int, text: str) -> Circuit:
    return bicircuit(nA, nB, text.split())


def format_bicircuit(nA: int, c: Sequence[int]) -> str:
    return " ".join(f"{s}{i}" for s, i in (to_side(nA, v) for v in c))


# -- instances ----------------------------------------------------------------


class BipartiteBiasedInstance:
    """K_{nA,nB} with a set of balanced circuits; validity is checked separately."""

    __slots__ = ("nA", "nB", "_keys", "_set")

    def __init__(self, nA: int, nB: int, balanced: Iterable = ()):
        bipartite_adjacency(nA, nB)
        keys = []
        for c in balanced:
            if isinstance(c, str):
                c = parse_bicircuit(nA, nB, c)
            elif c and not isinstance(next(iter(c)), (int, np.integer)):
                c = bicircuit(nA, nB, c)
            else:
                c = Circuit(c)
                bicircuit(nA, nB, [to_side(nA, v) for v in c])
            keys.append(c.key)
        self.nA, self.nB = nA, nB
        self._keys = _sorted_unique(keys)
        self._set = None

    @classmethod
    def from_keys(cls, nA: int, nB: int, keys) -> "BipartiteBiasedInstance":
        inst = cls.__new__(cls)
        inst.nA, inst.nB = nA, nB
        inst._keys = _sorted_unique(keys)
        inst._set = None
        return inst

    @classmethod
    def from_mask(cls, nA: int, nB: int, mask) -> "BipartiteBiasedInstance":
        return cls.from_keys(nA, nB, bipartite_circuit_keys(nA, nB)[np.asarray(mask, dtype=bool)])

    @property
    def keys(self) -> np.ndarray:
        return self._keys

    def flags(self, keys) -> np.ndarray:
        return member_flags(self._keys, keys)

    def four_circuit(self, x: int, x2: int, u: int, v: int) -> Circuit:
        """The 4-circuit on A vertices ``x, x2`` and B vertices ``u, v``."""
        return Circuit((x, self.nA + u, x2, self.nA + v))

    def four_balanced(self, x: int, x2: int, u: int, v: int) -> bool:
        if x > x2:
            x, x2 = x2, x
        if u > v:
            u, v = v, u
        return self.key_balanced(kernels.pack((x, self.nA + u, x2, self.nA + v)))

    def key_balanced(self, key: int) -> bool:
        if self._set is None:
            self._set = set(self._keys.tolist())
        return key in self._set

    def is_balanced(self, c) -> bool:
        return self.key_balanced(Circuit(c).key)

    def sorted_balanced(self) -> list[Circuit]:
        return [Circuit.from_key(k) for k in self._keys]

    def __len__(self) -> int:
        return len(self._keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteBiasedInstance):
            return NotImplemented
        return (self.nA, self.nB) == (other.nA, other.nB) and np.array_equal(self._keys, other._keys)

    def __hash__(self) -> int:
        return hash((self.nA, self.nB, self._keys.tobytes()))

    def __repr__(self) -> str:
        return f"BipartiteBiasedInstance(nA={self.nA}, nB={self.nB}, balanced={len(self)} circuits)"


@dataclass
class BipartiteValidationReport(ValidationReport):
    nA: int = 0

    def lines(self) -> list[str]:
        out = super().lines()[:1]
        for theta in self.violations:
            x, y = (format_bicircuit(self.nA, (v,)) for v in theta.branch_vertices)
            body = " | ".join(format_bicircuit(self.nA, p) for p in theta.paths)
            out.append(f"violation theta x={x} y={y}: {body}")
        return out


def validate_bipartite(inst: BipartiteBiasedInstance, *, max_violations: int = 10) -> BipartiteValidationReport:
    if inst.nA < 2 or inst.nB < 2:
        raise ValueError(f"validation needs both sides >= 2, got nA={inst.nA} nB={inst.nB}")
    paths, circs = bipartite_theta_rows(inst.nA, inst.nB)
    total, found = _count_violations(inst.keys, paths, circs, max_violations)
    return BipartiteValidationReport(total == 0, found, len(paths), total, inst.nA)


@lru_cache(maxsize=8)
def _edge_incidence(nA: int, nB: int) -> tuple[np.ndarray, np.ndarray]:
    """Per circuit and position: flat edge index ``(i-1)*nB + (j-1)`` and traversal sign."""
    keys = bipartite_circuit_keys(nA, nB)
    mat, length = kernels.digits(keys)
    u = mat.astype(np.int64)
    pos = np.arange(mat.shape[1])
    nxt = np.where(pos + 1 < length[:, None], np.roll(u, -1, axis=1), u[:, :1])
    live = pos < length[:, None]
    from_a = u <= nA
    a_side = np.where(from_a, u, nxt)
    b_side = np.where(from_a, nxt, u) - nA
    edge = np.where(live, (a_side - 1) * nB + (b_side - 1), 0)
    sign = np.where(live, np.where(from_a, 1, -1), 0)
    return edge, sign


def derive_bipartite(nA: int, nB: int, labels: np.ndarray, modulus: int) -> BipartiteBiasedInstance:
    """Balanced circuits of the labelling ``labels[i-1, j-1]`` on edge a_i -> b_j over Z_modulus."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (nA, nB):
        raise ValueError(f"labels must have shape ({nA}, {nB}), got {labels.shape}")
    edge, sign = _edge_incidence(nA, nB)
    total = (labels.reshape(-1)[edge] * sign).sum(axis=1)
    if modulus:
        total %= modulus
    keys = bipartite_circuit_keys(nA, nB)
    return BipartiteBiasedInstance.from_keys(nA, nB, keys[total == 0])


def random_bipartite_labelling(nA: int, nB: int, rng: np.random.Generator, modulus: int) -> BipartiteBiasedInstance:
    high = modulus if modulus else 4
    labels = rng.integers(0, high, size=(nA, nB))
    return derive_bipartite(nA, nB, labels, modulus)


# -- exhaustive enumeration ---------------------------------------------------


@lru_cache(maxsize=8)
def _theta_index_rows(nA: int, nB: int) -> np.ndarray:
    keys = bipartite_circuit_keys(nA, nB)
    return np.searchsorted(keys, bipartite_theta_rows(nA, nB)[1]).astype(np.intc)


def valid_assignments(
    nA: int,
    nB: int,
    fixed: dict[int, int] | None = None,
    max_length: int | None = None,
    limit: int = -1,
    impl=None,
) -> np.ndarray:
    """Balanced flags (one row per instance) of valid instances of K_{nA,nB}.

    ``fixed`` pins circuits by index in :func:`bipartite_circuit_keys`.
    With ``max_length`` only circuits up to that length vary freely; each
    such assignment that extends to a valid instance appears once, completed
    by its first extension (unbalanced tried before balanced).
    """
    keys = bipartite_circuit_keys(nA, nB)
    init = np.full(len(keys), -1, dtype=np.int8)
    for i, x in (fixed or {}).items():
        init[i] = x
    lengths = (keys >> np.uint64(60)).astype(np.int64)
    stop = len(keys) if max_length is None else int(np.count_nonzero(lengths <= max_length))
    return kernels.theta_assignments(_theta_index_rows(nA, nB), len(keys), stop, init, limit, impl) == 1


def iter_valid_bipartite(nA: int, nB: int, fixed=None, max_length=None, limit: int = -1):
    for row in valid_assignments(nA, nB, fixed, max_length, limit):
        yield BipartiteBiasedInstance.from_mask(nA, nB, row)


# -- consistent bicliques ----------------------------------------------------


@dataclass(frozen=True)
class BicliqueResult:
    A: tuple[int, ...]
    B: tuple[int, ...]
    balanced: bool
    certificate: str

    def __str__(self) -> str:
        side_a = ",".join(f"a{i}" for i in self.A)
        side_b = ",".join(f"b{j}" for j in self.B)
        kind = "balanced" if self.balanced else "unbalanced"
        return f"A={side_a} B={side_b} {kind}"


def _split_classes(inst: BipartiteBiasedInstance, X: tuple[int, int], Bset: list[int]) -> list[int]:
    """Largest class of "C_uv balanced" on ``Bset``, or its class representatives if more."""
    x, x2 = X
    reps: list[int] = []
    classes: list[list[int]] = []
    for u in Bset:
        for r, cls in zip(reps, classes):
            if inst.four_balanced(x, x2, r, u):
                cls.append(u)
                break
        else:
            reps.append(u)
            classes.append([u])
    largest = max(classes, key=len)
    return largest if len(largest) >= len(reps) else reps


def _monochromatic_subset(colors: dict[tuple[int, int], int], verts: list[int], t: int, want: int):
    chosen: list[int] = []

    def rec(start: int):
        if len(chosen) == t:
            return tuple(chosen)
        for idx in range(start, len(verts) - (t - len(chosen)) + 1):
            v = verts[idx]
            if all(colors[(u, v)] == want for u in chosen):
                chosen.append(v)
                got = rec(idx + 1)
                if got:
                    return got
                chosen.pop()
        return None

    return rec(0)


def _all_circuit_flags(inst: BipartiteBiasedInstance, A, B) -> np.ndarray:
    keys = induced_circuit_keys(inst.nA, A, B)
    return inst.flags(keys)


def _consistent_on(inst: BipartiteBiasedInstance, A, B) -> bool:
    flags = _all_circuit_flags(inst, A, B)
    return bool(flags.all() or not flags.any())


def find_consistent_biclique(inst: BipartiteBiasedInstance, t: int) -> BicliqueResult | None:
    """A K_{t,t} whose circuits are all balanced or all unbalanced, or None.

    Follows the pair-by-pair refinement of B, a monochromatic t-set of A,
    and then either an all-unbalanced B side or the path-majority argument
    for an all-balanced one.  Every answer is checked before it is returned.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    nA, nB = inst.nA, inst.nB
    if nA < t or nB < t:
        return None
    if t == 1:
        return BicliqueResult((1,), (1,), False, "no circuits")
    A0 = list(range(1, min(nA, 4**t) + 1))
    Bcur = list(range(1, nB + 1))
    for X in combinations(A0, 2):
        Bcur = _split_classes(inst, X, Bcur)
        if len(Bcur) < t:
            return _exhaustive_biclique(inst, t)
    Bprime = Bcur
    colors: dict[tuple[int, int], int] = {}
    if len(Bprime) >= 2:
        for x, x2 in combinations(A0, 2):
            colors[(x, x2)] = int(inst.four_balanced(x, x2, Bprime[0], Bprime[1]))
    else:
        colors = {X: 1 for X in combinations(A0, 2)}
    picks = [s for s in (_monochromatic_subset(colors, A0, t, w) for w in (1, 0)) if s]
    if not picks:
        return _exhaustive_biclique(inst, t)
    Aprime = min(picks)

    Bdouble: list[int] = []
    for b in Bprime:
        if not _all_circuit_flags(inst, Aprime, Bdouble + [b]).any():
            Bdouble.append(b)
    if len(Bdouble) >= t:
        result = BicliqueResult(Aprime, tuple(Bdouble[:t]), False, "maximal all-unbalanced B side")
    else:
        cert = _path_majority(inst, Aprime, Bprime, Bdouble)
        if cert is None and colors_balanced(inst, Aprime, Bprime):
            cert = "4-circuits balanced by inspection"
        if cert is None:
            return _exhaustive_biclique(inst, t)
        result = BicliqueResult(Aprime, tuple(Bprime[:t]), True, cert)
    if not _consistent_on(inst, result.A, result.B):
        return _exhaustive_biclique(inst, t)
    return result


def colors_balanced(inst: BipartiteBiasedInstance, A, B) -> bool:
    return all(
        inst.four_balanced(x, x2, u, v)
        for x, x2 in combinations(A, 2)
        for u, v in combinations(B, 2)
    )


EXHAUSTIVE_LIMIT = 20000


def _exhaustive_biclique(inst: BipartiteBiasedInstance, t: int) -> BicliqueResult | None:
    """Lexicographically first consistent K_{t,t}, when the search space is small."""
    if comb(inst.nA, t) * comb(inst.nB, t) > EXHAUSTIVE_LIMIT:
        return None
    for A in combinations(range(1, inst.nA + 1), t):
        for B in combinations(range(1, inst.nB + 1), t):
            flags = _all_circuit_flags(inst, A, B)
            if flags.all() or not flags.any():
                return BicliqueResult(A, B, bool(flags.all()), "exhaustive search")
    return None


def _path_majority(inst: BipartiteBiasedInstance, Aprime, Bprime, Bdouble) -> str | None:
    """Two vertices outside B'' closing the same path into balanced circuits give a balanced 4-circuit."""
    nA = inst.nA
    seen: dict[tuple[int, ...], int] = {}
    for b in Bprime:
        if b in Bdouble:
            continue
        keys = induced_circuit_keys(nA, Aprime, Bdouble + [b])
        bal = keys[inst.flags(keys)]
        for key in bal.tolist():
            c = list(kernels.unpack(key))
            at = c.index(nA + b)
            path = tuple(c[at + 1 :] + c[:at])
            if path[0] > path[-1]:
                path = path[::-1]
            if path in seen:
                b0 = seen[path]
                quad = Circuit((nA + b0, path[0], nA + b, path[-1]))
                if inst.is_balanced(quad):
                    return f"path {format_bicircuit(nA, path)} closes through b{b0} and b{b}; 4-circuits balanced"
            else:
                seen[path] = b
    return None


# -- file format -------------------------------------------------------------

HEADER = "biased-biclique v1"


def format_bipartite(inst: BipartiteBiasedInstance) -> str:
    lines = [HEADER, f"nA {inst.nA}", f"nB {inst.nB}", f"balanced {len(inst)}"]
    lines.extend(format_bicircuit(inst.nA, c) for c in inst.sorted_balanced())
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_bipartite(inst: BipartiteBiasedInstance, target: str | os.PathLike | TextIO) -> None:
    text = format_bipartite(inst)
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_bipartite(text: str) -> BipartiteBiasedInstance:
    lines = text.splitlines()

    def field(lineno: int, name: str) -> int:
        if lineno > len(lines):
            raise InstanceFormatError(lineno, f"expected '{name} <int>', got end of file")
        parts = lines[lineno - 1].split()
        if len(parts) != 2 or parts[0] != name or not parts[1].lstrip("-").isdigit():
            raise InstanceFormatError(lineno, f"expected '{name} <int>'")
        return int(parts[1])

    if not lines or lines[0].strip() != HEADER:
        raise InstanceFormatError(1, f"expected header '{HEADER}'")
    nA, nB, count = field(2, "nA"), field(3, "nB"), field(4, "balanced")
    try:
        bipartite_adjacency(nA, nB)
    except ValueError as exc:
        raise InstanceFormatError(3, str(exc)) from None
    if count < 0:
        raise InstanceFormatError(4, "circuit count must be nonnegative")
    circuits = []
    for lineno in range(5, 5 + count):
        if lineno > len(lines):
            raise InstanceFormatError(lineno, "unexpected end of file")
        try:
            circuits.append(parse_bicircuit(nA, nB, lines[lineno - 1]))
        except ValueError as exc:
            raise InstanceFormatError(lineno, str(exc)) from None
    end = 5 + count
    if end > len(lines) or lines[end - 1].strip() != "end":
        raise InstanceFormatError(end, "expected 'end'")
    if any(line.strip() for line in lines[end:]):
        raise InstanceFormatError(end + 1, "trailing content after 'end'")
    return BipartiteBiasedInstance(nA, nB, circuits)


def read_bipartite(source: str | os.PathLike | TextIO) -> BipartiteBiasedInstance:
    if hasattr(source, "read"):
        return parse_bipartite(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_bipartite(fh.read())
