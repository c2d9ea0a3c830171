"""Cyclic-group edge labellings of K_n and the biased graphs they induce.

Cyclic groups are written additively: modulus ``a > 0`` means the integers
mod ``a`` and modulus ``0`` means the integers.  A labelling orients every
edge ``{i < j}`` either Up (towards ``j``) or Down (towards ``i``).
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from itertools import combinations
from typing import TextIO

import numpy as np

from . import kernels
from .circuits import Circuit, circuit_table
from .instance import (
    BiasedInstance,
    InstanceFormatError,
    delta_multiple_mask,
    four_circuit_keys,
)


@dataclass(frozen=True)
class CyclicGroupElement:
    modulus: int
    value: int

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError(f"modulus must be nonnegative, got {self.modulus}")
        if self.modulus > 0 and not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def is_identity(self) -> bool:
        return self.value == 0

    def _check(self, other: "CyclicGroupElement") -> None:
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "CyclicGroupElement") -> "CyclicGroupElement":
        self._check(other)
        return CyclicGroupElement(self.modulus, self.value + other.value)

    def __neg__(self) -> "CyclicGroupElement":
        return CyclicGroupElement(self.modulus, -self.value)

    def __sub__(self, other: "CyclicGroupElement") -> "CyclicGroupElement":
        return self + (-other)


class Orientation(enum.Enum):
    UP = "Up"
    DOWN = "Down"


def edge_list(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def edge_index(n: int, i: int, j: int) -> int:
    """Position of edge ``{i, j}`` in the sorted edge list of K_n."""
    if i > j:
        i, j = j, i
    if not 1 <= i < j <= n:
        raise ValueError(f"({i}, {j}) is not an edge of K_{n}")
    # edges (1, *), ..., (i - 1, *) come first
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


@dataclass(frozen=True)
class CyclicLabelling:
    n: int
    modulus: int
    orientation: tuple[Orientation, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        m = self.n * (self.n - 1) // 2
        if len(self.orientation) != m or len(self.labels) != m:
            raise ValueError(f"K_{self.n} has {m} edges")
        if self.modulus < 0:
            raise ValueError(f"modulus must be nonnegative, got {self.modulus}")
        if self.modulus > 0:
            object.__setattr__(self, "labels", tuple(v % self.modulus for v in self.labels))

    @classmethod
    def upward(cls, n: int, modulus: int, labels) -> "CyclicLabelling":
        labels = tuple(int(v) for v in labels)
        return cls(n, modulus, (Orientation.UP,) * len(labels), labels)

    def label(self, i: int, j: int) -> CyclicGroupElement:
        return CyclicGroupElement(self.modulus, self.labels[edge_index(self.n, i, j)])

    def orient(self, i: int, j: int) -> Orientation:
        return self.orientation[edge_index(self.n, i, j)]

    def head(self, i: int, j: int) -> int:
        lo, hi = min(i, j), max(i, j)
        return hi if self.orient(lo, hi) is Orientation.UP else lo

    def signed_matrix(self) -> np.ndarray:
        """``M[u, v]``: the contribution of traversing edge ``uv`` from u to v."""
        big = max((abs(v) for v in self.labels), default=0) * max(self.n, 1) >= 2**62
        dtype = object if big else np.int64
        mat = np.zeros((16, 16), dtype=dtype)
        for idx, (i, j) in enumerate(edge_list(self.n)):
            val = self.labels[idx]
            if self.orientation[idx] is Orientation.DOWN:
                val = -val
            mat[i, j] = val
            mat[j, i] = -val
        return mat


def pi(lab: CyclicLabelling, c) -> CyclicGroupElement:
    """Signed label sum along the canonical traversal of ``c``."""
    c = Circuit(c)
    if max(c) > lab.n:
        raise ValueError(f"{c!r} is not a circuit of K_{lab.n}")
    total = 0
    k = len(c)
    for t in range(k):
        u, v = c[t], c[(t + 1) % k]
        val = lab.labels[edge_index(lab.n, u, v)]
        along = (lab.head(u, v) == v)
        total += val if along else -val
    return CyclicGroupElement(lab.modulus, total)


def pi_values(lab: CyclicLabelling, keys: np.ndarray) -> np.ndarray:
    """Vectorised :func:`pi` over packed circuit keys (unreduced sums)."""
    mat, length = kernels.digits(keys)
    mat = mat.astype(np.int64)
    nxt = np.roll(mat, -1, axis=1)
    pos = np.arange(mat.shape[1])
    nxt = np.where(pos == (length[:, None] - 1), mat[:, :1], nxt)
    live = pos < length[:, None]
    contrib = lab.signed_matrix()[mat, nxt]
    return np.where(live, contrib, 0).sum(axis=1)


def derive_instance(lab: CyclicLabelling) -> BiasedInstance:
    if lab.n < 3:
        return BiasedInstance(lab.n)
    table = circuit_table(lab.n)
    vals = pi_values(lab, table.keys)
    if lab.modulus > 0:
        balanced = (vals % lab.modulus) == 0
    else:
        balanced = vals == 0
    return BiasedInstance.from_mask(lab.n, np.asarray(balanced, dtype=bool))


def gamma_u(n: int) -> CyclicLabelling:
    """Distinct powers of two on every edge, over the integers."""
    return CyclicLabelling.upward(n, 0, (1 << idx for idx in range(n * (n - 1) // 2)))


def gamma_o(n: int) -> CyclicLabelling:
    """Label ``2**j`` on edge ``{i < j}``: equal labels exactly at a shared head."""
    return CyclicLabelling.upward(n, 0, (1 << j for _, j in edge_list(n)))


def gamma_a(a: int, n: int) -> CyclicLabelling:
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    return CyclicLabelling.upward(n, a, (1 for _ in edge_list(n)))


def reorient_edge(lab: CyclicLabelling, e: tuple[int, int]) -> CyclicLabelling:
    idx = edge_index(lab.n, *e)
    orient = list(lab.orientation)
    labels = list(lab.labels)
    orient[idx] = Orientation.DOWN if orient[idx] is Orientation.UP else Orientation.UP
    labels[idx] = -labels[idx]
    return CyclicLabelling(lab.n, lab.modulus, tuple(orient), tuple(labels))


def scale_vertex(lab: CyclicLabelling, v: int, alpha: CyclicGroupElement) -> CyclicLabelling:
    """Add ``alpha`` on edges into ``v`` and subtract it on edges out of ``v``."""
    if alpha.modulus != lab.modulus:
        raise ValueError(f"modulus mismatch: {alpha.modulus} vs {lab.modulus}")
    labels = list(lab.labels)
    for w in range(1, lab.n + 1):
        if w == v:
            continue
        idx = edge_index(lab.n, v, w)
        if lab.head(v, w) == v:
            labels[idx] += alpha.value
        else:
            labels[idx] -= alpha.value
    return CyclicLabelling(lab.n, lab.modulus, lab.orientation, tuple(labels))


def normalize_first_vertex(lab: CyclicLabelling) -> CyclicLabelling:
    """Orient every edge Up and zero the labels at vertex 1 using balance-preserving moves."""
    if lab.n < 2:
        raise ValueError("normalisation needs n >= 2")
    out = lab
    for idx, (i, j) in enumerate(edge_list(lab.n)):
        if out.orientation[idx] is Orientation.DOWN:
            out = reorient_edge(out, (i, j))
    for v in range(2, lab.n + 1):
        val = out.labels[edge_index(lab.n, 1, v)]
        if val:
            out = scale_vertex(out, v, CyclicGroupElement(lab.modulus, -val))
    return out


def random_labelling(n: int, modulus: int, rng: np.random.Generator, spread: int = 6) -> CyclicLabelling:
    """Random orientation and labels; over the integers labels lie in ``[-spread, spread]``."""
    m = n * (n - 1) // 2
    orient = tuple(Orientation.UP if b else Orientation.DOWN for b in rng.integers(0, 2, m))
    if modulus > 0:
        labels = rng.integers(0, modulus, m)
    else:
        labels = rng.integers(-spread, spread + 1, m)
    return CyclicLabelling(n, modulus, orient, tuple(int(v) for v in labels))


# -- recognisers -------------------------------------------------------------


def recognize_delta_multiples(inst: BiasedInstance) -> int | None:
    """Least ``a`` with balanced = {C : a | delta(C)}; ``0`` for delta = 0 only."""
    n = inst.n
    if n < 3:
        raise ValueError("recognition needs n >= 3")
    table = circuit_table(n)
    mask = inst.mask()
    if int(mask.sum()) != len(inst):
        return None
    for a in range(1, n - 1):
        if np.array_equal(mask, delta_multiple_mask(table.deltas, a)):
            return a
    if np.array_equal(mask, delta_multiple_mask(table.deltas, 0)):
        return 0
    return None


def four_circuit_premise(inst: BiasedInstance) -> bool:
    """True when every 1324-circuit and every 1243-circuit is balanced."""
    for pattern in ((1, 3, 2, 4), (1, 2, 4, 3)):
        if not inst.flags(four_circuit_keys(inst.n, pattern)).all():
            return False
    return True


class Labellability(enum.Enum):
    NOT_LABELLABLE = "No"
    IS_KA = "IsKa"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class LabellabilityVerdict:
    kind: Labellability
    a: int | None = None

    def __str__(self) -> str:
        if self.kind is Labellability.IS_KA:
            return f"IsKa:{self.a}"
        return self.kind.value


def check_not_group_labellable(inst: BiasedInstance) -> LabellabilityVerdict:
    """Decide group-labellability when all 1324- and 1243-circuits are balanced.

    Under that premise a labelling can be normalised to be constant, so the
    instance is labellable (over any group) exactly when it is some K^a(n).
    """
    if inst.n < 5:
        raise ValueError(f"the labellability argument needs n >= 5, got {inst.n}")
    if not four_circuit_premise(inst):
        return LabellabilityVerdict(Labellability.INCONCLUSIVE)
    a = recognize_delta_multiples(inst)
    if a is None:
        return LabellabilityVerdict(Labellability.NOT_LABELLABLE)
    return LabellabilityVerdict(Labellability.IS_KA, a)


# -- file format -------------------------------------------------------------

HEADER = "cyclic-labelling v1"


def format_labelling(lab: CyclicLabelling) -> str:
    lines = [HEADER, f"n {lab.n}", f"modulus {lab.modulus}"]
    for idx, (i, j) in enumerate(edge_list(lab.n)):
        lines.append(f"{i} {j} {lab.orientation[idx].value} {lab.labels[idx]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_labelling(lab: CyclicLabelling, target: str | os.PathLike | TextIO) -> None:
    text = format_labelling(lab)
    if hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def parse_labelling(text: str) -> CyclicLabelling:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != HEADER:
        raise InstanceFormatError(1, f"expected header {HEADER!r}")

    def int_field(lineno: int, name: str) -> int:
        if lineno > len(lines):
            raise InstanceFormatError(lineno, "unexpected end of file")
        parts = lines[lineno - 1].split()
        if len(parts) != 2 or parts[0] != name:
            raise InstanceFormatError(lineno, f"expected '{name} <int>'")
        try:
            return int(parts[1])
        except ValueError:
            raise InstanceFormatError(lineno, f"'{parts[1]}' is not an integer") from None

    n = int_field(2, "n")
    modulus = int_field(3, "modulus")
    if n < 1 or n > kernels.MAX_VERTICES:
        raise InstanceFormatError(2, f"n must lie in 1..{kernels.MAX_VERTICES}")
    if modulus < 0:
        raise InstanceFormatError(3, "modulus must be nonnegative")
    edges = edge_list(n)
    if len(lines) != len(edges) + 4:
        raise InstanceFormatError(min(len(lines), len(edges) + 4), f"expected {len(edges)} edge lines then 'end'")
    orient, labels = [], []
    for offset, (i, j) in enumerate(edges):
        lineno = 4 + offset
        parts = lines[lineno - 1].split()
        if len(parts) != 4:
            raise InstanceFormatError(lineno, "expected 'i j <Up|Down> <value>'")
        try:
            a, b, value = int(parts[0]), int(parts[1]), int(parts[3])
        except ValueError:
            raise InstanceFormatError(lineno, "non-integer field") from None
        if (a, b) != (i, j):
            raise InstanceFormatError(lineno, f"expected edge {i} {j}")
        try:
            orient.append(Orientation(parts[2]))
        except ValueError:
            raise InstanceFormatError(lineno, f"orientation must be Up or Down, got {parts[2]!r}") from None
        labels.append(value)
    if lines[-1].strip() != "end":
        raise InstanceFormatError(len(lines), "expected 'end'")
    return CyclicLabelling(n, modulus, tuple(orient), tuple(labels))


def read_labelling(source: str | os.PathLike | TextIO) -> CyclicLabelling:
    if hasattr(source, "read"):
        return parse_labelling(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_labelling(fh.read())
