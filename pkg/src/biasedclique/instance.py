"""Biased complete graphs given by an explicit set of balanced circuits."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, TextIO

import numpy as np

from . import kernels
from .circuits import (
    Circuit,
    ThetaSubgraph,
    circuit_table,
    oscillating_mask,
    restricted_theta_rows,
    theta_rows,
)

FULL_VALIDATION_LIMIT = 8


class InstanceFormatError(ValueError):
    """A malformed instance or labelling file; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


def _sorted_unique(keys) -> np.ndarray:
    arr = np.unique(np.asarray(keys, dtype=np.uint64))
    arr.setflags(write=False)
    return arr


def member_flags(sorted_keys: np.ndarray, keys) -> np.ndarray:
    """Boolean array: which of ``keys`` occur in the sorted array ``sorted_keys``."""
    keys = np.asarray(keys, dtype=np.uint64)
    if len(sorted_keys) == 0:
        return np.zeros(keys.shape, dtype=bool)
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.minimum(pos, len(sorted_keys) - 1)
    return sorted_keys[pos] == keys


class BiasedInstance:
    """The ordered complete graph on ``1..n`` with a set of balanced circuits.

    Validity (the theta property) is not enforced here; use :func:`validate`.
    """

    __slots__ = ("n", "_keys", "_circuits")

    def __init__(self, n: int, balanced: Iterable[Iterable[int]] = ()):
        if n < 1 or n > kernels.MAX_VERTICES:
            raise ValueError(f"n must lie in 1..{kernels.MAX_VERTICES}, got {n}")
        keys = []
        for c in balanced:
            c = Circuit(c)
            if max(c) > n:
                raise ValueError(f"{c!r} is not a circuit of K_{n}")
            keys.append(c.key)
        self.n = n
        self._keys = _sorted_unique(keys)
        self._circuits = None

    @classmethod
    def from_keys(cls, n: int, keys) -> "BiasedInstance":
        inst = cls.__new__(cls)
        inst.n = n
        inst._keys = _sorted_unique(keys)
        inst._circuits = None
        return inst

    @classmethod
    def from_mask(cls, n: int, mask: np.ndarray) -> "BiasedInstance":
        """Build from a boolean mask over ``circuit_table(n)``."""
        if n < 3:
            return cls(n)
        return cls.from_keys(n, circuit_table(n).keys[mask])

    @property
    def keys(self) -> np.ndarray:
        return self._keys

    @property
    def balanced(self) -> frozenset[Circuit]:
        if self._circuits is None:
            self._circuits = frozenset(Circuit.from_key(k) for k in self._keys)
        return self._circuits

    def sorted_balanced(self) -> list[Circuit]:
        return [Circuit.from_key(k) for k in self._keys]

    def mask(self) -> np.ndarray:
        """Balanced flags aligned with ``circuit_table(n)``."""
        return member_flags(self._keys, circuit_table(self.n).keys)

    def flags(self, keys) -> np.ndarray:
        return member_flags(self._keys, keys)

    def is_balanced(self, c) -> bool:
        return bool(self.flags([Circuit(c).key])[0])

    def __len__(self) -> int:
        return len(self._keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiasedInstance):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._keys, other._keys)

    def __hash__(self) -> int:
        return hash((self.n, self._keys.tobytes()))

    def __repr__(self) -> str:
        return f"BiasedInstance(n={self.n}, balanced={len(self)} circuits)"


def equals_instance(a: BiasedInstance, b: BiasedInstance) -> bool:
    return a == b


# -- canonical families ------------------------------------------------------


def make_ku(n: int) -> BiasedInstance:
    return BiasedInstance(n)


def make_ko(n: int) -> BiasedInstance:
    if n < 3:
        return BiasedInstance(n)
    table = circuit_table(n)
    return BiasedInstance.from_mask(n, oscillating_mask(table.keys))


def delta_multiple_mask(deltas: np.ndarray, a: int) -> np.ndarray:
    """Circuits whose delta is a multiple of ``a`` (``a == 0``: delta is zero)."""
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    if a == 0:
        return deltas == 0
    return deltas % a == 0


def make_ka(a: int, n: int) -> BiasedInstance:
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    if n < 3:
        return BiasedInstance(n)
    return BiasedInstance.from_mask(n, delta_multiple_mask(circuit_table(n).deltas, a))


# -- validation --------------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    violations: list[ThetaSubgraph] = field(default_factory=list)
    checked_count: int = 0
    violation_count: int = 0

    def lines(self) -> list[str]:
        out = [f"valid={str(self.valid).lower()} checked={self.checked_count} violations={self.violation_count}"]
        out.extend(f"violation {t}" for t in self.violations)
        return out


def _count_violations(keys: np.ndarray, paths: np.ndarray, circs: np.ndarray, limit: int):
    if len(circs) == 0:
        return 0, []
    counts = member_flags(keys, circs).sum(axis=1)
    bad = np.flatnonzero(counts == 2)
    found = [ThetaSubgraph.from_row(paths[i], circs[i]) for i in bad[:limit]]
    return len(bad), found


def _block_worker(args):
    n, keys, x, y, limit = args
    adj = kernels.complete_adjacency(n)
    paths, circs = kernels.theta_block(adj, n, x, y)
    total, found = _count_violations(keys, paths, circs, limit)
    return len(paths), total, found


def _merge(results, limit: int) -> ValidationReport:
    checked = total = 0
    found: list[ThetaSubgraph] = []
    for rows, bad, viol in results:
        checked += rows
        total += bad
        if len(found) < limit:
            found.extend(viol[: limit - len(found)])
    return ValidationReport(total == 0, found, checked, total)


def validate(
    inst: BiasedInstance,
    restricted_to: Iterable[Iterable[int]] | None = None,
    *,
    max_violations: int = 10,
    allow_large: bool = False,
    jobs: int = 1,
) -> ValidationReport:
    """Check that no theta subgraph holds exactly two balanced circuits.

    With ``restricted_to`` only thetas containing one of those circuits are
    checked.  That is sound when ``inst`` differs from a known-valid
    instance only on those circuits.  Full checks beyond n = 8 need
    ``allow_large``.
    """
    n = inst.n
    if n < 3:
        raise ValueError(f"validation needs n >= 3, got {n}")
    if n == 3:
        return ValidationReport(True)
    if restricted_to is not None:
        circuits = [Circuit(c) for c in restricted_to]
        for c in circuits:
            if max(c) > n:
                raise ValueError(f"{c!r} is not a circuit of K_{n}")
        paths, circs = restricted_theta_rows(n, circuits)
        total, found = _count_violations(inst.keys, paths, circs, max_violations)
        return ValidationReport(total == 0, found, len(paths), total)
    if n <= FULL_VALIDATION_LIMIT:
        paths, circs = theta_rows(n)
        total, found = _count_violations(inst.keys, paths, circs, max_violations)
        return ValidationReport(total == 0, found, len(paths), total)
    if not allow_large:
        raise ValueError(
            f"full validation of K_{n} is disabled by default; use restricted mode or allow_large=True"
        )
    tasks = [
        (n, inst.keys, x, y, max_violations)
        for x in range(1, n + 1)
        for y in range(x + 1, n + 1)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_block_worker, tasks))
    else:
        results = [_block_worker(t) for t in tasks]
    return _merge(results, max_violations)


# -- sub-instances -----------------------------------------------------------


def restrict(inst: BiasedInstance, X: Iterable[int]) -> BiasedInstance:
    """The biased subgraph induced by ``X``, relabelled order-preservingly to ``1..|X|``."""
    xs = sorted(set(int(v) for v in X))
    if len(xs) < 3:
        raise ValueError(f"restriction needs at least 3 vertices, got {len(xs)}")
    if xs[0] < 1 or xs[-1] > inst.n:
        raise ValueError(f"vertex subset {xs} is not inside 1..{inst.n}")
    lut = np.full(16, -1, dtype=np.int8)
    lut[0] = 0
    for rank, v in enumerate(xs, start=1):
        lut[v] = rank
    if len(inst.keys) == 0:
        return BiasedInstance(len(xs))
    mat, length = kernels.digits(inst.keys)
    mapped = lut[mat]
    keep = np.all(mapped >= 0, axis=1)
    # order-preserving relabelling keeps canonical form
    keys = kernels.repack(mapped[keep], length[keep])
    return BiasedInstance.from_keys(len(xs), keys)


def is_consistent(inst: BiasedInstance, circuits: Iterable[Iterable[int]]) -> bool:
    keys = [Circuit(c).key for c in circuits]
    if not keys:
        return True
    flags = inst.flags(keys)
    return bool(flags.all() or not flags.any())


def four_circuit_keys(n: int, pattern: tuple[int, ...]) -> np.ndarray:
    """Keys of every circuit of K_n similar to the canonical 4-``pattern``."""
    out = []
    for quad in combinations(range(1, n + 1), 4):
        out.append(kernels.pack(tuple(quad[r - 1] for r in pattern)))
    return np.array(out, dtype=np.uint64)


# -- file format -------------------------------------------------------------

HEADER = "biased-clique v1"


def format_instance(inst: BiasedInstance) -> str:
    lines = [HEADER, f"n {inst.n}", f"balanced {len(inst)}"]
    lines.extend(str(c) for c in inst.sorted_balanced())
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_instance(inst: BiasedInstance, target: str | os.PathLike | TextIO) -> None:
    text = format_instance(inst)
    if hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _expect_int_field(line: str, name: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != name:
        raise InstanceFormatError(lineno, f"expected '{name} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError:
        raise InstanceFormatError(lineno, f"'{parts[1]}' is not an integer") from None


def parse_instance(text: str) -> BiasedInstance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != HEADER:
        raise InstanceFormatError(1, f"expected header {HEADER!r}")
    if len(lines) < 4:
        raise InstanceFormatError(len(lines) + 1, "file ends before 'end'")
    n = _expect_int_field(lines[1], "n", 2)
    if n < 1 or n > kernels.MAX_VERTICES:
        raise InstanceFormatError(2, f"n must lie in 1..{kernels.MAX_VERTICES}")
    count = _expect_int_field(lines[2], "balanced", 3)
    if count < 0:
        raise InstanceFormatError(3, "negative circuit count")
    if len(lines) != count + 4:
        raise InstanceFormatError(min(len(lines), count + 4), f"expected {count} circuits followed by 'end'")
    keys = []
    for offset in range(count):
        lineno = 4 + offset
        try:
            c = Circuit(int(tok) for tok in lines[3 + offset].split())
        except ValueError as exc:
            raise InstanceFormatError(lineno, f"bad circuit: {exc}") from None
        if max(c) > n:
            raise InstanceFormatError(lineno, f"vertex {max(c)} exceeds n={n}")
        keys.append(c.key)
    if len(set(keys)) != len(keys):
        raise InstanceFormatError(4, "duplicate circuit")
    if lines[count + 3].strip() != "end":
        raise InstanceFormatError(count + 4, "expected 'end'")
    return BiasedInstance.from_keys(n, keys)


def read_instance(source: str | os.PathLike | TextIO) -> BiasedInstance:
    if hasattr(source, "read"):
        return parse_instance(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_instance(fh.read())

