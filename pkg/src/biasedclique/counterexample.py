"""Biased cliques that satisfy the 4-circuit conditions yet admit no group labelling.

Start from K^a(n) with a = n - 4 and unbalance some of the Hamilton
circuits C_{I,J} that list a part I ascending, then its complement J
ascending.  Every such circuit has delta n - 4, so unbalancing some but
not all of them breaks every constant labelling.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .circuits import Circuit, delta
from .instance import BiasedInstance, make_ka, validate
from .labelling import LabellabilityVerdict, check_not_group_labellable, derive_instance, gamma_a

MIN_N = 10
DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class OrderedPartition:
    n: int
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.I + self.J) != list(range(1, self.n + 1)):
            raise ValueError("I and J must partition 1..n")
        if not {1, 2, self.n - 2, self.n - 1} <= set(self.I):
            raise ValueError(f"I must contain 1, 2, {self.n - 2}, {self.n - 1}")
        if not {3, 4, 5, self.n} <= set(self.J):
            raise ValueError(f"J must contain 3, 4, 5, {self.n}")

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "OrderedPartition":
        """Free vertex ``6 + i`` goes to I exactly when bit i of ``mask`` is set."""
        free = range(6, n - 2)
        chosen = {v for i, v in enumerate(free) if mask >> i & 1}
        I = tuple(sorted({1, 2, n - 2, n - 1} | chosen))
        J = tuple(v for v in range(1, n + 1) if v not in I)
        return cls(n, I, J)

    @property
    def mask(self) -> int:
        return sum(1 << (v - 6) for v in self.I if 6 <= v <= self.n - 3)

    def __str__(self) -> str:
        return f"I={','.join(map(str, self.I))} J={','.join(map(str, self.J))}"


def _check_n(n: int, allow_large: bool = False) -> None:
    if n < MIN_N:
        raise ValueError(f"the construction needs n >= {MIN_N}, got {n}")
    if n > DEFAULT_LIMIT and not allow_large:
        raise ValueError(f"n = {n} enumerates every circuit of K_{n}; pass allow_large to proceed")


def enumerate_partitions(n: int) -> list[OrderedPartition]:
    if n < MIN_N:
        raise ValueError(f"the construction needs n >= {MIN_N}, got {n}")
    return [OrderedPartition.from_mask(n, m) for m in range(1 << (n - 8))]


def circuit_cij(p: OrderedPartition) -> Circuit:
    return Circuit(p.I + p.J)


def partitions_from_qmask(n: int, qmask: int) -> list[OrderedPartition]:
    """The members of the partition list selected by the bits of ``qmask``."""
    parts = enumerate_partitions(n)
    if qmask < 0 or qmask >> len(parts):
        raise ValueError(f"Q mask {qmask} out of range for {len(parts)} partitions")
    return [p for i, p in enumerate(parts) if qmask >> i & 1]


def build_bq(n: int, Q: Iterable[OrderedPartition], *, allow_large: bool = False) -> BiasedInstance:
    _check_n(n, allow_large)
    base = make_ka(n - 4, n)
    removed = np.array([circuit_cij(p).key for p in Q if p.n == n], dtype=np.uint64)
    keep = ~np.isin(base.keys, removed)
    return BiasedInstance.from_keys(n, base.keys[keep])


@dataclass(frozen=True)
class QResult:
    qmask: int
    valid: bool
    verdict: LabellabilityVerdict
    checked: int

    def line(self) -> str:
        return f"{self.qmask} valid={str(self.valid).lower()} labellable={self.verdict}"


def check_q(n: int, qmask: int) -> QResult:
    """Validate B_Q on the thetas through the removed circuits and decide labellability."""
    Q = partitions_from_qmask(n, qmask)
    inst = build_bq(n, Q, allow_large=True)
    # B_Q differs from the valid base only on the removed circuits
    report = validate(inst, restricted_to=[circuit_cij(p) for p in Q])
    return QResult(qmask, report.valid, check_not_group_labellable(inst), report.checked_count)


def _check_q_args(args):
    return check_q(*args)


@dataclass
class CounterexampleReport:
    n: int
    base_labelled: bool
    results: list[QResult] = field(default_factory=list)

    @property
    def partitions(self) -> int:
        return 1 << (self.n - 8)

    def count_inequality(self) -> tuple[int, int, bool]:
        proper = (1 << self.partitions) - 2
        bound = 1 << (1 << (self.n - 9))
        return proper, bound, proper >= bound

    @property
    def ok(self) -> bool:
        full = (1 << self.partitions) - 1
        for r in self.results:
            if not r.valid:
                return False
            if r.qmask == 0 and str(r.verdict) != f"IsKa:{self.n - 4}":
                return False
            if 0 < r.qmask < full and str(r.verdict) != "No":
                return False
        return self.base_labelled and self.count_inequality()[2]

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def summary_lines(self) -> list[str]:
        proper, bound, holds = self.count_inequality()
        full = (1 << self.partitions) - 1
        proper_results = [r for r in self.results if 0 < r.qmask < full]
        good = sum(1 for r in proper_results if r.valid and str(r.verdict) == "No")
        invalid = [r.qmask for r in self.results if not r.valid]
        lines = [
            f"n={self.n} partitions={self.partitions} base_labelled={str(self.base_labelled).lower()}",
            f"checked {len(self.results)} Q; valid {len(self.results) - len(invalid)}",
            f"proper nonempty Q valid and not labellable: {good}/{len(proper_results)}",
            f"count {proper} >= {bound}: {str(holds).lower()}",
        ]
        if invalid:
            lines.append(f"invalid Q masks: {','.join(map(str, invalid))}")
            lines.append(f"valid proper nonempty Q not labellable: {good} >= {bound}: {str(good >= bound).lower()}")
        return lines


def verify_counterexample_theorem(
    n: int = MIN_N,
    qmasks: Iterable[int] | None = None,
    *,
    jobs: int = 1,
    allow_large: bool = False,
) -> CounterexampleReport:
    """Check every B_Q (or those in ``qmasks``), reporting in Q-mask order."""
    _check_n(n, allow_large)
    masks = sorted(set(range(1 << (1 << (n - 8))) if qmasks is None else qmasks))
    base_labelled = derive_instance(gamma_a(n - 4, n)) == make_ka(n - 4, n)
    tasks = [(n, m) for m in masks]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_q_args, tasks))
    else:
        results = [check_q(*t) for t in tasks]
    return CounterexampleReport(n, base_labelled, results)


def consecutive_quadruple_deltas(p: OrderedPartition) -> list[int]:
    """delta of the 4-circuit on every four cyclically consecutive vertices of C_{I,J}."""
    seq = p.I + p.J
    k = len(seq)
    return [delta([seq[(i + j) % k] for j in range(4)]) for i in range(k)]
