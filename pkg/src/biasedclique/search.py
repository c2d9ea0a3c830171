"""Unavoidable ordered structures in biased cliques.

Every 4-subset gets a colour from the balance of its 1324- and its
1243-circuit.  A monochromatic subset then points at one of the three
canonical families, and the family is confirmed by exhaustive search.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, log2
from typing import Callable, Iterator, Mapping

import numpy as np

from . import kernels
from .circuits import circuit_table, oscillating_mask
from .instance import (
    BiasedInstance,
    delta_multiple_mask,
    four_circuit_keys,
    make_ka,
    make_ko,
    make_ku,
    restrict,
)
from .labelling import four_circuit_premise


class Balance(enum.Enum):
    B = "b"
    U = "u"


@dataclass(frozen=True, order=True)
class QuadColor:
    """``alpha`` tracks the 1324-circuit, ``beta`` the 1243-circuit."""

    alpha: Balance
    beta: Balance

    @classmethod
    def of(cls, text: str) -> "QuadColor":
        a, b = text.strip("()").replace(",", "")
        return cls(Balance(a), Balance(b))

    def __str__(self) -> str:
        return f"({self.alpha.value},{self.beta.value})"


UU = QuadColor(Balance.U, Balance.U)
UB = QuadColor(Balance.U, Balance.B)
BU = QuadColor(Balance.B, Balance.U)
BB = QuadColor(Balance.B, Balance.B)
COLORS = (BB, BU, UB, UU)


def _code(color: QuadColor) -> int:
    return 2 * (color.alpha is Balance.B) + (color.beta is Balance.B)


def color_quadruple(inst: BiasedInstance, Q) -> QuadColor:
    quad = sorted(set(int(v) for v in Q))
    if len(quad) != 4:
        raise ValueError(f"a quadruple needs 4 distinct vertices, got {len(quad)}")
    v1, v2, v3, v4 = quad
    alpha, beta = inst.flags([kernels.pack((v1, v3, v2, v4)), kernels.pack((v1, v2, v4, v3))])
    return QuadColor(Balance.B if alpha else Balance.U, Balance.B if beta else Balance.U)


class _QuadColoring:
    """All quad colours of an instance, looked up by vertex bitmask."""

    def __init__(self, inst: BiasedInstance):
        n = inst.n
        self.n = n
        quads = list(combinations(range(1, n + 1), 4))
        if quads:
            alpha = inst.flags(four_circuit_keys(n, (1, 3, 2, 4)))
            beta = inst.flags(four_circuit_keys(n, (1, 2, 4, 3)))
            codes = 2 * alpha.astype(int) + beta.astype(int)
        else:
            codes = []
        self.code = {sum(1 << v for v in q): int(c) for q, c in zip(quads, codes)}

    def extends(self, members: list[int], v: int, code: int) -> bool:
        """Whether every quad made of ``v`` and three of ``members`` has colour ``code``."""
        bit = 1 << v
        for a, b, c in combinations(members, 3):
            if self.code[bit | (1 << a) | (1 << b) | (1 << c)] != code:
                return False
        return True


def _uniform_subsets(
    coloring: _QuadColoring,
    code: int,
    size: int,
    accept: Callable[[int, int], bool] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Subsets of ``size`` with every quad coloured ``code``, in lexicographic order.

    ``accept(mask, count)`` prunes partial subsets; it must be hereditary.
    """
    n = coloring.n
    members: list[int] = []

    def rec(start: int, mask: int) -> Iterator[tuple[int, ...]]:
        if len(members) == size:
            yield tuple(members)
            return
        for v in range(start, n - (size - len(members)) + 2):
            if not coloring.extends(members, v, code):
                continue
            new = mask | (1 << v)
            if accept is not None and not accept(new, len(members) + 1):
                continue
            members.append(v)
            yield from rec(v + 1, new)
            members.pop()

    if size <= n:
        yield from rec(1, 0)


def find_uniform_quads(inst: BiasedInstance, targets: Mapping[QuadColor, int]):
    """Lexicographically least subset of a target size that is uniform in its colour.

    Returns ``(subset, color)`` or ``None``.  Ties between colours on the
    same subset go to the colour listed first in :data:`COLORS`.
    """
    coloring = _QuadColoring(inst)
    best = None
    for color in COLORS:
        if color not in targets:
            continue
        size = targets[color]
        if size < 0:
            raise ValueError(f"target size must be nonnegative, got {size}")
        found = next(_uniform_subsets(coloring, _code(color), size), None)
        if found is not None and (best is None or found < best[0]):
            best = (found, color)
    return best


# -- constant labellings -----------------------------------------------------


def balanced_delta_set(inst: BiasedInstance) -> list[int]:
    """The values d in 0..n-3 for which every nonspanning circuit with delta d is balanced."""
    n = inst.n
    table = circuit_table(n)
    nonspan = table.lengths < n
    mask = inst.mask()
    out = []
    for d in range(n - 2):
        sel = nonspan & (table.deltas == d)
        if sel.any() and mask[sel].all():
            out.append(d)
    return out


def closed_under_differences(values) -> bool:
    s = set(values)
    return all(abs(x - y) in s for x in s for y in s)


def classify_constant(inst: BiasedInstance) -> tuple[int, bool] | None:
    """Read off ``a`` from the nonspanning circuits and test every vertex deletion.

    Returns ``(a, per_vertex_check)``, or ``None`` when some 1324- or
    1243-circuit is unbalanced or the delta set is not a difference-closed
    set containing 0.
    """
    n = inst.n
    if n < 5:
        raise ValueError(f"constant classification needs n >= 5, got {n}")
    if not four_circuit_premise(inst):
        return None
    ds = balanced_delta_set(inst)
    if 0 not in ds or not closed_under_differences(ds):
        return None
    positive = [d for d in ds if d > 0]
    a = positive[0] if positive else n - 2
    target = make_ka(a, n - 1)
    ok = all(restrict(inst, [u for u in range(1, n + 1) if u != v]) == target for v in range(1, n + 1))
    return a, ok


# -- the three-outcome search ------------------------------------------------


class Kind(enum.Enum):
    KU = "Ku"
    KO = "Ko"
    KA = "Ka"
    OTHER = "Other"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    witness: tuple[int, ...] = ()
    certificate: str = ""
    a: int | None = None

    def __str__(self) -> str:
        kind = f"Ka:{self.a}" if self.kind is Kind.KA else self.kind.value
        return f"kind={kind} witness={','.join(map(str, self.witness))}"

    def expected(self) -> BiasedInstance | None:
        """The canonical instance the witness should restrict to."""
        m = len(self.witness)
        if self.kind is Kind.KU:
            return make_ku(m)
        if self.kind is Kind.KO:
            return make_ko(m)
        if self.kind is Kind.KA:
            return make_ka(self.a, m)
        return None


@lru_cache(maxsize=64)
def _family_count(kind: Kind, m: int, a: int = 0) -> int:
    if m < 3 or kind is Kind.KU:
        return 0
    table = circuit_table(m)
    if kind is Kind.KO:
        return int(oscillating_mask(table.keys).sum())
    return int(delta_multiple_mask(table.deltas, a).sum())


class _BalancedIndex:
    """Vertex masks and invariants of the balanced circuits, for subset counting."""

    def __init__(self, inst: BiasedInstance):
        keys = inst.keys
        mat, _ = kernels.digits(keys)
        bits = np.where(mat > 0, np.left_shift(1, mat.astype(np.int64)), 0)
        self.masks = np.bitwise_or.reduce(bits, axis=1) if len(keys) else np.zeros(0, dtype=np.int64)
        self.oscillating = oscillating_mask(keys)
        self.deltas = np.abs(kernels.signed_deltas(keys))

    def inside(self, mask: int) -> np.ndarray:
        return (self.masks & ~mask) == 0

    def matches(self, kind: Kind, mask: int, m: int, a: int = 0) -> bool:
        """Whether the balanced circuits inside ``mask`` are exactly the family's."""
        sel = self.inside(mask)
        if kind is Kind.KU:
            return not sel.any()
        if kind is Kind.KO:
            good = self.oscillating[sel]
        else:
            good = delta_multiple_mask(self.deltas[sel], a)
        return bool(good.all()) and len(good) == _family_count(kind, m, a)


def _verified(inst: BiasedInstance, result: Classification) -> Classification:
    expected = result.expected()
    if expected is not None and len(result.witness) >= 3 and restrict(inst, result.witness) != expected:
        raise AssertionError(f"witness {result} failed to re-verify")
    return result


def search_unavoidable(inst: BiasedInstance, r: int, s: int, t: int) -> Classification:
    """Look for K^u(r), then K^o(s), then K^a(t) as ordered biased subgraphs.

    Each branch scans subsets uniform in the matching quad colour in
    lexicographic order and keeps the first that qualifies.
    """
    if r < 1 or s < 1 or t < 4:
        raise ValueError(f"need r, s >= 1 and t >= 4, got r={r} s={s} t={t}")
    n = inst.n
    coloring = _QuadColoring(inst)
    index = _BalancedIndex(inst)

    def family(kind: Kind, a: int = 0):
        return lambda mask, m: index.matches(kind, mask, m, a)

    for kind, size, color, reason in (
        (Kind.KU, r, UU, "uniform (u,u); no balanced circuit"),
        (Kind.KO, s, BU, "uniform (b,u); balanced exactly when oscillating"),
    ):
        if size <= n:
            found = next(_uniform_subsets(coloring, _code(color), size, family(kind)), None)
            if found is not None:
                return _verified(inst, Classification(kind, found, reason))

    if t + 1 <= n:
        for big in _uniform_subsets(coloring, _code(BB), t + 1):
            res = classify_constant(restrict(inst, big))
            if res is None:
                continue
            a = res[0]
            witness = big[:-1]
            wmask = sum(1 << v for v in witness)
            if index.matches(Kind.KA, wmask, t, a):
                reason = f"uniform (b,b) on {','.join(map(str, big))}; delta classes give a={a}"
                return _verified(inst, Classification(Kind.KA, witness, reason, a))
    return Classification(Kind.OTHER, (), "below threshold")


# -- Ramsey arithmetic -------------------------------------------------------

_MAX_EXPONENT_BITS = 1 << 20


def ramsey_upper_bound(k: int, sizes) -> int:
    """An upper bound on the k-uniform Ramsey number R_k(sizes).

    Sizes below k are satisfied vacuously, so the bound is then
    ``min(sizes)``.  Raises OverflowError once the bound is too large to
    hold in memory.
    """
    sizes = [int(x) for x in sizes]
    if k < 1:
        raise ValueError(f"uniformity must be >= 1, got {k}")
    if not sizes:
        raise ValueError("at least one colour is needed")
    if min(sizes) < k:
        return max(min(sizes), 0)
    if len(sizes) == 1:
        return sizes[0]
    if k == 1:
        return sum(x - 1 for x in sizes) + 1
    if k == 2:
        if len(sizes) == 2:
            s, t = sizes
            return comb(s + t - 2, s - 1)
        return ramsey_upper_bound(2, [sizes[0], ramsey_upper_bound(2, sizes[1:])])
    # grow an end-homogeneous sequence, then apply the (k-1)-uniform bound to it
    ell = len(sizes)
    m = ramsey_upper_bound(k - 1, [x - 1 for x in sizes]) + 1
    f = 1
    for j in range(m - 1, 0, -1):
        e = comb(j - 1, k - 2)
        if e * log2(ell) + f.bit_length() > _MAX_EXPONENT_BITS:
            raise OverflowError(f"R_{k}{tuple(sizes)} bound exceeds 2^{_MAX_EXPONENT_BITS}")
        f = 1 + ell**e * f
    return f
