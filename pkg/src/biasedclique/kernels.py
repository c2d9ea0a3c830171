"""Backend selection for the hot enumeration kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``BIASEDCLIQUE_PURE=1``
forces the fallback.  Both backends return raw, unsorted theta rows; the
wrappers here impose the deterministic order.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

MAX_VERTICES = 15

if os.environ.get("BIASEDCLIQUE_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
pack = _pykernels.pack
unpack = _pykernels.unpack


def backend(name: str | None = None):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def complete_adjacency(n: int) -> list[int]:
    if n > MAX_VERTICES:
        raise ValueError(f"at most {MAX_VERTICES} vertices are supported, got {n}")
    full = sum(1 << v for v in range(1, n + 1))
    return [0] + [full & ~(1 << v) for v in range(1, n + 1)]


def canonical_key(cyc) -> int:
    return _impl.canonical_key(tuple(cyc))


def circuit_keys(adj, n: int, impl=None) -> np.ndarray:
    return (impl or _impl).circuit_keys(adj, n)


def _endpoints(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = keys.astype(np.uint64)
    length = (keys >> np.uint64(60)).astype(np.int64)
    x = (keys >> np.uint64(56)) & np.uint64(15)
    shift = (56 - 4 * (length - 1)).astype(np.uint64)
    y = (keys >> shift) & np.uint64(15)
    return x.astype(np.int64), y.astype(np.int64)


def sort_theta_rows(paths: np.ndarray, circuits: np.ndarray):
    """Order theta rows by (x, y, sorted path triple) and drop duplicates."""
    if len(paths) == 0:
        return paths, circuits
    x, y = _endpoints(paths[:, 0])
    order = np.lexsort((paths[:, 2], paths[:, 1], paths[:, 0], y, x))
    paths = paths[order]
    circuits = circuits[order]
    keep = np.ones(len(paths), dtype=bool)
    keep[1:] = np.any(paths[1:] != paths[:-1], axis=1)
    return paths[keep], circuits[keep]


def theta_block(adj, n: int, x: int, y: int, impl=None):
    paths, circuits = (impl or _impl).theta_block(adj, n, x, y)
    return sort_theta_rows(paths, circuits)


def ear_thetas(adj, n: int, key: int, impl=None):
    paths, circuits = (impl or _impl).ear_thetas(adj, n, int(key))
    return sort_theta_rows(paths, circuits)


def digits(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode packed keys into a (m, 15) vertex matrix (0 = empty) and lengths."""
    keys = np.asarray(keys, dtype=np.uint64)
    shifts = np.arange(56, -4, -4, dtype=np.uint64)
    mat = ((keys[..., None] >> shifts) & np.uint64(15)).astype(np.int8)
    return mat, (keys >> np.uint64(60)).astype(np.int64)


def repack(mat: np.ndarray, length: np.ndarray) -> np.ndarray:
    shifts = np.arange(56, -4, -4, dtype=np.uint64)
    body = np.bitwise_or.reduce(mat.astype(np.uint64) << shifts, axis=-1)
    return body | (length.astype(np.uint64) << np.uint64(60))


def edge_signs(keys: np.ndarray) -> np.ndarray:
    """+1/-1 for each ascending/descending edge of each packed circuit, 0 past its end.

    Column ``i`` holds the edge from vertex ``i`` to vertex ``i + 1``
    (cyclically), in the stored traversal.
    """
    mat, length = digits(keys)
    mat = mat.astype(np.int64)
    pos = np.arange(mat.shape[-1])
    nxt = np.empty_like(mat)
    nxt[..., :-1] = mat[..., 1:]
    nxt[..., -1] = 0
    last = pos == (length[..., None] - 1)
    nxt = np.where(last, mat[..., :1], nxt)
    live = pos < length[..., None]
    return np.where(live, np.sign(nxt - mat), 0)


def signed_deltas(keys: np.ndarray) -> np.ndarray:
    """Ascents minus descents around each packed circuit, traversed as stored."""
    return edge_signs(keys).sum(axis=-1)


def theta_assignments(rows, size: int, stop: int, init=None, limit: int = -1, impl=None) -> np.ndarray:
    """Assignments of circuit indices compatible with the theta rows; see ``_pykernels``."""
    if init is None:
        init = np.full(size, -1, dtype=np.int8)
    return (impl or _impl).theta_assignments(rows, size, stop, init, limit)
