"""Pure-Python versions of the enumeration kernels.

Every function here has a twin of the same name in ``_ckernels.pyx`` and
must return identical arrays (row order included).  Graphs are passed as
adjacency bitmasks: ``adj[v]`` has bit ``w`` set when ``vw`` is an edge.
Vertices live in ``1..15`` so a vertex sequence packs into one 64-bit key:
the top nibble holds the length, then one nibble per vertex.
"""
from __future__ import annotations

from bisect import bisect_right

import numpy as np

BACKEND = "python"


def pack(seq) -> int:
    key = len(seq) << 60
    shift = 56
    for v in seq:
        key |= v << shift
        shift -= 4
    return key


def unpack(key: int) -> tuple[int, ...]:
    key = int(key)
    k = key >> 60
    return tuple((key >> (56 - 4 * i)) & 15 for i in range(k))


def canonical_key(cyc) -> int:
    k = len(cyc)
    p = min(range(k), key=cyc.__getitem__)
    if cyc[(p + 1) % k] < cyc[p - 1]:
        seq = [cyc[(p + i) % k] for i in range(k)]
    else:
        seq = [cyc[(p - i) % k] for i in range(k)]
    return pack(seq)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def circuit_keys(adj, n: int) -> np.ndarray:
    out: list[int] = []

    def extend(path, used, allowed, s):
        last = path[-1]
        if len(path) >= 3 and (adj[last] >> s) & 1 and path[1] < path[-1]:
            out.append(pack(path))
        for v in _bits(adj[last] & allowed & ~used):
            path.append(v)
            extend(path, used | (1 << v), allowed, s)
            path.pop()

    full = 0
    for v in range(1, n + 1):
        full |= 1 << v
    for s in range(1, n + 1):
        allowed = full & ~((1 << (s + 1)) - 1)
        extend([s], 1 << s, allowed, s)
    return np.array(sorted(out), dtype=np.uint64)


def _paths_between(adj, x: int, y: int, allowed: int, direct: bool):
    """All x-y paths whose internal vertices lie in ``allowed``, as (key, mask)."""
    found = []
    if direct and (adj[x] >> y) & 1:
        found.append((pack((x, y)), 0))

    def extend(path, used):
        last = path[-1]
        for v in _bits(adj[last] & allowed & ~used):
            path.append(v)
            if (adj[v] >> y) & 1:
                found.append((pack(path + [y]), used | (1 << v)))
            extend(path, used | (1 << v))
            path.pop()

    extend([x], 0)
    return found


def _circuit_from_paths(p: int, q: int) -> int:
    a = unpack(p)
    b = unpack(q)
    return canonical_key(a + b[-2:0:-1])


def _theta_row(p0: int, p1: int, p2: int):
    ps = sorted((p0, p1, p2))
    cs = (
        _circuit_from_paths(ps[1], ps[2]),
        _circuit_from_paths(ps[0], ps[2]),
        _circuit_from_paths(ps[0], ps[1]),
    )
    return ps, cs


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def theta_block(adj, n: int, x: int, y: int):
    """Every theta subgraph with branch vertices ``x < y`` (unsorted rows)."""
    allowed = 0
    for v in range(1, n + 1):
        if v != x and v != y:
            allowed |= 1 << v
    paths = sorted(_paths_between(adj, x, y, allowed, True))
    keys = [p[0] for p in paths]
    buckets: dict[int, list[int]] = {}
    for idx, (_, m) in enumerate(paths):
        buckets.setdefault(m, []).append(idx)
    prow: list = []
    crow: list = []
    for i, (_, mi) in enumerate(paths):
        rem = allowed & ~mi
        for s in _submasks(rem):
            bj = buckets.get(s)
            if not bj:
                continue
            rem2 = rem & ~s
            for j in bj[bisect_right(bj, i):]:
                for t in _submasks(rem2):
                    bk = buckets.get(t)
                    if not bk:
                        continue
                    for k in bk[bisect_right(bk, j):]:
                        ps, cs = _theta_row(keys[i], keys[j], keys[k])
                        prow.append(ps)
                        crow.append(cs)
    return (
        np.array(prow, dtype=np.uint64).reshape(-1, 3),
        np.array(crow, dtype=np.uint64).reshape(-1, 3),
    )


def ear_thetas(adj, n: int, key: int):
    """Every theta subgraph containing the circuit ``key`` (unsorted rows)."""
    cyc = unpack(key)
    k = len(cyc)
    on = 0
    for v in cyc:
        on |= 1 << v
    allowed = 0
    for v in range(1, n + 1):
        if not (on >> v) & 1:
            allowed |= 1 << v
    prow: list = []
    crow: list = []
    for p in range(k):
        for q in range(p + 1, k):
            arc_a = list(cyc[p:q + 1])
            arc_b = [cyc[p - i] for i in range(p + 1)] + [cyc[k - 1 - i] for i in range(k - q)]
            x, y = cyc[p], cyc[q]
            if x > y:
                arc_a.reverse()
                arc_b.reverse()
                x, y = y, x
            chord_ok = not (q == p + 1 or (p == 0 and q == k - 1))
            ka, kb = pack(arc_a), pack(arc_b)
            for ear, _ in _paths_between(adj, x, y, allowed, chord_ok):
                ps, cs = _theta_row(ear, ka, kb)
                prow.append(ps)
                crow.append(cs)
    return (
        np.array(prow, dtype=np.uint64).reshape(-1, 3),
        np.array(crow, dtype=np.uint64).reshape(-1, 3),
    )


# -- theta-constrained assignments -------------------------------------------


def theta_assignments(rows, size, stop, init, limit=-1):
    """Balanced/unbalanced assignments in which no theta row has exactly two balanced.

    Circuits ``0..stop-1`` are enumerated freely (0 before 1); each consistent
    prefix is reported once, completed by its first full extension, and
    dropped if none exists.  ``init`` pins values (-1 means free).
    """
    watch = [[] for _ in range(size)]
    for r in np.asarray(rows).tolist():
        for c in range(3):
            watch[r[c]].append((r[(c + 1) % 3], r[(c + 2) % 3]))
    val = [-1] * size
    trail = []

    def assign(i, x):
        val[i] = x
        trail.append(i)
        stack = [i]
        while stack:
            u = stack.pop()
            for a, b in watch[u]:
                for s, t in ((a, b), (b, a)):
                    if val[s] < 0:
                        continue
                    if val[t] < 0:
                        if val[u] != val[s]:
                            need = 0
                        elif val[u] == 1:
                            need = 1
                        else:
                            continue
                        val[t] = need
                        trail.append(t)
                        stack.append(t)
                    elif val[u] + val[s] + val[t] == 2:
                        return False
        return True

    def undo(mark):
        while len(trail) > mark:
            val[trail.pop()] = -1

    def complete(i):
        while i < size and val[i] >= 0:
            i += 1
        if i == size:
            return True
        for x in (0, 1):
            mark = len(trail)
            if assign(i, x) and complete(i + 1):
                return True
            undo(mark)
        return False

    out = []

    def enum(i):
        if 0 <= limit <= len(out):
            return
        while i < stop and val[i] >= 0:
            i += 1
        if i == stop:
            mark = len(trail)
            if complete(stop):
                out.append(list(val))
            undo(mark)
            return
        for x in (0, 1):
            mark = len(trail)
            if assign(i, x):
                enum(i + 1)
            undo(mark)

    for k, x in enumerate(np.asarray(init).tolist()):
        if x < 0:
            continue
        if val[k] >= 0:
            if val[k] != x:
                return np.zeros((0, size), dtype=np.int8)
        elif not assign(k, x):
            return np.zeros((0, size), dtype=np.int8)
    enum(0)
    return np.array(out, dtype=np.int8).reshape(len(out), size)
