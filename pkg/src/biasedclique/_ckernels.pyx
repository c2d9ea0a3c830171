# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_pykernels`` for the contract."""
from libc.stdint cimport uint64_t, uint32_t
from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort

import numpy as np

BACKEND = "cython"

ctypedef pair[uint64_t, uint32_t] PathEntry


cdef inline uint64_t pack_seq(const int* seq, int k) nogil:
    cdef uint64_t key = (<uint64_t>k) << 60
    cdef int i
    for i in range(k):
        key |= (<uint64_t>seq[i]) << (56 - 4 * i)
    return key


cdef inline int unpack_seq(uint64_t key, int* out) nogil:
    cdef int k = <int>(key >> 60)
    cdef int i
    for i in range(k):
        out[i] = <int>((key >> (56 - 4 * i)) & 15)
    return k


cdef uint64_t canon_key(const int* cyc, int k) nogil:
    cdef int p = 0, i
    cdef int out[16]
    for i in range(1, k):
        if cyc[i] < cyc[p]:
            p = i
    if cyc[(p + 1) % k] < cyc[(p - 1 + k) % k]:
        for i in range(k):
            out[i] = cyc[(p + i) % k]
    else:
        for i in range(k):
            out[i] = cyc[(p - i + k) % k]
    return pack_seq(out, k)


def pack(seq):
    cdef int buf[16]
    cdef int k = len(seq), i
    for i in range(k):
        buf[i] = seq[i]
    return pack_seq(buf, k)


def unpack(key):
    cdef int buf[16]
    cdef int k = unpack_seq(<uint64_t>key, buf), i
    return tuple([buf[i] for i in range(k)])


def canonical_key(cyc):
    cdef int buf[16]
    cdef int k = len(cyc), i
    for i in range(k):
        buf[i] = cyc[i]
    return canon_key(buf, k)


cdef void circ_dfs(const uint32_t* adj, int s, int* path, int depth, uint32_t used,
                   uint32_t allowed, vector[uint64_t]& out) nogil:
    cdef int last = path[depth - 1]
    cdef uint32_t cand, low
    cdef int v
    if depth >= 3 and (adj[last] >> s) & 1 and path[1] < path[depth - 1]:
        out.push_back(pack_seq(path, depth))
    cand = adj[last] & allowed & ~used
    while cand:
        low = cand & (~cand + 1)
        v = 0
        while (low >> v) != 1:
            v += 1
        cand ^= low
        path[depth] = v
        circ_dfs(adj, s, path, depth + 1, used | low, allowed, out)


cdef void load_adj(adj, uint32_t* cadj, int n):
    cdef int v
    for v in range(n + 1):
        cadj[v] = <uint32_t>adj[v]


def circuit_keys(adj, int n):
    cdef uint32_t cadj[16]
    cdef int path[16]
    cdef vector[uint64_t] out
    cdef uint32_t full = 0, allowed
    cdef int s, v
    load_adj(adj, cadj, n)
    for v in range(1, n + 1):
        full |= (<uint32_t>1) << v
    with nogil:
        for s in range(1, n + 1):
            allowed = full & ~(((<uint32_t>1) << (s + 1)) - 1)
            path[0] = s
            circ_dfs(cadj, s, path, 1, (<uint32_t>1) << s, allowed, out)
        sort(out.begin(), out.end())
    res = np.empty(out.size(), dtype=np.uint64)
    cdef uint64_t[::1] view = res
    cdef size_t i
    for i in range(out.size()):
        view[i] = out[i]
    return res


cdef void path_dfs(const uint32_t* adj, int y, int* path, int depth, uint32_t used,
                   uint32_t allowed, vector[PathEntry]& out) nogil:
    cdef int last = path[depth - 1]
    cdef uint32_t cand, low
    cdef int v
    cand = adj[last] & allowed & ~used
    while cand:
        low = cand & (~cand + 1)
        v = 0
        while (low >> v) != 1:
            v += 1
        cand ^= low
        path[depth] = v
        if (adj[v] >> y) & 1:
            path[depth + 1] = y
            out.push_back(PathEntry(pack_seq(path, depth + 2), used | low))
        path_dfs(adj, y, path, depth + 1, used | low, allowed, out)


cdef void collect_paths(const uint32_t* adj, int x, int y, uint32_t allowed, bint direct,
                        vector[PathEntry]& out) nogil:
    cdef int path[16]
    if direct and (adj[x] >> y) & 1:
        path[0] = x
        path[1] = y
        out.push_back(PathEntry(pack_seq(path, 2), 0))
    path[0] = x
    path_dfs(adj, y, path, 1, 0, allowed, out)


cdef uint64_t circuit_from_paths(uint64_t p, uint64_t q) nogil:
    cdef int a[16]
    cdef int b[16]
    cdef int cyc[32]
    cdef int ka = unpack_seq(p, a)
    cdef int kb = unpack_seq(q, b)
    cdef int i, k = 0
    for i in range(ka):
        cyc[k] = a[i]
        k += 1
    for i in range(kb - 2, 0, -1):
        cyc[k] = b[i]
        k += 1
    return canon_key(cyc, k)


cdef inline void sort3(uint64_t* t) nogil:
    cdef uint64_t tmp
    if t[0] > t[1]:
        tmp = t[0]; t[0] = t[1]; t[1] = tmp
    if t[1] > t[2]:
        tmp = t[1]; t[1] = t[2]; t[2] = tmp
    if t[0] > t[1]:
        tmp = t[0]; t[0] = t[1]; t[1] = tmp


cdef void emit(uint64_t p0, uint64_t p1, uint64_t p2,
               vector[uint64_t]& prow, vector[uint64_t]& crow) nogil:
    cdef uint64_t t[3]
    t[0] = p0
    t[1] = p1
    t[2] = p2
    sort3(t)
    prow.push_back(t[0])
    prow.push_back(t[1])
    prow.push_back(t[2])
    crow.push_back(circuit_from_paths(t[1], t[2]))
    crow.push_back(circuit_from_paths(t[0], t[2]))
    crow.push_back(circuit_from_paths(t[0], t[1]))


cdef to_arrays(vector[uint64_t]& prow, vector[uint64_t]& crow):
    cdef size_t m = prow.size() // 3
    pa = np.empty((m, 3), dtype=np.uint64)
    ca = np.empty((m, 3), dtype=np.uint64)
    cdef uint64_t[:, ::1] pv = pa
    cdef uint64_t[:, ::1] cv = ca
    cdef size_t i
    cdef int j
    for i in range(m):
        for j in range(3):
            pv[i, j] = prow[3 * i + j]
            cv[i, j] = crow[3 * i + j]
    return pa, ca


def theta_block(adj, int n, int x, int y):
    cdef uint32_t cadj[16]
    cdef vector[PathEntry] paths
    cdef vector[vector[int]] buckets
    cdef vector[uint64_t] prow, crow
    cdef uint32_t allowed = 0, mi, rem, rem2, s, t
    cdef int v, i, j, k
    cdef size_t a, b
    load_adj(adj, cadj, n)
    for v in range(1, n + 1):
        if v != x and v != y:
            allowed |= (<uint32_t>1) << v
    with nogil:
        collect_paths(cadj, x, y, allowed, True, paths)
        sort(paths.begin(), paths.end())
        buckets.resize(1 << (n + 1))
        for i in range(<int>paths.size()):
            buckets[paths[i].second].push_back(i)
        for i in range(<int>paths.size()):
            mi = paths[i].second
            rem = allowed & ~mi
            s = rem
            while True:
                for a in range(buckets[s].size()):
                    j = buckets[s][a]
                    if j <= i:
                        continue
                    rem2 = rem & ~s
                    t = rem2
                    while True:
                        for b in range(buckets[t].size()):
                            k = buckets[t][b]
                            if k <= j:
                                continue
                            emit(paths[i].first, paths[j].first, paths[k].first, prow, crow)
                        if t == 0:
                            break
                        t = (t - 1) & rem2
                if s == 0:
                    break
                s = (s - 1) & rem
    return to_arrays(prow, crow)


def ear_thetas(adj, int n, key):
    cdef uint32_t cadj[16]
    cdef int cyc[16]
    cdef int arc_a[16]
    cdef int arc_b[16]
    cdef int tmp[16]
    cdef vector[PathEntry] ears
    cdef vector[uint64_t] prow, crow
    cdef uint64_t ckey = <uint64_t>key, ka, kb
    cdef int k, p, q, i, la, lb, x, y, v
    cdef uint32_t on = 0, allowed = 0
    cdef bint chord_ok
    cdef size_t e
    load_adj(adj, cadj, n)
    k = unpack_seq(ckey, cyc)
    for i in range(k):
        on |= (<uint32_t>1) << cyc[i]
    for v in range(1, n + 1):
        if not (on >> v) & 1:
            allowed |= (<uint32_t>1) << v
    with nogil:
        for p in range(k):
            for q in range(p + 1, k):
                la = 0
                for i in range(p, q + 1):
                    arc_a[la] = cyc[i]
                    la += 1
                lb = 0
                for i in range(p + 1):
                    arc_b[lb] = cyc[p - i]
                    lb += 1
                for i in range(k - q):
                    arc_b[lb] = cyc[k - 1 - i]
                    lb += 1
                x = cyc[p]
                y = cyc[q]
                if x > y:
                    for i in range(la):
                        tmp[i] = arc_a[la - 1 - i]
                    for i in range(la):
                        arc_a[i] = tmp[i]
                    for i in range(lb):
                        tmp[i] = arc_b[lb - 1 - i]
                    for i in range(lb):
                        arc_b[i] = tmp[i]
                    x, y = y, x
                chord_ok = not (q == p + 1 or (p == 0 and q == k - 1))
                ka = pack_seq(arc_a, la)
                kb = pack_seq(arc_b, lb)
                ears.clear()
                collect_paths(cadj, x, y, allowed, chord_ok, ears)
                for e in range(ears.size()):
                    emit(ears[e].first, ka, kb, prow, crow)
    return to_arrays(prow, crow)


# -- theta-constrained assignments -------------------------------------------


cdef struct Prop:
    signed char* val
    const int* wstart
    const int* wpairs
    int size


cdef bint prop_assign(Prop* p, int i, signed char x, vector[int]& trail, vector[int]& stack) nogil:
    cdef int u, k, a, b, r, s, t
    cdef signed char need
    p.val[i] = x
    trail.push_back(i)
    stack.clear()
    stack.push_back(i)
    while stack.size():
        u = stack.back()
        stack.pop_back()
        for k in range(p.wstart[u], p.wstart[u + 1]):
            a = p.wpairs[2 * k]
            b = p.wpairs[2 * k + 1]
            for r in range(2):
                if r == 0:
                    s, t = a, b
                else:
                    s, t = b, a
                if p.val[s] < 0:
                    continue
                if p.val[t] < 0:
                    if p.val[u] != p.val[s]:
                        need = 0
                    elif p.val[u] == 1:
                        need = 1
                    else:
                        continue
                    p.val[t] = need
                    trail.push_back(t)
                    stack.push_back(t)
                elif p.val[u] + p.val[s] + p.val[t] == 2:
                    return False
    return True


cdef void prop_undo(Prop* p, vector[int]& trail, size_t mark) nogil:
    while trail.size() > mark:
        p.val[trail.back()] = -1
        trail.pop_back()


cdef bint prop_complete(Prop* p, int i, vector[int]& trail, vector[int]& stack) nogil:
    cdef size_t mark
    cdef signed char x
    while i < p.size and p.val[i] >= 0:
        i += 1
    if i == p.size:
        return True
    for x in range(2):
        mark = trail.size()
        if prop_assign(p, i, x, trail, stack) and prop_complete(p, i + 1, trail, stack):
            return True
        prop_undo(p, trail, mark)
    return False


cdef void prop_enumerate(Prop* p, int i, int stop, long limit, vector[signed char]& out,
                         long* count, vector[int]& trail, vector[int]& stack) nogil:
    cdef size_t mark
    cdef signed char x
    cdef int j
    if limit >= 0 and count[0] >= limit:
        return
    while i < stop and p.val[i] >= 0:
        i += 1
    if i == stop:
        mark = trail.size()
        if prop_complete(p, stop, trail, stack):
            for j in range(p.size):
                out.push_back(p.val[j])
            count[0] += 1
        prop_undo(p, trail, mark)
        return
    for x in range(2):
        mark = trail.size()
        if prop_assign(p, i, x, trail, stack):
            prop_enumerate(p, i + 1, stop, limit, out, count, trail, stack)
        prop_undo(p, trail, mark)


def theta_assignments(rows, int size, int stop, init, long limit=-1):
    cdef int[:, ::1] r = np.ascontiguousarray(rows, dtype=np.intc)
    cdef int nrows = r.shape[0], k, c, pos
    deg = np.zeros(size + 1, dtype=np.intc)
    for k in range(nrows):
        for c in range(3):
            deg[r[k, c] + 1] += 1
    wstart_arr = np.cumsum(deg).astype(np.intc)
    wpairs_arr = np.empty(2 * int(wstart_arr[size]), dtype=np.intc)
    fill = wstart_arr[:size].copy()
    cdef int[::1] wstart = wstart_arr
    cdef int[::1] wpairs = wpairs_arr
    cdef int[::1] fl = fill
    for k in range(nrows):
        for c in range(3):
            pos = fl[r[k, c]]
            fl[r[k, c]] += 1
            wpairs[2 * pos] = r[k, (c + 1) % 3]
            wpairs[2 * pos + 1] = r[k, (c + 2) % 3]
    val_arr = np.full(size, -1, dtype=np.int8)
    cdef signed char[::1] val = val_arr
    cdef Prop p
    p.val = &val[0] if size else NULL
    p.wstart = &wstart[0]
    p.wpairs = &wpairs[0] if len(wpairs_arr) else NULL
    p.size = size
    cdef vector[int] trail, stack
    cdef vector[signed char] out
    cdef long count = 0
    init_arr = np.asarray(init, dtype=np.int8)
    for k in range(size):
        if init_arr[k] >= 0 and val[k] < 0:
            if not prop_assign(&p, k, init_arr[k], trail, stack):
                return np.zeros((0, size), dtype=np.int8)
        elif init_arr[k] >= 0 and val[k] != init_arr[k]:
            return np.zeros((0, size), dtype=np.int8)
    with nogil:
        prop_enumerate(&p, 0, stop, limit, out, &count, trail, stack)
    res = np.empty(count * size, dtype=np.int8)
    cdef signed char[::1] rv = res
    cdef size_t q
    for q in range(out.size()):
        rv[q] = out[q]
    return res.reshape(count, size)
