# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled versions of the hot kernels; see _pykernels.py for the contracts.

Arithmetic expressions must stay identical to the Python twin so both
backends agree bit for bit.
"""

from libc.stdint cimport int64_t
from libc.math cimport INFINITY
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.algorithm cimport sort
from cython.operator cimport dereference as deref, preincrement as inc

import numpy as np

NAME = "cython"


def pair_dots(const int64_t[::1] ent_ptr, const int64_t[::1] ent_feat, const double[::1] ent_w,
              const int64_t[::1] feat_ptr, const int64_t[::1] feat_ent, const double[::1] feat_w):
    cdef Py_ssize_t n_ent = ent_ptr.shape[0] - 1
    cdef Py_ssize_t i, p, q, k
    cdef int64_t f, j
    cdef double wi
    cdef vector[double] acc
    cdef vector[char] seen
    cdef vector[int64_t] touched
    cdef vector[int64_t] oi
    cdef vector[int64_t] oj
    cdef vector[double] od
    n_max = 0
    for p in range(feat_ent.shape[0]):
        if feat_ent[p] + 1 > n_max:
            n_max = feat_ent[p] + 1
    if n_ent > n_max:
        n_max = n_ent
    acc.resize(n_max, 0.0)
    seen.resize(n_max, 0)
    with nogil:
        for i in range(n_ent):
            touched.clear()
            for p in range(ent_ptr[i], ent_ptr[i + 1]):
                f = ent_feat[p]
                wi = ent_w[p]
                for q in range(feat_ptr[f], feat_ptr[f + 1]):
                    j = feat_ent[q]
                    if j <= i:
                        continue
                    if seen[j]:
                        acc[j] = acc[j] + wi * feat_w[q]
                    else:
                        seen[j] = 1
                        acc[j] = 0.0 + wi * feat_w[q]
                        touched.push_back(j)
            sort(touched.begin(), touched.end())
            for k in range(<Py_ssize_t>touched.size()):
                j = touched[k]
                oi.push_back(i)
                oj.push_back(j)
                od.push_back(acc[j])
                seen[j] = 0
    n_out = od.size()
    ai = np.empty(n_out, dtype=np.int64)
    aj = np.empty(n_out, dtype=np.int64)
    ad = np.empty(n_out, dtype=np.float64)
    cdef int64_t[::1] vi = ai
    cdef int64_t[::1] vj = aj
    cdef double[::1] vd = ad
    for k in range(<Py_ssize_t>n_out):
        vi[k] = oi[k]
        vj[k] = oj[k]
        vd[k] = od[k]
    return ai, aj, ad


cdef void _rescan(int64_t c, vector[unordered_map[int64_t, double]]& adj, vector[double]& D,
                  double m, double two_m2, vector[double]& best_g, vector[int64_t]& best_n) noexcept nogil:
    cdef double bg = -INFINITY
    cdef int64_t bn = -1
    cdef double dc = D[c]
    cdef double g
    cdef int64_t k
    cdef unordered_map[int64_t, double].iterator it = adj[c].begin()
    while it != adj[c].end():
        k = deref(it).first
        g = deref(it).second / m - (dc * D[k]) / two_m2
        if g > bg or (g == bg and k < bn):
            bg = g
            bn = k
        inc(it)
    best_g[c] = bg
    best_n[c] = bn


def cnm_merges(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] weights,
               const double[::1] degrees, double m, double tol):
    cdef Py_ssize_t n = degrees.shape[0]
    cdef Py_ssize_t i, p, c
    cdef int64_t j, k, a, b, ba, bb, ca, cb
    cdef double g, bg, nw, wbc, da, two_m2 = 2.0 * m * m
    cdef vector[unordered_map[int64_t, double]] adj
    cdef vector[double] D
    cdef vector[double] best_g
    cdef vector[int64_t] best_n
    cdef vector[char] alive
    cdef vector[int64_t] merges
    cdef unordered_map[int64_t, double].iterator it
    cdef unordered_map[int64_t, double].iterator found
    adj.resize(n)
    D.resize(n)
    best_g.resize(n, -INFINITY)
    best_n.resize(n, -1)
    alive.resize(n, 1)
    with nogil:
        for i in range(n):
            D[i] = degrees[i]
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j != i:
                    adj[i][j] = weights[p]
        for i in range(n):
            _rescan(i, adj, D, m, two_m2, best_g, best_n)
        while True:
            bg = -INFINITY
            ba = -1
            bb = -1
            for c in range(n):
                k = best_n[c]
                if not alive[c] or k < 0:
                    continue
                g = best_g[c]
                if c < k:
                    ca = c
                    cb = k
                else:
                    ca = k
                    cb = c
                if g > bg or (g == bg and (ca < ba or (ca == ba and cb < bb))):
                    bg = g
                    ba = ca
                    bb = cb
            if ba < 0 or not bg > tol:
                break
            a = ba
            b = bb
            adj[a].erase(b)
            adj[b].erase(a)
            it = adj[b].begin()
            while it != adj[b].end():
                c = deref(it).first
                wbc = deref(it).second
                adj[c].erase(b)
                found = adj[a].find(c)
                if found != adj[a].end():
                    nw = deref(found).second + wbc
                else:
                    nw = wbc
                adj[a][c] = nw
                adj[c][a] = nw
                inc(it)
            adj[b].clear()
            alive[b] = 0
            best_g[b] = -INFINITY
            best_n[b] = -1
            D[a] = D[a] + D[b]
            merges.push_back(a)
            merges.push_back(b)
            _rescan(a, adj, D, m, two_m2, best_g, best_n)
            da = D[a]
            it = adj[a].begin()
            while it != adj[a].end():
                c = deref(it).first
                if best_n[c] == a or best_n[c] == b:
                    _rescan(c, adj, D, m, two_m2, best_g, best_n)
                else:
                    g = deref(it).second / m - (D[c] * da) / two_m2
                    if g > best_g[c] or (g == best_g[c] and a < best_n[c]):
                        best_g[c] = g
                        best_n[c] = a
                inc(it)
    k = merges.size() // 2
    out = np.empty((k, 2), dtype=np.int64)
    cdef int64_t[:, ::1] vo = out
    for i in range(k):
        vo[i, 0] = merges[2 * i]
        vo[i, 1] = merges[2 * i + 1]
    return out


def refine(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] weights,
           const double[::1] degrees, double m, int64_t[::1] labels, const int64_t[::1] order,
           double tol, int max_passes):
    cdef Py_ssize_t n = degrees.shape[0]
    cdef Py_ssize_t i, p, t, q
    cdef int64_t g, A, c, j, bc, e
    cdef double dg, wA, totA, gain, bg, two_m2 = 2.0 * m * m
    cdef long moves = 0, moved
    cdef int it
    cdef vector[double] tot
    cdef vector[long] size
    cdef vector[double] cw
    cdef vector[char] has
    cdef vector[int64_t] touched
    tot.resize(n, 0.0)
    size.resize(n, 0)
    cw.resize(n, 0.0)
    has.resize(n, 0)
    with nogil:
        for i in range(n):
            tot[labels[i]] += degrees[i]
            size[labels[i]] += 1
        for it in range(max_passes):
            moved = 0
            for t in range(order.shape[0]):
                g = order[t]
                A = labels[g]
                dg = degrees[g]
                touched.clear()
                for p in range(indptr[g], indptr[g + 1]):
                    j = indices[p]
                    if j == g:
                        continue
                    c = labels[j]
                    if has[c]:
                        cw[c] = cw[c] + weights[p]
                    else:
                        has[c] = 1
                        cw[c] = 0.0 + weights[p]
                        touched.push_back(c)
                wA = cw[A] if has[A] else 0.0
                totA = tot[A]
                bg = -INFINITY
                bc = -1
                for q in range(<Py_ssize_t>touched.size()):
                    c = touched[q]
                    if c == A:
                        continue
                    gain = (cw[c] - wA) / m - dg * (tot[c] - totA + dg) / two_m2
                    if gain > bg or (gain == bg and c < bc):
                        bg = gain
                        bc = c
                for q in range(<Py_ssize_t>touched.size()):
                    has[touched[q]] = 0
                if size[A] > 1:
                    gain = (0.0 - wA) / m - dg * (0.0 - totA + dg) / two_m2
                    if gain >= bg:
                        e = 0
                        while size[e] != 0:
                            e += 1
                        if gain > bg or e < bc:
                            bg = gain
                            bc = e
                if bc >= 0 and bg > tol:
                    tot[A] -= dg
                    size[A] -= 1
                    tot[bc] += dg
                    size[bc] += 1
                    labels[g] = bc
                    moved += 1
            moves += moved
            if moved == 0:
                break
    return moves


cdef inline long long _key(long long u, long long v, long long n) noexcept nogil:
    if u < v:
        return u * n + v
    return v * n + u


def rewire(int64_t[::1] src, int64_t[::1] dst, int64_t n_nodes, const int64_t[::1] pick_i,
           const int64_t[::1] pick_j, const signed char[::1] flip):
    cdef Py_ssize_t ne = src.shape[0]
    cdef Py_ssize_t t, i, j
    cdef long long u, v, x, y, k1, k2, n = n_nodes
    cdef long swaps = 0
    cdef unordered_set[long long] present
    with nogil:
        present.reserve(2 * ne + 1)
        for t in range(ne):
            present.insert(_key(src[t], dst[t], n))
        for t in range(pick_i.shape[0]):
            i = pick_i[t]
            j = pick_j[t]
            if i == j:
                continue
            u = src[i]
            v = dst[i]
            if flip[t]:
                x = dst[j]
                y = src[j]
            else:
                x = src[j]
                y = dst[j]
            if u == x or v == y:
                continue
            k1 = _key(u, x, n)
            k2 = _key(v, y, n)
            if present.count(k1) or present.count(k2):
                continue
            present.erase(_key(u, v, n))
            present.erase(_key(x, y, n))
            present.insert(k1)
            present.insert(k2)
            src[i] = u
            dst[i] = x
            src[j] = v
            dst[j] = y
            swaps += 1
    return swaps


cdef inline int64_t _first_empty(vector[long]& size, int64_t start, int64_t n) noexcept nogil:
    cdef int64_t e = start
    while e < n and size[e] != 0:
        e += 1
    return e


def kl_refine(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] weights,
              const double[::1] degrees, double m, int64_t[::1] labels, double tol, int max_rounds,
              long patience):
    cdef int64_t n = degrees.shape[0]
    cdef int64_t i, p, v, j, c, A, bv, bc, empty, q, best_len, hl
    cdef double dv, wA, totA, gain, bg, cum, best_cum, total = 0.0, two_m2 = 2.0 * m * m
    cdef long since_best, step
    cdef int rnd
    cdef vector[double] tot
    cdef vector[long] size
    cdef vector[double] cw
    cdef vector[char] has
    cdef vector[char] locked
    cdef vector[int64_t] touched
    cdef vector[int64_t] hist_v
    cdef vector[int64_t] hist_a
    tot.resize(n, 0.0)
    size.resize(n, 0)
    cw.resize(n, 0.0)
    has.resize(n, 0)
    locked.resize(n, 0)
    with nogil:
        for i in range(n):
            tot[labels[i]] += degrees[i]
            size[labels[i]] += 1
        empty = _first_empty(size, 0, n)
        for rnd in range(max_rounds):
            for i in range(n):
                locked[i] = 0
            hist_v.clear()
            hist_a.clear()
            cum = 0.0
            best_cum = 0.0
            best_len = 0
            since_best = 0
            for step in range(n):
                bg = -INFINITY
                bv = -1
                bc = -1
                for v in range(n):
                    if locked[v]:
                        continue
                    A = labels[v]
                    dv = degrees[v]
                    touched.clear()
                    for p in range(indptr[v], indptr[v + 1]):
                        j = indices[p]
                        if j == v:
                            continue
                        c = labels[j]
                        if has[c]:
                            cw[c] = cw[c] + weights[p]
                        else:
                            has[c] = 1
                            cw[c] = 0.0 + weights[p]
                            touched.push_back(c)
                    wA = cw[A] if has[A] else 0.0
                    totA = tot[A]
                    for q in range(<int64_t>touched.size()):
                        c = touched[q]
                        if c == A:
                            continue
                        gain = (cw[c] - wA) / m - dv * (tot[c] - totA + dv) / two_m2
                        if gain > bg or (gain == bg and v == bv and c < bc):
                            bg = gain
                            bv = v
                            bc = c
                    for q in range(<int64_t>touched.size()):
                        has[touched[q]] = 0
                    if size[A] > 1 and empty < n:
                        gain = (0.0 - wA) / m - dv * (0.0 - totA + dv) / two_m2
                        if gain > bg or (gain == bg and v == bv and empty < bc):
                            bg = gain
                            bv = v
                            bc = empty
                if bv < 0:
                    break
                A = labels[bv]
                tot[A] -= degrees[bv]
                size[A] -= 1
                tot[bc] += degrees[bv]
                size[bc] += 1
                labels[bv] = bc
                locked[bv] = 1
                hist_v.push_back(bv)
                hist_a.push_back(A)
                if size[A] == 0 and A < empty:
                    empty = A
                if bc == empty:
                    empty = _first_empty(size, empty, n)
                cum += bg
                if cum > best_cum + tol:
                    best_cum = cum
                    best_len = hist_v.size()
                    since_best = 0
                else:
                    since_best += 1
                    if since_best >= patience:
                        break
            hl = hist_v.size()
            while hl > best_len:
                hl -= 1
                v = hist_v[hl]
                A = hist_a[hl]
                c = labels[v]
                tot[c] -= degrees[v]
                size[c] -= 1
                tot[A] += degrees[v]
                size[A] += 1
                labels[v] = A
            empty = _first_empty(size, 0, n)
            if best_len == 0:
                break
            total += best_cum
    return total
