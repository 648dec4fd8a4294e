"""Pure-Python versions of the hot kernels.

Each function mirrors one in ``_kernels.pyx`` operation for operation, so
both backends produce bit-identical floats and identical decisions. Keep the
arithmetic expressions in sync when editing either file.
"""

import numpy as np

NAME = "python"


def pair_dots(ent_ptr, ent_feat, ent_w, feat_ptr, feat_ent, feat_w):
    """Sparse dot products for every entity pair sharing at least one feature.

    Entities are rows of a CSR matrix (``ent_*``); ``feat_*`` is its transpose
    with postings sorted by entity. Returns ``(i, j, dot)`` arrays with
    ``i < j`` in lexicographic order. Pairs whose shared features all carry
    zero weight are included with ``dot == 0``.
    """
    ep, ef, ew = ent_ptr.tolist(), ent_feat.tolist(), ent_w.tolist()
    fp, fe, fw = feat_ptr.tolist(), feat_ent.tolist(), feat_w.tolist()
    out_i, out_j, out_d = [], [], []
    for i in range(len(ep) - 1):
        acc = {}
        for p in range(ep[i], ep[i + 1]):
            f = ef[p]
            wi = ew[p]
            for q in range(fp[f], fp[f + 1]):
                j = fe[q]
                if j <= i:
                    continue
                acc[j] = acc.get(j, 0.0) + wi * fw[q]
        for j in sorted(acc):
            out_i.append(i)
            out_j.append(j)
            out_d.append(acc[j])
    return (np.asarray(out_i, dtype=np.int64), np.asarray(out_j, dtype=np.int64),
            np.asarray(out_d, dtype=np.float64))


def cnm_merges(indptr, indices, weights, degrees, m, tol):
    """Greedy agglomeration: repeatedly merge the connected cluster pair with the
    largest modularity gain while that gain exceeds ``tol``.

    Ties go to the lexicographically smallest label pair. The merged cluster
    keeps the smaller label. Returns an ``(k, 2)`` int64 array of merges.
    """
    ip, ix, w = indptr.tolist(), indices.tolist(), weights.tolist()
    D = degrees.tolist()
    n = len(D)
    two_m2 = 2.0 * m * m
    adj = [dict() for _ in range(n)]
    for i in range(n):
        for p in range(ip[i], ip[i + 1]):
            j = ix[p]
            if j != i:
                adj[i][j] = w[p]

    best_g = [-np.inf] * n
    best_n = [-1] * n

    def rescan(c):
        bg, bn = -np.inf, -1
        dc = D[c]
        for k, wk in adj[c].items():
            g = wk / m - (dc * D[k]) / two_m2
            if g > bg or (g == bg and k < bn):
                bg, bn = g, k
        best_g[c], best_n[c] = bg, bn

    for c in range(n):
        rescan(c)
    alive = [True] * n
    merges = []
    while True:
        bg, ba, bb = -np.inf, -1, -1
        for c in range(n):
            k = best_n[c]
            if not alive[c] or k < 0:
                continue
            g = best_g[c]
            a, b = (c, k) if c < k else (k, c)
            if g > bg or (g == bg and (a < ba or (a == ba and b < bb))):
                bg, ba, bb = g, a, b
        if ba < 0 or not bg > tol:
            break
        a, b = ba, bb
        adj_a, adj_b = adj[a], adj[b]
        del adj_a[b]
        del adj_b[a]
        for c, wbc in adj_b.items():
            adj_c = adj[c]
            del adj_c[b]
            if c in adj_a:
                nw = adj_a[c] + wbc
            else:
                nw = wbc
            adj_a[c] = nw
            adj_c[a] = nw
        adj[b] = {}
        alive[b] = False
        best_g[b], best_n[b] = -np.inf, -1
        D[a] = D[a] + D[b]
        merges.append((a, b))
        rescan(a)
        da = D[a]
        for c, wca in adj[a].items():
            if best_n[c] == a or best_n[c] == b:
                rescan(c)
            else:
                g = wca / m - (D[c] * da) / two_m2
                if g > best_g[c] or (g == best_g[c] and a < best_n[c]):
                    best_g[c], best_n[c] = g, a
    return np.asarray(merges, dtype=np.int64).reshape(-1, 2)


def refine(indptr, indices, weights, degrees, m, labels, order, tol, max_passes):
    """Local moving: visit vertices in ``order`` and move each to the neighboring
    (or an empty) cluster with the largest modularity gain above ``tol``.

    Sweeps repeat until one makes no move or ``max_passes`` is reached.
    ``labels`` (int64, values in ``[0, n)``) is updated in place. Returns the
    number of moves.
    """
    ip, ix, w = indptr.tolist(), indices.tolist(), weights.tolist()
    D = degrees.tolist()
    lab = labels.tolist()
    ordl = order.tolist()
    n = len(D)
    two_m2 = 2.0 * m * m
    tot = [0.0] * n
    size = [0] * n
    for i in range(n):
        tot[lab[i]] += D[i]
        size[lab[i]] += 1
    moves = 0
    for _ in range(max_passes):
        moved = 0
        for g in ordl:
            A = lab[g]
            dg = D[g]
            acc = {}
            for p in range(ip[g], ip[g + 1]):
                j = ix[p]
                if j == g:
                    continue
                c = lab[j]
                acc[c] = acc.get(c, 0.0) + w[p]
            wA = acc.get(A, 0.0)
            totA = tot[A]
            bg, bc = -np.inf, -1
            for c, wc in acc.items():
                if c == A:
                    continue
                gain = (wc - wA) / m - dg * (tot[c] - totA + dg) / two_m2
                if gain > bg or (gain == bg and c < bc):
                    bg, bc = gain, c
            if size[A] > 1:
                gain = (0.0 - wA) / m - dg * (0.0 - totA + dg) / two_m2
                if gain >= bg:
                    e = 0
                    while size[e] != 0:
                        e += 1
                    if gain > bg or e < bc:
                        bg, bc = gain, e
            if bc >= 0 and bg > tol:
                tot[A] -= dg
                size[A] -= 1
                tot[bc] += dg
                size[bc] += 1
                lab[g] = bc
                moved += 1
        moves += moved
        if moved == 0:
            break
    labels[:] = lab
    return moves


def rewire(src, dst, n_nodes, pick_i, pick_j, flip):
    """Degree-preserving double-edge swaps on a simple undirected edge list.

    Attempt ``k`` takes edges ``pick_i[k]`` = (u, v) and ``pick_j[k]`` = (x, y)
    (reversed to (y, x) when ``flip[k]``) and replaces them with (u, x) and
    (v, y) unless that creates a self-loop or a parallel edge. ``src``/``dst``
    are updated in place. Returns the number of accepted swaps.
    """
    s, d = src.tolist(), dst.tolist()
    n = int(n_nodes)

    def key(u, v):
        return u * n + v if u < v else v * n + u

    present = {key(u, v) for u, v in zip(s, d)}
    swaps = 0
    for i, j, f in zip(pick_i.tolist(), pick_j.tolist(), flip.tolist()):
        if i == j:
            continue
        u, v = s[i], d[i]
        x, y = s[j], d[j]
        if f:
            x, y = y, x
        if u == x or v == y:
            continue
        k1, k2 = key(u, x), key(v, y)
        if k1 in present or k2 in present:
            continue
        present.discard(key(u, v))
        present.discard(key(x, y))
        present.add(k1)
        present.add(k2)
        s[i], d[i] = u, x
        s[j], d[j] = v, y
        swaps += 1
    src[:] = s
    dst[:] = d
    return swaps


def kl_refine(indptr, indices, weights, degrees, m, labels, tol, max_rounds, patience):
    """Kernighan-Lin style refinement.

    Each round repeatedly applies the best single-vertex move among unlocked
    vertices (even when its gain is negative) and locks the vertex, then rolls
    back to the prefix of moves with the highest cumulative gain. A round stops
    after ``patience`` moves without a new best. Rounds repeat while they
    improve by more than ``tol``. Ties go to the smallest vertex, then the
    smallest target label. ``labels`` is updated in place; returns the total
    gain.
    """
    ip, ix, w = indptr.tolist(), indices.tolist(), weights.tolist()
    D = degrees.tolist()
    lab = labels.tolist()
    n = len(D)
    two_m2 = 2.0 * m * m
    tot = [0.0] * n
    size = [0] * n
    for i in range(n):
        tot[lab[i]] += D[i]
        size[lab[i]] += 1

    def first_empty(start):
        e = start
        while e < n and size[e] != 0:
            e += 1
        return e

    empty = first_empty(0)
    total = 0.0
    for _ in range(max_rounds):
        locked = [False] * n
        history = []
        cum = best_cum = 0.0
        best_len = 0
        since_best = 0
        for _step in range(n):
            bg, bv, bc = -np.inf, -1, -1
            for v in range(n):
                if locked[v]:
                    continue
                A = lab[v]
                dv = D[v]
                acc = {}
                for p in range(ip[v], ip[v + 1]):
                    j = ix[p]
                    if j == v:
                        continue
                    c = lab[j]
                    acc[c] = acc.get(c, 0.0) + w[p]
                wA = acc.get(A, 0.0)
                totA = tot[A]
                for c, wc in acc.items():
                    if c == A:
                        continue
                    gain = (wc - wA) / m - dv * (tot[c] - totA + dv) / two_m2
                    if gain > bg or (gain == bg and v == bv and c < bc):
                        bg, bv, bc = gain, v, c
                if size[A] > 1 and empty < n:
                    gain = (0.0 - wA) / m - dv * (0.0 - totA + dv) / two_m2
                    if gain > bg or (gain == bg and v == bv and empty < bc):
                        bg, bv, bc = gain, v, empty
            if bv < 0:
                break
            A = lab[bv]
            tot[A] -= D[bv]
            size[A] -= 1
            tot[bc] += D[bv]
            size[bc] += 1
            lab[bv] = bc
            locked[bv] = True
            history.append((bv, A))
            if size[A] == 0 and A < empty:
                empty = A
            if bc == empty:
                empty = first_empty(empty)
            cum += bg
            if cum > best_cum + tol:
                best_cum = cum
                best_len = len(history)
                since_best = 0
            else:
                since_best += 1
                if since_best >= patience:
                    break
        for v, A in reversed(history[best_len:]):
            c = lab[v]
            tot[c] -= D[v]
            size[c] -= 1
            tot[A] += D[v]
            size[A] += 1
            lab[v] = A
        empty = first_empty(0)
        if best_len == 0:
            break
        total += best_cum
    labels[:] = lab
    return total
