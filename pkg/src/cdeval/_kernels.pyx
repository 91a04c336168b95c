# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Must stay result-identical to ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double _TIE_RTOL = 1e-12


def edge_betweenness(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                     const cnp.int64_t[::1] edge_ids, const cnp.uint8_t[::1] alive,
                     const cnp.int64_t[::1] sources, Py_ssize_t n_edges):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] eb_arr = np.zeros(n_edges, dtype=np.float64)
    cdef double[::1] eb = eb_arr
    cdef cnp.int64_t[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef double[::1] sigma = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t si, s, head, tail, v, w, k, e, pos
    cdef cnp.int64_t dv, dw
    cdef double coeff, c
    with nogil:
        for si in range(sources.shape[0]):
            s = sources[si]
            dist[s] = 0
            sigma[s] = 1.0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                v = queue[head]
                head += 1
                dv = dist[v]
                for k in range(indptr[v], indptr[v + 1]):
                    if not alive[edge_ids[k]]:
                        continue
                    w = indices[k]
                    if dist[w] < 0:
                        dist[w] = dv + 1
                        queue[tail] = w
                        tail += 1
                    if dist[w] == dv + 1:
                        sigma[w] += sigma[v]
            # queue order is BFS order, i.e. the same as the reference's stack
            pos = tail - 1
            while pos >= 0:
                w = queue[pos]
                pos -= 1
                dw = dist[w]
                coeff = (1.0 + delta[w]) / sigma[w]
                for k in range(indptr[w], indptr[w + 1]):
                    e = edge_ids[k]
                    if not alive[e]:
                        continue
                    v = indices[k]
                    if dist[v] == dw - 1:
                        c = sigma[v] * coeff
                        eb[e] += c
                        delta[v] += c
            for pos in range(tail):
                v = queue[pos]
                dist[v] = -1
                sigma[v] = 0.0
                delta[v] = 0.0
    return eb_arr


def louvain_local_move(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                       const double[::1] weights, const double[::1] strength,
                       const cnp.int64_t[::1] order, cnp.int64_t[::1] comm, double m2,
                       Py_ssize_t max_sweeps=10000):
    cdef Py_ssize_t n = strength.shape[0]
    cdef double[::1] tot = np.zeros(n, dtype=np.float64)
    cdef double[::1] link = np.zeros(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] mark = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] touched = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t i, oi, p, t, ntouched, sweep, own, best, cj, cand
    cdef Py_ssize_t moves = 0, moved
    cdef double ki, gain, best_gain
    cdef double eps = 1e-12 * m2
    with nogil:
        for i in range(n):
            tot[comm[i]] += strength[i]
        for sweep in range(max_sweeps):
            moved = 0
            for oi in range(order.shape[0]):
                i = order[oi]
                own = comm[i]
                ki = strength[i]
                touched[0] = own
                ntouched = 1
                mark[own] = 1
                for p in range(indptr[i], indptr[i + 1]):
                    cj = comm[indices[p]]
                    if not mark[cj]:
                        mark[cj] = 1
                        touched[ntouched] = cj
                        ntouched += 1
                    link[cj] += weights[p]
                tot[own] -= ki
                best = own
                best_gain = link[own] - tot[own] * ki / m2
                for t in range(1, ntouched):
                    cand = touched[t]
                    gain = link[cand] - tot[cand] * ki / m2
                    if gain > best_gain + eps:
                        best_gain = gain
                        best = cand
                tot[best] += ki
                for t in range(ntouched):
                    link[touched[t]] = 0.0
                    mark[touched[t]] = 0
                if best != own:
                    comm[i] = best
                    moved += 1
            moves += moved
            if moved == 0:
                break
    return moves


def louvain_refine(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                   const double[::1] weights, const double[::1] strength,
                   cnp.int64_t[::1] comm, double m2, Py_ssize_t max_passes=100):
    cdef Py_ssize_t n = strength.shape[0]
    cdef double[::1] tot = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] size = np.zeros(n, dtype=np.int64)
    cdef double[::1] link = np.zeros(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] mark = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] locked = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] touched = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] log_node = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] log_from = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t i, p, t, step, ntouched, own, cj, cand, empty, pick, pick_to, nlog, best_len
    cdef Py_ssize_t passes = 0, pas
    cdef double ki, gain, stay, pick_gain, cur, best
    cdef double eps = 1e-12 * m2
    with nogil:
        for pas in range(max_passes):
            for i in range(n):
                tot[i] = 0.0
                size[i] = 0
                locked[i] = 0
            for i in range(n):
                tot[comm[i]] += strength[i]
                size[comm[i]] += 1
            cur = 0.0
            best = 0.0
            best_len = 0
            nlog = 0
            for step in range(n):
                empty = -1
                for t in range(n):
                    if size[t] == 0:
                        empty = t
                        break
                pick = -1
                pick_to = -1
                pick_gain = 0.0
                for i in range(n):
                    if locked[i]:
                        continue
                    own = comm[i]
                    ki = strength[i]
                    touched[0] = own
                    ntouched = 1
                    mark[own] = 1
                    for p in range(indptr[i], indptr[i + 1]):
                        cj = comm[indices[p]]
                        if not mark[cj]:
                            mark[cj] = 1
                            touched[ntouched] = cj
                            ntouched += 1
                        link[cj] += weights[p]
                    stay = link[own] - (tot[own] - ki) * ki / m2
                    for t in range(1, ntouched):
                        cand = touched[t]
                        gain = link[cand] - tot[cand] * ki / m2 - stay
                        if pick < 0 or gain > pick_gain:
                            pick = i
                            pick_to = cand
                            pick_gain = gain
                    if empty >= 0 and size[own] > 1:
                        gain = -stay
                        if pick < 0 or gain > pick_gain:
                            pick = i
                            pick_to = empty
                            pick_gain = gain
                    for t in range(ntouched):
                        link[touched[t]] = 0.0
                        mark[touched[t]] = 0
                if pick < 0:
                    break
                own = comm[pick]
                locked[pick] = 1
                log_node[nlog] = pick
                log_from[nlog] = own
                nlog += 1
                tot[own] -= strength[pick]
                size[own] -= 1
                tot[pick_to] += strength[pick]
                size[pick_to] += 1
                comm[pick] = pick_to
                cur += pick_gain
                if cur > best + eps:
                    best = cur
                    best_len = nlog
            for t in range(nlog - 1, best_len - 1, -1):
                comm[log_node[t]] = log_from[t]
            if best_len == 0:
                break
            passes += 1
    return passes


cdef inline double _label_weights(Py_ssize_t i, const cnp.int64_t[::1] indptr,
                                  const cnp.int64_t[::1] indices, const double[::1] weights,
                                  cnp.int64_t[::1] labels, double[::1] acc,
                                  cnp.uint8_t[::1] mark, cnp.int64_t[::1] seen,
                                  Py_ssize_t* nseen) noexcept nogil:
    cdef Py_ssize_t p, lab, t
    cdef double best = 0.0
    nseen[0] = 0
    for p in range(indptr[i], indptr[i + 1]):
        lab = labels[indices[p]]
        if not mark[lab]:
            mark[lab] = 1
            seen[nseen[0]] = lab
            nseen[0] += 1
        acc[lab] += weights[p]
    for t in range(nseen[0]):
        if acc[seen[t]] > best:
            best = acc[seen[t]]
    return best


def label_propagation_sweep(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                            const double[::1] weights, const cnp.int64_t[::1] order,
                            const double[::1] uniforms, cnp.int64_t[::1] labels):
    cdef Py_ssize_t n = labels.shape[0]
    cdef double[::1] acc = np.zeros(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] mark = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] seen = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] ties = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t pos, i, t, nseen = 0, nties, pick
    cdef Py_ssize_t changes = 0
    cdef double best, cut
    with nogil:
        for pos in range(order.shape[0]):
            i = order[pos]
            if indptr[i] == indptr[i + 1]:
                continue
            best = _label_weights(i, indptr, indices, weights, labels, acc, mark, seen, &nseen)
            cut = best - _TIE_RTOL * best
            nties = 0
            for t in range(nseen):
                if acc[seen[t]] >= cut:
                    ties[nties] = seen[t]
                    nties += 1
            pick = ties[<Py_ssize_t>(uniforms[pos] * nties)]
            for t in range(nseen):
                acc[seen[t]] = 0.0
                mark[seen[t]] = 0
            if pick != labels[i]:
                labels[i] = pick
                changes += 1
    return changes


def label_propagation_stable(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                             const double[::1] weights, cnp.int64_t[::1] labels):
    cdef Py_ssize_t n = labels.shape[0]
    cdef double[::1] acc = np.zeros(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] mark = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] seen = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t i, t, nseen = 0
    cdef double best
    cdef bint ok = True
    with nogil:
        for i in range(n):
            if indptr[i] == indptr[i + 1]:
                continue
            best = _label_weights(i, indptr, indices, weights, labels, acc, mark, seen, &nseen)
            ok = acc[labels[i]] >= best - _TIE_RTOL * best
            for t in range(nseen):
                acc[seen[t]] = 0.0
                mark[seen[t]] = 0
            if not ok:
                break
    return bool(ok)
