"""Pure-Python kernels. Reference behaviour for the compiled ``_kernels`` module.

Both modules must produce identical results for identical inputs: same
iteration order, same float operations, same tie handling.
"""

import numpy as np

BACKEND = "python"

_TIE_RTOL = 1e-12


def edge_betweenness(indptr, indices, edge_ids, alive, sources, n_edges):
    """Shortest-path edge betweenness (hop distance), summed over ordered pairs.

    Only sources in ``sources`` are expanded and only edges with
    ``alive[eid]`` set are traversed. Callers halve the result to count each
    unordered pair once.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    edge_ids = edge_ids.tolist()
    alive = alive.tolist()
    n = len(indptr) - 1
    eb = [0.0] * n_edges
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    for s in sources.tolist():
        stack = []
        dist[s] = 0
        sigma[s] = 1.0
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                if not alive[edge_ids[k]]:
                    continue
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for w in reversed(stack):
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(indptr[w], indptr[w + 1]):
                if not alive[edge_ids[k]]:
                    continue
                v = indices[k]
                if dist[v] == dw - 1:
                    c = sigma[v] * coeff
                    eb[edge_ids[k]] += c
                    delta[v] += c
        for v in stack:
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    return np.array(eb, dtype=np.float64)


def louvain_local_move(indptr, indices, weights, strength, order, comm, m2, max_sweeps=10000):
    """Repeat seeded-order sweeps of single-node moves until none improves modularity.

    ``comm`` is updated in place. Returns the total number of moves made.
    """
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    k = strength.tolist()
    order_l = order.tolist()
    c = comm.tolist()
    n = len(k)
    tot = [0.0] * n
    for i in range(n):
        tot[c[i]] += k[i]
    link = [0.0] * n
    mark = [False] * n
    eps = 1e-12 * m2
    moves = 0
    for _ in range(max_sweeps):
        moved = 0
        for i in order_l:
            own = c[i]
            ki = k[i]
            touched = [own]
            mark[own] = True
            for p in range(indptr_l[i], indptr_l[i + 1]):
                cj = c[indices_l[p]]
                if not mark[cj]:
                    mark[cj] = True
                    touched.append(cj)
                link[cj] += weights_l[p]
            tot[own] -= ki
            best = own
            best_gain = link[own] - tot[own] * ki / m2
            for cand in touched[1:]:
                gain = link[cand] - tot[cand] * ki / m2
                if gain > best_gain + eps:
                    best_gain = gain
                    best = cand
            tot[best] += ki
            for t in touched:
                link[t] = 0.0
                mark[t] = False
            if best != own:
                c[i] = best
                moved += 1
        moves += moved
        if moved == 0:
            break
    comm[:] = c
    return moves


def louvain_refine(indptr, indices, weights, strength, comm, m2, max_passes=100):
    """Kernighan-Lin style vertex-mover passes over a finished partition.

    Each pass moves every node exactly once, always applying the best move
    left among unlocked nodes (into a neighbouring community or an empty
    one), even when it lowers modularity. The pass is then rolled back to
    its best prefix. Passes repeat until one brings no gain, so the result
    is never worse than the input. ``comm`` is updated in place and must
    hold labels in ``[0, n)``. Returns the number of improving passes.
    """
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    k = strength.tolist()
    c = comm.tolist()
    n = len(k)
    eps = 1e-12 * m2
    link = [0.0] * n
    mark = [False] * n
    passes = 0
    for _ in range(max_passes):
        tot = [0.0] * n
        size = [0] * n
        for i in range(n):
            tot[c[i]] += k[i]
            size[c[i]] += 1
        locked = [False] * n
        cur = best = 0.0
        best_len = 0
        log = []
        for _step in range(n):
            empty = size.index(0) if 0 in size else -1
            pick = -1
            pick_to = -1
            pick_gain = 0.0
            for i in range(n):
                if locked[i]:
                    continue
                own = c[i]
                ki = k[i]
                touched = [own]
                mark[own] = True
                for p in range(indptr_l[i], indptr_l[i + 1]):
                    cj = c[indices_l[p]]
                    if not mark[cj]:
                        mark[cj] = True
                        touched.append(cj)
                    link[cj] += weights_l[p]
                stay = link[own] - (tot[own] - ki) * ki / m2
                for cand in touched[1:]:
                    gain = link[cand] - tot[cand] * ki / m2 - stay
                    if pick < 0 or gain > pick_gain:
                        pick, pick_to, pick_gain = i, cand, gain
                if empty >= 0 and size[own] > 1:
                    gain = -stay
                    if pick < 0 or gain > pick_gain:
                        pick, pick_to, pick_gain = i, empty, gain
                for t in touched:
                    link[t] = 0.0
                    mark[t] = False
            if pick < 0:
                break
            own = c[pick]
            locked[pick] = True
            log.append((pick, own))
            tot[own] -= k[pick]
            size[own] -= 1
            tot[pick_to] += k[pick]
            size[pick_to] += 1
            c[pick] = pick_to
            cur += pick_gain
            if cur > best + eps:
                best = cur
                best_len = len(log)
        for i, own in reversed(log[best_len:]):
            c[i] = own
        if best_len == 0:
            break
        passes += 1
    comm[:] = c
    return passes


def _label_weights(i, indptr, indices, weights, labels, acc, mark, seen):
    seen.clear()
    for p in range(indptr[i], indptr[i + 1]):
        lab = labels[indices[p]]
        if not mark[lab]:
            mark[lab] = True
            seen.append(lab)
        acc[lab] += weights[p]
    best = 0.0
    for lab in seen:
        if acc[lab] > best:
            best = acc[lab]
    return best


def label_propagation_sweep(indptr, indices, weights, order, uniforms, labels):
    """One asynchronous sweep; ties resolved by ``uniforms[position]``. Returns label changes."""
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    lab = labels.tolist()
    u = uniforms.tolist()
    acc = [0.0] * len(lab)
    mark = [False] * len(lab)
    seen = []
    changes = 0
    for pos, i in enumerate(order.tolist()):
        if indptr_l[i] == indptr_l[i + 1]:
            continue
        best = _label_weights(i, indptr_l, indices_l, weights_l, lab, acc, mark, seen)
        cut = best - _TIE_RTOL * best
        ties = [x for x in seen if acc[x] >= cut]
        pick = ties[int(u[pos] * len(ties))]
        for x in seen:
            acc[x] = 0.0
            mark[x] = False
        if pick != lab[i]:
            lab[i] = pick
            changes += 1
    labels[:] = lab
    return changes


def label_propagation_stable(indptr, indices, weights, labels):
    """True when every node already carries one of its neighborhood's majority labels."""
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    lab = labels.tolist()
    acc = [0.0] * len(lab)
    mark = [False] * len(lab)
    seen = []
    for i in range(len(lab)):
        if indptr_l[i] == indptr_l[i + 1]:
            continue
        best = _label_weights(i, indptr_l, indices_l, weights_l, lab, acc, mark, seen)
        ok = acc[lab[i]] >= best - _TIE_RTOL * best
        for x in seen:
            acc[x] = 0.0
            mark[x] = False
        if not ok:
            return False
    return True
