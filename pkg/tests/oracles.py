"""Independent reference computations used as test oracles.

Nothing here imports the package's metric or detection code. Partitions are
plain lists of label integers indexed like the node list.
"""

import itertools
import math
from collections import Counter

import networkx as nx


def set_partitions(n):
    """All partitions of range(n) as restricted growth strings."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for lab in range(top + 2):
            yield from grow(prefix + [lab], max(top, lab))

    if n == 0:
        yield []
        return
    yield from grow([0], 0)


def to_nx(nodes, edges):
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for u, v, w in edges:
        g.add_edge(u, v, weight=w)
    return g


def groups(nodes, labels):
    out = {}
    for v, lab in zip(nodes, labels):
        out.setdefault(lab, set()).add(v)
    return list(out.values())


def nx_modularity(g, nodes, labels):
    return nx.algorithms.community.modularity(g, groups(nodes, labels), weight="weight")


def exhaustive_max_modularity(g, nodes):
    return max(nx_modularity(g, nodes, lab) for lab in set_partitions(len(nodes)))


def map_equation_direct(g, nodes, labels):
    """Two-level map equation in bits, from module exit rates and entropies.

    L = q H(Q) + sum_i p_i H(P_i) with q_i the exit rate of module i, q the
    total exit rate, and p_i = q_i + sum of the node visit rates in i.
    """
    total = 2.0 * g.size(weight="weight")
    visit = {v: g.degree(v, weight="weight") / total for v in nodes}
    lab = dict(zip(nodes, labels))
    exit_rate = Counter()
    for u, v, d in g.edges(data=True):
        if lab[u] != lab[v]:
            exit_rate[lab[u]] += d["weight"] / total
            exit_rate[lab[v]] += d["weight"] / total
    mods = sorted(set(labels))
    q = sum(exit_rate[m] for m in mods)

    def h(ps):
        s = sum(ps)
        return -sum(p / s * math.log2(p / s) for p in ps if p > 0) if s > 0 else 0.0

    length = q * h([exit_rate[m] for m in mods]) if q > 0 else 0.0
    for m in mods:
        inside = [visit[v] for v in nodes if lab[v] == m]
        p_m = exit_rate[m] + sum(inside)
        length += p_m * h([exit_rate[m]] + inside)
    return length


def pair_agreement(a, b):
    """(same-same, same-diff, diff-same, diff-diff) counts over all node pairs."""
    ss = sd = ds = dd = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        x, y = a[i] == a[j], b[i] == b[j]
        if x and y:
            ss += 1
        elif x:
            sd += 1
        elif y:
            ds += 1
        else:
            dd += 1
    return ss, sd, ds, dd


def brute_rand(a, b):
    ss, sd, ds, dd = pair_agreement(a, b)
    return (ss + dd) / (ss + sd + ds + dd)


def brute_ari(a, b):
    from fractions import Fraction

    ss, sd, ds, dd = pair_agreement(a, b)
    total = ss + sd + ds + dd
    same_a, same_b = ss + sd, ss + ds
    expected = Fraction(same_a * same_b, total)
    maximum = Fraction(same_a + same_b, 2)
    if maximum == expected:
        return 1.0 if ss == expected else 0.0
    return float((ss - expected) / (maximum - expected))


def brute_sjd(a, b):
    ca, cb = groups(range(len(a)), a), groups(range(len(b)), b)
    best_a = sum(max(len(x & y) for y in cb) for x in ca)
    best_b = sum(max(len(x & y) for y in ca) for x in cb)
    return 2 * len(a) - best_a - best_b


def entropy_terms(a, b):
    n = len(a)
    pa, pb, pab = Counter(a), Counter(b), Counter(zip(a, b))
    ha = -sum(c / n * math.log(c / n) for c in pa.values())
    hb = -sum(c / n * math.log(c / n) for c in pb.values())
    hab = -sum(c / n * math.log(c / n) for c in pab.values())
    return ha, hb, ha + hb - hab


def direct_nmi(a, b):
    ha, hb, mi = entropy_terms(a, b)
    if ha == 0 and hb == 0:
        return 1.0
    if ha == 0 or hb == 0:
        return 0.0
    return 2 * mi / (ha + hb)


def direct_vi(a, b):
    ha, hb, mi = entropy_terms(a, b)
    return ha + hb - 2 * mi


def nx_edge_betweenness(g):
    return {tuple(sorted(e)): s for e, s in nx.edge_betweenness_centrality(g, normalized=False, weight=None).items()}
