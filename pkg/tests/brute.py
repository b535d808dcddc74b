"""Independent brute-force oracles used only by the tests.

Nothing here imports the package's numerical code: colourings, edge subsets
and compatible families are enumerated directly with itertools.
"""

import itertools
import math


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in range(n)})


def potts_z(n, edges, q, beta):
    total = 0.0
    for sigma in itertools.product(range(q), repeat=n):
        mono = sum(sigma[a] == sigma[b] for a, b in edges)
        total += math.exp(beta * mono)
    return total


def potts_distribution(n, edges, q, beta):
    """Probabilities indexed by ``sum sigma_v q^v``."""
    probs = [0.0] * q**n
    for sigma in itertools.product(range(q), repeat=n):
        idx = sum(c * q**v for v, c in enumerate(sigma))
        probs[idx] = math.exp(beta * sum(sigma[a] == sigma[b] for a, b in edges))
    z = sum(probs)
    return [x / z for x in probs]


def rc_z(n, edges, q, p):
    total = 0.0
    for r in range(len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            total += q ** components(n, sub) * p**r
    return total


def is_connected(vertices, edges):
    vertices = list(vertices)
    if not vertices:
        return False
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {vertices[0]}, [vertices[0]]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == len(vertices)


def connected_spanning_signed_sum(k, edges):
    """``sum (-1)^|F|`` over edge subsets F that connect all k vertices."""
    total = 0
    for r in range(len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            if is_connected(range(k), sub):
                total += (-1) ** r
    return total


def xi_families(weights, compatible, admissible=None):
    """Sum over pairwise compatible subsets of ``range(len(weights))``.

    Backtracking: a family is extended only by later polymers compatible with
    every member. ``admissible(family)`` can veto whole families.
    """
    k = len(weights)
    total = 0.0

    def extend(fam, start, prod):
        nonlocal total
        if admissible is None or admissible(fam):
            total += prod
        for j in range(start, k):
            if all(compatible(i, j) for i in fam):
                extend(fam + [j], j + 1, prod * weights[j])

    extend([], 0, 1.0)
    return total


def high_temp_polymers(n, edges):
    """(vertex set, edge subset) pairs forming a connected subgraph on >= 2 vertices."""
    out = []
    for r in range(1, len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            verts = sorted({x for e in sub for x in e})
            if is_connected(verts, sub):
                out.append((frozenset(verts), sub))
    return out


def cut_sizes(n, edges):
    """Sizes of all cuts, each listed once (side containing vertex 0)."""
    out = []
    for mask in range(1, 1 << n, 2):
        if mask == (1 << n) - 1:
            continue
        out.append(sum((mask >> a & 1) != (mask >> b & 1) for a, b in edges))
    return out
