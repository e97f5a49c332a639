"""Pure-Python implementations of the graph kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when the
extension is unavailable or when ``PAULIGRAPH_PURE_PYTHON=1``.
"""
from collections import deque

import numpy as np


def _anticommutes(v, gx, gz, n, low):
    return (((v >> n) & gz).bit_count() + ((v & low) & gx).bit_count()) & 1


def union_find_roots(n, gen_x, gen_z, weight_cap):
    """Root of every dense index after uniting each vertex with its generator images.

    Vertices heavier than ``weight_cap`` (when ``weight_cap >= 0``) are deleted
    and get root -1.
    """
    size = 1 << (2 * n)
    low = (1 << n) - 1
    gens = [(int(gx), int(gz), (int(gx) << n) | int(gz)) for gx, gz in zip(gen_x, gen_z)]
    idx = np.arange(size, dtype=np.uint64)
    xs, zs = idx >> np.uint64(n), idx & np.uint64(low)
    alive = np.ones(size, dtype=bool)
    if weight_cap >= 0:
        alive = np.bitwise_count(xs | zs) <= weight_cap

    parent = list(range(size))

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for gx, gz, gi in gens:
        anti = ((np.bitwise_count(xs & np.uint64(gz)) + np.bitwise_count(zs & np.uint64(gx))) & 1).astype(bool)
        src = np.nonzero(anti & alive)[0]
        src = src[alive[src ^ gi]]
        # each undirected edge appears twice; keep one orientation
        src = src[src < (src ^ gi)]
        for a in src.tolist():
            ra, rb = find(a), find(a ^ gi)
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb

    roots = np.fromiter((find(a) for a in range(size)), dtype=np.int64, count=size)
    roots[~alive] = -1
    return roots


def bfs_component(n, seed, gen_x, gen_z, weight_cap, max_size):
    """Vertices reachable from ``seed``, in BFS order.

    Returns ``(members, complete)``; ``complete`` is False when the search
    stopped after ``max_size`` vertices.
    """
    low = (1 << n) - 1
    gens = [(int(gx), int(gz), (int(gx) << n) | int(gz)) for gx, gz in zip(gen_x, gen_z)]
    seen = {seed}
    order = [seed]
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        for gx, gz, gi in gens:
            if not _anticommutes(v, gx, gz, n, low):
                continue
            w = v ^ gi
            if w in seen:
                continue
            if weight_cap >= 0 and ((w >> n) | (w & low)).bit_count() > weight_cap:
                continue
            if len(order) >= max_size:
                return np.array(order, dtype=np.uint64), False
            seen.add(w)
            order.append(w)
            queue.append(w)
    return np.array(order, dtype=np.uint64), True


def bfs_distances(indptr, indices, source):
    """Unweighted single-source distances on a CSR graph (-1 = unreachable)."""
    nv = len(indptr) - 1
    dist = [-1] * nv
    dist[source] = 0
    queue = deque([source])
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
    return np.array(dist, dtype=np.int64)


def eccentricities(indptr, indices):
    """Max BFS distance from every vertex of a connected CSR graph."""
    nv = len(indptr) - 1
    out = np.empty(nv, dtype=np.int64)
    for s in range(nv):
        out[s] = bfs_distances(indptr, indices, s).max()
    return out
