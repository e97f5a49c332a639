# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cnp.import_array()


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


cdef inline int64_t _find(int64_t* parent, int64_t a) noexcept nogil:
    cdef int64_t root = a, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


def union_find_roots(int n, gen_x, gen_z, int weight_cap):
    cdef uint64_t[:] gx = np.ascontiguousarray(gen_x, dtype=np.uint64)
    cdef uint64_t[:] gz = np.ascontiguousarray(gen_z, dtype=np.uint64)
    cdef int ng = gx.shape[0]
    cdef int64_t size = (<int64_t>1) << (2 * n)
    cdef uint64_t low = ((<uint64_t>1) << n) - 1
    cdef cnp.ndarray[int64_t, ndim=1] roots = np.empty(size, dtype=np.int64)
    cdef int64_t* parent = <int64_t*>cnp.PyArray_DATA(roots)
    cdef int64_t a, b, ra, rb
    cdef uint64_t v, gi, x, z
    cdef int g
    with nogil:
        for a in range(size):
            parent[a] = a
        for a in range(size):
            v = <uint64_t>a
            x = v >> n
            z = v & low
            if weight_cap >= 0 and popcount64(x | z) > weight_cap:
                continue
            for g in range(ng):
                if ((popcount64(x & gz[g]) + popcount64(z & gx[g])) & 1) == 0:
                    continue
                gi = (gx[g] << n) | gz[g]
                b = <int64_t>(v ^ gi)
                if b < a:
                    continue
                if weight_cap >= 0 and popcount64(((<uint64_t>b) >> n) | ((<uint64_t>b) & low)) > weight_cap:
                    continue
                ra = _find(parent, a)
                rb = _find(parent, b)
                if ra != rb:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
        for a in range(size):
            v = <uint64_t>a
            if weight_cap >= 0 and popcount64((v >> n) | (v & low)) > weight_cap:
                parent[a] = -1
            else:
                parent[a] = _find(parent, a)
    return roots


def bfs_component(int n, seed, gen_x, gen_z, int weight_cap, max_size):
    cdef uint64_t[:] gx = np.ascontiguousarray(gen_x, dtype=np.uint64)
    cdef uint64_t[:] gz = np.ascontiguousarray(gen_z, dtype=np.uint64)
    cdef int ng = gx.shape[0]
    cdef uint64_t low = ((<uint64_t>1) << n) - 1
    cdef uint64_t cap = <uint64_t>max_size
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] order
    cdef size_t head = 0
    cdef uint64_t v, w, x, z
    cdef int g
    cdef bint complete = True
    order.push_back(<uint64_t>seed)
    seen.insert(<uint64_t>seed)
    with nogil:
        while head < order.size():
            v = order[head]
            head += 1
            x = v >> n
            z = v & low
            for g in range(ng):
                if ((popcount64(x & gz[g]) + popcount64(z & gx[g])) & 1) == 0:
                    continue
                w = v ^ ((gx[g] << n) | gz[g])
                if seen.count(w):
                    continue
                if weight_cap >= 0 and popcount64((w >> n) | (w & low)) > weight_cap:
                    continue
                if order.size() >= cap:
                    complete = False
                    break
                seen.insert(w)
                order.push_back(w)
            if not complete:
                break
    out = np.empty(order.size(), dtype=np.uint64)
    cdef uint64_t[:] ov = out
    cdef size_t i
    for i in range(order.size()):
        ov[i] = order[i]
    return out, bool(complete)


cdef void _bfs(const int64_t* indptr, const int64_t* indices, int64_t nv,
               int64_t source, int64_t* dist, int64_t* queue) noexcept nogil:
    cdef int64_t i, head = 0, tail = 0, v, w, k
    for i in range(nv):
        dist[i] = -1
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1


def bfs_distances(indptr, indices, int64_t source):
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef int64_t nv = ip.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] dist = np.empty(nv, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] queue = np.empty(max(nv, 1), dtype=np.int64)
    _bfs(<int64_t*>ip.data, <int64_t*>ix.data, nv, source, <int64_t*>dist.data, <int64_t*>queue.data)
    return dist


def eccentricities(indptr, indices):
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef int64_t nv = ip.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(nv, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] dist = np.empty(max(nv, 1), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] queue = np.empty(max(nv, 1), dtype=np.int64)
    cdef int64_t s, i, m
    with nogil:
        for s in range(nv):
            _bfs(<int64_t*>ip.data, <int64_t*>ix.data, nv, s, <int64_t*>dist.data, <int64_t*>queue.data)
            m = 0
            for i in range(nv):
                if dist[i] > m:
                    m = dist[i]
            out[s] = m
    return out
