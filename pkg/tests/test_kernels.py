import numpy as np
import pytest

from pauligraph import _pykernels
from pauligraph._backend import BACKEND, available_backends
from pauligraph.dla import model_preset
from pauligraph.graph import build_full

BACKENDS = available_backends()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def _args(name, n):
    gens = model_preset(name, n)
    return n, gens.x_masks, gens.z_masks


def test_backend_selected():
    assert BACKEND in BACKENDS


@needs_cython
@pytest.mark.parametrize("name", ["matchgate", "universal", "ising_b", "orthogonal"])
@pytest.mark.parametrize("cap", [-1, 1, 2])
def test_union_find_parity(name, cap):
    n, gx, gz = _args(name, 3)
    py = _pykernels.union_find_roots(n, gx, gz, cap)
    cy = np.asarray(BACKENDS["cython"].union_find_roots(n, gx, gz, cap))
    assert np.array_equal(py, cy)


@needs_cython
@pytest.mark.parametrize("seed", [1, 7, 27, 40])
def test_bfs_component_parity(seed):
    n, gx, gz = _args("universal", 3)
    py = _pykernels.bfs_component(n, seed, gx, gz, -1, 1 << 20)
    cy = BACKENDS["cython"].bfs_component(n, seed, gx, gz, -1, 1 << 20)
    assert np.array_equal(np.asarray(py[0]), np.asarray(cy[0])) and py[1] == cy[1]


@needs_cython
def test_bfs_truncates_at_cap():
    n, gx, gz = _args("universal", 3)
    for mod in BACKENDS.values():
        members, complete = mod.bfs_component(n, 1, gx, gz, -1, 10)
        assert not complete and len(members) <= 11


@needs_cython
def test_distance_kernels_parity():
    comp = build_full(model_preset("matchgate", 3)).component(6)
    adj = comp.adjacency
    for mod in BACKENDS.values():
        ecc = np.asarray(mod.eccentricities(adj.indptr, adj.indices))
        assert ecc.max() == 9
        d0 = np.asarray(mod.bfs_distances(adj.indptr, adj.indices, 0))
        assert d0[0] == 0 and d0.max() == ecc[0]
    py = _pykernels.eccentricities(adj.indptr, adj.indices)
    cy = BACKENDS["cython"].eccentricities(adj.indptr, adj.indices)
    assert np.array_equal(np.asarray(py), np.asarray(cy))
