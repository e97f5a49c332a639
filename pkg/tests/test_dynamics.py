from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import dense
from pauligraph.dla import GeneratorSet, PRESETS, model_preset
from pauligraph.errors import ContractError
from pauligraph.graph import build_full, component_of
from pauligraph.dynamics import (
    average_graph_complexity,
    build_liouvillian,
    evolve,
    evolve_trajectory,
    graph_complexity,
    heisenberg_dense,
    krylov_complexity,
    lanczos,
    monte_carlo_graph_complexity,
    path_average_complexity,
    random_hamiltonian,
    short_time_scaling,
)
from pauligraph.pauli import PauliString, parse


def qubit_z():
    return GeneratorSet.from_labels(["Z"], [1.0])


def dense_coefficients(M, strings):
    d = M.shape[0]
    return np.array([np.trace(M @ dense(q.label)) / d for q in strings])


def random_case(rng, name, n=3):
    gens = model_preset(name, n)
    H = random_hamiltonian(gens, rng)
    while True:
        p = PauliString.from_index(int(rng.integers(1, 4**n)), n)
        comp = component_of(p, H)
        if comp.size > 1:
            return H, p, comp


# --- Liouvillian ---------------------------------------------------------------


def test_single_qubit_liouvillian():
    H = GeneratorSet.from_labels(["Z"], [0.7])
    comp = component_of(parse("X"), H)
    A = build_liouvillian(H, comp).dense()
    assert comp.labels() == ["X", "Y"]
    # [Z, X] = 2i Y feeds c_Y with -2c, and [Z, Y] = -2i X feeds c_X with +2c
    assert np.array_equal(A, [[0, 1.4], [-1.4, 0]])


@pytest.mark.parametrize("name", list(PRESETS))
def test_liouvillian_matches_dense_superoperator(name, rng):
    H, p, comp = random_case(rng, name)
    L = build_liouvillian(H, comp)
    assert np.array_equal(L.dense(), -L.dense().T)
    Hm = sum(c * dense(g.label) for c, g in zip(H.coefficients, H))
    strings = comp.strings()
    basis = [dense(s.label) for s in strings]
    for _ in range(5):
        v = rng.normal(size=comp.size)
        O = sum(c * b for c, b in zip(v, basis))
        image = dense_coefficients(1j * (Hm @ O - O @ Hm), strings)
        assert np.allclose(image.imag, 0, atol=1e-10)
        assert np.allclose(L.matrix @ v, image.real, atol=1e-10)


def test_liouvillian_requires_coefficients():
    gens = model_preset("matchgate", 2)
    with pytest.raises(ContractError):
        build_liouvillian(gens, component_of(parse("XI"), gens))


# --- evolution -----------------------------------------------------------------


def test_evolve_at_zero_is_unit_vector():
    H = random_hamiltonian(model_preset("universal", 2), np.random.default_rng(0))
    v = evolve(parse("XY"), H, 0.0)
    assert v.coefficient(parse("XY")) == 1.0 and v.norm == 1.0


@pytest.mark.parametrize("method", ["ode", "expm", "spectral"])
def test_two_level_rotation(method):
    for t in (0.1, 0.8, 2.5):
        v = evolve(parse("X"), qubit_z(), t, method)
        assert v.coefficient(parse("X")) == pytest.approx(np.cos(2 * t), abs=1e-9)
        assert v.coefficient(parse("Y")) == pytest.approx(-np.sin(2 * t), abs=1e-9)


@pytest.mark.parametrize("name", list(PRESETS))
@pytest.mark.parametrize("method", ["ode", "expm", "spectral"])
def test_evolve_matches_dense_conjugation(name, method, rng):
    for _ in range(3):
        H, p, comp = random_case(rng, name)
        t = float(rng.uniform(0, 3))
        v = evolve(p, H, t, method, comp)
        Hm = sum(c * dense(g.label) for c, g in zip(H.coefficients, H))
        U = expm(1j * t * Hm)
        exact = dense_coefficients(U @ dense(p.label) @ U.conj().T, comp.strings())
        assert np.abs(v.coefficients - exact).max() <= 1e-8
        assert np.allclose(heisenberg_dense(p, H, t), U @ dense(p.label) @ U.conj().T)


@pytest.mark.parametrize("name", ["matchgate", "universal"])
def test_norm_conservation(name):
    H = random_hamiltonian(model_preset(name, 3), np.random.default_rng(21))
    p = PauliString.single(3, 2, "X")
    comp, traj = evolve_trajectory(p, H, np.linspace(0, 100, 41))
    assert np.abs(np.linalg.norm(traj, axis=1) - 1).max() <= 1e-9


def test_dense_method_limit():
    H = random_hamiltonian(model_preset("universal", 6), np.random.default_rng(0))
    with pytest.raises(Exception, match="dense limit"):
        evolve(PauliString.single(6, 1, "X"), H, 0.1, "expm")


# --- complexities --------------------------------------------------------------


def test_graph_complexity_trivial_cases():
    H = random_hamiltonian(model_preset("matchgate", 3), np.random.default_rng(4))
    p = parse("XII")
    comp, traj = evolve_trajectory(p, H, [0.0, 1.0])
    G = graph_complexity(traj, comp.distances_from(p))
    assert G[0] == 0 and G[1] > 0
    sym = parse("ZZZ")
    comp, traj = evolve_trajectory(sym, H, [0.0, 5.0])
    assert comp.size == 1 and graph_complexity(traj, comp.distances_from(sym)).tolist() == [0, 0]


def test_path_average_formula_against_direct_sum():
    for size in range(1, 12):
        for j in range(1, size + 1):
            direct = Fraction(sum(abs(j - k) for k in range(1, size + 1)), size)
            assert path_average_complexity(size, j) == direct
    with pytest.raises(ContractError):
        path_average_complexity(4, 5)


def test_uniform_vector_on_path_endpoint():
    gens = model_preset("matchgate", 3)
    comp = component_of(parse("XII"), gens)
    uniform = np.full(comp.size, 1 / np.sqrt(comp.size))
    G = float(graph_complexity(uniform, comp.distances_from(parse("XII"))))
    assert G == pytest.approx(float(path_average_complexity(comp.size, 1)))


def test_average_graph_complexity_path_both_ends():
    gens = model_preset("matchgate", 2)
    # kappa = 1 path XI - YI - ZX - ZY (4 Majorana modes)
    assert average_graph_complexity(parse("XI"), gens) == path_average_complexity(4, 1) == Fraction(3, 2)
    assert average_graph_complexity(parse("ZY"), gens) == path_average_complexity(4, 4)
    assert average_graph_complexity(parse("YI"), gens) == path_average_complexity(4, 2)
    assert average_graph_complexity(parse("ZZ"), gens) == 0


def test_average_graph_complexity_sources():
    gens = model_preset("universal", 2)
    g = build_full(gens)
    p = parse("XZ")
    assert average_graph_complexity(p, g) == average_graph_complexity(p, gens)
    assert average_graph_complexity(p, g.component_containing(p)) == average_graph_complexity(p, gens)


def test_lanczos_two_level():
    chain = lanczos(qubit_z(), parse("X"))
    assert chain.dimension == 2 and chain.b == pytest.approx([2.0])
    for t in (0.3, 1.1):
        assert krylov_complexity(chain, qubit_z(), parse("X"), t) == pytest.approx(np.sin(2 * t) ** 2, abs=1e-9)
    assert krylov_complexity(chain, qubit_z(), parse("X"), 0.0) == 0.0


def test_lanczos_commuting_operator():
    H = GeneratorSet.from_labels(["ZI", "IZ"], [1.0, 2.0])
    chain = lanczos(H, parse("ZZ"))
    assert chain.dimension == 1 and len(chain.b) == 0
    assert krylov_complexity(chain, H, parse("ZZ"), 3.0) == 0.0


@pytest.mark.parametrize("name", list(PRESETS))
def test_krylov_chain_properties(name, rng):
    H, p, comp = random_case(rng, name)
    chain = lanczos(H, p, component=comp)
    assert chain.dimension <= comp.size
    assert chain.orthonormality_error() <= 1e-8
    _, traj = evolve_trajectory(p, H, np.linspace(0, 5, 11), component=comp)
    phi = chain.amplitudes(traj)
    assert np.abs((phi**2).sum(axis=1) - 1).max() <= 1e-8


@pytest.mark.parametrize("name", list(PRESETS))
def test_graph_complexity_below_krylov(name, rng):
    for _ in range(4):
        H, p, comp = random_case(rng, name)
        times = np.linspace(0, 4, 21)
        _, traj = evolve_trajectory(p, H, times, component=comp)
        G = graph_complexity(traj, comp.distances_from(p))
        K = lanczos(H, p, component=comp).complexity(traj)
        assert np.all(G <= K + 1e-8)
        assert np.all(G <= 2 * K + 1e-8)


def test_path_component_tightness():
    H = random_hamiltonian(model_preset("matchgate", 4), np.random.default_rng(8))
    p = parse("XIII")
    comp, traj = evolve_trajectory(p, H, np.linspace(0, 10, 51))
    G = graph_complexity(traj, comp.distances_from(p))
    K = lanczos(H, p, component=comp).complexity(traj)
    assert np.abs(G - K).max() <= 1e-6


# --- short-time scaling --------------------------------------------------------


def test_short_time_two_level():
    st = short_time_scaling(parse("X"), qubit_z())
    assert st.slope == pytest.approx(2.0, abs=1e-3)
    assert st.prefactor == pytest.approx(4.0, rel=1e-6)
    assert st.neighbour_sum == pytest.approx(4.0)


def test_short_time_symmetry_flagged():
    H = random_hamiltonian(model_preset("matchgate", 3), np.random.default_rng(0))
    st = short_time_scaling(parse("ZZZ"), H)
    assert st.symmetric and st.prefactor == 0


def test_short_time_matchgate_random():
    rng = np.random.default_rng(17)
    for _ in range(10):
        H, p, comp = random_case(rng, "matchgate")
        st = short_time_scaling(p, H, component=comp)
        assert 1.95 <= st.slope <= 2.05
        assert st.prefactor == pytest.approx(st.neighbour_sum, rel=1e-6)
        assert st.prefactor <= st.bound * (1 + 1e-9)


# --- random Hamiltonians and sampled averages -------------------------------------


def test_random_hamiltonian_reproducible():
    gens = model_preset("universal", 3)
    a = random_hamiltonian(gens, np.random.default_rng(3))
    b = random_hamiltonian(gens, np.random.default_rng(3))
    assert a.coefficients == b.coefficients
    c = random_hamiltonian(gens, np.random.default_rng(3), 1.5, 1.5)
    assert set(c.coefficients) == {1.5}
    with pytest.raises(ContractError):
        random_hamiltonian(gens, np.random.default_rng(3), 2.0, 1.0)


def test_random_hamiltonian_distribution():
    gens = GeneratorSet(1, tuple([parse("X")]))
    rng = np.random.default_rng(99)
    draws = np.array([random_hamiltonian(gens, rng).coefficients[0] for _ in range(100_000)])
    width = 2 * np.pi
    mean, var = width / 2, width**2 / 12
    assert abs(draws.mean() - mean) <= 5 * np.sqrt(var / len(draws))
    var_se = np.sqrt((width**4 / 80 - var**2) / len(draws))
    assert abs(draws.var() - var) <= 5 * var_se


def test_sampled_graph_complexity_matches_long_time_average():
    gens = model_preset("matchgate", 3)
    p = parse("ZII")
    est = monte_carlo_graph_complexity(p, gens, 300, seed=12)
    assert est.agrees_with(average_graph_complexity(p, gens), sigmas=3)
