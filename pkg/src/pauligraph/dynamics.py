"""Heisenberg evolution restricted to one commutator-graph component.

An evolved string ``p_t = e^{iHt} p e^{-iHt}`` stays inside the component of
``p``.  Its coefficients ``c_q = tr[p_t q] / d`` are real and evolve under the
real antisymmetric matrix ``A`` of ``i[H, .]`` on that component, so the flow
is orthogonal and ``sum c_q**2 = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.linalg import eigh, expm

from .dla import GeneratorSet
from .errors import ContractError, ResourceLimitError
from .graph import CommutatorGraph, Component, component_of
from .pauli import PauliString, signed_permutation

DENSE_LIMIT = 2000
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
LANCZOS_TOL = 1e-10


def _hamiltonian(H: GeneratorSet) -> np.ndarray:
    if H.coefficients is None:
        raise ContractError("Hamiltonian needs coefficients; use GeneratorSet.with_coefficients")
    return np.asarray(H.coefficients, dtype=float)


def _resolve_component(p: PauliString, H: GeneratorSet, component) -> Component:
    if component is None:
        return component_of(p, H)
    if isinstance(component, CommutatorGraph):
        component = component.component_containing(p)
    if p not in component:
        raise ContractError(f"{p} is not in the given component")
    return component


def random_hamiltonian(gens: GeneratorSet, rng: np.random.Generator, low: float = 0.0, high: float = 2 * math.pi):
    """Generators with i.i.d. coefficients uniform on ``[low, high)``."""
    if high < low:
        raise ContractError("coefficient range must have high >= low")
    coeffs = rng.uniform(low, high, size=len(gens)) if high > low else np.full(len(gens), low)
    return gens.with_coefficients(coeffs)


@dataclass(frozen=True)
class Liouvillian:
    """Sparse real antisymmetric matrix of ``p -> i[H, p]`` on a component basis."""

    component: Component
    matrix: sp.csr_matrix

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def column(self, p: PauliString) -> np.ndarray:
        return self.matrix[:, self.component.position(p)].toarray().ravel()


def build_liouvillian(H: GeneratorSet, component: Component) -> Liouvillian:
    """``A[q, p] = -2 s c_g`` for every edge ``p -> q`` with ``[g, p] = 2 i s q``."""
    coeffs = _hamiltonian(H)
    if H.generators != component.generators.generators:
        # component built from a different ordering: rebuild against H
        component = Component(H, component.members, component.label, component.weight_cap)
    adj = component.adjacency
    rows = adj.indices
    cols = np.repeat(np.arange(component.size), np.diff(adj.indptr))
    vals = -2.0 * adj.sign * coeffs[adj.gen]
    m = sp.csr_matrix((vals, (rows, cols)), shape=(component.size, component.size))
    m.sum_duplicates()
    return Liouvillian(component, m)


@dataclass(frozen=True)
class OperatorVector:
    """Coefficients of an operator in the Pauli basis of one component."""

    component: Component
    coefficients: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    @property
    def norm_drift(self) -> float:
        return abs(self.norm - 1.0)

    def coefficient(self, q: PauliString) -> float:
        i = self.component.local_index(q.index)[0]
        return 0.0 if i < 0 else float(self.coefficients[i])

    def as_dict(self, tol: float = 0.0) -> dict[str, float]:
        labels = self.component.labels()
        return {s: float(c) for s, c in zip(labels, self.coefficients) if abs(c) > tol}


def _unit(component: Component, p: PauliString) -> np.ndarray:
    v = np.zeros(component.size)
    v[component.position(p)] = 1.0
    return v


def _propagate(L: Liouvillian, v0: np.ndarray, times: np.ndarray, method: str) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if method in ("expm", "spectral") and L.size > DENSE_LIMIT:
        raise ResourceLimitError(
            f"component of size {L.size} is above the dense limit {DENSE_LIMIT}; use method='ode'",
            cap=DENSE_LIMIT,
            count=L.size,
        )
    if method == "ode":
        A = L.matrix
        out = np.empty((len(times), L.size))
        pos = times != 0
        out[~pos] = v0
        if pos.any():
            order = np.argsort(times[pos])
            ts = times[pos][order]
            sol = solve_ivp(
                lambda _t, y: A @ y,
                (0.0, ts[-1]),
                v0,
                method="DOP853",
                t_eval=ts,
                rtol=ODE_RTOL,
                atol=ODE_ATOL,
            )
            if not sol.success:
                raise RuntimeError(f"ODE integration failed: {sol.message}")
            block = np.empty((len(ts), L.size))
            block[order] = sol.y.T
            out[pos] = block
        return out
    if method == "expm":
        A = L.dense()
        return np.stack([expm(t * A) @ v0 for t in times])
    if method == "spectral":
        # i A is Hermitian: exp(tA) = V exp(-i t w) V^dag
        w, V = eigh(1j * L.dense())
        a = V.conj().T @ v0
        return np.real(np.exp(-1j * np.outer(times, w)) * a @ V.T)
    raise ContractError(f"unknown method {method!r}; choose ode, expm or spectral")


def evolve(p: PauliString, H: GeneratorSet, t: float, method: str = "ode", component=None) -> OperatorVector:
    """Coefficients of ``e^{iHt} p e^{-iHt}`` on the component of ``p``."""
    comp = _resolve_component(p, H, component)
    L = build_liouvillian(H, comp)
    return OperatorVector(L.component, _propagate(L, _unit(L.component, p), [t], method)[0])


def evolve_trajectory(p: PauliString, H: GeneratorSet, times, method: str = "ode", component=None):
    """``(component, coefficients)`` with one row of coefficients per time."""
    comp = _resolve_component(p, H, component)
    L = build_liouvillian(H, comp)
    return L.component, _propagate(L, _unit(L.component, p), times, method)


# --- dense oracle --------------------------------------------------------------


def pauli_coefficients(M: np.ndarray, strings) -> np.ndarray:
    """``tr[M q] / d`` for each Pauli string ``q``."""
    d = M.shape[0]
    out = np.empty(len(strings), dtype=complex)
    rows = np.arange(d)
    for i, q in enumerate(strings):
        perm, phase = signed_permutation(q)
        out[i] = np.sum(M[rows, perm] * phase) / d
    return out


def heisenberg_dense(p: PauliString, H: GeneratorSet, t: float) -> np.ndarray:
    """Dense ``e^{iHt} p e^{-iHt}``."""
    coeffs = _hamiltonian(H)
    Hm = sum(c * g.to_matrix() for c, g in zip(coeffs, H))
    w, V = eigh(Hm)
    U = (V * np.exp(1j * t * w)) @ V.conj().T
    return U @ p.to_matrix() @ U.conj().T


# --- complexities --------------------------------------------------------------


def graph_complexity(coefficients: np.ndarray, distances: np.ndarray) -> np.ndarray:
    """``sum_q l(p, q) c_q**2``; works on one vector or a stack of them."""
    return np.asarray(np.abs(coefficients) ** 2 @ distances, dtype=float)


def average_graph_complexity(p: PauliString, source) -> Fraction:
    """Long-time average ``(1/|C|) sum_q l(p, q)`` of the graph complexity."""
    if isinstance(source, Component):
        comp = source
    elif isinstance(source, CommutatorGraph):
        comp = source.component_containing(p)
    else:
        comp = component_of(p, source)
    dist = comp.distances_from(p)
    return Fraction(int(dist.sum()), comp.size)


def path_average_complexity(size: int, j: int) -> Fraction:
    """Mean distance from vertex ``j`` (1-based) of a path with ``size`` vertices."""
    if not 1 <= j <= size:
        raise ContractError(f"vertex {j} outside path of {size} vertices")
    return Fraction(j * (j - 1) + (size - j) * (size - j + 1), 2 * size)


@dataclass(frozen=True)
class KrylovChain:
    """Lanczos coefficients ``b[0] = b_1, ...`` and orthonormal basis rows ``basis[n] = O_n``."""

    component: Component
    b: np.ndarray
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def orthonormality_error(self) -> float:
        G = self.basis @ self.basis.T
        return float(np.abs(G - np.eye(len(G))).max())

    def amplitudes(self, coefficients: np.ndarray) -> np.ndarray:
        """``phi_n = <O_n, p_t>`` for one coefficient vector or a stack."""
        return coefficients @ self.basis.T

    def complexity(self, coefficients: np.ndarray) -> np.ndarray:
        phi = self.amplitudes(coefficients)
        return np.asarray(phi**2 @ np.arange(self.dimension), dtype=float)


def lanczos(H: GeneratorSet, p: PauliString, tol: float = LANCZOS_TOL, component=None) -> KrylovChain:
    """Krylov basis of ``p`` under ``[H, .]`` with full reorthogonalization."""
    comp = _resolve_component(p, H, component)
    L = build_liouvillian(H, comp)
    A = L.matrix
    basis = [_unit(L.component, p)]
    bs = []
    while len(basis) < L.size:
        w = A @ basis[-1]
        Q = np.array(basis)
        for _ in range(2):
            w = w - Q.T @ (Q @ w)
        b = float(np.linalg.norm(w))
        if b <= tol:
            break
        bs.append(b)
        basis.append(w / b)
    return KrylovChain(L.component, np.array(bs), np.array(basis))


def krylov_complexity(chain: KrylovChain, H: GeneratorSet, p: PauliString, t, method: str = "ode"):
    """``K(p_t) = sum_n n |phi_n(t)|**2`` at one time or an array of times."""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    _, traj = evolve_trajectory(p, H, times, method, chain.component)
    k = chain.complexity(traj)
    return k if np.ndim(t) else float(k[0])


# --- short-time behaviour ------------------------------------------------------


@dataclass(frozen=True)
class ShortTimeScaling:
    """Fit of ``G(p_t)`` at small ``t``.

    ``slope`` is the log-log exponent; ``prefactor`` the intercept of
    ``G/t**2 = a + b t**2``; ``neighbour_sum`` is ``sum_{q in N1(p)} A_qp**2``;
    ``bound`` is ``|N1(p)| (||[H, p]||_1 / d)**2`` (None when n > 3).
    """

    times: np.ndarray
    values: np.ndarray
    slope: float
    prefactor: float
    neighbour_sum: float
    neighbours: int
    bound: float | None
    symmetric: bool = False


def short_time_scaling(p: PauliString, H: GeneratorSet, points: int = 12, component=None) -> ShortTimeScaling:
    comp = _resolve_component(p, H, component)
    L = build_liouvillian(H, comp)
    col = L.column(p)
    nbrs = int(np.count_nonzero(col))
    if nbrs == 0:
        z = np.zeros(points)
        return ShortTimeScaling(z, z, 0.0, 0.0, 0.0, 0, 0.0, symmetric=True)
    scale = 2 * float(np.sum(np.abs(_hamiltonian(H))))
    times = np.geomspace(1e-3, 1e-2, points) / scale
    dist = L.component.distances_from(p)
    if L.size <= DENSE_LIMIT:
        traj = _propagate(L, _unit(L.component, p), times, "spectral")
    else:
        traj = np.stack([sp.linalg.expm_multiply(t * L.matrix, _unit(L.component, p)) for t in times])
    G = graph_complexity(traj, dist)
    slope = float(np.polyfit(np.log(times), np.log(G), 1)[0])
    b, a = np.polyfit(times**2, G / times**2, 1)
    bound = None
    if p.n <= 3:
        Hm = sum(c * g.to_matrix() for c, g in zip(_hamiltonian(H), H))
        P = p.to_matrix()
        trace_norm = float(np.linalg.svd(Hm @ P - P @ Hm, compute_uv=False).sum())
        bound = nbrs * (trace_norm / (1 << p.n)) ** 2
    return ShortTimeScaling(times, G, slope, float(a), float(col @ col), nbrs, bound)


def monte_carlo_graph_complexity(p: PauliString, gens: GeneratorSet, trials: int, config=None, seed=0, threads=1):
    """Sample mean of ``G`` for ``U p U^dag`` with ``U`` drawn from the group."""
    from .metrics import MonteCarloEstimate, SamplerConfig, _run_chunks

    config = config or SamplerConfig()
    comp = component_of(p, gens)
    strings = comp.strings()
    dist = comp.distances_from(p).astype(float)
    P = p.to_matrix()

    def stat(U, _rng):
        out = np.empty(len(U))
        for i, u in enumerate(U):
            c = pauli_coefficients(u @ P @ u.conj().T, strings)
            out[i] = np.abs(c) ** 2 @ dist
        return out

    samples = _run_chunks(stat, gens, trials, config, seed, threads)
    return MonteCarloEstimate.from_samples(samples, config.resolved(gens).describe())
