"""Exact chaos diagnostics counted on the commutator graph, plus Monte-Carlo checks.

Counting results are exact rationals.  The samplers build dense ``2**n``
unitaries and are limited to ``n <= 5``.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh

from .dla import GeneratorSet, pauli_symmetry_basis
from .errors import ContractError
from .graph import CommutatorGraph, Component, component_of
from .pauli import PauliString, anticommute_mask, commutes, multiply, signed_permutation

MAX_DENSE_QUBITS = 5
CHUNK_TRIALS = 32


class SymmetryCountWarning(UserWarning):
    """Isolated-vertex count differs from the number of Pauli symmetries."""

    def __init__(self, isolated: int, symmetries: int):
        super().__init__(
            f"{isolated} isolated vertices but {symmetries} Pauli linear symmetries; "
            "the frame potential formula assumes they agree"
        )
        self.isolated = isolated
        self.symmetries = symmetries


def _component(p: PauliString, source) -> Component:
    if isinstance(source, CommutatorGraph):
        return source.component_containing(p)
    if isinstance(source, GeneratorSet):
        return component_of(p, source)
    raise TypeError(f"expected CommutatorGraph or GeneratorSet, got {type(source).__name__}")


def _generators(source) -> GeneratorSet:
    return source.generators if isinstance(source, CommutatorGraph) else source


def _anticommuting(comp: Component, p: PauliString) -> int:
    return int(np.count_nonzero(anticommute_mask(comp.members, p)))


# --- exact counting ------------------------------------------------------------


def frame_potential_2(graph: CommutatorGraph) -> int:
    """Second frame potential: isolated vertices times components.

    Emits :class:`SymmetryCountWarning` when the isolated vertices are not
    exactly the Pauli symmetries; the product is returned regardless.
    """
    if graph.weight_cap is not None:
        raise ContractError("frame potential needs the uncapped graph")
    nsym = 2 ** len(pauli_symmetry_basis(graph.generators))
    if nsym != graph.isolated_count:
        warnings.warn(SymmetryCountWarning(graph.isolated_count, nsym), stacklevel=2)
    return graph.isolated_count * graph.num_components


@dataclass(frozen=True)
class OtocResult:
    """Average OTOC ``1 - 2 a / |C|`` with the counts behind it.

    ``size_v`` / ``anti_v`` count the component of V and its members
    anticommuting with W; ``size_w`` / ``anti_w`` are the mirrored counts.
    """

    value: Fraction
    size_v: int
    anti_v: int
    size_w: int
    anti_w: int

    def __float__(self):
        return float(self.value)


def avg_otoc(V: PauliString, W: PauliString, source) -> OtocResult:
    """Average of ``(1/d) tr[W U^dag V U W U^dag V U]`` over the group.

    Computed from ``C(V)`` and, independently, from ``C(W)``; the two counts
    must give the same value.
    """
    cv, cw = _component(V, source), _component(W, source)
    av, aw = _anticommuting(cv, W), _anticommuting(cw, V)
    value = 1 - Fraction(2 * av, cv.size)
    mirrored = 1 - Fraction(2 * aw, cw.size)
    if value != mirrored:
        raise AssertionError(f"OTOC counts disagree: {value} from C(V), {mirrored} from C(W)")
    return OtocResult(value, cv.size, av, cw.size, aw)


def symcounting_check(V: PauliString, W: PauliString, source) -> bool:
    """Commuting and anticommuting fractions agree across ``C(V)`` and ``C(W)``."""
    cv, cw = _component(V, source), _component(W, source)
    av, aw = _anticommuting(cv, W), _anticommuting(cw, V)
    anti_ok = aw * cv.size == av * cw.size
    comm_ok = (cw.size - aw) * cv.size == (cv.size - av) * cw.size
    return anti_ok and comm_ok


def spread_expectation(V: PauliString, W: PauliString, source) -> Fraction:
    """Average of ``|tr[W U V U^dag]|**2``: ``d**2 / |C(V)|`` inside the component, else 0."""
    cv = _component(V, source)
    if W not in cv:
        return Fraction(0)
    return Fraction(4**V.n, cv.size)


@dataclass(frozen=True)
class GaussianRational:
    """Exact ``re + i im`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def from_phase(cls, k: int, scale: Fraction) -> "GaussianRational":
        return cls(*((scale, 0), (0, scale), (-scale, 0), (0, -scale))[k % 4])

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def _trace_phase(*ps: PauliString) -> int | None:
    """``tr[p1 p2 ...] = d * i**k``; returns ``k`` or None when the trace vanishes."""
    acc, k = ps[0], 0
    for p in ps[1:]:
        acc, ph = multiply(acc, p)
        k += ph.k
    return k % 4 if acc.is_identity() else None


def four_point_avg(P, Q, R, S, source) -> GaussianRational:
    """Group average of ``tr[P U Q U^dag R U S U^dag]``.

    Nonzero only when ``RP`` and ``QS`` are both proportional to one Pauli
    symmetry ``L``; then it equals
    ``(1/d) tr[Q L S] tr[P R L] (1 - 2 a / |C_Q|)`` with ``a`` the members of
    ``C_Q`` anticommuting with ``P``.
    """
    n = P.n
    gens = _generators(source)
    L, _ = multiply(R, P)
    if multiply(Q, S)[0] != L or not all(commutes(L, g) for g in gens):
        return GaussianRational(Fraction(0))
    k1, k2 = _trace_phase(Q, L, S), _trace_phase(P, R, L)
    cq = _component(Q, source)
    factor = 1 - Fraction(2 * _anticommuting(cq, P), cq.size)
    return GaussianRational.from_phase(k1 + k2, (1 << n) * factor)


# --- Monte-Carlo sampling ------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    """How group elements are drawn.

    ``mode="circuit"``: ``depth`` layers of ``exp(-i theta g)`` over every
    generator with ``theta`` uniform on ``[0, 2 pi)``; ``depth=None`` means
    ``50 * len(gens)``.  ``mode="hamiltonian"``: ``exp(-i sum_j c_j g_j)`` with
    ``c_j`` uniform on ``[coef_low, coef_high)``.
    """

    mode: str = "circuit"
    depth: int | None = None
    coef_low: float = 0.0
    coef_high: float = 2 * math.pi

    def __post_init__(self):
        if self.mode not in ("circuit", "hamiltonian"):
            raise ContractError(f"sampler mode must be 'circuit' or 'hamiltonian', got {self.mode!r}")
        if self.depth is not None and self.depth < 0:
            raise ContractError("circuit depth must be non-negative")

    def resolved(self, gens: GeneratorSet) -> "SamplerConfig":
        if self.mode == "circuit" and self.depth is None:
            return SamplerConfig("circuit", 50 * len(gens), self.coef_low, self.coef_high)
        return self

    def describe(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: complex | float
    std: float
    count: int
    sampler: dict

    def __post_init__(self):
        if self.count < 1:
            raise ContractError("need at least one sample")

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.count)

    def agrees_with(self, value, sigmas: float = 3.0, floor: float = 1e-9) -> bool:
        return abs(complex(self.mean) - complex(value)) <= max(sigmas * self.stderr, floor)

    @classmethod
    def from_samples(cls, samples: np.ndarray, sampler: dict) -> "MonteCarloEstimate":
        samples = np.asarray(samples)
        mean = samples.mean()
        if np.iscomplexobj(samples) and np.all(np.abs(samples.imag) < 1e-12):
            samples, mean = samples.real, float(mean.real)
        elif not np.iscomplexobj(samples):
            mean = float(mean)
        std = float(np.sqrt(np.mean(np.abs(samples - mean) ** 2) * len(samples) / max(len(samples) - 1, 1)))
        return cls(mean, std, len(samples), sampler)


def _check_dense(n):
    if n > MAX_DENSE_QUBITS:
        raise ContractError(f"dense sampling supports n <= {MAX_DENSE_QUBITS}, got {n}")


def _apply_left(p: PauliString, U: np.ndarray) -> np.ndarray:
    """``p @ U`` for a batch ``U`` of shape (..., d, d)."""
    perm, phase = signed_permutation(p)
    out = np.empty_like(U)
    out[..., perm, :] = phase[:, None] * U
    return out


def sample_group_elements(
    gens: GeneratorSet, count: int, rng: np.random.Generator, config: SamplerConfig = SamplerConfig()
) -> np.ndarray:
    """``count`` dense unitaries of shape (count, d, d)."""
    _check_dense(gens.n)
    config = config.resolved(gens)
    d = 1 << gens.n
    if config.mode == "hamiltonian":
        mats = np.stack([g.to_matrix() for g in gens])
        coeffs = rng.uniform(config.coef_low, config.coef_high, size=(count, len(gens)))
        out = np.empty((count, d, d), dtype=complex)
        for t in range(count):
            w, v = eigh(np.tensordot(coeffs[t], mats, axes=1))
            out[t] = (v * np.exp(-1j * w)) @ v.conj().T
        return out
    U = np.broadcast_to(np.eye(d, dtype=complex), (count, d, d)).copy()
    for _ in range(config.depth):
        thetas = rng.uniform(0.0, 2 * math.pi, size=(len(gens), count))
        for g, th in zip(gens, thetas):
            # exp(-i th g) = cos th - i sin th g
            U = np.cos(th)[:, None, None] * U - 1j * np.sin(th)[:, None, None] * _apply_left(g, U)
    return U


def sample_group_element(
    gens: GeneratorSet, depth: int | None, rng: np.random.Generator
) -> np.ndarray:
    """One dense unitary from a depth-``depth`` random generator circuit."""
    return sample_group_elements(gens, 1, rng, SamplerConfig("circuit", depth))[0]


def _run_chunks(statistic, gens, trials, config, seed, threads):
    """Evaluate ``statistic(U_batch)`` over fixed-size chunks with independent streams.

    Chunking and per-chunk seeds depend only on ``trials`` and ``seed``, so the
    result is the same for any ``threads``.
    """
    if trials < 1:
        raise ContractError("trials must be positive")
    sizes = [CHUNK_TRIALS] * (trials // CHUNK_TRIALS)
    if trials % CHUNK_TRIALS:
        sizes.append(trials % CHUNK_TRIALS)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def work(i):
        rng = np.random.Generator(np.random.PCG64(seeds[i]))
        return statistic(sample_group_elements(gens, sizes[i], rng, config), rng)

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    return np.concatenate(parts)


def _dag(U):
    return np.conj(np.swapaxes(U, -1, -2))


def monte_carlo_four_point(P, Q, R, S, gens, trials, config=SamplerConfig(), seed=0, threads=1):
    """Sample mean of ``tr[P U Q U^dag R U S U^dag]``."""
    mats = [p.to_matrix() for p in (P, Q, R, S)]

    def stat(U, _rng):
        Ud = _dag(U)
        UQ = U @ mats[1] @ Ud
        US = U @ mats[3] @ Ud
        return np.trace(mats[0] @ UQ @ mats[2] @ US, axis1=-2, axis2=-1)

    samples = _run_chunks(stat, gens, trials, config, seed, threads)
    return MonteCarloEstimate.from_samples(samples, config.resolved(gens).describe())


def monte_carlo_otoc(V, W, gens, trials, config=SamplerConfig(), seed=0, threads=1):
    """Sample mean of ``(1/d) tr[W V_t W V_t]`` with ``V_t = U^dag V U``."""
    d = 1 << V.n
    Vm, Wm = V.to_matrix(), W.to_matrix()

    def stat(U, _rng):
        Vt = _dag(U) @ Vm @ U
        return np.trace(Wm @ Vt @ Wm @ Vt, axis1=-2, axis2=-1).real / d

    samples = _run_chunks(stat, gens, trials, config, seed, threads)
    return MonteCarloEstimate.from_samples(samples, config.resolved(gens).describe())


def monte_carlo_spread(V, W, gens, trials, config=SamplerConfig(), seed=0, threads=1):
    """Sample mean of ``|tr[W U V U^dag]|**2``."""
    Vm, Wm = V.to_matrix(), W.to_matrix()

    def stat(U, _rng):
        return np.abs(np.trace(Wm @ U @ Vm @ _dag(U), axis1=-2, axis2=-1)) ** 2

    samples = _run_chunks(stat, gens, trials, config, seed, threads)
    return MonteCarloEstimate.from_samples(samples, config.resolved(gens).describe())


def monte_carlo_frame_potential(gens, trials, config=SamplerConfig(), seed=0, threads=1):
    """Sample mean of ``|tr[U V^dag]|**4`` over independent pairs (U, V)."""

    def stat(U, _rng):
        half = len(U) // 2
        if half == 0:
            return np.zeros(0)
        A, B = U[:half], U[half : 2 * half]
        return np.abs(np.trace(A @ _dag(B), axis1=-2, axis2=-1)) ** 4

    samples = _run_chunks(stat, gens, 2 * trials, config, seed, threads)
    return MonteCarloEstimate.from_samples(samples, config.resolved(gens).describe())


def four_point_variance(P, Q, R, S, gens, trials, config=SamplerConfig(), seed=0):
    """Empirical variance of the normalized single-shot value ``(1/d) tr[P U Q U^dag R U S U^dag]``."""
    est = monte_carlo_four_point(P, Q, R, S, gens, trials, config, seed)
    return (est.std / (1 << P.n)) ** 2


def monte_carlo_otoc_many(Vs, W, gens, trials, config=SamplerConfig(), seed=0, threads=1):
    """:func:`monte_carlo_otoc` for several ``V`` sharing the same sampled unitaries."""
    d = 1 << W.n
    Wm = W.to_matrix()
    Vms = [V.to_matrix() for V in Vs]

    def stat(U, _rng):
        Ud = _dag(U)
        cols = []
        for Vm in Vms:
            Vt = Ud @ Vm @ U
            cols.append(np.trace(Wm @ Vt @ Wm @ Vt, axis1=-2, axis2=-1).real / d)
        return np.stack(cols, axis=1)

    samples = _run_chunks(stat, gens, trials, config, seed, threads)
    desc = config.resolved(gens).describe()
    return [MonteCarloEstimate.from_samples(samples[:, i], desc) for i in range(len(Vs))]
