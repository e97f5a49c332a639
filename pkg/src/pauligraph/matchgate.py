"""Closed forms for matchgate dynamics in the Majorana picture.

With the Jordan-Wigner modes ``c_{2k-1} = Z..Z X I..I`` and
``c_{2k} = Z..Z Y I..I`` (``k-1`` leading Z's), every Pauli string is, up to a
phase, a product of distinct Majoranas ``c_{i_1} ... c_{i_kappa}``.  Under the
matchgate generators ``{Z_i, X_i X_{i+1}}`` the component of such a product is
fixed by ``kappa`` and graph distance is ``sum_a |i_a - j_a|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .errors import ContractError, DimensionError
from .pauli import PauliString, multiply


@dataclass(frozen=True)
class MajoranaIndex:
    """Strictly increasing Majorana labels drawn from ``1..2n``."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ContractError(f"Majorana indices must be strictly increasing: {idx}")
        if idx and not (1 <= idx[0] and idx[-1] <= 2 * self.n):
            raise ContractError(f"Majorana indices must lie in [1, {2 * self.n}]: {idx}")

    @property
    def kappa(self) -> int:
        return len(self.indices)


def majorana_mode(n: int, i: int) -> PauliString:
    """Jordan-Wigner mode ``c_i`` on ``n`` qubits."""
    if not 1 <= i <= 2 * n:
        raise ContractError(f"mode {i} outside [1, {2 * n}]")
    k = (i + 1) // 2  # site carrying X or Y
    below = (1 << (k - 1)) - 1  # Z on sites 1..k-1
    site = 1 << (k - 1)
    if i % 2:
        return PauliString(n, site, below)
    return PauliString(n, site, below | site)


def majorana_to_pauli(m: MajoranaIndex) -> PauliString:
    """Pauli string proportional to ``c_{i_1} ... c_{i_kappa}`` (phase dropped)."""
    acc = PauliString.identity(m.n)
    for i in m.indices:
        acc, _ = multiply(acc, majorana_mode(m.n, i))
    return acc


def pauli_to_majorana(p: PauliString) -> MajoranaIndex:
    """Majorana labels whose product is proportional to ``p``."""
    chosen = []
    r = 0  # parity of modes chosen on sites to the right
    for k in range(p.n, 0, -1):
        x = (p.x >> (k - 1)) & 1
        z = (p.z >> (k - 1)) & 1
        b = z ^ r
        a = x ^ b
        if b:
            chosen.append(2 * k)
        if a:
            chosen.append(2 * k - 1)
        r ^= a ^ b
    return MajoranaIndex(p.n, tuple(sorted(chosen)))


def majorana_distance(a: MajoranaIndex, b: MajoranaIndex) -> int:
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")
    if a.kappa != b.kappa:
        raise ContractError(f"different components: kappa {a.kappa} vs {b.kappa}")
    return sum(abs(i - j) for i, j in zip(a.indices, b.indices))


def reflection_automorphism(m: MajoranaIndex) -> MajoranaIndex:
    """``c_{i_1}..c_{i_k} -> c_{2n-i_k+1}..c_{2n-i_1+1}``."""
    return MajoranaIndex(m.n, tuple(2 * m.n - i + 1 for i in reversed(m.indices)))


def _check_kappa(n, kappa):
    if not 0 <= kappa <= 2 * n:
        raise ContractError(f"kappa must be in [0, {2 * n}], got {kappa}")


def component_size(n: int, kappa: int) -> int:
    _check_kappa(n, kappa)
    return comb(2 * n, kappa)


def component_diameter(n: int, kappa: int) -> int:
    _check_kappa(n, kappa)
    return kappa * (2 * n - kappa)


def corner_average_gc(n: int, kappa: int) -> Fraction:
    """Long-time average graph complexity from ``c_1 ... c_kappa``."""
    _check_kappa(n, kappa)
    return Fraction(kappa * (2 * n - kappa), 2)


def avg_gc_closed_form(m: MajoranaIndex) -> Fraction:
    """Long-time average graph complexity from one vertex, for ``kappa <= 2``.

    ``kappa = 1`` is a path of ``2n`` vertices; ``kappa = 2`` is a triangular
    grid.  Larger ``kappa`` has no closed form here; use :func:`vertex_average`.
    """
    n, k = m.n, m.kappa
    if k == 0:
        return Fraction(0)
    if k == 1:
        (j,) = m.indices
        size = 2 * n
        return Fraction(j * (j - 1) + (size - j) * (size - j + 1), 2 * size)
    if k == 2:
        i1, i2 = m.indices
        num = (
            i1 * (i1 - 1) * (6 * n - i1 - 1)
            + (2 * n - i1) * (2 * n - i1 - 1) * (2 * n - i1 + 1)
            + i2 * (i2 - 1) * (i2 - 2)
            + (2 * n - i2) * (2 * n - i2 + 1) * (4 * n + i2 - 2)
        )
        return Fraction(num, 6 * n * (2 * n - 1))
    raise ContractError(f"no closed form for kappa={k}; use vertex_average")


def _tuples(n, kappa) -> np.ndarray:
    return np.array(list(combinations(range(1, 2 * n + 1), kappa)), dtype=np.int64).reshape(-1, kappa)


def vertex_average(m: MajoranaIndex) -> Fraction:
    """Mean Majorana distance from ``m`` to every vertex of its component."""
    S = _tuples(m.n, m.kappa)
    total = int(np.abs(S - np.array(m.indices, dtype=np.int64)).sum())
    return Fraction(total, len(S))


def vertex_averages(n: int, kappa: int) -> np.ndarray:
    """Mean distance from every vertex (rows in lexicographic Majorana order), as floats."""
    _check_kappa(n, kappa)
    S = _tuples(n, kappa)
    if kappa == 0:
        return np.zeros(1)
    D = np.abs(S[:, None, :] - S[None, :, :]).sum(axis=2)
    return D.mean(axis=1)


def path_all_pairs_average(n: int) -> Fraction:
    """Mean distance over ordered vertex pairs of the ``kappa = 1`` path: ``(4n**2 - 1) / (6n)``."""
    return Fraction(4 * n * n - 1, 6 * n)


def all_pairs_average(n: int, kappa: int) -> Fraction:
    """Mean distance over all ordered pairs of ``C_kappa``, by binomial counting."""
    _check_kappa(n, kappa)
    if kappa == 0:
        return Fraction(0)
    N = 2 * n
    total = 0
    for a in range(1, kappa + 1):
        # number of kappa-subsets whose a-th smallest element is i
        w = [0] + [comb(i - 1, a - 1) * comb(N - i, kappa - a) for i in range(1, N + 1)]
        for i in range(2, N + 1):
            wi = w[i]
            if wi == 0:
                continue
            total += wi * sum(w[j] * (i - j) for j in range(1, i))
    return Fraction(2 * total, comb(N, kappa) ** 2)


def kappa_n_constant(ns, kappas=None) -> float:
    """Largest ``avg_gc / (kappa * n)`` over all vertices, ``kappa >= 1``, and the given ``n``."""
    best = 0.0
    for n in ns:
        for k in kappas or range(1, 2 * n + 1):
            if k > 2 * n:
                continue
            best = max(best, float(vertex_averages(n, k).max()) / (k * n))
    return best


def table(n: int) -> list[dict]:
    """Per-``kappa`` summary: size, diameter, corner average and all-pairs average."""
    return [
        {
            "kappa": k,
            "n": n,
            "size": component_size(n, k),
            "diameter": component_diameter(n, k),
            "corner_avg": corner_average_gc(n, k),
            "all_pairs_avg": all_pairs_average(n, k),
        }
        for k in range(2 * n + 1)
    ]
