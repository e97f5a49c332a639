"""Bit-level algebra of n-qubit Pauli strings.

A Pauli string on ``n`` qubits is stored as a pair of ``n``-bit masks
``(x, z)``.  Site ``k`` (1-based, leftmost in text form) corresponds to bit
``k - 1`` of each mask; a site carries X when only its x bit is set, Z when only
its z bit is set and Y when both are set.  The canonical operator attached to a
mask pair is the Hermitian string ``i**popcount(x & z) * X**x Z**z``, so phases
produced by products are always reported separately as a :class:`Phase`.

The dense index ``x * 2**n + z`` enumerates all ``4**n`` strings and is the
vertex id used by the graph code.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

MAX_QUBITS = 32

_CHAR_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_CHAR = {v: k for k, v in _CHAR_BITS.items()}


@dataclass(frozen=True, slots=True)
class Phase:
    """A fourth root of unity ``i**k``."""

    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.k + other.k)

    def conjugate(self) -> "Phase":
        return Phase(-self.k)

    def __complex__(self) -> complex:
        return (1 + 0j, 1j, -1 + 0j, -1j)[self.k]

    def __repr__(self) -> str:
        return ("+1", "+i", "-1", "-i")[self.k]


@dataclass(frozen=True, slots=True)
class PauliString:
    """Hermitian n-qubit Pauli string in symplectic (x, z) form."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError("mask bits set above position n-1")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        return parse(text)

    @classmethod
    def from_index(cls, index: int, n: int) -> "PauliString":
        if not 0 <= index < 4**n:
            raise ValueError(f"index {index} outside [0, 4**{n})")
        return cls(n, index >> n, index & ((1 << n) - 1))

    @classmethod
    def single(cls, n: int, site: int, char: str) -> "PauliString":
        """String with ``char`` at 1-based ``site`` and identity elsewhere."""
        if not 1 <= site <= n:
            raise ValueError(f"site {site} outside [1, {n}]")
        xb, zb = _CHAR_BITS[char]
        return cls(n, xb << (site - 1), zb << (site - 1))

    @property
    def index(self) -> int:
        return (self.x << self.n) | self.z

    @property
    def label(self) -> str:
        return format_pauli(self)

    @property
    def weight(self) -> int:
        return weight(self)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"

    def __mul__(self, other: "PauliString") -> tuple["PauliString", Phase]:
        return multiply(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix (site 1 is the most significant tensor factor)."""
        perm, phase = signed_permutation(self)
        d = 1 << self.n
        mat = np.zeros((d, d), dtype=complex)
        mat[perm, np.arange(d)] = phase
        return mat


def _check_same(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionError(f"qubit counts differ: {p.n} vs {q.n}")


def parse(text: str) -> PauliString:
    """Parse ``"XIZY"`` into a :class:`PauliString` (site 1 leftmost)."""
    text = text.strip().upper()
    n = len(text)
    if n == 0 or n > MAX_QUBITS:
        raise ValueError(f"Pauli label length must be in [1, {MAX_QUBITS}], got {n}")
    x = z = 0
    for site, ch in enumerate(text):
        try:
            xb, zb = _CHAR_BITS[ch]
        except KeyError:
            raise ValueError(f"bad Pauli character {ch!r} in {text!r}") from None
        x |= xb << site
        z |= zb << site
    return PauliString(n, x, z)


def format_pauli(p: PauliString) -> str:
    return "".join(_BITS_CHAR[((p.x >> k) & 1, (p.z >> k) & 1)] for k in range(p.n))


def label_of_index(index: int, n: int) -> str:
    return format_pauli(PauliString.from_index(index, n))


def weight(p: PauliString) -> int:
    return (p.x | p.z).bit_count()


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_same(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def multiply(p: PauliString, q: PauliString) -> tuple[PauliString, Phase]:
    """Return ``(r, w)`` with ``p @ q == w * r`` and ``r`` canonical."""
    _check_same(p, q)
    rx, rz = p.x ^ q.x, p.z ^ q.z
    k = (
        (p.x & p.z).bit_count()
        + (q.x & q.z).bit_count()
        + 2 * (p.z & q.x).bit_count()
        - (rx & rz).bit_count()
    )
    return PauliString(p.n, rx, rz), Phase(k)


def commutator_image(g: PauliString, p: PauliString) -> tuple[PauliString, int] | None:
    """Image of ``p`` under ``[g, .]``.

    Returns ``None`` when the strings commute, else ``(q, sign)`` meaning
    ``[g, p] = sign * 2i * q``.
    """
    r, phase = multiply(g, p)
    if phase.k % 2 == 0:
        return None
    # anticommuting: [g, p] = 2 g p = 2 i^k r with k odd
    return r, (1 if phase.k == 1 else -1)


def signed_permutation(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """``(perm, phase)`` such that ``p |b> = phase[b] |perm[b]>`` in the computational basis."""
    n = p.n
    # computational-basis bit for site k is bit n-k of the state index
    xs = sum(((p.x >> k) & 1) << (n - 1 - k) for k in range(n))
    zs = sum(((p.z >> k) & 1) << (n - 1 - k) for k in range(n))
    b = np.arange(1 << n, dtype=np.int64)
    sign = 1 - 2 * (np.bitwise_count(b & zs) & 1).astype(np.int64)
    phase = complex(Phase((p.x & p.z).bit_count())) * sign
    return b ^ xs, phase.astype(complex)


def all_paulis(n: int):
    """Iterate over every n-qubit string in dense-index order."""
    for idx in range(4**n):
        yield PauliString.from_index(idx, n)


# --- vectorised helpers over dense indices ------------------------------------


def split_index(indices: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    indices = np.asarray(indices, dtype=np.uint64)
    return indices >> np.uint64(n), indices & np.uint64((1 << n) - 1)


def anticommute_mask(indices: np.ndarray, p: PauliString) -> np.ndarray:
    """Boolean array: which of the strings given by dense ``indices`` anticommute with ``p``."""
    xs, zs = split_index(indices, p.n)
    par = np.bitwise_count(xs & np.uint64(p.z)) + np.bitwise_count(zs & np.uint64(p.x))
    return (par & 1).astype(bool)


def weights_of(indices: np.ndarray, n: int) -> np.ndarray:
    xs, zs = split_index(indices, n)
    return np.bitwise_count(xs | zs).astype(np.int64)


def commutator_images(g: PauliString, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised :func:`commutator_image` of ``g`` on many strings.

    Returns ``(mask, images, signs)``: which inputs anticommute with ``g``, the
    dense index of each image and its sign, so ``[g, p] = sign * 2i * image``.
    """
    indices = np.asarray(indices, dtype=np.uint64)
    mask = anticommute_mask(indices, g)
    px, pz = split_index(indices[mask], g.n)
    gx, gz = np.uint64(g.x), np.uint64(g.z)
    rx, rz = px ^ gx, pz ^ gz
    k = (
        (g.x & g.z).bit_count()
        + np.bitwise_count(px & pz).astype(np.int64)
        + 2 * np.bitwise_count(gz & px).astype(np.int64)
        - np.bitwise_count(rx & rz).astype(np.int64)
    ) % 4
    images = (rx << np.uint64(g.n)) | rz
    return mask, images, np.where(k == 1, 1, -1).astype(np.int8)
