"""Generator sets, Lie closure, Pauli linear symmetries and the model catalog."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ContractError, DimensionError, ResourceLimitError
from .pauli import PauliString, anticommute_mask, commutes, parse

DEFAULT_CLOSURE_CAP = 2**26
DEFAULT_SYMMETRY_CAP = 2**16


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered, duplicate-free Pauli generators with optional real coefficients."""

    n: int
    generators: tuple[PauliString, ...]
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.n != self.n:
                raise DimensionError(f"generator {g} has {g.n} qubits, expected {self.n}")
            if g.is_identity():
                raise ContractError("identity is not allowed as a generator")
        if len({g.index for g in gens}) != len(gens):
            raise ContractError("duplicate generators")
        if self.coefficients is not None:
            coeffs = tuple(float(c) for c in self.coefficients)
            if len(coeffs) != len(gens):
                raise ContractError(f"{len(coeffs)} coefficients for {len(gens)} generators")
            object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_labels(cls, labels: Sequence[str], coefficients=None) -> "GeneratorSet":
        gens = tuple(parse(s) for s in labels)
        if not gens:
            raise ContractError("empty generator set")
        return cls(gens[0].n, gens, None if coefficients is None else tuple(coefficients))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    @property
    def indices(self) -> np.ndarray:
        return np.array([g.index for g in self.generators], dtype=np.uint64)

    @property
    def x_masks(self) -> np.ndarray:
        return np.array([g.x for g in self.generators], dtype=np.uint64)

    @property
    def z_masks(self) -> np.ndarray:
        return np.array([g.z for g in self.generators], dtype=np.uint64)

    def with_coefficients(self, coefficients) -> "GeneratorSet":
        return GeneratorSet(self.n, self.generators, tuple(coefficients))

    def to_dict(self) -> dict:
        out = {"n": self.n, "generators": self.labels}
        if self.coefficients is not None:
            out["coefficients"] = list(self.coefficients)
        return out


def load_model_file(path) -> GeneratorSet:
    """Read ``{"n": int, "generators": [...], "coefficients": [...]?}``."""
    data = json.loads(Path(path).read_text())
    unknown = set(data) - {"n", "generators", "coefficients"}
    if unknown:
        raise ContractError(f"unknown keys in model file: {sorted(unknown)}")
    gens = GeneratorSet.from_labels(data["generators"], data.get("coefficients"))
    if "n" in data and data["n"] != gens.n:
        raise DimensionError(f"model file says n={data['n']} but generators have {gens.n} qubits")
    return gens


# --- model catalog -------------------------------------------------------------


def _site_ops(n, ops: dict[int, str]) -> PauliString:
    chars = ["I"] * n
    for site, ch in ops.items():
        chars[site - 1] = ch
    return parse("".join(chars))


def _onsite(n, ch):
    return [_site_ops(n, {i: ch}) for i in range(1, n + 1)]


def _bond(n, a, b):
    return [_site_ops(n, {i: a, i + 1: b}) for i in range(1, n)]


def _matchgate(n):
    return _onsite(n, "Z") + _bond(n, "X", "X")


def _universal(n):
    return _onsite(n, "X") + _onsite(n, "Y") + _bond(n, "Z", "Z")


def _xy_bx(n):
    return _bond(n, "X", "X") + _bond(n, "Y", "Y") + _onsite(n, "X")


def _ising_b(n):
    gens = _onsite(n, "X")
    for i in range(1, n):
        gens += [
            _site_ops(n, {i: "X", i + 1: "X"}),
            _site_ops(n, {i: "X", i + 1: "Y"}),
            _site_ops(n, {i: "X", i + 1: "Z"}),
            _site_ops(n, {i + 1: "Y"}),
            _site_ops(n, {i + 1: "Z"}),
        ]
    return gens


def _orthogonal(n):
    return _bond(n, "X", "Y") + _bond(n, "Y", "X") + _bond(n, "Y", "Z") + _bond(n, "Z", "Y")


def _symplectic(n):
    # X_1 Y_2 is left out: it does not preserve the form iY (x) I...I and would
    # close to the full su(2^n)
    return _onsite(n, "Y") + _bond(n, "X", "Y")[1:] + _bond(n, "Y", "X") + [
        _site_ops(n, {1: "X"}),
        _site_ops(n, {1: "Z", 2: "Z"}),
    ]


PRESETS = {
    "matchgate": _matchgate,
    "universal": _universal,
    "xy_bx": _xy_bx,
    "ising_b": _ising_b,
    "orthogonal": _orthogonal,
    "symplectic": _symplectic,
}
PRESET_MIN_N = {name: 2 for name in PRESETS}


def model_preset(name: str, n: int) -> GeneratorSet:
    try:
        build = PRESETS[name]
    except KeyError:
        raise ContractError(f"unknown model {name!r}; choose from {sorted(PRESETS)}") from None
    if n < PRESET_MIN_N[name]:
        raise ContractError(f"model {name!r} needs n >= {PRESET_MIN_N[name]}, got {n}")
    return GeneratorSet(n, tuple(build(n)))


def resolve_model(model: str, n: int | None = None) -> GeneratorSet:
    """Preset name (needs ``n``) or path to a JSON model file."""
    if model in PRESETS:
        if n is None:
            raise ContractError(f"model {model!r} needs a qubit count")
        return model_preset(model, n)
    path = Path(model)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise ContractError(f"model file {model!r} not found")
        gens = load_model_file(path)
        if n is not None and n != gens.n:
            raise DimensionError(f"--n {n} disagrees with model file ({gens.n} qubits)")
        return gens
    raise ContractError(f"unknown model {model!r}; choose from {sorted(PRESETS)} or give a .json file")


# --- Lie closure ---------------------------------------------------------------


@dataclass(frozen=True)
class DlaBasis:
    """Pauli strings spanning the dynamical Lie algebra (as sorted dense indices)."""

    n: int
    indices: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.indices)

    @property
    def strings(self) -> list[PauliString]:
        return [PauliString.from_index(int(i), self.n) for i in self.indices]

    def __contains__(self, p: PauliString) -> bool:
        k = np.searchsorted(self.indices, p.index)
        return bool(k < len(self.indices) and self.indices[k] == p.index)

    def is_closed(self) -> bool:
        """Re-check closure over all pairs."""
        idx = self.indices
        for a in idx.tolist():
            imgs = idx[anticommute_mask(idx, PauliString.from_index(a, self.n))] ^ np.uint64(a)
            if not np.all(np.isin(imgs, idx)):
                return False
        return True


def lie_closure(gens: GeneratorSet, cap: int = DEFAULT_CLOSURE_CAP) -> DlaBasis:
    """Smallest set of Pauli strings containing ``gens`` and closed under commutators."""
    if len(gens) == 0:
        raise ContractError("empty generator set")
    n = gens.n
    known = np.unique(gens.indices)
    frontier = known
    while frontier.size:
        found = []
        for a in frontier.tolist():
            mask = anticommute_mask(known, PauliString.from_index(a, n))
            found.append(known[mask] ^ np.uint64(a))
        fresh = np.setdiff1d(np.concatenate(found), known) if found else frontier[:0]
        if known.size + fresh.size > cap:
            raise ResourceLimitError(
                f"Lie closure exceeded cap of {cap} strings", cap=cap, count=int(known.size + fresh.size)
            )
        known = np.union1d(known, fresh)
        frontier = fresh
    return DlaBasis(n, known)


# --- Pauli linear symmetries (GF(2) nullspace) ---------------------------------


def _nullspace_gf2(rows: list[int], nbits: int) -> list[int]:
    """Basis of {v : popcount(row & v) even for every row}, vectors as ints."""
    pivots = {}  # pivot bit -> reduced row
    for r in rows:
        for bit, pr in pivots.items():
            if (r >> bit) & 1:
                r ^= pr
        if r == 0:
            continue
        bit = r.bit_length() - 1
        for b, pr in list(pivots.items()):
            if (pr >> bit) & 1:
                pivots[b] = pr ^ r
        pivots[bit] = r
    basis = []
    for free in range(nbits):
        if free in pivots:
            continue
        v = 1 << free
        for bit, pr in pivots.items():
            if (pr >> free) & 1:
                v |= 1 << bit
        basis.append(v)
    return basis


def pauli_symmetry_basis(gens: GeneratorSet) -> list[PauliString]:
    """GF(2) basis of the Pauli strings commuting with every generator."""
    n = gens.n
    # unknown bit layout: low n bits = L.x, high n bits = L.z
    rows = [g.z | (g.x << n) for g in gens]
    low = (1 << n) - 1
    return [PauliString(n, v & low, v >> n) for v in _nullspace_gf2(rows, 2 * n)]


def pauli_linear_symmetries(gens: GeneratorSet, cap: int = DEFAULT_SYMMETRY_CAP) -> list[PauliString]:
    """Every Pauli string (identity included) commuting with all generators, sorted by index."""
    basis = pauli_symmetry_basis(gens)
    if 2 ** len(basis) > cap:
        raise ResourceLimitError(
            f"{2 ** len(basis)} Pauli symmetries exceed enumeration cap {cap}", cap=cap, count=2 ** len(basis)
        )
    elems = {0}
    for b in basis:
        elems |= {e ^ b.index for e in elems}
    out = sorted(elems)
    for e in out:
        p = PauliString.from_index(e, gens.n)
        assert all(commutes(p, g) for g in gens)
    return [PauliString.from_index(e, gens.n) for e in out]


# --- frustration graph ---------------------------------------------------------


@dataclass(frozen=True)
class FrustrationGraph:
    """Anticommutation graph on generator indices."""

    size: int
    edges: tuple[tuple[int, int], ...]

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.size
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def frustration_graph(gens: GeneratorSet) -> FrustrationGraph:
    g = gens.generators
    edges = tuple(
        (a, b) for a in range(len(g)) for b in range(a + 1, len(g)) if not commutes(g[a], g[b])
    )
    return FrustrationGraph(len(g), edges)


def is_degree_regular(fg: FrustrationGraph) -> bool:
    return len(set(fg.degrees)) <= 1


def spans_single_component(gens: GeneratorSet) -> bool:
    """Heuristic simplicity check: the closure is one commutator-graph component.

    Uses the closure itself as generating set; a non-simple algebra splits its
    strings into several components.
    """
    from .graph import component_of

    dla = lie_closure(gens)
    closed = GeneratorSet(gens.n, tuple(dla.strings))
    comp = component_of(dla.strings[0], closed)
    return comp.size == dla.dimension
