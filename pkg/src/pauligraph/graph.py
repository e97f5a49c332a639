"""Commutator graph over the 4**n Pauli strings.

Vertices are dense Pauli indices; ``p`` and ``q`` are joined when some
generator ``g`` has ``[g, p]`` proportional to ``q`` (equivalently ``g``
anticommutes with ``p`` and ``q = g p`` up to phase).  The full graph is never
stored: components come from union-find over the implicit edge set, and
adjacency is built lazily per component.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _backend
from .dla import GeneratorSet, pauli_linear_symmetries
from .errors import ContractError, ResourceLimitError
from .pauli import (
    PauliString,
    anticommute_mask,
    commutator_images,
    commutes,
    label_of_index,
)

MAX_FULL_QUBITS = 13
DEFAULT_COMPONENT_CAP = 2**24
MAX_MATERIALIZE_QUBITS = 3
TWIN_EDGE_SAMPLES = 10_000


def _check_weight_cap(weight_cap, n):
    if weight_cap is not None and not 0 <= weight_cap <= n:
        raise ContractError(f"weight cap must be in [0, {n}], got {weight_cap}")


@dataclass(frozen=True)
class Adjacency:
    """CSR adjacency of one component in local (member-position) indices.

    ``gen[k]`` is the generator position and ``sign[k]`` the commutator sign of
    edge ``k``: ``[g, members[row]] = sign * 2i * members[indices[k]]``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    gen: np.ndarray
    sign: np.ndarray

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def neighbours(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]


class Component:
    """One connected component, stored as its sorted dense indices."""

    def __init__(self, generators: GeneratorSet, members, label=None, weight_cap=None):
        self.generators = generators
        self.members = np.sort(np.asarray(members, dtype=np.uint64))
        self.label = label
        self.weight_cap = weight_cap

    def __repr__(self):
        return f"Component(label={self.label}, size={self.size})"

    def __len__(self):
        return self.size

    @property
    def n(self) -> int:
        return self.generators.n

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def isolated(self) -> bool:
        return self.size == 1

    @property
    def smallest(self) -> int:
        return int(self.members[0])

    def strings(self) -> list[PauliString]:
        return [PauliString.from_index(int(i), self.n) for i in self.members]

    def labels(self) -> list[str]:
        return [label_of_index(int(i), self.n) for i in self.members]

    def local_index(self, indices) -> np.ndarray:
        """Position of each dense index in ``members``; -1 when absent."""
        indices = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
        pos = np.searchsorted(self.members, indices)
        pos = np.minimum(pos, self.size - 1)
        return np.where(self.members[pos] == indices, pos, -1).astype(np.int64)

    def __contains__(self, p: PauliString) -> bool:
        return bool(self.local_index(p.index)[0] >= 0)

    def position(self, p: PauliString) -> int:
        i = int(self.local_index(p.index)[0])
        if i < 0:
            raise ContractError(f"{p} is not in this component")
        return i

    @cached_property
    def adjacency(self) -> Adjacency:
        rows, cols, gens, signs = [], [], [], []
        src = np.arange(self.size, dtype=np.int64)
        for gi, g in enumerate(self.generators):
            mask, images, sgn = commutator_images(g, self.members)
            loc = self.local_index(images)
            keep = loc >= 0  # images above a weight cap are absent
            rows.append(src[mask][keep])
            cols.append(loc[keep])
            gens.append(np.full(int(keep.sum()), gi, dtype=np.int32))
            signs.append(sgn[keep])
        rows, cols = np.concatenate(rows), np.concatenate(cols)
        gens, signs = np.concatenate(gens), np.concatenate(signs)
        order = np.lexsort((cols, rows))
        indptr = np.zeros(self.size + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.size), out=indptr[1:])
        return Adjacency(indptr, cols[order], gens[order], signs[order])

    def distances_from(self, p: PauliString) -> np.ndarray:
        """BFS distance from ``p`` to every member (aligned with ``members``)."""
        adj = self.adjacency
        return _backend.kernels.bfs_distances(adj.indptr, adj.indices, self.position(p))

    def eccentricities(self) -> np.ndarray:
        adj = self.adjacency
        return _backend.kernels.eccentricities(adj.indptr, adj.indices)

    def diameter(self) -> int:
        return int(self.eccentricities().max())

    def all_pairs_distances(self) -> np.ndarray:
        adj = self.adjacency
        return np.stack([_backend.kernels.bfs_distances(adj.indptr, adj.indices, s) for s in range(self.size)])


@dataclass
class CommutatorGraph:
    """Component labelling of every Pauli string for one generator set.

    ``labels[idx]`` is the component of dense index ``idx`` (-1 when deleted by
    the weight cap).  Labels are ordered by ``(size, smallest member)``.
    """

    generators: GeneratorSet
    labels: np.ndarray = field(repr=False)
    sizes: np.ndarray
    smallest: np.ndarray
    weight_cap: int | None = None
    _components: dict = field(default_factory=dict, repr=False)
    _adjacency_ready: bool = field(default=False, repr=False)

    @property
    def n(self) -> int:
        return self.generators.n

    @property
    def num_components(self) -> int:
        return len(self.sizes)

    @property
    def isolated_count(self) -> int:
        return int(np.count_nonzero(self.sizes == 1))

    @property
    def vertex_count(self) -> int:
        return int(self.sizes.sum())

    def size_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.sizes, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def label_of(self, p: PauliString) -> int:
        return int(self.labels[p.index])

    @cached_property
    def _by_label(self):
        alive = np.flatnonzero(self.labels >= 0)
        order = np.argsort(self.labels[alive], kind="stable")
        starts = np.concatenate([[0], np.cumsum(self.sizes)])
        return alive[order].astype(np.uint64), starts

    def members(self, label: int) -> np.ndarray:
        flat, starts = self._by_label
        return flat[starts[label] : starts[label + 1]]

    def component(self, label: int) -> Component:
        if not 0 <= label < self.num_components:
            raise ContractError(f"no component {label}; graph has {self.num_components}")
        if label not in self._components:
            self._components[label] = Component(self.generators, self.members(label), label, self.weight_cap)
        return self._components[label]

    def component_containing(self, p: PauliString) -> Component:
        label = self.label_of(p)
        if label < 0:
            raise ContractError(f"{p} is deleted by the weight cap")
        return self.component(label)

    def components(self):
        for label in range(self.num_components):
            yield self.component(label)

    def materialize_adjacency(self, max_vertices: int = 1 << 16) -> None:
        if self.vertex_count > max_vertices:
            raise ResourceLimitError(
                f"adjacency for {self.vertex_count} vertices exceeds {max_vertices}",
                cap=max_vertices,
                count=self.vertex_count,
            )
        for comp in self.components():
            comp.adjacency
        self._adjacency_ready = True

    @property
    def adjacency_ready(self) -> bool:
        return self._adjacency_ready

    def edge_count(self) -> int:
        """Number of undirected edges, counted without building adjacency."""
        alive = self.labels >= 0
        idx = np.arange(len(self.labels), dtype=np.uint64)
        total = 0
        for g in self.generators:
            hit = anticommute_mask(idx, g) & alive
            hit &= alive[idx ^ np.uint64(g.index)]
            total += int(np.count_nonzero(hit))
        return total // 2


def build_full(gens: GeneratorSet, weight_cap: int | None = None) -> CommutatorGraph:
    """Label every vertex of the commutator graph via union-find."""
    n = gens.n
    if n > MAX_FULL_QUBITS:
        raise ContractError(
            f"full graph needs 4**{n} vertices; n <= {MAX_FULL_QUBITS} only. Use component_of for single components"
        )
    _check_weight_cap(weight_cap, n)
    roots = _backend.kernels.union_find_roots(
        n, gens.x_masks, gens.z_masks, -1 if weight_cap is None else weight_cap
    )
    alive = roots >= 0
    # the kernels keep the smallest index as root, so roots are smallest members
    uniq, inverse, counts = np.unique(roots[alive], return_inverse=True, return_counts=True)
    order = np.lexsort((uniq, counts))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    labels = np.full(len(roots), -1, dtype=np.int64)
    labels[alive] = rank[inverse]
    return CommutatorGraph(gens, labels, counts[order].astype(np.int64), uniq[order].astype(np.uint64), weight_cap)


def component_of(
    p: PauliString,
    gens: GeneratorSet,
    weight_cap: int | None = None,
    max_size: int = DEFAULT_COMPONENT_CAP,
) -> Component:
    """Component containing ``p``, found by BFS without touching the other 4**n vertices."""
    if p.n != gens.n:
        raise ContractError(f"{p} has {p.n} qubits, generators have {gens.n}")
    _check_weight_cap(weight_cap, gens.n)
    if weight_cap is not None and p.weight > weight_cap:
        raise ContractError(f"{p} has weight {p.weight} above the cap {weight_cap}")
    members, complete = _backend.kernels.bfs_component(
        gens.n, p.index, gens.x_masks, gens.z_masks, -1 if weight_cap is None else weight_cap, max_size
    )
    if not complete:
        raise ResourceLimitError(
            f"component of {p} has more than {max_size} strings", cap=max_size, count=len(members)
        )
    return Component(gens, members, None, weight_cap)


def shortest_paths_from(p: PauliString, source) -> dict[str, int]:
    """Graph distance from ``p`` to every string of its component.

    ``source`` is a :class:`GeneratorSet`, a built :class:`CommutatorGraph` or
    a :class:`Component` containing ``p``.
    """
    if isinstance(source, CommutatorGraph):
        comp = source.component_containing(p)
    elif isinstance(source, GeneratorSet):
        comp = component_of(p, source)
    else:
        comp = source
    dist = comp.distances_from(p)
    return dict(zip(comp.labels(), dist.tolist()))


# --- statistics and export -----------------------------------------------------


@dataclass(frozen=True)
class GraphStats:
    n: int
    generators: tuple[str, ...]
    weight_cap: int | None
    sizes: tuple[int, ...]
    isolated_count: int
    diameters: tuple[int, ...] | None = None

    @property
    def count(self) -> int:
        return len(self.sizes)

    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.sizes:
            out[s] = out.get(s, 0) + 1
        return dict(sorted(out.items()))


def component_stats(graph: CommutatorGraph, diameters: bool = False) -> GraphStats:
    diam = tuple(c.diameter() for c in graph.components()) if diameters else None
    return GraphStats(
        graph.n,
        tuple(graph.generators.labels),
        graph.weight_cap,
        tuple(int(s) for s in graph.sizes),
        graph.isolated_count,
        diam,
    )


def to_json_dict(graph: CommutatorGraph, diameters: bool = False, edge_count: bool | None = None) -> dict:
    stats = component_stats(graph, diameters)
    comps = []
    for label in range(graph.num_components):
        members = graph.members(label)[:100]
        entry = {
            "id": label,
            "size": stats.sizes[label],
            "isolated": stats.sizes[label] == 1,
            "members_sample": [label_of_index(int(i), graph.n) for i in members],
        }
        if diameters:
            entry["diameter"] = stats.diameters[label]
        comps.append(entry)
    out = {
        "n": graph.n,
        "generators": list(stats.generators),
        "weight_cap": graph.weight_cap,
        "components": comps,
    }
    if edge_count is None:
        edge_count = graph.n <= 10
    if edge_count:
        out["edge_count"] = graph.edge_count()
    return out


def stats_from_json(text: str) -> GraphStats:
    data = json.loads(text)
    comps = sorted(data["components"], key=lambda c: c["id"])
    diam = None
    if comps and all("diameter" in c for c in comps):
        diam = tuple(c["diameter"] for c in comps)
    return GraphStats(
        data["n"],
        tuple(data["generators"]),
        data["weight_cap"],
        tuple(c["size"] for c in comps),
        sum(1 for c in comps if c["isolated"]),
        diam,
    )


def _to_dot(graph: CommutatorGraph) -> str:
    if not graph.adjacency_ready:
        raise ContractError("DOT export needs adjacency; call graph.materialize_adjacency() first")
    gen_labels = graph.generators.labels
    lines = ["graph commutator {"]
    for comp in graph.components():
        names = comp.labels()
        lines.append(f"  subgraph cluster_{comp.label} {{")
        lines.append(f'    label="component {comp.label} (size {comp.size})";')
        lines.extend(f'    "{s}";' for s in names)
        adj = comp.adjacency
        for a in range(comp.size):
            for k in range(adj.indptr[a], adj.indptr[a + 1]):
                b = adj.indices[k]
                if a < b:
                    lines.append(f'    "{names[a]}" -- "{names[b]}" [label="{gen_labels[adj.gen[k]]}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_csv(graph: CommutatorGraph, diameters: bool) -> str:
    stats = component_stats(graph, diameters)
    rows = ["id,size,isolated,smallest" + (",diameter" if diameters else "")]
    for label, size in enumerate(stats.sizes):
        row = f"{label},{size},{int(size == 1)},{label_of_index(int(graph.smallest[label]), graph.n)}"
        if diameters:
            row += f",{stats.diameters[label]}"
        rows.append(row)
    return "\n".join(rows) + "\n"


def export(graph: CommutatorGraph, fmt: str = "json", diameters: bool = False) -> str:
    if fmt == "json":
        return json.dumps(to_json_dict(graph, diameters), indent=2) + "\n"
    if fmt == "csv":
        return _to_csv(graph, diameters)
    if fmt == "dot":
        return _to_dot(graph)
    raise ContractError(f"unknown export format {fmt!r}; choose json, csv or dot")


# --- symmetries ----------------------------------------------------------------


def twin_map(graph: CommutatorGraph, symmetry: PauliString, seed: int = 0) -> dict[int, int]:
    """Component pairing induced by multiplying every string by a Pauli symmetry.

    Raises :class:`ContractError` if ``symmetry`` fails to commute with a
    generator.  Edge preservation is spot-checked on up to 10**4 edges per
    component.
    """
    gens = graph.generators
    if symmetry.n != gens.n or not all(commutes(symmetry, g) for g in gens):
        raise ContractError(f"{symmetry} is not a Pauli symmetry of the generators")
    if graph.weight_cap is not None:
        raise ContractError("twin map is undefined on a weight-capped graph")
    rng = np.random.default_rng(seed)
    s = np.uint64(symmetry.index)
    gidx = gens.indices
    pairing = {}
    for label in range(graph.num_components):
        members = graph.members(label)
        targets = np.unique(graph.labels[members ^ s])
        if len(targets) != 1 or graph.sizes[targets[0]] != len(members):
            raise AssertionError(f"image of component {label} is not a single component")
        pairing[label] = int(targets[0])
        # an edge (p, p^g) must map to the edge (pL, pL^g)
        k = min(len(members) * len(gidx), TWIN_EDGE_SAMPLES)
        ps = rng.choice(members, size=k) if k else members[:0]
        gs = rng.choice(len(gidx), size=k) if k else np.zeros(0, dtype=int)
        for p, gi in zip(ps.tolist(), gs.tolist()):
            g = gens.generators[gi]
            pp = PauliString.from_index(p, gens.n)
            if commutes(g, pp):
                continue
            img = PauliString.from_index(p ^ symmetry.index, gens.n)
            if commutes(g, img) or graph.labels[p ^ g.index ^ symmetry.index] != pairing[label]:
                raise AssertionError(f"edge ({pp}, {g}) not preserved by {symmetry}")
    return pairing


@dataclass(frozen=True)
class QuadraticSymmetry:
    """``sum_{S in C} S (x) L S`` for component ``component`` and Pauli symmetry ``symmetry``."""

    component: int
    symmetry: PauliString


def quadratic_symmetries(graph: CommutatorGraph, symmetries=None) -> list[QuadraticSymmetry]:
    if symmetries is None:
        symmetries = pauli_linear_symmetries(graph.generators)
    return [QuadraticSymmetry(c, L) for L in symmetries for c in range(graph.num_components)]


def materialize(q: QuadraticSymmetry, graph: CommutatorGraph) -> np.ndarray:
    """Dense ``d**2 x d**2`` operator of a quadratic symmetry (n <= 3)."""
    if graph.n > MAX_MATERIALIZE_QUBITS:
        raise ContractError(f"materialize only supports n <= {MAX_MATERIALIZE_QUBITS}")
    d = 1 << graph.n
    L = q.symmetry.to_matrix()
    out = np.zeros((d * d, d * d), dtype=complex)
    for s in graph.component(q.component).strings():
        S = s.to_matrix()
        out += np.kron(S, L @ S)
    return out
