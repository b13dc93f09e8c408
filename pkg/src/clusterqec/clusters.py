"""Qubit connectivity graphs, cluster decomposition of error supports,
and site-percolation cluster statistics.

Two qubits are adjacent when some parity-check row contains both, so an
error support splits into connected clusters that touch disjoint sets
of checks and can be detected or corrected independently.  For a code
whose stacked check matrix has column weights <= j and row weights
<= ell, vertex degrees are bounded by z = (ell-1) j.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import bounds
from .codes import CssCode
from .gf2 import BinaryMatrix


class UnionFind:
    """Array-backed union-find with path halving; used in the Monte
    Carlo hot loop, so keep it allocation-light."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class ClusterGraph:
    """Immutable adjacency structure with a declared degree bound."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    z_bound: int
    max_degree_observed: int

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edges as two aligned index arrays (each edge once, a < b)."""
        e0, e1 = [], []
        for a, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                if a < b:
                    e0.append(a)
                    e1.append(b)
        return np.asarray(e0, dtype=np.int64), np.asarray(e1, dtype=np.int64)


def _graph_from_edges(vertex_count: int, edges: set[tuple[int, int]], z_bound: int) -> ClusterGraph:
    nbrs: list[set[int]] = [set() for _ in range(vertex_count)]
    for a, b in edges:
        if a == b:
            continue
        nbrs[a].add(b)
        nbrs[b].add(a)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    max_deg = max((len(s) for s in adjacency), default=0)
    return ClusterGraph(vertex_count, adjacency, z_bound, max_deg)


def build_connectivity_graph(code: CssCode | BinaryMatrix) -> ClusterGraph:
    """Connectivity graph of a quantum code (rows of both check
    matrices generate edges) or of a single classical parity matrix.

    The degree bound is (ell-1)*j with j, ell measured from the matrix
    rows that generate the edges: the stacked pair for a CSS code, the
    matrix itself otherwise.
    """
    if isinstance(code, BinaryMatrix):
        rows = code.row_support
        n = code.cols
        j, ell = code.max_col_weight, code.max_row_weight
    else:
        rows = code.g_x.row_support + code.g_z.row_support
        n = code.n
        j, ell = code.j, code.ell
    edges: set[tuple[int, int]] = set()
    for sup in rows:
        for i, a in enumerate(sup):
            for b in sup[i + 1 :]:
                edges.add((a, b))
    return _graph_from_edges(n, edges, max(0, (ell - 1) * j))


def build_spacetime_graph(code: CssCode, rounds: int) -> ClusterGraph:
    """Connectivity graph over `rounds` noisy measurement cycles.

    Vertices are qubit slots (q, t) followed by syndrome-bit slots
    (c, t), where checks are numbered with the g_z rows first (matching
    the syndrome layout).  Edges: the single-slice graph within each t;
    each qubit slot to the syndrome slots of its checks at t and t+1;
    each syndrome slot to its repetition neighbours at t-1 and t+1.
    Time boundaries are open, so the first and last slices simply lose
    one measurement neighbour.  The qubit-slot degree bound is
    z' = j(ell+1).
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    n = code.n
    checks = code.g_z.row_support + code.g_x.row_support
    n_checks = len(checks)

    def qslot(q: int, t: int) -> int:
        return t * n + q

    base = rounds * n

    def cslot(c: int, t: int) -> int:
        return base + t * n_checks + c

    edges: set[tuple[int, int]] = set()
    intra = build_connectivity_graph(code)
    intra_edges = list(zip(*intra.edge_arrays()))
    for t in range(rounds):
        for a, b in intra_edges:
            edges.add((qslot(int(a), t), qslot(int(b), t)))
        for c, sup in enumerate(checks):
            for q in sup:
                edges.add(tuple(sorted((qslot(q, t), cslot(c, t)))))
                if t + 1 < rounds:
                    edges.add(tuple(sorted((qslot(q, t), cslot(c, t + 1)))))
            if t + 1 < rounds:
                edges.add((cslot(c, t), cslot(c, t + 1)))
    total = rounds * (n + n_checks)
    return _graph_from_edges(total, edges, code.j * (code.ell + 1))


# ── decomposition ────────────────────────────────────────────────────


@dataclass(frozen=True)
class ClusterDecomposition:
    """Partition of a vertex subset into connected components.

    `cluster_id` labels each support vertex with a component index;
    components are numbered by their smallest member.  `cluster_sizes`
    lists component sizes in id order.
    """

    cluster_id: dict[int, int]
    cluster_sizes: tuple[int, ...]

    @property
    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.cluster_sizes]
        for v, cid in self.cluster_id.items():
            out[cid].append(v)
        return [sorted(c) for c in out]


def decompose(graph: ClusterGraph, support) -> ClusterDecomposition:
    """Connected components of the subgraph induced by `support`."""
    sup = sorted(set(support))
    for v in sup:
        if v < 0 or v >= graph.vertex_count:
            raise ValueError(f"vertex {v} outside graph")
    in_support = set(sup)
    uf = UnionFind(sup)
    for v in sup:
        for w in graph.adjacency[v]:
            if w > v and w in in_support:
                uf.union(v, w)
    roots: dict[int, int] = {}
    labels: dict[int, int] = {}
    sizes: list[int] = []
    for v in sup:
        r = uf.find(v)
        if r not in roots:
            roots[r] = len(sizes)
            sizes.append(0)
        labels[v] = roots[r]
        sizes[roots[r]] += 1
    return ClusterDecomposition(labels, tuple(sizes))


# ── percolation statistics ───────────────────────────────────────────


@dataclass(frozen=True)
class ClusterSizeHistogram:
    """Sampled distribution of the cluster size seen from a site.

    `counts[s]` is the number of (tracked vertex, trial) events where
    the vertex was occupied and sat in a cluster of exactly s occupied
    vertices; `tracked` is how many vertices contribute per trial.
    """

    p: float
    counts: dict[int, int]
    trials: int
    tracked: int

    def n_hat(self, s: int) -> float:
        return self.counts.get(s, 0) / (self.tracked * self.trials)

    def sizes(self) -> list[int]:
        return sorted(self.counts)


def sample_cluster_histogram(
    graph: ClusterGraph,
    p: float,
    trials: int,
    seed: int,
    vertices=None,
) -> ClusterSizeHistogram:
    """Monte Carlo estimate of the per-site cluster size distribution.

    Each trial occupies every vertex independently with probability p,
    decomposes the occupied set, and accumulates cluster-size counts
    over the tracked vertices (all vertices by default).  Deterministic
    for a fixed seed.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    v_count = graph.vertex_count
    tracked = np.arange(v_count) if vertices is None else np.asarray(sorted(set(vertices)))
    tracked_set = set(int(v) for v in tracked)
    e0, e1 = graph.edge_arrays()
    counts: dict[int, int] = {}
    for _ in range(trials):
        occ = rng.random(v_count) < p
        occupied = np.flatnonzero(occ)
        if occupied.size == 0:
            continue
        uf = UnionFind(occupied.tolist())
        if e0.size:
            live = occ[e0] & occ[e1]
            for a, b in zip(e0[live].tolist(), e1[live].tolist()):
                uf.union(a, b)
        root_sizes: dict[int, int] = {}
        for v in occupied.tolist():
            r = uf.find(v)
            root_sizes[r] = root_sizes.get(r, 0) + 1
        for v in occupied.tolist():
            if v in tracked_set:
                s = root_sizes[uf.find(v)]
                counts[s] = counts.get(s, 0) + 1
    return ClusterSizeHistogram(p, counts, trials, len(tracked_set))


def _connected_sets_with_perimeter(graph: ClusterGraph, root: int, max_sets: int):
    """Yield (vertex set, perimeter size) for every connected set
    containing `root`, each exactly once."""
    adjacency = graph.adjacency
    emitted = 0

    def perimeter(s: frozenset[int]) -> int:
        boundary = set()
        for v in s:
            boundary.update(w for w in adjacency[v] if w not in s)
        return len(boundary)

    def recurse(current: frozenset[int], frontier: tuple[int, ...], forbidden: frozenset[int]):
        nonlocal emitted
        emitted += 1
        if emitted > max_sets:
            raise ValueError(f"connected-set enumeration exceeded {max_sets} sets")
        yield current, perimeter(current)
        banned = set(forbidden)
        for i, u in enumerate(frontier):
            new_set = current | {u}
            new_banned = frozenset(banned)
            tail = [w for w in frontier[i + 1 :]]
            extra = [
                w
                for w in adjacency[u]
                if w not in new_set and w not in new_banned and w not in tail
            ]
            yield from recurse(new_set, tuple(tail + extra), new_banned)
            banned.add(u)

    start_frontier = tuple(adjacency[root])
    yield from recurse(frozenset({root}), start_frontier, frozenset())


def exact_cluster_distribution(
    graph: ClusterGraph, vertex: int, p: float, max_sets: int = 2_000_000
) -> dict[int, float]:
    """Exact per-size probabilities that `vertex` sits in a cluster of
    each size, by enumerating connected sets containing it.

    P(cluster = S) = p^|S| (1-p)^perimeter(S), so summing over connected
    sets of each size gives the distribution exactly.  Restricted to
    graphs of at most 25 vertices.
    """
    if graph.vertex_count > 25:
        raise ValueError("exact distribution limited to 25 vertices")
    if vertex < 0 or vertex >= graph.vertex_count:
        raise ValueError("vertex outside graph")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    dist: dict[int, float] = {}
    for s, t in _connected_sets_with_perimeter(graph, vertex, max_sets):
        size = len(s)
        dist[size] = dist.get(size, 0.0) + p**size * (1.0 - p) ** t
    return dist


def bethe_perimeter(s: int, z: int) -> int:
    """Perimeter s(z-2)+2 of a size-s cluster on the z-regular tree; an
    upper bound on the perimeter of any size-s cluster on a graph of
    degree <= z."""
    if s < 1 or z < 2:
        raise ValueError("need s >= 1 and z >= 2")
    return s * (z - 2) + 2


def histogram_to_csv(hist: ClusterSizeHistogram, z: int) -> str:
    """CSV with columns s, count, n_hat, eq3_bound.  The bound column is
    left empty at or above the tail threshold p0 = 1/(z-1)."""
    out = io.StringIO()
    out.write("s,count,n_hat,eq3_bound\n")
    p0 = 1.0 / (z - 1) if z >= 2 else 0.0
    for s in hist.sizes():
        if 0.0 < hist.p < p0:
            bound = repr(bounds.cluster_tail_bound(s, hist.p, z))
        else:
            bound = ""
        out.write(f"{s},{hist.counts[s]},{hist.n_hat(s)!r},{bound}\n")
    return out.getvalue()
