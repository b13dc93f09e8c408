"""Cluster-based decoding for CSS codes.

Syndromes are laid out with the g_z checks first (they see the X part
of an error) followed by the g_x checks (which see the Z part).  The
erasure decoder solves each erased cluster as an exact local linear
system.  The depolarizing decoder seeds putative clusters from the
supports of flagged checks, grows and merges them, and searches each
cluster for the lightest Pauli pattern reproducing the local syndrome.
A correction counts as a success when it differs from the true error by
a stabilizer element only.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass

from .bounds import alpha_z, percolation_threshold
from .clusters import ClusterGraph, decompose
from .codes import CssCode
from .gf2 import BinaryVector, PauliVector, RowSpaceReducer, _solve_bits

STATUS_SUCCESS = "success-degenerate"
STATUS_LOGICAL_FAILURE = "logical-failure"
STATUS_DETECTED = "detected-uncorrectable"
STATUS_BUDGET = "cluster-budget-exceeded"

_PAULI_X, _PAULI_Y, _PAULI_Z = 0, 1, 2


@dataclass(frozen=True)
class ErrorSample:
    """One channel draw: the error, plus the erasure mask when the
    channel reveals locations."""

    error: PauliVector
    erasure_mask: tuple[int, ...] | None = None
    syndrome_flips: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.erasure_mask is not None:
            mask = set(self.erasure_mask)
            if any(q not in mask for q in self.error.support):
                raise ValueError("error support must lie inside the erasure mask")


@dataclass(frozen=True)
class DecodeOutcome:
    correction: PauliVector
    status: str
    clusters_processed: int
    largest_cluster: int
    work_units: int

    def to_dict(self) -> dict:
        return {
            "correction": self.correction.to_string(),
            "status": self.status,
            "clusters_processed": self.clusters_processed,
            "largest_cluster": self.largest_cluster,
            "work_units": self.work_units,
        }


@dataclass(frozen=True)
class ClusterBudget:
    """Caps for the per-cluster search: the largest putative cluster the
    decoder will attempt, and the total number of patterns it may
    examine.  Putative clusters carry the whole support of every
    flagged check, so even a single error produces one of up to
    1 + (ell-1) j qubits; the size default leaves room for that."""

    max_cluster_size: int = 64
    max_work: int = 10**8


def default_cluster_budget(
    code: CssCode,
    p: float,
    distance_hint: int | None = None,
    max_work: int = 10**8,
) -> ClusterBudget:
    """Budget sized to the expected cluster scale at error rate p.

    Below the tail threshold, clusters of actual errors are almost
    surely smaller than about 2 ln(n) / |ln alpha_z(p)| (or d - 1 when a
    distance hint is available).  A putative cluster adds the
    one-neighbourhood halo of flagged checks around the true cluster,
    inflating it by up to a factor 1 + z, so the size cap scales the
    true-cluster estimate by that factor.  At or above the threshold
    there is no useful size scale and only max_work limits the search.
    """
    z = max(3, (code.ell - 1) * code.j)
    size = 1 if distance_hint is None else max(1, distance_hint - 1)
    if 0.0 < p < percolation_threshold(code.j, code.ell):
        a = alpha_z(p, z)
        if 0.0 < a < 1.0:
            size = max(size, math.ceil(2.0 * math.log(code.n) / abs(math.log(a))))
    elif p > 0.0:
        return ClusterBudget(code.n, max_work)
    return ClusterBudget(min(code.n, (1 + z) * size), max_work)


# ── cached per-code tables ────────────────────────────────────────────


@functools.lru_cache(maxsize=32)
def _syndrome_masks(code: CssCode) -> tuple[list[int], list[int]]:
    """Per-qubit syndrome bitmasks: an X error on q flips the g_z rows
    containing q, a Z error flips the g_x rows (offset by r_z)."""
    x_mask = [0] * code.n
    z_mask = [0] * code.n
    for r, sup in enumerate(code.g_z.row_support):
        for q in sup:
            x_mask[q] |= 1 << r
    off = code.r_z
    for r, sup in enumerate(code.g_x.row_support):
        for q in sup:
            z_mask[q] |= 1 << (off + r)
    return x_mask, z_mask


@functools.lru_cache(maxsize=32)
def _check_rows(code: CssCode) -> tuple[tuple[int, ...], ...]:
    """Combined check supports, g_z rows first."""
    return code.g_z.row_support + code.g_x.row_support


@functools.lru_cache(maxsize=32)
def _qubit_checks(code: CssCode) -> tuple[tuple[int, ...], ...]:
    out: list[list[int]] = [[] for _ in range(code.n)]
    for c, sup in enumerate(_check_rows(code)):
        for q in sup:
            out[q].append(c)
    return tuple(tuple(v) for v in out)


@functools.lru_cache(maxsize=32)
def _stabilizer_reducers(code: CssCode) -> tuple[RowSpaceReducer, RowSpaceReducer]:
    """(reducer for Z parts against g_z rows, for X parts against g_x rows)."""
    return RowSpaceReducer(code.g_z), RowSpaceReducer(code.g_x)


def syndrome(code: CssCode, e: PauliVector) -> BinaryVector:
    """Check outcomes, linear in the error; length r_z + r_x with the
    g_z block first."""
    if e.n != code.n:
        raise ValueError("error length does not match code")
    x_mask, z_mask = _syndrome_masks(code)
    bits = 0
    for q in e.v.support:
        bits ^= x_mask[q]
    for q in e.u.support:
        bits ^= z_mask[q]
    return BinaryVector.from_bits(code.r_z + code.r_x, bits)


def adjudicate(code: CssCode, residual: PauliVector) -> str:
    """Classify a residual error: in the stabilizer group (success), a
    logical operator (failure), or still flagged by some check."""
    if syndrome(code, residual).weight:
        return STATUS_DETECTED
    u_reducer, v_reducer = _stabilizer_reducers(code)
    if u_reducer.reduce(residual.u.bits) == 0 and v_reducer.reduce(residual.v.bits) == 0:
        return STATUS_SUCCESS
    return STATUS_LOGICAL_FAILURE


def _finish(
    code: CssCode,
    correction: PauliVector,
    synd: BinaryVector,
    true_error: PauliVector | None,
    clusters: int,
    largest: int,
    work: int,
) -> DecodeOutcome:
    if true_error is not None:
        status = adjudicate(code, true_error + correction)
    elif syndrome(code, correction).bits == synd.bits:
        # Without the true error only syndrome reproduction is checkable.
        status = STATUS_SUCCESS
    else:
        status = STATUS_DETECTED
    return DecodeOutcome(correction, status, clusters, largest, work)


# ── erasure channel ───────────────────────────────────────────────────


def decode_erasure(
    code: CssCode,
    graph: ClusterGraph,
    erasure_mask,
    synd: BinaryVector,
    true_error: PauliVector | None = None,
) -> DecodeOutcome:
    """Exact per-cluster correction when the error locations are known.

    Splits the erased set into clusters of the connectivity graph and
    solves, for each cluster and each sector independently, the linear
    system given by the checks meeting that cluster.  Valid whenever the
    true error is supported inside the mask, in which case every local
    system is consistent by construction.
    """
    if synd.length != code.r_z + code.r_x:
        raise ValueError("syndrome length mismatch")
    mask = sorted(set(erasure_mask))
    mask_set = set(mask)
    checks = _check_rows(code)
    qubit_checks = _qubit_checks(code)
    synd_bits = synd.bits

    for c, sup in enumerate(checks):
        if (synd_bits >> c) & 1 and not any(q in mask_set for q in sup):
            raise RuntimeError(
                "flagged check disjoint from the erasure; inputs violate the channel model"
            )

    decomp = decompose(graph, mask)
    u_bits = 0
    v_bits = 0
    solves = 0
    r_z = code.r_z
    for cluster in decomp.clusters:
        local_cols = {q: i for i, q in enumerate(cluster)}
        rows_z: list[int] = []
        rhs_z = 0
        rows_x: list[int] = []
        rhs_x = 0
        seen: set[int] = set()
        for q in cluster:
            for c in qubit_checks[q]:
                if c in seen:
                    continue
                seen.add(c)
                row_bits = 0
                for qq in checks[c]:
                    if qq in local_cols:
                        row_bits |= 1 << local_cols[qq]
                bit = (synd_bits >> c) & 1
                if c < r_z:
                    if bit:
                        rhs_z |= 1 << len(rows_z)
                    rows_z.append(row_bits)
                else:
                    if bit:
                        rhs_x |= 1 << len(rows_x)
                    rows_x.append(row_bits)
        sol_v = _solve_bits(rows_z, rhs_z, len(cluster))
        sol_u = _solve_bits(rows_x, rhs_x, len(cluster))
        solves += 2
        if sol_v is None or sol_u is None:
            raise RuntimeError(
                "inconsistent local erasure system; inputs violate the channel model"
            )
        for i, q in enumerate(cluster):
            if (sol_v >> i) & 1:
                v_bits |= 1 << q
            if (sol_u >> i) & 1:
                u_bits |= 1 << q
    correction = PauliVector(
        code.n,
        BinaryVector.from_bits(code.n, u_bits),
        BinaryVector.from_bits(code.n, v_bits),
    )
    largest = max(decomp.cluster_sizes, default=0)
    return _finish(
        code, correction, synd, true_error, len(decomp.cluster_sizes), largest, solves
    )


# ── depolarizing channel ─────────────────────────────────────────────


class _WorkBudgetExceeded(Exception):
    pass


def _putative_clusters(code: CssCode, synd_bits: int) -> list[set[int]]:
    """Union of the supports of flagged checks, merged on overlap.

    Growing a cluster along flagged rows that already touch it adds the
    whole row support, so the merged seeds are already the grown
    clusters.
    """
    checks = _check_rows(code)
    flagged = [c for c in range(len(checks)) if (synd_bits >> c) & 1]
    owner: dict[int, int] = {}
    groups: dict[int, set[int]] = {}
    next_id = 0
    for c in flagged:
        sup = checks[c]
        if not sup:
            raise RuntimeError("flagged check has empty support; syndrome inconsistent")
        hit = sorted({owner[q] for q in sup if q in owner})
        if hit:
            target = hit[0]
            for g in hit[1:]:
                for q in groups[g]:
                    owner[q] = target
                groups[target].update(groups.pop(g))
        else:
            target = next_id
            next_id += 1
            groups[target] = set()
        for q in sup:
            owner[q] = target
            groups[target].add(q)
    clusters = sorted(groups.values(), key=min)
    return clusters


def _cluster_search(
    code: CssCode,
    cluster: list[int],
    synd_bits: int,
    budget: ClusterBudget,
    work_so_far: int,
    paulis: tuple[int, ...],
):
    """Lightest Pauli pattern on `cluster` matching every check that
    meets it, or None when no pattern exists.  Deterministic order:
    weights ascending, qubit combinations lexicographic, X before Y
    before Z.  Returns (pattern or None, work units consumed)."""
    checks = _check_rows(code)
    qubit_checks = _qubit_checks(code)
    r_z = code.r_z
    local_checks = sorted({c for q in cluster for c in qubit_checks[q]})
    check_pos = {c: i for i, c in enumerate(local_checks)}
    local_cols = {q: i for i, q in enumerate(cluster)}

    target = 0
    rows_z: list[int] = []
    rhs_z = 0
    rows_x: list[int] = []
    rhs_x = 0
    for c in local_checks:
        bit = (synd_bits >> c) & 1
        if bit:
            target |= 1 << check_pos[c]
        row_bits = 0
        for q in checks[c]:
            if q in local_cols:
                row_bits |= 1 << local_cols[q]
        if c < r_z:
            if bit:
                rhs_z |= 1 << len(rows_z)
            rows_z.append(row_bits)
        else:
            if bit:
                rhs_x |= 1 << len(rows_x)
            rows_x.append(row_bits)

    # Cheap feasibility test before enumerating: each sector is a linear
    # system, and a joint pattern exists iff both are consistent.
    if _solve_bits(rows_z, rhs_z, len(cluster)) is None:
        return None, 0
    if _solve_bits(rows_x, rhs_x, len(cluster)) is None:
        return None, 0

    x_syn = []
    z_syn = []
    for q in cluster:
        xs = 0
        zs = 0
        for c in qubit_checks[q]:
            if c < r_z:
                xs |= 1 << check_pos[c]
            else:
                zs |= 1 << check_pos[c]
        x_syn.append(xs)
        z_syn.append(zs)
    by_pauli = (x_syn, [x ^ z for x, z in zip(x_syn, z_syn)], z_syn)

    work = 0
    size = len(cluster)
    for w in range(0, size + 1):
        for combo in itertools.combinations(range(size), w):
            for assign in itertools.product(paulis, repeat=w):
                work += 1
                if work_so_far + work > budget.max_work:
                    raise _WorkBudgetExceeded
                acc = 0
                for idx, pl in zip(combo, assign):
                    acc ^= by_pauli[pl][idx]
                if acc == target:
                    u_bits = 0
                    v_bits = 0
                    for idx, pl in zip(combo, assign):
                        q = cluster[idx]
                        if pl != _PAULI_Z:
                            v_bits |= 1 << q
                        if pl != _PAULI_X:
                            u_bits |= 1 << q
                    return (u_bits, v_bits), work
    return None, work


def _nearest_cluster(
    graph: ClusterGraph, source: set[int], others: dict[int, set[int]]
) -> int | None:
    """Id of the cluster nearest to `source` by hop distance; ties go to
    the lowest id.  None when no other cluster is reachable."""
    if not others:
        return None
    membership: dict[int, int] = {}
    for cid, verts in others.items():
        for v in verts:
            membership[v] = min(cid, membership.get(v, cid))
    frontier = deque(sorted(source))
    seen = set(source)
    while frontier:
        hits = []
        next_frontier = deque()
        for _ in range(len(frontier)):
            v = frontier.popleft()
            for w in graph.adjacency[v]:
                if w in seen:
                    continue
                seen.add(w)
                if w in membership:
                    hits.append(membership[w])
                next_frontier.append(w)
        if hits:
            return min(hits)
        frontier = next_frontier
    return None


def decode_depolarizing(
    code: CssCode,
    graph: ClusterGraph,
    synd: BinaryVector,
    budget: ClusterBudget | None = None,
    true_error: PauliVector | None = None,
) -> DecodeOutcome:
    """Cluster-growth decoding for errors at unknown locations.

    Putative clusters are the merged supports of flagged checks.  Each
    cluster is searched for the lightest local Pauli pattern matching
    the syndrome of every check that meets it; a cluster with no local
    solution is merged with the nearest other cluster and retried.  The
    returned correction reproduces the input syndrome exactly unless the
    budget runs out first.
    """
    if synd.length != code.r_z + code.r_x:
        raise ValueError("syndrome length mismatch")
    if budget is None:
        budget = ClusterBudget()
    synd_bits = synd.bits
    # Binary mode (classical codes wrapped as one-sided CSS) searches a
    # two-letter alphabet; the full quantum case uses all three.
    if code.r_x == 0:
        paulis = (_PAULI_X,)
    elif code.r_z == 0:
        paulis = (_PAULI_Z,)
    else:
        paulis = (_PAULI_X, _PAULI_Y, _PAULI_Z)

    clusters = {i: c for i, c in enumerate(_putative_clusters(code, synd_bits))}
    work = 0
    largest = max((len(c) for c in clusters.values()), default=0)
    identity = PauliVector.identity(code.n)

    pending = deque(sorted(clusters))
    patterns: dict[int, tuple[int, int]] = {}
    while pending:
        cid = pending.popleft()
        if cid not in clusters:
            continue
        cluster_set = clusters[cid]
        largest = max(largest, len(cluster_set))
        if len(cluster_set) > budget.max_cluster_size:
            return DecodeOutcome(
                identity, STATUS_BUDGET, len(clusters), largest, work
            )
        try:
            pattern, spent = _cluster_search(
                code, sorted(cluster_set), synd_bits, budget, work, paulis
            )
        except _WorkBudgetExceeded:
            return DecodeOutcome(
                identity, STATUS_BUDGET, len(clusters), largest, budget.max_work
            )
        work += spent
        if pattern is None:
            unsolved = {
                i: c for i, c in clusters.items() if i != cid and i not in patterns
            }
            target = _nearest_cluster(graph, cluster_set, unsolved)
            if target is None:
                # Merging with an already-solved cluster is the last resort;
                # its pattern is retracted and recomputed on the union.
                others = {i: c for i, c in clusters.items() if i != cid}
                target = _nearest_cluster(graph, cluster_set, others)
            if target is None:
                raise RuntimeError("syndrome admits no correction; inputs inconsistent")
            patterns.pop(target, None)
            merged = clusters.pop(target) | cluster_set
            clusters[cid] = merged
            pending.appendleft(cid)
            continue
        patterns[cid] = pattern

    u_bits = 0
    v_bits = 0
    for pu, pv in patterns.values():
        u_bits ^= pu
        v_bits ^= pv
    correction = PauliVector(
        code.n,
        BinaryVector.from_bits(code.n, u_bits),
        BinaryVector.from_bits(code.n, v_bits),
    )
    return _finish(
        code, correction, synd, true_error, len(clusters), largest, work
    )


# ── brute-force reference decoder ────────────────────────────────────


def decode_oracle_min_weight(
    code: CssCode,
    synd: BinaryVector,
    w_max: int,
    true_error: PauliVector | None = None,
    max_work: int = 10**8,
) -> DecodeOutcome:
    """Global minimum-weight decoding by exhaustive Pauli enumeration.

    Scans all errors of weight 0..w_max in the same deterministic order
    as the cluster search and returns the first syndrome match.  The
    search space Sum_w C(n, w) 3^w must fit within max_work.
    """
    if synd.length != code.r_z + code.r_x:
        raise ValueError("syndrome length mismatch")
    n = code.n
    q_opts = 3 if (code.r_x > 0 and code.r_z > 0) else 1
    total = sum(math.comb(n, w) * q_opts**w for w in range(w_max + 1))
    if total > max_work:
        raise ValueError(f"oracle search space {total} exceeds budget {max_work}")
    x_mask, z_mask = _syndrome_masks(code)
    y_mask = [a ^ b for a, b in zip(x_mask, z_mask)]
    by_pauli = (x_mask, y_mask, z_mask)
    paulis = (
        (_PAULI_X, _PAULI_Y, _PAULI_Z)
        if q_opts == 3
        else ((_PAULI_X,) if code.r_x == 0 else (_PAULI_Z,))
    )
    target = synd.bits
    work = 0
    for w in range(w_max + 1):
        for combo in itertools.combinations(range(n), w):
            for assign in itertools.product(paulis, repeat=w):
                work += 1
                acc = 0
                for qubit, pl in zip(combo, assign):
                    acc ^= by_pauli[pl][qubit]
                if acc == target:
                    u_bits = 0
                    v_bits = 0
                    for qubit, pl in zip(combo, assign):
                        if pl != _PAULI_Z:
                            v_bits |= 1 << qubit
                        if pl != _PAULI_X:
                            u_bits |= 1 << qubit
                    correction = PauliVector(
                        n,
                        BinaryVector.from_bits(n, u_bits),
                        BinaryVector.from_bits(n, v_bits),
                    )
                    return _finish(
                        code, correction, synd, true_error, 1, w, work
                    )
    raise ValueError(f"no error of weight <= {w_max} matches the syndrome")
