"""Classical seed matrices, CSS code construction via the hypergraph
product, and code-distance estimation.

The hypergraph product of two binary matrices H1 (r1 x n1) and
H2 (r2 x n2) is the CSS code with

    G_x = ( I_{r2} (x) H1  |  H2 (x) I_{r1} )
    G_z = ( H2^T (x) I_{n1}  |  I_{n2} (x) H1^T )

on n = r2*n1 + n2*r1 qubits, where (x) is the Kronecker product.
Orthogonality G_x G_z^T = 0 holds by construction and is verified; the
logical count k is always computed from GF(2) ranks rather than trusted
from closed forms, because square rank-deficient seeds encode more
qubits than the usual k_c^2 formula suggests.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf2 import (
    BinaryMatrix,
    BinaryVector,
    RowSpaceReducer,
    kernel_basis,
    kronecker,
    rank,
)
from . import matrixio


class CommutativityError(RuntimeError):
    """A constructed check pair failed G_x G_z^T = 0.  Construction bug."""


class BudgetExceededError(RuntimeError):
    """A search exceeded its configured work budget."""


@dataclass(frozen=True)
class ClassicalCode:
    """Binary linear code given by a parity check matrix."""

    h: BinaryMatrix
    n_c: int
    k_c: int
    max_col_weight: int
    max_row_weight: int


def classical_code(h: BinaryMatrix) -> ClassicalCode:
    return ClassicalCode(
        h=h,
        n_c=h.cols,
        k_c=h.cols - rank(h),
        max_col_weight=h.max_col_weight,
        max_row_weight=h.max_row_weight,
    )


@dataclass(frozen=True, eq=True)
class CssCode:
    """CSS stabilizer code with X-type checks g_x and Z-type checks g_z.

    `j` is the maximum column weight of the stacked check matrix
    [g_x; g_z] (how many checks touch one qubit) and `ell` the maximum
    row weight (how many qubits one check touches).
    """

    g_x: BinaryMatrix
    g_z: BinaryMatrix
    n: int
    k: int
    j: int
    ell: int
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def r_x(self) -> int:
        return self.g_x.rows

    @property
    def r_z(self) -> int:
        return self.g_z.rows


def checks_commute(g_x: BinaryMatrix, g_z: BinaryMatrix) -> bool:
    """G_x G_z^T = 0 over GF(2): every X row meets every Z row evenly."""
    zbits = g_z.to_bits()
    for xrow in g_x.to_bits():
        for zrow in zbits:
            if (xrow & zrow).bit_count() & 1:
                return False
    return True


def css_code(g_x: BinaryMatrix, g_z: BinaryMatrix, meta: dict | None = None) -> CssCode:
    """Validate a check pair and package it with derived parameters."""
    if g_x.cols != g_z.cols:
        raise ValueError("g_x and g_z must act on the same qubit count")
    if not checks_commute(g_x, g_z):
        raise CommutativityError("g_x @ g_z^T != 0 over GF(2)")
    n = g_x.cols
    k = n - rank(g_x) - rank(g_z)
    if k < 0:
        raise CommutativityError("negative logical count; check ranks")
    col_w = [a + b for a, b in zip(g_x.col_weights(), g_z.col_weights())]
    row_w = g_x.row_weights() + g_z.row_weights()
    return CssCode(
        g_x=g_x,
        g_z=g_z,
        n=n,
        k=k,
        j=max(col_w, default=0),
        ell=max(row_w, default=0),
        meta=dict(meta or {}),
    )


# ── seed matrices ─────────────────────────────────────────────────────


def circulant(size: int, first_row_support) -> BinaryMatrix:
    """Square circulant: row r is the first row cyclically shifted right by r."""
    first = sorted(set(int(i) for i in first_row_support))
    if first and (first[0] < 0 or first[-1] >= size):
        raise ValueError("first row support index out of range")
    sup = tuple(
        tuple(sorted((i + r) % size for i in first)) for r in range(size)
    )
    return BinaryMatrix(size, size, sup)


def random_regular_ldpc(n_c: int, h: int, v: int, seed: int) -> BinaryMatrix:
    """Random (h, v)-regular parity check matrix by socket matching.

    Every column has weight exactly h and every row exactly v.  Draws a
    uniform matching between column sockets and row sockets and rejects
    matchings with parallel edges (they would collapse mod 2), retrying
    up to 1000 times.  Deterministic for a fixed seed.
    """
    if h < 1 or v < 1:
        raise ValueError("weights must be positive")
    if (n_c * h) % v:
        raise ValueError("n_c * h must be divisible by v")
    m = n_c * h // v
    rng = np.random.default_rng(seed)
    col_sockets = np.repeat(np.arange(n_c), h)
    for _ in range(1000):
        perm = rng.permutation(n_c * h)
        row_of_socket = perm // v
        pairs = set(zip(row_of_socket.tolist(), col_sockets.tolist()))
        if len(pairs) == n_c * h:
            rows: list[list[int]] = [[] for _ in range(m)]
            for r, c in pairs:
                rows[r].append(c)
            return BinaryMatrix(m, n_c, tuple(tuple(sorted(r)) for r in rows))
    raise RuntimeError("socket matching kept producing parallel edges")


# ── hypergraph product ────────────────────────────────────────────────


def hypergraph_product(
    h1: BinaryMatrix, h2: BinaryMatrix, meta: dict | None = None
) -> CssCode:
    """CSS code from the Kronecker-block construction of two seeds."""
    r1, n1 = h1.rows, h1.cols
    r2, n2 = h2.rows, h2.cols
    g_x = kronecker(BinaryMatrix.identity(r2), h1).hstack(
        kronecker(h2, BinaryMatrix.identity(r1))
    )
    g_z = kronecker(h2.transpose(), BinaryMatrix.identity(n1)).hstack(
        kronecker(BinaryMatrix.identity(n2), h1.transpose())
    )
    info = {"construction": "hypergraph_product", "n1": n1, "n2": n2, "r1": r1, "r2": r2}
    info.update(meta or {})
    code = css_code(g_x, g_z, info)
    assert code.n == r2 * n1 + n2 * r1
    return code


def predicted_parameters(
    code_c: ClassicalCode, d_c: int | None = None
) -> tuple[int, int, int | None]:
    """Closed-form (n, k, d) for the product of a seed with its transpose.

    Valid when the seed parity matrix has full row rank; the seed
    distance d_c is passed through unchanged (the caller supplies or
    estimates it).
    """
    n_c, k_c = code_c.n_c, code_c.k_c
    return (n_c**2 + (n_c - k_c) ** 2, k_c**2, d_c)


# ── distance estimation ──────────────────────────────────────────────


def _sector_logical_sides(code: CssCode):
    """The two (kernel matrix, stabilizer row space) pairs to search.

    X-type logicals live in ker(g_z) outside rowspace(g_x); Z-type
    logicals in ker(g_x) outside rowspace(g_z).
    """
    return (
        (code.g_z, code.g_x),
        (code.g_x, code.g_z),
    )


def _rref_gf2_numpy(a: np.ndarray) -> np.ndarray:
    """In-place reduced row echelon form of a uint8 matrix over GF(2)."""
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = r + int(np.argmax(a[r:, c]))
        if a[piv, c] == 0:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        if mask.any():
            a[mask] ^= a[r]
        r += 1
    return a[:r]


def distance_upper_bound(code: CssCode, iterations: int, seed: int) -> int:
    """Randomized minimum-weight logical search via random information sets.

    Each iteration applies a random column permutation to a kernel basis
    of each sector, row reduces it, and keeps the lightest reduced row
    that falls outside the corresponding stabilizer row space.  The
    result only improves with more iterations and is deterministic for a
    fixed seed.
    """
    if code.k < 1:
        raise ValueError("code has no logical operators (k = 0)")
    rng = np.random.default_rng(seed)
    best = code.n + 1

    sides = []
    for kernel_of, rowspace_of in _sector_logical_sides(code):
        basis = kernel_basis(kernel_of)
        dense = np.zeros((len(basis), code.n), dtype=np.uint8)
        for i, vec in enumerate(basis):
            if vec.support:
                dense[i, list(vec.support)] = 1
        sides.append((dense, RowSpaceReducer(rowspace_of)))

    def scan(rows: np.ndarray, reducer: RowSpaceReducer, perm, current: int) -> int:
        weights = rows.sum(axis=1)
        order = np.argsort(weights, kind="stable")
        for i in order:
            w = int(weights[i])
            if w == 0 or w >= current:
                break
            cols = np.flatnonzero(rows[i])
            if perm is not None:
                cols = perm[cols]
            bits = 0
            for c in cols:
                bits |= 1 << int(c)
            if reducer.reduce(bits) != 0:
                current = w
        return current

    for dense, reducer in sides:
        if dense.size:
            best = scan(_rref_gf2_numpy(dense.copy()), reducer, None, best)

    for _ in range(iterations):
        for dense, reducer in sides:
            if not dense.size:
                continue
            perm = rng.permutation(code.n)
            reduced = _rref_gf2_numpy(dense[:, perm].copy())
            best = scan(reduced, reducer, perm, best)
    return best


def _kernel_supports_upto_4(m: BinaryMatrix, w_max: int, max_work: int):
    """All supports of kernel vectors of weight <= min(w_max, 4), by weight.

    Organized as column-XOR collision search, which covers exactly the
    weight-w vectors for w up to 4 without scanning all C(n, w)
    supports.
    """
    n = m.cols
    col_bits = [0] * n
    for r, sup in enumerate(m.row_support):
        for c in sup:
            col_bits[c] |= 1 << r
    by_weight: dict[int, set[tuple[int, ...]]] = {w: set() for w in range(1, 5)}

    if w_max >= 1:
        for q in range(n):
            if col_bits[q] == 0:
                by_weight[1].add((q,))
    value_index: dict[int, list[int]] = {}
    for q, bits in enumerate(col_bits):
        value_index.setdefault(bits, []).append(q)
    if w_max >= 2:
        for qs in value_index.values():
            for a, b in itertools.combinations(qs, 2):
                by_weight[2].add((a, b))
    if w_max >= 3 or w_max >= 4:
        n_pairs = n * (n - 1) // 2
        if n_pairs > max_work:
            raise BudgetExceededError(
                f"pair scan needs {n_pairs} steps, budget is {max_work}"
            )
        pair_xor: dict[int, list[tuple[int, int]]] = {}
        for a, b in itertools.combinations(range(n), 2):
            x = col_bits[a] ^ col_bits[b]
            if w_max >= 3 and x:
                for c in value_index.get(x, ()):
                    if c != a and c != b:
                        by_weight[3].add(tuple(sorted((a, b, c))))
            if w_max >= 4 and x:
                pair_xor.setdefault(x, []).append((a, b))
        if w_max >= 4:
            for pairs in pair_xor.values():
                if len(pairs) < 2:
                    continue
                for (a, b), (c, d) in itertools.combinations(pairs, 2):
                    if len({a, b, c, d}) == 4:
                        by_weight[4].add(tuple(sorted((a, b, c, d))))
    return by_weight


def distance_exhaustive(
    code: CssCode, w_max: int, max_work: int = 20_000_000
) -> int | None:
    """Least weight of a logical operator at weight <= w_max, else None.

    A None return certifies d > w_max: for CSS codes the minimum-weight
    logical is pure X-type or pure Z-type, so it suffices to rule out
    binary kernel vectors of each sector that sit outside the opposite
    stabilizer row space.  Weights up to 4 are decided by a complete
    column-XOR collision search; beyond that all supports are scanned
    directly, which requires sum_w C(n, w) <= max_work.
    """
    if w_max < 1:
        return None

    best: int | None = None
    for kernel_of, rowspace_of in _sector_logical_sides(code):
        reducer = RowSpaceReducer(rowspace_of)
        if w_max <= 4:
            groups = _kernel_supports_upto_4(kernel_of, w_max, max_work)
            for w in range(1, w_max + 1):
                if best is not None and best <= w:
                    break
                for sup in sorted(groups[w]):
                    bits = 0
                    for q in sup:
                        bits |= 1 << q
                    if reducer.reduce(bits) != 0:
                        best = w
                        break
        else:
            n = code.n
            total = sum(math.comb(n, w) for w in range(1, w_max + 1))
            if total > max_work:
                raise BudgetExceededError(
                    f"exhaustive scan needs {total} supports, budget is {max_work}"
                )
            col_bits = [0] * n
            for r, sup in enumerate(kernel_of.row_support):
                for c in sup:
                    col_bits[c] |= 1 << r
            for w in range(1, w_max + 1):
                if best is not None and best <= w:
                    break
                for combo in itertools.combinations(range(n), w):
                    syn = 0
                    for q in combo:
                        syn ^= col_bits[q]
                    if syn:
                        continue
                    bits = 0
                    for q in combo:
                        bits |= 1 << q
                    if reducer.reduce(bits) != 0:
                        best = w
                        break
    return best


# ── persistence and seed specs ────────────────────────────────────────


def code_to_json(code: CssCode) -> str:
    payload = {
        "n": code.n,
        "gx": [list(r) for r in code.g_x.row_support],
        "gz": [list(r) for r in code.g_z.row_support],
        "meta": code.meta,
    }
    return json.dumps(payload, indent=2, sort_keys=False)


def code_from_json(text: str) -> CssCode:
    payload = json.loads(text)
    n = int(payload["n"])
    g_x = BinaryMatrix(len(payload["gx"]), n, tuple(tuple(r) for r in payload["gx"]))
    g_z = BinaryMatrix(len(payload["gz"]), n, tuple(tuple(r) for r in payload["gz"]))
    return css_code(g_x, g_z, payload.get("meta", {}))


def save_code(code: CssCode, path) -> None:
    Path(path).write_text(code_to_json(code) + "\n")


def load_code(path) -> CssCode:
    return code_from_json(Path(path).read_text())


def parse_seed_spec(spec: str) -> BinaryMatrix:
    """Seed matrix from ``circulant:L:i,...``, ``random:n:h:v:seed``, or
    a file path (alist, or dense 0/1 text for ``.txt`` files)."""
    if spec.startswith("circulant:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad circulant spec {spec!r}")
        size = int(parts[1])
        support = [int(t) for t in parts[2].split(",") if t]
        return circulant(size, support)
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 5:
            raise ValueError(f"bad random spec {spec!r}")
        n_c, h, v, seed = (int(p) for p in parts[1:])
        return random_regular_ldpc(n_c, h, v, seed)
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"seed spec {spec!r} is neither a known form nor a file")
    if path.suffix == ".txt":
        return matrixio.read_dense_text(path)
    return matrixio.read_alist(path)
