"""Sparse and bit-packed linear algebra over GF(2), plus the binary
symplectic representation of Pauli operators.

Matrices are stored sparsely as per-row sorted column supports and
converted to Python-int bitsets (bit i = column i) for elimination,
which is where the runtime goes: big-int XOR runs at machine-word
speed.  All public operations treat their inputs as immutable values
and return new objects.

Pivot choice in every elimination is deterministic (lowest eligible
row, columns scanned left to right), so ranks, kernels and solutions
are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _bits_from_support(support) -> int:
    bits = 0
    for i in support:
        bits |= 1 << i
    return bits


def _support_from_bits(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return tuple(out)


@dataclass(frozen=True)
class BinaryVector:
    """Length-`length` vector over GF(2) stored as a sorted support tuple."""

    length: int
    support: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        prev = -1
        for i in self.support:
            if i <= prev:
                raise ValueError("support must be strictly increasing")
            prev = i
        if prev >= self.length:
            raise ValueError(f"support index {prev} out of range for length {self.length}")

    @classmethod
    def from_bits(cls, length: int, bits: int) -> "BinaryVector":
        return cls(length, _support_from_bits(bits))

    @classmethod
    def from_dense(cls, dense) -> "BinaryVector":
        arr = np.asarray(dense).ravel() % 2
        return cls(arr.size, tuple(int(i) for i in np.flatnonzero(arr)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        if self.support:
            out[list(self.support)] = 1
        return out

    @property
    def bits(self) -> int:
        return _bits_from_support(self.support)

    @property
    def weight(self) -> int:
        return len(self.support)

    def __add__(self, other: "BinaryVector") -> "BinaryVector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BinaryVector.from_bits(self.length, self.bits ^ other.bits)

    def dot(self, other: "BinaryVector") -> int:
        """Inner product mod 2."""
        if self.length != other.length:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1


@dataclass(frozen=True)
class BinaryMatrix:
    """Binary matrix stored as per-row sorted column supports.

    Invariants: column indices within a row are strictly increasing and
    less than `cols`; no duplicates.
    """

    rows: int
    cols: int
    row_support: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "row_support", tuple(tuple(r) for r in self.row_support)
        )
        if len(self.row_support) != self.rows:
            raise ValueError("row_support length does not match rows")
        for r in self.row_support:
            prev = -1
            for c in r:
                if c <= prev:
                    raise ValueError("row support must be strictly increasing")
                prev = c
            if prev >= self.cols:
                raise ValueError(f"column index {prev} out of range for cols {self.cols}")

    # ── constructors ──────────────────────────────────────────────────

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols, tuple(() for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, n, tuple((i,) for i in range(n)))

    @classmethod
    def from_rows(cls, rows: int, cols: int, supports) -> "BinaryMatrix":
        return cls(rows, cols, tuple(tuple(sorted(set(r))) for r in supports))

    @classmethod
    def from_dense(cls, dense) -> "BinaryMatrix":
        arr = np.atleast_2d(np.asarray(dense)) % 2
        sup = tuple(
            tuple(int(c) for c in np.flatnonzero(arr[r])) for r in range(arr.shape[0])
        )
        return cls(arr.shape[0], arr.shape[1], sup)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, sup in enumerate(self.row_support):
            if sup:
                out[r, list(sup)] = 1
        return out

    # ── shape helpers ─────────────────────────────────────────────────

    def to_bits(self) -> list[int]:
        return [_bits_from_support(r) for r in self.row_support]

    def transpose(self) -> "BinaryMatrix":
        cols: list[list[int]] = [[] for _ in range(self.cols)]
        for r, sup in enumerate(self.row_support):
            for c in sup:
                cols[c].append(r)
        return BinaryMatrix(self.cols, self.rows, tuple(tuple(c) for c in cols))

    def column_support(self) -> tuple[tuple[int, ...], ...]:
        return self.transpose().row_support

    def row_weights(self) -> list[int]:
        return [len(r) for r in self.row_support]

    def col_weights(self) -> list[int]:
        w = [0] * self.cols
        for sup in self.row_support:
            for c in sup:
                w[c] += 1
        return w

    @property
    def max_row_weight(self) -> int:
        return max(self.row_weights(), default=0)

    @property
    def max_col_weight(self) -> int:
        return max(self.col_weights(), default=0)

    def hstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        sup = tuple(
            a + tuple(c + self.cols for c in b)
            for a, b in zip(self.row_support, other.row_support)
        )
        return BinaryMatrix(self.rows, self.cols + other.cols, sup)

    def vstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BinaryMatrix(
            self.rows + other.rows, self.cols, self.row_support + other.row_support
        )

    def mul_vec(self, x: BinaryVector) -> BinaryVector:
        """Matrix-vector product over GF(2)."""
        if x.length != self.cols:
            raise ValueError("length mismatch")
        xb = x.bits
        sup = tuple(
            r for r, row in enumerate(self.to_bits()) if (row & xb).bit_count() & 1
        )
        return BinaryVector(self.rows, sup)


# ── elimination core ─────────────────────────────────────────────────


def _echelon_bits(bits: list[int], cols: int, reduced: bool = False):
    """Row-echelon form of bitset rows; returns (rows, pivot column list).

    Pivot search is lowest-row-first per column, columns left to right.
    With ``reduced=True`` entries above pivots are cleared too.
    """
    rows = list(bits)
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(cols):
        mask = 1 << c
        piv = -1
        for i in range(r, nrows):
            if rows[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lo = 0 if reduced else r + 1
        for i in range(lo, nrows):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(m: BinaryMatrix) -> int:
    """GF(2) rank by Gaussian elimination; the input is not mutated."""
    _, pivots = _echelon_bits(m.to_bits(), m.cols)
    return len(pivots)


def kernel_basis(m: BinaryMatrix) -> list[BinaryVector]:
    """Basis of the right kernel {x : M x = 0}; size is cols - rank(M)."""
    rows, pivots = _echelon_bits(m.to_bits(), m.cols, reduced=True)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        bits = 1 << f
        for i, p in enumerate(pivots):
            if rows[i] & (1 << f):
                bits |= 1 << p
        basis.append(BinaryVector.from_bits(m.cols, bits))
    return basis


class RowSpaceReducer:
    """Precomputed reduced echelon form for repeated row-space membership
    tests against one matrix."""

    def __init__(self, m: BinaryMatrix):
        rows, pivots = _echelon_bits(m.to_bits(), m.cols, reduced=True)
        self.cols = m.cols
        self._rows_by_pivot = {p: rows[i] for i, p in enumerate(pivots)}

    def reduce(self, bits: int) -> int:
        while bits:
            low = (bits & -bits).bit_length() - 1
            row = self._rows_by_pivot.get(low)
            if row is None:
                return bits
            bits ^= row
        return bits

    def contains(self, x: BinaryVector) -> bool:
        if x.length != self.cols:
            raise ValueError("length mismatch")
        return self.reduce(x.bits) == 0


def in_rowspace(m: BinaryMatrix, x: BinaryVector) -> bool:
    """True iff appending x to M leaves the rank unchanged."""
    return RowSpaceReducer(m).contains(x)


def solve_consistent(m: BinaryMatrix, s: BinaryVector) -> BinaryVector | None:
    """Any particular solution of M x = s, or None when inconsistent."""
    if s.length != m.rows:
        raise ValueError("length mismatch")
    sol = _solve_bits(m.to_bits(), s.bits, m.cols)
    return None if sol is None else BinaryVector.from_bits(m.cols, sol)


def _solve_bits(row_bits: list[int], rhs_bits: int, cols: int) -> int | None:
    """Bitset-level solver behind :func:`solve_consistent`.

    The right-hand side rides along as an extra bit at position `cols`;
    free variables are set to zero.
    """
    aug_bit = 1 << cols
    real_mask = aug_bit - 1
    work = [
        row | (aug_bit if (rhs_bits >> i) & 1 else 0)
        for i, row in enumerate(row_bits)
    ]
    rows, pivots = _echelon_bits(work, cols, reduced=True)
    for row in rows:
        if (row & real_mask) == 0 and (row & aug_bit):
            return None
    sol = 0
    for i, p in enumerate(pivots):
        if rows[i] & aug_bit:
            sol |= 1 << p
    return sol


def kronecker(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product with row-major block ordering: entry
    ((a_r*b.rows + b_r), (a_c*b.cols + b_c)) = A[a_r,a_c] * B[b_r,b_c]."""
    sup = []
    for a_row in a.row_support:
        for b_row in b.row_support:
            sup.append(
                tuple(ac * b.cols + bc for ac in a_row for bc in b_row)
            )
    return BinaryMatrix(a.rows * b.rows, a.cols * b.cols, tuple(sup))


# ── Pauli operators as binary symplectic pairs ───────────────────────


@dataclass(frozen=True)
class PauliVector:
    """n-qubit Pauli operator, up to phase, as a pair of binary vectors.

    `u` is the Z part and `v` the X part; Y on a qubit sets the bit in
    both.  The weight is the number of qubits acted on non-trivially,
    i.e. the size of the union of the two supports.
    """

    n: int
    u: BinaryVector
    v: BinaryVector

    def __post_init__(self):
        if self.u.length != self.n or self.v.length != self.n:
            raise ValueError("component length must equal n")

    @classmethod
    def identity(cls, n: int) -> "PauliVector":
        return cls(n, BinaryVector(n), BinaryVector(n))

    @classmethod
    def from_ops(cls, n: int, xs=(), ys=(), zs=()) -> "PauliVector":
        xs, ys, zs = set(xs), set(ys), set(zs)
        if (xs & ys) or (xs & zs) or (ys & zs):
            raise ValueError("a qubit may carry only one Pauli")
        u = BinaryVector(n, tuple(sorted(ys | zs)))
        v = BinaryVector(n, tuple(sorted(xs | ys)))
        return cls(n, u, v)

    @property
    def weight(self) -> int:
        return (self.u.bits | self.v.bits).bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return _support_from_bits(self.u.bits | self.v.bits)

    def __add__(self, other: "PauliVector") -> "PauliVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return PauliVector(self.n, self.u + other.u, self.v + other.v)

    def axis(self, q: int) -> str:
        ub = (self.u.bits >> q) & 1
        vb = (self.v.bits >> q) & 1
        return ("I", "X", "Z", "Y")[vb + 2 * ub]

    def to_string(self) -> str:
        """Compact form like ``"X0,Y3,Z7"``; identity is the empty string."""
        return ",".join(f"{self.axis(q)}{q}" for q in self.support)

    @classmethod
    def from_string(cls, n: int, spec: str) -> "PauliVector":
        """Parse ``"X0,Y3,Z7"`` (case-insensitive, blanks allowed)."""
        xs, ys, zs = [], [], []
        for tok in spec.replace(" ", "").split(","):
            if not tok:
                continue
            axis = tok[0].upper()
            try:
                q = int(tok[1:])
            except ValueError:
                raise ValueError(f"bad Pauli token {tok!r}") from None
            if q < 0 or q >= n:
                raise ValueError(f"qubit index {q} out of range")
            if axis == "X":
                xs.append(q)
            elif axis == "Y":
                ys.append(q)
            elif axis == "Z":
                zs.append(q)
            else:
                raise ValueError(f"bad Pauli axis in token {tok!r}")
        return cls.from_ops(n, xs, ys, zs)


def trace_inner_product(a: PauliVector, b: PauliVector) -> int:
    """Symplectic inner product; 0 iff the two operators commute."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    return (
        (a.u.bits & b.v.bits).bit_count() + (a.v.bits & b.u.bits).bit_count()
    ) & 1
