"""Readers and writers for sparse binary matrices.

Two formats:

* alist, the usual LDPC interchange format.  Header line ``n m``
  (columns then rows), then max column / row weights, per-column and
  per-row weight lists, then one line of 1-based row indices per column
  followed by one line of 1-based column indices per row.  Zero padding
  entries, as emitted by some tools, are ignored on read.
* dense text, one row per line of ``0``/``1`` characters, for tiny
  fixtures.
"""

from __future__ import annotations

from pathlib import Path

from .gf2 import BinaryMatrix


def write_alist(m: BinaryMatrix, path) -> None:
    cols = m.column_support()
    max_cw = max(m.max_col_weight, 1)
    max_rw = max(m.max_row_weight, 1)

    def padded(indices, width: int) -> str:
        entries = [str(i + 1) for i in indices] + ["0"] * (width - len(indices))
        return " ".join(entries)

    lines = [f"{m.cols} {m.rows}"]
    lines.append(f"{m.max_col_weight} {m.max_row_weight}")
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in m.row_support))
    for c in cols:
        lines.append(padded(c, max_cw))
    for r in m.row_support:
        lines.append(padded(r, max_rw))
    Path(path).write_text("\n".join(lines) + "\n")


def read_alist(path) -> BinaryMatrix:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ValueError("truncated alist file")

    def ints(line: str) -> list[int]:
        return [int(t) for t in line.split()]

    n, m = ints(lines[0])[:2]
    # lines[1] holds the max weights; the per-line lists are authoritative.
    if len(lines) < 4 + n:
        raise ValueError("truncated alist file")
    col_lines = lines[4 : 4 + n]
    rows: list[list[int]] = [[] for _ in range(m)]
    for c, line in enumerate(col_lines):
        for r in ints(line):
            if r == 0:  # zero padding entries carry no index
                continue
            if r < 1 or r > m:
                raise ValueError("alist row index out of range")
            rows[r - 1].append(c)
    return BinaryMatrix(m, n, tuple(tuple(sorted(r)) for r in rows))


def write_dense_text(m: BinaryMatrix, path) -> None:
    dense = m.to_dense()
    text = "\n".join("".join(str(int(b)) for b in row) for row in dense)
    Path(path).write_text(text + "\n")


def read_dense_text(path) -> BinaryMatrix:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty dense matrix file")
    width = len(lines[0])
    sup = []
    for ln in lines:
        if len(ln) != width or set(ln) - {"0", "1"}:
            raise ValueError("dense text rows must be equal-length 0/1 strings")
        sup.append(tuple(i for i, ch in enumerate(ln) if ch == "1"))
    return BinaryMatrix(len(lines), width, tuple(sup))
