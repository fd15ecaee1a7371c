"""Row Hermite normal form for integer lattices."""

from __future__ import annotations

from math import gcd


def hnf(rows) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive, the pivot column of each row
    is strictly right of the previous one, and entries above a pivot are
    reduced into [0, pivot).
    """
    rows = [[int(v) for v in r] for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("rows have different lengths")
    work = [r for r in rows if any(r)]
    out: list[list[int]] = []
    for col in range(ncols):
        # Euclid down the column until a single row has a nonzero entry
        while True:
            nz = [r for r in work if r[col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            work = [
                r if (r is piv or not r[col]) else [a - (r[col] // piv[col]) * b for a, b in zip(r, piv)]
                for r in work
            ]
            work = [r for r in work if any(r)]
        nz = [r for r in work if r[col]]
        if nz:
            piv = nz[0] if nz[0][col] > 0 else [-a for a in nz[0]]
            out.append(piv)
            work = [r for r in work if not r[col]]
    # reduce entries above pivots
    for i in range(len(out)):
        pc = next(j for j, v in enumerate(out[i]) if v)
        for k in range(i):
            f = out[k][pc] // out[i][pc]
            if f:
                out[k] = [a - f * b for a, b in zip(out[k], out[i])]
    return out


def solve_membership(H: list[list[int]], v) -> bool:
    """Whether integer vector ``v`` lies in the row lattice of HNF matrix ``H``."""
    v = [int(a) for a in v]
    for row in H:
        pc = next(j for j, x in enumerate(row) if x)
        if v[pc] % row[pc]:
            return False
        f = v[pc] // row[pc]
        v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
