"""Exact linear algebra over a :class:`~arcover.field.Field`.

Dense matrices are lists of row lists. The elimination engine works on
sparse rows (``dict`` column -> nonzero entry) and keeps its pivot rows fully
reduced, so every pivot column is zero outside its own row.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import Field

Matrix = list[list]
SparseRow = dict[int, object]


class RowSpace:
    """Incrementally built row space in reduced echelon form.

    The pivot of a new row is its smallest column index, so callers control
    which coordinates become pivots by how they number columns.  With
    ``track=True`` every pivot row remembers its expression in terms of the
    inserted rows (numbered in insertion order), which makes ``express``
    available.
    """

    def __init__(self, F: Field, track: bool = False):
        self.F = F
        self.pivots: dict[int, SparseRow] = {}
        self.track = track
        self.combos: dict[int, SparseRow] = {}
        self.inserted = 0

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: SparseRow, combo: SparseRow | None):
        p = self.F.p
        r = dict(row)
        hits = [c for c in r if c in self.pivots]
        for c in hits:
            coef = r.get(c)
            if not coef:
                continue
            for k, v in self.pivots[c].items():
                nv = r.get(k, 0) - coef * v
                if p:
                    nv %= p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            if combo is not None:
                for k, v in self.combos[c].items():
                    nv = combo.get(k, 0) - coef * v
                    if p:
                        nv %= p
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
        return r

    def reduce(self, row: SparseRow) -> SparseRow:
        """Remainder of ``row`` modulo the space (zero on all pivot columns)."""
        return self._reduce(row, None)

    def contains(self, row: SparseRow) -> bool:
        return not self._reduce(row, None)

    def add(self, row: SparseRow) -> bool:
        """Insert a row; return True when it enlarged the space."""
        idx = self.inserted
        self.inserted += 1
        combo = {idx: self.F.one} if self.track else None
        r = self._reduce(row, combo)
        if not r:
            return False
        F = self.F
        pc = min(r)
        inv = F.inv(r[pc])
        r = {k: F.norm(v * inv) for k, v in r.items()}
        if combo is not None:
            combo = {k: F.norm(v * inv) for k, v in combo.items()}
        # keep full reduction of the older pivot rows
        for c, prow in self.pivots.items():
            coef = prow.get(pc)
            if not coef:
                continue
            for k, v in r.items():
                nv = F.norm(prow.get(k, 0) - coef * v)
                if nv:
                    prow[k] = nv
                else:
                    prow.pop(k, None)
            if combo is not None:
                pcombo = self.combos[c]
                for k, v in combo.items():
                    nv = F.norm(pcombo.get(k, 0) - coef * v)
                    if nv:
                        pcombo[k] = nv
                    else:
                        pcombo.pop(k, None)
        self.pivots[pc] = r
        if combo is not None:
            self.combos[pc] = combo
        return True

    def express(self, row: SparseRow) -> SparseRow | None:
        """Coefficients over the inserted rows summing to ``row``, or None."""
        if not self.track:
            raise ValueError("express needs track=True")
        F = self.F
        r = dict(row)
        out: SparseRow = {}
        for c in [c for c in r if c in self.pivots]:
            coef = r.get(c)
            if not coef:
                continue
            for k, v in self.pivots[c].items():
                nv = F.norm(r.get(k, 0) - coef * v)
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            for k, v in self.combos[c].items():
                nv = F.norm(out.get(k, 0) + coef * v)
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return None if r else out

    def basis(self) -> list[SparseRow]:
        return [dict(self.pivots[c]) for c in sorted(self.pivots)]


# dense <-> sparse


def to_sparse(vec: Sequence) -> SparseRow:
    return {i: v for i, v in enumerate(vec) if v}


def to_dense(row: SparseRow, n: int, F: Field) -> list:
    out = [F.zero] * n
    for k, v in row.items():
        out[k] = v
    return out


# dense matrix helpers


def zeros(r: int, c: int, F: Field) -> Matrix:
    return [[F.zero] * c for _ in range(r)]


def identity(n: int, F: Field) -> Matrix:
    m = zeros(n, n, F)
    for i in range(n):
        m[i][i] = F.one
    return m


def shape(A: Matrix, ncols: int | None = None) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else (ncols or 0))


def matmul(A: Matrix, B: Matrix, F: Field, inner: int | None = None, ncols: int | None = None) -> Matrix:
    """Product of an r x n and an n x c matrix.

    Empty matrices lose their column count, so ``ncols`` gives the width of
    the result when ``B`` has no rows.
    """
    r = len(A)
    c = len(B[0]) if B else (ncols or 0)
    if not B:
        return zeros(r, c, F)
    p = F.p
    out = []
    Bt = list(zip(*B)) if c else []
    for row in A:
        nz = [(k, v) for k, v in enumerate(row) if v]
        new = []
        for j in range(c):
            col = Bt[j]
            s = 0
            for k, v in nz:
                b = col[k]
                if b:
                    s += v * b
            new.append(s % p if p else (s if s else F.zero))
        out.append(new)
    return out


def matvec(A: Matrix, x: Sequence, F: Field) -> list:
    p = F.p
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, x):
            if a and b:
                s += a * b
        out.append(s % p if p else (s if s else F.zero))
    return out


def transpose(A: Matrix, nrows: int = 0) -> Matrix:
    """Transpose; an empty ``A`` with implicit width must pass it as ``nrows``."""
    if not A:
        return [[] for _ in range(nrows)]
    return [list(col) for col in zip(*A)]


def madd(A: Matrix, B: Matrix, F: Field) -> Matrix:
    return [[F.norm(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mscale(c, A: Matrix, F: Field) -> Matrix:
    return [[F.norm(c * a) for a in row] for row in A]


def is_zero(A: Matrix) -> bool:
    return all(not v for row in A for v in row)


def block_diag(blocks: Sequence[tuple[Matrix, int, int]], F: Field) -> Matrix:
    """Block diagonal matrix from ``(matrix, rows, cols)`` triples."""
    R = sum(b[1] for b in blocks)
    C = sum(b[2] for b in blocks)
    out = zeros(R, C, F)
    r0 = c0 = 0
    for m, r, c in blocks:
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = m[i][j]
        r0 += r
        c0 += c
    return out


def rref(A: Matrix, F: Field, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns of a dense matrix."""
    n = len(A[0]) if A else (ncols or 0)
    rs = RowSpace(F)
    for row in A:
        rs.add(to_sparse(row))
    piv = sorted(rs.pivots)
    return [to_dense(rs.pivots[c], n, F) for c in piv], piv


def rank(A: Matrix, F: Field) -> int:
    rs = RowSpace(F)
    for row in A:
        rs.add(to_sparse(row))
    return rs.dim


def nullspace(A: Matrix, F: Field, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : A x = 0}``; one vector per free column, in column order."""
    n = len(A[0]) if A else (ncols or 0)
    rs = RowSpace(F)
    for row in A:
        rs.add(to_sparse(row))
    return _kernel_from_pivots(rs.pivots, n, F)


def nullspace_sparse(rows: Iterable[SparseRow], n: int, F: Field) -> list[list]:
    rs = RowSpace(F)
    for row in rows:
        rs.add(row)
    return _kernel_from_pivots(rs.pivots, n, F)


def _kernel_from_pivots(pivots: dict[int, SparseRow], n: int, F: Field) -> list[list]:
    free = [j for j in range(n) if j not in pivots]
    # pivot rows only touch pivot and free columns; invert the incidence once
    touching: dict[int, list[tuple[int, object]]] = {j: [] for j in free}
    for pc, row in pivots.items():
        for k, v in row.items():
            if k != pc:
                touching[k].append((pc, v))
    basis = []
    for j in free:
        x = [F.zero] * n
        x[j] = F.one
        for pc, v in touching[j]:
            x[pc] = F.neg(v)
        basis.append(x)
    return basis


def solve(A: Matrix, b: Sequence, F: Field, ncols: int | None = None) -> list | None:
    """One solution of ``A x = b`` or None."""
    n = len(A[0]) if A else (ncols or 0)
    rs = RowSpace(F)
    for row, bi in zip(A, b):
        r = to_sparse(row)
        if bi:
            r[n] = bi
        rs.add(r)
    if n in rs.pivots:
        return None
    x = [F.zero] * n
    for pc, row in rs.pivots.items():
        x[pc] = row.get(n, F.zero)
    return x


def inverse(A: Matrix, F: Field) -> Matrix | None:
    n = len(A)
    if any(len(r) != n for r in A):
        return None
    rs = RowSpace(F)
    for i, row in enumerate(A):
        r = to_sparse(row)
        r[n + i] = F.one
        rs.add(r)
    if any(c not in rs.pivots for c in range(n)):
        return None
    return [[rs.pivots[i].get(n + j, F.zero) for j in range(n)] for i in range(n)]


def column_basis(A: Matrix, F: Field) -> list[list]:
    """Basis of the column space (as vectors), taken from original columns."""
    if not A:
        return []
    cols = transpose(A)
    rs = RowSpace(F)
    out = []
    for c in cols:
        if rs.add(to_sparse(c)):
            out.append(list(c))
    return out


def span_basis(vectors: Iterable[Sequence], F: Field) -> list[list]:
    """Independent subset (in order) of the given vectors."""
    rs = RowSpace(F)
    out = []
    for v in vectors:
        if rs.add(to_sparse(v)):
            out.append(list(v))
    return out


def complement_basis(sub: Iterable[Sequence], n: int, F: Field) -> list[int]:
    """Standard basis indices completing ``sub`` to a basis of F^n."""
    rs = RowSpace(F)
    for v in sub:
        rs.add(to_sparse(v))
    out = []
    for j in range(n):
        if rs.add({j: F.one}):
            out.append(j)
    return out


def intersect(U: Sequence[Sequence], V: Sequence[Sequence], n: int, F: Field) -> list[list]:
    """Basis of span(U) ∩ span(V) inside F^n."""
    if not U or not V:
        return []
    # solve sum a_i u_i - sum b_j v_j = 0
    cols = [list(u) for u in U] + [[F.neg(x) for x in v] for v in V]
    M = transpose(cols)
    out = []
    for sol in nullspace(M, F, ncols=len(cols)):
        w = [F.zero] * n
        for i, u in enumerate(U):
            if sol[i]:
                for k in range(n):
                    if u[k]:
                        w[k] = F.norm(w[k] + sol[i] * u[k])
        out.append(w)
    return span_basis(out, F)
