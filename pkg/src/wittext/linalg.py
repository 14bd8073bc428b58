"""Dense Gaussian elimination over a FieldCtx.

Everything works on raw ``(rows, cols, d)`` coefficient arrays.  Pivoting is
first-nonzero-column / first-nonzero-row, so every basis this module returns
is deterministic.
"""

from __future__ import annotations

import numpy as np

from .gfield import FieldCtx, Matrix


def rref(A: np.ndarray, ctx: FieldCtx) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A``; returns (nonzero rows, pivot columns)."""
    p = ctx.p
    A = np.array(A, dtype=np.int64) % p
    m = A.shape[0]
    pivots: list[int] = []
    r = 0
    while r < m:
        live = A[r:].any(axis=2)
        cols = np.flatnonzero(live.any(axis=0))
        if cols.size == 0:
            break
        c = int(cols[0])
        pr = r + int(np.flatnonzero(live[:, c])[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = ctx.inv_coeffs(A[r, c])
        A[r] = ctx.mul(A[r], inv)
        others = np.flatnonzero(A[:, c].any(axis=1))
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - ctx.mul(A[others, c][:, None, :], A[r][None])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


class Echelon:
    """Row space kept in reduced echelon form while rows are streamed in.

    New rows are first reduced against the current basis with one matrix
    product, then eliminated among themselves in chunks, so wide systems
    never need to be materialised in full.
    """

    def __init__(self, ctx: FieldCtx, ncols: int, chunk: int = 64):
        self.ctx = ctx
        self.ncols = ncols
        self.chunk = chunk
        self.R = np.zeros((0, ncols, ctx.d), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return self.ncols - self.rank

    def reduce(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64) % self.ctx.p
        if self.rank == 0:
            return rows
        return (rows - self.ctx.matmul(rows[:, self.pivots], self.R)) % self.ctx.p

    def add_rows(self, rows: np.ndarray) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        for start in range(0, rows.shape[0], self.chunk):
            block = rows[start:start + self.chunk]
            block = block[block.any(axis=(1, 2))]
            if block.shape[0] == 0:
                continue
            block = self.reduce(block)
            block = block[block.any(axis=(1, 2))]
            if block.shape[0] == 0:
                continue
            new, piv = rref(block, self.ctx)
            if not piv:
                continue
            piv = np.array(piv, dtype=np.int64)
            R = self.R
            if R.shape[0]:
                R = (R - self.ctx.matmul(R[:, piv], new)) % self.ctx.p
            R = np.concatenate([R, new])
            pivots = np.concatenate([self.pivots, piv])
            order = np.argsort(pivots, kind="stable")
            self.R, self.pivots = R[order], pivots[order]

    def contains(self, vec: np.ndarray) -> bool:
        vec = np.asarray(vec, dtype=np.int64).reshape(1, self.ncols, self.ctx.d)
        return not self.reduce(vec).any()

    def kernel(self) -> np.ndarray:
        """Basis of {v : Rv = 0}, one vector per free column, pivot entries solved."""
        d = self.ctx.d
        free = np.setdiff1d(np.arange(self.ncols), self.pivots)
        K = np.zeros((free.size, self.ncols, d), dtype=np.int64)
        K[np.arange(free.size), free, 0] = 1
        if self.rank and free.size:
            K[:, self.pivots] = (-self.R[:, free]).transpose(1, 0, 2) % self.ctx.p
        return K

    def basis(self) -> np.ndarray:
        return self.R.copy()


def rank(A: Matrix) -> int:
    ech = Echelon(A.ctx, A.cols)
    ech.add_rows(A.data)
    return ech.rank


def nullspace(A: Matrix) -> Matrix:
    """Basis of the right kernel of ``A``, returned as the rows of a matrix.

    Each basis vector has a single 1 in one free column and zeros in the
    other free columns (reduced echelon normalisation).
    """
    ech = Echelon(A.ctx, A.cols)
    ech.add_rows(A.data)
    return Matrix(A.ctx, ech.kernel())


def in_row_space(vec: np.ndarray, rows: np.ndarray, ctx: FieldCtx) -> bool:
    ech = Echelon(ctx, rows.shape[1])
    ech.add_rows(rows)
    return ech.contains(vec)
