"""Brute-force Ext^1 by linear algebra, independent of the closed forms.

An extension 0 -> N -> E -> M -> 0 is modelled on N (+) M with
rho_E(x) = [[rho_N(x), phi(x)], [0, rho_M(x)]].  The blocks phi(e_i) are the
unknowns; E is a module with the right p-character exactly when phi solves
the bracket and p-power equations below.  Coboundaries come from changing
the splitting by some h in Hom_K(M, N).

Vectorisation is row-major, so vec(A X B) = (A kron B^T) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionOverflow, MixedCharacters, WittExtError
from .extform import ORACLE_FULL, ORACLE_REDUCED, ADatum, ExtResult, _weights
from .gfield import FieldCtx, Matrix
from .linalg import Echelon
from .modules import ModuleRep, build_verma, restrict_to_W0
from .witt import PCharacter, WittAlgebra, canonical_rep

DEFAULT_SIZE_GUARD = 4000


def _kron(ctx: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    m, n, d = A.shape
    r, s, _ = B.shape
    out = ctx.mul(A[:, None, :, None, :], B[None, :, None, :, :])
    return out.reshape(m * r, n * s, d)


def _eye(ctx: FieldCtx, n: int) -> np.ndarray:
    return Matrix.identity(ctx, n).data


def _left(ctx, A, ncols):
    """Coefficient matrix of X -> A X on row-major vec(X) with X having ``ncols`` columns."""
    return _kron(ctx, A, _eye(ctx, ncols))


def _right(ctx, B, nrows):
    """Coefficient matrix of X -> X B."""
    return _kron(ctx, _eye(ctx, nrows), np.ascontiguousarray(B.transpose(1, 0, 2)))


def _op_columns(ctx: FieldCtx, A, B, cols: np.ndarray, nN: int, nM: int) -> np.ndarray:
    """Columns ``cols`` of the matrix of X -> A X B (None meaning identity)."""
    rs, qs = cols // nM, cols % nM
    left = (A if A is not None else _eye(ctx, nN))[:, rs]                     # (nN, K, d)
    right = (B if B is not None else _eye(ctx, nM))[qs].transpose(1, 0, 2)   # (nM, K, d)
    return ctx.mul(left[:, None], right[None]).reshape(nN * nM, len(cols), ctx.d)


def _algebra_indices(p: int, algebra: str) -> list[int]:
    if algebra == "W":
        return list(range(-1, p - 1))
    if algebra == "W0":
        return list(range(0, p - 1))
    raise ValueError(f"algebra must be 'W' or 'W0', got {algebra!r}")


def _check_pair(repM: ModuleRep, repN: ModuleRep, algebra: str) -> None:
    if repM.chi != repN.chi or repM.ctx != repN.ctx:
        raise MixedCharacters("modules have different p-characters or fields")
    for rep in (repM, repN):
        missing = set(_algebra_indices(rep.ctx.p, algebra)) - set(rep.actions)
        if missing:
            raise WittExtError(f"module lacks actions for {sorted(missing)} needed over {algebra}")


@dataclass
class CocycleSystem:
    """Unknowns and constraints for Z^1(algebra; Hom(M, N)) with p-power conditions.

    In graded mode phi(e_0) is fixed to 0 and each phi(e_k) keeps only the
    entries (r, c) with wt_N(r) - wt_M(c) = k.  This needs e_0 to act
    diagonally on both modules, which holds for every module built here.
    """

    repM: ModuleRep
    repN: ModuleRep
    algebra: str = "W"
    graded: bool = False
    index: list[int] = field(init=False)
    cols: dict[int, np.ndarray] = field(init=False)

    def __post_init__(self):
        _check_pair(self.repM, self.repN, self.algebra)
        ctx = self.ctx
        nN, nM = self.repN.dim, self.repM.dim
        self.index = _algebra_indices(ctx.p, self.algebra)
        flat = np.arange(nN * nM)
        if not self.graded:
            self.cols = {i: flat for i in self.index}
        else:
            wN, wM = self.repN.weights(), self.repM.weights()
            if wN is None or wM is None:
                raise WittExtError("graded mode needs e_0 to act diagonally")
            diff = [[wN[r] - wM[c] for c in range(nM)] for r in range(nN)]
            self.cols = {}
            for k in self.index:
                if k == 0:
                    continue
                keep = [r * nM + c for r in range(nN) for c in range(nM) if diff[r][c] == k]
                self.cols[k] = np.array(keep, dtype=np.int64)
        self.offsets = {}
        total = 0
        for k in self.index:
            if k in self.cols:
                self.offsets[k] = total
                total += len(self.cols[k])
        self.n_unknowns = total

    @property
    def ctx(self) -> FieldCtx:
        return self.repM.ctx

    @property
    def block_size(self) -> int:
        return self.repN.dim * self.repM.dim

    def _columns(self, k: int, A: np.ndarray | None, B: np.ndarray | None) -> np.ndarray:
        return _op_columns(self.ctx, A, B, self.cols[k], self.repN.dim, self.repM.dim)

    def _place(self, rows: int, blocks: dict[int, list]) -> np.ndarray:
        """Assemble full-width rows; each block is a list of column matrices to add."""
        out = np.zeros((rows, self.n_unknowns, self.ctx.d), dtype=np.int64)
        for k, terms in blocks.items():
            if k not in self.cols or not len(self.cols[k]):
                continue
            off = self.offsets[k]
            for sign, A, B in terms:
                out[:, off:off + len(self.cols[k])] += sign * self._columns(k, A, B)
        return out % self.ctx.p

    def constraint_blocks(self):
        """Yield row blocks of the constraint matrix (bracket pairs, then p-powers)."""
        ctx, p = self.ctx, self.ctx.p
        M, N = self.repM, self.repN
        nN, nM = N.dim, M.dim
        algebra = WittAlgebra(p)
        for a, i in enumerate(self.index):
            for j in self.index[a + 1:]:
                if self.graded and (i == 0 or j == 0):
                    continue   # automatic once phi is graded
                # phi([e_i, e_j]) - N_i phi_j + phi_j M_i + N_j phi_i - phi_i M_j = 0
                blocks = {j: [(-1, N[i].data, None), (1, None, M[i].data)],
                          i: [(1, N[j].data, None), (-1, None, M[j].data)]}
                br = algebra.bracket(i, j)
                if br is not None and br[1] in self.index:
                    c, k = br
                    blocks.setdefault(k, []).append((c, None, None))
                yield self._place(nN * nM, blocks)
        for i in self.index:
            if self.graded and i == 0:
                continue
            Np = [_eye(ctx, nN)]
            Mp = [_eye(ctx, nM)]
            for _ in range(p - 1):
                Np.append(ctx.matmul(Np[-1], N[i].data))
                Mp.append(ctx.matmul(Mp[-1], M[i].data))
            blocks = {i: [(1, Np[s], Mp[p - 1 - s]) for s in range(p)]}
            target = algebra.p_map(i)
            if target is not None:
                blocks.setdefault(target, []).append((-1, None, None))
            yield self._place(nN * nM, blocks)

    def coboundary_vectors(self) -> np.ndarray:
        """delta(h) for every elementary h allowed in this mode, as rows."""
        ctx, p = self.ctx, self.ctx.p
        nN, nM = self.repN.dim, self.repM.dim
        hs = np.arange(self.block_size)
        if self.graded:
            wN, wM = self.repN.weights(), self.repM.weights()
            hs = np.array([r * nM + c for r in range(nN) for c in range(nM) if wN[r] == wM[c]],
                          dtype=np.int64)
        blocks = {}
        for i in self.index:
            # column h of (L_i - R_i) is delta(E_h)(e_i)
            D = (_left(ctx, self.repN[i].data, nM) - _right(ctx, self.repM[i].data, nN)) % p
            blocks[i] = np.ascontiguousarray(D[:, hs].transpose(1, 0, 2))
        out = np.zeros((len(hs), self.n_unknowns, ctx.d), dtype=np.int64)
        for k, coef in blocks.items():
            if k in self.cols and len(self.cols[k]):
                off = self.offsets[k]
                out[:, off:off + len(self.cols[k])] = coef[:, self.cols[k]]
        return out

    def equivariant_count(self) -> int:
        if not self.graded:
            return self.block_size
        wN, wM = self.repN.weights(), self.repM.weights()
        return sum(1 for x in wN for y in wM if x == y)

    def unpack(self, vec: np.ndarray) -> dict[int, Matrix]:
        """Full dense blocks phi(e_i) from a solution vector."""
        ctx = self.ctx
        nN, nM = self.repN.dim, self.repM.dim
        out = {}
        for i in self.index:
            blk = np.zeros((self.block_size, ctx.d), dtype=np.int64)
            if i in self.cols and len(self.cols[i]):
                off = self.offsets[i]
                blk[self.cols[i]] = vec[off:off + len(self.cols[i])]
            out[i] = Matrix(ctx, blk.reshape(nN, nM, ctx.d))
        return out


def pack(cocycle: dict[int, Matrix], index: list[int]) -> np.ndarray:
    """Row-major concatenation of the blocks phi(e_i), i in ``index``."""
    return np.concatenate([cocycle[i].data.reshape(-1, cocycle[i].ctx.d) for i in index])


def hom_dim(repM: ModuleRep, repN: ModuleRep) -> int:
    """dim of {h : rho_N(x) h = h rho_M(x) for every basis x acting on both}.

    When e_0 acts diagonally on both sides only weight-preserving entries of
    h can be nonzero, so the other coordinates are dropped up front.
    """
    ctx, p = repM.ctx, repM.ctx.p
    nN, nM = repN.dim, repM.dim
    common = sorted(set(repM.actions) & set(repN.actions))
    cols = np.arange(nN * nM)
    wN, wM = (repN.weights(), repM.weights()) if 0 in common else (None, None)
    if wN is not None and wM is not None:
        cols = np.array([r * nM + c for r in range(nN) for c in range(nM) if wN[r] == wM[c]],
                        dtype=np.int64)
        common.remove(0)
    if not len(cols):
        return 0
    ech = Echelon(ctx, len(cols))
    for i in common:
        rows = _op_columns(ctx, repN[i].data, None, cols, nN, nM) - _op_columns(ctx, None, repM[i].data, cols, nN, nM)
        ech.add_rows(rows % p)
    return ech.nullity


def _guard(n_unknowns: int, ctx: FieldCtx, size_guard: int | None) -> None:
    limit = DEFAULT_SIZE_GUARD if size_guard is None else size_guard
    cost = n_unknowns * ctx.d
    if cost > limit:
        raise DimensionOverflow(f"{cost} unknowns over F_{ctx.p} exceed the size guard {limit}")


def _normalise(vec: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    nz = np.flatnonzero(vec.any(axis=1))
    if not nz.size:
        return vec
    inv = ctx.inv_coeffs(vec[nz[0]])
    return ctx.mul(vec, inv[None, :])


def _complement(ctx: FieldCtx, ncols: int, sub: np.ndarray, vecs: np.ndarray) -> list[np.ndarray]:
    """Vectors from ``vecs`` (in order) that are independent modulo span(sub)."""
    ech = Echelon(ctx, ncols)
    ech.add_rows(sub)
    picked = []
    for v in vecs:
        if not ech.contains(v):
            picked.append(v)
            ech.add_rows(v[None])
    return picked


def ext_dim_full(repM: ModuleRep, repN: ModuleRep, algebra: str = "W", graded: bool = False,
                 size_guard: int | None = None, witnesses: bool = False) -> ExtResult:
    """dim Ext^1(M, N) over U_chi(algebra) by solving the cocycle system."""
    system = CocycleSystem(repM, repN, algebra, graded)
    ctx = system.ctx
    _guard(system.n_unknowns, ctx, size_guard)
    ech = Echelon(ctx, system.n_unknowns, chunk=128)
    for rows in system.constraint_blocks():
        ech.add_rows(rows)
    dim_z = ech.nullity
    dim_b = system.equivariant_count() - hom_dim(repM, repN)
    wit = []
    if witnesses:
        Z = ech.kernel()
        for v in _complement(ctx, system.n_unknowns, system.coboundary_vectors(), Z):
            wit.append(system.unpack(_normalise(v, ctx)))
    return ExtResult(dim_z - dim_b, ORACLE_FULL, wit, dim_z, dim_b)


def coboundary_rank(repM: ModuleRep, repN: ModuleRep, algebra: str = "W", graded: bool = False) -> int:
    """dim B computed by materialising every coboundary vector."""
    system = CocycleSystem(repM, repN, algebra, graded)
    ech = Echelon(system.ctx, system.n_unknowns)
    ech.add_rows(system.coboundary_vectors())
    return ech.rank


def is_split(repM: ModuleRep, repN: ModuleRep, cocycle: dict[int, Matrix]) -> bool:
    """Whether the cocycle is a coboundary, i.e. the extension it defines splits."""
    index = sorted(cocycle)
    algebra = "W" if -1 in cocycle else "W0"
    system = CocycleSystem(repM, repN, algebra)
    ech = Echelon(system.ctx, system.n_unknowns)
    ech.add_rows(system.coboundary_vectors())
    return ech.contains(pack(cocycle, index))


def build_extension(repM: ModuleRep, repN: ModuleRep, cocycle: dict[int, Matrix]) -> ModuleRep:
    """The module N (+) M with action [[rho_N, phi], [0, rho_M]]."""
    ctx = repM.ctx
    nN, nM = repN.dim, repM.dim
    actions = {}
    for i, phi in cocycle.items():
        data = np.zeros((nN + nM, nN + nM, ctx.d), dtype=np.int64)
        data[:nN, :nN] = repN[i].data
        data[:nN, nN:] = phi.data
        data[nN:, nN:] = repM[i].data
        actions[i] = Matrix(ctx, data)
    return ModuleRep(ctx, repM.chi, dict(sorted(actions.items())))


def solver_report(pair, repM: ModuleRep, repN: ModuleRep, algebra: str = "W", graded: bool = False,
                  size_guard: int | None = None) -> dict:
    res = ext_dim_full(repM, repN, algebra, graded, size_guard, witnesses=True)
    return {
        "pair": list(pair),
        "algebra": algebra,
        "dimZ": res.dim_z,
        "dimB": res.dim_b,
        "ext": res.dim,
        "witnesses": [{str(i): m.to_json() for i, m in w.items()} for w in res.witnesses],
    }


# -- reduced solver in a-datum space ---------------------------------------

def _reduced_system(lam, lam_prime, chi: PCharacter):
    ctx, p = chi.ctx, chi.p
    V = restrict_to_W0(build_verma(chi, lam))
    diff = lam - lam_prime

    def m(j):
        return canonical_rep(diff - j)

    n = p - 2
    blocks = []

    def col(j):
        return j - 1   # unknown a_j sits at column j-1

    for i in range(0, p - 1):
        for j in range(i + 1, p - 1):
            # e_i e_j w' - e_j e_i w' - (j - i) e_{i+j} w' = 0, projected onto V
            rows = np.zeros((p, n, ctx.d), dtype=np.int64)
            rows[:, col(j)] += V[i].data[:, m(j)]
            if i == 0:
                rows[m(j), col(j)] -= lam_prime.coeffs
            else:
                rows[:, col(i)] -= V[j].data[:, m(i)]
            if i + j <= p - 2:
                rows[m(i + j), col(i + j), 0] -= (j - i)
            blocks.append(rows % p)
    for i in range(1, p - 1):
        # e_i^p w' = 0
        P = V[i].power(p - 1).data
        rows = np.zeros((p, n, ctx.d), dtype=np.int64)
        rows[:, col(i)] = P[:, m(i)]
        blocks.append(rows)
    base = canonical_rep(diff)
    c = np.zeros((1, n, ctx.d), dtype=np.int64)
    for j in range(1, p - 1):
        c[0, col(j)] = V[j].data[m(j), base]
    return np.concatenate(blocks), c


def ext_dim_reduced(lam, lam_prime, chi: PCharacter, witnesses: bool = False) -> ExtResult:
    """dim Ext_{U_chi(W_0)}(K_{lam'}, V(lam)) solved directly for the a-datum."""
    lam, lam_prime = _weights(lam, lam_prime, chi)
    ctx = chi.ctx
    A, c = _reduced_system(lam, lam_prime, chi)
    ech = Echelon(ctx, chi.p - 2)
    ech.add_rows(A)
    dim_z = ech.nullity
    if ctx.matmul(A, c.transpose(1, 0, 2)).any():
        raise WittExtError("coboundary vector fails the cocycle equations")
    dim_b = int(c.any())
    wit = []
    if witnesses:
        for v in _complement(ctx, chi.p - 2, c, ech.kernel()):
            v = _normalise(v, ctx)
            wit.append(ADatum(tuple(ctx(x.tolist()) for x in v), lam, lam_prime, chi))
    return ExtResult(dim_z - dim_b, ORACLE_REDUCED, wit, dim_z, dim_b)


def cocycle_from_adatum(a: ADatum) -> dict[int, Matrix]:
    """W_0-cocycle (p x 1 blocks) of the extension M_a of K_{lam'} by V(lam)."""
    ctx, p = a.chi.ctx, a.chi.p
    out = {}
    for j in range(0, p - 1):
        blk = np.zeros((p, 1, ctx.d), dtype=np.int64)
        if j:
            blk[canonical_rep(a.lam - a.lam_prime - j), 0] = a(j).coeffs
        out[j] = Matrix(ctx, blk)
    return out
