"""Matrix models of the simple U_chi(W)-modules and their building blocks.

Action matrices act on column vectors: entry ``[r, c]`` of the matrix of e_j
is the coefficient of basis vector r in e_j . (basis vector c).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .errors import (NonzeroCharacter, NotClassified, UnsupportedHeight, WeightNotInLambda,
                     WittExtError)
from .gfield import FieldCtx, FieldElement, Matrix
from .witt import PCharacter, WittAlgebra, weight_set

TRIVIAL, SIMPLE_S, VERMA, SYMBOLIC_L = "Trivial", "S", "Verma", "L"

NOT_CLASSIFIED_MESSAGE = (
    "heights strictly between 1 and p-1 are not classified: there is a unique simple "
    "module up to isomorphism, it has a non-trivial self-extension, and the dimension "
    "of its Ext group is not determined")


def falling_factorial(n: int, k: int, p: int) -> int:
    """n (n-1) ... (n-k+1) mod p, i.e. n!/(n-k)! without division."""
    out = 1
    for t in range(k):
        out = out * (n - t) % p
    return out


@dataclass(frozen=True)
class ModuleSpec:
    kind: str
    chi: PCharacter
    weight: FieldElement | None = None

    def __post_init__(self):
        h = self.chi.height
        if self.kind in (TRIVIAL, SIMPLE_S):
            if h != -1:
                raise NonzeroCharacter(f"{self.kind} needs chi = 0")
        elif self.kind == VERMA:
            if h > 1:
                raise UnsupportedHeight("Verma modules need height <= 1")
            if self.weight is None or self.weight not in weight_set(self.chi):
                raise WeightNotInLambda(f"{self.weight} is not in Lambda(chi)")
            object.__setattr__(self, "weight", self.chi.ctx(self.weight))
        elif self.kind == SYMBOLIC_L:
            if h != self.chi.p - 1:
                raise UnsupportedHeight("L exists only at height p-1")
        else:
            raise ValueError(f"unknown module kind {self.kind!r}")

    @property
    def offset(self) -> int | None:
        """Integer i with weight = base_root + i (Verma only)."""
        if self.kind != VERMA:
            return None
        return weight_set(self.chi).offset(self.weight)

    @property
    def label(self) -> str:
        if self.kind == TRIVIAL:
            return "K"
        if self.kind == SIMPLE_S:
            return "S"
        if self.kind == SYMBOLIC_L:
            return "L"
        return f"V{self.offset}"

    @property
    def is_simple(self) -> bool:
        if self.kind == VERMA and self.chi.height == -1:
            return 1 <= self.offset <= self.chi.p - 2
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "label": self.label,
                "weight": None if self.weight is None else self.weight.to_json()}


def verma_spec(chi: PCharacter, lam) -> ModuleSpec:
    return ModuleSpec(VERMA, chi, chi.ctx(lam))


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """A module given by one action matrix per basis element of W or W_0."""

    ctx: FieldCtx
    chi: PCharacter
    actions: Mapping[int, Matrix]

    @property
    def dim(self) -> int:
        return next(iter(self.actions.values())).rows

    @property
    def algebra(self) -> str:
        return "W" if -1 in self.actions else "W0"

    @property
    def indices(self) -> list[int]:
        return sorted(self.actions)

    def __getitem__(self, i: int) -> Matrix:
        return self.actions[i]

    def __eq__(self, other):
        if not isinstance(other, ModuleRep):
            return NotImplemented
        return (self.ctx == other.ctx and self.chi == other.chi
                and self.indices == other.indices
                and all(self.actions[i] == other.actions[i] for i in self.indices))

    def weights(self) -> list[FieldElement] | None:
        """Diagonal of the e_0 action when it is diagonal, else None."""
        A = self.actions[0].data
        off = A.copy()
        off[np.arange(self.dim), np.arange(self.dim)] = 0
        if off.any():
            return None
        return [self.actions[0][i, i] for i in range(self.dim)]

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "field": self.ctx.to_json(),
            "dim": self.dim,
            "chi": self.chi.to_json(),
            "actions": {str(i): self.actions[i].to_json() for i in self.indices},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ModuleRep":
        ctx = FieldCtx.from_json(obj["field"])
        chi = PCharacter.from_json(obj["chi"], ctx)
        dim = int(obj["dim"])
        actions = {}
        for k, v in obj["actions"].items():
            arr = np.array(v, dtype=np.int64).reshape(dim, dim, ctx.d)
            actions[int(k)] = Matrix(ctx, arr)
        return cls(ctx, chi, actions)


def _rep(chi: PCharacter, data: dict[int, np.ndarray]) -> ModuleRep:
    return ModuleRep(chi.ctx, chi, {i: Matrix(chi.ctx, a) for i, a in sorted(data.items())})


def build_verma(chi: PCharacter, lam) -> ModuleRep:
    """V_chi(lam) in the basis v_i = e_{-1}^i (x) 1, i = 0..p-1."""
    spec = verma_spec(chi, lam)
    ctx, p = chi.ctx, chi.p
    lam_c = np.array(spec.weight.coeffs, dtype=np.int64)
    data = {}
    for j in range(0, p - 1):
        A = np.zeros((p, p, ctx.d), dtype=np.int64)
        for i in range(j, p):
            scal = (-1) ** j * falling_factorial(i, j, p)
            # (j+1) lam - i + j
            entry = (j + 1) * lam_c
            entry[0] += j - i
            A[i - j, i] = (scal * entry) % p
        data[j] = A
    E = np.zeros((p, p, ctx.d), dtype=np.int64)
    for i in range(p - 1):
        E[i + 1, i, 0] = 1
    E[0, p - 1] = (chi(-1) ** p).coeffs
    data[-1] = E
    return _rep(chi, data)


def build_trivial(chi: PCharacter) -> ModuleRep:
    if chi.values:
        raise NonzeroCharacter("the trivial module has p-character 0")
    d = chi.ctx.d
    return _rep(chi, {i: np.zeros((1, 1, d), dtype=np.int64) for i in range(-1, chi.p - 1)})


def build_S(chi: PCharacter) -> ModuleRep:
    """The (p-1)-dimensional simple module: V_0(p-1) modulo its socle K v_{p-1}."""
    if chi.values:
        raise NonzeroCharacter("S exists only for chi = 0")
    ctx, p = chi.ctx, chi.p
    n = p - 1
    data = {}
    for j in range(0, p - 1):
        A = np.zeros((n, n, ctx.d), dtype=np.int64)
        for i in range(j, n):
            A[i - j, i, 0] = (-1) ** (j + 1) * falling_factorial(i + 1, j + 1, p) % p
        data[j] = A
    E = np.zeros((n, n, ctx.d), dtype=np.int64)
    for i in range(n - 1):
        E[i + 1, i, 0] = 1
    data[-1] = E
    return _rep(chi, data)


def build_k_lambda(chi: PCharacter, lam) -> ModuleRep:
    """One-dimensional W_0-module: e_0 acts by lam, e_i (i >= 1) by 0."""
    ctx = chi.ctx
    lam = ctx(lam)
    if lam not in weight_set(chi):
        raise WeightNotInLambda(f"{lam} is not in Lambda(chi)")
    data = {i: np.zeros((1, 1, ctx.d), dtype=np.int64) for i in range(0, chi.p - 1)}
    data[0][0, 0] = lam.coeffs
    return _rep(chi, data)


def build_module(spec: ModuleSpec) -> ModuleRep:
    if spec.kind == TRIVIAL:
        return build_trivial(spec.chi)
    if spec.kind == SIMPLE_S:
        return build_S(spec.chi)
    if spec.kind == VERMA:
        return build_verma(spec.chi, spec.weight)
    raise UnsupportedHeight("L has no matrix model")


def restrict_to_W0(rep: ModuleRep) -> ModuleRep:
    return ModuleRep(rep.ctx, rep.chi, {i: m for i, m in rep.actions.items() if i >= 0})


def quotient_by_coordinates(rep: ModuleRep, drop: list[int]) -> ModuleRep:
    """Quotient by the span of the basis vectors listed in ``drop``."""
    keep = [i for i in range(rep.dim) if i not in set(drop)]
    for i, m in rep.actions.items():
        if m.data[np.ix_(keep, drop)].any():
            raise WittExtError(f"span of {drop} is not stable under e_{i}")
    return ModuleRep(rep.ctx, rep.chi,
                     {i: Matrix(rep.ctx, m.data[np.ix_(keep, keep)]) for i, m in rep.actions.items()})


def dual_rep(rep: ModuleRep) -> ModuleRep:
    """Contragredient module: e_i acts by minus the transpose."""
    if rep.chi.height != -1:
        raise UnsupportedHeight("duals are only used at height -1")
    return ModuleRep(rep.ctx, rep.chi, {i: -m.T for i, m in rep.actions.items()})


def dualize(spec: ModuleSpec) -> ModuleSpec:
    if spec.chi.height != -1:
        raise UnsupportedHeight("duality is only tabulated at height -1")
    if spec.kind == VERMA:
        return verma_spec(spec.chi, spec.chi.p - 1 - spec.offset)
    return spec


def simple_modules(chi: PCharacter) -> list[ModuleSpec]:
    """One representative per isomorphism class of simple U_chi(W)-modules."""
    p, h = chi.p, chi.height
    if h == -1:
        return ([ModuleSpec(TRIVIAL, chi), ModuleSpec(SIMPLE_S, chi)]
                + [verma_spec(chi, lam) for lam in range(1, p - 1)])
    if h == 0:
        return [verma_spec(chi, lam) for lam in range(0, p - 1)]
    if h == 1:
        return [ModuleSpec(VERMA, chi, lam) for lam in weight_set(chi)]
    if h == p - 1:
        # every other simple module is projective
        return [ModuleSpec(SYMBOLIC_L, chi)]
    raise NotClassified(NOT_CLASSIFIED_MESSAGE)


class Violation(NamedTuple):
    kind: str           # "bracket" or "p_character"
    indices: tuple[int, ...]

    def __str__(self):
        if self.kind == "bracket":
            i, j = self.indices
            return f"bracket violated at (e_{i}, e_{j})"
        return f"p-character violated at e_{self.indices[0]}"


def check_module(rep: ModuleRep) -> list[Violation]:
    """All violated module axioms (empty list means the rep is a module).

    Checks [e_i, e_j] = e_i e_j - e_j e_i on every basis pair and
    e_i^p = e_i^[p] + chi(e_i)^p on every basis element.  The basis check
    suffices: once the bracket relations hold, x -> x^p - x^[p] - chi(x)^p
    is p-semilinear (Jacobson's formula).
    """
    p, ctx = rep.ctx.p, rep.ctx
    algebra = WittAlgebra(p)
    idx = rep.indices
    zero = Matrix.zeros(ctx, rep.dim, rep.dim)
    ident = Matrix.identity(ctx, rep.dim)
    out = []
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            br = algebra.bracket(i, j)
            lhs = zero
            if br is not None and br[1] in rep.actions:
                lhs = rep[br[1]].scale(br[0])
            if lhs != rep[i] @ rep[j] - rep[j] @ rep[i]:
                out.append(Violation("bracket", (i, j)))
    for i in idx:
        target = ident.scale(rep.chi(i) ** p)
        if algebra.p_map(i) is not None:
            target = target + rep[algebra.p_map(i)]
        if rep[i].power(p) != target:
            out.append(Violation("p_character", (i,)))
    return out


def evaluate(rep: ModuleRep, coeffs: Mapping[int, FieldElement]) -> Matrix:
    """Action matrix of the algebra element sum c_i e_i."""
    total = Matrix.zeros(rep.ctx, rep.dim, rep.dim)
    for i, c in coeffs.items():
        total = total + rep[i].scale(c)
    return total


def p_power_element(p: int, coeffs: Mapping[int, FieldElement], ctx: FieldCtx) -> dict[int, FieldElement]:
    """x^[p] for x = sum c_i e_i, computed in the adjoint representation.

    ad(x^[p]) = ad(x)^p and W has trivial centre, so x^[p] is the unique
    element whose adjoint matrix equals ad(x)^p.
    """
    algebra = WittAlgebra(p)
    ad = Matrix.zeros(ctx, p, p)
    for i, c in coeffs.items():
        ad = ad + Matrix(ctx, algebra.ad_matrix(i)[:, :, None] * np.eye(1, ctx.d, dtype=np.int64)).scale(c)
    target = ad.power(p)
    # solve sum y_k ad(e_k) = target column by column via a linear system
    from .linalg import Echelon
    n = p * p
    cols = [Matrix(ctx, algebra.ad_matrix(k)[:, :, None] * np.eye(1, ctx.d, dtype=np.int64)).data.reshape(n, ctx.d)
            for k in algebra.indices]
    system = np.stack(cols + [(-target.data).reshape(n, ctx.d)], axis=1)
    ech = Echelon(ctx, p + 1)
    ech.add_rows(system)
    sol = ech.kernel()
    assert sol.shape[0] == 1 and sol[0, -1].any()
    scale = ctx(sol[0, -1].tolist()).inverse()
    return {k: ctx(sol[0, pos].tolist()) * scale for pos, k in enumerate(algebra.indices)}

