"""Closed-form Ext classification between simple U_chi(W)-modules.

The Verma-Verma part works through a-data: an extension
0 -> V(lam) -> M -> K_{lam'} -> 0 of W_0-modules is recorded by the scalars
a_j with e_j w' = a_j w_{[lam - lam' - j]}, j = 1..p-2.  Everything from
a_3 onward is forced by (a_1, a_2) through a three-term recursion.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConditionsViolated, IndexOutOfRange, MixedCharacters, NotClassified,
                     NotSimple, UnsupportedHeight, WeightNotInLambda)
from .gfield import FieldElement, Matrix
from .linalg import nullspace
from .modules import (NOT_CLASSIFIED_MESSAGE, SIMPLE_S, SYMBOLIC_L, TRIVIAL, VERMA, ModuleRep,
                      ModuleSpec, build_verma, falling_factorial, restrict_to_W0, simple_modules)
from .witt import PCharacter, canonical_rep, weight_set

CLOSED_FORM, ORACLE_FULL, ORACLE_REDUCED = "closed_form", "oracle_full", "oracle_reduced"


@dataclass(frozen=True)
class ADatum:
    """(a_1, ..., a_{p-2}) for an extension of K_{lam'} by V_chi(lam)."""

    a: tuple[FieldElement, ...]
    lam: FieldElement
    lam_prime: FieldElement
    chi: PCharacter

    def __call__(self, j: int) -> FieldElement:
        """a_j, with a_j = 0 outside 1..p-2."""
        if 1 <= j <= len(self.a):
            return self.a[j - 1]
        return self.chi.ctx.zero

    @property
    def is_zero(self) -> bool:
        return not any(self.a)

    def to_json(self) -> dict:
        return {"a": [x.to_json() for x in self.a], "lambda": self.lam.to_json(),
                "lambda_prime": self.lam_prime.to_json(), "chi": self.chi.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ADatum":
        chi = PCharacter.from_json(obj["chi"])
        ctx = chi.ctx
        return cls(tuple(ctx(x) for x in obj["a"]), ctx(obj["lambda"]), ctx(obj["lambda_prime"]), chi)


@dataclass
class ExtResult:
    dim: int
    method: str = CLOSED_FORM
    witnesses: list = field(default_factory=list)
    dim_z: int | None = None
    dim_b: int | None = None

    def to_json(self) -> dict:
        out = {"dim": self.dim, "method": self.method}
        if self.dim_z is not None:
            out["dimZ"], out["dimB"] = self.dim_z, self.dim_b
        return out


def _weights(lam, lam_prime, chi: PCharacter) -> tuple[FieldElement, FieldElement]:
    if chi.height > 1:
        raise UnsupportedHeight("Verma extensions need height <= 1")
    ws = weight_set(chi)
    lam, lam_prime = chi.ctx(lam), chi.ctx(lam_prime)
    for x in (lam, lam_prime):
        if x not in ws:
            raise WeightNotInLambda(f"{x} is not in Lambda(chi)")
    return lam, lam_prime


def _is_int(x: FieldElement, values) -> bool:
    return x.in_prime_field() and int(x) in {v % x.ctx.p for v in values}


def theta_membership(lam, lam_prime, chi: PCharacter) -> bool:
    """Whether (lam, lam') is diagonal or one of (0, p-1), (p-1, 0)."""
    lam, lam_prime = _weights(lam, lam_prime, chi)
    p = chi.p
    if lam == lam_prime:
        return True
    return (_is_int(lam, [0]) and _is_int(lam_prime, [p - 1])) or \
        (_is_int(lam, [p - 1]) and _is_int(lam_prime, [0]))


# -- recursion and closed-form coefficients ------------------------------

def _prod(factors, one: FieldElement) -> FieldElement:
    out = one
    for f in factors:
        out = out * f
    return out


def adatum_recursion_step(j: int, a_1, a_j, lam: FieldElement, lam_prime: FieldElement) -> FieldElement:
    """a_{j+1} from a_1 and a_j via the [e_1, e_j] relation on w'."""
    ctx = lam.ctx
    p = ctx.p
    if not 2 <= j <= p - 3:
        raise IndexOutOfRange(f"recursion defined for 2 <= j <= p-3, got {j}")
    diff = lam - lam_prime
    first = _prod((diff - k for k in range(1, j + 1)), ctx.one) * (j * (lam + 1) + lam_prime + 1) * a_1
    if j % 2 == 0:
        first = -first
    second = (diff - j) * (lam + lam_prime + j + 1) * a_j
    return (first - second) / (j - 1)


def extend_adatum(a_1, a_2, lam, lam_prime, chi: PCharacter) -> ADatum:
    """Complete (a_1, a_2) to a full a-datum with the recursion."""
    lam, lam_prime = _weights(lam, lam_prime, chi)
    ctx, p = chi.ctx, chi.p
    a = [ctx(a_1), ctx(a_2)][: p - 2]
    for j in range(2, p - 2):
        a.append(adatum_recursion_step(j, a[0], a[j - 1], lam, lam_prime))
    return ADatum(tuple(a), lam, lam_prime, chi)


def _check_coeff_index(j: int, p: int) -> None:
    if not 3 <= j <= p - 2:
        raise IndexOutOfRange(f"closed forms defined for 3 <= j <= p-2, got {j}")


def coeff_A(j: int, lam: FieldElement, lam_prime: FieldElement) -> FieldElement:
    """Coefficient of a_1 in a_j (closed form)."""
    ctx = lam.ctx
    p = ctx.p
    _check_coeff_index(j, p)
    one = ctx.one
    diff, s = lam - lam_prime, lam + lam_prime
    inner = (j - 1) * lam + lam_prime + j
    for k in range(4, j + 1):
        ratio = ctx(falling_factorial(j - k, j - k, p)) / falling_factorial(j - 3, j - 3, p)
        tail = _prod((s + j - l for l in range(0, k - 3)), one)
        inner = inner + ratio * ((j + 2 - k) * lam + lam_prime + (j + 3 - k)) * tail
    lead = _prod((diff - k for k in range(1, j)), one) / (j - 2)
    if j % 2:
        lead = -lead
    return lead * inner


def coeff_B(j: int, lam: FieldElement, lam_prime: FieldElement) -> FieldElement:
    """Coefficient of a_2 in a_j (closed form)."""
    ctx = lam.ctx
    p = ctx.p
    _check_coeff_index(j, p)
    diff, s = lam - lam_prime, lam + lam_prime
    out = _prod(((diff - k) * (s + k + 1) for k in range(2, j)), ctx.one)
    out = out / falling_factorial(j - 2, j - 2, p)
    return -out if j % 2 else out


# -- module conditions -----------------------------------------------------

def _condition_residuals(a: ADatum) -> list[tuple[str, tuple[int, ...], FieldElement]]:
    """Every scalar that must vanish for M_a to be a U_chi(W_0)-module.

    Each residual is linear in the a-datum.
    """
    chi, lam, lamp = a.chi, a.lam, a.lam_prime
    p, h = chi.p, chi.height
    out = []

    # the recursion itself (i = 1, 2 <= j <= p-3)
    for j in range(2, p - 2):
        out.append(("recursion", (1, j), a(j + 1) - adatum_recursion_step(j, a(1), a(j), lam, lamp)))

    def m(i):
        return canonical_rep(lam - lamp - i)

    pairs = [(1, p - 2), (p - 2, 1)] + [(x, y) for x in range(2, p - 1) for y in range(2, p - 1) if x != y]
    for i, j in pairs:
        mi, mj = m(i), m(j)
        if i > mj and j > mi:
            out.append(("vanishing", (i, j), a(i + j)))
        elif i > mj and j <= mi:
            rhs = falling_factorial(mi, j, p) * (j * (lam + 1) + lamp + i) * a(i)
            if j % 2 == 0:
                rhs = -rhs
            out.append(("one_sided", (i, j), (j - i) * a(i + j) - rhs))
        elif i <= mj and j <= mi:
            t1 = falling_factorial(mj, i, p) * (i * (lam + 1) + lamp + j) * a(j)
            t2 = falling_factorial(mi, j, p) * (j * (lam + 1) + lamp + i) * a(i)
            if i % 2:
                t1 = -t1
            if j % 2:
                t2 = -t2
            out.append(("two_sided", (i, j), (j - i) * a(i + j) - (t1 - t2)))
        # i <= m_j with j > m_i is the (j, i) instance of the one-sided case

    if lam == lamp and (h == 1 or (h <= 0 and 2 * lam == p - 1)):
        out.append(("p_character", (1,), a(1)))
    return out


def check_conditions(a: ADatum) -> list[tuple[str, tuple[int, ...]]]:
    """Violated conditions as (name, indices); empty when M_a is a module."""
    return [(name, idx) for name, idx, val in _condition_residuals(a) if val]


def build_Ma(a: ADatum) -> ModuleRep:
    """The (p+1)-dimensional W_0-module with basis w_0..w_{p-1}, w'."""
    bad = check_conditions(a)
    if bad:
        raise ConditionsViolated(f"a-datum violates {bad[:5]}")
    chi, ctx, p = a.chi, a.chi.ctx, a.chi.p
    V = restrict_to_W0(build_verma(chi, a.lam))
    actions = {}
    for j in range(0, p - 1):
        data = np.zeros((p + 1, p + 1, ctx.d), dtype=np.int64)
        data[:p, :p] = V[j].data
        if j == 0:
            data[p, p] = a.lam_prime.coeffs
        else:
            data[canonical_rep(a.lam - a.lam_prime - j), p] = a(j).coeffs
        actions[j] = Matrix(ctx, data)
    return ModuleRep(ctx, chi, actions)


def _normalization(lam, lam_prime, chi) -> int | None:
    """Index of the a-coordinate forced to zero when the a-datum needs normalising."""
    if theta_membership(lam, lam_prime, chi):
        return None
    return 2 if lam + lam_prime == chi.p - 1 else 1


def adatum_solutions(lam, lam_prime, chi: PCharacter) -> list[ADatum]:
    """Basis of the normalised a-data satisfying every module condition."""
    lam, lam_prime = _weights(lam, lam_prime, chi)
    ctx = chi.ctx
    cols = []
    for a1, a2 in ((1, 0), (0, 1)):
        res = _condition_residuals(extend_adatum(a1, a2, lam, lam_prime, chi))
        cols.append([v for _, _, v in res])
    rows = [[c1, c2] for c1, c2 in zip(*cols)]
    fixed = _normalization(lam, lam_prime, chi)
    if fixed is not None:
        rows.append([ctx.one, ctx.zero] if fixed == 1 else [ctx.zero, ctx.one])
    basis = nullspace(Matrix.from_rows(ctx, rows))
    out = []
    for k in range(basis.rows):
        a = extend_adatum(basis[k, 0], basis[k, 1], lam, lam_prime, chi)
        lead = next(x for x in a.a if x)
        out.append(extend_adatum(a(1) / lead, a(2) / lead, lam, lam_prime, chi))
    return out


# -- the case tree --------------------------------------------------------

def _w0_dim(lam: FieldElement, lamp: FieldElement, chi: PCharacter) -> int:
    p, h = chi.p, chi.height
    if lam == lamp:
        return int(h <= 0 and _is_int(lam, [0, p - 1]))
    if theta_membership(lam, lamp, chi):
        return 1
    n = canonical_rep(lam - lamp)
    if lam + lamp != p - 1:
        if n == 1:
            return int(_is_int(lam, [1, p - 1]))
        if n in (2, 3):
            return 1
        if n == 4:
            return int(p > 5 or _is_int(lam, [0, 3]))
        if n == 5:
            return int(_is_int(lam, [0, 4]))
        if n == 6:
            # 2 lam = 5 +- sqrt(19), squared out
            return int(p > 7 and not (2 * lam * lam - 10 * lam + 3))
        return 0
    return int(n in (2, 3, 4) or (n == 6 and p == 19))


def classify_w0_ext(lam, lam_prime, chi: PCharacter, witnesses: bool = True) -> ExtResult:
    """dim Ext_{U_chi(W_0)}(K_{lam'}, V_chi(lam)), equivalently
    dim Ext_{U_chi(W)}(V_chi(lam'), V_chi(lam))."""
    lam, lam_prime = _weights(lam, lam_prime, chi)
    dim = _w0_dim(lam, lam_prime, chi)
    wit = adatum_solutions(lam, lam_prime, chi) if witnesses and dim else []
    return ExtResult(dim, CLOSED_FORM, wit)


def classify_ext_simple(M: ModuleSpec, N: ModuleSpec, witnesses: bool = False) -> ExtResult:
    """dim Ext^1(M, N), classifying sequences 0 -> N -> E -> M -> 0."""
    if M.chi != N.chi:
        raise MixedCharacters("modules have different p-characters")
    chi = M.chi
    p, h = chi.p, chi.height
    if 1 < h < p - 1:
        raise NotClassified(NOT_CLASSIFIED_MESSAGE)
    for spec in (M, N):
        if not spec.is_simple:
            raise NotSimple(f"{spec.label} is not simple for this character")
    if h == p - 1:
        return ExtResult(int(M.kind == N.kind == SYMBOLIC_L))
    if M.kind == VERMA and N.kind == VERMA:
        return classify_w0_ext(N.weight, M.weight, chi, witnesses=witnesses)
    # height -1 with K or S involved; Verma weights are integers 1..p-2 here
    kinds = (M.kind, N.kind)
    if kinds in ((TRIVIAL, SIMPLE_S), (SIMPLE_S, TRIVIAL)):
        return ExtResult(2)
    if M.kind == N.kind:
        return ExtResult(0)
    if kinds == (VERMA, TRIVIAL):
        return ExtResult(int(M.offset == p - 2))
    if kinds == (TRIVIAL, VERMA):
        return ExtResult(int(N.offset == 1))
    if kinds == (VERMA, SIMPLE_S):
        return ExtResult(int(M.offset in (p - 3, p - 4, p - 5)))
    if kinds == (SIMPLE_S, VERMA):
        return ExtResult(int(N.offset in (2, 3, 4)))
    raise AssertionError(f"unhandled pair {kinds}")


@dataclass
class ExtTable:
    chi: PCharacter
    simples: list[ModuleSpec]
    dims: list[list[int]]

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.simples]

    def to_json(self) -> dict:
        return {"p": self.chi.p, "chi": self.chi.to_json(), "height": self.chi.height,
                "simples": [s.to_json() for s in self.simples], "dims": self.dims}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.labels)
            w.writerows(self.dims)
            return buf.getvalue()
        if fmt == "md":
            head = "| Ext(M,N) | " + " | ".join(self.labels) + " |"
            sep = "|---" * (len(self.labels) + 1) + "|"
            body = [f"| {lab} | " + " | ".join(map(str, row)) + " |" for lab, row in zip(self.labels, self.dims)]
            return "\n".join([head, sep, *body]) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def ext_table(chi: PCharacter, classifier=None) -> ExtTable:
    """Rows are M, columns are N, entries dim Ext^1(M, N)."""
    classify = classifier or classify_ext_simple
    simples = simple_modules(chi)
    dims = [[classify(M, N).dim for N in simples] for M in simples]
    return ExtTable(chi, simples, dims)
