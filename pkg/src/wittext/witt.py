"""The restricted Witt algebra W(1;1), its p-characters and weight sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import IndexOutOfRange, NotInPrimeField, UnsupportedHeight, WrongFieldContext
from .gfield import FieldCtx, FieldElement, artin_schreier_modulus


@dataclass(frozen=True)
class WittAlgebra:
    """Basis e_{-1}, ..., e_{p-2} with [e_i, e_j] = (j - i) e_{i+j}."""

    p: int

    @property
    def indices(self) -> range:
        return range(-1, self.p - 1)

    @property
    def positive_indices(self) -> range:
        """Indices of the subalgebra W_0."""
        return range(0, self.p - 1)

    def _check(self, i: int) -> None:
        if i not in self.indices:
            raise IndexOutOfRange(f"e_{i} is not a basis element for p={self.p}")

    def bracket(self, i: int, j: int) -> tuple[int, int] | None:
        """``(coefficient mod p, index)`` of [e_i, e_j], or None when it vanishes."""
        self._check(i)
        self._check(j)
        k = i + j
        c = (j - i) % self.p
        if c == 0 or k not in self.indices:
            return None
        return c, k

    def p_map(self, i: int) -> int | None:
        self._check(i)
        return 0 if i == 0 else None

    def position(self, i: int) -> int:
        """Storage position (0..p-1) of e_i."""
        self._check(i)
        return i + 1

    def ad_matrix(self, i: int) -> np.ndarray:
        """Integer matrix of ad(e_i) in the basis e_{-1}, ..., e_{p-2}."""
        p = self.p
        M = np.zeros((p, p), dtype=np.int64)
        for j in self.indices:
            br = self.bracket(i, j)
            if br is not None:
                c, k = br
                M[self.position(k), self.position(j)] = c
        return M


def bracket(p: int, i: int, j: int) -> tuple[int, int] | None:
    return WittAlgebra(p).bracket(i, j)


@dataclass(frozen=True)
class PCharacter:
    """A functional chi on W, stored by its values on the basis.

    Values must lie in the prime subfield of ``ctx``; zero values are dropped.
    """

    ctx: FieldCtx
    values: Mapping[int, FieldElement] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        algebra = WittAlgebra(self.ctx.p)
        for i, v in self.values.items():
            i = int(i)
            algebra._check(i)
            v = self.ctx(v)
            if not v.in_prime_field():
                raise NotInPrimeField(f"chi(e_{i}) = {v} is not in F_{self.ctx.p}")
            if v:
                clean[i] = v
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "PCharacter":
        return cls(ctx, {})

    @property
    def p(self) -> int:
        return self.ctx.p

    def __call__(self, i: int) -> FieldElement:
        return self.values.get(i, self.ctx.zero)

    @property
    def height(self) -> int:
        return height(self)

    def __hash__(self):
        return hash((self.ctx, tuple((i, v.coeffs) for i, v in self.values.items())))

    def __eq__(self, other):
        if not isinstance(other, PCharacter):
            return NotImplemented
        return self.ctx == other.ctx and self.values == other.values

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "field": self.ctx.to_json(),
            "values": {str(i): v.to_json() for i, v in self.values.items()},
        }

    @classmethod
    def from_json(cls, obj: dict, ctx: FieldCtx | None = None) -> "PCharacter":
        if ctx is None:
            ctx = FieldCtx.from_json(obj["field"]) if "field" in obj else FieldCtx(int(obj["p"]))
        return cls(ctx, {int(k): ctx(v) for k, v in obj["values"].items()})


def height(chi: PCharacter) -> int:
    """Least i with chi vanishing on W_i = span(e_i, ..., e_{p-2})."""
    nonzero = [i for i, v in chi.values.items() if v]
    return max(nonzero) + 1 if nonzero else -1


def character_field(p: int, chi_e0: int = 0) -> FieldCtx:
    """Smallest field in scope holding the weights for the given chi(e_0)."""
    if chi_e0 % p == 0:
        return FieldCtx(p)
    return FieldCtx(p, artin_schreier_modulus(p, pow(chi_e0, p, p)))


def standard_character(p: int, height_: int, chi_em1: int | None = None,
                       chi_e0: int | None = None) -> PCharacter:
    """A representative character of the requested height.

    Defaults: height -1 -> chi = 0; height 0 -> chi(e_{-1}) = 1;
    height 1 -> chi(e_0) = 1; height r >= 2 -> chi(e_{r-1}) = 1.
    """
    if not -1 <= height_ <= p - 1:
        raise UnsupportedHeight(f"height must lie in -1..{p - 1}")
    if height_ == -1:
        em1, e0 = 0, 0
    elif height_ == 0:
        em1, e0 = (1 if chi_em1 is None else chi_em1), 0
    elif height_ == 1:
        em1, e0 = (0 if chi_em1 is None else chi_em1), (1 if chi_e0 is None else chi_e0)
    else:
        em1 = 0 if chi_em1 is None else chi_em1
        e0 = 0 if chi_e0 is None else chi_e0
    ctx = character_field(p, e0)
    values = {-1: ctx(em1), 0: ctx(e0)}
    if height_ >= 2:
        values[height_ - 1] = ctx.one
    chi = PCharacter(ctx, values)
    if chi.height != height_:
        raise ValueError(f"chi values {dict(values)} give height {chi.height}, not {height_}")
    return chi


@dataclass(frozen=True)
class WeightSet:
    """Lambda(chi) = {base_root + i : i in F_p}."""

    chi: PCharacter
    base_root: FieldElement

    @property
    def elements(self) -> list[FieldElement]:
        return [self.base_root + i for i in range(self.chi.p)]

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.chi.p

    def __contains__(self, lam) -> bool:
        lam = self.chi.ctx(lam)
        return (lam - self.base_root).in_prime_field()

    def offset(self, lam: FieldElement) -> int:
        """The integer i with lam = base_root + i."""
        return canonical_rep(self.chi.ctx(lam) - self.base_root)


def weight_set(chi: PCharacter) -> WeightSet:
    if chi.height > 1:
        raise UnsupportedHeight("weight sets are defined for heights <= 1")
    ctx = chi.ctx
    c = chi(0)
    if not c:
        return WeightSet(chi, ctx.zero)
    target = artin_schreier_modulus(ctx.p, int(c ** ctx.p))
    if ctx.modulus != target:
        raise WrongFieldContext(
            f"height-1 weights need F_p[x]/(x^p - x - {int(c ** ctx.p)}), got modulus {list(ctx.modulus)}")
    return WeightSet(chi, ctx.gen)


def canonical_rep(mu: FieldElement) -> int:
    """Representative [mu] in {0, ..., p-1} of an element of the prime field."""
    if not mu.in_prime_field():
        raise NotInPrimeField(f"{mu} is not in the prime field")
    return mu.coeffs[0]
