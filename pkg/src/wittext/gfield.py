"""Exact arithmetic in F_p and in extensions F_p[x]/(f).

Elements of a degree-d field are stored as length-d coefficient vectors
(little-endian, entries in ``0..p-1``).  Scalar work goes through
:class:`FieldElement`; bulk work goes through integer numpy arrays whose last
axis holds the d coefficients, which is what :class:`Matrix` wraps.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZero, FieldError, NonPrime, PrimeTooSmall, ZeroConstant


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p <= 3:
        raise PrimeTooSmall(f"characteristic must exceed 3, got {p}")


# -- polynomials over F_p as little-endian int lists -----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] * inv_lead % p
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
    return _trim(q), _trim(a)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, base, p), mod, p)[1]
        base = _poly_divmod(_poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = _trim([c % p for c in modulus])
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]

    def frob_iter(k: int) -> list[int]:
        # x^(p^k) mod f
        r = x
        for _ in range(k):
            r = _poly_powmod(r, p, f, p)
        return r

    for q in _prime_factors(d):
        h = _poly_sub(frob_iter(d // q), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return not _poly_sub(frob_iter(d), x, p)


def has_root_in_prime_field(modulus: Sequence[int], p: int) -> bool:
    for a in range(p):
        acc = 0
        for c in reversed(modulus):
            acc = (acc * a + c) % p
        if acc == 0:
            return True
    return False


# -- field contexts --------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """The field F_p[x]/(modulus); ``modulus`` is monic, little-endian."""

    p: int
    modulus: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        _check_prime(self.p)
        m = tuple(int(c) % self.p for c in self.modulus)
        if len(m) < 2 or m[-1] != 1:
            raise FieldError("modulus must be monic of degree >= 1")
        object.__setattr__(self, "modulus", m)

    @property
    def d(self) -> int:
        return len(self.modulus) - 1

    @property
    def order(self) -> int:
        return self.p ** self.d

    @property
    def is_prime_field(self) -> bool:
        return self.d == 1

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.d - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.d:
            return FieldElement(self, tuple(int(c) for c in self.reduce(np.array(coeffs))))
        return FieldElement(self, tuple(coeffs) + (0,) * (self.d - len(coeffs)))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """Class of x (for d = 1 this is the root of the linear modulus)."""
        if self.d == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def elements(self) -> Iterable["FieldElement"]:
        """All field elements in lexicographic coefficient order (small fields only)."""
        for n in range(self.order):
            yield self([(n // self.p ** k) % self.p for k in range(self.d)])

    def to_json(self) -> dict:
        return {"p": self.p, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldCtx":
        return cls(int(obj["p"]), tuple(obj["modulus"]))

    # -- array kernels -----------------------------------------------------

    @cached_property
    def _tail(self) -> tuple[tuple[int, int], ...]:
        # x^d = sum of coef * x^i over these (i, coef) pairs
        return tuple((i, (-c) % self.p) for i, c in enumerate(self.modulus[:-1]) if c)

    def reduce(self, coeffs: np.ndarray) -> np.ndarray:
        """Reduce coefficient arrays (any length on the last axis) modulo the modulus."""
        p, d = self.p, self.d
        c = np.asarray(coeffs, dtype=np.int64) % p
        L = c.shape[-1]
        if L <= d:
            pad = [(0, 0)] * (c.ndim - 1) + [(0, d - L)]
            return np.pad(c, pad)
        c = c.copy()
        for k in range(L - 1, d - 1, -1):
            t = c[..., k] % p
            for i, coef in self._tail:
                c[..., k - d + i] += t * coef
        return c[..., :d] % p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of coefficient arrays (broadcasting leading axes)."""
        p, d = self.p, self.d
        if d == 1:
            return (a * b) % p
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        out = np.zeros(shape + (2 * d - 1,), dtype=np.int64)
        for i in range(d):
            out[..., i:i + d] += a[..., i:i + 1] * b
        return self.reduce(out)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """(m, r, d) @ (r, n, d) -> (m, n, d).

        Uses float64 BLAS products; exact because every partial sum stays
        below r * p**2, far under 2**53 for the sizes in scope.
        """
        p, d = self.p, self.d
        m, r, _ = A.shape
        n = B.shape[1]
        if r == 0:
            return np.zeros((m, n, d), dtype=np.int64)
        if d == 1:
            prod = A[:, :, 0].astype(np.float64) @ B[:, :, 0].astype(np.float64)
            return np.fmod(prod, p).astype(np.int64)[:, :, None]
        Bf = B.reshape(r, n * d).astype(np.float64)
        out = np.zeros((m, n, 2 * d - 1), dtype=np.int64)
        for a in range(d):
            col = A[:, :, a]
            if not col.any():
                continue
            prod = np.fmod(col.astype(np.float64) @ Bf, p).astype(np.int64)
            out[:, :, a:a + d] += prod.reshape(m, n, d)
        return self.reduce(out)

    def inv_coeffs(self, vec: np.ndarray) -> np.ndarray:
        return np.array(self(vec.tolist()).inverse().coeffs, dtype=np.int64)

    def to_array(self, values) -> np.ndarray:
        """Nested lists of ints / FieldElements -> integer array with trailing d axis."""
        def conv(v):
            if isinstance(v, (list, tuple)) and not isinstance(v, FieldElement):
                return [conv(x) for x in v]
            return list(self(v).coeffs)
        arr = np.array(conv(values), dtype=np.int64)
        return arr.reshape(arr.shape[:-1] + (self.d,))


def make_prime_field(p: int) -> FieldCtx:
    return FieldCtx(p)


def artin_schreier_modulus(p: int, c: int) -> tuple[int, ...]:
    m = [0] * (p + 1)
    m[0] = (-c) % p
    m[1] = p - 1
    m[p] = 1
    return tuple(m)


def make_artin_schreier_field(p: int, c: int) -> FieldCtx:
    """F_p[x]/(x^p - x - c); the class of x solves t^p - t = c."""
    _check_prime(p)
    if c % p == 0:
        raise ZeroConstant("x^p - x has roots in F_p; use the prime field")
    modulus = artin_schreier_modulus(p, c)
    # x^p - x - c has no root in F_p (a^p = a there), and an Artin-Schreier
    # polynomial without roots is irreducible.
    assert not has_root_in_prime_field(modulus, p)
    return FieldCtx(p, modulus)


def make_field(p: int, modulus: Sequence[int] | None = None) -> FieldCtx:
    """General constructor that verifies irreducibility of the modulus."""
    if modulus is None:
        return make_prime_field(p)
    _check_prime(p)
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
    return FieldCtx(p, tuple(modulus))


# -- scalars ---------------------------------------------------------------

class FieldElement:
    """Immutable element of a :class:`FieldCtx`."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldError("mixing elements of different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx(int(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        p, d = ctx.p, ctx.d
        if d == 1:
            return FieldElement(ctx, (self.coeffs[0] * o.coeffs[0] % p,))
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        for k in range(2 * d - 2, d - 1, -1):
            t = prod[k] % p
            if t:
                for i, coef in ctx._tail:
                    prod[k - d + i] += t * coef
        return FieldElement(ctx, tuple(c % p for c in prod[:d]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        ctx = self.ctx
        p = ctx.p
        if not any(self.coeffs):
            raise DivisionByZero("inverse of zero")
        if ctx.d == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], p - 2, p),))
        # extended Euclid in F_p[x]: track s with s*self = r (mod modulus)
        r0, r1 = list(ctx.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        inv_c = pow(r1[0], p - 2, p)
        return ctx([c * inv_c for c in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.ctx(int(other)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError(f"{self!r} is not in the prime field")
        return self.coeffs[0]

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(reversed(terms)) if terms else "0"


# -- matrices --------------------------------------------------------------

class Matrix:
    """Dense matrix over a FieldCtx backed by an (rows, cols, d) int64 array."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: FieldCtx, data: np.ndarray):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 3 or data.shape[2] != ctx.d:
            raise ValueError(f"expected (rows, cols, {ctx.d}) array, got {data.shape}")
        self.ctx = ctx
        self.data = data % ctx.p

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "Matrix":
        return cls(ctx, np.zeros((rows, cols, ctx.d), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        data = np.zeros((n, n, ctx.d), dtype=np.int64)
        data[np.arange(n), np.arange(n), 0] = 1
        return cls(ctx, data)

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(ctx, 0, 0)
        return cls(ctx, ctx.to_array(rows).reshape(len(rows), len(rows[0]), ctx.d))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(self.ctx, tuple(int(c) for c in self.data[i, j]))

    def _check(self, other: "Matrix") -> None:
        if other.ctx != self.ctx:
            raise FieldError("matrices over different fields")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.ctx, self.ctx.matmul(self.data, other.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.ctx, self.data + other.data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.ctx, self.data - other.data)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ctx, -self.data)

    def scale(self, c) -> "Matrix":
        c = np.array(self.ctx(c).coeffs, dtype=np.int64)
        return Matrix(self.ctx, self.ctx.mul(self.data, c))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ctx, self.data.transpose(1, 0, 2))

    def power(self, k: int) -> "Matrix":
        result, base = Matrix.identity(self.ctx, self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.data, other.data)

    __hash__ = None

    def apply(self, vec: Sequence) -> list[FieldElement]:
        v = self.ctx.to_array(list(vec)).reshape(-1, 1, self.ctx.d)
        out = self.ctx.matmul(self.data, v)
        return [FieldElement(self.ctx, tuple(int(c) for c in out[i, 0])) for i in range(self.rows)]

    def to_json(self) -> list:
        return self.data.tolist()

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj) -> "Matrix":
        arr = np.array(obj, dtype=np.int64)
        if arr.size == 0:
            return cls.zeros(ctx, len(obj), 0)
        return cls(ctx, arr)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over F_{self.ctx.p}^{self.ctx.d})"
