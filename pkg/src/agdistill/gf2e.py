"""Arithmetic in GF(2^s).

Elements are plain integers holding the coefficient mask in the polynomial
basis {1, alpha, ..., alpha^(s-1)} (bit i is the coefficient of alpha^i).
`FieldSpec` carries the modulus plus log/antilog tables and exposes
vectorised numpy operations; `FieldElement` is a small value type for
scalar work where spec mismatches must be caught.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MODULI = {
    5: 0b100101,  # x^5 + x^2 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}

MAX_TABLE_S = 16


class FieldMismatchError(ValueError):
    pass


class UnsupportedFieldError(ValueError):
    pass


# --- polynomials over F_2 packed into ints ------------------------------------


def clmul(a: int, b: int) -> int:
    """Carry-less product of two F_2[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: int) -> bool:
    """Rabin's test for a degree-s polynomial over F_2."""
    s = modulus.bit_length() - 1
    if s < 1 or not modulus & 1 and s > 1:
        return False

    def frob(k: int) -> int:
        # x^(2^k) mod modulus
        r = 0b10
        for _ in range(k):
            r = poly_mod(clmul(r, r), modulus)
        return r

    if frob(s) != poly_mod(0b10, modulus):
        return False
    for r in _prime_factors(s):
        if poly_gcd(modulus, frob(s // r) ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(s: int) -> int:
    if s in DEFAULT_MODULI:
        return DEFAULT_MODULI[s]
    for m in range((1 << s) | 1, 1 << (s + 1), 2):
        if is_irreducible(m):
            return m
    raise UnsupportedFieldError(f"no irreducible polynomial of degree {s}")


# --- field specification -------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^s) defined by an irreducible `modulus` (an (s+1)-bit mask)."""

    s: int
    modulus: int = 0
    tables: bool = True
    q: int = field(init=False)
    generator: int = field(init=False, compare=False, repr=False)
    exp: np.ndarray = field(init=False, compare=False, repr=False)
    log: np.ndarray = field(init=False, compare=False, repr=False)
    trace_table: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.s < 1:
            raise UnsupportedFieldError("s must be positive")
        modulus = self.modulus or default_modulus(self.s)
        if modulus >> self.s != 1 or not modulus & 1:
            raise UnsupportedFieldError(f"modulus {modulus:#x} must have bit s and bit 0 set")
        if not is_irreducible(modulus):
            raise UnsupportedFieldError(f"modulus {modulus:#x} is reducible over F_2")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "q", 1 << self.s)
        use_tables = self.tables and self.s <= MAX_TABLE_S
        object.__setattr__(self, "tables", use_tables)
        gen = self._find_generator()
        object.__setattr__(self, "generator", gen)
        if use_tables:
            self._build_tables(gen)
        else:
            object.__setattr__(self, "exp", None)
            object.__setattr__(self, "log", None)
        self._build_trace()

    # construction helpers

    def _clmul_mod(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._clmul_mod(r, a)
            a = self._clmul_mod(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // p) != 1 for p in factors):
                return g
        raise UnsupportedFieldError("no primitive element found")  # pragma: no cover

    def _build_tables(self, gen: int) -> None:
        q1 = self.q - 1
        # log(0) is a sentinel so that exp[log a + log b] is 0 whenever a or b is 0
        exp = np.zeros(4 * q1 + 1, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            exp[i + q1] = x
            log[x] = i
            x = self._clmul_mod(x, gen)
        log[0] = self.zero_log
        exp.setflags(write=False)
        log.setflags(write=False)
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "log", log)

    def _build_trace(self) -> None:
        if self.s > 20:
            object.__setattr__(self, "trace_table", None)
            return
        table = np.zeros(self.q, dtype=np.uint8)
        for a in range(self.q):
            table[a] = self._trace_in_field(a)
        table.setflags(write=False)
        object.__setattr__(self, "trace_table", table)

    def _trace_in_field(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.s):
            t ^= x
            x = self.mul_int(x, x) if self.tables else self._clmul_mod(x, x)
        if t not in (0, 1):
            raise ArithmeticError(f"trace of {a:#x} left the prime field; modulus is broken")
        return t

    # scalar integer ops

    @property
    def zero_log(self) -> int:
        return 2 * (self.q - 1)

    @property
    def hex_width(self) -> int:
        return (self.s + 3) // 4

    @property
    def descriptor(self) -> str:
        return f"s={self.s},modulus={self.modulus:x}"

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF(2^{self.s})")
        return a

    def mul_int(self, a: int, b: int) -> int:
        if self.tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._clmul_mod(a, b)

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^s)")
        if self.tables:
            return int(self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])
        return self._pow_slow(a, self.q - 2)

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_int(self.inv_int(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.tables:
            return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])
        return self._pow_slow(a, e)

    def trace_int(self, a: int) -> int:
        if self.trace_table is not None:
            return int(self.trace_table[a])
        return self._trace_in_field(a)

    @property
    def root7_exponent(self) -> int:
        """u with 7u = 1 mod (q-1); raises when 7 divides q-1."""
        if math.gcd(7, self.q - 1) != 1:
            raise UnsupportedFieldError(
                f"s={self.s} is divisible by 3, so seventh roots are not unique in GF(2^{self.s})"
            )
        return pow(7, -1, self.q - 1)

    def require_root7(self) -> None:
        self.root7_exponent

    # vectorised ops on integer arrays

    def _need_tables(self) -> None:
        if not self.tables:
            raise UnsupportedFieldError("vectorised arithmetic needs log tables (s <= 16)")

    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def mul(self, a, b) -> np.ndarray:
        self._need_tables()
        return self.exp[self.log[self.asarray(a)] + self.log[self.asarray(b)]]

    def mul_log(self, a, logb) -> np.ndarray:
        """a * b where b is given by its (sentinel-aware) log."""
        return self.exp[self.log[self.asarray(a)] + logb]

    def inv(self, a) -> np.ndarray:
        self._need_tables()
        a = self.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(2^s)")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def pow(self, a, e: int) -> np.ndarray:
        self._need_tables()
        a = self.asarray(a)
        if e == 0:
            return np.ones_like(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        la = self.log[a]
        out = self.exp[(la * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def pow_log(self, a, e: int) -> np.ndarray:
        """log of a^e for e >= 1, keeping the zero sentinel."""
        la = self.log[self.asarray(a)]
        return np.where(la == self.zero_log, self.zero_log, (la * e) % (self.q - 1))

    def sqrt(self, a) -> np.ndarray:
        return self.pow(a, self.q // 2)

    def root7(self, a) -> np.ndarray:
        return self.pow(a, self.root7_exponent)

    def trace(self, a) -> np.ndarray:
        return self.trace_table[self.asarray(a)]

    def dot(self, u, v) -> int:
        return int(np.bitwise_xor.reduce(self.mul(u, v), axis=-1)) if len(u) else 0

    def matvec(self, m, v) -> np.ndarray:
        m = self.asarray(m)
        if m.shape[1] == 0:
            return np.zeros(m.shape[0], dtype=np.int64)
        return np.bitwise_xor.reduce(self.mul(m, self.asarray(v)[None, :]), axis=1)

    def matmul(self, a, b) -> np.ndarray:
        a = self.asarray(a)
        b = self.asarray(b)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        lb = self.log[b]
        for j in range(a.shape[1]):
            out ^= self.exp[self.log[a[:, j]][:, None] + lb[j][None, :]]
        return out

    def scale_rows(self, m, factors) -> np.ndarray:
        return self.mul(m, self.asarray(factors)[:, None])

    def scale_cols(self, m, factors) -> np.ndarray:
        return self.mul(m, self.asarray(factors)[None, :])

    def random(self, rng: np.random.Generator, size, nonzero: bool = False) -> np.ndarray:
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.q, size=size, dtype=np.int64)

    # serialisation

    def to_hex(self, a: int) -> str:
        return format(self.check(int(a)), f"0{self.hex_width}x")

    def from_hex(self, text: str) -> int:
        if len(text) != self.hex_width:
            raise ValueError(f"expected {self.hex_width} hex digits, got {text!r}")
        return self.check(int(text, 16))

    def row_to_hex(self, row: Iterable[int]) -> str:
        w = self.hex_width
        return "".join(format(int(x), f"0{w}x") for x in row)

    def row_from_hex(self, text: str) -> np.ndarray:
        w = self.hex_width
        if len(text) % w:
            raise ValueError("hex row length is not a multiple of the element width")
        out = np.array([int(text[i : i + w], 16) for i in range(0, len(text), w)], dtype=np.int64)
        if out.size and out.max() >= self.q:
            raise ValueError("hex row holds values outside the field")
        return out


@lru_cache(maxsize=None)
def get_field(s: int, modulus: int = 0) -> FieldSpec:
    """Cached FieldSpec; the default modulus is used when `modulus` is 0."""
    return FieldSpec(s, modulus)


def pipeline_field(s: int, modulus: int = 0) -> FieldSpec:
    """FieldSpec for the distillation pipeline, which needs unique seventh roots."""
    spec = get_field(s, modulus)
    spec.require_root7()
    return spec


def poly_element(*exponents: int) -> int:
    """Mask of sum(alpha^e for e in exponents)."""
    out = 0
    for e in exponents:
        out ^= 1 << e
    return out


# --- scalar element type ----------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    bits: int

    def __post_init__(self) -> None:
        self.spec.check(self.bits)

    def _other(self, other: FieldElement) -> int:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise FieldMismatchError(f"cannot combine {self.spec.descriptor} with {other.spec.descriptor}")
        return other.bits

    def __add__(self, other: FieldElement) -> FieldElement:
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.bits ^ b)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul_int(self.bits, b))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.spec, self.spec.pow_int(self.bits, e))

    def __bool__(self) -> bool:
        return self.bits != 0

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv_int(self.bits))

    def hex(self) -> str:
        return self.spec.to_hex(self.bits)

    def __repr__(self) -> str:
        terms = [f"a^{i}" if i > 1 else ("a" if i == 1 else "1") for i in range(self.spec.s) if self.bits >> i & 1]
        return "+".join(terms) or "0"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def fe_pow(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return a**e


def fe_sqrt(a: FieldElement) -> FieldElement:
    return a ** (a.spec.q // 2)


def fe_root7(a: FieldElement) -> FieldElement:
    return a**a.spec.root7_exponent


def trace(a: FieldElement) -> int:
    return a.spec.trace_int(a.bits)


def multinomial7_check(y: Sequence[FieldElement]) -> bool:
    """Compare (sum y)^7 against the odd-coefficient multinomial expansion."""
    if not y:
        return True
    spec = y[0].spec
    for v in y:
        if v.spec != spec:
            raise FieldMismatchError("mixed fields in multinomial check")
    return multinomial7_check_ints(spec, [v.bits for v in y])


def multinomial7_check_ints(spec: FieldSpec, y: Sequence[int]) -> bool:
    p = spec.pow_int
    m = spec.mul_int
    total = 0
    for v in y:
        total ^= v
    lhs = p(total, 7)
    pw = [[p(v, e) for e in range(8)] for v in y]
    rhs = 0
    for a in range(len(y)):
        rhs ^= pw[a][7]
        for b in range(len(y)):
            if b == a:
                continue
            rhs ^= m(pw[a][6], pw[b][1]) ^ m(pw[a][5], pw[b][2]) ^ m(pw[a][4], pw[b][3])
            for c in range(len(y)):
                if c != a and c != b:
                    rhs ^= m(m(pw[a][4], pw[b][2]), pw[c][1])
    return lhs == rhs
