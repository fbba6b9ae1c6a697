"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) of Q(zeta_n),
i.e. reduced modulo the n-th cyclotomic polynomial, so that equality of two
elements with the same conductor is equality of coefficient maps.  Mixed
conductors are embedded into Q(zeta_lcm) before any operation.

Besides ring operations the module provides the Galois automorphism that
fixes roots of unity of 2-power order and squares those of odd order
(:func:`galois_exponent`, :func:`apply_sigma`), Legendre symbols and
quadratic Gauss sums.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

import numpy as np
from sympy import isprime, totient

__all__ = [
    "Cyclotomic",
    "E",
    "galois_exponent",
    "apply_sigma",
    "legendre",
    "gauss_sum",
    "sqrt_sign_under_sigma",
    "sqrt_rational_prime_power",
    "two_part",
]

Number = Union[int, Fraction, "Cyclotomic"]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def two_part(n: int) -> int:
    """Largest power of 2 dividing n."""
    return n & -n


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_exact_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // lead
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a[: len(b) - 1]), "inexact polynomial division"
    return out


class _Field:
    """Precomputed reduction data for Q(zeta_n)."""

    __slots__ = ("n", "phi", "powers")

    def __init__(self, n: int):
        self.n = n
        phi_poly = cyclotomic_polynomial(n)
        self.phi = len(phi_poly) - 1
        # powers[k] = reduced form of z^k as tuple of (j, int coeff)
        powers = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(n):
            powers.append(tuple((j, c) for j, c in enumerate(cur) if c))
            # multiply by z, reduce z^phi = -sum phi_poly[j] z^j
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(self.phi):
                    cur[j] -= top * phi_poly[j]
        self.powers = tuple(powers)


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


@lru_cache(maxsize=None)
def reduction_matrix(n: int) -> np.ndarray:
    """Integer n x phi(n) matrix whose row k is z^k in the power basis."""
    f = _field(n)
    R = np.zeros((n, f.phi), dtype=np.int64)
    for k, terms in enumerate(f.powers):
        for j, c in terms:
            R[k, j] = c
    R.setflags(write=False)
    return R


def field_degree(n: int) -> int:
    return _field(n).phi


def _mobius(m: int) -> int:
    res, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    return -res if m > 1 else res


@lru_cache(maxsize=None)
def _euler_phi(m: int) -> int:
    return int(totient(m))


@lru_cache(maxsize=None)
def _normalized_trace_of_power(n: int, k: int) -> Fraction:
    # Tr(z_n^k) / phi(n) = mu(m) / phi(m) with m the order of z_n^k
    m = n // gcd(n, k)
    return Fraction(_mobius(m), _euler_phi(m))


class Cyclotomic:
    """An element of Q(zeta_n), immutable.

    ``coeffs`` maps exponents k < phi(n) to nonzero rationals.
    """

    __slots__ = ("_n", "_c", "_hash")

    def __init__(self, conductor: int = 1, coeffs: Mapping[int, Rational] | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self._n = conductor
        self._hash = None
        if not coeffs:
            self._c = {}
            return
        f = _field(conductor)
        acc: Dict[int, Fraction] = {}
        for k, v in coeffs.items():
            if not v:
                continue
            v = Fraction(v)
            for j, c in f.powers[k % conductor]:
                acc[j] = acc.get(j, 0) + c * v
        self._c = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, n: int, c: Dict[int, Fraction]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj._n = n
        obj._c = c
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q: Rational, conductor: int = 1) -> "Cyclotomic":
        q = Fraction(q)
        return cls._raw(conductor, {0: q} if q else {})

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclotomic":
        """The root of unity zeta_n^k."""
        return cls(n, {k % n: 1})

    @classmethod
    def from_exponents(cls, n: int, terms: Iterable[Tuple[int, Rational]]) -> "Cyclotomic":
        """Sum of c * zeta_n^k over (k, c) with arbitrary integer k."""
        acc: Dict[int, Fraction] = {}
        for k, c in terms:
            k %= n
            acc[k] = acc.get(k, 0) + Fraction(c)
        return cls(n, acc)

    @classmethod
    def from_dense(cls, n: int, vec) -> "Cyclotomic":
        """Element with power-basis coefficient vector `vec` (length phi(n))."""
        c = {j: Fraction(int(v)) for j, v in enumerate(vec) if v}
        return cls._raw(n, c)

    def dense(self, n: int | None = None) -> list:
        """Power-basis coefficients in Q(zeta_n), n a multiple of the conductor."""
        x = self.embed(n or self._n)
        out = [Fraction(0)] * _field(x._n).phi
        for k, v in x._c.items():
            out[k] = v
        return out

    # -- accessors --------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(0, Fraction(0))

    # -- conductor handling -----------------------------------------------
    def embed(self, m: int) -> "Cyclotomic":
        """Image in Q(zeta_m); m must be a multiple of the conductor."""
        n = self._n
        if m == n:
            return self
        if m % n:
            raise ValueError(f"cannot embed Q(zeta_{n}) into Q(zeta_{m})")
        if self.is_rational():
            return Cyclotomic._raw(m, dict(self._c))
        step = m // n
        return Cyclotomic(m, {k * step: v for k, v in self._c.items()})

    @staticmethod
    def _unify(x: "Cyclotomic", y: "Cyclotomic"):
        if x._n == y._n:
            return x, y
        m = _lcm(x._n, y._n)
        return x.embed(m), y.embed(m)

    # -- ring operations --------------------------------------------------
    def __add__(self, other: Number) -> "Cyclotomic":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        x, y = Cyclotomic._unify(self, other)
        c = dict(x._c)
        for k, v in y._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return Cyclotomic._raw(x._n, c)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic._raw(self._n, {k: -v for k, v in self._c.items()})

    def __sub__(self, other: Number) -> "Cyclotomic":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Number) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other: Number) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclotomic._raw(self._n, {})
            return Cyclotomic._raw(self._n, {k: v * other for k, v in self._c.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self * other.to_fraction() if other._n == self._n else self.embed(
                _lcm(self._n, other._n)) * other.to_fraction()
        if self.is_rational():
            return other * self if self._n == other._n else other.embed(
                _lcm(self._n, other._n)) * self.to_fraction()
        x, y = Cyclotomic._unify(self, other)
        n = x._n
        raw: Dict[int, Fraction] = {}
        for a, va in x._c.items():
            for b, vb in y._c.items():
                k = (a + b) % n
                raw[k] = raw.get(k, 0) + va * vb
        return Cyclotomic(n, raw)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the product of the other Galois conjugates."""
        if not self._c:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclotomic._raw(self._n, {0: 1 / self._c[0]})
        n = self._n
        prod = Cyclotomic.rational(1, n)
        for r in range(2, n):
            if gcd(r, n) == 1:
                prod = prod * self.galois(r)
        norm = (prod * self).to_fraction()
        return prod * (1 / norm)

    def __truediv__(self, other: Number) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> "Cyclotomic":
        return _coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Cyclotomic":
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1, self._n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- Galois action ----------------------------------------------------
    def galois(self, r: int) -> "Cyclotomic":
        """Image under zeta_n -> zeta_n^r (gcd(r, n) must be 1)."""
        n = self._n
        if gcd(r, n) != 1:
            raise ValueError(f"{r} is not a unit modulo {n}")
        if self.is_rational():
            return self
        return Cyclotomic(n, {(k * r) % n: v for k, v in self._c.items()})

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate, i.e. the Galois map zeta -> zeta^-1."""
        return self.galois(-1)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        x, y = Cyclotomic._unify(self, other)
        return x._c == y._c

    def __hash__(self) -> int:
        if self._hash is None:
            # normalized trace Tr/phi(n) does not depend on the conductor
            t = sum((v * _normalized_trace_of_power(self._n, k) for k, v in self._c.items()),
                    Fraction(0))
            self._hash = hash(t) if not self.is_rational() else hash(self.to_fraction())
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- rendering --------------------------------------------------------
    def expression(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            parts.append(str(v) if k == 0 else f"{v}*z^{k}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return f"Q(zeta_{self._n}): {self.expression()}"

    def __repr__(self) -> str:
        return f"Cyclotomic({self._n}, {{{', '.join(f'{k}: {v!r}' for k, v in sorted(self._c.items()))}}})"


def _coerce(x) -> "Cyclotomic":
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    return NotImplemented


def E(n: int, k: int = 1) -> Cyclotomic:
    """Shorthand for zeta_n^k, as in GAP."""
    return Cyclotomic.zeta(n, k)


def galois_exponent(n: int) -> int:
    """The r in [1, n) with r = 1 mod 2-part(n) and r = 2 mod odd-part(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    t = two_part(n)
    m = n // t
    if m == 1:
        return 1
    # CRT: r = 1 + t*u with t*u = 1 mod m
    u = pow(t, -1, m)
    return (1 + t * u) % n


def apply_sigma(x: Cyclotomic) -> Cyclotomic:
    """Fix 2-power roots of unity and square odd-order ones."""
    return x.galois(galois_exponent(x.conductor))


def _check_odd_prime(p: int) -> None:
    if p < 3 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a | p) for an odd prime p, by Euler's criterion."""
    _check_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def gauss_sum(p: int) -> Cyclotomic:
    """sum_{k=1}^{p-1} (k|p) zeta_p^k; squares to (-1)^((p-1)/2) p."""
    _check_odd_prime(p)
    return Cyclotomic.from_exponents(p, ((k, legendre(k, p)) for k in range(1, p)))


def sqrt_sign_under_sigma(p: int) -> int:
    """The sign s with sigma(g) = s * g for the Gauss sum g of p.

    sigma fixes the 2-power factor sqrt(-1) that may relate g to sqrt(p), so the
    sign is the same for either normalization of sqrt(p).
    """
    g = gauss_sum(p)
    image = apply_sigma(g)
    if image == g:
        return 1
    if image == -g:
        return -1
    raise ArithmeticError("sigma did not map the Gauss sum to +-itself")


@lru_cache(maxsize=None)
def sqrt_prime(p: int) -> Cyclotomic:
    """The square root of p fixed once: g if p = 1 mod 4, else -i*g."""
    g = gauss_sum(p)
    return g if p % 4 == 1 else -E(4) * g


def sqrt_rational_prime_power(p: int, k: int) -> Cyclotomic:
    """Square root of p^k (k any integer) inside Q(zeta_p) or Q(zeta_4p)."""
    half, odd = divmod(k, 2)
    scale = Fraction(p) ** half
    if not odd:
        return Cyclotomic.rational(scale)
    return sqrt_prime(p) * scale
