"""Finite fields GF(p^k) with table-driven arithmetic.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``c_i`` are the coefficients of the residue polynomial. The
irreducible polynomial is configuration, never searched for at runtime.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import UnsupportedParameter

# coefficient lists, lowest degree first
DEFAULT_MODULI = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, (1, 0, 1)),  # x^2 + 1
}


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):
                break
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r == 1:
                return p, k
            break
    raise UnsupportedParameter(f"{q} is not a prime power")


class GF:
    """The field with ``q = p**k`` elements."""

    def __init__(self, q, modulus=None):
        p, k = _prime_power(q)
        self.p, self.k, self.q = p, k, q
        if k == 1:
            modulus = (0, 1)
        elif modulus is None:
            if q not in DEFAULT_MODULI:
                raise UnsupportedParameter(f"no shipped modulus for GF({q}); pass one")
            modulus = DEFAULT_MODULI[q][1]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise UnsupportedParameter(f"modulus must be monic of degree {k}")
        self.modulus = modulus
        self._build_tables()

    def _coeffs(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs):
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + c
        return a

    def _polymul(self, a, b):
        p, k = self.p, self.k
        ca, cb = self._coeffs(a), self._coeffs(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus, top degree first
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for i, m in enumerate(self.modulus):
                    prod[d - k + i] = (prod[d - k + i] - c * m) % p
        return self._encode(prod[:k])

    def _build_tables(self):
        q, p = self.q, self.p
        coeffs = np.array([self._coeffs(a) for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.k, dtype=np.int64)
        summed = (coeffs[:, None, :] + coeffs[None, :, :]) % p
        self.add = (summed @ weights).astype(np.int64)
        self.neg = ((-coeffs) % p @ weights).astype(np.int64)
        self.mul = np.array([[self._polymul(a, b) for b in range(q)] for a in range(q)],
                            dtype=np.int64)
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            row = np.nonzero(self.mul[a] == 1)[0]
            if len(row) != 1:
                raise UnsupportedParameter(f"modulus {self.modulus} is reducible over GF({p})")
            self.inv[a] = row[0]
        self.sub = self.add[:, self.neg]

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __call__(self, value):
        return FieldElement(self, int(value) % self.q if self.k == 1 else int(value))

    def elements(self):
        return [FieldElement(self, a) for a in range(self.q)]

    def power(self, a, e):
        if a == 0:
            return 0 if e > 0 else 1
        e %= self.q - 1
        r = 1
        while e:
            if e & 1:
                r = int(self.mul[r, a])
            a = int(self.mul[a, a])
            e >>= 1
        return r

    def element_order(self, a):
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = int(self.mul[x, a])
            n += 1
        return n

    @property
    def primitive_element(self):
        return _primitive(self)

    def frobenius(self, a, times=1):
        for _ in range(times):
            a = self.power(a, self.p)
        return a

    def from_int(self, n):
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p


@lru_cache(maxsize=None)
def _primitive(field):
    for a in range(1, field.q):
        if field.element_order(a) == field.q - 1:
            return a
    raise AssertionError("multiplicative group not cyclic")


class FieldElement:
    """A value in a :class:`GF`; thin operator wrapper around the code."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        if not 0 <= code < field.q:
            raise ValueError(f"{code} out of range for {field}")
        self.field = field
        self.code = code

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.code
        return self.field.from_int(other)

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add[self.code, self._other(other)]))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub[self.code, self._other(other)]))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg[self.code]))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul[self.code, self._other(other)]))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self.field))
        return FieldElement(self.field, int(self.field.mul[self.code, self.field.inv[b]]))

    def __pow__(self, e):
        if e < 0:
            return FieldElement(self.field, self.field.power(int(self.field.inv[self.code]), -e))
        return FieldElement(self.field, self.field.power(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __int__(self):
        return self.code

    @property
    def coefficients(self):
        return tuple(self.field._coeffs(self.code))

    def __repr__(self):
        return f"{self.field}({self.code})"
