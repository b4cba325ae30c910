"""Permutations of {0, ..., n-1} acting on the right.

``p * q`` means "apply p, then q", so ``(x)(p*q) = q[p[x]]``. This matches
the convention ``A^x = x^-1 A x`` used throughout the package.
"""

from __future__ import annotations

import re


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not 0 <= a < n:
                    raise ValueError(f"point {a} outside degree {n}")
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text, n=None):
        """Parse cycle notation such as ``(0 1 2)(3 4)``; ``()`` is the identity."""
        cycles = []
        text = text.strip()
        for m in re.finditer(r"\(([^()]*)\)|\S", text):
            if m.group(1) is None:
                raise ValueError(f"unexpected {m.group()!r} in {text!r}")
            body = m.group(1).replace(",", " ").split()
            if body:
                cycles.append([int(t) for t in body])
        degree = max((max(c) for c in cycles), default=-1) + 1
        if n is None:
            n = degree
        elif degree > n:
            raise ValueError(f"point {degree - 1} outside degree {n}")
        return cls.from_cycles(n, cycles)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x]

    def __mul__(self, other):
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(o[x] for x in self.images)

    def inverse(self):
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = Permutation.identity(self.degree)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self, x):
        """``x^-1 * self * x``."""
        return x.inverse() * self * x

    def cycles(self):
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def sign(self):
        s = 1
        for c in self.cycles():
            if len(c) % 2 == 0:
                s = -s
        return s

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def extend(self, n):
        """The same permutation viewed on a larger domain (new points fixed)."""
        if n < self.degree:
            raise ValueError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(self.degree, n)))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self})"

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def relabel(mapping):
    """The permutation sending point ``i`` to ``mapping[i]``."""
    return Permutation(mapping)
