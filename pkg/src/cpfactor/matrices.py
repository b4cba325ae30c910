"""Square matrices over a finite field, as used for classical groups."""

from __future__ import annotations

import numpy as np

from .fields import GF


class MatrixGF:
    __slots__ = ("field", "dim", "entries")

    def __init__(self, field: GF, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1:
            d = int(round(len(arr) ** 0.5))
            arr = arr.reshape(d, d)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("entry out of field range")
        self.field = field
        self.dim = arr.shape[0]
        self.entries = arr
        self.entries.setflags(write=False)

    @classmethod
    def identity(cls, field, dim):
        return cls(field, np.eye(dim, dtype=np.int64))

    @classmethod
    def diagonal(cls, field, diag):
        d = len(diag)
        m = np.zeros((d, d), dtype=np.int64)
        m[np.arange(d), np.arange(d)] = diag
        return cls(field, m)

    def __mul__(self, other):
        return MatrixGF(self.field, matmul(self.field, self.entries[None], other.entries[None])[0])

    def det(self):
        f = self.field
        m = [list(map(int, row)) for row in self.entries]
        d = len(m)
        det = 1
        for c in range(d):
            piv = next((r for r in range(c, d) if m[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = int(f.neg[det])
            det = int(f.mul[det, m[c][c]])
            inv = int(f.inv[m[c][c]])
            for r in range(c + 1, d):
                if m[r][c]:
                    factor = int(f.mul[m[r][c], inv])
                    m[r] = [int(f.sub[m[r][j], f.mul[factor, m[c][j]]]) for j in range(d)]
        return det

    def inverse(self):
        f = self.field
        d = self.dim
        aug = [list(map(int, row)) + [1 if i == j else 0 for j in range(d)]
               for i, row in enumerate(self.entries)]
        for c in range(d):
            piv = next((r for r in range(c, d) if aug[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = int(f.inv[aug[c][c]])
            aug[c] = [int(f.mul[inv, x]) for x in aug[c]]
            for r in range(d):
                if r != c and aug[r][c]:
                    factor = aug[r][c]
                    aug[r] = [int(f.sub[x, f.mul[factor, y]]) for x, y in zip(aug[r], aug[c])]
        return MatrixGF(f, [row[d:] for row in aug])

    def transpose(self):
        return MatrixGF(self.field, self.entries.T)

    def map_entries(self, fn):
        return MatrixGF(self.field, np.vectorize(fn, otypes=[np.int64])(self.entries))

    def flat(self):
        return tuple(int(x) for x in self.entries.ravel())

    def __eq__(self, other):
        return (isinstance(other, MatrixGF) and self.field == other.field
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.field.q, self.flat()))

    def __repr__(self):
        return f"MatrixGF({self.field}, {self.entries.tolist()})"


def matmul(field, a, b):
    """Batched product of (m, d, d) code arrays over ``field``."""
    m, d, _ = a.shape
    out = np.zeros((max(m, b.shape[0]), d, d), dtype=np.int64)
    for j in range(d):
        terms = field.mul[a[:, :, j][:, :, None], b[:, j, :][:, None, :]]
        out = field.add[out, terms]
    return out
