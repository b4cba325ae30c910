"""Group specification strings.

Grammar (whitespace is not significant)::

    spec    := name ":" args | "wreath:alt5,2"
    name    := sym | alt | cyclic | dihedral | dicyclic | sl | psl | su
             | perm | affine | direct | wreath
    sym:n  alt:n  cyclic:n  dihedral:n (order 2n)  dicyclic:n (order 4n)
    sl:d,q  psl:2,q  su:3,3
    perm:[CYCLES;CYCLES;...]           one generator per ';'-separated item
    affine:p,n,[M;M;...]               M = n*n comma separated entries, row-major
    direct:[SPEC;SPEC;...]             direct product
    wreath:alt5,2

Matrices act on row vectors from the right (``x -> x M``); points of an
affine group are vectors encoded as ``sum v_i p^i``.
"""

from __future__ import annotations

import hashlib
import re
from functools import lru_cache

import numpy as np

from .errors import SpecParseError, UnsupportedParameter
from .fields import GF
from .groups import ProductGroup, enumerate_group, group_from_mul, quotient_group
from .matrices import MatrixGF
from .perms import Permutation

GRAMMAR_VERSION = 1


# -- parsing -----------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, msg, pos=None):
        raise SpecParseError(self.text, self.pos if pos is None else pos, msg)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def word(self):
        self.skip()
        m = re.compile(r"[A-Za-z][A-Za-z0-9]*").match(self.text, self.pos)
        if not m:
            self.fail("expected a name")
        self.pos = m.end()
        return m.group()

    def integer(self):
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.fail("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def bracket_items(self):
        """``[a;b;c]`` with nesting; returns (raw item, start offset) pairs."""
        self.expect("[")
        items = []
        depth = 0
        start = self.pos
        while True:
            if self.pos >= len(self.text):
                self.fail("unclosed '['")
            ch = self.text[self.pos]
            if ch == "[":
                depth += 1
            elif ch == "]":
                if depth == 0:
                    items.append((self.text[start:self.pos], start))
                    self.pos += 1
                    return items
                depth -= 1
            elif ch == ";" and depth == 0:
                items.append((self.text[start:self.pos], start))
                start = self.pos + 1
            self.pos += 1

    def spec(self):
        start = self.pos
        name = self.word().lower()
        self.expect(":")
        if name in ("sym", "alt", "cyclic", "dihedral", "dicyclic"):
            node = (name, self.integer())
        elif name in ("sl", "psl", "su"):
            d = self.integer()
            self.expect(",")
            node = (name, d, self.integer())
        elif name == "perm":
            gens = []
            for raw, off in self.bracket_items():
                if not re.fullmatch(r"[\s\d(),]*", raw):
                    bad = next(i for i, c in enumerate(raw) if not re.match(r"[\s\d(),]", c))
                    self.fail("bad character in cycle notation", off + bad)
                try:
                    gens.append(Permutation.parse(raw))
                except ValueError as exc:
                    self.fail(str(exc), off)
            node = ("perm", tuple(gens))
        elif name == "affine":
            p = self.integer()
            self.expect(",")
            n = self.integer()
            self.expect(",")
            mats = []
            for raw, off in self.bracket_items():
                entries = [t.strip() for t in raw.split(",")]
                if not all(t.isdigit() for t in entries):
                    self.fail("matrix entries must be integers", off)
                if len(entries) != n * n:
                    self.fail(f"expected {n * n} matrix entries, got {len(entries)}", off)
                mats.append(tuple(int(t) for t in entries))
            node = ("affine", p, n, tuple(mats))
        elif name == "direct":
            parts = []
            for raw, off in self.bracket_items():
                sub = _Parser(self.text)
                sub.pos = off
                parts.append(sub.spec())
                sub.skip()
                if sub.pos != off + len(raw):
                    sub.fail("trailing characters in factor")
            if len(parts) < 1:
                self.fail("direct product needs factors")
            node = ("direct", tuple(parts))
        elif name == "wreath":
            w = self.word().lower()
            if w != "alt5":
                self.fail("only wreath:alt5,2 is supported", self.pos - len(w))
            self.expect(",")
            r = self.integer()
            if r != 2:
                self.fail("only wreath:alt5,2 is supported", self.pos - 1)
            node = ("wreath", "alt5", 2)
        else:
            self.fail(f"unknown group family {name!r}", start)
        return node


def parse_spec(text):
    """Parse a spec string into a nested tuple; raises SpecParseError."""
    p = _Parser(text)
    node = p.spec()
    p.skip()
    if p.pos != len(text):
        p.fail("trailing characters")
    return node


def canonical(node):
    kind = node[0]
    if kind in ("sym", "alt", "cyclic", "dihedral", "dicyclic"):
        return f"{kind}:{node[1]}"
    if kind in ("sl", "psl", "su"):
        return f"{kind}:{node[1]},{node[2]}"
    if kind == "perm":
        return "perm:[" + ";".join(str(g) for g in node[1]) + "]"
    if kind == "affine":
        return f"affine:{node[1]},{node[2]},[" + ";".join(",".join(map(str, m)) for m in node[3]) + "]"
    if kind == "direct":
        return "direct:[" + ";".join(canonical(x) for x in node[1]) + "]"
    return "wreath:alt5,2"


def spec_hash(text):
    """Content hash of a spec (normalized) and the grammar version."""
    norm = canonical(parse_spec(text))
    return hashlib.sha256(f"{GRAMMAR_VERSION}|{norm}".encode()).hexdigest()[:32]


# -- builders -----------------------------------------------------------------

def _cycle(n, pts):
    return Permutation.from_cycles(n, [pts]) if len(pts) > 1 else Permutation.identity(n)


def sym_generators(n):
    if n <= 1:
        return [Permutation.identity(max(n, 1))]
    if n == 2:
        return [_cycle(2, [0, 1])]
    return [_cycle(n, [0, 1]), _cycle(n, list(range(n)))]


def alt_generators(n):
    if n <= 2:
        return [Permutation.identity(max(n, 1))]
    if n == 3:
        return [_cycle(3, [0, 1, 2])]
    long = list(range(n)) if n % 2 else list(range(1, n))
    return [_cycle(n, [0, 1, 2]), _cycle(n, long)]


def field_basis(field):
    """``1, w, w^2, ...`` for the polynomial basis of GF(p^k) over GF(p)."""
    return [field.p ** i for i in range(field.k)]


def sl_generators(d, q):
    field = GF(q)
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                for b in field_basis(field):
                    m = np.eye(d, dtype=np.int64)
                    m[i, j] = b
                    gens.append(MatrixGF(field, m))
    if d == 2 and q > 3:
        t = field.primitive_element
        gens.append(MatrixGF.diagonal(field, [t, int(field.inv[t])]))
    return field, gens


def su3_3_data():
    """SU(3,3) preserving the hermitian form with antidiagonal Gram matrix.

    Returns ``(field, U elements, H elements, n0)`` where U is upper
    unitriangular, H diagonal and n0 antidiagonal.
    """
    field = GF(9)
    frob = field.frobenius

    def bar(m):
        return m.map_entries(lambda a: frob(int(a)))

    J = MatrixGF(field, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])

    def unitary(m):
        return m * J * bar(m).transpose() == J and m.det() == 1

    U = []
    for a in range(9):
        for b in range(9):
            for c in range(9):
                m = MatrixGF(field, [[1, a, b], [0, 1, c], [0, 0, 1]])
                if unitary(m):
                    U.append(m)
    H = []
    for a in range(1, 9):
        for b in range(1, 9):
            for c in range(1, 9):
                m = MatrixGF.diagonal(field, [a, b, c])
                if unitary(m):
                    H.append(m)
    n0 = None
    for a in range(1, 9):
        for b in range(1, 9):
            for c in range(1, 9):
                m = MatrixGF(field, [[0, 0, a], [0, b, 0], [c, 0, 0]])
                if unitary(m):
                    n0 = m
                    break
            if n0 is not None:
                break
        if n0 is not None:
            break
    return field, U, H, n0


def affine_generators(p, n, mats):
    """Permutations of ``p^n`` points: basis translations, then the linear maps."""
    field = GF(p)
    npts = p ** n
    pts = np.arange(npts)
    coords = np.stack([(pts // p ** i) % p for i in range(n)], axis=1)
    weights = p ** np.arange(n)
    gens = []
    for i in range(n):
        shifted = coords.copy()
        shifted[:, i] = (shifted[:, i] + 1) % p
        gens.append(Permutation(shifted @ weights))
    lin = []
    for flat in mats:
        m = np.array(flat, dtype=np.int64).reshape(n, n) % p
        if MatrixGF(field, m).det() == 0:
            raise UnsupportedParameter("affine generator matrix is singular")
        img = (coords @ m) % p
        lin.append(Permutation(img @ weights))
    return gens, lin


def dicyclic_group(n):
    m = 2 * n

    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        if e1 == 0:
            return ((k1 + k2) % m, e2)
        if e2 == 0:
            return ((k1 - k2) % m, 1)
        return ((k1 - k2 + n) % m, 0)

    return group_from_mul([(1, 0), (0, 1)], mul, (0, 0),
                          encode=lambda x: {"a": x[0], "x": x[1]}, name=f"dicyclic:{n}")


def _build(node):
    kind = node[0]
    if kind == "sym":
        return enumerate_group(sym_generators(node[1]))
    if kind == "alt":
        return enumerate_group(alt_generators(node[1]))
    if kind == "cyclic":
        return enumerate_group([_cycle(max(node[1], 1), list(range(node[1])))])
    if kind == "dihedral":
        n = node[1]
        if n < 3:
            raise UnsupportedParameter("dihedral:n needs n >= 3")
        refl = Permutation([(-x) % n for x in range(n)])
        return enumerate_group([_cycle(n, list(range(n))), refl])
    if kind == "dicyclic":
        if node[1] < 2:
            raise UnsupportedParameter("dicyclic:n needs n >= 2")
        return dicyclic_group(node[1])
    if kind == "sl":
        d, q = node[1], node[2]
        if d < 2:
            raise UnsupportedParameter("sl:d,q needs d >= 2")
        _, gens = sl_generators(d, q)
        return enumerate_group(gens)
    if kind == "psl":
        if node[1] != 2:
            raise UnsupportedParameter("only psl:2,q is supported")
        g = _build(("sl", 2, node[2]))
        from .subgroups import center

        q, _, _ = quotient_group(g, center(g))
        return q
    if kind == "su":
        if (node[1], node[2]) != (3, 3):
            raise UnsupportedParameter("only su:3,3 is supported")
        _, U, H, n0 = su3_3_data()
        return enumerate_group(U + H + [n0])
    if kind == "perm":
        gens = list(node[1])
        n = max(g.degree for g in gens)
        return enumerate_group([g.extend(n) for g in gens])
    if kind == "affine":
        p, n, mats = node[1], node[2], node[3]
        if GF(p).k != 1:
            raise UnsupportedParameter("affine:p,n needs p prime")
        if n < 1 or p ** n > 4096:
            raise UnsupportedParameter("affine degree out of range")
        trans, lin = affine_generators(p, n, mats)
        g = enumerate_group(trans + lin)
        g.affine = {"p": p, "n": n, "translations": list(g.generators[:n]),
                    "linear": list(g.generators[n:])}
        return g
    if kind == "direct":
        return ProductGroup([_build(x) for x in node[1]])
    if kind == "wreath":
        a = [g.extend(10) for g in alt_generators(5)]
        swap = Permutation.from_cycles(10, [(i, i + 5) for i in range(5)])
        return enumerate_group(a + [swap])
    raise AssertionError(kind)


@lru_cache(maxsize=6)
def _build_cached(norm):
    return _build(parse_spec(norm))


def build_group(text, cache=True):
    """Enumerate the group described by a spec string."""
    node = parse_spec(text)
    norm = canonical(node)
    g = _build_cached(norm) if cache else _build(node)
    g.spec = norm
    return g


def group_spec_of(g):
    return getattr(g, "spec", None) or g.label()

