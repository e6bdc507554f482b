"""The Hecke algebra over Z[v, v^-1] and its Kazhdan-Lusztig basis.

Conventions: h_s h_x = h_{sx} if sx > x, else (v^-1 - v) h_x + h_{sx};
the KL basis element b_x is bar-invariant with b_x in h_x + sum_{y<x} vZ[v] h_y,
so b_s = h_s + v.

Two layers live here.  `LaurentPoly` and `HeckeElement` are small sparse
types with the textbook operations (`mult_standard`, `bar`), usable for any
Coxeter system.  `KLTable` is the workhorse: it enumerates W (or a length
ball of it), indexes the elements, and keeps KL data in dense integer numpy
arrays whose last axis is the exponent of v.

>>> from coxhodge.coxeter import CoxeterSystem
>>> W = CoxeterSystem.from_type("A1")
>>> s = W.generators[0]
>>> b_s = h(s) + h(W.identity) * V
>>> mult_standard(b_s, b_s) == b_s * (V + V.bar())
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from .coxeter import CoxeterSystem, Element, enumerate_elements
from .errors import InvalidInput, NotSymmetric, OutOfRange

__all__ = [
    "LaurentPoly",
    "V",
    "quantum",
    "HeckeElement",
    "h",
    "mult_standard",
    "bar",
    "KLTable",
    "kl_basis",
    "kl_polynomial",
    "inverse_kl",
    "mu_structure",
    "QuantumDecomposition",
    "quantum_decompose",
    "PositivityReport",
    "check_positivity",
    "local_graded_rank",
]


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Immutable sparse Laurent polynomial in v with integer coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict[int, int] = {}
        for e, c in items:
            c = int(c)
            if c:
                d[int(e)] = d.get(int(e), 0) + c
        self.terms = tuple(sorted((e, c) for e, c in d.items() if c))
        self._hash = None

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_array(cls, arr, offset: int) -> "LaurentPoly":
        nz = np.nonzero(arr)[0]
        return cls((int(i) - offset, int(arr[i])) for i in nz)

    def to_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def coefficient(self, e: int) -> int:
        for k, c in self.terms:
            if k == e:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def min_degree(self) -> int:
        return self.terms[0][0]

    @property
    def max_degree(self) -> int:
        return self.terms[-1][0]

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentPoly.const(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = dict(self.terms)
        for e, c in o.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly((e, -c) for e, c in self.terms)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in o.terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) == 1 and abs(self.terms[0][1]) == 1:
                e, c = self.terms[0]
                return LaurentPoly({-e * (-n): c ** (-n)})
            raise ValueError("only monomials are invertible")
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def bar(self) -> "LaurentPoly":
        """v -> v^-1."""
        return LaurentPoly((-e, c) for e, c in self.terms)

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly((e + k, c) for e, c in self.terms)

    def evaluate(self, v):
        return sum(c * v**e for e, c in self.terms)

    def is_symmetric(self) -> bool:
        return self == self.bar()

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for _, c in self.terms)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"


V = LaurentPoly.monomial(1)


def format_laurent(p: LaurentPoly) -> str:
    """Increasing exponents, 'v^-2+3*v^0+v^2' style; '0' for zero."""
    out = []
    for e, c in p.terms:
        mon = f"v^{e}"
        if c == 1:
            t = mon
        elif c == -1:
            t = "-" + mon
        else:
            t = f"{c}*{mon}"
        if out and not t.startswith("-"):
            out.append("+")
        out.append(t)
    return "".join(out) if out else "0"


_LTERM = re.compile(r"([+-]?)(\d+)?(\*)?(v(?:\^(-?\d+))?)?")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse 'v^-2+3*v^0+v^2', 'v^-1+2+v^3', 'v', '-3' and similar."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return LaurentPoly()
    d: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _LTERM.match(s, pos)
        if m is None or m.end() == pos:
            raise InvalidInput(f"bad polynomial {text!r}")
        sg, num, star, mon, exp = m.groups()
        if num is None and mon is None:
            raise InvalidInput(f"bad polynomial {text!r}")
        if star and (num is None or mon is None):
            raise InvalidInput(f"bad polynomial {text!r}")
        c = int(num) if num is not None else 1
        if sg == "-":
            c = -c
        e = 0 if mon is None else (int(exp) if exp is not None else 1)
        d[e] = d.get(e, 0) + c
        pos = m.end()
    return LaurentPoly(d)


def quantum(m: int) -> LaurentPoly:
    """[m] = v^{-m+1} + v^{-m+3} + ... + v^{m-1}."""
    if m < 1:
        raise ValueError("quantum numbers [m] need m >= 1")
    return LaurentPoly((e, 1) for e in range(-m + 1, m, 2))


# ---------------------------------------------------------------------------
# Hecke elements in the standard basis


class HeckeElement:
    """Finite sum of p_x h_x; stored sparsely, zero terms dropped."""

    __slots__ = ("system", "terms")

    def __init__(self, system: CoxeterSystem, terms: Mapping[Element, LaurentPoly] | None = None):
        self.system = system
        self.terms: dict[Element, LaurentPoly] = {}
        if terms:
            for x, p in terms.items():
                p = p if isinstance(p, LaurentPoly) else LaurentPoly.const(p)
                if p:
                    self.terms[x] = self.terms.get(x, LaurentPoly()) + p
            self.terms = {x: p for x, p in self.terms.items() if p}

    def coefficient(self, x: Element) -> LaurentPoly:
        return self.terms.get(x, LaurentPoly())

    def __iter__(self) -> Iterator[tuple[Element, LaurentPoly]]:
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def _add_into(self, d: dict, x: Element, p: LaurentPoly):
        q = d.get(x)
        d[x] = p if q is None else q + p

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        d = dict(self.terms)
        for x, p in other.terms.items():
            self._add_into(d, x, p)
        return HeckeElement(self.system, d)

    def __neg__(self):
        return HeckeElement(self.system, {x: -p for x, p in self.terms.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return mult_standard(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return HeckeElement(self.system, {x: p * other for x, p in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def specialize(self) -> dict[Element, int]:
        """Set v = 1."""
        out = {}
        for x, p in self.terms.items():
            c = p.evaluate(1)
            if c:
                out[x] = c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*h[{x}]" for x, p in self)

    def __repr__(self):
        return f"HeckeElement({self})"


def h(x: Element) -> HeckeElement:
    """Standard basis element h_x."""
    return HeckeElement(x.system, {x: LaurentPoly.const(1)})


_VINV_MINUS_V = LaurentPoly({-1: 1, 1: -1})


def _hs_times(s: int, a: HeckeElement) -> HeckeElement:
    W = a.system
    d: dict[Element, LaurentPoly] = {}
    for x, p in a.terms.items():
        sx = W.lmul(s, x)
        if sx.length > x.length:
            d[sx] = d.get(sx, LaurentPoly()) + p
        else:
            d[x] = d.get(x, LaurentPoly()) + _VINV_MINUS_V * p
            d[sx] = d.get(sx, LaurentPoly()) + p
    return HeckeElement(W, d)


def mult_standard(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in H by iterating the rule for h_s h_x along reduced words."""
    if a.system is not b.system:
        raise InvalidInput("elements from different systems")
    out = HeckeElement(a.system)
    for x, p in a.terms.items():
        acc = b
        for s in reversed(x.word):
            acc = _hs_times(s, acc)
        out = out + acc * p
    return out


def _bar_h(x: Element) -> HeckeElement:
    W = x.system
    memo = W.__dict__.setdefault("_bar_memo", {})
    r = memo.get(x.key)
    if r is not None:
        return r
    if x.length == 0:
        r = h(x)
    else:
        s = x.word[0]
        rest = _bar_h(W.lmul(s, x))
        # bar(h_s) = h_s + (v - v^-1)
        r = _hs_times(s, rest) + rest * LaurentPoly({1: 1, -1: -1})
    memo[x.key] = r
    return r


def bar(a: HeckeElement) -> HeckeElement:
    """The bar involution: v -> v^-1, h_x -> (h_{x^-1})^-1."""
    out = HeckeElement(a.system)
    for x, p in a.terms.items():
        out = out + _bar_h(x) * p.bar()
    return out


# ---------------------------------------------------------------------------
# quantum decompositions


@dataclass(frozen=True)
class QuantumDecomposition:
    """sum_m a_m [m], stored as {m: a_m} with zero entries dropped."""

    coeffs: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "QuantumDecomposition":
        return cls(tuple(sorted((int(m), int(a)) for m, a in d.items() if a)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def reconstruct(self) -> LaurentPoly:
        out = LaurentPoly()
        for m, a in self.coeffs:
            out = out + quantum(m) * a
        return out

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for _, a in self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, a in sorted(self.coeffs, reverse=True):
            t = f"[{m}]" if a == 1 else (f"-[{m}]" if a == -1 else f"{a}*[{m}]")
            if parts and not t.startswith("-"):
                parts.append("+")
            parts.append(t)
        return "".join(parts)


def quantum_decompose(p: LaurentPoly) -> QuantumDecomposition:
    """Write a bar-symmetric p as sum a_m [m], peeling from the top."""
    if not p.is_symmetric():
        raise NotSymmetric(f"{p} is not invariant under v -> v^-1")
    out: dict[int, int] = {}
    rest = p
    while rest:
        k = rest.max_degree
        a = rest.coefficient(k)
        out[k + 1] = a
        rest = rest - quantum(k + 1) * a
    return QuantumDecomposition.from_dict(out)


def _quantum_from_array(c: np.ndarray, off: int) -> dict[int, int]:
    """Same as quantum_decompose on a symmetric coefficient array: a_{j+1} = c_j - c_{j+2}."""
    out = {}
    top = len(c) - 1 - off
    for j in range(0, top + 1):
        cj = int(c[off + j])
        cj2 = int(c[off + j + 2]) if off + j + 2 < len(c) else 0
        if cj - cj2:
            out[j + 1] = cj - cj2
    return out


# ---------------------------------------------------------------------------
# dense KL engine


def _shift(arr: np.ndarray, k: int) -> np.ndarray:
    """Multiply by v^k along the last axis; refuses to drop nonzero entries."""
    if k == 0:
        return arr
    out = np.zeros_like(arr)
    if k > 0:
        if np.any(arr[..., arr.shape[-1] - k :]):
            raise OverflowError("Laurent window overflow")
        out[..., k:] = arr[..., :-k]
    else:
        if np.any(arr[..., :-k]):
            raise OverflowError("Laurent window overflow")
        out[..., :k] = arr[..., -k:]
    return out


class KLTable:
    """KL data for a finite Coxeter group, or for the elements of length
    <= max_length of an infinite one.

    Arrays (exponent of v on the last axis):
      P[x, y, OFF + e]   coefficient of v^e in p_{y,x}
    Elements are indexed in enumeration order (by length, then ShortLex word).
    """

    def __init__(self, system: CoxeterSystem, max_length: int | None = None):
        if max_length is None and not system.is_finite:
            raise InvalidInput("infinite Coxeter group: pass max_length")
        self.system = system
        self.elements: list[Element] = enumerate_elements(system, max_length)
        self.finite = system.is_finite and (
            max_length is None or max_length >= self.elements[-1].length and system._closed
        )
        self.n = n = len(self.elements)
        self.index = {x.key: i for i, x in enumerate(self.elements)}
        self.length = np.array([x.length for x in self.elements], dtype=np.int64)
        self.max_length = int(self.length.max())
        r = system.rank
        lm = np.full((r, n), -1, dtype=np.int64)
        for i, x in enumerate(self.elements):
            for s in range(r):
                if s in x.left_descents:
                    lm[s, i] = self.index[system.lmul(s, x).key]
                elif x.length < self.max_length or self.finite:
                    y = system.lmul(s, x)
                    lm[s, i] = self.index.get(y.key, -1)
        self.lmul = lm
        self.first = np.array([x.word[0] if x.word else -1 for x in self.elements], dtype=np.int64)
        self.OFF = 1
        self.width = self.max_length + 3

    # -- indexing ----------------------------------------------------------
    def idx(self, x: Element) -> int:
        i = self.index.get(x.key)
        if i is None:
            raise OutOfRange(f"{x} (length {x.length}) is outside the table (cap {self.max_length})")
        return i

    def element(self, i: int) -> Element:
        return self.elements[i]

    # -- Bruhat order ---------------------------------------------------------
    @cached_property
    def bruhat(self) -> np.ndarray:
        """Boolean matrix B[y, x] = (y <= x).

        With s a left descent of x: {y <= x} = {y <= sx} union s{y <= sx}.
        """
        n = self.n
        B = np.zeros((n, n), dtype=bool)
        B[0, 0] = True
        for x in range(1, n):
            s = self.first[x]
            w = self.lmul[s, x]
            col = B[:, w].copy()
            ys = np.nonzero(col)[0]
            sy = self.lmul[s, ys]
            col[sy[sy >= 0]] = True
            B[:, x] = col
        return B

    # -- left multiplication in the standard basis ----------------------------
    def _bs_std(self, s: int, Vec: np.ndarray) -> np.ndarray:
        """b_s * (sum_y Vec[y] h_y); Vec has shape (n, ..., width)."""
        tgt = self.lmul[s]
        bad = tgt < 0
        if bad.any() and np.any(Vec[bad]):
            raise OutOfRange("product leaves the enumerated length range")
        ok = ~bad
        up = ok & (self.length[np.where(ok, tgt, 0)] > self.length)
        down = ok & ~up
        out = np.zeros_like(Vec)
        out[tgt[ok]] += Vec[ok]
        out[up] += _shift(Vec[up], 1)
        out[down] += _shift(Vec[down], -1)
        return out

    def _hs_std(self, s: int, Vec: np.ndarray) -> np.ndarray:
        """h_s * (sum_y Vec[y] h_y)."""
        tgt = self.lmul[s]
        bad = tgt < 0
        if bad.any() and np.any(Vec[bad]):
            raise OutOfRange("product leaves the enumerated length range")
        ok = ~bad
        down = ok & (self.length[np.where(ok, tgt, 0)] < self.length)
        out = np.zeros_like(Vec)
        out[tgt[ok]] += Vec[ok]
        out[down] += _shift(Vec[down], -1) - _shift(Vec[down], 1)
        return out

    # -- KL basis -------------------------------------------------------------
    @cached_property
    def P(self) -> np.ndarray:
        n, Wd, OFF = self.n, self.width, self.OFF
        P = np.zeros((n, n, Wd), dtype=np.int64)
        P[0, 0, OFF] = 1
        for x in range(1, n):
            s = self.first[x]
            w = self.lmul[s, x]
            c = self._bs_std(s, P[w])
            lx = self.length[x]
            for y in range(x - 1, -1, -1):
                if self.length[y] >= lx:
                    continue
                a = c[y, OFF]
                if a:
                    c -= a * P[y]
            P[x] = c
        return P

    def p(self, y: Element, x: Element) -> LaurentPoly:
        return LaurentPoly.from_array(self.P[self.idx(x), self.idx(y)], self.OFF)

    def b(self, x: Element) -> HeckeElement:
        row = self.P[self.idx(x)]
        terms = {}
        for y in np.nonzero(row.any(axis=1))[0]:
            terms[self.elements[y]] = LaurentPoly.from_array(row[y], self.OFF)
        return HeckeElement(self.system, terms)

    def mu(self, z: int, w: int) -> int:
        """mu(z, w): coefficient of v in p_{z,w} (indices)."""
        return int(self.P[w, z, self.OFF + 1])

    # -- inverse KL -------------------------------------------------------------
    @cached_property
    def G(self) -> np.ndarray:
        """G[x, y] = coefficient array of b_y in h_x (so g_{y,x} up to sign)."""
        n, Wd, OFF = self.n, self.width, self.OFF
        G = np.zeros((n, n, Wd), dtype=np.int64)
        Pf = self.P
        for x in range(n):
            acc = np.zeros((n, Wd), dtype=np.int64)
            acc[x, OFF] = 1
            row = Pf[x]
            for y in np.nonzero(row.any(axis=1))[0]:
                if y == x:
                    continue
                for e in np.nonzero(row[y])[0]:
                    acc -= row[y, e] * _shift(G[y], int(e) - OFF)
            G[x] = acc
        return G

    def g(self, y: Element, x: Element) -> LaurentPoly:
        i, j = self.idx(x), self.idx(y)
        sign = -1 if (self.length[i] - self.length[j]) % 2 else 1
        return LaurentPoly.from_array(self.G[i, j] * sign, self.OFF)

    # -- W-graph ----------------------------------------------------------------
    @cached_property
    def _left_ops(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """For each s: (M_s, down_s) with b_s b_w = M_s[:, w] for sw > w and
        (v + v^-1) b_w for sw < w."""
        n = self.n
        ops = []
        P = self.P
        for s in range(self.system.rank):
            tgt = self.lmul[s]
            M = np.zeros((n, n), dtype=np.int64)
            down = np.zeros(n, dtype=bool)
            for w in range(n):
                t = tgt[w]
                if t >= 0 and self.length[t] < self.length[w]:
                    down[w] = True
            for w in range(n):
                if down[w]:
                    continue
                t = tgt[w]
                if t >= 0:
                    M[t, w] = 1
                zs = np.nonzero(P[w, :, self.OFF + 1])[0]
                for z in zs:
                    if z != w and down[z]:
                        M[z, w] = P[w, z, self.OFF + 1]
            ops.append((M, down))
        return ops

    def products_with(self, ys: list[int], lo: int | None = None) -> np.ndarray:
        """Array R[x, z, j, :] = coefficients of b_z in b_x b_{ys[j]} for all x.

        Exponent window is [-L-1, L+1] with L the table's maximal length.
        Uses b_x = b_s b_{sx} - sum_z mu(z, sx) b_z (z < sx, sz < z).
        """
        n = self.n
        L = self.max_length
        off = L + 1
        Wm = 2 * L + 3
        k = len(ys)
        R = np.zeros((n, n, k, Wm), dtype=np.float64)
        for j, y in enumerate(ys):
            R[0, y, j, off] = 1.0
        ops = self._left_ops
        for x in range(1, n):
            s = self.first[x]
            w = self.lmul[s, x]
            M, down = ops[s]
            Vw = R[w]
            flat = Vw.reshape(n, -1)
            out = (M.astype(np.float64) @ flat).reshape(Vw.shape)
            out[down] += _shift(Vw[down], 1) + _shift(Vw[down], -1)
            col = M[:, w]
            for z in np.nonzero(col)[0]:
                if z == x:
                    continue
                out -= col[z] * R[z]
            R[x] = out
        if np.abs(R).max(initial=0) > 2.0**50:
            raise OverflowError("structure constants too large for exact float arithmetic")
        return np.rint(R).astype(np.int64)

    def mu_std(self, x: Element, y: Element) -> dict[Element, LaurentPoly]:
        """mu_{x,y}^z via the standard basis product and a triangular solve."""
        L = self.max_length
        if not self.finite and x.length + y.length > L:
            raise OutOfRange(f"b_x b_y needs length cap {x.length + y.length}, table has {L}")
        n = self.n
        i, j = self.idx(x), self.idx(y)
        off = 2 * L + 2
        Wm = 2 * off + 1
        P = self.P

        def widen(a):
            out = np.zeros(a.shape[:-1] + (Wm,), dtype=np.int64)
            out[..., off - self.OFF : off - self.OFF + a.shape[-1]] = a
            return out

        by = widen(P[j])
        # H[u] = h_u b_y
        H = np.zeros((n, n, Wm), dtype=np.int64)
        H[0] = by
        for u in range(1, n):
            H[u] = self._hs_std(self.first[u], H[self.lmul[self.first[u], u]])
        prod = np.zeros((n, Wm), dtype=np.int64)
        row = P[i]
        for u in np.nonzero(row.any(axis=1))[0]:
            for e in np.nonzero(row[u])[0]:
                prod += row[u, e] * _shift(H[u], int(e) - self.OFF)
        out = {}
        Pw = widen(P)
        for z in range(n - 1, -1, -1):
            c = prod[z]
            if not c.any():
                continue
            out[self.elements[z]] = LaurentPoly.from_array(c, off)
            cz = c.copy()
            for e in np.nonzero(cz)[0]:
                prod = prod - cz[e] * _shift(Pw[z], int(e) - off)
        return out

    # -- verification -------------------------------------------------------------
    def bar_std_basis(self) -> np.ndarray:
        """Q[y] = standard coordinates of bar(h_y), from bar(h_s) = h_s + v - v^-1."""
        n, L = self.n, self.max_length
        off = 2 * L + 2
        Wq = 2 * off + 1
        Q = np.zeros((n, n, Wq), dtype=np.int64)
        Q[0, 0, off] = 1
        for y in range(1, n):
            s = self.first[y]
            prev = Q[self.lmul[s, y]]
            Q[y] = self._hs_std(s, prev) + _shift(prev, 1) - _shift(prev, -1)
        return Q

    def verify_kl(self) -> dict:
        """Independent check of the defining properties of every b_x.

        bar-invariance is tested through the bar involution on the standard
        basis (not through the recursion), the degree bound on the arrays,
        and the support against the Bruhat matrix.
        """
        n, L = self.n, self.max_length
        P = self.P
        Q = self.bar_std_basis().astype(np.float64)
        off = 2 * L + 2
        Wq = Q.shape[-1]
        acc = np.zeros((n, n * Wq), dtype=np.float64)
        Qflat = Q.reshape(n, n * Wq)
        for e in range(P.shape[-1]):
            A = P[:, :, e].astype(np.float64)
            if not A.any():
                continue
            term = (A @ Qflat).reshape(n, n, Wq)
            acc += _shift(term, -(e - self.OFF)).reshape(n, n * Wq)
        barB = np.rint(acc.reshape(n, n, Wq)).astype(np.int64)
        B = np.zeros((n, n, Wq), dtype=np.int64)
        B[:, :, off - self.OFF : off - self.OFF + P.shape[-1]] = P
        bar_ok = bool(np.array_equal(barB, B))
        diag_ok = bool(np.all(P[np.arange(n), np.arange(n), self.OFF] == 1)) and bool(
            np.all(P[np.arange(n), np.arange(n)].sum(axis=-1) == 1)
        )
        low = P.copy()
        low[np.arange(n), np.arange(n)] = 0
        degree_ok = bool(not low[:, :, : self.OFF + 1].any())
        support = P.any(axis=-1)  # support[x, y]
        support_ok = bool(not (support & ~self.bruhat.T).any())
        return {
            "bar_invariant": bar_ok,
            "unitriangular": diag_ok,
            "degree_bound": degree_ok,
            "bruhat_support": support_ok,
            "checked": n,
        }


def kl_basis(table: KLTable, x: Element) -> HeckeElement:
    return table.b(x)


def kl_polynomial(table: KLTable, y: Element, x: Element) -> LaurentPoly:
    return table.p(y, x)


def inverse_kl(table: KLTable, y: Element, x: Element) -> LaurentPoly:
    """g_{y,x} with h_x = sum_y (-1)^{l(x)-l(y)} g_{y,x} b_y."""
    return table.g(y, x)


def mu_structure(table: KLTable, x: Element, y: Element) -> dict[Element, LaurentPoly]:
    """{z: mu_{x,y}^z} with b_x b_y = sum_z mu_{x,y}^z b_z."""
    return table.mu_std(x, y)


# ---------------------------------------------------------------------------
# positivity


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "counterexample": self.counterexample}


@dataclass
class PositivityReport:
    system: str
    scope: str
    results: dict[str, PropertyResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "scope": self.scope,
            "passed": self.passed,
            "properties": {k: r.to_json() for k, r in self.results.items()},
        }


def check_positivity(table: KLTable, chunk: int = 24) -> PositivityReport:
    """Exhaustive (pos1)-(pos4) over the table's scope.

    For a length-capped infinite table the structure constants are checked
    for pairs with l(x) + l(y) <= cap.
    """
    n = table.n
    el = table.elements
    scope = "full group" if table.finite else f"length <= {table.max_length}"
    rep = PositivityReport(table.system.name or str(table.system.coxeter_matrix), scope)

    P = table.P
    neg = np.argwhere(P < 0)
    pairs = int(table.bruhat.sum())
    if len(neg):
        x, y, e = neg[0]
        rep.results["pos1"] = PropertyResult(
            "pos1", False, pairs, {"y": str(el[y]), "x": str(el[x]), "p": str(table.p(el[y], el[x]))}
        )
    else:
        rep.results["pos1"] = PropertyResult("pos1", True, pairs)

    G = table.G
    sign = np.where((table.length[:, None] - table.length[None, :]) % 2 == 1, -1, 1)
    g = G * sign[:, :, None]
    neg = np.argwhere(g < 0)
    if len(neg):
        x, y, e = neg[0]
        rep.results["pos2"] = PropertyResult(
            "pos2", False, pairs, {"y": str(el[y]), "x": str(el[x]), "g": str(table.g(el[y], el[x]))}
        )
    else:
        rep.results["pos2"] = PropertyResult("pos2", True, pairs)

    L = table.max_length
    off = L + 1
    triples = 0
    bad3 = bad4 = None
    sym_bad = None
    for start in range(0, n, chunk):
        ys = list(range(start, min(n, start + chunk)))
        R = table.products_with(ys)  # (x, z, j, e)
        if not table.finite:
            ok_pair = (table.length[:, None] + table.length[None, ys]) <= L
            R = R * ok_pair[:, None, :, None]
        nz = R.any(axis=-1)
        triples += int(nz.sum())
        if bad3 is None:
            neg = np.argwhere(R < 0)
            if len(neg):
                x, z, j, e = neg[0]
                bad3 = (x, ys[j], z)
        if sym_bad is None:
            if not np.array_equal(R, R[..., ::-1]):
                x, z, j = np.argwhere((R != R[..., ::-1]).any(axis=-1))[0]
                sym_bad = (x, ys[j], z)
        if bad4 is None:
            # a_{m} = c_{m-1} - c_{m+1} for m >= 1
            c = R[..., off:]
            c2 = np.zeros_like(c)
            c2[..., :-2] = c[..., 2:]
            neg = np.argwhere(c - c2 < 0)
            if len(neg):
                x, z, j, e = neg[0]
                bad4 = (x, ys[j], z)

    def cex(t, key):
        x, y, z = t
        R1 = table.products_with([y])[x, z, 0]
        p = LaurentPoly.from_array(R1, off)
        d = {"x": str(el[x]), "y": str(el[y]), "z": str(el[z]), "mu": str(p)}
        if key == "pos4" and p.is_symmetric():
            d["decomposition"] = str(quantum_decompose(p))
        return d

    if sym_bad is not None:
        rep.results["pos3"] = PropertyResult("pos3", False, triples, cex(sym_bad, "pos3") | {"reason": "not bar-symmetric"})
    elif bad3 is not None:
        rep.results["pos3"] = PropertyResult("pos3", False, triples, cex(bad3, "pos3"))
    else:
        rep.results["pos3"] = PropertyResult("pos3", True, triples)
    if bad4 is not None or sym_bad is not None:
        rep.results["pos4"] = PropertyResult("pos4", False, triples, cex(bad4 or sym_bad, "pos4"))
    else:
        rep.results["pos4"] = PropertyResult("pos4", True, triples)
    return rep


def local_graded_rank(table: KLTable, y: Element, x: Element) -> QuantumDecomposition:
    """v^{l(x)-l(y)} p_{y,x} = sum_i a^i v^i, returned as sum_i a^i [i]."""
    i, j = table.idx(x), table.idx(y)
    if i == j or not table.bruhat[j, i]:
        raise InvalidInput(f"local graded rank needs y < x, got y={y}, x={x}")
    p = table.p(y, x).shift(x.length - y.length)
    if any(e < 1 for e, _ in p.terms):
        raise InvalidInput("unexpected non-positive exponent")
    return QuantumDecomposition.from_dict(p.to_dict())
