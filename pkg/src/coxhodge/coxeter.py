"""Coxeter systems and their elements.

Elements are identified by their exact matrices on h (the reflection
representation is faithful).  Each element carries its ShortLex-minimal
reduced word, obtained by repeatedly stripping the smallest left descent.
A generator s is a left descent of w iff <alpha_s, w(rho_vee)> < 0, where
rho_vee is the point of h pairing to 1 with every simple root.

>>> W = CoxeterSystem.from_type("A2")
>>> normalize(W, (0, 1, 0)) == normalize(W, (1, 0, 1))
True
>>> [str(x) for x in enumerate_elements(W, 3)]
['id', 's1', 's2', 's1s2', 's2s1', 's1s2s1']
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InfiniteGroup, InvalidInput, ResourceLimit
from .linalg import KMatrix, signature
from .numfield import FieldSpec, field_for
from .reflrep import Realization, build_realization

__all__ = [
    "CoxeterSystem",
    "Element",
    "Reflection",
    "normalize",
    "enumerate_elements",
    "bruhat_leq",
    "reflections",
    "longest_element",
    "reduced_expressions",
    "element_cap",
    "format_word",
    "parse_word",
]

INF = math.inf
DEFAULT_CAP = 200_000


def element_cap() -> int:
    """Enumeration cap, overridable through HHL_MAX_ELEMENTS."""
    raw = os.environ.get("HHL_MAX_ELEMENTS")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInput(f"HHL_MAX_ELEMENTS must be an integer, got {raw!r}")
    if cap <= 0:
        raise InvalidInput("HHL_MAX_ELEMENTS must be positive")
    return cap


def _label(x):
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        try:
            x = int(x)
        except ValueError:
            raise InvalidInput(f"bad Coxeter label {x!r}")
    if x == INF:
        return INF
    if isinstance(x, float):
        if not x.is_integer():
            raise InvalidInput(f"bad Coxeter label {x!r}")
        x = int(x)
    if not isinstance(x, int):
        raise InvalidInput(f"bad Coxeter label {x!r}")
    return x


class CoxeterSystem:
    """A Coxeter system given by its Coxeter matrix (math.inf for no relation)."""

    def __init__(self, coxeter_matrix: Sequence[Sequence], name: str | None = None):
        m = [[_label(x) for x in row] for row in coxeter_matrix]
        n = len(m)
        if n == 0:
            raise InvalidInput("rank must be positive")
        for s in range(n):
            if len(m[s]) != n:
                raise InvalidInput("Coxeter matrix must be square")
            if m[s][s] != 1:
                raise InvalidInput("diagonal entries must be 1")
            for t in range(n):
                if m[s][t] != m[t][s]:
                    raise InvalidInput("Coxeter matrix must be symmetric")
                if s != t and m[s][t] < 2:
                    raise InvalidInput("off-diagonal entries must be >= 2")
        self.rank = n
        self.coxeter_matrix = tuple(tuple(row) for row in m)
        self.name = name
        self.field: FieldSpec = field_for(self.coxeter_matrix)
        self.realization: Realization = build_realization(self)
        self._interned: dict = {}
        self._levels: list[list[Element]] = []
        self._closed = False
        self._lmul: dict = {}
        self._redex: dict = {}

    # -- construction helpers ----------------------------------------------
    @classmethod
    def from_type(cls, name: str) -> "CoxeterSystem":
        """A_n, B_n, D_n, H3, H4, F4, I2(m) (m may be 'inf')."""
        key = name.replace(" ", "").upper()
        mm = re.fullmatch(r"I2\((\w+)\)", key) or re.fullmatch(r"I2_?(\w+)", key)
        if mm:
            lab = _label(mm.group(1).lower())
            return cls([[1, lab], [lab, 1]], name=f"I2({'inf' if lab == INF else lab})")
        mm = re.fullmatch(r"([ABDHF])(\d+)", key)
        if not mm:
            raise InvalidInput(f"unknown Coxeter type {name!r}")
        t, n = mm.group(1), int(mm.group(2))
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]

        def bond(i, j, v):
            m[i][j] = m[j][i] = v

        if t == "A":
            for i in range(n - 1):
                bond(i, i + 1, 3)
        elif t == "B":
            if n < 2:
                raise InvalidInput("B_n needs n >= 2")
            bond(0, 1, 4)
            for i in range(1, n - 1):
                bond(i, i + 1, 3)
        elif t == "D":
            if n < 4:
                raise InvalidInput("D_n needs n >= 4")
            for i in range(n - 2):
                bond(i, i + 1, 3)
            bond(n - 3, n - 1, 3)
        elif t == "H":
            if n not in (3, 4):
                raise InvalidInput("H_n needs n in (3, 4)")
            bond(0, 1, 5)
            for i in range(1, n - 1):
                bond(i, i + 1, 3)
        elif t == "F":
            if n != 4:
                raise InvalidInput("F4 only")
            bond(0, 1, 3)
            bond(1, 2, 4)
            bond(2, 3, 3)
        return cls(m, name=f"{t}{n}")

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterSystem":
        if not isinstance(data, dict) or "m" not in data:
            raise InvalidInput("Coxeter system file needs fields 'rank' and 'm'")
        unknown = set(data) - {"rank", "m", "name"}
        if unknown:
            raise InvalidInput(f"unknown fields in Coxeter system file: {sorted(unknown)}")
        m = data["m"]
        rank = data.get("rank", len(m))
        if not isinstance(m, list) or len(m) != rank:
            raise InvalidInput("'m' must be a rank x rank matrix")
        return cls(m, name=data.get("name"))

    def to_json(self) -> dict:
        m = [["inf" if x == INF else x for x in row] for row in self.coxeter_matrix]
        return {"rank": self.rank, "m": m}

    def __repr__(self):
        return f"CoxeterSystem({self.name or self.coxeter_matrix})"

    # -- finiteness ---------------------------------------------------------
    @cached_property
    def is_finite(self) -> bool:
        """W is finite iff the Coxeter form (the symmetric matrix C/2) is positive definite."""
        if any(x == INF for row in self.coxeter_matrix for x in row):
            return False
        pos, neg, zero = signature(self.realization.cartan)
        return pos == self.rank

    # -- elements ------------------------------------------------------------
    @property
    def generators(self) -> list["Element"]:
        return [normalize(self, (s,)) for s in range(self.rank)]

    @cached_property
    def identity(self) -> "Element":
        M = KMatrix.identity(self.field, self.realization.dim)
        return self._intern(M, ())

    def _intern(self, M: KMatrix, word: tuple) -> "Element":
        key = M.key()
        e = self._interned.get(key)
        if e is None:
            e = Element(self, tuple(word), M, len(word))
            self._interned[key] = e
        return e

    def element(self, word: Iterable[int] | str) -> "Element":
        if isinstance(word, str):
            word = parse_word(word, self.rank)
        return normalize(self, tuple(word))

    def from_matrix(self, M: KMatrix) -> "Element":
        e = self._interned.get(M.key())
        if e is not None:
            return e
        real = self.realization
        u = M @ real.rho_vee
        word = []
        while True:
            vals = real.roots @ u
            s = next((s for s in range(self.rank) if vals[s, 0].sign() < 0), None)
            if s is None:
                break
            word.append(s)
            u = real.gen_h[s] @ u
        return self._intern(M, tuple(word))

    def lmul(self, s: int, x: "Element") -> "Element":
        key = (s, x.key)
        y = self._lmul.get(key)
        if y is None:
            y = self.from_matrix(self.realization.gen_h[s] @ x.matrix)
            self._lmul[key] = y
        return y

    def rmul(self, x: "Element", s: int) -> "Element":
        key = (x.key, s, "r")
        y = self._lmul.get(key)
        if y is None:
            y = self.from_matrix(x.matrix @ self.realization.gen_h[s])
            self._lmul[key] = y
        return y


@dataclass(frozen=True, eq=False)
class Element:
    system: CoxeterSystem
    word: tuple[int, ...]
    matrix: KMatrix
    length: int

    @cached_property
    def key(self):
        return self.matrix.key()

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.system is other.system and (self is other or self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def sort_key(self):
        return (self.length, self.word)

    def __lt__(self, other: "Element"):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "Element") -> "Element":
        return self.system.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "Element":
        return normalize(self.system, tuple(reversed(self.word)))

    @property
    def canonical_word(self) -> tuple[int, ...]:
        return self.word

    def is_identity(self) -> bool:
        return self.length == 0

    @cached_property
    def left_descents(self) -> frozenset[int]:
        real = self.system.realization
        vals = real.roots @ (self.matrix @ real.rho_vee)
        return frozenset(s for s in range(self.system.rank) if vals[s, 0].sign() < 0)

    @cached_property
    def right_descents(self) -> frozenset[int]:
        return self.inverse().left_descents

    def __str__(self):
        return format_word(self.word)

    def __repr__(self):
        return f"Element({format_word(self.word)})"


@dataclass(frozen=True)
class Reflection:
    element: Element
    w: Element
    s: int

    def __repr__(self):
        return f"Reflection({self.element} = ({self.w}) s{self.s + 1} ({self.w})^-1)"


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "id"
    return "".join(f"s{s + 1}" for s in word)


def parse_word(text: str, rank: int | None = None) -> tuple[int, ...]:
    """Parse 's1s2s1', '1,2,1' or 'id' (generators are 1-based in text)."""
    t = text.strip().replace(" ", "")
    if t in ("", "id", "e", "()"):
        return ()
    if "," in t or t.isdigit():
        toks = [x for x in t.split(",") if x]
        word = tuple(int(x.lstrip("s")) - 1 for x in toks)
    else:
        if not re.fullmatch(r"(s\d+)+", t):
            raise InvalidInput(f"bad word {text!r}")
        word = tuple(int(x) - 1 for x in re.findall(r"s(\d+)", t))
    for s in word:
        if s < 0 or (rank is not None and s >= rank):
            raise InvalidInput(f"generator index out of range in {text!r}")
    return word


def normalize(system: CoxeterSystem, word: Sequence[int]) -> Element:
    """The element represented by `word`, with its ShortLex reduced word."""
    real = system.realization
    M = KMatrix.identity(system.field, real.dim)
    for s in word:
        if not 0 <= s < system.rank:
            raise InvalidInput(f"generator index {s} out of range")
        M = M @ real.gen_h[s]
    return system.from_matrix(M)


def _extend_levels(system: CoxeterSystem, max_length: int | None, cap: int) -> None:
    levels = system._levels
    if not levels:
        levels.append([system.identity])
    count = sum(len(L) for L in levels)
    gen = system.realization.gen_h
    while not system._closed and (max_length is None or len(levels) <= max_length):
        prev_keys = {x.key for x in levels[-2]} if len(levels) >= 2 else set()
        new: dict = {}
        for x in levels[-1]:
            for s in range(system.rank):
                M = gen[s] @ x.matrix
                k = M.key()
                if k in prev_keys:
                    continue
                if k not in new:
                    new[k] = (M, s, x)
                elif s < new[k][1]:
                    new[k] = (M, s, x)
        if not new:
            system._closed = True
            break
        count += len(new)
        if count > cap:
            raise ResourceLimit(f"enumeration exceeded the cap of {cap} elements")
        level = []
        for k, (M, s, x) in new.items():
            e = system._interned.get(k)
            if e is None:
                e = Element(system, (s,) + x.word, M, x.length + 1)
                system._interned[k] = e
            level.append(e)
        level.sort(key=lambda e: e.word)
        levels.append(level)


def enumerate_elements(system: CoxeterSystem, max_length: int | None = None, cap: int | None = None) -> list[Element]:
    """All elements of length <= max_length (all of W if None and W is finite),
    ordered by length and then lexicographically by canonical word."""
    if max_length is not None and max_length < 0:
        raise InvalidInput("max_length must be nonnegative")
    cap = element_cap() if cap is None else cap
    if max_length is None and not system.is_finite:
        raise InfiniteGroup("W is infinite; a length cap is required")
    _extend_levels(system, max_length, cap)
    levels = system._levels if max_length is None else system._levels[: max_length + 1]
    return [e for L in levels for e in L]


def longest_element(system: CoxeterSystem, cap: int | None = None) -> Element:
    if not system.is_finite:
        raise InfiniteGroup("W is infinite: no longest element")
    elems = enumerate_elements(system, None, cap)
    return elems[-1]


def bruhat_leq(y: Element, x: Element) -> bool:
    """y <= x in Bruhat order.

    Walk along the reduced word of x: if sx < x then y <= x iff
    min(y, sy) <= sx.
    """
    if y.system is not x.system:
        raise InvalidInput("elements from different systems")
    if y.length > x.length:
        return False
    W = x.system
    for s in x.word:
        if s in y.left_descents:
            y = W.lmul(s, y)
        if y.length == 0:
            return True
    return y.length == 0


def reduced_expressions(x: Element) -> list[tuple[int, ...]]:
    W = x.system
    memo = W._redex
    if x.key in memo:
        return memo[x.key]
    if x.length == 0:
        out = [()]
    else:
        out = []
        for s in sorted(x.left_descents):
            for w in reduced_expressions(W.lmul(s, x)):
                out.append((s,) + w)
        out.sort()
    memo[x.key] = out
    return out


def reflections(system: CoxeterSystem, max_length: int | None = None) -> list[Reflection]:
    """Reflections w s w^-1 of length <= max_length, sorted, with a witness
    (w, s) of minimal length."""
    if max_length is None:
        if not system.is_finite:
            raise InfiniteGroup("W is infinite; a length cap is required")
        ws = enumerate_elements(system)
    else:
        ws = enumerate_elements(system, max(0, (max_length - 1) // 2))
    found: dict = {}
    for w in ws:
        winv = w.inverse()
        for s in range(system.rank):
            t = w * system.generators[s] * winv
            if max_length is not None and t.length > max_length:
                continue
            if t.key not in found:
                found[t.key] = Reflection(t, w, s)
    return sorted(found.values(), key=lambda r: r.element.sort_key())
