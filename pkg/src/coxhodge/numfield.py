"""Exact arithmetic in real cyclotomic fields Q(2cos(pi/N)).

An element is stored as its reduced residue modulo the minimal polynomial
of the generator ``c = 2cos(pi/N)``, as a tuple of ``flint.fmpq``
coefficients of ``1, c, c^2, ...``.  Signs are decided by interval
evaluation over an isolating interval of ``c`` that is bisected on demand;
an element is zero exactly when its coefficient vector is zero, so the
refinement loop always terminates.

>>> K = field_for([[1, 5], [5, 1]])
>>> K.minimal_polynomial
(-1, -1, 1)
>>> g = K.gen
>>> g * g == g + 1
True
>>> (g - 1).sign()
1
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import flint

__all__ = [
    "FieldSpec",
    "AlgebraicReal",
    "field_for",
    "field_of_conductor",
    "rational_field",
    "sign",
    "minimal_polynomial_2cos",
    "dickson",
]

fmpq = flint.fmpq


def _q(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, flint.fmpz):
        return fmpq(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


def dickson(n: int) -> list[int]:
    """Coefficients (low to high) of V_n with V_n(z + 1/z) = z^n + z^-n."""
    a, b = [2], [0, 1]
    if n == 0:
        return a
    for _ in range(n - 1):
        nxt = [0] + b
        for i, x in enumerate(a):
            nxt[i] -= x
        a, b = b, nxt
    return b


def minimal_polynomial_2cos(N: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(pi/N) over Q, low degree first.

    Obtained from the cyclotomic polynomial of order 2N: a primitive 2N-th
    root z satisfies Phi_2N(z) = z^D P(z + 1/z), and P is the answer.
    """
    if N < 1:
        raise ValueError("conductor must be positive")
    if N == 1:
        return (2, 1)
    phi = [int(x) for x in flint.fmpz_poly.cyclotomic(2 * N).coeffs()]
    D = (len(phi) - 1) // 2
    # Phi/z^D = phi[D] + sum_j phi[D+j] (z^j + z^-j)
    P = [0] * (D + 1)
    P[0] += phi[D]
    for j in range(1, D + 1):
        for i, x in enumerate(dickson(j)):
            P[i] += phi[D + j] * x
    return tuple(P)


def _eval_q(poly: Sequence[int], x: flint.fmpq) -> flint.fmpq:
    acc = fmpq(0)
    for a in reversed(poly):
        acc = acc * x + a
    return acc


@dataclass(frozen=True)
class FieldSpec:
    """The field Q(2cos(pi/N)) with a chosen real embedding.

    ``minimal_polynomial`` is listed from the constant term up and is monic.
    ``interval`` is a rational interval containing 2cos(pi/N) and no other
    root of the minimal polynomial.
    """

    conductor: int
    minimal_polynomial: tuple[int, ...]
    interval: tuple[Fraction, Fraction]

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1

    def __repr__(self):
        return f"FieldSpec(N={self.conductor}, degree={self.degree})"

    # reduction data: c^t for t < 2d-1 as coefficient vectors
    @cached_property
    def _powers(self) -> tuple[tuple[flint.fmpq, ...], ...]:
        d = self.degree
        mp = self.minimal_polynomial
        rows = []
        cur = [fmpq(0)] * d
        cur[0] = fmpq(1)
        for _ in range(max(2 * d - 1, 1)):
            rows.append(tuple(cur))
            # multiply by c
            top = cur[-1]
            nxt = [fmpq(0)] + cur[:-1]
            if top != 0:
                for i in range(d):
                    nxt[i] -= top * mp[i]
            cur = nxt
        return tuple(rows)

    @cached_property
    def zero(self) -> "AlgebraicReal":
        return AlgebraicReal(self, (fmpq(0),) * self.degree)

    @cached_property
    def one(self) -> "AlgebraicReal":
        return self(1)

    @cached_property
    def gen(self) -> "AlgebraicReal":
        """The generator c = 2cos(pi/N)."""
        if self.degree == 1:
            return self(Fraction(-self.minimal_polynomial[0]))
        return AlgebraicReal(self, (fmpq(0), fmpq(1)) + (fmpq(0),) * (self.degree - 2))

    def __call__(self, x) -> "AlgebraicReal":
        """Coerce an int, Fraction, fmpq or AlgebraicReal into the field."""
        if isinstance(x, AlgebraicReal):
            if x.field is not self and x.field != self:
                raise ValueError("element belongs to a different field")
            return x
        return AlgebraicReal(self, (_q(x),) + (fmpq(0),) * (self.degree - 1))

    def element(self, coeffs: Iterable) -> "AlgebraicReal":
        """Element sum_j coeffs[j] c^j, reduced."""
        cs = [_q(a) for a in coeffs]
        return AlgebraicReal(self, self._reduce(cs))

    def _reduce(self, cs: list) -> tuple:
        d = self.degree
        if len(cs) <= d:
            return tuple(cs) + (fmpq(0),) * (d - len(cs))
        out = list(cs[:d])
        pw = self._powers
        for t in range(d, len(cs)):
            a = cs[t]
            if a == 0:
                continue
            if t < len(pw):
                row = pw[t]
            else:
                row = self._power(t)
            for i in range(d):
                out[i] += a * row[i]
        return tuple(out)

    def _power(self, t: int) -> tuple:
        r = self.gen ** t
        return r.coeffs

    def two_cos(self, m) -> "AlgebraicReal":
        """2cos(pi/m) as a field element; m may be 1, 2, ... or math.inf."""
        if m == math.inf:
            return self(2)  # limit value of 2cos(pi/m)
        m = int(m)
        if m == 1:
            return self(-2)
        if m == 2:
            return self(0)
        if m == 3:
            return self(1)
        N = self.conductor
        if N % m:
            raise ValueError(f"2cos(pi/{m}) is not in {self!r}")
        # 2cos(k theta) = V_k(2cos theta)
        k = N // m
        V = dickson(k)
        return self.element(V) if self.degree > 1 else self(Fraction(_eval_q(V, _q(self.gen.coeffs[0]))))

    # -- embedding ------------------------------------------------------
    def approx(self) -> float:
        return 2.0 * math.cos(math.pi / self.conductor)

    def parse(self, text: str) -> "AlgebraicReal":
        return parse_element(self, text)


_INTERVALS: dict = {}


def _root_interval(spec: FieldSpec) -> tuple[flint.fmpq, flint.fmpq]:
    key = (spec.conductor, spec.minimal_polynomial)
    iv = _INTERVALS.get(key)
    if iv is None:
        iv = (_q(spec.interval[0]), _q(spec.interval[1]))
        _INTERVALS[key] = iv
    return iv


def _refine(spec: FieldSpec, bits: int = 8) -> tuple[flint.fmpq, flint.fmpq]:
    """Bisect the stored isolating interval `bits` times and remember it."""
    lo, hi = _root_interval(spec)
    mp = spec.minimal_polynomial
    slo = _eval_q(mp, lo)
    for _ in range(bits):
        if lo == hi:
            break
        mid = (lo + hi) / 2
        sm = _eval_q(mp, mid)
        if sm == 0:
            lo = hi = mid
            break
        if (sm > 0) == (slo > 0):
            lo, slo = mid, sm
        else:
            hi = mid
    _INTERVALS[(spec.conductor, spec.minimal_polynomial)] = (lo, hi)
    return lo, hi


def _enclose(coeffs, lo, hi):
    """Interval enclosure of sum coeffs[j] x^j for x in [lo, hi]."""
    elo = ehi = fmpq(0)
    for a in reversed(coeffs):
        # [elo, ehi] * [lo, hi]
        prods = (elo * lo, elo * hi, ehi * lo, ehi * hi)
        elo, ehi = min(prods) + a, max(prods) + a
    return elo, ehi


class AlgebraicReal:
    """Element of a FieldSpec, stored as reduced coefficients in c."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, AlgebraicReal):
            return other
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraicReal(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraicReal(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return AlgebraicReal(self.field, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            q = _q(other)
            return AlgebraicReal(self.field, tuple(a * q for a in self.coeffs))
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        d = len(self.coeffs)
        if d == 1:
            return AlgebraicReal(self.field, (self.coeffs[0] * other.coeffs[0],))
        prod = [fmpq(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    prod[i + j] += a * b
        return AlgebraicReal(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = len(self.coeffs)
        if d == 1:
            return AlgebraicReal(self.field, (1 / self.coeffs[0],))
        # solve (mult-by-self matrix) y = e_0
        cols = []
        basis = [self.field.element([0] * j + [1]) for j in range(d)]
        for b in basis:
            cols.append((self * b).coeffs)
        M = flint.fmpq_mat(d, d, [cols[j][i] for i in range(d) for j in range(d)])
        rhs = flint.fmpq_mat(d, 1, [1] + [0] * (d - 1))
        y = M.solve(rhs)
        return AlgebraicReal(self.field, tuple(y[i, 0] for i in range(d)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            q = _q(other)
            return AlgebraicReal(self.field, tuple(a / q for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, AlgebraicReal) else other
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self._hash is None:
            if all(a == 0 for a in self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(self.coeffs)
        return self._hash

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        a = self.coeffs[0]
        return Fraction(int(a.p), int(a.q))

    def sign(self) -> int:
        """Exact sign under the embedding c = 2cos(pi/N)."""
        if self.is_zero():
            return 0
        cs = self.coeffs
        if len(cs) == 1 or self.is_rational():
            a = cs[0]
            return (a > 0) - (a < 0)
        spec = self.field
        lo, hi = _root_interval(spec)
        while True:
            elo, ehi = _enclose(cs, lo, hi)
            if elo > 0:
                return 1
            if ehi < 0:
                return -1
            lo, hi = _refine(spec, 16)

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        c = self.field.approx()
        return sum(float(a.p) / float(a.q) * c ** j for j, a in enumerate(self.coeffs))

    # -- text -----------------------------------------------------------
    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"AlgebraicReal({format_element(self)!r}, N={self.field.conductor})"


def sign(x: AlgebraicReal) -> int:
    return x.sign()


def _fmt_q(a: flint.fmpq) -> str:
    return str(int(a.p)) if a.q == 1 else f"{int(a.p)}/{int(a.q)}"


def format_element(x: AlgebraicReal) -> str:
    """Polynomial in c with rational coefficients, e.g. '1/2-3*c+c^2'."""
    parts = []
    for j, a in enumerate(x.coeffs):
        if a == 0:
            continue
        if j == 0:
            term = _fmt_q(a)
        else:
            mon = "c" if j == 1 else f"c^{j}"
            if a == 1:
                term = mon
            elif a == -1:
                term = "-" + mon
            else:
                term = f"{_fmt_q(a)}*{mon}"
        if parts and not term.startswith("-"):
            parts.append("+")
        parts.append(term)
    return "".join(parts) if parts else "0"


_TERM = re.compile(r"([+-]?)([0-9]+(?:/[0-9]+)?)?(\*)?(c(?:\^([0-9]+))?)?")


def parse_element(field: FieldSpec, text: str) -> AlgebraicReal:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty field literal")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"bad field literal {text!r}")
        sg, num, star, mon, exp = m.groups()
        if num is None and mon is None:
            raise ValueError(f"bad field literal {text!r}")
        if star and (num is None or mon is None):
            raise ValueError(f"bad field literal {text!r}")
        if num is not None and mon is not None and not star:
            raise ValueError(f"bad field literal {text!r}")
        val = Fraction(num) if num is not None else Fraction(1)
        if sg == "-":
            val = -val
        e = 0 if mon is None else (int(exp) if exp else 1)
        coeffs[e] = coeffs.get(e, Fraction(0)) + val
        pos = m.end()
    top = max(coeffs)
    return field.element([coeffs.get(j, 0) for j in range(top + 1)])


# ---------------------------------------------------------------------------
# field selection


def _isolating_interval(N: int, poly: tuple[int, ...]) -> tuple[Fraction, Fraction]:
    d = len(poly) - 1
    root = 2 * math.cos(math.pi / N)
    if d == 1:
        r = Fraction(-poly[0], poly[1])
        return (r, r)
    others = [2 * math.cos(k * math.pi / N) for k in range(3, N, 2) if math.gcd(k, 2 * N) == 1]
    gap = min(abs(root - r) for r in others)
    lo = Fraction(root - gap / 3).limit_denominator(1 << 20)
    hi = Fraction(root + gap / 3).limit_denominator(1 << 20)
    flo = _eval_q(poly, _q(lo))
    fhi = _eval_q(poly, _q(hi))
    if not (flo * fhi < 0):
        raise ArithmeticError(f"failed to isolate 2cos(pi/{N})")
    return (lo, hi)


_FIELDS: dict[int, FieldSpec] = {}


def field_of_conductor(N: int) -> FieldSpec:
    """The field Q(2cos(pi/N)), cached."""
    spec = _FIELDS.get(N)
    if spec is None:
        poly = minimal_polynomial_2cos(N)
        spec = FieldSpec(N, poly, _isolating_interval(N, poly))
        _FIELDS[N] = spec
    return spec


def rational_field() -> FieldSpec:
    return field_of_conductor(1)


def field_for(coxeter_matrix) -> FieldSpec:
    """Smallest field Q(2cos(pi/N)) holding 2cos(pi/m) for all finite labels.

    Labels whose cosine is rational (1, 2, 3) and infinite labels do not
    enlarge the field.
    """
    labels = set()
    for row in coxeter_matrix:
        for m in row:
            if m == math.inf or (isinstance(m, str) and m.lower() in ("inf", "infinity")):
                continue
            if int(m) != m or m <= 0:
                raise ValueError(f"invalid Coxeter label {m!r}")
            labels.add(int(m))
    N = reduce(math.lcm, (m for m in labels if m >= 4), 1)
    return field_of_conductor(N)
