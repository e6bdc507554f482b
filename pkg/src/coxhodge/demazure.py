"""Polynomials on the reflection representation, Demazure operators and the
coinvariant algebra.

R = K[x_1, ..., x_n] with x_j the coordinate functions on h (the basis of h*
dual to the standard basis of h), graded with deg x_j = 2.  W acts on R by
substituting x_j -> s(x_j).

The coinvariant algebra is built degree by degree with exact linear algebra
over K: the ideal generated by positive degree invariants is spanned in
degree d by x_l * I_{d-1} and the invariants of degree d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

from .coxeter import longest_element, enumerate_elements
from .errors import InvalidInput, ResourceLimit, Unsupported
from .linalg import KMatrix, column_basis, nullspace, rank, rref
from .numfield import AlgebraicReal, FieldSpec, field_of_conductor, format_element, parse_element
from .reflrep import Covector, Realization, sample_dominant_regular

if TYPE_CHECKING:
    from .coxeter import CoxeterSystem

__all__ = [
    "PolyRing",
    "Polynomial",
    "demazure_op",
    "invariant_generators",
    "GradedAlgebra",
    "FrobeniusAlgebra",
    "coinvariant_algebra",
    "monomials",
]


def monomials(nvars: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree d, in decreasing lex order."""
    out = []
    for c in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for j in c:
            e[j] += 1
        out.append(tuple(e))
    return out


def _fmt_monomial(e: Sequence[int]) -> str:
    parts = []
    for j, k in enumerate(e):
        if k == 1:
            parts.append(f"x{j + 1}")
        elif k > 1:
            parts.append(f"x{j + 1}^{k}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """Sparse polynomial {exponent tuple: coefficient} over the ring's field."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "PolyRing", terms: dict | None = None):
        self.ring = ring
        self.terms: dict[tuple[int, ...], AlgebraicReal] = {}
        if terms:
            K = ring.field
            for e, c in terms.items():
                c = c if isinstance(c, AlgebraicReal) else K(c)
                if not c.is_zero():
                    self.terms[tuple(e)] = c

    def _new(self, terms):
        p = Polynomial(self.ring)
        p.terms = terms
        return p

    def __add__(self, other):
        other = self.ring.coerce(other)
        d = dict(self.terms)
        for e, c in other.terms.items():
            x = d.get(e)
            x = c if x is None else x + c
            if x.is_zero():
                d.pop(e, None)
            else:
                d[e] = x
        return self._new(d)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, AlgebraicReal)) or hasattr(other, "numerator"):
            c = self.ring.field(other) if not isinstance(other, AlgebraicReal) else other
            if c.is_zero():
                return self.ring.zero
            return self._new({e: a * c for e, a in self.terms.items()})
        other = self.ring.coerce(other)
        d: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                x = d.get(e)
                d[e] = c1 * c2 if x is None else x + c1 * c2
        return self._new({e: c for e, c in d.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = self.ring.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def degree(self) -> int:
        """Doubled degree (deg x_j = 2)."""
        return 2 * self.total_degree

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        """Part of polynomial degree d (undoubled)."""
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def constant_term(self) -> AlgebraicReal:
        return self.terms.get(tuple([0] * self.ring.nvars), self.ring.field.zero)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        ring = self.ring
        out = ring.zero
        cache: dict[tuple[int, int], Polynomial] = {}

        def pw(j, k):
            key = (j, k)
            if key not in cache:
                cache[key] = images[j] ** k
            return cache[key]

        for e, c in self.terms.items():
            t = ring.const(c)
            for j, k in enumerate(e):
                if k:
                    t = t * pw(j, k)
            out = out + t
        return out

    def divide_linear(self, alpha: "Polynomial") -> "Polynomial":
        """Exact quotient by a linear form; raises if not divisible."""
        lin = {e.index(1): c for e, c in alpha.terms.items() if sum(e) == 1}
        if not lin or len(lin) != len(alpha.terms):
            raise InvalidInput("divisor must be a nonzero linear form")
        j0 = max(lin)
        a0inv = lin[j0].inverse()
        rest = dict(self.terms)
        q: dict = {}
        while True:
            cands = [e for e in rest if e[j0] > 0]
            if not cands:
                break
            e = max(cands, key=lambda t: t[j0])
            c = rest.pop(e) * a0inv
            m = list(e)
            m[j0] -= 1
            m = tuple(m)
            q[m] = q.get(m, self.ring.field.zero) + c
            for j, a in lin.items():
                if j == j0:
                    continue
                t = list(m)
                t[j] += 1
                t = tuple(t)
                x = rest.get(t, self.ring.field.zero) - c * a
                if x.is_zero():
                    rest.pop(t, None)
                else:
                    rest[t] = x
        if rest:
            raise ArithmeticError("polynomial is not divisible by the linear form")
        return self._new({e: c for e, c in q.items() if not c.is_zero()})

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            m = _fmt_monomial(e)
            cs = format_element(c)
            if m == "1":
                out.append(cs)
            elif cs == "1":
                out.append(m)
            elif cs == "-1":
                out.append("-" + m)
            else:
                out.append(f"({cs})*{m}")
        return " + ".join(out)

    def __repr__(self):
        return f"Polynomial({self})"


class PolyRing:
    """R = K[x_1..x_n], optionally carrying the W-action of a realization."""

    def __init__(self, field: FieldSpec, nvars: int, realization: Realization | None = None):
        self.field = field
        self.nvars = nvars
        self.realization = realization

    @classmethod
    def of(cls, realization: Realization) -> "PolyRing":
        return cls(realization.field, realization.dim, realization)

    @cached_property
    def zero(self) -> Polynomial:
        return Polynomial(self)

    @cached_property
    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c) -> Polynomial:
        return Polynomial(self, {tuple([0] * self.nvars): c})

    def var(self, j: int) -> Polynomial:
        e = [0] * self.nvars
        e[j] = 1
        return Polynomial(self, {tuple(e): 1})

    def monomial(self, e: Sequence[int], c=1) -> Polynomial:
        return Polynomial(self, {tuple(e): c})

    def linear(self, lam: Covector | Sequence) -> Polynomial:
        coords = lam.coords if isinstance(lam, Covector) else lam
        return sum((self.var(j) * c for j, c in enumerate(coords)), self.zero)

    def coerce(self, x) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, AlgebraicReal)) or hasattr(x, "numerator"):
            return self.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a polynomial")

    def root(self, s: int) -> Polynomial:
        return self.linear(self._real().root(s))

    def _real(self) -> Realization:
        if self.realization is None:
            raise InvalidInput("ring has no W-action")
        return self.realization

    @cached_property
    def _images(self) -> list[list[Polynomial]]:
        """images[s][j] = s(x_j) as a linear form."""
        real = self._real()
        out = []
        for s in range(real.rank):
            M = real.gen_hstar[s]
            out.append([self.linear([M[k, j] for k in range(self.nvars)]) for j in range(self.nvars)])
        return out

    def act(self, s: int, f: Polynomial) -> Polynomial:
        return f.substitute(self._images[s])

    def act_word(self, word: Iterable[int], f: Polynomial) -> Polynomial:
        """w(f) for w = s_1...s_k: apply s_k first."""
        for s in reversed(tuple(word)):
            f = self.act(s, f)
        return f

    def demazure(self, s: int, f: Polynomial) -> Polynomial:
        return (f - self.act(s, f)).divide_linear(self.root(s))

    # -- degreewise matrices -------------------------------------------------
    def to_vector(self, f: Polynomial, d: int) -> KMatrix:
        mons = monomials(self.nvars, d)
        idx = {e: i for i, e in enumerate(mons)}
        entries = {}
        for e, c in f.terms.items():
            if sum(e) != d:
                raise InvalidInput("polynomial is not homogeneous of the requested degree")
            entries[(idx[e], 0)] = c
        return KMatrix.from_sparse(self.field, len(mons), 1, entries)

    def from_vector(self, v: KMatrix, d: int) -> Polynomial:
        mons = monomials(self.nvars, d)
        return Polynomial(self, {mons[i]: x for (i, _), x in v.nonzero_entries().items()})

    def operator_matrix(self, op, d_in: int, d_out: int) -> KMatrix:
        """Matrix of a linear map R_{d_in} -> R_{d_out} (polynomial degrees) on monomial bases."""
        cols = [self.to_vector(op(self.monomial(e)), d_out) for e in monomials(self.nvars, d_in)]
        return KMatrix.hstack(self.field, cols, nrows=len(monomials(self.nvars, d_out)))

    def action_matrix(self, s: int, d: int) -> KMatrix:
        return self.operator_matrix(lambda f: self.act(s, f), d, d)

    def demazure_matrix(self, s: int, d: int) -> KMatrix:
        return self.operator_matrix(lambda f: self.demazure(s, f), d, d - 1)


def demazure_op(ring: PolyRing, s: int, f: Polynomial) -> Polynomial:
    """d_s(f) = (f - s f) / alpha_s."""
    return ring.demazure(s, f)


# ---------------------------------------------------------------------------
# degreewise invariant theory


class _Degreewise:
    """Monomial bases, multiplication and W-action matrices, and the ideal
    generated by positive degree invariants, one polynomial degree at a time."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.K = ring.field
        real = ring._real()
        self.real = real
        n = ring.nvars
        self.mons = [monomials(n, 0)]
        self.index = [{e: 0 for e in self.mons[0]}]
        self.mul: list[list[KMatrix]] = []  # mul[d][l]: degree d -> d+1
        self.phi = [[KMatrix.identity(self.K, 1) for _ in range(real.rank)]]
        self.ideal = [KMatrix.zeros(self.K, 1, 0)]
        self.gens: list[tuple[int, KMatrix]] = []
        self.invariant_dims = [1]

    @property
    def top(self) -> int:
        return len(self.mons) - 1

    def _extend(self):
        K, n = self.K, self.ring.nvars
        d = len(self.mons)
        mons = monomials(n, d)
        idx = {e: i for i, e in enumerate(mons)}
        prev = self.mons[d - 1]
        muls = []
        for l in range(n):
            ent = {}
            for i, e in enumerate(prev):
                t = list(e)
                t[l] += 1
                ent[(idx[tuple(t)], i)] = 1
            muls.append(KMatrix.from_sparse(K, len(mons), len(prev), ent))
        self.mul.append(muls)
        self.mons.append(mons)
        self.index.append(idx)
        # phi^(d) = sum_l S_l phi^(d-1) E_l, S_l = multiplication by s(x_l)
        phis = []
        E = []
        for l in range(n):
            ent = {}
            for j, e in enumerate(mons):
                first = next(k for k, a in enumerate(e) if a)
                if first == l:
                    t = list(e)
                    t[l] -= 1
                    ent[(self.index[d - 1][tuple(t)], j)] = 1
            E.append(KMatrix.from_sparse(K, len(prev), len(mons), ent))
        for s in range(self.real.rank):
            P1 = self.real.gen_hstar[s]
            acc = KMatrix.zeros(K, len(mons), len(mons))
            for l in range(n):
                if E[l].is_zero():
                    continue
                S = KMatrix.zeros(K, len(mons), len(prev))
                for k in range(n):
                    c = P1[k, l]
                    if not c.is_zero():
                        S = S + muls[k] * c
                acc = acc + S @ self.phi[d - 1][s] @ E[l]
            phis.append(acc)
        self.phi.append(phis)

    def invariants(self, d: int) -> KMatrix:
        while self.top < d:
            self._extend()
        N = len(self.mons[d])
        eye = KMatrix.identity(self.K, N)
        A = KMatrix.vstack(self.K, [P - eye for P in self.phi[d]])
        return nullspace(A)

    def step(self, with_new_invariants: bool = True) -> int:
        """Compute the ideal in the next degree; returns the quotient dimension."""
        d = len(self.ideal)
        while self.top < d:
            self._extend()
        K = self.K
        N = len(self.mons[d])
        prev = self.ideal[d - 1]
        cols = [self.mul[d - 1][l] @ prev for l in range(self.ring.nvars)] if prev.shape[1] else []
        span = KMatrix.hstack(K, cols, nrows=N)
        if span.shape[1]:
            span, _ = column_basis(span)
        if with_new_invariants:
            inv = self.invariants(d)
            self.invariant_dims.append(inv.shape[1])
            if inv.shape[1]:
                both = KMatrix.hstack(K, [span, inv])
                _, piv = rref(both)
                new = [p - span.shape[1] for p in piv if p >= span.shape[1]]
                for j in new:
                    self.gens.append((d, inv.take(None, [j])))
                span = both.take(None, piv)
        self.ideal.append(span)
        return N - span.shape[1]


def invariant_generators(system: "CoxeterSystem", realization: Realization | None = None, degree_cap: int | None = None) -> list[Polynomial]:
    """Homogeneous invariants generating <R_+^W>, up to doubled degree degree_cap.

    For finite W this returns |S| fundamental invariants once the cap reaches
    the largest (doubled) degree; otherwise ResourceLimit is raised.
    """
    if not system.is_finite:
        raise Unsupported("invariant theory is implemented for finite W only")
    real = realization or system.realization
    ring = PolyRing.of(real)
    if degree_cap is None:
        # the largest degree h satisfies h <= l(w0) + 1
        degree_cap = 2 * (longest_element(system).length + 1)
    dw = _Degreewise(ring)
    for _ in range(1, degree_cap // 2 + 1):
        dw.step()
    gens = [ring.from_vector(v, d) for d, v in dw.gens]
    degs = [d for d, _ in dw.gens]
    if len(gens) < real.rank:
        raise ResourceLimit(f"degree cap {degree_cap} too small: found {len(gens)} of {real.rank} generators")
    # confirm the generated ideal has finite codimension
    # the quotient must vanish by (undoubled) degree sum(d_i - 1) + 1
    bound = sum(d - 1 for d in degs) + 1
    while len(dw.ideal) <= bound:
        dw.step(with_new_invariants=False)
    if dw.ideal[bound].shape[1] != len(dw.mons[bound]):
        raise ResourceLimit("generated ideal is not of finite codimension within the cap")
    return gens


# ---------------------------------------------------------------------------
# graded and Frobenius algebras


@dataclass
class GradedAlgebra:
    """Finite-dimensional graded commutative algebra with a basis.

    degrees[i] is the (doubled) degree of basis element i; mult[(i, j)] is the
    sparse expansion {k: c} of e_i e_j.  Basis element 0 is the unit.
    """

    field: FieldSpec
    degrees: list[int]
    mult: dict[tuple[int, int], dict[int, AlgebraicReal]]
    labels: list[str] | None = None

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def basis_in_degree(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def product(self, a: Sequence[AlgebraicReal], b: Sequence[AlgebraicReal]) -> list[AlgebraicReal]:
        K = self.field
        out = [K.zero] * self.dim
        nza = [(i, x) for i, x in enumerate(a) if not K(x).is_zero()]
        nzb = [(j, y) for j, y in enumerate(b) if not K(y).is_zero()]
        for i, x in nza:
            for j, y in nzb:
                for k, c in self.mult.get((i, j), {}).items():
                    out[k] = out[k] + c * x * y
        return out

    def left_mult_matrix(self, a: Sequence) -> KMatrix:
        K = self.field
        ent: dict = {}
        for i, x in enumerate(a):
            x = K(x)
            if x.is_zero():
                continue
            for j in range(self.dim):
                for k, c in self.mult.get((i, j), {}).items():
                    ent[(k, j)] = ent.get((k, j), K.zero) + c * x
        return KMatrix.from_sparse(K, self.dim, self.dim, ent)

    def basis_vector(self, i: int) -> list[AlgebraicReal]:
        K = self.field
        return [K.one if j == i else K.zero for j in range(self.dim)]

    def check_axioms(self) -> dict[str, bool]:
        """Graded, commutative, associative on basis triples, unital."""
        n = self.dim
        graded = all(self.degrees[k] == self.degrees[i] + self.degrees[j] for (i, j), v in self.mult.items() for k in v)
        comm = all(self.mult.get((i, j), {}) == self.mult.get((j, i), {}) for i in range(n) for j in range(n))
        unit = all(self.mult.get((0, j), {}) == {j: self.field.one} for j in range(n))
        # When the degree-2 part X generates, L_x L_b = L_{xb} for x in X and
        # all b already forces L_a L_b = L_{ab} for every a (induct on a = x a').
        X = self.basis_in_degree(2)
        generated = all(
            rank(KMatrix.hstack(self.field, [self.left_mult_matrix(self.basis_vector(x)).take(self.basis_in_degree(d), self.basis_in_degree(d - 2)) for x in X]))
            == len(self.basis_in_degree(d))
            for d in set(self.degrees)
            if d > 0
        ) if X else False
        firsts = X if generated else range(n)
        Ls = {i: self.left_mult_matrix(self.basis_vector(i)) for i in range(n)}
        assoc = True
        for i in firsts:
            for j in range(n):
                ab = self.product(self.basis_vector(i), self.basis_vector(j))
                if Ls[i] @ Ls[j] != self.left_mult_matrix(ab):
                    assoc = False
        return {"graded": graded, "commutative": comm, "associative": assoc, "unital": unit}


@dataclass
class FrobeniusAlgebra:
    """Graded algebra with a trace of degree -top_degree and a sample of the
    ample cone (degree-2 coefficient vectors)."""

    algebra: GradedAlgebra
    trace: list[AlgebraicReal]
    top_degree: int
    ample_sample: list[list[AlgebraicReal]] = dc_field(default_factory=list)
    # presentation data, only set for coinvariant algebras
    generators: list[Polynomial] = dc_field(default_factory=list, repr=False)
    standard_monomials: list[list[tuple[int, ...]]] = dc_field(default_factory=list, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def tr(self, a: Sequence) -> AlgebraicReal:
        K = self.field
        acc = K.zero
        for x, t in zip(a, self.trace):
            if not t.is_zero():
                acc = acc + K(x) * t
        return acc

    def pairing_matrix(self) -> KMatrix:
        A = self.algebra
        K = self.field
        ent = {}
        for (i, j), v in A.mult.items():
            acc = K.zero
            for k, c in v.items():
                acc = acc + c * self.trace[k]
            if not acc.is_zero():
                ent[(i, j)] = acc
        return KMatrix.from_sparse(K, A.dim, A.dim, ent)

    def check(self) -> dict[str, bool]:
        A = self.algebra
        trace_ok = all(t.is_zero() or A.degrees[k] == self.top_degree for k, t in enumerate(self.trace))
        G = self.pairing_matrix()
        nondeg = True
        for d in sorted(set(A.degrees)):
            I = A.basis_in_degree(d)
            J = A.basis_in_degree(self.top_degree - d)
            if len(I) != len(J) or rank(G.take(I, J)) != len(I):
                nondeg = False
        ample_ok = all(
            all(A.degrees[k] == 2 for k, x in enumerate(a) if not self.field(x).is_zero()) for a in self.ample_sample
        )
        return {"trace_degree": trace_ok, "nondegenerate": nondeg, "ample_in_degree_2": ample_ok}

    def scaled(self, c) -> "FrobeniusAlgebra":
        c = self.field(c)
        return FrobeniusAlgebra(self.algebra, [t * c for t in self.trace], self.top_degree, list(self.ample_sample), self.generators, self.standard_monomials)

    def to_json(self) -> dict:
        A = self.algebra
        mult = []
        for (i, j), v in sorted(A.mult.items()):
            for k, c in sorted(v.items()):
                mult.append([i, j, k, format_element(c)])
        out = {
            "kind": "frobenius",
            "conductor": self.field.conductor,
            "degrees": list(A.degrees),
            "top_degree": self.top_degree,
            "mult": mult,
            "trace": [[k, format_element(t)] for k, t in enumerate(self.trace) if not t.is_zero()],
            "ample": [[format_element(self.field(x)) for x in a] for a in self.ample_sample],
        }
        if A.labels:
            out["labels"] = list(A.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FrobeniusAlgebra":
        allowed = {"kind", "conductor", "degrees", "top_degree", "mult", "trace", "ample", "labels"}
        extra = set(data) - allowed
        if extra:
            raise InvalidInput(f"unknown keys in algebra JSON: {sorted(extra)}")
        try:
            K = field_of_conductor(int(data.get("conductor", 1)))
            degrees = [int(d) for d in data["degrees"]]
            n = len(degrees)
            mult: dict = {}
            for i, j, k, c in data["mult"]:
                if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                    raise InvalidInput("mult index out of range")
                mult.setdefault((int(i), int(j)), {})[int(k)] = parse_element(K, str(c))
            trace = [K.zero] * n
            for k, c in data["trace"]:
                trace[int(k)] = parse_element(K, str(c))
            ample = [[parse_element(K, str(x)) for x in a] for a in data.get("ample", [])]
            top = int(data.get("top_degree", max(degrees)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed algebra JSON: {exc}") from exc
        for a in ample:
            if len(a) != n:
                raise InvalidInput("ample vector has wrong length")
        A = GradedAlgebra(K, degrees, mult, data.get("labels"))
        return cls(A, trace, top, ample)


def coinvariant_algebra(system: "CoxeterSystem", realization: Realization | None = None, n_ample: int = 5, seed: int = 0) -> FrobeniusAlgebra:
    """C = R / <R_+^W> with monomial basis, Demazure-normalized trace and a
    sample of images of dominant regular covectors."""
    if not system.is_finite:
        raise Unsupported("the coinvariant algebra is only built for finite W")
    real = realization or system.realization
    ring = PolyRing.of(real)
    K = ring.field
    w0 = longest_element(system)
    N = w0.length
    dw = _Degreewise(ring)
    dims = [1]
    while True:
        q = dw.step()
        if q == 0:
            break
        dims.append(q)
        if len(dims) > N + 1:
            raise ResourceLimit("coinvariant quotient did not terminate at l(w0)")
    order = len(enumerate_elements(system))
    if sum(dims) != order or len(dims) != N + 1:
        raise ArithmeticError(f"coinvariant dimensions {dims} inconsistent with |W| = {order}")

    # standard monomials and normal forms
    std: list[list[int]] = []
    NF: list[KMatrix] = []
    for d in range(N + 1):
        I = dw.ideal[d]
        Nd = len(dw.mons[d])
        if I.shape[1] == 0:
            std.append(list(range(Nd)))
            NF.append(KMatrix.identity(K, Nd))
            continue
        R, piv = rref(I.T)
        free = [j for j in range(Nd) if j not in set(piv)]
        ent = {}
        for a, j in enumerate(free):
            ent[(a, j)] = 1
        for i, p in enumerate(piv):
            for a, j in enumerate(free):
                x = R[i, j]
                if not x.is_zero():
                    ent[(a, p)] = -x
        std.append(free)
        NF.append(KMatrix.from_sparse(K, len(free), Nd, ent))

    basis = [(d, j) for d in range(N + 1) for j in std[d]]
    offset = {}
    for i, (d, j) in enumerate(basis):
        offset.setdefault(d, i)
    degrees = [2 * d for d, _ in basis]
    labels = [_fmt_monomial(dw.mons[d][j]) for d, j in basis]
    mult: dict = {}
    nfcols: dict = {}
    for a, (d1, j1) in enumerate(basis):
        for b, (d2, j2) in enumerate(basis):
            if b < a or d1 + d2 > N:
                continue
            e = tuple(x + y for x, y in zip(dw.mons[d1][j1], dw.mons[d2][j2]))
            d = d1 + d2
            col = dw.index[d][e]
            key = (d, col)
            if key not in nfcols:
                v = {}
                for (r, _), x in NF[d].take(None, [col]).nonzero_entries().items():
                    v[offset[d] + r] = x
                nfcols[key] = v
            if nfcols[key]:
                mult[(a, b)] = dict(nfcols[key])
                mult[(b, a)] = dict(nfcols[key])
    A = GradedAlgebra(K, degrees, mult, labels)

    # trace: d_{s1} ... d_{sN} applied to the top standard monomial
    top_idx = basis.index((N, std[N][0]))
    f = ring.monomial(dw.mons[N][std[N][0]])
    for s in reversed(w0.word):
        f = ring.demazure(s, f)
    t = f.constant_term()
    trace = [K.zero] * len(basis)
    trace[top_idx] = t

    ample = []
    for lam in sample_dominant_regular(real, n_ample, seed=seed):
        v = ring.to_vector(ring.linear(lam), 1)
        img = NF[1] @ v
        vec = [K.zero] * len(basis)
        for (r, _), x in img.nonzero_entries().items():
            vec[offset[1] + r] = x
        ample.append(vec)
    return FrobeniusAlgebra(
        A,
        trace,
        2 * N,
        ample,
        generators=[ring.from_vector(v, d) for d, v in dw.gens],
        standard_monomials=[[dw.mons[d][j] for j in std[d]] for d in range(N + 1)],
    )
