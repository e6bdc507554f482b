"""The reflection representation of a Coxeter system.

Coroots live in h, roots in h*, with <alpha_s, alpha_t^vee> = -2cos(pi/m_st)
(and -2 for m_st = inf).  When this matrix C is invertible we take h = K^n
with the coroots as standard basis and the roots as the rows of C.  When C
is singular the space is enlarged to dimension 2n - rank(C): the roots get
extra coordinates that make them independent, while the coroots stay the
first n standard basis vectors.

Covectors are written in the basis of h* dual to the standard basis of h.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .linalg import KMatrix, rank, rref, solve
from .numfield import AlgebraicReal, FieldSpec

if TYPE_CHECKING:
    from .coxeter import CoxeterSystem

__all__ = [
    "Realization",
    "Covector",
    "build_realization",
    "cartan_matrix",
    "is_dominant_regular",
    "sample_dominant_regular",
    "canonical_dominant",
]


@dataclass(frozen=True)
class Covector:
    """An element of h*, by coordinates in the dual basis."""

    coords: tuple[AlgebraicReal, ...]

    def __add__(self, other: "Covector") -> "Covector":
        return Covector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Covector") -> "Covector":
        return Covector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Covector(tuple(-a for a in self.coords))

    def scale(self, x) -> "Covector":
        return Covector(tuple(a * x for a in self.coords))

    def __repr__(self):
        return "Covector(" + ", ".join(str(a) for a in self.coords) + ")"


def cartan_matrix(field: FieldSpec, m: Sequence[Sequence]) -> list[list[AlgebraicReal]]:
    n = len(m)
    C = [[None] * n for _ in range(n)]
    for s in range(n):
        for t in range(n):
            mst = m[s][t]
            if mst == math.inf:
                C[s][t] = field(-2)
            else:
                C[s][t] = -field.two_cos(mst)
    return C


@dataclass(frozen=True, eq=False)
class Realization:
    field: FieldSpec
    rank: int
    dim: int
    cartan: KMatrix  # n x n, <alpha_s, alpha_t^vee>
    coroots: KMatrix  # dim x n, columns alpha_t^vee
    roots: KMatrix  # n x dim, rows alpha_s
    gen_h: tuple[KMatrix, ...]  # phi_s^vee on h
    gen_hstar: tuple[KMatrix, ...]  # phi_s on h* (coordinates as columns)
    rho_vee: KMatrix  # dim x 1, <alpha_s, rho_vee> = 1

    def pairing(self, lam: Covector, v: KMatrix) -> AlgebraicReal:
        acc = self.field.zero
        for j, a in enumerate(lam.coords):
            if not a.is_zero():
                acc = acc + a * v[j, 0]
        return acc

    def root(self, s: int) -> Covector:
        return Covector(tuple(self.roots[s, j] for j in range(self.dim)))

    def coroot(self, s: int) -> KMatrix:
        return self.coroots.take(None, [s])

    def fundamental_weight(self, s: int) -> Covector:
        """Covector with <w_s, alpha_t^vee> = delta_st and zero extra coordinates."""
        K = self.field
        return Covector(tuple(K.one if j == s else K.zero for j in range(self.dim)))

    def coroot_pairings(self, lam: Covector) -> list[AlgebraicReal]:
        return [self.pairing(lam, self.coroot(s)) for s in range(self.rank)]

    def act_covector(self, s: int, lam: Covector) -> Covector:
        col = KMatrix.column(self.field, lam.coords)
        img = self.gen_hstar[s] @ col
        return Covector(tuple(img[j, 0] for j in range(self.dim)))


def build_realization(system: "CoxeterSystem") -> Realization:
    K = system.field
    n = system.rank
    Crows = cartan_matrix(K, system.coxeter_matrix)
    C = KMatrix.from_rows(K, Crows)
    r = rank(C)
    if r == n:
        dim = n
        roots = C
    else:
        # rows of C forming a basis of its row space; the others get a unit
        # vector in a new coordinate
        _, piv = rref(C.T)
        others = [i for i in range(n) if i not in piv]
        dim = 2 * n - r
        rows = []
        for s in range(n):
            extra = [K.zero] * (n - r)
            if s in others:
                extra[others.index(s)] = K.one
            rows.append(list(Crows[s]) + extra)
        roots = KMatrix.from_rows(K, rows)
    coroots = KMatrix.identity(K, dim).take(None, list(range(n)))
    eye = KMatrix.identity(K, dim)
    gen_h = []
    gen_hstar = []
    for s in range(n):
        av = coroots.take(None, [s])  # dim x 1
        a = roots.take([s], None)  # 1 x dim
        gen_h.append(eye - av @ a)
        gen_hstar.append(eye - a.T @ av.T)
    ones = KMatrix.from_rows(K, [[1] for _ in range(n)])
    rho_vee = solve(roots, ones)
    return Realization(K, n, dim, C, coroots, roots, tuple(gen_h), tuple(gen_hstar), rho_vee)


def is_dominant_regular(lam: Covector, realization: Realization) -> bool:
    return all(p.sign() > 0 for p in realization.coroot_pairings(lam))


def canonical_dominant(realization: Realization) -> Covector:
    """The point with <lambda, alpha_s^vee> = 1 for every s."""
    K = realization.field
    return Covector(tuple(K.one if j < realization.rank else K.zero for j in range(realization.dim)))


def sample_dominant_regular(realization: Realization, k: int, seed: int = 0) -> list[Covector]:
    """k distinct dominant regular covectors: the canonical point, then
    sum_s (1 + d_s) w_s with seeded rational d_s in [-1/2, 1/2].

    Any |d_s| < 1 keeps every coroot pairing positive, so the samples stay
    in the open cone.
    """
    if k < 1:
        raise ValueError("need at least one sample")
    K = realization.field
    n = realization.rank
    out = [canonical_dominant(realization)]
    seen = {tuple([Fraction(0)] * n)}
    rng = random.Random(seed)
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > 10000:
            raise RuntimeError("could not produce distinct samples")
        d = tuple(Fraction(rng.randint(-5, 5), 10) for _ in range(n))
        if d in seen:
            continue
        seen.add(d)
        coords = [K(1 + d[j]) if j < n else K.zero for j in range(realization.dim)]
        lam = Covector(tuple(coords))
        assert is_dominant_regular(lam, realization)
        out.append(lam)
    return out
