"""Soergel modules for finite W.

The Bott-Samelson module BS(s_1, ..., s_k) = R (x)_{R^{s_1}} R (x) ... (x)_{R^{s_k}} K
is built from the inside out: N -> R (x)_{R^s} N (1).  Since R = R^s + alpha_s R^s,
R (x)_{R^s} N = (1 (x) N) + (alpha_s (x) N), and a linear form r = p + q alpha_s
(p = (r + sr)/2 invariant, q = <r, alpha_s^vee>/2) acts by

    r (1 (x) n)       = 1 (x) p n + alpha_s (x) q n
    r (alpha_s (x) n) = 1 (x) q alpha_s^2 n + alpha_s (x) p n.

The form is <f (x) n, g (x) n'> = <d_s(fg) n, n'>, which in these blocks is
[[0, 2F], [2F, 0]].  Unwinding, the outermost factor's Demazure operator is
applied first.

Summands are split off by primitive idempotents of the algebra of degree 0
R-linear endomorphisms and labeled by comparison with KL data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

import flint

from .coxeter import Element, enumerate_elements, reduced_expressions
from .errors import DecompositionFailure, InvalidInput, LabelingAmbiguity, Unsupported
from .hecke import KLTable, LaurentPoly
from .linalg import KMatrix, column_basis, nullspace, rank, rref, solve
from .numfield import AlgebraicReal
from .reflrep import Covector, canonical_dominant

if TYPE_CHECKING:
    from .coxeter import CoxeterSystem

__all__ = [
    "GradedRModule",
    "IntersectionForm",
    "Summand",
    "Decomposition",
    "bott_samelson",
    "endomorphisms",
    "decompose",
    "indecomposable",
    "verify_categorification",
    "CategorificationReport",
]


@dataclass
class GradedRModule:
    """Finite-dimensional graded R-module with a homogeneous basis.

    actions[j] is the matrix of the coordinate function x_j (degree +2).
    """

    system: "CoxeterSystem"
    degrees: list[int]
    actions: list[KMatrix]
    word: tuple[int, ...] | None = None
    subsets: list[tuple[int, ...]] | None = None  # BS basis labels b_E

    @property
    def field(self):
        return self.system.field

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def grdim(self) -> LaurentPoly:
        """sum_i dim M^i v^{-i}."""
        return LaurentPoly((-d, c) for d, c in self.graded_dims().items())

    def indices(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def act(self, lam: Covector | Sequence) -> KMatrix:
        coords = lam.coords if isinstance(lam, Covector) else lam
        K = self.field
        out = KMatrix.zeros(K, self.dim, self.dim)
        for j, c in enumerate(coords):
            c = K(c)
            if not c.is_zero():
                out = out + self.actions[j] * c
        return out

    @property
    def bottom(self) -> int:
        return min(self.degrees)

    def check(self) -> dict[str, bool]:
        X = self.actions
        comm = all((X[i] @ X[j]) == (X[j] @ X[i]) for i in range(len(X)) for j in range(i + 1, len(X)))
        graded = True
        for A in X:
            for (r, c), _ in A.nonzero_entries().items():
                if self.degrees[r] != self.degrees[c] + 2:
                    graded = False
        return {"commuting": comm, "graded": graded}


@dataclass
class IntersectionForm:
    matrix: KMatrix
    sign: int = 1  # rescaling applied to make the minimal-degree value positive

    def value(self, a: KMatrix, b: KMatrix) -> AlgebraicReal:
        return (a.T @ self.matrix @ b)[0, 0]

    def check(self, module: GradedRModule) -> dict[str, bool]:
        F = self.matrix
        sym = F == F.T
        compat = all(A.T @ F == F @ A for A in module.actions)
        graded = all(module.degrees[r] == -module.degrees[c] for (r, c) in F.nonzero_entries())
        nondeg = rank(F) == module.dim
        return {"symmetric": sym, "R_compatible": compat, "graded": graded, "nondegenerate": nondeg}

    def minimal_degree_value(self, module: GradedRModule, lam: Covector) -> AlgebraicReal:
        """<lam^l b_min, b_min> with l = -(minimal degree)."""
        idx = module.indices(module.bottom)
        if len(idx) != 1:
            raise InvalidInput("minimal degree is not one-dimensional")
        K = module.field
        b = KMatrix.from_sparse(K, module.dim, 1, {(idx[0], 0): 1})
        L = module.act(lam)
        v = b
        for _ in range(-module.bottom):
            v = L @ v
        return self.value(v, b)


def bott_samelson(system: "CoxeterSystem", word: Sequence[int]) -> tuple[GradedRModule, IntersectionForm]:
    """The Bott-Samelson module of a word (any word, reduced or not) and its form.

    Basis element b_E has alpha_{s_i} in factor i for i in E; degrees lie in [-k, k].
    """
    if not system.is_finite:
        raise Unsupported("Soergel modules are built for finite W only")
    word = tuple(int(s) for s in word)
    if any(not 0 <= s < system.rank for s in word):
        raise InvalidInput(f"word {word} has letters outside the generating set")
    real = system.realization
    K = system.field
    n = real.dim
    X = [KMatrix.zeros(K, 1, 1) for _ in range(n)]
    F = KMatrix.identity(K, 1)
    degs = [0]
    subsets: list[tuple[int, ...]] = [()]
    half = Fraction(1, 2)
    for pos in reversed(range(len(word))):
        s = word[pos]
        m = len(degs)
        A = KMatrix.zeros(K, m, m)
        for l in range(n):
            c = real.roots[s, l]
            if not c.is_zero():
                A = A + X[l] * c
        A2 = A @ A
        eye = KMatrix.identity(K, m)
        newX = []
        for j in range(n):
            q = real.coroots[j, s] * half
            if q.is_zero():
                newX.append(KMatrix.block_diag(K, [X[j], X[j]]))
                continue
            P = X[j] - A * q
            top = KMatrix.hstack(K, [P, A2 * q])
            bot = KMatrix.hstack(K, [eye * q, P])
            newX.append(KMatrix.vstack(K, [top, bot]))
        Z = KMatrix.zeros(K, m, m)
        F2 = F * 2
        F = KMatrix.vstack(K, [KMatrix.hstack(K, [Z, F2]), KMatrix.hstack(K, [F2, Z])])
        X = newX
        degs = [d - 1 for d in degs] + [d + 1 for d in degs]
        subsets = list(subsets) + [(pos + 1,) + E for E in subsets]
    return GradedRModule(system, degs, X, word, subsets), IntersectionForm(F)


# ---------------------------------------------------------------------------
# endomorphisms and idempotents


def endomorphisms(module: GradedRModule) -> list[KMatrix]:
    """K-basis of the degree-0 R-linear endomorphisms, as full matrices."""
    K = module.field
    degs = sorted(set(module.degrees))
    idx = {d: module.indices(d) for d in degs}
    unknown = {}
    for d in degs:
        for a, i in enumerate(idx[d]):
            for b, j in enumerate(idx[d]):
                unknown[(i, j)] = len(unknown)
    nu = len(unknown)
    rows: dict = {}
    r = 0
    for A in module.actions:
        ent = A.nonzero_entries()
        by_col: dict[int, list] = {}
        by_row: dict[int, list] = {}
        for (p, a), x in ent.items():
            by_col.setdefault(a, []).append((p, x))
            by_row.setdefault(p, []).append((a, x))
        # (A E - E A)[p, b] = 0 for deg p = deg b + 2
        for d in degs:
            if d + 2 not in idx:
                continue
            for p in idx[d + 2]:
                for b in idx[d]:
                    terms: dict[int, AlgebraicReal] = {}
                    for a, x in by_row.get(p, []):
                        u = unknown[(a, b)]
                        terms[u] = terms.get(u, K.zero) + x
                    for c, x in by_col.get(b, []):
                        u = unknown[(p, c)]
                        terms[u] = terms.get(u, K.zero) - x
                    terms = {u: x for u, x in terms.items() if not x.is_zero()}
                    if terms:
                        for u, x in terms.items():
                            rows[(r, u)] = x
                        r += 1
    if r == 0:
        sol = KMatrix.identity(K, nu)
    else:
        sol = nullspace(KMatrix.from_sparse(K, r, nu, rows))
    inv = {u: key for key, u in unknown.items()}
    out = []
    for c in range(sol.shape[1]):
        ent = {}
        for (u, _), x in sol.take(None, [c]).nonzero_entries().items():
            ent[inv[u]] = x
        out.append(KMatrix.from_sparse(K, module.dim, module.dim, ent))
    return out


def _vec(M: KMatrix) -> KMatrix:
    K = M.field
    m, n = M.shape
    parts = [flint.fmpq_mat(m * n, 1, P.entries()) for P in M.parts]
    return KMatrix(K, parts)


def _corner_basis(e: KMatrix, basis: list[KMatrix]) -> list[KMatrix]:
    """A spanning set (not necessarily independent) of eAe."""
    out = []
    for b in basis:
        c = e @ b @ e
        if not c.is_zero():
            out.append(c)
    return out


def _trace_gram(mats: list[KMatrix]) -> KMatrix:
    """Gram matrix tr(A_i A_j) over K, via rational products of flattened parts."""
    K = mats[0].field
    d = K.degree
    r = len(mats)
    n = mats[0].shape[0]
    rows_s = [flint.fmpq_mat(r, n * n, [x for M in mats for x in M.parts[t].entries()]) for t in range(d)]
    cols_t = [
        flint.fmpq_mat(r, n * n, [x for M in mats for x in M.parts[t].transpose().entries()]).transpose()
        for t in range(d)
    ]
    G = KMatrix.zeros(K, r, r)
    c = K.gen if d > 1 else K.one
    for s_ in range(d):
        for t in range(d):
            Q = rows_s[s_] * cols_t[t]
            G = G + KMatrix.from_rational(K, Q) * (c ** (s_ + t))
    return G


def _semisimple_rank(alg: list[KMatrix]) -> int:
    """dim_K of A / rad(A) for the algebra spanned by alg: rank of the trace form."""
    if not alg:
        return 0
    return rank(_trace_gram(alg))


def _eval_poly_big(coeffs: list, B: flint.fmpq_mat) -> flint.fmpq_mat:
    n = B.nrows()
    out = flint.fmpq_mat(n, n)
    eye = flint.fmpq_mat(n, n)
    for i in range(n):
        eye[i, i] = 1
    for c in reversed(coeffs):
        out = out * B
        if c != 0:
            out = out + eye * c
    return out


def _fitting_idempotents(a: KMatrix, e: KMatrix) -> list[KMatrix]:
    """Idempotents e*P_f(a) for the rational primary factors f of the minimal polynomial."""
    K = a.field
    B = a.big()
    mp = B.minpoly()
    mp = flint.fmpq_poly(mp.coeffs()) if not isinstance(mp, flint.fmpq_poly) else mp
    _, facs = mp.factor()
    if len(facs) < 2:
        return [e]
    out = []
    for f, k in facs:
        g = f**k
        h = mp // g
        d, u, v = flint.fmpq_poly.xgcd(g, h) if hasattr(flint.fmpq_poly, "xgcd") else g.xgcd(h)
        proj = (v * h) % mp
        Pbig = _eval_poly_big(proj.coeffs(), B)
        P = KMatrix.from_big(K, Pbig)
        f_e = e @ P
        if not f_e.is_zero():
            out.append(f_e)
    return out


def _graded_column_basis(module: GradedRModule, e: KMatrix) -> tuple[KMatrix, list[int]]:
    """Homogeneous basis (columns) of the image of a degree-0 idempotent."""
    K = module.field
    cols = []
    degs = []
    for d in sorted(set(module.degrees)):
        I = module.indices(d)
        blk = e.take(I, I)
        if blk.is_zero():
            continue
        C, _ = column_basis(blk)
        ent = {(I[r], c): x for (r, c), x in C.nonzero_entries().items()}
        cols.append(KMatrix.from_sparse(K, module.dim, C.shape[1], ent))
        degs.extend([d] * C.shape[1])
    return KMatrix.hstack(K, cols, nrows=module.dim), degs


def _bottom_split(module: GradedRModule, e: KMatrix, alg: list[KMatrix]) -> KMatrix | None:
    """A primitive idempotent a in eAe built from a rank-one projector on the
    lowest nonzero degree of eM, or None if that route does not apply."""
    K = module.field
    C, degs = _graded_column_basis(module, e)
    d0 = min(degs)
    I = module.indices(d0)
    U = C.take(I, [c for c, d in enumerate(degs) if d == d0])
    n0 = U.shape[1]
    if n0 < 2:
        return None
    rhos = []
    for b in alg:
        X = solve(U, b.take(I, I) @ U)
        if X is None:
            return None
        rhos.append(X)
    A = KMatrix.hstack(K, [_vec(r) for r in rhos])
    if rank(A) != n0 * n0:
        return None
    target = KMatrix.from_sparse(K, n0, n0, {(0, 0): 1})
    c = solve(A, _vec(target))
    if c is None:
        return None
    a = KMatrix.zeros(K, module.dim, module.dim)
    for i, b in enumerate(alg):
        x = c[i, 0]
        if not x.is_zero():
            a = a + b * x
    for _ in range(12):
        a2 = a @ a
        if a2 == a:
            return a
        a = a2 * 3 - (a2 @ a) * 2
    return None


def _split(module: GradedRModule, e: KMatrix, basis: list[KMatrix], rng: random.Random, depth=0) -> list[KMatrix]:
    alg = _corner_basis(e, basis)
    if _semisimple_rank(alg) == 1:
        return [e]
    if depth > 40:
        raise DecompositionFailure("idempotent splitting did not terminate")
    K = module.field
    for _ in range(4):
        a = KMatrix.zeros(K, module.dim, module.dim)
        for b in alg:
            a = a + b * rng.randint(-3, 3)
        parts = _fitting_idempotents(a, e)
        if len(parts) > 1:
            out = []
            for f in parts:
                out.extend(_split(module, f, basis, rng, depth + 1))
            return out
    a = _bottom_split(module, e, alg)
    if a is not None:
        return _split(module, a, basis, rng, depth + 1) + _split(module, e - a, basis, rng, depth + 1)
    raise DecompositionFailure("could not split a non-local endomorphism algebra")


# ---------------------------------------------------------------------------
# decomposition and labels


@dataclass
class Summand:
    label: Element
    shift: int
    projector: KMatrix
    graded_dim: LaurentPoly

    def to_json(self) -> dict:
        return {"label": str(self.label), "shift": self.shift, "graded_dim": str(self.graded_dim)}


@dataclass
class Decomposition:
    module: GradedRModule
    summands: list[Summand]

    def multiplicities(self) -> dict[Element, LaurentPoly]:
        """{z: sum_m v^m} over summands B_z(m)."""
        out: dict[Element, LaurentPoly] = {}
        for S in self.summands:
            out[S.label] = out.get(S.label, LaurentPoly()) + LaurentPoly.monomial(S.shift)
        return out

    def check(self) -> dict[str, bool]:
        K = self.module.field
        n = self.module.dim
        P = [S.projector for S in self.summands]
        total = KMatrix.zeros(K, n, n)
        for p in P:
            total = total + p
        complete = total == KMatrix.identity(K, n)
        idem = all(p @ p == p for p in P)
        orth = all((P[i] @ P[j]).is_zero() for i in range(len(P)) for j in range(len(P)) if i != j)
        equiv = all(A @ p == p @ A for p in P for A in self.module.actions)
        dims = sum((S.graded_dim for S in self.summands), LaurentPoly()) == self.module.grdim()
        return {"complete": complete, "idempotent": idem, "orthogonal": orth, "equivariant": equiv, "graded_dims": dims}

    def to_json(self) -> dict:
        return {
            "word": list(self.module.word or ()),
            "graded_dim": str(self.module.grdim()),
            "summands": [S.to_json() for S in self.summands],
        }


def _cache(system) -> dict:
    return system.__dict__.setdefault("_soergel_cache", {})


def _kl_table(system) -> KLTable:
    c = _cache(system)
    if "table" not in c:
        c["table"] = KLTable(system)
    return c["table"]


def _kl_grdim(table: KLTable, z: Element) -> LaurentPoly:
    """sum_y p_{y,z} v^{-l(y)}, the predicted graded dimension of B_z."""
    out = LaurentPoly()
    j = table.idx(z)
    row = table.P[j]
    for y in range(table.n):
        if row[y].any():
            out = out + LaurentPoly.from_array(row[y], table.OFF).shift(-int(table.length[y]))
    return out


def _annihilator(module: GradedRModule, vec: KMatrix, max_deg: int) -> list[KMatrix]:
    """Degreewise annihilator of vec in polynomial degrees 1..max_deg, as
    column-space bases in the monomial basis (reduced row echelon form)."""
    from .demazure import monomials

    K = module.field
    nv = len(module.actions)
    out = []
    images = {tuple([0] * nv): vec}
    for d in range(1, max_deg + 1):
        cols = []
        new = {}
        for e in monomials(nv, d):
            j = next(k for k, a in enumerate(e) if a)
            prev = list(e)
            prev[j] -= 1
            v = module.actions[j] @ images[tuple(prev)]
            new[e] = v
            cols.append(v)
        images.update(new)
        N = nullspace(KMatrix.hstack(K, cols))
        if N.shape[1]:
            R, _ = rref(N.T)
            out.append(R)
        else:
            out.append(KMatrix.zeros(K, 0, len(cols)))
    return out


def _reference_annihilator(system, z: Element) -> list[KMatrix]:
    c = _cache(system).setdefault("ann", {})
    if z.key not in c:
        M, _ = bott_samelson(system, z.canonical_word)
        K = system.field
        b = KMatrix.from_sparse(K, M.dim, 1, {(0, 0): 1})
        c[z.key] = _annihilator(M, b, z.length)
    return c[z.key]


def _label(module: GradedRModule, e: KMatrix, table: KLTable) -> tuple[Element, int, LaurentPoly]:
    C, degs = _graded_column_basis(module, e)
    dmin, dmax = min(degs), max(degs)
    if (dmax - dmin) % 2:
        raise LabelingAmbiguity("summand degree range has odd width")
    ell = (dmax - dmin) // 2
    shift = -(dmin + dmax) // 2
    counts: dict[int, int] = {}
    for d in degs:
        counts[d] = counts.get(d, 0) + 1
    gd = LaurentPoly((-d, c) for d, c in counts.items())
    centered = gd.shift(-shift)
    cands = [z for z in table.elements if z.length == ell and _kl_grdim(table, z) == centered]
    if not cands:
        raise LabelingAmbiguity(f"no element of length {ell} has graded dimension {centered}")
    if len(cands) > 1:
        bottom = [c for c, d in enumerate(degs) if d == dmin]
        if len(bottom) != 1:
            raise LabelingAmbiguity("summand has a non-simple minimal degree")
        b = C.take(None, bottom)
        ann = _annihilator(module, b, ell)
        matches = [z for z in cands if _reference_annihilator(module.system, z) == ann]
        if len(matches) != 1:
            raise LabelingAmbiguity(f"{len(matches)} candidate labels among {[str(z) for z in cands]}")
        cands = matches
    return cands[0], shift, gd


def decompose(module: GradedRModule, form: IntersectionForm | None = None, seed: int = 0) -> Decomposition:
    """Krull-Schmidt decomposition into labeled shifted indecomposables."""
    basis = endomorphisms(module)
    K = module.field
    rng = random.Random(seed)
    idems = _split(module, KMatrix.identity(K, module.dim), basis, rng)
    table = _kl_table(module.system)
    summands = []
    for e in idems:
        z, m, gd = _label(module, e, table)
        summands.append(Summand(z, m, e, gd))
    summands.sort(key=lambda S: (-S.label.length, S.label.sort_key(), S.shift))
    return Decomposition(module, summands)


def _restrict(module: GradedRModule, form: IntersectionForm, e: KMatrix) -> tuple[GradedRModule, IntersectionForm]:
    C, degs = _graded_column_basis(module, e)
    acts = [solve(C, A @ C) for A in module.actions]
    F = C.T @ form.matrix @ C
    return GradedRModule(module.system, degs, acts, module.word), IntersectionForm(F)


def indecomposable(system: "CoxeterSystem", x: Element, word: Sequence[int] | None = None) -> tuple[GradedRModule, IntersectionForm]:
    """B_x as the summand of BS(word) (default: canonical reduced word of x)
    containing the minimal degree -l(x), with the restricted form normalized
    so that <lambda^l b_min, b_min> > 0 for the canonical dominant lambda."""
    c = _cache(system).setdefault("indec", {})
    word = tuple(word) if word is not None else x.canonical_word
    if system.element(word) != x or len(word) != x.length:
        raise InvalidInput(f"{word} is not a reduced expression of {x}")
    if word in c:
        return c[word]
    M, F = bott_samelson(system, word)
    if x.length == 0:
        c[word] = (M, F)
        return M, F
    D = decompose(M, F)
    hits = [S for S in D.summands if S.label == x and S.shift == 0]
    if len(hits) != 1:
        raise DecompositionFailure(f"expected one summand B_x in BS({word}), found {len(hits)}")
    N, G = _restrict(M, F, hits[0].projector)
    val = G.minimal_degree_value(N, canonical_dominant(system.realization))
    sgn = val.sign()
    if sgn == 0:
        raise DecompositionFailure("restricted form vanishes at the minimal degree")
    if sgn < 0:
        G = IntersectionForm(G.matrix * -1, sign=-1)
    c[word] = (N, G)
    return N, G


# ---------------------------------------------------------------------------
# categorification check


def _kl_product_of_generators(table: KLTable, word: Sequence[int]) -> dict[Element, LaurentPoly]:
    """b_{s_1} ... b_{s_k} expanded in the KL basis."""
    import numpy as np

    k = len(word)
    L = table.max_length
    off = k + 1
    width = 2 * k + L + 3
    vec = np.zeros((table.n, width), dtype=np.int64)
    vec[0, off] = 1
    for s in reversed(word):
        vec = table._bs_std(s, vec)
    Pw = np.zeros((table.n, table.n, width), dtype=np.int64)
    Pw[:, :, off - table.OFF : off - table.OFF + table.P.shape[-1]] = table.P
    out = {}
    for z in range(table.n - 1, -1, -1):
        c = vec[z].copy()
        if not c.any():
            continue
        out[table.elements[z]] = LaurentPoly.from_array(c, off)
        for e in np.nonzero(c)[0]:
            sh = int(e) - off
            src = Pw[z]
            moved = np.zeros_like(src)
            if sh >= 0:
                moved[:, sh:] = src[:, : width - sh]
            else:
                moved[:, :sh] = src[:, -sh:]
            vec = vec - c[e] * moved
    return out


@dataclass
class CategorificationReport:
    system: str
    length_cap: int
    results: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.results)

    def to_json(self) -> dict:
        return {"system": self.system, "length_cap": self.length_cap, "passed": self.passed, "words": self.results}


def verify_categorification(system: "CoxeterSystem", length_cap: int, words: Sequence[Sequence[int]] | None = None) -> CategorificationReport:
    """Compare module decompositions of BS(word) with KL-basis products for
    every reduced word of length <= length_cap (or the given words)."""
    if not system.is_finite:
        raise Unsupported("module-level categorification check needs finite W")
    table = _kl_table(system)
    if words is None:
        words = []
        for x in enumerate_elements(system, length_cap):
            if 0 < x.length <= length_cap:
                words.extend(reduced_expressions(x))
    rep = CategorificationReport(system.name or "W", length_cap)
    for w in words:
        w = tuple(w)
        M, F = bott_samelson(system, w)
        D = decompose(M, F)
        mod_side = D.multiplicities()
        kl_side = _kl_product_of_generators(table, w)
        ok = mod_side == kl_side and all(D.check().values())
        rep.results.append(
            {
                "word": "".join(f"s{s + 1}" for s in w),
                "passed": ok,
                "module": {str(z): str(p) for z, p in sorted(mod_side.items(), key=lambda t: t[0].sort_key())},
                "hecke": {str(z): str(p) for z, p in sorted(kl_side.items(), key=lambda t: t[0].sort_key())},
            }
        )
    return rep
