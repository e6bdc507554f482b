"""Exact matrices over a FieldSpec, backed by flint rational matrices.

A matrix over K = Q(c) of degree d is stored as d rational matrices
``parts`` with ``A = sum_j parts[j] c^j``.  Products are d^2 rational
products followed by reduction of powers of c.  Row reduction goes through
the regular representation: each K-entry becomes a d x d rational block,
interleaved entry-major, so that the rational rref of the big matrix has
its pivots in whole blocks and encodes the K-rref directly.
"""

from __future__ import annotations

from itertools import chain
from typing import Sequence

import flint

from .numfield import AlgebraicReal, FieldSpec, _q

fmpq = flint.fmpq
fmpq_mat = flint.fmpq_mat

__all__ = ["KMatrix", "rref", "rank", "nullspace", "solve", "inverse", "column_basis", "signature"]


def _zero_mat(m: int, n: int) -> flint.fmpq_mat:
    return fmpq_mat(m, n)


def _isz(p: flint.fmpq_mat) -> bool:
    return p == fmpq_mat(p.nrows(), p.ncols())


class KMatrix:
    __slots__ = ("field", "parts", "shape")

    def __init__(self, field: FieldSpec, parts: Sequence[flint.fmpq_mat]):
        self.field = field
        self.parts = tuple(parts)
        p0 = self.parts[0]
        self.shape = (p0.nrows(), p0.ncols())

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> "KMatrix":
        return cls(field, [_zero_mat(m, n) for _ in range(field.degree)])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "KMatrix":
        eye = fmpq_mat(n, n)
        for i in range(n):
            eye[i, i] = 1
        parts = [eye] + [_zero_mat(n, n) for _ in range(field.degree - 1)]
        return cls(field, parts)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None) -> "KMatrix":
        m = len(rows)
        n = len(rows[0]) if m else (ncols or 0)
        d = field.degree
        data = [[fmpq(0)] * (m * n) for _ in range(d)]
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("ragged rows")
            for k, x in enumerate(row):
                if isinstance(x, AlgebraicReal):
                    cs = x.coeffs
                    for j in range(d):
                        if cs[j] != 0:
                            data[j][i * n + k] = cs[j]
                elif x != 0:
                    data[0][i * n + k] = _q(x)
        return cls(field, [fmpq_mat(m, n, dj) for dj in data])

    @classmethod
    def from_sparse(cls, field: FieldSpec, m: int, n: int, entries: dict) -> "KMatrix":
        """Build from {(i, k): value}."""
        d = field.degree
        data = [[fmpq(0)] * (m * n) for _ in range(d)]
        for (i, k), x in entries.items():
            if isinstance(x, AlgebraicReal):
                for j, a in enumerate(x.coeffs):
                    if a != 0:
                        data[j][i * n + k] += a
            else:
                data[0][i * n + k] += _q(x)
        return cls(field, [fmpq_mat(m, n, dj) for dj in data])

    @classmethod
    def from_rational(cls, field: FieldSpec, A: flint.fmpq_mat) -> "KMatrix":
        m, n = A.nrows(), A.ncols()
        return cls(field, [fmpq_mat(A)] + [_zero_mat(m, n) for _ in range(field.degree - 1)])

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence) -> "KMatrix":
        return cls.from_rows(field, [[v] for v in values], ncols=1)

    @classmethod
    def hstack(cls, field: FieldSpec, mats: Sequence["KMatrix"], nrows: int | None = None) -> "KMatrix":
        mats = [M for M in mats]
        if not mats:
            return cls.zeros(field, nrows or 0, 0)
        m = mats[0].shape[0]
        parts = []
        for j in range(field.degree):
            rows = [[] for _ in range(m)]
            for M in mats:
                if M.shape[0] != m:
                    raise ValueError("hstack: row mismatch")
                if M.shape[1] == 0:
                    continue
                for r, src in zip(rows, M.parts[j].tolist()):
                    r.extend(src)
            n = sum(M.shape[1] for M in mats)
            parts.append(fmpq_mat(m, n, list(chain.from_iterable(rows))) if m and n else _zero_mat(m, n))
        return cls(field, parts)

    @classmethod
    def vstack(cls, field: FieldSpec, mats: Sequence["KMatrix"], ncols: int | None = None) -> "KMatrix":
        mats = [M for M in mats]
        if not mats:
            return cls.zeros(field, 0, ncols or 0)
        return cls.hstack(field, [M.T for M in mats]).T

    @classmethod
    def block_diag(cls, field: FieldSpec, mats: Sequence["KMatrix"]) -> "KMatrix":
        m = sum(M.shape[0] for M in mats)
        n = sum(M.shape[1] for M in mats)
        out = cls.zeros(field, m, n)
        r = c = 0
        for M in mats:
            out = out.with_block(r, c, M)
            r += M.shape[0]
            c += M.shape[1]
        return out

    # -- access ---------------------------------------------------------
    def __getitem__(self, idx) -> AlgebraicReal:
        i, k = idx
        return AlgebraicReal(self.field, tuple(p[i, k] for p in self.parts))

    def rows(self) -> list[list[AlgebraicReal]]:
        lists = [p.tolist() for p in self.parts]
        m, n = self.shape
        return [[AlgebraicReal(self.field, tuple(L[i][k] for L in lists)) for k in range(n)] for i in range(m)]

    def nonzero_entries(self) -> dict:
        lists = [p.tolist() for p in self.parts]
        out = {}
        m, n = self.shape
        for i in range(m):
            for k in range(n):
                cs = tuple(L[i][k] for L in lists)
                if any(a != 0 for a in cs):
                    out[(i, k)] = AlgebraicReal(self.field, cs)
        return out

    def take(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "KMatrix":
        m, n = self.shape
        rows = list(range(m)) if rows is None else list(rows)
        cols = list(range(n)) if cols is None else list(cols)
        parts = []
        for p in self.parts:
            L = p.tolist()
            data = [L[i][k] for i in rows for k in cols]
            parts.append(fmpq_mat(len(rows), len(cols), data) if rows and cols else _zero_mat(len(rows), len(cols)))
        return KMatrix(self.field, parts)

    def with_block(self, r: int, c: int, B: "KMatrix") -> "KMatrix":
        parts = []
        for p, q in zip(self.parts, B.parts):
            p = fmpq_mat(p)
            bm, bn = q.nrows(), q.ncols()
            for i in range(bm):
                for k in range(bn):
                    p[r + i, c + k] = q[i, k]
            parts.append(p)
        return KMatrix(self.field, parts)

    @property
    def T(self) -> "KMatrix":
        return KMatrix(self.field, [p.transpose() for p in self.parts])

    def is_zero(self) -> bool:
        return all(_isz(p) for p in self.parts)

    def __eq__(self, other):
        if not isinstance(other, KMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.parts, other.parts))

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        return tuple(tuple(p.entries()) for p in self.parts)

    def __repr__(self):
        return f"KMatrix({self.shape[0]}x{self.shape[1]}, N={self.field.conductor})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows())

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "KMatrix") -> "KMatrix":
        return KMatrix(self.field, [a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other: "KMatrix") -> "KMatrix":
        return KMatrix(self.field, [a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self) -> "KMatrix":
        return KMatrix(self.field, [-a for a in self.parts])

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        d = self.field.degree
        m, n = self.shape[0], other.shape[1]
        if d == 1:
            return KMatrix(self.field, [self.parts[0] * other.parts[0]])
        if m == 0 or n == 0 or self.shape[1] == 0:
            return KMatrix.zeros(self.field, m, n)
        prods = [None] * (2 * d - 1)
        for j, A in enumerate(self.parts):
            if _isz(A):
                continue
            for k, B in enumerate(other.parts):
                if _isz(B):
                    continue
                P = A * B
                prods[j + k] = P if prods[j + k] is None else prods[j + k] + P
        pw = self.field._powers
        out = [_zero_mat(m, n) for _ in range(d)]
        for t, P in enumerate(prods):
            if P is None:
                continue
            for l in range(d):
                a = pw[t][l]
                if a != 0:
                    out[l] = out[l] + P * a if a != 1 else out[l] + P
        return KMatrix(self.field, out)

    def scale(self, x) -> "KMatrix":
        if not isinstance(x, AlgebraicReal):
            q = _q(x)
            return KMatrix(self.field, [p * q for p in self.parts])
        return self.scalar_matrix(x, self.shape[0]) @ self if self.field.degree > 1 else KMatrix(
            self.field, [self.parts[0] * x.coeffs[0]]
        )

    def scalar_matrix(self, x: AlgebraicReal, n: int) -> "KMatrix":
        d = self.field.degree
        parts = []
        for j in range(d):
            M = fmpq_mat(n, n)
            if x.coeffs[j] != 0:
                for i in range(n):
                    M[i, i] = x.coeffs[j]
            parts.append(M)
        return KMatrix(self.field, parts)

    def __mul__(self, x) -> "KMatrix":
        return self.scale(x)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "KMatrix":
        result = KMatrix.identity(self.field, self.shape[0])
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self) -> AlgebraicReal:
        m = min(self.shape)
        return AlgebraicReal(self.field, tuple(sum((p[i, i] for i in range(m)), fmpq(0)) for p in self.parts))

    # -- regular representation ------------------------------------------
    def big(self) -> flint.fmpq_mat:
        """Rational (m d) x (n d) matrix, entry-major interleaving."""
        d = self.field.degree
        if d == 1:
            return self.parts[0]
        m, n = self.shape
        pw = self.field._powers
        # block (l, j): coefficient of c^l in A * c^j
        blocks = [[None] * d for _ in range(d)]
        for l in range(d):
            for j in range(d):
                B = _zero_mat(m, n)
                for t, A in enumerate(self.parts):
                    a = pw[t + j][l]
                    if a != 0 and not _isz(A):
                        B = B + A * a
                blocks[l][j] = B.tolist()
        rows = []
        for i in range(m):
            for l in range(d):
                rows.append(list(chain.from_iterable(zip(*[blocks[l][j][i] for j in range(d)]))))
        return fmpq_mat(m * d, n * d, list(chain.from_iterable(rows))) if m and n else _zero_mat(m * d, n * d)

    @classmethod
    def from_big(cls, field: FieldSpec, B: flint.fmpq_mat) -> "KMatrix":
        """Inverse of big() for matrices commuting with multiplication by c."""
        d = field.degree
        if d == 1:
            return cls(field, [B])
        m, n = B.nrows() // d, B.ncols() // d
        L = B.tolist()
        parts = []
        for l in range(d):
            data = [L[i * d + l][k * d] for i in range(m) for k in range(n)]
            parts.append(fmpq_mat(m, n, data) if m and n else _zero_mat(m, n))
        return cls(field, parts)


# ---------------------------------------------------------------------------
# row reduction


def _rational_rref(B: flint.fmpq_mat):
    if B.nrows() == 0 or B.ncols() == 0:
        return [], []
    R, r = B.rref()
    L = R.tolist()[:r]
    pivots = []
    for row in L:
        for q, x in enumerate(row):
            if x != 0:
                pivots.append(q)
                break
    return L, pivots


def rref(A: KMatrix) -> tuple[KMatrix, list[int]]:
    """Reduced row echelon form over K and the list of pivot columns."""
    field = A.field
    d = field.degree
    m, n = A.shape
    L, qpiv = _rational_rref(A.big())
    pivots = [q // d for q in qpiv if q % d == 0]
    rowof = {q: i for i, q in enumerate(qpiv)}
    r = len(pivots)
    parts = [[fmpq(0)] * (r * n) for _ in range(d)]
    for a, p in enumerate(pivots):
        for l in range(d):
            row = L[rowof[p * d + l]]
            for k in range(n):
                x = row[k * d]
                if x != 0:
                    parts[l][a * n + k] = x
    R = KMatrix(field, [fmpq_mat(r, n, P) if r and n else _zero_mat(r, n) for P in parts])
    return R, pivots


def rank(A: KMatrix) -> int:
    m, n = A.shape
    if m == 0 or n == 0:
        return 0
    return A.big().rank() // A.field.degree


def nullspace(A: KMatrix) -> KMatrix:
    """Columns form the reduced basis of {x : A x = 0}."""
    field = A.field
    n = A.shape[1]
    R, pivots = rref(A)
    free = [k for k in range(n) if k not in set(pivots)]
    entries = {}
    for col, f in enumerate(free):
        entries[(f, col)] = 1
        for a, p in enumerate(pivots):
            x = R[a, f]
            if not x.is_zero():
                entries[(p, col)] = -x
    return KMatrix.from_sparse(field, n, len(free), entries)


def column_basis(A: KMatrix) -> tuple[KMatrix, list[int]]:
    """Independent columns of A spanning its column space (pivot columns)."""
    _, pivots = rref(A)
    return A.take(None, pivots), pivots


def solve(A: KMatrix, B: KMatrix) -> KMatrix | None:
    """A particular solution X of A X = B (free variables zero), or None."""
    field = A.field
    m, n = A.shape
    aug = KMatrix.hstack(field, [A, B])
    R, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    k = B.shape[1]
    entries = {}
    for a, p in enumerate(pivots):
        for j in range(k):
            x = R[a, n + j]
            if not x.is_zero():
                entries[(p, j)] = x
    return KMatrix.from_sparse(field, n, k, entries)


def inverse(A: KMatrix) -> KMatrix:
    n = A.shape[0]
    X = solve(A, KMatrix.identity(A.field, n))
    if X is None or rank(A) != n:
        raise ZeroDivisionError("singular matrix")
    return X


def signature(G: KMatrix) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) of a symmetric matrix, by exact congruence.

    Zero pivots are handled by symmetric completion: replace e_i by e_i + e_j
    or e_i - e_j for an off-diagonal partner j.
    """
    n = G.shape[0]
    M = G.rows()
    field = G.field
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if not M[i][i].is_zero()), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if j != i and not M[i][j].is_zero()), None)
            if pair is None:
                break
            i, j = pair
            for sgn in (1, -1):
                if not (M[i][i] + M[j][j] + 2 * sgn * M[i][j]).is_zero():
                    break
            # e_i <- e_i + sgn e_j, applied to rows and columns
            for k in range(n):
                M[i][k] = M[i][k] + sgn * M[j][k]
            for k in range(n):
                M[k][i] = M[k][i] + sgn * M[k][j]
            piv = i
        p = M[piv][piv]
        s = p.sign()
        if s > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        inv = p.inverse()
        for i in active:
            f = M[i][piv] * inv
            if f.is_zero():
                continue
            for k in active:
                M[i][k] = M[i][k] - f * M[piv][k]
        for i in active:
            M[i][piv] = field.zero
            M[piv][i] = field.zero
    return pos, neg, n - pos - neg
