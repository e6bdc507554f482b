"""Lefschetz data and exact hard Lefschetz / Hodge-Riemann certificates.

A datum is a graded K-vector space with a homogeneous basis, a graded
symmetric pairing (H^i against H^-i), a list of commuting self-adjoint
degree-2 operators spanning V, and a finite sample of the ample cone given
as coefficient vectors over those operators.

For gamma in V:
  HL   gamma^i : H^-i -> H^i is invertible for all i >= 0
  P^-i = ker(gamma^{i+1} : H^-i -> H^{i+2})
  HR   (h, h') -> <h, gamma^i h'> restricted to P^-i is (-1)^{(-i-m)/2}-definite,
       m the minimal degree with H^m != 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import HardLefschetzFailed, InvalidInput
from .linalg import KMatrix, nullspace, rank, rref, signature
from .numfield import AlgebraicReal, FieldSpec, field_of_conductor, format_element, parse_element

__all__ = [
    "LefschetzDatum",
    "HLCertificate",
    "PrimitiveDecomposition",
    "HRCertificate",
    "SL2Triple",
    "SurveyReport",
    "from_frobenius",
    "from_module",
    "check_hard_lefschetz",
    "primitive_decomposition",
    "check_hodge_riemann",
    "sl2_triple",
    "survey_ample_cone",
]


@dataclass
class LefschetzDatum:
    field: FieldSpec
    degrees: list[int]
    pairing: KMatrix
    operators: list[KMatrix]
    ample: list[list[AlgebraicReal]] = dc_field(default_factory=list)
    operator_names: list[str] | None = None
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def indices(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.degrees else 0

    def gamma(self, coeffs: Sequence) -> KMatrix:
        K = self.field
        if len(coeffs) != len(self.operators):
            raise InvalidInput(f"gamma needs {len(self.operators)} coefficients, got {len(coeffs)}")
        out = KMatrix.zeros(K, self.dim, self.dim)
        for c, A in zip(coeffs, self.operators):
            c = K(c) if not isinstance(c, AlgebraicReal) else c
            if not c.is_zero():
                out = out + A * c
        return out

    def validate(self) -> dict[str, bool]:
        """The axioms of a Lefschetz datum, each checked exactly."""
        F = self.pairing
        parities = {d % 2 for d in self.degrees}
        out = {"parity": len(parities) <= 1}
        out["symmetric"] = F == F.T
        out["graded_pairing"] = all(self.degrees[i] == -self.degrees[j] for (i, j) in F.nonzero_entries())
        nondeg = True
        for d in set(self.degrees):
            I, J = self.indices(d), self.indices(-d)
            if len(I) != len(J) or rank(F.take(I, J)) != len(I):
                nondeg = False
        out["nondegenerate"] = nondeg
        ops = self.operators
        out["degree_two"] = all(
            self.degrees[i] == self.degrees[j] + 2 for A in ops for (i, j) in A.nonzero_entries()
        )
        out["commuting"] = all((ops[a] @ ops[b]) == (ops[b] @ ops[a]) for a in range(len(ops)) for b in range(a + 1, len(ops)))
        out["self_adjoint"] = all((A.T @ F) == (F @ A) for A in ops)
        return out

    def scaled_pairing(self, c) -> "LefschetzDatum":
        return LefschetzDatum(self.field, self.degrees, self.pairing * c, self.operators, self.ample, self.operator_names, self.name)

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        def sparse(M: KMatrix):
            return [[i, j, format_element(x)] for (i, j), x in sorted(M.nonzero_entries().items())]

        names = self.operator_names or [f"op{k}" for k in range(len(self.operators))]
        return {
            "kind": "lefschetz",
            "name": self.name,
            "conductor": self.field.conductor,
            "degrees": list(self.degrees),
            "pairing": sparse(self.pairing),
            "operators": [{"name": nm, "entries": sparse(A)} for nm, A in zip(names, self.operators)],
            "ample": [[format_element(self.field(x)) for x in a] for a in self.ample],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LefschetzDatum":
        allowed = {"kind", "name", "conductor", "degrees", "dims", "pairing", "operators", "ample"}
        extra = set(data) - allowed
        if extra:
            raise InvalidInput(f"unknown keys in Lefschetz JSON: {sorted(extra)}")
        try:
            K = field_of_conductor(int(data.get("conductor", 1)))
            if "degrees" in data:
                degrees = [int(d) for d in data["degrees"]]
            elif "dims" in data:
                degrees = []
                for d, n in sorted(((int(d), int(n)) for d, n in data["dims"].items())):
                    degrees.extend([d] * n)
            else:
                raise InvalidInput("Lefschetz JSON needs 'degrees' or 'dims'")
            n = len(degrees)

            def mat(entries):
                ent = {}
                for i, j, x in entries:
                    if not (0 <= int(i) < n and 0 <= int(j) < n):
                        raise InvalidInput("matrix index out of range")
                    ent[(int(i), int(j))] = parse_element(K, str(x))
                return KMatrix.from_sparse(K, n, n, ent)

            pairing = mat(data["pairing"])
            ops, names = [], []
            for k, op in enumerate(data.get("operators", [])):
                if isinstance(op, dict):
                    names.append(str(op.get("name", f"op{k}")))
                    ops.append(mat(op["entries"]))
                else:
                    names.append(f"op{k}")
                    ops.append(mat(op))
            ample = [[parse_element(K, str(x)) for x in a] for a in data.get("ample", [])]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed Lefschetz JSON: {exc}") from exc
        for a in ample:
            if len(a) != len(ops):
                raise InvalidInput("ample vector length differs from the number of operators")
        return cls(K, degrees, pairing, ops, ample, names, str(data.get("name", "")))


def from_frobenius(fa, name: str = "") -> LefschetzDatum:
    """H = A(m) for a trace of degree 2m; operators = multiplication by the degree-2 basis."""
    A = fa.algebra
    if any(d % 2 for d in A.degrees):
        raise InvalidInput("the algebra must vanish in odd degrees")
    if fa.top_degree % 2:
        raise InvalidInput("top degree must be even")
    m = fa.top_degree // 2
    degrees = [d - m for d in A.degrees]
    pairing = fa.pairing_matrix()
    deg2 = A.basis_in_degree(2)
    ops = [A.left_mult_matrix(A.basis_vector(i)) for i in deg2]
    names = [A.labels[i] if A.labels else f"e{i}" for i in deg2]
    ample = [[a[i] for i in deg2] for a in fa.ample_sample]
    return LefschetzDatum(A.field, degrees, pairing, ops, ample, names, name)


def from_module(module, form, lams: Sequence = (), name: str = "") -> LefschetzDatum:
    """Lefschetz datum of a Soergel module: operators are the coordinate functions x_j."""
    ample = [list(lam.coords) if hasattr(lam, "coords") else list(lam) for lam in lams]
    names = [f"x{j + 1}" for j in range(len(module.actions))]
    return LefschetzDatum(module.field, list(module.degrees), form.matrix, list(module.actions), ample, names, name)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class HLCertificate:
    passed: bool
    dims_symmetric: bool
    ranks: dict[int, tuple[int, int]]  # i -> (rank of gamma^i, dim H^-i)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "dims_symmetric": self.dims_symmetric,
            "ranks": {str(i): {"rank": r, "dim": d} for i, (r, d) in sorted(self.ranks.items())},
        }


def _power_cache(G: KMatrix, k: int, cache: dict) -> KMatrix:
    if k not in cache:
        cache[k] = KMatrix.identity(G.field, G.shape[0]) if k == 0 else _power_cache(G, k - 1, cache) @ G
    return cache[k]


def check_hard_lefschetz(D: LefschetzDatum, gamma: Sequence | KMatrix) -> HLCertificate:
    G = gamma if isinstance(gamma, KMatrix) else D.gamma(gamma)
    gd = D.graded_dims()
    sym = all(gd.get(d, 0) == gd.get(-d, 0) for d in gd)
    ranks = {}
    ok = sym
    cache: dict = {}
    for d in sorted(gd):
        if d > 0:
            continue
        i = -d
        I, J = D.indices(-i), D.indices(i)
        r = rank(_power_cache(G, i, cache).take(J, I)) if J else 0
        ranks[i] = (r, len(I))
        if r != len(I) or len(J) != len(I):
            ok = False
    return HLCertificate(ok, sym, ranks)


@dataclass
class PrimitiveDecomposition:
    gamma: KMatrix
    primitives: dict[int, KMatrix]  # i -> columns spanning P^-i (full coordinates)
    reconstruction_ok: bool

    def dims(self) -> dict[int, int]:
        return {i: P.shape[1] for i, P in sorted(self.primitives.items())}


def primitive_decomposition(D: LefschetzDatum, gamma: Sequence | KMatrix) -> PrimitiveDecomposition:
    G = gamma if isinstance(gamma, KMatrix) else D.gamma(gamma)
    if not check_hard_lefschetz(D, G).passed:
        raise HardLefschetzFailed("gamma does not satisfy hard Lefschetz")
    K = D.field
    gd = D.graded_dims()
    cache: dict = {}
    prims = {}
    for d in sorted(gd):
        if d > 0:
            continue
        i = -d
        I = D.indices(-i)
        J = D.indices(i + 2)
        if J:
            N = nullspace(_power_cache(G, i + 1, cache).take(J, I))
        else:
            N = KMatrix.identity(K, len(I))
        ent = {(I[r], c): x for (r, c), x in N.nonzero_entries().items()}
        prims[i] = KMatrix.from_sparse(K, D.dim, N.shape[1], ent)
    ok = True
    for d in gd:
        pieces = []
        for i, P in prims.items():
            k2 = d + i
            if k2 >= 0 and k2 % 2 == 0 and k2 // 2 <= i and P.shape[1]:
                pieces.append(_power_cache(G, k2 // 2, cache) @ P)
        total = sum(p.shape[1] for p in pieces)
        if total != gd[d] or (pieces and rank(KMatrix.hstack(K, pieces)) != gd[d]):
            ok = False
    return PrimitiveDecomposition(G, prims, ok)


@dataclass
class HRCertificate:
    passed: bool
    hl: HLCertificate
    min_degree: int
    blocks: dict[int, dict] = dc_field(default_factory=dict)  # i -> {expected, signature, gram}

    def to_json(self, with_matrices: bool = False) -> dict:
        out = {"passed": self.passed, "hard_lefschetz": self.hl.to_json(), "min_degree": self.min_degree, "blocks": {}}
        for i, b in sorted(self.blocks.items()):
            e = {"expected_sign": b["expected"], "signature": list(b["signature"]), "definite": b["ok"]}
            if with_matrices:
                e["gram"] = [[format_element(x) for x in row] for row in b["gram"].rows()]
            out["blocks"][str(-i)] = e
        return out


def check_hodge_riemann(D: LefschetzDatum, gamma: Sequence | KMatrix) -> HRCertificate:
    G = gamma if isinstance(gamma, KMatrix) else D.gamma(gamma)
    hl = check_hard_lefschetz(D, G)
    if not hl.passed:
        raise HardLefschetzFailed("gamma does not satisfy hard Lefschetz; Hodge-Riemann is not defined")
    pd = primitive_decomposition(D, G)
    m = D.min_degree
    cache: dict = {}
    ok = True
    blocks = {}
    for i, P in pd.primitives.items():
        if P.shape[1] == 0:
            continue
        Q = P.T @ D.pairing @ _power_cache(G, i, cache) @ P
        sig = signature(Q)
        eps = 1 if ((-i - m) // 2) % 2 == 0 else -1
        n = P.shape[1]
        good = sig == ((n, 0, 0) if eps > 0 else (0, n, 0))
        ok = ok and good
        blocks[i] = {"expected": eps, "signature": sig, "ok": good, "gram": Q}
    return HRCertificate(ok, hl, m, blocks)


@dataclass
class SL2Triple:
    e: KMatrix
    h: KMatrix
    f: KMatrix
    unique: bool
    commutators_ok: bool
    lowest_weight_ok: bool

    def to_json(self) -> dict:
        return {"unique": self.unique, "commutators": self.commutators_ok, "primitive_equals_ker_f": self.lowest_weight_ok}


def sl2_triple(D: LefschetzDatum, gamma: Sequence | KMatrix) -> SL2Triple:
    """(e, h, f) with e = gamma, h = grading; f solved from [e, f] = h among
    degree -2 operators, with uniqueness read off the linear system."""
    G = gamma if isinstance(gamma, KMatrix) else D.gamma(gamma)
    pd = primitive_decomposition(D, G)
    K = D.field
    n = D.dim
    H = KMatrix.from_sparse(K, n, n, {(i, i): d for i, d in enumerate(D.degrees) if d})
    # unknowns f[a, b] with deg a = deg b - 2
    unknown = {}
    for b, db in enumerate(D.degrees):
        for a in D.indices(db - 2):
            unknown[(a, b)] = len(unknown)
    Gent = G.nonzero_entries()
    g_by_row: dict[int, list] = {}
    g_by_col: dict[int, list] = {}
    for (p, a), x in Gent.items():
        g_by_row.setdefault(p, []).append((a, x))
        g_by_col.setdefault(a, []).append((p, x))
    rows = {}
    rhs = {}
    r = 0
    for p in range(n):
        for b in D.indices(D.degrees[p]):
            # (G f - f G)[p, b] = H[p, b]
            terms: dict[int, AlgebraicReal] = {}
            for a, x in g_by_row.get(p, []):
                u = unknown.get((a, b))
                if u is not None:
                    terms[u] = terms.get(u, K.zero) + x
            for c, x in g_by_col.get(b, []):
                u = unknown.get((p, c))
                if u is not None:
                    terms[u] = terms.get(u, K.zero) - x
            target = K(D.degrees[p]) if p == b else K.zero
            for u, x in terms.items():
                if not x.is_zero():
                    rows[(r, u)] = x
            if not target.is_zero():
                rhs[(r, 0)] = target
            r += 1
    nu = len(unknown)
    A = KMatrix.from_sparse(K, r, nu, rows)
    B = KMatrix.from_sparse(K, r, 1, rhs)
    R, piv = rref(KMatrix.hstack(K, [A, B], nrows=r))
    if any(p >= nu for p in piv):
        raise HardLefschetzFailed("no operator f with [e, f] = h")
    unique = len(piv) == nu
    inv = {u: key for key, u in unknown.items()}
    fent = {}
    for a_, p in enumerate(piv):
        x = R[a_, nu]
        if not x.is_zero():
            fent[inv[p]] = x
    F = KMatrix.from_sparse(K, n, n, fent)
    comm = (G @ F - F @ G) == H and (H @ G - G @ H) == G * 2 and (H @ F - F @ H) == F * -2
    lw = True
    for i, P in pd.primitives.items():
        I = D.indices(-i)
        J = D.indices(-i - 2)
        if J:
            N = nullspace(F.take(J, I))
        else:
            N = KMatrix.identity(K, len(I))
        Pc = P.take(I, None)
        if N.shape[1] != Pc.shape[1] or (Pc.shape[1] and rank(KMatrix.hstack(K, [N, Pc])) != Pc.shape[1]):
            lw = False
    return SL2Triple(G, H, F, unique, comm, lw)


@dataclass
class SurveyReport:
    name: str
    entries: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        """All genuine samples pass HL and HR; controls do not count."""
        return all(e["hl"] and e["hr"] for e in self.entries if e["kind"] == "sample")

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "entries": self.entries}


def _evaluate(D: LefschetzDatum, coeffs, kind: str, with_sl2: bool) -> dict:
    G = D.gamma(coeffs)
    hl = check_hard_lefschetz(D, G)
    entry = {
        "kind": kind,
        "gamma": [format_element(D.field(c)) for c in coeffs],
        "hl": hl.passed,
        "hl_certificate": hl.to_json(),
        "hr": False,
    }
    if hl.passed:
        hr = check_hodge_riemann(D, G)
        entry["hr"] = hr.passed
        entry["hr_certificate"] = hr.to_json()
        if with_sl2:
            t = sl2_triple(D, G)
            entry["sl2"] = t.to_json()
    return entry


def survey_ample_cone(
    D: LefschetzDatum,
    samples: Sequence[Sequence] | None = None,
    controls: Sequence[Sequence] = (),
    with_sl2: bool = False,
) -> SurveyReport:
    """HL + HR at each sample point (default: the datum's ample sample) and
    at caller-supplied control points, which are reported but not judged."""
    rep = SurveyReport(D.name)
    for c in samples if samples is not None else D.ample:
        rep.entries.append(_evaluate(D, c, "sample", with_sl2))
    for c in controls:
        rep.entries.append(_evaluate(D, c, "control", with_sl2))
    return rep
