import pytest

from coxhodge.coxeter import enumerate_elements, longest_element, reduced_expressions
from coxhodge.demazure import coinvariant_algebra
from coxhodge.errors import InvalidInput
from coxhodge.hecke import V, LaurentPoly
from coxhodge.linalg import KMatrix, nullspace, rank
from coxhodge.reflrep import sample_dominant_regular
from coxhodge.soergel import (
    bott_samelson,
    decompose,
    endomorphisms,
    indecomposable,
    verify_categorification,
)

VV = V + LaurentPoly.monomial(-1)


def test_bs_single_letter(systems):
    W = systems("A2")
    M, F = bott_samelson(W, (0,))
    assert M.degrees == [-1, 1]
    assert M.grdim() == VV
    assert all(F.check(M).values())
    D = decompose(M, F)
    assert [(str(S.label), S.shift) for S in D.summands] == [("s1", 0)]


@pytest.mark.parametrize("word", [(0, 1, 0, 1), (1, 1, 0), (0, 1, 0, 0, 1)])
def test_bs_graded_dimension_and_form(systems, word):
    W = systems("A2")
    M, F = bott_samelson(W, word)
    assert M.grdim() == VV ** len(word)
    assert all(M.check().values())
    assert all(F.check(M).values())


def test_bs_examples(systems):
    W = systems("A2")
    s, st, sts = W.element((0,)), W.element((0, 1)), W.element((0, 1, 0))
    D = decompose(*bott_samelson(W, (0, 0)))
    assert D.multiplicities() == {s: V + LaurentPoly.monomial(-1)}
    assert sorted(S.shift for S in D.summands) == [-1, 1]
    D = decompose(*bott_samelson(W, (0, 1)))
    assert D.multiplicities() == {st: LaurentPoly.const(1)}
    D = decompose(*bott_samelson(W, (0, 1, 0)))
    assert D.multiplicities() == {sts: LaurentPoly.const(1), s: LaurentPoly.const(1)}
    assert all(D.check().values())


def test_bs_rejects_bad_letters(systems):
    with pytest.raises(InvalidInput):
        bott_samelson(systems("A2"), (0, 2))


def test_indecomposable_special_cases(systems):
    W = systems("A2")
    M, _ = indecomposable(W, W.identity)
    assert M.degrees == [0]
    M, _ = indecomposable(W, W.element((0,)))
    assert M.grdim() == VV
    with pytest.raises(InvalidInput):
        indecomposable(W, W.element((0, 1)), word=(1, 0))


@pytest.mark.parametrize("name", ["A2", "B2", "I2(5)"])
def test_w0_matches_coinvariant_algebra(systems, name):
    W = systems(name)
    w0 = longest_element(W)
    M, _ = indecomposable(W, w0)
    C = coinvariant_algebra(W)
    # both gradings are doubled; B_w0 is C shifted down by l(w0)
    assert M.graded_dims() == {d - w0.length: c for d, c in C.algebra.graded_dims().items()}


@pytest.mark.parametrize("name", ["A2", "A3", "B2"])
def test_form_axioms_and_parity(systems, name):
    W = systems(name)
    lams = sample_dominant_regular(W.realization, 5, seed=3)
    for x in enumerate_elements(W, 3):
        M, F = indecomposable(W, x)
        assert all(F.check(M).values())
        assert all((d - x.length) % 2 == 0 for d in M.degrees)
        assert M.bottom == -x.length and max(M.degrees) == x.length
        if x.length:
            for lam in lams:
                assert F.minimal_degree_value(M, lam).sign() > 0


def _homs(M1, M2):
    """Degree-0 R-linear maps M1 -> M2 (independent small solver)."""
    K = M1.field
    unknown = {}
    for i, di in enumerate(M2.degrees):
        for j, dj in enumerate(M1.degrees):
            if di == dj:
                unknown[(i, j)] = len(unknown)
    rows = []
    for A1, A2 in zip(M1.actions, M2.actions):
        for p in range(M2.dim):
            for b in range(M1.dim):
                row = {}
                for a in range(M2.dim):
                    if (a, b) in unknown and not A2[p, a].is_zero():
                        u = unknown[(a, b)]
                        row[u] = row.get(u, K.zero) + A2[p, a]
                for c in range(M1.dim):
                    if (p, c) in unknown and not A1[c, b].is_zero():
                        u = unknown[(p, c)]
                        row[u] = row.get(u, K.zero) - A1[c, b]
                row = {u: x for u, x in row.items() if not x.is_zero()}
                if row:
                    rows.append(row)
    A = KMatrix.from_sparse(K, len(rows), len(unknown), {(r, u): x for r, row in enumerate(rows) for u, x in row.items()})
    sol = nullspace(A)
    inv = {u: key for key, u in unknown.items()}
    out = []
    for c in range(sol.shape[1]):
        ent = {inv[u]: x for (u, _), x in sol.take(None, [c]).nonzero_entries().items()}
        out.append(KMatrix.from_sparse(K, M2.dim, M1.dim, ent))
    return out


@pytest.mark.parametrize("name,word", [("A2", (0, 1, 0)), ("A3", (1, 0, 2, 1)), ("B2", (0, 1, 0, 1)), ("I2(5)", (0, 1, 0, 1, 0))])
def test_uniqueness_across_reduced_expressions(systems, name, word):
    W = systems(name)
    x = W.element(word)
    words = reduced_expressions(x)
    assert len(words) >= 2
    M1, F1 = indecomposable(W, x, word=words[0])
    M2, F2 = indecomposable(W, x, word=words[1])
    assert M1.graded_dims() == M2.graded_dims()
    H = _homs(M1, M2)
    assert len(H) == 1
    phi = H[0]
    assert rank(phi) == M1.dim
    pulled = phi.T @ F2.matrix @ phi
    # pulled = c F1 for a positive scalar c
    (r, cidx), f = next(iter(F1.matrix.nonzero_entries().items()))
    c = pulled[r, cidx] / f
    assert pulled == F1.matrix * c
    assert c.sign() > 0


def test_endomorphisms_of_bs_ss(systems):
    M, _ = bott_samelson(systems("A2"), (0, 0))
    # End^0(B_s(1) + B_s(-1)) has dimension 2 + dim Hom^{2}(B_s, B_s) = 3
    assert len(endomorphisms(M)) == 3


@pytest.mark.parametrize("name,cap", [("A2", 3), ("A3", 4), ("I2(5)", 5)])
def test_categorification(systems, name, cap):
    rep = verify_categorification(systems(name), cap)
    assert rep.passed, [r for r in rep.results if not r["passed"]]
