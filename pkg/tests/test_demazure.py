import random

import pytest

from coxhodge.coxeter import enumerate_elements, longest_element, reduced_expressions
from coxhodge.demazure import (
    FrobeniusAlgebra,
    PolyRing,
    coinvariant_algebra,
    demazure_op,
    invariant_generators,
    monomials,
)
from coxhodge.errors import InvalidInput
from coxhodge.linalg import KMatrix, nullspace, rank


def _random_poly(ring, d, rng):
    return sum(
        (ring.monomial(e, rng.randint(-3, 3)) for e in monomials(ring.nvars, d)),
        ring.zero,
    )


def test_demazure_basics(systems):
    ring = PolyRing.of(systems("A2").realization)
    for s in range(2):
        assert demazure_op(ring, s, ring.one).is_zero()
        assert demazure_op(ring, s, ring.root(s)) == ring.const(2)


@pytest.mark.parametrize("name", ["A2", "B3", "I2(5)"])
def test_kernel_of_demazure_is_fixed_space(systems, name):
    ring = PolyRing.of(systems(name).realization)
    for d in range(1, 4):
        for s in range(ring.nvars if ring.nvars <= 3 else 3):
            if s >= systems(name).rank:
                continue
            D = ring.demazure_matrix(s, d)
            F = ring.action_matrix(s, d) - KMatrix.identity(ring.field, len(monomials(ring.nvars, d)))
            kd, kf = nullspace(D), nullspace(F)
            assert kd.shape[1] == kf.shape[1]
            assert rank(KMatrix.hstack(ring.field, [kd, kf])) == kd.shape[1]


@pytest.mark.parametrize("name", ["A2", "B2", "I2(5)", "H3"])
def test_nil_and_braid_relations(systems, name):
    W = systems(name)
    ring = PolyRing.of(W.realization)
    rng = random.Random(1)
    for d in range(1, 5):
        f = _random_poly(ring, d, rng)
        for s in range(W.rank):
            assert ring.demazure(s, ring.demazure(s, f)).is_zero()
        for s in range(W.rank):
            for t in range(s + 1, W.rank):
                m = W.coxeter_matrix[s][t]
                lhs, rhs = f, f
                for k in range(m):
                    lhs = ring.demazure((s, t)[k % 2], lhs)
                    rhs = ring.demazure((t, s)[k % 2], rhs)
                assert lhs == rhs


def _molien_dims(W, dmax):
    """Dimension of invariants in each polynomial degree by averaging traces
    of all group elements (independent of the ideal computation)."""
    ring = PolyRing.of(W.realization)
    els = enumerate_elements(W)
    out = []
    for d in range(dmax + 1):
        acc = ring.field.zero
        for x in els:
            M = ring.operator_matrix(lambda f: ring.act_word(x.word, f), d, d)
            acc = acc + M.trace()
        out.append(acc / len(els))
    return [int(a.to_fraction()) for a in out]


def _hilbert_from_degrees(degs, dmax):
    """Coefficients of prod 1/(1-t^d) up to t^dmax."""
    c = [1] + [0] * dmax
    for d in degs:
        for k in range(d, dmax + 1):
            c[k] += c[k - d]
    return c


@pytest.mark.parametrize("name,degs", [("A1", [4]), ("A2", [4, 6]), ("B2", [4, 8]), ("I2(5)", [4, 10]), ("I2(6)", [4, 12]), ("A3", [4, 6, 8])])
def test_invariant_degrees_with_molien_oracle(systems, name, degs):
    W = systems(name)
    gens = invariant_generators(W)
    assert sorted(g.degree for g in gens) == degs
    dmax = max(degs) // 2
    assert _molien_dims(W, dmax) == _hilbert_from_degrees([d // 2 for d in degs], dmax)
    ring = gens[0].ring
    for g in gens:
        for s in range(W.rank):
            assert ring.act(s, g) == g


def test_rank_one_invariant_is_alpha_squared(systems):
    W = systems("A1")
    (g,) = invariant_generators(W)
    ring = g.ring
    a = ring.root(0)
    ratio = g.terms[(2,)] / (a * a).terms[(2,)]
    assert g == (a * a) * ratio


@pytest.mark.parametrize(
    "name",
    ["A1", "A2", "A3", "B2", "B3", "H3"] + [f"I2({m})" for m in range(3, 9)],
)
def test_coinvariant_dimension_and_palindrome(systems, name):
    W = systems(name)
    C = coinvariant_algebra(W)
    dims = C.algebra.graded_dims()
    N = longest_element(W).length
    assert sum(dims.values()) == len(enumerate_elements(W))
    assert C.top_degree == 2 * N
    assert all(dims[k] == dims[2 * N - k] for k in dims)
    assert all(C.check().values())
    assert all(C.algebra.check_axioms().values())


def test_coinvariant_small_cases(systems):
    assert coinvariant_algebra(systems("A1")).algebra.graded_dims() == {0: 1, 2: 1}
    assert coinvariant_algebra(systems("A2")).algebra.graded_dims() == {0: 1, 2: 2, 4: 2, 6: 1}
    C = coinvariant_algebra(systems("I2(4)"))
    assert C.algebra.dim == 8 and C.top_degree == 8


@pytest.mark.parametrize("name", ["A2", "B2", "I2(5)"])
def test_top_trace_is_antiinvariant(systems, name):
    """d_{w0}(w f) = det(w) d_{w0}(f) on random top-degree polynomials."""
    W = systems(name)
    ring = PolyRing.of(W.realization)
    w0 = longest_element(W)
    word = min(reduced_expressions(w0))
    rng = random.Random(0)

    def dw0(f):
        for s in reversed(word):
            f = ring.demazure(s, f)
        return f

    for _ in range(3):
        f = _random_poly(ring, w0.length, rng)
        for s in range(W.rank):
            assert dw0(ring.act(s, f)) == -dw0(f)


def test_frobenius_json_round_trip(systems):
    C = coinvariant_algebra(systems("I2(5)"))
    D = FrobeniusAlgebra.from_json(C.to_json())
    assert D.to_json() == C.to_json()
    bad = C.to_json()
    bad["junk"] = 1
    with pytest.raises(InvalidInput):
        FrobeniusAlgebra.from_json(bad)
