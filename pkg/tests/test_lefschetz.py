import pytest

from coxhodge.demazure import FrobeniusAlgebra, GradedAlgebra, coinvariant_algebra
from coxhodge.errors import HardLefschetzFailed, InvalidInput
from coxhodge.lefschetz import (
    LefschetzDatum,
    check_hard_lefschetz,
    check_hodge_riemann,
    from_frobenius,
    primitive_decomposition,
    sl2_triple,
    survey_ample_cone,
)
from coxhodge.linalg import KMatrix
from coxhodge.numfield import rational_field

Q = rational_field()


def truncated(n, tr=1):
    """K[x]/(x^{n+1}), deg x = 2, tr(x^n) = tr, centered."""
    alg = GradedAlgebra(Q, [2 * i for i in range(n + 1)], {(i, j): {i + j: Q.one} for i in range(n + 1) for j in range(n + 1) if i + j <= n})
    return from_frobenius(FrobeniusAlgebra(alg, [Q.zero] * n + [Q(tr)], 2 * n, [[Q.zero, Q.one] + [Q.zero] * (n - 1)] if n else []))


def test_truncated_polynomial_algebra_degrees():
    D = truncated(3)
    assert D.degrees == [-3, -1, 1, 3]
    assert all(D.validate().values())
    assert len(D.operators) == 1


def test_point():
    alg = GradedAlgebra(Q, [0], {(0, 0): {0: Q.one}})
    D = from_frobenius(FrobeniusAlgebra(alg, [Q.one], 0, []))
    G = KMatrix.zeros(Q, 1, 1)
    assert check_hard_lefschetz(D, G).passed
    assert check_hodge_riemann(D, G).passed


@pytest.mark.parametrize("n", range(1, 11))
def test_hl_hr_truncated(n):
    D = truncated(n)
    assert check_hard_lefschetz(D, [1]).passed
    hr = check_hodge_riemann(D, [1])
    assert hr.passed
    pd = primitive_decomposition(D, [1])
    assert pd.dims() == {n: 1, **{i: 0 for i in range(n - 2, -1, -2)}}
    assert pd.reconstruction_ok
    t = sl2_triple(D, [1])
    assert t.unique and t.commutators_ok and t.lowest_weight_ok


def test_zero_gamma_fails_hl():
    D = truncated(2)
    assert not check_hard_lefschetz(D, [0]).passed
    with pytest.raises(HardLefschetzFailed):
        check_hodge_riemann(D, [0])
    with pytest.raises(HardLefschetzFailed):
        primitive_decomposition(D, [0])


def test_negative_trace_fails_hr():
    D = truncated(1, tr=-1)
    assert check_hard_lefschetz(D, [1]).passed
    hr = check_hodge_riemann(D, [1])
    assert not hr.passed
    assert hr.blocks[1]["signature"] == (0, 1, 0)
    assert truncated(1).validate() == D.validate()


def test_sl2_values():
    D = truncated(1)
    f = sl2_triple(D, [1]).f
    assert f.rows() == [[Q.zero, Q.one], [Q.zero, Q.zero]]
    D = truncated(2)
    f = sl2_triple(D, [1]).f
    # basis 1, x, x^2: f(x) = 2, f(x^2) = 2x
    assert f[0, 1] == Q(2) and f[1, 2] == Q(2)
    assert len(f.nonzero_entries()) == 2


@pytest.fixture(scope="module")
def coinv(systems):
    out = {}

    def get(name):
        if name not in out:
            out[name] = from_frobenius(coinvariant_algebra(systems(name)), name)
        return out[name]

    return get


def test_coinvariant_a2(coinv):
    D = coinv("A2")
    assert D.graded_dims() == {-3: 1, -1: 2, 1: 2, 3: 1}
    g = D.ample[0]
    assert primitive_decomposition(D, g).dims() == {3: 1, 1: 1}
    rep = survey_ample_cone(D, with_sl2=True)
    assert rep.passed and len(rep.entries) == 5
    assert all(all(e["sl2"].values()) for e in rep.entries)


def test_coinvariant_i25(coinv):
    D = coinv("I2(5)")
    g = D.ample[0]
    assert check_hard_lefschetz(D, g).passed
    hr = check_hodge_riemann(D, g)
    assert hr.passed
    m = D.min_degree
    for i, b in hr.blocks.items():
        assert b["expected"] == (1 if ((-i - m) // 2) % 2 == 0 else -1)
    assert hr.blocks[5]["expected"] == 1


def test_invariance_under_rescaling(coinv):
    D = coinv("B2")
    for g in D.ample:
        g2 = [2 * x for x in g]
        g3 = [x * Q(3) / 7 for x in g]
        base = (check_hard_lefschetz(D, g).passed, check_hodge_riemann(D, g).passed)
        assert base == (True, True)
        assert (check_hard_lefschetz(D, g2).passed, check_hodge_riemann(D, g2).passed) == base
        assert check_hodge_riemann(D, g3).passed
        assert check_hodge_riemann(D.scaled_pairing(D.field(5)), g).passed
        assert not check_hodge_riemann(D.scaled_pairing(D.field(-1)), g).passed


def test_graded_orthogonality_and_self_adjointness(coinv):
    for name in ["A2", "B2", "I2(5)"]:
        v = coinv(name).validate()
        assert v["graded_pairing"] and v["self_adjoint"] and v["commuting"]


def test_controls_are_reported_not_judged(coinv):
    D = coinv("A2")
    neg = [-x for x in D.ample[0]]
    rep = survey_ample_cone(D, controls=[neg, [0] * len(D.operators)])
    assert rep.passed
    ctrl = [e for e in rep.entries if e["kind"] == "control"]
    assert len(ctrl) == 2
    assert not ctrl[1]["hl"]


def test_json_round_trip(coinv):
    D = coinv("I2(5)")
    E = LefschetzDatum.from_json(D.to_json())
    assert E.to_json() == D.to_json()
    bad = D.to_json()
    bad["surprise"] = True
    with pytest.raises(InvalidInput):
        LefschetzDatum.from_json(bad)
    bad = D.to_json()
    bad["pairing"] = [[0, 99, "1"]]
    with pytest.raises(InvalidInput):
        LefschetzDatum.from_json(bad)
