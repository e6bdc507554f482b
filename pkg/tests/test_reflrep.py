import pytest

from coxhodge.linalg import KMatrix, inverse, rank
from coxhodge.reflrep import (
    Covector,
    canonical_dominant,
    is_dominant_regular,
    sample_dominant_regular,
)

NAMES = ["A1", "A2", "A3", "B3", "H3", "D4", "I2(5)", "I2(8)", "I2(inf)"]


def test_rank_one(systems):
    R = systems("A1").realization
    assert R.dim == 1
    assert R.cartan[0, 0] == R.field(2)
    assert R.gen_h[0][0, 0] == R.field(-1)


def test_a2_cartan(systems):
    R = systems("A2").realization
    K = R.field
    assert R.cartan.rows() == [[K(2), K(-1)], [K(-1), K(2)]]
    assert R.dim == 2


def test_infinite_bond_enlarges(systems):
    R = systems("I2(inf)").realization
    K = R.field
    assert R.cartan.rows() == [[K(2), K(-2)], [K(-2), K(2)]]
    assert rank(R.cartan) == 1
    assert R.dim == 3
    assert rank(R.roots) == 2 and rank(R.coroots) == 2


@pytest.mark.parametrize("name", NAMES)
def test_involutions_braids_and_duality(systems, name):
    W = systems(name)
    R = W.realization
    I = KMatrix.identity(R.field, R.dim)
    for s in range(R.rank):
        assert R.gen_h[s] @ R.gen_h[s] == I
        assert R.gen_hstar[s] == inverse(R.gen_h[s]).T
    for s in range(R.rank):
        for t in range(s + 1, R.rank):
            m = W.coxeter_matrix[s][t]
            if m == float("inf") or m == "inf" or not isinstance(m, int):
                continue
            P = R.gen_h[s] @ R.gen_h[t]
            acc = I
            for k in range(1, m + 1):
                acc = acc @ P
                assert (acc == I) == (k == m)


def test_dominance_examples(systems):
    R = systems("A2").realization
    K = R.field
    assert is_dominant_regular(canonical_dominant(R), R)
    assert not is_dominant_regular(Covector((K.zero, K.zero)), R)
    assert not is_dominant_regular(R.root(0), R)


@pytest.mark.parametrize("name", ["A3", "H3", "I2(7)", "I2(inf)"])
def test_samples_in_open_cone_and_cone_closed(systems, name):
    R = systems(name).realization
    lams = sample_dominant_regular(R, 6, seed=2)
    assert lams[0] == canonical_dominant(R)
    assert sample_dominant_regular(R, 1) == [canonical_dominant(R)]
    assert len(set(lams)) == 6
    for a in lams:
        assert is_dominant_regular(a, R)
        assert is_dominant_regular(a.scale(R.field(3) / 7), R)
        for b in lams:
            assert is_dominant_regular(a + b, R)
