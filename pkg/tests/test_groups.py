import numpy as np
import pytest

from artifact.coeffs import PrimeParams, witt_ring
from artifact.groups import (
    build_gamma,
    build_gl2_witt,
    build_quat_quotient,
    build_quat_units,
    k1_quotient_rank,
    quat,
)

P5 = PrimeParams(5)


def test_gamma_orders():
    G = build_gamma(P5)
    assert G.order() == (25 - 1) * (25 - 5)
    assert G.order("torus") == 24
    assert G.order("H") == 16
    assert G.order("U") == 5


def test_gl2_witt_level_one_matches_gamma():
    G = build_gamma(P5)
    K = build_gl2_witt(P5, 1)
    assert K.order() == G.order()


def test_gl2_witt_level_two_k1():
    K = build_gl2_witt(P5, 2)
    assert k1_quotient_rank(K) == 4
    assert K.order("K1") == 5**4
    x = np.array([[1, 5], [0, 1]])
    assert K.element_order(x) == 5


def test_gl2_witt_rejects_level_above_precision():
    with pytest.raises(ValueError):
        build_gl2_witt(PrimeParams(5, 1, 3), 4)


def _basis_quats(R):
    out = []
    for i in range(R.d):
        out.append(quat(R, R.upow(i), R.zeros()))
        out.append(quat(R, R.zeros(), R.upow(i)))
    out.append(quat(R, R.ones(), R.ones()))
    return out


def test_quaternion_multiplication_associative():
    R = witt_ring(5, 1, 3)
    B = _basis_quats(R)
    for x in B:
        for y in B:
            for z in B:
                assert ((x * y) * z).key() == (x * (y * z)).key()


def test_uniformizer_commutation():
    R = witt_ring(5, 1, 3)
    pi = quat(R, R.zeros(), R.ones())
    assert (pi * pi).key() == quat(R, R.from_int(5), R.zeros()).key()
    for i in range(R.order):
        a = quat(R, R.upow(i), R.zeros())
        sa = quat(R, R.sigma(R.upow(i)), R.zeros())
        assert (pi * a).key() == (sa * pi).key()


def test_embedding_is_multiplicative():
    R = witt_ring(5, 1, 3)
    B = _basis_quats(R)
    for x in B:
        for y in B:
            assert np.array_equal(R.matmul(x.embedding(), y.embedding()), (x * y).embedding())


def test_level_filtration_of_principal_units():
    R = witt_ring(5, 1, 4)
    u = R.upow(3)
    assert quat(R, R.ones(), u).pi_valuation_minus_one() == 1
    assert quat(R, R.add(R.ones(), R.scale(5, u)), R.zeros()).pi_valuation_minus_one() == 2
    assert quat(R, R.ones(), R.scale(5, u)).pi_valuation_minus_one() == 3


@pytest.mark.parametrize("n,order", [(2, 25), (3, 125), (4, 3125)])
def test_quat_quotient_orders(n, order):
    Q = build_quat_quotient(P5, n)
    assert Q.order == order


def test_quat_quotient_order_by_closure():
    Q = build_quat_quotient(P5, 3)
    labels = Q.quotient_labels()
    seen = {Q.identity()}
    frontier = [Q.identity()]
    while frontier:
        new = []
        for x in frontier:
            for g in Q.generators():
                y = int(Q.mul(g, x))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    assert len(seen) == Q.cover_order
    assert len({int(labels[c]) for c in seen}) == Q.order


def test_teichmuller_conjugation_normalizes():
    Q = build_quat_quotient(P5, 3)
    perm = Q.conj_teich_perm(1)
    assert sorted(perm.tolist()) == list(range(Q.cover_order))
    centre = set(Q.center_codes().tolist())
    assert {int(perm[c]) for c in centre} == centre


def test_quat_units_generators():
    G = build_quat_units(P5, 3)
    assert set(G.subsets) >= {"torus", "U1"}
    t = G.generators[0]
    assert G.element_order(t) == 24
