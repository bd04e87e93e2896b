import numpy as np
import pytest

from artifact.coeffs import witt_ring
from artifact.gl2types import gl2_setting, inj_envelope, principal_series, serre_weight_module, sym1_module, theta, verify_u_invariants
from artifact.modrep import (
    GMod,
    cosocle,
    cosocle_filtration,
    direct_sum,
    dual,
    hom_dim,
    hom_space,
    induce,
    invariants,
    jh_multiset,
    socle,
    socle_filtration,
    tensor,
    torus_weights_on,
)

P = 5


def sigma(m, n):
    return serre_weight_module(m, n, p=P)


def test_hom_space_schur():
    assert hom_dim(sigma(2, 1), sigma(2, 1)) == 1
    assert hom_dim(sigma(2, 1), sigma(3, 0)) == 0
    assert hom_dim(sigma(2, 1), sigma(2, 3)) == 0


def test_hom_space_additive():
    M = sigma(1, 2)
    assert hom_dim(M, direct_sum(M, M)) == 2 * hom_dim(M, M)


def test_hom_space_basis_is_equivariant():
    M = direct_sum(sigma(1, 0), sigma(1, 0))
    F = M.ring
    for phi in hom_space(M, M):
        for A in M.mats:
            assert np.array_equal(F.matmul(phi, A), F.matmul(A, phi))


def test_hom_space_ring_mismatch():
    S = gl2_setting(P)
    a = serre_weight_module(0, 0, group=S.K, field=witt_ring(P, 1, 1))
    b = GMod(S.K, witt_ring(P, 1, 2), [witt_ring(P, 1, 2).eye(1) for _ in S.K.generators])
    with pytest.raises(ValueError):
        hom_space(a, b)


def test_socle_of_irreducible():
    S, mult = socle(sigma(3, 1))
    assert dict(mult) == {(3, 1): 1}
    assert S.shape[1] == 4


def test_cosocle_of_theta_lattice():
    # psi = xi^{a+1+(p+1)b} with a = 3, b = 0; the distinguished lattice has cosocle sigma_{a-1,b+1}
    from artifact.lattices import lattice_of, lattice_with_cosocle

    T = lattice_with_cosocle(lattice_of(theta(4, P).lattice), (2, 1))
    assert dict(cosocle(T.reduction())) == {(2, 1): 1}
    layers = socle_filtration(T.reduction()).as_lists()
    assert layers == [[(0, 0)], [(2, 1)]]


def test_injective_envelope_of_trivial_weight():
    I = inj_envelope(0, 1, P)
    assert dict(socle(I)[1]) == {(0, 1): 1}
    assert socle_filtration(I).as_lists() == [[(0, 1)], [(2, 2)], [(0, 1)]]


def test_jh_multiset_examples():
    assert dict(jh_multiset(principal_series(1, 2, P).reduction())) == {(2, 1): 1, (2, 3): 1}
    assert dict(jh_multiset(theta(4, P).reduction())) == {(2, 1): 1, (0, 0): 1}


def test_jh_of_zero_module():
    S = gl2_setting(P)
    F = witt_ring(P, 1, 1)
    Z = GMod(S.K, F, [F.zeros((0, 0)) for _ in S.K.generators])
    assert sum(jh_multiset(Z).values()) == 0


def test_invariants_of_serre_weights():
    for m, n in [(0, 0), (2, 1), (4, 3)]:
        M = sigma(m, n)
        inv = invariants(M, "U")
        assert inv.shape[1] == 1
        if m >= 1:
            assert verify_u_invariants(M)["status"] == "pass"


def test_invariants_of_trivial_action():
    M = direct_sum(sigma(0, 0), sigma(0, 0))
    assert invariants(M, "U").shape[1] == 2


def test_tensor_with_sym1():
    S = gl2_setting(P)
    F = witt_ring(P, 1, 1)
    out = jh_multiset(tensor(sym1_module(S, F), sigma(1, 1)))
    assert dict(out) == {(2, 1): 1, (0, 2): 1}


def test_induced_dimension():
    S = gl2_setting(P)
    from artifact.gl2types import _torus_data

    _, t_exps, _ = _torus_data(S)
    model = induce(
        S.gamma,
        S.gamma_elements,
        lambda h: S.gamma.key(h) in t_exps,
        lambda h: S.F.upow(3 * t_exps[S.gamma.key(h)]),
        S.F,
    )
    assert len(model.coset_reps) == P * (P - 1)


@pytest.mark.parametrize("pair", [((2, 1), (2, 1)), ((1, 0), (3, 1)), ((0, 0), (4, 2))])
def test_hom_duality(pair):
    M = sigma(*pair[0])
    N = direct_sum(sigma(*pair[1]), sigma(*pair[0]))
    assert hom_dim(M, N) == hom_dim(dual(N), dual(M))


def test_dual_of_weight_is_weight():
    for m, n in [(1, 0), (2, 1), (3, 3)]:
        jh = jh_multiset(dual(sigma(m, n)))
        assert dict(jh) == {(m, (-m - n) % (P - 1)): 1}


def test_filtrations_are_dual():
    T = principal_series(0, 2, P).reduction()
    soc = socle_filtration(T)
    cos = cosocle_filtration(dual(T))
    assert sum(soc.dims) == T.n == sum(cos.dims)
    assert len(soc.layers) == len(cos.layers)
