import pytest
from hypothesis import given, strategies as st

from artifact.gl2types import (
    HChar,
    diamond_principal,
    diamond_theta,
    inj_envelope,
    principal_series,
    serre_weight_module,
    sigma_label,
    sym1_inj_expected,
    sym1_twist,
    theta,
    theta_exponent,
    verify_u_invariants,
)
from artifact.modrep import decompose, jh_multiset, socle

P = 5


def test_sigma_label_normalises_twist():
    assert sigma_label(2, 7, P) == (2, 3)
    assert sigma_label(-1, 0, P) is None
    with pytest.raises(ValueError):
        sigma_label(P, 0, P)


@pytest.mark.parametrize("m", range(P))
def test_serre_weight_dimension(m):
    M = serre_weight_module(m, 0, P)
    assert M.n == m + 1
    assert dict(jh_multiset(M)) == {(m, 0): 1}


def test_hchar_product():
    assert (HChar(1, 0, P) * HChar(3, 2, P)).label() == (0, 2)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (2, 1), (3, 3), (4, 2)])
def test_theta_reduction_matches_closed_form(a, b):
    T = theta(theta_exponent(a, b, P), P)
    assert T.dim == P - 1
    assert set(jh_multiset(T.reduction())) == diamond_theta(a, b, P)


def test_theta_edge_cases_have_one_constituent():
    # a = 0 and a = p - 1 both reduce to sigma_{p-2, b+1}
    for a in (0, P - 1):
        assert diamond_theta(a, 1, P) == {sigma_label(P - 2, 2, P)}


def test_theta_rejects_frobenius_fixed_character():
    with pytest.raises(ValueError):
        theta(P + 1, P)


@pytest.mark.parametrize("a,b", [(0, 0), (2, 1), (3, 0)])
def test_principal_series(a, b):
    T = principal_series(b, a, P)
    assert T.dim == P + 1
    assert set(jh_multiset(T.reduction())) == diamond_principal(a, b, P)


@pytest.mark.parametrize("m", [0, 1, 3, P - 1])
def test_inj_envelope_dimension_and_socle(m):
    E = inj_envelope(m, 0, P)
    expected = P if m in (0, P - 1) else 2 * P
    assert E.n == expected
    _, soc = socle(E)
    assert dict(soc) == {(m, 0): 1}


def test_inj_envelope_of_trivial_weight():
    # dimension p: one copy of sigma_0 and one of sigma_{p-3} twisted
    E = inj_envelope(0, 0, P)
    assert E.n == P
    assert dict(jh_multiset(E)) == {(0, 0): 2, (P - 3, 1): 1}


def test_sym1_twist_dimension():
    T = theta(theta_exponent(2, 0, P), P)
    assert sym1_twist(T).n == 2 * (P - 1)


def test_verify_u_invariants_inapplicable_for_characters():
    assert verify_u_invariants(serre_weight_module(0, 2, P))["status"] == "inapplicable"


@pytest.mark.parametrize("m,n", [(1, 0), (2, 1), (3, 2), (4, 3)])
def test_verify_u_invariants_pass(m, n):
    out = verify_u_invariants(serre_weight_module(m, n, P))
    assert out["status"] == "pass"
    assert out["invariants"]["expected"] == out["invariants"]["computed"]


@pytest.mark.parametrize("a", [1, 2, P - 2])
def test_sym1_inj_expected_against_decomposition(a):
    from artifact.gl2types import gl2_setting, sym1_module
    from artifact.modrep import tensor

    E = inj_envelope(a, 0, P)
    S = gl2_setting(P)
    parts = decompose(tensor(sym1_module(S, E.ring), E))
    got = []
    for part in parts:
        _, soc = socle(part)
        (lab,) = soc
        kind = "sigma" if part.n == serre_weight_module(lab[0], 0, P).n else "inj"
        got.append((kind, lab))
    assert sorted(got) == sorted(sym1_inj_expected(a, 0, P))


@given(st.integers(0, P - 2), st.integers(0, P - 2))
def test_diamond_sets_have_at_most_two_weights(a, b):
    assert 1 <= len(diamond_theta(a, b, P)) <= 2
    assert len(diamond_principal(a, b, P)) in (1, 2)
