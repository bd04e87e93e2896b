from collections import Counter

import pytest
from hypothesis import given, strategies as st

from artifact.graded import pbw_hilbert
from artifact.modrep import socle_filtration
from artifact.quatrep import (
    _labels,
    alpha_exponent,
    aug_filtration,
    bracket,
    build_theta_chain,
    char_name,
    chi_parameters,
    ext1_chars,
    filtration_compare,
    gamma_relations,
    lie_structure_report,
    pbw_dims,
    sym1_lemma_check,
    w_chi,
    wbar_chi3,
    y_elt,
)

P = 5
ORDER = P * P - 1
ALPHA = P - 1


def test_alpha_exponents():
    assert alpha_exponent(0, P, 1) == ALPHA
    assert alpha_exponent(1, P, 1) == (P * ALPHA) % ORDER == ORDER - ALPHA


def test_char_names():
    assert char_name(0, P) == "1"
    assert char_name(ALPHA, P) == "alpha"
    assert char_name(-2 * ALPHA, P) == "alpha^-2"
    assert char_name(4 + ALPHA, P, base=4) == "chi*alpha"


def test_pbw_dims_match_hilbert_series():
    assert pbw_dims(1, 4) == [1, 2, 4, 6, 9]
    for f in (1, 2, 3):
        assert pbw_dims(f, 5) == list(pbw_hilbert(f, 5).coeffs)


def test_augmentation_filtration_low_degrees():
    A = aug_filtration(maxdeg=3)
    assert A.dims == [1, 2, 4, 6]
    assert A.stable_against == 5
    assert A.character_names(1) == Counter({"alpha": 1, "alpha^-1": 1})
    assert A.character_names(2) == Counter({"1": 2, "alpha^2": 1, "alpha^-2": 1})


@pytest.mark.parametrize("i", [0, 1, 2])
def test_weight_filtration_equals_augmentation(i):
    assert filtration_compare(i=i)["equal"]


def test_y_eigencharacters():
    assert y_elt(0).character_name == "alpha"
    assert y_elt(1).character_name == "alpha^-1"


def test_brackets():
    assert bracket(0, 0).nonzero is False
    h = bracket(0, 1)
    assert h.nonzero and h.character_name == "1"
    with pytest.raises(ValueError):
        bracket(0, 2)


def test_lie_report_f1():
    rep = lie_structure_report()
    assert rep["eigen-law"]
    assert rep["y-span-rank"] == rep["gr1-dim"] == 2
    assert rep["h-prime-rank"] == 1
    assert rep["brackets-vanish-off-f"] and rep["brackets-in-h-prime-span"]
    assert rep["quotient-degree3-dim"] == rep["commutative-degree3-dim"] == 4


def test_gamma_relations():
    rel = gamma_relations()
    assert rel["levels"] == [1, 1, 2, 2]
    assert rel["ok"]
    with pytest.raises(ValueError):
        gamma_relations(n=3)


def test_w_chi_dimensions():
    assert w_chi(0, 2).dim == 3
    assert w_chi(0, 3).dim == 7
    with pytest.raises(ValueError):
        w_chi(0, 4)


@pytest.mark.parametrize("chi", [0, 1, 7])
def test_wbar_structure(chi):
    W = wbar_chi3(chi)
    assert W.dim == 5
    assert W.graded_dims == [1, 2, 2]
    socle = _labels(socle_filtration(W.module).as_lists())
    assert socle == [[chi, chi], sorted([(chi - ALPHA) % ORDER, (chi + ALPHA) % ORDER]), [chi]]


def test_frobenius_conjugation_multiplies_labels_by_p():
    for chi in (4, 9):
        low = _labels(socle_filtration(wbar_chi3(chi).module).as_lists())
        high = _labels(socle_filtration(wbar_chi3(P * chi).module).as_lists())
        assert high == [sorted((P * e) % ORDER for e in row) for row in low]


@given(st.integers(0, ORDER - 1), st.integers(0, ORDER - 1))
def test_ext1_is_one_exactly_for_alpha_neighbours(psi, chi):
    expected = 1 if (chi - psi) % ORDER in (ALPHA, ORDER - ALPHA) else 0
    assert ext1_chars(psi, chi) == expected


@given(st.integers(0, ORDER - 1))
def test_chi_parameters_roundtrip(chi):
    a, b = chi_parameters(chi, P)
    assert -2 <= a <= P - 2 and 0 <= b < P - 1
    assert (a + 2 + (P + 1) * b) % ORDER == chi


def test_sym1_lemma():
    out = sym1_lemma_check()
    assert out["L-socle"] == [[1], [P]]
    assert out["ok"]


@pytest.mark.parametrize("chi", [4, 9])
def test_theta_chain(chi):
    ch = build_theta_chain(chi)
    assert ch.psi[0] == chi
    assert ch.checks["Thetatilde-dim"] == 5
    assert ch.checks["ok"]
