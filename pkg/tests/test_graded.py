import pytest
from hypothesis import given, strategies as st

from artifact.graded import (
    HilbertSeries,
    MonomialQuotient,
    brute_force_hilbert,
    criterion_bound,
    gk_dim,
    gr_quotient,
    id_quotient,
    pbw_hilbert,
    pole_order,
    quotient_by_regular_sequence,
    quotient_hilbert,
)


def test_pbw_series_f1():
    assert pbw_hilbert(1, 6).coeffs == (1, 2, 4, 6, 9, 12, 16)
    assert pbw_hilbert(1, 6).check()
    with pytest.raises(ValueError):
        pbw_hilbert(0, 3)


def test_pole_orders():
    for f in (1, 2, 3):
        assert pole_order(pbw_hilbert(f, 4)) == 3 * f
    assert pole_order(HilbertSeries.from_factors([1, -1], (1,), 4)) == 0
    assert pole_order(HilbertSeries.from_factors([0], (1,), 4)) == 0


def test_regular_sequence_matches_monomial_model():
    for f in (1, 2):
        H = quotient_by_regular_sequence(pbw_hilbert(f, 8), [2] * f)
        assert H.coeffs == quotient_hilbert(gr_quotient(f, kill_h=True), 8).coeffs
        H2 = quotient_by_regular_sequence(H, [2] * f)
        assert H2.coeffs == quotient_hilbert(gr_quotient(f, kill_h=True, kill_yz=True), 8).coeffs
        assert H2.coeffs == quotient_hilbert(id_quotient(f), 8).coeffs


def test_yz_quotient():
    Q = MonomialQuotient(("y", "z"), ((1, 1),))
    assert quotient_hilbert(Q, 5).coeffs == (1, 2, 2, 2, 2, 2)
    assert gk_dim(Q) == 1
    assert Q.describe() == "(yz)"


def test_gk_dims_of_models():
    for f in (1, 2, 3):
        assert gk_dim(id_quotient(f)) == f
        assert gk_dim(gr_quotient(f)) == 3 * f
        assert gk_dim(gr_quotient(f, kill_h=True)) == 2 * f
    assert gk_dim(MonomialQuotient(("y",), ((0,),))) == 0


def test_monomial_quotient_validation():
    with pytest.raises(ValueError):
        MonomialQuotient(("y", "z"), ((1,),))
    with pytest.raises(ValueError):
        MonomialQuotient(("y",), ((-1,),))
    Q = MonomialQuotient(("y", "z"), ((2, 0),))
    assert Q.contains(Q.monomial(y=3, z=1))
    assert not Q.contains(Q.monomial(y=1, z=5))


def test_criterion_bound():
    out = criterion_bound([id_quotient(1)])
    assert out["bound"] == 1 and out["dimension"] == 1
    y = MonomialQuotient(("y", "z"), ((1, 0),))
    z = MonomialQuotient(("y", "z"), ((0, 1),))
    out = criterion_bound([y, z], maxdeg=4)
    assert out["growth"] == (2, 2, 2, 2, 2)
    assert out["dimension"] == 1


def test_criterion_bound_zero_module():
    one = MonomialQuotient(("y", "z"), ((0, 0),))
    assert criterion_bound([one])["bound"] == 0
    assert criterion_bound([])["bound"] == 0


def test_criterion_bound_rejects_large_summand():
    with pytest.raises(ValueError):
        criterion_bound([MonomialQuotient(("y", "z"), ())])
    with pytest.raises(ValueError):
        criterion_bound([gr_quotient(1, kill_yz=True)])


_gens = st.lists(st.tuples(*[st.integers(0, 2)] * 3), max_size=4)


@given(_gens)
def test_inclusion_exclusion_matches_brute_force(gens):
    Q = MonomialQuotient(("a", "b", "c"), tuple(gens), (1, 1, 2))
    assert quotient_hilbert(Q, 7).coeffs == brute_force_hilbert(Q, 7)


@given(_gens)
def test_gk_dim_equals_pole_order(gens):
    Q = MonomialQuotient(("a", "b", "c"), tuple(gens))
    assert gk_dim(Q) == pole_order(quotient_hilbert(Q, 4))


@given(_gens, _gens)
def test_gk_dim_monotone(gens, extra):
    small = MonomialQuotient(("a", "b", "c"), tuple(gens))
    big = MonomialQuotient(("a", "b", "c"), tuple(gens) + tuple(extra))
    assert gk_dim(big) <= gk_dim(small)
