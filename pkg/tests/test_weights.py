import itertools

import pytest
from hypothesis import given, strategies as st

from artifact.graded import MonomialQuotient
from artifact.weights import (
    AmbiguityError,
    RhoBarParams,
    WeightSet,
    a_ideal,
    ab_choice,
    ab_rows,
    all_params,
    bdj_weights,
    c_class,
    c_params,
    cross_check,
    khare_weights,
    load_tables,
    psi_triple,
)

PRIMES = (5, 7, 11)


# independent oracle: the two weight theorems written out as plain branches


def oracle_bdj(case, r, s, p, equal, tres):
    def sig(m, n):
        return (m, n % (p - 1))

    if case == "irreducible":
        return {sig(r, s + 1), sig(p - 1 - r, r + s + 1)}
    if case == "reducible-nonsplit":
        if r != 0:
            return {sig(r, s + 1)}
        if equal and tres:
            return {sig(p - 1, s + 1)}
        return {sig(0, s + 1), sig(p - 1, s + 1)}
    if 1 <= r <= p - 4:
        return {sig(r, s + 1), sig(p - 3 - r, r + s + 2)}
    if r == 0:
        return {sig(0, s + 1), sig(p - 3, s + 2), sig(p - 1, s + 1)}
    if r == p - 3:
        return {sig(0, s), sig(p - 3, s + 1), sig(p - 1, s)}
    return {sig(p - 2, s + 1)}


def oracle_khare(case, r, s, p, equal, tres):
    order = p * p - 1
    alpha, zeta = p - 1, p + 1
    z = zeta * (s + 1)

    def e(x):
        return x % order

    if case == "irreducible":
        if r not in (0, p - 1):
            return {e(r + z), e(p * r + z), e(r - alpha + z), e(p * r + alpha + z)}
        return {e(-alpha + z), e(alpha + z)}
    if case == "reducible-nonsplit":
        if r == 0 and equal and tres:
            return {e(z)}
        if r == 0 and equal:
            return {e(z), e(-alpha + z), e(alpha + z)}
        return {e(r - alpha + z), e(p * r + alpha + z)}
    if r != 0:
        return {e(r - alpha + z), e(p * r + alpha + z)}
    return {e(z), e(-alpha + z), e(alpha + z)}


def _every_flag(p):
    for case in ("irreducible", "reducible-nonsplit", "reducible-split"):
        rmax = p - 1 if case == "irreducible" else p - 2
        for r, s in itertools.product(range(rmax + 1), range(p - 1)):
            for eq, tr in itertools.product((False, True), repeat=2):
                yield RhoBarParams(case, r, s, p, eq, tr)


@pytest.mark.parametrize("p", PRIMES)
def test_bdj_table_agrees_with_oracle(p):
    for x in _every_flag(p):
        assert set(bdj_weights(x)) == oracle_bdj(x.case, x.r, x.s, p, x.ratio_equal, x.tres_ramifie), x


@pytest.mark.parametrize("p", PRIMES)
def test_khare_table_agrees_with_oracle(p):
    for x in _every_flag(p):
        assert set(khare_weights(x)) == oracle_khare(x.case, x.r, x.s, p, x.ratio_equal, x.tres_ramifie), x


def test_tables_load():
    recs = load_tables()
    assert {r.table for r in recs} == {"bdj", "khare", "ab"}
    assert sum(r.table == "bdj" for r in recs) == 8
    assert sum(r.table == "khare" for r in recs) == 7


def test_examples_at_p5():
    x = RhoBarParams("irreducible", 2, 0, 5)
    assert bdj_weights(x).sorted() == [(2, 1), (2, 3)]
    W = khare_weights(x)
    assert W.subcase == "i-a"
    assert W.sorted() == [4, 8, 16, 20]
    y = RhoBarParams("reducible-nonsplit", 0, 1, 5, True, True)
    assert bdj_weights(y).subcase == "ii-b"
    assert khare_weights(y).sorted() == [12]


def test_aliases_and_validation():
    assert RhoBarParams("irred", 1, 0).case == "irreducible"
    assert RhoBarParams("3", 1, 0).case == "reducible-split"
    with pytest.raises(ValueError):
        RhoBarParams("reducible-split", 4, 0, 5)
    with pytest.raises(ValueError):
        RhoBarParams("irreducible", 0, 4, 5)
    with pytest.raises(ValueError):
        RhoBarParams("irreducible", 0, 0, 3)
    with pytest.raises(ValueError):
        RhoBarParams("bogus", 0, 0)


def test_membership_reduces_exponents():
    W = khare_weights(RhoBarParams("irreducible", 2, 0, 5))
    assert 4 + 24 in W and -20 in W and 5 not in W


@pytest.mark.parametrize("p", PRIMES)
def test_frobenius_symmetry_in_irreducible_case(p):
    order = p * p - 1
    for x in all_params(p):
        if x.case == "irreducible":
            W = khare_weights(x)
            assert {(p * e) % order for e in W} == set(W.elements)


@pytest.mark.parametrize("p", PRIMES)
def test_weight_sets_nonempty_and_multiplicity_free(p):
    recs = load_tables()
    for x in all_params(p):
        for W in (bdj_weights(x), khare_weights(x)):
            (rec,) = [r for r in recs if r.table == W.kind and r.case == x.case and r.subcase == W.subcase]
            assert 1 <= len(W) == len(rec.entries)


def test_psi_triple():
    assert psi_triple(2, 0, 5) == (4, 23, 3)
    with pytest.raises(ValueError):
        psi_triple(0, 0, 5)
    # a = -2 gives psi_1 = xi^0, a Frobenius-fixed character
    with pytest.raises(ValueError, match="psi_1"):
        psi_triple(-2, 0, 5, side="quaternion")


def test_ab_rows_for_example():
    x = RhoBarParams("irreducible", 2, 0, 5)
    assert ab_rows(x) == [("row1", 4, (2, 0)), ("row2", 20, (0, 3)), ("row3", 8, (0, 1)), ("row4", 16, (2, 2))]
    assert ab_choice(4, x) == (2, 0)
    with pytest.raises(ValueError):
        ab_choice(5, x)


@pytest.mark.parametrize("p", PRIMES)
def test_ab_choice_matches_quaternion_parameters(p):
    from artifact.quatrep import chi_parameters

    for x in c_params(p):
        for chi in khare_weights(x):
            a, b = ab_choice(chi, x)
            assert chi_parameters(chi, p) == (a, b % (p - 1))


def test_a_ideal_examples():
    x = RhoBarParams("irreducible", 2, 0, 5)
    W = khare_weights(x)
    # xi^r zeta^{s+1} has xi^r alpha^-1 zeta^{s+1} below it
    assert a_ideal(8, W).gens == ((1, 0),)
    assert a_ideal(4, W).gens == ((0, 1),)
    single = khare_weights(RhoBarParams("reducible-nonsplit", 0, 0, 5, True, True))
    assert a_ideal(6, single).describe() == "(yz)"
    with pytest.raises(ValueError):
        a_ideal(5, W)


def test_a_ideal_clash():
    W = WeightSet("khare", frozenset({0, 4, 8}), "test", 5)
    with pytest.raises(AmbiguityError):
        a_ideal(4, W)


@pytest.mark.parametrize("p", PRIMES)
def test_no_clash_in_generic_classes(p):
    for x in c_params(p):
        W = khare_weights(x)
        for chi in W:
            assert isinstance(a_ideal(chi, W), MonomialQuotient)


def test_c_classes():
    assert c_class(RhoBarParams("irreducible", 2, 0, 5)) == "C1"
    assert c_class(RhoBarParams("irreducible", 1, 0, 5)) is None
    assert c_class(RhoBarParams("reducible-nonsplit", 1, 0, 5)) == "C2"
    assert c_class(RhoBarParams("reducible-split", 1, 0, 5)) is None
    assert len(c_params(5)) == 12


@pytest.mark.parametrize("x", [RhoBarParams("irreducible", 2, 1, 5), RhoBarParams("reducible-nonsplit", 1, 0, 5)])
def test_cross_check(x):
    out = cross_check(x)
    assert out["ok"], out["checks"]


@given(st.sampled_from(all_params(5)))
def test_weights_are_normalised(x):
    for m, n in bdj_weights(x):
        assert 0 <= m <= 4 and 0 <= n < 4
    for e in khare_weights(x):
        assert 0 <= e < 24
