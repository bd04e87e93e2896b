from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.coeffs import (
    CycloElem,
    MultChar,
    PrimeParams,
    ValuationError,
    char_eval,
    cyclo_reduce,
    fq,
    teichmuller,
    witt_ring,
)


def test_prime_params_validation():
    assert PrimeParams(5).q == 5
    assert PrimeParams(5, 2).q == 25
    for bad in (dict(p=3), dict(p=9), dict(p=5, N=2), dict(p=5, f=0)):
        with pytest.raises(ValueError):
            PrimeParams(**bad)


def test_teichmuller_small_cases():
    assert teichmuller(fq(5, 1, 0), 4).is_zero()
    assert teichmuller(fq(5, 1, 1), 4).coords()[0] == 1
    # 2 -> 32 = 7 mod 25, and 7^5 = 7 mod 25
    t = teichmuller(fq(5, 1, 2), 2)
    assert t.coords() == (7, 0)
    assert (t**5) == t


@pytest.mark.parametrize("N", [1, 3, 8])
def test_teichmuller_multiplicative_exhaustive(N):
    F = witt_ring(5, 1, 1)
    elems = [fq(5, 1, tuple(c)) for c in F.elements()]
    lifts = {e.coords(): teichmuller(e, N) for e in elems}
    for x in elems:
        for y in elems:
            assert teichmuller(x * y, N) == lifts[x.coords()] * lifts[y.coords()]


def test_teichmuller_reduces_and_is_fixed_by_q2_power():
    for c in witt_ring(5, 1, 1).elements():
        x = fq(5, 1, tuple(c))
        t = teichmuller(x, 5)
        assert t.reduce(1) == x
        assert t**25 == t
        assert t**5 == t.frobenius()


def test_teichmuller_frobenius_compatible():
    for c in witt_ring(5, 1, 1).elements():
        x = fq(5, 1, tuple(c))
        assert teichmuller(x**5, 4) == teichmuller(x, 4).frobenius()


def test_frobenius_is_an_involution_on_fq2():
    F = witt_ring(7, 1, 1)
    for c in F.elements():
        x = fq(7, 1, tuple(c))
        assert x.sigma().sigma() == x


def test_char_eval_examples():
    g = fq(5, 1, (0, 1))
    assert char_eval(MultChar(0, 24), g, ring="cyclo") == CycloElem(24, [1])
    assert char_eval(MultChar(1, 24), g, ring="cyclo") == CycloElem.zeta_pow(24, 1)
    # alpha = xi^{p-1} on F_p^x: Teich(2)^4 = 7^4 = 1 mod 25
    v = char_eval(MultChar(4, 24), fq(5, 1, 2), N=2)
    assert v.coords() == (1, 0)
    with pytest.raises(ZeroDivisionError):
        char_eval(MultChar(1, 24), fq(5, 1, 0))


@given(st.integers(0, 23), st.integers(1, 24), st.integers(1, 24))
def test_char_eval_multiplicative(k, i, j):
    F = witt_ring(5, 1, 1)
    s = F.upow(i)
    t = F.upow(j)
    chi = MultChar(k, 24)
    st_ = fq(5, 1, tuple(F.mul(s, t)))
    lhs = char_eval(chi, st_, N=3)
    rhs = char_eval(chi, fq(5, 1, tuple(s)), N=3) * char_eval(chi, fq(5, 1, tuple(t)), N=3)
    assert lhs == rhs


def test_cyclo_reduce_examples():
    assert cyclo_reduce(CycloElem(24, [1]), 3, p=5).coords()[0] == 1
    z = cyclo_reduce(CycloElem.zeta_pow(24, 1), 1, p=5)
    F = witt_ring(5, 1, 1)
    assert np.array_equal(np.asarray(z.coords()), F.u())
    with pytest.raises(ValuationError) as exc:
        cyclo_reduce(CycloElem(24, [Fraction(1, 480)]), 3, p=5)
    assert exc.value.valuation == -1


coef = st.lists(st.integers(-6, 6), min_size=1, max_size=8)


@given(coef, coef)
def test_cyclo_reduce_is_a_ring_homomorphism(a, b):
    x, y = CycloElem(24, a), CycloElem(24, b)
    R = witt_ring(5, 1, 4)
    rx, ry = cyclo_reduce(x, 4, p=5), cyclo_reduce(y, 4, p=5)
    assert cyclo_reduce(x + y, 4, p=5) == rx + ry
    assert cyclo_reduce(x * y, 4, p=5) == rx * ry
    assert R.N == 4


def test_multchar_arithmetic():
    a = MultChar(4, 24)
    assert (a * a.inverse()).is_trivial()
    assert (a**6).is_trivial()
    assert MultChar(25, 24).k == 1
