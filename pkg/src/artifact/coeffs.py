"""Coefficient rings: finite fields, truncated Witt vectors, cyclotomic numbers.

The unramified ring ``W(F_{q^2}) / p^N`` is realised as ``(Z/p^N)[u]/(m(u))``
where ``m`` is the minimal polynomial of the Teichmuller lift of a fixed
generator of ``F_{q^2}^x``.  With this choice ``u`` itself is a Teichmuller
representative, every Teichmuller lift is a power of ``u`` and the Frobenius
lift is ``u -> u^p``.  The residue field ``F_{q^2}`` is the ``N = 1`` case.

Elements are numpy integer arrays whose last axis holds the ``2f``
coordinates in the basis ``1, u, ..., u^{2f-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

__all__ = [
    "PrimeParams",
    "WittRing",
    "witt_ring",
    "WittElem",
    "FqElem",
    "fq",
    "MultChar",
    "CycloElem",
    "ValuationError",
    "teichmuller",
    "char_eval",
    "cyclo_reduce",
    "cyclo_valuation",
    "cyclotomic_poly",
]


class ValuationError(ValueError):
    """Raised when a value is not integral at the fixed prime."""

    def __init__(self, valuation: int, msg: str = ""):
        self.valuation = valuation
        super().__init__(msg or f"element has negative valuation {valuation}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, i = [], 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeParams:
    """The prime ``p``, the residue degree ``f`` and the working precision ``N``."""

    p: int
    f: int = 1
    N: int = 6

    def __post_init__(self):
        if not _is_prime(self.p) or self.p < 5:
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        if self.f < 1:
            raise ValueError("f must be positive")
        if self.N < 3:
            raise ValueError("precision N must be at least 3")

    @property
    def q(self) -> int:
        return self.p**self.f


# --- polynomial helpers over Z/P (python ints, tiny degrees) ---------------


def _polmulmod(a, b, mod_poly, P):
    """Product of coefficient lists modulo a monic polynomial and P."""
    d = len(mod_poly) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % P
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d + 1):
                prod[k - d + i] = (prod[k - d + i] - c * mod_poly[i]) % P
    out = prod[:d] + [0] * max(0, d - len(prod))
    return out


def _polpowmod(a, e, mod_poly, P):
    d = len(mod_poly) - 1
    result = [1] + [0] * (d - 1)
    base = list(a) + [0] * (d - len(a))
    while e:
        if e & 1:
            result = _polmulmod(result, base, mod_poly, P)
        base = _polmulmod(base, base, mod_poly, P)
        e >>= 1
    return result


def _solve_mod(A, b, P):
    """Solve ``A x = b`` over Z/P for A invertible modulo p (python ints)."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if gcd(M[r][c], P) == 1)
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, P)
        M[c] = [(x * inv) % P for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % P for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def _primitive_poly(p: int, d: int) -> tuple[int, ...]:
    """First monic primitive polynomial of degree d over F_p.

    Coefficient tuples ``(c_0, ..., c_{d-1})`` are enumerated by the integer
    ``sum c_i p^i``; the result is returned with the leading 1 appended.
    """
    order = p**d - 1
    primes = _prime_factors(order)
    for code in range(p**d):
        cs = [(code // p**i) % p for i in range(d)]
        if cs[0] == 0:
            continue
        poly = cs + [1]
        t = [0, 1] + [0] * (d - 2) if d > 1 else [(-cs[0]) % p]
        one = [1] + [0] * (d - 1)
        if _polpowmod(t, order, poly, p) != one:
            continue
        if all(_polpowmod(t, order // r, poly, p) != one for r in primes):
            return tuple(poly)
    raise RuntimeError("no primitive polynomial found")


@lru_cache(maxsize=None)
def _teichmuller_modulus(p: int, d: int, N: int) -> tuple[int, ...]:
    """Minimal polynomial over Z/p^N of the Teichmuller lift of the fixed generator."""
    P = p**N
    naive = list(_primitive_poly(p, d))
    if d == 1:
        # the generator is an integer; lift it to the Teichmuller root
        g = (-naive[0]) % p
        tau = pow(g, p ** (N - 1), P)
        for _ in range(N):
            tau = pow(tau, p, P)
        return ((-tau) % P, 1)
    u = [0, 1] + [0] * (d - 2)
    tau = _polpowmod(u, (p**d) ** N, naive, P)
    cols = [[1] + [0] * (d - 1)]
    for _ in range(d):
        cols.append(_polmulmod(cols[-1], tau, naive, P))
    A = [[cols[j][i] for j in range(d)] for i in range(d)]
    c = _solve_mod(A, cols[d], P)
    return tuple([(-x) % P for x in c] + [1])


class WittRing:
    """``W(F_{q^2}) / p^N`` with vectorised arithmetic on coordinate arrays."""

    def __init__(self, p: int, f: int = 1, N: int = 6):
        if N < 1:
            raise ValueError("precision must be positive")
        self.p, self.f, self.N = p, f, N
        self.d = 2 * f
        self.q = p**f
        self.P = p**N
        self.order = self.q**2 - 1
        self.modulus = _teichmuller_modulus(p, self.d, N)
        d = self.d
        # safe bound for int64 accumulation in matmul
        self.dtype = np.int64 if (self.P**2) * 64 * d * d < 2**62 else object
        red = np.zeros((2 * d - 1, d), dtype=object)
        for k in range(2 * d - 1):
            vec = [0] * (2 * d - 1)
            vec[k] = 1
            red[k] = _polmulmod(vec, [1] + [0] * (d - 1), list(self.modulus), self.P)
        self._red = red.astype(self.dtype)
        self._tab = np.zeros((d, d, d), dtype=self.dtype)
        for i in range(d):
            for j in range(d):
                self._tab[i, j] = self._red[i + j]
        self._upow = None
        self._dlog = None
        frob = np.zeros((d, d), dtype=self.dtype)
        for i in range(d):
            frob[i] = self.upow(i * p)
        self._frob = frob

    def __repr__(self):
        return f"WittRing(p={self.p}, f={self.f}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, WittRing) and (self.p, self.f, self.N) == (other.p, other.f, other.N)

    def __hash__(self):
        return hash((self.p, self.f, self.N))

    @property
    def is_field(self) -> bool:
        return self.N == 1

    # construction ---------------------------------------------------------
    def zeros(self, shape=()):
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        return np.zeros(shape + (self.d,), dtype=self.dtype)

    def ones(self, shape=()):
        a = self.zeros(shape)
        a[..., 0] = 1
        return a

    def eye(self, n: int):
        a = self.zeros((n, n))
        a[np.arange(n), np.arange(n), 0] = 1
        return a

    def from_int(self, x):
        """Embed an integer array into the ring (constant coordinate)."""
        x = np.asarray(x, dtype=object if self.dtype is object else np.int64)
        a = self.zeros(x.shape)
        a[..., 0] = x % self.P
        return a

    def coerce(self, a):
        """Reduce coordinates of any compatible array into this ring."""
        a = np.asarray(a)
        if a.dtype != self.dtype:
            a = a.astype(self.dtype)
        return a % self.P

    def u(self):
        a = self.zeros()
        if self.d > 1:
            a[1] = 1
        else:
            a[0] = (-self.modulus[0]) % self.P
        return a

    def upow(self, k: int):
        """``u^k``, i.e. the Teichmuller lift of the k-th power of the generator."""
        if self._upow is None:
            tab = self.zeros(self.order)
            cur = self.ones()
            u = self.u()
            for i in range(self.order):
                tab[i] = cur
                cur = self.mul(cur, u)
            self._upow = tab
        return self._upow[np.asarray(k) % self.order].copy()

    # arithmetic -----------------------------------------------------------
    def add(self, a, b):
        return (a + b) % self.P

    def sub(self, a, b):
        return (a - b) % self.P

    def neg(self, a):
        return (-a) % self.P

    def mul(self, a, b):
        prod = (a[..., :, None] * b[..., None, :]) % self.P
        return np.einsum("...ij,ijk->...k", prod, self._tab) % self.P

    def scale(self, c: int, a):
        return (a * (c % self.P)) % self.P

    def matmul(self, A, B):
        """Matrix product for arrays of shape (..., n, k, d) and (..., k, m, d)."""
        d = self.d
        out_shape = np.broadcast_shapes(A.shape[:-3], B.shape[:-3]) + (A.shape[-3], B.shape[-2], 2 * d - 1)
        acc = np.zeros(out_shape, dtype=self.dtype)
        for i in range(d):
            for j in range(d):
                acc[..., i + j] += (A[..., i] @ B[..., j]) % self.P
        acc %= self.P
        return np.einsum("...k,kj->...j", acc, self._red) % self.P

    def matvec(self, A, v):
        return self.matmul(A, v[..., :, None, :])[..., 0, :]

    def power(self, a, e: int):
        result = np.broadcast_to(self.ones(), a.shape).copy()
        base = a.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def val(self, a):
        """Valuation of each element (``N`` for zero)."""
        a = np.asarray(a)
        out = np.full(a.shape[:-1], self.N, dtype=np.int64)
        rem = a.copy()
        for k in range(self.N):
            nz = (rem % self.p != 0).any(axis=-1) & (out == self.N)
            out[nz] = k
            rem = rem // self.p
        return out

    def is_zero(self, a):
        return ~np.asarray(a).any(axis=-1)

    def is_unit(self, a):
        return (np.asarray(a) % self.p).any(axis=-1)

    def inv(self, a):
        """Inverse of units (elementwise); raises on non-units."""
        if not np.all(self.is_unit(a)):
            raise ZeroDivisionError("element is not a unit")
        group_order = self.order * self.q ** (2 * (self.N - 1))
        return self.power(a, group_order - 1)

    def div_p(self, a, k: int = 1):
        """Exact division by p^k; the result lives in the ring of precision N-k."""
        if k == 0:
            return a.copy(), self
        if np.any(a % self.p**k):
            raise ValueError("element not divisible")
        r = witt_ring(self.p, self.f, self.N - k)
        return r.coerce(a // self.p**k), r

    def reduce(self, a, N: int):
        r = witt_ring(self.p, self.f, N)
        return r.coerce(a), r

    def frobenius(self, a, times: int = 1):
        """Absolute Frobenius ``u -> u^p`` applied ``times`` times."""
        out = a
        for _ in range(times % self.d if self.d else 0):
            out = np.einsum("...i,ij->...j", out, self._frob) % self.P
        return out

    def sigma(self, a):
        """The q-power Frobenius (an involution)."""
        return self.frobenius(a, self.f)

    # residue field utilities ---------------------------------------------
    def encode(self, a):
        """Integer code of residue classes (coordinates mod p in base p)."""
        a = np.asarray(a) % self.p
        w = self.p ** np.arange(self.d)
        return (a.astype(np.int64) * w).sum(axis=-1)

    def decode(self, code):
        code = np.asarray(code, dtype=np.int64)
        a = self.zeros(code.shape)
        for i in range(self.d):
            a[..., i] = (code // self.p**i) % self.p
        return a

    def dlog(self, a):
        """Discrete log of the residue of a unit w.r.t. the fixed generator."""
        if self._dlog is None:
            F = witt_ring(self.p, self.f, 1)
            codes = F.encode(F.upow(np.arange(self.order)))
            table = np.full(self.q**2, -1, dtype=np.int64)
            table[codes] = np.arange(self.order)
            self._dlog = table
        out = self._dlog[self.encode(a)]
        if np.any(out < 0):
            raise ZeroDivisionError("discrete log of zero")
        return out

    def teich(self, a):
        """Teichmuller representative of the residue of ``a`` (0 stays 0)."""
        a = np.asarray(a)
        zero = ~self.is_unit(a)
        safe = a.copy()
        safe[zero] = self.ones()
        out = self.upow(self.dlog(safe))
        out[zero] = 0
        return out

    def elements(self):
        """All residue field elements as an array (only for N = 1)."""
        return self.decode(np.arange(self.q**2))


@lru_cache(maxsize=None)
def witt_ring(p: int, f: int = 1, N: int = 6) -> WittRing:
    return WittRing(p, f, N)


class WittElem:
    """A single element of a :class:`WittRing`."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: WittRing, coords):
        self.ring = ring
        self.c = ring.coerce(np.asarray(coords).reshape(ring.d))

    @classmethod
    def from_int(cls, ring, x: int):
        return cls(ring, ring.from_int(x))

    def _other(self, o):
        if isinstance(o, WittElem):
            if o.ring != self.ring:
                raise ValueError("ring mismatch")
            return o.c
        return self.ring.from_int(o)

    def __add__(self, o):
        return WittElem(self.ring, self.ring.add(self.c, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return WittElem(self.ring, self.ring.sub(self.c, self._other(o)))

    def __rsub__(self, o):
        return WittElem(self.ring, self.ring.sub(self._other(o), self.c))

    def __neg__(self):
        return WittElem(self.ring, self.ring.neg(self.c))

    def __mul__(self, o):
        return WittElem(self.ring, self.ring.mul(self.c, self._other(o)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return WittElem(self.ring, self.ring.power(self.c, e))

    def __truediv__(self, o):
        return self * WittElem(self.ring, self._other(o)).inverse()

    def inverse(self):
        return WittElem(self.ring, self.ring.inv(self.c))

    def __eq__(self, o):
        if isinstance(o, (int, np.integer)):
            o = WittElem.from_int(self.ring, int(o))
        return isinstance(o, WittElem) and o.ring == self.ring and np.array_equal(o.c, self.c)

    def __hash__(self):
        return hash((self.ring, tuple(int(x) for x in self.c)))

    def is_zero(self) -> bool:
        return bool(self.ring.is_zero(self.c))

    def valuation(self) -> int:
        return int(self.ring.val(self.c))

    def reduce(self, N: int) -> "WittElem":
        r = witt_ring(self.ring.p, self.ring.f, N)
        return WittElem(r, self.c)

    def frobenius(self) -> "WittElem":
        return WittElem(self.ring, self.ring.frobenius(self.c))

    def sigma(self) -> "WittElem":
        return WittElem(self.ring, self.ring.sigma(self.c))

    def coords(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.c)

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.coords()):
            if x:
                terms.append(str(x) if i == 0 else f"{x}*u^{i}" if i > 1 else f"{x}*u")
        return " + ".join(terms) or "0"


FqElem = WittElem


def fq(p: int, f: int = 1, coords=0) -> WittElem:
    """Element of ``F_{q^2}``: an int (prime field) or a coordinate sequence."""
    F = witt_ring(p, f, 1)
    if isinstance(coords, (int, np.integer)):
        return WittElem.from_int(F, int(coords))
    return WittElem(F, coords)


def teichmuller(x: WittElem, N: int) -> WittElem:
    """Teichmuller lift of a residue field element to precision N."""
    R = witt_ring(x.ring.p, x.ring.f, N)
    return WittElem(R, R.teich(R.coerce(x.c)))


@dataclass(frozen=True)
class MultChar:
    """Character ``x -> x^k`` of a cyclic group of the given order.

    ``domain`` is a tag such as ``"Fq2"`` (units of F_{q^2}) or ``"Fp"``.
    Values are taken through the Teichmuller lift.
    """

    k: int
    modulus: int
    domain: str = "Fq2"

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.modulus)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if (other.modulus, other.domain) != (self.modulus, self.domain):
            raise ValueError("characters on different groups")
        return MultChar(self.k + other.k, self.modulus, self.domain)

    def __pow__(self, e: int) -> "MultChar":
        return MultChar(self.k * e, self.modulus, self.domain)

    def inverse(self) -> "MultChar":
        return MultChar(-self.k, self.modulus, self.domain)

    def is_trivial(self) -> bool:
        return self.k == 0


class CycloElem:
    """Element of ``Q(zeta_n)`` as a rational polynomial modulo ``Phi_n``."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        self.n = n
        phi = cyclotomic_poly(n)
        deg = len(phi) - 1
        coeffs = list(coeffs)
        exact_int = all(isinstance(x, (int, np.integer)) for x in coeffs)
        c = [int(x) for x in coeffs] if exact_int else [Fraction(x) for x in coeffs]
        for k in range(len(c) - 1, deg - 1, -1):
            a = c[k]
            if a:
                for i in range(deg + 1):
                    c[k - deg + i] -= a * phi[i]
        c = c[:deg] + [0] * max(0, deg - len(c))
        self.c = tuple(Fraction(x) for x in c)

    @classmethod
    def zeta_pow(cls, n: int, k: int) -> "CycloElem":
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def from_counts(cls, n: int, counts) -> "CycloElem":
        """``sum counts[e] * zeta^e``."""
        return cls(n, list(counts))

    def _other(self, o):
        if isinstance(o, CycloElem):
            if o.n != self.n:
                raise ValueError("different cyclotomic fields")
            return o
        return CycloElem(self.n, [o])

    def __add__(self, o):
        o = self._other(o)
        return CycloElem(self.n, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return CycloElem(self.n, [a - b for a, b in zip(self.c, o.c)])

    def __neg__(self):
        return CycloElem(self.n, [-a for a in self.c])

    def __mul__(self, o):
        o = self._other(o)
        prod = [Fraction(0)] * (2 * len(self.c))
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        return CycloElem(self.n, prod)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, CycloElem):
            raise NotImplementedError("division by cyclotomic elements")
        return CycloElem(self.n, [a / Fraction(o) for a in self.c])

    def __eq__(self, o):
        if not isinstance(o, CycloElem):
            o = CycloElem(self.n, [o])
        return self.n == o.n and self.c == o.c

    def __hash__(self):
        return hash((self.n, self.c))

    def conjugate(self) -> "CycloElem":
        """Complex conjugation ``zeta -> zeta^{-1}``."""
        out = CycloElem(self.n, [0])
        for i, a in enumerate(self.c):
            if a:
                out = out + CycloElem.zeta_pow(self.n, -i) * a
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def __repr__(self):
        terms = [f"{a}*z^{i}" if i else str(a) for i, a in enumerate(self.c) if a]
        return f"CycloElem({' + '.join(terms) or '0'}; n={self.n})"


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            den = list(cyclotomic_poly(d))
            # exact division by a monic integer polynomial
            out = [0] * (len(num) - len(den) + 1)
            rem = num[:]
            for k in range(len(rem) - 1, len(den) - 2, -1):
                c = rem[k]
                if c:
                    out[k - len(den) + 1] = c
                    for i, b in enumerate(den):
                        rem[k - len(den) + 1 + i] -= c * b
            num = out
    return tuple(num)


def _vp_fraction(x: Fraction, p: int) -> int | None:
    if x == 0:
        return None
    v, a, b = 0, x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def _cyclo_to_ring(x: CycloElem, R: WittRing):
    """Map a p-integral cyclotomic element along ``zeta -> u`` (coefficientwise)."""
    out = R.zeros()
    for i, a in enumerate(x.c):
        if a:
            num = a.numerator % R.P
            den = pow(a.denominator % R.P, -1, R.P)
            out = R.add(out, R.scale(num * den, R.upow(i * (R.order // x.n))))
    return out


def _check_field(x: CycloElem, p: int, f: int):
    if (p ** (2 * f) - 1) % x.n:
        raise ValueError("cyclotomic field does not embed in the unramified ring")


def cyclo_valuation(x: CycloElem, p: int, f: int = 1, N: int = 12) -> int | None:
    """Valuation at the prime above p fixed by ``zeta -> [generator]``.

    Returns None for zero; precision N bounds how far a cancellation is seen.
    """
    _check_field(x, p, f)
    vals = [v for v in (_vp_fraction(a, p) for a in x.c) if v is not None]
    if not vals:
        return None
    m = min(vals)
    scaled = CycloElem(x.n, [a / Fraction(p) ** m for a in x.c])
    R = witt_ring(p, f, N)
    v = int(R.val(_cyclo_to_ring(scaled, R)))
    return m + v


def cyclo_reduce(x: CycloElem, N: int, p: int | None = None, f: int = 1) -> WittElem:
    """Reduce a p-integral cyclotomic number into ``W(F_{q^2}) / p^N``.

    ``zeta_n`` is sent to ``u^{(q^2-1)/n}``, the Teichmuller lift of the
    matching power of the fixed generator.  Raises :class:`ValuationError`
    if x is not integral at the fixed prime.
    """
    if p is None:
        p = _default_prime(x.n, f)
    _check_field(x, p, f)
    R = witt_ring(p, f, N)
    vals = [v for v in (_vp_fraction(a, p) for a in x.c) if v is not None]
    if not vals:
        return WittElem(R, R.zeros())
    m = min(vals)
    if m >= 0:
        return WittElem(R, _cyclo_to_ring(x, R))
    v = cyclo_valuation(x, p, f, N + (-m))
    if v is not None and v < 0:
        raise ValuationError(v)
    # integral although some coefficient is not: compute with extra precision
    Rbig = witt_ring(p, f, N - m)
    scaled = CycloElem(x.n, [a / Fraction(p) ** m for a in x.c])
    y = _cyclo_to_ring(scaled, Rbig)
    z, _ = Rbig.div_p(y, -m)
    return WittElem(R, z[: R.d] % R.P)


def _default_prime(n: int, f: int) -> int:
    for p in range(5, 10**4):
        if _is_prime(p) and p ** (2 * f) - 1 == n:
            return p
    raise ValueError("cannot infer the prime; pass p explicitly")


def char_eval(chi: MultChar, t: WittElem, ring="witt", N: int | None = None):
    """Value of ``chi`` at a nonzero residue field element ``t``.

    ``ring`` is ``"witt"`` (value in ``W/p^N``; N defaults to 6) or
    ``"cyclo"`` (exact value in ``Q(zeta_{q^2-1})``), or a WittRing.
    """
    F = t.ring
    if t.is_zero():
        raise ZeroDivisionError("characters are not defined at 0")
    j = int(F.dlog(t.c))
    if chi.domain == "Fq2":
        e = chi.k * j
    elif chi.domain in ("Fq", "Fp"):
        # generator of the subgroup is g^{(q^2-1)/modulus}
        step = F.order // chi.modulus
        if j % step:
            raise ValueError("element outside the character's domain")
        e = chi.k * (j // step) * step
    else:
        raise ValueError(f"unknown domain {chi.domain}")
    if ring == "cyclo":
        return CycloElem.zeta_pow(F.order, e)
    R = ring if isinstance(ring, WittRing) else witt_ring(F.p, F.f, N or 6)
    return WittElem(R, R.upow(e))
