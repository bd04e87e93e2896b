"""Finite groups given by generators: GL2(F_p), GL2(Z/p^k), quaternion unit quotients.

Matrix groups use integer 2x2 arrays.  The quaternion order is
``O_D = W(F_{q^2})[pi]`` with ``pi^2 = p`` and ``pi a = sigma(a) pi``; an
element ``a + pi b`` is stored as the coordinate pair ``(a, b)``.  Left
multiplication reads ``(a + pi b)(c + pi e) = (ac + p sigma(b) e) + pi(sigma(a) e + bc)``
and ``a + pi b -> [[a, sigma b], [p b, sigma a]]`` is a ring embedding.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .coeffs import PrimeParams, WittRing, witt_ring

ENUM_LIMIT = 10**6


@dataclass
class GenGroup:
    """A group presented by an ordered list of generators and named subsets."""

    name: str
    params: PrimeParams
    generators: list
    gen_names: list[str]
    subsets: dict[str, list[int]]
    mul: Callable[[Any, Any], Any]
    key: Callable[[Any], Any]
    identity: Any
    level: int = 1
    info: dict = field(default_factory=dict)

    def gen(self, name: str):
        return self.generators[self.gen_names.index(name)]

    def subset(self, name: str) -> list:
        return [self.generators[i] for i in self.subsets[name]]

    def enumerate(self, gens=None, limit: int = ENUM_LIMIT) -> list:
        """All elements generated by ``gens`` (default: all generators)."""
        return closure(gens if gens is not None else self.generators, self.mul, self.key, self.identity, limit)

    def order(self, subset: str | None = None) -> int:
        gens = self.generators if subset is None else self.subset(subset)
        return len(self.enumerate(gens))

    def element_order(self, x, limit: int = ENUM_LIMIT) -> int:
        k, y, e = 1, x, self.key(self.identity)
        while self.key(y) != e:
            y = self.mul(y, x)
            k += 1
            if k > limit:
                raise RuntimeError("element order exceeds enumeration limit")
        return k


def closure(gens, mul, key, identity, limit: int = ENUM_LIMIT) -> list:
    seen = {key(identity): identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(g, x)
            k = key(y)
            if k not in seen:
                seen[k] = y
                if len(seen) > limit:
                    raise RuntimeError("group too large to enumerate")
                queue.append(y)
    return list(seen.values())


# --- GL2 ----------------------------------------------------------------


def _mat_mul(modulus: int):
    def mul(x, y):
        return (x @ y) % modulus

    return mul


def _mat_key(x):
    return tuple(int(v) for v in x.ravel())


def prime_field_generator(p: int) -> int:
    """Generator of F_p^x: the norm of the fixed generator of F_{p^2}^x."""
    F = witt_ring(p, 1, 1)
    return int(F.upow(p + 1)[0])


def _teich_int(p: int, k: int, x: int) -> int:
    """Teichmuller lift of x in Z/p^k."""
    P = p**k
    t = x % P
    for _ in range(k):
        t = pow(t, p, P)
    return t


def _gl2_generators(p: int, k: int):
    P = p**k
    g = prime_field_generator(p)
    tg = _teich_int(p, k, g)
    R = witt_ring(p, 1, k)
    m0, m1 = R.modulus[0], R.modulus[1]
    gens = [
        np.array([[tg, 0], [0, 1]], dtype=np.int64),
        np.array([[1, 0], [0, tg]], dtype=np.int64),
        np.array([[1, 1], [0, 1]], dtype=np.int64),
        np.array([[0, 1], [1, 0]], dtype=np.int64),
        # multiplication by the Teichmuller generator on the basis (1, u)
        np.array([[0, (-m0) % P], [1, (-m1) % P]], dtype=np.int64),
    ]
    names = ["ta", "td", "u", "w", "c"]
    return gens, names


def build_gamma(params: PrimeParams) -> GenGroup:
    """GL2(F_p) with subsets H (diagonal), U (upper unipotent), torus (nonsplit)."""
    p = params.p
    gens, names = _gl2_generators(p, 1)
    return GenGroup(
        name="Gamma",
        params=params,
        generators=gens,
        gen_names=names,
        subsets={"H": [0, 1], "U": [2], "B": [0, 1, 2], "torus": [4], "weyl": [3]},
        mul=_mat_mul(p),
        key=_mat_key,
        identity=np.eye(2, dtype=np.int64),
        level=1,
    )


def build_gl2_witt(params: PrimeParams, k: int) -> GenGroup:
    """GL2(Z/p^k): Teichmuller lifts of the Gamma generators plus generators of K1."""
    if k < 1 or k > params.N:
        raise ValueError(f"level k must satisfy 1 <= k <= N={params.N}")
    if k == 1:
        G = build_gamma(params)
        G.name = "GL2(Z/p)"
        return G
    p, P = params.p, params.p**k
    gens, names = _gl2_generators(p, k)
    base = len(gens)
    for i in range(2):
        for j in range(2):
            e = np.eye(2, dtype=np.int64)
            e[i, j] += p
            gens.append(e % P)
            names.append(f"k{i}{j}")
    return GenGroup(
        name=f"GL2(Z/p^{k})",
        params=params,
        generators=gens,
        gen_names=names,
        subsets={
            "H": [0, 1],
            "U": [2],
            "B": [0, 1, 2],
            "torus": [4],
            "weyl": [3],
            "gamma": list(range(base)),
            "K1": list(range(base, base + 4)),
        },
        mul=_mat_mul(P),
        key=_mat_key,
        identity=np.eye(2, dtype=np.int64),
        level=k,
    )


def k1_quotient_rank(G: GenGroup) -> int:
    """F_p-rank of the image of the K1 generators in K1/K2 = M2(F_p)."""
    p = G.params.p
    if "K1" not in G.subsets:
        return 0
    vecs = np.array([((x - np.eye(2, dtype=np.int64)) // p % p).ravel() for x in G.subset("K1")])
    R = witt_ring(p, 1, 1)
    from .linalg import rank

    return rank(R, R.from_int(vecs))


def reduce_mod_p(x: np.ndarray, p: int) -> np.ndarray:
    return x % p


# --- quaternion units -----------------------------------------------------


@dataclass(frozen=True)
class Quat:
    """Element ``a + pi b`` of ``O_D / p^N`` (coordinates in a WittRing)."""

    ring: WittRing
    a: np.ndarray
    b: np.ndarray

    def __mul__(self, o: "Quat") -> "Quat":
        R = self.ring
        a = R.add(R.mul(self.a, o.a), R.scale(R.p, R.mul(R.sigma(self.b), o.b)))
        b = R.add(R.mul(R.sigma(self.a), o.b), R.mul(self.b, o.a))
        return Quat(R, a, b)

    def key(self):
        return tuple(int(v) for v in np.concatenate([self.a, self.b]))

    def embedding(self) -> np.ndarray:
        """2x2 matrix over the ring: ``[[a, sigma b], [p b, sigma a]]``."""
        R = self.ring
        M = R.zeros((2, 2))
        M[0, 0] = self.a
        M[0, 1] = R.sigma(self.b)
        M[1, 0] = R.scale(R.p, self.b)
        M[1, 1] = R.sigma(self.a)
        return M

    def reduced_a(self) -> np.ndarray:
        return self.a % self.ring.p

    def pi_valuation_minus_one(self) -> int:
        """Largest i with the element in ``1 + pi^i O_D`` (capped by precision)."""
        R = self.ring
        va = int(R.val(R.sub(self.a, R.ones())))
        vb = int(R.val(self.b))
        return min(2 * va, 2 * vb + 1)


def quat(ring: WittRing, a=None, b=None) -> Quat:
    a = ring.ones() if a is None else ring.coerce(a)
    b = ring.zeros() if b is None else ring.coerce(b)
    return Quat(ring, a, b)


def build_quat_units(params: PrimeParams, N: int | None = None) -> GenGroup:
    """Generators of ``O_D^x`` modulo p^N: the Teichmuller torus generator,
    ``1 + pi [g^i]`` and ``1 + p [g^i]`` for ``i < 2f``.
    """
    N = params.N if N is None else N
    R = witt_ring(params.p, params.f, N)
    d = R.d
    gens = [quat(R, R.u())]
    names = ["t"]
    for i in range(d):
        gens.append(quat(R, None, R.upow(i)))
        names.append(f"s{i}")
    for i in range(d):
        gens.append(quat(R, R.add(R.ones(), R.scale(params.p, R.upow(i)))))
        names.append(f"z{i}")
    return GenGroup(
        name="OD_units",
        params=params,
        generators=gens,
        gen_names=names,
        subsets={"torus": [0], "U1": list(range(1, 1 + 2 * d)), "pi": list(range(1, 1 + d)), "p": list(range(1 + d, 1 + 2 * d))},
        mul=lambda x, y: x * y,
        key=lambda x: x.key(),
        identity=quat(R),
        level=N,
        info={"ring": R},
    )


class QuatQuotient:
    """The finite p-group ``P_n = U^1 / (Z^1 U^n)`` and its cover ``U^1/U^n``.

    Elements of ``U^1/U^n`` are ``a + pi b`` with ``a = 1 + p a'`` known mod
    ``p^A`` and ``b`` known mod ``p^B`` where ``A = ceil(n/2)``, ``B = floor(n/2)``.
    They are indexed by integer codes; ``P_n`` is the quotient by the
    central subgroup ``Z^1 = 1 + p W(F_q)``.
    """

    def __init__(self, params: PrimeParams, n: int):
        if n < 2 or n > 2 * params.N:
            raise ValueError(f"level n must satisfy 2 <= n <= 2N = {2 * params.N}")
        self.params, self.n = params, n
        self.p, self.f = params.p, params.f
        self.A, self.B = (n + 1) // 2, n // 2
        self.R = witt_ring(self.p, self.f, self.A)
        self.d = self.R.d
        self.qa = self.p ** (self.A - 1)  # radix for a'
        self.qb = self.p**self.B
        self.cover_order = self.qa**self.d * self.qb**self.d
        self._center = None

    # coordinates -----------------------------------------------------------
    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        R = self.R
        a = R.zeros(codes.shape)
        b = R.zeros(codes.shape)
        rem = codes.copy()
        for i in range(self.d):
            a[..., i] = (rem % self.qa) * self.p
            rem //= self.qa
        a[..., 0] += 1
        for i in range(self.d):
            b[..., i] = rem % self.qb
            rem //= self.qb
        return a % R.P, b

    def encode(self, a, b):
        a = np.asarray(a) % self.R.P
        b = np.asarray(b) % self.qb
        if np.any((a[..., 0] - 1) % self.p) or np.any(a[..., 1:] % self.p):
            raise ValueError("not a principal unit")
        ap = a.copy()
        ap[..., 0] -= 1
        ap = (ap // self.p) % self.qa
        code = np.zeros(a.shape[:-1], dtype=np.int64)
        mult = 1
        for i in range(self.d):
            code += ap[..., i].astype(np.int64) * mult
            mult *= self.qa
        for i in range(self.d):
            code += b[..., i].astype(np.int64) * mult
            mult *= self.qb
        return code

    def element(self, a, b) -> int:
        return int(self.encode(self.R.coerce(a), self.R.coerce(b)))

    def identity(self) -> int:
        return self.element(self.R.ones(), self.R.zeros())

    def all_codes(self):
        return np.arange(self.cover_order, dtype=np.int64)

    # arithmetic ------------------------------------------------------------
    def mul_arrays(self, a1, b1, a2, b2):
        R = self.R
        a = R.add(R.mul(a1, a2), R.scale(self.p, R.mul(R.sigma(b1), b2)))
        b = R.add(R.mul(R.sigma(a1), b2), R.mul(b1, a2))
        return a, b % self.qb

    def mul(self, x, y):
        a1, b1 = self.decode(x)
        a2, b2 = self.decode(y)
        return self.encode(*self.mul_arrays(a1, b1, a2, b2))

    def left_perm(self, s: int):
        """Permutation ``x -> s x`` of all codes."""
        a, b = self.decode(self.all_codes())
        sa, sb = self.decode(s)
        return self.encode(*self.mul_arrays(sa[None, :], sb[None, :], a, b))

    def right_perm(self, s: int):
        a, b = self.decode(self.all_codes())
        sa, sb = self.decode(s)
        return self.encode(*self.mul_arrays(a, b, sa[None, :], sb[None, :]))

    def conj_teich_perm(self, j: int):
        """Conjugation by the Teichmuller lift ``u^j``: ``b -> u^{j(q-1)} b``."""
        a, b = self.decode(self.all_codes())
        R = self.R
        c = R.upow(j * (self.p**self.f - 1))
        return self.encode(a, R.mul(b, c[None, :]) % self.qb)

    def inverse(self, x):
        e = self.cover_order - 1
        res, base = self.identity(), x
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    def level_of(self, codes):
        """Largest i < n with the element in U^i (n for the identity)."""
        a, b = self.decode(codes)
        R = self.R
        va = R.val(R.sub(a, R.ones()))
        vb = witt_ring(self.p, self.f, max(self.B, 1)).val(b % self.qb) if self.B else np.full(va.shape, 0)
        va = np.where(va >= self.A, self.n, 2 * va)
        vb = np.where(vb >= self.B, self.n, 2 * vb + 1)
        return np.minimum(np.minimum(va, vb), self.n)

    # centre and quotient ---------------------------------------------------
    def center_generators(self) -> list[int]:
        """``1 + p [lambda]`` for an F_p-basis of F_q (as codes)."""
        R = self.R
        out = []
        q = self.p**self.f
        for i in range(self.f):
            lam = R.upow(i * (q + 1))
            a = R.add(R.ones(), R.scale(self.p, lam))
            out.append(self.element(a, R.zeros()))
        return out

    def center_codes(self):
        if self._center is None:
            gens = self.center_generators()
            elems = {self.identity()}
            frontier = [self.identity()]
            while frontier:
                new = []
                for x in frontier:
                    for g in gens:
                        y = int(self.mul(g, x))
                        if y not in elems:
                            elems.add(y)
                            new.append(y)
                frontier = new
            self._center = np.array(sorted(elems), dtype=np.int64)
        return self._center

    @property
    def order(self) -> int:
        """``|P_n|``."""
        return self.cover_order // len(self.center_codes())

    def quotient_labels(self):
        """Label each cover element by the minimal code in its centre coset."""
        labels = self.all_codes().copy()
        for z in self.center_codes():
            labels = np.minimum(labels, self.left_perm(int(z)))
        return labels

    def generator(self, kind: str, i: int) -> int:
        """``1 + pi [g^i]`` (kind ``"pi"``) or ``1 + p [g^i]`` (kind ``"p"``)."""
        R = self.R
        lam = R.upow(i)
        if kind == "pi":
            return self.element(R.ones(), lam)
        if kind == "p":
            return self.element(R.add(R.ones(), R.scale(self.p, lam)), R.zeros())
        raise ValueError(kind)

    def generators(self) -> list[int]:
        """Generators of the cover: ``1 + pi[g^i]`` and ``1 + p[g^i]``."""
        gens = [self.generator("pi", i) for i in range(self.d)]
        if self.n > 2:
            gens += [self.generator("p", i) for i in range(self.d)]
        return gens


def build_quat_quotient(params: PrimeParams, n: int) -> QuatQuotient:
    return QuatQuotient(params, n)
