"""Group algebras of quaternionic congruence quotients and the modules W_{chi,n}.

``P_n = U^1_D / (Z^1_D U^n_D)`` is a finite p-group (see
:class:`artifact.groups.QuatQuotient`).  Its augmentation filtration is
computed on the dual side: the annihilator ``D_i`` of ``m^i`` inside the
F_p-valued functions on ``P_n`` stays small, and

    D_{i+1} = {phi : x -> phi(x g) - phi(x) lies in D_i for every generator g}

is obtained by integrating along a spanning tree of the Cayley graph.  A
group-algebra element lies in ``m^i`` iff ``D_i`` kills it, and pairing with a
complement of ``D_i`` in ``D_{i+1}`` gives coordinates on ``m^i / m^{i+1}``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import linalg
from .coeffs import PrimeParams, WittRing, witt_ring
from .groups import GenGroup, QuatQuotient, build_quat_units
from .modrep import (
    GMod,
    cosocle_filtration,
    find_isomorphism,
    quotient,
    socle_filtration,
    tensor,
)

__all__ = [
    "InstabilityError",
    "AugFiltration",
    "LieElt",
    "WChiModule",
    "QuatGroupAlgebra",
    "group_algebra",
    "alpha_exponent",
    "char_name",
    "aug_filtration",
    "pbw_dims",
    "filtration_compare",
    "bracket",
    "lie_structure_report",
    "gamma_relations",
    "quat_units_group",
    "torus_character_module",
    "w_chi",
    "wbar_chi3",
    "ext1_chars",
    "chi_parameters",
    "sym1_quat_module",
    "sym1_lemma_check",
    "ThetaChain",
    "build_theta_chain",
]


class InstabilityError(RuntimeError):
    """Graded data differ between two consecutive levels."""

    def __init__(self, what: str, low, high, levels):
        super().__init__(f"{what} not stable: level {levels[0]} gives {low}, level {levels[1]} gives {high}")
        self.low, self.high, self.levels = low, high, levels


def default_level(f: int) -> int:
    return 4 if f == 1 else 3


def alpha_exponent(j: int, p: int, f: int) -> int:
    """Exponent e with ``alpha_j(mu) = mu^e`` (``alpha_j = sigma_j^{q-1}``)."""
    q = p**f
    return (p ** (j % (2 * f)) * (q - 1)) % (q * q - 1)


def char_name(e: int, p: int, f: int = 1, base: int = 0) -> str:
    """Readable name of the character ``mu -> mu^e`` relative to ``mu -> mu^base``.

    Small products of the alpha_j are recognised; otherwise the exponent is shown.
    """
    order = p ** (2 * f) - 1
    rel = (e - base) % order
    prefix = "chi*" if base else ""
    if rel == 0:
        return f"{prefix}1" if base else "1"
    if f == 1:
        a = alpha_exponent(0, p, 1)
        for k in range(1, 4):
            if rel == (k * a) % order:
                return prefix + ("alpha" if k == 1 else f"alpha^{k}")
            if rel == (-k * a) % order:
                return prefix + ("alpha^-1" if k == 1 else f"alpha^-{k}")
    else:
        for j in range(2 * f):
            if rel == alpha_exponent(j, p, f):
                return prefix + f"alpha{j}"
    return f"{prefix}xi^{rel}"


def pbw_dims(f: int, maxdeg: int) -> list[int]:
    """Coefficients of ``((1-t)^2 (1-t^2))^{-f}`` up to ``t^maxdeg``."""
    lin = [comb(k + 2 * f - 1, k) for k in range(maxdeg + 1)]
    quad = [comb(k // 2 + f - 1, k // 2) if k % 2 == 0 else 0 for k in range(maxdeg + 1)]
    return [sum(lin[i] * quad[k - i] for i in range(k + 1)) for k in range(maxdeg + 1)]


# --- the group algebra F[P_n] ------------------------------------------------------------


class QuatGroupAlgebra:
    """``F[P_n]`` with ``F = F_{q^2}``; elements are arrays of shape ``(|P_n|, d)``."""

    def __init__(self, p: int, f: int, n: int):
        self.p, self.f, self.n = p, f, n
        self.q = p**f
        self.Q = QuatQuotient(PrimeParams(p, f, max(3, (n + 1) // 2)), n)
        labels = self.Q.quotient_labels()
        self.reps = np.unique(labels)
        self.index = np.searchsorted(self.reps, labels)
        self.size = len(self.reps)
        self._ra, self._rb = self.Q.decode(self.reps)
        self.F = witt_ring(p, f, 1)
        self.order = self.F.order
        self.gen_codes = self.Q.generators()
        self._rperm_cache: dict[int, np.ndarray] = {}
        self._pair_cache: dict = {}
        self.gen_perms = [self.right_perm(int(self.index[g])) for g in self.gen_codes]
        self.identity = int(self.index[self.Q.identity()])
        self.conj_perm = self._quot(self.Q.conj_teich_perm(1))
        self._tree = self._spanning_tree()
        self._dual = [np.zeros((self.size, 0), dtype=np.int64), np.ones((self.size, 1), dtype=np.int64)]
        self._levels = None

    def __repr__(self):
        return f"QuatGroupAlgebra(p={self.p}, f={self.f}, n={self.n}, |P|={self.size})"

    # permutations of the quotient ---------------------------------------------------
    def _quot(self, cover_perm) -> np.ndarray:
        return self.index[np.asarray(cover_perm)[self.reps]]

    def mul_index(self, x, y) -> np.ndarray:
        """Quotient indices of the products ``x y`` (broadcasting index arrays)."""
        a1, b1 = self._ra[x], self._rb[x]
        a2, b2 = self._ra[y], self._rb[y]
        return self.index[self.Q.encode(*self.Q.mul_arrays(a1, b1, a2, b2))]

    def right_perm(self, x: int) -> np.ndarray:
        """Index permutation ``y -> y x`` for a quotient index x."""
        if x not in self._rperm_cache:
            self._rperm_cache[x] = self.mul_index(np.arange(self.size), np.full(self.size, x))
        return self._rperm_cache[x]

    def left_perm_code(self, code: int) -> np.ndarray:
        return self._quot(self.Q.left_perm(int(code)))

    def code_index(self, code) -> int:
        return int(self.index[int(code)])

    def _spanning_tree(self):
        seen = np.zeros(self.size, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity])
        layers = []
        while len(frontier):
            nxt = []
            for k, perm in enumerate(self.gen_perms):
                child = perm[frontier]
                _, first = np.unique(child, return_index=True)
                keep = first[~seen[child[first]]]
                if len(keep):
                    seen[child[keep]] = True
                    layers.append((child[keep], frontier[keep], k))
                    nxt.append(child[keep])
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        if not seen.all():
            raise RuntimeError("generators do not generate P_n")
        return layers

    @property
    def levels(self) -> np.ndarray:
        """Largest i such that the coset meets ``U^i`` (n for the identity)."""
        if self._levels is None:
            lev = np.zeros(self.size, dtype=np.int64)
            np.maximum.at(lev, self.index, self.Q.level_of(self.Q.all_codes()))
            self._levels = lev
        return self._levels

    # the dual filtration -------------------------------------------------------------
    def _next_dual(self, D: np.ndarray) -> np.ndarray:
        p, r, K = self.p, D.shape[1], len(self.gen_perms)
        U = 1 + K * r
        Phi = np.zeros((self.size, U), dtype=np.int64)
        Phi[self.identity, 0] = 1
        for child, parent, k in self._tree:
            Phi[child] = Phi[parent]
            Phi[child, 1 + k * r : 1 + (k + 1) * r] += D[parent]
            Phi[child] %= p
        rows = []
        for k, perm in enumerate(self.gen_perms):
            C = Phi[perm] - Phi
            C[:, 1 + k * r : 1 + (k + 1) * r] -= D
            rows.append(C % p)
        Nsp = linalg.nullspace_mod(np.concatenate(rows, axis=0), p)
        new = (Phi @ Nsp) % p
        both = np.concatenate([D, new], axis=1)
        keep = linalg.independent_rows_mod(both.T, p)
        return both[:, keep]

    def dual(self, i: int) -> np.ndarray:
        """Basis (columns) of the functions killing ``m^i``, graded-adapted."""
        while len(self._dual) <= i:
            self._dual.append(self._next_dual(self._dual[-1]))
        return self._dual[i]

    def graded_dim(self, i: int) -> int:
        return self.dual(i + 1).shape[1] - self.dual(i).shape[1]

    def graded_functions(self, i: int) -> np.ndarray:
        """Functions pairing perfectly with ``m^i / m^{i+1}``."""
        return self.dual(i + 1)[:, self.dual(i).shape[1] :]

    def exhausted_at(self, i: int) -> bool:
        return self.dual(i).shape[1] == self.size

    def in_power(self, m, i: int) -> bool:
        return not np.any((self.dual(i).T @ np.asarray(m)) % self.p)

    def coords(self, m, i: int) -> np.ndarray:
        """Coordinates of the image of ``m`` in ``m^i / m^{i+1}`` (F-array)."""
        if not self.in_power(m, i):
            raise ValueError(f"element is not in the {i}-th power of the augmentation ideal")
        return (self.graded_functions(i).T @ np.asarray(m)) % self.p

    def graded_characters(self, i: int) -> Counter:
        """Exponents of the characters of ``F_{q^2}^x`` on ``m^i/m^{i+1}`` (by conjugation)."""
        p, F = self.p, self.F
        E = self.graded_functions(i)
        g = E.shape[1]
        if g == 0:
            return Counter()
        X = linalg.solve_mod(self.dual(i + 1), E[self.conj_perm], p)
        M = F.from_int(X[self.dual(i).shape[1] :])
        out: Counter = Counter()
        for e in range(0, self.order, self.q - 1):
            A = F.sub(M, F.mul(F.eye(g), F.upow(e)[None, None, :]))
            k = g - linalg.rank(F, A)
            if k:
                out[e] = k
        if sum(out.values()) != g:
            raise RuntimeError("conjugation is not diagonalisable on the graded piece")
        return out

    # elements -------------------------------------------------------------------------
    def zero(self):
        return self.F.zeros(self.size)

    def delta(self, x: int, coef=None):
        m = self.zero()
        m[x] = self.F.ones() if coef is None else coef
        return m

    def one(self):
        return self.delta(self.identity)

    def principal(self, a, b) -> int:
        """Quotient index of ``a + pi b``."""
        return self.code_index(self.Q.element(a, b))

    def mul(self, m1, m2, chunk: int = 1 << 21):
        """Product in the group algebra, summed over pairs of support points."""
        F = self.F
        s1 = np.nonzero(np.asarray(m1).any(axis=-1))[0]
        s2 = np.nonzero(np.asarray(m2).any(axis=-1))[0]
        acc = np.zeros((self.size, F.d), dtype=np.int64)
        step = max(1, chunk // max(len(s1), 1))
        for start in range(0, len(s2), step):
            t2 = s2[start : start + step]
            key = (s1.tobytes(), t2.tobytes())
            idx = self._pair_cache.get(key)
            if idx is None:
                idx = self.mul_index(s1[:, None], t2[None, :]).reshape(-1)
                if len(s1) * len(t2) <= 1 << 20:
                    self._pair_cache[key] = idx
            coef = F.mul(m1[s1][:, None, :], m2[t2][None, :, :]).reshape(-1, F.d)
            for c in range(F.d):
                acc[:, c] += np.bincount(idx, weights=coef[:, c], minlength=self.size).astype(np.int64)
            acc %= self.p
        return F.coerce(acc)

    def conj(self, m):
        """``[u] m [u]^{-1}`` for the Teichmuller lift of the fixed generator u."""
        out = self.zero()
        out[self.conj_perm] = m
        return out

    def Y(self, j: int):
        """``sum_lambda sigma_j(lambda)^{-1} (1 + pi [lambda])``."""
        F, R = self.F, self.Q.R
        m = self.zero()
        for k in range(self.order):
            x = self.principal(R.ones(), R.upow(k))
            m[x] = F.add(m[x], F.upow(-k * self.p**j))
        return m

    def commutator(self, m1, m2):
        return self.F.sub(self.mul(m1, m2), self.mul(m2, m1))


@lru_cache(maxsize=None)
def group_algebra(p: int = 5, f: int = 1, n: int | None = None) -> QuatGroupAlgebra:
    return QuatGroupAlgebra(p, f, default_level(f) if n is None else n)


# --- augmentation filtration ---------------------------------------------------------


@dataclass
class AugFiltration:
    """Graded dimensions of ``m^i/m^{i+1}`` and their conjugation characters."""

    p: int
    f: int
    n: int
    dims: list[int]
    characters: list[Counter]
    order: int
    exhausted: bool = False
    stable_against: int | None = None

    def character_names(self, i: int) -> Counter:
        return Counter({char_name(e, self.p, self.f): m for e, m in self.characters[i].items()})


def _aug(p: int, f: int, n: int, maxdeg: int | None) -> AugFiltration:
    A = group_algebra(p, f, n)
    dims, chars = [], []
    i = 0
    while maxdeg is None or i <= maxdeg:
        if A.exhausted_at(i):
            break
        dims.append(A.graded_dim(i))
        chars.append(A.graded_characters(i))
        i += 1
    return AugFiltration(p, f, n, dims, chars, A.size, A.exhausted_at(i))


def aug_filtration(n: int | None = None, maxdeg: int | None = 3, p: int = 5, f: int = 1, check_stability: bool = True) -> AugFiltration:
    """Dimensions and characters of the augmentation filtration of ``F[P_n]``.

    ``maxdeg=None`` runs until the algebra is exhausted.  With
    ``check_stability`` the degrees up to ``maxdeg`` are recomputed at level
    ``n+1`` and an :class:`InstabilityError` reports any difference.
    """
    n = default_level(f) if n is None else n
    out = _aug(p, f, n, maxdeg)
    if check_stability and maxdeg is not None:
        hi = _aug(p, f, n + 1, maxdeg)
        if hi.dims != out.dims or hi.characters != out.characters:
            raise InstabilityError("augmentation filtration", out.dims, hi.dims, (n, n + 1))
        out.stable_against = n + 1
    return out


def filtration_compare(n: int | None = None, i: int = 1, p: int = 5, f: int = 1) -> dict:
    """Compare the image of the weight filtration with ``m^i``.

    The weight filtration is spanned by products ``(h_1 - 1)...(h_s - 1)``
    with total level at least i.  Powers of ``m`` are contained in it by
    definition; the converse holds iff ``h - 1`` lies in ``m^{min(level h, i)}``
    for every h, which is what is tested (products then follow from
    multiplicativity of the m-adic filtration).
    """
    n = default_level(f) if n is None else n
    A = group_algebra(p, f, n)
    if i == 0:
        return {"equal": True, "codim": 0, "n": n, "i": 0}
    lev = np.minimum(A.levels, i)
    ok = True
    for k in range(1, i + 1):
        D = A.dual(k)
        xs = np.nonzero(lev == k)[0]
        if len(xs) and np.any((D[xs] - D[A.identity][None, :]) % p):
            ok = False
    return {"equal": ok, "codim": int(A.dual(i).shape[1]), "n": n, "i": i}


# --- Lie brackets of the Y_j ------------------------------------------------------------


@dataclass
class LieElt:
    """Image of a group-algebra element in ``m^deg / m^{deg+1}``."""

    degree: int
    coords: np.ndarray
    character: int | None
    p: int
    f: int

    @property
    def nonzero(self) -> bool:
        return bool(np.any(self.coords))

    @property
    def character_name(self) -> str | None:
        return None if self.character is None else char_name(self.character, self.p, self.f)

    def flat(self) -> np.ndarray:
        return self.coords.reshape(-1)


def _lie_elt(A: QuatGroupAlgebra, m, degree: int, expected: int) -> LieElt:
    F = A.F
    c = A.coords(m, degree)
    cc = A.coords(A.conj(m), degree)
    tag = expected if np.array_equal(cc, F.mul(c, F.upow(expected)[None, :])) else None
    return LieElt(degree, c, tag, A.p, A.f)


def y_elt(j: int, p: int = 5, f: int = 1, n: int | None = None) -> LieElt:
    A = group_algebra(p, f, n)
    return _lie_elt(A, A.Y(j), 1, alpha_exponent(j, p, f))


def bracket(i: int, j: int, p: int = 5, f: int = 1, n: int | None = None) -> LieElt:
    """``[y_i, y_j]`` in ``m^2/m^3``."""
    if not (0 <= i < 2 * f and 0 <= j < 2 * f):
        raise ValueError("indices must lie in [0, 2f)")
    A = group_algebra(p, f, n)
    m = A.commutator(A.Y(i), A.Y(j))
    e = (alpha_exponent(i, p, f) + alpha_exponent(j, p, f)) % A.order
    return _lie_elt(A, m, 2, e)


def _rank_F(F: WittRing, vecs) -> int:
    if not vecs:
        return 0
    return linalg.rank(F, np.stack([np.asarray(v).reshape(-1, F.d) for v in vecs], axis=1))


def lie_structure_report(p: int = 5, f: int = 1, n: int | None = None, degree3: bool | None = None) -> dict:
    """Structural facts about the y_j and h'_j in the graded group algebra."""
    A = group_algebra(p, f, n)
    F = A.F
    d = 2 * f
    Ys = [A.Y(j) for j in range(d)]
    out: dict = {"p": p, "f": f, "n": A.n}
    out["eigen-law"] = all(
        np.array_equal(A.conj(Ys[j]), F.mul(Ys[j], F.upow(alpha_exponent(j, p, f))[None, :])) for j in range(d)
    )
    y1 = [A.coords(Y, 1) for Y in Ys]
    out["y-span-rank"] = _rank_F(F, y1)
    out["gr1-dim"] = A.graded_dim(1)
    prods = {(a, b): A.mul(Ys[a], Ys[b]) for a in range(d) for b in range(d)}
    comm = {(a, b): F.sub(prods[(a, b)], prods[(b, a)]) for a in range(d) for b in range(d)}
    hp = [comm[(j, j + f)] for j in range(f)]
    h2 = [A.coords(h, 2) for h in hp]
    out["h-prime-rank"] = _rank_F(F, h2)
    vanish, in_h = True, True
    for (i, j), m in comm.items():
        c = A.coords(m, 2)
        if (i - j) % d != f and np.any(c):
            vanish = False
        if _rank_F(F, h2 + [c]) != len(h2):
            in_h = False
    out["brackets-vanish-off-f"] = vanish
    out["brackets-in-h-prime-span"] = in_h
    out["gr2-dim"] = A.graded_dim(2)
    out["degree2-products-rank"] = _rank_F(F, [A.coords(m, 2) for m in prods.values()])
    if degree3 is None:
        degree3 = f == 1
    if degree3:
        trip = [A.coords(A.mul(prods[(a, b)], Ys[c]), 3) for a in range(d) for b in range(d) for c in range(d)]
        ideal = [A.coords(A.mul(h, Y), 3) for h in hp for Y in Ys] + [A.coords(A.mul(Y, h), 3) for h in hp for Y in Ys]
        out["gr3-dim"] = A.graded_dim(3)
        out["degree3-products-rank"] = _rank_F(F, trip)
        out["quotient-degree3-dim"] = out["degree3-products-rank"] - _rank_F(F, ideal)
        out["commutative-degree3-dim"] = comb(3 + d - 1, 3)
    return out


# --- the graded Lie algebra of U^1 ---------------------------------------------------------


def _gr_image(Q: QuatQuotient, code: int):
    """(level, residue coordinates) of a cover element."""
    lev = int(Q.level_of(np.array([code]))[0])
    if lev >= Q.n:
        return lev, np.zeros(Q.d, dtype=np.int64)
    a, b = Q.decode(np.array([code]))
    m = lev // 2
    if lev % 2:
        v = (b[0] // Q.p**m) % Q.p
    else:
        v = ((a[0] - Q.R.ones()) // Q.p**m) % Q.p
    return lev, v.astype(np.int64)


def _power(Q: QuatQuotient, x: int, e: int) -> int:
    out, base = Q.identity(), x
    while e:
        if e & 1:
            out = int(Q.mul(out, base))
        base = int(Q.mul(base, base))
        e >>= 1
    return out


def _comm(Q: QuatQuotient, x: int, y: int) -> int:
    return int(Q.mul(Q.mul(Q.mul(x, y), Q.inverse(x)), Q.inverse(y)))


def gamma_relations(n: int = 5, p: int = 5, f: int = 1) -> dict:
    """The bracket relations of gamma_1..gamma_4 in ``gr U^1`` modulo epsilon.

    Computed in the cover ``U^1/U^n``.  A bracket of elements of levels k, l
    is zero modulo epsilon iff the group commutator lies in ``U^{k+l}`` and its
    image there is in the span of p-th powers from ``U^{k+l-2}``.
    """
    if n < 4:
        raise ValueError("the relations need level n >= 4")
    Q = QuatQuotient(PrimeParams(p, f, max(3, (n + 1) // 2)), n)
    R = Q.R
    xi = R.u()
    g1 = Q.element(R.ones(), R.ones())
    g2 = Q.element(R.ones(), xi)
    g3 = _comm(Q, g1, g2)
    g4 = Q.element(R.add(R.ones(), R.scale(p, R.ones())), R.zeros())
    gam = {1: g1, 2: g2, 3: g3, 4: g4}
    level = {k: _gr_image(Q, v)[0] for k, v in gam.items()}
    out: dict = {"p": p, "f": f, "n": n}
    out["levels"] = [level[k] for k in (1, 2, 3, 4)]
    foot = Q.element(R.add(R.ones(), R.scale(p, R.sub(xi, R.sigma(xi)))), R.zeros())
    out["gamma3-footnote"] = int(Q.level_of(np.array([int(Q.mul(g3, Q.inverse(foot)))]))[0]) >= 3
    # F_q-spans of the images in each degree
    Fq = [R.upow(i * (p**f + 1)) for i in range(f)]

    def span_rank(codes, lev):
        vecs = []
        for c in codes:
            lv, v = _gr_image(Q, c)
            if lv != lev:
                continue
            for lam in Fq:
                vecs.append(R.mul(R.coerce(v), lam) % p)
        return linalg.rank_mod(np.array(vecs).T, p) if vecs else 0

    out["basis"] = span_rank([g1, g2], 1) == 2 * f and span_rank([g3, g4], 2) == 2 * f

    def eps_span(k):
        if k - 2 < 1:
            return np.zeros((Q.d, 0), dtype=np.int64)
        m = (k - 2) // 2
        vecs = []
        for i in range(Q.d):
            lam = R.scale(p**m, R.upow(i))
            x = Q.element(R.ones(), lam) if (k - 2) % 2 else Q.element(R.add(R.ones(), lam), R.zeros())
            lv, v = _gr_image(Q, _power(Q, x, p))
            if lv == k:
                vecs.append(v)
        return np.array(vecs, dtype=np.int64).T if vecs else np.zeros((Q.d, 0), dtype=np.int64)

    def zero_mod_eps(x, y):
        k = level[x] + level[y]
        c = _comm(Q, gam[x], gam[y])
        lv, v = _gr_image(Q, c)
        if lv < k:
            return False
        if lv > k or k >= n:
            return True
        E = eps_span(k)
        return linalg.rank_mod(np.concatenate([E, v[:, None]], axis=1), p) == linalg.rank_mod(E, p)

    rel = {}
    lv, v = _gr_image(Q, g3)
    rel["[g1,g2]=g3"] = lv == level[1] + level[2] and bool(np.any(v))
    for x, y in [(1, 3), (2, 3), (4, 1), (4, 2), (4, 3), (4, 4)]:
        rel[f"[g{x},g{y}]=0"] = zero_mod_eps(x, y)
    out["relations"] = rel
    out["ok"] = out["gamma3-footnote"] and out["basis"] and all(rel.values()) and out["levels"] == [1, 1, 2, 2]
    return out


# --- characters and W_{chi,n} -------------------------------------------------------------


@lru_cache(maxsize=None)
def quat_units_group(p: int = 5, f: int = 1, N: int = 6) -> GenGroup:
    """The generator-presented group ``O_D^x mod p^N`` shared by all modules."""
    return build_quat_units(PrimeParams(p, f, N), N)


def torus_character_module(group: GenGroup, k: int, ring: WittRing, name: str = "") -> GMod:
    """The character ``[mu]^k`` of ``O_D^x`` (trivial on ``U^1``), over ``ring``."""
    mats = [ring.eye(1) for _ in group.generators]
    for t in group.subsets["torus"]:
        mats[t] = ring.upow(k).reshape(1, 1, ring.d)
    return GMod(group, ring, mats, name or f"chi^{k % ring.order}")


def _cover_code(Q: QuatQuotient, g) -> int:
    """Code in ``U^1/U^n`` of a principal unit given as a Quat."""
    R = Q.R
    return Q.element(R.coerce(g.a), R.coerce(g.b))


@dataclass
class WChiModule:
    """``Proj(chi)/m^k`` (or a quotient of it) realized on ``F[P_n]/m^k``."""

    chi: int
    n: int
    k: int
    module: GMod
    graded_dims: list[int]
    characters: list[Counter]
    basis_degrees: list[int] = field(default_factory=list)
    p: int = 5
    f: int = 1

    @property
    def dim(self) -> int:
        return self.module.n

    def character_names(self, i: int) -> Counter:
        return Counter({char_name(e, self.p, self.f, self.chi): m for e, m in self.characters[i].items()})


def _w_module(A: QuatGroupAlgebra, group: GenGroup, chi: int, k: int) -> tuple[GMod, list[int]]:
    p, F = A.p, A.F
    D = A.dual(k)
    r = D.shape[1]
    piv = linalg.independent_rows_mod(D, p)
    B = linalg._inverse_mod(D[piv].T % p, p)
    tor = set(group.subsets["torus"])
    mats = []
    for gi, g in enumerate(group.generators):
        if gi in tor:
            perm = A.conj_perm
        else:
            perm = A.left_perm_code(_cover_code(A.Q, g))
        M = F.from_int((D[perm[piv]].T @ B) % p)
        if gi in tor:
            M = F.mul(M, F.upow(chi)[None, None, :])
        mats.append(M)
    degs = []
    for i in range(k):
        degs += [i] * A.graded_dim(i)
    return GMod(group, F, mats, f"W({chi % A.order},{k})"), degs


def w_chi(chi: int, k: int = 3, p: int = 5, f: int = 1, n: int | None = None, N: int = 6, check_stability: bool = False) -> WChiModule:
    """``W_{chi,k} = Proj(chi)/m^k`` for the character ``[mu]^chi``.

    Realized as ``F[P_n]/m^k`` with ``U^1`` acting by left multiplication and
    ``[mu]`` by ``chi(mu)`` times conjugation; this is the image of
    ``F[O_D^x/Z^1 U^n] e_chi`` for the idempotent of chi on the Teichmuller torus.
    """
    if not 1 <= k <= 3:
        raise ValueError("truncation exponent must be 1, 2 or 3")
    n = default_level(f) if n is None else n
    A = group_algebra(p, f, n)
    G = quat_units_group(p, f, N)
    mod, degs = _w_module(A, G, chi, k)
    dims = [A.graded_dim(i) for i in range(k)]
    chars = [Counter({(e + chi) % A.order: m for e, m in A.graded_characters(i).items()}) for i in range(k)]
    if check_stability:
        A2 = group_algebra(p, f, n + 1)
        dims2 = [A2.graded_dim(i) for i in range(k)]
        if dims2 != dims:
            raise InstabilityError("W graded dimensions", dims, dims2, (n, n + 1))
    return WChiModule(chi % A.order, n, k, mod, dims, chars, degs, p, f)


def wbar_chi3(chi: int, p: int = 5, f: int = 1, n: int | None = None, N: int = 6) -> WChiModule:
    """``W_{chi,3}`` modulo the degree-2 characters different from chi."""
    W = w_chi(chi, 3, p, f, n, N)
    F = W.module.ring
    start = W.basis_degrees.index(2)
    g = W.module.n - start
    T = W.module.mats[W.module.torus_indices[0]][start:, start:]
    cols = []
    for e in W.characters[2]:
        if e == W.chi:
            continue
        K = linalg.nullspace(F, F.sub(T, F.mul(F.eye(g), F.upow(e)[None, None, :])))
        for c in range(K.shape[1]):
            v = F.zeros(W.module.n)
            v[start:] = K[:, c]
            cols.append(v)
    S = np.stack(cols, axis=1) if cols else F.zeros((W.module.n, 0))
    mod, _ = quotient(W.module, S, f"Wbar({W.chi})")
    chars = W.characters[:2] + [Counter({W.chi: W.characters[2][W.chi]})]
    dims = [sum(c.values()) for c in chars]
    degs = [0] * dims[0] + [1] * dims[1] + [2] * dims[2]
    return WChiModule(W.chi, W.n, 3, mod, dims, chars, degs, p, f)


def ext1_chars(psi: int, chi: int, p: int = 5, f: int = 1, levels: tuple[int, int] = (3, 4)) -> int:
    """``dim Ext^1(psi, chi)`` for characters of ``O_D^x / Z^1_D``.

    An extension class restricts to a homomorphism ``P -> F`` transforming
    under conjugation by ``chi/psi``; these are dual to ``m/m^2``, so the
    dimension is the multiplicity of ``chi/psi`` among the degree-one
    characters.  The count is compared at two levels.
    """
    vals = []
    for n in levels:
        A = group_algebra(p, f, n)
        vals.append(A.graded_characters(1)[(chi - psi) % A.order])
    if len(set(vals)) != 1:
        raise InstabilityError("Ext^1 dimension", vals[0], vals[1], levels)
    return vals[0]


# --- lattices in Sym^1 (x) psi ----------------------------------------------------------


def chi_parameters(chi: int, p: int) -> tuple[int, int]:
    """(a, b) with ``-2 <= a <= p-2`` and ``chi = xi^{a+2+(p+1)b}``; b mod p-1."""
    order = p * p - 1
    chi %= order
    a = chi % (p + 1) - 2
    b = ((chi - a - 2) // (p + 1)) % (p - 1)
    return a, b


def _norm_twist(g, ring: WittRing):
    """``Nrd(g)^{-1/2}`` on the pro-p part of ``Z_p^x``: a character trivial mod p."""
    p, N = ring.p, ring.N
    nrd = ring.sub(ring.mul(g.a, ring.sigma(g.a)), ring.scale(p, ring.mul(g.b, ring.sigma(g.b))))
    nrd = ring.coerce(nrd)
    unit = ring.mul(nrd, ring.inv(ring.teich(nrd)))
    half = pow(2, -1, p ** (N - 1)) if N > 1 else 1
    return ring.power(ring.inv(unit), half)


def sym1_quat_module(group: GenGroup, ring: WittRing, centre_trivial: bool = False) -> GMod:
    """``Sym^1 O^2`` through the embedding ``a + pi b -> [[a, sigma b], [p b, sigma a]]``.

    With ``centre_trivial`` the action is twisted by ``Nrd^{-1/2}`` on the pro-p
    part, which makes ``1 + p Z_p`` act trivially without changing the reduction.
    """
    mats = []
    for g in group.generators:
        M = ring.coerce(g.embedding())
        if centre_trivial:
            M = ring.mul(M, _norm_twist(g, ring)[None, None, :])
        mats.append(M)
    return GMod(group, ring, mats, "Sym1")


def _labels(layers) -> list:
    return [sorted(x[0] for x in row) for row in layers]


def sym1_lemma_check(p: int = 5, N: int = 6) -> dict:
    """``L = O Y + O X`` and ``L' = O X + p O Y`` reduce to the two nonsplit extensions."""
    from .lattices import in_lattice, lattice_of, sublattice

    G = quat_units_group(p, 1, N)
    R = witt_ring(p, 1, N)
    F = witt_ring(p, 1, 1)
    L = lattice_of(sym1_quat_module(G, R), "L")
    X = F.zeros((2, 1))
    X[0, 0, 0] = 1
    Lp = sublattice(L, X, "L'")
    chi1, chi2 = 1, p
    sL = _labels(socle_filtration(L.reduction()).as_lists())
    sLp = _labels(socle_filtration(Lp.reduction()).as_lists())
    out = {
        "L-socle": sL,
        "Lprime-socle": sLp,
        "L-is-chi1-chi2": sL == [[chi1], [chi2]],
        "Lprime-is-chi2-chi1": sLp == [[chi2], [chi1]],
        "pL-in-Lprime-in-L": in_lattice(L, Lp) and in_lattice(Lp, L.scaled(1)),
    }
    out["ok"] = out["L-is-chi1-chi2"] and out["Lprime-is-chi2-chi1"] and out["pL-in-Lprime-in-L"]
    return out


@dataclass
class ThetaChain:
    chi: int
    a: int
    b: int
    psi: tuple[int, int, int]
    Theta1: object
    Theta2: object
    Theta3: object
    Theta: object  # GlueResult
    Thetatilde: object  # GlueResult
    Wbar: WChiModule
    iso: np.ndarray | None
    checks: dict


def build_theta_chain(chi: int, p: int = 5, N: int = 6, n: int | None = None) -> ThetaChain:
    """Theta_1, Theta_2, Theta_3 and the glued lattices Theta, Theta-tilde.

    Theta_2 and Theta_3 are the lattices of ``Sym^1 E^2 (x) psi_i`` whose
    reduction has cosocle chi, found by the lattice engine.
    """
    from .lattices import GlueSpec, glue, lattice_of, lattice_with_cosocle, sublattice

    order = p * p - 1
    chi %= order
    a, b = chi_parameters(chi, p)
    psi = (chi, (a + 3 + (p + 1) * (b - 1)) % order, (a + 1 + (p + 1) * b) % order)
    G = quat_units_group(p, 1, N)
    R = witt_ring(p, 1, N)
    F = witt_ring(p, 1, 1)
    sym = sym1_quat_module(G, R, centre_trivial=True)
    T1 = lattice_of(torus_character_module(G, psi[0], R, "psi1"), "Theta1")
    T2 = lattice_with_cosocle(lattice_of(tensor(sym, torus_character_module(G, psi[1], R))), (chi,), "Theta2")
    T3 = lattice_with_cosocle(lattice_of(tensor(sym, torus_character_module(G, psi[2], R))), (chi,), "Theta3")
    chimod = torus_character_module(G, chi, F)
    from .modrep import find_surjection

    r2 = find_surjection(T2.reduction(), chimod)
    r3 = find_surjection(T3.reduction(), chimod)
    if r2 is None or r3 is None:
        raise RuntimeError("gluing hypotheses fail: chi is not a quotient")
    Th = glue(GlueSpec(T1, T2, F.eye(1), r2), "Theta")
    Tt = glue(GlueSpec(Th.lattice, T3, Th.to_first, r3), "Theta~")
    am, al = (chi - (p - 1)) % order, (chi + (p - 1)) % order
    checks: dict = {}
    checks["Theta-cosocle"] = _labels(cosocle_filtration(Th.lattice.reduction()).as_lists())
    checks["Theta-cosocle-ok"] = checks["Theta-cosocle"] == [[chi], [am], [chi]]
    T2p = sublattice(T2, linalg.nullspace(F, r2))
    T3p = sublattice(T3, linalg.nullspace(F, r3))
    checks["Theta2prime-socle"] = _labels(socle_filtration(T2p.reduction()).as_lists())
    checks["Theta3prime-socle"] = _labels(socle_filtration(T3p.reduction()).as_lists())
    checks["Theta-primes-ok"] = checks["Theta2prime-socle"] == [[chi], [am]] and checks["Theta3prime-socle"] == [[chi], [al]]
    Wb = wbar_chi3(chi, p, 1, n, N)
    Ttbar = Tt.lattice.reduction()
    phi = find_isomorphism(Ttbar, Wb.module)
    equivariant = phi is not None and all(
        np.array_equal(F.matmul(phi, A), F.matmul(B, phi)) for A, B in zip(Ttbar.mats, Wb.module.mats)
    )
    checks["Thetatilde-dim"] = Ttbar.n
    checks["Thetatilde-iso-Wbar"] = bool(equivariant and linalg.rank(F, phi) == Wb.dim)
    checks["ok"] = checks["Theta-cosocle-ok"] and checks["Theta-primes-ok"] and checks["Thetatilde-iso-Wbar"]
    return ThetaChain(chi, a, b, psi, T1, T2, T3, Th, Tt, Wb, phi, checks)
