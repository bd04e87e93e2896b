"""Representations of GL2(F_p) and GL2(Z_p): Serre weights and tame types.

All modules live over one group object per ``(p, N)``: the generators of
``GL2(Z/p^N)`` (Teichmuller lifts of generators of GL2(F_p) followed by
generators of K1).  Representations inflated from GL2(F_p) let K1 act
trivially.

The cuspidal type attached to ``psi`` is cut out of an induced
representation by the idempotent of its character.  It is not a
constituent of ``Ind_{T'}^Gamma psi`` (Frobenius reciprocity gives
multiplicity 0), so we induce a character ``lam`` of the nonsplit torus
that agrees with ``psi`` on the centre and differs from ``psi, psi^p``;
there the cuspidal type occurs exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg
from .coeffs import CycloElem, MultChar, PrimeParams, WittRing, cyclo_reduce, witt_ring
from .groups import GenGroup, build_gamma, build_gl2_witt, prime_field_generator
from .modrep import GMod, InducedModel, direct_sum, induce, invariants, coinvariants, decompose, socle, jh_multiset, hom_space, tensor, find_isomorphism

__all__ = [
    "HChar",
    "GL2Setting",
    "gl2_setting",
    "sigma_label",
    "serre_weight_module",
    "TameType",
    "theta",
    "principal_series",
    "steinberg",
    "scalar_type",
    "inj_envelope",
    "sym1_module",
    "sym1_twist",
    "sym1_inj_expected",
    "verify_u_invariants",
    "diamond_theta",
    "diamond_principal",
    "theta_exponent",
    "cuspidal_character",
    "h_weights",
]


# --- labels -------------------------------------------------------------------


def sigma_label(m: int, n: int, p: int):
    """Normalised label ``(m, n mod p-1)`` of a Serre weight; None for ``m = -1``."""
    if m == -1:
        return None
    if not 0 <= m <= p - 1:
        raise ValueError(f"Serre weight index m={m} out of range for p={p}")
    return (m, n % (p - 1))


@dataclass(frozen=True)
class HChar:
    """Character ``diag(a, d) -> a^e1 d^e2`` of the diagonal torus."""

    e1: int
    e2: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "e1", self.e1 % (self.p - 1))
        object.__setattr__(self, "e2", self.e2 % (self.p - 1))

    @classmethod
    def chi(cls, m: int, n: int, p: int) -> "HChar":
        """``chi_{m,n}``: ``diag(a, d) -> a^{m+n} d^n``."""
        return cls(m + n, n, p)

    @property
    def s(self) -> "HChar":
        return HChar(self.e2, self.e1, self.p)

    def __mul__(self, o: "HChar") -> "HChar":
        return HChar(self.e1 + o.e1, self.e2 + o.e2, self.p)

    def label(self) -> tuple[int, int]:
        return (self.e1, self.e2)


def h_weights(labels, p: int) -> list[HChar]:
    """Convert torus eigenvalue labels (exponents of the F_{p^2} generator) to HChars."""
    return sorted((HChar(k1 // (p + 1), k2 // (p + 1), p) for k1, k2 in labels), key=lambda h: h.label())


# --- the group setting ----------------------------------------------------------


class GL2Setting:
    """Group, rings and an enumeration of GL2(F_p) for a fixed ``(p, N)``."""

    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        self.params = PrimeParams(p, 1, max(N, 3))
        self.K = build_gl2_witt(self.params, N) if N > 1 else build_gamma(self.params)
        self.gamma = build_gamma(self.params)
        self.F = witt_ring(p, 1, 1)
        self.O = witt_ring(p, 1, N)
        self.gamma_elements = self.gamma.enumerate()
        self.gamma_index = {self.gamma.key(g): i for i, g in enumerate(self.gamma_elements)}
        base = len(self.gamma.generators)
        self.n_gamma_gens = base
        self.k1_indices = self.K.subsets.get("K1", [])
        self.K.subsets.setdefault("I1", [2] + list(self.k1_indices))
        self.gamma.subsets.setdefault("I1", [2])

    def gen_mod_p(self, i: int) -> np.ndarray:
        return self.K.generators[i] % self.p

    def inflate(self, rep, ring: WittRing, name: str = "") -> GMod:
        """GMod on K from a function giving the matrix of an element of GL2(F_p)."""
        mats = [rep(self.gen_mod_p(i)) for i in range(len(self.K.generators))]
        return GMod(self.K, ring, mats, name)


def gl2_setting(p: int, N: int = 6) -> GL2Setting:
    # one object per (p, N) however the arguments are passed
    return _gl2_setting(int(p), int(N))


@lru_cache(maxsize=None)
def _gl2_setting(p: int, N: int) -> GL2Setting:
    return GL2Setting(p, N)


# --- Serre weights ---------------------------------------------------------------


def _sym_matrix(g: np.ndarray, m: int, modulus: int) -> np.ndarray:
    """Sym^m of g on the basis X^m, X^{m-1}Y, ..., Y^m (integer matrix).

    ``g = (a b; c d)`` acts by ``X -> aX + cY``, ``Y -> bX + dY``.
    """
    a, b, c, d = (int(x) for x in g.ravel())
    M = np.zeros((m + 1, m + 1), dtype=object)
    for i in range(m + 1):
        # column i: image of X^{m-i} Y^i, as polynomial in Y-degree
        poly = [1]
        for _ in range(m - i):
            poly = _poly_mul(poly, [a, c])
        for _ in range(i):
            poly = _poly_mul(poly, [b, d])
        for j, coef in enumerate(poly):
            M[j, i] = coef % modulus
    return M


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _det(g) -> int:
    return int(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])


def serre_weight_module(m: int, n: int, p: int | None = None, group: GenGroup | None = None, field: WittRing | None = None, N: int = 6):
    """``sigma_{m,n} = Sym^m F^2 (x) det^n`` as a module for the setting's group.

    Returns None for the empty weight ``m = -1``.
    """
    if group is None:
        if p is None:
            raise ValueError("pass p or a group")
        group = gl2_setting(p, N).K
    p = group.params.p
    if sigma_label(m, n, p) is None:
        return None
    F = field or witt_ring(p, 1, 1)
    mats = []
    for g in group.generators:
        gb = g % p
        M = _sym_matrix(gb, m, p)
        M = (M * pow(_det(gb) % p, n % (p - 1), p)) % p
        mats.append(F.from_int(M.astype(np.int64)))
    return GMod(group, F, mats, f"sigma({m},{n % (p - 1)})")


def sym1_module(S: GL2Setting, ring: WittRing) -> GMod:
    """``Sym^1`` of the standard representation of GL2(Z/p^N) on (X, Y)."""
    mats = [ring.from_int(g.astype(np.int64)) for g in S.K.generators]
    return GMod(S.K, ring, mats, "Sym1")


# --- tame types -----------------------------------------------------------------


@dataclass
class TameType:
    """A tame type with a distinguished lattice.

    ``lattice`` is a GMod over ``W/p^M`` for the setting's group;
    ``rep(g)`` gives the lattice action of any element of GL2(F_p);
    ``char0_projector`` is the exact idempotent data for cuspidal types.
    """

    kind: str
    params: dict
    setting: GL2Setting
    lattice: GMod
    rep: object = field(repr=False, default=None)
    model: InducedModel | None = field(repr=False, default=None)
    char0_projector: list | None = field(repr=False, default=None)
    basis: np.ndarray | None = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.lattice.n

    def reduction(self) -> GMod:
        return self.lattice.reduce()


def _fp_dlog(S: GL2Setting, x: int) -> int:
    """Discrete log of x in F_p^x, as an exponent of the F_{p^2} generator."""
    F = S.F
    return int(F.dlog(F.from_int(np.int64(x % S.p))))


def _torus_data(S: GL2Setting):
    """Elements of the nonsplit torus T' and their exponents; (tr, det) lookup."""
    c = S.gamma.gen("c")
    elems, exps, cur = {}, {}, np.eye(2, dtype=np.int64)
    by_trdet = {}
    for k in range(S.F.order):
        key = S.gamma.key(cur)
        elems[key] = cur
        exps[key] = k
        by_trdet.setdefault((int(np.trace(cur)) % S.p, _det(cur) % S.p), k)
        cur = (c @ cur) % S.p
    return elems, exps, by_trdet


def cuspidal_character(S: GL2Setting, psi_k: int):
    """Function g -> dict {exponent: coefficient} giving the cuspidal character in Z[mu]."""
    p, order = S.p, S.F.order
    _, _, by_trdet = _torus_data(S)

    def chi(g):
        g = g % p
        tr, det = int(np.trace(g)) % p, _det(g) % p
        disc = (tr * tr - 4 * det) % p
        if g[0, 1] == 0 and g[1, 0] == 0 and g[0, 0] == g[1, 1]:
            z = by_trdet[(tr, det)]
            return {(psi_k * z) % order: p - 1}
        if disc == 0:
            z = by_trdet[(tr, det)]
            return {(psi_k * z) % order: -1}
        if (tr, det) in by_trdet:
            x = by_trdet[(tr, det)]
            out = {}
            for e in ((psi_k * x) % order, (psi_k * x * p) % order):
                out[e] = out.get(e, 0) - 1
            return out
        return {}

    return chi


def _gl2_inverse(g, p):
    det = _det(g) % p
    inv = pow(det, -1, p)
    a, b, c, d = (int(x) for x in g.ravel())
    return (np.array([[d, -b], [-c, a]], dtype=np.int64) * inv) % p


def _restrict_rep(O: WittRing, S_basis, pivots, full_rep):
    """Action on the saturated sublattice with basis S (unit pivot rows)."""
    Sp = S_basis[pivots]
    Spi = linalg.inverse(O, Sp)

    def rep(g):
        A = O.coerce(full_rep(g))
        return O.matmul(Spi, O.matmul(A, S_basis)[pivots])

    return rep


def _lattice_from_rep(S: GL2Setting, ring: WittRing, rep, name: str) -> GMod:
    mats = []
    for i in range(len(S.K.generators)):
        if i < S.n_gamma_gens:
            mats.append(rep(S.gen_mod_p(i)))
        else:
            mats.append(None)
    n = mats[0].shape[0]
    mats = [ring.eye(n) if m is None else m for m in mats]
    return GMod(S.K, ring, mats, name)


def theta(psi: MultChar | int, p: int | None = None, N: int = 6) -> TameType:
    """The cuspidal type attached to ``psi`` (a character of F_{p^2}^x) with a lattice."""
    if isinstance(psi, MultChar):
        k = psi.k
        order = psi.modulus
        p = p or round((order + 1) ** 0.5)
    else:
        k = psi
    S = gl2_setting(p, N)
    order = S.F.order
    k %= order
    if (k * p - k) % order == 0:
        raise ValueError("psi = psi^p: no cuspidal type")
    # torus character agreeing with psi on the centre, distinct from psi and psi^p
    lam = None
    for j in range(1, p + 1):
        cand = (k + (p - 1) * j) % order
        if cand not in (k, (k * p) % order):
            lam = cand
            break
    t_elems, t_exps, _ = _torus_data(S)
    model = induce(
        S.gamma,
        S.gamma_elements,
        lambda h: S.gamma.key(h) in t_exps,
        lambda h: S.O.upow(lam * t_exps[S.gamma.key(h)]),
        S.O,
        name=f"Ind({lam})",
    )
    m = len(model.coset_reps)
    chi = cuspidal_character(S, k)
    counts = np.zeros((m, m, order), dtype=np.int64)
    for g in S.gamma_elements:
        cg = chi(_gl2_inverse(g, p))
        if not cg:
            continue
        targets, hs = model.monomial(g)
        for i, (j, h) in enumerate(zip(targets, hs)):
            e_lam = lam * t_exps[S.gamma.key(h)]
            for e, coef in cg.items():
                counts[j, i, (e + e_lam) % order] += coef
    exact = [[CycloElem.from_counts(order, counts[j, i]) for i in range(m)] for j in range(m)]
    O = S.O
    P = O.zeros((m, m))
    for j in range(m):
        for i in range(m):
            P[j, i] = cyclo_reduce(exact[j][i], N, p=p).c
    Sb, piv, loss = linalg.saturate_columns(O, P)
    if Sb.shape[1] != p - 1:
        raise ValueError(f"projection has rank {Sb.shape[1]}, expected {p - 1}: wrong character data")
    O2 = witt_ring(p, 1, N - loss)
    rep = _restrict_rep(O2, Sb, piv, model.rep)
    lattice = _lattice_from_rep(S, O2, rep, f"Theta({k})")
    return TameType("cuspidal", {"psi": k, "lam": lam}, S, lattice, rep, model, exact, Sb)


def principal_series(b: int, a: int, p: int, N: int = 6) -> TameType:
    """``I([x]^b, [x]^{b+a}) = Ind_B (chi1 (x) chi2)`` with B upper triangular."""
    S = gl2_setting(p, N)

    def in_B(h):
        return h[1, 0] % p == 0

    def val(h):
        e = b * _fp_dlog(S, h[0, 0]) + (b + a) * _fp_dlog(S, h[1, 1])
        return S.O.upow(e)

    model = induce(S.gamma, S.gamma_elements, in_B, val, S.O, name=f"I({b},{a})")
    lattice = _lattice_from_rep(S, S.O, model.rep, f"I({b},{b + a})")
    return TameType("principal", {"b": b, "a": a}, S, lattice, model.rep, model)


def steinberg(p: int, N: int = 6) -> TameType:
    """The Steinberg representation: functions on P^1(F_p) with sum zero."""
    S = gl2_setting(p, N)
    model = induce(S.gamma, S.gamma_elements, lambda h: h[1, 0] % p == 0, lambda h: S.O.ones(), S.O, name="Ind1")
    O = S.O
    m = len(model.coset_reps)
    D = O.zeros((m, m - 1))
    for i in range(1, m):
        D[0, i - 1, 0] = O.P - 1
        D[i, i - 1, 0] = 1
    Sb, piv, loss = linalg.saturate_columns(O, D)
    O2 = witt_ring(p, 1, N - loss)
    rep = _restrict_rep(O2, Sb, piv, model.rep)
    lattice = _lattice_from_rep(S, O2, rep, "St")
    return TameType("steinberg", {}, S, lattice, rep, model)


def scalar_type(e: int, p: int, N: int = 6) -> TameType:
    """The character ``[det]^e``."""
    S = gl2_setting(p, N)

    def rep(g):
        return S.O.upow(e * _fp_dlog(S, _det(g)))[None, None, :]

    lattice = _lattice_from_rep(S, S.O, rep, f"det^{e}")
    return TameType("scalar", {"e": e}, S, lattice, rep)


# --- closed forms -------------------------------------------------------------------


def diamond_theta(a: int, b: int, p: int) -> set:
    """Constituents of the reduction of the cuspidal type for psi = [xi]^{a+1+(p+1)b}."""
    out = {sigma_label(a - 1, b + 1, p), sigma_label(p - 2 - a, a + b + 1, p)}
    out.discard(None)
    return out


def diamond_principal(a: int, b: int, p: int) -> set:
    """Constituents of the reduction of ``I([x]^b, [x]^{b+a})``."""
    return {sigma_label(a, b, p), sigma_label(p - 1 - a, a + b, p)}


def theta_exponent(a: int, b: int, p: int) -> int:
    return (a + 1 + (p + 1) * b) % (p * p - 1)


# --- injective envelopes -------------------------------------------------------------


_INJ_CACHE: dict = {}


def inj_envelope(m: int, n: int, p: int, N: int = 6) -> GMod:
    """Injective envelope of ``sigma_{m,n}`` over F[GL2(F_p)] (inflated to the setting)."""
    key = (m, n % (p - 1), p, N)
    if key in _INJ_CACHE:
        return _INJ_CACHE[key]
    S = gl2_setting(p, N)
    sig = serre_weight_module(m, n, group=S.K, field=S.F)
    if m == p - 1:
        _INJ_CACHE[key] = sig
        return sig
    # Ind_H^Gamma of the weight of X^m is projective and contains the envelope
    e1, e2 = (m + n) % (p - 1), n % (p - 1)

    def val(h):
        return S.F.upow(e1 * _fp_dlog(S, h[0, 0]) + e2 * _fp_dlog(S, h[1, 1]))

    model = induce(S.gamma, S.gamma_elements, lambda h: h[0, 1] % p == 0 and h[1, 0] % p == 0, val, S.F)
    big = _lattice_from_rep(S, S.F, model.rep, "IndH")
    label = sigma_label(m, n, p)
    for part in decompose(big):
        _, soc = socle(part)
        if dict(soc) == {label: 1}:
            part.name = f"Inj{label}"
            _INJ_CACHE[key] = part
            return part
    raise RuntimeError("injective envelope not found")


def sym1_inj_expected(a: int, b: int, p: int) -> list:
    """Summands of ``Sym^1 (x) Inj(sigma_{a,b})``: ('inj', label) or ('sigma', label)."""
    if a == 1:
        return [("inj", sigma_label(2, b, p)), ("inj", sigma_label(0, b + 1, p)), ("sigma", sigma_label(p - 1, b + 1, p))]
    if a == p - 2:
        return [("sigma", sigma_label(p - 1, b, p)), ("sigma", sigma_label(p - 1, b, p)), ("inj", sigma_label(p - 3, b + 1, p))]
    out = []
    if a + 1 <= p - 1:
        out.append(("inj", sigma_label(a + 1, b, p)))
    if a - 1 >= 0:
        out.append(("inj", sigma_label(a - 1, b + 1, p)))
    return out


# --- Sym^1 twists --------------------------------------------------------------------------


def sym1_twist(T: TameType) -> GMod:
    """``Sym^1 O^2 (x) T`` with the algebraic action of GL2(Z/p^M)."""
    L = T.lattice
    if L.ring.N < 2:
        raise ValueError("precision exhausted")
    sym = sym1_module(T.setting, L.ring)
    out = tensor(sym, L)
    out.name = f"Sym1(x){L.name}"
    return out


# --- U-invariants ----------------------------------------------------------------------------


def verify_u_invariants(W: GMod) -> dict:
    """Check the two-character law for ``(Sym^1 (x) W)^U`` and its coinvariant dual."""
    p = W.group.params.p
    if W.n < 2:
        return {"status": "inapplicable", "reason": "dimension < 2"}
    F = W.ring
    S = gl2_setting(p, W.group.level)
    U = [W.group.subsets["U"][0]]
    inv = invariants(W, U)
    co_span, co_proj = coinvariants(W, U)
    out = {"status": "pass"}
    sym = sym1_module(S, F)
    SW = tensor(sym, W)
    for kind, dim_ok, src in (
        ("invariants", inv.shape[1] == 1, None),
        ("coinvariants", W.n - co_span.shape[1] == 1, None),
    ):
        if not dim_ok:
            out[kind] = "inapplicable"
            continue
        from .modrep import torus_weights_on

        if kind == "invariants":
            chi = h_weights(torus_weights_on(W, inv), p)[0]
            sub = invariants(SW, U)
            got = h_weights(torus_weights_on(SW, sub), p)
        else:
            chi = h_weights(torus_weights_on(W, co_span, co_proj), p)[0]
            s2, pr2 = coinvariants(SW, U)
            got = h_weights(torus_weights_on(SW, s2, pr2), p)
        expected = sorted([chi * HChar(1, 0, p), chi * HChar(0, 1, p)], key=lambda h: h.label())
        out[kind] = {"chi": chi.label(), "expected": [h.label() for h in expected], "computed": [h.label() for h in got]}
        if [h.label() for h in got] != [h.label() for h in expected]:
            out["status"] = "fail"
    if out.get("invariants") == "inapplicable" and out.get("coinvariants") == "inapplicable":
        out["status"] = "inapplicable"
    return out
