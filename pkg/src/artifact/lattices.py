"""Lattices in representations over ``W/p^N``.

A lattice is stored twice: as a module (the action of the group in the
lattice's own basis) and as a basis matrix relative to a fixed ambient
lattice.  Every new lattice is the preimage of a stable subspace of a
reduction ``L/pL``; computing its action costs one p-adic digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .coeffs import WittRing, witt_ring
from .modrep import (
    FiltrationReport,
    GMod,
    JHMultiset,
    coinvariants,
    cosocle_filtration,
    direct_sum,
    find_surjection,
    hom_space,
    invariants,
    irreducibles,
    is_submodule,
    jh_multiset,
    occurring_extensions,
    quotient,
    radical,
    socle_filtration,
    submodule,
    tensor,
)

__all__ = [
    "PrecisionError",
    "Lattice",
    "LatticeInType",
    "GlueSpec",
    "GlueResult",
    "LayerReport",
    "lattice_of",
    "sublattice",
    "sublattice_between",
    "lattice_with_cosocle",
    "homothetic",
    "relative_basis",
    "glue",
    "gluing_lemma_check",
    "layer_report",
    "stable_closure",
    "k1_coinvariants",
    "k1_generation_check",
    "killed_by_m2",
    "sym1_lattice",
    "in_lattice",
    "battery_expectations",
    "gluing_expectations",
    "battery_table_lines",
    "load_battery_table",
    "section33_computed",
    "section33_checks",
    "GluingData",
    "build_gluing",
    "gluing_computed",
    "gluing_checks",
]


class PrecisionError(ValueError):
    """Raised when a construction needs more p-adic digits than are available."""


@dataclass
class Lattice:
    """A stable lattice, given by its action and by a basis in ambient coordinates.

    ``basis`` lives in the ambient ring and is exact modulo ``p^basis_prec``.
    ``parent``/``inclusion`` record the lattice this one was cut out of.
    """

    ambient: GMod
    module: GMod
    basis: np.ndarray
    name: str = ""
    basis_prec: int | None = None
    parent: "Lattice | None" = field(default=None, repr=False)
    inclusion: np.ndarray | None = field(default=None, repr=False)
    normalized: bool = False

    def __post_init__(self):
        if self.basis_prec is None:
            self.basis_prec = self.ambient.ring.N

    @property
    def ring(self) -> WittRing:
        return self.module.ring

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def group(self):
        return self.module.group

    @property
    def field(self) -> WittRing:
        return witt_ring(self.ring.p, self.ring.f, 1)

    def reduction(self) -> GMod:
        out = self.module.reduce()
        out.name = f"{self.name}/p" if self.name else out.name
        return out

    def scaled(self, k: int = 1) -> "Lattice":
        """The homothetic lattice ``p^k L``."""
        RA = self.ambient.ring
        return Lattice(self.ambient, self.module, RA.scale(self.ring.p**k, self.basis), f"p^{k}{self.name}", self.basis_prec)

    def to_precision(self, N: int) -> "Lattice":
        if N == self.ring.N:
            return self
        return Lattice(self.ambient, self.module.to_precision(N), self.basis, self.name, self.basis_prec, self.parent, self.inclusion, self.normalized)

    def elementary_divisors(self) -> list[int]:
        R = witt_ring(self.ring.p, self.ring.f, self.basis_prec)
        return sorted(linalg.smith(R, R.coerce(self.basis))[1])

    def normalize(self) -> "Lattice":
        """Homothety normal form: divide the basis by the largest possible power of p."""
        R = witt_ring(self.ring.p, self.ring.f, self.basis_prec)
        B = R.coerce(self.basis)
        v = int(R.val(B).min()) if B.size else 0
        if v == 0 or v >= R.N:
            out = Lattice(self.ambient, self.module, self.basis, self.name, self.basis_prec, self.parent, self.inclusion, True)
            return out
        Bd, R2 = R.div_p(B, v)
        basis = self.ambient.ring.coerce(Bd)
        return Lattice(self.ambient, self.module, basis, self.name, R2.N, self.parent, self.inclusion, True)

    def __repr__(self):
        return f"Lattice({self.name or '?'}, rank={self.n}, {self.ring})"


LatticeInType = Lattice


def lattice_of(M: GMod, name: str = "") -> Lattice:
    """The lattice ``M`` itself, used as its own ambient."""
    return Lattice(M, M, M.ring.eye(M.n), name or M.name)


def sym1_lattice(T: Lattice, sym_ambient: GMod | None = None) -> Lattice:
    """``Sym^1 O^2 (x) T`` inside ``Sym^1 O^2 (x) ambient(T)`` (GL2 groups only)."""
    from .gl2types import gl2_setting, sym1_module

    S = gl2_setting(T.group.params.p, T.group.level)
    RA = T.ambient.ring
    if sym_ambient is None:
        sym_ambient = tensor(sym1_module(S, RA), T.ambient)
        sym_ambient.name = f"Sym1(x){T.ambient.name}"
    module = tensor(sym1_module(S, T.ring), T.module)
    module.name = f"Sym1(x){T.name}"
    basis = RA.zeros((2 * T.ambient.n, 2 * T.n))
    for i in range(2):
        basis[i * T.ambient.n : (i + 1) * T.ambient.n, i * T.n : (i + 1) * T.n] = T.basis
    return Lattice(sym_ambient, module, basis, module.name, T.basis_prec)


# --- sublattices ---------------------------------------------------------------------


def sublattice(L: Lattice, S, name: str = "") -> Lattice:
    """Preimage in L of the stable subspace of ``L/pL`` spanned by the columns of S."""
    F = L.field
    R = L.ring
    p = R.p
    n = L.n
    S = linalg.colspace(F, F.coerce(S)) if S.shape[1] else F.zeros((n, 0))
    k = S.shape[1]
    Lbar = L.reduction()
    if not is_submodule(Lbar, S):
        raise ValueError("subspace is not stable under the group")
    RA = L.ambient.ring
    if k == n:
        return Lattice(L.ambient, L.module, L.basis, name or L.name, L.basis_prec, L, R.eye(n))
    if k == 0:
        out = L.scaled(1)
        out.name, out.parent, out.inclusion = name or out.name, L, R.scale(p, R.eye(n))
        return out
    if R.N < 2:
        raise PrecisionError(f"sublattice needs precision >= 2, have {R.N}")
    Q = linalg.complement(F, S)
    M = R.coerce(np.concatenate([S, Q], axis=1))
    Mi = linalg.inverse(R, M)
    R2 = witt_ring(p, R.f, R.N - 1)
    mats = []
    for A in L.module.mats:
        h = R.matmul(Mi, R.matmul(A, M))
        low = h[k:, :k]
        if np.any(R.val(low) < 1):
            raise ValueError("subspace is not stable under the group")
        new = R2.zeros((n, n))
        new[:k, :k] = R2.coerce(h[:k, :k])
        new[:k, k:] = R2.coerce(R.scale(p, h[:k, k:]))
        new[k:, :k] = R.div_p(low, 1)[0]
        new[k:, k:] = R2.coerce(h[k:, k:])
        mats.append(new)
    MD = M.copy()
    MD[:, k:] = R.scale(p, MD[:, k:])
    basis = RA.matmul(L.basis, RA.coerce(np.concatenate([S, Q], axis=1)))
    basis[:, k:] = RA.scale(p, basis[:, k:])
    module = GMod(L.group, R2, mats, name or f"sub({L.name})")
    return Lattice(L.ambient, module, basis, module.name, L.basis_prec, L, MD)


def _irr_by_label(group, F):
    return {s.label: s for s in irreducibles(group, F)}


def sublattice_between(T: Lattice, target, name: str = "") -> Lattice:
    """Kernel of ``T -> T/pT -> target``.

    ``target`` is a module (a quotient of ``T/pT``, the surjection being
    found and required to be unique up to scalar) or a Serre-weight label.
    """
    Tbar = T.reduction()
    F = Tbar.ring
    if not isinstance(target, GMod):
        irr = _irr_by_label(T.group, F)
        if target not in irr:
            raise ValueError(f"unknown irreducible label {target}")
        target = irr[target].module
    if target.n == 0:
        return Lattice(T.ambient, T.module, T.basis, name or T.name, T.basis_prec, T, T.ring.eye(T.n))
    H = hom_space(Tbar, target)
    phi = find_surjection(Tbar, target)
    if phi is None:
        raise ValueError("target is not a quotient of the reduction")
    if H.shape[0] > 1:
        # the kernel must not depend on the choice of surjection
        K0 = linalg.nullspace(F, phi)
        for h in H:
            if linalg.rank(F, h) == target.n and linalg.rank(F, np.concatenate([K0, linalg.nullspace(F, h)], axis=1)) != K0.shape[1]:
                raise ValueError("target is a quotient in several ways; kernel is ambiguous")
    out = sublattice(T, linalg.nullspace(F, phi), name)
    if target.n < T.n:
        assert in_lattice(out, T.scaled(1)), "p T must lie in the kernel"
    return out


def lattice_with_cosocle(L: Lattice, sigma, name: str = "", max_steps: int | None = None) -> Lattice:
    """The lattice (unique up to homothety) whose reduction has cosocle ``sigma``.

    Starting from L, repeatedly pass to the kernel of the projection onto the
    part of the cosocle that is not ``sigma``.
    """
    Lbar = L.reduction()
    F = Lbar.ring
    irr = _irr_by_label(L.group, F)
    jh = jh_multiset(Lbar)
    if jh.get(sigma, 0) == 0:
        raise ValueError(f"{sigma} is not a Jordan-Holder factor")
    if jh[sigma] > 1:
        raise ValueError(f"{sigma} occurs with multiplicity {jh[sigma]}; the lattice is not unique")
    budget = max_steps if max_steps is not None else L.ring.N - 1
    cur = L
    seen: list[Lattice] = []
    for _ in range(budget + 1):
        Cbar = cur.reduction()
        _, top = radical(Cbar)
        if dict(top) == {sigma: 1}:
            out = cur.normalize()
            out.name = name or f"{L.name}[cosoc {sigma}]"
            out.module.name = out.name
            return out
        rows = []
        for lab in top:
            if lab != sigma:
                H = hom_space(Cbar, irr[lab].module)
                rows.append(H.reshape(-1, Cbar.n, F.d))
        if not rows:  # sigma missing from the cosocle: kill everything
            K = F.zeros((Cbar.n, 0))
        else:
            K = linalg.nullspace(F, np.concatenate(rows, axis=0))
        for old in seen:
            if homothetic(old, cur):
                raise RuntimeError("prescribed-cosocle iteration entered a cycle")
        seen.append(cur)
        if cur.ring.N < 2:
            break
        cur = sublattice(cur, K)
    raise PrecisionError("prescribed-cosocle iteration did not terminate within the precision budget")


# --- comparisons -----------------------------------------------------------------------


def _common_basis(L1: Lattice, L2: Lattice):
    if L1.ambient.n != L2.ambient.n:
        raise ValueError("lattices in different ambient spaces")
    N = min(L1.basis_prec, L2.basis_prec)
    R = witt_ring(L1.ring.p, L1.ring.f, N)
    return R, R.coerce(L1.basis), R.coerce(L2.basis)


def in_lattice(L1: Lattice, L2: Lattice) -> bool:
    """Is L2 contained in L1?"""
    R, B1, B2 = _common_basis(L1, L2)
    return linalg.in_column_span(R, B1, B2)


def homothetic(L1: Lattice, L2: Lattice) -> bool:
    """Are the two lattices equal up to a power of p?"""
    A, B = L1.normalize(), L2.normalize()
    return in_lattice(A, B) and in_lattice(B, A)


def relative_basis(L: Lattice, sub: Lattice):
    """Coordinates of the basis of ``sub`` in the basis of ``L`` (sub inside L).

    Returns (X, ring) with ``L.basis X = sub.basis``.
    """
    if sub.parent is L and sub.inclusion is not None:
        return sub.inclusion, L.ring
    R, B, C = _common_basis(L, sub)
    U, exps, V = linalg.smith(R, B)
    y = R.matmul(U, C)
    loss = max(exps) if exps else 0
    if loss >= R.N:
        raise PrecisionError("lattice basis is singular modulo the working precision")
    R2 = witt_ring(R.p, R.f, R.N - loss)
    z = R2.zeros(y.shape[:2])
    for i, e in enumerate(exps):
        if np.any(R.val(y[i]) < e):
            raise ValueError("sub is not contained in L")
        z[i] = R.div_p(y[i], e)[0] if e else R2.coerce(y[i])
    return R2.matmul(R2.coerce(V), z), R2


# --- gluing ----------------------------------------------------------------------------------


@dataclass
class GlueSpec:
    """Two lattices with equivariant maps ``r_i: L_i/p -> W`` (F-matrices)."""

    L1: Lattice
    L2: Lattice
    r1: np.ndarray
    r2: np.ndarray

    def validate(self, require_surjective: bool = True) -> None:
        F = self.L1.field
        w = self.r1.shape[0]
        if self.r2.shape[0] != w:
            raise ValueError("maps have different targets")
        for L, r in ((self.L1, self.r1), (self.L2, self.r2)):
            if r.shape[1] != L.n:
                raise ValueError("map does not match the lattice rank")
            if require_surjective and w and linalg.rank(F, r) != w:
                raise ValueError("gluing map is not surjective")
        if w:
            # equivariance into a common module: the kernel must be stable
            S = linalg.nullspace(F, np.concatenate([self.r1, F.neg(self.r2)], axis=1))
            if not is_submodule(direct_sum(self.L1.reduction(), self.L2.reduction()), S):
                raise ValueError("maps are not compatible group homomorphisms")


@dataclass
class GlueResult:
    lattice: Lattice
    to_first: np.ndarray  # L/p -> L1/p
    to_second: np.ndarray  # L/p -> L2/p
    spec: GlueSpec


def glue(spec: GlueSpec, name: str = "", require_surjective: bool = True) -> GlueResult:
    """The fibre product ``ker(L1 (+) L2 -> W)`` of two lattices along W."""
    spec.validate(require_surjective)
    L1, L2 = spec.L1, spec.L2
    if L1.group is not L2.group:
        raise ValueError("lattices for different groups")
    N = min(L1.ring.N, L2.ring.N)
    NA = min(L1.ambient.ring.N, L2.ambient.ring.N)
    amb = direct_sum(L1.ambient.to_precision(NA), L2.ambient.to_precision(NA))
    RA = amb.ring
    basis = RA.zeros((amb.n, L1.n + L2.n))
    basis[: L1.ambient.n, : L1.n] = RA.coerce(L1.basis)
    basis[L1.ambient.n :, L1.n :] = RA.coerce(L2.basis)
    module = direct_sum(L1.module.to_precision(N), L2.module.to_precision(N))
    both = Lattice(amb, module, basis, f"{L1.name}+{L2.name}", min(L1.basis_prec, L2.basis_prec, NA))
    F = L1.field
    if spec.r1.shape[0] == 0:
        G = both
        incl = module.ring.eye(both.n)
    else:
        K = linalg.nullspace(F, np.concatenate([spec.r1, F.neg(spec.r2)], axis=1))
        G = sublattice(both, K)
        incl = G.inclusion
    G.name = name or f"glue({L1.name},{L2.name})"
    G.module.name = G.name
    inc = F.coerce(incl)
    return GlueResult(G, inc[: L1.n], inc[L1.n :], spec)


def gluing_lemma_check(res: GlueResult) -> dict:
    """The exact sequence ``0 -> Ker(r1)/p -> L/pL -> L2/pL2 -> 0`` when r1 is onto."""
    from .modrep import is_isomorphic

    spec = res.spec
    F = spec.L1.field
    Lbar = res.lattice.reduction()
    w = spec.r1.shape[0]
    r1_onto = w == 0 or linalg.rank(F, spec.r1) == w
    out = {"r1_surjective": r1_onto}
    if not r1_onto:
        out["status"] = "inapplicable"
        return out
    onto = linalg.rank(F, res.to_second) == spec.L2.n
    Kspan = linalg.nullspace(F, res.to_second)
    K1 = sublattice(spec.L1, linalg.nullspace(F, spec.r1)) if w else spec.L1
    iso = is_isomorphic(submodule(Lbar, Kspan), K1.reduction())
    dims = (Lbar.n, Kspan.shape[1], spec.L2.n)
    out.update({"onto_second": onto, "kernel_iso": iso, "dims": dims, "dims_exact": dims[0] == dims[1] + dims[2]})
    out["status"] = "pass" if onto and iso and dims[0] == dims[1] + dims[2] else "fail"
    return out


# --- reports and K1 -------------------------------------------------------------------------


@dataclass
class LayerReport:
    filtration: FiltrationReport
    extensions: list
    multiplicity_free: bool
    invariant_weights: list

    @property
    def layers(self) -> list[list]:
        return self.filtration.as_lists()


def layer_report(Lbar: GMod, orientation: str = "socle") -> LayerReport:
    """Socle or cosocle filtration, occurring two-layer extensions, and I1-invariant weights."""
    if not Lbar.ring.is_field:
        raise ValueError("layer reports need field coefficients")
    if orientation == "socle":
        filt = socle_filtration(Lbar)
    elif orientation == "cosocle":
        filt = cosocle_filtration(Lbar)
    else:
        raise ValueError("orientation must be 'socle' or 'cosocle'")
    jh = JHMultiset()
    for layer in filt.layers:
        jh.update(layer)
    mult_free = all(v == 1 for v in jh.values())
    exts = sorted(occurring_extensions(Lbar)) if mult_free and len(filt.layers) > 1 else []
    weights = []
    if "I1" in Lbar.group.subsets:
        weights = _torus_weights(Lbar, invariants(Lbar, "I1"))
    return LayerReport(filt, exts, mult_free, weights)


def _torus_weights(M: GMod, S) -> list:
    """Torus eigenvalue labels on a torus-stable subspace."""
    F = M.ring
    torus = set(M.torus_indices)
    mats = []
    for i, A in enumerate(M.mats):
        if i in torus:
            mats.append(linalg.solve(F, S, F.matmul(A, S)))
        else:
            mats.append(F.eye(S.shape[1]))
    return sorted(GMod(M.group, F, mats).weight_basis[1])


def stable_closure(M: GMod, S):
    """Smallest stable subspace containing the columns of S (field coefficients)."""
    F = M.ring
    cur = linalg.colspace(F, S) if S.shape[1] else F.zeros((M.n, 0))
    while True:
        ext = [cur] + [F.matmul(A, cur) for A in M.mats]
        new = linalg.colspace(F, np.concatenate(ext, axis=1)) if cur.shape[1] else cur
        if new.shape[1] == cur.shape[1]:
            return new
        cur = new


def _k1(group) -> list[int]:
    return list(group.subsets.get("K1", []))


def k1_coinvariants(Lbar: GMod) -> GMod:
    """``Lbar / m_{K1} Lbar`` as a module for the whole group."""
    k1 = _k1(Lbar.group)
    if not k1:
        return Lbar
    F = Lbar.ring
    I = F.eye(Lbar.n)
    S = np.concatenate([F.sub(Lbar.mats[i], I) for i in k1], axis=1)
    S = stable_closure(Lbar, S)
    out, _ = quotient(Lbar, S, f"({Lbar.name})_K1")
    return out


def killed_by_m2(Lbar: GMod) -> bool:
    """Is ``(k-1)(k'-1)`` zero for all pairs of K1 generators?"""
    F = Lbar.ring
    I = F.eye(Lbar.n)
    ds = [F.sub(Lbar.mats[i], I) for i in _k1(Lbar.group)]
    return all(not F.matmul(x, y).any() for x in ds for y in ds)


def _span_basis(R: WittRing, G):
    """Canonical generators of the O-span of the columns of G, and its divisor signature."""
    U, exps, _ = linalg.smith(R, G)
    Ui = linalg.inverse(R, U)
    cols, sig = [], []
    for i, e in enumerate(exps):
        if e < R.N:
            cols.append(R.scale(R.p**e, Ui[:, i]))
            sig.append(e)
    B = np.stack(cols, axis=1) if cols else R.zeros((G.shape[0], 0))
    return B, tuple(sorted(sig))


def k1_generation_check(L: Lattice, sub: Lattice) -> bool:
    """Does ``pL`` lie in the O[K]-span of ``(k-1) sub`` over K1?

    Computed in L-coordinates modulo ``p^2``; by Nakayama this decides the
    integral statement.
    """
    X, RX = relative_basis(L, sub)
    if min(RX.N, L.ring.N) < 2:
        raise PrecisionError("the check needs the action modulo p^2")
    R = witt_ring(L.ring.p, L.ring.f, 2)
    C = R.coerce(X)
    mats = [R.coerce(A) for A in L.module.mats]
    I = R.eye(L.n)
    gens = [R.matmul(R.sub(mats[i], I), C) for i in _k1(L.group)]
    if not gens:
        return False
    G, sig = _span_basis(R, np.concatenate(gens, axis=1))
    while True:
        ext = np.concatenate([G] + [R.matmul(A, G) for A in mats], axis=1)
        G2, sig2 = _span_basis(R, ext)
        if sig2 == sig:
            break
        G, sig = G2, sig2
    return linalg.in_column_span(R, G, R.scale(R.p, I))


# --- the verification battery ------------------------------------------------------------
#
# Expected values are closed forms in (p, a, b); the versioned table in
# data/lattice_battery.txt is generated from them and read back by the checks.

_TABLE = "lattice_battery.txt"
TABLE_VERSION = 1


def _weight(p: int):
    from .gl2types import sigma_label

    def s(m: int, n: int):
        return None if m < 0 else sigma_label(m, n, p)

    return s


def _layers(*layers) -> list:
    out = []
    for layer in layers:
        row = sorted(x for x in layer if x is not None)
        if row:
            out.append(row)
    return out


def _pairs(*pairs) -> list:
    return sorted((x, y) for x, y in pairs if x is not None and y is not None)


def battery_expectations(p: int, a: int, b: int) -> dict:
    """Closed-form expected values for the sublattice propositions at (p, a, b)."""
    s = _weight(p)
    tag = f"p={p}/a={a}/b={b}"
    out: dict = {}
    if a in (0, p - 1):
        out[f"prop-reduction-L-2/L-socle/{tag}"] = _layers([s(p - 1, b + 1), s(p - 3, b + 2)])
        out[f"prop-reduction-L-2/Lprime-socle/{tag}"] = _layers([s(p - 1, b + 1)], [s(p - 3, b + 2)])
        out[f"prop-reduction-L-2/Lprime-K1-coinvariants/{tag}"] = _layers([s(p - 3, b + 2)])
        out[f"prop-reduction-L-2/pL-is-kernel/{tag}"] = True
        return out
    A, B = s(a, b + 1), s(a - 2, b + 2)  # constituents of Sym^1 (x) sigma_{a-1,b+1}
    C, D = s(p - 3 - a, a + b + 2), s(p - 1 - a, a + b + 1)  # ... of Sym^1 (x) sigma_{p-2-a,a+b+1}
    out[f"eq-T-mod-p/T-socle/{tag}"] = _layers([s(p - 2 - a, a + b + 1)], [s(a - 1, b + 1)])
    two = _layers([C, D], [A, B])
    out[f"prop-reduction-L/L-socle/{tag}"] = two
    out[f"prop-reduction-L/L-cosocle/{tag}"] = two
    out[f"prop-reduction-L/L-extensions/{tag}"] = _pairs((C, A), (D, B), (D, A))
    dual = _layers([A, B], [C, D])
    out[f"prop-reduction-L/Lprime-socle/{tag}"] = dual
    out[f"prop-reduction-L/Lprime-cosocle/{tag}"] = dual
    out[f"prop-reduction-L/Lprime-extensions/{tag}"] = _pairs((A, C), (B, D), (A, D))
    out[f"eq-T-T-prime/pL-in-Lprime-in-L/{tag}"] = True
    out[f"prop-sublattice-1/L1-cosocle/{tag}"] = _layers([B], [D, C], [A])
    out[f"prop-sublattice-1/L1-K1-coinvariants/{tag}"] = _layers([D, C], [A])
    out[f"prop-sublattice-1/L1-unique/{tag}"] = True
    out[f"prop-sublattice-3/L1prime-cosocle/{tag}"] = _layers([C], [B, A], [D])
    out[f"prop-sublattice-3/L1prime-K1-coinvariants/{tag}"] = _layers([B, A], [D])
    out[f"prop-sublattice-3/L1prime-unique/{tag}"] = True
    if a >= 2:
        out[f"prop-sublattice-2/L2-cosocle/{tag}"] = _layers([C], [A], [D], [B])
        out[f"prop-sublattice-2/L2-K1-coinvariants/{tag}"] = _layers([D], [B])
        out[f"prop-sublattice-2/L2-unique/{tag}"] = True
        out[f"prop-control-K1-coinv/L1/{tag}"] = True
        out[f"prop-control-K1-coinv/L2/{tag}"] = True
    return out


def gluing_expectations(p: int, a: int, b: int) -> dict:
    """Closed-form expected values for the gluing construction (1 <= a <= p-3)."""
    s = _weight(p)
    tag = f"p={p}/a={a}/b={b}"
    top = s(a, b + 1)
    out: dict = {}
    r3 = _layers([s(a - 2, b + 2)], [s(p - 1 - a, a + b + 1), s(p - 3 - a, a + b + 2)], [top])
    if a <= p - 4:
        out[f"glue/W-cosocle/{tag}"] = _layers([s(p - 3 - a, a + b + 2)], [top])
        out[f"glue/R2-cosocle/{tag}"] = _layers([s(p - 5 - a, a + b + 3)], [s(a + 2, b)], [s(p - 3 - a, a + b + 2)], [top])
        out[f"glue/R2prime-socle/{tag}"] = _layers([s(p - 3 - a, a + b + 2), s(p - 5 - a, a + b + 3)], [s(a + 2, b), top])
        out[f"glue/R3prime-cosocle/{tag}"] = _layers([s(p - 3 - a, a + b + 2)], [top, s(a - 2, b + 2)], [s(p - 1 - a, a + b + 1)])
        out[f"glue/KerrR-decomposition/{tag}"] = True
    else:
        out[f"glue/W-cosocle/{tag}"] = _layers([s(0, b)], [s(p - 3, b + 1)])
        out[f"glue/R2-cosocle/{tag}"] = _layers([s(p - 1, b)], [s(p - 3, b + 1)])
        out[f"glue/R2prime-socle/{tag}"] = _layers([s(p - 3, b + 1), s(p - 1, b)])
    out[f"glue/R3-cosocle/{tag}"] = r3
    out[f"glue/R-cosocle/{tag}"] = _layers([top])
    out[f"glue/R-K1-coinvariants-is-W/{tag}"] = True
    out[f"glue/R-sequence/{tag}"] = True
    out[f"glue/Rtilde-cosocle/{tag}"] = _layers([top])
    out[f"glue/Rtilde-killed-by-m2/{tag}"] = True
    out[f"glue/Rtilde-lemma-sequence/{tag}"] = True
    out[f"glue/Rtilde-sequence/{tag}"] = True
    return out


def battery_table_lines(p: int = 5, bs=(0, 1)) -> list[str]:
    """Records ``id <TAB> json`` for every instance at the prime p."""
    import json

    from .report import normalize_payload

    lines = [f"# lattice battery, version {TABLE_VERSION}"]
    for b in bs:
        for a in range(p):
            for k, v in battery_expectations(p, a, b).items():
                lines.append(f"{k}\t{json.dumps(normalize_payload(v))}")
        for a in range(1, p - 2):
            for k, v in gluing_expectations(p, a, b).items():
                lines.append(f"{k}\t{json.dumps(normalize_payload(v))}")
    return lines


def load_battery_table(path=None) -> dict:
    import json
    from importlib import resources

    if path is None:
        text = resources.files("artifact").joinpath("data").joinpath(_TABLE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, payload = line.split("\t", 1)
        out[key] = json.loads(payload)
    return out


def _expected(key: str, closed: dict, table: dict | None):
    if table is not None and key in table:
        return table[key]
    return closed[key]


def _theta_lattice(p: int, exponent: int, N: int) -> Lattice:
    from .gl2types import theta

    T = theta(exponent, p, N)
    return lattice_of(T.lattice, f"Theta({T.params['psi']})")


def _filt(Lbar: GMod, kind: str = "cosocle") -> list:
    return layer_report(Lbar, kind).layers


def section33_computed(p: int, a: int, b: int, N: int = 10) -> dict:
    """Computed values for the sublattice propositions at (p, a, b)."""
    from .gl2types import theta_exponent

    s = _weight(p)
    tag = f"p={p}/a={a}/b={b}"
    V = _theta_lattice(p, theta_exponent(a, b, p), N)
    out: dict = {}
    if a in (0, p - 1):
        L = sym1_lattice(V)
        Lp = sublattice_between(L, s(p - 1, b + 1), "L'")
        out[f"prop-reduction-L-2/L-socle/{tag}"] = _filt(L.reduction(), "socle")
        out[f"prop-reduction-L-2/Lprime-socle/{tag}"] = _filt(Lp.reduction(), "socle")
        out[f"prop-reduction-L-2/Lprime-K1-coinvariants/{tag}"] = _filt(k1_coinvariants(Lp.reduction()), "socle")
        out[f"prop-reduction-L-2/pL-is-kernel/{tag}"] = homothetic(sublattice_between(Lp, s(p - 3, b + 2)), L.scaled(1)) and in_lattice(L.scaled(1), sublattice_between(Lp, s(p - 3, b + 2)))
        return out
    T = lattice_with_cosocle(V, s(a - 1, b + 1), "T")
    Tp = sublattice_between(T, s(a - 1, b + 1), "T'")
    out[f"eq-T-mod-p/T-socle/{tag}"] = _filt(T.reduction(), "socle")
    L, Lp = sym1_lattice(T), sym1_lattice(Tp)
    rep = layer_report(L.reduction(), "socle")
    out[f"prop-reduction-L/L-socle/{tag}"] = rep.layers
    out[f"prop-reduction-L/L-cosocle/{tag}"] = _filt(L.reduction())
    out[f"prop-reduction-L/L-extensions/{tag}"] = rep.extensions
    rep = layer_report(Lp.reduction(), "socle")
    out[f"prop-reduction-L/Lprime-socle/{tag}"] = rep.layers
    out[f"prop-reduction-L/Lprime-cosocle/{tag}"] = _filt(Lp.reduction())
    out[f"prop-reduction-L/Lprime-extensions/{tag}"] = rep.extensions
    out[f"eq-T-T-prime/pL-in-Lprime-in-L/{tag}"] = in_lattice(L, Lp) and in_lattice(Lp, L.scaled(1))
    ambient = sym1_lattice(V)
    L1 = sublattice_between(L, s(a - 2, b + 2), "L1") if a >= 2 else L
    out[f"prop-sublattice-1/L1-cosocle/{tag}"] = _filt(L1.reduction())
    out[f"prop-sublattice-1/L1-K1-coinvariants/{tag}"] = _filt(k1_coinvariants(L1.reduction()))
    out[f"prop-sublattice-1/L1-unique/{tag}"] = homothetic(L1, lattice_with_cosocle(ambient, s(a, b + 1)))
    L1p = sublattice_between(Lp, s(p - 3 - a, a + b + 2), "L1'") if a <= p - 3 else Lp
    out[f"prop-sublattice-3/L1prime-cosocle/{tag}"] = _filt(L1p.reduction())
    out[f"prop-sublattice-3/L1prime-K1-coinvariants/{tag}"] = _filt(k1_coinvariants(L1p.reduction()))
    out[f"prop-sublattice-3/L1prime-unique/{tag}"] = homothetic(L1p, lattice_with_cosocle(ambient, s(p - 1 - a, a + b + 1)))
    if a >= 2:
        from .modrep import smallest_submodule_containing

        Lbar = L.reduction()
        E1, _ = quotient(Lbar, smallest_submodule_containing(Lbar, s(a - 2, b + 2)))
        L2 = sublattice_between(L, E1, "L2")
        out[f"prop-sublattice-2/L2-cosocle/{tag}"] = _filt(L2.reduction())
        out[f"prop-sublattice-2/L2-K1-coinvariants/{tag}"] = _filt(k1_coinvariants(L2.reduction()))
        out[f"prop-sublattice-2/L2-unique/{tag}"] = homothetic(L2, lattice_with_cosocle(ambient, s(a - 2, b + 2)))
        out[f"prop-control-K1-coinv/L1/{tag}"] = k1_generation_check(L, L1)
        out[f"prop-control-K1-coinv/L2/{tag}"] = k1_generation_check(L, L2)
    return out


@dataclass
class GluingData:
    W: GMod
    R1: Lattice
    R2: Lattice
    R3: Lattice
    R2prime: Lattice
    R: GlueResult
    r_R: np.ndarray
    Rtilde: GlueResult
    r3: np.ndarray


def build_gluing(p: int, a: int, b: int, N: int = 10) -> GluingData:
    """The lattices R1, R2, R3 and the glued lattices R and R-tilde."""
    from .gl2types import theta_exponent

    if not 1 <= a <= p - 3:
        raise ValueError("the gluing construction needs 1 <= a <= p-3")
    s = _weight(p)
    top = s(a, b + 1)
    R1 = lattice_with_cosocle(_theta_lattice(p, theta_exponent(a + 1, b, p), N), top, "R1")
    R2 = lattice_with_cosocle(sym1_lattice(_theta_lattice(p, theta_exponent(a + 2, b - 1, p), N)), top, "R2")
    R3 = lattice_with_cosocle(sym1_lattice(_theta_lattice(p, theta_exponent(a, b, p), N)), top, "R3")
    W = R1.reduction()
    F = W.ring
    R2bar, R3bar = R2.reduction(), R3.reduction()
    if a <= p - 4:
        r1 = F.eye(R1.n)
        r2 = find_surjection(R2bar, W)
    else:
        sig = _irr_by_label(R1.group, F)[top].module
        r1 = find_surjection(W, sig)
        r2 = find_surjection(R2bar, sig)
    r3 = find_surjection(R3bar, W)
    if r1 is None or r2 is None or r3 is None:
        raise RuntimeError("gluing hypotheses fail: a required surjection does not exist")
    R2prime = sublattice(R2, linalg.nullspace(F, r2), "R2'")
    R = glue(GlueSpec(R1, R2, r1, r2), "R")
    r_R = R.to_first  # R/p -> R1/p = W
    Rt = glue(GlueSpec(R.lattice, R3, r_R, r3), "R~")
    return GluingData(W, R1, R2, R3, R2prime, R, r_R, Rt, r3)


def gluing_computed(p: int, a: int, b: int, N: int = 10) -> dict:
    from .modrep import cosocle, is_isomorphic

    s = _weight(p)
    tag = f"p={p}/a={a}/b={b}"
    G = build_gluing(p, a, b, N)
    F = G.W.ring
    out: dict = {}
    out[f"glue/W-cosocle/{tag}"] = _filt(G.W)
    out[f"glue/R2-cosocle/{tag}"] = _filt(G.R2.reduction())
    out[f"glue/R2prime-socle/{tag}"] = _filt(G.R2prime.reduction(), "socle")
    out[f"glue/R3-cosocle/{tag}"] = _filt(G.R3.reduction())
    Rbar = G.R.lattice.reduction()
    KerR = sublattice(G.R.lattice, linalg.nullspace(F, G.r_R), "Ker rR")
    if a <= p - 4:
        R3p = sublattice(G.R3, linalg.nullspace(F, G.r3), "R3'")
        out[f"glue/R3prime-cosocle/{tag}"] = _filt(R3p.reduction())
        out[f"glue/KerrR-decomposition/{tag}"] = is_isomorphic(KerR.reduction(), direct_sum(G.R2prime.reduction(), G.W))
    out[f"glue/R-cosocle/{tag}"] = _layers(list(cosocle(Rbar).elements()))
    out[f"glue/R-K1-coinvariants-is-W/{tag}"] = is_isomorphic(k1_coinvariants(Rbar), G.W)
    # 0 -> R2'/p -> R/p -> W -> 0 through r_R
    onto = linalg.rank(F, G.r_R) == G.W.n
    ker = submodule(Rbar, linalg.nullspace(F, G.r_R))
    out[f"glue/R-sequence/{tag}"] = bool(onto and is_isomorphic(ker, G.R2prime.reduction()))
    Rtbar = G.Rtilde.lattice.reduction()
    out[f"glue/Rtilde-cosocle/{tag}"] = _layers(list(cosocle(Rtbar).elements()))
    out[f"glue/Rtilde-killed-by-m2/{tag}"] = killed_by_m2(Rtbar)
    lemma = gluing_lemma_check(G.Rtilde)
    out[f"glue/Rtilde-lemma-sequence/{tag}"] = lemma["status"] == "pass"
    # 0 -> R2'/p + W + sigma_{a-2,b+2} -> R~/p -> V -> 0 with V = R3/p modulo its bottom layer
    R3bar = G.R3.reduction()
    bottom = s(a - 2, b + 2)
    if bottom is not None:
        H = hom_space(_irr_by_label(G.R3.group, F)[bottom].module, R3bar)
        sub_b = H[0]
        Vmod, projV = quotient(R3bar, sub_b)
    else:
        Vmod, projV = R3bar, F.eye(R3bar.n)
    to_V = F.matmul(projV, G.Rtilde.to_second)
    K = submodule(Rtbar, linalg.nullspace(F, to_V))
    parts = [G.R2prime.reduction(), G.W]
    if bottom is not None:
        parts.append(_irr_by_label(G.R3.group, F)[bottom].module)
    target = direct_sum(*parts)
    out[f"glue/Rtilde-sequence/{tag}"] = bool(
        linalg.rank(F, to_V) == Vmod.n and K.n + Vmod.n == Rtbar.n and is_isomorphic(K, target)
    )
    return out


def _checks(closed: dict, computed: dict, params: dict, table, wall: float):
    from .report import compare

    reports = []
    for key in sorted(closed):
        exp = _expected(key, closed, table)
        reports.append(compare(key, params, exp, computed.get(key), wall / max(len(closed), 1)))
    return reports


def section33_checks(p: int, a: int, b: int, N: int = 10, table: dict | None = None) -> list:
    import time

    t0 = time.perf_counter()
    comp = section33_computed(p, a, b, N)
    return _checks(battery_expectations(p, a, b), comp, {"p": p, "a": a, "b": b, "N": N}, table, time.perf_counter() - t0)


def gluing_checks(p: int, a: int, b: int, N: int = 10, table: dict | None = None) -> list:
    import time

    t0 = time.perf_counter()
    comp = gluing_computed(p, a, b, N)
    return _checks(gluing_expectations(p, a, b), comp, {"p": p, "a": a, "b": b, "N": N}, table, time.perf_counter() - t0)
