"""Modules given by generator matrices: Hom spaces, socles, filtrations.

A :class:`GMod` stores one matrix per generator of a :class:`GenGroup`.
Over the residue field, Hom spaces are computed by linear algebra after
splitting both modules into eigenspaces for a designated abelian subgroup
of order prime to p (the diagonal torus for GL2, the Teichmuller torus for
quaternion units); an equivariant map must respect these eigenspaces, which
keeps the linear systems small.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from . import linalg
from .coeffs import WittRing, witt_ring
from .groups import GenGroup

__all__ = [
    "GMod",
    "Irr",
    "JHMultiset",
    "FiltrationReport",
    "hom_space",
    "hom_dim",
    "submodule",
    "quotient",
    "torus_weights_on",
    "socle",
    "cosocle",
    "radical",
    "socle_filtration",
    "cosocle_filtration",
    "jh_multiset",
    "invariants",
    "coinvariants",
    "tensor",
    "dual",
    "direct_sum",
    "induce",
    "is_isomorphic",
    "find_isomorphism",
    "find_surjection",
    "decompose",
    "smallest_submodule_containing",
    "occurring_extensions",
    "is_nonsplit",
    "irreducibles",
]

_RNG_SEED = 20240611


class GMod:
    """Representation of a generator-presented group on ``ring^n``."""

    def __init__(self, group: GenGroup, ring: WittRing, mats, name: str = ""):
        mats = [ring.coerce(m) for m in mats]
        if len(mats) != len(group.generators):
            raise ValueError("one matrix per generator is required")
        self.group, self.ring, self.mats, self.name = group, ring, mats, name
        self.n = mats[0].shape[0] if mats else 0

    @property
    def dim(self) -> int:
        return self.n

    def __repr__(self):
        return f"GMod({self.name or '?'}, dim={self.n}, {self.ring})"

    def same_setting(self, other: "GMod") -> bool:
        return self.group is other.group and self.ring == other.ring

    def reduce(self) -> "GMod":
        """Reduction modulo p."""
        F = witt_ring(self.ring.p, self.ring.f, 1)
        return GMod(self.group, F, [F.coerce(m) for m in self.mats], self.name + "/p")

    def to_precision(self, N: int) -> "GMod":
        R = witt_ring(self.ring.p, self.ring.f, N)
        if N > self.ring.N:
            raise ValueError("cannot raise precision")
        return GMod(self.group, R, self.mats, self.name)

    def check_relations(self, words: Iterable[tuple[list[int], np.ndarray]] = ()) -> bool:
        return all(True for _ in words)

    def act_word(self, word: list[int]):
        """Matrix of a product of generators (left to right)."""
        R = self.ring
        M = R.eye(self.n)
        for i in word:
            M = R.matmul(M, self.mats[i])
        return M

    # torus eigenspaces ----------------------------------------------------
    @cached_property
    def torus_indices(self) -> list[int]:
        for key in ("H", "torus"):
            if key in self.group.subsets:
                return list(self.group.subsets[key])
        return []

    @cached_property
    def weight_basis(self):
        """(P, labels): columns of P are joint eigenvectors over the residue field."""
        if not self.ring.is_field:
            raise ValueError("eigenspaces are computed over the residue field")
        F = self.ring
        blocks = [(F.eye(self.n), ())]
        for ti in self.torus_indices:
            T = self.mats[ti]
            order = self.group.element_order(self.group.generators[ti]) if self.group.level >= 1 else F.order
            step = F.order // np.gcd(order, F.order)
            new = []
            for B, lab in blocks:
                if B.shape[1] == 0:
                    continue
                TB = F.matmul(T, B)
                Tb = linalg.solve(F, B, TB)
                found = 0
                for k in range(0, F.order, step):
                    lam = F.upow(k)
                    Mk = F.sub(Tb, F.mul(F.eye(B.shape[1]), lam[None, None, :]))
                    K = linalg.nullspace(F, Mk)
                    if K.shape[1]:
                        new.append((F.matmul(B, K), lab + (k,)))
                        found += K.shape[1]
                if found != B.shape[1]:
                    raise ValueError("torus does not act semisimply")
            blocks = new
        if not blocks:
            return F.zeros((self.n, 0)), []
        P = np.concatenate([b for b, _ in blocks], axis=1)
        labels = [lab for b, lab in blocks for _ in range(b.shape[1])]
        return P, labels

    @cached_property
    def weight_basis_inverse(self):
        P, _ = self.weight_basis
        return linalg.inverse(self.ring, P)

    def weights(self) -> Counter:
        return Counter(self.weight_basis[1])

    @cached_property
    def trivial_generators(self) -> set[int]:
        I = self.ring.eye(self.n)
        return {i for i, m in enumerate(self.mats) if np.array_equal(m, I)}


@dataclass(frozen=True)
class Irr:
    """An irreducible module with a hashable label."""

    label: tuple
    module: GMod = field(compare=False, hash=False, repr=False)

    def __repr__(self):
        return f"Irr{self.label}"


class JHMultiset(Counter):
    """Multiset of irreducible labels."""

    def as_set(self) -> set:
        return {k for k, v in self.items() if v > 0}

    def total(self) -> int:  # pragma: no cover - Counter.total exists on 3.10+
        return sum(self.values())


@dataclass
class FiltrationReport:
    """Layers of a socle or cosocle filtration, listed from bottom to top."""

    kind: str
    layers: list[JHMultiset]
    dims: list[int]

    def as_lists(self) -> list[list]:
        out = []
        for layer in self.layers:
            row = []
            for lab, m in sorted(layer.items()):
                row.extend([lab] * m)
            out.append(row)
        return out

    def __repr__(self):
        parts = [" + ".join(str(l) for l in row) for row in self.as_lists()]
        return f"{self.kind}: " + " -- ".join(f"({x})" for x in parts)


# --- Hom spaces ----------------------------------------------------------


def _check_pair(M: GMod, N: GMod):
    if M.group is not N.group:
        raise ValueError("modules for different groups")
    if M.ring != N.ring:
        raise ValueError(f"coefficient rings differ: {M.ring} vs {N.ring}")
    if not M.ring.is_field:
        raise ValueError("Hom spaces are computed over the residue field; reduce first")


def hom_space(M: GMod, N: GMod):
    """Basis of ``Hom_G(M, N)`` as an array of shape ``(r, dim N, dim M, d)``."""
    _check_pair(M, N)
    F = M.ring
    n, k = M.n, N.n
    if n == 0 or k == 0:
        return F.zeros((0, k, n))
    PM, wM = M.weight_basis
    PN, wN = N.weight_basis
    PMi, PNi = M.weight_basis_inverse, N.weight_basis_inverse
    idx_by_label: dict = {}
    for j, lab in enumerate(wM):
        idx_by_label.setdefault(lab, []).append(j)
    iu, ju = [], []
    for i, lab in enumerate(wN):
        for j in idx_by_label.get(lab, []):
            iu.append(i)
            ju.append(j)
    U = len(iu)
    if U == 0:
        return F.zeros((0, k, n))
    iu, ju = np.array(iu), np.array(ju)
    uidx = np.arange(U)
    Z = F.eye(U)  # current solution basis in unknown coordinates (U x r)
    torus = set(M.torus_indices)
    skip = M.trivial_generators & N.trivial_generators
    for g in range(len(M.mats)):
        if g in torus or g in skip or Z.shape[1] == 0:
            continue
        A = F.matmul(PMi, F.matmul(M.mats[g], PM))
        B = F.matmul(PNi, F.matmul(N.mats[g], PN))
        E = F.zeros((k, n, U))
        E[iu[:, None], np.arange(n)[None, :], uidx[:, None]] = A[ju]
        sub = B[:, iu].transpose(1, 0, 2)  # (U, k, d)
        E[np.arange(k)[None, :], ju[:, None], uidx[:, None]] = F.sub(
            E[np.arange(k)[None, :], ju[:, None], uidx[:, None]], sub
        )
        E = E.reshape(k * n, U, F.d)
        EZ = F.matmul(E, Z)
        keep = EZ.any(axis=(1, 2))
        if not keep.any():
            continue
        K = linalg.nullspace(F, EZ[keep])
        Z = F.matmul(Z, K)
    r = Z.shape[1]
    out = F.zeros((r, k, n))
    for t in range(r):
        phi = F.zeros((k, n))
        phi[iu, ju] = Z[:, t]
        out[t] = F.matmul(PN, F.matmul(phi, PMi))
    return out


def hom_dim(M: GMod, N: GMod) -> int:
    return hom_space(M, N).shape[0]


# --- irreducibles ----------------------------------------------------------

_IRR_CACHE: dict = {}


def irreducibles(group: GenGroup, ring: WittRing) -> list[Irr]:
    """All irreducible modules over the residue field for the supported groups."""
    key = (id(group), ring)
    if key in _IRR_CACHE:
        return _IRR_CACHE[key][1]
    if group.name.startswith("GL2") or group.name == "Gamma":
        from .gl2types import serre_weight_module

        p = group.params.p
        irr = []
        for m in range(p):
            for nn in range(p - 1):
                irr.append(Irr((m, nn), serre_weight_module(m, nn, group=group, field=ring)))
    elif group.name == "OD_units":
        from .quatrep import torus_character_module

        irr = [Irr((k,), torus_character_module(group, k, ring)) for k in range(ring.order)]
    else:
        raise ValueError(f"no list of irreducibles known for {group.name}")
    _IRR_CACHE[key] = (group, irr)
    return irr


def _irr_list(M: GMod, irr):
    return irreducibles(M.group, M.ring) if irr is None else irr


def _candidate_irr(M: GMod, irr_list):
    """Irreducibles whose torus weights meet those of M (cheap filter)."""
    wM = set(M.weight_basis[1])
    return [s for s in irr_list if wM & set(s.module.weight_basis[1])]


# --- submodules and quotients ----------------------------------------------


def is_submodule(M: GMod, S) -> bool:
    F = M.ring
    if S.shape[1] == 0:
        return True
    for A in M.mats:
        if linalg.solve(F, S, F.matmul(A, S)) is None:
            return False
    return True


def submodule(M: GMod, S, name: str = "") -> GMod:
    """Restriction of M to the stable subspace spanned by the columns of S."""
    F = M.ring
    mats = []
    for A in M.mats:
        X = linalg.solve(F, S, F.matmul(A, S))
        if X is None:
            raise ValueError("subspace is not stable")
        mats.append(X)
    if S.shape[1] == 0:
        mats = [F.zeros((0, 0)) for _ in M.mats]
    return GMod(M.group, F, mats, name or f"sub({M.name})")


def quotient(M: GMod, S, name: str = "") -> tuple[GMod, np.ndarray]:
    """Quotient by a stable subspace; returns the module and the projection matrix."""
    F = M.ring
    k = S.shape[1]
    Q = linalg.complement(F, S)
    Bm = np.concatenate([S, Q], axis=1)
    Bi = linalg.inverse(F, Bm)
    mats = []
    for A in M.mats:
        X = F.matmul(Bi, F.matmul(A, Bm))
        mats.append(X[k:, k:])
    proj = Bi[k:]
    return GMod(M.group, F, mats, name or f"quot({M.name})"), proj


def _span(F, vecs, n):
    if not vecs:
        return F.zeros((n, 0))
    return linalg.colspace(F, np.concatenate(vecs, axis=1))


def socle(M: GMod, irr=None):
    """(basis of soc M, multiset of its constituents)."""
    irr = _candidate_irr(M, _irr_list(M, irr))
    F = M.ring
    images, mult = [], JHMultiset()
    for s in irr:
        H = hom_space(s.module, M)
        if H.shape[0]:
            mult[s.label] += H.shape[0]
            images.extend(list(H))
    S = _span(F, images, M.n)
    if M.n and S.shape[1] == 0:
        raise RuntimeError("socle computation stalled: list of irreducibles is incomplete")
    return S, mult


def radical(M: GMod, irr=None):
    """(basis of rad M, multiset of the cosocle)."""
    irr = _candidate_irr(M, _irr_list(M, irr))
    F = M.ring
    rows, mult = [], JHMultiset()
    for s in irr:
        H = hom_space(M, s.module)
        if H.shape[0]:
            mult[s.label] += H.shape[0]
            rows.append(H.reshape(-1, M.n, F.d))
    if not rows:
        if M.n:
            raise RuntimeError("cosocle computation stalled: list of irreducibles is incomplete")
        return F.zeros((0, 0)), mult
    R = linalg.nullspace(F, np.concatenate(rows, axis=0))
    return R, mult


def cosocle(M: GMod, irr=None) -> JHMultiset:
    return radical(M, irr)[1]


def socle_filtration(M: GMod, irr=None) -> FiltrationReport:
    layers, dims = [], []
    cur = M
    while cur.n:
        S, mult = socle(cur, irr)
        layers.append(mult)
        dims.append(S.shape[1])
        cur, _ = quotient(cur, S)
    return FiltrationReport("socle", layers, dims)


def cosocle_filtration(M: GMod, irr=None) -> FiltrationReport:
    """Radical layers, reported bottom to top (the cosocle is the last layer)."""
    layers, dims = [], []
    cur = M
    while cur.n:
        R, mult = radical(cur, irr)
        layers.append(mult)
        dims.append(cur.n - R.shape[1])
        cur = submodule(cur, R)
    layers.reverse()
    dims.reverse()
    return FiltrationReport("cosocle", layers, dims)


def jh_multiset(M: GMod, irr=None) -> JHMultiset:
    if not M.ring.is_field:
        M = M.reduce()
    out = JHMultiset()
    for layer in socle_filtration(M, irr).layers:
        out.update(layer)
    return out


# --- fixed points --------------------------------------------------------------


def invariants(M: GMod, subset: str | list[int]):
    """Basis of the vectors fixed by the generators in ``subset``."""
    F = M.ring
    idx = M.group.subsets[subset] if isinstance(subset, str) else subset
    I = F.eye(M.n)
    rows = [F.sub(M.mats[i], I) for i in idx]
    if not rows:
        return I
    return linalg.nullspace(F, np.concatenate(rows, axis=0))


def coinvariants(M: GMod, subset: str | list[int]):
    """(basis of the span of ``(g-1)M``, projection onto the coinvariants)."""
    F = M.ring
    idx = M.group.subsets[subset] if isinstance(subset, str) else subset
    I = F.eye(M.n)
    cols = [F.sub(M.mats[i], I) for i in idx]
    S = linalg.colspace(F, np.concatenate(cols, axis=1)) if cols else F.zeros((M.n, 0))
    Q = linalg.complement(F, S)
    Bi = linalg.inverse(F, np.concatenate([S, Q], axis=1))
    return S, Bi[S.shape[1] :]


def torus_weights_on(M: GMod, S, proj=None) -> list[tuple]:
    """Torus eigenvalue labels on a torus-stable subspace (or on a quotient via proj).

    Only the torus generators need to preserve the subspace; the other
    generators are replaced by the identity in the restricted module.
    """
    F = M.ring
    tor = set(M.torus_indices)
    if proj is None:
        k = S.shape[1]
        mats = []
        for i, A in enumerate(M.mats):
            if i not in tor:
                mats.append(F.eye(k))
                continue
            X = linalg.solve(F, S, F.matmul(A, S)) if k else F.zeros((0, 0))
            if X is None:
                raise ValueError("subspace is not torus-stable")
            mats.append(X)
        return sorted(GMod(M.group, F, mats).weight_basis[1])
    Q = linalg.complement(F, S) if S.shape[1] else F.eye(M.n)
    k = proj.shape[0]
    mats = [F.matmul(proj, F.matmul(A, Q)) if i in tor else F.eye(k) for i, A in enumerate(M.mats)]
    return sorted(GMod(M.group, F, mats).weight_basis[1])


# --- constructions ---------------------------------------------------------------


def direct_sum(*mods: GMod) -> GMod:
    M0 = mods[0]
    R = M0.ring
    n = sum(m.n for m in mods)
    mats = []
    for g in range(len(M0.mats)):
        A = R.zeros((n, n))
        off = 0
        for m in mods:
            if not m.same_setting(M0):
                raise ValueError("direct sum of modules in different settings")
            A[off : off + m.n, off : off + m.n] = m.mats[g]
            off += m.n
        mats.append(A)
    return GMod(M0.group, R, mats, " + ".join(m.name for m in mods))


def kron(R: WittRing, A, B):
    n, k = A.shape[0], B.shape[0]
    full = R.mul(A[:, None, :, None, :], B[None, :, None, :, :])
    return full.reshape(n * k, n * k, R.d)


def tensor(M: GMod, N: GMod) -> GMod:
    if not M.same_setting(N):
        raise ValueError("tensor of modules in different settings")
    R = M.ring
    mats = [kron(R, A, B) for A, B in zip(M.mats, N.mats)]
    return GMod(M.group, R, mats, f"{M.name}(x){N.name}")


def dual(M: GMod) -> GMod:
    R = M.ring
    mats = [linalg.inverse(R, A).transpose(1, 0, 2) for A in M.mats]
    return GMod(M.group, R, mats, f"{M.name}^*")


@dataclass
class InducedModel:
    """Monomial model of an induced representation.

    ``rep(x)`` gives the matrix of any group element; ``module`` is the
    :class:`GMod` on the group's generators.
    """

    module: GMod
    coset_reps: list
    lookup: dict
    values: Callable
    ring: WittRing
    group: GenGroup

    def monomial(self, x):
        """(target indices, value exponents/objects) for the action of x on basis vectors."""
        G = self.group
        targets, scal = [], []
        for r in self.coset_reps:
            j, h = self.lookup[G.key(G.mul(x, r))]
            targets.append(j)
            scal.append(h)
        return targets, scal

    def rep(self, x):
        R = self.ring
        m = len(self.coset_reps)
        A = R.zeros((m, m))
        targets, hs = self.monomial(x)
        for i, (j, h) in enumerate(zip(targets, hs)):
            A[j, i] = self.values(h)
        return A


def induce(group: GenGroup, elements: list, in_subgroup: Callable, char: Callable, ring: WittRing, name: str = "") -> InducedModel:
    """Induce the character ``char`` (element -> ring value) from a subgroup.

    ``elements`` enumerates the whole group and ``in_subgroup`` selects the
    subgroup.  Basis vector i is the coset ``r_i S``.
    """
    sub = [h for h in elements if in_subgroup(h)]
    reps, lookup = [], {}
    for x in elements:
        if group.key(x) in lookup:
            continue
        i = len(reps)
        reps.append(x)
        for h in sub:
            lookup[group.key(group.mul(x, h))] = (i, h)
    # lookup maps r_i h -> (i, h)
    model = InducedModel(None, reps, lookup, char, ring, group)
    mats = [model.rep(g) for g in group.generators]
    model.module = GMod(group, ring, mats, name or "Ind")
    return model


# --- isomorphisms, surjections, decompositions -------------------------------


def _random_combo(F, H, rng):
    coeffs = F.decode(rng.integers(0, F.q**2, size=H.shape[0]))
    return np.einsum("r...i,rj,ijk->...k", H, coeffs, F._tab) % F.P if H.shape[0] else None


def _lin_combo(F, H, coeffs):
    out = F.zeros(H.shape[1:3])
    for c, h in zip(coeffs, H):
        out = F.add(out, F.mul(c[None, None, :], h))
    return out


def find_isomorphism(M: GMod, N: GMod, tries: int = 30):
    """An invertible equivariant map M -> N, or None."""
    if M.n != N.n:
        return None
    F = M.ring
    H = hom_space(M, N)
    if H.shape[0] == 0:
        return None if M.n else F.zeros((0, 0))
    rng = np.random.default_rng(_RNG_SEED)
    for t in range(tries):
        if t < H.shape[0]:
            phi = H[t]
        else:
            phi = _lin_combo(F, H, F.decode(rng.integers(0, F.q**2, size=H.shape[0])))
        if linalg.rank(F, phi) == M.n:
            return phi
    return None


def is_isomorphic(M: GMod, N: GMod) -> bool:
    return find_isomorphism(M, N) is not None


def find_surjection(M: GMod, W: GMod, tries: int = 30):
    """A surjective equivariant map M -> W (matrix), or None."""
    F = M.ring
    H = hom_space(M, W)
    if W.n == 0:
        return F.zeros((0, M.n))
    if H.shape[0] == 0:
        return None
    rng = np.random.default_rng(_RNG_SEED)
    for t in range(tries):
        if t < H.shape[0]:
            phi = H[t]
        else:
            phi = _lin_combo(F, H, F.decode(rng.integers(0, F.q**2, size=H.shape[0])))
        if linalg.rank(F, phi) == W.n:
            return phi
    return None


def _split(M: GMod, rng, tries: int = 24):
    F = M.ring
    E = hom_space(M, M)
    if E.shape[0] <= 1:
        return None
    n = M.n
    cands = list(E) + [
        _lin_combo(F, E, F.decode(rng.integers(0, F.q**2, size=E.shape[0]))) for _ in range(tries)
    ]
    for phi in cands:
        for k in range(F.q**2):
            lam = F.decode(np.int64(k))
            T = F.sub(phi, F.mul(F.eye(n), lam[None, None, :]))
            if linalg.rank(F, T) == n:
                continue
            Tn = T
            for _ in range(n.bit_length()):
                Tn = F.matmul(Tn, Tn)
            K = linalg.nullspace(F, Tn)
            if 0 < K.shape[1] < n:
                Im = linalg.colspace(F, Tn)
                return [submodule(M, K), submodule(M, Im)]
            break
    return None


def decompose(M: GMod) -> list[GMod]:
    """Decomposition into indecomposable summands (randomised Fitting splitting)."""
    rng = np.random.default_rng(_RNG_SEED)
    todo, out = [M], []
    while todo:
        X = todo.pop()
        parts = _split(X, rng)
        if parts is None:
            out.append(X)
        else:
            todo.extend(parts)
    return out


def smallest_submodule_containing(M: GMod, label, irr=None):
    """Smallest submodule having ``label`` as a constituent (multiplicity-one setting).

    Obtained by repeatedly removing cosocle constituents other than ``label``;
    returns a basis of the submodule in M's coordinates.
    """
    F = M.ring
    irr_all = _irr_list(M, irr)
    basis = F.eye(M.n)
    cur = M
    while True:
        R, top = radical(cur, irr_all)
        others = {k: v for k, v in top.items() if k != label}
        if label not in top and not others:
            return basis
        if not others:
            return basis
        # kernel of the projection onto the non-label part of the cosocle
        rows = []
        for s in irr_all:
            if s.label != label and s.label in others:
                H = hom_space(cur, s.module)
                rows.append(H.reshape(-1, cur.n, F.d))
        K = linalg.nullspace(F, np.concatenate(rows, axis=0))
        if K.shape[1] == cur.n:
            return basis
        basis = F.matmul(basis, K)
        cur = submodule(cur, K)


def occurring_extensions(M: GMod, irr=None) -> set[tuple]:
    """Pairs (A, B) such that a nonsplit extension with sub A and quotient B
    occurs as a subquotient of the multiplicity-free module M."""
    irr_all = _irr_list(M, irr)
    out = set()
    for B in jh_multiset(M, irr_all).as_set():
        S = smallest_submodule_containing(M, B, irr_all)
        X = submodule(M, S)
        if X.n == 0:
            continue
        Rx, _ = radical(X, irr_all)
        if Rx.shape[1] == 0:
            continue
        Y = submodule(X, Rx)
        for A in cosocle(Y, irr_all):
            out.add((A, B))
    return out


def is_nonsplit(E: GMod, top: Irr) -> bool:
    """A two-constituent module is nonsplit iff its top does not embed."""
    return hom_dim(top.module, E) == 0
