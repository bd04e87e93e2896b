"""Matrix algebra over the rings of :mod:`artifact.coeffs`.

Matrices are arrays of shape ``(rows, cols, d)``.  Routines named for
fields require precision 1; the others work over the chain ring
``W/p^N`` using valuation pivoting.
"""

from __future__ import annotations

import numpy as np

from .coeffs import WittRing, witt_ring


def _require_field(R: WittRing):
    if not R.is_field:
        raise ValueError("operation needs a field (precision 1)")


def rref(R: WittRing, A):
    """Reduced row echelon form over the residue field; returns (E, pivots)."""
    _require_field(R)
    E = R.coerce(np.array(A, copy=True))
    rows, cols = E.shape[0], E.shape[1]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(E[r:, c].any(axis=-1))[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            E[[r, i]] = E[[i, r]]
        E[r] = R.mul(E[r], R.inv(E[r, c])[None, :])
        factors = E[:, c].copy()
        factors[r] = 0
        mask = factors.any(axis=-1)
        if mask.any():
            E[mask] = R.sub(E[mask], R.mul(factors[mask][:, None, :], E[r][None, :, :]))
        pivots.append(c)
        r += 1
    return E, pivots


def rank(R: WittRing, A) -> int:
    A = np.asarray(A)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.transpose(1, 0, 2)
    return len(rref(R, A)[1])


def nullspace(R: WittRing, A):
    """Basis (as columns) of ``{x : A x = 0}`` over the residue field."""
    A = np.asarray(A)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return R.eye(cols)
    E, piv = rref(R, A)
    free = [c for c in range(cols) if c not in piv]
    N = R.zeros((cols, len(free)))
    for k, fcol in enumerate(free):
        N[fcol, k, 0] = 1
        for i, pc in enumerate(piv):
            N[pc, k] = R.neg(E[i, fcol])
    return N


def colspace(R: WittRing, A):
    """Independent columns spanning the column space (as an echelon basis)."""
    A = np.asarray(A)
    if A.shape[1] == 0:
        return R.zeros((A.shape[0], 0))
    E, piv = rref(R, A.transpose(1, 0, 2))
    return E[: len(piv)].transpose(1, 0, 2).copy()


def complement(R: WittRing, S):
    """Standard basis vectors completing the independent columns S to a basis."""
    n, k = S.shape[0], S.shape[1]
    if k == 0:
        return R.eye(n)
    E, piv = rref(R, S.transpose(1, 0, 2))
    if len(piv) != k:
        raise ValueError("columns are not independent")
    rest = [i for i in range(n) if i not in piv]
    Q = R.zeros((n, len(rest)))
    for j, i in enumerate(rest):
        Q[i, j, 0] = 1
    return Q


def inverse(R: WittRing, A):
    """Inverse of a matrix invertible over the ring (unit pivots)."""
    n = A.shape[0]
    M = np.concatenate([R.coerce(np.array(A, copy=True)), R.eye(n)], axis=1)
    for c in range(n):
        units = np.nonzero(R.is_unit(M[c:, c]))[0]
        if len(units) == 0:
            raise np.linalg.LinAlgError("matrix is not invertible over the ring")
        i = c + units[0]
        if i != c:
            M[[c, i]] = M[[i, c]]
        M[c] = R.mul(M[c], R.inv(M[c, c])[None, :])
        factors = M[:, c].copy()
        factors[c] = 0
        mask = factors.any(axis=-1)
        if mask.any():
            M[mask] = R.sub(M[mask], R.mul(factors[mask][:, None, :], M[c][None, :, :]))
    return M[:, n:].copy()


def solve(R: WittRing, A, B):
    """Solve ``A X = B`` over the residue field; returns X or None.

    The particular solution sets free variables to zero.
    """
    _require_field(R)
    A, B = np.asarray(A), np.asarray(B)
    squeeze = B.ndim == 2
    if squeeze:
        B = B[:, None, :]
    aug = np.concatenate([A, B], axis=1)
    E, piv = rref(R, aug)
    n = A.shape[1]
    if any(c >= n for c in piv):
        return None
    X = R.zeros((n, B.shape[1]))
    for i, c in enumerate(piv):
        X[c] = E[i, n:]
    return X[:, 0] if squeeze else X


def smith(R: WittRing, A):
    """Smith form over ``W/p^N``: returns (U, exps, V) with ``U A V = diag(p^e)``.

    Zero diagonal entries get exponent N.  U and V are invertible.
    """
    M = R.coerce(np.array(A, copy=True))
    rows, cols = M.shape[0], M.shape[1]
    U, V = R.eye(rows), R.eye(cols)
    exps = []
    for t in range(min(rows, cols)):
        vals = R.val(M[t:, t:])
        v = int(vals.min()) if vals.size else R.N
        if v >= R.N:
            exps.extend([R.N] * (min(rows, cols) - t))
            break
        i, j = np.argwhere(vals == v)[0]
        i, j = i + t, j + t
        if i != t:
            M[[t, i]] = M[[i, t]]
            U[[t, i]] = U[[i, t]]
        if j != t:
            M[:, [t, j]] = M[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        unit = R.div_p(M[t, t], v)[0] if v else M[t, t]
        unit = R.coerce(unit)
        inv_unit = R.inv(unit)
        M[t] = R.mul(M[t], inv_unit[None, :])
        U[t] = R.mul(U[t], inv_unit[None, :])
        # now M[t, t] = p^v; clear column t below and row t to the right
        for r in range(rows):
            if r != t and M[r, t].any():
                c = R.coerce(R.div_p(M[r, t], v)[0]) if v else M[r, t].copy()
                M[r] = R.sub(M[r], R.mul(c[None, :], M[t]))
                U[r] = R.sub(U[r], R.mul(c[None, :], U[t]))
        for c_ in range(cols):
            if c_ != t and M[t, c_].any():
                c = R.coerce(R.div_p(M[t, c_], v)[0]) if v else M[t, c_].copy()
                M[:, c_] = R.sub(M[:, c_], R.mul(c[None, :], M[:, t]))
                V[:, c_] = R.sub(V[:, c_], R.mul(c[None, :], V[:, t]))
        exps.append(v)
    return U, exps, V


def in_column_span(R: WittRing, G, x) -> bool:
    """Is every column of x in the O-span of the columns of G?"""
    U, exps, _ = smith(R, G)
    y = R.matmul(U, x)
    n = G.shape[0]
    for i in range(n):
        e = exps[i] if i < len(exps) else R.N
        if e >= R.N:
            if y[i].any():
                return False
        elif np.any(R.val(y[i]) < e):
            return False
    return True


def saturate_columns(R: WittRing, A):
    """Basis of the saturation of the column span of A.

    Returns ``(S, pivots, loss)`` where S has unit entries at the pivot rows
    (in triangular position) and ``loss`` is the number of p-adic digits lost;
    S is returned in the ring of precision ``N - loss``.
    """
    M = R.coerce(np.array(A, copy=True))
    n, m = M.shape[0], M.shape[1]
    basis, pivots, vs = [], [], []
    active_rows = list(range(n))
    active_cols = list(range(m))
    while active_cols and active_rows:
        sub = M[np.ix_(active_rows, active_cols)]
        vals = R.val(sub)
        v = int(vals.min())
        if v >= R.N:
            break
        ii, jj = np.argwhere(vals == v)[0]
        i, j = active_rows[ii], active_cols[jj]
        col = M[:, j].copy()
        if v:
            col_div, _ = R.div_p(col, v)
            col = R.coerce(col_div)  # low digits only are meaningful
        basis.append(col)
        vs.append(v)
        pivots.append(i)
        inv = R.inv(col[i])
        for k in active_cols:
            if k != j and M[i, k].any():
                c = R.mul(M[i, k], inv)
                M[:, k] = R.sub(M[:, k], R.mul(c[None, :], col))
        active_cols.remove(j)
        active_rows.remove(i)
    loss = max(vs) if vs else 0
    R2 = witt_ring(R.p, R.f, R.N - loss)
    S = R2.zeros((n, len(basis)))
    for k, b in enumerate(basis):
        S[:, k] = R2.coerce(b)
    return S, pivots, loss


# --- plain integer matrices over F_p (no coordinate axis) -----------------


def rref_mod(A, p: int):
    """Row echelon form of an integer matrix over F_p; returns (E, pivots)."""
    E = np.array(A, dtype=np.int64, copy=True) % p
    rows, cols = E.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(E[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            E[[r, i]] = E[[i, r]]
        E[r] = (E[r] * pow(int(E[r, c]), -1, p)) % p
        fac = E[:, c].copy()
        fac[r] = 0
        nzr = np.nonzero(fac)[0]
        if len(nzr):
            E[nzr] = (E[nzr] - fac[nzr, None] * E[r][None, :]) % p
        pivots.append(c)
        r += 1
    return E, pivots


def rank_mod(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref_mod(A, p)[1])


def nullspace_mod(A, p: int):
    """Columns spanning ``{x : A x = 0 mod p}``."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    E, piv = rref_mod(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        N[fc, k] = 1
        for i, pc in enumerate(piv):
            N[pc, k] = (-E[i, fc]) % p
    return N


def independent_rows_mod(A, p: int) -> list[int]:
    """Indices of rows forming a basis of the row space (first ones win)."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[1] == 0:
        return []
    return rref_mod(A.T, p)[1]


def solve_mod(A, B, p: int):
    """X with ``A X = B`` mod p for A of full column rank (B in its span)."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    rows = independent_rows_mod(A, p)
    if len(rows) != A.shape[1]:
        raise ValueError("matrix does not have full column rank")
    Ai = _inverse_mod(A[rows], p)
    X = (Ai @ B[rows]) % p
    if np.any((A @ X - B) % p):
        raise ValueError("right-hand side is not in the column span")
    return X


def _inverse_mod(A, p: int):
    n = A.shape[0]
    E, piv = rref_mod(np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return E[:, n:]
