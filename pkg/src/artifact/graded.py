"""Hilbert series of graded algebras and monomial quotients.

Series are kept in factored form ``numerator / prod (1 - t^k)`` next to
their expansion up to a degree bound.  The enveloping algebra of the
graded Lie algebra has the Hilbert series of a polynomial ring in
``e_j, f_j`` (degree 1) and ``h_j`` (degree 2), so all quotients in scope
are handled as monomial quotients of that polynomial ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

__all__ = [
    "HilbertSeries",
    "MonomialQuotient",
    "pbw_hilbert",
    "quotient_hilbert",
    "quotient_by_regular_sequence",
    "brute_force_hilbert",
    "gk_dim",
    "pole_order",
    "gr_variables",
    "gr_quotient",
    "id_quotient",
    "criterion_bound",
]


def _polymul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _expand(num: list[int], den: tuple[int, ...], maxdeg: int) -> tuple[int, ...]:
    c = [0] * (maxdeg + 1)
    for i, x in enumerate(num[: maxdeg + 1]):
        c[i] = x
    for k in den:
        # multiply by 1/(1 - t^k) = 1 + t^k + t^{2k} + ...
        for d in range(k, maxdeg + 1):
            c[d] += c[d - k]
    return tuple(c)


def _trim(num: list[int]) -> tuple[int, ...]:
    num = list(num)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num) if num else (0,)


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / prod_k (1 - t^k)`` with coefficients up to ``maxdeg``."""

    coeffs: tuple[int, ...]
    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    @classmethod
    def from_factors(cls, numerator, denominator, maxdeg: int) -> "HilbertSeries":
        num = _trim(numerator)
        den = tuple(sorted(denominator))
        return cls(_expand(list(num), den, maxdeg), num, den)

    @property
    def maxdeg(self) -> int:
        return len(self.coeffs) - 1

    def check(self) -> bool:
        return _expand(list(self.numerator), self.denominator, self.maxdeg) == self.coeffs

    def times(self, poly) -> "HilbertSeries":
        return HilbertSeries.from_factors(_polymul(list(self.numerator), list(poly)), self.denominator, self.maxdeg)

    def truncate(self, maxdeg: int) -> "HilbertSeries":
        return HilbertSeries.from_factors(self.numerator, self.denominator, maxdeg)

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d]


def pole_order(H: HilbertSeries) -> int:
    """Order of the pole at ``t = 1``: the growth degree plus one (0 for finite series)."""
    num = list(H.numerator)
    if not any(num):
        return 0
    m = 0
    while sum(num) == 0:
        # divide by (1 - t)
        q, acc = [], 0
        for x in num[:-1]:
            acc += x
            q.append(acc)
        num, m = q, m + 1
    return max(len(H.denominator) - m, 0)


def pbw_hilbert(f: int, maxdeg: int) -> HilbertSeries:
    """Series of ``prod_{j<f} 1 / ((1-t)^2 (1-t^2))``."""
    if f < 1:
        raise ValueError("f must be positive")
    return HilbertSeries.from_factors([1], (1, 1, 2) * f, maxdeg)


def quotient_by_regular_sequence(H: HilbertSeries, degrees) -> HilbertSeries:
    """Series after dividing by a regular sequence of homogeneous central elements."""
    out = H
    for d in degrees:
        out = out.times([1] + [0] * (d - 1) + [-1])
    return out


@dataclass(frozen=True)
class MonomialQuotient:
    """``F[variables] / (monomials)``; generators are exponent vectors."""

    variables: tuple[str, ...]
    gens: tuple[tuple[int, ...], ...] = ()
    degrees: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "gens", tuple(tuple(g) for g in self.gens))
        n = len(self.variables)
        if self.degrees is None:
            object.__setattr__(self, "degrees", (1,) * n)
        if len(self.degrees) != n or any(len(g) != n for g in self.gens):
            raise ValueError("exponent vectors must match the variable list")
        if any(e < 0 for g in self.gens for e in g) or any(d < 1 for d in self.degrees):
            raise ValueError("exponents must be non-negative and degrees positive")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self, mono) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def contains(self, mono) -> bool:
        """Is the monomial in the ideal?"""
        return any(all(m >= g for m, g in zip(mono, gen)) for gen in self.gens)

    def monomial(self, **exps) -> tuple[int, ...]:
        return tuple(exps.get(v, 0) for v in self.variables)

    def describe(self) -> str:
        def word(g):
            parts = []
            for v, e in zip(self.variables, g):
                if e:
                    parts.append(v if e == 1 else f"{v}^{e}")
            return "".join(parts) or "1"

        return "(" + ", ".join(word(g) for g in self.gens) + ")"


def quotient_hilbert(Q: MonomialQuotient, maxdeg: int) -> HilbertSeries:
    """Hilbert series by inclusion-exclusion over subsets of generators."""
    num = [1]
    for k in range(1, len(Q.gens) + 1):
        for sub in combinations(Q.gens, k):
            lcm = tuple(max(col) for col in zip(*sub))
            d = Q.degree(lcm)
            if len(num) <= d:
                num += [0] * (d + 1 - len(num))
            num[d] += (-1) ** k
    return HilbertSeries.from_factors(num, Q.degrees, maxdeg)


def brute_force_hilbert(Q: MonomialQuotient, maxdeg: int) -> tuple[int, ...]:
    """Count standard monomials degree by degree."""
    counts = [0] * (maxdeg + 1)
    ranges = [range(maxdeg // d + 1) for d in Q.degrees]
    for mono in product(*ranges):
        deg = Q.degree(mono)
        if deg <= maxdeg and not Q.contains(mono):
            counts[deg] += 1
    return tuple(counts)


def gk_dim(Q: MonomialQuotient) -> int:
    """Largest set of variables containing the support of no generator."""
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in Q.gens]
    if any(not s for s in supports):
        return 0
    for k in range(Q.nvars, 0, -1):
        for S in combinations(range(Q.nvars), k):
            S = frozenset(S)
            if not any(s <= S for s in supports):
                return k
    return 0


# --- the graded algebra and its quotients ------------------------------------------


def gr_variables(f: int, with_h: bool = True) -> tuple[tuple[str, ...], tuple[int, ...]]:
    names, degs = [], []
    for j in range(f):
        names += [f"y{j}", f"z{j}"]
        degs += [1, 1]
        if with_h:
            names.append(f"h{j}")
            degs.append(2)
    return tuple(names), tuple(degs)


def gr_quotient(f: int, kill_h: bool = False, kill_yz: bool = False) -> MonomialQuotient:
    """PBW model of the graded algebra, optionally modulo the ``h_j`` and ``y_j z_j``."""
    names, degs = gr_variables(f)
    gens = []
    for j in range(f):
        if kill_h:
            gens.append(tuple(int(v == f"h{j}") for v in names))
        if kill_yz:
            gens.append(tuple(int(v in (f"y{j}", f"z{j}")) for v in names))
    return MonomialQuotient(names, tuple(gens), degs)


def id_quotient(f: int) -> MonomialQuotient:
    """``F[y_j, z_j] / (y_j z_j)``: the graded algebra modulo the ideal I_D."""
    names, degs = gr_variables(f, with_h=False)
    gens = [tuple(int(v in (f"y{j}", f"z{j}")) for v in names) for j in range(f)]
    return MonomialQuotient(names, tuple(gens), degs)


def _kills_id(Q: MonomialQuotient) -> bool:
    names = Q.variables
    f = sum(1 for v in names if v.startswith("y"))
    for j in range(f):
        yv = f"y{j}" if f"y{j}" in names else "y"
        zv = f"z{j}" if f"z{j}" in names else "z"
        if not Q.contains(tuple(int(v in (yv, zv)) for v in names)):
            return False
        hv = f"h{j}"
        if hv in names and not Q.contains(tuple(int(v == hv) for v in names)):
            return False
    return True


def criterion_bound(summands: list[MonomialQuotient], maxdeg: int = 12) -> dict:
    """Dimension bound for a direct sum of cyclic graded modules killed by I_D.

    Returns ``{"bound", "dimension", "growth"}``: ``bound`` is the GK
    dimension of the graded algebra modulo I_D, ``dimension`` the actual
    growth degree of the module and ``growth`` its Hilbert function.
    Raises ValueError if some summand is not killed by I_D.
    """
    growth = [0] * (maxdeg + 1)
    dims = [0]
    f = None
    for Q in summands:
        if not _kills_id(Q):
            raise ValueError(f"the summand {Q.describe()} is not killed by I_D")
        nf = sum(1 for v in Q.variables if v.startswith("y"))
        f = nf if f is None else max(f, nf)
        H = quotient_hilbert(Q, maxdeg)
        growth = [a + b for a, b in zip(growth, H.coeffs)]
        if any(H.coeffs):
            dims.append(gk_dim(Q))
    bound = 0 if f is None or not any(growth) else gk_dim(id_quotient(f))
    dimension = max(dims)
    if dimension > bound:
        raise AssertionError("module grows faster than the quotient algebra")
    return {"bound": bound, "dimension": dimension, "growth": tuple(growth)}
