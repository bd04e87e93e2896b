"""Serre weight tables on the GL2 and quaternion sides.

The tables live in ``data/weight_tables.txt`` as one record per sub-case;
this module parses them and evaluates the guards and entries for given
parameters.  Quaternion characters are exponents ``k`` of ``xi^k`` modulo
``p^2 - 1`` with ``alpha = xi^(p-1)`` and ``zeta = xi^(p+1)``.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .gl2types import sigma_label
from .graded import MonomialQuotient

__all__ = [
    "CASES",
    "CASE_ALIASES",
    "RhoBarParams",
    "WeightSet",
    "TableRecord",
    "AmbiguityError",
    "load_tables",
    "bdj_weights",
    "khare_weights",
    "psi_triple",
    "ab_choice",
    "ab_rows",
    "a_ideal",
    "cross_check",
    "c_class",
    "c_params",
    "all_params",
]

CASES = ("irreducible", "reducible-nonsplit", "reducible-split")
CASE_ALIASES = {
    "irreducible": "irreducible",
    "irred": "irreducible",
    "1": "irreducible",
    "reducible-nonsplit": "reducible-nonsplit",
    "nonsplit": "reducible-nonsplit",
    "2": "reducible-nonsplit",
    "reducible-split": "reducible-split",
    "split": "reducible-split",
    "3": "reducible-split",
}


class AmbiguityError(ValueError):
    """Both neighbours of a character lie in the weight set."""


# --- expression evaluation ---------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}
_CMPOPS = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def _eval(node, env: dict):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, bool)):
        return node.value
    if isinstance(node, ast.Name):
        if node.id == "True":
            return True
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.Not):
            return not v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.BoolOp):
        vals = [_eval(v, env) for v in node.values]
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval(comp, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    raise ValueError(f"unsupported table expression: {ast.dump(node)}")


@lru_cache(maxsize=None)
def _parse(expr: str):
    return ast.parse(expr.strip(), mode="eval")


def _ev(expr: str, env: dict):
    return _eval(_parse(expr), env)


# --- table records ---------------------------------------------------------------


@dataclass(frozen=True)
class TableRecord:
    table: str  # bdj | khare | ab
    case: str
    subcase: str
    guard: str
    entries: tuple[str, ...]

    def applies(self, env: dict) -> bool:
        return bool(_ev(self.guard, env))


@lru_cache(maxsize=None)
def load_tables(path: str | None = None) -> tuple[TableRecord, ...]:
    if path is None:
        text = resources.files("artifact").joinpath("data", "weight_tables.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        table, case, sub, guard, entries = (x.strip() for x in line.split("|"))
        out.append(TableRecord(table, case, sub, guard, tuple(e.strip() for e in entries.split(";"))))
    return tuple(out)


def _records(table: str) -> list[TableRecord]:
    return [r for r in load_tables() if r.table == table]


# --- parameters -----------------------------------------------------------------


@dataclass(frozen=True)
class RhoBarParams:
    """Case data of a two-dimensional mod p representation of the Galois group of Q_p.

    ``ratio_equal`` records whether the two unramified characters agree;
    ``tres_ramifie`` only matters when ``r = 0`` and the ratio is equal.
    """

    case: str
    r: int
    s: int
    p: int = 5
    ratio_equal: bool = False
    tres_ramifie: bool = False

    def __post_init__(self):
        case = CASE_ALIASES.get(str(self.case))
        if case is None:
            raise ValueError(f"unknown case {self.case!r}; expected one of {CASES}")
        object.__setattr__(self, "case", case)
        p = self.p
        if p < 5:
            raise ValueError("the tables are stated for p >= 5")
        rmax = p - 1 if case == "irreducible" else p - 2
        if not 0 <= self.r <= rmax:
            raise ValueError(f"r={self.r} outside [0, {rmax}] for the {case} case")
        if not 0 <= self.s <= p - 2:
            raise ValueError(f"s={self.s} outside [0, {p - 2}]")

    @property
    def env(self) -> dict:
        return {"p": self.p, "r": self.r, "s": self.s, "equal": self.ratio_equal, "tres": self.tres_ramifie}

    @property
    def order(self) -> int:
        return self.p * self.p - 1

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "r": self.r,
            "s": self.s,
            "p": self.p,
            "ratio_equal": self.ratio_equal,
            "tres_ramifie": self.tres_ramifie,
        }


@dataclass(frozen=True)
class WeightSet:
    """Serre weights ``(m, n mod p-1)`` (kind ``bdj``) or exponents mod ``p^2-1`` (kind ``khare``)."""

    kind: str
    elements: frozenset
    subcase: str
    p: int

    def __contains__(self, x) -> bool:
        if self.kind == "khare":
            x %= self.p * self.p - 1
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def sorted(self) -> list:
        return sorted(self.elements)


def _select(table: str, params: RhoBarParams) -> TableRecord:
    env = params.env
    hits = [r for r in _records(table) if r.case == params.case and r.applies(env)]
    if len(hits) != 1:
        raise ValueError(f"{len(hits)} {table} sub-cases apply to {params}")
    return hits[0]


def _khare_exponent(entry: str, env: dict) -> int:
    xi, al, ze = (_ev(x, env) for x in entry.split(","))
    p = env["p"]
    return (xi + al * (p - 1) + ze * (p + 1)) % (p * p - 1)


def bdj_weights(params: RhoBarParams) -> WeightSet:
    rec = _select("bdj", params)
    env, p = params.env, params.p
    out = set()
    for e in rec.entries:
        m, n = (_ev(x, env) for x in e.split(","))
        lab = sigma_label(m, n, p)
        if lab is None:
            raise ValueError(f"degenerate weight in sub-case {rec.subcase}")
        out.add(lab)
    return WeightSet("bdj", frozenset(out), rec.subcase, p)


def khare_weights(params: RhoBarParams) -> WeightSet:
    rec = _select("khare", params)
    env = params.env
    return WeightSet("khare", frozenset(_khare_exponent(e, env) for e in rec.entries), rec.subcase, params.p)


# --- psi triple and (a, b) choice -------------------------------------------------


def psi_triple(a: int, b: int, p: int = 5, side: str = "gl2", check: bool = True) -> tuple[int, int, int]:
    """Exponents of ``psi_1, psi_2, psi_3`` modulo ``p^2 - 1``.

    ``side='gl2'`` expects ``1 <= a <= p-3``, ``side='quaternion'`` expects
    ``-2 <= a <= p-2``.  With ``check`` a character equal to its Frobenius
    conjugate raises ValueError naming the index.
    """
    lo, hi = (1, p - 3) if side == "gl2" else (-2, p - 2)
    if not lo <= a <= hi:
        raise ValueError(f"a={a} outside [{lo}, {hi}] on the {side} side")
    order = p * p - 1
    psi = (
        (a + 2 + (p + 1) * b) % order,
        (a + 3 + (p + 1) * (b - 1)) % order,
        (a + 1 + (p + 1) * b) % order,
    )
    if check:
        for i, k in enumerate(psi, 1):
            if (k * p - k) % order == 0:
                raise ValueError(f"psi_{i} = xi^{k} equals its Frobenius conjugate")
    return psi


def ab_rows(params: RhoBarParams) -> list[tuple[str, int, tuple[int, int]]]:
    """``(row, chi, (a, b))`` for the four rows of the selection table."""
    env, p = params.env, params.p
    out = []
    for rec in _records("ab"):
        lhs, rhs = rec.entries[0].split("->")
        chi = _khare_exponent(lhs, env)
        a, b = (_ev(x, env) for x in rhs.split(","))
        out.append((rec.subcase, chi, (a, b % (p - 1))))
    return out


def ab_choice(chi: int, params: RhoBarParams) -> tuple[int, int]:
    """The pair ``(a, b)`` attached to ``chi`` in the weight set of ``params``."""
    p = params.p
    chi %= params.order
    if chi not in khare_weights(params):
        raise ValueError(f"xi^{chi} is not in the quaternionic weight set of {params}")
    found = {ab for _, c, ab in ab_rows(params) if c == chi}
    if not found:
        raise ValueError(f"no row of the selection table matches xi^{chi}")
    if len(found) > 1:
        raise AmbiguityError(f"rows disagree for xi^{chi}: {sorted(found)}")
    a, b = found.pop()
    psi_triple(a, b, p, side="quaternion")
    return a, b


def a_ideal(chi: int, wd: WeightSet) -> MonomialQuotient:
    """The monomial ideal of F[y, z] attached to ``chi``: (y), (z) or (yz)."""
    p = wd.p
    order = p * p - 1
    chi %= order
    if chi not in wd:
        raise ValueError(f"xi^{chi} is not in the weight set")
    down = (chi - (p - 1)) % order in wd
    up = (chi + (p - 1)) % order in wd
    if down and up:
        raise AmbiguityError(f"both xi^{chi} alpha and xi^{chi} alpha^-1 lie in the weight set")
    if down:
        gens = ((1, 0),)
    elif up:
        gens = ((0, 1),)
    else:
        gens = ((1, 1),)
    return MonomialQuotient(("y", "z"), gens)


# --- parameter families -----------------------------------------------------------


def all_params(p: int) -> list[RhoBarParams]:
    """Every admissible parameter set, with all flag combinations that matter."""
    out = []
    for case in CASES:
        rmax = p - 1 if case == "irreducible" else p - 2
        for r in range(rmax + 1):
            for s in range(p - 1):
                flags = [(False, False)]
                if case == "reducible-nonsplit" and r == 0:
                    flags = [(False, False), (True, False), (True, True)]
                for eq, tr in flags:
                    out.append(RhoBarParams(case, r, s, p, eq, tr))
    return out


def c_class(params: RhoBarParams) -> str | None:
    """'C1', 'C2' or None according to the generic ranges used for the Theta-chain."""
    p, r = params.p, params.r
    if params.case == "irreducible" and 2 <= r <= p - 3:
        return "C1"
    if params.case == "reducible-nonsplit" and 1 <= r <= p - 3:
        return "C2"
    return None


def c_params(p: int) -> list[RhoBarParams]:
    return [x for x in all_params(p) if c_class(x) is not None]


# --- cross-consistency with the GL2 side ------------------------------------------


@lru_cache(maxsize=None)
def _jh_labels(p: int, psi: int, twisted: bool) -> frozenset:
    from .gl2types import sym1_twist, theta
    from .modrep import jh_multiset

    T = theta(psi, p, 4)
    M = sym1_twist(T).reduce() if twisted else T.reduction()
    return frozenset(jh_multiset(M))


def gl2_ab_choices(params: RhoBarParams) -> list[tuple[int, int]]:
    p, r, s = params.p, params.r, params.s
    cls = c_class(params)
    if cls == "C1":
        return [(r, s % (p - 1)), (p - 1 - r, (r + s) % (p - 1))]
    if cls == "C2":
        return [(r, s % (p - 1))]
    raise ValueError(f"{params} is outside the generic ranges")


def cross_check(params: RhoBarParams) -> dict:
    """Intersection counts of reductions of types with the weight set.

    Keys are check names, values ``(expected, computed)`` pairs; the report
    carries ``ok`` for the conjunction.
    """
    p = params.p
    cls = c_class(params)
    if cls is None:
        return {"status": "inapplicable", "ok": True, "checks": {}}
    W = set(bdj_weights(params).elements)
    checks: dict = {}
    checks["no-degenerate-weight"] = (True, all(lab is not None and 0 <= lab[0] <= p - 1 for lab in W))
    for a, b in gl2_ab_choices(params):
        tag = f"a={a}/b={b}"
        top = sigma_label(a, b + 1, p)
        psi = psi_triple(a, b, p)
        jh1 = _jh_labels(p, psi[0], False)
        jh2 = _jh_labels(p, psi[1], True)
        jh3 = _jh_labels(p, psi[2], True)
        checks[f"top-in-W/{tag}"] = (True, top in W)
        checks[f"top-in-type1/{tag}"] = (True, top in jh1)
        checks[f"type2-meets-W-once/{tag}"] = ([top], sorted(jh2 & W))
        if cls == "C1":
            checks[f"W-two-elements/{tag}"] = (2, len(W))
            if (a, b) == (params.r, params.s % (p - 1)):
                checks[f"W-inside-type3/{tag}"] = (True, W <= jh3)
        else:
            checks[f"type3-meets-W-once/{tag}"] = ([top], sorted(jh3 & W))
    ok = all(e == c for e, c in checks.values())
    return {"status": "pass" if ok else "fail", "ok": ok, "checks": checks}
