"""Verification suites run by the command line.

Each suite expands its parameters into independent instances; an
instance is a module-level function call returning a list of
:class:`~artifact.report.CheckReport`.  Instances can run in a process
pool, reports are merged and sorted by check id.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from .report import CheckReport, compare

__all__ = ["SUITES", "SuiteParams", "instances", "run_instances"]

SUITES = (
    "diamond",
    "section3",
    "section34-glue",
    "quaternion-lie",
    "wchi3",
    "ext1",
    "weights-tables",
    "theta-chain",
    "pbw",
    "gk",
)


@dataclass
class SuiteParams:
    p: int = 5
    f: int = 1
    a: int | None = None
    b: int | None = None
    r: int | None = None
    s: int | None = None
    case: str | None = None
    precision: int | None = None
    level: int | None = None
    chi_exp: int | None = None
    chi_row: int | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _t(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


# --- GL2 side ----------------------------------------------------------------------


def diamond_instance(p: int, a: int, b: int, N: int) -> list[CheckReport]:
    from .gl2types import diamond_principal, diamond_theta, principal_series, theta, theta_exponent
    from .modrep import jh_multiset

    par = {"p": p, "a": a, "b": b}
    out = []
    jh, wall = _t(lambda: jh_multiset(theta(theta_exponent(a, b, p), p, N).reduction()))
    out.append(compare(f"prop-diamond/theta/p={p}/a={a}/b={b}", par, sorted(diamond_theta(a, b, p)), sorted(jh.elements()), wall))
    jh, wall = _t(lambda: jh_multiset(principal_series(b, a, p, N).reduction()))
    out.append(compare(f"prop-diamond/principal/p={p}/a={a}/b={b}", par, sorted(diamond_principal(a, b, p)), sorted(jh.elements()), wall))
    return out


def section3_instance(p: int, a: int, b: int, N: int) -> list[CheckReport]:
    from .lattices import load_battery_table, section33_checks

    return section33_checks(p, a, b, N, load_battery_table() if p == 5 else None)


def glue_instance(p: int, a: int, b: int, N: int) -> list[CheckReport]:
    from .lattices import gluing_checks, load_battery_table

    return gluing_checks(p, a, b, N, load_battery_table() if p == 5 else None)


# --- quaternion side ------------------------------------------------------------------


def lie_instance(p: int, f: int, n: int) -> list[CheckReport]:
    from .graded import pbw_hilbert
    from .quatrep import bracket, filtration_compare, gamma_relations, lie_structure_report

    par = {"p": p, "f": f, "n": n}
    out = []
    rep, wall = _t(lie_structure_report, p, f, n)
    pbw = pbw_hilbert(f, 3).coeffs
    tag = f"p={p}/f={f}/n={n}"
    out.append(compare(f"lie/eigen-law/{tag}", par, True, rep["eigen-law"], wall))
    out.append(compare(f"lie/y-span-rank/{tag}", par, 2 * f, rep["y-span-rank"]))
    out.append(compare(f"lie/gr1-dim/{tag}", par, pbw[1], rep["gr1-dim"]))
    out.append(compare(f"lie/h-prime-rank/{tag}", par, f, rep["h-prime-rank"]))
    out.append(compare(f"lie/brackets-vanish-off-f/{tag}", par, True, rep["brackets-vanish-off-f"]))
    out.append(compare(f"lie/brackets-in-h-prime-span/{tag}", par, True, rep["brackets-in-h-prime-span"]))
    out.append(compare(f"lie/gr2-dim/{tag}", par, pbw[2], rep["gr2-dim"]))
    out.append(compare(f"lie/degree2-products-span/{tag}", par, pbw[2], rep["degree2-products-rank"]))
    if "gr3-dim" in rep:
        out.append(compare(f"lie/gr3-dim/{tag}", par, pbw[3], rep["gr3-dim"]))
        out.append(compare(f"lie/degree3-products-span/{tag}", par, pbw[3], rep["degree3-products-rank"]))
        out.append(compare(f"lie/commutative-quotient-degree3/{tag}", par, rep["commutative-degree3-dim"], rep["quotient-degree3-dim"]))
    if f == 1:
        out.append(compare(f"lie/bracket-y0-y1-nonzero/{tag}", par, True, bracket(0, 1, p, f, n).nonzero))
        g, wall = _t(gamma_relations, max(n, 4), p, f)
        out.append(compare(f"eq-gamma-relations/{tag}", par, True, g["ok"], wall))
        for i in range(3):
            out.append(compare(f"lie/filtration-compare/i={i}/{tag}", par, True, filtration_compare(n, i, p, f)["equal"]))
    else:
        out.append(compare(f"lie/bracket-y0-y1-vanishes/{tag}", par, False, bracket(0, 1, p, f, n).nonzero))
        out.append(compare(f"lie/bracket-y0-yf-nonzero/{tag}", par, True, bracket(0, f, p, f, n).nonzero))
    return out


def pbw_instance(p: int, f: int, n: int) -> list[CheckReport]:
    from .graded import pbw_hilbert
    from .quatrep import aug_filtration

    maxdeg = 3 if f == 1 else 2
    par = {"p": p, "f": f, "n": n}
    filt, wall = _t(lambda: aug_filtration(n, maxdeg, p, f, check_stability=(f == 1)))
    return [compare(f"prop-pbw/aug-dims/p={p}/f={f}/n={n}", par, list(pbw_hilbert(f, maxdeg).coeffs), filt.dims, wall)]


def _chi_names(W, i):
    return sorted(W.character_names(i).elements())


def wchi3_instance(p: int, chi: int, n: int, N: int) -> list[CheckReport]:
    from .modrep import socle_filtration
    from .quatrep import _labels, w_chi, wbar_chi3

    order = p * p - 1
    par = {"p": p, "chi": chi, "n": n}
    tag = f"p={p}/chi={chi}"
    W, wall = _t(lambda: w_chi(chi, 3, p, 1, n, N, check_stability=True))
    out = [compare(f"cor-W-chi-3/graded-dims/{tag}", par, [1, 2, 4], W.graded_dims, wall)]
    expected = [["chi*1"], ["chi*alpha", "chi*alpha^-1"], sorted(["chi*1", "chi*1", "chi*alpha^2", "chi*alpha^-2"])]
    if chi == 0:
        expected = [["1"], ["alpha", "alpha^-1"], sorted(["1", "1", "alpha^2", "alpha^-2"])]
    out.append(compare(f"cor-W-chi-3/characters/{tag}", par, expected, [_chi_names(W, i) for i in range(3)]))
    Wb, wall = _t(lambda: wbar_chi3(chi, p, 1, n, N))
    out.append(compare(f"cor-W-chi-3/Wbar-dim/{tag}", par, 5, Wb.dim, wall))
    am, al = (chi - (p - 1)) % order, (chi + (p - 1)) % order
    layers = _labels(socle_filtration(Wb.module).as_lists())
    out.append(compare(f"cor-W-chi-3/Wbar-socle/{tag}", par, [[chi, chi], sorted([am, al]), [chi]], layers))
    return out


def ext1_instance(p: int, chi: int) -> list[CheckReport]:
    from .quatrep import ext1_chars

    order = p * p - 1
    nbrs = {(chi + p - 1) % order, (chi - p + 1) % order}
    out = []
    for psi in range(order):
        val, wall = _t(ext1_chars, psi, chi, p, 1)
        out.append(compare(f"prop-Ext1-U1/p={p}/chi={chi}/psi={psi:03d}", {"p": p, "chi": chi, "psi": psi}, int(psi in nbrs), val, wall))
    return out


def theta_instance(p: int, chi: int, N: int, n: int | None) -> list[CheckReport]:
    from .quatrep import build_theta_chain

    order = p * p - 1
    am = (chi - (p - 1)) % order
    par = {"p": p, "chi": chi}
    tag = f"p={p}/chi={chi:03d}"
    T, wall = _t(build_theta_chain, chi, p, N, n)
    c = T.checks
    return [
        compare(f"prop-theta-chain/Theta-cosocle/{tag}", par, [[chi], [am], [chi]], c["Theta-cosocle"], wall),
        compare(f"prop-theta-chain/Theta-primes/{tag}", par, True, c["Theta-primes-ok"]),
        compare(f"prop-theta-chain/Thetatilde-iso-Wbar/{tag}", par, True, c["Thetatilde-iso-Wbar"]),
        compare(f"prop-theta-chain/Thetatilde-dim/{tag}", par, 5, c["Thetatilde-dim"]),
    ]


# --- weights --------------------------------------------------------------------------


def weights_instance(p: int) -> list[CheckReport]:
    from . import weights as wt

    par = {"p": p}
    out = []
    params = wt.all_params(p)
    for table in ("bdj", "khare"):
        fn = wt.bdj_weights if table == "bdj" else wt.khare_weights
        hit = {(x.case, fn(x).subcase) for x in params}
        recs = {(r.case, r.subcase) for r in wt.load_tables() if r.table == table}
        out.append(compare(f"thm-weights/{table}-subcases-covered/p={p}", par, sorted(recs), sorted(hit)))
        nonempty = all(len(fn(x)) > 0 for x in params)
        out.append(compare(f"thm-weights/{table}-nonempty/p={p}", par, True, nonempty))
    order = p * p - 1
    sym = all(all((k * p) % order in wt.khare_weights(x) for k in wt.khare_weights(x)) for x in params)
    out.append(compare(f"thm-weights/khare-frobenius-symmetry/p={p}", par, True, sym))
    alpha = p - 1
    W = wt.khare_weights(wt.RhoBarParams("reducible-nonsplit", p - 3, 0, p))
    out.append(compare(f"thm-weights/khare-alpha-pair/p={p}", par, sorted([alpha, order - alpha]), W.sorted()))
    for s in range(p - 1):
        x = wt.RhoBarParams("reducible-nonsplit", 0, s, p, True, True)
        out.append(compare(f"thm-weights/tres-ramifie-bdj/p={p}/s={s}", par, [[p - 1, (s + 1) % (p - 1)]], wt.bdj_weights(x).sorted()))
        out.append(compare(f"thm-weights/tres-ramifie-khare/p={p}/s={s}", par, [((p + 1) * (s + 1)) % order], wt.khare_weights(x).sorted()))
    rows_ok, ideal_ok = True, True
    for x in wt.c_params(p):
        for chi in wt.khare_weights(x):
            try:
                wt.ab_choice(chi, x)
            except ValueError:
                rows_ok = False
            try:
                wt.a_ideal(chi, wt.khare_weights(x))
            except ValueError:
                ideal_ok = False
    out.append(compare(f"ab-choice/generic-rows-regular/p={p}", par, True, rows_ok))
    out.append(compare(f"def-a-ideal/no-clash/p={p}", par, True, ideal_ok))
    return out


def cross_instance(p: int, case: str, r: int, s: int) -> list[CheckReport]:
    from . import weights as wt

    x = wt.RhoBarParams(case, r, s, p)
    rep, wall = _t(wt.cross_check, x)
    par = x.as_dict()
    tag = f"p={p}/{wt.c_class(x)}/r={r}/s={s}"
    return [compare(f"cross-check/{k}/{tag}", par, e, c, wall) for k, (e, c) in sorted(rep["checks"].items())]


def gk_instance(f: int, maxdeg: int = 6) -> list[CheckReport]:
    from . import graded as gr

    par = {"f": f}
    pbw = gr.pbw_hilbert(f, maxdeg)
    no_h = gr.quotient_hilbert(gr.gr_quotient(f, kill_h=True), maxdeg)
    poly = gr.HilbertSeries.from_factors([1], (1,) * (2 * f), maxdeg)
    tag = f"f={f}"
    out = [
        compare(f"cor-regular-sequence/h-quotient/{tag}", par, list(gr.quotient_by_regular_sequence(pbw, [2] * f).coeffs), list(no_h.coeffs)),
        compare(f"cor-regular-sequence/polynomial-ring/{tag}", par, list(poly.coeffs), list(no_h.coeffs)),
        compare(
            f"cor-regular-sequence/I_D-quotient/{tag}",
            par,
            list(gr.quotient_by_regular_sequence(pbw, [2] * (2 * f)).coeffs),
            list(gr.quotient_hilbert(gr.gr_quotient(f, kill_h=True, kill_yz=True), maxdeg).coeffs),
        ),
        compare(f"gk/gk-dim-yz-quotient/{tag}", par, f, gr.gk_dim(gr.id_quotient(f))),
        compare(f"gk/criterion-bound/{tag}", par, f, gr.criterion_bound([gr.id_quotient(f)])["bound"]),
    ]
    return out


def gk_module_instance(p: int) -> list[CheckReport]:
    from . import graded as gr
    from . import weights as wt

    dims = []
    for x in wt.c_params(p):
        W = wt.khare_weights(x)
        res = gr.criterion_bound([wt.a_ideal(chi, W) for chi in W])
        dims.append(res["dimension"])
    return [compare(f"thm-graded-surjection/module-dimension/p={p}", {"p": p}, 1, max(dims))]


# --- expansion into instances ------------------------------------------------------------


def _range(val, default):
    return [val] if val is not None else list(default)


def instances(suite: str, P: SuiteParams) -> list[tuple]:
    """``(function, args)`` pairs for the suite; raises ValueError on bad parameters."""
    from .quatrep import default_level

    p = P.p
    if p < 5:
        raise ValueError("p must be at least 5")
    if suite == "diamond":
        N = P.precision or 2
        return [(diamond_instance, (p, a, b, N)) for a in _range(P.a, range(p)) for b in _range(P.b, range(p - 1))]
    if suite == "section3":
        N = P.precision or 10
        return [(section3_instance, (p, a, b, N)) for b in _range(P.b, (0, 1)) for a in _range(P.a, range(p))]
    if suite == "section34-glue":
        N = P.precision or 10
        return [(glue_instance, (p, a, b, N)) for b in _range(P.b, (0, 1)) for a in _range(P.a, range(1, p - 2))]
    if suite == "quaternion-lie":
        return [(lie_instance, (p, P.f, P.level or default_level(P.f)))]
    if suite == "pbw":
        return [(pbw_instance, (p, P.f, P.level or default_level(P.f)))]
    if suite in ("wchi3", "ext1", "theta-chain") and P.f != 1:
        raise ValueError(f"suite {suite} is implemented for f = 1")
    if suite == "wchi3":
        return [(wchi3_instance, (p, chi, P.level or 4, P.precision or 6)) for chi in _range(P.chi_exp, (0, 1, 7))]
    if suite == "ext1":
        return [(ext1_instance, (p, chi)) for chi in _range(P.chi_exp, (0,))]
    if suite == "theta-chain":
        from . import weights as wt

        if P.chi_exp is not None:
            chis = [P.chi_exp % (p * p - 1)]
        else:
            chis = sorted({c for x in wt.c_params(p) for c in wt.khare_weights(x)})
        return [(theta_instance, (p, chi, P.precision or 6, P.level)) for chi in chis]
    if suite == "weights-tables":
        from . import weights as wt

        out: list[tuple] = [(weights_instance, (p,))]
        for x in wt.c_params(p):
            if P.r is not None and x.r != P.r or P.s is not None and x.s != P.s:
                continue
            if P.case is not None and wt.CASE_ALIASES.get(P.case) != x.case:
                continue
            out.append((cross_instance, (p, x.case, x.r, x.s)))
        return out
    if suite == "gk":
        return [(gk_instance, (f,)) for f in _range(P.f if P.f != 1 else None, (1, 2, 3))] + [(gk_module_instance, (p,))]
    raise ValueError(f"unknown suite {suite!r}")


def _call(job):
    fn, args = job
    return fn(*args)


def run_instances(jobs: list[tuple], workers: int = 1) -> list[CheckReport]:
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_call, jobs))
    else:
        results = [_call(j) for j in jobs]
    reports = [r for rs in results for r in rs]
    return sorted(reports, key=lambda r: r.check_id)
