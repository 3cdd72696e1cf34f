"""Dispatch a parsed scenario to its module and build the canonical report."""

from __future__ import annotations

import time

from .drinfeld import DrinfeldModule, sharp_scenario, survey_report
from .errors import InputError
from .exactcore import FqRat, GF, prime_power
from .frobmod import FgModule, candidate_min_poly, module_summary, validate
from .fsets import GrouplessFSet, make_fset, points_up_to
from .gmdemo import LinearRelation, TorusSubgroup, gm_report
from .orbitgamma import OrbitSum, brute_force_intersection, intersect_orbit_subgroup
from .recsolve import detect_period, solve_system
from .scenario import Rational, Scenario


def build_module(sc: Scenario) -> FgModule:
    m = sc["module.free_rank"]
    d = sc.get("module.torsion_orders", [])
    s = len(d)
    A_ff = sc.get("module.A_ff", [[int(i == j) for j in range(m)] for i in range(m)])
    A_tf = sc.get("module.A_tf", [[0] * m for _ in range(s)])
    A_tt = sc.get("module.A_tt", [[int(i == j) for j in range(s)] for i in range(s)])
    f = sc.get("module.f")
    if f is None:
        f = candidate_min_poly(FgModule(m, d, A_ff, A_tf, A_tt, f=(0, 1)))
    return FgModule(m, d, A_ff, A_tf, A_tt, f=f)


def _orbit_intersect(sc, opts):
    M = build_module(sc)
    P = sc["orbit.P"]
    delta = sc.get("orbit.delta", [1] * len(P))
    if len(delta) != len(P):
        raise InputError("orbit.delta needs one step per orbit generator")
    orbit = OrbitSum(M.from_flat(sc["orbit.Q"]), tuple((M.from_flat(p), d) for p, d in zip(P, delta)))
    gens = [M.from_flat(g) for g in sc["subgroup.generators"]]
    nmax = opts.get("nmax") or sc.get("solver.nmax", 64)
    sieve = opts.get("sieve") or sc.get("solver.sieve")
    res = intersect_orbit_subgroup(M, orbit, gens, N_max=nmax, sieve_moduli=sieve)
    results = {"module": module_summary(M), **res.to_dict()}
    box = opts.get("box") or sc.get("solver.check_box")
    if box is not None:
        brute = brute_force_intersection(M, orbit, gens, box)
        got = {n for n in res.exponents.points(box)}
        results["oracle_check"] = {"box": box, "agrees": got == set(brute), "points": len(brute)}
    return results, res.status.to_dict()


def _fset(sc, opts):
    M = build_module(sc)
    terms = sc.get("fset.terms", [])
    delta = sc.get("fset.delta", [1] * len(terms))
    if len(delta) != len(terms):
        raise InputError("fset.delta needs one step per orbit term")
    part = GrouplessFSet(M.from_flat(sc["fset.base"]), tuple((M.from_flat(a), d) for a, d in zip(terms, delta)))
    S = make_fset(M, part, [M.from_flat(h) for h in sc.get("fset.subgroup", [])])
    bound = opts.get("box") or sc["fset.bound"]
    pts = points_up_to(S, M, bound, sc.get("fset.subgroup_box", 0), sc.get("fset.power", 1))
    return {
        "module": module_summary(M),
        "fset": S.to_dict(),
        "readable": part.describe(),
        "bound": bound,
        "points": sorted(p.flat() for p in pts),
    }, None


def _recsolve(sc, opts):
    f = sc["recurrence.f"]
    k = sc["recurrence.k"]
    steps = sc.get("recurrence.steps")
    cons = []
    for item in sc.get("system.congruences", []):
        if not (isinstance(item, list) and len(item) == 3):
            raise InputError("each congruence is [d, residue, modulus]")
        cons.append((item[0], item[1], item[2]))
    forms = []
    for item in sc.get("system.equations", []):
        if not (isinstance(item, list) and len(item) == 2):
            raise InputError("each equation is [d, value]")
        forms.append((item[0], item[1]))
    nmax = opts.get("nmax") or sc.get("solver.nmax", 64)
    sieve = opts.get("sieve") or sc.get("solver.sieve")
    results = {}
    moduli = sc.get("periods.moduli", [])
    if moduli:
        results["periods"] = [
            {"modulus": N, "preperiod": pr.preperiod, "period": pr.period}
            for N, pr in ((N, detect_period(f, N)) for N in moduli)
        ]
    status = None
    if cons or forms:
        E, st = solve_system(f, cons, forms, k, nmax, sieve, steps)
        results["solutions"] = E.to_dict()
        status = st.to_dict()
    return results, status


def _survey(sc, opts):
    D = DrinfeldModule.make(sc["drinfeld.q"], sc["drinfeld.phi_t"], sc.get("drinfeld.field_degree", 1))
    return survey_report(D, sc["drinfeld.deg_bound"]), None


def _sharp(sc, opts):
    return sharp_scenario(sc["drinfeld.q"], sc["drinfeld.deg_bound"]), None


def _rat(K, v):
    num, den = (v.num, v.den) if isinstance(v, Rational) else (v, (1,))
    return FqRat.from_lists(K, [c % K.order for c in num], [c % K.order for c in den])


def _gm(sc, opts):
    q = sc["torus.q"]
    p, e = prime_power(q)
    K = GF(p, e)
    G = TorusSubgroup(q, tuple(tuple(_rat(K, x) for x in g) for g in sc["torus.generators"]))
    X = LinearRelation(tuple(_rat(K, a) for a in sc["relation.coeffs"]), _rat(K, sc["relation.rhs"]))
    box = opts.get("box") or sc["solver.box"]
    return gm_report(G, X, box), None


_DISPATCH = {
    "orbit-intersect": _orbit_intersect,
    "fset": _fset,
    "recsolve": _recsolve,
    "drinfeld-survey": _survey,
    "drinfeld-sharp": _sharp,
    "gm-intersect": _gm,
}


def run_scenario(sc: Scenario, **opts) -> tuple:
    """``(canonical report, timing)``; overrides ``nmax``, ``sieve``, ``box``
    take precedence over the scenario's solver keys."""
    t0 = time.perf_counter()
    opts = {k: v for k, v in opts.items() if v is not None}
    report = {
        "kind": sc.kind,
        "overrides": opts,
        "scenario": sc.echo(),
    }
    results, status = _DISPATCH[sc.kind](sc, opts)
    report["results"], report["status"] = results, status
    return report, {"seconds": round(time.perf_counter() - t0, 6)}


def validation_report(sc: Scenario) -> dict:
    return validate(build_module(sc)).to_dict()
