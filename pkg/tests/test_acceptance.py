"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Lines go straight to the terminal (capture disabled) so that ``pytest -v``
shows them alongside the test names.
"""

import json
import time
from pathlib import Path

import pytest

from frobenius_ml.checks import (
    brute_period,
    check_exponent_sets,
    check_periods,
    check_pipeline,
    check_z_relation,
)
from frobenius_ml.cli import main
from frobenius_ml.drinfeld import DrinfeldModule, TwistedPoly, fq_poly_str, phi_eval, sharp_scenario, two_term_survey
from frobenius_ml.exactcore import GF, FqRat
from frobenius_ml.frobmod import FgModule, validate
from frobenius_ml.fsets import ExponentSet, collapse_to_groupless, convertible, points_up_to
from frobenius_ml.gmdemo import LinearRelation, TorusSubgroup, gm_report
from frobenius_ml.orbitgamma import OrbitSum, intersect_orbit_subgroup
from frobenius_ml.runner import build_module
from frobenius_ml.scenario import load_scenario

SEED = 20240601
CORPUS = sorted((Path(__file__).resolve().parent.parent / "scenarios").glob("*.fml"))


@pytest.fixture
def verdict(capsys):
    start = time.perf_counter()

    def emit(n, ok, detail, target=10.0):
        secs = time.perf_counter() - start
        slow = "" if secs <= target else f" (over {target:.0f} s target)"
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} [{secs:.1f} s{slow}] {detail}")
        assert ok, detail

    return emit


def test_criterion_1_z_relation(verdict):
    res = check_z_relation(SEED, modules=100, n_max=300)
    verdict(1, res["failures"] == 0, f"{res['cases']} modules, n <= 300, {res['failures']} failures")


def test_criterion_2_periodicity(verdict):
    from frobenius_ml.recsolve import detect_period

    pr = detect_period([-1, -1, 1], 10)
    fib_ok = (pr.preperiod, pr.period) == (0, 60) == brute_period([-1, -1, 1], 10)
    res = check_periods(SEED, cases=50, n_max=50)
    verdict(2, fib_ok and res["failures"] == 0,
            f"Fibonacci mod 10 -> ({pr.preperiod}, {pr.period}); {res['cases']} random pairs, {res['failures']} mismatches")


def worked_examples():
    M = FgModule(2, (), [[2, 0], [0, 2]], f=[-2, 1])
    orbit = OrbitSum(M.element((1, 0)), ((M.element((0, 1)), 1),))
    whole = intersect_orbit_subgroup(M, orbit, [M.element((1, 0)), M.element((0, 1))])
    mod3 = intersect_orbit_subgroup(M, orbit, [M.element((1, 1)), M.element((0, 3))])
    G1 = FgModule(1, (), [[2]], f=[-2, 1])
    none = intersect_orbit_subgroup(G1, OrbitSum(G1.zero(), ((G1.element((1,)), 1),)), [G1.element((3,))])
    return [
        ([S.describe() for S in whole.fsets] == ["(1, 0) + S((0, 1); 1)"] and whole.status.complete),
        (none.fsets == [] and none.status.complete),
        ([S.describe() for S in mod3.fsets] == ["(1, 0) + S((0, 1); 2)"] and mod3.status.complete),
    ]


def test_criterion_3_pipeline(verdict):
    res = check_pipeline(SEED, cases=50, box=64)
    ex = worked_examples()
    verdict(3, res["failures"] == 0 and res["refused"] == 0 and all(ex),
            f"{res['cases']} instances in box 64, {res['failures']} mismatches, {res['refused']} refused, "
            f"{res['complete']} complete; worked examples {sum(ex)}/3", target=60.0)


def test_criterion_4_drinfeld_survey(verdict):
    D3 = DrinfeldModule.make(3, [0, 1, 1])
    got3 = [fq_poly_str(a) for a in two_term_survey(D3, 9)]
    D2 = DrinfeldModule.make(2, [0, 1, 0, 1])
    got2 = [fq_poly_str(a) for a in two_term_survey(D2, 8)]
    shapes = all(phi_eval(D2, [0] * 2**n + [1]).support() == [2**n, 3 * 2**n] for n in range(4))
    ok = got3 == ["t", "t^3", "t^9"] and got2 == ["t", "t^2", "t^4", "t^8"] and shapes
    verdict(4, ok, f"q=3: {got3}; q=2: {got2}; F^(2^n) + F^(3*2^n) shape: {shapes}")


def test_criterion_5_twisted_square(verdict):
    squares = {}
    for q in (3, 5):
        K = GF(q, 2)
        squares[q] = str(TwistedPoly(K, q, [0, 1, 0, 1]) ** 2)
    rep = sharp_scenario(3, 6)
    ok = (
        all(s == "F^2 + 2F^4 + F^6" for s in squares.values())
        and rep["property_1_on_X_equals_Fq_F2"]
        and rep["property_2_phi_t2_invariant"]
        and rep["property_3_phi_t_leaves_X"]
    )
    verdict(5, ok, f"squares {squares}; on-X = F_q[F^2] points: {rep['property_1_on_X_equals_Fq_F2']}, "
                   f"phi_(t^2) stable: {rep['property_2_phi_t2_invariant']}, "
                   f"phi_t leaves X: {rep['property_3_phi_t_leaves_X']}")


def test_criterion_6_unit_equation(verdict):
    K = GF(2)
    one = FqRat.const(K, 1)
    G = TorusSubgroup.make(2, [[[0, 1], [1]], [[1], [1, 1]]])
    rep = gm_report(G, LinearRelation((one, one), one), 64)
    want = [[2**n, 2**n] for n in range(7)]
    ok = rep["solutions"] == want and rep["fsets_downstairs"] == ["S((t, t + 1); 1)"] and rep["exact_cover"]
    verdict(6, ok, f"solutions {rep['solutions']}; F-sets {rep['fsets_downstairs']}")


def corpus_cosets():
    """(module, orbit, coset) for every coset the corpus orbit scenarios produce."""
    out = []
    for path in CORPUS:
        sc = load_scenario(path)
        if sc.kind != "orbit-intersect" or "refused" in path.stem:
            continue
        M = build_module(sc)
        el = lambda v: M.element(v[: M.free_rank], v[M.free_rank:])  # noqa: E731
        deltas = sc.get("orbit.delta") or [1] * len(sc["orbit.P"])
        orbit = OrbitSum(el(sc["orbit.Q"]), tuple((el(P), d) for P, d in zip(sc["orbit.P"], deltas)))
        res = intersect_orbit_subgroup(M, orbit, [el(g) for g in sc["subgroup.generators"]])
        out += [(M, orbit, c) for c in res.exponents.cosets]
    return out


def enumerate_coset(M, orbit, c, hi):
    pts = set()
    for n in c.points(hi):
        pts.add(orbit.point(M, n))
    return pts


def test_criterion_7_exponent_sets(verdict):
    law = check_exponent_sets(SEED, pairs=50, samples=1000)
    checked = bad = 0
    for M, orbit, c in corpus_cosets():
        if not convertible(c, orbit.steps):
            continue
        fsets, residual = collapse_to_groupless(M, (orbit.Q, list(orbit.terms)), ExponentSet(orbit.k, [], [c]))
        hi = 12
        reach = max(list(c.offset) + list(c.lower) + [0]) + hi * (1 + max((max(b) for b in c.basis), default=0))
        emitted = set().union(*(points_up_to(S, M, hi) for S in fsets)) if fsets else set()
        wide = set().union(*(points_up_to(S, M, reach) for S in fsets)) if fsets else set()
        exact = enumerate_coset(M, orbit, c, hi) <= emitted <= enumerate_coset(M, orbit, c, reach) <= wide
        checked += 1
        bad += (not exact) or bool(residual)
    ok = law["failures"] == 0 and bad == 0 and checked > 0
    verdict(7, ok, f"membership law {law['cases']} samples, {law['failures']} failures; "
                   f"{checked} convertible corpus cosets, {bad} mismatches")


def test_criterion_8_axiom_checker(verdict):
    gm = validate(FgModule(1, (), [[3]], f=[-3, 1]))
    zero = validate(FgModule(1, (), [[0]], f=[0, 1]))
    div = validate(FgModule(2, (), [[2, 0], [0, 1]], f=[2, -3, 1]))
    ok = gm.ok and not zero.passed("iii") and not div.passed("iv")
    verdict(8, ok, f"G_m passes: {gm.ok}; F=0 fails (iii): {not zero.passed('iii')}; "
                   f"diag(2,1) fails (iv): {not div.passed('iv')}")


def canonical_report(path, tmp_path, tag):
    out = tmp_path / f"{path.stem}.{tag}.json"
    code = main(["run", str(path), "--out", str(out)])
    payload = json.loads(out.read_text())
    return code, json.dumps(payload["report"], sort_keys=True, indent=2).encode()


def test_criterion_9_determinism(verdict, tmp_path):
    diffs = []
    for path in CORPUS:
        a = canonical_report(path, tmp_path, "a")
        b = canonical_report(path, tmp_path, "b")
        if a != b:
            diffs.append(path.stem)
    verdict(9, not diffs, f"{len(CORPUS)} scenarios, differing: {diffs or 'none'}")

