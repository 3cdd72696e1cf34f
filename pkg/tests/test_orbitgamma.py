import itertools
import random

import pytest

from frobenius_ml.errors import InputError, RefusalError
from frobenius_ml.exactcore import IntMatrix, hnf_basis, lattice_member, reduce_mod_hnf
from frobenius_ml.frobmod import FgModule
from frobenius_ml.orbitgamma import (
    OrbitSum,
    brute_force_intersection,
    intersect_orbit_subgroup,
    membership_system,
    split_point,
    subgroup_analyze,
)
from frobenius_ml.randgen import random_orbit_instance
from frobenius_ml.recsolve import evaluate_form

GM2 = FgModule(2, (), [[2, 0], [0, 2]], f=[-2, 1])
TORS = FgModule(2, (4,), [[0, 1], [1, 1]], [[1, 0]], [[3]], f=[3, 2, -4, 1])


def in_gamma(M, gens, P):
    """Membership through one HNF of generators plus torsion relations."""
    n = M.free_rank + M.s
    cols = [g.flat() for g in gens]
    cols += [[q if r == M.free_rank + t else 0 for r in range(n)] for t, q in enumerate(M.torsion_orders)]
    H = hnf_basis(cols, n)
    return not any(reduce_mod_hnf(H, list(P.flat())))


def test_split_point():
    T, Q = split_point(TORS, TORS.element((3, -1), (2,)))
    assert list(T.flat()) == [0, 0, 2] and list(Q.flat()) == [3, -1, 0]
    assert T + Q == TORS.element((3, -1), (2,))


def test_orbit_sum_rejects_zero_step():
    with pytest.raises(InputError):
        OrbitSum(GM2.zero(), ((GM2.element((1, 0)), 0),))


def test_subgroup_whole_module():
    sub = subgroup_analyze(GM2, [GM2.element((1, 0)), GM2.element((0, 1))])
    assert sub.congruence_rows == [] and sub.equation_rows == []
    assert list(sub.cosets) == [()]


def test_subgroup_smith_rows():
    sub = subgroup_analyze(GM2, [GM2.element((2, 0)), GM2.element((0, 3))])
    assert sorted(s for _, s in sub.congruence_rows) == [6]
    assert sub.equation_rows == []
    line = subgroup_analyze(GM2, [GM2.element((1, 1))])
    assert len(line.equation_rows) == 1
    (u,) = line.equation_rows
    assert u[0] + u[1] == 0 and u != [0, 0]


def test_subgroup_torsion_projection_and_gamma1():
    M = FgModule(1, (4,), [[1]], [[0]], [[1]], f=[-1, 1])
    gens = [M.element((1,), (2,))]
    sub = subgroup_analyze(M, gens)
    assert sorted(sub.cosets) == [(0,), (2,)]
    assert sub.gamma1 == ((2,),)
    assert sub.cosets[(2,)] == (1,)


def test_subgroup_analysis_against_box_closure():
    rng = random.Random(31)
    for _ in range(25):
        M, _, gens = random_orbit_instance(rng)
        if not gens:
            continue
        sub = subgroup_analyze(M, gens)
        seen_h, free_zero = set(), []
        for c in itertools.product(range(-4, 5), repeat=len(gens)):
            P = M.zero()
            for ci, g in zip(c, gens):
                P = P + ci * g
            seen_h.add(tuple(P.tors))
            if not any(P.tors):
                free_zero.append(P.free)
        assert seen_h == set(sub.cosets)
        for h, U in sub.cosets.items():
            assert in_gamma(M, gens, M.element(U, h))
        if M.free_rank:
            lat = IntMatrix.from_columns(sub.gamma1, rows=M.free_rank) if sub.gamma1 else None
            for w in free_zero:
                assert (lat is None and not any(w)) or (lat is not None and lattice_member(lat, w) is not None)
            for b in sub.gamma1:
                assert in_gamma(M, gens, M.element(b, (0,) * M.s))


def test_membership_system_matches_direct_test():
    rng = random.Random(37)
    checked = 0
    for _ in range(30):
        M, orbit, gens = random_orbit_instance(rng)
        sub = subgroup_analyze(M, gens)
        for h in sub.cosets:
            cons, forms = membership_system(M, orbit, sub, h)
            for n in itertools.product(range(6), repeat=orbit.k):
                p = orbit.point(M, n)
                direct = tuple(p.tors) == h and in_gamma(M, gens, p)
                ok = all((evaluate_form(M.f, d, n, orbit.steps) - D1) % D2 == 0 for d, D1, D2 in cons)
                ok = ok and all(evaluate_form(M.f, d, n, orbit.steps) == D for d, D in forms)
                assert ok == direct
                checked += 1
    assert checked > 500


def test_membership_system_unknown_coset():
    M = FgModule(1, (4,), [[1]], [[0]], [[1]], f=[-1, 1])
    sub = subgroup_analyze(M, [M.element((1,), (2,))])
    orbit = OrbitSum(M.zero(), ((M.element((1,), (0,)), 1),))
    with pytest.raises(InputError):
        membership_system(M, orbit, sub, (1,))


# worked examples -----------------------------------------------------------------------


def test_whole_module_returns_the_orbit():
    orbit = OrbitSum(GM2.element((1, 0)), ((GM2.element((0, 1)), 1),))
    res = intersect_orbit_subgroup(GM2, orbit, [GM2.element((1, 0)), GM2.element((0, 1))])
    assert res.status.complete
    assert [S.describe() for S in res.fsets] == ["(1, 0) + S((0, 1); 1)"]


def test_powers_of_two_avoid_multiples_of_three():
    M = FgModule(1, (), [[2]], f=[-2, 1])
    res = intersect_orbit_subgroup(M, OrbitSum(M.zero(), ((M.element((1,)), 1),)), [M.element((3,))])
    assert res.fsets == [] and res.status.complete
    assert res.exponents.points(500) == set()


def test_even_exponents_congruent_mod_three():
    orbit = OrbitSum(GM2.element((1, 0)), ((GM2.element((0, 1)), 1),))
    res = intersect_orbit_subgroup(GM2, orbit, [GM2.element((1, 1)), GM2.element((0, 3))])
    assert res.status.complete
    assert [S.describe() for S in res.fsets] == ["(1, 0) + S((0, 1); 2)"]
    assert {n for (n,) in res.exponents.points(60)} == set(range(0, 61, 2))


def test_zero_frobenius_is_refused():
    M = FgModule(1, (), [[0]], f=[0, 1])
    with pytest.raises(RefusalError) as info:
        intersect_orbit_subgroup(M, OrbitSum(M.zero(), ((M.element((1,)), 1),)), [M.element((1,))])
    assert info.value.diagnostic


def test_step_reduction_agrees_with_unit_step():
    rng = random.Random(41)
    for _ in range(15):
        M, orbit, gens = random_orbit_instance(rng, max_k=1)
        (P, _), = orbit.terms
        one = intersect_orbit_subgroup(M, OrbitSum(orbit.Q, ((P, 1),)), gens)
        two = intersect_orbit_subgroup(M, OrbitSum(orbit.Q, ((P, 2),)), gens)
        assert {n for (n,) in two.exponents.points(30)} == {n // 2 for (n,) in one.exponents.points(60) if n % 2 == 0}


def test_residual_when_lattice_is_not_convertible():
    # (2^a, 4^b) lies on the diagonal iff a = 2b
    M = FgModule(2, (), [[2, 0], [0, 4]], f=[8, -6, 1])
    orbit = OrbitSum(M.zero(), ((M.element((1, 0)), 1), (M.element((0, 1)), 1)))
    res = intersect_orbit_subgroup(M, orbit, [M.element((1, 1))])
    assert res.exponents.points(20) == {(2 * b, b) for b in range(11)}
    assert res.fsets == [] and len(res.residual) == 1
    assert not res.status.complete


def test_pipeline_against_brute_force():
    rng = random.Random(43)
    complete = 0
    for _ in range(30):
        M, orbit, gens = random_orbit_instance(rng)
        res = intersect_orbit_subgroup(M, orbit, gens)
        box = 20 if orbit.k == 2 else 80
        assert set(res.exponents.points(box)) == set(brute_force_intersection(M, orbit, gens, box))
        complete += res.status.complete
    assert complete >= 20


def test_report_is_json_shaped():
    import json

    orbit = OrbitSum(TORS.element((0, 0), (1,)), ((TORS.element((1, 0), (0,)), 1),))
    res = intersect_orbit_subgroup(TORS, orbit, [TORS.element((2, 0), (1,)), TORS.element((0, 2), (0,))])
    d = res.to_dict()
    assert json.loads(json.dumps(d)) == d
    assert {"fsets", "residual", "status", "exponents", "per_coset"} <= set(d)


def test_size_refusal_reaches_the_pipeline(monkeypatch):
    import frobenius_ml.recsolve as rs

    monkeypatch.setattr(rs, "MAX_PIECES", 0)
    M = FgModule(2, (), [[2, 0], [0, 2]], f=[-2, 1])
    orbit = OrbitSum(M.element((1, 0)), ((M.element((0, 1)), 1),))
    with pytest.raises(RefusalError) as err:
        intersect_orbit_subgroup(M, orbit, [M.element((1, 1)), M.element((0, 3))])
    assert err.value.diagnostic["reason"] == "solution set too large"
