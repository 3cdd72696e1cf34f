import random

import pytest
from hypothesis import given, strategies as st

from frobenius_ml.errors import InputError
from frobenius_ml.frobmod import (
    FgModule,
    annihilates,
    candidate_min_poly,
    frob_orbit,
    frob_power,
    frob_power_via_z,
    image_lattice_chain,
    subgroup_member,
    validate,
    z_block,
)
from frobenius_ml.exactcore import IntMatrix
from frobenius_ml.randgen import random_element, random_module

FIB = FgModule(2, (), [[0, 1], [1, 1]], f=[-1, -1, 1])


def z_oracle(f, n_max):
    """Independent recursion: expand X^n mod f coefficient by coefficient."""
    g = len(f) - 1
    rem = [1] + [0] * (g - 1)  # X^0
    cols = [list(rem)]
    for _ in range(n_max):
        top = rem[-1]
        rem = [0] + rem[:-1]
        rem = [r - top * c for r, c in zip(rem, f[:-1])]
        cols.append(list(rem))
    return [tuple(c[j] for c in cols) for j in range(g)]


def test_z_block_fibonacci_rows():
    z = z_block([-1, -1, 1], 8)
    assert z[1] == (0, 1, 1, 2, 3, 5, 8, 13, 21)
    assert z[0] == (1, 0, 1, 1, 2, 3, 5, 8, 13)


def test_z_block_single_term():
    assert z_block([-3, 1], 6)[0] == tuple(3**n for n in range(7))


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.integers(0, 40))
def test_z_block_matches_division_oracle(low, n_max):
    f = low + [1]
    assert list(z_block(f, n_max)) == z_oracle(f, n_max)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_z_rows_satisfy_recursion(low):
    f = low + [1]
    g = len(low)
    alpha = [-c for c in low]
    for z in z_block(f, 30):
        for n in range(g, 31):
            assert z[n] == sum(alpha[l] * z[n - g + l] for l in range(g))


def test_z_block_rejects_non_monic():
    with pytest.raises(InputError):
        z_block([1, 2], 3)


def test_frob_power_examples():
    P = FIB.element((1, 0))
    assert frob_power(FIB, P, 0) == P
    assert frob_power(FIB, P, 5) == FIB.element((3, 5))
    assert frob_power_via_z(FIB, P, 7) == FIB.element((8, 13))
    T = FgModule(0, (4,), (), (), [[3]], f=[-1, 0, 1])
    assert frob_power(T, T.element((), (1,)), 2).tors == (1,)
    Gm = FgModule(1, (), [[2]], f=[-2, 1])
    assert frob_power_via_z(Gm, Gm.element((1,)), 10).free == (1024,)


def test_frob_power_via_z_below_degree():
    P = FIB.element((2, -1))
    for n in range(FIB.g):
        assert frob_power_via_z(FIB, P, n) == frob_orbit(FIB, P, n + 1)[-1]


def test_frob_power_square_and_multiply_matches_iteration():
    rng = random.Random(11)
    for _ in range(30):
        M = random_module(rng)
        P = random_element(rng, M)
        orbit = frob_orbit(M, P, 41)
        for n in (0, 7, 8, 9, 23, 40):
            assert frob_power(M, P, n) == orbit[n]


def test_z_relation_on_random_modules():
    rng = random.Random(5)
    for _ in range(25):
        M = random_module(rng)
        P = random_element(rng, M)
        for n in range(0, 120):
            assert frob_power_via_z(M, P, n) == frob_power(M, P, n)


def test_homomorphism_condition_is_enforced():
    with pytest.raises(InputError, match="homomorphism"):
        FgModule(0, (2, 3), (), (), [[1, 1], [0, 1]], f=[0, 1])
    with pytest.raises(InputError):
        FgModule(1, (), [[2]])


def test_candidate_min_poly_annihilates():
    rng = random.Random(2)
    for _ in range(30):
        M = random_module(rng)
        assert annihilates(M, candidate_min_poly(M))
    assert candidate_min_poly(FgModule(2, (), [[2, 0], [0, 2]], f=[0, 1])) == (-2, 1)


def test_validate_multiplicative_model():
    for q in (2, 3, 5):
        rep = validate(FgModule(1, (), [[q]], f=[-q, 1]))
        assert rep.ok, rep.to_dict()
        chain = rep.checks["iv"].data["shortest_vector_chain"]
        assert chain == [q**n for n in range(1, 11)] or chain[-1] is None


def test_validate_zero_map_fails_iii():
    rep = validate(FgModule(1, (), [[0]], f=[0, 1]))
    assert not rep.passed("iii")
    assert rep.passed("ii")


def test_validate_divisible_coordinate_fails_iv():
    rep = validate(FgModule(2, (), [[2, 0], [0, 1]], f=[2, -3, 1]))
    assert rep.passed("ii") and rep.passed("iii")
    assert not rep.passed("iv")
    assert rep.checks["iv"].data["shortest_vector_chain"] == [1] * 10


def test_validate_wrong_f_fails_ii():
    rep = validate(FgModule(1, (), [[3]], f=[-2, 1]))
    assert not rep.passed("ii")


def test_validate_torsion_kernel():
    rep = validate(FgModule(0, (4,), (), (), [[2]], f=[0, 0, 1]))
    assert not rep.passed("iii")
    assert rep.checks["iii"].data["torsion_kernel_witness"] == [2]


def test_image_chain_certifies_growth():
    chain, bound = image_lattice_chain(IntMatrix([[2, 1], [0, 3]]), steps=12, bound=64)
    assert chain[-1] is None
    assert all(c is None or c <= bound for c in chain)


def test_subgroup_member_with_torsion():
    M = FgModule(1, (4,), [[1]], [[0]], [[1]], f=[-1, 1])
    gens = [M.element((1,), (2,))]
    assert subgroup_member(M, gens, M.element((2,), (0,)))
    assert not subgroup_member(M, gens, M.element((1,), (0,)))


def test_shortest_vector_against_coefficient_box():
    import itertools

    from frobenius_ml.exactcore import hnf_basis
    from frobenius_ml.frobmod import shortest_vector

    rng = random.Random(3)
    for _ in range(120):
        n = rng.randint(1, 3)
        H = hnf_basis([[rng.randint(-6, 6) for _ in range(n)] for _ in range(rng.randint(1, 3))], n)
        if not H:
            continue
        v = shortest_vector(H, n, 8)
        best = None
        for c in itertools.product(range(-20, 21), repeat=len(H)):
            w = [sum(ci * h[i] for ci, h in zip(c, H)) for i in range(n)]
            nrm = max(abs(x) for x in w)
            if 0 < nrm <= 8 and (best is None or nrm < best):
                best = nrm
        assert (None if v is None else max(abs(x) for x in v)) == best
