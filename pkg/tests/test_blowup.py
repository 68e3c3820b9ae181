import random

import pytest

from pseudolattices.blowup import (
    M0_GRAM,
    blow_up,
    center_multiple,
    contract,
    dc_gram,
    defect_contraction_check,
    degree_blowup_check,
    mk_gram,
    parse_model,
    recover_center,
    standard_model,
)
from pseudolattices.core import LatticeError
from pseudolattices.surface import degree


def test_model_grams():
    assert M0_GRAM == ((1, 3, 6), (0, 1, 3), (0, 0, 1))
    assert mk_gram(2) == ((1, 0, 1, 1, 1), (0, 1, 1, 1, 1), (0, 0, 1, 3, 6), (0, 0, 0, 1, 3), (0, 0, 0, 0, 1))
    assert dc_gram(0) == ((1, 2, 2, 4), (0, 1, 0, 2), (0, 0, 1, 2), (0, 0, 0, 1))
    assert parse_model("M3").lattice.gram == mk_gram(3)
    assert parse_model("D-2").lattice.gram == dc_gram(-2)
    with pytest.raises(LatticeError):
        parse_model("X1")


@pytest.mark.parametrize("k", range(5))
def test_blow_up_at_p_builds_next_model(k):
    S = standard_model("Mk", k).surface()
    B = blow_up(S, S.p)
    # new vector goes first; the result is M_{k+1} up to ordering of the rank-0 block
    assert B.lattice.gram == mk_gram(k + 1)


def test_blow_up_at_zero_is_orthogonal():
    S = standard_model("M0").surface()
    B = blow_up(S, (0, 0, 0))
    assert B.lattice.gram[0] == (1, 0, 0, 0)


def test_blow_up_rejects_non_multiple():
    S = standard_model("M0").surface()
    with pytest.raises(LatticeError):
        blow_up(S, (1, 0, 0))


def test_contract_checks():
    S = standard_model("Mk", 1).surface()
    with pytest.raises(LatticeError):
        contract(S, (0, 1, 0, 0))
    assert contract(S, (1, 0, 0, 0)).lattice.gram == M0_GRAM


def test_recover_center_m1():
    S = standard_model("Mk", 1).surface()
    f = (1, 0, 0, 0)
    z = recover_center(S, f)
    assert z == contract(S, f).p
    assert center_multiple(S, f) == 1


def test_recover_center_symmetric_lattice_is_zero():
    S = standard_model("M0").surface()
    B = blow_up(S, (0, 0, 0))
    assert recover_center(B, B.lattice.unit(0)) == (0, 0, 0)


def _random_case(rng):
    k = rng.randrange(5)
    S = standard_model("Mk", k).surface()
    n = rng.choice([-2, -1, 0, 1, 2])
    return S, n


def test_round_trips_randomized():
    rng = random.Random(7)
    for _ in range(60):
        S, n = _random_case(rng)
        z = tuple(n * x for x in S.p)
        B = blow_up(S, z)
        f = B.lattice.unit(0)
        C = contract(B, f)
        assert C.lattice.gram == S.lattice.gram
        assert C.p == S.p
        z2 = recover_center(B, f)
        assert z2 == z
        B2 = blow_up(C, z2)
        assert B2.lattice.gram == B.lattice.gram
        d, de, qke = defect_contraction_check(B, f)
        assert d == de + 1 - qke * qke


def test_defect_of_minus_two_blowup():
    S = standard_model("M0").surface()
    B = blow_up(S, tuple(-2 * x for x in S.p))
    d, de, qke = defect_contraction_check(B, B.lattice.unit(0))
    assert (d, de, abs(qke)) == (-3, 0, 2)


def test_defect_monotone_on_geometric():
    for k in range(1, 6):
        S = standard_model("Mk", k).surface()
        for i in range(k):
            d, de, _ = defect_contraction_check(S, S.lattice.unit(i))
            assert d <= de


def test_degree_formula():
    S = standard_model("M0").surface()
    for n in range(-3, 4):
        before, after, drop = degree_blowup_check(S, n)
        assert after == before - n * n
    assert degree(standard_model("Mk", 4).surface()) == 5
