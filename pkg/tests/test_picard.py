import random

import pytest

from pseudolattices import intmat as im
from pseudolattices.core import LatticeError, apply_word
from pseudolattices.picard import (
    ChernClass,
    PicardLattice,
    apply_weyl,
    chamber_vector,
    chern_model,
    collection_gram,
    curve_class,
    descend_to_chamber,
    euler_pairing,
    factor_weyl,
    fixes_K,
    helix_shift,
    iota,
    is_orthogonal,
    lift_weyl,
    line_bundle,
    point_class,
    realize_weyl_as_mutations,
    reflection_matrix,
    root_orbit,
    simple_reflection_macro,
    simple_reflection_matrices,
    simple_roots,
    special_position_check,
    stabilizer_membership_report,
    standard_collection,
    standard_divisors,
    ten_point_collection,
    ten_point_divisors,
    twist,
    weyl_matrix,
    weyl_orbit_path,
    weyl_transport,
)
from pseudolattices.surface import induced_ns_map


def test_picard_basics():
    X = PicardLattice(3)
    assert X.dim == 4 and X.K == (-3, 1, 1, 1)
    assert X.sq(X.K) == 6
    assert X.fmt(X.vec(4, -2, -2, -1)) == "4H - 2E1 - 2E2 - E3"
    assert X.fmt(X.zero) == "0"
    with pytest.raises(LatticeError):
        X.E(4)
    assert X.chi_line(X.H) == 3 and X.chi_line(X.zero) == 1


def test_euler_pairing_values():
    X0 = PicardLattice(0)
    O, OH = line_bundle(X0, X0.zero), line_bundle(X0, X0.H)
    assert euler_pairing(X0, O, OH) == 3
    assert euler_pairing(X0, OH, O) == 0
    assert collection_gram(X0, standard_collection(X0)) == ((1, 3, 6), (0, 1, 3), (0, 0, 1))
    X = PicardLattice(2)
    pt = point_class(X)
    assert euler_pairing(X, pt, O := line_bundle(X, X.zero)) == 1
    assert euler_pairing(X, O, pt) == 1
    a = curve_class(X, X.E(1), -1)
    assert euler_pairing(X, a, a) == 1


def test_euler_pairing_parity_guard():
    X = PicardLattice(1)
    with pytest.raises(LatticeError):
        euler_pairing(X, ChernClass(1, X.H, 0), line_bundle(X, X.zero))


def test_twist_of_torsion_class():
    X = PicardLattice(3)
    C = X.vec(1, -1)
    L = X.vec(1, 0, 1)
    a = curve_class(X, C, 0)
    t = twist(X, a, L)
    assert (t.r, t.c1, t.two_ch2) == (0, C, a.two_ch2 + 2 * X.dot(C, L))


def test_helix_shift_p2():
    X = PicardLattice(0)
    out = helix_shift(X, standard_collection(X))
    assert [a.c1 for a in out] == [(1,), (2,), (3,)]


@pytest.mark.parametrize("n", [0, 1, 3, 6, 10])
def test_chern_model(n):
    M = chern_model(n)
    assert M.surface.K == M.X.K
    assert M.lattice.unimodular
    assert M.v0 == M.lattice.unit(0)
    for a in standard_collection(M.X):
        assert M.from_coords(M.to_coords(a)) == a
    # the Serre operator is the twist by K
    assert M.lattice.serre == M.twist_matrix(M.X.K)


@pytest.mark.parametrize("n", range(3, 11))
def test_reflections_orthogonal_involutive_fix_K(n):
    X = PicardLattice(n)
    for m in simple_reflection_matrices(n):
        assert is_orthogonal(X, m)
        assert im.matmul(m, m) == im.identity(X.dim)
        assert fixes_K(X, m)


def test_reflection_examples():
    X = PicardLattice(3)
    assert apply_weyl(X, [1], X.E(1)) == X.E(2)
    assert apply_weyl(X, [0], X.E(1)) == X.vec(1, 0, -1, -1)
    assert simple_roots(PicardLattice(2))[0] is None
    with pytest.raises(LatticeError):
        weyl_matrix(PicardLattice(2), [0])


def test_composition_convention():
    X = PicardLattice(4)
    w = [0, 2, 1]
    m = im.identity(X.dim)
    for i in w:
        m = im.matmul(m, reflection_matrix(X, simple_roots(X)[i]))
    assert weyl_matrix(X, w) == m
    v = X.vec(2, -1, 0, 1, 0)
    assert apply_weyl(X, w, v) == im.matvec(m, v)


def test_factor_weyl_random_words():
    rng = random.Random(3)
    for n in (3, 5, 8):
        X = PicardLattice(n)
        for _ in range(15):
            w = [rng.randrange(n) for _ in range(rng.randint(0, 12))]
            phi = weyl_matrix(X, w)
            f = factor_weyl(X, phi)
            assert f is not None and weyl_matrix(X, f) == phi


def test_factor_weyl_rejects_non_members():
    X = PicardLattice(3)
    minus_one = tuple(tuple(-x for x in r) for r in im.identity(4))
    assert factor_weyl(X, minus_one) is None


def test_chamber_descent_and_transport():
    X = PicardLattice(6)
    h = chamber_vector(X)
    assert all(X.dot(h, r) > 0 for r in simple_roots(X))
    x = apply_weyl(X, [0, 3, 1, 0], X.E(6))
    w = weyl_transport(X, x, X.E(6))
    assert w is not None and apply_weyl(X, w, X.E(6)) == x
    assert weyl_transport(X, X.H, X.E(6)) is None
    letters, y = descend_to_chamber(X, x)
    assert all(X.dot(y, r) >= 0 for r in simple_roots(X))


def test_e8_root_orbit_and_special_position():
    X = PicardLattice(8)
    root = im.add(X.K, X.E(1))
    assert len(root_orbit(X, root)) == 240
    rep = special_position_check()
    assert rep.ok and rep.explored <= 240
    assert rep.transported_system[0] == X.vec(4, -2, -2, -2, -1, -1, -1, -1, -1)
    path = weyl_orbit_path(X, root, simple_roots(X)[0])
    assert apply_weyl(X, path.word, root) == simple_roots(X)[0]


def test_orbit_path_respects_budget_and_norm():
    X = PicardLattice(8)
    assert not weyl_orbit_path(X, X.H, X.E(1)).found
    assert not weyl_orbit_path(X, im.add(X.K, X.E(1)), simple_roots(X)[0], budget=5).found


def test_iota():
    X = PicardLattice(10)
    m = iota(X)
    assert im.matvec(m, X.H) == (-19,) + (6,) * 10
    for i in range(1, 11):
        assert im.matvec(m, X.E(i)) == (-6,) + tuple(2 - (j == i) for j in range(1, 11))
    rep = stabilizer_membership_report(X, m)
    assert rep.found and rep.uses_iota and rep.word == []
    assert factor_weyl(X, m) is None
    with pytest.raises(LatticeError):
        iota(PicardLattice(9))


def test_ten_point_collection():
    X = PicardLattice(10)
    cls = ten_point_collection(X)
    assert len(cls) == 13
    assert collection_gram(X, cls) == collection_gram(X, standard_collection(X))
    assert ten_point_divisors(X)[0] == X.zero


@pytest.mark.parametrize("n", range(3, 7))
def test_lifted_weyl_words(n):
    """Random Weyl words lift to isometries fixing p; the kernel is the twists."""
    M = chern_model(n)
    X = M.X
    S = M.surface
    rng = random.Random(n)
    for _ in range(25):
        w = [rng.randrange(n) for _ in range(rng.randint(0, 10))]
        phi_bar = weyl_matrix(X, w)
        phi = lift_weyl(M, phi_bar)
        G = M.lattice.gram
        assert im.matmul(im.matmul(im.transpose(phi), G), phi) == G
        assert im.matvec(phi, S.p) == S.p
        # NS coordinates of the model are (H, E_1..E_n): the induced map is phi_bar itself
        assert induced_ns_map(S, phi) == phi_bar


@pytest.mark.parametrize("n", range(3, 11))
def test_simple_reflection_macros_replay(n):
    M = chern_model(n)
    X = M.X
    start = M.lattice.standard_basis()
    for i in range(n):
        w = simple_reflection_macro(n, i)
        out = apply_word(start, w, surface=M.surface)
        want = [M.to_coords(line_bundle(X, apply_weyl(X, [i], D))) for D in standard_divisors(X)]
        assert list(out.vectors) == want


def test_alpha0_macro_on_three_points_contains_comparison_word():
    s = str(simple_reflection_macro(3, 0))
    assert "S1 S6 T(1) R4,5 R5,6 R4,5 R5,6" in s
    assert str(simple_reflection_macro(3, 1)) == "L2,3"


def test_realize_weyl_words():
    rng = random.Random(5)
    for n in (3, 4, 5):
        M = chern_model(n)
        X = M.X
        for _ in range(4):
            w = [rng.randrange(n) for _ in range(rng.randint(1, 4))]
            word = realize_weyl_as_mutations(X, w)
            out = apply_word(M.lattice.standard_basis(), word, surface=M.surface)
            want = [M.to_coords(line_bundle(X, apply_weyl(X, w, D))) for D in standard_divisors(X)]
            assert list(out.vectors) == want


def test_realize_on_weyl_image_collection():
    n = 4
    M = chern_model(n)
    X = M.X
    psi_word = [0, 2]
    L = X.vec(1, 0, 1)
    coll = tuple(line_bundle(X, im.add(L, apply_weyl(X, psi_word, D))) for D in standard_divisors(X))
    w = [1, 0]
    word = realize_weyl_as_mutations(X, w, coll)
    out = apply_word(M.basis_of(coll), word, surface=M.surface)
    want = [M.to_coords(line_bundle(X, im.add(L, apply_weyl(X, w + psi_word, D)))) for D in standard_divisors(X)]
    assert list(out.vectors) == want
