"""Acceptance checks, one PASS/FAIL line per criterion.

Run under pytest (each test prints its line) or directly:
    python tests/test_acceptance.py
"""
import random
import statistics
import sys
import time
from pathlib import Path

import pytest

from pseudolattices import intmat as im
from pseudolattices import io
from pseudolattices.blowup import (
    M0_GRAM,
    blow_up,
    contract,
    dc_gram,
    defect_contraction_check,
    degree_blowup_check,
    mk_gram,
    recover_center,
    standard_model,
)
from pseudolattices.core import Pseudolattice, apply_word, parse_word
from pseudolattices.picard import (
    CREMONA_TAIL,
    CREMONA_WORD,
    PicardLattice,
    apply_weyl,
    chern_model,
    collection_gram,
    curve_class,
    fixes_K,
    iota,
    is_orthogonal,
    lift_weyl,
    line_bundle,
    simple_reflection_matrices,
    special_position_check,
    standard_collection,
    ten_point_collection,
    ten_point_divisors,
    weyl_matrix,
    weyl_orbit_path,
)
from pseudolattices.search import ESCAPE_WORD, normal_form, scramble
from pseudolattices.surface import (
    classify,
    find_point_like,
    induced_ns_map,
    lift_orthogonal,
    surface_from_lattice,
)
from pseudolattices.toric import (
    augment,
    from_collection,
    from_divisors,
    standard_augmentation_search,
    standard_system,
    to_collection,
)
from pseudolattices.verify import CREMONA_GRAM, ESCAPE_GRAM, verify_paper

FIX = Path(__file__).resolve().parents[1] / "fixtures"


def report(num, ok, detail, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# -- individual criteria: each returns (ok, detail) --------------------------

def check_1():
    runs = []
    for _ in range(20):
        t0 = time.perf_counter()
        lat = Pseudolattice(M0_GRAM)
        d = im.matsub(lat.serre, im.identity(3))
        sq = im.matmul(d, d)
        pts = find_point_like(lat)
        runs.append(time.perf_counter() - t0)
    ms = statistics.median(runs) * 1e3
    ok = (sq == ((9, 9, 9), (-18, -18, -18), (9, 9, 9))
          and {tuple(p) for p in pts} <= {(1, -2, 1), (-1, 2, -1)} and len(pts) >= 1
          and ms < 1.0)
    return ok, f"(S-1)^2 exact, point-like {pts[0]}, median {ms:.3f} ms"


def check_2():
    S0 = standard_model("Dc", 0)
    S = blow_up(S0.surface(), S0.p)
    b = S.lattice.standard_basis()
    a1, b1, b2, b3, b4 = (S.lattice.unit(i) for i in range(5))
    out = apply_word(b, parse_word(ESCAPE_WORD))
    comb = lambda *terms: tuple(sum(c * v[i] for c, v in terms) for i in range(5))  # noqa: E731
    want = (
        comb((1, a1), (-1, b1), (1, b2)),
        comb((1, a1), (-1, b1), (1, b3)),
        comb((-1, a1), (1, b1)),
        b4,
        comb((1, a1), (-1, b2), (-1, b3), (3, b4)),
    )
    ranks = tuple(S.rank_of(v) for v in out.vectors)
    ok = (len(parse_word(ESCAPE_WORD)) == 6 and out.vectors == want
          and ranks == (0, 0, 1, 1, 1) and out.gram() == ESCAPE_GRAM)
    return ok, f"6-atom word, ranks {ranks}, Gram matches the displayed matrix"


def check_3():
    M = chern_model(3)
    X = M.X
    lat_cr = Pseudolattice(CREMONA_GRAM)
    t0 = time.perf_counter()
    w1 = parse_word(CREMONA_WORD + " S1 S6")
    g = apply_word(lat_cr.standard_basis(), w1).gram()
    start = M.basis_of([curve_class(X, X.E(i), -1) for i in (1, 2, 3)]
                       + [line_bundle(X, im.scale(j, X.H)) for j in (0, 1, 2)])
    out = apply_word(start, parse_word(CREMONA_WORD + " S1 S6 T1 " + CREMONA_TAIL), surface=M.surface)
    ms = (time.perf_counter() - t0) * 1e3
    want = [curve_class(X, X.vec(1, 0, -1, -1), -1), curve_class(X, X.vec(1, -1, 0, -1), -1),
            curve_class(X, X.vec(1, -1, -1, 0), -1), line_bundle(X, X.zero),
            line_bundle(X, X.vec(2, -1, -1, -1)), line_bundle(X, X.vec(4, -2, -2, -2))]
    n_mut = sum(1 for a in parse_word(CREMONA_WORD) if a.op in "LR")
    ok = (n_mut == 13 and g == CREMONA_GRAM
          and list(out.vectors) == [M.to_coords(a) for a in want] and ms < 10)
    return ok, f"13 mutations + flips give the rank-6 Gram; final collection exact; {ms:.2f} ms"


def check_4():
    t0 = time.perf_counter()
    failures = []
    count = 0
    cases = [(standard_model("Mk", k), mk_gram(k)) for k in range(6)]
    cases += [(standard_model("Dc", c), dc_gram(0)) for c in range(-3, 4)]
    for model, want in cases:
        S = model.surface()
        for seed in range(50):
            length = 1 + seed % 12
            sb, _ = scramble(model.lattice.standard_basis(), length, seed=seed)
            nf, cert = normal_form(S, sb)
            count += 1
            if nf.gram() != want or not cert.verify():
                failures.append((model.label, seed))
    secs = time.perf_counter() - t0
    ok = not failures and secs < 60
    return ok, f"{count} scrambles, {len(failures)} failures, {secs:.1f} s"


def check_5():
    rng = random.Random(2024)
    bad = 0
    for _ in range(200):
        k = rng.randrange(5)
        n = rng.choice([-3, -2, -1, 0, 1, 2, 3])
        S = standard_model("Mk", k).surface()
        z = tuple(n * x for x in S.p)
        B = blow_up(S, z)
        f = B.lattice.unit(0)
        C = contract(B, f)
        z2 = recover_center(B, f)
        again = blow_up(C, z2)
        d, de, qke = defect_contraction_check(B, f)
        before, after, _ = degree_blowup_check(S, n)
        if not (C.lattice.gram == S.lattice.gram and C.p == S.p and z2 == z
                and again.lattice.gram == B.lattice.gram
                and d == de + 1 - qke * qke and after == before - n * n):
            bad += 1
    return bad == 0, f"200 randomized blow-up/contract cases over M0..M4, {bad} failures"


def check_6():
    got = {}
    want = {"m0.json": "P2"}
    want.update({f"mk/m{k}.json": f"BlowupXk({k})" for k in range(1, 8)})
    want.update({f"dc/d{c}.json": "P1xP1" for c in range(-5, 6)})
    for rel in want:
        S = io.surface_from_json(io.load(FIX / rel))
        got[rel] = str(classify(S))
    S0 = standard_model("M0").surface()
    mutant = surface_from_lattice(blow_up(S0, tuple(-2 * x for x in S0.p)).lattice)
    mk = classify(mutant).kind
    ok = got == want and mk == "NoExceptionalBasis"
    return ok, f"{len(want)} fixtures classified, mutant -> {mk}"


def check_7():
    refl_ok = True
    for n in range(1, 11):
        X = PicardLattice(n)
        for r in simple_reflection_matrices(n):
            if r is None:  # no alpha_0 below three points
                continue
            refl_ok &= is_orthogonal(X, r) and im.matmul(r, r) == im.identity(X.dim) and fixes_K(X, r)
    X = PicardLattice(10)
    m = iota(X)
    iota_ok = im.matvec(m, X.H) == (-19,) + (6,) * 10 and all(
        im.matvec(m, X.E(i)) == (-6,) + tuple(2 - (j == i) for j in range(1, 11)) for i in range(1, 11))
    cls = ten_point_collection(X)
    g = collection_gram(X, cls)
    ten_ok = len(cls) == 13 and g == collection_gram(X, standard_collection(X)) and all(
        g[i][i] == 1 and all(g[i][j] == 0 for j in range(i)) for i in range(13))
    return refl_ok and iota_ok and ten_ok, f"reflections n<=10 {refl_ok}, iota {iota_ok}, ten-point {ten_ok}"


def check_8():
    t0 = time.perf_counter()
    rep = special_position_check(budget=240)
    X = PicardLattice(8)
    target = X.vec(1, -1, -1, -1)
    path = weyl_orbit_path(X, im.add(X.K, X.E(1)), target, budget=240)
    secs = time.perf_counter() - t0
    ok = (rep.ok and path.found and apply_weyl(X, path.word, im.add(X.K, X.E(1))) == target
          and path.explored <= 240 and secs < 1)
    return ok, f"D^2=-1, -K.D=1, chi(D)=1, chi(-D)=0, (K+E1)^2=-2; word of length {len(path.word or [])}, " \
               f"{path.explored} nodes, {secs * 1e3:.0f} ms"


def check_9():
    bad = 0
    rng = random.Random(9)
    for n in range(3, 7):
        M = chern_model(n)
        X, S, G = M.X, M.surface, M.lattice.gram
        for _ in range(100):
            w = [rng.randrange(n) for _ in range(rng.randint(0, 12))]
            phi_bar = weyl_matrix(X, w)
            phi = lift_weyl(M, phi_bar)
            if im.matmul(im.matmul(im.transpose(phi), G), phi) != G or im.matvec(phi, S.p) != S.p \
                    or induced_ns_map(S, phi) != phi_bar:
                bad += 1
                continue
            # a second lift differing on [O]; the quotient lies in the kernel
            L = X.vec(*(rng.randint(-2, 2) for _ in range(X.dim)))
            other = lift_orthogonal(S, phi_bar, M.v0, M.to_coords(line_bundle(X, L)))
            k = im.matmul(im.int_inverse(phi), other)
            if induced_ns_map(S, k) != im.identity(X.dim) or im.matvec(k, S.p) != S.p:
                bad += 1
                continue
            solved = M.from_coords(im.matvec(k, M.v0)).c1
            if k != M.twist_matrix(solved):
                bad += 1
    return bad == 0, f"n=3..6, 400 lifted Weyl words, kernel elements equal twists, {bad} failures"


def check_10():
    rng = random.Random(10)
    bad = 0
    for _ in range(100):
        T = standard_system(0)
        for _ in range(rng.randint(0, 7)):
            T = augment(T, rng.randint(1, len(T) + 1))
        if from_collection(T.X, to_collection(T)) != T:
            bad += 1
    ch = standard_augmentation_search(standard_system(9))
    chain_ok = ch.status == "terminal" and ch.length == 9 and ch.final.divisors == ((1,), (1,), (1,))
    X = PicardLattice(10)
    stuck = standard_augmentation_search(from_divisors(X, ten_point_divisors(X)))
    ok = bad == 0 and chain_ok and stuck.status == "Stuck"
    return ok, f"100 round trips ({bad} failures), X9 chain {ch.length} steps, iota system {stuck.status}"


def check_11():
    t0 = time.perf_counter()
    rep = verify_paper()
    secs = time.perf_counter() - t0
    ok = rep.ok and len(rep.assertions) >= 25 and all(a.anchor for a in rep.assertions) and secs < 120
    return ok, f"{sum(a.passed for a in rep.assertions)}/{len(rep.assertions)} anchored assertions, {secs:.1f} s"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11]


@pytest.mark.parametrize("num", range(1, 12))
def test_criterion(num, capsys):
    ok, detail = CHECKS[num - 1]()
    assert report(num, ok, detail, capsys), detail


if __name__ == "__main__":
    results = [report(i + 1, *c()) for i, c in enumerate(CHECKS)]
    sys.exit(0 if all(results) else 1)
