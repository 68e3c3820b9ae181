"""Regression suite replaying the explicit computations: one JSON line per assertion."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import intmat as im
from .blowup import (
    M0_GRAM,
    blow_up,
    center_multiple,
    contract,
    dc_gram,
    defect_contraction_check,
    degree_blowup_check,
    mk_gram,
    recover_center,
    standard_model,
)
from .core import Pseudolattice, apply_word, parse_word
from .picard import (
    CREMONA_TAIL,
    CREMONA_WORD,
    PicardLattice,
    apply_weyl,
    chern_model,
    collection_gram,
    curve_class,
    euler_pairing,
    factor_weyl,
    helix_shift,
    iota,
    line_bundle,
    simple_reflection_macro,
    special_position_check,
    standard_collection,
    ten_point_collection,
    twist,
)
from .search import ESCAPE_WORD, norm, normal_form, orbit_path, scramble
from .surface import classify, defect, is_even, lift_orthogonal, surface_from_lattice
from .toric import ToricSystem, standard_augmentation_search, standard_system

CREMONA_GRAM = (
    (1, 0, 0, -1, -1, -1),
    (0, 1, 0, -1, -1, -1),
    (0, 0, 1, -1, -1, -1),
    (0, 0, 0, 1, 3, 6),
    (0, 0, 0, 0, 1, 3),
    (0, 0, 0, 0, 0, 1),
)

ESCAPE_GRAM = (
    (1, 0, -1, -1, -1),
    (0, 1, -1, -1, -1),
    (0, 0, 1, 3, 6),
    (0, 0, 0, 1, 3),
    (0, 0, 0, 0, 1),
)


def plain(x):
    """JSON-friendly copy: tuples to lists, fractions to strings."""
    if isinstance(x, (list, tuple)):
        return [plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if hasattr(x, "__dataclass_fields__") or not isinstance(x, (int, str, bool, float, type(None))):
        return str(x)
    return x


@dataclass
class Assertion:
    check: str
    anchor: str
    expected: object
    got: object
    passed: bool

    def record(self) -> dict:
        return {"check": self.check, "anchor": self.anchor, "expected": plain(self.expected),
                "got": plain(self.got), "pass": self.passed}


@dataclass
class Report:
    assertions: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.assertions)

    def summary(self) -> dict:
        n_pass = sum(a.passed for a in self.assertions)
        return {"summary": {"total": len(self.assertions), "passed": n_pass,
                            "failed": len(self.assertions) - n_pass, "seconds": round(self.seconds, 3)}}


class _Suite:
    def __init__(self):
        self.out: list[Assertion] = []

    def eq(self, check, anchor, expected, got_fn: Callable):
        try:
            got = got_fn()
            ok = plain(got) == plain(expected)
        except Exception as exc:  # a crash is a failed assertion, not an abort
            got, ok = f"error: {type(exc).__name__}: {exc}", False
        self.out.append(Assertion(check, anchor, expected, got, ok))


def _escape_setting():
    """(a1, b1..b4) on the blow-up of the quadric model at +p (a1 first)."""
    S = blow_up(standard_model("Dc", 0).surface(), standard_model("Dc", 0).p)
    return S, S.lattice.standard_basis()


def _fmt_combo(v, names) -> str:
    out = ""
    for c, nm in zip(v, names):
        if not c:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        out += ("-" if c < 0 else ("+" if out else "")) + mag + nm
    return out or "0"


def _cremona_chern():
    """Chern-model basis (a1, a2, a3, b1, b2, b3) with a_i = [O_{E_i}(-1)], b_j = [O(jH)]."""
    M = chern_model(3)
    X = M.X
    cls = [curve_class(X, X.E(i), -1) for i in (1, 2, 3)]
    cls += [line_bundle(X, im.scale(j, X.H)) for j in (0, 1, 2)]
    return M, M.basis_of(cls)


def verify_paper(m0_gram=None) -> Report:
    """Run every assertion; `m0_gram` replaces the plane model (for fault injection)."""
    t0 = time.perf_counter()
    s = _Suite()
    m0 = Pseudolattice(m0_gram if m0_gram is not None else M0_GRAM)

    # plane model and its Serre operator
    s.eq("m0-gram", "1 & 3 & 6", [[1, 3, 6], [0, 1, 3], [0, 0, 1]], lambda: m0.gram)
    s.eq("m0-pairing", "chi(e_1, e_2) = 3", 3, lambda: m0.pairing(m0.unit(0), m0.unit(1)))
    s.eq("m0-serre", "(S-1)^2", [[9, 9, 9], [-18, -18, -18], [9, 9, 9]],
         lambda: (lambda d: im.matmul(d, d))(im.matsub(m0.serre, im.identity(3))))
    s.eq("m0-point", "p = e_3 - 2e_2 + e_1", [1, -2, 1], lambda: surface_from_lattice(m0).p)
    s.eq("m0-ns", "K_G = -3H", {"ns_gram": [[1]], "K": [-3], "K2": 9},
         lambda: (lambda S: {"ns_gram": S.ns_gram, "K": S.K, "K2": S.K_squared})(surface_from_lattice(m0)))
    s.eq("m0-class", "P^2", "P2", lambda: classify(surface_from_lattice(m0)).kind)

    # standard models
    s.eq("mk-display", "M_k block form", [[1, 0, 1, 1, 1], [0, 1, 1, 1, 1], [0, 0, 1, 3, 6],
                                          [0, 0, 0, 1, 3], [0, 0, 0, 0, 1]], lambda: mk_gram(2))
    s.eq("d0-display", "D_c with c = 0", [[1, 2, 2, 4], [0, 1, 0, 2], [0, 0, 1, 2], [0, 0, 0, 1]],
         lambda: dc_gram(0))
    s.eq("d0-even", "K_G = -2H", {"even": True, "K_div_2": True},
         lambda: (lambda S: {"even": is_even(S.ns_gram), "K_div_2": all(k % 2 == 0 for k in S.K)})(
             standard_model("Dc", 0).surface()))
    s.eq("dc-class", "NS(G) even", ["P1xP1"] * 7,
         lambda: [classify(standard_model("Dc", c).surface()).kind for c in range(-3, 4)])
    s.eq("mk-class", "K_0^num(X_{n-3})", [f"BlowupXk({k})" for k in range(1, 6)],
         lambda: [str(classify(standard_model("Mk", k).surface())) for k in range(1, 6)])
    s.eq("mk-defect", "delta(G) = 0", [0] * 6, lambda: [defect(standard_model("Mk", k).surface()) for k in range(6)])
    s.eq("mk-ranks", "b_i orthogonal to p", [[0] * k for k in range(6)],
         lambda: [[standard_model("Mk", k).surface().rank_of(standard_model("Mk", k).lattice.unit(i))
                   for i in range(k)] for k in range(6)])

    # blow-ups and contractions
    def _bl_m0():
        S0 = standard_model("M0").surface()
        return blow_up(S0, S0.p).lattice.gram
    s.eq("blowup-m0", "Bl_p M_0 = M_1", mk_gram(1), _bl_m0)
    s.eq("blowup-degree", "deg Bl_z G = deg G - chi(sigma, z)^2", [[9, 8, 1], [9, 5, 4]],
         lambda: [degree_blowup_check(standard_model("M0").surface(), n) for n in (1, 2)])

    def _contract_roundtrip():
        out = []
        for k in range(4):
            S = standard_model("Mk", k).surface()
            B = blow_up(S, tuple(-x for x in S.p))
            out.append(contract(B, B.lattice.unit(0)).lattice.gram == S.lattice.gram)
        return out
    s.eq("contract-blowup", "Bl_z G_f = G", [True] * 4, _contract_roundtrip)

    def _center():
        S1 = standard_model("Mk", 1).surface()
        f = S1.lattice.unit(0)
        z = recover_center(S1, f)
        Sf = contract(S1, f)
        return [z == Sf.p, center_multiple(S1, f), blow_up(Sf, z).lattice.gram == S1.lattice.gram]
    s.eq("recover-center", "z := (S-1)(f)", [True, 1, True], _center)
    s.eq("defect-contraction", "delta(G) = delta(G_e) + 1 - (K.e)^2",
         [[0, 0, 1]] * 5,
         lambda: [defect_contraction_check(standard_model("Mk", k).surface(),
                                           standard_model("Mk", k).lattice.unit(0)) for k in range(1, 6)])

    # the norm-4 escape word
    names = ["a1", "b1", "b2", "b3", "b4"]
    s.eq("escape-step1", "(-a_1+b_1, a_1, b_2, b_3, b_4)", ["-a1+b1", "a1", "b2", "b3", "b4"],
         lambda: (lambda S, b: [_fmt_combo(v, names) for v in apply_word(b, parse_word("L1")).vectors])(
             *_escape_setting()))

    def _escape_full():
        S, b = _escape_setting()
        return [_fmt_combo(v, names) for v in apply_word(b, parse_word(ESCAPE_WORD)).vectors]
    s.eq("escape-word", "a_1-b_2-b_3+3b_4", ["a1-b1+b2", "a1-b1+b3", "-a1+b1", "b4", "a1-b2-b3+3b4"], _escape_full)

    def _escape_ranks():
        S, b = _escape_setting()
        out = apply_word(b, parse_word(ESCAPE_WORD))
        return [S.rank_of(v) for v in out.vectors], norm(S, b), norm(S, out)
    s.eq("escape-ranks", "rank (0,0,1,1,1)", [[0, 0, 1, 1, 1], 4, 3], _escape_ranks)
    s.eq("escape-gram", "1 & 0 & -1 & -1 & -1", ESCAPE_GRAM,
         lambda: (lambda S, b: apply_word(b, parse_word(ESCAPE_WORD)).gram())(*_escape_setting()))
    s.eq("norms", "norm 3 / norm 4", [[3] * 6, [4] * 7],
         lambda: [[norm(standard_model("Mk", k).surface(), standard_model("Mk", k).lattice.standard_basis())
                   for k in range(6)],
                  [norm(standard_model("Dc", c).surface(), standard_model("Dc", c).lattice.standard_basis())
                   for c in range(-3, 4)]])

    # normal forms
    def _nf(model, want, seed):
        S = model.surface()
        sb, _ = scramble(model.lattice.standard_basis(), 12, seed=seed)
        out, cert = normal_form(S, sb)
        return out.gram() == want and cert.verify()
    s.eq("nf-m0", "Beilinson sequence", True, lambda: _nf(standard_model("M0"), M0_GRAM, 1))
    s.eq("nf-d5", "D_c to D_0", True, lambda: _nf(standard_model("Dc", 5), dc_gram(0), 2))
    s.eq("nf-m2", "M_2", True, lambda: _nf(standard_model("Mk", 2), mk_gram(2), 3))

    # the rank-6 comparison on three points
    abn = ["a1", "a2", "a3", "b1", "b2", "b3"]
    lat_cr = Pseudolattice(CREMONA_GRAM)
    b_cr = lat_cr.standard_basis()
    s.eq("cremona-word", "a_1+a_2+a_3+2b_1-3b_2",
         ["a2+a3+2b1-3b2+b3", "-a1-a3-2b1+3b2-b3", "-a1-a2-2b1+3b2-b3",
          "a1+a2+a3+3b1-3b2+b3", "b2", "a1+a2+a3+2b1-3b2"],
         lambda: [_fmt_combo(v, abn) for v in apply_word(b_cr, parse_word(CREMONA_WORD)).vectors])
    s.eq("cremona-gram", "Gram after sign change of first and last", CREMONA_GRAM,
         lambda: apply_word(b_cr, parse_word(CREMONA_WORD + " S1 S6")).gram())

    def _cremona_classes():
        M, b = _cremona_chern()
        X = M.X
        out = apply_word(b, parse_word(CREMONA_WORD + " S1 S6"))
        want = [curve_class(X, X.vec(1, 0, -1, -1), 0), curve_class(X, X.vec(1, -1, 0, -1), 0),
                curve_class(X, X.vec(1, -1, -1, 0), 0), line_bundle(X, X.vec(-1, 1, 1, 1)),
                line_bundle(X, X.H), line_bundle(X, X.vec(3, -1, -1, -1))]
        return list(out.vectors) == [M.to_coords(a) for a in want]
    s.eq("cremona-classes", "O_{H-E_2-E_3}, ..., O_X(3H-E_1-E_2-E_3)", True, _cremona_classes)

    def _cremona_final():
        M, b = _cremona_chern()
        X = M.X
        w = parse_word(CREMONA_WORD + " S1 S6 T1 " + CREMONA_TAIL)
        out = apply_word(b, w, surface=M.surface)
        want = [curve_class(X, X.vec(1, 0, -1, -1), -1), curve_class(X, X.vec(1, -1, 0, -1), -1),
                curve_class(X, X.vec(1, -1, -1, 0), -1), line_bundle(X, X.zero),
                line_bundle(X, X.vec(2, -1, -1, -1)), line_bundle(X, X.vec(4, -2, -2, -2))]
        return list(out.vectors) == [M.to_coords(a) for a in want]
    s.eq("cremona-final", "O_X(4H-2E_1-2E_2-2E_3)", True, _cremona_final)

    def _cremona_path():
        S = surface_from_lattice(lat_cr)
        t = apply_word(b_cr, parse_word(CREMONA_WORD + " S1 S6"))
        c = orbit_path(S, b_cr, t, budget=200_000)
        return bool(c) and c.verify() and c.isometry is None and c.word.count(type(parse_word("L1").steps[0])) + \
            c.word.count(type(parse_word("R1").steps[0])) <= 19
    s.eq("cremona-search", "L_{5,6} ... R_{5,6}", True, _cremona_path)

    # Chern model and Picard lattice
    X0 = PicardLattice(0)
    s.eq("euler-o-oh", "chi(e_1, e_2) = 3 on P^2", 3,
         lambda: euler_pairing(X0, line_bundle(X0, X0.zero), line_bundle(X0, X0.H)))
    X3 = PicardLattice(3)
    s.eq("twist-torsion", "(0, c_1(F), c_1(F)c_1(E)+d)", [0, [1, -1, 0, 0], 0 + 2 * 2],
         lambda: (lambda a: [a.r, list(a.c1), a.two_ch2])(
             twist(X3, curve_class(X3, X3.vec(1, -1), 0), X3.vec(2))))
    s.eq("helix-p2", "O(3H)", [[1, [1], 1], [1, [2], 4], [1, [3], 9]],
         lambda: [[a.r, list(a.c1), a.two_ch2] for a in helix_shift(X0, standard_collection(X0))])
    s.eq("reflect-e1e2", "permutes E_i and E_{i+1}", list(X3.E(2)), lambda: apply_weyl(X3, [1], X3.E(1)))
    s.eq("reflect-alpha0", "O_X(H-E_2-E_3)", [1, 0, -1, -1], lambda: apply_weyl(X3, [0], X3.E(1)))
    s.eq("macro-alpha0", "13 mutations, 2 flips, T(1), R_{4,5} R_{5,6} R_{4,5} R_{5,6}", True,
         lambda: "S1 S6 T(1) R4,5 R5,6 R4,5 R5,6" in str(simple_reflection_macro(3, 0)))

    X10 = PicardLattice(10)
    s.eq("iota-h", "-19H+6 sum E_i", [-19] + [6] * 10, lambda: im.matvec(iota(X10), X10.H))
    s.eq("iota-e", "-6H + 2 sum E_j - E_i", [[-6] + [2 if j != i else 1 for j in range(1, 11)] for i in range(1, 11)],
         lambda: [im.matvec(iota(X10), X10.E(i)) for i in range(1, 11)])
    s.eq("iota-factor", "W_X x <iota>", None, lambda: factor_weyl(X10, iota(X10)))
    s.eq("ten-point", "rank 13", [13, True],
         lambda: (lambda c: [len(c), collection_gram(X10, c) == collection_gram(X10, standard_collection(X10))])(
             ten_point_collection(X10)))

    sp = None

    def _sp():
        nonlocal sp
        sp = sp or special_position_check()
        return sp
    s.eq("special-D2", "D^2=-1", -1, lambda: _sp().D_squared)
    s.eq("special-KD", "-K_X D = 1", 1, lambda: _sp().minus_K_dot_D)
    s.eq("special-chiD", "chi(D) = 1", 1, lambda: _sp().chi_D)
    s.eq("special-chi-D", "chi(-D)=0", 0, lambda: _sp().chi_minus_D)
    s.eq("special-root", "(K_X+E_1)^2=-2", -2, lambda: _sp().root_squared)
    s.eq("special-orbit", "orthogonal transformation T", [True, True],
         lambda: [_sp().word is not None, _sp().explored <= 240])

    # kernel of the lifting map
    def _kernel_twist():
        M = chern_model(3)
        v1 = M.to_coords(line_bundle(M.X, M.X.H))
        phi = lift_orthogonal(M.surface, im.identity(4), M.v0, v1)
        return phi == M.twist_matrix(M.X.H)
    s.eq("lift-kernel", "twists with line bundles", True, _kernel_twist)

    # toric systems
    def _toric_shift():
        T = standard_system(4)
        return all(isinstance(T.rotate(k), ToricSystem) for k in range(len(T)))
    s.eq("toric-rotate", "(A_2, ..., A_n, A_1)", True, _toric_shift)
    s.eq("toric-x9", "(H, H, H)", ["terminal", 9, [[1], [1], [1]]],
         lambda: (lambda c: [c.status, c.length, c.final.divisors])(standard_augmentation_search(standard_system(9))))

    rep = Report(s.out, time.perf_counter() - t0)
    return rep
