"""Picard lattices of blown-up planes, the Chern-character model of K_0, and Weyl groups.

Divisors are integer vectors in the basis (H, E_1, ..., E_n).  K-theory
classes are ChernClass(r, c1, two_ch2) where two_ch2 = 2 ch_2 = c1^2 - 2 c2.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import intmat as im
from .core import (
    Basis,
    FlipSign,
    LatticeError,
    LeftAt,
    MutationWord,
    Pseudolattice,
    RightAt,
    TwistCanonical,
    apply_atom_vectors,
    apply_word,
    parse_word,
)
from .surface import SurfaceStructure, build_surface_structure, lift_orthogonal


@dataclass(frozen=True)
class PicardLattice:
    n_points: int

    def __post_init__(self):
        if self.n_points < 0:
            raise LatticeError("number of points must be non-negative")

    @property
    def dim(self) -> int:
        return self.n_points + 1

    @property
    def gram(self) -> tuple:
        d = self.dim
        return tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(d)) for i in range(d))

    def dot(self, x, y) -> int:
        return x[0] * y[0] - sum(a * b for a, b in zip(x[1:], y[1:]))

    def sq(self, x) -> int:
        return self.dot(x, x)

    @property
    def H(self) -> tuple:
        return (1,) + (0,) * self.n_points

    def E(self, i: int) -> tuple:
        """Exceptional class E_i, 1-indexed."""
        if not 1 <= i <= self.n_points:
            raise LatticeError(f"E_{i} does not exist on {self.n_points} points")
        return tuple(int(j == i) for j in range(self.dim))

    @property
    def zero(self) -> tuple:
        return (0,) * self.dim

    @property
    def sum_E(self) -> tuple:
        return (0,) + (1,) * self.n_points

    @property
    def K(self) -> tuple:
        return (-3,) + (1,) * self.n_points

    def vec(self, h: int, *es: int) -> tuple:
        es = tuple(es) + (0,) * (self.n_points - len(es))
        return (h,) + es

    def chi_line(self, D) -> int:
        """Riemann-Roch chi(O(D)) = 1 + (D^2 - D.K)/2."""
        num = self.sq(D) - self.dot(D, self.K)
        assert num % 2 == 0
        return 1 + num // 2

    def fmt(self, x) -> str:
        names = ["H"] + [f"E{i}" for i in range(1, self.dim)]
        out = ""
        for c, name in zip(x, names):
            if not c:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            if out:
                out += (" - " if c < 0 else " + ") + mag + name
            else:
                out = ("-" if c < 0 else "") + mag + name
        return out or "0"


# --- Chern classes --------------------------------------------------------

@dataclass(frozen=True)
class ChernClass:
    r: int
    c1: tuple
    two_ch2: int

    def flat(self) -> tuple:
        return (self.r,) + tuple(self.c1) + (self.two_ch2,)

    @classmethod
    def from_flat(cls, v) -> "ChernClass":
        v = tuple(v)
        return cls(v[0], v[1:-1], v[-1])

    def __neg__(self):
        return ChernClass(-self.r, tuple(-x for x in self.c1), -self.two_ch2)

    def __add__(self, o):
        return ChernClass(self.r + o.r, tuple(a + b for a, b in zip(self.c1, o.c1)), self.two_ch2 + o.two_ch2)

    def __sub__(self, o):
        return self + (-o)


def check_class(X: PicardLattice, a: ChernClass) -> None:
    if len(a.c1) != X.dim:
        raise LatticeError("first Chern class has the wrong length")
    if (X.sq(a.c1) - a.two_ch2) % 2:
        raise LatticeError("c1^2 - 2ch2 is odd: c2 would not be integral")


def line_bundle(X: PicardLattice, D) -> ChernClass:
    D = tuple(D)
    return ChernClass(1, D, X.sq(D))


def point_class(X: PicardLattice) -> ChernClass:
    return ChernClass(0, X.zero, 2)


def curve_class(X: PicardLattice, C, d: int = -1) -> ChernClass:
    """Class of O_C(d) for a smooth rational curve C; O_C = O - O(-C) has 2ch2 = -C^2."""
    C = tuple(C)
    return ChernClass(0, C, -X.sq(C) + 2 * d)


def euler_pairing(X: PicardLattice, a: ChernClass, b: ChernClass) -> int:
    """Riemann-Roch chi(a, b) on a rational surface (chi(O) = 1)."""
    check_class(X, a)
    check_class(X, b)
    e, f = a.r, b.r
    K = X.K
    num = (2 * e * f - 2 * X.dot(a.c1, b.c1) - e * X.dot(K, b.c1) + f * X.dot(K, a.c1)
           + f * a.two_ch2 + e * b.two_ch2)
    if num % 2:
        raise ArithmeticError("Euler pairing is not integral")
    return num // 2


def twist(X: PicardLattice, a: ChernClass, L) -> ChernClass:
    """a tensor O(L): (r, c1 + rL, 2ch2 + 2 c1.L + r L^2)."""
    L = tuple(L)
    c1 = tuple(x + a.r * y for x, y in zip(a.c1, L))
    return ChernClass(a.r, c1, a.two_ch2 + 2 * X.dot(a.c1, L) + a.r * X.sq(L))


def collection_gram(X: PicardLattice, classes) -> tuple:
    return tuple(tuple(euler_pairing(X, a, b) for b in classes) for a in classes)


def standard_divisors(X: PicardLattice) -> tuple:
    """(0, E_1, ..., E_n, H, 2H)"""
    n = X.n_points
    return (X.zero,) + tuple(X.E(i) for i in range(1, n + 1)) + (X.H, im.scale(2, X.H))


def standard_collection(X: PicardLattice) -> tuple:
    return tuple(line_bundle(X, D) for D in standard_divisors(X))


def helix_shift(X: PicardLattice, classes) -> tuple:
    """(c_2, ..., c_n, c_1 twisted by -K) for line-bundle classes."""
    classes = tuple(classes)
    for a in classes:
        if a.r != 1 or a.two_ch2 != X.sq(a.c1):
            raise LatticeError("helix shift is defined here for line-bundle classes only")
    minus_k = im.scale(-1, X.K)
    return classes[1:] + (twist(X, classes[0], minus_k),)


# --- the Chern model of K_0 as a pseudolattice ----------------------------

@dataclass(frozen=True)
class ChernModel:
    X: PicardLattice
    classes: tuple          # the standard collection, the ambient basis
    lattice: Pseudolattice
    chern_matrix: tuple     # columns are flattened Chern vectors of the ambient basis
    chern_inverse: tuple
    surface: SurfaceStructure

    def to_coords(self, a: ChernClass) -> tuple:
        check_class(self.X, a)
        return im.to_int_vector(im.matvec(self.chern_inverse, a.flat()))

    def from_coords(self, v) -> ChernClass:
        return ChernClass.from_flat(im.matvec(self.chern_matrix, v))

    def basis_of(self, classes) -> Basis:
        return Basis(self.lattice, tuple(self.to_coords(a) for a in classes))

    def classes_of(self, b: Basis) -> tuple:
        return tuple(self.from_coords(v) for v in b.vectors)

    def twist_matrix(self, L) -> tuple:
        cols = [self.to_coords(twist(self.X, self.from_coords(self.lattice.unit(j)), L))
                for j in range(self.lattice.rank)]
        return im.transpose(tuple(cols))

    @property
    def v0(self) -> tuple:
        """Coordinates of [O]."""
        return self.to_coords(line_bundle(self.X, self.X.zero))


@lru_cache(maxsize=None)
def chern_model(n_points: int) -> ChernModel:
    """K_0^num of the plane blown up in n points with ambient basis the standard collection."""
    X = PicardLattice(n_points)
    classes = standard_collection(X)
    gram = collection_gram(X, classes)
    lat = Pseudolattice(gram)
    cm = im.transpose(tuple(a.flat() for a in classes))
    cinv = im.inverse(cm)  # rational: K_0 is the index-2 sublattice 2ch2 = c1^2 mod 2
    to = lambda a: im.to_int_vector(im.matvec(cinv, a.flat()))  # noqa: E731
    p = to(point_class(X))
    O = line_bundle(X, X.zero)
    lifts = [to(line_bundle(X, X.H) - O)] + [to(line_bundle(X, X.E(i)) - O) for i in range(1, n_points + 1)]
    S = build_surface_structure(lat, p, ns_lifts=lifts)
    if tuple(S.K) != X.K:
        raise AssertionError("Chern model canonical class differs from K_X")
    return ChernModel(X, classes, lat, cm, cinv, S)


# --- roots and reflections --------------------------------------------------

def simple_roots(X: PicardLattice) -> tuple:
    """alpha_0 = H - E1 - E2 - E3 (n >= 3) and alpha_i = E_i - E_{i+1}."""
    n = X.n_points
    roots = []
    if n >= 3:
        roots.append(X.vec(1, -1, -1, -1))
    else:
        roots.append(None)
    for i in range(1, n):
        roots.append(im.sub(X.E(i), X.E(i + 1)))
    return tuple(roots)


def reflect(X: PicardLattice, alpha, x) -> tuple:
    """x - 2 (x.alpha)/alpha^2 alpha"""
    a2 = X.sq(alpha)
    if a2 == 0:
        raise LatticeError("cannot reflect in an isotropic vector")
    c = Fraction(2 * X.dot(x, alpha), a2)
    if c.denominator != 1:
        raise ArithmeticError("reflection is not integral on this vector")
    c = int(c)
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))


def reflection_matrix(X: PicardLattice, alpha) -> tuple:
    cols = [reflect(X, alpha, tuple(int(i == j) for i in range(X.dim))) for j in range(X.dim)]
    return im.transpose(tuple(cols))


@lru_cache(maxsize=None)
def simple_reflection_matrices(n_points: int) -> tuple:
    X = PicardLattice(n_points)
    return tuple(None if a is None else reflection_matrix(X, a) for a in simple_roots(X))


def _check_letter(X: PicardLattice, i: int):
    if not 0 <= i < X.n_points or (i == 0 and X.n_points < 3):
        raise LatticeError(f"no simple root alpha_{i} on {X.n_points} points")


def weyl_matrix(X: PicardLattice, word: Sequence[int]) -> tuple:
    """Matrix of s_{i1} o ... o s_{ik} for word [i1, ..., ik]."""
    mats = simple_reflection_matrices(X.n_points)
    m = im.identity(X.dim)
    for i in word:
        _check_letter(X, i)
        m = im.matmul(m, mats[i])
    return m


def apply_weyl(X: PicardLattice, word: Sequence[int], x) -> tuple:
    roots = simple_roots(X)
    for i in reversed(list(word)):
        _check_letter(X, i)
        x = reflect(X, roots[i], x)
    return tuple(x)


def is_orthogonal(X: PicardLattice, phi) -> bool:
    return im.matmul(im.matmul(im.transpose(phi), X.gram), phi) == X.gram


def fixes_K(X: PicardLattice, phi) -> bool:
    return im.matvec(phi, X.K) == X.K


@dataclass
class OrbitPath:
    found: bool
    word: Optional[list]
    explored: int


def weyl_orbit_path(X: PicardLattice, a, b, budget: int = 100_000) -> OrbitPath:
    """Breadth-first search for a simple-reflection word w with w(a) = b.

    The budget counts distinct visited vectors.  Words use the composition
    convention [i1, ..., ik] = s_{i1} o ... o s_{ik}.
    """
    a, b = tuple(a), tuple(b)
    if X.sq(a) != X.sq(b):
        return OrbitPath(False, None, 0)
    roots = simple_roots(X)
    letters = [i for i, r in enumerate(roots) if r is not None]
    prev = {a: None}
    q = deque([a])
    while q:
        x = q.popleft()
        if x == b:
            path = []
            while prev[x] is not None:
                x, i = prev[x]
                path.append(i)
            # path lists letters from the last applied to the first applied
            return OrbitPath(True, path, len(prev))
        for i in letters:
            y = reflect(X, roots[i], x)
            if y not in prev:
                if len(prev) >= budget:
                    return OrbitPath(False, None, len(prev))
                prev[y] = (x, i)
                q.append(y)
    return OrbitPath(False, None, len(prev))


def root_orbit(X: PicardLattice, a, limit: int = 10_000) -> set:
    roots = simple_roots(X)
    seen = {tuple(a)}
    q = deque([tuple(a)])
    while q:
        x = q.popleft()
        for r in roots:
            if r is None:
                continue
            y = reflect(X, r, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise LatticeError("root orbit exceeds limit")
                q.append(y)
    return seen


def iota(X: PicardLattice) -> tuple:
    """Involution x -> -x - 2 (x.K) K at ten points: fixes K, acts as -1 on K-perp."""
    if X.n_points != 10:
        raise LatticeError("iota is defined for the plane blown up in ten points")
    K = X.K
    cols = []
    for j in range(X.dim):
        x = tuple(int(i == j) for i in range(X.dim))
        c = 2 * X.dot(x, K)
        cols.append(tuple(-xi - c * ki for xi, ki in zip(x, K)))
    m = im.transpose(tuple(cols))
    assert im.matmul(m, m) == im.identity(X.dim)
    assert is_orthogonal(X, m)
    assert fixes_K(X, m)
    return m


def chamber_vector(X: PicardLattice) -> tuple:
    """A vector strictly inside the fundamental chamber of the simple roots."""
    n = X.n_points
    cs = list(range(n, 0, -1))
    c0 = sum(cs[:3]) + 1 if n >= 3 else (sum(cs) + 1)
    return (c0,) + tuple(-c for c in cs)


def descend_to_chamber(X: PicardLattice, y, floor: Optional[int] = None, budget: int = 1_000_000):
    """Greedy reflection of y into the closed fundamental chamber.

    Each step strictly lowers y.h for the interior vector h = chamber_vector(X),
    and every Weyl image w(d) of a chamber vector d satisfies w(d).h >= d.h.
    So with floor = d.h the descent either reaches the chamber or proves that
    y is not in the orbit of d (returns None).  The budget is only a guard.
    """
    roots = simple_roots(X)
    h = chamber_vector(X)
    y = tuple(y)
    letters = []
    for _ in range(budget):
        if floor is not None and X.dot(y, h) < floor:
            return None
        for i, r in enumerate(roots):
            if r is not None and X.dot(y, r) < 0:
                y = reflect(X, r, y)
                letters.append(i)
                break
        else:
            return letters, y
    return None


def weyl_transport(X: PicardLattice, x, d) -> Optional[list]:
    """Word w with w(d) = x, for d in the closed chamber; None if x is not in W d."""
    h = chamber_vector(X)
    res = descend_to_chamber(X, x, floor=X.dot(d, h))
    if res is None or res[1] != tuple(d):
        return None
    # s_{ik} ... s_{i1} x = d, so x = s_{i1} o ... o s_{ik} (d)
    return res[0]


@dataclass
class StabilizerReport:
    status: str                 # "found" | "not-found"
    word: Optional[list]        # phi = [iota o] s_{w1} o ... o s_{wk}
    uses_iota: bool = False
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"


def factor_weyl(X: PicardLattice, phi, budget: int = 1_000_000) -> Optional[list]:
    """Word w with weyl_matrix(w) == phi, or None when phi is not in the Weyl group."""
    h = chamber_vector(X)
    res = descend_to_chamber(X, im.matvec(phi, h), floor=X.dot(h, h), budget=budget)
    if res is None:
        return None
    letters, y = res
    if y != h:
        return None
    # s_{ik} ... s_{i1} phi h = h and h has trivial stabiliser, so phi = s_{i1} o ... o s_{ik}
    word = list(letters)
    if weyl_matrix(X, word) != im.as_matrix(phi):
        return None
    return word


def stabilizer_membership_report(X: PicardLattice, phi, budget: int = 1_000_000) -> StabilizerReport:
    phi = im.as_matrix(phi)
    if not is_orthogonal(X, phi):
        raise LatticeError("phi is not orthogonal")
    if not fixes_K(X, phi):
        raise LatticeError("phi does not fix K")
    w = factor_weyl(X, phi, budget)
    if w is not None:
        return StabilizerReport("found", w, False, "phi lies in the Weyl group")
    if X.n_points == 10:
        i = iota(X)
        w = factor_weyl(X, im.matmul(i, phi), budget)
        if w is not None:
            return StabilizerReport("found", w, True, "phi = iota o w")
    return StabilizerReport("not-found", None, False, "no factorisation within budget")


# --- Weyl elements as mutation words ---------------------------------------

# word from the two-realisation comparison on three points, 1-indexed on a 6-block
CREMONA_WORD = "L5 R3 R2 L4 L3 R2 R1 L2 R3 R4 L2 L3 R5"
CREMONA_FLIPS = (1, 6)
CREMONA_TAIL = "R4 R5 R4 R5"


def _shift(w: MutationWord, o: int) -> list:
    out = []
    for a in w.steps:
        if isinstance(a, LeftAt):
            out.append(LeftAt(a.i + o))
        elif isinstance(a, RightAt):
            out.append(RightAt(a.i + o))
        elif isinstance(a, FlipSign):
            out.append(FlipSign(a.i + o))
        else:
            out.append(a)
    return out


def lift_weyl(model: ChernModel, phi_bar) -> tuple:
    """Isometry of the Chern model fixing [O] and p that induces phi_bar on Pic."""
    return lift_orthogonal(model.surface, phi_bar, model.v0)


def _block_twist_word(model: ChernModel, vecs: list, start: int, size: int, L) -> list:
    """Twist the block vecs[start:start+size] by L via inverse helix shifts in the block."""
    lat = model.lattice
    X = model.X
    steps = []
    for _ in range(size):
        last = vecs[start + size - 1]
        target = model.to_coords(twist(X, model.from_coords(last), L))
        chunk = [LeftAt(start + k) for k in range(size - 1, 0, -1)]  # 1-indexed positions
        for a in chunk:
            apply_atom_vectors(lat, vecs, a)
        if vecs[start] == tuple(-x for x in target):
            chunk.append(FlipSign(start + 1))
            apply_atom_vectors(lat, vecs, chunk[-1])
        elif vecs[start] != target:
            raise AssertionError("block helix shift did not produce the twisted class")
        steps.extend(chunk)
    return steps


def _fix_signs(vecs: list, target: Sequence) -> list:
    flips = []
    for i, (v, t) in enumerate(zip(vecs, target)):
        if v == t:
            continue
        if v == tuple(-x for x in t):
            flips.append(FlipSign(i + 1))
            vecs[i] = t
        else:
            raise AssertionError(f"position {i + 1} differs beyond sign")
    return flips


@lru_cache(maxsize=None)
def simple_reflection_macro(n_points: int, i: int) -> MutationWord:
    """Mutation word carrying the standard collection to its image under s_{alpha_i}."""
    model = chern_model(n_points)
    X = model.X
    _check_letter(X, i)
    lat = model.lattice
    start = model.lattice.standard_basis()
    phi = weyl_matrix(X, [i])
    target = [model.to_coords(line_bundle(X, im.matvec(phi, D))) for D in standard_divisors(X)]
    if i > 0:
        # O(E_i), O(E_{i+1}) sit at positions i+1, i+2 and are mutually orthogonal
        w = MutationWord((LeftAt(i + 1),))
        out = apply_word(start, w)
        assert list(out.vectors) == target
        return w
    n = n_points
    o = n - 3
    prefix = [LeftAt(k) for k in range(1, n + 1)]  # -> (a_1..a_n, O, O(H), O(2H))
    for j in range(4, n + 1):  # a_j leftwards past a_1, a_2, a_3
        prefix += [LeftAt(j - 1), LeftAt(j - 2), LeftAt(j - 3)]
    prefix_w = MutationWord(tuple(prefix))
    vecs = list(apply_word(start, prefix_w).vectors)
    core = _shift(parse_word(CREMONA_WORD), o) + [FlipSign(o + f) for f in CREMONA_FLIPS]
    for a in core:
        apply_atom_vectors(lat, vecs, a)
    if o == 0:
        tw = [TwistCanonical(1)]
        apply_atom_vectors(lat, vecs, tw[0], lat.serre)
    else:
        K3 = X.vec(-3, 1, 1, 1)
        tw = _block_twist_word(model, vecs, o, 6, K3)
    core += tw
    tail = _shift(parse_word(CREMONA_TAIL), o)
    for a in tail:
        apply_atom_vectors(lat, vecs, a)
    core += tail
    # the block now holds the image of (a_1, a_2, a_3, O, O(H), O(2H)) under the lift
    lifted = lift_weyl(model, phi)
    expected = [im.matvec(lifted, v) for v in apply_word(start, prefix_w).vectors]
    core += _fix_signs(vecs, expected)
    word = prefix_w + MutationWord(tuple(core)) + prefix_w.inverse()
    out = apply_word(start, word, surface=model.surface)
    if list(out.vectors) != target:
        raise AssertionError("simple reflection macro does not replay")
    return word


def collection_divisors(X: PicardLattice, classes) -> tuple:
    out = []
    for a in classes:
        if a.r != 1 or a.two_ch2 != X.sq(a.c1):
            raise LatticeError("collection must consist of line-bundle classes")
        out.append(tuple(a.c1))
    return tuple(out)


def weyl_frame_of(X: PicardLattice, divisors) -> tuple:
    """(L, psi) with divisors = L + psi(0, E_1, .., E_n, H, 2H) for psi fixing K."""
    n = X.n_points
    divisors = [tuple(d) for d in divisors]
    if len(divisors) != n + 3:
        raise LatticeError("collection has the wrong length")
    L = divisors[0]
    rel = [im.sub(d, L) for d in divisors]
    cols = [rel[n + 1]] + rel[1:n + 1]
    psi = im.transpose(tuple(cols))
    if rel[n + 2] != im.scale(2, rel[n + 1]) or not is_orthogonal(X, psi) or not fixes_K(X, psi):
        raise LatticeError("collection is not a Weyl image of the standard collection")
    return L, psi


def realize_weyl_as_mutations(X: PicardLattice, word: Sequence[int], collection=None) -> MutationWord:
    """Mutation word (with flips and canonical twists) realising a Weyl word.

    On the standard collection twisted by L and moved by psi, the result
    replays to the collection with divisors L + phi psi(...), where phi is the
    Weyl element s_{w1} o ... o s_{wk}.
    """
    n = X.n_points
    word = list(word)
    for i in word:
        _check_letter(X, i)
    if collection is None:
        collection = standard_collection(X)
    L, psi = weyl_frame_of(X, collection_divisors(X, collection))
    if psi != im.identity(X.dim):
        phi = weyl_matrix(X, word)
        conj = im.matmul(im.matmul(im.int_inverse(psi), phi), psi)
        w2 = factor_weyl(X, conj)
        if w2 is None:
            raise LatticeError("conjugated element could not be factored in the Weyl group")
        word = w2
    out = MutationWord(())
    for i in word:
        out = out + simple_reflection_macro(n, i)
    return out


# --- ten points and special position -----------------------------------------

def ten_point_divisors(X: Optional[PicardLattice] = None) -> tuple:
    X = X or PicardLattice(10)
    i = iota(X)
    return tuple(im.matvec(i, D) for D in standard_divisors(X))


def ten_point_collection(X: Optional[PicardLattice] = None) -> tuple:
    X = X or PicardLattice(10)
    classes = tuple(line_bundle(X, D) for D in ten_point_divisors(X))
    g = collection_gram(X, classes)
    if len(classes) != 13 or any(g[k][k] != 1 for k in range(13)) or any(g[a][b] for a in range(13) for b in range(a)):
        raise AssertionError("ten-point collection is not numerically exceptional")
    return classes


@dataclass
class SpecialPositionReport:
    D: tuple
    D_squared: int
    minus_K_dot_D: int
    chi_D: int
    chi_minus_D: int
    root: tuple
    root_squared: int
    target_root: tuple
    word: Optional[list]
    explored: int
    transported_system: Optional[tuple]

    def checks(self) -> dict:
        return {
            "D^2 = -1": self.D_squared == -1,
            "-K.D = 1": self.minus_K_dot_D == 1,
            "chi(D) = 1": self.chi_D == 1,
            "chi(-D) = 0": self.chi_minus_D == 0,
            "(K+E1)^2 = -2": self.root_squared == -2,
            "orbit word found": self.word is not None,
        }

    @property
    def ok(self) -> bool:
        return all(self.checks().values())


def special_position_check(budget: int = 240) -> SpecialPositionReport:
    from .toric import from_divisors  # local import to avoid a cycle

    X = PicardLattice(8)
    D = X.vec(4, -2, -2, -2, -1, -1, -1, -1, -1)
    root = im.add(X.K, X.E(1))
    alpha0 = simple_roots(X)[0]
    path = weyl_orbit_path(X, root, alpha0, budget=budget)
    system = None
    if path.found:
        T = weyl_matrix(X, path.word)
        std = from_divisors(X, standard_divisors(X))
        system = tuple(im.matvec(T, A) for A in std.divisors)
        if system[0] != D:
            raise AssertionError("transported toric system does not start with D")
    return SpecialPositionReport(
        D=D,
        D_squared=X.sq(D),
        minus_K_dot_D=-X.dot(X.K, D),
        chi_D=X.chi_line(D),
        chi_minus_D=X.chi_line(im.scale(-1, D)),
        root=root,
        root_squared=X.sq(root),
        target_root=alpha0,
        word=path.word,
        explored=path.explored,
        transported_system=system,
    )
