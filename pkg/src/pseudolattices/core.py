"""Pseudolattices, exceptional bases and the mutation calculus."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from . import intmat as im


class LatticeError(ValueError):
    """Raised when an input violates a structural precondition."""


@dataclass(frozen=True)
class Pseudolattice:
    """Free abelian group Z^n with a non-degenerate integer form chi(v, w) = v^T G w."""

    gram: tuple

    def __post_init__(self):
        g = im.as_matrix(self.gram)
        n = len(g)
        if n == 0 or any(len(r) != n for r in g):
            raise LatticeError("Gram matrix must be square and non-empty")
        if any(not isinstance(x, int) for r in g for x in r):
            raise LatticeError("Gram matrix must have integer entries")
        object.__setattr__(self, "gram", g)
        if im.det(g) == 0:
            raise LatticeError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return im.det(self.gram)

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    def pairing(self, v: Sequence[int], w: Sequence[int]) -> int:
        if len(v) != self.rank or len(w) != self.rank:
            raise LatticeError(f"dimension mismatch: expected length {self.rank}")
        return im.bilinear(v, self.gram, w)

    def unit(self, i: int) -> tuple:
        """i-th ambient basis vector, 0-indexed."""
        return tuple(int(j == i) for j in range(self.rank))

    @cached_property
    def serre(self) -> tuple:
        return serre_operator(self)

    def standard_basis(self) -> "Basis":
        return Basis(self, tuple(self.unit(i) for i in range(self.rank)))


def pairing(lat: Pseudolattice, v, w) -> int:
    return lat.pairing(v, w)


def serre_operator(lat: Pseudolattice) -> tuple:
    """S = G^{-1} G^T, so that chi(v, w) = chi(w, S v).

    Integral (ints) when the lattice is unimodular, Fractions otherwise.
    """
    g = lat.gram
    s = im.matmul(im.inverse(g), im.transpose(g))
    if lat.unimodular:
        s = im.to_int_matrix(s)
    n = lat.rank
    # defining identity on all basis pairs: e_i^T G e_j == e_j^T G S e_i
    gs = im.matmul(g, s)
    for i in range(n):
        for j in range(n):
            if g[i][j] != gs[j][i]:
                raise ArithmeticError("Serre operator fails chi(v,w)=chi(w,Sv)")
    return s


def left_mutate_vec(lat: Pseudolattice, e, v) -> tuple:
    """v - chi(e, v) e"""
    c = lat.pairing(e, v)
    return tuple(x - c * y for x, y in zip(v, e))


def right_mutate_vec(lat: Pseudolattice, v, e) -> tuple:
    """v - chi(v, e) e"""
    c = lat.pairing(v, e)
    return tuple(x - c * y for x, y in zip(v, e))


@dataclass(frozen=True)
class Basis:
    """Ordered Z-basis of a pseudolattice, vectors in ambient coordinates."""

    lattice: Pseudolattice
    vectors: tuple

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        n = self.lattice.rank
        if len(vecs) != n or any(len(v) != n for v in vecs):
            raise LatticeError(f"a basis needs {n} vectors of length {n}")
        if abs(im.det(vecs)) != 1:
            raise LatticeError("vectors do not form a Z-basis (determinant is not +-1)")

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    @property
    def matrix(self) -> tuple:
        """Columns are the basis vectors."""
        return im.transpose(self.vectors)

    def gram(self) -> tuple:
        return gram_of(self)

    def is_exceptional(self) -> bool:
        return is_exceptional_basis(self)

    def replace(self, vectors) -> "Basis":
        return Basis(self.lattice, tuple(vectors))


def gram_of(b: Basis) -> tuple:
    lat = b.lattice
    gv = [im.matvec(lat.gram, w) for w in b.vectors]  # G w for each w
    return tuple(tuple(im.dot(v, gw) for gw in gv) for v in b.vectors)


def is_upper_unitriangular(g) -> bool:
    n = len(g)
    return all(g[i][i] == 1 for i in range(n)) and all(g[i][j] == 0 for i in range(n) for j in range(i))


def is_exceptional_basis(b: Basis) -> bool:
    return is_upper_unitriangular(gram_of(b))


# --- mutation words ------------------------------------------------------

@dataclass(frozen=True)
class LeftAt:
    i: int
    op = "L"


@dataclass(frozen=True)
class RightAt:
    i: int
    op = "R"


@dataclass(frozen=True)
class FlipSign:
    i: int
    op = "S"


@dataclass(frozen=True)
class HelixShift:
    op = "H"


@dataclass(frozen=True)
class TwistCanonical:
    m: int
    op = "T"


Atom = Union[LeftAt, RightAt, FlipSign, HelixShift, TwistCanonical]


def atom_str(a: Atom) -> str:
    if isinstance(a, (LeftAt, RightAt)):
        return f"{a.op}{a.i},{a.i + 1}"
    if isinstance(a, FlipSign):
        return f"S{a.i}"
    if isinstance(a, HelixShift):
        return "H"
    return f"T({a.m})"


@dataclass(frozen=True)
class MutationWord:
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __add__(self, other: "MutationWord") -> "MutationWord":
        return MutationWord(self.steps + tuple(other.steps))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __str__(self):
        return " ".join(atom_str(a) for a in self.steps) or "(empty)"

    def inverse(self) -> "MutationWord":
        """Word undoing this one (Left and Right swap, order reverses)."""
        out = []
        for a in reversed(self.steps):
            if isinstance(a, LeftAt):
                out.append(RightAt(a.i))
            elif isinstance(a, RightAt):
                out.append(LeftAt(a.i))
            elif isinstance(a, FlipSign):
                out.append(a)
            elif isinstance(a, TwistCanonical):
                out.append(TwistCanonical(-a.m))
            else:
                raise LatticeError("HelixShift has no atom inverse; expand it first")
        return MutationWord(tuple(out))

    def count(self, kind) -> int:
        return sum(1 for a in self.steps if isinstance(a, kind))


def word(*atoms: Atom) -> MutationWord:
    return MutationWord(tuple(atoms))


_TOKEN = re.compile(r"([LRSHT])\(?(-?\d+)?(?:,(\d+))?\)?$", re.IGNORECASE)


def parse_word(text: str) -> MutationWord:
    """Parse compact notation such as 'L1 R2 S3 H T-1'; 'L1,2' and 'T(1)' also work."""
    steps: list[Atom] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise LatticeError(f"cannot parse word token {tok!r}")
        head, num, second = m.group(1).upper(), m.group(2), m.group(3)
        if second is not None and (head not in "LR" or num is None or int(second) != int(num) + 1):
            raise LatticeError(f"cannot parse word token {tok!r}")
        if head in "LRS":
            if num is None:
                raise LatticeError(f"token {tok!r} needs an index")
            steps.append({"L": LeftAt, "R": RightAt, "S": FlipSign}[head](int(num)))
        elif head == "H":
            if num is not None:
                raise LatticeError(f"cannot parse word token {tok!r}")
            steps.append(HelixShift())
        else:
            steps.append(TwistCanonical(int(num) if num is not None else 1))
    return MutationWord(tuple(steps))


def _check_index(a: Atom, n: int):
    if isinstance(a, (LeftAt, RightAt)):
        if not 1 <= a.i <= n - 1:
            raise LatticeError(f"mutation index {a.i} out of range 1..{n - 1}")
    elif isinstance(a, FlipSign):
        if not 1 <= a.i <= n:
            raise LatticeError(f"sign index {a.i} out of range 1..{n}")


def apply_atom_vectors(lat: Pseudolattice, vecs: list, a: Atom, serre=None) -> None:
    """Apply one atom in place to a list of vectors (no checks beyond indices)."""
    if isinstance(a, LeftAt):
        i = a.i - 1
        e, f = vecs[i], vecs[i + 1]
        vecs[i], vecs[i + 1] = left_mutate_vec(lat, e, f), e
    elif isinstance(a, RightAt):
        i = a.i - 1
        e, f = vecs[i], vecs[i + 1]
        vecs[i], vecs[i + 1] = f, right_mutate_vec(lat, e, f)
    elif isinstance(a, FlipSign):
        vecs[a.i - 1] = tuple(-x for x in vecs[a.i - 1])
    elif isinstance(a, HelixShift):
        if serre is None:
            raise LatticeError("HelixShift needs surface data attached")
        s_inv = im.int_inverse(serre)
        first = vecs.pop(0)
        vecs.append(im.matvec(s_inv, first))
    elif isinstance(a, TwistCanonical):
        if serre is None:
            raise LatticeError("TwistCanonical needs surface data attached")
        m = a.m
        s = serre if m >= 0 else im.int_inverse(serre)
        for _ in range(abs(m)):
            vecs[:] = [im.matvec(s, v) for v in vecs]
    else:
        raise LatticeError(f"unknown atom {a!r}")


def apply_word(b: Basis, w: MutationWord | Iterable[Atom], surface=None, check: bool = True,
               check_each: bool = False) -> Basis:
    """Replay a mutation word on an exceptional basis.

    `surface` is any object with a `lattice` attribute sharing b's lattice (a
    SurfaceStructure); it unlocks HelixShift and TwistCanonical, which act by
    the Serre operator (the twist by the canonical class on geometric lattices).
    """
    lat = b.lattice
    n = lat.rank
    steps = w.steps if isinstance(w, MutationWord) else tuple(w)
    serre = None
    if any(isinstance(a, (HelixShift, TwistCanonical)) for a in steps):
        if surface is None:
            raise LatticeError("HelixShift/TwistCanonical need a surface structure")
        if surface.lattice.gram != lat.gram:
            raise LatticeError("surface structure belongs to a different lattice")
        serre = lat.serre
    vecs = list(b.vectors)
    if check and not is_exceptional_basis(b):
        raise LatticeError("input basis is not exceptional")
    for a in steps:
        _check_index(a, n)
        apply_atom_vectors(lat, vecs, a, serre)
        if check_each and not is_exceptional_basis(Basis(lat, tuple(vecs))):
            raise AssertionError(f"basis stopped being exceptional after {atom_str(a)}")
    out = Basis(lat, tuple(vecs))
    if check and not is_exceptional_basis(out):
        raise AssertionError("mutation produced a non-exceptional basis")
    return out


def helix_shift_word(n: int, lat: Pseudolattice | None = None, basis: Basis | None = None) -> MutationWord:
    """Mutation word realising the helix shift (e_2..e_n, S^{-1} e_1).

    The sign of the moved vector depends on the basis, so when a basis is
    given the trailing FlipSign is decided by replay.
    """
    steps: list[Atom] = [RightAt(i) for i in range(1, n)]
    if basis is not None:
        lat = basis.lattice
        vecs = list(basis.vectors)
        for a in steps:
            apply_atom_vectors(lat, vecs, a)
        target = im.matvec(im.int_inverse(lat.serre), basis.vectors[0])
        if vecs[-1] == target:
            pass
        elif vecs[-1] == tuple(-x for x in target):
            steps.append(FlipSign(n))
        else:
            raise AssertionError("right mutation chain does not reach S^{-1} e_1")
    return MutationWord(tuple(steps))


def expand_word(b: Basis, w: MutationWord, surface=None) -> MutationWord:
    """Rewrite HelixShift/TwistCanonical atoms into Left/Right/Flip atoms."""
    lat = b.lattice
    n = lat.rank
    out: list[Atom] = []
    cur = b
    for a in w.steps:
        if isinstance(a, HelixShift):
            piece = helix_shift_word(n, basis=cur)
        elif isinstance(a, TwistCanonical):
            # n helix shifts twist everything by S^{-1}
            steps: list[Atom] = []
            tmp = cur
            if a.m <= 0:
                for _ in range(-a.m * n):
                    h = helix_shift_word(n, basis=tmp)
                    tmp = apply_word(tmp, h, check=False)
                    steps.extend(h.steps)
            else:
                for _ in range(a.m * n):
                    # inverse helix shift: (S e_n, e_1, ..., e_{n-1}) via L chain
                    h = inverse_helix_shift_word(n, tmp)
                    tmp = apply_word(tmp, h, check=False)
                    steps.extend(h.steps)
            piece = MutationWord(tuple(steps))
        else:
            piece = MutationWord((a,))
        out.extend(piece.steps)
        cur = apply_word(cur, piece, check=False)
    return MutationWord(tuple(out))


def inverse_helix_shift_word(n: int, basis: Basis) -> MutationWord:
    """Word taking (e_1..e_n) to (S e_n, e_1, ..., e_{n-1})."""
    steps: list[Atom] = [LeftAt(i) for i in range(n - 1, 0, -1)]
    lat = basis.lattice
    vecs = list(basis.vectors)
    for a in steps:
        apply_atom_vectors(lat, vecs, a)
    target = im.matvec(lat.serre, basis.vectors[-1])
    if vecs[0] == tuple(-x for x in target):
        steps.append(FlipSign(1))
    elif vecs[0] != target:
        raise AssertionError("left mutation chain does not reach S e_n")
    return MutationWord(tuple(steps))


def coordinates_in(b: Basis, v) -> tuple:
    """Coordinates of an ambient vector v in basis b."""
    return im.to_int_vector(im.solve(b.matrix, v))
