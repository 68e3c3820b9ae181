"""Toric systems: cyclic divisor sequences with the intersection pattern of a toric surface."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import intmat as im
from .core import LatticeError
from .picard import (
    PicardLattice,
    apply_weyl,
    collection_gram,
    line_bundle,
    standard_divisors,
    weyl_transport,
)


class ToricError(LatticeError):
    pass


def toric_failures(X: PicardLattice, divisors) -> list[str]:
    A = [tuple(a) for a in divisors]
    n = len(A)
    bad = []
    if n < 3:
        return ["fewer than three divisors"]
    if any(len(a) != X.dim for a in A):
        return ["divisor of the wrong length"]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            want = 1 if adjacent else 0
            got = X.dot(A[i], A[j])
            if got != want:
                bad.append(f"A{i + 1}.A{j + 1} = {got}, expected {want}")
    total = tuple(sum(c) for c in zip(*A))
    if im.add(total, X.K) != X.zero:
        bad.append("sum of divisors is not -K")
    return bad


@dataclass(frozen=True)
class ToricSystem:
    X: PicardLattice
    divisors: tuple

    def __post_init__(self):
        divs = tuple(tuple(int(x) for x in a) for a in self.divisors)
        object.__setattr__(self, "divisors", divs)
        bad = toric_failures(self.X, divs)
        if bad:
            raise ToricError("not a toric system: " + "; ".join(bad))

    def __len__(self):
        return len(self.divisors)

    def squares(self) -> tuple:
        return tuple(self.X.sq(a) for a in self.divisors)

    def rotate(self, k: int = 1) -> "ToricSystem":
        d = self.divisors
        k %= len(d)
        return ToricSystem(self.X, d[k:] + d[:k])


def from_divisors(X: PicardLattice, divisors) -> ToricSystem:
    """A_i = D_{i+1} - D_i and A_n = D_1 - K - D_n (no exceptionality check)."""
    D = [tuple(d) for d in divisors]
    n = len(D)
    A = [im.sub(D[i + 1], D[i]) for i in range(n - 1)]
    A.append(im.sub(im.sub(D[0], X.K), D[-1]))
    return ToricSystem(X, tuple(A))


def from_collection(X: PicardLattice, divisors) -> ToricSystem:
    """Toric system of a numerically exceptional line-bundle collection O(D_1), ..., O(D_n)."""
    D = [tuple(d) for d in divisors]
    g = collection_gram(X, [line_bundle(X, d) for d in D])
    n = len(D)
    if any(g[i][i] != 1 for i in range(n)) or any(g[i][j] for i in range(n) for j in range(i)):
        raise ToricError("collection is not numerically exceptional")
    return from_divisors(X, D)


def to_collection(T: ToricSystem, D1=None) -> tuple:
    """D_{i+1} = D_1 + A_1 + ... + A_i; the last divisor A_n is not used."""
    X = T.X
    d = tuple(D1) if D1 is not None else X.zero
    out = [d]
    for a in T.divisors[:-1]:
        d = im.add(d, a)
        out.append(d)
    return tuple(out)


def standard_system(n_points: int) -> ToricSystem:
    X = PicardLattice(n_points)
    return from_collection(X, standard_divisors(X))


def _embed(a, extra: int = 1) -> tuple:
    return tuple(a) + (0,) * extra


def augment(T: ToricSystem, m: int = 1) -> ToricSystem:
    """Blow up one more point E = E_{n+1}: (E, A_1 - E, A_2, ..., A_{n-1}, A_n - E),
    rotated so that E sits at position m (1-indexed)."""
    X = T.X
    Y = PicardLattice(X.n_points + 1)
    E = Y.E(Y.n_points)
    A = [_embed(a) for a in T.divisors]
    seq = [E, im.sub(A[0], E)] + A[1:-1] + [im.sub(A[-1], E)]
    n1 = len(seq)
    if not 1 <= m <= n1:
        raise ToricError(f"position {m} out of range 1..{n1}")
    k = (1 - m) % n1  # rotation putting index 0 at m-1
    rotated = seq[k:] + seq[:k]
    assert rotated[m - 1] == E
    return ToricSystem(Y, tuple(rotated))


@dataclass
class DeAugmentation:
    system: Optional[ToricSystem]
    m: Optional[int]
    transport: Optional[list] = None   # Weyl word w with w(E_n) = A_m, when used
    dropped: Optional[int] = None      # index j of the exceptional class removed
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.system is not None


def minus_one_positions(T: ToricSystem) -> list[int]:
    return [i + 1 for i, a in enumerate(T.divisors) if T.X.sq(a) == -1]


def _drop(vec, j: int) -> tuple:
    return tuple(x for k, x in enumerate(vec) if k != j)


def de_augment(T: ToricSystem, m: Optional[int] = None) -> DeAugmentation:
    """Blow down a (-1)-entry A_m and return the shorter system starting after m.

    The exceptional coordinate to drop is E_j when A_m = E_j.  Otherwise A_m
    is moved onto E_n by a Weyl element first; when A_m is not in the Weyl
    orbit of E_n the step is refused.
    """
    X = T.X
    positions = minus_one_positions(T)
    if not positions:
        return DeAugmentation(None, None, reason="NoMinusOneEntry")
    if m is None:
        m = positions[0]
    if m not in positions:
        return DeAugmentation(None, m, reason=f"A{m} does not have square -1")
    if X.n_points == 0:
        return DeAugmentation(None, m, reason="no exceptional classes to contract")
    A = list(T.divisors)
    am = A[m - 1]
    transport = None
    unit = [j for j in range(1, X.dim) if am == X.E(j)]
    if unit:
        j = unit[0]
    else:
        j = X.n_points
        w = weyl_transport(X, am, X.E(j))
        if w is None:
            return DeAugmentation(None, m, reason=f"A{m} is not a Weyl image of an exceptional class")
        transport = w
        # apply w^{-1} = reversed word to every divisor
        inv = list(reversed(w))
        A = [apply_weyl(X, inv, a) for a in A]
        assert A[m - 1] == X.E(j)
    E = X.E(j)
    n = len(A)
    prev_i, next_i = (m - 2) % n, m % n
    A[prev_i] = im.add(A[prev_i], E)
    A[next_i] = im.add(A[next_i], E)
    rest = A[m:] + A[:m - 1]
    if any(a[j] for a in rest):
        return DeAugmentation(None, m, transport, j, reason="remaining divisors meet the contracted class")
    Y = PicardLattice(X.n_points - 1)
    try:
        sys = ToricSystem(Y, tuple(_drop(a, j) for a in rest))
    except ToricError as exc:
        return DeAugmentation(None, m, transport, j, reason=str(exc))
    return DeAugmentation(sys, m, transport, j, reason="ok")


@dataclass
class AugmentationChain:
    status: str                     # "terminal" | "Stuck"
    steps: list = field(default_factory=list)   # DeAugmentation records in order
    final: Optional[ToricSystem] = None
    reason: str = ""

    @property
    def length(self) -> int:
        return len(self.steps)


def standard_augmentation_search(T: ToricSystem) -> AugmentationChain:
    """Greedy de-augmentation down to a three-term (plane) or four-term (Hirzebruch) system."""
    steps = []
    cur = T
    while True:
        if len(cur) == 3:
            return AugmentationChain("terminal", steps, cur, "plane pattern")
        step = None
        tried = []
        for m in minus_one_positions(cur):
            r = de_augment(cur, m)
            if r.ok:
                step = r
                break
            tried.append(f"A{m}: {r.reason}")
        if step is None:
            if len(cur) == 4:
                return AugmentationChain("terminal", steps, cur, "Hirzebruch pattern")
            reason = "; ".join(tried) if tried else "NoMinusOneEntry"
            return AugmentationChain("Stuck", steps, cur, reason)
        steps.append(step)
        cur = step.system
