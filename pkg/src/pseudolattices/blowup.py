"""Numerical blow-ups, contractions and the standard Gram models."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import intmat as im
from .core import LatticeError, Pseudolattice
from .surface import (
    SurfaceStructure,
    build_surface_structure,
    defect,
    degree,
    surface_from_lattice,
)

M0_GRAM = ((1, 3, 6), (0, 1, 3), (0, 0, 1))


def mk_gram(k: int) -> tuple:
    """Identity block of size k, an all-ones k x 3 block, then M0."""
    n = k + 3
    rows = []
    for i in range(k):
        rows.append(tuple(int(j == i) for j in range(k)) + (1, 1, 1))
    for r in M0_GRAM:
        rows.append((0,) * k + r)
    assert len(rows) == n
    return tuple(rows)


def dc_gram(c: int) -> tuple:
    return (
        (1, 2, 2 * c + 2, 2 * c + 4),
        (0, 1, 2 * c, 2 * c + 2),
        (0, 0, 1, 2),
        (0, 0, 0, 1),
    )


@dataclass(frozen=True)
class StandardModel:
    kind: str          # "M0", "Mk" or "Dc"
    param: int         # k for Mk (0 for M0), c for Dc
    lattice: Pseudolattice
    p: tuple

    @property
    def label(self) -> str:
        if self.kind == "Dc":
            return f"D{self.param}"
        return f"M{self.param}"

    def surface(self) -> SurfaceStructure:
        return build_surface_structure(self.lattice, self.p)


def standard_model(kind: str, param: int = 0) -> StandardModel:
    """standard_model("M0"), standard_model("Mk", k) or standard_model("Dc", c)."""
    if kind == "M0" or (kind == "Mk" and param == 0):
        lat = Pseudolattice(M0_GRAM)
        kind, param = "Mk", 0
    elif kind == "Mk":
        if param < 0:
            raise LatticeError("k must be non-negative")
        lat = Pseudolattice(mk_gram(param))
    elif kind == "Dc":
        lat = Pseudolattice(dc_gram(param))
    else:
        raise LatticeError(f"unknown standard model {kind!r}")
    S = surface_from_lattice(lat)
    return StandardModel("M0" if (kind == "Mk" and param == 0) else kind, param, lat, S.p)


def parse_model(label: str) -> StandardModel:
    """'M0', 'M3', 'D-2' style labels."""
    label = label.strip()
    if label[0] in "Mm":
        return standard_model("Mk", int(label[1:]))
    if label[0] in "Dd":
        return standard_model("Dc", int(label[1:]))
    raise LatticeError(f"unknown model label {label!r}")


def _multiple_of(p, z) -> Optional[int]:
    """n with z = n p, or None."""
    idx = next(i for i, x in enumerate(p) if x)
    if z[idx] % p[idx]:
        return None
    n = z[idx] // p[idx]
    return n if tuple(n * x for x in p) == tuple(z) else None


def blow_up(S: SurfaceStructure, z) -> SurfaceStructure:
    """Numerical blow-up at z in Zp; the new exceptional vector f is ambient index 0.

    chi(f, f) = 1, chi(g, f) = 0 and chi(f, g) = chi(z, g) for g in the old lattice.
    """
    lat = S.lattice
    z = tuple(z)
    if _multiple_of(S.p, z) is None:
        raise LatticeError("blow-up centre must be a multiple of p")
    n = lat.rank
    first = (1,) + tuple(lat.pairing(z, lat.unit(j)) for j in range(n))
    rows = [first] + [(0,) + r for r in lat.gram]
    new = Pseudolattice(tuple(rows))
    p = (0,) + S.p
    f = new.unit(0)
    lifts = (f,) + tuple((0,) + l for l in S.ns_basis)
    B = build_surface_structure(new, p, ns_lifts=lifts)
    if new.unimodular != lat.unimodular:
        raise AssertionError("blow-up changed unimodularity")
    # NS splits as old NS + Zf with f^2 = -1
    g = B.ns_gram
    if g[0][0] != -1 or any(g[0][j] for j in range(1, len(g))):
        raise AssertionError("NS of the blow-up is not NS + <-1>")
    return B


def _check_contractible(S: SurfaceStructure, f) -> None:
    if S.rank_of(f) != 0:
        raise LatticeError("contracted class must have rank 0")
    if S.lattice.pairing(f, f) != 1:
        raise LatticeError("contracted class must satisfy chi(f, f) = 1")


def contraction_basis(S: SurfaceStructure, f) -> tuple:
    """Hermite-reduced basis (as vectors) of the left orthogonal {v : chi(v, f) = 0}."""
    f = tuple(f)
    _check_contractible(S, f)
    w = im.matvec(S.lattice.gram, f)
    return im.integer_kernel(w)


def contract(S: SurfaceStructure, f) -> SurfaceStructure:
    """Restriction of chi to the left orthogonal of f, with the same point-like element."""
    basis = contraction_basis(S, f)
    lat = S.lattice
    gram = tuple(tuple(lat.pairing(u, v) for v in basis) for u in basis)
    new = Pseudolattice(gram)
    p = im.to_int_vector(im.solve_least(im.transpose(basis), S.p))
    if lat.unimodular and not new.unimodular:
        raise AssertionError("contraction lost unimodularity")
    return build_surface_structure(new, p)


def recover_center(S: SurfaceStructure, f) -> tuple:
    """(S - 1) f in coordinates of the contraction basis; a multiple of p there."""
    basis = contraction_basis(S, f)
    lat = S.lattice
    z = im.sub(im.matvec(lat.serre, f), f)
    if _multiple_of(S.p, z) is None:
        raise AssertionError("(S-1)f is not a multiple of p")
    return im.to_int_vector(im.solve_least(im.transpose(basis), z))


def center_multiple(S: SurfaceStructure, f) -> int:
    """n with (S - 1) f = n p."""
    lat = S.lattice
    z = im.sub(im.matvec(lat.serre, f), f)
    n = _multiple_of(S.p, z)
    if n is None:
        raise AssertionError("(S-1)f is not a multiple of p")
    return n


def defect_contraction_check(S: SurfaceStructure, e) -> tuple:
    """(defect of S, defect of the contraction, q(K, e)) with the identity asserted."""
    Se = contract(S, e)
    d, de = defect(S), defect(Se)
    qke = S.q(S.K, S.ns_image(e))
    if d != de + 1 - qke * qke:
        raise AssertionError(f"defect identity fails: {d} != {de} + 1 - {qke}^2")
    return d, de, qke


def degree_blowup_check(S: SurfaceStructure, n: int) -> tuple:
    """(deg G, deg of blow-up at n p, chi(sigma, z)^2) with deg drop asserted."""
    z = tuple(n * x for x in S.p)
    B = blow_up(S, z)
    if S.sigma_rank != 1:
        raise LatticeError("degree identity needs a rank-1 element")
    c = S.lattice.pairing(S.sigma, z)
    if degree(B) != degree(S) - c * c:
        raise AssertionError("degree identity fails for the blow-up")
    return degree(S), degree(B), c * c
