"""Surface-like structure on a pseudolattice.

Given a point-like element p, the rank functional is r(v) = chi(p, v), the
Neron-Severi lattice is p^perp / Zp with q = -chi, and the canonical class K
is the unique NS class with -q(K, lambda(v, w)) = chi(v, w) - chi(w, v) where
lambda(v, w) = r(v) w - r(w) v.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import intmat as im
from .core import LatticeError, Pseudolattice


class NotPointLike(LatticeError):
    pass


def _point_like_failures(lat: Pseudolattice, p) -> list[str]:
    n = lat.rank
    bad = []
    if im.content(p) != 1:
        bad.append("not primitive")
    if lat.pairing(p, p) != 0:
        bad.append("chi(p,p) != 0")
    for i in range(n):
        e = lat.unit(i)
        if lat.pairing(p, e) != lat.pairing(e, p):
            bad.append(f"chi(p,e{i + 1}) != chi(e{i + 1},p)")
            break
    if not bad:
        perp = im.integer_kernel(im.vecmat(p, lat.gram))
        for u, v in itertools.combinations(perp, 2):
            if lat.pairing(u, v) != lat.pairing(v, u):
                bad.append("chi not symmetric on p-perp")
                break
    return bad


def is_point_like(lat: Pseudolattice, p) -> bool:
    return not _point_like_failures(lat, p)


def normalize_point_sign(lat: Pseudolattice, p) -> tuple:
    """Sign of p making the last basis vector of nonzero rank have positive rank."""
    ranks = im.vecmat(p, lat.gram)
    for r in reversed(ranks):
        if r:
            return tuple(p) if r > 0 else tuple(-x for x in p)
    return tuple(p)


def find_point_like(lat: Pseudolattice) -> list[tuple]:
    """Point-like generators of the image of (S-1)^2, as [p, -p] (normalised p first).

    Empty when the image is not a line or its generator fails the point-like
    axioms.  This does not prove that no point-like element exists.
    """
    if not lat.unimodular:
        raise LatticeError("find_point_like needs a unimodular lattice")
    a = im.matsub(lat.serre, im.identity(lat.rank))
    a2 = im.matmul(a, a)
    if im.rank(a2) != 1:
        return []
    col = next(c for c in im.transpose(a2) if not im.is_zero(c))
    p = normalize_point_sign(lat, im.primitive(col))
    if not is_point_like(lat, p):
        return []
    return [p, tuple(-x for x in p)]


@dataclass(frozen=True)
class SurfaceStructure:
    lattice: Pseudolattice
    p: tuple
    sigma: tuple            # an element of minimal positive rank
    sigma_rank: int
    ns_basis: tuple         # lifts l_1..l_m in p-perp
    ns_gram: tuple          # q(l_i, l_j) = -chi(l_i, l_j)
    coord_change: tuple     # inverse of the matrix with columns (sigma, p, l_1..l_m)
    K: tuple                # canonical class in NS coordinates (ints or Fractions)
    omega_sign: Optional[int] = None  # NS image of (S-1)sigma equals omega_sign * K

    @property
    def ns_rank(self) -> int:
        return len(self.ns_basis)

    @property
    def projection(self) -> tuple:
        """Integer matrix sending ambient coordinates of v in p-perp to NS coordinates."""
        return self.coord_change[2:]

    def rank_of(self, v) -> int:
        return self.lattice.pairing(self.p, v)

    def ns_image(self, v) -> tuple:
        if self.rank_of(v) != 0:
            raise LatticeError("element has nonzero rank, it has no NS image")
        return im.matvec(self.projection, v)

    def ns_lift(self, d) -> tuple:
        """Lift of an NS vector d to p-perp (combination of the stored lifts)."""
        out = [0] * self.lattice.rank
        for c, l in zip(d, self.ns_basis):
            if c:
                for i, x in enumerate(l):
                    out[i] += c * x
        return tuple(out)

    def q(self, d1, d2):
        return im.bilinear(d1, self.ns_gram, d2)

    def lam(self, v, w) -> tuple:
        rv, rw = self.rank_of(v), self.rank_of(w)
        return tuple(rv * y - rw * x for x, y in zip(v, w))

    @property
    def K_squared(self):
        k2 = self.q(self.K, self.K)
        return int(k2) if Fraction(k2).denominator == 1 else Fraction(k2)

    @property
    def K_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.K)


def build_surface_structure(lat: Pseudolattice, p, ns_lifts=None) -> SurfaceStructure:
    """Neron-Severi lattice, intersection form and canonical class for (lat, p).

    `ns_lifts` optionally fixes the lifts of an NS basis; they must complete p
    to a basis of p-perp.
    """
    p = tuple(p)
    bad = _point_like_failures(lat, p)
    if bad:
        raise NotPointLike("p is not point-like: " + ", ".join(bad))
    n = lat.rank
    w = im.vecmat(p, lat.gram)  # r(v) = w . v
    g, V = im.column_reduce_form(w)
    if g == 0:
        raise NotPointLike("rank functional vanishes identically")
    cols = im.transpose(V)
    sigma = tuple(cols[0])
    kernel = cols[1:]  # basis of p-perp
    kmat = im.transpose(kernel)  # n x (n-1)
    if ns_lifts is None:
        # complete the coordinates of p in the kernel basis to a unimodular matrix
        c = im.to_int_vector(im.solve_least(kmat, p))
        _, U = im.column_reduce_form(c)
        Ut = im.transpose(U)  # Ut c = (1, 0, ..., 0)
        Uinv = im.int_inverse(Ut)  # first column is c
        lifts = tuple(im.matvec(kmat, col) for col in im.transpose(Uinv)[1:])
    else:
        lifts = tuple(tuple(int(x) for x in l) for l in ns_lifts)
        if len(lifts) != n - 2 or any(lat.pairing(p, l) != 0 for l in lifts):
            raise LatticeError("NS lifts must be n-2 vectors orthogonal to p")
    cols_p = (sigma, p) + lifts
    P = im.transpose(cols_p)
    if abs(im.det(P)) != 1:
        raise LatticeError("NS lifts together with p do not span p-perp")
    coord_change = im.int_inverse(P)
    m = n - 2
    ns_gram = tuple(tuple(-lat.pairing(lifts[i], lifts[j]) for j in range(m)) for i in range(m))
    for i in range(m):
        for j in range(m):
            if ns_gram[i][j] != ns_gram[j][i]:
                raise NotPointLike("chi is not symmetric on p-perp")
    if m and im.det(ns_gram) == 0:
        raise LatticeError("degenerate NS form: not surface-like")
    # canonical class: -g q(K, l_j) = chi(sigma, l_j) - chi(l_j, sigma)
    if m:
        rhs = [Fraction(-(lat.pairing(sigma, l) - lat.pairing(l, sigma)), g) for l in lifts]
        K = tuple(x if x.denominator != 1 else int(x) for x in im.solve(ns_gram, rhs))
    else:
        K = ()
    S = SurfaceStructure(lat, p, sigma, g, lifts, ns_gram, coord_change, K)
    _verify_canonical_class(S)
    if lat.unimodular and not S.K_integral:
        raise AssertionError("unimodular lattice with non-integral canonical class")
    omega_sign = _omega_sign(S)
    return SurfaceStructure(lat, p, sigma, g, lifts, ns_gram, coord_change, K, omega_sign)


def _verify_canonical_class(S: SurfaceStructure) -> None:
    lat = S.lattice
    n = lat.rank
    for i in range(n):
        for j in range(i + 1, n):
            v, w = lat.unit(i), lat.unit(j)
            lhs = -S.q(S.K, S.ns_image(S.lam(v, w)))
            if lhs != lat.pairing(v, w) - lat.pairing(w, v):
                raise AssertionError("canonical class fails its defining identity")


def _omega_sign(S: SurfaceStructure) -> Optional[int]:
    """Compare the NS image of (S-1)sigma with K (they agree up to sign)."""
    if S.sigma_rank != 1 or not S.lattice.unimodular:
        return None
    lat = S.lattice
    sv = im.matvec(lat.serre, S.sigma)
    omega = S.ns_image(im.sub(sv, S.sigma))
    if tuple(omega) == tuple(S.K):
        return 1
    if tuple(omega) == tuple(-x for x in S.K):
        return -1
    raise AssertionError("(S-1)sigma does not project to +-K")


def surface_from_lattice(lat: Pseudolattice, ns_lifts=None) -> SurfaceStructure:
    pts = find_point_like(lat)
    if not pts:
        raise NotPointLike("no point-like element found via (S-1)^2")
    return build_surface_structure(lat, pts[0], ns_lifts)


def rank_of(S: SurfaceStructure, v) -> int:
    return S.rank_of(v)


def defect(S: SurfaceStructure):
    return S.K_squared + S.lattice.rank - 12


def degree(S: SurfaceStructure):
    return S.K_squared


def is_characteristic(ns_gram, K) -> bool:
    """q(D, D) = q(K, D) mod 2 on every basis vector D (enough by bilinearity)."""
    m = len(ns_gram)
    for i in range(m):
        d = tuple(int(i == j) for j in range(m))
        qkd = Fraction(im.bilinear(K, ns_gram, d))
        if qkd.denominator != 1 or (ns_gram[i][i] - int(qkd)) % 2:
            return False
    return True


@dataclass
class GeometricReport:
    signature: tuple
    signature_ok: bool
    K_integral: bool
    characteristic: bool

    @property
    def ok(self) -> bool:
        return self.signature_ok and self.K_integral and self.characteristic

    def __bool__(self):
        return self.ok

    def failures(self) -> list[str]:
        out = []
        if not self.signature_ok:
            out.append(f"signature {self.signature[:2]} is not (1, rk-3)")
        if not self.K_integral:
            out.append("K not integral")
        if not self.characteristic:
            out.append("K not characteristic")
        return out


def is_geometric(S: SurfaceStructure) -> GeometricReport:
    m = S.ns_rank
    sig = im.signature(S.ns_gram) if m else (0, 0, 0)
    sig_ok = sig == (1, m - 1, 0)
    k_int = S.K_integral
    char = k_int and is_characteristic(S.ns_gram, S.K)
    return GeometricReport(sig, sig_ok, k_int, char)


def is_even(ns_gram) -> bool:
    return all(ns_gram[i][i] % 2 == 0 for i in range(len(ns_gram)))


def divisible_by(v, d: int) -> bool:
    return all(Fraction(x) % d == 0 for x in v)


def _small_vectors(n: int, bound: int, limit: int):
    """Integer vectors ordered by max-norm 1..bound, capped at `limit` items."""
    count = 0
    for b in range(1, bound + 1):
        for v in itertools.product(range(-b, b + 1), repeat=n):
            if max(abs(x) for x in v) != b:
                continue
            yield v
            count += 1
            if count >= limit:
                return


def find_rank_one_unit(S: SurfaceStructure, bound: int = 6, limit: int = 200_000):
    """A vector v with r(v) = 1 and chi(v, v) = 1, or None if none found.

    Basis vectors and +-sums of two basis vectors are tried first.
    """
    lat = S.lattice
    n = lat.rank
    units = [lat.unit(i) for i in range(n)]
    seeds = []
    for u in units:
        seeds += [u, im.scale(-1, u)]
    for a, b in itertools.combinations(units, 2):
        for s in (1, -1):
            for t in (1, -1):
                seeds.append(im.add(im.scale(s, a), im.scale(t, b)))
    for v in itertools.chain(seeds, _small_vectors(n, bound, limit)):
        if S.rank_of(v) == 1 and lat.pairing(v, v) == 1:
            return tuple(v)
    return None


def find_minus_one_class(S: SurfaceStructure, bound: int = 10, limit: int = 200_000):
    """An NS class D with q(D, D) = -1 (witness of non-minimality), or None."""
    m = S.ns_rank
    if m == 0:
        return None
    for i in range(m):
        if S.ns_gram[i][i] == -1:
            return tuple(int(i == j) for j in range(m))
    for d in _small_vectors(m, bound, limit):
        if S.q(d, d) == -1:
            return tuple(d)
    return None


@dataclass
class Classification:
    kind: str               # P2 | P1xP1 | BlowupXk | NoExceptionalBasis
    k: Optional[int] = None
    hypotheses: dict = field(default_factory=dict)

    def __str__(self):
        return f"BlowupXk({self.k})" if self.kind == "BlowupXk" else self.kind


class ClassificationPreconditionError(LatticeError):
    pass


def classify(S: SurfaceStructure, strict: bool = False, bound: int = 6) -> Classification:
    """Decide which of the three exceptional-basis patterns the lattice fits.

    The hypotheses (unimodular, geometric, zero defect, a rank-1 unit) are
    recorded in the result.  When one fails the answer is NoExceptionalBasis;
    with strict=True a ClassificationPreconditionError is raised instead.
    """
    lat = S.lattice
    n = lat.rank
    geo = is_geometric(S)
    unit = find_rank_one_unit(S, bound=bound)
    hyp = {
        "unimodular": lat.unimodular,
        "geometric": geo.ok,
        "geometric_failures": geo.failures(),
        "defect": defect(S),
        "defect_zero": defect(S) == 0,
        "rank_one_unit": "found" if unit is not None else "unknown",
    }
    failed = [k for k in ("unimodular", "geometric", "defect_zero") if not hyp[k]]
    if unit is None:
        failed.append("rank_one_unit")
    hyp["failed"] = failed
    if failed:
        if strict:
            raise ClassificationPreconditionError("hypotheses failed: " + ", ".join(failed))
        return Classification("NoExceptionalBasis", None, hyp)
    K = S.K
    even = is_even(S.ns_gram)
    hyp["ns_even"] = even
    hyp["K_content"] = im.content(K)
    if n == 3 and divisible_by(K, 3):
        return Classification("P2", 0, hyp)
    if n == 4 and even and divisible_by(K, 2):
        return Classification("P1xP1", None, hyp)
    if n >= 4 and not even and im.content(K) == 1:
        return Classification("BlowupXk", n - 3, hyp)
    return Classification("NoExceptionalBasis", None, hyp)


@dataclass(frozen=True)
class Filtration:
    F2: tuple
    F1: tuple
    F0: tuple


def codimension_filtration(S: SurfaceStructure) -> Filtration:
    lat = S.lattice
    F1 = (S.p,) + S.ns_basis
    F0 = tuple(lat.unit(i) for i in range(lat.rank))
    a = im.matsub(lat.serre, im.identity(lat.rank))
    for v in F0:
        if S.rank_of(im.matvec(a, v)) != 0:
            raise AssertionError("(S-1)F0 is not inside F1")
    for v in F1:
        w = im.matvec(a, v)
        if im.rank((w, S.p)) > 1:
            raise AssertionError("(S-1)F1 is not inside F2")
    return Filtration((S.p,), F1, F0)


def is_ns_isometry(S: SurfaceStructure, phi_bar) -> bool:
    phi_t = im.transpose(phi_bar)
    return im.matmul(im.matmul(phi_t, S.ns_gram), phi_bar) == tuple(S.ns_gram)


def lift_orthogonal(S: SurfaceStructure, phi_bar, v0, v0_image=None) -> tuple:
    """Isometry of the lattice fixing p that induces phi_bar on NS.

    v0 must have rank 1; it is sent to v0_image (default v0), and each NS basis
    class l is sent to the lift of phi_bar(l) that is left-orthogonal to the
    image of v0.
    """
    lat = S.lattice
    phi_bar = im.as_matrix(phi_bar)
    if not is_ns_isometry(S, phi_bar):
        raise LatticeError("phi_bar is not orthogonal for the NS form")
    if tuple(im.matvec(phi_bar, S.K)) != tuple(S.K):
        raise LatticeError("phi_bar does not fix K")
    v0 = tuple(v0)
    v1 = tuple(v0_image) if v0_image is not None else v0
    if S.rank_of(v0) != 1 or S.rank_of(v1) != 1:
        raise LatticeError("v0 and its image must have rank 1")
    if lat.pairing(v0, v0) != lat.pairing(v1, v1):
        raise LatticeError("v0 and its image have different self-pairing")
    p = S.p

    def adjust(l, base):
        c = lat.pairing(l, base)
        return tuple(x - c * y for x, y in zip(l, p))

    src = [v0] + [adjust(l, v0) for l in S.ns_basis] + [p]
    dst = [v1]
    for col in im.transpose(phi_bar):
        dst.append(adjust(S.ns_lift(col), v1))
    dst.append(p)
    B = im.transpose(src)
    C = im.transpose(dst)
    phi = im.to_int_matrix(im.matmul(C, im.inverse(B)))
    _verify_lift(S, phi, phi_bar)
    return phi


def _verify_lift(S: SurfaceStructure, phi, phi_bar) -> None:
    lat = S.lattice
    if im.matmul(im.matmul(im.transpose(phi), lat.gram), phi) != lat.gram:
        raise AssertionError("lift is not an isometry")
    if im.matvec(phi, S.p) != S.p:
        raise AssertionError("lift does not fix p")
    if induced_ns_map(S, phi) != im.as_matrix(phi_bar):
        raise AssertionError("lift does not induce phi_bar")


def induced_ns_map(S: SurfaceStructure, phi) -> tuple:
    cols = [S.ns_image(im.matvec(phi, l)) for l in S.ns_basis]
    return im.transpose(tuple(cols))
