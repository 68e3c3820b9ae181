"""Norm reduction, normal forms and orbit search with replayable certificates."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

from . import intmat as im
from .core import (
    Atom,
    Basis,
    FlipSign,
    LatticeError,
    LeftAt,
    MutationWord,
    RightAt,
    apply_atom_vectors,
    apply_word,
    parse_word,
)
from .surface import SurfaceStructure, classify, is_even

# the escape word from a norm-4 plateau: (a, b1, b2, b3, b4) -> ranks (0, 0, 1, 1, 1)
ESCAPE_WORD = "L1 R2 R3 L1 L2 R4"


class SearchError(LatticeError):
    pass


@dataclass(frozen=True)
class Certificate:
    source: Basis
    target: Basis
    word: MutationWord
    isometry: Optional[tuple] = None   # applied after the word

    def replay(self, surface=None) -> Basis:
        out = apply_word(self.source, self.word, surface=surface)
        if self.isometry is not None:
            out = Basis(out.lattice, tuple(im.matvec(self.isometry, v) for v in out.vectors))
        return out

    def verify(self, surface=None) -> bool:
        return self.replay(surface).vectors == self.target.vectors


def ranks(S: SurfaceStructure, b: Basis) -> tuple:
    w = im.vecmat(S.p, S.lattice.gram)
    return tuple(im.dot(w, v) for v in b.vectors)


def norm(S: SurfaceStructure, b: Basis) -> int:
    return sum(r * r for r in ranks(S, b))


def rank_pattern_ok(rs) -> bool:
    """Three or four entries of absolute value 1 and the rest zero."""
    nz = [r for r in rs if r]
    return all(abs(r) == 1 for r in nz) and len(nz) in (3, 4)


def _flat(vecs) -> tuple:
    return tuple(x for v in vecs for x in v)


def _mutation_moves(n: int):
    for i in range(1, n):
        yield LeftAt(i)
        yield RightAt(i)


def _apply(lat, vecs, a: Atom) -> list:
    out = list(vecs)
    apply_atom_vectors(lat, out, a)
    return out


def _norm_of(w, vecs) -> int:
    return sum(im.dot(w, v) ** 2 for v in vecs)


def _descend(S: SurfaceStructure, vecs: list, steps: list) -> list:
    """Steepest descent on the norm; ties broken by the flattened coordinates."""
    lat = S.lattice
    w = im.vecmat(S.p, lat.gram)
    n = lat.rank
    while True:
        rs = [im.dot(w, v) for v in vecs]
        cur = sum(r * r for r in rs)
        best = None
        for i in range(n - 1):
            c = lat.pairing(vecs[i], vecs[i + 1])
            ri, rj = rs[i], rs[i + 1]
            old = ri * ri + rj * rj
            for a, pair in ((LeftAt(i + 1), (rj - c * ri, ri)), (RightAt(i + 1), (rj, ri - c * rj))):
                new_norm = cur - old + pair[0] ** 2 + pair[1] ** 2
                if new_norm >= cur:
                    continue
                if best is None or new_norm < best[0]:
                    best = (new_norm, None, a)
                elif new_norm == best[0]:
                    if best[1] is None:
                        best = (best[0], _flat(_apply(lat, vecs, best[2])), best[2])
                    cand = _flat(_apply(lat, vecs, a))
                    if cand < best[1]:
                        best = (new_norm, cand, a)
        if best is None:
            return vecs
        a = best[2]
        apply_atom_vectors(lat, vecs, a)
        steps.append(a)


def _canon(vecs) -> tuple:
    return tuple(im.sign_canonical(v) for v in vecs)


def _plateau_escape(S: SurfaceStructure, vecs: list, depth: int, budget: int):
    """Shortest L/R word (BFS, up to `depth`) reaching a strictly smaller norm."""
    lat = S.lattice
    w = im.vecmat(S.p, lat.gram)
    n = lat.rank
    start_norm = _norm_of(w, vecs)
    seen = {_canon(vecs)}
    q = deque([(vecs, [])])
    while q:
        cur, path = q.popleft()
        if len(path) >= depth:
            continue
        for a in _mutation_moves(n):
            nxt = _apply(lat, cur, a)
            key = _canon(nxt)
            if key in seen:
                continue
            seen.add(key)
            if _norm_of(w, nxt) < start_norm:
                return nxt, path + [a]
            if len(seen) >= budget:
                return None
            q.append((nxt, path + [a]))
    return None


def perling_reduce(S: SurfaceStructure, b: Basis, depth: int = 6, budget: int = 50_000,
                   escape: bool = True) -> tuple[Basis, Certificate]:
    """Mutate to a basis of three or four rank-+-1 elements and the rest rank 0.

    Steepest descent, a breadth-first plateau search and, for a norm-4
    plateau on a lattice of rank >= 5, the named escape move.
    """
    if not b.is_exceptional():
        raise SearchError("input basis is not exceptional")
    lat = S.lattice
    vecs = list(b.vectors)
    steps: list[Atom] = []
    while True:
        vecs = _descend(S, vecs, steps)
        rs = [S.rank_of(v) for v in vecs]
        if rank_pattern_ok(rs):
            if sum(r * r for r in rs) == 4 and escape and not is_even(S.ns_gram):
                extra = _norm_four_escape(S, vecs) if lat.rank >= 5 else None
                if extra is None:
                    found = _plateau_escape(S, vecs, depth, budget)
                    if found is None:
                        raise SearchError("no move below norm 4 on a surface with odd Picard lattice")
                    extra = found[1]
                for a in extra:
                    apply_atom_vectors(lat, vecs, a)
                steps.extend(extra)
                continue
            break
        found = _plateau_escape(S, vecs, depth, budget)
        if found is None:
            best = sum(r * r for r in rs)
            raise SearchError(f"norm reduction stalled at norm {best} (ranks {rs})")
        vecs, path = found
        steps.extend(path)
    out = Basis(lat, tuple(vecs))
    cert = Certificate(b, out, MutationWord(tuple(steps)))
    assert cert.verify()
    return out, cert


# --- normal forms ------------------------------------------------------------

def _front_rank_zero(S, vecs, steps):
    """Bubble rank-0 vectors to the front with right mutations (ranks unchanged)."""
    lat = S.lattice
    n = lat.rank
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if S.rank_of(vecs[i]) != 0 and S.rank_of(vecs[i + 1]) == 0:
                a = RightAt(i + 1)
                apply_atom_vectors(lat, vecs, a)
                steps.append(a)
                changed = True


def _positive_ranks(S, vecs, steps):
    for i, v in enumerate(vecs):
        if S.rank_of(v) < 0:
            a = FlipSign(i + 1)
            apply_atom_vectors(S.lattice, vecs, a)
            steps.append(a)


def _dc_parameter(g4) -> Optional[int]:
    """c if the 4x4 matrix is D_c, else None."""
    c2 = g4[1][2]
    if c2 % 2:
        return None
    c = c2 // 2
    from .blowup import dc_gram
    return c if tuple(tuple(r) for r in g4) == dc_gram(c) else None


def _block_gram(lat, vecs, lo, hi):
    return tuple(tuple(lat.pairing(vecs[i], vecs[j]) for j in range(lo, hi)) for i in range(lo, hi))


def _normalize_dc(S, vecs, steps, offset: int):
    """Move the trailing D_c block (positions offset+1..offset+4) to D_0."""
    lat = S.lattice
    while True:
        c = _dc_parameter(_block_gram(lat, vecs, offset, offset + 4))
        if c is None:
            raise SearchError("rank-one block is not of the D_c shape")
        if c == 0:
            return
        if c > 0:
            seq = [LeftAt(offset + 3), FlipSign(offset + 3)]
        else:
            seq = [RightAt(offset + 3), FlipSign(offset + 4)]
        for a in seq:
            apply_atom_vectors(lat, vecs, a)
        steps.extend(seq)


def _to_dc_shape(S, vecs, steps, depth: int = 8, budget: int = 50_000):
    """BFS through norm-4 bases until the sign-fixed Gram matrix has the D_c shape."""
    lat = S.lattice
    n = lat.rank

    def fixed(vs):
        out = list(vs)
        fl = []
        _positive_ranks(S, out, fl)
        return out, fl

    cur, fl = fixed(vecs)
    if _dc_parameter(_block_gram(lat, cur, 0, n)) is not None:
        for a in fl:
            apply_atom_vectors(lat, vecs, a)
        steps.extend(fl)
        return
    w = im.vecmat(S.p, lat.gram)
    seen = {_canon(vecs)}
    q = deque([(tuple(vecs), [])])
    while q:
        vs, path = q.popleft()
        if len(path) >= depth:
            continue
        for a in _mutation_moves(n):
            nxt = _apply(lat, vs, a)
            k = _canon(nxt)
            if k in seen or _norm_of(w, nxt) != 4:
                continue
            seen.add(k)
            cand, fl = fixed(nxt)
            if _dc_parameter(_block_gram(lat, cand, 0, n)) is not None:
                vecs[:] = cand
                steps.extend(path + [a] + fl)
                return
            if len(seen) >= budget:
                break
            q.append((tuple(nxt), path + [a]))
    raise SearchError("no basis of the D_c shape near the reduced basis")


def _norm_four_escape(S, vecs) -> Optional[list]:
    """Word taking a norm-4 pattern basis on rank >= 5 to norm 3."""
    lat = S.lattice
    n = lat.rank
    work = list(vecs)
    steps: list[Atom] = []
    _front_rank_zero(S, work, steps)
    _positive_ranks(S, work, steps)
    l = n - 4
    if l < 1 or any(S.rank_of(v) != 0 for v in work[:l]):
        return None
    try:
        _normalize_dc(S, work, steps, l)
    except SearchError:
        return None
    esc = [a for a in parse_word(ESCAPE_WORD).steps]
    shifted = [LeftAt(a.i + l - 1) if isinstance(a, LeftAt) else RightAt(a.i + l - 1) for a in esc]
    for a in shifted:
        apply_atom_vectors(lat, work, a)
    steps.extend(shifted)
    if sum(S.rank_of(v) ** 2 for v in work) != 3:
        return None
    return steps


def normal_form(S: SurfaceStructure, b: Basis, cls=None, **kw) -> tuple[Basis, Certificate]:
    """Mutate b to a basis whose Gram matrix is exactly M_k (or D_0 on the quadric model).

    Rank-0 vectors come first; signs make ranks +1 and chi(a_i, b_j) = +1.
    """
    cls = cls or classify(S)
    if cls.kind == "NoExceptionalBasis":
        raise SearchError("classification precondition fails: " + ", ".join(cls.hypotheses.get("failed", [])))
    lat = S.lattice
    n = lat.rank
    red, cert = perling_reduce(S, b, **kw)
    vecs = list(red.vectors)
    steps = list(cert.word.steps)
    _front_rank_zero(S, vecs, steps)
    _positive_ranks(S, vecs, steps)
    rs = [S.rank_of(v) for v in vecs]
    m = sum(1 for r in rs if r)
    l = n - m
    if m == 4 and l == 0:
        _to_dc_shape(S, vecs, steps)
        _normalize_dc(S, vecs, steps, 0)
    elif m == 4:
        raise SearchError("norm-4 basis on a lattice of rank >= 5 survived the escape move")
    else:
        from .blowup import M0_GRAM
        if _block_gram(lat, vecs, l, n) != M0_GRAM:
            raise SearchError("rank-one block does not have the plane Gram matrix")
        for i in range(l):
            c = lat.pairing(vecs[i], vecs[l])
            if c == -1:
                a = FlipSign(i + 1)
                apply_atom_vectors(lat, vecs, a)
                steps.append(a)
            elif c != 1:
                raise SearchError(f"rank-zero vector {i + 1} pairs to {c} with the rank-one block")
    out = Basis(lat, tuple(vecs))
    from .blowup import dc_gram, mk_gram
    want = dc_gram(0) if (m == 4 and l == 0) else mk_gram(l)
    if out.gram() != want:
        raise SearchError("normal form Gram matrix is not the standard one")
    c = Certificate(b, out, MutationWord(tuple(steps)))
    assert c.verify()
    return out, c


def relate_up_to_isometry(S: SurfaceStructure, e: Basis, f: Basis, search_budget: int = 100_000,
                          **kw) -> Certificate:
    """Certificate f = phi(replay of word on e) with phi an isometry fixing p.

    When the normal forms differ by a nontrivial isometry, a bounded orbit
    search looks for a pure mutation certificate first.
    """
    cls = classify(S)
    ne, ce = normal_form(S, e, cls, **kw)
    nf, cf = normal_form(S, f, cls, **kw)
    if ne.gram() != nf.gram():
        raise SearchError("normal forms disagree: the bases are not related")
    lat = S.lattice
    phi = im.to_int_matrix(im.matmul(nf.matrix, im.inverse(ne.matrix)))
    if im.matmul(im.matmul(im.transpose(phi), lat.gram), phi) != lat.gram:
        raise AssertionError("coordinate transport is not an isometry")
    if im.matvec(phi, S.p) != S.p:
        raise AssertionError("isometry does not fix the point-like element")
    word = ce.word + cf.word.inverse()
    iso = None if phi == im.identity(lat.rank) else phi
    if iso is not None and search_budget > 0:
        direct = orbit_path(S, e, f, budget=search_budget)
        if direct:
            return direct
    cert = Certificate(e, f, word, iso)
    assert cert.verify()
    return cert


@dataclass
class NotFoundWithinBudget:
    explored: int
    budget: int

    def __bool__(self):
        return False


def orbit_path(S: SurfaceStructure, e: Basis, f: Basis, budget: int = 1_000_000,
               norm_slack: Optional[int] = None):
    """Bidirectional BFS over sign classes of exceptional bases.

    Returns a Certificate (word = forward path, sign flips, inverted backward
    path) or NotFoundWithinBudget.  `budget` caps the number of stored nodes;
    `norm_slack` optionally prunes bases whose norm exceeds the larger
    endpoint norm by more than the slack.
    """
    lat = S.lattice
    n = lat.rank
    w = im.vecmat(S.p, lat.gram)
    ke, kf = _canon(e.vectors), _canon(f.vectors)
    if ke == kf:
        return Certificate(e, f, MutationWord(tuple(_sign_fix(list(e.vectors), f.vectors))))
    if budget <= 0:
        return NotFoundWithinBudget(0, budget)
    cap = None
    if norm_slack is not None:
        cap = max(_norm_of(w, e.vectors), _norm_of(w, f.vectors)) + norm_slack
    # parent maps: key -> (parent_key, atom, actual vectors)
    fwd = {ke: (None, None, tuple(e.vectors))}
    bwd = {kf: (None, None, tuple(f.vectors))}
    qf, qb = deque([ke]), deque([kf])
    explored = 2

    def expand(queue, mine, other):
        nonlocal explored
        for _ in range(len(queue)):
            key = queue.popleft()
            vecs = mine[key][2]
            for a in _mutation_moves(n):
                nxt = _apply(lat, vecs, a)
                k = _canon(nxt)
                if k in mine:
                    continue
                if cap is not None and _norm_of(w, nxt) > cap:
                    continue
                mine[k] = (key, a, tuple(nxt))
                explored += 1
                if k in other:
                    return k
                if explored >= budget:
                    raise _Budget()
                queue.append(k)
        return None

    try:
        while qf and qb:
            meet = expand(qf, fwd, bwd) if len(qf) <= len(qb) else expand(qb, bwd, fwd)
            if meet is not None:
                break
        else:
            return NotFoundWithinBudget(explored, budget)
    except _Budget:
        return NotFoundWithinBudget(explored, budget)
    w1 = _path(fwd, meet)
    w2 = _path(bwd, meet)
    flips = _sign_fix(list(fwd[meet][2]), bwd[meet][2])
    word = MutationWord(tuple(w1) + tuple(flips)) + MutationWord(tuple(w2)).inverse()
    cert = Certificate(e, f, word)
    assert cert.verify()
    return cert


class _Budget(Exception):
    pass


def _path(parents, key) -> list:
    out = []
    while parents[key][0] is not None:
        pk, a, _ = parents[key]
        out.append(a)
        key = pk
    out.reverse()
    return out


def _sign_fix(vecs, target) -> list:
    flips = []
    for i, (v, t) in enumerate(zip(vecs, target)):
        if tuple(v) != tuple(t):
            if tuple(-x for x in v) != tuple(t):
                raise AssertionError("vectors differ beyond sign")
            flips.append(FlipSign(i + 1))
    return flips


def random_word(n: int, length: int, rng: random.Random, flips: bool = True) -> MutationWord:
    steps: list[Atom] = []
    for _ in range(length):
        i = rng.randrange(1, n)
        steps.append(LeftAt(i) if rng.random() < 0.5 else RightAt(i))
        if flips and rng.random() < 0.2:
            steps.append(FlipSign(rng.randrange(1, n + 1)))
    return MutationWord(tuple(steps))


def scramble(b: Basis, length: int, seed: int = 0) -> tuple[Basis, MutationWord]:
    rng = random.Random(seed)
    w = random_word(b.lattice.rank, length, rng)
    return apply_word(b, w), w


def exhaustive_orbit(S: SurfaceStructure, b: Basis, depth: int) -> dict:
    """All sign classes within `depth` mutations of b, mapped to their distance."""
    lat = S.lattice
    n = lat.rank
    dist = {_canon(b.vectors): 0}
    frontier = [tuple(b.vectors)]
    for d in range(1, depth + 1):
        nxt = []
        for vecs in frontier:
            for a in _mutation_moves(n):
                v2 = _apply(lat, vecs, a)
                k = _canon(v2)
                if k not in dist:
                    dist[k] = d
                    nxt.append(tuple(v2))
        frontier = nxt
    return dist
