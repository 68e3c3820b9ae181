import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudolattices.blowup import dc_gram, mk_gram, standard_model
from pseudolattices.core import FlipSign, LeftAt, Pseudolattice, RightAt, apply_word, parse_word
from pseudolattices.search import (
    Certificate,
    NotFoundWithinBudget,
    SearchError,
    exhaustive_orbit,
    norm,
    normal_form,
    orbit_path,
    perling_reduce,
    random_word,
    ranks,
    relate_up_to_isometry,
    scramble,
    _canon,
)
from pseudolattices.picard import CREMONA_WORD
from pseudolattices.surface import surface_from_lattice
from pseudolattices.verify import CREMONA_GRAM


def _model(label):
    return standard_model("Dc" if label[0] == "D" else "Mk", int(label[1:]))


def test_norms_of_models():
    for k in range(6):
        m = _model(f"M{k}")
        assert norm(m.surface(), m.lattice.standard_basis()) == 3
    for c in range(-3, 4):
        m = _model(f"D{c}")
        assert norm(m.surface(), m.lattice.standard_basis()) == 4


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["M0", "M1", "M2", "M3", "M4", "D0", "D3"]), st.integers(0, 10_000), st.integers(0, 14))
def test_perling_reduce_pattern(label, seed, length):
    m = _model(label)
    S = m.surface()
    b, _ = scramble(m.lattice.standard_basis(), length, seed=seed)
    out, cert = perling_reduce(S, b)
    rs = sorted(abs(r) for r in ranks(S, out))
    k = m.lattice.rank
    assert rs == [0] * (k - 3) + [1, 1, 1] or rs == [0] * (k - 4) + [1, 1, 1, 1]
    assert norm(S, out) <= norm(S, b)
    assert cert.verify()
    if label[0] == "M":
        assert norm(S, out) == 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["M0", "M1", "M2", "M3", "M5", "D-2", "D0", "D5"]), st.integers(0, 10_000))
def test_normal_form_and_idempotence(label, seed):
    m = _model(label)
    S = m.surface()
    b, _ = scramble(m.lattice.standard_basis(), 12, seed=seed)
    out, cert = normal_form(S, b)
    want = dc_gram(0) if label[0] == "D" else mk_gram(m.param)
    assert out.gram() == want
    assert cert.verify() and cert.source == b and cert.target == out
    again, c2 = normal_form(S, out)
    assert again.gram() == want


def test_normal_form_rejects_mutant():
    from pseudolattices.blowup import blow_up

    S0 = standard_model("M0").surface()
    B = blow_up(S0, tuple(-2 * x for x in S0.p))
    with pytest.raises(SearchError):
        normal_form(B, B.lattice.standard_basis())


def test_non_exceptional_input():
    m = _model("M1")
    b = m.lattice.standard_basis()
    bad = b.replace((b.vectors[1], b.vectors[0]) + b.vectors[2:])
    with pytest.raises(SearchError):
        perling_reduce(m.surface(), bad)


def test_relate_identity_and_scramble():
    m = _model("M1")
    S = m.surface()
    e = m.lattice.standard_basis()
    c = relate_up_to_isometry(S, e, e)
    assert c.verify() and c.isometry is None
    for seed in range(5):
        f, _ = scramble(e, 8, seed=seed)
        c = relate_up_to_isometry(S, e, f)
        assert c.verify()
        assert c.isometry is None


def test_relate_with_isometry_is_sound():
    m = _model("M2")
    S = m.surface()
    e = m.lattice.standard_basis()
    f, _ = scramble(e, 10, seed=3)
    c = relate_up_to_isometry(S, e, f, search_budget=0)
    assert c.verify()
    if c.isometry is not None:
        import pseudolattices.intmat as im
        G = m.lattice.gram
        assert im.matmul(im.matmul(im.transpose(c.isometry), G), c.isometry) == G
        assert im.matvec(c.isometry, S.p) == S.p


def test_cremona_pair_certificates():
    lat = Pseudolattice(CREMONA_GRAM)
    S = surface_from_lattice(lat)
    e = lat.standard_basis()
    f = apply_word(e, parse_word(CREMONA_WORD + " S1 S6"))
    explicit = Certificate(e, f, parse_word(CREMONA_WORD + " S1 S6"))
    assert explicit.verify() and explicit.isometry is None
    c = relate_up_to_isometry(S, e, f)
    assert c.verify() and c.isometry is None
    p = orbit_path(S, e, f, budget=200_000)
    assert p and p.verify()
    assert p.word.count(LeftAt) + p.word.count(RightAt) <= 19


def test_orbit_path_trivial_and_single_step():
    m = _model("M0")
    S = m.surface()
    e = m.lattice.standard_basis()
    c = orbit_path(S, e, e)
    assert c and len(c.word) == 0
    f = apply_word(e, parse_word("L1"))
    c = orbit_path(S, e, f)
    assert c.word.steps == (LeftAt(1),)
    g = apply_word(e, parse_word("S2"))
    c = orbit_path(S, e, g, budget=0)
    assert c and c.word.steps == (FlipSign(2),)


def test_orbit_path_budget_zero():
    m = _model("M0")
    S = m.surface()
    e = m.lattice.standard_basis()
    f = apply_word(e, parse_word("L1 R2"))
    res = orbit_path(S, e, f, budget=0)
    assert isinstance(res, NotFoundWithinBudget) and not res


def test_orbit_path_norm_slack_prunes():
    m = _model("M1")
    S = m.surface()
    e = m.lattice.standard_basis()
    f = apply_word(e, parse_word("L1 L2 R3"))
    c = orbit_path(S, e, f, norm_slack=100)
    assert c and c.verify()


@pytest.mark.parametrize("label,depth", [("M0", 4), ("M1", 3), ("D0", 3)])
def test_orbit_path_complete_against_enumeration(label, depth):
    m = _model(label)
    S = m.surface()
    e = m.lattice.standard_basis()
    dist = exhaustive_orbit(S, e, depth)
    rng = random.Random(11)
    n = m.lattice.rank
    checked = 0
    for _ in range(40):
        w = random_word(n, rng.randint(0, depth), rng, flips=True)
        f = apply_word(e, w)
        d = dist[_canon(f.vectors)]
        c = orbit_path(S, e, f, budget=50_000)
        assert c and c.verify()
        muts = c.word.count(LeftAt) + c.word.count(RightAt)
        assert muts <= d + 1
        checked += 1
    assert checked == 40


def test_scramble_is_deterministic():
    m = _model("M2")
    e = m.lattice.standard_basis()
    a, wa = scramble(e, 10, seed=5)
    b, wb = scramble(e, 10, seed=5)
    assert a == b and wa == wb
    assert apply_word(e, wa) == a
