"""Command-line front end: `pseudolattices <command> ...`.

Exit codes: 0 success, 1 usage or invariant error, 2 not found within budget.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import intmat as im
from . import io
from .core import Basis, LatticeError, apply_word, parse_word

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _color(text: str, code: str, stream) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


def _read(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    return io.load(path)


def _emit(obj, out=None) -> None:
    text = io.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _surface_and_basis(path: str):
    d = _read(path)
    base = Path(path).parent if path != "-" else None
    if d.get("schema") == "basis.v1":
        b = io.basis_from_json(d, base)
        lat_doc = d["lattice"]
        if isinstance(lat_doc, str):
            lat_doc = io.load(base / lat_doc if base else lat_doc)
        return io.surface_from_json(lat_doc), b
    S = io.surface_from_json(d, base)
    return S, S.lattice.standard_basis()


def _vector(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(",", " ").split())


# --- commands -----------------------------------------------------------------

def cmd_classify(a) -> int:
    from .surface import ClassificationPreconditionError, classify

    S, _ = _surface_and_basis(a.file)
    try:
        c = classify(S, strict=a.strict, bound=a.bound)
    except ClassificationPreconditionError as exc:
        print(f"NoExceptionalBasis: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if a.json:
        _emit({"kind": c.kind, "k": c.k, "label": str(c), "hypotheses": im_plain(c.hypotheses)})
    else:
        print(str(c))
        if c.kind == "NoExceptionalBasis":
            print("failed: " + ", ".join(c.hypotheses.get("failed", [])), file=sys.stderr)
    return EXIT_OK


def im_plain(x):
    from .verify import plain
    return plain(x)


def cmd_reduce(a) -> int:
    from .search import perling_reduce

    S, b = _surface_and_basis(a.file)
    _, cert = perling_reduce(S, b, budget=a.budget)
    _emit(io.certificate_to_json(cert), a.output)
    return EXIT_OK


def cmd_normal_form(a) -> int:
    from .search import normal_form

    S, b = _surface_and_basis(a.file)
    _, cert = normal_form(S, b, budget=a.budget)
    _emit(io.certificate_to_json(cert), a.output)
    return EXIT_OK


def _same_lattice(b1: Basis, b2: Basis) -> None:
    if b1.lattice.gram != b2.lattice.gram:
        raise LatticeError("the two bases live on different lattices")


def cmd_relate(a) -> int:
    from .search import relate_up_to_isometry

    S, e = _surface_and_basis(a.source)
    _, f = _surface_and_basis(a.target)
    _same_lattice(e, f)
    cert = relate_up_to_isometry(S, e, f, search_budget=a.budget)
    _emit(io.certificate_to_json(cert), a.output)
    return EXIT_OK


def cmd_orbit_path(a) -> int:
    from .search import orbit_path

    S, e = _surface_and_basis(a.source)
    _, f = _surface_and_basis(a.target)
    _same_lattice(e, f)
    res = orbit_path(S, e, f, budget=a.budget, norm_slack=a.norm_slack)
    if not res:
        print(f"not found within budget {a.budget} ({res.explored} nodes)", file=sys.stderr)
        return EXIT_NOT_FOUND
    _emit(io.certificate_to_json(res), a.output)
    return EXIT_OK


def cmd_apply(a) -> int:
    S, b = _surface_and_basis(a.file)
    out = apply_word(b, parse_word(a.word), surface=S)
    _emit(io.basis_to_json(out), a.output)
    return EXIT_OK


def cmd_scramble(a) -> int:
    from .search import scramble

    _, b = _surface_and_basis(a.file)
    out, w = scramble(b, a.length, seed=a.seed)
    doc = io.basis_to_json(out)
    if a.word:
        doc["word"] = io.word_to_json(w)
    _emit(doc, a.output)
    return EXIT_OK


def cmd_blowup(a) -> int:
    from .blowup import blow_up

    S, _ = _surface_and_basis(a.file)
    z = _vector(a.center) if a.center else tuple(a.n * x for x in S.p)
    _emit(io.surface_to_json(blow_up(S, z)), a.output)
    return EXIT_OK


def cmd_contract(a) -> int:
    from .blowup import contract, recover_center

    S, b = _surface_and_basis(a.file)
    f = _vector(a.vector) if a.vector else b.vectors[a.index - 1]
    doc = io.surface_to_json(contract(S, f))
    doc["center"] = list(recover_center(S, f))
    _emit(doc, a.output)
    return EXIT_OK


def _weyl_word(text: str) -> list:
    return [int(x) for x in text.replace(",", " ").split()]


def cmd_weyl(a) -> int:
    from .picard import PicardLattice, apply_weyl, realize_weyl_as_mutations, weyl_matrix

    X = PicardLattice(a.points)
    word = _weyl_word(a.word)
    doc = {"points": a.points, "word": word, "matrix": [list(r) for r in weyl_matrix(X, word)]}
    if a.vector:
        v = _vector(a.vector)
        img = apply_weyl(X, word, v)
        doc["image"] = list(img)
        doc["image_text"] = X.fmt(img)
    if a.realize:
        w = realize_weyl_as_mutations(X, word)
        doc["mutations"] = io.word_to_json(w)
        doc["mutations_text"] = str(w)
    _emit(doc, a.output)
    return EXIT_OK


def cmd_iota(a) -> int:
    from .picard import PicardLattice, iota, stabilizer_membership_report

    X = PicardLattice(10)
    m = iota(X)
    rep = stabilizer_membership_report(X, m)
    doc = {
        "matrix": [list(r) for r in m],
        "H": X.fmt(im.matvec(m, X.H)),
        "E": [X.fmt(im.matvec(m, X.E(i))) for i in range(1, 11)],
        "factorisation": {"status": rep.status, "uses_iota": rep.uses_iota, "word": rep.word},
    }
    _emit(doc, a.output)
    return EXIT_OK


def cmd_ten_point(a) -> int:
    from .picard import PicardLattice, collection_gram, ten_point_collection, ten_point_divisors

    X = PicardLattice(10)
    divs = ten_point_divisors(X)
    cls = ten_point_collection(X)
    _emit({"divisors": [list(d) for d in divs], "text": [X.fmt(d) for d in divs],
           "gram": [list(r) for r in collection_gram(X, cls)]}, a.output)
    return EXIT_OK


def cmd_special_position(a) -> int:
    from .picard import PicardLattice, special_position_check

    rep = special_position_check(budget=a.budget)
    X = PicardLattice(8)
    doc = {"checks": rep.checks(), "D": X.fmt(rep.D), "word": rep.word, "explored": rep.explored,
           "system": None if rep.transported_system is None else [X.fmt(d) for d in rep.transported_system]}
    _emit(doc, a.output)
    if rep.word is None:
        return EXIT_NOT_FOUND
    return EXIT_OK if rep.ok else EXIT_ERROR


def _toric_doc(T) -> dict:
    return {"schema": "toric.v1", "n_points": T.X.n_points, "divisors": [list(d) for d in T.divisors],
            "squares": list(T.squares())}


def _toric_load(path: str):
    from .picard import PicardLattice
    from .toric import ToricSystem

    d = _read(path)
    return ToricSystem(PicardLattice(int(d["n_points"])), tuple(tuple(v) for v in d["divisors"]))


def cmd_toric(a) -> int:
    from .picard import PicardLattice
    from .toric import augment, de_augment, from_collection, standard_augmentation_search, standard_system

    if a.toric_cmd == "standard":
        _emit(_toric_doc(standard_system(a.points)), a.output)
    elif a.toric_cmd == "from-collection":
        d = _read(a.file)
        X = PicardLattice(int(d["n_points"]))
        _emit(_toric_doc(from_collection(X, [tuple(v) for v in d["divisors"]])), a.output)
    elif a.toric_cmd == "augment":
        _emit(_toric_doc(augment(_toric_load(a.file), a.m)), a.output)
    elif a.toric_cmd == "de-augment":
        r = de_augment(_toric_load(a.file), a.m)
        if not r.ok:
            print(f"cannot de-augment: {r.reason}", file=sys.stderr)
            return EXIT_ERROR
        doc = _toric_doc(r.system)
        doc["transport"] = r.transport
        _emit(doc, a.output)
    elif a.toric_cmd == "search":
        ch = standard_augmentation_search(_toric_load(a.file))
        _emit({"status": ch.status, "steps": ch.length, "reason": ch.reason,
               "final": _toric_doc(ch.final) if ch.final else None}, a.output)
    return EXIT_OK


def cmd_verify_paper(a) -> int:
    from .verify import verify_paper

    m0 = None
    if a.m0:
        m0 = io.lattice_from_json(_read(a.m0)).gram
    rep = verify_paper(m0_gram=m0)
    for x in rep.assertions:
        sys.stdout.write(json.dumps(x.record(), sort_keys=True) + "\n")
    sys.stdout.write(json.dumps(rep.summary(), sort_keys=True) + "\n")
    s = rep.summary()["summary"]
    line = f"{s['passed']}/{s['total']} assertions passed in {s['seconds']}s"
    print(_color(line, "32" if rep.ok else "31", sys.stderr), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_ERROR


def write_fixtures(out: Path) -> list:
    from .blowup import standard_model
    from .picard import PicardLattice, chern_model

    written = []

    def put(rel, doc):
        io.save(out / rel, doc)
        written.append(rel)

    put("m0.json", io.surface_to_json(standard_model("M0").surface()))
    for k in range(1, 8):
        put(f"mk/m{k}.json", io.surface_to_json(standard_model("Mk", k).surface()))
    for c in range(-5, 6):
        put(f"dc/d{c}.json", io.surface_to_json(standard_model("Dc", c).surface()))
    for n in range(0, 11):
        M = chern_model(n)
        doc = io.surface_to_json(M.surface)
        X = PicardLattice(n)
        doc["picard"] = {"n_points": n, "gram": [list(r) for r in X.gram], "K": list(X.K),
                         "ambient": ["O"] + [f"O(E{i})" for i in range(1, n + 1)] + ["O(H)", "O(2H)"]}
        put(f"picard/x{n}.json", doc)
    return written


def cmd_fixtures(a) -> int:
    for rel in write_fixtures(Path(a.out)):
        print(rel)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pseudolattices", description="Exact computations with surface-like pseudolattices.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return sp

    sp = add("classify", cmd_classify, "classify a lattice (P2, P1xP1, BlowupXk(k))")
    sp.add_argument("file")
    sp.add_argument("--bound", type=int, default=6, help="search box for witness vectors")
    sp.add_argument("--strict", action="store_true", help="fail instead of reporting NoExceptionalBasis")
    sp.add_argument("--json", action="store_true")

    sp = add("reduce", cmd_reduce, "norm reduction with certificate")
    sp.add_argument("file")
    sp.add_argument("--budget", type=int, default=50_000)

    sp = add("normal-form", cmd_normal_form, "mutate to the standard Gram matrix")
    sp.add_argument("file")
    sp.add_argument("--budget", type=int, default=50_000)

    sp = add("relate", cmd_relate, "certificate relating two bases up to isometry")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--budget", type=int, default=100_000)

    sp = add("orbit-path", cmd_orbit_path, "bidirectional search for a mutation path")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--norm-slack", type=int, default=None)

    sp = add("apply", cmd_apply, "apply a mutation word such as 'L1 R2 S3'")
    sp.add_argument("file")
    sp.add_argument("word")

    sp = add("scramble", cmd_scramble, "random mutation word applied to a basis")
    sp.add_argument("file")
    sp.add_argument("--length", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--word", action="store_true", help="include the word used")

    sp = add("blowup", cmd_blowup, "numerical blow-up at n*p")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--center", help="explicit centre vector (a multiple of p)")

    sp = add("contract", cmd_contract, "contract a rank-0 class")
    sp.add_argument("file")
    sp.add_argument("--index", type=int, default=1, help="1-indexed basis vector to contract")
    sp.add_argument("--vector", help="explicit vector instead of a basis vector")

    sp = add("weyl", cmd_weyl, "Weyl group words on the Picard lattice")
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--word", required=True, help="letters 0..n-1, composed left to right as maps")
    sp.add_argument("--vector")
    sp.add_argument("--realize", action="store_true", help="also print a mutation word")

    add("iota", cmd_iota, "the involution on ten points")
    add("ten-point", cmd_ten_point, "the ten-point line-bundle collection")

    sp = add("special-position", cmd_special_position, "eight-point (-1)-class checks")
    sp.add_argument("--budget", type=int, default=240)

    sp = sub.add_parser("toric", help="toric systems")
    sp.set_defaults(fn=cmd_toric)
    tsub = sp.add_subparsers(dest="toric_cmd", required=True, parser_class=_Parser)

    def tadd(name):
        t = tsub.add_parser(name)
        t.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return t
    tadd("standard").add_argument("--points", type=int, required=True)
    tadd("from-collection").add_argument("file")
    t = tadd("augment")
    t.add_argument("file")
    t.add_argument("--m", type=int, default=1)
    t = tadd("de-augment")
    t.add_argument("file")
    t.add_argument("--m", type=int, default=None)
    tadd("search").add_argument("file")

    sp = add("verify-paper", cmd_verify_paper, "replay the reference computations")
    sp.add_argument("--m0", help="override the plane model Gram matrix (fault injection)")

    sp = add("fixtures", cmd_fixtures, "regenerate the fixture lattices")
    sp.add_argument("--out", default="fixtures")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.fn(a)
    except (LatticeError, AssertionError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
