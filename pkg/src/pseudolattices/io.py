"""JSON (de)serialisation for lattices, bases, words, surfaces and certificates."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .core import (
    Basis,
    FlipSign,
    HelixShift,
    LatticeError,
    LeftAt,
    MutationWord,
    Pseudolattice,
    RightAt,
    TwistCanonical,
)
from .surface import SurfaceStructure, build_surface_structure, surface_from_lattice


class FormatError(LatticeError):
    pass


def dumps(obj) -> str:
    """Stable JSON text: sorted keys, compact rows, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _rows(m) -> list:
    return [list(r) for r in m]


def lattice_to_json(lat: Pseudolattice) -> dict:
    return {"schema": "pseudolattice.v1", "rank": lat.rank, "gram": _rows(lat.gram)}


def lattice_from_json(d: dict, base: Path | None = None) -> Pseudolattice:
    if isinstance(d, str):
        return lattice_from_json(load(d if base is None else base / d))
    schema = d.get("schema", "pseudolattice.v1")
    if schema == "surface.v1":
        return lattice_from_json(d["lattice"], base)
    if schema not in ("pseudolattice.v1",) or "gram" not in d:
        raise FormatError(f"expected pseudolattice.v1, got {schema!r}")
    lat = Pseudolattice(d["gram"])
    if "rank" in d and d["rank"] != lat.rank:
        raise FormatError("rank field disagrees with the Gram matrix")
    return lat


def basis_to_json(b: Basis) -> dict:
    return {"schema": "basis.v1", "lattice": lattice_to_json(b.lattice), "vectors": _rows(b.vectors)}


def basis_from_json(d: dict, base: Path | None = None) -> Basis:
    schema = d.get("schema")
    if schema in ("pseudolattice.v1", "surface.v1"):
        # a bare lattice stands for its standard basis
        return lattice_from_json(d, base).standard_basis()
    if "vectors" not in d:
        raise FormatError("basis.v1 needs a vectors field")
    lat = lattice_from_json(d["lattice"], base)
    return Basis(lat, tuple(tuple(int(x) for x in v) for v in d["vectors"]))


def _atom_to_json(a) -> dict:
    if isinstance(a, (LeftAt, RightAt, FlipSign)):
        return {"op": a.op, "i": a.i}
    if isinstance(a, HelixShift):
        return {"op": "H"}
    if isinstance(a, TwistCanonical):
        return {"op": "T", "m": a.m}
    raise FormatError(f"unknown atom {a!r}")


def _atom_from_json(d: dict):
    op = d.get("op")
    if op == "L":
        return LeftAt(int(d["i"]))
    if op == "R":
        return RightAt(int(d["i"]))
    if op == "S":
        return FlipSign(int(d["i"]))
    if op == "H":
        return HelixShift()
    if op == "T":
        return TwistCanonical(int(d["m"]))
    raise FormatError(f"unknown op {op!r}")


def word_to_json(w: MutationWord) -> dict:
    return {"schema": "word.v1", "steps": [_atom_to_json(a) for a in w]}


def word_from_json(d: dict) -> MutationWord:
    return MutationWord(tuple(_atom_from_json(s) for s in d["steps"]))


def _num(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else str(f)


def surface_to_json(S: SurfaceStructure) -> dict:
    return {
        "schema": "surface.v1",
        "lattice": lattice_to_json(S.lattice),
        "p": list(S.p),
        "ns_basis": _rows(S.ns_basis),
        "ns_gram": _rows(S.ns_gram),
        "K": [_num(x) for x in S.K],
    }


def surface_from_json(d: dict, base: Path | None = None) -> SurfaceStructure:
    lat = lattice_from_json(d, base)
    if d.get("schema") == "surface.v1" and "p" in d:
        lifts = d.get("ns_basis")
        S = build_surface_structure(lat, tuple(d["p"]), ns_lifts=lifts and tuple(tuple(v) for v in lifts))
        if "K" in d and tuple(Fraction(x) for x in d["K"]) != tuple(Fraction(x) for x in S.K):
            raise FormatError("cached K disagrees with the recomputed canonical class")
        return S
    return surface_from_lattice(lat)


def certificate_to_json(c) -> dict:
    return {
        "schema": "certificate.v1",
        "source": basis_to_json(c.source),
        "target": basis_to_json(c.target),
        "word": word_to_json(c.word),
        "isometry": None if c.isometry is None else _rows(c.isometry),
    }


def certificate_from_json(d: dict):
    from .search import Certificate

    iso = d.get("isometry")
    return Certificate(
        basis_from_json(d["source"]),
        basis_from_json(d["target"]),
        word_from_json(d["word"]),
        None if iso is None else tuple(tuple(r) for r in iso),
    )


def load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def save(path, obj: dict) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(dumps(obj))
