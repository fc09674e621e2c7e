"""JSON manifests for manifold records, matchings and series.

Rationals are always written as strings (``"p/q"`` or ``"p"``); numbers in
JSON are accepted only when they are integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .donaldson import ManifoldRecord, SimpleTypeStructure, StructureError, validate_structure
from .gluing import CIRCLE, CURVE, GluingError, MatchedClass
from .lattice import IntersectionLattice, LatticeClass, LatticeError, as_fraction, sparse
from .series import DSeries, parse_series, render

__all__ = [
    "ManifestError",
    "ManifestValidationError",
    "LoadedManifest",
    "record_from_dict",
    "record_to_dict",
    "load_manifest",
    "dump_manifest",
    "matches_from_data",
    "matches_to_data",
    "load_matches",
    "series_to_dict",
    "series_from_dict",
    "bundled_path",
    "to_json",
    "load_series",
]


class ManifestError(ValueError):
    """Malformed manifest; the message starts with the offending field path."""


class ManifestValidationError(ValueError):
    def __init__(self, name: str, violations: list[str]):
        self.violations = violations
        super().__init__(f"{name}: " + "; ".join(violations))


class LoadedManifest:
    def __init__(self, record: ManifoldRecord, named_classes: dict[str, LatticeClass],
                 notes: str = "", extra_constants: dict[str, Fraction] | None = None):
        self.record = record
        self.named_classes = named_classes
        self.notes = notes
        self.extra_constants = extra_constants or {}

    def parse_class(self, text: str) -> LatticeClass:
        try:
            return self.record.lattice.parse(text, self.named_classes)
        except LatticeError as exc:
            raise ManifestError(f"class expression {text!r}: {exc}") from None


def _rat(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise ManifestError(f"{where}: floats are not allowed, write rationals as strings")
    try:
        return as_fraction(value)
    except (TypeError, LatticeError) as exc:
        raise ManifestError(f"{where}: {exc}") from None


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestError(f"{where}: expected an integer, got {value!r}")
    return value


def _field(data: Mapping, key: str, where: str):
    if not isinstance(data, Mapping):
        raise ManifestError(f"{where}: expected an object")
    if key not in data:
        raise ManifestError(f"{where}.{key}: missing field")
    return data[key]


def _class(lattice: IntersectionLattice, value: Any, where: str) -> LatticeClass:
    if not isinstance(value, Mapping):
        raise ManifestError(f"{where}: expected a sparse coordinate map")
    coeffs = {}
    for k, v in value.items():
        if k not in lattice.generator_names:
            raise ManifestError(f"{where}.{k}: unknown generator")
        coeffs[k] = _rat(v, f"{where}.{k}")
    return lattice.element(coeffs)


def _fmt(x: Fraction) -> str:
    return str(x)


def record_from_dict(data: Mapping, *, validate: bool = True, source: str = "manifest") -> LoadedManifest:
    """Build a record; with ``validate`` any structure violation raises."""
    name = _field(data, "name", source)
    if not isinstance(name, str) or not name:
        raise ManifestError(f"{source}.name: expected a non-empty string")
    gens = _field(data, "generators", source)
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise ManifestError(f"{source}.generators: expected a list of names")
    rows = _field(data, "gram", source)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ManifestError(f"{source}.gram: expected a list of rows")
    gram = [[_rat(x, f"{source}.gram[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    try:
        lattice = IntersectionLattice(tuple(gens), tuple(tuple(r) for r in gram), name=name)
    except LatticeError as exc:
        raise ManifestError(f"{source}.gram: {exc}") from None
    sigma = _class(lattice, _field(data, "sigma", source), f"{source}.sigma")
    entries = []
    for i, bc in enumerate(data.get("basic_classes", [])):
        where = f"{source}.basic_classes[{i}]"
        entries.append((_class(lattice, _field(bc, "k", where), f"{where}.k"),
                        _rat(_field(bc, "a", where), f"{where}.a")))
    try:
        structure = SimpleTypeStructure(tuple(entries))
    except StructureError as exc:
        raise ManifestError(f"{source}.basic_classes: {exc}") from None
    fto = data.get("finite_type_order")
    monomials = {}
    for k, v in dict(data.get("monomials", {})).items():
        try:
            deg = int(k)
        except ValueError:
            raise ManifestError(f"{source}.monomials.{k}: degree must be an integer") from None
        monomials[deg] = _rat(v, f"{source}.monomials.{k}")
    simple = data.get("simple_type", True)
    if not isinstance(simple, bool):
        raise ManifestError(f"{source}.simple_type: expected true or false")
    try:
        record = ManifoldRecord(
            name=name,
            b1=_int(_field(data, "b1", source), f"{source}.b1"),
            b_plus=_int(_field(data, "b_plus", source), f"{source}.b_plus"),
            lattice=lattice,
            sigma=sigma,
            structure=structure,
            simple_type=simple,
            finite_type_order=None if fto is None else _int(fto, f"{source}.finite_type_order"),
            chamber=data.get("chamber"),
            monomials=monomials,
        )
    except StructureError as exc:
        raise ManifestError(f"{source}: {exc}") from None
    named = {k: _class(lattice, v, f"{source}.named_classes.{k}")
             for k, v in dict(data.get("named_classes", {})).items()}
    extra = {k: _rat(v, f"{source}.extra_constants.{k}") for k, v in dict(data.get("extra_constants", {})).items()}
    if validate:
        problems = validate_structure(record)
        if problems:
            raise ManifestValidationError(name, problems)
    return LoadedManifest(record, named, str(data.get("notes", "")), extra)


def record_to_dict(record: ManifoldRecord, named_classes: Mapping[str, LatticeClass] | None = None,
                   notes: str = "", extra_constants: Mapping[str, Fraction] | None = None) -> dict:
    lat = record.lattice
    out: dict = {
        "name": record.name,
        "b1": record.b1,
        "b_plus": record.b_plus,
        "simple_type": record.simple_type,
        "finite_type_order": record.finite_type_order,
        "generators": list(lat.generator_names),
        "gram": [[_fmt(x) for x in row] for row in lat.gram],
        "sigma": sparse(record.sigma),
        "basic_classes": [{"k": sparse(K), "a": _fmt(a)} for K, a in record.structure],
        "named_classes": {k: sparse(v) for k, v in sorted((named_classes or {}).items())},
    }
    if record.chamber is not None:
        out["chamber"] = record.chamber
    if record.monomials:
        out["monomials"] = {str(k): _fmt(v) for k, v in sorted(record.monomials.items())}
    if extra_constants:
        out["extra_constants"] = {k: _fmt(v) for k, v in sorted(extra_constants.items())}
    if notes:
        out["notes"] = notes
    return out


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_manifest(path: str | Path, *, validate: bool = True) -> LoadedManifest:
    return record_from_dict(_read_json(path), validate=validate, source=Path(path).name)


def _is_flat(value) -> bool:
    if isinstance(value, list):
        return all(not isinstance(v, (list, dict)) for v in value)
    if isinstance(value, dict):
        return all(not isinstance(v, (list, dict)) for v in value.values())
    return True


def to_json(value, indent: int = 0) -> str:
    """Indented JSON that keeps flat lists and flat objects on one line."""
    if _is_flat(value) and isinstance(value, (list, dict)) and indent:
        return json.dumps(value)
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(f"{pad}{json.dumps(k)}: {to_json(v, indent + 1)}" for k, v in value.items())
        return "{\n" + body + "\n" + "  " * indent + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        body = ",\n".join(pad + to_json(v, indent + 1) for v in value)
        return "[\n" + body + "\n" + "  " * indent + "]"
    return json.dumps(value)


def dump_manifest(record: ManifoldRecord, named_classes=None, notes: str = "", extra_constants=None) -> str:
    return to_json(record_to_dict(record, named_classes, notes, extra_constants)) + "\n"


def matches_from_data(data: Any, x1: ManifoldRecord, x2: ManifoldRecord, source: str = "match") -> tuple[MatchedClass, ...]:
    if isinstance(data, Mapping):
        data = _field(data, "matched", source)
    if not isinstance(data, list):
        raise ManifestError(f"{source}: expected a list of matched classes")
    out = []
    for i, item in enumerate(data):
        where = f"{source}[{i}]"
        name = _field(item, "name", where)
        if not isinstance(name, str):
            raise ManifestError(f"{where}.name: expected a string")
        d1 = _class(x1.lattice, _field(item, "d1", where), f"{where}.d1")
        d2 = _class(x2.lattice, _field(item, "d2", where), f"{where}.d2")
        boundary = item.get("boundary", "circle")
        if not isinstance(boundary, str):
            raise ManifestError(f"{where}.boundary: expected a string")
        kind, _, arg = boundary.partition(":")
        k = None
        if kind == CIRCLE:
            k = _rat(arg, f"{where}.boundary") if arg else None
        elif kind != CURVE or arg:
            raise ManifestError(f"{where}.boundary: expected 'circle:k' or 'curve', got {boundary!r}")
        try:
            out.append(MatchedClass(name, d1, d2, kind, k))
        except GluingError as exc:
            raise ManifestError(f"{where}: {exc}") from None
    return tuple(out)


def matches_to_data(matched) -> list[dict]:
    out = []
    for m in matched:
        b = m.boundary if m.boundary == CURVE or m.k is None else f"{CIRCLE}:{m.k}"
        out.append({"name": m.name, "d1": sparse(m.d1), "d2": sparse(m.d2), "boundary": b})
    return out


def load_matches(path: str | Path, x1: ManifoldRecord, x2: ManifoldRecord) -> tuple[MatchedClass, ...]:
    return matches_from_data(_read_json(path), x1, x2, Path(path).name)


def series_to_dict(s: DSeries) -> dict:
    lat = s.lattice
    return {
        "lattice": {"name": lat.name, "generators": list(lat.generator_names),
                    "gram": [[_fmt(x) for x in row] for row in lat.gram]},
        "series": render(s),
    }


def series_from_dict(data: Any, source: str = "series") -> DSeries:
    lat_data = _field(data, "lattice", source)
    gens = _field(lat_data, "generators", f"{source}.lattice")
    rows = _field(lat_data, "gram", f"{source}.lattice")
    try:
        lattice = IntersectionLattice(tuple(gens), tuple(tuple(_rat(x, f"{source}.lattice.gram") for x in r)
                                                         for r in rows), name=lat_data.get("name", ""))
    except (LatticeError, TypeError) as exc:
        raise ManifestError(f"{source}.lattice: {exc}") from None
    text = _field(data, "series", source)
    try:
        return parse_series(text, lattice)
    except (ValueError, LatticeError) as exc:
        raise ManifestError(f"{source}.series: {exc}") from None


def load_series(path: str | Path) -> DSeries:
    return series_from_dict(_read_json(path), Path(path).name)


def bundled_path(name: str) -> Path:
    """Path of a bundled data file, e.g. ``bundled_path("B.json")``."""
    return Path(str(resources.files("fibersum") / "data" / name))
