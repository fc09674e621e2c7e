"""Command-line interface: ``fibersum <command> ...``.

Manifest arguments are JSON paths, or ``catalog:<name>`` for a built-in
record.  Errors are printed to stderr as one line ``error[<code>]: <text>``.

Exit codes: 0 success, 1 validation or verification failure, 2 usage error,
3 parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import catalog
from .donaldson import StructureError, build_dseries, d_zero, from_dws, to_dws, validate_structure
from .gluing import DIRECT, VIA_B, GluingConfig, GluingError, glue, glued_record
from .lattice import LatticeError, as_fraction, sparse
from .manifest import (LoadedManifest, ManifestError, ManifestValidationError, load_manifest, load_matches,
                       load_series, record_from_dict, record_to_dict, series_to_dict, to_json)
from .series import DSeries, expand, render

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int):
        super().__init__(message)
        self.code = code
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, EXIT_USAGE)


def _load(source: str, *, validate: bool = True) -> LoadedManifest:
    if source.startswith("catalog:"):
        name = source.split(":", 1)[1]
        try:
            e = catalog.get(name)
        except catalog.CatalogError as exc:
            raise CliError("usage", str(exc.args[0]), EXIT_USAGE) from None
        data = record_to_dict(e.record, e.named_classes, e.notes, e.extra_constants)
        return record_from_dict(data, validate=validate, source=name)
    return load_manifest(source, validate=validate)


def _class(m: LoadedManifest, text: str):
    return m.parse_class(text)


def _emit_series(s: DSeries, as_json: bool) -> None:
    if as_json:
        print(to_json(series_to_dict(s)))
    else:
        print(render(s))


def cmd_validate(args) -> int:
    m = _load(args.manifest, validate=False)
    problems = validate_structure(m.record)
    for p in problems:
        print(p)
    if not problems:
        print(f"{m.record.name}: ok")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_series(args) -> int:
    m = _load(args.manifest)
    _emit_series(build_dseries(m.record, _class(m, args.w)), args.json)
    return EXIT_OK


def cmd_transform(args) -> int:
    m = _load(args.manifest)
    w = _class(m, args.w)
    X = m.record
    if not args.invert:
        _emit_series(to_dws(X, w), args.json)
        return EXIT_OK
    if not args.series:
        raise CliError("usage", "--invert needs --series <series.json>", EXIT_USAGE)
    s = load_series(args.series)
    if s.lattice.gram != X.lattice.gram or s.lattice.generator_names != X.lattice.generator_names:
        raise CliError("usage", "series lattice does not match the manifest lattice", EXIT_USAGE)
    s = s.relabel(X.lattice)
    struct = from_dws(s, X.sigma, d_zero(X, w), w)
    print(to_json({"basic_classes": [{"k": sparse(K), "a": str(a)} for K, a in struct]}))
    return EXIT_OK


def cmd_glue(args) -> int:
    m1, m2 = _load(args.m1), _load(args.m2)
    matched = load_matches(args.match, m1.record, m2.record)
    mode = DIRECT if args.mode == "direct" else VIA_B
    cfg = GluingConfig(m1.record, m2.record, matched, mode, label=args.name or "")
    w1, w2 = _class(m1, args.w1), _class(m2, args.w2)
    if args.record:
        rec, w = glued_record(cfg, w1, w2)
        named = {"w": w, "Sigma": rec.sigma}
        print(to_json(record_to_dict(rec, named)))
        return EXIT_OK
    s = glue(cfg, w1, w2)
    if args.dws:
        rec, w = glued_record(cfg, w1, w2)
        s = to_dws(rec, w)
    _emit_series(s, args.json)
    return EXIT_OK


def _directions(text: str, lattice, named=None):
    out = []
    for part in text.split(","):
        name, sep, expr = part.partition(":")
        if not sep or not name.strip() or not expr.strip():
            raise CliError("usage", f"--along entries look like name:class, got {part!r}", EXIT_USAGE)
        try:
            out.append((name.strip(), lattice.parse(expr, named or {})))
        except LatticeError as exc:
            raise CliError("parse", f"--along {part!r}: {exc}", EXIT_PARSE) from None
    return out


def cmd_expand(args) -> int:
    if args.source.endswith(".json") and args.w is None:
        s = load_series(args.source)
        named = {}
    else:
        m = _load(args.source)
        if args.w is None:
            raise CliError("usage", "manifest sources need --w", EXIT_USAGE)
        w = _class(m, args.w)
        s = to_dws(m.record, w) if args.dws else build_dseries(m.record, w)
        named = m.named_classes
    print(expand(s, _directions(args.along, s.lattice, named), args.degree).render())
    return EXIT_OK


def _vector(text: str):
    from .floer import relvec_from_monomials

    try:
        vals = [as_fraction(x) for x in text.split(",")]
    except (LatticeError, TypeError) as exc:
        raise CliError("parse", f"vector {text!r}: {exc}", EXIT_PARSE) from None
    if len(vals) != 4:
        raise CliError("usage", f"V4 vectors have 4 entries, got {len(vals)}", EXIT_USAGE)
    return relvec_from_monomials(vals)


def cmd_pair_v4(args) -> int:
    from .floer import pair_v4

    print(pair_v4(_vector(args.u), _vector(args.v)).constant_value())
    return EXIT_OK


def cmd_verify_l(args) -> int:
    from .floer import verify_l

    print(verify_l())
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .checks import run_all

    results = run_all()
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_catalog(args) -> int:
    from .manifest import dump_manifest

    if args.name is None:
        for n in catalog.NAMES:
            print(n)
        return EXIT_OK
    e = catalog.get(args.name) if args.name in catalog.NAMES else None
    if e is None:
        raise CliError("usage", f"unknown catalog entry {args.name!r}", EXIT_USAGE)
    sys.stdout.write(dump_manifest(e.record, e.named_classes, e.notes, e.extra_constants))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fibersum", description="Exact Donaldson series and gluing along genus-2 surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a manifest's basic-class constraints")
    s.add_argument("manifest")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("series", help="print the Donaldson series for a given w")
    s.add_argument("manifest")
    s.add_argument("--w", required=True, help="class expression, e.g. F or S-E1-E2")
    s.add_argument("--json", action="store_true", help="print a series JSON document")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("transform", help="two-sector (w, Sigma) series, or its inverse")
    s.add_argument("manifest")
    s.add_argument("--w", required=True)
    s.add_argument("--invert", action="store_true")
    s.add_argument("--series", help="series JSON to invert")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("glue", help="series of the sum along Sigma")
    s.add_argument("--mode", choices=("direct", "via-b"), default="direct")
    s.add_argument("m1")
    s.add_argument("m2")
    s.add_argument("--match", required=True, help="match manifest JSON")
    s.add_argument("--w1", required=True)
    s.add_argument("--w2", required=True)
    s.add_argument("--name", help="label for the glued lattice")
    s.add_argument("--dws", action="store_true", help="print the two-sector series instead")
    s.add_argument("--record", action="store_true", help="print the glued manifest instead")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("expand", help="Taylor coefficients along chosen directions")
    s.add_argument("source", help="series JSON, or a manifest together with --w")
    s.add_argument("--along", required=True, help="e.g. t:D,s:Sigma")
    s.add_argument("--degree", type=int, default=8)
    s.add_argument("--w")
    s.add_argument("--dws", action="store_true", help="expand the two-sector series of a manifest")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("pair-v4", help="pair two dual-coordinate V4 vectors")
    s.add_argument("--u", default="1/2,0,2,0")
    s.add_argument("--v", default="0,2,0,8")
    s.set_defaults(func=cmd_pair_v4)

    s = sub.add_parser("verify-l", help="recompute the constant l")
    s.set_defaults(func=cmd_verify_l)

    s = sub.add_parser("verify-paper", help="run the numbered regression checks")
    s.set_defaults(func=cmd_verify_paper)

    s = sub.add_parser("catalog", help="list catalog entries or print one as a manifest")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "degree", 0) is not None and getattr(args, "degree", 0) < 0:
            raise CliError("usage", "--degree must be non-negative", EXIT_USAGE)
        return args.func(args)
    except CliError as exc:
        code, msg, status = exc.code, str(exc), exc.status
    except ManifestValidationError as exc:
        code, msg, status = "validation", str(exc), EXIT_FAIL
    except ManifestError as exc:
        code, msg, status = "parse", str(exc), EXIT_PARSE
    except (GluingError, StructureError) as exc:
        code, msg, status = "math", str(exc), EXIT_FAIL
    except LatticeError as exc:
        code, msg, status = "parse", str(exc), EXIT_PARSE
    except ValueError as exc:
        code, msg, status = "failed", str(exc), EXIT_FAIL
    print(f"error[{code}]: {' '.join(msg.split())}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
