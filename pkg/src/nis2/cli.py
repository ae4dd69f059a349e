"""Command-line front end: ``nis2 <command> ...``.

Exit codes: 0 pass, 1 axiom or assertion failure, 2 input error, 3 theorem violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import build, catalog, io, theorem
from .forms import TheoremViolation, nis_superdimension, pencil_scan
from .liesuper import validate
from .restricted import additivity_defects, find_p_structure, verify_2_4_structure

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_THEOREM = 0, 1, 2, 3


def _load(path: str, field: int | None = None):
    g, ps = io.load_algebra(path)
    if field is not None and field != g.p:
        raise io.DocumentError(f"--field {field} does not match p = {g.p} in {path}")
    return g, ps


def _emit(obj, fmt: str, text: str):
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def cmd_validate(args) -> int:
    g, _ = _load(args.file, args.field)
    rep = validate(g)
    _emit(rep.to_dict(), args.format, rep.format_text())
    return EXIT_OK if rep.ok else EXIT_FAIL


def _gram_text(form) -> str:
    return "\n".join("    " + " ".join(str(int(v)) for v in row) for row in form.gram.to_array())


def cmd_forms(args) -> int:
    g, _ = _load(args.file)
    code = EXIT_OK
    try:
        rep = nis_superdimension(g, strict=args.strict)
    except TheoremViolation as exc:
        payload = {"violation": str(exc), **exc.payload}
        _emit(payload, args.format, f"THEOREM VIOLATION: {exc}\n{json.dumps(exc.payload)}")
        return EXIT_THEOREM
    space = rep.forms
    label = rep.label
    if "field not closed" in rep.notes:
        label += " (field not closed)"
    lines = [f"algebra {g.name or args.file}: superdimension {g.sdim} over F_{g.p}"]
    lines.append(f"invariant symmetric forms: {space.superdimension[0]}|{space.superdimension[1]}" + (" (strict)" if args.strict else ""))
    for kind, basis in (("even", space.even_basis), ("odd", space.odd_basis)):
        for i, f in enumerate(basis):
            lines.append(f"  {kind} form {i}: rank {f.rank()}, {'nondegenerate' if f.is_nondegenerate() else 'degenerate'}")
            lines.append(_gram_text(f))
    lines.append(f"simple: {'yes' if rep.is_simple else 'no'} ({rep.simplicity_method})")
    lines.append(f"commutant is the whole algebra: {'yes' if rep.perfect else 'no'}")
    if rep.dichotomy_checked:
        lines.append(f"each homogeneous form is 0 or nondegenerate: {'yes' if rep.dichotomy_holds else 'no'}")
    lines.append(f"NIS superdimension: {label}; classification: {rep.classification}")
    pencils = []
    if args.pencil:
        for kind, basis in (("even", space.even_basis), ("odd", space.odd_basis)):
            for i in range(len(basis)):
                for j in range(i + 1, len(basis)):
                    scan = pencil_scan(basis[i], basis[j])
                    pencils.append({"parity": kind, "pair": [i, j], "values": scan.values, "polynomial": scan.polynomial})
                    vals = ", ".join(f"det(B{i}+{lam}B{j})={d}" for lam, d in scan.values)
                    lines.append(f"pencil {kind} ({i},{j}): {vals}; polynomial {scan.polynomial}")
    obj = {
        "name": g.name,
        "sdim": g.sdim,
        "strict": args.strict,
        "is_forms": list(space.superdimension),
        "even_forms": [f.gram.to_array().tolist() for f in space.even_basis],
        "odd_forms": [f.gram.to_array().tolist() for f in space.odd_basis],
        "even_nondegenerate": [f.is_nondegenerate() for f in space.even_basis],
        "odd_nondegenerate": [f.is_nondegenerate() for f in space.odd_basis],
        "simple": rep.is_simple,
        "perfect": rep.perfect,
        "nis_superdimension": label,
        "classification": rep.classification,
        "notes": rep.notes,
        "pencils": pencils,
    }
    _emit(obj, args.format, "\n".join(lines))
    return code


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            e = catalog.CATALOG[name]
            sys.stdout.write(f"{name:<16} {e.description}\n")
        return EXIT_OK
    if not args.name:
        raise io.DocumentError("catalog get needs a name")
    try:
        g = catalog.get(args.name)
    except KeyError as exc:
        raise io.DocumentError(str(exc.args[0])) from None
    sys.stdout.write(io.dumps(io.algebra_to_doc(g)))
    return EXIT_OK


def cmd_queerify(args) -> int:
    g, ps = _load(args.file)
    try:
        q = build.queerify(g, ps)
    except build.ConstructionError as exc:
        sys.stderr.write(f"queerify: {exc}\n")
        return EXIT_FAIL
    except TheoremViolation as exc:
        sys.stderr.write(f"THEOREM VIOLATION: {exc}\n")
        return EXIT_THEOREM
    sys.stdout.write(io.dumps(io.algebra_to_doc(q)))
    return EXIT_OK


def cmd_tensor(args) -> int:
    L, ps = _load(args.lfile)
    try:
        if args.mode == "extend":
            if not args.poly:
                raise io.DocumentError("--mode extend needs --poly")
            coeffs = [int(c) for c in args.poly.split(",")]
            try:
                out, _ = build.scalar_extension(L, coeffs)
            except ValueError as exc:
                raise io.DocumentError(str(exc)) from None
        else:
            if not args.afile:
                raise io.DocumentError(f"--mode {args.mode} needs an associative algebra file")
            A = io.doc_to_assoc(io.read_json(args.afile))
            if args.mode == "super":
                out = build.tensor_supercommutative(L, A)
            else:
                out = build.tensor_commutative_24(L, A, ps)
    except build.ConstructionError as exc:
        sys.stderr.write(f"tensor: {exc}\n")
        return EXIT_FAIL
    sys.stdout.write(io.dumps(io.algebra_to_doc(out)))
    return EXIT_OK


def cmd_restrict(args) -> int:
    g, _ = _load(args.file)
    res = find_p_structure(g)
    if not res:
        labels = ", ".join(g.label(i) for i in res.unsolvable)
        sys.stdout.write(f"no {g.p}-structure: (ad x)^{g.p} is not inner for x in {{{labels}}}\n")
        return EXIT_FAIL
    ps = res.structure
    lines = [f"{g.p}-structure on the even part ({g.dim_even} basis vectors):"]
    for i in range(g.dim_even):
        v = np.zeros(g.dim, dtype=np.int64)
        v[: g.dim_even] = ps.p_map[i]
        lines.append(f"  {g.label(i)}^[{g.p}] = {g.describe(v)}")
    if ps.ambiguous:
        lines.append(f"ambiguous: the center {ps.ambiguity.describe()} can be added to any value")
    if g.p == 2:
        bad = additivity_defects(ps)
        lines.append(f"additivity (x+y)^[2] = x^[2] + y^[2] + [x,y] on basis pairs: {'ok' if not bad else f'fails on {bad}'}")
    verdict = verify_2_4_structure(g, ps)
    if g.dim_odd:
        lines.append(f"restrictedness against even vectors: {'ok' if verdict.restricted_even else 'FAIL'}")
        lines.append(f"restrictedness against odd vectors: {'ok' if verdict.restricted_odd else 'FAIL'}")
        lines.append(f"[x^[2p], y] = (ad x)^(2p) y on odd x: {'ok' if verdict.two_p else 'FAIL'}")
        for w in verdict.witnesses[:5]:
            lines.append(f"  witness {w}")
    sys.stdout.write("\n".join(lines) + "\n")
    doc = io.algebra_to_doc(g, ps)
    if args.output:
        Path(args.output).write_text(io.dumps(doc), encoding="utf-8")
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_check_theorem(args) -> int:
    algebras = []
    if args.catalog or not args.files:
        algebras.extend(catalog.get(n) for n in catalog.names())
    for f in args.files:
        g, _ = _load(f)
        if not g.name:
            g = g.renamed(Path(f).stem)
        algebras.append(g)
    rows = theorem.check_many(algebras)
    obj = {"rows": [r.to_dict() for r in rows], "violations": sum(r.violation for r in rows)}
    _emit(obj, args.format, theorem.format_table(rows))
    return EXIT_THEOREM if obj["violations"] else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nis2", description="Lie superalgebras over F_p and their invariant forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the Lie superalgebra axioms")
    p.add_argument("file")
    p.add_argument("--field", type=int, help="expected characteristic; must match the file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("forms", help="invariant symmetric forms and the NIS superdimension")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="also require B(x^2, y) = B(x, [x, y])")
    p.add_argument("--pencil", action="store_true", help="print det(B1 + lambda B2) for same-parity pairs")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_forms)

    p = sub.add_parser("catalog", help="built-in algebras")
    p.add_argument("action", choices=["list", "get"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("queerify", help="q(g) for a restricted Lie algebra over F_2")
    p.add_argument("file")
    p.set_defaults(func=cmd_queerify)

    p = sub.add_parser("tensor", help="tensor products with associative superalgebras")
    p.add_argument("lfile")
    p.add_argument("afile", nargs="?")
    p.add_argument("--mode", choices=["super", "comm24", "extend"], default="super")
    p.add_argument("--poly", help="comma-separated coefficients, constant term first (extend mode)")
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("restrict", help="find and verify a p-structure")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the algebra with its pStructure block")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("check-theorem", help="batch check of the NIS classification")
    p.add_argument("--catalog", action="store_true", help="include every catalog algebra (default without files)")
    p.add_argument("files", nargs="*")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_check_theorem)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except io.DocumentError as exc:
        sys.stderr.write(f"nis2: input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
