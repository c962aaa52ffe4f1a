"""Command-line front end.

Every subcommand builds one report dictionary.  ``--json`` prints it as
JSON; otherwise it is rendered as indented ``key: value`` text, so both
forms carry the same fields.  Exit status: 0 on any computed answer
(including negative verdicts), 1 on input errors, 2 when a mathematical
precondition fails.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import formats
from .basis import MonoidBasis, check_monoid_basis, monomial_candidates, search_monoid_basis, wedge_model
from .dga import euler_characteristic, homology, homology_ring
from .errors import InputError, MathError, NotABasis
from .gring.abelian import FgAbelianGroup
from .hochschild import hh_dga, hh_over_Z
from .obstruct import bockstein_q1_obstruction, extension_status, forced_unit_map, square_obstruction_p2
from .steenrod import apply_dl, dual_steenrod, hfp_homology_of_hz, parse_word
from .thh import THHTable, load_thh_table, shipped_table, thh_groups


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers


def _load(path: str) -> formats.Document:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return formats.parse(text)
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _module(v):
    return v.to_json() if isinstance(v, FgAbelianGroup) else v


def _module_text(v, ring):
    if isinstance(v, FgAbelianGroup):
        return str(v)
    return "0" if v == 0 else (str(ring) if v == 1 else f"{ring}^{v}")


def _table_report(T):
    return {
        "ring": str(T.ring),
        "cap": T.cap,
        "basis": [f"{n} (deg {d})" for n, d in T.basis],
        "unit": T.names[T.unit],
        "products": [f"{T.names[i]} * {T.names[j]} = {T.format_vector(v)}" for (i, j), v in sorted(T.products.items())],
    }


def _basis_report(result):
    if isinstance(result, MonoidBasis):
        els = result.elements
        return {
            "result": "MonoidBasis",
            "elements": [f"{e.name} (deg {e.degree}) = {result.table.format_vector(e.vector)}" for e in els],
            "products": [
                f"{els[i].name} * {els[j].name} = {result.describe_product(i, j)}"
                for i in range(len(els)) for j in range(len(els))
                if (i, j) in result.product
            ],
        }
    return {"result": type(result).__name__, "detail": str(result)}


# ---------------------------------------------------------------- subcommands


def cmd_homology(a):
    X = formats.to_dga(_load(a.file))
    H = homology(X)
    mods = H.modules()
    return {
        "ring": str(X.ring),
        "homology": {str(n): _module(v) for n, v in mods.items()},
        "text": [f"H_{n} = {_module_text(v, X.ring)}" for n, v in mods.items()],
        "euler_characteristic": euler_characteristic(mods),
    }


def cmd_homology_ring(a):
    X = formats.to_dga(_load(a.file))
    return _table_report(homology_ring(X))


def cmd_check_basis(a):
    doc = _load(a.file)
    T = formats.to_table(doc)
    cands = formats.candidates(doc, T) if doc.candidates else monomial_candidates(T)
    return {"candidates": [c.name for c in cands], **_basis_report(check_monoid_basis(T, cands))}


def cmd_search_basis(a):
    T = formats.to_table(_load(a.file))
    return _basis_report(search_monoid_basis(T, a.budget, a.entry_bound))


def cmd_wedge_model(a):
    T = formats.to_table(_load(a.file))
    found = search_monoid_basis(T, a.budget, a.entry_bound)
    if not isinstance(found, MonoidBasis):
        raise NotABasis(f"no monoid basis, so no wedge model: {found}")
    W = wedge_model(found)
    return {
        "summands": [f"Sigma^{d} H{T.ring} [{n}]" for n, d in W.summands],
        "unit": W.summands[W.unit][0],
        "multiplication": [
            f"{W.summands[i][0]} * {W.summands[j][0]} = {'0' if k is None else W.summands[k][0]}"
            for (i, j), k in sorted(W.multiplication.items())
        ],
        "associativity": "verified",
    }


def _hh_report(R):
    return {
        "ring": str(R.ring),
        "degree_cap": R.degree_cap,
        "length_cap": R.length_cap,
        "exactness": R.exactness,
        "hh": {str(n): _module(v) for n, v in sorted(R.values.items())},
        "text": [f"HH_{n} = {_module_text(v, R.ring)}" for n, v in sorted(R.values.items())],
    }


def _hh(X, a):
    if X.ring.kind == "Z":
        return hh_over_Z(X, a.cap, a.length_cap, a.threads)
    return hh_dga(X, a.cap, a.length_cap, a.threads)


def cmd_hh(a):
    doc = _load(a.file)
    if doc.kind == "dga":
        raise InputError("hh takes a graded algebra; use hh-dga for DGA documents")
    return _hh_report(_hh(formats.to_dga(doc), a))


def cmd_hh_dga(a):
    return _hh_report(_hh(formats.to_dga(_load(a.file)), a))


def _thh_table(source: str) -> THHTable:
    if Path(source).is_file():
        return load_thh_table(Path(source).read_text())
    return shipped_table(source)


def cmd_thh(a):
    doc = _load(a.file)
    T = _thh_table(a.table)
    X = formats.to_dga(doc)
    certificate, note = None, "assumed by the caller"
    if not a.assume_extension:
        if doc.kind == "dga" and any(X.differential.values()):
            raise InputError("a DGA with nonzero differential needs --assume-extension")
        found = search_monoid_basis(X.table, a.budget)
        if isinstance(found, MonoidBasis):
            certificate, note = found, "monoid basis " + ", ".join(found.names())
        else:
            note = str(found)
    R = thh_groups(X, T, a.cap, certificate=certificate, assume_extension=a.assume_extension, threads=a.threads)
    out = R.to_json()
    out["certificate"] = note
    out["table_provenance"] = T.provenance
    out["text"] = [line.strip() for line in R.lines()[1:]]
    return out


def _context(p, presentation, cap):
    if presentation == "hz":
        return hfp_homology_of_hz(p, cap)
    return dual_steenrod(p, presentation, cap)


def cmd_steenrod_table(a):
    ctx = _context(a.p, a.presentation, a.cap)
    return {
        "p": a.p,
        "presentation": a.presentation,
        "cap": a.cap,
        "generators": [f"{g.name} (deg {g.degree})" for g in ctx.algebra.generators],
        "actions": ctx.table_lines(),
    }


_GEN_NAME = re.compile(r"(xi|zeta|tau|taubar)(\d+)|xi1sq")


def _generator_degree(p: int, name: str) -> int:
    m = _GEN_NAME.fullmatch(name)
    if not m:
        raise InputError(f"unknown generator {name!r}")
    if not m.group(1):
        return 2
    kind, n = m.group(1), int(m.group(2))
    if p == 2:
        return 2**n - 1
    return 2 * (p**n - 1) if kind in ("xi", "zeta") else 2 * p**n - 1


def cmd_apply_dl(a):
    word = parse_word(a.op, a.p)
    expr = formats.parse_expr(a.elt)
    cap = a.cap
    if cap is None:
        need = max([sum(e * _generator_degree(a.p, name) for name, e in mono) for _, mono in expr] + [0])
        e = _context(a.p, a.presentation, need).element(expr)
        if not e.is_homogeneous:
            raise InputError("the element must be homogeneous")
        cap = max(need, (e.degree or 0) + max(word.shift(), 0))
    ctx = _context(a.p, a.presentation, cap)
    result = apply_dl(word, ctx.element(expr), ctx)
    return {"p": a.p, "presentation": a.presentation, "cap": cap, "op": str(word), "element": a.elt, "result": str(result)}


def _algebra_or_table(doc, cap):
    if doc.kind == "presentation":
        return formats.to_algebra(doc, max(cap, doc.cap))
    return formats.to_table(doc)


def cmd_obstruct_square(a):
    doc = _load(a.file)
    v = square_obstruction_p2(_algebra_or_table(doc, a.cap), a.cap, a.left)
    return {**v.to_json(), "replay": v.replay()}


def cmd_obstruct_bockstein(a):
    doc = _load(a.file)
    cap = a.cap if a.cap is not None else 2 * a.p - 2
    v = bockstein_q1_obstruction(a.p, _algebra_or_table(doc, cap), cap, a.left)
    return {**v.to_json(), "replay": v.replay()}


def cmd_forced_map(a):
    doc = _load(a.file)
    if doc.kind != "presentation":
        raise InputError(f"forced-map needs a presentation document, got {doc.kind}")
    H = formats.to_algebra(doc, max(a.cap, doc.cap))
    rels = formats.target_relations(doc)
    if not rels:
        raise InputError("forced-map needs at least one 'target' relation")
    return forced_unit_map(H, rels, a.p, a.cap).to_json()


def cmd_extension_status(a):
    X = formats.to_dga(_load(a.file))
    return extension_status(X, a.cap, a.budget, formal=a.formal, e_infty=a.e_infty).to_json()


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="extdga", description="Extension DGAs, Hochschild homology, THH and Dyer-Lashof obstructions.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, helptext, file=True):
        p = sub.add_parser(name, help=helptext)
        if file:
            p.add_argument("file", help="input document")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--threads", type=int, default=1, help="worker threads where supported")
        p.set_defaults(fn=fn)
        return p

    add("homology", cmd_homology, "homology groups of a DGA")
    add("homology-ring", cmd_homology_ring, "product table of the homology")
    add("check-basis", cmd_check_basis, "check the declared (or monomial) candidate basis")
    for name, fn, text in (
        ("search-basis", cmd_search_basis, "search for a monoid basis"),
        ("wedge-model", cmd_wedge_model, "wedge-of-suspensions model from a monoid basis"),
    ):
        p = add(name, fn, text)
        p.add_argument("--budget", type=int, default=100_000)
        p.add_argument("--entry-bound", type=int, default=1)
    for name, fn, text in (("hh", cmd_hh, "Hochschild homology of a graded algebra"),
                           ("hh-dga", cmd_hh_dga, "Hochschild homology of a DGA")):
        p = add(name, fn, text)
        p.add_argument("--cap", type=int, required=True, help="top total degree")
        p.add_argument("--length-cap", type=int, default=None)
    p = add("thh", cmd_thh, "THH groups via the Künneth formula")
    p.add_argument("--table", required=True, help="THH table file or shipped name (thh_Z, thh_F2, ...)")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--assume-extension", action="store_true")
    p.add_argument("--budget", type=int, default=100_000)
    p = add("steenrod-table", cmd_steenrod_table, "generator actions of the dual Steenrod algebra", file=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--presentation", choices=("xi", "zeta", "hz"), default="zeta")
    p.add_argument("--cap", type=int, default=8)
    p = add("apply-dl", cmd_apply_dl, "apply a Dyer-Lashof word to an element", file=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--op", required=True, help="word such as Q2, bQ1 or 'Q1 Q2'")
    p.add_argument("--elt", required=True, help="element expression, e.g. xi1 or tau0*xi1")
    p.add_argument("--presentation", choices=("xi", "zeta", "hz"), default="zeta")
    p.add_argument("--cap", type=int, default=None, help="default: element degree plus the word's shift")
    p = add("obstruct-square", cmd_obstruct_square, "p = 2 square obstruction for HZ -> HB")
    p.add_argument("--cap", type=int, default=2)
    p.add_argument("--left", choices=("hz", "steenrod"), default="hz")
    p = add("obstruct-bockstein", cmd_obstruct_bockstein, "odd-p Bockstein obstruction")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="default 2p - 2")
    p.add_argument("--left", choices=("hz", "steenrod"), default="hz")
    p = add("forced-map", cmd_forced_map, "candidate unit maps H -> A_* ⊗ H respecting target relations")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cap", type=int, required=True)
    p = add("extension-status", cmd_extension_status, "combine the basis criterion with the obstructions")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--formal", action="store_true", help="assert that the DGA is formal")
    p.add_argument("--e-infty", action="store_true", help="assert an E-infinity structure (odd p obstruction)")
    return top


def render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{key}:")
            lines += render_text(v, indent + 1)
        elif isinstance(v, list):
            lines.append(f"{pad}{key}:")
            for item in v:
                if isinstance(item, dict):
                    lines.append(f"{pad}  -")
                    lines += render_text(item, indent + 2)
                else:
                    lines.append(f"{pad}  {item}")
        else:
            lines.append(f"{pad}{key}: {'none' if v is None else v}")
    return lines


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if getattr(args, "threads", 1) < 1:
        print("extdga: error: --threads must be >= 1", file=err)
        return 1
    try:
        report = args.fn(args)
    except InputError as exc:
        print(f"extdga: input error: {exc}", file=err)
        return 1
    except MathError as exc:
        print(f"extdga: {type(exc).__name__}: {exc}", file=err)
        return 2
    if args.json:
        print(json.dumps(report, indent=2, ensure_ascii=False), file=out)
    else:
        print("\n".join(render_text(report)), file=out)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
