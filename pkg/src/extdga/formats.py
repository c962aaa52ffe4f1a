"""Line-oriented input documents: parsing, rendering and conversion to objects.

See docs/FORMAT.md for the grammar.  ``parse(render(doc)) == doc`` holds for
every document this module can produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError, ParseError
from .gring.abelian import FgAbelianGroup, parse_group
from .gring.algebra import AlgebraPresentation, GeneratorSpec, GradedAlgebra, Relation
from .gring.rings import CoefficientRing, parse_ring

KINDS = ("presentation", "dga", "ring-table", "thh-table", "basis-candidate")
PROVENANCE = ("external-literature", "user")

Expr = tuple  # ((coef, ((name, exp), ...)), ...)
Linear = tuple  # ((coef, name), ...)

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_GEN_RE = re.compile(rf"^gen\s+({_IDENT})\s+deg\s+(-?\d+)\s+kind\s+(poly|ext|trunc:(\d+))$")
_BASIS_RE = re.compile(r"^basis\s+deg\s+(-?\d+)\s*:\s*(.*)$")
_NAME_RE = re.compile(r"^[A-Za-z0-9_'^*.\[\]]+$")


@dataclass
class Document:
    kind: str
    ring: CoefficientRing
    cap: int | None = None
    sign: str = "koszul"
    generators: list[GeneratorSpec] = field(default_factory=list)
    relations: list[tuple[Expr, Expr]] = field(default_factory=list)
    targets: list[tuple[Expr, Expr]] = field(default_factory=list)
    basis: list[tuple[str, int]] = field(default_factory=list)
    differentials: dict[str, Linear] = field(default_factory=dict)
    products: dict[tuple[str, str], Linear] = field(default_factory=dict)
    unit: str | None = None
    dims: dict[int, int] = field(default_factory=dict)
    groups: dict[int, FgAbelianGroup] = field(default_factory=dict)
    provenance: str | None = None
    candidates: list[tuple[str, Linear]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------- expressions


def _split_terms(text: str, line: int, col: int) -> list[tuple[int, str, int]]:
    """Split on top-level + and -; returns (sign, term text, column)."""
    out, sign, start, i = [], 1, 0, 0
    s = text
    stripped = s.lstrip()
    offset = len(s) - len(stripped)
    if stripped.startswith("-"):
        sign, i = -1, offset + 1
        start = i
    elif stripped.startswith("+"):
        i = offset + 1
        start = i
    while i <= len(s):
        if i == len(s) or (s[i] in "+-" and i > start and s[i - 1] in " \t"):
            term = s[start:i].strip()
            if not term:
                raise ParseError("empty term", line, col + start)
            out.append((sign, term, col + start))
            if i < len(s):
                sign = 1 if s[i] == "+" else -1
            start = i + 1
        i += 1
    return out


def parse_expr(text: str, line: int = 1, col: int = 1) -> Expr:
    """Polynomial expression in generator names: ``c*x^2*y - z + 3``."""
    text = text.strip()
    if text == "0":
        return ()
    if not text:
        raise ParseError("missing expression", line, col)
    terms = []
    for sign, term, tcol in _split_terms(text, line, col):
        coef, word = 1, []
        for k, factor in enumerate(term.split("*")):
            factor = factor.strip()
            if re.fullmatch(r"\d+", factor):
                if k != 0:
                    raise ParseError(f"coefficient {factor} must lead the term", line, tcol)
                coef = int(factor)
                continue
            m = re.fullmatch(rf"({_IDENT})(?:\^(\d+))?", factor)
            if not m:
                raise ParseError(f"bad factor {factor!r}", line, tcol)
            word.append((m.group(1), int(m.group(2) or 1)))
        terms.append((sign * coef, tuple(word)))
    return tuple(terms)


def render_expr(expr: Expr) -> str:
    if not expr:
        return "0"
    parts = []
    for coef, word in expr:
        body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in word)
        mag = abs(coef)
        if not body:
            t = str(mag)
        elif mag == 1:
            t = body
        else:
            t = f"{mag}*{body}"
        parts.append(("-" if coef < 0 else "+", t))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        text += f" {s} {t}"
    return text


def parse_linear(text: str, names, line: int = 1, col: int = 1) -> Linear:
    """Linear combination of basis names: ``2*x^2 - y``; names may contain * and ^."""
    text = text.strip()
    if text == "0":
        return ()
    if not text:
        raise ParseError("missing expression", line, col)
    out = []
    for sign, term, tcol in _split_terms(text, line, col):
        coef, name = 1, term
        m = re.fullmatch(r"(\d+)\*(.+)", term)
        if m and term not in names:
            coef, name = int(m.group(1)), m.group(2)
        if name not in names:
            raise ParseError(f"unknown basis element {name!r}", line, tcol)
        out.append((sign * coef, name))
    return tuple(out)


def render_linear(lin: Linear) -> str:
    if not lin:
        return "0"
    parts = []
    for coef, name in lin:
        mag = abs(coef)
        t = name if mag == 1 else f"{mag}*{name}"
        parts.append(("-" if coef < 0 else "+", t))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        text += f" {s} {t}"
    return text


# ---------------------------------------------------------------- parse


def parse(text: str) -> Document:
    lines = text.splitlines()
    doc: dict = {}
    body: list[tuple[int, str]] = []
    for n, raw in enumerate(lines, 1):
        s = raw.split("#", 1)[0].strip() if not raw.strip().startswith("note ") else raw.strip()
        if s:
            body.append((n, s))
    if not body:
        raise ParseError("empty document", 1, 1)
    seen_single: dict[str, int] = {}

    def single(key, n):
        if key in seen_single:
            raise ParseError(f"duplicate '{key}' declaration (first on line {seen_single[key]})", n, 1)
        seen_single[key] = n

    kind = ring = cap = unit = prov = None
    sign = "koszul"
    gens: list[GeneratorSpec] = []
    rels, targets, basis, notes = [], [], [], []
    diffs: dict = {}
    prods: dict = {}
    dims: dict = {}
    groups: dict = {}
    cands = []
    used: list[tuple[int, str]] = []
    unit_line = 0

    for n, s in body:
        head = s.split(None, 1)[0]
        rest = s[len(head):].strip()
        try:
            if head == "kind":
                single("kind", n)
                if rest not in KINDS:
                    raise ParseError(f"unknown kind {rest!r}", n, 6)
                kind = rest
            elif head == "ring":
                single("ring", n)
                try:
                    ring = parse_ring(rest)
                except InputError as exc:
                    raise ParseError(str(exc), n, 6) from exc
            elif head == "cap":
                single("cap", n)
                if not re.fullmatch(r"\d+", rest):
                    raise ParseError("cap must be a nonnegative integer", n, 5)
                cap = int(rest)
            elif head == "sign":
                single("sign", n)
                if rest not in ("koszul", "ungraded"):
                    raise ParseError("sign must be koszul or ungraded", n, 6)
                sign = rest
            elif head == "gen":
                m = _GEN_RE.match(s)
                if not m:
                    raise ParseError("expected 'gen <name> deg <d> kind poly|ext|trunc:<h>'", n, 1)
                name = m.group(1)
                if any(g.name == name for g in gens):
                    raise ParseError(f"duplicate generator {name}", n, 5)
                k = m.group(3)
                kindname = "trunc" if k.startswith("trunc") else k
                height = int(m.group(4)) if m.group(4) else None
                try:
                    gens.append(GeneratorSpec(name, int(m.group(2)), kindname, height))
                except InputError as exc:
                    raise ParseError(str(exc), n, 1) from exc
            elif head in ("rel", "target"):
                if "=" not in rest:
                    raise ParseError(f"expected '{head} <monomial> = <expr>'", n, 1)
                lhs, rhs = rest.split("=", 1)
                c = len(head) + 2
                pair = (parse_expr(lhs, n, c), parse_expr(rhs, n, c + len(lhs) + 1))
                (rels if head == "rel" else targets).append(pair)
                used.extend((n, name) for side in pair for _, word in side for name, _ in word)
            elif head == "basis":
                m = _BASIS_RE.match(s)
                if not m:
                    raise ParseError("expected 'basis deg <d>: <names>'", n, 1)
                d = int(m.group(1))
                for name in m.group(2).split():
                    name = name.rstrip(",")
                    if not _NAME_RE.match(name):
                        raise ParseError(f"bad basis name {name!r}", n, 1)
                    if any(b == name for b, _ in basis):
                        raise ParseError(f"duplicate basis element {name}", n, 1)
                    basis.append((name, d))
            elif head == "d":
                names = {b for b, _ in basis}
                if "=" not in rest:
                    raise ParseError("expected 'd <name> = <expr>'", n, 1)
                lhs, rhs = (x.strip() for x in rest.split("=", 1))
                if lhs not in names:
                    raise ParseError(f"unknown basis element {lhs!r}", n, 3)
                if lhs in diffs:
                    raise ParseError(f"duplicate differential for {lhs}", n, 1)
                diffs[lhs] = parse_linear(rhs, names, n, s.index("=") + 2)
            elif head == "mul":
                names = {b for b, _ in basis}
                if "=" not in rest:
                    raise ParseError("expected 'mul <a>*<b> = <expr>'", n, 1)
                lhs, rhs = (x.strip() for x in rest.split("=", 1))
                if lhs.count(" * ") == 1:
                    splits = [tuple(x.strip() for x in lhs.split(" * "))]
                else:
                    splits = [(lhs[:i], lhs[i + 1:]) for i, ch in enumerate(lhs) if ch == "*"]
                splits = [(a, b) for a, b in splits if a in names and b in names]
                if len(splits) != 1:
                    raise ParseError(f"cannot read {lhs!r} as a product of two basis elements", n, 5)
                if splits[0] in prods:
                    raise ParseError(f"duplicate product {lhs}", n, 1)
                prods[splits[0]] = parse_linear(rhs, names, n, s.index("=") + 2)
            elif head == "unit":
                single("unit", n)
                unit, unit_line = rest, n
            elif head == "dim":
                m = re.fullmatch(r"(-?\d+)\s*=\s*(\d+)", rest)
                if not m:
                    raise ParseError("expected 'dim <d> = <n>'", n, 1)
                d = int(m.group(1))
                if d in dims or d in groups:
                    raise ParseError(f"duplicate degree {d}", n, 1)
                dims[d] = int(m.group(2))
            elif head == "group":
                m = re.fullmatch(r"(-?\d+)\s*=\s*(.+)", rest)
                if not m:
                    raise ParseError("expected 'group <d> = <group>'", n, 1)
                d = int(m.group(1))
                if d in dims or d in groups:
                    raise ParseError(f"duplicate degree {d}", n, 1)
                try:
                    groups[d] = parse_group(m.group(2))
                except InputError as exc:
                    raise ParseError(str(exc), n, 7) from exc
            elif head == "provenance":
                single("provenance", n)
                if rest not in PROVENANCE:
                    raise ParseError("provenance must be external-literature or user", n, 12)
                prov = rest
            elif head == "candidate":
                names = {b for b, _ in basis}
                if "=" not in rest:
                    raise ParseError("expected 'candidate <name> = <expr>'", n, 1)
                lhs, rhs = (x.strip() for x in rest.split("=", 1))
                if any(c == lhs for c, _ in cands):
                    raise ParseError(f"duplicate candidate {lhs}", n, 11)
                cands.append((lhs, parse_linear(rhs, names, n, s.index("=") + 2)))
            elif head == "note":
                notes.append(rest)
            else:
                raise ParseError(f"unknown directive {head!r}", n, 1)
        except ParseError:
            raise
        except InputError as exc:
            raise ParseError(str(exc), n, 1) from exc

    first = body[0][0]
    if kind is None:
        raise ParseError("missing 'kind' declaration", first, 1)
    if ring is None:
        raise ParseError("missing 'ring' declaration", first, 1)
    if kind == "presentation" and cap is None:
        raise ParseError("presentations must declare a cap", first, 1)
    if kind == "thh-table":
        if prov is None:
            raise ParseError("THH tables must declare provenance", first, 1)
        if cap is None:
            raise ParseError("THH tables must declare the cap they are listed through", first, 1)
    if kind in ("dga", "ring-table", "basis-candidate") and not basis:
        raise ParseError(f"{kind} documents need basis lines", first, 1)
    declared = {g.name for g in gens}
    for n, name in used:
        if name not in declared:
            raise ParseError(f"undeclared generator {name!r}", n, 1)
    if unit is not None and unit not in {b for b, _ in basis}:
        raise ParseError(f"unit {unit!r} is not a basis element", unit_line, 6)
    return Document(kind, ring, cap, sign, gens, rels, targets, basis, diffs, prods, unit, dims, groups, prov, cands, notes)


# ---------------------------------------------------------------- render


def render(doc: Document) -> str:
    out = [f"kind {doc.kind}", f"ring {doc.ring.name}"]
    if doc.cap is not None:
        out.append(f"cap {doc.cap}")
    if doc.sign != "koszul":
        out.append(f"sign {doc.sign}")
    if doc.provenance:
        out.append(f"provenance {doc.provenance}")
    out += [f"note {t}" for t in doc.notes]
    for g in doc.generators:
        out.append(f"gen {g.name} deg {g.degree} kind {g.kind_text()}")
    for lhs, rhs in doc.relations:
        out.append(f"rel {render_expr(lhs)} = {render_expr(rhs)}")
    for lhs, rhs in doc.targets:
        out.append(f"target {render_expr(lhs)} = {render_expr(rhs)}")
    degs: dict[int, list[str]] = {}
    for name, d in doc.basis:
        degs.setdefault(d, []).append(name)
    # keep declaration order: basis lines are emitted in first-appearance order of degrees
    order = []
    for _, d in doc.basis:
        if d not in order:
            order.append(d)
    names_in_order = [name for d in order for name in degs[d]]
    if names_in_order != [name for name, _ in doc.basis]:
        for name, d in doc.basis:
            out.append(f"basis deg {d}: {name}")
    else:
        for d in order:
            out.append(f"basis deg {d}: " + " ".join(degs[d]))
    if doc.unit is not None:
        out.append(f"unit {doc.unit}")
    for name, lin in doc.differentials.items():
        out.append(f"d {name} = {render_linear(lin)}")
    names = {n for n, _ in doc.basis}
    for (a, b), lin in doc.products.items():
        glued = f"{a}*{b}"
        ambiguous = sum(glued[:i] in names and glued[i + 1:] in names for i, ch in enumerate(glued) if ch == "*") > 1
        out.append(f"mul {a} * {b} = {render_linear(lin)}" if ambiguous else f"mul {glued} = {render_linear(lin)}")
    for name, lin in doc.candidates:
        out.append(f"candidate {name} = {render_linear(lin)}")
    for d in sorted(set(doc.dims) | set(doc.groups)):
        if d in doc.dims:
            out.append(f"dim {d} = {doc.dims[d]}")
        else:
            out.append(f"group {d} = {doc.groups[d]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- conversion


def _rel(pair) -> Relation:
    return Relation(tuple(pair[0]), tuple(pair[1]))


def to_presentation(doc: Document) -> AlgebraPresentation:
    return AlgebraPresentation(doc.ring, tuple(doc.generators), tuple(_rel(r) for r in doc.relations), doc.sign)


def to_algebra(doc: Document, cap: int | None = None) -> GradedAlgebra:
    if doc.kind != "presentation":
        raise InputError(f"expected a presentation document, got {doc.kind}")
    c = doc.cap if cap is None else cap
    return GradedAlgebra.from_presentation(to_presentation(doc), c)


def target_relations(doc: Document) -> list[Relation]:
    return [_rel(r) for r in doc.targets]


def _vector(lin: Linear, index) -> dict[int, int]:
    v: dict[int, int] = {}
    for c, name in lin:
        v[index[name]] = v.get(index[name], 0) + c
    return v


def _unit_index(doc: Document, index) -> int:
    name = doc.unit if doc.unit is not None else "1"
    if name not in index:
        raise InputError(f"unit {name!r} is not a basis element (declare 'unit <name>')")
    return index[name]


def to_table(doc: Document):
    """A ring-table / basis-candidate document, or a presentation, as a GradedRingTable."""
    from .dga import GradedRingTable

    if doc.kind == "presentation":
        return GradedRingTable.from_algebra(to_algebra(doc))
    if doc.kind not in ("ring-table", "basis-candidate", "dga"):
        raise InputError(f"cannot read a {doc.kind} document as a ring table")
    index = {n: i for i, (n, _) in enumerate(doc.basis)}
    products = {(index[a], index[b]): _vector(lin, index) for (a, b), lin in doc.products.items()}
    _add_unit_products(doc, index, products)
    return GradedRingTable(doc.ring, doc.basis, products, _unit_index(doc, index), doc.cap)


def _add_unit_products(doc, index, products):
    u = _unit_index(doc, index)
    for i in range(len(doc.basis)):
        products.setdefault((u, i), {i: 1})
        products.setdefault((i, u), {i: 1})


def to_dga(doc: Document):
    from .dga import DGA, formal_dga

    if doc.kind in ("presentation", "ring-table", "basis-candidate"):
        return formal_dga(to_table(doc))
    if doc.kind != "dga":
        raise InputError(f"expected a DGA document, got {doc.kind}")
    index = {n: i for i, (n, _) in enumerate(doc.basis)}
    products = {(index[a], index[b]): _vector(lin, index) for (a, b), lin in doc.products.items()}
    _add_unit_products(doc, index, products)
    diff = {index[n]: _vector(lin, index) for n, lin in doc.differentials.items()}
    return DGA(doc.ring, doc.basis, diff, products, _unit_index(doc, index), doc.cap)


def candidates(doc: Document, table):
    """BasisElement candidates declared in the document (names resolved in ``table``)."""
    from .basis import basis_element

    out = []
    for name, lin in doc.candidates:
        vec = {}
        for c, n in lin:
            vec[table.index[n]] = vec.get(table.index[n], 0) + c
        out.append(basis_element(table, name, vec))
    return out


def table_document(table, kind: str = "ring-table") -> Document:
    """Render-ready document for a GradedRingTable (products listed exhaustively, unit rows implied)."""
    doc = Document(kind, table.ring, table.cap)
    doc.basis = list(table.basis)
    doc.unit = table.names[table.unit]
    for (i, j), v in sorted(table.products.items()):
        if table.unit in (i, j):
            continue
        doc.products[(table.names[i], table.names[j])] = tuple((c, table.names[k]) for k, c in sorted(v.items()))
    return doc
