"""Homogeneous bases closed under multiplication up to zero.

A *monoid basis* of a graded ring is a homogeneous basis containing the
unit in which every product of two basis elements is either zero or a
basis element.  :func:`check_monoid_basis` certifies a candidate,
:func:`search_monoid_basis` looks for one, and :func:`wedge_model` turns a
certificate into the summand-indexed multiplication of the corresponding
wedge of shifted Eilenberg-Mac Lane spectra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .dga import GradedRingTable, Vector
from .errors import AssociativityFailure, NotABasis
from .gring.linalg import det_int, rank_mod_p


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    coords: tuple[tuple[int, int], ...]  # sorted (table index, coefficient) pairs

    @property
    def vector(self) -> Vector:
        return dict(self.coords)


def basis_element(table: GradedRingTable, name: str, vector: Vector) -> BasisElement:
    vector = {k: table.ring.reduce(c) for k, c in vector.items() if table.ring.reduce(c)}
    degs = {table.degree(k) for k in vector}
    if len(degs) != 1:
        raise NotABasis(f"candidate {name} is zero or not homogeneous")
    return BasisElement(name, degs.pop(), tuple(sorted(vector.items())))


@dataclass
class MonoidBasis:
    table: GradedRingTable
    elements: list[BasisElement]
    unit_index: int
    product: dict[tuple[int, int], int | None]

    def names(self) -> list[str]:
        return [e.name for e in self.elements]

    def describe_product(self, i: int, j: int) -> str:
        k = self.product[(i, j)]
        return "0" if k is None else self.elements[k].name


@dataclass
class Violation:
    pair: tuple[int, int] | None
    names: tuple[str, str] | None
    product: str
    reason: str

    def __str__(self):
        if self.pair is None:
            return f"Violation: {self.reason}"
        return f"Violation at ({self.names[0]},{self.names[1]}): product {self.product} {self.reason}"


@dataclass
class ProvenNone:
    candidates_examined: int
    note: str

    def __str__(self):
        return f"ProvenNone after exhausting {self.candidates_examined} candidate bases ({self.note})"


@dataclass
class BudgetExhausted:
    candidates_examined: int
    note: str

    def __str__(self):
        return f"BudgetExhausted after {self.candidates_examined} candidate bases ({self.note})"


# ---------------------------------------------------------------- change of basis


def _adjugate_inverse(m: list[list[int]], ring) -> list[list[int]]:
    n = len(m)
    det = det_int(m)
    if not ring.is_unit(det):
        raise NotABasis(f"change of basis has determinant {det}, not a unit in {ring}")
    inv_det = ring.inverse(det)
    if n == 1:
        return [[ring.reduce(inv_det)]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
            out[j][i] = ring.reduce((-1) ** (i + j) * det_int(minor) * inv_det)
    return out


def _field_inverse(m: list[list[int]], p: int) -> list[list[int]]:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    from .gring.linalg import rref

    red, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise NotABasis("change of basis is singular")
    return [row[n:] for row in red]


class _Degreewise:
    """Coordinates of table vectors with respect to a candidate basis, degree by degree."""

    def __init__(self, table: GradedRingTable, elements: list[BasisElement]):
        self.table = table
        self.ring = table.ring
        self.by_degree: dict[int, list[int]] = {}
        for k, e in enumerate(elements):
            self.by_degree.setdefault(e.degree, []).append(k)
        self.inverse: dict[int, list[list[int]]] = {}
        self.table_pos: dict[int, dict[int, int]] = {}
        for d in table.degrees():
            idx = table.in_degree(d)
            ks = self.by_degree.get(d, [])
            if len(ks) != len(idx):
                raise NotABasis(f"degree {d} needs {len(idx)} basis elements, got {len(ks)}")
            pos = {t: r for r, t in enumerate(idx)}
            self.table_pos[d] = pos
            mat = [[0] * len(ks) for _ in idx]
            for c, k in enumerate(ks):
                for t, v in elements[k].coords:
                    mat[pos[t]][c] = v
            if self.ring.is_field:
                self.inverse[d] = _field_inverse(mat, self.ring.modulus)
            else:
                self.inverse[d] = _adjugate_inverse(mat, self.ring)
        extra = set(self.by_degree) - set(table.degrees())
        if extra:
            raise NotABasis(f"candidate elements in degrees {sorted(extra)} where the ring is zero")

    def coordinates(self, v: Vector) -> dict[int, int]:
        """Express a homogeneous table vector in candidate coordinates {element index: coef}."""
        if not v:
            return {}
        d = self.table.degree(next(iter(v)))
        pos, inv, ks = self.table_pos[d], self.inverse[d], self.by_degree[d]
        col = [0] * len(ks)
        for t, c in v.items():
            col[pos[t]] = c
        out = {}
        for r, k in enumerate(ks):
            val = self.ring.reduce(sum(inv[r][s] * col[s] for s in range(len(ks))))
            if val:
                out[k] = val
        return out


def check_monoid_basis(table: GradedRingTable, candidates) -> MonoidBasis | Violation:
    """Certify that ``candidates`` (BasisElement list) is a monoid basis of ``table``.

    Raises :class:`NotABasis` when the candidates do not form a basis.
    """
    elements = [c if isinstance(c, BasisElement) else basis_element(table, *c) for c in candidates]
    if not elements:
        raise NotABasis("empty candidate basis (the zero ring has no unit basis element)")
    coords = _Degreewise(table, elements)
    unit_vec = ((table.unit, 1),)
    unit_index = next((k for k, e in enumerate(elements) if e.coords == unit_vec), None)
    if unit_index is None:
        return Violation(None, None, "", "the unit is not one of the basis elements")
    product: dict[tuple[int, int], int | None] = {}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            prod = table.mul(a.vector, b.vector)
            c = coords.coordinates(prod)
            if not c:
                product[(i, j)] = None
                continue
            if len(c) == 1:
                (k, v), = c.items()
                if v == 1:
                    product[(i, j)] = k
                    continue
            return Violation((i, j), (a.name, b.name), _format_combo(table.ring, c, elements), "is neither zero nor a basis element")
    return MonoidBasis(table, elements, unit_index, product)


def _format_combo(ring, combo: dict[int, int], elements) -> str:
    parts = []
    for k in sorted(combo):
        c = ring.format(combo[k])
        name = elements[k].name
        parts.append(name if c == "1" else ("-" + name if c == "-1" else f"{c}*{name}"))
    text = parts[0]
    for t in parts[1:]:
        text += " - " + t[1:] if t.startswith("-") else " + " + t
    return text


def monomial_candidates(table: GradedRingTable) -> list[BasisElement]:
    return [BasisElement(n, d, ((i, 1),)) for i, (n, d) in enumerate(table.basis)]


# ---------------------------------------------------------------- search


def _vectors(ring, n: int, entry_bound: int):
    if ring.modulus:
        values = range(ring.modulus)
    else:
        values = range(-entry_bound, entry_bound + 1)
    for v in itertools.product(values, repeat=n):
        if any(v):
            yield v


def _independent(ring, vecs: list[tuple[int, ...]], n: int) -> bool:
    if ring.is_field:
        return rank_mod_p([list(v) for v in vecs], ring.modulus) == len(vecs)
    if len(vecs) != n:
        return False
    return ring.is_unit(det_int([list(v) for v in vecs]))


def _degree_candidates(table, d: int, entry_bound: int):
    """Yield candidate bases of degree d as lists of table vectors; flag exhaustiveness."""
    ring = table.ring
    idx = table.in_degree(d)
    n = len(idx)
    unit_pos = idx.index(table.unit) if table.unit in idx else None
    finite = bool(ring.modulus)
    exhaustive = finite or n <= 1

    def to_vec(v):
        return {idx[r]: c for r, c in enumerate(v) if c}

    if not finite and n == 1:
        if unit_pos is not None:
            sets = [[{table.unit: 1}]]
        else:
            sets = [[to_vec((1,))], [to_vec((-1,))]]
        return sets, exhaustive

    vectors = list(_vectors(ring, n, entry_bound))

    def gen():
        if unit_pos is not None:
            u = tuple(int(r == unit_pos) for r in range(n))
            rest = [v for v in vectors if v != u]
            for combo in itertools.combinations(rest, n - 1):
                if _independent(ring, [u, *combo], n):
                    yield [to_vec(u)] + [to_vec(v) for v in combo]
        else:
            for combo in itertools.combinations(vectors, n):
                if _independent(ring, list(combo), n):
                    yield [to_vec(v) for v in combo]

    return gen(), exhaustive


def search_monoid_basis(table: GradedRingTable, budget: int = 100_000, entry_bound: int = 1):
    """Search for a monoid basis; returns MonoidBasis, ProvenNone or BudgetExhausted.

    Over finite coefficient rings and over Z with rank <= 1 pieces the
    search space is finite and a negative answer is a proof.  Over Z with
    a piece of rank >= 2 only change-of-basis matrices with entries in
    [-entry_bound, entry_bound] are tried and the answer is BudgetExhausted.
    """
    direct = check_monoid_basis(table, monomial_candidates(table))
    if isinstance(direct, MonoidBasis):
        return direct

    lemma = _odd_pairing_obstruction(table)
    if lemma is not None:
        return lemma

    degrees = table.degrees()
    per_degree, exhaustive = [], True
    for d in degrees:
        cands, ex = _degree_candidates(table, d, entry_bound)
        per_degree.append(cands)
        exhaustive &= ex
    materialized = [list(itertools.islice(c, budget + 1)) for c in per_degree]
    if any(len(c) > budget for c in materialized):
        return BudgetExhausted(budget, "a single degree has more candidate bases than the budget")
    space = 1
    for c in materialized:
        space *= len(c)
    examined = 0
    chosen: dict[int, list[Vector]] = {}
    inverses: dict[int, _Degreewise] = {}

    def closed(d: int) -> bool:
        # all products of chosen elements landing in degree d
        elems_d = chosen[d]
        names = [BasisElement(f"b{k}", d, tuple(sorted(v.items()))) for k, v in enumerate(elems_d)]
        sub = _SubTable(table, d)
        try:
            dw = _Degreewise(sub, names)
        except NotABasis:
            return False
        inverses[d] = dw
        for a in chosen:
            b = d - a
            if b not in chosen:
                continue
            for u in chosen[a]:
                for v in chosen[b]:
                    c = dw.coordinates(table.mul(u, v))
                    if c and not (len(c) == 1 and next(iter(c.values())) == 1):
                        return False
        return True

    result = None

    def rec(pos: int) -> bool:
        nonlocal examined, result
        if pos == len(degrees):
            elems = []
            for d in degrees:
                for k, v in enumerate(chosen[d]):
                    elems.append(BasisElement(_candidate_name(table, v), d, tuple(sorted(v.items()))))
            verdict = check_monoid_basis(table, elems)
            if isinstance(verdict, MonoidBasis):
                result = verdict
                return True
            return False
        d = degrees[pos]
        for cand in materialized[pos]:
            examined += 1
            if examined > budget:
                raise _Budget
            chosen[d] = cand
            if closed(d) and rec(pos + 1):
                return True
            del chosen[d]
        return False

    try:
        found = rec(0)
    except _Budget:
        return BudgetExhausted(budget, "search budget reached before exhausting candidates")
    if found:
        return result
    if exhaustive:
        return ProvenNone(space, f"every homogeneous basis over {table.ring} containing the unit was checked")
    return BudgetExhausted(
        examined,
        f"rank >= 2 pieces over {table.ring}; only entries in [-{entry_bound},{entry_bound}] were tried",
    )


def _odd_pairing_obstruction(table: GradedRingTable):
    """Rule out every basis over Z when two odd-degree elements have a nonzero product.

    If uv = -vu for odd u, v then u^2 = 0 (no 2-torsion), and a nonzero product
    of two distinct basis elements would need both uv and -uv in the basis.
    The sign patterns of the monomial basis are checked explicitly as well.
    """
    if table.ring.kind != "Z":
        return None
    odd = [i for i in range(len(table)) if table.degree(i) % 2]
    witness = None
    for i in odd:
        for j in odd:
            uv = table.products.get((i, j), {})
            vu = table.products.get((j, i), {})
            if set(uv) != set(vu) or any(uv[k] != -vu[k] for k in uv):
                return None
            if uv and witness is None:
                witness = (i, j)
    if witness is None:
        return None
    patterns = 0
    # the lemma alone is a proof; the explicit sign check is a cheap cross-check on small tables
    for signs in itertools.product((1, -1), repeat=len(table) - 1 if len(table) <= 13 else 0):
        it = iter(signs)
        cands = [
            BasisElement(n, d, ((k, 1 if k == table.unit else next(it)),)) for k, (n, d) in enumerate(table.basis)
        ]
        patterns += 1
        if isinstance(check_monoid_basis(table, cands), MonoidBasis):
            return None
    i, j = witness
    if len(table) > 13:
        return ProvenNone(0, f"{table.names[i]}*{table.names[j]} != 0 with odd anticommuting factors rules out every basis")
    return ProvenNone(
        patterns,
        f"all {patterns} sign patterns of the monomial basis fail; {table.names[i]}*{table.names[j]} != 0 "
        "with odd anticommuting factors rules out every other basis as well",
    )


class _Budget(Exception):
    pass


class _SubTable:
    """Just enough of a table to invert one degree's change of basis."""

    def __init__(self, table: GradedRingTable, d: int):
        self.ring = table.ring
        self._table = table
        self._d = d

    def degrees(self):
        return [self._d]

    def in_degree(self, d):
        return self._table.in_degree(d)

    def degree(self, k):
        return self._table.degree(k)


def _candidate_name(table: GradedRingTable, v: Vector) -> str:
    if len(v) == 1:
        (k, c), = v.items()
        if c == 1:
            return table.names[k]
    return "[" + table.format_vector(v) + "]"


# ---------------------------------------------------------------- wedge model


@dataclass
class WedgeModel:
    """Summands Sigma^{|m|} HR indexed by the monoid basis, with the induced multiplication."""

    summands: list[tuple[str, int]]
    multiplication: dict[tuple[int, int], int | None]
    unit: int
    ring: object = field(default=None, repr=False)

    def verify(self):
        n = len(self.summands)
        for (i, j), k in self.multiplication.items():
            if k is not None and self.summands[k][1] != self.summands[i][1] + self.summands[j][1]:
                raise AssociativityFailure(f"degrees do not add for {self.summands[i][0]}*{self.summands[j][0]}")
        for i in range(n):
            if self.multiplication[(self.unit, i)] != i or self.multiplication[(i, self.unit)] != i:
                raise AssociativityFailure(f"unit does not act as identity on {self.summands[i][0]}")

        def m(a, b):
            if a is None or b is None:
                return None
            return self.multiplication[(a, b)]

        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if m(m(i, j), k) != m(i, m(j, k)):
                        names = ", ".join(self.summands[x][0] for x in (i, j, k))
                        raise AssociativityFailure(f"multiplication is not associative on ({names})")

    def to_table(self) -> GradedRingTable:
        products = {(i, j): {k: 1} for (i, j), k in self.multiplication.items() if k is not None}
        return GradedRingTable(self.ring, self.summands, products, self.unit)


def wedge_model(mb: MonoidBasis) -> WedgeModel:
    model = WedgeModel(
        [(e.name, e.degree) for e in mb.elements],
        dict(mb.product),
        mb.unit_index,
        mb.table.ring,
    )
    if any(e.degree < 0 for e in mb.elements):
        raise AssociativityFailure("wedge model needs a nonnegatively graded (connective) basis")
    model.verify()
    return model
