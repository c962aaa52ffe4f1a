"""Finite-search certificates for non-extension and forced unit maps.

Spectrum-level inputs (injectivity of the comparison map, and that it fixes
a ⊗ 1 for every a) are assumptions of the setup; what is checked here is the
resulting finite algebra problem.  Every verdict carries the full list of
candidates with their individual refutations and can be replayed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .basis import MonoidBasis, search_monoid_basis
from .dga import DGA, GradedRingTable, homology_ring
from .errors import CapTooSmall, DegreeOverflow, ExtDGAError, InputError, NotSupported
from .gring.algebra import Element, GradedAlgebra, Relation, tensor
from .gring.rings import Fp
from .steenrod import TableTensor, apply_dl_tensor, dual_steenrod, hfp_homology_of_hz

UNSOLVABLE = "Unsolvable"
SOLVABLE = "SolvableWitness"
INCOMPLETE = "Incomplete"


@dataclass
class CandidateCheck:
    candidate: str
    value: str
    refuted: bool


@dataclass
class Verdict:
    status: str
    question: str
    search_space: str
    count: int
    witness: str | None = None
    checks: list[CandidateCheck] = field(default_factory=list)
    symbolic: list[str] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    _evaluate: object = field(default=None, repr=False)

    def replay(self) -> bool:
        """Re-evaluate every recorded candidate and compare with the certificate."""
        if self._evaluate is None:
            return True
        fresh = self._evaluate()
        return [(c.candidate, c.value, c.refuted) for c in fresh] == [
            (c.candidate, c.value, c.refuted) for c in self.checks
        ]

    def lines(self) -> list[str]:
        out = [f"question: {self.question}", f"status: {self.status}", f"search space: {self.search_space}",
               f"candidates: {self.count}"]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        for c in self.checks:
            out.append(f"candidate {c.candidate} -> {c.value} [{'refuted' if c.refuted else 'solves'}]")
        for s in self.symbolic:
            out.append(f"symbolic: {s}")
        for a in self.assumptions:
            out.append(f"assumption: {a}")
        return out

    def to_json(self):
        return {
            "question": self.question,
            "status": self.status,
            "search_space": self.search_space,
            "candidates": self.count,
            "witness": self.witness,
            "checks": [{"candidate": c.candidate, "value": c.value, "refuted": c.refuted} for c in self.checks],
            "symbolic": list(self.symbolic),
            "assumptions": list(self.assumptions),
        }


def _as_table(B, cap: int) -> GradedRingTable:
    if isinstance(B, GradedAlgebra):
        return GradedRingTable.from_algebra(B if B.cap >= cap else B.with_cap(cap))
    if isinstance(B, GradedRingTable):
        return B
    raise InputError(f"expected a graded algebra or ring table, got {type(B).__name__}")


def _left_context(p: int, left: str, cap: int):
    if left == "hz":
        return hfp_homology_of_hz(p, cap)
    if left == "steenrod":
        return dual_steenrod(p, "xi", cap)
    raise InputError(f"unknown left factor {left!r} (hz or steenrod)")


def _combos(p: int, n: int):
    return itertools.product(range(p), repeat=n)


_INJECTIVITY = "the comparison map on HF_p-homology is injective and fixes a ⊗ 1 (spectrum-level input, not re-derived)"


# ---------------------------------------------------------------- p = 2 squares


def square_obstruction_p2(B, cap: int, left: str = "hz", limit: int = 1 << 16) -> Verdict:
    """Is there z of degree 1 in L ⊗ B with z² = xi1² ⊗ 1?  L is HF_2_*HZ (or A_* as a control)."""
    if cap < 2:
        raise CapTooSmall("the square obstruction needs cap >= 2")
    Bt = _as_table(B, cap)
    if Bt.ring != Fp(2):
        raise InputError(f"square obstruction works over F2, got {Bt.ring}")
    if Bt.cap is not None and Bt.cap < 2:
        raise CapTooSmall("B must be known through degree 2")
    ctx = _left_context(2, left, cap)
    L = ctx.algebra
    T = TableTensor(L, Bt, cap)
    target_a = next(iter((L.gen("xi1sq") if left == "hz" else L.gen("xi1") ** 2).terms))
    target = {(target_a, Bt.unit): 1}
    basis1 = T.basis(1)
    n = len(basis1)
    question = f"z in {'HF2_*HZ' if left == 'hz' else 'A_*'} ⊗ B of degree 1 with z^2 = xi1^2 ⊗ 1"
    space = f"degree 1 of the tensor, F2-dimension {n}: " + (
        ", ".join(T.format_key(k) for k in basis1) or "empty")
    if 2**n > limit:
        return Verdict(INCOMPLETE, question, space, 2**n,
                       symbolic=[f"search space 2^{n} exceeds limit {limit}"])

    def evaluate():
        checks = []
        for coeffs in _combos(2, n):
            z = {basis1[i]: 1 for i, c in enumerate(coeffs) if c}
            sq = T.mul(z, z)
            checks.append(CandidateCheck(T.format(z), T.format(sq), sq != target))
        return checks

    checks = evaluate()
    witness = next((c.candidate for c in checks if not c.refuted), None)
    symbolic = []
    if left == "hz":
        symbolic = _square_symbolic(ctx, T)
    status = SOLVABLE if witness is not None else UNSOLVABLE
    return Verdict(status, question, space, 2**n, witness, checks, symbolic, [_INJECTIVITY], evaluate)


def _square_symbolic(ctx, T: TableTensor) -> list[str]:
    """B-independent argument, recomputed from the HZ side only."""
    L = ctx.algebra
    d1 = L.dimension(1)
    d0 = L.dimension(0)
    xdeg = L.mono_degree(next(iter(L.gen("xi1sq").terms)))
    lines = [
        "formalization of the prose argument, valid for every B:",
        f"dim HF2_*HZ in degree 0 = {d0} (the unit), in degree 1 = {d1}",
    ]
    if d1 != 0 or d0 != 1:
        lines.append("hypothesis fails: symbolic certificate not available")
        return lines
    lines += [
        "hence every degree-1 z is 1 ⊗ y with y in B_1",
        "(1 ⊗ y)^2 = 1 ⊗ y^2 lies in HF2_*HZ_0 ⊗ B_2",
        f"xi1^2 ⊗ 1 lies in HF2_*HZ_{xdeg} ⊗ B_0 with {xdeg} != 0, so z^2 != xi1^2 ⊗ 1",
    ]
    return lines


# ---------------------------------------------------------------- odd p Bockstein


def bockstein_q1_obstruction(p: int, B, cap: int, left: str = "hz", b_action=None) -> Verdict:
    """Is there z of degree 1 in L ⊗ B whose βQ^1 contains xi1 ⊗ 1?  L is HF_p_*HZ or A_*."""
    if p == 2 or not Fp(p).is_field:
        raise InputError("bockstein obstruction is for odd primes")
    if cap < 2 * p - 2:
        raise CapTooSmall(f"cap must be >= 2p - 2 = {2 * p - 2}")
    Bt = _as_table(B, cap)
    if Bt.ring != Fp(p):
        raise InputError(f"B must be over F{p}, got {Bt.ring}")
    ctx = _left_context(p, left, cap)
    L = ctx.algebra
    T = TableTensor(L, Bt, cap)
    if "xi1" not in L.index:
        raise CapTooSmall("xi1 not instantiated")
    xi1 = next(iter(L.gen("xi1").terms))
    basis1 = T.basis(1)
    n = len(basis1)
    question = f"z in {'HF_p_*HZ' if left == 'hz' else 'A_*'} ⊗ B of degree 1 with xi1 ⊗ 1 a summand of bQ1 z"
    space = f"degree 1 of the tensor, F{p}-dimension {n} ({p}^{n} elements, checked on a basis by linearity): " + (
        ", ".join(T.format_key(k) for k in basis1) or "empty")

    def evaluate():
        checks = []
        for k in basis1:
            r = apply_dl_tensor(1, 1, {k: 1}, ctx, B=Bt, b_action=b_action)
            hit = r.coefficient(xi1, Bt.unit)
            checks.append(CandidateCheck(T.format_key(k), str(r), hit == 0))
        return checks

    checks = evaluate()
    ambiguous = []
    for k in basis1:
        r = apply_dl_tensor(1, 1, {k: 1}, ctx, B=Bt, b_action=b_action)
        for (a, b), _ in r.opaque_terms().items():
            if r.a_degree(a) == L.mono_degree(xi1) and r.b_degree(b) == 0:
                ambiguous.append(T.format_key(k))
    witness = None
    for k, c in zip(basis1, checks):
        if not c.refuted:
            witness = c.candidate
            break
    symbolic = _bockstein_symbolic(ctx, p, cap) if left == "hz" else []
    if witness is not None:
        status = SOLVABLE
    elif ambiguous:
        status = INCOMPLETE
        symbolic.append("unevaluated terms could hit xi1 ⊗ 1 for: " + ", ".join(ambiguous))
    else:
        status = UNSOLVABLE
    return Verdict(status, question, space, p**n, witness, checks, symbolic, [_INJECTIVITY], evaluate)


def _symbolic_table(p: int, d: int) -> GradedRingTable:
    products = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return GradedRingTable(Fp(p), [("1", 0), ("y", d)], products, 0)


def _bockstein_symbolic(ctx, p: int, cap: int) -> list[str]:
    """Degree bookkeeping with a symbolic y carrying no known operations."""
    L = ctx.algebra
    xdeg = 2 * p - 2
    lines = [
        "formalization of the degree argument, y symbolic with unknown operations:",
        f"dim HF_p_*HZ in degree 1 = {L.dimension(1)}",
    ]
    r = apply_dl_tensor(1, 1, {(L.unit_monomial, 1): 1}, ctx, B=_symbolic_table(p, 1))
    lines.append(f"bQ1(1 ⊗ y) = {r}; A-degrees {sorted({r.a_degree(a) for (a, _) in r.terms})} avoid {xdeg}")
    worst = []
    for a in L.all_basis():
        ad = L.mono_degree(a)
        if ad == 0:
            continue
        for d in range(0, max(0, min(cap - ad, 2 * p)) + 1):
            try:
                r = apply_dl_tensor(1, 1, {(a, 1): 1}, ctx, B=_symbolic_table(p, d))
            except DegreeOverflow:
                continue
            for (aa, _), _c in r.terms.items():
                if r.a_degree(aa) <= ad:
                    worst.append(f"{L.format_monomial(a)} ⊗ y(deg {d})")
    if worst:
        lines.append("A-degree bookkeeping fails for: " + ", ".join(worst))
    else:
        lines.append(
            f"for every a of positive degree through cap {cap} and symbolic y, every term of bQ1(a ⊗ y) "
            f"has A-degree > |a| >= {xdeg} or vanishes"
        )
    return lines


# ---------------------------------------------------------------- forced unit maps


@dataclass
class UnitMapCandidate:
    assignment: tuple[tuple[str, Element], ...]

    def __str__(self):
        return "; ".join(f"{g} -> {e}" for g, e in self.assignment)


@dataclass
class ForcedMapResult:
    p: int
    cap: int
    generators: list[str]
    candidates: list[UnitMapCandidate]
    survivors: list[UnitMapCandidate]
    refutations: list[str]  # parallel to candidates; "" for survivors

    def lines(self) -> list[str]:
        out = [f"p {self.p}", f"cap {self.cap}", "generators " + " ".join(self.generators),
               f"candidates {len(self.candidates)}", f"survivors {len(self.survivors)}"]
        for c, why in zip(self.candidates, self.refutations):
            out.append(f"candidate {c} [{why or 'survives'}]")
        return out

    def to_json(self):
        return {
            "p": self.p,
            "cap": self.cap,
            "generators": self.generators,
            "candidates": [{"assignment": str(c), "refutation": w} for c, w in zip(self.candidates, self.refutations)],
            "survivors": [str(c) for c in self.survivors],
        }


def forced_unit_map(H: GradedAlgebra, relations, p: int, cap: int, generators=None, limit: int = 1 << 16) -> ForcedMapResult:
    """Candidates x -> 1⊗x + Σ c·a⊗h (|a| > 0) in A_* ⊗ H that respect the given relations."""
    if H.ring != Fp(p):
        raise InputError(f"H must be over F{p}, got {H.ring}")
    A = dual_steenrod(p, "xi", cap).algebra
    Hc = H if H.cap == cap else H.with_cap(cap)
    T = tensor(A, Hc)
    relations = list(relations)
    if generators is None:
        used = []
        for rel in relations:
            for side in (rel.lhs, rel.rhs):
                for _, word in side:
                    for name, _e in word:
                        if name not in used:
                            used.append(name)
        generators = [g for g in Hc.names if g in used] if relations else list(Hc.names)
    for g in generators:
        if g not in Hc.index:
            raise InputError(f"unknown generator {g!r}")
    per_gen = []
    for g in generators:
        d = Hc.degrees[Hc.index[g]]
        lead = T.pure_tensor(A.one(), Hc.gen(g))
        pairs = [(a, h) for i in range(1, d + 1) for a in A.basis.get(i, []) for h in Hc.basis.get(d - i, [])]
        if p ** len(pairs) > limit:
            raise NotSupported(f"{p}^{len(pairs)} candidates for {g} exceed the limit {limit}")
        options = []
        for coeffs in _combos(p, len(pairs)):
            e = lead
            for c, (a, h) in zip(coeffs, pairs):
                if c:
                    e = e + T.pure_tensor(A.monomial(a), Hc.monomial(h)) * c
            options.append(e)
        per_gen.append(options)
    candidates, survivors, why = [], [], []
    for choice in itertools.product(*per_gen):
        images = dict(zip(generators, choice))
        cand = UnitMapCandidate(tuple((g, images[g]) for g in generators))
        candidates.append(cand)
        reason = ""
        for k, rel in enumerate(relations):
            try:
                value = _evaluate(T, A, Hc, rel.lhs, images) - _evaluate(T, A, Hc, rel.rhs, images)
            except DegreeOverflow as exc:
                raise CapTooSmall(f"cap {cap} too small to evaluate relation {k + 1}: {exc}") from exc
            if value:
                reason = f"relation {k + 1} gives {value}"
                break
        why.append(reason)
        if not reason:
            survivors.append(cand)
    return ForcedMapResult(p, cap, list(generators), candidates, survivors, why)


def _evaluate(T, A, H, expr, images) -> Element:
    total = T.zero()
    for coef, word in expr:
        term = T.one() * coef
        for name, e in word:
            img = images.get(name)
            if img is None:
                img = T.pure_tensor(A.one(), H.gen(name))
            term = term * img**e
        total = total + term
    return total


# ---------------------------------------------------------------- extension status


@dataclass
class StatusEntry:
    ground_ring: str
    status: str  # CertifiedExtension, CertifiedNonExtension, Unknown
    route: str
    detail: list[str]

    def to_json(self):
        return {"ground_ring": self.ground_ring, "status": self.status, "route": self.route, "detail": self.detail}


@dataclass
class ExtensionReport:
    entries: list[StatusEntry]

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            out.append(f"{e.ground_ring}: {e.status} ({e.route})")
            out += [f"  {d}" for d in e.detail]
        return out

    def to_json(self):
        return {"entries": [e.to_json() for e in self.entries]}


def extension_status(X: DGA, cap: int, budget: int = 100_000, formal: bool = False, e_infty: bool = False) -> ExtensionReport:
    """Try the monoid-basis criterion (needs asserted formality) and the non-extension obstructions."""
    ring = X.ring
    entries: list[StatusEntry] = []
    if formal:
        try:
            H = homology_ring(X)
            found = search_monoid_basis(H, budget)
        except ExtDGAError as exc:
            entries.append(StatusEntry(str(ring), "Unknown", "monoid basis", [f"{type(exc).__name__}: {exc}"]))
        else:
            if isinstance(found, MonoidBasis):
                scope = "complete table" if H.cap is None else f"through degree {H.cap}"
                entries.append(StatusEntry(str(ring), "CertifiedExtension", "monoid basis",
                                           ["basis " + ", ".join(found.names()), f"scope: {scope}"]))
            else:
                entries.append(StatusEntry(str(ring), "Unknown", "monoid basis",
                                           [str(found), "the basis criterion is sufficient, not necessary"]))
    else:
        entries.append(StatusEntry(str(ring), "Unknown", "monoid basis", ["formality not asserted"]))

    if ring == Fp(2):
        H = homology_ring(X)
        v = square_obstruction_p2(H, max(cap, 2))
        status = "CertifiedNonExtension" if v.status == UNSOLVABLE else "Unknown"
        entries.append(StatusEntry("Z", status, "square obstruction", v.lines()))
    elif ring.is_field and ring.modulus != 2:
        if e_infty:
            H = homology_ring(X)
            v = bockstein_q1_obstruction(ring.modulus, H, max(cap, 2 * ring.modulus - 2))
            status = "CertifiedNonExtension" if v.status == UNSOLVABLE else "Unknown"
            entries.append(StatusEntry("Z", status + (" (E-infinity)" if status != "Unknown" else ""),
                                       "Bockstein obstruction", v.lines()))
        else:
            entries.append(StatusEntry("Z", "Unknown", "Bockstein obstruction",
                                       ["needs an E-infinity structure (pass the E-infinity flag)"]))
    by_ring: dict[str, set[str]] = {}
    for e in entries:
        by_ring.setdefault(e.ground_ring, set()).add(e.status.split()[0])
    for r, sts in by_ring.items():
        assert not {"CertifiedExtension", "CertifiedNonExtension"} <= sts, f"inconsistent verdicts over {r}"
    return ExtensionReport(entries)
