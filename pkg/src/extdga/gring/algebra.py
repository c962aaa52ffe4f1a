"""Graded algebras presented by generators, kinds and relations.

A monomial is a tuple of exponents, one per generator, in generator
order.  Products follow the Koszul rule: moving a generator of degree a
past one of degree b costs (-1)^(ab).  Relations form a rewriting system
oriented by the global (degree, lexicographic) monomial order, and the
system is checked for confluence up to the degree cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..errors import (
    DegreeOverflow,
    InvalidPresentation,
    MixedAlgebras,
    NonConfluentRelations,
    NonFieldCoefficients,
)
from .rings import CoefficientRing

Monomial = tuple[int, ...]
# a term of a written expression: (coefficient, ((generator, exponent), ...)) in written order
Term = tuple[int, tuple[tuple[str, int], ...]]
Expr = tuple[Term, ...]

KINDS = ("poly", "ext", "trunc")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    kind: str = "poly"
    height: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidPresentation(f"generator {self.name}: unknown kind {self.kind!r}")
        if self.degree < 0:
            raise InvalidPresentation(f"generator {self.name}: negative degree")
        if self.kind == "trunc" and (self.height is None or self.height < 2):
            raise InvalidPresentation(f"generator {self.name}: truncation height must be >= 2")
        if self.kind != "trunc" and self.height is not None:
            raise InvalidPresentation(f"generator {self.name}: height only applies to trunc")

    @property
    def max_exponent(self) -> int | None:
        if self.kind == "ext":
            return 1
        if self.kind == "trunc":
            return self.height - 1
        return None

    def kind_text(self) -> str:
        return f"trunc:{self.height}" if self.kind == "trunc" else self.kind


@dataclass(frozen=True)
class Relation:
    lhs: Expr
    rhs: Expr = ()


@dataclass(frozen=True)
class AlgebraPresentation:
    ring: CoefficientRing
    generators: tuple[GeneratorSpec, ...]
    relations: tuple[Relation, ...] = ()
    sign_rule: str = "koszul"


def _lex_key(m: Monomial):
    return m


class GradedAlgebra:
    """A presented graded algebra, expanded through degree ``cap``."""

    def __init__(
        self,
        ring: CoefficientRing,
        generators,
        rules=(),
        cap: int = 0,
        sign_rule: str = "koszul",
        factors=None,
        check: bool = True,
    ):
        self.ring = ring
        self.generators = tuple(generators)
        self.cap = cap
        self.sign_rule = sign_rule
        self.names = [g.name for g in self.generators]
        self.degrees = [g.degree for g in self.generators]
        self.maxexp = [g.max_exponent for g in self.generators]
        self.ngens = len(self.generators)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.factors = factors
        self._nf_cache: dict[Monomial, dict[Monomial, int]] = {}
        if cap < 0:
            raise InvalidPresentation("degree cap must be >= 0")
        if len(self.index) != self.ngens:
            raise InvalidPresentation("duplicate generator names")
        if sign_rule not in ("koszul", "ungraded"):
            raise InvalidPresentation(f"unknown sign rule {sign_rule!r}")
        for g in self.generators:
            if g.degree == 0 and g.kind == "poly":
                raise InvalidPresentation(f"polynomial generator {g.name} in degree 0 is not degreewise finite")
            odd_square_survives = g.kind == "poly" or (g.kind == "trunc" and g.height > 2)
            if sign_rule == "koszul" and g.degree % 2 and odd_square_survives and ring.characteristic != 2:
                raise InvalidPresentation(
                    f"{g.name}: odd-degree generator with nonzero square is not graded commutative "
                    f"over {ring}; declare it ext"
                )
        self.rules = list(rules)
        for lhs, rhs in self.rules:
            for m in rhs:
                if self.mono_degree(m) != self.mono_degree(lhs) or m >= lhs:
                    raise InvalidPresentation("rewriting rule is not oriented by the monomial order")
        self.basis = self._expand(check)

    # -- construction ---------------------------------------------------

    @classmethod
    def from_presentation(cls, pres: AlgebraPresentation, cap: int, check: bool = True) -> GradedAlgebra:
        alg = cls(pres.ring, pres.generators, (), cap, pres.sign_rule, check=False)
        rules = []
        for rel in pres.relations:
            diff = dict(alg.evaluate_raw(rel.lhs))
            for m, c in alg.evaluate_raw(rel.rhs).items():
                diff[m] = pres.ring.reduce(diff.get(m, 0) - c)
                if not diff[m]:
                    del diff[m]
            if not diff:
                continue
            degs = {alg.mono_degree(m) for m in diff}
            if len(degs) != 1:
                raise InvalidPresentation("relation is not homogeneous")
            lead = max(diff)
            c = diff.pop(lead)
            if not pres.ring.is_unit(c):
                raise InvalidPresentation(
                    f"leading coefficient {c} of relation on {alg.format_monomial(lead)} is not a unit"
                )
            inv = pres.ring.inverse(c)
            rhs = {m: pres.ring.reduce(-inv * v) for m, v in diff.items()}
            rules.append((lead, {m: v for m, v in rhs.items() if v}))
        return cls(pres.ring, pres.generators, rules, cap, pres.sign_rule, check=check)

    def with_cap(self, cap: int) -> GradedAlgebra:
        return GradedAlgebra(self.ring, self.generators, self.rules, cap, self.sign_rule, self.factors)

    # -- monomial arithmetic ------------------------------------------

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def valid_raw(self, m: Monomial) -> bool:
        return all(mx is None or e <= mx for e, mx in zip(m, self.maxexp))

    def mul_raw(self, a: Monomial, b: Monomial):
        """Product of raw monomials before relations: (sign, monomial) or None if zero by kind."""
        prod = tuple(x + y for x, y in zip(a, b))
        if not self.valid_raw(prod):
            return None
        if self.sign_rule != "koszul":
            return 1, prod
        parity = 0
        suffix = 0  # parity of sum_{i > j} a_i d_i
        for j in range(self.ngens - 1, -1, -1):
            if b[j] and self.degrees[j] % 2:
                parity ^= suffix & b[j] & 1
            if a[j] and self.degrees[j] % 2:
                suffix ^= a[j] & 1
        return (-1 if parity else 1), prod

    def evaluate_raw(self, expr: Expr) -> dict[Monomial, int]:
        out: dict[Monomial, int] = {}
        for coef, word in expr:
            sign, mono = 1, (0,) * self.ngens
            for name, e in word:
                if name not in self.index:
                    raise InvalidPresentation(f"unknown generator {name!r}")
                g = [0] * self.ngens
                g[self.index[name]] = e
                r = self.mul_raw(mono, tuple(g))
                if r is None:
                    sign = 0
                    break
                s, mono = r
                sign *= s
            if sign:
                v = self.ring.reduce(out.get(mono, 0) + sign * coef)
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return out

    def _rule_for(self, m: Monomial):
        for k, (lhs, _) in enumerate(self.rules):
            if all(x >= y for x, y in zip(m, lhs)):
                return k
        return None

    def _rewrite(self, m: Monomial, k: int) -> dict[Monomial, int]:
        lhs, rhs = self.rules[k]
        q = tuple(x - y for x, y in zip(m, lhs))
        sign, check = self.mul_raw(lhs, q)
        assert check == m
        out: dict[Monomial, int] = {}
        for r, c in rhs.items():
            pr = self.mul_raw(r, q)
            if pr is None:
                continue
            s, mono = pr
            out[mono] = self.ring.reduce(out.get(mono, 0) + sign * s * c)
        return {mm: v for mm, v in out.items() if v}

    def normal_form(self, m: Monomial) -> dict[Monomial, int]:
        cached = self._nf_cache.get(m)
        if cached is not None:
            return cached
        k = self._rule_for(m)
        if k is None:
            result = {m: 1}
        else:
            result = self._nf_linear(self._rewrite(m, k))
        self._nf_cache[m] = result
        return result

    def _nf_linear(self, terms: dict[Monomial, int]) -> dict[Monomial, int]:
        out: dict[Monomial, int] = {}
        for mono, c in terms.items():
            for n, v in self.normal_form(mono).items():
                out[n] = self.ring.reduce(out.get(n, 0) + c * v)
        return {n: v for n, v in out.items() if v}

    # -- basis ----------------------------------------------------------

    def raw_monomials(self, degree: int) -> list[Monomial]:
        out = []

        def rec(i, remaining, acc):
            if i == self.ngens:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[i]
            mx = self.maxexp[i]
            if d == 0:
                top = mx
            else:
                top = remaining // d if mx is None else min(mx, remaining // d)
            for e in range(top + 1):
                acc.append(e)
                rec(i + 1, remaining - e * d, acc)
                acc.pop()

        rec(0, degree, [])
        return sorted(out, key=_lex_key)

    def _expand(self, check: bool) -> dict[int, list[Monomial]]:
        basis = {}
        for d in range(self.cap + 1):
            raw = self.raw_monomials(d)
            if check and self.rules:
                for m in raw:
                    ks = [k for k, (lhs, _) in enumerate(self.rules) if all(x >= y for x, y in zip(m, lhs))]
                    if len(ks) < 2:
                        continue
                    nf = self.normal_form(m)
                    for k in ks:
                        if self._nf_linear(self._rewrite(m, k)) != nf:
                            raise NonConfluentRelations(
                                f"monomial {self.format_monomial(m)} (degree {d}) has two distinct normal forms"
                            )
            basis[d] = [m for m in raw if self._rule_for(m) is None]
        return basis

    def dimension(self, degree: int) -> int:
        if degree > self.cap:
            raise DegreeOverflow(f"degree {degree} beyond cap {self.cap}")
        return len(self.basis.get(degree, []))

    def dimensions(self) -> list[int]:
        return [len(self.basis[d]) for d in range(self.cap + 1)]

    @cached_property
    def basis_index(self) -> dict[Monomial, int]:
        flat = {}
        for d in range(self.cap + 1):
            for m in self.basis[d]:
                flat[m] = len(flat)
        return flat

    def all_basis(self) -> list[Monomial]:
        return [m for d in range(self.cap + 1) for m in self.basis[d]]

    # -- elements -------------------------------------------------------

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def element(self, terms: dict[Monomial, int]) -> Element:
        return Element(self, terms)

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {self.unit_monomial: 1})

    def gen(self, name: str) -> Element:
        if name not in self.index:
            raise KeyError(f"no generator {name!r}")
        m = [0] * self.ngens
        m[self.index[name]] = 1
        if self.degrees[self.index[name]] > self.cap:
            raise DegreeOverflow(f"generator {name} lies beyond cap {self.cap}")
        return Element(self, self.normal_form(tuple(m)))

    def monomial(self, m: Monomial, coef: int = 1) -> Element:
        if not self.valid_raw(m):
            return self.zero()
        return Element(self, {k: coef * v for k, v in self.normal_form(tuple(m)).items()})

    def from_expr(self, expr: Expr) -> Element:
        raw = self.evaluate_raw(expr)
        for m in raw:
            if self.mono_degree(m) > self.cap:
                raise DegreeOverflow(f"{self.format_monomial(m)} lies beyond cap {self.cap}")
        return Element(self, self._nf_linear(raw))

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra is not b.algebra:
            raise MixedAlgebras("elements live in different algebras")
        out: dict[Monomial, int] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                if self.mono_degree(m1) + self.mono_degree(m2) > self.cap:
                    raise DegreeOverflow(
                        f"product of degree {self.mono_degree(m1) + self.mono_degree(m2)} exceeds cap {self.cap}"
                    )
                pr = self.mul_raw(m1, m2)
                if pr is None:
                    continue
                s, mono = pr
                for n, v in self.normal_form(mono).items():
                    out[n] = self.ring.reduce(out.get(n, 0) + s * c1 * c2 * v)
        return Element(self, out)

    # -- tensor structure -----------------------------------------------

    @property
    def offsets(self) -> list[int]:
        if not self.factors:
            return [0]
        offs, acc = [], 0
        for f in self.factors:
            offs.append(acc)
            acc += f.ngens
        return offs

    def split(self, m: Monomial) -> list[Monomial]:
        if not self.factors:
            return [m]
        return [m[o : o + f.ngens] for f, o in zip(self.factors, self.offsets)]

    def pure_tensor(self, *parts: Element) -> Element:
        """Embed a_1 (x) a_2 (x) ... given elements of the tensor factors."""
        if not self.factors or len(parts) != len(self.factors):
            raise MixedAlgebras("pure_tensor needs one element per tensor factor")
        terms = {(): 1}
        for part, fac in zip(parts, self.factors):
            if part.algebra is not fac:
                raise MixedAlgebras("tensor component lives in the wrong algebra")
            new = {}
            for prefix, c in terms.items():
                for m, v in part.terms.items():
                    key = prefix + m
                    new[key] = self.ring.reduce(new.get(key, 0) + c * v)
            terms = {k: v for k, v in new.items() if v}
        for m in terms:
            if self.mono_degree(m) > self.cap:
                raise DegreeOverflow("pure tensor beyond cap")
        return Element(self, terms)

    # -- formatting -----------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        if self.factors:
            return " ⊗ ".join(f.format_monomial(part) for f, part in zip(self.factors, self.split(m)))
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def describe(self) -> str:
        gens = ", ".join(f"{g.name}({g.degree},{g.kind_text()})" for g in self.generators)
        return f"{self.ring}[{gens}] cap {self.cap}"


INHOMOGENEOUS = "inhomogeneous"


class Element:
    """Sparse linear combination of normal-form monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: dict[Monomial, int]):
        ring = algebra.ring
        self.algebra = algebra
        self.terms = {m: ring.reduce(c) for m, c in terms.items() if ring.reduce(c)}

    @property
    def degree(self):
        degs = {self.algebra.mono_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            return INHOMOGENEOUS
        return degs.pop()

    @property
    def is_homogeneous(self) -> bool:
        return self.degree != INHOMOGENEOUS

    def homogeneous_parts(self) -> dict[int, Element]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.algebra.mono_degree(m), {})[m] = c
        return {d: Element(self.algebra, t) for d, t in sorted(parts.items())}

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                raise MixedAlgebras("elements live in different algebras")
            return other
        if isinstance(other, int):
            return Element(self.algebra, {self.algebra.unit_monomial: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Element(self.algebra, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Element(self.algebra, {self.algebra.unit_monomial: other})
        return isinstance(other, Element) and other.algebra is self.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        alg = self.algebra
        return sorted(self.terms.items(), key=lambda mc: (alg.mono_degree(mc[0]), mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.algebra.ring
        out = []
        for m, c in self.sorted_terms():
            cs = ring.format(c)
            body = self.algebra.format_monomial(m)
            if cs == "1":
                term = body
            elif cs == "-1":
                term = "-" + body
            elif body == "1":
                term = cs
            else:
                term = f"{cs}*{body}" if " ⊗ " not in body else f"{cs}*({body})"
            out.append(term)
        text = out[0]
        for t in out[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text

    def __repr__(self):
        return f"Element({self})"


# ---------------------------------------------------------------- operations


def expand_basis(pres: AlgebraPresentation, cap: int) -> dict[int, list[Monomial]]:
    """Canonical monomial basis of each degree <= cap (sorted lexicographically)."""
    return GradedAlgebra.from_presentation(pres, cap).basis


def multiply(a: Element, b: Element) -> Element:
    if a.algebra is not b.algebra:
        raise MixedAlgebras("elements live in different algebras")
    return a.algebra.multiply(a, b)


def tensor(*algebras: GradedAlgebra, cap: int | None = None) -> GradedAlgebra:
    """Graded tensor product over a common field; (a (x) x)(b (x) y) = (-1)^(|x||b|) ab (x) xy."""
    ring = algebras[0].ring
    for a in algebras:
        if a.ring != ring:
            raise MixedAlgebras(f"cannot tensor over {ring} and {a.ring}")
        if a.sign_rule != algebras[0].sign_rule:
            raise MixedAlgebras("mixed sign rules")
    if not ring.is_field:
        raise NonFieldCoefficients(f"tensor needs field coefficients, got {ring}")
    if cap is None:
        cap = min(a.cap for a in algebras)
    for a in algebras:
        if a.cap < cap:
            raise DegreeOverflow(f"factor known only through degree {a.cap} < {cap}")
    gens, rules, seen = [], [], set()
    offset, total = 0, sum(a.ngens for a in algebras)
    for a in algebras:
        for g in a.generators:
            name = g.name
            while name in seen:
                name += "'"
            seen.add(name)
            gens.append(GeneratorSpec(name, g.degree, g.kind, g.height))
        pad_l, pad_r = (0,) * offset, (0,) * (total - offset - a.ngens)
        for lhs, rhs in a.rules:
            rules.append((pad_l + lhs + pad_r, {pad_l + m + pad_r: c for m, c in rhs.items()}))
        offset += a.ngens
    return GradedAlgebra(ring, gens, rules, cap, algebras[0].sign_rule, factors=tuple(algebras))
