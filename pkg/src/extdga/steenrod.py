"""The dual Steenrod algebra, HF_p-homology of HZ, and Dyer-Lashof operations.

Generator names are ASCII: ``xi<r>``, ``zeta<r>``, ``tau<s>``, ``taubar<s>``
and, for HF_2 homology of HZ, ``xi1sq`` standing for the square of xi1.

Evaluation order for Q^s (or βQ^s) on a monomial m:

1. the unit: Q^0 1 = 1, all other operations vanish;
2. a single generator with a tabulated value: the table;
3. instability and the top operation, applied to m as a whole;
4. shortcuts for squares (p = 2) and p-th powers (odd p);
5. Cartan across the first generator factor (β acting as a derivation).

Anything left over raises :class:`MissingGeneratorAction`; values are never
invented.  Tabulated generator values take precedence over instability; the
only clash is Q^0 xi1 at p = 2 (see docs/FORMAT.md).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DegreeOverflow, InputError, MissingGeneratorAction, NotSupported
from .gring.algebra import Element, GeneratorSpec, GradedAlgebra, Monomial
from .gring.rings import Fp, is_prime

# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class DLWord:
    """A composite of operations (beta, s), applied right to left."""

    p: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.p == 2 and any(b for b, _ in self.factors):
            raise InputError("no Bockstein-composed operations at p = 2")
        if not self.factors:
            raise InputError("empty Dyer-Lashof word")

    def __str__(self):
        return " ".join(("bQ" if b else "Q") + str(s) for b, s in self.factors)

    def shift(self) -> int:
        return sum(op_shift(self.p, b, s) for b, s in self.factors)


_OP = re.compile(r"\s*(b|β)?\s*Q\^?(-?\d+)\s*")


def parse_word(text: str, p: int) -> DLWord:
    """Parse e.g. ``Q2``, ``bQ1``, ``βQ^1``, ``Q1 Q2`` (rightmost applied first)."""
    pos, factors = 0, []
    text = text.strip()
    while pos < len(text):
        m = _OP.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse Dyer-Lashof word {text!r} at column {pos + 1}")
        factors.append((1 if m.group(1) else 0, int(m.group(2))))
        pos = m.end()
    return DLWord(p, tuple(factors))


def op_shift(p: int, beta: int, s: int) -> int:
    if p == 2:
        return s
    return 2 * s * (p - 1) - beta


def op_name(beta: int, s: int) -> str:
    return ("bQ" if beta else "Q") + str(s)


# ---------------------------------------------------------------- contexts


def _k(p: int, s: int) -> int:
    return (p**s - 1) // (p - 1)


def _gens_p2(prefix: str, cap: int) -> list[GeneratorSpec]:
    out, r = [], 1
    while 2**r - 1 <= cap:
        out.append(GeneratorSpec(f"{prefix}{r}", 2**r - 1, "poly"))
        r += 1
    return out


def _gens_odd(p: int, cap: int, poly: str, ext0: str, ext: str, first_ext: int = 0) -> list[GeneratorSpec]:
    out = []
    s = first_ext
    while 2 * p**s - 1 <= cap:
        out.append(GeneratorSpec(ext0 if s == 0 else f"{ext}{s}", 2 * p**s - 1, "ext"))
        s += 1
    r = 1
    while 2 * (p**r - 1) <= cap:
        out.append(GeneratorSpec(f"{poly}{r}", 2 * (p**r - 1), "poly"))
        r += 1
    out.sort(key=lambda g: (g.degree, g.name))
    return out


@dataclass
class SteenrodContext:
    p: int
    presentation: str  # "xi", "zeta" or "hz"
    algebra: GradedAlgebra
    generator_actions: dict[tuple[int, int, str], Element] = field(default_factory=dict)
    aliases: dict[str, Element] = field(default_factory=dict)
    bockstein_table: dict[str, Element] = field(default_factory=dict)
    ambient: SteenrodContext | None = None  # for HZ: the A_* context it embeds into
    embedding: dict[str, Element] = field(default_factory=dict)

    @property
    def cap(self) -> int:
        return self.algebra.cap

    def element(self, expr) -> Element:
        """Evaluate a written expression, resolving aliases such as xi1 in the zeta context."""
        alg = self.algebra
        total = alg.zero()
        for coef, word in expr:
            term = alg.one() * coef
            for name, e in word:
                if name in alg.index:
                    g = alg.gen(name)
                elif name in self.aliases:
                    g = self.aliases[name]
                else:
                    raise InputError(f"unknown generator {name!r} in the {self.presentation} presentation at p = {self.p}")
                term = term * g**e
            total = total + term
        return total

    def apply(self, word: DLWord, e: Element) -> Element:
        return apply_dl(word, e, self)

    def table_lines(self) -> list[str]:
        lines = []
        for (b, s, g), v in sorted(self.generator_actions.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])):
            lines.append(f"{op_name(b, s)} {g} = {v}")
        for g, v in sorted(self.bockstein_table.items()):
            lines.append(f"b {g} = {v}")
        return lines


def dual_steenrod(p: int, presentation: str = "xi", cap: int = 8) -> SteenrodContext:
    """A_* through degree ``cap`` in the xi or zeta presentation, with generator actions."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if cap < 0:
        raise InputError("cap must be >= 0")
    ring = Fp(p)
    if presentation == "xi":
        gens = _gens_p2("xi", cap) if p == 2 else _gens_odd(p, cap, "xi", "tau0", "tau")
    elif presentation == "zeta":
        gens = _gens_p2("zeta", cap) if p == 2 else _gens_odd(p, cap, "zeta", "tau0", "taubar")
    else:
        raise InputError(f"unknown presentation {presentation!r} (xi or zeta)")
    alg = GradedAlgebra(ring, gens, (), cap)
    ctx = SteenrodContext(p, presentation, alg)
    names = set(alg.names)

    def have(n):
        return n in names

    if p == 2:
        # Q^{2^s-2} xi1 = zeta_s, with zeta1 = xi1
        if presentation == "zeta":
            if have("zeta1"):
                ctx.aliases["xi1"] = alg.gen("zeta1")
            s = 1
            while have(f"zeta{s}"):
                ctx.generator_actions[(0, 2**s - 2, "zeta1")] = alg.gen(f"zeta{s}")
                s += 1
        elif have("xi1"):
            ctx.aliases["zeta1"] = alg.gen("xi1")
            ctx.generator_actions[(0, 0, "xi1")] = alg.gen("xi1")
        return ctx

    # odd p: Q^{k_s} tau0 = (-1)^s taubar_s, bQ^{k_s} tau0 = (-1)^s zeta_s, zeta1 = -xi1
    if presentation == "zeta":
        if have("zeta1"):
            ctx.aliases["xi1"] = -alg.gen("zeta1")
        s = 1
        while True:
            done = True
            if have(f"taubar{s}"):
                ctx.generator_actions[(0, _k(p, s), "tau0")] = alg.gen(f"taubar{s}") * (-1) ** s
                done = False
            if have(f"zeta{s}"):
                ctx.generator_actions[(1, _k(p, s), "tau0")] = alg.gen(f"zeta{s}") * (-1) ** s
                done = False
            if have(f"taubar{s}") and have(f"zeta{s}"):
                # composing the two table entries: β taubar_s = zeta_s
                ctx.bockstein_table[f"taubar{s}"] = alg.gen(f"zeta{s}")
            if done:
                break
            s += 1
        for g in alg.names:
            if g.startswith("zeta"):
                ctx.bockstein_table[g] = alg.zero()
    else:
        if have("xi1"):
            ctx.aliases["zeta1"] = -alg.gen("xi1")
            ctx.generator_actions[(1, 1, "tau0")] = alg.gen("xi1")
    return ctx


def hfp_homology_of_hz(p: int, cap: int) -> SteenrodContext:
    """HF_p_* HZ as a subalgebra of A_* (xi presentation): tau0 dropped, xi1 replaced by xi1sq at p = 2."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    ambient = dual_steenrod(p, "xi", cap)
    A = ambient.algebra
    if p == 2:
        gens = [GeneratorSpec("xi1sq", 2, "poly")] if cap >= 2 else []
        gens += [g for g in A.generators if g.name != "xi1"]
        gens.sort(key=lambda g: (g.degree, g.name))
    else:
        gens = [g for g in A.generators if g.name != "tau0"]
    alg = GradedAlgebra(Fp(p), gens, (), cap)
    emb = {}
    for g in alg.names:
        emb[g] = A.gen("xi1") ** 2 if g == "xi1sq" else A.gen(g)
    return SteenrodContext(p, "hz", alg, ambient=ambient, embedding=emb)


def embed(ctx: SteenrodContext, e: Element) -> Element:
    """Image of an HZ-homology element in A_*."""
    A = ctx.ambient.algebra
    out = A.zero()
    for m, c in e.terms.items():
        term = A.one() * c
        for name, k in zip(ctx.algebra.names, m):
            if k:
                term = term * ctx.embedding[name] ** k
        out = out + term
    return out


def pull_back(ctx: SteenrodContext, a: Element) -> Element:
    """Inverse of :func:`embed` on its image (monomials map injectively to monomials)."""
    images = {}
    for m in ctx.algebra.all_basis():
        img = embed(ctx, ctx.algebra.monomial(m))
        (im, c), = img.terms.items()
        images[im] = (m, c)
    out = {}
    for m, c in a.terms.items():
        if m not in images:
            raise NotSupported(f"{ctx.ambient.algebra.format_monomial(m)} is not in the image of HF_p_*HZ")
        src, k = images[m]
        out[src] = c * ctx.algebra.ring.inverse(k)
    return ctx.algebra.element(out)


# ---------------------------------------------------------------- evaluation


def _single(m: Monomial):
    nz = [(i, e) for i, e in enumerate(m) if e]
    if len(nz) == 1 and nz[0][1] == 1:
        return nz[0][0]
    return None


def _apply_mono(ctx: SteenrodContext, beta: int, s: int, m: Monomial) -> Element:
    alg, p = ctx.algebra, ctx.p
    deg = alg.mono_degree(m)
    target = deg + op_shift(p, beta, s)
    if not any(m):
        return alg.one() if (beta, s) == (0, 0) else alg.zero()
    g = _single(m)
    if g is not None:
        key = (beta, s, alg.names[g])
        if key in ctx.generator_actions:
            return ctx.generator_actions[key]
    # instability: a known zero needs no room above the cap
    if (s < deg) if p == 2 else ((2 * s <= deg) if beta else (2 * s < deg)):
        return alg.zero()
    if target > alg.cap:
        raise DegreeOverflow(f"{op_name(beta, s)} of a degree-{deg} element lands in degree {target} > cap {alg.cap}")
    x = alg.monomial(m)
    if p == 2 and s == deg:
        return x * x
    if p != 2 and not beta and 2 * s == deg:
        return x**p
    if g is not None:
        raise MissingGeneratorAction(
            f"{op_name(beta, s)}({alg.names[g]}) is not tabulated and not forced by instability"
        )
    # squares and p-th powers
    if all(e % p == 0 for e in m) and not beta:
        root = tuple(e // p for e in m)
        if s % p:
            return alg.zero()
        return _apply_mono(ctx, 0, s // p, root) ** p
    # Cartan across the first generator
    first = next(i for i, e in enumerate(m) if e)
    gm = tuple(int(i == first) for i in range(len(m)))
    rest = tuple(e - int(i == first) for i, e in enumerate(m))
    gdeg = alg.degrees[first]
    total = alg.zero()
    for i in range(s + 1):
        j = s - i
        if beta:
            y = _apply_mono(ctx, 0, j, rest)
            if y:
                total = total + _apply_mono(ctx, 1, i, gm) * y
            by = _apply_mono(ctx, 1, j, rest)
            if by:
                total = total + _apply_mono(ctx, 0, i, gm) * by * (-1) ** gdeg
        else:
            y = _apply_mono(ctx, 0, j, rest)
            if y:
                total = total + _apply_mono(ctx, 0, i, gm) * y
    return total


def apply_op(ctx: SteenrodContext, beta: int, s: int, e: Element) -> Element:
    if e.algebra is not ctx.algebra:
        raise InputError("element does not belong to this context's algebra")
    if ctx.presentation == "hz":
        return pull_back(ctx, apply_op(ctx.ambient, beta, s, embed(ctx, e)))
    out = ctx.algebra.zero()
    for m, c in e.sorted_terms():
        out = out + _apply_mono(ctx, beta, s, m) * c
    return out


def apply_dl(word: DLWord, e: Element, ctx: SteenrodContext) -> Element:
    if word.p != ctx.p:
        raise InputError(f"word at p = {word.p} applied in a p = {ctx.p} context")
    if not e.is_homogeneous:
        raise InputError("Dyer-Lashof operations are applied to homogeneous elements")
    for beta, s in reversed(word.factors):
        e = apply_op(ctx, beta, s, e)
    return e


def bockstein(e: Element, ctx: SteenrodContext) -> Element:
    """The Bockstein as a derivation, from its values on generators."""
    alg = ctx.algebra
    out = alg.zero()
    for m, c in e.terms.items():
        before = 0
        for i, k in enumerate(m):
            if not k:
                continue
            name = alg.names[i]
            if name not in ctx.bockstein_table:
                raise MissingGeneratorAction(f"Bockstein of {name} is not tabulated")
            bg = ctx.bockstein_table[name]
            if bg:
                left = tuple(m[:i]) + (0,) * (len(m) - i)
                right = (0,) * (i + 1) + tuple(m[i + 1 :])
                g_rest = tuple(k - 1 if t == i else 0 for t in range(len(m)))
                # m = left * g^k * right; β(g^k) = k g^{k-1} βg for even g, exterior g has k = 1
                term = alg.monomial(left) * (alg.monomial(g_rest) * bg * k) * alg.monomial(right)
                out = out + term * c * (-1) ** before
            before += k * alg.degrees[i]
    return out


# ---------------------------------------------------------------- tensors


class TableTensor:
    """A ⊗ B with A a presented algebra and B a structure-constant table.

    Keys are (A-monomial, B-basis index); (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'.
    """

    def __init__(self, A: GradedAlgebra, B, cap: int | None = None):
        from .dga import GradedRingTable

        if isinstance(B, GradedAlgebra):
            B = GradedRingTable.from_algebra(B)
        if A.ring != B.ring:
            raise InputError(f"tensor factors over {A.ring} and {B.ring}")
        self.A, self.B = A, B
        self.ring = A.ring
        self.cap = A.cap if cap is None else min(cap, A.cap)

    def degree(self, key) -> int:
        a, b = key
        return self.A.mono_degree(a) + self.B.degree(b)

    def basis(self, d: int) -> list[tuple[Monomial, int]]:
        out = []
        for i in range(0, d + 1):
            if i > self.A.cap:
                break
            for a in self.A.basis.get(i, []):
                for b in self.B.in_degree(d - i):
                    out.append((a, b))
        return out

    def unit(self):
        return (self.A.unit_monomial, self.B.unit)

    def mul(self, u: dict, v: dict) -> dict:
        A, B, ring = self.A, self.B, self.ring
        out: dict = {}
        for (a, b), c in u.items():
            for (a2, b2), c2 in v.items():
                if self.degree((a, b)) + self.degree((a2, b2)) > self.cap:
                    raise DegreeOverflow(f"product beyond cap {self.cap}")
                sign = -1 if (B.degree(b) * A.mono_degree(a2)) % 2 else 1
                aa = A.multiply(A.monomial(a), A.monomial(a2))
                bb = B.products.get((b, b2), {})
                for am, x in aa.terms.items():
                    for bm, y in bb.items():
                        key = (am, bm)
                        out[key] = ring.reduce(out.get(key, 0) + sign * c * c2 * x * y)
        return {k: v for k, v in out.items() if v}

    def power(self, u: dict, n: int) -> dict:
        out = {self.unit(): 1}
        for _ in range(n):
            out = self.mul(out, u)
        return out

    def format_key(self, key) -> str:
        a, b = key
        return f"{self.A.format_monomial(a)} ⊗ {self.B.names[b]}"

    def format(self, v: dict) -> str:
        if not v:
            return "0"
        parts = []
        for key in sorted(v, key=lambda k: (self.degree(k), self.A.mono_degree(k[0]), k)):
            cs = self.ring.format(v[key])
            body = self.format_key(key)
            parts.append(body if cs == "1" else ("-" + body if cs == "-1" else f"{cs}*({body})"))
        text = parts[0]
        for t in parts[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text

    def from_element(self, e: Element) -> dict:
        """Convert an Element of tensor(A, B_algebra) into table-tensor coordinates."""
        T = e.algebra
        if not T.factors or len(T.factors) != 2 or T.factors[0] is not self.A:
            raise InputError("element must live in A ⊗ B")
        Balg = T.factors[1]
        names = {n: i for i, n in enumerate(self.B.names)}
        out = {}
        for m, c in e.terms.items():
            a, b = T.split(m)
            out[(a, names[Balg.format_monomial(b)])] = c
        return out


@dataclass(frozen=True)
class Opaque:
    """An unevaluated operation value, kept on one tensor side."""

    side: str
    beta: int
    s: int
    arg: str
    degree: int

    def __str__(self):
        return f"{op_name(self.beta, self.s)}({self.arg})"


@dataclass
class TensorDLResult:
    """Σ c · (A-part ⊗ B-part); parts are A-monomials / B-indices or Opaque markers."""

    tensor: TableTensor
    terms: dict[tuple[object, object], int]

    def a_degree(self, part) -> int:
        return part.degree if isinstance(part, Opaque) else self.tensor.A.mono_degree(part)

    def b_degree(self, part) -> int:
        return part.degree if isinstance(part, Opaque) else self.tensor.B.degree(part)

    def coefficient(self, a: Monomial, b: int) -> int:
        return self.terms.get((tuple(a), b), 0)

    def explicit(self) -> dict:
        return {k: v for k, v in self.terms.items() if not any(isinstance(x, Opaque) for x in k)}

    def opaque_terms(self) -> dict:
        return {k: v for k, v in self.terms.items() if any(isinstance(x, Opaque) for x in k)}

    def _fmt(self, a, b) -> str:
        A, B = self.tensor.A, self.tensor.B
        left = str(a) if isinstance(a, Opaque) else A.format_monomial(a)
        right = str(b) if isinstance(b, Opaque) else B.names[b]
        return f"{left} ⊗ {right}"

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (self.a_degree(kv[0][0]), self._fmt(*kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.tensor.ring
        parts = []
        for (a, b), c in self.sorted_items():
            body = self._fmt(a, b)
            cs = ring.format(c)
            parts.append(body if cs == "1" else ("-" + body if cs == "-1" else f"{cs}*({body})"))
        text = parts[0]
        for t in parts[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text


def _b_side(B, p: int, beta: int, s: int, b: int, b_action):
    """{B-part: coef} for Q^s b (or βQ^s b); unknown values become Opaque markers."""
    deg = B.degree(b)
    if b == B.unit:
        return {b: 1} if (beta, s) == (0, 0) else {}
    if b_action is not None:
        val = b_action(beta, s, b)
        if val is not None:
            return dict(val)
    if p == 2:
        if s < deg:
            return {}
        if s == deg:
            return B.mul({b: 1}, {b: 1})
    else:
        if beta and 2 * s <= deg:
            return {}
        if not beta and 2 * s < deg:
            return {}
        if not beta and 2 * s == deg:
            out = {b: 1}
            for _ in range(p - 1):
                out = B.mul(out, {b: 1})
            return out
    return {Opaque("B", beta, s, B.names[b], deg + op_shift(p, beta, s)): 1}


def _a_side(ctx: SteenrodContext, beta: int, s: int, a: Monomial):
    A = ctx.algebra
    try:
        return dict(apply_op(ctx, beta, s, A.monomial(a)).terms)
    except MissingGeneratorAction:
        deg = A.mono_degree(a)
        return {Opaque("A", beta, s, A.format_monomial(a), deg + op_shift(ctx.p, beta, s)): 1}


def apply_dl_tensor(beta: int, s: int, e, ctx: SteenrodContext, B=None, b_action=None) -> TensorDLResult:
    """Q^s or βQ^s on an element of ctx.algebra ⊗ B by the Cartan formula across the tensor.

    ``e`` is an Element of ``tensor(ctx.algebra, B_algebra)`` or a dict of
    (A-monomial, B-index) coordinates together with the table ``B``.
    ``b_action(beta, s, b_index)`` may return a B-vector or None (unknown).
    Products a⊗b with both sides nontrivial obey instability and the top
    operation before Cartan is used, matching :func:`apply_dl`.
    """
    if isinstance(e, Element):
        T = TableTensor(ctx.algebra, e.algebra.factors[1] if e.algebra.factors else B)
        coords = T.from_element(e)
    else:
        T = TableTensor(ctx.algebra, B)
        coords = dict(e)
    Bt, p, ring = T.B, ctx.p, T.ring
    out: dict[tuple[object, object], int] = {}

    def add(a_terms, b_terms, coef):
        for a, ca in a_terms.items():
            for b, cb in b_terms.items():
                key = (a, b)
                out[key] = ring.reduce(out.get(key, 0) + coef * ca * cb)

    for (a, b), c in sorted(coords.items(), key=lambda kv: (T.degree(kv[0]), kv[0])):
        adeg = ctx.algebra.mono_degree(a)
        if any(a) and b != Bt.unit:
            deg = T.degree((a, b))
            if p == 2:
                low, top = s < deg, s == deg
            else:
                low, top = (2 * s <= deg) if beta else (2 * s < deg), (not beta and 2 * s == deg)
            if low:
                continue
            if top:
                if deg * p > T.cap:
                    raise DegreeOverflow(f"top operation lands beyond cap {T.cap}")
                for key, v in T.power({(a, b): 1}, p).items():
                    out[key] = ring.reduce(out.get(key, 0) + c * v)
                continue
        for i in range(s + 1):
            j = s - i
            if beta:
                bt = _b_side(Bt, p, 0, j, b, b_action)
                if bt:
                    add(_a_side(ctx, 1, i, a), bt, c)
                bt = _b_side(Bt, p, 1, j, b, b_action)
                if bt:
                    add(_a_side(ctx, 0, i, a), bt, c * (-1) ** adeg)
            else:
                bt = _b_side(Bt, p, 0, j, b, b_action)
                if bt:
                    add(_a_side(ctx, 0, i, a), bt, c)
    return TensorDLResult(T, {k: v for k, v in out.items() if v})
