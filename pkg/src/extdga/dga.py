"""Differential graded algebras, their homology, and homology rings.

Vectors are sparse dicts ``{basis index: coefficient}``.  A
:class:`GradedRingTable` is a graded algebra given by a free basis and
structure constants; a :class:`DGA` adds a differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    InvalidDGA,
    NonAssociativeTable,
    NonUnital,
    NotSupported,
    RepresentativeFailure,
)
from .gring.abelian import FgAbelianGroup
from .gring.algebra import GradedAlgebra
from .gring.linalg import (
    integer_kernel,
    kernel_mod_p,
    rank_mod_p,
    rref,
    smith_dense,
    solve_linear,
    unimodular_inverse,
)
from .gring.rings import CoefficientRing

Vector = dict[int, int]


def vadd(ring: CoefficientRing, u: Vector, v: Vector, c: int = 1) -> Vector:
    out = dict(u)
    for k, x in v.items():
        y = ring.reduce(out.get(k, 0) + c * x)
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(ring: CoefficientRing, v: Vector, c: int) -> Vector:
    out = {}
    for k, x in v.items():
        y = ring.reduce(c * x)
        if y:
            out[k] = y
    return out


class GradedRingTable:
    """Graded algebra with a free homogeneous basis and structure constants."""

    def __init__(self, ring, basis, products, unit: int, cap: int | None = None, check: bool = True):
        self.ring = ring
        self.basis = [(str(n), int(d)) for n, d in basis]
        self.names = [n for n, _ in self.basis]
        self.index = {n: i for i, n in enumerate(self.names)}
        if len(self.index) != len(self.basis):
            raise InvalidDGA("duplicate basis names")
        self.cap = cap
        self.products: dict[tuple[int, int], Vector] = {}
        for (i, j), v in products.items():
            v = {k: ring.reduce(c) for k, c in v.items() if ring.reduce(c)}
            if v:
                self.products[(i, j)] = v
        self.unit = unit
        if check:
            self.validate()

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def degrees(self) -> list[int]:
        return sorted({d for _, d in self.basis})

    def in_degree(self, d: int) -> list[int]:
        return [i for i, (_, e) in enumerate(self.basis) if e == d]

    def __len__(self):
        return len(self.basis)

    def mul(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.products.get((i, j))
                if p:
                    out = vadd(self.ring, out, p, a * b)
        return out

    def basis_vector(self, i: int) -> Vector:
        return {i: 1}

    def module(self, d: int):
        n = len(self.in_degree(d))
        if self.ring.is_field:
            return n
        if self.ring.kind == "Z":
            return FgAbelianGroup(n)
        return FgAbelianGroup.from_orders(0, [self.ring.modulus] * n)

    @property
    def connective(self) -> bool:
        return all(d >= 0 for _, d in self.basis)

    def first_nonassociative(self):
        n = len(self.basis)
        for i in range(n):
            for j in range(n):
                ij = self.products.get((i, j))
                for k in range(n):
                    left = self.mul(ij, {k: 1}) if ij else {}
                    jk = self.products.get((j, k))
                    right = self.mul({i: 1}, jk) if jk else {}
                    if left != right:
                        return i, j, k
        return None

    def validate(self):
        if not 0 <= self.unit < len(self.basis):
            raise NonUnital("unit is not a basis element")
        for (i, j), v in self.products.items():
            for k in v:
                if self.degree(k) != self.degree(i) + self.degree(j):
                    raise InvalidDGA(f"product {self.names[i]}*{self.names[j]} has the wrong degree")
        if self.degree(self.unit) != 0:
            raise NonUnital("unit must lie in degree 0")
        for i in range(len(self.basis)):
            if self.mul({self.unit: 1}, {i: 1}) != {i: 1} or self.mul({i: 1}, {self.unit: 1}) != {i: 1}:
                raise NonUnital(f"unit does not act as identity on {self.names[i]}")
        bad = self.first_nonassociative()
        if bad:
            raise NonAssociativeTable("non-associative triple " + ", ".join(self.names[x] for x in bad))

    def format_vector(self, v: Vector) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v):
            c = self.ring.format(v[k])
            term = self.names[k] if c == "1" else ("-" + self.names[k] if c == "-1" else f"{c}*{self.names[k]}")
            parts.append(term)
        text = parts[0]
        for t in parts[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text

    @classmethod
    def from_algebra(cls, alg: GradedAlgebra) -> GradedRingTable:
        mons = alg.all_basis()
        idx = {m: i for i, m in enumerate(mons)}
        basis = [(alg.format_monomial(m), alg.mono_degree(m)) for m in mons]
        products = {}
        for i, a in enumerate(mons):
            for j, b in enumerate(mons):
                if alg.mono_degree(a) + alg.mono_degree(b) > alg.cap:
                    continue
                pr = alg.mul_raw(a, b)
                if pr is None:
                    continue
                s, m = pr
                vec = {}
                for n, c in alg.normal_form(m).items():
                    vec[idx[n]] = alg.ring.reduce(s * c)
                products[(i, j)] = {k: c for k, c in vec.items() if c}
        bounded = all(mx is not None for mx in alg.maxexp)
        top = sum(mx * d for mx, d in zip(alg.maxexp, alg.degrees)) if bounded else None
        cap = None if top is not None and top <= alg.cap else alg.cap
        return cls(alg.ring, basis, products, idx[alg.unit_monomial], cap)


class DGA:
    """Degreewise free DGA with structure constants; checked on construction."""

    def __init__(
        self,
        ring: CoefficientRing,
        basis,
        differential: dict[int, Vector],
        products: dict[tuple[int, int], Vector],
        unit: int,
        cap: int | None = None,
        check: bool = True,
    ):
        self.table = GradedRingTable(ring, basis, products, unit, cap, check=False)
        self.ring = ring
        self.basis = self.table.basis
        self.names = self.table.names
        self.index = self.table.index
        self.unit = unit
        self.cap = cap
        self.products = self.table.products
        self.differential: dict[int, Vector] = {}
        for i, v in differential.items():
            v = {k: ring.reduce(c) for k, c in v.items() if ring.reduce(c)}
            if v:
                self.differential[i] = v
        if check:
            self.validate()

    @property
    def connective(self) -> bool:
        return self.table.connective

    def d(self, v: Vector) -> Vector:
        out: Vector = {}
        for i, c in v.items():
            dv = self.differential.get(i)
            if dv:
                out = vadd(self.ring, out, dv, c)
        return out

    def mul(self, u: Vector, v: Vector) -> Vector:
        return self.table.mul(u, v)

    def validate(self):
        self.table.validate()
        t = self.table
        for i, v in self.differential.items():
            for k in v:
                if t.degree(k) != t.degree(i) - 1:
                    raise InvalidDGA(f"d({self.names[i]}) has the wrong degree")
        for i in range(len(self.basis)):
            if self.d(self.d({i: 1})):
                raise InvalidDGA(f"d^2 != 0 on {self.names[i]}")
        for i in range(len(self.basis)):
            for j in range(len(self.basis)):
                lhs = self.d(self.mul({i: 1}, {j: 1}))
                sign = -1 if t.degree(i) % 2 else 1
                rhs = vadd(self.ring, self.mul(self.d({i: 1}), {j: 1}), self.mul({i: 1}, self.d({j: 1})), sign)
                if lhs != rhs:
                    raise InvalidDGA(f"Leibniz rule fails on ({self.names[i]}, {self.names[j]})")

    def in_degree(self, d: int) -> list[int]:
        return self.table.in_degree(d)

    def degrees(self) -> list[int]:
        return self.table.degrees()

    def matrix(self, n: int) -> list[list[int]]:
        """d_n : C_n -> C_{n-1} as a dense matrix (rows: C_{n-1})."""
        src, dst = self.in_degree(n), self.in_degree(n - 1)
        pos = {k: r for r, k in enumerate(dst)}
        m = [[0] * len(src) for _ in dst]
        for c, i in enumerate(src):
            for k, v in self.differential.get(i, {}).items():
                m[pos[k]][c] = v
        return m


def formal_dga(table: GradedRingTable) -> DGA:
    """The DGA with zero differential whose product table is ``table``."""
    bad = table.first_nonassociative()
    if bad:
        raise NonAssociativeTable("non-associative triple " + ", ".join(table.names[x] for x in bad))
    if not table.connective:
        raise InvalidDGA("formal DGA construction needs a nonnegatively graded table")
    return DGA(table.ring, table.basis, {}, table.products, table.unit, table.cap)


# ---------------------------------------------------------------- homology


@dataclass
class DegreeHomology:
    degree: int
    module: object  # int (field dimension) or FgAbelianGroup
    representatives: list[Vector]
    orders: list[int]  # 0 for free summands (or field), d for Z/d
    _project: object = field(repr=False, default=None)

    def coordinates(self, cycle: Vector) -> list[int]:
        return self._project(cycle)


def _field_homology(X: DGA, n: int) -> DegreeHomology:
    p = X.ring.modulus
    src = X.in_degree(n)
    pos = {k: c for c, k in enumerate(src)}
    k = len(src)
    M = X.matrix(n)
    kernel = kernel_mod_p(M, k, p) if k else []
    image_cols = []
    for j in X.in_degree(n + 1):
        v = [0] * k
        for idx, c in X.differential.get(j, {}).items():
            v[pos[idx]] = c
        image_cols.append(v)
    image_basis, _ = rref(image_cols, p) if image_cols else ([], [])
    seeds = []
    if X.unit in pos:
        u = [0] * k
        u[pos[X.unit]] = 1
        seeds.append(u)
    reps: list[list[int]] = []
    current = list(image_basis)
    r = len(current)
    for cand in seeds + kernel:
        if rank_mod_p(current + [cand], p) > r:
            current.append(cand)
            reps.append(cand)
            r += 1
    system = reps + list(image_basis)
    matrix = [[vec[i] for vec in system] for i in range(k)]

    def project(cycle: Vector) -> list[int]:
        target = [0] * k
        for idx, c in cycle.items():
            target[pos[idx]] = c % p
        if not reps:
            return []
        sol = solve_linear(matrix, target, X.ring, ncols=len(system))
        if sol is None:
            raise RepresentativeFailure(f"vector in degree {n} is not a cycle")
        return list(sol.particular[: len(reps)])

    vecs = [{src[i]: c for i, c in enumerate(v) if c} for v in reps]
    return DegreeHomology(n, len(reps), vecs, [0] * len(reps), project)


def _integer_homology(X: DGA, n: int) -> DegreeHomology:
    src = X.in_degree(n)
    pos = {k: c for c, k in enumerate(src)}
    k = len(src)
    M = X.matrix(n)
    nrows = len(M)
    if k == 0:
        return DegreeHomology(n, FgAbelianGroup(0), [], [], lambda cycle: [])
    D, _, V = smith_dense(M, nrows, k) if nrows else ([], None, [[int(i == j) for j in range(k)] for i in range(k)])
    r = sum(1 for i in range(min(nrows, k)) if D[i][i]) if nrows else 0
    Vinv = unimodular_inverse(V)
    K = [[V[i][j] for j in range(r, k)] for i in range(k)]  # k x kdim
    kdim = k - r

    def kernel_coords(vec: list[int]) -> list[int]:
        full = [sum(Vinv[i][j] * vec[j] for j in range(k)) for i in range(k)]
        if any(full[:r]):
            raise RepresentativeFailure(f"vector in degree {n} is not a cycle")
        return full[r:]

    bounds = []
    for j in X.in_degree(n + 1):
        v = [0] * k
        for idx, c in X.differential.get(j, {}).items():
            v[pos[idx]] = c
        bounds.append(kernel_coords(v))
    C = [[b[i] for b in bounds] for i in range(kdim)]
    if kdim == 0:
        return DegreeHomology(n, FgAbelianGroup(0), [], [], lambda cycle: [])
    if bounds:
        Dc, Uc, _ = smith_dense(C, kdim, len(bounds))
        diag = [Dc[i][i] if i < len(bounds) else 0 for i in range(kdim)]
    else:
        Uc = [[int(i == j) for j in range(kdim)] for i in range(kdim)]
        diag = [0] * kdim
    Uinv = unimodular_inverse(Uc)
    newK = [[sum(K[i][t] * Uinv[t][j] for t in range(kdim)) for j in range(kdim)] for i in range(k)]
    keep = [i for i in range(kdim) if diag[i] != 1]
    orders = [diag[i] for i in keep]
    reps = [[newK[row][i] for row in range(k)] for i in keep]
    transform = [Uc[i] for i in keep]

    if X.unit in pos and orders and all(o == 0 for o in orders):
        # make the unit class the first basis element of H_0
        u = [0] * k
        u[pos[X.unit]] = 1
        uc = [sum(row[j] * x for j, x in enumerate(kernel_coords(u))) for row in transform]
        if any(uc):
            f = len(uc)
            D2, U2, W2 = smith_dense([[x] for x in uc], f, 1)
            if D2[0][0] != 1:
                raise RepresentativeFailure("unit class is not primitive in H_0")
            w = W2[0][0]
            P = unimodular_inverse(U2)
            for row in P:
                row[0] *= w
            Pinv = [list(row) for row in U2]
            Pinv[0] = [w * x for x in Pinv[0]]
            reps = [[sum(reps[t][row] * P[t][j] for t in range(f)) for row in range(k)] for j in range(f)]
            transform = [[sum(Pinv[i][t] * transform[t][j] for t in range(f)) for j in range(kdim)] for i in range(f)]
            reps[0] = u

    def project(cycle: Vector) -> list[int]:
        vec = [0] * k
        for idx, c in cycle.items():
            vec[pos[idx]] = c
        kc = kernel_coords(vec)
        y = [sum(row[j] * kc[j] for j in range(kdim)) for row in transform]
        return [v % o if o else v for v, o in zip(y, orders)]

    vecs = [{src[i]: c for i, c in enumerate(v) if c} for v in reps]
    group = FgAbelianGroup.from_orders(sum(1 for o in orders if o == 0), [o for o in orders if o])
    return DegreeHomology(n, group, vecs, orders, project)


@dataclass
class Homology:
    dga: DGA
    degrees: dict[int, DegreeHomology]

    def module(self, n: int):
        return self.degrees[n].module

    def modules(self) -> dict[int, object]:
        return {n: h.module for n, h in sorted(self.degrees.items())}


def homology(X: DGA) -> Homology:
    """H_n = ker d_n / im d_{n+1} in every degree where X is nonzero, with representatives."""
    if X.ring.is_field:
        compute = _field_homology
    elif X.ring.kind == "Z":
        compute = _integer_homology
    else:
        raise NotSupported(f"homology over {X.ring} is not supported (use F_p or Z)")
    return Homology(X, {n: compute(X, n) for n in X.degrees()})


def _rep_name(X: DGA, v: Vector) -> str:
    if len(v) == 1:
        (i, c), = v.items()
        if c == 1:
            return X.names[i]
    return "[" + X.table.format_vector(v) + "]"


def homology_ring(X: DGA, H: Homology | None = None) -> GradedRingTable:
    """Structure constants of H_*(X) on the chosen representatives."""
    H = H or homology(X)
    torsion = [n for n, h in sorted(H.degrees.items()) if any(h.orders)]
    if torsion:
        raise NotSupported(f"homology ring over Z with torsion is not computed; torsion in degrees {torsion}")
    basis, where = [], {}
    for n, h in sorted(H.degrees.items()):
        for t, rep in enumerate(h.representatives):
            where[(n, t)] = len(basis)
            basis.append((_rep_name(X, rep), n))
    products = {}
    for (n1, t1), i in where.items():
        for (n2, t2), j in where.items():
            h = H.degrees.get(n1 + n2)
            if h is None or not h.representatives:
                continue
            prod = X.mul(H.degrees[n1].representatives[t1], H.degrees[n2].representatives[t2])
            if X.d(prod):
                raise RepresentativeFailure("product of cycles is not a cycle")
            coords = h.coordinates(prod)
            vec = {where[(n1 + n2, t)]: c for t, c in enumerate(coords) if c}
            if vec:
                products[(i, j)] = vec
    unit_class = H.degrees.get(0)
    unit_pos = None
    if unit_class is not None:
        coords = unit_class.coordinates({X.unit: 1})
        nonzero = [t for t, c in enumerate(coords) if c]
        if nonzero == [0] and coords[0] == 1:
            unit_pos = where[(0, 0)]
    if unit_pos is None:
        raise NonUnital("homology has no unit basis element (zero ring?)")
    try:
        return GradedRingTable(X.ring, basis, products, unit_pos, X.cap)
    except (NonAssociativeTable, NonUnital, InvalidDGA) as exc:
        raise RepresentativeFailure(f"homology ring table failed verification: {exc}") from exc


def euler_characteristic(modules: dict[int, object]) -> int:
    total = 0
    for n, m in modules.items():
        rank = m if isinstance(m, int) else m.free_rank
        total += (-1) ** (n % 2) * rank
    return total
