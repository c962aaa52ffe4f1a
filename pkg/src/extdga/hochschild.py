"""Hochschild homology of graded algebras and DGAs via the normalized complex.

Chains of bar length n are a0 ⊗ ā1 ⊗ ... ⊗ ān with ā_i running over the
non-unit basis elements (the basis of A / k·1).  Total degree is
n + Σ|a_i|.  The total differential is D = b + (-1)^n δ where b is the
Hochschild boundary with Koszul sign on the cyclic face and δ applies
the internal differential with the usual Koszul signs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .dga import DGA, GradedRingTable, formal_dga
from .errors import CapTooSmall, InvalidDGA, NonFreePieces, NonFieldCoefficients, NotSupported
from .gring.abelian import FgAbelianGroup
from .gring.algebra import GradedAlgebra
from .gring.linalg import rank_mod_p, smith_dense

EXACT = "exact"
TRUNCATED = "truncation-limited"

Chain = tuple[int, ...]


@dataclass
class GradedModuleResult:
    values: dict[int, object]  # int dimension or FgAbelianGroup
    exactness: str
    degree_cap: int
    length_cap: int
    ring: object = field(default=None, repr=False)

    def __getitem__(self, d: int):
        return self.values[d]

    def dimensions(self) -> dict[int, int]:
        return {d: v for d, v in self.values.items()}

    def to_json(self):
        vals = {}
        for d, v in sorted(self.values.items()):
            vals[str(d)] = v.to_json() if isinstance(v, FgAbelianGroup) else v
        return {
            "ring": str(self.ring),
            "values": vals,
            "exactness": self.exactness,
            "degree_cap": self.degree_cap,
            "length_cap": self.length_cap,
        }


def _as_dga(source) -> DGA:
    if isinstance(source, DGA):
        return source
    if isinstance(source, GradedAlgebra):
        source = GradedRingTable.from_algebra(source)
    if isinstance(source, GradedRingTable):
        return formal_dga(source)
    raise TypeError(f"cannot take Hochschild homology of {type(source).__name__}")


def is_connected(table: GradedRingTable) -> bool:
    """A_0 is the unit line and everything else sits in positive degree."""
    return table.degree(table.unit) == 0 and all(
        d > 0 for i, (_, d) in enumerate(table.basis) if i != table.unit
    )


class HochschildComplex:
    """The normalized Hochschild total complex of a DGA, in total degrees <= degree_cap + 1."""

    def __init__(self, source, degree_cap: int, length_cap: int | None = None):
        X = _as_dga(source)
        T = X.table
        if not X.connective:
            raise NotSupported("Hochschild complex needs a connective (nonnegatively graded) input")
        if degree_cap < 0:
            raise CapTooSmall("degree cap must be >= 0")
        differential = any(X.differential.get(i) for i in range(len(T)))
        needed = degree_cap + (1 if differential else 0)
        if T.cap is not None and T.cap < needed:
            raise CapTooSmall(f"table is only known through degree {T.cap}; need {needed}")
        self.dga = X
        self.table = T
        self.ring = T.ring
        self.degree_cap = degree_cap
        self.connected = is_connected(T)
        if length_cap is None:
            length_cap = degree_cap + 1 if self.connected else degree_cap + 2
        self.length_cap = length_cap
        self.exactness = EXACT if self.connected and length_cap >= degree_cap + 1 else TRUNCATED
        self.bar = [i for i in range(len(T)) if i != T.unit]
        self.chains: dict[int, list[Chain]] = {t: [] for t in range(degree_cap + 2)}
        self._enumerate()
        self.index = {t: {c: k for k, c in enumerate(cs)} for t, cs in self.chains.items()}

    def _enumerate(self):
        T, top = self.table, self.degree_cap + 1
        deg = T.degree

        def rec(prefix: Chain, total: int):
            self.chains[total].append(prefix)
            if len(prefix) - 1 >= self.length_cap:
                return
            for i in self.bar:
                t = total + 1 + deg(i)
                if t <= top:
                    rec(prefix + (i,), t)

        for a0 in range(len(T)):
            if deg(a0) <= top:
                rec((a0,), deg(a0))
        for cs in self.chains.values():
            cs.sort(key=lambda c: (len(c), c))

    def total_degree(self, c: Chain) -> int:
        return len(c) - 1 + sum(self.table.degree(i) for i in c)

    # -- differentials -------------------------------------------------

    def _bar_project(self, v: dict[int, int]) -> dict[int, int]:
        return {k: c for k, c in v.items() if k != self.table.unit}

    def b(self, c: Chain) -> dict[Chain, int]:
        T, ring = self.table, self.ring
        n = len(c) - 1
        out: dict[Chain, int] = {}

        def add(chain, coef):
            out[chain] = ring.reduce(out.get(chain, 0) + coef)

        for i in range(n):
            prod = T.products.get((c[i], c[i + 1]), {})
            if i > 0:
                prod = self._bar_project(prod)
            for k, v in prod.items():
                add(c[:i] + (k,) + c[i + 2 :], (-1) ** i * v)
        if n >= 1:
            an = c[n]
            before = sum(T.degree(i) for i in c[:n])
            sign = (-1) ** (n + T.degree(an) * before)
            for k, v in T.products.get((an, c[0]), {}).items():
                add((k,) + c[1:n], sign * v)
        return {k: v for k, v in out.items() if v}

    def delta(self, c: Chain) -> dict[Chain, int]:
        T, ring, d = self.table, self.ring, self.dga.differential
        out: dict[Chain, int] = {}
        before = 0
        for k, a in enumerate(c):
            image = d.get(a, {})
            if k > 0:
                image = self._bar_project(image)
            for j, v in image.items():
                chain = c[:k] + (j,) + c[k + 1 :]
                out[chain] = ring.reduce(out.get(chain, 0) + (-1) ** before * v)
            before += T.degree(a)
        return {k: v for k, v in out.items() if v}

    def D(self, c: Chain) -> dict[Chain, int]:
        out = dict(self.b(c))
        n = len(c) - 1
        for k, v in self.delta(c).items():
            out[k] = self.ring.reduce(out.get(k, 0) + (-1) ** n * v)
        return {k: v for k, v in out.items() if v}

    def matrix(self, t: int, which: str = "D") -> list[list[int]]:
        """Matrix of the differential C_t -> C_{t-1}, rows indexed by C_{t-1}."""
        op = {"D": self.D, "b": self.b, "delta": self.delta}[which]
        rows = self.chains.get(t - 1, [])
        cols = self.chains.get(t, [])
        m = [[0] * len(cols) for _ in rows]
        idx = self.index.get(t - 1, {})
        for j, c in enumerate(cols):
            if len(c) - 1 > self.length_cap:
                continue
            for chain, v in op(c).items():
                if chain in idx:
                    m[idx[chain]][j] = v
                elif len(chain) - 1 <= self.length_cap:
                    raise InvalidDGA(f"boundary left the enumerated chains: {chain}")
        return m

    def check_squares(self):
        """Verify b∘b = 0 and D∘D = 0 on every stored chain."""
        for which in ("b", "D"):
            op = {"D": self.D, "b": self.b}[which]
            for t in range(2, self.degree_cap + 2):
                for c in self.chains[t]:
                    acc: dict[Chain, int] = {}
                    for c1, v1 in op(c).items():
                        for c2, v2 in op(c1).items():
                            acc[c2] = self.ring.reduce(acc.get(c2, 0) + v1 * v2)
                    if any(acc.values()):
                        raise InvalidDGA(f"{which}^2 != 0 on chain {c}")
        return True


def _run(fn, items, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def hh(A, degree_cap: int, length_cap: int | None = None, threads: int = 1) -> GradedModuleResult:
    """HH over a field of a graded algebra or ring table through total degree ``degree_cap``."""
    X = _as_dga(A)
    return hh_dga(X, degree_cap, length_cap, threads)


def hh_dga(X: DGA, degree_cap: int, length_cap: int | None = None, threads: int = 1) -> GradedModuleResult:
    if not X.table.ring.is_field:
        raise NonFieldCoefficients(f"hh over a field; got {X.table.ring} (use hh_over_Z for Z)")
    C = HochschildComplex(X, degree_cap, length_cap)
    C.check_squares()
    p = C.ring.modulus
    ranks = dict(
        zip(
            range(1, degree_cap + 2),
            _run(lambda t: rank_mod_p(C.matrix(t), p) if C.chains[t] and C.chains[t - 1] else 0,
                 range(1, degree_cap + 2), threads),
        )
    )
    ranks[0] = 0
    values = {t: len(C.chains[t]) - ranks[t] - ranks[t + 1] for t in range(degree_cap + 1)}
    return GradedModuleResult(values, C.exactness, degree_cap, C.length_cap, C.ring)


def hh_over_Z(A, degree_cap: int, length_cap: int | None = None, threads: int = 1) -> GradedModuleResult:
    """Integral HH of a ring with free graded pieces, via Smith normal form."""
    X = _as_dga(A)
    ring = X.table.ring
    if ring.kind != "Z":
        raise NonFreePieces(f"hh_over_Z needs free Z-modules in each degree; coefficients are {ring}")
    C = HochschildComplex(X, degree_cap, length_cap)
    C.check_squares()

    def invariants(t):
        rows, cols = len(C.chains[t - 1]), len(C.chains[t])
        if not rows or not cols:
            return []
        D, _, _ = smith_dense(C.matrix(t), rows, cols)
        return [D[i][i] for i in range(min(rows, cols)) if D[i][i]]

    inv = dict(zip(range(1, degree_cap + 2), _run(invariants, range(1, degree_cap + 2), threads)))
    inv[0] = []
    values = {}
    for t in range(degree_cap + 1):
        free = len(C.chains[t]) - len(inv[t]) - len(inv[t + 1])
        values[t] = FgAbelianGroup.from_orders(free, [d for d in inv[t + 1] if d != 1])
    return GradedModuleResult(values, C.exactness, degree_cap, C.length_cap, ring)
