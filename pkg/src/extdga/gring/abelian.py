"""Finitely generated abelian groups in invariant-factor form."""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from ..errors import InputError


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, d**e))
        d += 1
    if n > 1:
        out.append((n, n))
    return out


def invariant_factors(orders) -> tuple[int, ...]:
    """Normalize a list of cyclic orders (>= 1) into a chain d_1 | d_2 | ..."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, q in _prime_powers(n):
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for k, q in enumerate(powers):
            factors[length - 1 - k] *= q
    return tuple(factors)


@dataclass(frozen=True)
class FgAbelianGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_orders(cls, free_rank: int = 0, orders=()) -> FgAbelianGroup:
        return cls(free_rank, invariant_factors([n for n in orders if n != 1]))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def __add__(self, other: FgAbelianGroup) -> FgAbelianGroup:
        return FgAbelianGroup.from_orders(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def tensor(self, other: FgAbelianGroup) -> FgAbelianGroup:
        free = self.free_rank * other.free_rank
        orders = list(self.torsion) * other.free_rank + list(other.torsion) * self.free_rank
        orders += [gcd(a, b) for a in self.torsion for b in other.torsion]
        return FgAbelianGroup.from_orders(free, orders)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


_TERM = re.compile(r"^(?:Z(?:\^(\d+))?|Z/(\d+)|0)$")


def parse_group(text: str) -> FgAbelianGroup:
    free, orders = 0, []
    for raw in text.split("+"):
        term = raw.strip()
        m = _TERM.match(term)
        if not m:
            raise InputError(f"bad group term {term!r}")
        if term == "0":
            continue
        if m.group(2):
            orders.append(int(m.group(2)))
        else:
            free += int(m.group(1) or 1)
    return FgAbelianGroup.from_orders(free, orders)


def tor_fg(a: FgAbelianGroup, b: FgAbelianGroup) -> FgAbelianGroup:
    """Tor_1^Z(a, b): free summands drop out, Tor(Z/m, Z/n) = Z/gcd(m, n)."""
    return FgAbelianGroup.from_orders(0, [gcd(x, y) for x in a.torsion for y in b.torsion])
