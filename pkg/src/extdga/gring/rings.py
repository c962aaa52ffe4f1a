"""Coefficient rings F_p, Z and Z/m.

Coefficients themselves are plain Python ints kept in canonical form by
:meth:`CoefficientRing.reduce`; the ring object carries the arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from ..errors import InputError, NonFieldCoefficients


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "F", "Z" or "Z/"
    modulus: int = 0

    def __post_init__(self):
        if self.kind == "F" and not is_prime(self.modulus):
            raise InputError(f"F_{self.modulus}: modulus must be prime")
        if self.kind == "Z/" and self.modulus < 2:
            raise InputError("Z/m needs m >= 2")
        if self.kind == "Z" and self.modulus != 0:
            raise InputError("Z has no modulus")
        if self.kind not in ("F", "Z", "Z/"):
            raise InputError(f"unknown ring kind {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind == "F"

    @property
    def characteristic(self) -> int:
        return self.modulus

    @property
    def name(self) -> str:
        if self.kind == "F":
            return f"F{self.modulus}"
        if self.kind == "Z":
            return "Z"
        return f"Z/{self.modulus}"

    def __str__(self):
        return self.name

    def reduce(self, value: int) -> int:
        if self.modulus:
            return value % self.modulus
        return value

    def is_unit(self, value: int) -> bool:
        value = self.reduce(value)
        if self.kind == "Z":
            return value in (1, -1)
        return value != 0 and gcd(value, self.modulus) == 1

    def inverse(self, value: int) -> int:
        if not self.is_unit(value):
            raise ZeroDivisionError(f"{value} is not a unit in {self.name}")
        if self.kind == "Z":
            return value
        return pow(value, -1, self.modulus)

    def units(self) -> list[int]:
        if self.kind == "Z":
            return [1, -1]
        return [u for u in range(1, self.modulus) if gcd(u, self.modulus) == 1]

    def elements(self) -> list[int]:
        if not self.modulus:
            raise NonFieldCoefficients("Z is infinite")
        return list(range(self.modulus))

    def require_field(self):
        if not self.is_field:
            raise NonFieldCoefficients(f"{self.name} is not a field")

    def format(self, value: int) -> str:
        # symmetric representative reads better for signs (p - 1 -> -1)
        if self.modulus and self.modulus > 2 and value > self.modulus // 2:
            return str(value - self.modulus)
        return str(value)


def Fp(p: int) -> CoefficientRing:
    return CoefficientRing("F", p)


ZZ = CoefficientRing("Z")


def IntegersMod(m: int) -> CoefficientRing:
    return CoefficientRing("Z/", m)


_RING_RE = re.compile(r"^(?:F(\d+)|F_(\d+)|Z/(\d+)|Z)$")


def parse_ring(text: str) -> CoefficientRing:
    m = _RING_RE.match(text.strip())
    if not m:
        raise InputError(f"unknown coefficient ring {text!r}")
    if m.group(1) or m.group(2):
        return Fp(int(m.group(1) or m.group(2)))
    if m.group(3):
        return IntegersMod(int(m.group(3)))
    return ZZ
