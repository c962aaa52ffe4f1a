"""THH groups of an R-algebra from tabulated THH(R) and HH^R, via Künneth.

For an R-algebra X that extends to a ring-spectrum map, THH(X) is
THH(R) ∧_R HH^R(X).  Over a field the homotopy is the graded tensor
product.  Over Z there is a short exact sequence with a tensor part and a
Tor part shifted up by one; when both are nonzero in a degree the group
is reported as the pair with the flag ``extension-ambiguous``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from . import formats
from .basis import MonoidBasis
from .errors import CapTooSmall, InputError, NotCertified, NotSupported, RingMismatch
from .gring.abelian import FgAbelianGroup, tor_fg
from .gring.rings import CoefficientRing
from .hochschild import EXACT, TRUNCATED, GradedModuleResult, _as_dga, hh_dga, hh_over_Z

__all__ = [
    "THHTable",
    "KunnethDegree",
    "KunnethResult",
    "load_thh_table",
    "shipped_table",
    "thh_groups",
    "tor_fg",
]

SPLIT = "split-determined"
AMBIGUOUS = "extension-ambiguous"


@dataclass
class THHTable:
    ring: CoefficientRing
    values: dict[int, object]  # dim (field) or FgAbelianGroup (Z)
    cap: int
    provenance: str
    notes: list[str] = field(default_factory=list)

    def group(self, n: int) -> FgAbelianGroup:
        """Degree-n entry as a group; unlisted degrees are zero."""
        v = self.values.get(n)
        if v is None:
            return FgAbelianGroup.from_orders(0)
        if isinstance(v, FgAbelianGroup):
            return v
        if self.ring.kind == "Z":
            raise InputError(f"THH table over Z lists a dimension in degree {n}")
        return FgAbelianGroup.from_orders(0, [self.ring.modulus] * v)

    def dim(self, n: int) -> int:
        v = self.values.get(n, 0)
        if isinstance(v, FgAbelianGroup):
            if self.ring.kind != "Z" and not v.free_rank:
                return len(v.torsion)
            raise InputError(f"THH table entry in degree {n} is a group, not a dimension")
        return v

    @classmethod
    def from_document(cls, doc: formats.Document) -> THHTable:
        if doc.kind != "thh-table":
            raise InputError(f"expected a thh-table document, got {doc.kind}")
        if doc.ring.kind == "Z" and doc.dims:
            raise InputError("THH tables over Z list groups, not dimensions")
        values: dict[int, object] = dict(doc.dims)
        values.update(doc.groups)
        if any(d < 0 or d > doc.cap for d in values):
            raise InputError("THH table lists a degree outside 0..cap")
        zero = values.get(0)
        unit_line = FgAbelianGroup.from_orders(1, []) if doc.ring.kind == "Z" else 1
        if zero != unit_line and not (doc.ring.kind != "Z" and zero == FgAbelianGroup.from_orders(0, [doc.ring.modulus])):
            raise InputError(f"THH table must have {doc.ring} in degree 0")
        return cls(doc.ring, values, doc.cap, doc.provenance, list(doc.notes))

    def to_document(self) -> formats.Document:
        doc = formats.Document("thh-table", self.ring, self.cap, provenance=self.provenance, notes=list(self.notes))
        for d, v in sorted(self.values.items()):
            if isinstance(v, FgAbelianGroup):
                doc.groups[d] = v
            else:
                doc.dims[d] = v
        return doc


def load_thh_table(text: str) -> THHTable:
    return THHTable.from_document(formats.parse(text))


def shipped_table(name: str) -> THHTable:
    """One of the tables under extdga/data, e.g. ``"thh_Z"`` or ``"thh_F2"``."""
    res = resources.files("extdga") / "data" / f"{name}.thh"
    if not res.is_file():
        raise InputError(f"no shipped THH table named {name!r}")
    return load_thh_table(res.read_text())


@dataclass
class KunnethDegree:
    tensor: FgAbelianGroup
    tor: FgAbelianGroup
    flag: str

    @property
    def graded(self) -> FgAbelianGroup:
        """Associated graded of the Künneth filtration (the group itself when split)."""
        return self.tensor + self.tor

    def __str__(self):
        if self.flag == SPLIT:
            return str(self.graded)
        return f"extension of {self.tor} by {self.tensor}"


@dataclass
class KunnethResult:
    ring: CoefficientRing
    degrees: dict[int, KunnethDegree | int]
    degree_cap: int
    exactness: str
    hh: GradedModuleResult

    def __getitem__(self, n):
        return self.degrees[n]

    def lines(self) -> list[str]:
        out = [f"THH over {self.ring} through degree {self.degree_cap} ({self.exactness})"]
        for n, v in sorted(self.degrees.items()):
            if isinstance(v, int):
                out.append(f"  THH_{n} = {self.ring}^{v}" if v != 1 else f"  THH_{n} = {self.ring}")
            else:
                out.append(f"  THH_{n} = {v}  [{v.flag}]")
        return out

    def to_json(self):
        deg = {}
        for n, v in sorted(self.degrees.items()):
            if isinstance(v, int):
                deg[str(n)] = {"dim": v}
            else:
                deg[str(n)] = {"tensor": v.tensor.to_json(), "tor": v.tor.to_json(), "flag": v.flag}
        return {"ring": str(self.ring), "degree_cap": self.degree_cap, "exactness": self.exactness, "degrees": deg}


def _zero():
    return FgAbelianGroup.from_orders(0, [])


def thh_groups(
    X,
    T: THHTable,
    degree_cap: int,
    certificate: MonoidBasis | None = None,
    assume_extension: bool = False,
    threads: int = 1,
) -> KunnethResult:
    """THH_n(X) for n <= degree_cap, assuming X extends to an R-algebra spectrum.

    ``certificate`` is a MonoidBasis of X's underlying table (or of its
    homology ring); without one the caller must pass assume_extension=True.
    """
    D = _as_dga(X)
    ring = D.table.ring
    if ring.kind == "Z/":
        raise NotSupported("THH over Z/m is not supported")
    if T.ring != ring:
        raise RingMismatch(f"THH table is over {T.ring} but the algebra is over {ring}")
    if certificate is None and not assume_extension:
        raise NotCertified("no extension certificate; pass a monoid basis or assume_extension=True")
    if certificate is not None and certificate.table.ring != ring:
        raise RingMismatch("certificate is over a different ring")
    if T.cap < degree_cap:
        raise CapTooSmall(f"THH table listed through degree {T.cap}; need {degree_cap}")

    if ring.is_field:
        H = hh_dga(D, degree_cap, threads=threads)
        degrees = {
            n: sum(T.dim(i) * H.values.get(n - i, 0) for i in range(n + 1)) for n in range(degree_cap + 1)
        }
        return KunnethResult(ring, degrees, degree_cap, H.exactness, H)

    H = hh_over_Z(D, degree_cap, threads=threads)
    one_side_free = all(T.group(i).is_free for i in range(degree_cap + 1)) or all(
        H.values[j].is_free for j in range(degree_cap + 1)
    )
    degrees = {}
    for n in range(degree_cap + 1):
        tens, tor = _zero(), _zero()
        for i in range(n + 1):
            tens = tens + T.group(i).tensor(H.values[n - i])
        for i in range(n):
            tor = tor + tor_fg(T.group(i), H.values[n - 1 - i])
        # no extension problem when one side is free or either end of the sequence vanishes
        flag = SPLIT if one_side_free or tens.is_zero or tor.is_zero else AMBIGUOUS
        degrees[n] = KunnethDegree(tens, tor, flag)
    return KunnethResult(ring, degrees, degree_cap, H.exactness, H)


__all__ += ["EXACT", "TRUNCATED", "SPLIT", "AMBIGUOUS"]
