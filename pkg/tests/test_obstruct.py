from __future__ import annotations

import pytest

from extdga import formats
from extdga.dga import DGA, GradedRingTable
from extdga.errors import CapTooSmall, InputError
from extdga.gring import Fp, tensor
from extdga.obstruct import (
    INCOMPLETE,
    SOLVABLE,
    UNSOLVABLE,
    bockstein_q1_obstruction,
    extension_status,
    forced_unit_map,
    square_obstruction_p2,
)
from extdga.steenrod import dual_steenrod
from conftest import FIXTURES


def load(name, cap=None):
    doc = formats.parse((FIXTURES / name).read_text())
    return formats.to_algebra(doc, cap), formats.target_relations(doc)


def ground(p):
    return GradedRingTable(Fp(p), [("1", 0)], {(0, 0): {0: 1}}, 0)


@pytest.mark.parametrize("name", [None, "poly_y_F2.txt", "trunc4_F2.txt"])
def test_square_obstruction_unsolvable(name):
    B = ground(2) if name is None else load(name)[0]
    v = square_obstruction_p2(B, 2)
    assert v.status == UNSOLVABLE
    assert v.witness is None
    assert all(c.refuted for c in v.checks) and len(v.checks) == v.count
    assert v.replay()
    assert any("z^2 != xi1^2 ⊗ 1" in s for s in v.symbolic)


def test_square_control_has_witness():
    v = square_obstruction_p2(ground(2), 2, left="steenrod")
    assert v.status == SOLVABLE
    assert v.witness == "xi1 ⊗ 1"
    assert v.replay()


def test_square_search_limit():
    B, _ = load("trunc4_F2.txt")
    assert square_obstruction_p2(B, 2, limit=1).status == INCOMPLETE


def test_square_rejects_bad_input():
    with pytest.raises(CapTooSmall):
        square_obstruction_p2(ground(2), 1)
    with pytest.raises(InputError):
        square_obstruction_p2(ground(3), 2)


def test_bockstein_obstruction_p3():
    B, _ = load("ext_F3_xy.txt")
    v = bockstein_q1_obstruction(3, B, 4)
    assert v.status == UNSOLVABLE
    assert v.replay()
    assert v.symbolic[-1].startswith("for every a of positive degree")
    assert not any("fails" in s for s in v.symbolic)


def test_bockstein_control_has_witness():
    v = bockstein_q1_obstruction(3, ground(3), 4, left="steenrod")
    assert v.status == SOLVABLE
    assert v.witness == "tau0 ⊗ 1"


def test_bockstein_rejects_bad_input():
    with pytest.raises(InputError):
        bockstein_q1_obstruction(2, ground(2), 4)
    with pytest.raises(CapTooSmall):
        bockstein_q1_obstruction(3, ground(3), 3)


def test_fourth_power_in_truncated_case():
    A = dual_steenrod(2, "xi", 4).algebra
    H, _ = load("trunc4_F2.txt", cap=4)
    T = tensor(A, H)
    z = T.pure_tensor(A.one(), H.gen("x")) + T.pure_tensor(A.gen("xi1"), H.one())
    assert z**4 == T.pure_tensor(A.gen("xi1") ** 4, H.one())
    assert z**4


@pytest.mark.parametrize("c", [1, 2])
def test_square_in_exterior_case(c):
    A = dual_steenrod(3, "xi", 8).algebra
    H, _ = load("ext_F3_xy.txt")
    T = tensor(A, H)
    z = T.pure_tensor(A.gen("xi1"), H.one()) * c + T.pure_tensor(A.one(), H.gen("y"))
    assert z**2
    # c^2 xi1^2 ⊗ 1 + 2c xi1 ⊗ y
    expected = T.pure_tensor(A.gen("xi1") ** 2, H.one()) * (c * c) + T.pure_tensor(A.gen("xi1"), H.gen("y")) * (2 * c)
    assert z**2 == expected


@pytest.mark.parametrize("name,gen,count", [("trunc4_F2.txt", "x", 2), ("ext_F3_xy.txt", "y", 3)])
def test_forced_unit_map_single_survivor(name, gen, count):
    H, rels = load(name)
    r = forced_unit_map(H, rels, H.ring.modulus, 8)
    assert r.generators == [gen]
    assert len(r.candidates) == count
    assert [str(s) for s in r.survivors] == [f"{gen} -> 1 ⊗ {gen}"]
    assert sum(1 for w in r.refutations if w) == count - 1


def test_forced_unit_map_needs_cap():
    H, rels = load("trunc4_F2.txt")
    with pytest.raises(CapTooSmall):
        forced_unit_map(H, rels, 2, 3)


def test_extension_status_verdicts():
    doc = formats.parse((FIXTURES / "trunc4_F2.txt").read_text())
    X = formats.to_dga(doc)
    rep = extension_status(X, 4, formal=True)
    by_ring = {e.ground_ring: e for e in rep.entries}
    assert by_ring["F2"].status == "CertifiedExtension"
    assert by_ring["Z"].status == "CertifiedNonExtension"

    unasserted = extension_status(X, 4)
    assert unasserted.entries[0].status == "Unknown"


def test_extension_status_odd_needs_e_infinity():
    X = formats.to_dga(formats.parse((FIXTURES / "ext_F3_xy.txt").read_text()))
    plain = {e.ground_ring: e.status for e in extension_status(X, 4).entries}
    assert plain["Z"] == "Unknown"
    strong = {e.ground_ring: e.status for e in extension_status(X, 4, e_infty=True).entries}
    assert strong["Z"].startswith("CertifiedNonExtension")


def test_extension_status_on_nonformal_dga():
    X = formats.to_dga(formats.parse((FIXTURES / "asq_F2.dga").read_text()))
    assert isinstance(X, DGA)
    rep = extension_status(X, 2)
    assert {e.status for e in rep.entries} <= {"Unknown", "CertifiedNonExtension"}
