from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from extdga import formats
from extdga.basis import search_monoid_basis
from extdga.dga import GradedRingTable
from extdga.errors import CapTooSmall, InputError, NotCertified, NotSupported, RingMismatch
from extdga.gring import ZZ, FgAbelianGroup, Fp, IntegersMod, parse_group
from extdga.hochschild import hh, hh_over_Z
from extdga.thh import AMBIGUOUS, SPLIT, THHTable, load_thh_table, shipped_table, thh_groups
from conftest import FIXTURES


def table(name):
    return formats.to_table(formats.parse((FIXTURES / name).read_text()))


def ground(ring):
    return GradedRingTable(ring, [("1", 0)], {(0, 0): {0: 1}}, 0)


def convolve(a, b, n):
    return sum(a.get(i, 0) * b.get(n - i, 0) for i in range(n + 1))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_ground_field_gives_table(p):
    T = shipped_table(f"thh_F{p}")
    assert T.provenance == "external-literature"
    R = thh_groups(ground(Fp(p)), T, 10, assume_extension=True)
    assert R.degrees == {n: T.dim(n) for n in range(11)}


def test_unit_table_gives_hh():
    T = load_thh_table("kind thh-table\nring F2\ncap 6\nprovenance user\ndim 0 = 1\n")
    A = table("trunc4_F2.txt")
    R = thh_groups(A, T, 6, certificate=search_monoid_basis(A))
    assert R.degrees == hh(A, 6).values


def test_user_table_convolution():
    T = THHTable.from_document(formats.parse((FIXTURES / "thh_user_F2.thh").read_text()))
    A = table("dual_odd_F2.txt")
    R = thh_groups(A, T, 4, certificate=search_monoid_basis(A))
    H = hh(A, 4).values
    assert R.degrees == {n: convolve(T.values, H, n) for n in range(5)}
    assert R.degrees == {0: 1, 1: 1, 2: 2, 3: 2, 4: 2}


def test_hz_with_integers():
    T = shipped_table("thh_Z")
    R = thh_groups(ground(ZZ), T, 12, assume_extension=True)
    for n in range(13):
        assert R[n].graded == T.group(n)
        assert R[n].flag == SPLIT
    assert T.group(7) == parse_group("Z/4")


def test_integral_kunneth_tor_part():
    T = shipped_table("thh_Z")
    A = table("dual_Z.txt")
    R = thh_groups(A, T, 5, assume_extension=True)
    H = hh_over_Z(A, 5).values
    for n in range(6):
        tens = FgAbelianGroup.from_orders(0)
        for i in range(n + 1):
            tens = tens + T.group(i).tensor(H[n - i])
        assert R[n].tensor == tens


def test_extension_ambiguity_flag():
    # HH of Z[x]/(x^2), |x| = 2, has Z/2 in degree 5; with Z/2 in degrees 1 and 2 of the
    # table, degree 7 gets Z/2 from both the tensor part and the Tor part
    A = table("dual_Z.txt")
    short = load_thh_table("kind thh-table\nring Z\ncap 3\nprovenance user\ngroup 0 = Z\n")
    with pytest.raises(CapTooSmall):
        thh_groups(A, short, 6, assume_extension=True)
    T = load_thh_table(
        "kind thh-table\nring Z\ncap 7\nprovenance user\ngroup 0 = Z\ngroup 1 = Z/2\ngroup 2 = Z/2\n"
    )
    R = thh_groups(A, T, 7, assume_extension=True)
    assert R[7].tor == parse_group("Z/2") and R[7].tensor == parse_group("Z/2")
    assert R[7].flag == AMBIGUOUS
    assert str(R[7]) == "extension of Z/2 by Z/2"
    assert R[7].graded == parse_group("Z/2 + Z/2")


def test_preconditions():
    A = table("dual_odd_F2.txt")
    with pytest.raises(NotCertified):
        thh_groups(A, shipped_table("thh_F2"), 4)
    with pytest.raises(RingMismatch):
        thh_groups(A, shipped_table("thh_F3"), 4, assume_extension=True)
    with pytest.raises(NotSupported):
        thh_groups(ground(IntegersMod(4)), shipped_table("thh_Z"), 2, assume_extension=True)


def test_table_validation():
    with pytest.raises(InputError):
        load_thh_table("kind thh-table\nring Z\ncap 3\ngroup 0 = Z\n")  # no provenance
    with pytest.raises(InputError):
        load_thh_table("kind thh-table\nring Z\ncap 3\nprovenance user\ngroup 0 = Z/2\n")
    with pytest.raises(InputError):
        shipped_table("thh_Q")


def test_shipped_tables_round_trip():
    for name in ("thh_Z", "thh_F2", "thh_F3", "thh_F5", "thh_F7"):
        T = shipped_table(name)
        assert formats.parse(formats.render(T.to_document())) == T.to_document()


@given(st.lists(st.integers(0, 2), min_size=6, max_size=6), st.sampled_from(["trunc4_F2.txt", "dual_odd_F2.txt"]))
def test_field_convolution_identity(dims, name):
    dims[0] = 1
    body = "".join(f"dim {d} = {v}\n" for d, v in enumerate(dims))
    T = load_thh_table("kind thh-table\nring F2\ncap 5\nprovenance user\n" + body)
    A = table(name)
    H = hh(A, 5).values
    R = thh_groups(A, T, 5, assume_extension=True)
    assert R.degrees == {n: convolve(T.values, H, n) for n in range(6)}


@given(st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_free_table_splits(ranks):
    ranks[0] = 1
    body = "".join(f"group {d} = Z^{r}\n" if r else f"group {d} = 0\n" for d, r in enumerate(ranks))
    T = load_thh_table("kind thh-table\nring Z\ncap 4\nprovenance user\n" + body)
    R = thh_groups(table("dual_Z.txt"), T, 4, assume_extension=True)
    assert all(R[n].tor.is_zero and R[n].flag == SPLIT for n in range(5))


@given(st.integers(1, 5))
def test_monotone_in_cap(cap):
    T = shipped_table("thh_Z")
    A = table("dual_Z.txt")
    small = thh_groups(A, T, cap, assume_extension=True)
    big = thh_groups(A, T, 5, assume_extension=True)
    assert all(big[n] == small[n] for n in range(cap + 1))
