from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from extdga import formats
from extdga.dga import GradedRingTable
from extdga.errors import CapTooSmall, NonFieldCoefficients, NonFreePieces
from extdga.gring import AlgebraPresentation, FgAbelianGroup, Fp, GeneratorSpec, GradedAlgebra, IntegersMod
from extdga.hochschild import EXACT, TRUNCATED, HochschildComplex, hh, hh_dga, hh_over_Z
from conftest import FIXTURES
from oracles import hh_oracle

ORACLE = json.loads((FIXTURES / "hh_oracle.json").read_text())


def compute(name, cap, threads=1):
    X = formats.to_dga(formats.parse((FIXTURES / name).read_text()))
    if X.ring.kind == "Z":
        return hh_over_Z(X, cap, threads=threads)
    return hh_dga(X, cap, threads=threads)


def as_plain(values):
    out = {}
    for k, v in values.items():
        out[str(k)] = {"free_rank": v.free_rank, "torsion": list(v.torsion)} if isinstance(v, FgAbelianGroup) else v
    return out


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_matches_oracle(name):
    entry = ORACLE[name]
    assert as_plain(compute(name, entry["cap"]).values) == entry["values"]


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_hand_tables_match_parsed_fixtures(name):
    """The oracle's hand-typed structure constants describe the same algebra as the fixture."""
    entry = ORACLE[name]
    X = formats.to_dga(formats.parse((FIXTURES / name).read_text()))
    names = [n for n, _ in entry["basis"]]
    assert [(n, d) for n, d in entry["basis"]] == [(n, d) for n, d in X.basis[: len(names)]]
    cap = entry["cap"]
    theirs = {(i, j): dict(v) for i, j, v in entry["products"]}
    for (i, j), v in X.products.items():
        if i < len(names) and j < len(names):
            assert theirs.get((i, j), {}) == {k: c % entry["modulus"] if entry["modulus"] else c for k, c in v.items()}
    for (i, j), v in theirs.items():
        if X.table.degree(i) + X.table.degree(j) <= cap:
            assert X.products.get((i, j), {}) == {k: c % entry["modulus"] if entry["modulus"] else c for k, c in v.items()}
    assert {i: dict(v) for i, v in entry["differential"]} == X.differential


def test_exactness_flags():
    T = formats.to_table(formats.parse((FIXTURES / "dual_odd_F2.txt").read_text()))
    assert hh(T, 4).exactness == EXACT
    assert hh(T, 4, length_cap=2).exactness == TRUNCATED
    # degree-0 pieces besides the unit make the input non-connected
    basis = [("1", 0), ("e", 0)]
    prods = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}}
    R = hh(GradedRingTable(Fp(2), basis, prods, 0), 2)
    assert R.exactness == TRUNCATED
    assert R.values[0] == 2


def test_cap_too_small():
    A = GradedAlgebra.from_presentation(AlgebraPresentation(Fp(2), (GeneratorSpec("x", 1),)), 3)
    with pytest.raises(CapTooSmall):
        hh(GradedRingTable.from_algebra(A), 5)


def test_coefficient_errors():
    T = formats.to_table(formats.parse((FIXTURES / "dual_Z.txt").read_text()))
    with pytest.raises(NonFieldCoefficients):
        hh(T, 3)
    A = GradedAlgebra.from_presentation(AlgebraPresentation(IntegersMod(4), (GeneratorSpec("x", 2, "trunc", 2),)), 4)
    with pytest.raises(NonFreePieces):
        hh_over_Z(A, 3)


def test_threads_do_not_change_results():
    for name in ("trunc4_F2.txt", "dual_Z.txt", "asq_F2.dga"):
        assert compute(name, 5).values == compute(name, 5, threads=4).values


def test_monotone_in_cap():
    small, big = compute("trunc4_F2.txt", 4), compute("trunc4_F2.txt", 6)
    assert all(big.values[d] == v for d, v in small.values.items())


# ---------------------------------------------------------------- properties

gens = st.lists(
    st.tuples(st.integers(1, 3), st.sampled_from(["poly", "ext", "trunc"]), st.integers(2, 3)), min_size=1, max_size=2
)


def _algebra(specs, p, cap):
    out = []
    for k, (d, kind, h) in enumerate(specs):
        if p != 2 and d % 2 and kind != "ext":
            kind = "ext"
        out.append(GeneratorSpec(f"g{k}", d, kind, h if kind == "trunc" else None))
    return GradedRingTable.from_algebra(GradedAlgebra.from_presentation(AlgebraPresentation(Fp(p), tuple(out)), cap))


@given(gens, st.sampled_from([2, 3]))
def test_b_squared_zero(specs, p):
    C = HochschildComplex(_algebra(specs, p, 5), 4)
    assert C.check_squares()


@given(gens, st.sampled_from([2, 3]))
def test_normalized_equals_unnormalized(specs, p):
    T = _algebra(specs, p, 4)
    cap = 3
    expected = hh_oracle(T.basis, T.products, {}, T.unit, cap, p)
    assert hh(T, cap).values == expected
