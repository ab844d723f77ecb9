import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lsiverify.liealg import (CATALOG_IDS, CatalogError, DiffOp, L, Label, ResourceLimit,
                              StructureTable, build_representation, central_charge_table,
                              closure_check, commutator, compose, jacobi_check,
                              operator_jacobi, table_for, verify_dynamical_symmetry,
                              verify_matrix_central_charges, verify_structure)
from lsiverify.liealg.catalog import d, drop_param_terms, dynamical_operator, mutate, v
from lsiverify.liealg.tables import sch_rule
from lsiverify.suites import EXPECTED_MULTIPLIERS, STRUCTURE_MATRIX, SYMMETRY_LABELS

HALF = Fraction(1, 2)


def build(cid, dim=1, **kw):
    return build_representation(cid, dim, **kw)


def table(rep):
    return table_for(rep.catalog_id, rep.labels() + list(rep.central), rep.d)


# -- operator algebra ----------------------------------------------------------

def test_leibniz_normal_ordering():
    assert compose(d("t"), v("t")) == DiffOp.scalar(1) + compose(v("t"), d("t"))


def test_canonical_commutator():
    assert commutator(d("r"), v("r")) == DiffOp.scalar(1)
    assert commutator(d("r"), v("t")).is_zero()


SCH_LOG = build("sch", log=True)
GENS = [SCH_LOG.image(lab) for lab in SCH_LOG.labels()]
coeff = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def combos(draw):
    out = DiffOp.zero()
    for g in draw(st.lists(st.sampled_from(GENS), min_size=1, max_size=3)):
        out = out + g * draw(coeff)
    return out


@given(combos(), combos())
def test_commutator_is_antisymmetric(a, b):
    assert (commutator(a, b) + commutator(b, a)).is_zero()


@given(combos(), combos(), combos())
def test_operator_jacobi_identity(a, b, c):
    assert operator_jacobi(a, b, c).is_zero()


@given(combos(), combos(), combos())
def test_composition_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


# -- structure tables ----------------------------------------------------------

@pytest.mark.parametrize("cid,dim,kw", STRUCTURE_MATRIX,
                         ids=[f"{c}{d}" for c, d, _ in STRUCTURE_MATRIX])
def test_structure_table_matches(cid, dim, kw):
    rep = build(cid, dim, **kw)
    report = verify_structure(rep, table(rep))
    assert report.ok, report.to_text()


@pytest.mark.parametrize("cid,dim,kw", [
    ("sch", 3, {}), ("sv", 2, {"window": (-2, 2)}), ("av", 2, {"window": (-2, 2)}),
    ("sch", 1, {"log": True}), ("cga", 1, {"log": True, "gamma_param": True}),
    ("dual-sch", 1, {"log": True}), ("age", 1, {}), ("parabolic-N", 1, {}),
    ("log-dual-sch", 1, {"xipp": False}),
])
def test_additional_structure_tables(cid, dim, kw):
    rep = build(cid, dim, **kw)
    assert verify_structure(rep, table(rep)).ok


def test_exotic_central_bracket_coefficients():
    rep = build("ecga", 2)
    t = table(rep)
    theta = L("Theta")
    assert t.bracket(L("Y", 0, 1), L("Y", 0, 2)) == {theta: 1}
    assert t.bracket(L("Y", 1, 1), L("Y", -1, 2)) == {theta: -2}
    assert t.bracket(L("Y", -1, 2), L("Y", 1, 1)) == {theta: 2}


def test_dropping_mass_term_of_y_is_detected():
    rep = build("sch")
    bad = mutate(rep, L("Y", HALF), lambda op: drop_param_terms(op, "M"))
    report = verify_structure(bad, table(rep))
    assert not report.ok
    assert any("Y_1/2" in c.name for c in report.failures)


def test_unknown_catalog_id():
    with pytest.raises(CatalogError):
        build("nope")
    with pytest.raises(CatalogError):
        build("ecga", 1)


def test_every_catalog_id_builds():
    for cid in CATALOG_IDS:
        build(cid, 2 if cid == "ecga" else 1)


# -- Jacobi ----------------------------------------------------------------------

@pytest.mark.parametrize("cid,dim,kw", STRUCTURE_MATRIX,
                         ids=[f"{c}{d}" for c, d, _ in STRUCTURE_MATRIX])
def test_jacobi_holds(cid, dim, kw):
    rep = build(cid, dim, **kw)
    assert jacobi_check(table(rep)).ok


def test_two_central_charge_jacobi():
    report = jacobi_check(central_charge_table(range(-3, 4)))
    assert report.ok and len(report.checks) == 364


def test_corrupted_table_violates_jacobi():
    def bad_rule(a, b):
        if a.family == "X" and b.family == "Y":
            return {L("Y", a.index + b.index): a.index - b.index}
        return sch_rule(a, b)
    rep = build("sch")
    t = StructureTable("bad", rep.labels(), bad_rule)
    report = jacobi_check(t)
    assert not report.ok
    assert all("violation" in c.detail for c in report.failures)


def test_matrix_central_charges():
    report = verify_matrix_central_charges(range(-2, 3))
    assert report.ok and len(report.checks) == 45


def test_window_resource_limit():
    with pytest.raises(ResourceLimit):
        verify_matrix_central_charges(range(-100, 101))


def test_table_json_round_trip():
    rep = build("sch")
    t = table(rep)
    back = StructureTable.from_json(t.to_json())
    assert back.brackets == t.brackets
    json.loads(t.to_json())


def test_label_parse_round_trip():
    for lab in (L("X", -1), L("Y", HALF), L("Y", -1, 2), L("R", 0, 1, 2), L("N"), L("Vp")):
        assert Label.parse(str(lab)) == lab


# -- closure and dynamical symmetry -----------------------------------------------

@pytest.mark.parametrize("cid,dim", [("sch", 1), ("cga", 1), ("ecga", 2), ("dual-cga", 1)])
def test_commutators_close(cid, dim):
    assert closure_check(build(cid, dim)).ok


def test_dynamical_symmetry_multipliers():
    report = verify_dynamical_symmetry(build("dual-cga"), labels=SYMMETRY_LABELS)
    assert report.ok
    assert report.data == EXPECTED_MULTIPLIERS


def test_non_symmetry_leaves_residual():
    report = verify_dynamical_symmetry(build("dual-cga"), S=dynamical_operator() + v("t"),
                                       labels=[L("X", 1)])
    assert not report.ok
