import numpy as np
import pytest

from hyperforge import catalog
from hyperforge.core import (
    Morphism, Structure, StructureError, characteristic, check_axioms, check_morphism,
    check_sip, classify_ideal, fold, fold_sets, identity, ideal_generate, is_ideal,
    quotient_by_ideal, separating_prime,
)

# Hand-written tables, independent of the catalog builders.
Q2_ADD = {
    ("0", "0"): {"0"}, ("0", "1"): {"1"}, ("0", "-1"): {"-1"},
    ("1", "1"): {"1"}, ("1", "-1"): {"0", "1", "-1"}, ("-1", "-1"): {"-1"},
}
K_ADD = {("0", "0"): {"0"}, ("0", "1"): {"1"}, ("1", "1"): {"0", "1"}}


def _cell(S, table, a, b):
    key = (a, b) if (a, b) in table else (b, a)
    return table[key]


def test_q2_matches_hand_table(Q2):
    for a in Q2.names:
        for b in Q2.names:
            got = {Q2.names[c] for c in Q2.add_set(Q2.index(a), Q2.index(b))}
            assert got == _cell(Q2, Q2_ADD, a, b)
    assert Q2.mul_set(Q2.index("-1"), Q2.index("-1")) == {Q2.index("1")}


def test_krasner_matches_hand_table(K):
    for (a, b), cell in K_ADD.items():
        assert {K.names[c] for c in K.add_set(K.index(a), K.index(b))} == cell


@pytest.mark.parametrize("name,kind", [
    ("K", "hyperfield"), ("Q2", "hyperfield"), ("H3", "hyperfield"), ("H5", "hyperfield"),
    ("FAN4", "hyperfield"), ("FAN8", "hyperfield"), ("Zmod6", "ring"), ("X2", "multiring"),
])
def test_catalog_kinds_pass(name, kind):
    assert check_axioms(catalog.by_name(name), kind).passed


def test_kaleidoscope_fails_hyperring_with_distributivity_witness():
    rep = check_axioms(catalog.by_name("X2"), "hyperring")
    assert not rep.passed
    assert rep.witness("full_distributivity") == ("2", "1", "-1")


def test_zmod6_has_zero_divisors():
    rep = check_axioms(catalog.by_name("Zmod6"), "superdomain")
    assert rep.failed("no_zero_divisors")


@pytest.mark.parametrize("name,char", [("K", 2), ("Q2", 0), ("H3", 2), ("H5", 2), ("Zmod6", 6),
                                       ("FAN4", 0)])
def test_characteristic(name, char):
    assert characteristic(catalog.by_name(name)) == char


def test_broken_commutativity_is_reported():
    Q = catalog.by_name("Q2")
    add = Q.add.copy()
    add[1, 2] = False
    add[1, 2, 1] = True
    S = Structure(Q.names, add, Q.mul, Q.neg, name="broken")
    rep = check_axioms(S, "multiring")
    assert rep.failed("add.commutativity")
    assert rep.witness("add.commutativity") == ("1", "-1")


def test_empty_cell_is_totality_violation():
    Q = catalog.by_name("Q2")
    add = Q.add.copy()
    add[1, 1] = False
    rep = check_axioms(Structure(Q.names, add, Q.mul, Q.neg), "multigroup")
    assert rep.failed("add.totality")


def test_unknown_kind():
    with pytest.raises(StructureError):
        check_axioms(catalog.by_name("K"), "semiring")


def test_fold_empty_and_order(Q2):
    assert fold(Q2, "sum", ()) == {Q2.zero}
    assert fold(Q2, "prod", ()) == {Q2.one}
    one, m1 = Q2.index("1"), Q2.index("-1")
    assert fold(Q2, "sum", (one, one, m1)) == fold(Q2, "sum", (m1, one, one))
    assert fold_sets(Q2, "sum", [{one}, {m1}]) == frozenset(range(3))


def test_morphism_checks():
    Z7, K = catalog.by_name("Zmod7"), catalog.by_name("K")
    f = Morphism(Z7, K, [0] + [1] * 6)
    assert check_morphism(f).passed
    Q2 = catalog.by_name("Q2")
    squares = {1, 2, 4}
    sign = Morphism(Z7, Q2, [0] + [1 if x in squares else 2 for x in range(1, 7)])
    rep = check_morphism(sign)
    assert rep.failed("add.preserved")
    assert identity(Q2).compose(identity(Q2)).as_dict() == {"0": "0", "1": "1", "-1": "-1"}


def test_ideals_of_zmod6():
    Z6 = catalog.by_name("Zmod6")
    I = ideal_generate(Z6, [2])
    assert I == {0, 2, 4}
    assert is_ideal(Z6, I)
    assert classify_ideal(Z6, I) == {"prime": True, "strongly_prime": True, "maximal": True}
    Q, pi = quotient_by_ideal(Z6, I)
    assert Q.size == 2 and check_axioms(Q, "ring").passed
    assert check_morphism(pi).passed
    assert not classify_ideal(Z6, {0})["prime"]


def test_separating_prime():
    Z6 = catalog.by_name("Zmod6")
    P = separating_prime(Z6, {0}, {1, 5})
    assert classify_ideal(Z6, P)["prime"]
    assert not P & {1, 5}


def test_sip(Q2, K):
    for S in (Q2, K, catalog.by_name("X2")):
        rep = check_sip(S, "mul")
        assert rep.passed
    assert check_sip(Q2, "mul").info["group"]
    assert not check_sip(Q2, "add").info["group"]


def test_structure_validation():
    with pytest.raises(StructureError):
        Structure([], np.zeros((0, 0, 0)), np.zeros((0, 0, 0)), [])
    with pytest.raises(StructureError):
        Structure(["a", "a"], np.ones((2, 2, 2)), np.ones((2, 2, 2)), [0, 1])
