import pytest

from hyperforge import catalog, poly, quadext
from hyperforge.core import StructureError, check_axioms


def P(F, text):
    return poly.parse_poly(F, text)


def test_parse_and_format_round_trip(fan4):
    for text in ["X^2 + a*X - 1", "-X^2 - a", "X", "a", "X^3 + X + 1"]:
        p = P(fan4, text)
        assert P(fan4, poly.format_poly(fan4, p)) == p
    assert P(fan4, '["1", "0", "1"]') == P(fan4, "X^2 + 1")
    assert P(fan4, "X^2+a*X-1") == P(fan4, "X^2 + a*X - 1")
    with pytest.raises(StructureError):
        P(fan4, "X^2 + X^2")
    with pytest.raises(StructureError):
        P(fan4, "X + zz")


def test_box_product_matches_brute_force(Q2):
    f, g = P(Q2, "X + 1"), P(Q2, "X - 1")
    box = set(poly.box_mul(Q2, f, g).members(Q2))
    assert box == poly.brute_mul(Q2, f, g, 3)
    assert P(Q2, "X^2 - 1") in box and P(Q2, "X^2 + X - 1") in box


def test_degree_of_product(fan4):
    f, g = P(fan4, "X^2 + a"), P(fan4, "a*X - 1")
    assert poly.box_mul(fan4, f, g).degrees(fan4) == {3}


def test_roots_and_effective_witness(Q2):
    f = P(Q2, "X^2 - 1")
    assert poly.roots(Q2, f) == [Q2.index("1"), Q2.index("-1")]
    assert poly.effective_root_witness(Q2, f, "1") == P(Q2, "X + 1")
    assert poly.roots(Q2, P(Q2, "X^2 + 1")) == []


@pytest.mark.parametrize("name", ["Q2", "FAN4", "SQ7"])
def test_euclid_division_small(name):
    F = catalog.by_name(name)
    for f in poly.all_polys(F, 3):
        for g in [P(F, "X - 1"), P(F, "X^2 + 1")]:
            q, r = poly.euclid_divide(F, f, g)
            assert poly.division_holds(F, f, q, g, r)


def test_division_by_zero(Q2):
    with pytest.raises(StructureError):
        poly.euclid_divide(Q2, P(Q2, "X"), ())


def test_irreducibility(Q2, fan4):
    assert poly.is_irreducible(Q2, P(Q2, "X^2 + 1"))
    assert not poly.is_irreducible(Q2, P(Q2, "X^2 - 1"))
    assert poly.is_irreducible(fan4, P(fan4, "X^2 - a"))


def test_quotient_superfield_q2(Q2):
    Q, class_of = poly.quotient_superfield(Q2, P(Q2, "X^2 + 1"))
    assert Q.size == 9
    assert check_axioms(Q, "superfield").passed
    X = Q.index("X")
    p = (Q.index("1"), Q.zero, Q.one)
    assert Q.zero in poly.evaluate(Q, p, X)
    assert Q.index("X") in class_of(P(Q2, "X"))


def test_quotient_matches_formal_pairs(fan4):
    Q, _ = poly.quotient_superfield(fan4, P(fan4, "X^2 - a"))
    E = quadext.extend(fan4, "a")
    assert catalog.find_isomorphism(E.carrier, Q) is not None


def test_reducible_modulus_rejected(Q2):
    with pytest.raises(StructureError):
        poly.quotient_superfield(Q2, P(Q2, "X^2 - 1"))


def test_literal_coset_semantics_collapses(Q2):
    assert poly.literal_coset_collapse(Q2, P(Q2, "X^2 + 1")) == [(1,), (2,)]


def test_fan8_extension_breaks_associativity(fan8):
    # (xy)y is not inside x(yy) for x = X+1, y = X-1 modulo X^2 - a
    Q, _ = poly.quotient_superfield(fan8, P(fan8, "X^2 - a"))
    x, y = Q.index("X+1"), Q.index("X+-1")
    lhs = Q.prod_sets(Q.mul_set(x, y), {y})
    rhs = Q.prod_sets({x}, Q.mul_set(y, y))
    assert Q.index("-bX+ab") in lhs - rhs
    assert check_axioms(Q, "superfield").witness("mul.associativity") == ("X+1", "X+-1", "X+-1")


def test_principal_ideals():
    assert poly.principal_ideal_check(catalog.by_name("Zmod6"))["principal"]
