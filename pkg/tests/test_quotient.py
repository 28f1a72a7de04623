"""Quotient engine against the naive closure oracle."""

import random

import pytest

import oracle
from preproj.field import GF, QQ
from preproj.freealg import FreeElem, parse_element
from preproj.presentations import L_algebra, canonical_star, deformed, preprojective
from preproj.quiver import build_dynkin_quiver
from preproj.quotient import CapExceeded, NotAdmissible, Presentation, build_quotient
from preproj.structure import cartan, loewy_length

SMALL = ["A2", "A3", "A4", "A5", "D4", "D5", "D6", "L1", "L2", "L3"]
STARS = ["D4", "D5", "D6", "L2", "L3"]


def _oracle_of(pres):
    q, rels = oracle.from_presentation(pres)
    C, N = oracle.closure(q, rels, pres.field.characteristic)
    return q, rels, C, N


# [DERIVED] independent mesh relations, not read from the package
@pytest.mark.parametrize("t", SMALL)
def test_preprojective_matches_oracle(t, field):
    q = oracle.double_dynkin(t[0], int(t[1:]))
    C, N = oracle.closure(q, oracle.mesh(q), field.characteristic)
    A = build_quotient(preprojective(t, field))
    assert cartan(A) == C
    assert loewy_length(A) == N
    assert A.hilbert_series_by_degree() == oracle.graded_dims(q, oracle.mesh(q), field.characteristic, N)


@pytest.mark.parametrize("t", STARS)
def test_star_matches_oracle(t, field):
    P = canonical_star(t, field)
    q, rels, C, N = _oracle_of(P)
    A = build_quotient(P)
    assert cartan(A) == C
    assert loewy_length(A) == N
    assert A.hilbert_series_by_degree() == oracle.graded_dims(q, rels, field.characteristic, N)


@pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (3, 2)])
def test_L_family_matches_oracle(n, r):
    P = L_algebra(n, r, GF(2))
    _, _, C, _ = _oracle_of(P)
    assert cartan(build_quotient(P)) == C


def test_inhomogeneous_deformation_matches_oracle():
    P = deformed("D5", "x*y*x + (x*y)^2", GF(3))
    _, _, C, N = _oracle_of(P)
    A = build_quotient(P)
    assert cartan(A) == C and loewy_length(A) == N


def test_e6_matches_oracle():
    q = oracle.double_dynkin("E", 6)
    C, N = oracle.closure(q, oracle.mesh(q), 3, start=8)
    A = build_quotient(preprojective("E6", GF(3)))
    assert cartan(A) == C and loewy_length(A) == N == 11


# [TRIVIAL] dim P(t) = n h (h+1) / 6 with h the Coxeter number
@pytest.mark.parametrize("t,h", [("A3", 4), ("A5", 6), ("D4", 6), ("D6", 10), ("E6", 12),
                                 ("E7", 18)])
def test_dimension_formula(t, h):
    n = int(t[1:])
    assert build_quotient(preprojective(t, GF(2))).dimension == n * h * (h + 1) // 6


@pytest.mark.parametrize("make", [lambda F: preprojective("D5", F), lambda F: canonical_star("D4", F),
                                  lambda F: canonical_star("L3", F)])
def test_relations_vanish_and_associative(make, field):
    P = make(field)
    A = build_quotient(P)
    for r in P.relations:
        assert A.nf(r) == {}
    rng = random.Random(3)
    n = A.dimension
    for _ in range(300):
        i, j, k = (rng.randrange(n) for _ in range(3))
        u, v, w = A.unit(i), A.unit(j), A.unit(k)
        assert A.mul(A.mul(u, v), w) == A.mul(u, A.mul(v, w))


def test_product_agrees_with_normal_form(field):
    A = build_quotient(canonical_star("D5", field))
    rng = random.Random(0)
    for _ in range(200):
        i, j = rng.randrange(A.dimension), rng.randrange(A.dimension)
        expected = A.nf(A.element(A.unit(i)) * A.element(A.unit(j)))
        assert A.product(i, j) == expected


def test_basis_is_prefix_closed():
    A = build_quotient(preprojective("D6", GF(2)))
    for p in A.basis:
        if p[0] >= 0 and len(p) > 1:
            assert p[:-1] in A.index


def test_cap_independence():
    P = canonical_star("D5", QQ)
    A = build_quotient(P)
    N = max(A.deg) + 2
    B = build_quotient(P.with_cap(N))
    C = build_quotient(P.with_cap(N + 2))
    assert B.basis == C.basis == A.basis
    assert B.ract == C.ract


def test_fixed_cap_too_small():
    with pytest.raises(CapExceeded):
        build_quotient(preprojective("D4", GF(2)).with_cap(4))


def test_not_finite_dimensional_is_reported():
    q = build_dynkin_quiver("A3")
    r = parse_element("a0*abar0", q, GF(2))
    with pytest.raises(CapExceeded):
        build_quotient(Presentation(q, GF(2), [r]), max_words=20_000)


def test_admissibility_checks():
    q = build_dynkin_quiver("A2")
    F = GF(3)
    with pytest.raises(NotAdmissible):
        Presentation(q, F, [parse_element("a0", q, F)])
    with pytest.raises(NotAdmissible):
        Presentation(q, F, [parse_element("a0*abar0 + abar0*a0", q, F)])


def test_text_roundtrip_and_digest():
    from preproj import dsl
    P = canonical_star("E6", GF(3))
    Q = dsl.parse_presentation(P.text(), GF(3))
    assert Q.text() == P.text()
    assert Q.digest() == P.digest()
    assert P.digest() != preprojective("E6", GF(3)).digest()


def test_format_and_element_roundtrip():
    A = build_quotient(preprojective("A3", QQ))
    for k in range(A.dimension):
        x = A.element(A.unit(k))
        assert A.nf(x) == A.unit(k)


def test_field_mismatch_rejected():
    A = build_quotient(preprojective("A2", GF(2)))
    x = FreeElem.arrow(A.quiver, GF(3), "a0")
    with pytest.raises(ValueError):
        A.nf(x)
