from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from fqforge import construct as C
from fqforge.dehn import (
    AreaStatus, NonIsometricError, alternating_certificate, check_alternating_preconditions,
    check_composite_bounds, dehn_sample, min_area, null_words, transfer_certificate,
)
from fqforge.gog import GraphOfGroups, Vertex
from fqforge.oracles import FreeAbelianOracle, FreeOracle, Verdict
from fqforge.presentations import Presentation, commutator, exponent_sum, free_reduce, power

Z2 = Presentation.from_strings("Z2", ["a", "b"], ["[a,b]"])
Z2_ALT = Presentation.from_strings("Z2'", ["a", "b"], ["[a,b]", "[a^2,b]"])
C3 = Presentation.from_strings("C3", ["a"], ["a^3"])
F2 = Presentation("F2", ("a", "b"), ())
AMALGAM = C.free_amalgam_gog()
AP = C.flatten_gog(AMALGAM)  # L.a L.b R.c R.d


def test_commutator_area_one():
    res = min_area(Z2, Z2.word("[a,b]"))
    assert res.status is AreaStatus.FILLED and res.area == 1
    assert res.certificate.verify()


def test_square_commutator_area_four():
    res = min_area(Z2, Z2.word("[a^2,b^2]"))
    assert res.area == 4
    assert res.certificate.replay()[-1] == ()


def test_free_commutator_not_null():
    res = min_area(F2, F2.word("a b a^-1 b^-1"))
    assert res.status is AreaStatus.NOT_NULLHOMOTOPIC


def test_abelian_obstruction_and_budget():
    assert min_area(Z2, Z2.word("a b")).status is AreaStatus.NOT_NULLHOMOTOPIC
    res = min_area(Z2, Z2.word("[a^3,b^3]"), budget=50)
    assert res.status is AreaStatus.INCONCLUSIVE


def test_area_matches_brute_force_grid():
    """[a^p, b^q] in Z^2 bounds a p-by-q rectangle: area p q."""
    for p_, q_ in ((1, 2), (2, 1), (1, 3), (2, 2)):
        w = commutator(power((1,), p_), power((2,), q_))
        assert min_area(Z2, w).area == p_ * q_


@settings(max_examples=30)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5))
def test_certificates_replay(u):
    """u followed by the lattice path back to the origin is null in Z^2."""
    u = tuple(u)
    back = power((1,), -exponent_sum(u, 0)) + power((2,), -exponent_sum(u, 1))
    res = min_area(Z2, free_reduce(u + back))
    assert res.status is AreaStatus.FILLED
    cert = res.certificate
    assert cert.verify() and cert.area == len(cert.factors)
    assert cert.replay()[0] == free_reduce(u + back)


def test_transfer_of_rotated_word():
    w = Z2.word("[a^2,b]")
    res = min_area(Z2, w)
    rot = w[3:] + w[:3]
    moved = transfer_certificate(res.certificate, rot)
    assert moved.verify() and moved.area == res.area


def test_dehn_samples():
    s = dehn_sample(Z2, 8)
    assert s.complete
    assert s.f(4) == 1 and s.f(8) == 4
    assert min_area(Z2, s.witnesses[8]).area == 4
    c = dehn_sample(C3, 6)
    assert c.f(6) == 2 and c.witnesses[6] in (power((1,), 6), power((-1,), 6))
    f = dehn_sample(F2, 6)
    assert f.areas == [0] * 7 and f.counts[1:] == [0] * 6


def test_null_words_enumeration():
    o = FreeAbelianOracle(["a", "b"])
    for n in range(0, 7):
        brute = {w for w in product((1, -1, 2, -2), repeat=n)
                 if free_reduce(w) == w and o.equal(w) is Verdict.EQUAL}
        assert set(null_words(Z2, n, o)) == brute


def test_quasi_isometric_presentations_agree():
    """f1(n) <= K f2(Kn) + Kn and back, with f2 read at min(Kn, 8) (a lower value, so conservative)."""
    o = FreeAbelianOracle(["a", "b"])
    s1, s2 = dehn_sample(Z2, 8, o), dehn_sample(Z2_ALT, 8, o)
    assert s1.complete and s2.complete

    def least_k(a, b):
        for K in range(1, 9):
            if all(a.f(n) <= K * b.f(min(K * n, 8)) + K * n for n in range(9)):
                return K
        return None

    k12, k21 = least_k(s1, s2), least_k(s2, s1)
    assert (k12, k21) == (1, 1)
    assert s2.f(8) == 3 < s1.f(8)


# --- alternating certificates ---------------------------------------------------

def test_two_syllable_edge_relator():
    w = AP.word("L.a R.c^-1")
    cert = alternating_certificate(AMALGAM, w)
    assert cert.area == 1 and cert.alternating_length == 2
    assert cert.certificate.verify()


def test_three_syllables():
    w = AP.word("L.b L.a R.c^-1 L.b^-1")
    cert = alternating_certificate(AMALGAM, w)
    assert cert.alternating_length == 3
    assert cert.area == 1
    assert cert.area <= 3 * (0 + 4)
    assert cert.certificate.verify()


def test_single_vertex_word_is_vertex_fill():
    g = GraphOfGroups("Z2", (Vertex("v", Z2),))
    w = Z2.word("[a^2,b]")
    cert = alternating_certificate(g, w)
    assert cert.alternating_length == 1
    assert cert.area == min_area(Z2, w).area == 2


def test_loop_form_of_z2():
    g = C.z2_loop_gog()
    p = C.flatten_gog(g)
    cert = alternating_certificate(g, p.word("[a^2, t]"))
    assert cert.certificate.verify() and cert.area == 2


def test_lower_bound_consistency_on_sample():
    o = C.identification_oracle(AMALGAM)
    for n in (2, 4, 6):
        for w in list(null_words(AP, n, o))[:80]:
            alt = alternating_certificate(AMALGAM, w)
            exact = min_area(AP, w)
            assert exact.status is AreaStatus.FILLED
            assert exact.area <= alt.area


def test_composite_bounds_small():
    rep = check_composite_bounds(AMALGAM, 5)
    assert rep.ok and rep.rows
    rep = check_composite_bounds(C.z2_loop_gog(), 4)
    assert rep.ok
    g = GraphOfGroups("one", (Vertex("v", Z2),))
    rep = check_composite_bounds(g, 6)
    assert rep.ok
    s = rep.vertex_samples["v"]
    assert max(r.min_area for r in rep.rows if len(r.word) == 6) == s.f(6)


def test_baumslag_solitar_refused():
    with pytest.raises(NonIsometricError, match="generator"):
        check_alternating_preconditions(C.bs23_gog())
    w = C.flatten_gog(C.bs23_gog()).word("t^-1 a^2 t a^-3")
    with pytest.raises(NonIsometricError):
        alternating_certificate(C.bs23_gog(), w)
